//! The RL environment: observe a state vector, pick an action, get a reward.
//! Here the agent is a uniform random policy.

use std::sync::Arc;

use fjsp::{parse_instance, Action, FjspEnv, NUM_ACTIONS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let inst = Arc::new(parse_instance("3 2\n2 2 1 2 2 3 1 2 4\n2 1 1 3 1 2 2\n1 2 1 5 2 1\n").unwrap());
    let mut env = FjspEnv::new(inst.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    let mut state = env.reset();
    println!("state length {} = {} assignable flags + {} progress ratios", env.state_len(), inst.num_jobs, inst.num_jobs);
    let mut total = 0;
    while !env.is_done() {
        let a = Action::new(rng.gen_range(0..NUM_ACTIONS)).unwrap();
        let step = env.step(a).unwrap();
        let (jr, mr) = a.rules();
        println!("{:?} --{}/{}--> reward {:>3}", state.as_slice(), jr.name(), mr.name(), step.reward);
        total += step.reward;
        state = step.state;
    }
    let makespan = env.schedule().unwrap().makespan;
    println!("done: makespan {makespan}, return {total} = -{} * {makespan}", inst.num_machines);
    assert!(env.step(Action::new(0).unwrap()).is_err());
}
