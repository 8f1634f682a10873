//! Drive the simulator by hand: assign, advance the clock, release.
//!
//! Every transition charges negative area (work started plus idle time
//! passed). Summed over the episode it equals -machines * makespan.

use std::sync::Arc;

use fjsp::{parse_instance, SimState};

fn main() {
    let inst = Arc::new(parse_instance("2 2\n2 2 1 3 2 4 1 1 2\n1 1 1 5\n").unwrap());
    let mut sim = SimState::new(inst.clone());
    let mut total = 0i64;

    // Job 0 takes the slower machine 1 so job 1 can start on machine 0 at once.
    sim.assign(0, 1).unwrap();
    let r = sim.collect_reward();
    total += r;
    println!("t={} assign job 0 -> M1 for 4, reward {r}", sim.clock());

    while !sim.is_done() {
        let next = sim.assignable_jobs().next();
        if let Some(job) = next {
            let (machine, d) = sim.idle_candidates(job).into_iter().min_by_key(|&(m, d)| (d, m)).unwrap();
            sim.assign(job, machine).unwrap();
            let r = sim.collect_reward();
            total += r;
            println!("t={} assign job {job} -> M{machine} for {d}, reward {r}", sim.clock());
            continue;
        }
        let dt = sim.advance_time().unwrap();
        let freed = sim.release_machines();
        let r = sim.collect_reward();
        total += r;
        println!("t={} (+{dt}) released {freed:?}, reward {r}", sim.clock());
    }

    let makespan = sim.makespan().unwrap();
    println!("makespan {makespan}, total reward {total}, idle time {}", sim.vacancy_total());
    assert_eq!(total, -(inst.num_machines as i64) * makespan as i64);
    for e in sim.schedule().unwrap().entries {
        println!("  job {} stage {} on M{} [{}, {})", e.job, e.stage, e.machine, e.start, e.end);
    }
}
