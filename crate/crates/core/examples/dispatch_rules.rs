//! Roll out each of the twelve rule pairs and show the first decision each makes.
//!
//!     cargo run --example dispatch_rules -- [instance-file]

use std::sync::Arc;

use fjsp::dispatch::{priority_value, resolve};
use fjsp::generate::{generate, GenConfig};
use fjsp::{fixed_action_rollout, Action, JobRule, RawInstance, SimState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let inst: RawInstance = match std::env::args().nth(1) {
        Some(p) => RawInstance::from_file(&p).unwrap_or_else(|e| panic!("{p}: {e}")),
        None => generate(&GenConfig::mk01_like(), &mut ChaCha8Rng::seed_from_u64(4)),
    };
    let inst = Arc::new(inst);
    let start = SimState::new(inst.clone());

    println!("priority values at t=0 (job: value)");
    for rule in JobRule::ALL {
        let vals: Vec<String> = start
            .assignable_jobs()
            .map(|j| format!("{j}:{:.2}", priority_value(rule, &start, j).unwrap()))
            .collect();
        println!("  {:<9} {}", rule.name(), vals.join(" "));
    }

    println!("\n{:<6} {:<9} {:<4} {:>10} {:>9}", "action", "job", "mach", "first pick", "makespan");
    for a in Action::all() {
        let (jr, mr) = a.rules();
        let (j, m) = resolve(a, &start).unwrap();
        let ep = fixed_action_rollout(&inst, a).unwrap();
        println!("{:<6} {:<9} {:<4} {:>10} {:>9}", a.code(), jr.name(), mr.name(), format!("J{j}/M{m}"), ep.makespan());
    }
}
