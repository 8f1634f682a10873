//! Save a run mid-schedule, restore it, and finish both copies.

use std::sync::Arc;

use fjsp::dispatch::resolve;
use fjsp::{Action, JobRule, MachineRule, SimState, StateSnapshot};

fn finish(mut sim: SimState, action: Action) -> u64 {
    while !sim.is_done() {
        let (j, m) = resolve(action, &sim).unwrap();
        sim.assign(j, m).unwrap();
        sim.advance_to_decision().unwrap();
    }
    sim.makespan().unwrap()
}

fn main() {
    let inst = Arc::new(fjsp::parse_instance("3 2\n2 2 1 2 2 3 1 2 4\n2 1 1 3 1 2 2\n1 2 1 5 2 1\n").unwrap());
    let action = Action::from_rules(JobRule::Mwkr, MachineRule::Spt);

    let mut sim = SimState::new(inst);
    for _ in 0..2 {
        let (j, m) = resolve(action, &sim).unwrap();
        sim.assign(j, m).unwrap();
        sim.advance_to_decision().unwrap();
    }
    let text = sim.snapshot().to_text();
    println!("snapshot at t={} is {} bytes of json", sim.clock(), text.len());

    let snap = StateSnapshot::from_text(&text).unwrap();
    let restored = SimState::restore(&snap).unwrap();
    let a = finish(sim, action);
    let b = finish(restored, action);
    println!("original finishes at {a}, restored copy at {b}");
    assert_eq!(a, b);

    let mut bad = snap.clone();
    bad.version = 99;
    match SimState::restore(&bad) {
        Err(e) => println!("newer version rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
