//! Check schedules against an instance: one produced by a rule, and one
//! with two faults planted in it.

use std::sync::Arc;

use fjsp::{fixed_action_rollout, parse_instance, validate, Action, Schedule};

fn main() {
    let inst = Arc::new(parse_instance("2 2\n2 2 1 3 2 4 1 1 2\n1 1 1 5\n").unwrap());
    let good = fixed_action_rollout(&inst, Action::new(0).unwrap()).unwrap().schedule;
    let verdict = validate(&inst, &good);
    println!("rule schedule (makespan {}): {}", good.makespan, if verdict.is_valid() { "valid" } else { "INVALID" });

    let mut entries = good.entries.clone();
    entries[0].end += 1; // stretched
    entries.pop(); // lost an operation
    let broken = Schedule::from_entries(entries);
    let verdict = validate(&inst, &broken);
    println!("tampered schedule: {} violation(s)", verdict.violations.len());
    for v in &verdict.violations {
        println!("  {v}");
    }
    assert!(!verdict.is_valid());

    println!("\nschedule csv:\n{}", good.to_csv_string());
    let back = Schedule::read_csv(good.to_csv_string().as_bytes()).unwrap();
    assert_eq!(back, good);
}
