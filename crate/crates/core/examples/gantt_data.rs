//! Turn a schedule into per-machine lanes with busy bars and idle gaps.

use std::sync::Arc;

use fjsp::gantt::Gantt;
use fjsp::generate::{generate, GenConfig};
use fjsp::{fixed_action_rollout, Action, JobRule, MachineRule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let inst = Arc::new(generate(&GenConfig::tiny(), &mut ChaCha8Rng::seed_from_u64(3)));
    let ep = fixed_action_rollout(&inst, Action::from_rules(JobRule::Mwkr, MachineRule::Spt)).unwrap();
    let g = Gantt::from_schedule(&ep.schedule, Some(inst.num_machines));

    let scale = 60.0 / g.makespan.max(1) as f64;
    for (lane, u) in g.lanes.iter().zip(g.utilization()) {
        let mut row = vec!['.'; 60];
        for b in &lane.bars {
            let (s, e) = ((b.start as f64 * scale) as usize, (b.end as f64 * scale) as usize);
            for c in row.iter_mut().take(e.max(s + 1).min(60)).skip(s) {
                *c = char::from_digit(b.job as u32 % 36, 36).unwrap();
            }
        }
        println!("M{:<2} {} {:>5.1}%", lane.machine, row.iter().collect::<String>(), 100.0 * u);
    }
    println!("makespan {}, busy {}, idle {}", g.makespan, g.busy_total, g.vacancy_total);
    assert_eq!(g.busy_total + g.vacancy_total, g.makespan * inst.num_machines as u64);
    println!("\n{}", g.to_json_string());
}
