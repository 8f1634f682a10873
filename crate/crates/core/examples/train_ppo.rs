//! Train a policy on one instance and compare it with the 12 constant rules.
//!
//! cargo run --release --example train_ppo -- [instance-file] [iterations] [seed]
//!
//! Without a file, an instance with MK01's dimensions is generated.

use std::sync::Arc;
use std::time::Instant;

use fjsp::agent::{train, TrainConfig};
use fjsp::generate::{generate, GenConfig};
use fjsp::{fixed_action_rollout, validate, Action, RawInstance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let instance = match args.first().filter(|a| !a.chars().all(|c| c.is_ascii_digit())) {
        Some(path) => RawInstance::from_file(path)?,
        None => generate(&GenConfig::mk01_like(), &mut ChaCha8Rng::seed_from_u64(1)),
    };
    let numeric: Vec<u64> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let iterations = numeric.first().copied().unwrap_or(200) as usize;
    let seed = numeric.get(1).copied().unwrap_or(0);
    let instance = Arc::new(instance);

    let mut best_fixed = u64::MAX;
    for a in Action::all() {
        let ep = fixed_action_rollout(&instance, a)?;
        println!("constant {a:<14} makespan {}", ep.makespan());
        best_fixed = best_fixed.min(ep.makespan());
    }

    let config = TrainConfig { max_episodes: iterations, ..TrainConfig::default() };
    let started = Instant::now();
    let out = train(instance.clone(), config, seed)?;
    for r in out.log.records.iter().step_by((iterations / 10).max(1)) {
        println!(
            "iter {:>4}  mean {:>7.2}  best {:>4}  actor {:>9.5}  critic {:>10.3}",
            r.iteration, r.mean_makespan, r.best_makespan, r.actor_loss, r.critic_loss
        );
    }
    let verdict = validate(&instance, &out.greedy.schedule);
    println!(
        "{} iterations in {:.1}s ({:?}); greedy {} ({}), best seen {}, best constant rule {}",
        out.iterations,
        started.elapsed().as_secs_f64(),
        out.stop,
        out.greedy.makespan(),
        verdict,
        out.best_schedule.makespan,
        best_fixed
    );
    Ok(())
}
