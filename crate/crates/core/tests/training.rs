mod common;

use std::sync::Arc;
use std::time::Duration;

use common::gen;
use fjsp::agent::{greedy_rollout, sampled_rollout, train, Checkpoint, StopReason, TrainConfig};
use fjsp::generate::GenConfig;
use fjsp::{fixed_action_rollout, parse_instance, validate, Action};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(iters: usize) -> TrainConfig {
    TrainConfig { max_episodes: iters, time_limit: None, ..TrainConfig::default() }
}

#[test]
fn trained_policy_beats_its_own_samples_and_the_rules() {
    let inst = gen(&GenConfig::mk01_like(), 21);
    let out = train(inst.clone(), config(300), 3).unwrap();
    assert!(validate(&inst, &out.greedy.schedule).is_valid());
    assert!(validate(&inst, &out.best_schedule).is_valid());

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let samples: Vec<u64> =
        (0..100).map(|_| sampled_rollout(&out.policy, &inst, &mut rng).unwrap().makespan()).collect();
    let mean = samples.iter().sum::<u64>() as f64 / samples.len() as f64;
    assert!(out.greedy.makespan() as f64 <= mean, "greedy {} vs sampled mean {mean}", out.greedy.makespan());

    let best_fixed = Action::all().map(|a| fixed_action_rollout(&inst, a).unwrap().makespan()).min().unwrap();
    assert!(out.greedy.makespan() as f64 <= 1.10 * best_fixed as f64);
    assert!(out.best_schedule.makespan <= out.greedy.makespan());
}

#[test]
fn same_seed_same_log() {
    let inst = gen(&GenConfig::mk01_like(), 5);
    let a = train(inst.clone(), config(25), 11).unwrap();
    let b = train(inst.clone(), config(25), 11).unwrap();
    assert_eq!(a.log.to_csv_without_timing(), b.log.to_csv_without_timing());
    assert_eq!(a.policy, b.policy);
    let c = train(inst, config(25), 12).unwrap();
    assert_ne!(a.log.to_csv_without_timing(), c.log.to_csv_without_timing());
}

#[test]
fn checkpoint_reloads_to_the_same_greedy_schedule() {
    let inst = gen(&GenConfig::tiny(), 8);
    let out = train(inst.clone(), config(10), 0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.txt");
    out.checkpoint().save(&path).unwrap();
    let back = Checkpoint::load(&path).unwrap();
    assert_eq!(back.policy, out.policy);
    assert_eq!(greedy_rollout(&back.policy, &inst).unwrap().schedule, out.greedy.schedule);
}

#[test]
fn converges_on_a_single_outcome_instance() {
    let inst = Arc::new(parse_instance("1 1\n1 1 1 7\n").unwrap());
    let cfg = TrainConfig { convergence_after: 5, convergence_window: 3, ..config(100) };
    let out = train(inst, cfg, 0).unwrap();
    assert_eq!(out.stop, StopReason::Converged);
    assert_eq!(out.iterations, 6);
    assert_eq!(out.best_schedule.makespan, 7);
}

#[test]
fn wall_clock_limit_stops_training() {
    let inst = gen(&GenConfig::mk01_like(), 2);
    let cfg = TrainConfig { time_limit: Some(Duration::ZERO), ..config(1000) };
    let out = train(inst, cfg, 0).unwrap();
    assert_eq!(out.stop, StopReason::TimeLimit);
    assert_eq!(out.iterations, 1);
}

#[test]
fn greedy_rejects_a_policy_for_another_instance() {
    let inst = gen(&GenConfig::tiny(), 1);
    let other = gen(&GenConfig::mk01_like(), 1);
    let out = train(other, config(1), 0).unwrap();
    assert!(greedy_rollout(&out.policy, &inst).is_err());
}
