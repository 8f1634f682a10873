//! Train briefly, save the networks, load them back and schedule greedily.

use std::sync::Arc;

use fjsp::agent::{greedy_rollout, train, Checkpoint, TrainConfig};
use fjsp::generate::{generate, GenConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let inst = Arc::new(generate(&GenConfig::tiny(), &mut ChaCha8Rng::seed_from_u64(2)));
    let cfg = TrainConfig { max_episodes: 40, time_limit: None, ..TrainConfig::default() };
    let out = train(inst.clone(), cfg, 5).unwrap();
    println!("trained {} iterations, greedy makespan {}", out.iterations, out.greedy.makespan());

    let dir = std::env::temp_dir().join("fjsp-checkpoint-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("checkpoint.txt");
    out.checkpoint().save(&path).unwrap();
    println!("saved {} ({} actor + {} critic parameters)", path.display(), out.policy.mlp.num_params(), out.value.mlp.num_params());

    let loaded = Checkpoint::load(&path).unwrap();
    let again = greedy_rollout(&loaded.policy, &inst).unwrap();
    println!("reloaded policy: makespan {}", again.makespan());
    assert_eq!(again.schedule, out.greedy.schedule);

    let text = std::fs::read_to_string(&path).unwrap();
    let truncated: String = text.lines().take(20).collect::<Vec<_>>().join("\n");
    match Checkpoint::from_text(&truncated) {
        Err(e) => println!("truncated file rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
