//! Prioritized replay: transitions with larger |advantage| are drawn more
//! often, and importance weights undo that bias as beta rises to 1.

use fjsp::agent::replay::{annealed_beta, ReplayMemory, Transition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut memory = ReplayMemory::new();
    for (i, adv) in [0.0, 0.5, -1.0, 2.0, -4.0].into_iter().enumerate() {
        let mut t = Transition {
            state: vec![i as f64],
            action: i,
            reward: -1,
            action_prob: 1.0 / 12.0,
            discounted_return: 0.0,
            advantage: 0.0,
            priority: 0.0,
        };
        t.set_advantage(adv);
        memory.push(t);
    }

    let alpha = 0.6;
    let probs = memory.probabilities(alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = [0usize; 5];
    for _ in 0..2000 {
        for i in memory.sample(5, alpha, 0.4, &mut rng).unwrap().indices {
            counts[i] += 1;
        }
    }
    println!("{:>9} {:>8} {:>9} {:>9}", "advantage", "P(i)", "observed", "w(b=0.4)");
    let batch = memory.sample(5, alpha, 0.4, &mut rng).unwrap();
    for (i, t) in memory.items().iter().enumerate() {
        let w = batch.indices.iter().position(|&k| k == i).map(|p| format!("{:.3}", batch.weights[p]));
        println!(
            "{:>9.1} {:>8.4} {:>9.4} {:>9}",
            t.advantage,
            probs[i],
            counts[i] as f64 / 10_000.0,
            w.unwrap_or_else(|| "-".into())
        );
    }

    for it in [0, 2000, 4000, 8000] {
        println!("beta at iteration {it}: {:.2}", annealed_beta(0.4, 1.0, it, 8000));
    }
}
