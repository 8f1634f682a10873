mod common;

use common::grad::{actor_trial, critic_trial};
use fjsp::agent::mlp::{softmax, Mlp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn actor_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut trials = 0;
    while trials < 120 {
        if let Some(e) = actor_trial(&mut rng) {
            assert!(e < 1e-4, "trial {trials}: relative error {e}");
            trials += 1;
        }
    }
}

#[test]
fn critic_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut trials = 0;
    while trials < 120 {
        if let Some(e) = critic_trial(&mut rng) {
            assert!(e < 1e-4, "trial {trials}: relative error {e}");
            trials += 1;
        }
    }
}

#[test]
fn softmax_outputs_are_distributions() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let net = Mlp::init(6, 6, 12, &mut rng);
        let s: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..1.0)).collect();
        let mut logits = net.forward(&s).out;
        let p = softmax(&logits);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(p.iter().all(|&x| x >= 0.0));
        let k = rng.gen_range(0..12);
        logits[k] += 0.5;
        assert!(softmax(&logits)[k] > p[k]);
    }
}
