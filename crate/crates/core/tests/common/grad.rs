//! Finite-difference checks of the PPO losses against a loss recomputed
//! from the forward pass.

use fjsp::agent::mlp::{softmax, Mlp};
use fjsp::agent::{actor_loss, critic_loss, ActorSample, CriticSample};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const EPS: f64 = 0.2;
pub const H: f64 = 1e-5;

pub struct ActorCase {
    pub states: Vec<Vec<f64>>,
    pub actions: Vec<usize>,
    pub old: Vec<f64>,
    pub adv: Vec<f64>,
    pub w: Vec<f64>,
}

pub fn reference_actor(net: &Mlp, c: &ActorCase) -> f64 {
    let b = c.states.len() as f64;
    let mut total = 0.0;
    for i in 0..c.states.len() {
        let p = softmax(&net.forward(&c.states[i]).out);
        let r = p[c.actions[i]] / c.old[i];
        let clipped = r.clamp(1.0 - EPS, 1.0 + EPS);
        total += c.w[i] * (r * c.adv[i]).min(clipped * c.adv[i]);
    }
    -total / b
}

pub fn reference_critic(net: &Mlp, states: &[Vec<f64>], targets: &[f64], w: &[f64]) -> f64 {
    let b = states.len() as f64;
    states
        .iter()
        .zip(targets)
        .zip(w)
        .map(|((s, t), wi)| wi * (t - net.forward(s).out[0]).powi(2))
        .sum::<f64>()
        / b
}

pub fn fd(net: &Mlp, f: impl Fn(&Mlp) -> f64) -> Vec<f64> {
    (0..net.num_params())
        .map(|i| {
            let mut p = net.clone();
            p.params_mut()[i] += H;
            let mut m = net.clone();
            m.params_mut()[i] -= H;
            (f(&p) - f(&m)) / (2.0 * H)
        })
        .collect()
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = na.max(nb);
    if scale < 1e-10 {
        diff
    } else {
        diff / scale
    }
}

/// True if a pre-activation sits so close to the ReLU kink that a central
/// difference would straddle it.
pub fn near_kink(net: &Mlp, states: &[Vec<f64>]) -> bool {
    let n = net.input_dim();
    let h = net.hidden_dim();
    let p = net.params();
    states.iter().any(|s| {
        (0..h).any(|k| {
            let z: f64 = p[h * n + k] + (0..n).map(|i| p[k * n + i] * s[i]).sum::<f64>();
            z.abs() < 1e-3
        })
    })
}

pub fn random_actor_case(rng: &mut ChaCha8Rng, net: &Mlp) -> ActorCase {
    let n = net.input_dim();
    let b = rng.gen_range(1..6);
    let mut c = ActorCase { states: vec![], actions: vec![], old: vec![], adv: vec![], w: vec![] };
    while c.states.len() < b {
        let s: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let a = rng.gen_range(0..net.output_dim());
        let p = softmax(&net.forward(&s).out)[a];
        let old = p * rng.gen_range(0.6..1.6);
        let r = p / old;
        if (r - (1.0 - EPS)).abs() < 1e-3 || (r - (1.0 + EPS)).abs() < 1e-3 {
            continue;
        }
        c.states.push(s);
        c.actions.push(a);
        c.old.push(old);
        c.adv.push(rng.gen_range(-2.0..2.0));
        c.w.push(rng.gen_range(0.1..1.0));
    }
    c
}

/// One random actor-loss trial: relative gradient error, or `None` when the
/// draw sits on a ReLU kink.
pub fn actor_trial(rng: &mut ChaCha8Rng) -> Option<f64> {
    let n = 2 * rng.gen_range(1..5);
    let net = Mlp::init(n, n, 12, rng);
    let case = random_actor_case(rng, &net);
    if near_kink(&net, &case.states) {
        return None;
    }
    let batch: Vec<ActorSample<'_>> = (0..case.states.len())
        .map(|i| ActorSample {
            state: &case.states[i],
            action: case.actions[i],
            old_prob: case.old[i],
            advantage: case.adv[i],
            weight: case.w[i],
        })
        .collect();
    let (loss, grad) = actor_loss(&net, &batch, EPS);
    let reference = reference_actor(&net, &case);
    assert!((loss - reference).abs() < 1e-12, "loss {loss} vs {reference}");
    Some(rel_err(&grad, &fd(&net, |m| reference_actor(m, &case))))
}

pub fn critic_trial(rng: &mut ChaCha8Rng) -> Option<f64> {
    let n = 2 * rng.gen_range(1..5);
    let net = Mlp::init(n, n, 1, rng);
    let b = rng.gen_range(1..6);
    let states: Vec<Vec<f64>> = (0..b).map(|_| (0..n).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    if near_kink(&net, &states) {
        return None;
    }
    let targets: Vec<f64> = (0..b).map(|_| rng.gen_range(-50.0..0.0)).collect();
    let w: Vec<f64> = (0..b).map(|_| rng.gen_range(0.1..1.0)).collect();
    let batch: Vec<CriticSample<'_>> =
        (0..b).map(|i| CriticSample { state: &states[i], target: targets[i], weight: w[i] }).collect();
    let (loss, grad) = critic_loss(&net, &batch);
    let reference = reference_critic(&net, &states, &targets, &w);
    assert!((loss - reference).abs() < 1e-9 * reference.abs().max(1.0));
    Some(rel_err(&grad, &fd(&net, |m| reference_critic(m, &states, &targets, &w))))
}
