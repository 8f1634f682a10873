//! Clipped-surrogate actor loss and weighted squared-error critic loss, each
//! returned together with its exact gradient.

use rand::Rng;

use super::mlp::{softmax, Mlp};
use super::AgentError;
use crate::dispatch::NUM_ACTIONS;

/// Actor: `softmax(mlp(state))` over the 12 rule pairs. The hidden width
/// equals the state length.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyNet {
    pub mlp: Mlp,
}

/// Critic with the same topology and a scalar output.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueNet {
    pub mlp: Mlp,
}

impl PolicyNet {
    pub fn new<R: Rng + ?Sized>(state_len: usize, rng: &mut R) -> Self {
        Self { mlp: Mlp::init(state_len, state_len, NUM_ACTIONS, rng) }
    }

    pub fn zeros(state_len: usize) -> Self {
        Self { mlp: Mlp::zeros(state_len, state_len, NUM_ACTIONS) }
    }

    pub fn probs(&self, state: &[f64]) -> Result<Vec<f64>, AgentError> {
        check_dim(&self.mlp, state)?;
        Ok(softmax(&self.mlp.forward(state).out))
    }
}

impl ValueNet {
    pub fn new<R: Rng + ?Sized>(state_len: usize, rng: &mut R) -> Self {
        Self { mlp: Mlp::init(state_len, state_len, 1, rng) }
    }

    pub fn value(&self, state: &[f64]) -> Result<f64, AgentError> {
        check_dim(&self.mlp, state)?;
        Ok(self.mlp.forward(state).out[0])
    }
}

fn check_dim(mlp: &Mlp, state: &[f64]) -> Result<(), AgentError> {
    if state.len() != mlp.input_dim() {
        return Err(AgentError::DimensionMismatch { expected: mlp.input_dim(), found: state.len() });
    }
    Ok(())
}

/// `min(r * A, clip(r, 1 - eps, 1 + eps) * A)`.
pub fn clipped_objective(ratio: f64, advantage: f64, eps: f64) -> f64 {
    (ratio * advantage).min(ratio.clamp(1.0 - eps, 1.0 + eps) * advantage)
}

#[derive(Debug, Clone, Copy)]
pub struct ActorSample<'a> {
    pub state: &'a [f64],
    pub action: usize,
    /// Probability of `action` under the behaviour policy.
    pub old_prob: f64,
    pub advantage: f64,
    /// Importance weight, 1 for uniform replay.
    pub weight: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct CriticSample<'a> {
    pub state: &'a [f64],
    pub target: f64,
    pub weight: f64,
}

/// Negative mean weighted clipped objective and its gradient.
pub fn actor_loss(policy: &Mlp, batch: &[ActorSample<'_>], eps: f64) -> (f64, Vec<f64>) {
    let mut grad = vec![0.0; policy.num_params()];
    if batch.is_empty() {
        return (0.0, grad);
    }
    let scale = 1.0 / batch.len() as f64;
    let mut loss = 0.0;
    let mut d_logits = vec![0.0; policy.output_dim()];
    for s in batch {
        let fwd = policy.forward(s.state);
        let probs = softmax(&fwd.out);
        let ratio = probs[s.action] / s.old_prob;
        let unclipped = ratio * s.advantage;
        let clipped = ratio.clamp(1.0 - eps, 1.0 + eps) * s.advantage;
        loss -= s.weight * unclipped.min(clipped) * scale;
        // the gradient flows only through the unclipped branch
        if unclipped <= clipped && s.advantage != 0.0 {
            let g = -s.weight * s.advantage * ratio * scale;
            for (k, d) in d_logits.iter_mut().enumerate() {
                let onehot = if k == s.action { 1.0 } else { 0.0 };
                *d = g * (onehot - probs[k]);
            }
            policy.backward(s.state, &fwd, &d_logits, &mut grad);
        }
    }
    (loss, grad)
}

/// Mean weighted squared error between targets and values, and its gradient.
pub fn critic_loss(value: &Mlp, batch: &[CriticSample<'_>]) -> (f64, Vec<f64>) {
    let mut grad = vec![0.0; value.num_params()];
    if batch.is_empty() {
        return (0.0, grad);
    }
    let scale = 1.0 / batch.len() as f64;
    let mut loss = 0.0;
    for s in batch {
        let fwd = value.forward(s.state);
        let err = s.target - fwd.out[0];
        loss += s.weight * err * err * scale;
        value.backward(s.state, &fwd, &[-2.0 * s.weight * err * scale], &mut grad);
    }
    (loss, grad)
}

/// Shift to zero mean and scale to unit (population) standard deviation.
pub fn standardize(values: &mut [f64]) {
    if values.is_empty() {
        return;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt() + 1e-8;
    for v in values {
        *v = (*v - mean) / std;
    }
}

/// `G_t = r_t + gamma * G_{t+1}` over one trajectory.
pub fn discounted_returns(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for (i, r) in rewards.iter().enumerate().rev() {
        acc = r + gamma * acc;
        out[i] = acc;
    }
    out
}
