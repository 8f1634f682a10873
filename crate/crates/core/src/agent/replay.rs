//! Experience storage with proportional prioritized sampling.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Added to |advantage| so that every stored sample stays reachable.
pub const PRIORITY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub state: Vec<f64>,
    pub action: usize,
    pub reward: i64,
    /// Probability of `action` under the policy that collected it.
    pub action_prob: f64,
    pub discounted_return: f64,
    pub advantage: f64,
    pub priority: f64,
}

impl Transition {
    pub fn set_advantage(&mut self, advantage: f64) {
        self.advantage = advantage;
        self.priority = advantage.abs() + PRIORITY_FLOOR;
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReplayMemory {
    items: Vec<Transition>,
}

/// Indices drawn by priority together with their normalised importance weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PrioritizedBatch {
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
}

impl ReplayMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: Transition) {
        self.items.push(t);
    }

    pub fn extend(&mut self, ts: impl IntoIterator<Item = Transition>) {
        self.items.extend(ts);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn clear(&mut self) {
        self.items.clear();
    }

    pub fn items(&self) -> &[Transition] {
        &self.items
    }

    pub fn items_mut(&mut self) -> &mut [Transition] {
        &mut self.items
    }

    /// `P(i) = p_i^alpha / sum_k p_k^alpha`.
    pub fn probabilities(&self, alpha: f64) -> Vec<f64> {
        let scaled: Vec<f64> = self.items.iter().map(|t| t.priority.powf(alpha)).collect();
        let total: f64 = scaled.iter().sum();
        scaled.into_iter().map(|p| p / total).collect()
    }

    /// Draw `n` indices with replacement in proportion to `P(i)` and weight
    /// each by `(N * P(i))^-beta`, divided by the largest weight in the draw.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, alpha: f64, beta: f64, rng: &mut R) -> Option<PrioritizedBatch> {
        if self.items.is_empty() || n == 0 {
            return None;
        }
        let probs = self.probabilities(alpha);
        let dist = WeightedIndex::new(&probs).ok()?;
        let indices: Vec<usize> = (0..n).map(|_| dist.sample(rng)).collect();
        let weights = importance_weights(&probs, &indices, beta);
        Some(PrioritizedBatch { indices, weights })
    }
}

pub fn importance_weights(probs: &[f64], indices: &[usize], beta: f64) -> Vec<f64> {
    let n = probs.len() as f64;
    let raw: Vec<f64> = indices.iter().map(|&i| (n * probs[i]).powf(-beta)).collect();
    let max = raw.iter().copied().fold(0.0, f64::max);
    raw.into_iter().map(|w| w / max).collect()
}

/// Linear anneal from `start` at iteration 0 to `end` at `horizon`, held after.
pub fn annealed_beta(start: f64, end: f64, iteration: usize, horizon: usize) -> f64 {
    if horizon == 0 {
        return end;
    }
    let frac = (iteration as f64 / horizon as f64).min(1.0);
    start + (end - start) * frac
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(priority: f64) -> Transition {
        Transition {
            state: vec![0.0],
            action: 0,
            reward: -1,
            action_prob: 1.0,
            discounted_return: -1.0,
            advantage: 0.0,
            priority,
        }
    }

    #[test]
    fn uniform_priorities_with_full_beta_give_unit_weights() {
        let mut m = ReplayMemory::new();
        m.extend((0..7).map(|_| t(0.3)));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let b = m.sample(20, 0.6, 1.0, &mut rng).unwrap();
        assert!(b.weights.iter().all(|&w| (w - 1.0).abs() < 1e-12));
    }

    #[test]
    fn probabilities_follow_alpha() {
        let mut m = ReplayMemory::new();
        m.push(t(1.0));
        m.push(t(4.0));
        let p = m.probabilities(0.5);
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((p[1] - 2.0 / 3.0).abs() < 1e-12);
        let p = m.probabilities(0.0);
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn weights_hand_computed() {
        // N = 2, P = (1/3, 2/3), beta = 1: raw weights 3/2 and 3/4
        let w = importance_weights(&[1.0 / 3.0, 2.0 / 3.0], &[0, 1, 1], 1.0);
        assert!((w[0] - 1.0).abs() < 1e-12);
        assert!((w[1] - 0.5).abs() < 1e-12);
        assert!((w[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampling_prefers_high_priority() {
        let mut m = ReplayMemory::new();
        m.push(t(1e-6));
        m.push(t(10.0));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = m.sample(200, 0.6, 0.4, &mut rng).unwrap();
        let hits = b.indices.iter().filter(|&&i| i == 1).count();
        assert!(hits > 190, "{hits}");
    }

    #[test]
    fn empty_memory_has_no_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(ReplayMemory::new().sample(4, 0.6, 0.4, &mut rng).is_none());
    }

    #[test]
    fn beta_schedule() {
        assert_eq!(annealed_beta(0.4, 1.0, 0, 100), 0.4);
        assert!((annealed_beta(0.4, 1.0, 50, 100) - 0.7).abs() < 1e-12);
        assert_eq!(annealed_beta(0.4, 1.0, 100, 100), 1.0);
        assert_eq!(annealed_beta(0.4, 1.0, 500, 100), 1.0);
    }

    #[test]
    fn priority_floor() {
        let mut x = t(0.0);
        x.set_advantage(0.0);
        assert_eq!(x.priority, PRIORITY_FLOOR);
        x.set_advantage(-2.0);
        assert_eq!(x.priority, 2.0 + PRIORITY_FLOOR);
    }
}
