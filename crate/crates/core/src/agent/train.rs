//! The outer training loop: collect trajectories with a frozen policy,
//! run K epochs of clipped PPO over the fresh memory, then C rounds of
//! prioritized replay.

use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adam::Adam;
use super::checkpoint::Checkpoint;
use super::ppo::{actor_loss, critic_loss, discounted_returns, standardize, ActorSample, CriticSample, PolicyNet, ValueNet};
use super::replay::{annealed_beta, ReplayMemory, Transition};
use super::AgentError;
use crate::dispatch::{Action, NUM_ACTIONS};
use crate::env::{rollout, EnvError, Episode, FjspEnv};
use crate::instance::RawInstance;
use crate::schedule::Schedule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Upper bound on training iterations.
    pub max_episodes: usize,
    pub trajectories_per_iter: usize,
    pub epochs: usize,
    /// `None` means twice the instance's operation count.
    pub batch_size: Option<usize>,
    pub clip_eps: f64,
    pub gamma: f64,
    pub lr_actor: f64,
    pub lr_critic: f64,
    pub per_alpha: f64,
    pub per_beta_start: f64,
    pub per_beta_end: f64,
    pub per_rounds: usize,
    pub convergence_window: usize,
    /// Convergence is only checked once this many iterations have run.
    pub convergence_after: usize,
    pub time_limit: Option<Duration>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_episodes: 8000,
            trajectories_per_iter: 9,
            epochs: 10,
            batch_size: None,
            clip_eps: 0.2,
            gamma: 0.999,
            lr_actor: 1e-3,
            lr_critic: 3e-3,
            per_alpha: 0.6,
            per_beta_start: 0.4,
            per_beta_end: 1.0,
            per_rounds: 1,
            convergence_window: 30,
            convergence_after: 2000,
            time_limit: Some(Duration::from_secs(3600)),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), AgentError> {
        let bad = |m: &str| Err(AgentError::InvalidConfig(m.to_string()));
        if self.trajectories_per_iter == 0 || self.epochs == 0 || self.convergence_window == 0 {
            return bad("trajectory, epoch and window counts must be positive");
        }
        if self.batch_size == Some(0) {
            return bad("batch size must be positive");
        }
        if !(self.clip_eps > 0.0 && self.clip_eps < 1.0) {
            return bad("clip epsilon must lie in (0, 1)");
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return bad("gamma must lie in (0, 1]");
        }
        if !(self.lr_actor > 0.0 && self.lr_critic > 0.0) {
            return bad("learning rates must be positive");
        }
        if !(self.per_alpha >= 0.0 && self.per_alpha.is_finite()) {
            return bad("alpha must be non-negative");
        }
        let beta_ok = |b: f64| (0.4..=1.0).contains(&b);
        if !beta_ok(self.per_beta_start) || !beta_ok(self.per_beta_end) {
            return bad("beta must lie in [0.4, 1]");
        }
        Ok(())
    }
}

/// One row of the convergence log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub mean_makespan: f64,
    pub best_makespan: u64,
    pub wall_seconds: f64,
    pub actor_loss: f64,
    pub critic_loss: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceLog {
    pub records: Vec<IterationRecord>,
}

impl ConvergenceLog {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r).expect("in-memory write");
        }
        if self.records.is_empty() {
            w.write_record(["iteration", "mean_makespan", "best_makespan", "wall_seconds", "actor_loss", "critic_loss"])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    /// The log with the wall-clock column dropped: identical across runs
    /// with the same seed.
    pub fn to_csv_without_timing(&self) -> String {
        let mut out = String::from("iteration,mean_makespan,best_makespan,actor_loss,critic_loss\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.iteration, r.mean_makespan, r.best_makespan, r.actor_loss, r.critic_loss
            ));
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }

    /// True when the last `window` mean makespans are identical.
    pub fn flat_tail(&self, window: usize) -> bool {
        if window == 0 || self.records.len() < window {
            return false;
        }
        let tail = &self.records[self.records.len() - window..];
        tail.iter().all(|r| r.mean_makespan == tail[0].mean_makespan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    MaxEpisodes,
    Converged,
    TimeLimit,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub policy: PolicyNet,
    pub value: ValueNet,
    /// Best schedule seen in any sampled trajectory or the final greedy run.
    pub best_schedule: Schedule,
    pub greedy: Episode,
    pub log: ConvergenceLog,
    pub stop: StopReason,
    pub iterations: usize,
}

impl TrainOutcome {
    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint { policy: self.policy.clone(), value: self.value.clone() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LossStats {
    pub actor: f64,
    pub critic: f64,
    pub updates: usize,
}

/// One sampled episode with its transitions.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub transitions: Vec<Transition>,
    pub schedule: Schedule,
}

pub struct Trainer {
    instance: Arc<RawInstance>,
    config: TrainConfig,
    seed: u64,
    batch_size: usize,
    pub policy: PolicyNet,
    pub value: ValueNet,
    actor_opt: Adam,
    critic_opt: Adam,
    rng: ChaCha8Rng,
}

impl Trainer {
    pub fn new(instance: Arc<RawInstance>, config: TrainConfig, seed: u64) -> Result<Self, AgentError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        let n = 2 * instance.num_jobs;
        let policy = PolicyNet::new(n, &mut rng);
        let value = ValueNet::new(n, &mut rng);
        Ok(Self {
            batch_size: config.batch_size.unwrap_or(2 * instance.total_ops()).max(1),
            actor_opt: Adam::new(policy.mlp.num_params(), config.lr_actor),
            critic_opt: Adam::new(value.mlp.num_params(), config.lr_critic),
            instance,
            config,
            seed,
            policy,
            value,
            rng,
        })
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    /// Sample `T` episodes from the current policy. Each trajectory draws
    /// from its own ChaCha stream, so the result does not depend on thread
    /// scheduling.
    pub fn collect(&self, iteration: usize) -> Result<Vec<Trajectory>, AgentError> {
        let t = self.config.trajectories_per_iter;
        (0..t)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream((iteration * t + k) as u64);
                sample_trajectory(&self.policy, &self.instance, self.config.gamma, &mut rng)
            })
            .collect()
    }

    fn refresh_advantages(&self, memory: &mut ReplayMemory) -> Result<(), AgentError> {
        for tr in memory.items_mut() {
            let v = self.value.value(&tr.state)?;
            tr.set_advantage(tr.discounted_return - v);
        }
        Ok(())
    }

    fn update_batch(
        &mut self,
        memory: &ReplayMemory,
        indices: &[usize],
        weights: Option<&[f64]>,
        iteration: usize,
    ) -> Result<(f64, f64), AgentError> {
        let items = memory.items();
        let mut adv: Vec<f64> = indices.iter().map(|&i| items[i].advantage).collect();
        standardize(&mut adv);
        let w = |k: usize| weights.map_or(1.0, |w| w[k]);
        let actor_batch: Vec<ActorSample<'_>> = indices
            .iter()
            .enumerate()
            .map(|(k, &i)| ActorSample {
                state: &items[i].state,
                action: items[i].action,
                old_prob: items[i].action_prob,
                advantage: adv[k],
                weight: w(k),
            })
            .collect();
        let critic_batch: Vec<CriticSample<'_>> = indices
            .iter()
            .enumerate()
            .map(|(k, &i)| CriticSample { state: &items[i].state, target: items[i].discounted_return, weight: w(k) })
            .collect();
        let (la, ga) = actor_loss(&self.policy.mlp, &actor_batch, self.config.clip_eps);
        let (lc, gc) = critic_loss(&self.value.mlp, &critic_batch);
        let finite = |g: &[f64]| g.iter().all(|x| x.is_finite());
        if !la.is_finite() || !lc.is_finite() || !finite(&ga) || !finite(&gc) {
            return Err(AgentError::NonFiniteLoss {
                iteration,
                actor_loss: la,
                critic_loss: lc,
                dump: Box::new(Checkpoint { policy: self.policy.clone(), value: self.value.clone() }),
            });
        }
        self.actor_opt.step(self.policy.mlp.params_mut(), &ga);
        self.critic_opt.step(self.value.mlp.params_mut(), &gc);
        Ok((la, lc))
    }

    /// K epochs over shuffled batches, a priority refresh, then C rounds of
    /// prioritized replay with importance weights on both losses.
    pub fn ppo_update(&mut self, memory: &mut ReplayMemory, iteration: usize) -> Result<LossStats, AgentError> {
        if memory.is_empty() {
            return Err(AgentError::EmptyMemory);
        }
        self.refresh_advantages(memory)?;
        let mut stats = LossStats::default();
        let mut order: Vec<usize> = (0..memory.len()).collect();
        for _ in 0..self.config.epochs {
            order.shuffle(&mut self.rng);
            for chunk in order.chunks(self.batch_size) {
                let (la, lc) = self.update_batch(memory, chunk, None, iteration)?;
                stats.actor += la;
                stats.critic += lc;
                stats.updates += 1;
            }
        }
        self.refresh_advantages(memory)?;
        let beta = annealed_beta(
            self.config.per_beta_start,
            self.config.per_beta_end,
            iteration,
            self.config.max_episodes,
        );
        for _ in 0..self.config.per_rounds {
            let batch = memory
                .sample(self.batch_size, self.config.per_alpha, beta, &mut self.rng)
                .ok_or(AgentError::EmptyMemory)?;
            let (la, lc) = self.update_batch(memory, &batch.indices, Some(&batch.weights), iteration)?;
            stats.actor += la;
            stats.critic += lc;
            stats.updates += 1;
        }
        stats.actor /= stats.updates as f64;
        stats.critic /= stats.updates as f64;
        Ok(stats)
    }

    pub fn run(mut self) -> Result<TrainOutcome, AgentError> {
        let started = Instant::now();
        let mut log = ConvergenceLog::default();
        let mut best: Option<Schedule> = None;
        let mut stop = StopReason::MaxEpisodes;
        let mut iterations = 0;
        for iteration in 0..self.config.max_episodes {
            let trajectories = self.collect(iteration)?;
            let mut memory = ReplayMemory::new();
            let mut total = 0u64;
            for tr in trajectories {
                total += tr.schedule.makespan;
                if best.as_ref().is_none_or(|b| tr.schedule.makespan < b.makespan) {
                    best = Some(tr.schedule.clone());
                }
                memory.extend(tr.transitions);
            }
            let stats = self.ppo_update(&mut memory, iteration)?;
            iterations = iteration + 1;
            log.records.push(IterationRecord {
                iteration,
                mean_makespan: total as f64 / self.config.trajectories_per_iter as f64,
                best_makespan: best.as_ref().map_or(0, |b| b.makespan),
                wall_seconds: started.elapsed().as_secs_f64(),
                actor_loss: stats.actor,
                critic_loss: stats.critic,
            });
            if iterations > self.config.convergence_after && log.flat_tail(self.config.convergence_window) {
                stop = StopReason::Converged;
                break;
            }
            if self.config.time_limit.is_some_and(|limit| started.elapsed() >= limit) {
                stop = StopReason::TimeLimit;
                break;
            }
        }
        let greedy = greedy_rollout(&self.policy, &self.instance)?;
        let best_schedule = match best {
            Some(b) if b.makespan <= greedy.makespan() => b,
            _ => greedy.schedule.clone(),
        };
        Ok(TrainOutcome {
            policy: self.policy,
            value: self.value,
            best_schedule,
            greedy,
            log,
            stop,
            iterations,
        })
    }
}

pub fn train(instance: Arc<RawInstance>, config: TrainConfig, seed: u64) -> Result<TrainOutcome, AgentError> {
    Trainer::new(instance, config, seed)?.run()
}

fn check_identity(inst: &RawInstance, ep: &Episode) -> Result<(), AgentError> {
    let expected = -((inst.num_machines as u64 * ep.makespan()) as i64);
    if ep.total_reward() != expected {
        return Err(AgentError::RewardIdentity { total: ep.total_reward(), expected });
    }
    Ok(())
}

/// Draw an action index from `probs` with one uniform variate.
pub fn sample_action<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    last
}

/// Index of the largest probability, lowest index on ties.
pub fn argmax(probs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > probs[best] {
            best = i;
        }
    }
    best
}

fn policy_action(policy: &PolicyNet, state: &[f64], pick: impl FnOnce(&[f64]) -> usize) -> (Action, f64) {
    let probs = policy.probs(state).expect("state length fixed by instance");
    let a = pick(&probs);
    debug_assert!(a < NUM_ACTIONS);
    (Action::new(a).expect("index below action count"), probs[a])
}

/// One stochastic episode recorded as transitions with discounted returns.
pub fn sample_trajectory<R: Rng + ?Sized>(
    policy: &PolicyNet,
    instance: &Arc<RawInstance>,
    gamma: f64,
    rng: &mut R,
) -> Result<Trajectory, AgentError> {
    let mut env = FjspEnv::new(instance.clone());
    let mut state = env.observe();
    let mut transitions = Vec::with_capacity(instance.total_ops());
    while !env.is_done() {
        let (action, prob) = policy_action(policy, &state.0, |p| sample_action(p, rng));
        let step = env.step(action)?;
        transitions.push(Transition {
            state: std::mem::replace(&mut state, step.state).0,
            action: action.code(),
            reward: step.reward,
            action_prob: prob,
            discounted_return: 0.0,
            advantage: 0.0,
            priority: 0.0,
        });
    }
    let rewards: Vec<f64> = transitions.iter().map(|t| t.reward as f64).collect();
    for (t, g) in transitions.iter_mut().zip(discounted_returns(&rewards, gamma)) {
        t.discounted_return = g;
    }
    let schedule = env.schedule().map_err(EnvError::from)?;
    let episode = Episode {
        actions: transitions.iter().map(|t| Action::new(t.action).expect("valid")).collect(),
        rewards: transitions.iter().map(|t| t.reward).collect(),
        schedule,
    };
    check_identity(instance, &episode)?;
    Ok(Trajectory { transitions, schedule: episode.schedule })
}

/// Deterministic evaluation: the most probable action at every decision.
pub fn greedy_rollout(policy: &PolicyNet, instance: &Arc<RawInstance>) -> Result<Episode, AgentError> {
    if policy.mlp.input_dim() != 2 * instance.num_jobs {
        return Err(AgentError::DimensionMismatch { expected: policy.mlp.input_dim(), found: 2 * instance.num_jobs });
    }
    let ep = rollout(instance, |s, _| policy_action(policy, &s.0, argmax).0)?;
    check_identity(instance, &ep)?;
    Ok(ep)
}

/// A stochastic evaluation episode.
pub fn sampled_rollout<R: Rng + ?Sized>(
    policy: &PolicyNet,
    instance: &Arc<RawInstance>,
    rng: &mut R,
) -> Result<Episode, AgentError> {
    let ep = rollout(instance, |s, _| policy_action(policy, &s.0, |p| sample_action(p, rng)).0)?;
    check_identity(instance, &ep)?;
    Ok(ep)
}
