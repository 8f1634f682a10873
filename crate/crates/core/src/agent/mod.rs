//! Actor-critic PPO with prioritized replay on small perceptrons.

pub mod adam;
pub mod checkpoint;
pub mod mlp;
pub mod ppo;
pub mod replay;
pub mod train;

pub use adam::Adam;
pub use checkpoint::{Checkpoint, CheckpointError};
pub use mlp::{softmax, Mlp};
pub use ppo::{actor_loss, critic_loss, discounted_returns, ActorSample, CriticSample, PolicyNet, ValueNet};
pub use replay::{ReplayMemory, Transition};
pub use train::{
    greedy_rollout, sampled_rollout, train, ConvergenceLog, IterationRecord, LossStats, StopReason, TrainConfig,
    TrainOutcome, Trainer, Trajectory,
};

use crate::env::EnvError;

#[derive(Debug, thiserror::Error)]
pub enum AgentError {
    #[error("state has length {found}, network expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("replay memory is empty")]
    EmptyMemory,
    #[error("non-finite loss at iteration {iteration} (actor {actor_loss}, critic {critic_loss})")]
    NonFiniteLoss {
        iteration: usize,
        actor_loss: f64,
        critic_loss: f64,
        /// Network parameters at the time of failure.
        dump: Box<Checkpoint>,
    },
    #[error("rewards sum to {total}, expected {expected}")]
    RewardIdentity { total: i64, expected: i64 },
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Env(#[from] EnvError),
}
