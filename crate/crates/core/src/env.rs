//! Episodic environment over the simulator.
//!
//! Agents only see decision points: after every action the environment
//! advances time and releases machines until some job is assignable or the
//! schedule is complete. The observation is the assignable flags followed by
//! each job's completed-operation count divided by the largest operation count
//! in the instance.

use std::sync::Arc;

use crate::dispatch::{self, Action, DispatchError};
use crate::instance::RawInstance;
use crate::schedule::Schedule;
use crate::simulator::{SimError, SimState};
use crate::work::WorkProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(pub Vec<f64>);

impl StateVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnvError {
    #[error(transparent)]
    Dispatch(#[from] DispatchError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("episode already finished")]
    EpisodeFinished,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub state: StateVector,
    pub reward: i64,
    pub done: bool,
}

#[derive(Debug, Clone)]
pub struct FjspEnv {
    instance: Arc<RawInstance>,
    work: Arc<WorkProfile>,
    max_ops: usize,
    sim: SimState,
}

impl FjspEnv {
    pub fn new(instance: Arc<RawInstance>) -> Self {
        let work = Arc::new(WorkProfile::new(&instance));
        let sim = SimState::with_profile(instance.clone(), work.clone());
        Self {
            max_ops: instance.max_ops(),
            instance,
            work,
            sim,
        }
    }

    /// Resume from an existing simulation, e.g. one restored from a snapshot.
    pub fn from_state(sim: SimState) -> Self {
        Self {
            max_ops: sim.instance().max_ops(),
            instance: sim.instance().clone(),
            work: sim.work.clone(),
            sim,
        }
    }

    pub fn reset(&mut self) -> StateVector {
        self.sim = SimState::with_profile(self.instance.clone(), self.work.clone());
        self.observe()
    }

    pub fn instance(&self) -> &Arc<RawInstance> {
        &self.instance
    }

    pub fn sim(&self) -> &SimState {
        &self.sim
    }

    pub fn state_len(&self) -> usize {
        2 * self.instance.num_jobs
    }

    pub fn is_done(&self) -> bool {
        self.sim.is_done()
    }

    pub fn observe(&self) -> StateVector {
        let n = self.instance.num_jobs;
        let mut v = Vec::with_capacity(2 * n);
        v.extend(self.sim.assignable().iter().map(|&a| if a { 1.0 } else { 0.0 }));
        let denom = self.max_ops.max(1) as f64;
        v.extend(self.sim.completed_ops().iter().map(|&c| c as f64 / denom));
        StateVector(v)
    }

    pub fn step(&mut self, action: Action) -> Result<Step, EnvError> {
        if self.sim.is_done() {
            return Err(EnvError::EpisodeFinished);
        }
        let (job, machine) = dispatch::resolve(action, &self.sim)?;
        self.step_decision(job, machine)
    }

    /// Apply a concrete decision instead of a rule pair.
    pub fn step_decision(&mut self, job: usize, machine: usize) -> Result<Step, EnvError> {
        if self.sim.is_done() {
            return Err(EnvError::EpisodeFinished);
        }
        self.sim.assign(job, machine)?;
        self.sim.advance_to_decision()?;
        Ok(Step {
            reward: self.sim.collect_reward(),
            done: self.sim.is_done(),
            state: self.observe(),
        })
    }

    pub fn schedule(&self) -> Result<Schedule, SimError> {
        self.sim.schedule()
    }
}

/// Outcome of one complete episode.
#[derive(Debug, Clone)]
pub struct Episode {
    pub actions: Vec<Action>,
    pub rewards: Vec<i64>,
    pub schedule: Schedule,
}

impl Episode {
    pub fn total_reward(&self) -> i64 {
        self.rewards.iter().sum()
    }

    pub fn makespan(&self) -> u64 {
        self.schedule.makespan
    }
}

/// Run one episode, asking `policy` for an action at every decision point.
pub fn rollout<F>(instance: &Arc<RawInstance>, mut policy: F) -> Result<Episode, EnvError>
where
    F: FnMut(&StateVector, &SimState) -> Action,
{
    let mut env = FjspEnv::new(instance.clone());
    let mut state = env.observe();
    let mut actions = Vec::with_capacity(instance.total_ops());
    let mut rewards = Vec::with_capacity(instance.total_ops());
    while !env.is_done() {
        let a = policy(&state, env.sim());
        let step = env.step(a)?;
        actions.push(a);
        rewards.push(step.reward);
        state = step.state;
    }
    Ok(Episode {
        actions,
        rewards,
        schedule: env.schedule()?,
    })
}

/// Roll out a constant action.
pub fn fixed_action_rollout(instance: &Arc<RawInstance>, action: Action) -> Result<Episode, EnvError> {
    rollout(instance, |_, _| action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    fn env(text: &str) -> FjspEnv {
        FjspEnv::new(Arc::new(parse_instance(text).unwrap()))
    }

    #[test]
    fn reset_encodings() {
        let mut e = env("2 2\n1 2 1 3 2 4\n1 1 1 5\n");
        assert_eq!(e.reset().0, vec![1.0, 1.0, 0.0, 0.0]);
        let mut e = env("1 1\n1 1 1 7\n");
        assert_eq!(e.reset().0, vec![1.0, 0.0]);
    }

    #[test]
    fn single_op_step() {
        for code in 0..12 {
            let mut e = env("1 1\n1 1 1 7\n");
            let s = e.step(Action::new(code).unwrap()).unwrap();
            assert_eq!(s.reward, -7);
            assert!(s.done);
            assert_eq!(s.state.0, vec![0.0, 1.0]);
            assert_eq!(e.step(Action::new(code).unwrap()), Err(EnvError::EpisodeFinished));
        }
    }

    #[test]
    fn two_jobs_one_machine() {
        let mut e = env("2 1\n1 1 1 3\n1 1 1 5\n");
        let a = e.step(Action::new(0).unwrap()).unwrap();
        assert!(!a.done);
        let b = e.step(Action::new(0).unwrap()).unwrap();
        assert!(b.done);
        assert_eq!(a.reward + b.reward, -8);
        assert_eq!(e.schedule().unwrap().makespan, 8);
    }

    #[test]
    fn trailing_vacancy_lands_on_last_step() {
        // m2 idles from 2 until the makespan of 9
        let inst = Arc::new(parse_instance("2 2\n1 1 1 9\n1 1 2 2\n").unwrap());
        let ep = fixed_action_rollout(&inst, Action::new(0).unwrap()).unwrap();
        assert_eq!(ep.makespan(), 9);
        assert_eq!(ep.rewards, vec![-2, -9 - 7]);
        assert_eq!(ep.total_reward(), -18);
    }

    #[test]
    fn action_out_of_range() {
        assert!(Action::new(12).is_err());
    }
}
