//! Priority dispatching rules and the action encoding.
//!
//! An action is an integer in `0..12`. The quotient by the number of machine
//! rules selects the job rule, the remainder selects the machine rule.
//!
//! Job priorities use the mean duration over an operation's alternatives as
//! its processing time. Ties go to the lowest job index, and for machines to
//! the lowest machine index.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::simulator::SimState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobRule {
    /// Shortest processing time of the next operation.
    Spt,
    /// Most work remaining, next operation included.
    Mwkr,
    /// Minimum ratio of completed work to remaining work.
    FddMwkr,
    /// Most operations remaining.
    Mor,
    /// Longest remaining work excluding the next operation.
    Lrm,
    /// Longest wait since the job became ready.
    Fifo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MachineRule {
    Spt,
    Lpt,
}

impl JobRule {
    pub const ALL: [JobRule; 6] = [
        JobRule::Spt,
        JobRule::Mwkr,
        JobRule::FddMwkr,
        JobRule::Mor,
        JobRule::Lrm,
        JobRule::Fifo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            JobRule::Spt => "spt",
            JobRule::Mwkr => "mwkr",
            JobRule::FddMwkr => "fdd_mwkr",
            JobRule::Mor => "mor",
            JobRule::Lrm => "lrm",
            JobRule::Fifo => "fifo",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&r| r == self).unwrap()
    }
}

impl MachineRule {
    pub const ALL: [MachineRule; 2] = [MachineRule::Spt, MachineRule::Lpt];

    pub fn name(self) -> &'static str {
        match self {
            MachineRule::Spt => "spt",
            MachineRule::Lpt => "lpt",
        }
    }

    pub fn index(self) -> usize {
        match self {
            MachineRule::Spt => 0,
            MachineRule::Lpt => 1,
        }
    }
}

impl fmt::Display for JobRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for MachineRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DispatchError {
    #[error("action {0} out of range 0..{NUM_ACTIONS}")]
    ActionOutOfRange(usize),
    #[error("no assignable job")]
    NoAssignableJob,
    #[error("job {0} has no idle candidate machine")]
    NoIdleCandidate(usize),
    #[error("unknown rule name {0:?}")]
    UnknownRule(String),
}

impl FromStr for JobRule {
    type Err = DispatchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        JobRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| DispatchError::UnknownRule(s.to_string()))
    }
}

impl FromStr for MachineRule {
    type Err = DispatchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MachineRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| DispatchError::UnknownRule(s.to_string()))
    }
}

pub const NUM_ACTIONS: usize = JobRule::ALL.len() * MachineRule::ALL.len();

/// An action code in `0..NUM_ACTIONS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Action(u8);

impl Action {
    pub fn new(code: usize) -> Result<Self, DispatchError> {
        if code < NUM_ACTIONS {
            Ok(Action(code as u8))
        } else {
            Err(DispatchError::ActionOutOfRange(code))
        }
    }

    pub fn from_rules(job: JobRule, machine: MachineRule) -> Self {
        Action((job.index() * MachineRule::ALL.len() + machine.index()) as u8)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn rules(self) -> (JobRule, MachineRule) {
        let n = MachineRule::ALL.len();
        (
            JobRule::ALL[self.code() / n],
            MachineRule::ALL[self.code() % n],
        )
    }

    pub fn all() -> impl Iterator<Item = Action> {
        (0..NUM_ACTIONS).map(|c| Action(c as u8))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (j, m) = self.rules();
        write!(f, "{}({j},{m})", self.0)
    }
}

pub fn decode_action(code: usize) -> Result<(JobRule, MachineRule), DispatchError> {
    Action::new(code).map(Action::rules)
}

// Exact priority value of a job; fractions are kept as (num, den).
#[derive(Debug, Clone, Copy)]
enum Priority {
    Int(u128),
    Ratio(u128, u128),
}

impl Priority {
    fn cmp(self, other: Priority) -> Ordering {
        match (self, other) {
            (Priority::Int(a), Priority::Int(b)) => a.cmp(&b),
            (Priority::Ratio(a, b), Priority::Ratio(c, d)) => (a * d).cmp(&(c * b)),
            _ => unreachable!("a rule always yields one kind of priority"),
        }
    }

    fn value(self) -> f64 {
        match self {
            Priority::Int(a) => a as f64,
            Priority::Ratio(a, b) => a as f64 / b as f64,
        }
    }
}

fn maximizes(rule: JobRule) -> bool {
    !matches!(rule, JobRule::Spt | JobRule::FddMwkr)
}

fn priority(rule: JobRule, state: &SimState, job: usize) -> Option<Priority> {
    let stage = state.next_stage(job)?;
    let work = state.work();
    let n = state.instance().op_count(job);
    Some(match rule {
        JobRule::Spt => Priority::Int(work.op(job, stage) as u128),
        JobRule::Mwkr => Priority::Int(work.remaining_from(job, stage) as u128),
        JobRule::FddMwkr => Priority::Ratio(
            work.done_before(job, stage) as u128,
            work.remaining_from(job, stage) as u128,
        ),
        JobRule::Mor => Priority::Int((n - stage) as u128),
        JobRule::Lrm => Priority::Int(work.remaining_from(job, stage + 1) as u128),
        JobRule::Fifo => Priority::Int(state.clock().saturating_sub(state.ready_time(job)) as u128),
    })
}

/// The rule's priority index of a job, in time units where applicable.
/// `None` when the job has no unstarted operation.
pub fn priority_value(rule: JobRule, state: &SimState, job: usize) -> Option<f64> {
    let p = priority(rule, state, job)?;
    let scale = state.work().scale() as f64;
    Some(match rule {
        JobRule::Spt | JobRule::Mwkr | JobRule::Lrm => p.value() / scale,
        _ => p.value(),
    })
}

/// Pick the assignable job that optimizes the rule.
pub fn select_job(rule: JobRule, state: &SimState) -> Result<usize, DispatchError> {
    let want = if maximizes(rule) {
        Ordering::Greater
    } else {
        Ordering::Less
    };
    let mut best: Option<(usize, Priority)> = None;
    for job in state.assignable_jobs() {
        let Some(p) = priority(rule, state, job) else {
            continue;
        };
        match best {
            Some((_, b)) if p.cmp(b) != want => {}
            _ => best = Some((job, p)),
        }
    }
    best.map(|(j, _)| j).ok_or(DispatchError::NoAssignableJob)
}

/// Pick an idle candidate machine (0-based) for the job's next operation.
pub fn select_machine(
    rule: MachineRule,
    state: &SimState,
    job: usize,
) -> Result<usize, DispatchError> {
    let mut best: Option<(usize, u64)> = None;
    for (m, d) in state.idle_candidates(job) {
        let better = match best {
            None => true,
            Some((bm, bd)) => match rule {
                MachineRule::Spt => d < bd || (d == bd && m < bm),
                MachineRule::Lpt => d > bd || (d == bd && m < bm),
            },
        };
        if better {
            best = Some((m, d));
        }
    }
    best.map(|(m, _)| m).ok_or(DispatchError::NoIdleCandidate(job))
}

/// Resolve an action to a concrete `(job, machine)` decision.
pub fn resolve(action: Action, state: &SimState) -> Result<(usize, usize), DispatchError> {
    let (jr, mr) = action.rules();
    let job = select_job(jr, state)?;
    let machine = select_machine(mr, state, job)?;
    Ok((job, machine))
}
