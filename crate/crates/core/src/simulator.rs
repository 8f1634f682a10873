//! Chronological discrete-event engine.
//!
//! A [`SimState`] moves between decision points through three transitions:
//! [`SimState::assign`] starts an operation, [`SimState::advance_time`] moves
//! the clock to the next machine completion, and
//! [`SimState::release_machines`] frees machines whose operation finished at
//! the current clock.
//!
//! Every transition charges the scheduling area: an assignment subtracts the
//! processing time, and every advance subtracts the idle time that machines
//! accrue while the clock moves past them. Over a full episode the charges add
//! up to `-(machines * makespan)` exactly.

use std::sync::Arc;

use crate::instance::RawInstance;
use crate::schedule::{Schedule, ScheduleEntry};
use crate::table::{Cell, OpTable};
use crate::work::WorkProfile;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("job {job} is not assignable")]
    JobNotAssignable { job: usize },
    #[error("machine {machine} is not a candidate for the next operation of job {job}")]
    MachineNotEligible { job: usize, machine: usize },
    #[error("machine {machine} is busy")]
    MachineBusy { machine: usize },
    #[error("job {0} does not exist")]
    UnknownJob(usize),
    #[error("machine {0} does not exist")]
    UnknownMachine(usize),
    #[error("cannot advance time while job {0} is assignable")]
    JobsStillAssignable(usize),
    #[error("all operations are already complete")]
    AlreadyComplete,
    #[error("deadlock at t={clock}: work remains but no machine is busy and no job is assignable")]
    DeadlockDetected { clock: u64 },
    #[error("makespan requested before all operations completed")]
    MakespanBeforeCompletion,
}

/// All live scheduling state of one simulation.
#[derive(Debug, Clone)]
pub struct SimState {
    pub(crate) instance: Arc<RawInstance>,
    pub(crate) work: Arc<WorkProfile>,
    pub(crate) table: OpTable,
    pub(crate) clock: u64,
    pub(crate) assignable: Vec<bool>,
    pub(crate) completed: Vec<usize>,
    /// Per job, the 0-based machine running its current operation.
    pub(crate) running_on: Vec<Option<usize>>,
    pub(crate) next_time: Vec<u64>,
    pub(crate) job_on_machine: Vec<Option<usize>>,
    /// Per job, the completion time of its previous operation.
    pub(crate) ready_time: Vec<u64>,
    pub(crate) area: i64,
    pub(crate) vacancy_total: u64,
    pub(crate) entries: Vec<ScheduleEntry>,
}

impl SimState {
    pub fn new(instance: Arc<RawInstance>) -> Self {
        let work = Arc::new(WorkProfile::new(&instance));
        Self::with_profile(instance, work)
    }

    pub(crate) fn with_profile(instance: Arc<RawInstance>, work: Arc<WorkProfile>) -> Self {
        let n = instance.num_jobs;
        let m = instance.num_machines;
        let mut state = Self {
            table: OpTable::build(&instance),
            instance,
            work,
            clock: 0,
            assignable: vec![false; n],
            completed: vec![0; n],
            running_on: vec![None; n],
            next_time: vec![0; m],
            job_on_machine: vec![None; m],
            ready_time: vec![0; n],
            area: 0,
            vacancy_total: 0,
            entries: Vec::new(),
        };
        state.refresh_waiting();
        state
    }

    pub fn instance(&self) -> &Arc<RawInstance> {
        &self.instance
    }

    pub fn work(&self) -> &WorkProfile {
        &self.work
    }

    pub fn table(&self) -> &OpTable {
        &self.table
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn num_jobs(&self) -> usize {
        self.instance.num_jobs
    }

    pub fn num_machines(&self) -> usize {
        self.instance.num_machines
    }

    pub fn assignable(&self) -> &[bool] {
        &self.assignable
    }

    pub fn is_assignable(&self, job: usize) -> bool {
        self.assignable.get(job).copied().unwrap_or(false)
    }

    pub fn assignable_jobs(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignable
            .iter()
            .enumerate()
            .filter(|(_, a)| **a)
            .map(|(j, _)| j)
    }

    pub fn any_assignable(&self) -> bool {
        self.assignable.iter().any(|&a| a)
    }

    pub fn completed_ops(&self) -> &[usize] {
        &self.completed
    }

    pub fn next_time_on_machine(&self) -> &[u64] {
        &self.next_time
    }

    pub fn job_on_machine(&self) -> &[Option<usize>] {
        &self.job_on_machine
    }

    /// Completion time of the job's previous operation (0 before its first).
    pub fn ready_time(&self, job: usize) -> u64 {
        self.ready_time[job]
    }

    /// Area charged since the last [`collect_reward`](Self::collect_reward).
    pub fn pending_area(&self) -> i64 {
        self.area
    }

    /// Idle time accrued by all machines so far.
    pub fn vacancy_total(&self) -> u64 {
        self.vacancy_total
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn is_machine_idle(&self, machine: usize) -> bool {
        self.job_on_machine[machine].is_none()
    }

    /// Stage index of the job's next unstarted operation, if any.
    pub fn next_stage(&self, job: usize) -> Option<usize> {
        let stage = self.completed[job] + usize::from(self.running_on[job].is_some());
        (stage < self.instance.op_count(job)).then_some(stage)
    }

    /// Idle candidate machines (0-based) of the job's next operation with their durations.
    pub fn idle_candidates(&self, job: usize) -> Vec<(usize, u64)> {
        match self.next_stage(job) {
            Some(stage) => self
                .instance
                .operation(job, stage)
                .alternatives
                .iter()
                .map(|a| (a.machine as usize - 1, a.duration))
                .filter(|(m, _)| self.job_on_machine[*m].is_none())
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.completed
            .iter()
            .zip(&self.instance.jobs)
            .all(|(&c, j)| c == j.operations.len())
    }

    pub fn makespan(&self) -> Result<u64, SimError> {
        if !self.is_done() {
            return Err(SimError::MakespanBeforeCompletion);
        }
        Ok(self.entries.iter().map(|e| e.end).max().unwrap_or(0))
    }

    pub fn schedule(&self) -> Result<Schedule, SimError> {
        if !self.is_done() {
            return Err(SimError::MakespanBeforeCompletion);
        }
        Ok(Schedule::from_entries(self.entries.clone()))
    }

    /// Start the job's next operation on `machine` (0-based) at the current clock.
    pub fn assign(&mut self, job: usize, machine: usize) -> Result<(), SimError> {
        if job >= self.num_jobs() {
            return Err(SimError::UnknownJob(job));
        }
        if machine >= self.num_machines() {
            return Err(SimError::UnknownMachine(machine));
        }
        if !self.assignable[job] {
            return Err(SimError::JobNotAssignable { job });
        }
        let stage = self.completed[job];
        let duration = self
            .instance
            .operation(job, stage)
            .duration_on(machine as u32 + 1)
            .ok_or(SimError::MachineNotEligible { job, machine })?;
        if self.job_on_machine[machine].is_some() {
            return Err(SimError::MachineBusy { machine });
        }
        debug_assert_eq!(self.next_time[machine], self.clock);

        self.next_time[machine] = self.clock + duration;
        self.job_on_machine[machine] = Some(job);
        self.running_on[job] = Some(machine);
        *self.table.cell_mut(job, stage) = Cell {
            machines: vec![-(machine as i32 + 1)],
            remaining: vec![duration],
        };
        self.area -= duration as i64;
        self.entries.push(ScheduleEntry {
            job,
            stage,
            machine,
            start: self.clock,
            end: self.clock + duration,
        });
        self.refresh_waiting();
        self.debug_check();
        Ok(())
    }

    /// Move the clock to the next completion among busy machines and charge
    /// the idle time of machines the clock passes. Returns the elapsed time.
    pub fn advance_time(&mut self) -> Result<u64, SimError> {
        if self.is_done() {
            return Err(SimError::AlreadyComplete);
        }
        if let Some(job) = self.assignable_jobs().next() {
            return Err(SimError::JobsStillAssignable(job));
        }
        let busy_times = || {
            self.job_on_machine
                .iter()
                .zip(&self.next_time)
                .filter(|(j, _)| j.is_some())
                .map(|(_, t)| *t)
        };
        let min = busy_times()
            .min()
            .ok_or(SimError::DeadlockDetected { clock: self.clock })?;
        let target = if self.clock < min {
            min
        } else {
            // a busy machine sits at the clock unreleased: take the next distinct value
            busy_times().filter(|&t| t > self.clock).min().unwrap_or(min)
        };
        let elapsed = target - self.clock;
        self.clock = target;

        for m in 0..self.num_machines() {
            let ta = self.clock.saturating_sub(self.next_time[m]);
            if ta > 0 {
                self.next_time[m] += ta;
                self.area -= ta as i64;
                self.vacancy_total += ta;
            }
            if let Some(job) = self.job_on_machine[m] {
                let stage = self.completed[job];
                self.table.cell_mut(job, stage).remaining[0] = self.next_time[m] - self.clock;
            }
        }
        self.debug_check();
        Ok(elapsed)
    }

    /// Free every machine whose operation completes at the current clock.
    /// Returns the released `(machine, job)` pairs, machine 0-based.
    pub fn release_machines(&mut self) -> Vec<(usize, usize)> {
        let mut released = Vec::new();
        for m in 0..self.num_machines() {
            let Some(job) = self.job_on_machine[m] else {
                continue;
            };
            if self.next_time[m] > self.clock {
                continue;
            }
            let stage = self.completed[job];
            *self.table.cell_mut(job, stage) = Cell {
                machines: vec![-(m as i32 + 1)],
                remaining: vec![0],
            };
            self.job_on_machine[m] = None;
            self.running_on[job] = None;
            self.completed[job] += 1;
            self.ready_time[job] = self
                .entries
                .iter()
                .rev()
                .find(|e| e.job == job && e.stage == stage)
                .map_or(self.clock, |e| e.end);
            released.push((m, job));
        }
        if !released.is_empty() {
            self.refresh_waiting();
        }
        self.debug_check();
        released
    }

    /// Return the area charged since the last call and reset it.
    pub fn collect_reward(&mut self) -> i64 {
        std::mem::take(&mut self.area)
    }

    /// Advance and release until a job is assignable or all work is complete.
    pub fn advance_to_decision(&mut self) -> Result<(), SimError> {
        while !self.any_assignable() && !self.is_done() {
            self.advance_time()?;
            self.release_machines();
        }
        Ok(())
    }

    // Rewrite the cell of every waiting operation so each candidate machine's
    // sign reflects its occupancy, then derive assignability from the signs.
    fn refresh_waiting(&mut self) {
        for job in 0..self.num_jobs() {
            let stage = self.completed[job];
            if self.running_on[job].is_some() || stage >= self.instance.op_count(job) {
                self.assignable[job] = false;
                continue;
            }
            let op = self.instance.operation(job, stage);
            let cell = self.table.cell_mut(job, stage);
            cell.machines.clear();
            cell.remaining.clear();
            for a in &op.alternatives {
                let busy = self.job_on_machine[a.machine as usize - 1].is_some();
                cell.machines
                    .push(if busy { -(a.machine as i32) } else { a.machine as i32 });
                cell.remaining.push(a.duration);
            }
            self.assignable[job] = cell.machines.iter().any(|&m| m > 0);
        }
    }

    fn debug_check(&self) {
        #[cfg(debug_assertions)]
        if let Err(e) = self.check_invariants() {
            panic!("simulation invariant violated: {e}");
        }
    }

    /// Verify the table encoding against the machine and job bookkeeping.
    pub fn check_invariants(&self) -> Result<(), String> {
        let inst = &self.instance;
        for job in 0..inst.num_jobs {
            let n = inst.op_count(job);
            let done = self.completed[job];
            if done > n {
                return Err(format!("job {job}: completed {done} > {n}"));
            }
            for stage in 0..n {
                let cell = self.table.cell(job, stage);
                if !cell.is_consistent() {
                    return Err(format!("cell ({job},{stage}) malformed: {cell:?}"));
                }
                let op = inst.operation(job, stage);
                if stage < done {
                    if cell.machines.len() != 1 || cell.machines[0] >= 0 || cell.remaining[0] != 0 {
                        return Err(format!("completed cell ({job},{stage}) = {cell:?}"));
                    }
                } else if stage == done && self.running_on[job].is_some() {
                    let m = self.running_on[job].unwrap();
                    if cell.machines != [-(m as i32 + 1)] {
                        return Err(format!("running cell ({job},{stage}) = {cell:?}"));
                    }
                    if self.job_on_machine[m] != Some(job) {
                        return Err(format!("job {job} runs on {m} but machine disagrees"));
                    }
                    if cell.remaining[0] != self.next_time[m].saturating_sub(self.clock) {
                        return Err(format!("running cell ({job},{stage}) remaining drift"));
                    }
                } else if stage == done {
                    let mut any_free = false;
                    for ((&m, &t), a) in cell.machines.iter().zip(&cell.remaining).zip(&op.alternatives) {
                        let busy = self.job_on_machine[a.machine as usize - 1].is_some();
                        if m.unsigned_abs() != a.machine || (m < 0) != busy || t != a.duration {
                            return Err(format!("waiting cell ({job},{stage}) = {cell:?}"));
                        }
                        any_free |= !busy;
                    }
                    if self.assignable[job] != any_free {
                        return Err(format!("job {job} assignable flag disagrees with cell"));
                    }
                } else {
                    let pristine = op
                        .alternatives
                        .iter()
                        .map(|a| (a.machine as i32, a.duration))
                        .eq(cell.machines.iter().copied().zip(cell.remaining.iter().copied()));
                    if !pristine {
                        return Err(format!("future cell ({job},{stage}) modified"));
                    }
                }
            }
            if (done == n || self.running_on[job].is_some()) && self.assignable[job] {
                return Err(format!("job {job} flagged assignable without a waiting op"));
            }
        }
        for m in 0..inst.num_machines {
            match self.job_on_machine[m] {
                Some(j) if self.running_on[j] != Some(m) => {
                    return Err(format!("machine {m} holds job {j} which runs elsewhere"));
                }
                Some(_) if self.next_time[m] < self.clock => {
                    return Err(format!("busy machine {m} finishes in the past"));
                }
                None if self.next_time[m] > self.clock => {
                    return Err(format!("idle machine {m} has a future next time"));
                }
                _ => {}
            }
        }
        Ok(())
    }
}
