//! Schedule checking against the raw instance only.
//!
//! Nothing here touches the simulator: the checks are rebuilt from the
//! instance data and the schedule entries.

use std::collections::BTreeMap;
use std::fmt;

use crate::instance::RawInstance;
use crate::schedule::{Schedule, ScheduleEntry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownOperation { job: usize, stage: usize },
    UnknownMachine { entry: ScheduleEntry },
    Duplicate { job: usize, stage: usize },
    Missing { job: usize, stage: usize },
    IneligibleMachine { entry: ScheduleEntry },
    DurationMismatch { entry: ScheduleEntry, expected: u64 },
    Precedence { earlier: ScheduleEntry, later: ScheduleEntry },
    Overlap { machine: usize, first: ScheduleEntry, second: ScheduleEntry },
    MakespanMismatch { declared: u64, actual: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownOperation { job, stage } => {
                write!(f, "operation ({job},{stage}) does not exist")
            }
            Violation::UnknownMachine { entry } => {
                write!(f, "machine {} does not exist ({entry:?})", entry.machine)
            }
            Violation::Duplicate { job, stage } => {
                write!(f, "operation ({job},{stage}) scheduled more than once")
            }
            Violation::Missing { job, stage } => write!(f, "operation ({job},{stage}) not scheduled"),
            Violation::IneligibleMachine { entry } => write!(
                f,
                "operation ({},{}) cannot run on machine {}",
                entry.job, entry.stage, entry.machine
            ),
            Violation::DurationMismatch { entry, expected } => write!(
                f,
                "operation ({},{}) on machine {} lasts {} but needs {expected}",
                entry.job,
                entry.stage,
                entry.machine,
                entry.end.saturating_sub(entry.start)
            ),
            Violation::Precedence { earlier, later } => write!(
                f,
                "job {} stage {} starts at {} before stage {} ends at {}",
                later.job, later.stage, later.start, earlier.stage, earlier.end
            ),
            Violation::Overlap { machine, first, second } => write!(
                f,
                "machine {machine} overlap: ({},{}) [{},{}) and ({},{}) [{},{})",
                first.job, first.stage, first.start, first.end, second.job, second.stage, second.start, second.end
            ),
            Violation::MakespanMismatch { declared, actual } => {
                write!(f, "declared makespan {declared} but last operation ends at {actual}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
    pub makespan: u64,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "PASS makespan={}", self.makespan);
        }
        writeln!(f, "FAIL {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

pub fn validate(inst: &RawInstance, schedule: &Schedule) -> Verdict {
    let mut violations = Vec::new();
    let mut by_op: BTreeMap<(usize, usize), ScheduleEntry> = BTreeMap::new();
    let mut by_machine: BTreeMap<usize, Vec<ScheduleEntry>> = BTreeMap::new();

    for e in &schedule.entries {
        let Some(op) = inst.jobs.get(e.job).and_then(|j| j.operations.get(e.stage)) else {
            violations.push(Violation::UnknownOperation { job: e.job, stage: e.stage });
            continue;
        };
        if e.machine >= inst.num_machines {
            violations.push(Violation::UnknownMachine { entry: *e });
            continue;
        }
        if by_op.insert((e.job, e.stage), *e).is_some() {
            violations.push(Violation::Duplicate { job: e.job, stage: e.stage });
        }
        match op.alternatives.iter().find(|a| a.machine as usize == e.machine + 1) {
            None => violations.push(Violation::IneligibleMachine { entry: *e }),
            Some(a) if e.end < e.start || e.end - e.start != a.duration => {
                violations.push(Violation::DurationMismatch { entry: *e, expected: a.duration })
            }
            Some(_) => {}
        }
        by_machine.entry(e.machine).or_default().push(*e);
    }

    for (j, job) in inst.jobs.iter().enumerate() {
        for s in 0..job.operations.len() {
            if !by_op.contains_key(&(j, s)) {
                violations.push(Violation::Missing { job: j, stage: s });
            }
            if s > 0 {
                if let (Some(prev), Some(cur)) = (by_op.get(&(j, s - 1)), by_op.get(&(j, s))) {
                    if cur.start < prev.end {
                        violations.push(Violation::Precedence { earlier: *prev, later: *cur });
                    }
                }
            }
        }
    }

    for (machine, mut list) in by_machine {
        list.sort_by_key(|e| (e.start, e.end));
        for w in list.windows(2) {
            if w[1].start < w[0].end {
                violations.push(Violation::Overlap { machine, first: w[0], second: w[1] });
            }
        }
    }

    let actual = schedule.entries.iter().map(|e| e.end).max().unwrap_or(0);
    if schedule.makespan != actual {
        violations.push(Violation::MakespanMismatch { declared: schedule.makespan, actual });
    }

    Verdict { violations, makespan: actual }
}
