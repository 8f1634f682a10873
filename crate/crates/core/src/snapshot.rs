//! Versioned snapshots of a simulation at any decision point.
//!
//! A snapshot is a JSON document holding the instance, the operation table
//! and every engine variable, so a run can be stored mid-schedule and resumed
//! elsewhere. The layout is described in `docs/snapshot-format.md`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::instance::RawInstance;
use crate::schedule::ScheduleEntry;
use crate::simulator::SimState;
use crate::table::OpTable;

pub const SNAPSHOT_FORMAT: &str = "fjsp-snapshot";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub format: String,
    pub version: u32,
    pub instance: RawInstance,
    pub clock: u64,
    pub assignable: Vec<bool>,
    pub completed_op_of_job: Vec<usize>,
    pub running_on: Vec<Option<usize>>,
    pub next_time_on_machine: Vec<u64>,
    pub job_on_machine: Vec<Option<usize>>,
    pub ready_time: Vec<u64>,
    pub area_accumulator: i64,
    pub vacancy_total: u64,
    pub entries: Vec<ScheduleEntry>,
    pub table: OpTable,
}

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("snapshot format {found:?} version {version} is not supported (expected {SNAPSHOT_FORMAT:?} version {SNAPSHOT_VERSION})")]
    VersionMismatch { found: String, version: u32 },
    #[error("snapshot is not valid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("snapshot is inconsistent: {0}")]
    Inconsistent(String),
}

impl SimState {
    pub fn snapshot(&self) -> StateSnapshot {
        StateSnapshot {
            format: SNAPSHOT_FORMAT.to_string(),
            version: SNAPSHOT_VERSION,
            instance: (*self.instance).clone(),
            clock: self.clock,
            assignable: self.assignable.clone(),
            completed_op_of_job: self.completed.clone(),
            running_on: self.running_on.clone(),
            next_time_on_machine: self.next_time.clone(),
            job_on_machine: self.job_on_machine.clone(),
            ready_time: self.ready_time.clone(),
            area_accumulator: self.area,
            vacancy_total: self.vacancy_total,
            entries: self.entries.clone(),
            table: self.table.clone(),
        }
    }

    pub fn restore(snap: &StateSnapshot) -> Result<Self, SnapshotError> {
        if snap.format != SNAPSHOT_FORMAT || snap.version != SNAPSHOT_VERSION {
            return Err(SnapshotError::VersionMismatch {
                found: snap.format.clone(),
                version: snap.version,
            });
        }
        let n = snap.instance.num_jobs;
        let m = snap.instance.num_machines;
        let shapes_ok = snap.instance.jobs.len() == n
            && snap.assignable.len() == n
            && snap.completed_op_of_job.len() == n
            && snap.running_on.len() == n
            && snap.ready_time.len() == n
            && snap.next_time_on_machine.len() == m
            && snap.job_on_machine.len() == m
            && snap.table.num_jobs() == n
            && (0..n).all(|j| snap.table.row_len(j) == snap.instance.op_count(j))
            && snap.completed_op_of_job.iter().enumerate().all(|(j, &c)| c <= snap.instance.op_count(j))
            && snap.running_on.iter().flatten().all(|&mm| mm < m)
            && snap.job_on_machine.iter().flatten().all(|&j| j < n);
        if !shapes_ok {
            return Err(SnapshotError::Inconsistent("dimension mismatch".into()));
        }
        let mut state = SimState::new(Arc::new(snap.instance.clone()));
        state.table = snap.table.clone();
        state.clock = snap.clock;
        state.assignable = snap.assignable.clone();
        state.completed = snap.completed_op_of_job.clone();
        state.running_on = snap.running_on.clone();
        state.next_time = snap.next_time_on_machine.clone();
        state.job_on_machine = snap.job_on_machine.clone();
        state.ready_time = snap.ready_time.clone();
        state.area = snap.area_accumulator;
        state.vacancy_total = snap.vacancy_total;
        state.entries = snap.entries.clone();
        state.check_invariants().map_err(SnapshotError::Inconsistent)?;
        Ok(state)
    }
}

impl StateSnapshot {
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("snapshot serializes");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self, SnapshotError> {
        // check the version before the full shape so old files get a clear error
        let header: serde_json::Value = serde_json::from_str(text)?;
        let format = header.get("format").and_then(|v| v.as_str()).unwrap_or("");
        let version = header.get("version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if format != SNAPSHOT_FORMAT || version != SNAPSHOT_VERSION {
            return Err(SnapshotError::VersionMismatch {
                found: format.to_string(),
                version,
            });
        }
        Ok(serde_json::from_value(header)?)
    }
}
