//! Two-dimensional operation table.
//!
//! Rows are jobs, columns are processing stages. Each cell pairs a machine set
//! with a remaining-time set. Machine indices are 1-based so their sign can
//! carry state:
//!
//! * in process: a single negative machine index with a decreasing remaining time;
//! * waiting (next op of its job): each candidate machine is negative while occupied;
//! * completed: a single negative machine index with remaining time 0;
//! * not yet reachable: unchanged from the instance.

use serde::{Deserialize, Serialize};

use crate::instance::RawInstance;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub machines: Vec<i32>,
    pub remaining: Vec<u64>,
}

impl Cell {
    pub fn is_consistent(&self) -> bool {
        !self.machines.is_empty()
            && self.machines.len() == self.remaining.len()
            && self.machines.iter().all(|&m| m != 0)
    }

    /// Candidate machines whose index is currently positive (free).
    pub fn free_machines(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.machines
            .iter()
            .zip(&self.remaining)
            .filter(|(m, _)| **m > 0)
            .map(|(m, t)| (*m as u32, *t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTable {
    rows: Vec<Vec<Cell>>,
}

impl OpTable {
    pub fn build(inst: &RawInstance) -> Self {
        let rows = inst
            .jobs
            .iter()
            .map(|job| {
                job.operations
                    .iter()
                    .map(|op| Cell {
                        machines: op.alternatives.iter().map(|a| a.machine as i32).collect(),
                        remaining: op.alternatives.iter().map(|a| a.duration).collect(),
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn cell(&self, job: usize, stage: usize) -> &Cell {
        &self.rows[job][stage]
    }

    pub fn cell_mut(&mut self, job: usize, stage: usize) -> &mut Cell {
        &mut self.rows[job][stage]
    }

    pub fn num_jobs(&self) -> usize {
        self.rows.len()
    }

    pub fn row_len(&self, job: usize) -> usize {
        self.rows[job].len()
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn total_remaining(&self) -> u64 {
        self.rows.iter().flatten().flat_map(|c| &c.remaining).sum()
    }
}
