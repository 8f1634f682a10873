//! Exact per-operation work figures used by the dispatching rules.
//!
//! The work of an operation is the mean of its alternative durations. To keep
//! priority comparisons exact (and invariant under scaling of the instance),
//! means are stored multiplied by the least common multiple of every
//! alternative count in the instance, which makes them integers.

use crate::instance::RawInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkProfile {
    scale: u64,
    op_work: Vec<Vec<u64>>,
    // suffix[j][s] = sum of op_work[j][s..]
    suffix: Vec<Vec<u64>>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl WorkProfile {
    pub fn new(inst: &RawInstance) -> Self {
        let scale = inst
            .jobs
            .iter()
            .flat_map(|j| &j.operations)
            .map(|op| op.alternatives.len() as u64)
            .fold(1, |acc, n| acc / gcd(acc, n) * n);
        let op_work: Vec<Vec<u64>> = inst
            .jobs
            .iter()
            .map(|j| {
                j.operations
                    .iter()
                    .map(|op| op.total_duration() * (scale / op.alternatives.len() as u64))
                    .collect()
            })
            .collect();
        let suffix = op_work
            .iter()
            .map(|w| {
                let mut s = vec![0; w.len() + 1];
                for i in (0..w.len()).rev() {
                    s[i] = s[i + 1] + w[i];
                }
                s
            })
            .collect();
        Self {
            scale,
            op_work,
            suffix,
        }
    }

    /// Multiplier applied to every mean.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// Scaled mean duration of one operation.
    pub fn op(&self, job: usize, stage: usize) -> u64 {
        self.op_work[job][stage]
    }

    /// Scaled work of stages `from..` of a job.
    pub fn remaining_from(&self, job: usize, from: usize) -> u64 {
        let s = &self.suffix[job];
        s[from.min(s.len() - 1)]
    }

    /// Scaled work of stages `..upto` of a job.
    pub fn done_before(&self, job: usize, upto: usize) -> u64 {
        self.suffix[job][0] - self.remaining_from(job, upto)
    }

    pub fn unscale(&self, v: u64) -> f64 {
        v as f64 / self.scale as f64
    }
}
