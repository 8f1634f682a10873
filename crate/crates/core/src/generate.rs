//! Random instances in the benchmark layout.

use rand::seq::index::sample;
use rand::Rng;

use crate::instance::{Alternative, Job, Operation, RawInstance};

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub jobs: usize,
    pub machines: usize,
    /// Inclusive range of operations per job.
    pub ops_per_job: (usize, usize),
    /// Inclusive range of eligible machines per operation.
    pub alternatives: (usize, usize),
    /// Inclusive range of processing times.
    pub duration: (u64, u64),
}

impl GenConfig {
    /// Dimensions of the first Brandimarte instance: 10 jobs, 6 machines,
    /// 5 to 7 operations, up to 3 machines each, times 1 to 6.
    pub fn mk01_like() -> Self {
        Self { jobs: 10, machines: 6, ops_per_job: (5, 7), alternatives: (1, 3), duration: (1, 6) }
    }

    /// At most 3 jobs, 3 operations and 3 machines.
    pub fn tiny() -> Self {
        Self { jobs: 3, machines: 3, ops_per_job: (1, 3), alternatives: (1, 3), duration: (1, 9) }
    }
}

pub fn generate<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> RawInstance {
    assert!(cfg.machines >= 1 && cfg.jobs >= 1);
    let alt_hi = cfg.alternatives.1.min(cfg.machines).max(1);
    let alt_lo = cfg.alternatives.0.clamp(1, alt_hi);
    let jobs = (0..cfg.jobs)
        .map(|_| {
            let n_ops = rng.gen_range(cfg.ops_per_job.0.max(1)..=cfg.ops_per_job.1.max(1));
            let operations = (0..n_ops)
                .map(|_| {
                    let k = rng.gen_range(alt_lo..=alt_hi);
                    let mut ms: Vec<usize> = sample(rng, cfg.machines, k).into_vec();
                    ms.sort_unstable();
                    Operation {
                        alternatives: ms
                            .into_iter()
                            .map(|m| Alternative {
                                machine: m as u32 + 1,
                                duration: rng.gen_range(cfg.duration.0.max(1)..=cfg.duration.1.max(1)),
                            })
                            .collect(),
                    }
                })
                .collect();
            Job { operations }
        })
        .collect();
    RawInstance { num_jobs: cfg.jobs, num_machines: cfg.machines, avg_machines_per_op: None, jobs }
}
