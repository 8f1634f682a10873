//! Reference computations used by the integration tests. Nothing here reads
//! simulator internals: every quantity is rebuilt from the raw instance and
//! the list of scheduled entries.
#![allow(dead_code)]

pub mod grad;

use std::cmp::Ordering;
use std::sync::Arc;

use fjsp::generate::{generate, GenConfig};
use fjsp::{JobRule, MachineRule, RawInstance, ScheduleEntry};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn gen(cfg: &GenConfig, seed: u64) -> Arc<RawInstance> {
    Arc::new(generate(cfg, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Non-negative fraction in lowest terms.
#[derive(Debug, Clone, Copy)]
pub struct Frac {
    pub n: u128,
    pub d: u128,
}

impl Frac {
    pub fn new(n: u128, d: u128) -> Self {
        let g = gcd(n, d).max(1);
        Frac { n: n / g, d: d / g }
    }

    pub fn zero() -> Self {
        Frac { n: 0, d: 1 }
    }

    pub fn add(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }

    pub fn div(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d, self.d * o.n)
    }

    pub fn cmp(self, o: Frac) -> Ordering {
        (self.n * o.d).cmp(&(o.n * self.d))
    }
}

/// Mean processing time of an operation over its alternatives.
pub fn mean(inst: &RawInstance, job: usize, stage: usize) -> Frac {
    let alts = &inst.jobs[job].operations[stage].alternatives;
    Frac::new(alts.iter().map(|a| a.duration as u128).sum(), alts.len() as u128)
}

fn sum_means(inst: &RawInstance, job: usize, from: usize, to: usize) -> Frac {
    (from..to).fold(Frac::zero(), |acc, s| acc.add(mean(inst, job, s)))
}

/// What can be read off a partial schedule at time `clock`.
#[derive(Debug, Clone)]
pub struct View {
    pub clock: u64,
    /// Operations started (scheduled) per job.
    pub started: Vec<usize>,
    /// End of the job's latest scheduled operation, 0 if none.
    pub ready: Vec<u64>,
    /// Latest end time on each machine, 0 if unused.
    pub free: Vec<u64>,
}

impl View {
    pub fn from_entries(inst: &RawInstance, entries: &[ScheduleEntry], clock: u64) -> Self {
        let mut v = View {
            clock,
            started: vec![0; inst.num_jobs],
            ready: vec![0; inst.num_jobs],
            free: vec![0; inst.num_machines],
        };
        for e in entries {
            v.started[e.job] += 1;
            v.ready[e.job] = v.ready[e.job].max(e.end);
            v.free[e.machine] = v.free[e.machine].max(e.end);
        }
        v
    }

    /// Jobs whose next operation is unstarted, whose previous operation has
    /// finished, and which have an idle eligible machine; with those machines.
    pub fn candidates(&self, inst: &RawInstance) -> Vec<(usize, Vec<(usize, u64)>)> {
        let mut out = Vec::new();
        for (j, job) in inst.jobs.iter().enumerate() {
            let s = self.started[j];
            if s >= job.operations.len() || self.ready[j] > self.clock {
                continue;
            }
            let ms: Vec<(usize, u64)> = job.operations[s]
                .alternatives
                .iter()
                .map(|a| (a.machine as usize - 1, a.duration))
                .filter(|(m, _)| self.free[*m] <= self.clock)
                .collect();
            if !ms.is_empty() {
                out.push((j, ms));
            }
        }
        out
    }
}

/// Z value of a job under a rule, as an exact fraction.
pub fn rule_value(inst: &RawInstance, view: &View, rule: JobRule, job: usize) -> Frac {
    let j = view.started[job];
    let n = inst.jobs[job].operations.len();
    match rule {
        JobRule::Spt => mean(inst, job, j),
        JobRule::Mwkr => sum_means(inst, job, j, n),
        JobRule::FddMwkr => sum_means(inst, job, 0, j).div(sum_means(inst, job, j, n)),
        JobRule::Mor => Frac::new((n - j) as u128, 1),
        JobRule::Lrm => sum_means(inst, job, j + 1, n),
        JobRule::Fifo => Frac::new((view.clock - view.ready[job]) as u128, 1),
    }
}

/// The rule's pick among the candidate jobs, lowest index on ties.
pub fn oracle_job(inst: &RawInstance, view: &View, rule: JobRule) -> Option<usize> {
    let maximize = !matches!(rule, JobRule::Spt | JobRule::FddMwkr);
    let cands = view.candidates(inst);
    let mut best: Option<(usize, Frac)> = None;
    for (j, _) in cands {
        let z = rule_value(inst, view, rule, j);
        let better = match best {
            None => true,
            Some((_, b)) => {
                let c = z.cmp(b);
                if maximize {
                    c == Ordering::Greater
                } else {
                    c == Ordering::Less
                }
            }
        };
        if better {
            best = Some((j, z));
        }
    }
    best.map(|(j, _)| j)
}

pub fn oracle_machine(inst: &RawInstance, view: &View, rule: MachineRule, job: usize) -> Option<usize> {
    let cands = view.candidates(inst);
    let (_, ms) = cands.into_iter().find(|(j, _)| *j == job)?;
    let key = |&(m, d): &(usize, u64)| match rule {
        MachineRule::Spt => (d as i128, m),
        MachineRule::Lpt => (-(d as i128), m),
    };
    ms.iter().min_by_key(|x| key(x)).map(|(m, _)| *m)
}

/// State of the reference non-delay scheduler.
#[derive(Debug, Clone)]
pub struct NdState {
    pub view: View,
    pub entries: Vec<ScheduleEntry>,
}

impl NdState {
    pub fn new(inst: &RawInstance) -> Self {
        NdState { view: View::from_entries(inst, &[], 0), entries: Vec::new() }
    }

    pub fn done(&self, inst: &RawInstance) -> bool {
        self.view.started.iter().zip(&inst.jobs).all(|(&s, j)| s == j.operations.len())
    }

    pub fn makespan(&self) -> u64 {
        self.entries.iter().map(|e| e.end).max().unwrap_or(0)
    }

    /// Start `job` on `machine` now, then move the clock forward to the next
    /// completion until some decision is possible or all work is placed.
    pub fn apply(&mut self, inst: &RawInstance, job: usize, machine: usize) {
        let stage = self.view.started[job];
        let d = inst.jobs[job].operations[stage]
            .alternatives
            .iter()
            .find(|a| a.machine as usize == machine + 1)
            .expect("eligible")
            .duration;
        let start = self.view.clock;
        let e = ScheduleEntry { job, stage, machine, start, end: start + d };
        self.entries.push(e);
        self.view.started[job] += 1;
        self.view.ready[job] = e.end;
        self.view.free[machine] = e.end;
        while !self.done(inst) && self.view.candidates(inst).is_empty() {
            let next = self.view.free.iter().copied().filter(|&t| t > self.view.clock).min();
            self.view.clock = next.expect("some machine is still running");
        }
    }
}

/// Every complete non-delay decision sequence with its schedule length.
pub fn enumerate_non_delay(inst: &RawInstance, limit: usize) -> Vec<(Vec<(usize, usize)>, u64)> {
    fn rec(
        inst: &RawInstance,
        st: &NdState,
        path: &mut Vec<(usize, usize)>,
        out: &mut Vec<(Vec<(usize, usize)>, u64)>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if st.done(inst) {
            out.push((path.clone(), st.makespan()));
            return;
        }
        for (j, ms) in st.view.candidates(inst) {
            for (m, _) in ms {
                let mut next = st.clone();
                next.apply(inst, j, m);
                path.push((j, m));
                rec(inst, &next, path, out, limit);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(inst, &NdState::new(inst), &mut Vec::new(), &mut out, limit);
    out
}

/// Optimal makespan by branch and bound over semi-active schedules: each
/// step appends any job's next operation to any eligible machine at the
/// earliest time both are free.
pub fn optimal_makespan(inst: &RawInstance, upper: u64) -> u64 {
    struct S<'a> {
        inst: &'a RawInstance,
        best: u64,
        min_rest: Vec<Vec<u64>>,
    }
    fn rec(s: &mut S<'_>, started: &mut Vec<usize>, ready: &mut Vec<u64>, free: &mut Vec<u64>, cur: u64) {
        let lb = (0..started.len()).map(|j| ready[j] + s.min_rest[j][started[j]]).max().unwrap_or(0).max(cur);
        if lb >= s.best {
            return;
        }
        if started.iter().zip(&s.inst.jobs).all(|(&k, j)| k == j.operations.len()) {
            s.best = cur;
            return;
        }
        for j in 0..started.len() {
            let k = started[j];
            if k == s.inst.jobs[j].operations.len() {
                continue;
            }
            let alts = s.inst.jobs[j].operations[k].alternatives.clone();
            for a in alts {
                let m = a.machine as usize - 1;
                let start = ready[j].max(free[m]);
                let end = start + a.duration;
                let (r0, f0) = (ready[j], free[m]);
                started[j] += 1;
                ready[j] = end;
                free[m] = end;
                rec(s, started, ready, free, cur.max(end));
                started[j] -= 1;
                ready[j] = r0;
                free[m] = f0;
            }
        }
    }
    let min_rest = inst
        .jobs
        .iter()
        .map(|j| {
            let mut v = vec![0u64; j.operations.len() + 1];
            for k in (0..j.operations.len()).rev() {
                v[k] = v[k + 1] + j.operations[k].alternatives.iter().map(|a| a.duration).min().unwrap();
            }
            v
        })
        .collect();
    let mut s = S { inst, best: upper + 1, min_rest };
    rec(
        &mut s,
        &mut vec![0; inst.num_jobs],
        &mut vec![0; inst.num_jobs],
        &mut vec![0; inst.num_machines],
        0,
    );
    s.best
}
