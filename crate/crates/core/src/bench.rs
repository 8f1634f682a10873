//! Benchmark file discovery, dispatching-rule sweeps and run reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispatch::{Action, JobRule, MachineRule};
use crate::env::{fixed_action_rollout, EnvError};
use crate::gantt::Gantt;
use crate::instance::{ParseError, RawInstance};
use crate::schedule::Schedule;

pub const BRANDIMARTE: [&str; 10] = ["mk01", "mk02", "mk03", "mk04", "mk05", "mk06", "mk07", "mk08", "mk09", "mk10"];
pub const HURINK_SETS: [&str; 3] = ["edata", "rdata", "vdata"];
const EXTENSIONS: [&str; 3] = ["fjs", "txt", "data"];

/// `$FJSP_BENCHMARK_DIR`, or the `data/` directory of this repository.
pub fn benchmark_dir() -> PathBuf {
    std::env::var_os("FJSP_BENCHMARK_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
            manifest.ancestors().nth(2).unwrap_or(manifest).join("data")
        })
}

/// Find `name` in `dir`, ignoring case and an optional known extension.
pub fn locate(dir: &Path, name: &str) -> Option<PathBuf> {
    let want = name.to_ascii_lowercase();
    let mut hits: Vec<PathBuf> = std::fs::read_dir(dir)
        .ok()?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .filter(|p| {
            let file = p.file_name().and_then(|f| f.to_str()).unwrap_or("").to_ascii_lowercase();
            file == want || EXTENSIONS.iter().any(|ext| file == format!("{want}.{ext}"))
        })
        .collect();
    hits.sort();
    hits.into_iter().next()
}

/// Expected location of one benchmark file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkFile {
    pub name: String,
    pub path: Option<PathBuf>,
}

/// MK01..MK10 under `dir` (either directly or in a `brandimarte/` folder).
pub fn brandimarte_files(dir: &Path) -> Vec<BenchmarkFile> {
    BRANDIMARTE
        .iter()
        .map(|n| BenchmarkFile {
            name: n.to_string(),
            path: locate(dir, n).or_else(|| locate(&dir.join("brandimarte"), n)),
        })
        .collect()
}

/// la01..la40 in each of `edata`, `rdata`, `vdata` under `dir` (or `dir/hurink`).
pub fn hurink_files(dir: &Path) -> Vec<BenchmarkFile> {
    let mut out = Vec::new();
    for set in HURINK_SETS {
        for i in 1..=40 {
            let n = format!("la{i:02}");
            let path = locate(&dir.join(set), &n).or_else(|| locate(&dir.join("hurink").join(set), &n));
            out.push(BenchmarkFile { name: format!("{set}/{n}"), path });
        }
    }
    out
}

/// Every instance file under `path` (recursively), or `path` itself.
pub fn instance_files(path: &Path) -> std::io::Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut out = Vec::new();
    let mut stack = vec![path.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir)? {
            let p = entry?.path();
            if p.is_dir() {
                stack.push(p);
            } else if p
                .extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
            {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Instance label: the path relative to `root` without its extension.
pub fn instance_name(path: &Path, root: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    let rel = if rel.as_os_str().is_empty() { Path::new(path.file_name().unwrap_or_default()) } else { rel };
    rel.with_extension("").to_string_lossy().replace('\\', "/")
}

#[derive(Debug, Clone)]
pub struct NamedInstance {
    pub name: String,
    pub instance: Arc<RawInstance>,
}

#[derive(Debug)]
pub struct LoadReport {
    pub loaded: Vec<NamedInstance>,
    pub failed: Vec<(String, ParseError)>,
}

/// Parse every file; failures are collected rather than aborting.
pub fn load_instances(files: &[PathBuf], root: &Path) -> LoadReport {
    let results: Vec<(String, Result<RawInstance, ParseError>)> =
        files.par_iter().map(|p| (instance_name(p, root), RawInstance::from_file(p))).collect();
    let mut loaded = Vec::new();
    let mut failed = Vec::new();
    for (name, r) in results {
        match r {
            Ok(inst) => loaded.push(NamedInstance { name, instance: Arc::new(inst) }),
            Err(e) => failed.push((name, e)),
        }
    }
    LoadReport { loaded, failed }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub instance: String,
    pub job_rule: JobRule,
    pub machine_rule: MachineRule,
    pub makespan: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Per-instance minimum over all evaluated rule pairs, in instance order.
    pub min_pdr: Vec<(String, u64)>,
}

/// Roll out every (job rule, machine rule) pair on every instance.
/// Instances run in parallel; rows come back in input order.
pub fn pdr_sweep(
    instances: &[NamedInstance],
    job_rules: &[JobRule],
    machine_rules: &[MachineRule],
) -> Result<SweepTable, EnvError> {
    let per_instance: Vec<Result<Vec<SweepRow>, EnvError>> = instances
        .par_iter()
        .map(|ni| {
            let mut rows = Vec::new();
            for &jr in job_rules {
                for &mr in machine_rules {
                    let ep = fixed_action_rollout(&ni.instance, Action::from_rules(jr, mr))?;
                    rows.push(SweepRow {
                        instance: ni.name.clone(),
                        job_rule: jr,
                        machine_rule: mr,
                        makespan: ep.makespan(),
                    });
                }
            }
            Ok(rows)
        })
        .collect();
    let mut table = SweepTable::default();
    for rows in per_instance {
        let rows = rows?;
        if let Some(min) = rows.iter().map(|r| r.makespan).min() {
            table.min_pdr.push((rows[0].instance.clone(), min));
        }
        table.rows.extend(rows);
    }
    Ok(table)
}

impl SweepTable {
    fn min_for(&self, instance: &str) -> Option<u64> {
        self.min_pdr.iter().find(|(n, _)| n == instance).map(|(_, m)| *m)
    }

    /// Mean makespan of one rule pair across instances.
    pub fn average(&self, job_rule: JobRule, machine_rule: MachineRule) -> Option<f64> {
        let v: Vec<u64> = self
            .rows
            .iter()
            .filter(|r| r.job_rule == job_rule && r.machine_rule == machine_rule)
            .map(|r| r.makespan)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<u64>() as f64 / v.len() as f64)
    }

    pub fn min_pdr_average(&self) -> Option<f64> {
        let n = self.min_pdr.len();
        (n > 0).then(|| self.min_pdr.iter().map(|(_, m)| *m).sum::<u64>() as f64 / n as f64)
    }

    fn pairs(&self) -> Vec<(JobRule, MachineRule)> {
        let mut seen = Vec::new();
        for r in &self.rows {
            if !seen.contains(&(r.job_rule, r.machine_rule)) {
                seen.push((r.job_rule, r.machine_rule));
            }
        }
        seen
    }

    /// Long format: `instance,job_rule,machine_rule,makespan,min_pdr`, then
    /// one `AVG` row per rule pair whose `min_pdr` is the mean minimum.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("instance,job_rule,machine_rule,makespan,min_pdr\n");
        for r in &self.rows {
            let min = self.min_for(&r.instance).unwrap_or(r.makespan);
            out.push_str(&format!("{},{},{},{},{}\n", r.instance, r.job_rule, r.machine_rule, r.makespan, min));
        }
        let min_avg = self.min_pdr_average().unwrap_or(0.0);
        for (jr, mr) in self.pairs() {
            let avg = self.average(jr, mr).unwrap_or(0.0);
            out.push_str(&format!("AVG,{jr},{mr},{avg:.2},{min_avg:.2}\n"));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        #[derive(Serialize)]
        struct Avg {
            job_rule: JobRule,
            machine_rule: MachineRule,
            makespan: f64,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            rows: &'a [SweepRow],
            min_pdr: BTreeMap<&'a str, u64>,
            averages: Vec<Avg>,
            min_pdr_average: Option<f64>,
        }
        let out = Out {
            rows: &self.rows,
            min_pdr: self.min_pdr.iter().map(|(n, m)| (n.as_str(), *m)).collect(),
            averages: self
                .pairs()
                .into_iter()
                .map(|(jr, mr)| Avg { job_rule: jr, machine_rule: mr, makespan: self.average(jr, mr).unwrap_or(0.0) })
                .collect(),
            min_pdr_average: self.min_pdr_average(),
        };
        serde_json::to_string_pretty(&out).expect("sweep serializes")
    }
}

/// One result row for a single method on a single instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub method: String,
    pub makespan: u64,
    pub wall_seconds: f64,
    pub seed: Option<u64>,
    pub utilization: Vec<f64>,
}

impl RunReport {
    pub fn new(
        instance: &str,
        method: &str,
        schedule: &Schedule,
        num_machines: usize,
        wall_seconds: f64,
        seed: Option<u64>,
    ) -> Self {
        Self {
            instance: instance.to_string(),
            method: method.to_string(),
            makespan: schedule.makespan,
            wall_seconds,
            seed,
            utilization: Gantt::from_schedule(schedule, Some(num_machines)).utilization(),
        }
    }
}
