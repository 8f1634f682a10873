use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fjsp::agent::{greedy_rollout, train, Checkpoint, TrainConfig};
use fjsp::bench::{instance_files, load_instances, pdr_sweep, RunReport};
use fjsp::gantt::Gantt;
use fjsp::{validate, JobRule, MachineRule, RawInstance, Schedule};

#[derive(Parser)]
#[command(name = "fjsp-bench", version, about = "Flexible job-shop benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Makespans of constant dispatching-rule pairs over instance files.
    Pdr {
        #[arg(long)]
        instances: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "spt,mwkr,fdd_mwkr,mor,lrm,fifo")]
        job_rules: Vec<JobRule>,
        #[arg(long, value_delimiter = ',', default_value = "spt")]
        machine_rules: Vec<MachineRule>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Train a policy on one instance.
    Train {
        #[arg(long)]
        instances: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wall-clock limit in seconds.
        #[arg(long, default_value_t = 3600.0)]
        time_limit: f64,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Greedy rollout of a saved policy.
    Eval {
        #[arg(long)]
        instances: PathBuf,
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Check a schedule against an instance.
    Validate {
        schedule: PathBuf,
        #[arg(long)]
        instances: PathBuf,
    },
    /// Per-machine lanes and idle intervals as JSON.
    Gantt {
        schedule: PathBuf,
        /// Instance file, used for the machine count.
        #[arg(long)]
        instances: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, file: &str, text: &str) -> Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(file);
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn schedule_text(s: &Schedule, format: Format) -> (&'static str, String) {
    match format {
        Format::Csv => ("schedule.csv", s.to_csv_string()),
        Format::Json => ("schedule.json", s.to_json_string()),
    }
}

fn load_one(path: &Path) -> Result<Arc<RawInstance>> {
    Ok(Arc::new(RawInstance::from_file(path).with_context(|| format!("parsing {}", path.display()))?))
}

fn instance_label(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Pdr { instances, job_rules, machine_rules, out, format } => {
            let files = instance_files(&instances).with_context(|| format!("reading {}", instances.display()))?;
            if files.is_empty() {
                bail!("no instance files under {}", instances.display());
            }
            let loaded = load_instances(&files, &instances);
            for (name, err) in &loaded.failed {
                eprintln!("skipping {name}: {err}");
            }
            let table = pdr_sweep(&loaded.loaded, &job_rules, &machine_rules)?;
            match format {
                Format::Csv => emit(out.as_deref(), "pdr.csv", &table.to_csv())?,
                Format::Json => emit(out.as_deref(), "pdr.json", &(table.to_json_string() + "\n"))?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Train { instances, seed, time_limit, max_iters, out, format } => {
            let inst = load_one(&instances)?;
            let mut config = TrainConfig {
                time_limit: Some(Duration::from_secs_f64(time_limit.max(0.0))),
                ..TrainConfig::default()
            };
            if let Some(n) = max_iters {
                config.max_episodes = n;
            }
            let started = Instant::now();
            let outcome = train(inst.clone(), config, seed)?;
            let wall = started.elapsed().as_secs_f64();
            std::fs::create_dir_all(&out)?;
            outcome.checkpoint().save(out.join("checkpoint.txt"))?;
            outcome.log.write(out.join("convergence.csv"))?;
            let (name, text) = schedule_text(&outcome.best_schedule, format);
            std::fs::write(out.join(name), text)?;
            let report = RunReport::new(
                &instance_label(&instances),
                "ppo",
                &outcome.best_schedule,
                inst.num_machines,
                wall,
                Some(seed),
            );
            std::fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
            println!(
                "{} iterations ({:?}), best makespan {}, greedy makespan {}, {:.1}s",
                outcome.iterations,
                outcome.stop,
                outcome.best_schedule.makespan,
                outcome.greedy.makespan(),
                wall
            );
            check(&inst, &outcome.best_schedule)
        }
        Command::Eval { instances, checkpoint, out, format } => {
            let inst = load_one(&instances)?;
            let ck = Checkpoint::load(&checkpoint).with_context(|| format!("loading {}", checkpoint.display()))?;
            let started = Instant::now();
            let ep = greedy_rollout(&ck.policy, &inst)?;
            let report = RunReport::new(
                &instance_label(&instances),
                "ppo-greedy",
                &ep.schedule,
                inst.num_machines,
                started.elapsed().as_secs_f64(),
                None,
            );
            println!("{}", serde_json::to_string(&report)?);
            if let Some(dir) = out.as_deref() {
                let (name, text) = schedule_text(&ep.schedule, format);
                emit(Some(dir), name, &text)?;
            }
            check(&inst, &ep.schedule)
        }
        Command::Validate { schedule, instances } => {
            let inst = load_one(&instances)?;
            let s = Schedule::from_file(&schedule).with_context(|| format!("reading {}", schedule.display()))?;
            check(&inst, &s)
        }
        Command::Gantt { schedule, instances, out } => {
            let s = Schedule::from_file(&schedule).with_context(|| format!("reading {}", schedule.display()))?;
            let machines = match instances {
                Some(p) => Some(load_one(&p)?.num_machines),
                None => None,
            };
            let g = Gantt::from_schedule(&s, machines);
            emit(out.as_deref(), "gantt.json", &(g.to_json_string() + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn check(inst: &RawInstance, s: &Schedule) -> Result<ExitCode> {
    let verdict = validate(inst, s);
    println!("{verdict}");
    Ok(if verdict.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
