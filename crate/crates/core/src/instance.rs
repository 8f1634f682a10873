//! Benchmark instance parsing.
//!
//! The text layout is the one shared by the Brandimarte and Hurink data sets:
//!
//! ```text
//! <jobs> <machines> [<avg machines per op>]
//! <ops> <alts> <machine> <time> ... <alts> <machine> <time> ...   (one line per job)
//! ```
//!
//! Machine ids in the file are 1-based and are kept that way in [`RawInstance`].

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// One processing alternative of an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    /// 1-based machine id.
    pub machine: u32,
    pub duration: u64,
}

/// An operation: a non-empty list of machine alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub alternatives: Vec<Alternative>,
}

impl Operation {
    pub fn duration_on(&self, machine: u32) -> Option<u64> {
        self.alternatives
            .iter()
            .find(|a| a.machine == machine)
            .map(|a| a.duration)
    }

    pub fn total_duration(&self) -> u64 {
        self.alternatives.iter().map(|a| a.duration).sum()
    }

    /// Arithmetic mean of the alternative durations.
    pub fn mean_duration(&self) -> f64 {
        self.total_duration() as f64 / self.alternatives.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    pub operations: Vec<Operation>,
}

/// A parsed benchmark problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawInstance {
    pub num_jobs: usize,
    pub num_machines: usize,
    /// Optional third header value. Hurink files write it as a decimal.
    pub avg_machines_per_op: Option<f64>,
    pub jobs: Vec<Job>,
}

/// Where in the input a token sits (1-based line, 1-based token within the line).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub token: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, token {}", self.line, self.token)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed header at line {line}: expected 2 or 3 numbers, found {found:?}")]
    MalformedHeader { line: usize, found: String },
    #[error("job {job} is truncated at {at}: {what} missing")]
    TruncatedJobLine {
        job: usize,
        at: Position,
        what: &'static str,
    },
    #[error("machine {machine} out of range 1..={num_machines} at {at}")]
    MachineOutOfRange {
        machine: i64,
        num_machines: usize,
        at: Position,
    },
    #[error("non-positive duration {duration} at {at}")]
    NonPositiveDuration { duration: i64, at: Position },
    #[error("expected an integer, found {text:?} at {at}")]
    InvalidToken { text: String, at: Position },
    #[error("job {job} declares {count} {what} at {at}; at least one is required")]
    EmptyList {
        job: usize,
        count: i64,
        what: &'static str,
        at: Position,
    },
    #[error("machine {machine} listed twice in one operation at {at}")]
    DuplicateMachine { machine: u32, at: Position },
    #[error("unexpected trailing token {text:?} at {at}")]
    TrailingTokens { text: String, at: Position },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

struct Token<'a> {
    text: &'a str,
    at: Position,
}

impl Token<'_> {
    fn int(&self) -> Result<i64, ParseError> {
        self.text.parse().map_err(|_| ParseError::InvalidToken {
            text: self.text.to_string(),
            at: self.at,
        })
    }
}

/// Parse a benchmark file's text.
pub fn parse_instance(text: &str) -> Result<RawInstance, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (header_line, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(ParseError::MalformedHeader {
            line: 1,
            found: String::new(),
        })?;
    let malformed = || ParseError::MalformedHeader {
        line: header_line,
        found: header.trim().to_string(),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(2..=3).contains(&fields.len()) {
        return Err(malformed());
    }
    let num_jobs: usize = fields[0].parse().map_err(|_| malformed())?;
    let num_machines: usize = fields[1].parse().map_err(|_| malformed())?;
    let avg_machines_per_op = match fields.get(2) {
        Some(f) => Some(f.parse::<f64>().map_err(|_| malformed())?),
        None => None,
    };
    if num_jobs == 0 || num_machines == 0 {
        return Err(malformed());
    }

    let mut tokens = lines.flat_map(|(line, l)| {
        l.split_whitespace().enumerate().map(move |(i, text)| Token {
            text,
            at: Position { line, token: i + 1 },
        })
    });
    let mut last = Position {
        line: header_line,
        token: fields.len(),
    };

    let mut jobs = Vec::with_capacity(num_jobs);
    for job in 0..num_jobs {
        let mut next = |what: &'static str| -> Result<Token<'_>, ParseError> {
            match tokens.next() {
                Some(t) => {
                    last = t.at;
                    Ok(t)
                }
                None => Err(ParseError::TruncatedJobLine { job, at: last, what }),
            }
        };
        let t = next("operation count")?;
        let op_count = t.int()?;
        if op_count <= 0 {
            return Err(ParseError::EmptyList {
                job,
                count: op_count,
                what: "operations",
                at: t.at,
            });
        }
        let mut operations = Vec::with_capacity(op_count as usize);
        for _ in 0..op_count {
            let t = next("alternative count")?;
            let alt_count = t.int()?;
            if alt_count <= 0 {
                return Err(ParseError::EmptyList {
                    job,
                    count: alt_count,
                    what: "machine alternatives",
                    at: t.at,
                });
            }
            let mut alternatives: Vec<Alternative> = Vec::with_capacity(alt_count as usize);
            for _ in 0..alt_count {
                let t = next("machine id")?;
                let machine = t.int()?;
                if machine < 1 || machine as usize > num_machines {
                    return Err(ParseError::MachineOutOfRange {
                        machine,
                        num_machines,
                        at: t.at,
                    });
                }
                let machine = machine as u32;
                if alternatives.iter().any(|a| a.machine == machine) {
                    return Err(ParseError::DuplicateMachine { machine, at: t.at });
                }
                let t = next("processing time")?;
                let duration = t.int()?;
                if duration <= 0 {
                    return Err(ParseError::NonPositiveDuration { duration, at: t.at });
                }
                alternatives.push(Alternative {
                    machine,
                    duration: duration as u64,
                });
            }
            operations.push(Operation { alternatives });
        }
        jobs.push(Job { operations });
    }

    if let Some(t) = tokens.next() {
        return Err(ParseError::TrailingTokens {
            text: t.text.to_string(),
            at: t.at,
        });
    }

    Ok(RawInstance {
        num_jobs,
        num_machines,
        avg_machines_per_op,
        jobs,
    })
}

impl std::str::FromStr for RawInstance {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_instance(s)
    }
}

impl RawInstance {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ParseError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        parse_instance(&text)
    }

    pub fn op_count(&self, job: usize) -> usize {
        self.jobs[job].operations.len()
    }

    pub fn total_ops(&self) -> usize {
        self.jobs.iter().map(|j| j.operations.len()).sum()
    }

    pub fn max_ops(&self) -> usize {
        self.jobs
            .iter()
            .map(|j| j.operations.len())
            .max()
            .unwrap_or(0)
    }

    pub fn operation(&self, job: usize, stage: usize) -> &Operation {
        &self.jobs[job].operations[stage]
    }

    /// Sum of every alternative duration in the file.
    pub fn total_listed_duration(&self) -> u64 {
        self.jobs
            .iter()
            .flat_map(|j| &j.operations)
            .map(Operation::total_duration)
            .sum()
    }

    /// Write the instance back in benchmark layout.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} {}", self.num_jobs, self.num_machines);
        if let Some(avg) = self.avg_machines_per_op {
            let _ = write!(out, " {avg}");
        }
        out.push('\n');
        for job in &self.jobs {
            let _ = write!(out, "{}", job.operations.len());
            for op in &job.operations {
                let _ = write!(out, " {}", op.alternatives.len());
                for a in &op.alternatives {
                    let _ = write!(out, " {} {}", a.machine, a.duration);
                }
            }
            out.push('\n');
        }
        out
    }
}
