//! Emitted solutions and their CSV / JSON forms.
//!
//! Both forms use 0-based job, stage and machine indices. CSV columns are
//! `job,stage,machine,start,end`; JSON is `{"makespan": .., "entries": [..]}`
//! with the same field names per entry.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub job: usize,
    pub stage: usize,
    /// 0-based machine index.
    pub machine: usize,
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub makespan: u64,
    pub entries: Vec<ScheduleEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("unrecognised schedule format for {0}")]
    UnknownFormat(String),
}

impl Schedule {
    pub fn from_entries(mut entries: Vec<ScheduleEntry>) -> Self {
        entries.sort_by_key(|e| (e.start, e.machine, e.job, e.stage));
        let makespan = entries.iter().map(|e| e.end).max().unwrap_or(0);
        Self { makespan, entries }
    }

    pub fn num_machines_used(&self) -> usize {
        self.entries.iter().map(|e| e.machine + 1).max().unwrap_or(0)
    }

    /// Busy time per machine for `num_machines` machines.
    pub fn busy_per_machine(&self, num_machines: usize) -> Vec<u64> {
        let mut busy = vec![0; num_machines];
        for e in &self.entries {
            if e.machine < num_machines {
                busy[e.machine] += e.end - e.start;
            }
        }
        busy
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), FormatError> {
        let mut out = csv::Writer::from_writer(w);
        for e in &self.entries {
            out.serialize(e)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self, FormatError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let entries = rdr
            .deserialize()
            .collect::<Result<Vec<ScheduleEntry>, _>>()?;
        Ok(Self::from_entries(entries))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    /// JSON keeps the declared makespan as written, so a validator can check it.
    pub fn from_json_str(s: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Load by extension: `.csv` or `.json`.
    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self, FormatError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Self::read_csv(text.as_bytes()),
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::from_json_str(&text),
            _ => Err(FormatError::UnknownFormat(path.display().to_string())),
        }
    }
}
