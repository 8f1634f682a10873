//! Per-machine lanes with busy and idle intervals, ready for plotting.

use serde::{Deserialize, Serialize};

use crate::schedule::Schedule;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bar {
    pub job: usize,
    pub stage: usize,
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lane {
    pub machine: usize,
    pub bars: Vec<Bar>,
    /// Idle intervals within `[0, makespan)`.
    pub vacancies: Vec<(u64, u64)>,
    pub busy: u64,
    pub vacancy: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gantt {
    pub makespan: u64,
    pub num_machines: usize,
    pub lanes: Vec<Lane>,
    pub busy_total: u64,
    pub vacancy_total: u64,
}

impl Gantt {
    /// `num_machines` defaults to the highest machine used in the schedule.
    pub fn from_schedule(schedule: &Schedule, num_machines: Option<usize>) -> Self {
        let num_machines = num_machines.unwrap_or_else(|| schedule.num_machines_used());
        let makespan = schedule.entries.iter().map(|e| e.end).max().unwrap_or(0);
        let mut lanes: Vec<Lane> = (0..num_machines)
            .map(|machine| Lane {
                machine,
                bars: Vec::new(),
                vacancies: Vec::new(),
                busy: 0,
                vacancy: 0,
            })
            .collect();
        for e in &schedule.entries {
            if let Some(lane) = lanes.get_mut(e.machine) {
                lane.bars.push(Bar { job: e.job, stage: e.stage, start: e.start, end: e.end });
            }
        }
        for lane in &mut lanes {
            lane.bars.sort_by_key(|b| (b.start, b.end));
            let mut cursor = 0;
            for b in &lane.bars {
                if b.start > cursor {
                    lane.vacancies.push((cursor, b.start));
                }
                lane.busy += b.end - b.start;
                cursor = cursor.max(b.end);
            }
            if cursor < makespan {
                lane.vacancies.push((cursor, makespan));
            }
            lane.vacancy = lane.vacancies.iter().map(|(a, b)| b - a).sum();
        }
        Self {
            makespan,
            num_machines,
            busy_total: lanes.iter().map(|l| l.busy).sum(),
            vacancy_total: lanes.iter().map(|l| l.vacancy).sum(),
            lanes,
        }
    }

    /// Per-machine busy fraction of the makespan.
    pub fn utilization(&self) -> Vec<f64> {
        self.lanes
            .iter()
            .map(|l| if self.makespan == 0 { 0.0 } else { l.busy as f64 / self.makespan as f64 })
            .collect()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("gantt serializes")
    }
}
