//! Flexible job-shop scheduling as a chronological discrete-event simulation.
//!
//! - [`instance`]: benchmark parser and the signed-index operation table ([`table`]).
//! - [`simulator`]: assign / advance / release transitions and the area reward.
//! - [`dispatch`]: job and machine priority rules, and the 12-way action code.
//! - [`env`]: reset/step facade with the two-part state vector.
//! - [`agent`]: PPO with prioritized replay on one-hidden-layer perceptrons.
//! - [`validate`], [`gantt`], [`bench`]: independent checking, plotting data and sweeps.

pub mod agent;
pub mod bench;
pub mod dispatch;
pub mod env;
pub mod gantt;
pub mod generate;
pub mod instance;
pub mod schedule;
pub mod simulator;
pub mod snapshot;
pub mod table;
pub mod validate;
pub mod work;

pub use dispatch::{Action, DispatchError, JobRule, MachineRule, NUM_ACTIONS};
pub use env::{fixed_action_rollout, rollout, EnvError, Episode, FjspEnv, StateVector, Step};
pub use instance::{parse_instance, ParseError, RawInstance};
pub use schedule::{FormatError, Schedule, ScheduleEntry};
pub use simulator::{SimError, SimState};
pub use snapshot::{SnapshotError, StateSnapshot};
pub use table::OpTable;
pub use validate::{validate, Verdict, Violation};
