//! Plain-text parameter files.
//!
//! ```text
//! fjsp-checkpoint 1
//! actor <input> <hidden> <output>
//! <one parameter per line>
//! critic <input> <hidden> <output>
//! <one parameter per line>
//! ```
//!
//! Parameters are written with Rust's shortest round-trip float formatting,
//! so a save/load cycle reproduces every bit.

use std::fmt::Write as _;
use std::path::Path;

use super::mlp::Mlp;
use super::ppo::{PolicyNet, ValueNet};

pub const CHECKPOINT_MAGIC: &str = "fjsp-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub policy: PolicyNet,
    pub value: ValueNet,
}

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("not a checkpoint file")]
    BadMagic,
    #[error("checkpoint version {found} is not supported (expected {CHECKPOINT_VERSION})")]
    Version { found: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("file ends early: {0}")]
    Truncated(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut out = format!("{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}\n");
        write_net(&mut out, "actor", &self.policy.mlp);
        write_net(&mut out, "critic", &self.value.mlp);
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CheckpointError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (_, head) = lines.next().ok_or(CheckpointError::BadMagic)?;
        let mut parts = head.split_whitespace();
        if parts.next() != Some(CHECKPOINT_MAGIC) {
            return Err(CheckpointError::BadMagic);
        }
        let version = parts.next().unwrap_or("");
        if version != CHECKPOINT_VERSION.to_string() {
            return Err(CheckpointError::Version { found: version.to_string() });
        }
        let actor = read_net(&mut lines, "actor")?;
        let critic = read_net(&mut lines, "critic")?;
        if let Some((line, extra)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(CheckpointError::Malformed { line, message: format!("unexpected trailing content {extra:?}") });
        }
        if actor.output_dim() != crate::dispatch::NUM_ACTIONS {
            return Err(CheckpointError::Shape(format!(
                "actor has {} outputs, expected {}",
                actor.output_dim(),
                crate::dispatch::NUM_ACTIONS
            )));
        }
        if critic.output_dim() != 1 || critic.input_dim() != actor.input_dim() {
            return Err(CheckpointError::Shape("critic shape does not match actor".into()));
        }
        Ok(Self { policy: PolicyNet { mlp: actor }, value: ValueNet { mlp: critic } })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CheckpointError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CheckpointError> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn write_net(out: &mut String, name: &str, net: &Mlp) {
    let _ = writeln!(out, "{name} {} {} {}", net.input_dim(), net.hidden_dim(), net.output_dim());
    for p in net.params() {
        let _ = writeln!(out, "{p}");
    }
}

fn read_net<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    name: &str,
) -> Result<Mlp, CheckpointError> {
    let (line, head) = lines
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| CheckpointError::Truncated(format!("missing {name} section")))?;
    let fields: Vec<&str> = head.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != name {
        return Err(CheckpointError::Malformed { line, message: format!("expected `{name} <in> <hidden> <out>`") });
    }
    let dim = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CheckpointError::Malformed { line, message: format!("bad dimension {s:?}") })
    };
    let (input, hidden, output) = (dim(fields[1])?, dim(fields[2])?, dim(fields[3])?);
    let count = Mlp::zeros(input, hidden, output).num_params();
    let mut params = Vec::with_capacity(count);
    for _ in 0..count {
        let (line, text) = lines
            .next()
            .ok_or_else(|| CheckpointError::Truncated(format!("{name} needs {count} parameters")))?;
        let v: f64 = text
            .parse()
            .map_err(|_| CheckpointError::Malformed { line, message: format!("bad parameter {text:?}") })?;
        if !v.is_finite() {
            return Err(CheckpointError::Malformed { line, message: "non-finite parameter".into() });
        }
        params.push(v);
    }
    Ok(Mlp::from_params(input, hidden, output, params).expect("count matches shape"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample() -> Checkpoint {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        Checkpoint { policy: PolicyNet::new(4, &mut rng), value: ValueNet::new(4, &mut rng) }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let c = sample();
        let back = Checkpoint::from_text(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_wrong_version_and_magic() {
        let text = sample().to_text().replacen("fjsp-checkpoint 1", "fjsp-checkpoint 7", 1);
        assert!(matches!(Checkpoint::from_text(&text), Err(CheckpointError::Version { .. })));
        assert!(matches!(Checkpoint::from_text("hello"), Err(CheckpointError::BadMagic)));
    }

    #[test]
    fn rejects_truncation() {
        let text = sample().to_text();
        let cut: String = text.lines().take(30).map(|l| format!("{l}\n")).collect();
        assert!(matches!(Checkpoint::from_text(&cut), Err(CheckpointError::Truncated(_))));
    }

    #[test]
    fn rejects_mismatched_critic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = Checkpoint { policy: PolicyNet::new(4, &mut rng), value: ValueNet::new(6, &mut rng) };
        assert!(matches!(Checkpoint::from_text(&c.to_text()), Err(CheckpointError::Shape(_))));
    }
}
