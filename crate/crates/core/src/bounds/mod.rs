//! Worst-case acceptance rates over classes of dichotomous-choice instances,
//! measured by exhaustive enumeration or seeded adversarial search and
//! compared with closed forms.

mod class;
mod enumerate;
mod search;

use serde::Serialize;
use thiserror::Error;

use crate::rate::Rate;
use crate::schema::AdcFile;

pub use class::{Assumption, InstanceClass, CLASS_IDS, TABLE_ROWS};
pub use enumerate::{brute_force_max, canonical_instances, class_size, enumerate_instances, MAX_N};
pub use search::ClassSampler;

/// Exhaustive mode is chosen automatically up to this many instances
/// (counted over the full, unquotiented class) once `n` exceeds four.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("unknown class `{0}` (expected one of: {ids})", ids = CLASS_IDS.join(", "))]
    UnknownClass(String),
    #[error("class abs-disj-k needs --k")]
    MissingK,
    #[error("class `{0}` takes no k")]
    UnexpectedK(String),
    #[error("class `{0}` has no closed-form rate")]
    NoFormula(String),
    #[error("worst-case rates need at least 2 agents, got {0}")]
    TooFewAgents(u32),
    #[error("at most {MAX_N} agents are supported, got {0}")]
    TooManyAgents(u32),
    #[error("class {class} has no instances with n = {n}")]
    Unsatisfiable { class: String, n: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Randomized { seed: u64, samples: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeChoice {
    Exhaustive,
    Randomized,
    /// Exhaustive for `n ≤ 4` or classes under [`EXHAUSTIVE_LIMIT`].
    Auto,
}

impl ModeChoice {
    pub fn resolve(self, class: &InstanceClass, n: u32, seed: u64, samples: u64) -> Mode {
        let exhaustive = match self {
            ModeChoice::Exhaustive => true,
            ModeChoice::Randomized => false,
            ModeChoice::Auto => n <= 4 || class_size(class, n) < EXHAUSTIVE_LIMIT,
        };
        if exhaustive {
            Mode::Exhaustive
        } else {
            Mode::Randomized { seed, samples }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub n: u32,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    pub class_size: u128,
    pub observed_min_count: u32,
    pub observed_min_rate: Rate,
    pub formula_rate: Rate,
    /// Exhaustive: observed equals formula. Randomized: observed is at
    /// least the formula.
    #[serde(rename = "match")]
    pub matches: bool,
    pub equality_witnessed: bool,
    pub witness: AdcFile,
}

/// The closed-form worst-case rate of a named class.
pub fn table1_formula(class: &InstanceClass, n: u32) -> Result<Rate, BoundsError> {
    class.formula(n)
}

/// The smallest best-decision acceptance rate over the class.
pub fn worst_case_rate(class: &InstanceClass, n: u32, mode: Mode) -> Result<BoundsReport, BoundsError> {
    if n > MAX_N {
        return Err(BoundsError::TooManyAgents(n));
    }
    let formula_rate = class.formula(n)?;
    let worst = match mode {
        Mode::Exhaustive => enumerate::exhaustive_min(class, n),
        Mode::Randomized { seed, samples } => search::randomized_min(class, n, seed, samples),
    }
    .ok_or_else(|| BoundsError::Unsatisfiable { class: class.id(), n })?;
    let observed = Rate::new(worst.count as u64, n as u64);
    let (mode_name, seed, samples, matches) = match mode {
        Mode::Exhaustive => ("exhaustive", None, None, observed == formula_rate),
        Mode::Randomized { seed, samples } => ("randomized", Some(seed), Some(samples), observed >= formula_rate),
    };
    Ok(BoundsReport {
        class: class.id(),
        k: class.k(),
        n,
        mode: mode_name,
        seed,
        samples,
        class_size: class_size(class, n),
        observed_min_count: worst.count,
        observed_min_rate: observed,
        formula_rate,
        matches,
        equality_witnessed: observed == formula_rate,
        witness: AdcFile::from(&worst.instance),
    })
}

/// [`worst_case_rate`] for each `n`.
pub fn verify_row(
    class: &InstanceClass,
    ns: &[u32],
    mode: ModeChoice,
    seed: u64,
    samples: u64,
) -> Result<Vec<BoundsReport>, BoundsError> {
    ns.iter().map(|&n| worst_case_rate(class, n, mode.resolve(class, n, seed, samples))).collect()
}
