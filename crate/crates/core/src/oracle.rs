//! Exhaustive reference solver.

use serde::Serialize;

use crate::accept::accepts;
use crate::model::{Decision, GenericInstance, SolveReport};

/// Acceptance count of one feasible decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TallyEntry {
    pub decision: Decision,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    #[serde(flatten)]
    pub report: SolveReport,
    pub tally: Vec<TallyEntry>,
}

/// Evaluates every agent on every feasible decision and returns the
/// maximizer, ties going to the smallest outcome id and then the smallest
/// rule id.
pub fn oracle_max_accept(instance: &GenericInstance) -> OracleReport {
    let tally: Vec<TallyEntry> = instance
        .feasible_decisions()
        .into_iter()
        .map(|decision| {
            let count = instance.agents().iter().filter(|a| accepts(a, &decision, instance)).count();
            TallyEntry { decision, count }
        })
        .collect();
    let mut best = &tally[0];
    for entry in &tally[1..] {
        if entry.count > best.count {
            best = entry;
        }
    }
    let report = instance.report(best.decision.clone());
    debug_assert_eq!(report.acceptance_count, best.count);
    OracleReport { report, tally }
}

/// Maximum acceptance count over all feasible decisions.
pub fn oracle_max_count(instance: &GenericInstance) -> usize {
    instance
        .feasible_decisions()
        .iter()
        .map(|d| instance.agents().iter().filter(|a| accepts(a, d, instance)).count())
        .max()
        .unwrap_or(0)
}
