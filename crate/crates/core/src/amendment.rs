//! Choosing the supermajority rule itself. Agents have single-peaked
//! preferences over thresholds, vote between the status quo rule and a
//! proposed rule, and accept as implementation-indifferent disjunctivists
//! with `Y_i = {v_i}` and `R_i = {peak_i}`.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::accept::accepts;
use crate::adc::{in_family, AdcAgent, AdcInstance, Alternative, Threshold};

/// How an agent whose peak lies strictly between the status quo and the
/// proposal votes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VotePolicy {
    /// The rule closer to the peak; equal distances favour the status quo.
    #[default]
    Nearer,
    StatusQuo,
    Proposal,
}

impl VotePolicy {
    pub const ALL: [VotePolicy; 3] = [VotePolicy::Nearer, VotePolicy::StatusQuo, VotePolicy::Proposal];
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AmendmentError {
    #[error("the electorate is empty")]
    NoVoters,
    #[error("expected {n} peaks, got {got}")]
    PeakCount { n: u32, got: usize },
    #[error("{what} threshold {t} is outside the supermajority range for n = {n}")]
    OutOfRange { what: &'static str, t: u32, n: u32 },
    #[error("status quo and proposal are the same rule {0}")]
    SameRule(Threshold),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AmendmentInstance {
    n: u32,
    peaks: Vec<Threshold>,
    status_quo: Threshold,
    policy: VotePolicy,
}

impl AmendmentInstance {
    pub fn new(peaks: Vec<Threshold>, status_quo: Threshold, policy: VotePolicy) -> Result<Self, AmendmentError> {
        let n = peaks.len() as u32;
        if n == 0 {
            return Err(AmendmentError::NoVoters);
        }
        if let Some(t) = peaks.iter().find(|t| !in_family(**t, n)) {
            return Err(AmendmentError::OutOfRange { what: "peak", t: t.0, n });
        }
        if !in_family(status_quo, n) {
            return Err(AmendmentError::OutOfRange { what: "status quo", t: status_quo.0, n });
        }
        Ok(AmendmentInstance { n, peaks, status_quo, policy })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn peaks(&self) -> &[Threshold] {
        &self.peaks
    }

    pub fn status_quo(&self) -> Threshold {
        self.status_quo
    }

    pub fn policy(&self) -> VotePolicy {
        self.policy
    }

    pub fn h(&self) -> Threshold {
        h_rule(&self.peaks, self.n)
    }

    /// The dichotomous instance for "keep `r` or switch to `p`".
    pub fn ballot(&self, r: Threshold, p: Threshold) -> Result<AdcInstance, AmendmentError> {
        let votes = induce_profile(&self.peaks, r, p, self.policy)?;
        let agents = self.peaks.iter().zip(&votes).map(|(peak, v)| AdcAgent::ii_disjunctive([peak.0], [*v])).collect();
        Ok(AdcInstance::with_full_family(votes, agents).expect("peaks are validated supermajority thresholds"))
    }
}

/// Each agent's vote between status quo `r` and proposal `p`.
pub fn induce_profile(
    peaks: &[Threshold],
    r: Threshold,
    p: Threshold,
    policy: VotePolicy,
) -> Result<Vec<Alternative>, AmendmentError> {
    if r == p {
        return Err(AmendmentError::SameRule(r));
    }
    let vote = |peak: Threshold| {
        let toward_p = if r < p { peak >= p } else { peak <= p };
        let toward_r = if r < p { peak <= r } else { peak >= r };
        if toward_p {
            Alternative::Proposal
        } else if toward_r {
            Alternative::StatusQuo
        } else {
            match policy {
                VotePolicy::Nearer if peak.0.abs_diff(p.0) < peak.0.abs_diff(r.0) => Alternative::Proposal,
                VotePolicy::Nearer | VotePolicy::StatusQuo => Alternative::StatusQuo,
                VotePolicy::Proposal => Alternative::Proposal,
            }
        }
    };
    Ok(peaks.iter().map(|&t| vote(t)).collect())
}

/// The largest supermajority threshold `t` such that at least `t - 1` agents
/// (that is, `δ(t)·n`) have a peak at or above `t`.
pub fn h_rule(peaks: &[Threshold], n: u32) -> Threshold {
    Threshold::family(n)
        .rev()
        .find(|t| peaks.iter().filter(|p| *p >= t).count() as u32 >= t.0 - 1)
        .unwrap_or_else(|| Threshold::majority(n))
}

/// A rule-selection decision: `rule` applied to the ballot chose `outcome`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AmendmentDecision {
    pub rule: Threshold,
    pub outcome: Threshold,
}

impl Serialize for AmendmentDecision {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AmendmentDecision", 2)?;
        s.serialize_field("rule", &self.rule.to_string())?;
        s.serialize_field("outcome", &self.outcome.to_string())?;
        s.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmendmentStep {
    #[serde(serialize_with = "as_rule_label")]
    pub status_quo: Threshold,
    #[serde(serialize_with = "as_rule_label")]
    pub proposal: Threshold,
    pub votes: Vec<Alternative>,
    pub decision: AmendmentDecision,
    pub accepted_by: Vec<usize>,
}

fn as_rule_label<S: Serializer>(t: &Threshold, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmendmentTrace {
    pub steps: Vec<AmendmentStep>,
    #[serde(rename = "final")]
    pub final_decision: AmendmentDecision,
}

/// Vote on `p` against `r` under the status quo rule `R^r`.
pub fn amendment_step(
    instance: &AmendmentInstance,
    r: Threshold,
    p: Threshold,
) -> Result<AmendmentStep, AmendmentError> {
    let ballot = instance.ballot(r, p)?;
    let report = ballot.report(ballot.decision(r));
    let outcome = match report.decision.outcome {
        Alternative::StatusQuo => r,
        Alternative::Proposal => p,
    };
    Ok(AmendmentStep {
        status_quo: r,
        proposal: p,
        votes: ballot.votes().to_vec(),
        decision: AmendmentDecision { rule: r, outcome },
        accepted_by: report.accepted_by,
    })
}

/// Propose one threshold higher at a time, deciding each proposal with the
/// current rule. Stops at the first rejected proposal or at unanimity.
pub fn amend_iterative(instance: &AmendmentInstance) -> AmendmentTrace {
    let mut r = instance.status_quo;
    let mut steps = Vec::new();
    while r.0 < instance.n {
        let step = amendment_step(instance, r, Threshold(r.0 + 1)).expect("adjacent thresholds differ");
        let passed = step.decision.outcome != r;
        steps.push(step);
        if !passed {
            break;
        }
        r = Threshold(r.0 + 1);
    }
    AmendmentTrace { steps, final_decision: AmendmentDecision { rule: r, outcome: r } }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneStepReport {
    #[serde(serialize_with = "as_rule_label")]
    pub h: Threshold,
    pub decision: AmendmentDecision,
    /// Present only when an amendment vote took place.
    pub votes: Option<Vec<Alternative>>,
    pub accepted_by: Option<Vec<usize>>,
    pub universal: Option<bool>,
}

/// Propose `h` directly against the status quo, decided by the status quo
/// rule. At or above `h` nothing is proposed.
pub fn amend_one_step(instance: &AmendmentInstance) -> OneStepReport {
    let h = instance.h();
    let r = instance.status_quo;
    if r >= h {
        return OneStepReport {
            h,
            decision: AmendmentDecision { rule: r, outcome: r },
            votes: None,
            accepted_by: None,
            universal: None,
        };
    }
    let step = amendment_step(instance, r, h).expect("r < h");
    let universal = step.accepted_by.len() == instance.n as usize;
    OneStepReport {
        h,
        decision: step.decision,
        votes: Some(step.votes),
        accepted_by: Some(step.accepted_by),
        universal: Some(universal),
    }
}

/// Re-evaluates every step of `trace` with the general acceptance predicate
/// and reports whether all agents accept each one.
pub fn check_universal_acceptance(trace: &AmendmentTrace, instance: &AmendmentInstance) -> bool {
    trace.steps.iter().all(|step| step_universally_accepted(step, instance))
}

pub fn step_universally_accepted(step: &AmendmentStep, instance: &AmendmentInstance) -> bool {
    let Ok(ballot) = instance.ballot(step.status_quo, step.proposal) else {
        return false;
    };
    let generic = ballot.to_generic();
    let Some(decision) = generic.decision(&step.decision.rule.rule_id()) else {
        return false;
    };
    let chosen = if step.decision.outcome == step.status_quo {
        Alternative::StatusQuo
    } else if step.decision.outcome == step.proposal {
        Alternative::Proposal
    } else {
        return false;
    };
    if decision.outcome != chosen.outcome_id() {
        return false;
    }
    generic.agents().iter().all(|a| accepts(a, &decision, &generic))
}
