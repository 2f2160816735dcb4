//! Asymmetric dichotomous choice: a status quo `r` against a proposal `p`,
//! decided by a supermajority rule.
//!
//! A supermajority rule is stored by its integer threshold `t`, the minimum
//! number of p-votes needed for `p` to win. The rule `R^δ` ("p wins iff
//! strictly more than δn agents vote p") has `t = ⌊δn⌋ + 1`, and `t` is
//! displayed as `δ(t) = (t - 1)/n`. The feasible family for `n` voters is
//! `⌊n/2⌋ + 1 ..= n` (majority through unanimity).

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::model::{
    AgentType, GenericInstance, Implementation, Junction, ModelError, OutcomeId, RuleId, RuleRef, SatisfyingSpec,
    SolveReport,
};
use crate::rate::Rate;

/// One of the two outcomes of a dichotomous choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Alternative {
    #[serde(rename = "r")]
    StatusQuo,
    #[serde(rename = "p")]
    Proposal,
}

impl Alternative {
    pub const BOTH: [Alternative; 2] = [Alternative::StatusQuo, Alternative::Proposal];

    pub fn label(&self) -> &'static str {
        match self {
            Alternative::StatusQuo => "r",
            Alternative::Proposal => "p",
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'r' => Some(Alternative::StatusQuo),
            'p' => Some(Alternative::Proposal),
            _ => None,
        }
    }

    pub fn other(&self) -> Self {
        match self {
            Alternative::StatusQuo => Alternative::Proposal,
            Alternative::Proposal => Alternative::StatusQuo,
        }
    }

    pub fn outcome_id(&self) -> OutcomeId {
        OutcomeId::new(self.label())
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A subset of `{r, p}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AltSet(u8);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);
    pub const ALL: [AltSet; 4] = [AltSet(0), AltSet(1), AltSet(2), AltSet(3)];

    fn bit(a: Alternative) -> u8 {
        match a {
            Alternative::StatusQuo => 1,
            Alternative::Proposal => 2,
        }
    }

    pub fn only(a: Alternative) -> Self {
        AltSet(Self::bit(a))
    }

    pub fn both() -> Self {
        AltSet(3)
    }

    pub fn contains(&self, a: Alternative) -> bool {
        self.0 & Self::bit(a) != 0
    }

    pub fn insert(&mut self, a: Alternative) {
        self.0 |= Self::bit(a);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Alternative> + '_ {
        Alternative::BOTH.into_iter().filter(|a| self.contains(*a))
    }

    pub fn intersection(&self, other: AltSet) -> AltSet {
        AltSet(self.0 & other.0)
    }
}

impl FromIterator<Alternative> for AltSet {
    fn from_iter<I: IntoIterator<Item = Alternative>>(iter: I) -> Self {
        let mut s = AltSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

/// Minimum number of p-votes for `p` to win.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Threshold(pub u32);

impl Threshold {
    pub fn majority(n: u32) -> Threshold {
        Threshold(n / 2 + 1)
    }

    pub fn unanimity(n: u32) -> Threshold {
        Threshold(n)
    }

    /// The supermajority thresholds for `n` voters, majority first.
    pub fn family(n: u32) -> impl DoubleEndedIterator<Item = Threshold> + Clone {
        family_range(n).map(Threshold)
    }

    /// Every threshold an implementation-indifferent agent may name:
    /// `δ ∈ {0, 1/n, .., (n-1)/n}`, i.e. `t ∈ 1..=n`.
    pub fn grid(n: u32) -> impl DoubleEndedIterator<Item = Threshold> + Clone {
        (1..=n).map(Threshold)
    }

    /// `t = ⌊δn⌋ + 1`.
    pub fn from_delta(delta: Ratio<u64>, n: u32) -> Threshold {
        let scaled = delta * Ratio::from_integer(n as u64);
        Threshold(scaled.to_integer() as u32 + 1)
    }

    /// Canonical display value `(t - 1)/n`.
    pub fn delta(&self, n: u32) -> Rate {
        Rate::new(self.0.saturating_sub(1) as u64, n as u64)
    }

    pub fn rule_id(&self) -> RuleId {
        RuleId::new(format!("t{}", self.0))
    }

    pub fn parse_rule_id(id: &RuleId) -> Option<Threshold> {
        id.as_str().strip_prefix('t')?.parse().ok().map(Threshold)
    }

    /// The outcome of this rule when `votes_p` agents vote for `p`.
    pub fn select(&self, votes_p: u32) -> Alternative {
        if votes_p >= self.0 {
            Alternative::Proposal
        } else {
            Alternative::StatusQuo
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

pub fn family_size(n: u32) -> usize {
    n.div_ceil(2) as usize
}

fn family_range(n: u32) -> RangeInclusive<u32> {
    (n / 2 + 1)..=n
}

pub fn in_family(t: Threshold, n: u32) -> bool {
    family_range(n).contains(&t.0)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AdcError {
    #[error("threshold {t} is outside the supermajority range {lo}..={hi}")]
    ThresholdOutOfRange { t: u32, lo: u32, hi: u32 },
    #[error("agent {agent} names threshold {t}, outside {lo}..={hi}")]
    AgentThresholdOutOfRange { agent: usize, t: u32, lo: u32, hi: u32 },
    #[error("{votes_p} p-votes with only {n} voters")]
    TooManyVotes { votes_p: u32, n: u32 },
    #[error("expected {n} votes, got {got}")]
    VoteCount { n: u32, got: usize },
    #[error("expected {n} agents, got {got}")]
    AgentCount { n: u32, got: usize },
    #[error("the electorate is empty")]
    NoVoters,
    #[error("no feasible threshold")]
    NoFeasibleRule,
    #[error("the majority rule is not feasible in this instance")]
    MajorityInfeasible,
    #[error("agent {agent} is not a {expected}")]
    AgentType { agent: usize, expected: AgentType },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `p` iff at least `t` of the `n` agents vote `p`.
pub fn supermajority_outcome(t: Threshold, votes_p: u32, n: u32) -> Result<Alternative, AdcError> {
    if !in_family(t, n) {
        let r = family_range(n);
        return Err(AdcError::ThresholdOutOfRange { t: t.0, lo: *r.start(), hi: *r.end() });
    }
    if votes_p > n {
        return Err(AdcError::TooManyVotes { votes_p, n });
    }
    Ok(t.select(votes_p))
}

/// An agent's satisfying set in the dichotomous setting. Rule sets hold
/// thresholds; implementation-indifferent agents may name thresholds below
/// majority, which are never feasible but still matter counterfactually.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdcAgent {
    pub junction: Junction,
    pub implementation: Implementation,
    pub rules: BTreeSet<Threshold>,
    pub outcomes: AltSet,
}

impl AdcAgent {
    pub fn new(
        junction: Junction,
        implementation: Implementation,
        rules: impl IntoIterator<Item = u32>,
        outcomes: impl IntoIterator<Item = Alternative>,
    ) -> Self {
        AdcAgent {
            junction,
            implementation,
            rules: rules.into_iter().map(Threshold).collect(),
            outcomes: outcomes.into_iter().collect(),
        }
    }

    pub fn consequentialist(outcomes: impl IntoIterator<Item = Alternative>) -> Self {
        Self::new(Junction::Disjunctive, Implementation::Absolute, [], outcomes)
    }

    pub fn absolute_disjunctive(
        rules: impl IntoIterator<Item = u32>,
        outcomes: impl IntoIterator<Item = Alternative>,
    ) -> Self {
        Self::new(Junction::Disjunctive, Implementation::Absolute, rules, outcomes)
    }

    pub fn absolute_conjunctive(
        rules: impl IntoIterator<Item = u32>,
        outcomes: impl IntoIterator<Item = Alternative>,
    ) -> Self {
        Self::new(Junction::Conjunctive, Implementation::Absolute, rules, outcomes)
    }

    pub fn ii_disjunctive(
        rules: impl IntoIterator<Item = u32>,
        outcomes: impl IntoIterator<Item = Alternative>,
    ) -> Self {
        Self::new(Junction::Disjunctive, Implementation::Indifferent, rules, outcomes)
    }

    pub fn ii_conjunctive(
        rules: impl IntoIterator<Item = u32>,
        outcomes: impl IntoIterator<Item = Alternative>,
    ) -> Self {
        Self::new(Junction::Conjunctive, Implementation::Indifferent, rules, outcomes)
    }

    pub fn is_type(&self, ty: AgentType) -> bool {
        ty.admits(self.junction, self.implementation, self.rules.is_empty(), self.outcomes.is_empty())
    }

    /// Acceptance of the decision `(t, outcome)` when `votes_p` agents vote p.
    pub fn accepts(&self, t: Threshold, outcome: Alternative, votes_p: u32) -> bool {
        let by_outcome = self.outcomes.contains(outcome);
        match (self.junction, by_outcome) {
            (Junction::Disjunctive, true) => return true,
            (Junction::Conjunctive, false) => return false,
            _ => {}
        }
        match self.implementation {
            Implementation::Absolute => self.rules.contains(&t),
            Implementation::Indifferent => self.rules.iter().any(|s| s.select(votes_p) == outcome),
        }
    }
}

/// Binary votes, feasible thresholds and one satisfying set per voter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdcInstance {
    n: u32,
    votes: Vec<Alternative>,
    feasible: BTreeSet<Threshold>,
    agents: Vec<AdcAgent>,
}

impl AdcInstance {
    pub fn new(
        votes: Vec<Alternative>,
        feasible: BTreeSet<Threshold>,
        agents: Vec<AdcAgent>,
    ) -> Result<Self, AdcError> {
        let n = votes.len() as u32;
        if n == 0 {
            return Err(AdcError::NoVoters);
        }
        if agents.len() != votes.len() {
            return Err(AdcError::AgentCount { n, got: agents.len() });
        }
        let fam = family_range(n);
        if let Some(t) = feasible.iter().find(|t| !fam.contains(&t.0)) {
            return Err(AdcError::ThresholdOutOfRange { t: t.0, lo: *fam.start(), hi: *fam.end() });
        }
        if feasible.is_empty() {
            return Err(AdcError::NoFeasibleRule);
        }
        for (i, a) in agents.iter().enumerate() {
            let allowed = match a.implementation {
                Implementation::Absolute => fam.clone(),
                Implementation::Indifferent => 1..=n,
            };
            if let Some(t) = a.rules.iter().find(|t| !allowed.contains(&t.0)) {
                return Err(AdcError::AgentThresholdOutOfRange {
                    agent: i,
                    t: t.0,
                    lo: *allowed.start(),
                    hi: *allowed.end(),
                });
            }
        }
        Ok(AdcInstance { n, votes, feasible, agents })
    }

    /// Every supermajority threshold is feasible.
    pub fn with_full_family(votes: Vec<Alternative>, agents: Vec<AdcAgent>) -> Result<Self, AdcError> {
        let n = votes.len() as u32;
        Self::new(votes, Threshold::family(n).collect(), agents)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn votes(&self) -> &[Alternative] {
        &self.votes
    }

    pub fn feasible(&self) -> &BTreeSet<Threshold> {
        &self.feasible
    }

    pub fn agents(&self) -> &[AdcAgent] {
        &self.agents
    }

    pub fn votes_p(&self) -> u32 {
        self.votes.iter().filter(|v| **v == Alternative::Proposal).count() as u32
    }

    /// Largest feasible threshold that keeps the status quo, if any.
    pub fn status_quo_rule(&self) -> Option<Threshold> {
        let v = self.votes_p();
        self.feasible.iter().rev().find(|t| t.0 > v).copied()
    }

    /// Smallest feasible threshold that passes the proposal, if any.
    pub fn proposal_rule(&self) -> Option<Threshold> {
        let v = self.votes_p();
        self.feasible.iter().find(|t| t.0 <= v).copied()
    }

    /// Outcomes some feasible rule selects on the observed votes.
    pub fn realizable(&self) -> AltSet {
        let mut s = AltSet::EMPTY;
        if self.status_quo_rule().is_some() {
            s.insert(Alternative::StatusQuo);
        }
        if self.proposal_rule().is_some() {
            s.insert(Alternative::Proposal);
        }
        s
    }

    /// The decision taken by applying `t` to the observed votes.
    pub fn decision(&self, t: Threshold) -> AdcDecision {
        AdcDecision { n: self.n, threshold: t, outcome: t.select(self.votes_p()) }
    }

    pub fn report(&self, decision: AdcDecision) -> AdcReport {
        let v = self.votes_p();
        let accepted_by = self
            .agents
            .iter()
            .enumerate()
            .filter(|(_, a)| a.accepts(decision.threshold, decision.outcome, v))
            .map(|(i, _)| i)
            .collect();
        SolveReport::new(decision, accepted_by, self.n as usize)
    }

    fn require(&self, ty: AgentType) -> Result<(), AdcError> {
        match self.agents.iter().position(|a| !a.is_type(ty)) {
            Some(agent) => Err(AdcError::AgentType { agent, expected: ty }),
            None => Ok(()),
        }
    }

    /// Whether every agent is of type `ty`.
    pub fn all_of_type(&self, ty: AgentType) -> bool {
        self.agents.iter().all(|a| a.is_type(ty))
    }

    /// The same decision problem as a generic instance.
    ///
    /// The rule universe holds every supermajority threshold plus any
    /// sub-majority threshold an agent names; only `feasible()` thresholds
    /// are feasible rules. Both outcomes are feasible.
    pub fn to_generic(&self) -> GenericInstance {
        let v = self.votes_p();
        let mut universe: BTreeSet<Threshold> = Threshold::family(self.n).collect();
        for a in &self.agents {
            universe.extend(a.rules.iter().copied());
        }
        let outcomes = vec![Alternative::StatusQuo.outcome_id(), Alternative::Proposal.outcome_id()];
        let rules =
            universe.iter().map(|t| RuleRef { id: t.rule_id(), value_at_profile: t.select(v).outcome_id() }).collect();
        let agents = self
            .agents
            .iter()
            .zip(&self.votes)
            .map(|(a, vote)| SatisfyingSpec {
                rule_set: a.rules.iter().map(Threshold::rule_id).collect(),
                outcome_set: a.outcomes.iter().map(|o| o.outcome_id()).collect(),
                junction: a.junction,
                implementation: a.implementation,
                vote: Some(vote.outcome_id()),
            })
            .collect();
        GenericInstance::new(
            outcomes.clone(),
            rules,
            outcomes.into_iter().collect(),
            self.feasible.iter().map(Threshold::rule_id).collect(),
            agents,
        )
        .expect("a validated dichotomous instance bridges to a valid generic instance")
    }

    /// Reads back a generic decision produced on [`AdcInstance::to_generic`].
    pub fn decision_from_generic(&self, d: &crate::model::Decision) -> Option<AdcDecision> {
        let t = Threshold::parse_rule_id(&d.rule)?;
        Some(self.decision(t))
    }
}

/// The free function form of [`AdcInstance::to_generic`].
pub fn adc_to_generic(instance: &AdcInstance) -> GenericInstance {
    instance.to_generic()
}

/// A supermajority rule applied to the observed votes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdcDecision {
    pub n: u32,
    pub threshold: Threshold,
    pub outcome: Alternative,
}

impl Serialize for AdcDecision {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AdcDecision", 4)?;
        s.serialize_field("rule", &self.threshold.to_string())?;
        s.serialize_field("t", &self.threshold.0)?;
        s.serialize_field("delta", &self.threshold.delta(self.n))?;
        s.serialize_field("outcome", &self.outcome)?;
        s.end()
    }
}

pub type AdcReport = SolveReport<AdcDecision>;

/// Approval voting with consequentialists, following the three-way branch:
/// proposal forced, status quo at least as popular (or proposal unreachable),
/// otherwise pass the proposal.
///
/// With the full supermajority family the rules returned are unanimity for
/// the first two branches and majority for the last.
pub fn adc_consequentialists(instance: &AdcInstance) -> Result<AdcReport, AdcError> {
    instance.require(AgentType::Consequentialist)?;
    let supporters = |alt| instance.agents.iter().filter(|a| a.outcomes.contains(alt)).count();
    let n_r = supporters(Alternative::StatusQuo);
    let n_p = supporters(Alternative::Proposal);
    let decision = match (instance.status_quo_rule(), instance.proposal_rule()) {
        (None, Some(_)) => instance.decision(*instance.feasible.last().expect("validated non-empty")),
        (Some(r), None) => instance.decision(r),
        (Some(r), Some(_)) if n_r >= n_p => instance.decision(r),
        (Some(_), Some(p)) => instance.decision(p),
        (None, None) => unreachable!("a feasible rule selects some outcome"),
    };
    Ok(instance.report(decision))
}

/// Absolute disjunctivists: split the feasible rules at the observed p-vote
/// count, choose on each side the rule that wins the most agents not
/// already satisfied by the outcome, and keep the better side (status quo on
/// ties).
pub fn adc_absolute_disjunctivists(instance: &AdcInstance) -> Result<AdcReport, AdcError> {
    instance.require(AgentType::AbsoluteDisjunctivist)?;
    let v = instance.votes_p();
    let side = |alt: Alternative| -> Option<(usize, Threshold)> {
        let by_outcome: Vec<bool> = instance.agents.iter().map(|a| a.outcomes.contains(alt)).collect();
        let base = by_outcome.iter().filter(|&&b| b).count();
        let rules: Vec<Threshold> = match alt {
            // canonical rule first: unanimity-most for r, majority-most for p
            Alternative::StatusQuo => instance.feasible.iter().rev().filter(|t| t.0 > v).copied().collect(),
            Alternative::Proposal => instance.feasible.iter().filter(|t| t.0 <= v).copied().collect(),
        };
        let mut best: Option<(usize, Threshold)> = None;
        for t in rules {
            let marginal =
                instance.agents.iter().zip(&by_outcome).filter(|(a, &sat)| !sat && a.rules.contains(&t)).count();
            if best.is_none_or(|(m, _)| marginal > m) {
                best = Some((marginal, t));
            }
        }
        best.map(|(m, t)| (base + m, t))
    };
    let decision = match (side(Alternative::StatusQuo), side(Alternative::Proposal)) {
        (Some((nr, r)), Some((np, _))) if nr >= np => instance.decision(r),
        (_, Some((_, p))) => instance.decision(p),
        (Some((_, r)), None) => instance.decision(r),
        (None, None) => unreachable!("a feasible rule selects some outcome"),
    };
    Ok(instance.report(decision))
}

/// Agents that accept each outcome regardless of the implementing rule,
/// computed from the extreme thresholds of each rule set in exact rational
/// arithmetic. `join` combines outcome membership with the rule test.
fn indifferent_supporters(instance: &AdcInstance, join: Junction) -> (usize, usize) {
    let n = instance.n as i64;
    let v = instance.votes_p() as i64;
    let delta = |t: &Threshold| Ratio::new(t.0 as i64 - 1, n);
    // Some rule keeps r iff the largest threshold is at least v/n; some rule
    // passes p iff the smallest is at most (v-1)/n.
    let delta_r = Ratio::new(v, n);
    let delta_p = Ratio::new(v - 1, n);
    let combine = |by_outcome: bool, by_rule: bool| match join {
        Junction::Disjunctive => by_outcome || by_rule,
        Junction::Conjunctive => by_outcome && by_rule,
    };
    let mut n_r = 0;
    let mut n_p = 0;
    for a in &instance.agents {
        let keeps_r = a.rules.iter().next_back().is_some_and(|t| delta(t) >= delta_r);
        let passes_p = a.rules.iter().next().is_some_and(|t| delta(t) <= delta_p);
        n_r += combine(a.outcomes.contains(Alternative::StatusQuo), keeps_r) as usize;
        n_p += combine(a.outcomes.contains(Alternative::Proposal), passes_p) as usize;
    }
    (n_r, n_p)
}

fn indifferent_choice(instance: &AdcInstance, n_r: usize, n_p: usize) -> AdcDecision {
    // II acceptance ignores the implementing rule, so any feasible rule
    // selecting the chosen outcome will do; use the canonical one.
    match (instance.status_quo_rule(), instance.proposal_rule()) {
        (Some(r), Some(_)) if n_r >= n_p => instance.decision(r),
        (_, Some(p)) => instance.decision(p),
        (Some(r), None) => instance.decision(r),
        (None, None) => unreachable!("a feasible rule selects some outcome"),
    }
}

pub fn adc_ii_disjunctivists(instance: &AdcInstance) -> Result<AdcReport, AdcError> {
    instance.require(AgentType::IiDisjunctivist)?;
    let (n_r, n_p) = indifferent_supporters(instance, Junction::Disjunctive);
    Ok(instance.report(indifferent_choice(instance, n_r, n_p)))
}

/// As [`adc_ii_disjunctivists`] with both membership tests conjunctive.
pub fn adc_ii_conjunctivists(instance: &AdcInstance) -> Result<AdcReport, AdcError> {
    instance.require(AgentType::IiConjunctivist)?;
    let (n_r, n_p) = indifferent_supporters(instance, Junction::Conjunctive);
    Ok(instance.report(indifferent_choice(instance, n_r, n_p)))
}

/// Always apply the majority rule, whatever the agents' satisfying sets.
pub fn majority_rule(instance: &AdcInstance) -> Result<AdcReport, AdcError> {
    let maj = Threshold::majority(instance.n);
    if !instance.feasible.contains(&maj) {
        return Err(AdcError::MajorityInfeasible);
    }
    Ok(instance.report(instance.decision(maj)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_max_accept;
    use Alternative::{Proposal as P, StatusQuo as R};

    fn votes(s: &str) -> Vec<Alternative> {
        s.chars().map(|c| Alternative::from_char(c).unwrap()).collect()
    }

    fn oracle_count(inst: &AdcInstance) -> usize {
        oracle_max_accept(&inst.to_generic()).report.acceptance_count
    }

    #[test]
    fn outcome_examples() {
        assert_eq!(supermajority_outcome(Threshold(3), 3, 5), Ok(P));
        assert_eq!(supermajority_outcome(Threshold(5), 4, 5), Ok(R));
        assert_eq!(supermajority_outcome(Threshold(4), 4, 5), Ok(P));
        assert!(matches!(supermajority_outcome(Threshold(2), 4, 5), Err(AdcError::ThresholdOutOfRange { .. })));
        assert!(supermajority_outcome(Threshold(6), 4, 5).is_err());
        assert!(supermajority_outcome(Threshold(3), 6, 5).is_err());
    }

    #[test]
    fn family_size_and_deltas() {
        for n in 1..=12 {
            assert_eq!(Threshold::family(n).count(), family_size(n));
            assert_eq!(Threshold::family(n).next(), Some(Threshold::majority(n)));
            assert_eq!(Threshold::family(n).last(), Some(Threshold::unanimity(n)));
        }
        assert_eq!(Threshold::family(4).map(|t| t.0).collect::<Vec<_>>(), [3, 4]);
        assert_eq!(Threshold(4).delta(5), Rate::new(3, 5));
        assert_eq!(Threshold::from_delta(Ratio::new(1, 2), 3), Threshold(2));
        assert_eq!(Threshold::from_delta(Ratio::new(2, 3), 3), Threshold(3));
        assert_eq!(Threshold::from_delta(Ratio::new(1, 2), 4), Threshold(3));
        assert_eq!(Threshold::parse_rule_id(&Threshold(12).rule_id()), Some(Threshold(12)));
    }

    #[test]
    fn threshold_matches_strict_delta_rule() {
        // p iff v > δ(t)·n with δ(t) = (t-1)/n
        for n in 1..=9u32 {
            for t in Threshold::grid(n) {
                for v in 0..=n {
                    let strict = Ratio::from_integer(v as u64) > t.delta(n).as_ratio() * Ratio::from_integer(n as u64);
                    assert_eq!(t.select(v) == P, strict);
                }
            }
        }
    }

    #[test]
    fn validation() {
        let a = || AdcAgent::consequentialist([R]);
        assert_eq!(
            AdcInstance::with_full_family(votes("pp"), vec![a()]).unwrap_err(),
            AdcError::AgentCount { n: 2, got: 1 }
        );
        let e = AdcInstance::new(votes("ppr"), [Threshold(1)].into(), vec![a(), a(), a()]).unwrap_err();
        assert!(matches!(e, AdcError::ThresholdOutOfRange { .. }));
        let e = AdcInstance::new(votes("ppr"), BTreeSet::new(), vec![a(), a(), a()]).unwrap_err();
        assert_eq!(e, AdcError::NoFeasibleRule);
        let bad = AdcAgent::absolute_disjunctive([1], []);
        let e = AdcInstance::with_full_family(votes("ppr"), vec![bad, a(), a()]).unwrap_err();
        assert!(matches!(e, AdcError::AgentThresholdOutOfRange { agent: 0, .. }));
        // II agents may name sub-majority thresholds
        let ii = AdcAgent::ii_disjunctive([1], []);
        assert!(AdcInstance::with_full_family(votes("ppr"), vec![ii, a(), a()]).is_ok());
    }

    #[test]
    fn bridge_rules() {
        let inst = AdcInstance::with_full_family(votes("ppr"), vec![AdcAgent::consequentialist([]); 3]).unwrap();
        let g = inst.to_generic();
        let rules: Vec<_> = g.rules().iter().map(|r| (r.id.as_str(), r.value_at_profile.as_str())).collect();
        assert_eq!(rules, [("t2", "p"), ("t3", "r")]);
        let inst = AdcInstance::with_full_family(votes("pprr"), vec![AdcAgent::consequentialist([]); 4]).unwrap();
        assert_eq!(inst.to_generic().rules().len(), 2);

        let ii = AdcAgent::ii_disjunctive([1], [P]);
        let inst = AdcInstance::with_full_family(
            votes("prr"),
            vec![ii, AdcAgent::ii_disjunctive([], []), AdcAgent::ii_disjunctive([], [])],
        )
        .unwrap();
        let g = inst.to_generic();
        assert_eq!(g.rules().len(), 3);
        assert!(!g.feasible_rules().contains(&RuleId::from("t1")));
    }

    #[test]
    fn consequentialist_branches() {
        let inst = AdcInstance::with_full_family(votes("ppp"), vec![AdcAgent::consequentialist([R]); 3]).unwrap();
        let rep = adc_consequentialists(&inst).unwrap();
        assert_eq!((rep.decision.threshold, rep.decision.outcome), (Threshold(3), P));

        let inst = AdcInstance::with_full_family(
            votes("ppr"),
            vec![AdcAgent::consequentialist([P]), AdcAgent::consequentialist([P]), AdcAgent::consequentialist([R])],
        )
        .unwrap();
        let rep = adc_consequentialists(&inst).unwrap();
        assert_eq!((rep.decision.threshold, rep.decision.outcome, rep.acceptance_count), (Threshold(2), P, 2));
        assert_eq!(oracle_count(&inst), 2);

        for ys in AltSet::ALL {
            let agents = vec![AdcAgent { outcomes: ys, ..AdcAgent::consequentialist([P]) }; 3];
            let inst = AdcInstance::with_full_family(votes("prr"), agents).unwrap();
            assert_eq!(adc_consequentialists(&inst).unwrap().decision.outcome, R);
        }
    }

    #[test]
    fn absolute_disjunctivist_example() {
        let inst = AdcInstance::with_full_family(
            votes("ppr"),
            vec![
                AdcAgent::absolute_disjunctive([2], [P]),
                AdcAgent::absolute_disjunctive([3], []),
                AdcAgent::absolute_disjunctive([], [R]),
            ],
        )
        .unwrap();
        let rep = adc_absolute_disjunctivists(&inst).unwrap();
        assert_eq!((rep.decision.threshold, rep.decision.outcome, rep.acceptance_count), (Threshold(3), R, 2));
        assert_eq!(oracle_count(&inst), 2);
    }

    #[test]
    fn absolute_disjunctivists_forced_proposal() {
        let agents = vec![
            AdcAgent::absolute_disjunctive([3], [R]),
            AdcAgent::absolute_disjunctive([3], [R]),
            AdcAgent::absolute_disjunctive([2], [R]),
        ];
        let inst = AdcInstance::with_full_family(votes("ppp"), agents).unwrap();
        let rep = adc_absolute_disjunctivists(&inst).unwrap();
        assert_eq!((rep.decision.outcome, rep.acceptance_count), (P, 2));
        assert_eq!(oracle_count(&inst), 2);

        let inst = AdcInstance::with_full_family(votes("pprr"), vec![AdcAgent::absolute_disjunctive([3], []); 4]);
        let rep = adc_absolute_disjunctivists(&inst.unwrap()).unwrap();
        assert_eq!((rep.decision.threshold, rep.decision.outcome, rep.acceptance_count), (Threshold(3), R, 4));
        let inst =
            AdcInstance::with_full_family(votes("pppr"), vec![AdcAgent::absolute_disjunctive([3], []); 4]).unwrap();
        let rep = adc_absolute_disjunctivists(&inst).unwrap();
        assert_eq!((rep.decision.threshold, rep.decision.outcome, rep.acceptance_count), (Threshold(3), P, 4));
    }

    #[test]
    fn ii_disjunctivist_tie_goes_to_status_quo() {
        let n = 3;
        let t = |num, den| Threshold::from_delta(Ratio::new(num, den), n).0;
        let inst = AdcInstance::with_full_family(
            votes("ppr"),
            vec![
                AdcAgent::ii_disjunctive([t(1, 2)], [P]),
                AdcAgent::ii_disjunctive([t(2, 3)], [P]),
                AdcAgent::ii_disjunctive([t(2, 3)], [R]),
            ],
        )
        .unwrap();
        assert_eq!(indifferent_supporters(&inst, Junction::Disjunctive), (2, 2));
        let rep = adc_ii_disjunctivists(&inst).unwrap();
        assert_eq!((rep.decision.outcome, rep.acceptance_count), (R, 2));
        assert_eq!(oracle_count(&inst), 2);
    }

    #[test]
    fn ii_disjunctivists_accepting_both_outcomes() {
        // exactly one acceptable outcome plus a rule realizing the other
        let agents = vec![
            AdcAgent::ii_disjunctive([1], [R]),
            AdcAgent::ii_disjunctive([3], [P]),
            AdcAgent::ii_disjunctive([2], [R]),
            AdcAgent::ii_disjunctive([4], [P]),
        ];
        let inst = AdcInstance::with_full_family(votes("ppr r".replace(' ', "").as_str()), agents).unwrap();
        assert_eq!(adc_ii_disjunctivists(&inst).unwrap().acceptance_count, 4);

        let agents: Vec<_> = votes("pprr").into_iter().map(|v| AdcAgent::ii_disjunctive([], [v])).collect();
        let inst = AdcInstance::with_full_family(votes("pprr"), agents).unwrap();
        assert_eq!(adc_ii_disjunctivists(&inst).unwrap().acceptance_count, 2);
    }

    #[test]
    fn ii_conjunctivists() {
        let n = 3;
        let t = |num, den| Threshold::from_delta(Ratio::new(num, den), n).0;
        let inst = AdcInstance::with_full_family(
            votes("ppr"),
            vec![
                AdcAgent::ii_conjunctive([t(1, 2)], [P]),
                AdcAgent::ii_conjunctive([t(2, 3)], [R]),
                AdcAgent::ii_conjunctive([t(1, 2)], [P]),
            ],
        )
        .unwrap();
        // R^{1/2} passes p with two of three p-votes, so agents 0 and 2 accept p.
        let rep = adc_ii_conjunctivists(&inst).unwrap();
        assert_eq!(indifferent_supporters(&inst, Junction::Conjunctive), (1, 2));
        assert_eq!((rep.decision.outcome, rep.acceptance_count, rep.accepted_by.clone()), (P, 2, vec![0, 2]));
        assert_eq!(oracle_count(&inst), 2);

        let only_r = AdcAgent::ii_conjunctive([3], [R]);
        assert!(only_r.accepts(Threshold(3), R, 2));
        let no_outcomes = AdcAgent::ii_conjunctive([1, 2, 3], []);
        for alt in Alternative::BOTH {
            for v in 0..=3 {
                assert!(!no_outcomes.accepts(Threshold(2), alt, v));
            }
        }
    }

    #[test]
    fn majority_rule_requires_feasible_majority() {
        let agents = vec![AdcAgent::consequentialist([P]); 3];
        let inst = AdcInstance::new(votes("ppr"), [Threshold(3)].into(), agents.clone()).unwrap();
        assert_eq!(majority_rule(&inst).unwrap_err(), AdcError::MajorityInfeasible);
        let inst = AdcInstance::with_full_family(votes("ppr"), agents).unwrap();
        assert_eq!(majority_rule(&inst).unwrap().acceptance_count, 3);
    }

    #[test]
    fn decision_json() {
        let inst = AdcInstance::with_full_family(votes("ppr"), vec![AdcAgent::consequentialist([P]); 3]).unwrap();
        let json = serde_json::to_string(&inst.decision(Threshold(2))).unwrap();
        assert_eq!(json, r#"{"rule":"t2","t":2,"delta":{"num":1,"den":3},"outcome":"p"}"#);
    }
}
