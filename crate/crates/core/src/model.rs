//! Decisions, satisfying sets and generic instances.
//!
//! An instance observes a single profile, so a rule is represented by the
//! outcome it selects on that profile. A [`Decision`] pairs a rule with that
//! outcome; the profile itself is carried implicitly by the instance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::accept::accepts;
use crate::rate::Rate;

/// Label of an outcome in an instance's outcome universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutcomeId(String);

impl OutcomeId {
    pub fn new(label: impl Into<String>) -> Self {
        OutcomeId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for OutcomeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for OutcomeId {
    fn from(s: &str) -> Self {
        OutcomeId::new(s)
    }
}

/// Label of a rule in an instance's rule universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RuleId(String);

impl RuleId {
    pub fn new(label: impl Into<String>) -> Self {
        RuleId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for RuleId {
    fn from(s: &str) -> Self {
        RuleId::new(s)
    }
}

/// A rule together with the outcome it selects on the observed profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRef {
    pub id: RuleId,
    #[serde(rename = "value")]
    pub value_at_profile: OutcomeId,
}

impl RuleRef {
    pub fn new(id: impl Into<String>, value: impl Into<String>) -> Self {
        RuleRef { id: RuleId::new(id), value_at_profile: OutcomeId::new(value) }
    }
}

/// A rule applied to the observed profile, and the outcome it yields.
///
/// Only [`GenericInstance::decision`] hands these out, which keeps
/// `outcome == value_at_profile(rule)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Decision {
    pub rule: RuleId,
    pub outcome: OutcomeId,
}

/// How rule-acceptability and outcome-acceptability combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Junction {
    Conjunctive,
    Disjunctive,
}

/// Whether the agent cares which rule was actually implemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Implementation {
    /// Acceptance depends on the implemented rule.
    Absolute,
    /// Acceptance depends only on the outcome; rule concerns are evaluated
    /// counterfactually ("some acceptable rule would have chosen this").
    Indifferent,
}

/// Named agent types. The first seven are recognized from a
/// [`SatisfyingSpec`]; `Any` stands for an unrestricted mixture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentType {
    Consequentialist,
    AbsoluteProceduralist,
    AbsoluteConjunctivist,
    AbsoluteDisjunctivist,
    IiProceduralist,
    IiConjunctivist,
    IiDisjunctivist,
    Any,
}

impl AgentType {
    pub const ALL: [AgentType; 8] = [
        AgentType::Consequentialist,
        AgentType::AbsoluteProceduralist,
        AgentType::AbsoluteConjunctivist,
        AgentType::AbsoluteDisjunctivist,
        AgentType::IiProceduralist,
        AgentType::IiConjunctivist,
        AgentType::IiDisjunctivist,
        AgentType::Any,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AgentType::Consequentialist => "consequentialist",
            AgentType::AbsoluteProceduralist => "absolute_proceduralist",
            AgentType::AbsoluteConjunctivist => "absolute_conjunctivist",
            AgentType::AbsoluteDisjunctivist => "absolute_disjunctivist",
            AgentType::IiProceduralist => "ii_proceduralist",
            AgentType::IiConjunctivist => "ii_conjunctivist",
            AgentType::IiDisjunctivist => "ii_disjunctivist",
            AgentType::Any => "any",
        }
    }

    pub fn parse(s: &str) -> Option<AgentType> {
        AgentType::ALL.into_iter().find(|t| t.as_str() == s)
    }

    /// The (junction, implementation) flags a spec of this type carries.
    /// `None` for [`AgentType::Any`].
    pub fn flags(&self) -> Option<(Junction, Implementation)> {
        use Implementation::*;
        use Junction::*;
        match self {
            AgentType::Consequentialist | AgentType::AbsoluteProceduralist | AgentType::AbsoluteDisjunctivist => {
                Some((Disjunctive, Absolute))
            }
            AgentType::AbsoluteConjunctivist => Some((Conjunctive, Absolute)),
            AgentType::IiProceduralist | AgentType::IiDisjunctivist => Some((Disjunctive, Indifferent)),
            AgentType::IiConjunctivist => Some((Conjunctive, Indifferent)),
            AgentType::Any => None,
        }
    }

    /// Whether a spec with these flags and set sizes is of this type.
    /// Sub-types are recognized by empty sets: every consequentialist is
    /// also a (absolute or II) disjunctivist.
    pub fn admits(
        &self,
        junction: Junction,
        implementation: Implementation,
        rules_empty: bool,
        outcomes_empty: bool,
    ) -> bool {
        use Implementation::*;
        use Junction::*;
        match self {
            AgentType::Consequentialist => junction == Disjunctive && rules_empty,
            AgentType::AbsoluteProceduralist => (junction, implementation) == (Disjunctive, Absolute) && outcomes_empty,
            AgentType::IiProceduralist => (junction, implementation) == (Disjunctive, Indifferent) && outcomes_empty,
            AgentType::AbsoluteConjunctivist => (junction, implementation) == (Conjunctive, Absolute),
            AgentType::AbsoluteDisjunctivist => (junction, implementation) == (Disjunctive, Absolute),
            AgentType::IiConjunctivist => (junction, implementation) == (Conjunctive, Indifferent),
            AgentType::IiDisjunctivist => (junction, implementation) == (Disjunctive, Indifferent),
            AgentType::Any => true,
        }
    }
}

impl fmt::Display for AgentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compact satisfying set `(R_i, Y_i, junction, implementation)` plus the
/// agent's own vote.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SatisfyingSpec {
    pub rule_set: BTreeSet<RuleId>,
    pub outcome_set: BTreeSet<OutcomeId>,
    pub junction: Junction,
    pub implementation: Implementation,
    pub vote: Option<OutcomeId>,
}

impl SatisfyingSpec {
    pub fn new<R, Y>(junction: Junction, implementation: Implementation, rules: R, outcomes: Y) -> Self
    where
        R: IntoIterator,
        R::Item: Into<String>,
        Y: IntoIterator,
        Y::Item: Into<String>,
    {
        SatisfyingSpec {
            rule_set: rules.into_iter().map(RuleId::new).collect(),
            outcome_set: outcomes.into_iter().map(OutcomeId::new).collect(),
            junction,
            implementation,
            vote: None,
        }
    }

    pub fn absolute_disjunctive<R, Y>(rules: R, outcomes: Y) -> Self
    where
        R: IntoIterator,
        R::Item: Into<String>,
        Y: IntoIterator,
        Y::Item: Into<String>,
    {
        Self::new(Junction::Disjunctive, Implementation::Absolute, rules, outcomes)
    }

    pub fn absolute_conjunctive<R, Y>(rules: R, outcomes: Y) -> Self
    where
        R: IntoIterator,
        R::Item: Into<String>,
        Y: IntoIterator,
        Y::Item: Into<String>,
    {
        Self::new(Junction::Conjunctive, Implementation::Absolute, rules, outcomes)
    }

    pub fn ii_disjunctive<R, Y>(rules: R, outcomes: Y) -> Self
    where
        R: IntoIterator,
        R::Item: Into<String>,
        Y: IntoIterator,
        Y::Item: Into<String>,
    {
        Self::new(Junction::Disjunctive, Implementation::Indifferent, rules, outcomes)
    }

    pub fn ii_conjunctive<R, Y>(rules: R, outcomes: Y) -> Self
    where
        R: IntoIterator,
        R::Item: Into<String>,
        Y: IntoIterator,
        Y::Item: Into<String>,
    {
        Self::new(Junction::Conjunctive, Implementation::Indifferent, rules, outcomes)
    }

    pub fn with_vote(mut self, vote: impl Into<String>) -> Self {
        self.vote = Some(OutcomeId::new(vote));
        self
    }

    pub fn is_type(&self, ty: AgentType) -> bool {
        ty.admits(self.junction, self.implementation, self.rule_set.is_empty(), self.outcome_set.is_empty())
    }

    pub fn is_absolute_disjunctive(&self) -> bool {
        self.is_type(AgentType::AbsoluteDisjunctivist)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate outcome id `{0}`")]
    DuplicateOutcome(OutcomeId),
    #[error("duplicate rule id `{0}`")]
    DuplicateRule(RuleId),
    #[error("rule `{rule}` selects `{outcome}`, which is not in the outcome universe")]
    RuleValueOutsideUniverse { rule: RuleId, outcome: OutcomeId },
    #[error("feasible outcome `{0}` is not in the outcome universe")]
    UnknownFeasibleOutcome(OutcomeId),
    #[error("feasible rule `{0}` is not in the rule universe")]
    UnknownFeasibleRule(RuleId),
    #[error("agent {agent} references unknown rule `{rule}`")]
    UnknownAgentRule { agent: usize, rule: RuleId },
    #[error("agent {agent} references unknown outcome `{outcome}`")]
    UnknownAgentOutcome { agent: usize, outcome: OutcomeId },
    #[error("no feasible rule selects a feasible outcome on the observed profile")]
    NoFeasibleDecision,
    #[error("instance has no agents")]
    NoAgents,
}

/// Observed profile (implicit), rule and outcome universes, feasibility
/// constraints and the agents' satisfying sets.
///
/// Construction validates every cross reference and requires at least one
/// feasible decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericInstance {
    outcomes: Vec<OutcomeId>,
    rules: Vec<RuleRef>,
    feasible_outcomes: BTreeSet<OutcomeId>,
    feasible_rules: BTreeSet<RuleId>,
    agents: Vec<SatisfyingSpec>,
    values: BTreeMap<RuleId, OutcomeId>,
}

impl GenericInstance {
    pub fn new(
        outcomes: Vec<OutcomeId>,
        rules: Vec<RuleRef>,
        feasible_outcomes: BTreeSet<OutcomeId>,
        feasible_rules: BTreeSet<RuleId>,
        agents: Vec<SatisfyingSpec>,
    ) -> Result<Self, ModelError> {
        let mut universe = BTreeSet::new();
        for o in &outcomes {
            if !universe.insert(o) {
                return Err(ModelError::DuplicateOutcome(o.clone()));
            }
        }
        let mut values = BTreeMap::new();
        for r in &rules {
            if !universe.contains(&r.value_at_profile) {
                return Err(ModelError::RuleValueOutsideUniverse {
                    rule: r.id.clone(),
                    outcome: r.value_at_profile.clone(),
                });
            }
            if values.insert(r.id.clone(), r.value_at_profile.clone()).is_some() {
                return Err(ModelError::DuplicateRule(r.id.clone()));
            }
        }
        if let Some(o) = feasible_outcomes.iter().find(|o| !universe.contains(o)) {
            return Err(ModelError::UnknownFeasibleOutcome(o.clone()));
        }
        if let Some(r) = feasible_rules.iter().find(|r| !values.contains_key(*r)) {
            return Err(ModelError::UnknownFeasibleRule(r.clone()));
        }
        if agents.is_empty() {
            return Err(ModelError::NoAgents);
        }
        for (i, a) in agents.iter().enumerate() {
            if let Some(r) = a.rule_set.iter().find(|r| !values.contains_key(*r)) {
                return Err(ModelError::UnknownAgentRule { agent: i, rule: r.clone() });
            }
            let bad_outcome = a.outcome_set.iter().chain(a.vote.iter()).find(|o| !universe.contains(o));
            if let Some(o) = bad_outcome {
                return Err(ModelError::UnknownAgentOutcome { agent: i, outcome: o.clone() });
            }
        }
        let feasible_exists = feasible_rules.iter().any(|r| feasible_outcomes.contains(&values[r]));
        if !feasible_exists {
            return Err(ModelError::NoFeasibleDecision);
        }
        Ok(GenericInstance { outcomes, rules, feasible_outcomes, feasible_rules, agents, values })
    }

    /// An instance where every declared rule and outcome is feasible.
    pub fn fully_feasible(
        outcomes: Vec<OutcomeId>,
        rules: Vec<RuleRef>,
        agents: Vec<SatisfyingSpec>,
    ) -> Result<Self, ModelError> {
        let fo = outcomes.iter().cloned().collect();
        let fr = rules.iter().map(|r| r.id.clone()).collect();
        Self::new(outcomes, rules, fo, fr, agents)
    }

    /// Same universes and feasibility, different agents.
    pub fn with_agents(&self, agents: Vec<SatisfyingSpec>) -> Result<Self, ModelError> {
        Self::new(
            self.outcomes.clone(),
            self.rules.clone(),
            self.feasible_outcomes.clone(),
            self.feasible_rules.clone(),
            agents,
        )
    }

    /// Agents that only reference ids already validated against this
    /// instance, e.g. substitutes built from its own agents.
    pub(crate) fn with_agents_unchecked(&self, agents: Vec<SatisfyingSpec>) -> Self {
        debug_assert_eq!(agents.len(), self.agents.len());
        GenericInstance { agents, ..self.clone() }
    }

    pub fn outcomes(&self) -> &[OutcomeId] {
        &self.outcomes
    }

    pub fn rules(&self) -> &[RuleRef] {
        &self.rules
    }

    pub fn feasible_outcomes(&self) -> &BTreeSet<OutcomeId> {
        &self.feasible_outcomes
    }

    pub fn feasible_rules(&self) -> &BTreeSet<RuleId> {
        &self.feasible_rules
    }

    pub fn agents(&self) -> &[SatisfyingSpec] {
        &self.agents
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    /// The outcome `rule` selects on the observed profile.
    pub fn value_of(&self, rule: &RuleId) -> Option<&OutcomeId> {
        self.values.get(rule)
    }

    /// The decision made by applying `rule` to the observed profile.
    pub fn decision(&self, rule: &RuleId) -> Option<Decision> {
        self.values.get(rule).map(|o| Decision { rule: rule.clone(), outcome: o.clone() })
    }

    pub fn is_feasible(&self, d: &Decision) -> bool {
        self.feasible_rules.contains(&d.rule)
            && self.feasible_outcomes.contains(&d.outcome)
            && self.values.get(&d.rule) == Some(&d.outcome)
    }

    /// All feasible decisions ordered by outcome id, then rule id. This is
    /// the tie-breaking order used by every mechanism.
    pub fn feasible_decisions(&self) -> Vec<Decision> {
        let mut out: Vec<Decision> = self
            .feasible_rules
            .iter()
            .filter_map(|r| self.decision(r))
            .filter(|d| self.feasible_outcomes.contains(&d.outcome))
            .collect();
        out.sort_by(|a, b| (&a.outcome, &a.rule).cmp(&(&b.outcome, &b.rule)));
        out
    }

    /// Evaluates every agent on `decision`.
    pub fn report(&self, decision: Decision) -> SolveReport {
        let accepted_by: Vec<usize> =
            self.agents.iter().enumerate().filter(|(_, a)| accepts(a, &decision, self)).map(|(i, _)| i).collect();
        SolveReport::new(decision, accepted_by, self.n())
    }
}

/// A chosen decision and who accepts it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport<D = Decision> {
    pub decision: D,
    pub accepted_by: Vec<usize>,
    pub acceptance_count: usize,
    pub acceptance_rate: Rate,
}

impl<D> SolveReport<D> {
    pub fn new(decision: D, accepted_by: Vec<usize>, n: usize) -> Self {
        let count = accepted_by.len();
        SolveReport {
            decision,
            accepted_by,
            acceptance_count: count,
            acceptance_rate: Rate::new(count as u64, n.max(1) as u64),
        }
    }

    pub fn map_decision<E>(self, f: impl FnOnce(D) -> E) -> SolveReport<E> {
        SolveReport {
            decision: f(self.decision),
            accepted_by: self.accepted_by,
            acceptance_count: self.acceptance_count,
            acceptance_rate: self.acceptance_rate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Vec<OutcomeId> {
        ["A", "B", "C"].into_iter().map(OutcomeId::from).collect()
    }

    #[test]
    fn rejects_dangling_references() {
        let rules = vec![RuleRef::new("r1", "A"), RuleRef::new("r2", "D")];
        let err = GenericInstance::fully_feasible(abc(), rules, vec![]).unwrap_err();
        assert!(matches!(err, ModelError::RuleValueOutsideUniverse { .. }));

        let rules = vec![RuleRef::new("r1", "A")];
        let agent = SatisfyingSpec::absolute_disjunctive(["r9"], Vec::<String>::new());
        let err = GenericInstance::fully_feasible(abc(), rules.clone(), vec![agent]).unwrap_err();
        assert_eq!(err, ModelError::UnknownAgentRule { agent: 0, rule: "r9".into() });

        let agent = SatisfyingSpec::absolute_disjunctive(Vec::<String>::new(), ["Z"]);
        let err = GenericInstance::fully_feasible(abc(), rules, vec![agent]).unwrap_err();
        assert!(matches!(err, ModelError::UnknownAgentOutcome { .. }));
    }

    #[test]
    fn rejects_duplicates() {
        let rules = vec![RuleRef::new("r1", "A"), RuleRef::new("r1", "B")];
        let agent = SatisfyingSpec::absolute_disjunctive(Vec::<String>::new(), Vec::<String>::new());
        let err = GenericInstance::fully_feasible(abc(), rules, vec![agent]).unwrap_err();
        assert_eq!(err, ModelError::DuplicateRule("r1".into()));
    }

    #[test]
    fn requires_a_feasible_decision() {
        let rules = vec![RuleRef::new("r1", "A"), RuleRef::new("r2", "B")];
        let agent = SatisfyingSpec::absolute_disjunctive(Vec::<String>::new(), Vec::<String>::new());
        let err = GenericInstance::new(
            abc(),
            rules,
            ["B", "C"].into_iter().map(OutcomeId::from).collect(),
            ["r1".into()].into_iter().collect(),
            vec![agent],
        )
        .unwrap_err();
        assert_eq!(err, ModelError::NoFeasibleDecision);
    }

    #[test]
    fn feasible_decisions_are_ordered_and_consistent() {
        let rules =
            vec![RuleRef::new("r3", "A"), RuleRef::new("r1", "B"), RuleRef::new("r2", "A"), RuleRef::new("r4", "C")];
        let agent = SatisfyingSpec::absolute_disjunctive(Vec::<String>::new(), Vec::<String>::new());
        let inst = GenericInstance::new(
            abc(),
            rules,
            ["A", "B"].into_iter().map(OutcomeId::from).collect(),
            ["r1", "r2", "r3", "r4"].into_iter().map(RuleId::from).collect(),
            vec![agent],
        )
        .unwrap();
        let ds: Vec<_> = inst.feasible_decisions().into_iter().map(|d| format!("{}:{}", d.rule, d.outcome)).collect();
        assert_eq!(ds, ["r2:A", "r3:A", "r1:B"]);
        assert!(!inst.is_feasible(&inst.decision(&"r4".into()).unwrap()));
        let forged = Decision { rule: "r1".into(), outcome: "A".into() };
        assert!(!inst.is_feasible(&forged));
    }

    #[test]
    fn type_recognition_uses_empty_sets() {
        let c = SatisfyingSpec::ii_disjunctive(Vec::<String>::new(), ["A"]);
        assert!(c.is_type(AgentType::Consequentialist));
        assert!(c.is_type(AgentType::IiDisjunctivist));
        assert!(!c.is_type(AgentType::AbsoluteDisjunctivist));
        let p = SatisfyingSpec::absolute_disjunctive(["r1"], Vec::<String>::new());
        assert!(p.is_type(AgentType::AbsoluteProceduralist));
        assert!(!p.is_type(AgentType::Consequentialist));
        for t in AgentType::ALL {
            assert_eq!(AgentType::parse(t.as_str()), Some(t));
        }
    }
}
