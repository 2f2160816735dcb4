//! On-disk instance format: UTF-8 JSON tagged by `kind`.
//!
//! ```json
//! {"kind":"adc","n":3,"votes":"ppr","agents":[{"type":"ii_disjunctivist","Y":["p"],"R_t":[2]}],"feasible_t":[2,3]}
//! {"kind":"amendment","n":5,"status_quo_t":3,"peaks_t":[3,4,4,5,5],"vote_policy":"nearer"}
//! {"kind":"generic","outcomes":["A","B"],"rules":[{"id":"r1","value":"A"}],"agents":[{"type":"consequentialist","Y":["A"]}]}
//! ```

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adc::{AdcAgent, AdcError, AdcInstance, Alternative, Threshold};
use crate::amendment::{AmendmentError, AmendmentInstance, VotePolicy};
use crate::model::{
    AgentType, GenericInstance, Implementation, Junction, ModelError, OutcomeId, RuleId, RuleRef, SatisfyingSpec,
};
use crate::rate::Rate;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceFile {
    Generic(GenericFile),
    Adc(AdcFile),
    Amendment(AmendmentFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericFile {
    pub outcomes: Vec<OutcomeId>,
    pub rules: Vec<RuleRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible_outcomes: Option<Vec<OutcomeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible_rules: Option<Vec<RuleId>>,
    pub agents: Vec<GenericAgentFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericAgentFile {
    #[serde(rename = "type")]
    pub agent_type: String,
    #[serde(rename = "R", default)]
    pub rules: Vec<RuleId>,
    #[serde(rename = "Y", default)]
    pub outcomes: Vec<OutcomeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vote: Option<OutcomeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdcFile {
    pub n: u32,
    /// One character per voter, `r` or `p`.
    pub votes: String,
    pub agents: Vec<AdcAgentFile>,
    /// Defaults to every supermajority threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible_t: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdcAgentFile {
    #[serde(rename = "type")]
    pub agent_type: String,
    #[serde(rename = "Y", default)]
    pub outcomes: Vec<Alternative>,
    #[serde(rename = "R_t", default)]
    pub thresholds: Vec<u32>,
    /// Rules given as `δ`, converted with `t = ⌊δn⌋ + 1`.
    #[serde(rename = "R_delta", default, skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<Rate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmendmentFile {
    pub n: u32,
    pub status_quo_t: u32,
    pub peaks_t: Vec<u32>,
    #[serde(default)]
    pub vote_policy: VotePolicy,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemaError {
    #[error("agent {agent}: unknown type `{name}`")]
    UnknownAgentType { agent: usize, name: String },
    #[error("agent {agent}: a {ty} {reason}")]
    TypeShape { agent: usize, ty: AgentType, reason: &'static str },
    #[error("votes: `{0}` is not `r` or `p`")]
    BadVote(char),
    #[error("votes: expected {n} characters, got {got}")]
    VoteLength { n: u32, got: usize },
    #[error("agent {agent}: δ = {delta} is outside [0, 1)")]
    DeltaRange { agent: usize, delta: Rate },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Adc(#[from] AdcError),
    #[error(transparent)]
    Amendment(#[from] AmendmentError),
}

/// A validated instance of any kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Generic(GenericInstance),
    Adc(AdcInstance),
    Amendment(AmendmentInstance),
}

impl InstanceFile {
    pub fn validate(self) -> Result<Instance, SchemaError> {
        Ok(match self {
            InstanceFile::Generic(f) => Instance::Generic(f.try_into()?),
            InstanceFile::Adc(f) => Instance::Adc(f.try_into()?),
            InstanceFile::Amendment(f) => Instance::Amendment(f.try_into()?),
        })
    }
}

fn parse_type(agent: usize, name: &str) -> Result<(AgentType, Junction, Implementation), SchemaError> {
    let ty = AgentType::parse(name)
        .filter(|t| *t != AgentType::Any)
        .ok_or_else(|| SchemaError::UnknownAgentType { agent, name: name.to_string() })?;
    let (j, i) = ty.flags().expect("concrete type");
    Ok((ty, j, i))
}

fn check_shape(agent: usize, ty: AgentType, rules_empty: bool, outcomes_empty: bool) -> Result<(), SchemaError> {
    match ty {
        AgentType::Consequentialist if !rules_empty => {
            Err(SchemaError::TypeShape { agent, ty, reason: "must have an empty rule set" })
        }
        AgentType::AbsoluteProceduralist | AgentType::IiProceduralist if !outcomes_empty => {
            Err(SchemaError::TypeShape { agent, ty, reason: "must have an empty outcome set" })
        }
        _ => Ok(()),
    }
}

/// The type name written for an agent with these flags. Absolute
/// disjunctivists with only an outcome set are written as consequentialists.
fn type_name(junction: Junction, implementation: Implementation, rules_empty: bool, outcomes_empty: bool) -> String {
    let ty = match (junction, implementation) {
        (Junction::Disjunctive, Implementation::Absolute) if rules_empty && !outcomes_empty => {
            AgentType::Consequentialist
        }
        (Junction::Disjunctive, Implementation::Absolute) => AgentType::AbsoluteDisjunctivist,
        (Junction::Conjunctive, Implementation::Absolute) => AgentType::AbsoluteConjunctivist,
        (Junction::Disjunctive, Implementation::Indifferent) => AgentType::IiDisjunctivist,
        (Junction::Conjunctive, Implementation::Indifferent) => AgentType::IiConjunctivist,
    };
    ty.as_str().to_string()
}

impl TryFrom<GenericFile> for GenericInstance {
    type Error = SchemaError;

    fn try_from(f: GenericFile) -> Result<Self, SchemaError> {
        let mut agents = Vec::with_capacity(f.agents.len());
        for (i, a) in f.agents.into_iter().enumerate() {
            let (ty, junction, implementation) = parse_type(i, &a.agent_type)?;
            check_shape(i, ty, a.rules.is_empty(), a.outcomes.is_empty())?;
            agents.push(SatisfyingSpec {
                rule_set: a.rules.into_iter().collect(),
                outcome_set: a.outcomes.into_iter().collect(),
                junction,
                implementation,
                vote: a.vote,
            });
        }
        let feasible_outcomes = match f.feasible_outcomes {
            Some(v) => v.into_iter().collect(),
            None => f.outcomes.iter().cloned().collect(),
        };
        let feasible_rules = match f.feasible_rules {
            Some(v) => v.into_iter().collect(),
            None => f.rules.iter().map(|r| r.id.clone()).collect(),
        };
        Ok(GenericInstance::new(f.outcomes, f.rules, feasible_outcomes, feasible_rules, agents)?)
    }
}

impl From<&GenericInstance> for GenericFile {
    fn from(g: &GenericInstance) -> Self {
        GenericFile {
            outcomes: g.outcomes().to_vec(),
            rules: g.rules().to_vec(),
            feasible_outcomes: Some(g.feasible_outcomes().iter().cloned().collect()),
            feasible_rules: Some(g.feasible_rules().iter().cloned().collect()),
            agents: g
                .agents()
                .iter()
                .map(|a| GenericAgentFile {
                    agent_type: type_name(
                        a.junction,
                        a.implementation,
                        a.rule_set.is_empty(),
                        a.outcome_set.is_empty(),
                    ),
                    rules: a.rule_set.iter().cloned().collect(),
                    outcomes: a.outcome_set.iter().cloned().collect(),
                    vote: a.vote.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<AdcFile> for AdcInstance {
    type Error = SchemaError;

    fn try_from(f: AdcFile) -> Result<Self, SchemaError> {
        let votes = f
            .votes
            .chars()
            .map(|c| Alternative::from_char(c).ok_or(SchemaError::BadVote(c)))
            .collect::<Result<Vec<_>, _>>()?;
        if votes.len() != f.n as usize {
            return Err(SchemaError::VoteLength { n: f.n, got: votes.len() });
        }
        let mut agents = Vec::with_capacity(f.agents.len());
        for (i, a) in f.agents.into_iter().enumerate() {
            let (ty, junction, implementation) = parse_type(i, &a.agent_type)?;
            let mut rules: BTreeSet<Threshold> = a.thresholds.iter().copied().map(Threshold).collect();
            for d in a.deltas {
                if d.as_ratio() >= Ratio::from_integer(1) {
                    return Err(SchemaError::DeltaRange { agent: i, delta: d });
                }
                rules.insert(Threshold::from_delta(d.as_ratio(), f.n));
            }
            check_shape(i, ty, rules.is_empty(), a.outcomes.is_empty())?;
            agents.push(AdcAgent { junction, implementation, rules, outcomes: a.outcomes.into_iter().collect() });
        }
        let feasible = match f.feasible_t {
            Some(ts) => ts.into_iter().map(Threshold).collect(),
            None => Threshold::family(f.n).collect(),
        };
        Ok(AdcInstance::new(votes, feasible, agents)?)
    }
}

impl From<&AdcInstance> for AdcFile {
    fn from(inst: &AdcInstance) -> Self {
        let n = inst.n();
        let full: BTreeSet<Threshold> = Threshold::family(n).collect();
        AdcFile {
            n,
            votes: inst.votes().iter().map(|v| v.label()).collect(),
            agents: inst
                .agents()
                .iter()
                .map(|a| AdcAgentFile {
                    agent_type: type_name(a.junction, a.implementation, a.rules.is_empty(), a.outcomes.is_empty()),
                    outcomes: a.outcomes.iter().collect(),
                    thresholds: a.rules.iter().map(|t| t.0).collect(),
                    deltas: Vec::new(),
                })
                .collect(),
            feasible_t: (inst.feasible() != &full).then(|| inst.feasible().iter().map(|t| t.0).collect()),
        }
    }
}

impl TryFrom<AmendmentFile> for AmendmentInstance {
    type Error = SchemaError;

    fn try_from(f: AmendmentFile) -> Result<Self, SchemaError> {
        if f.peaks_t.len() != f.n as usize {
            return Err(AmendmentError::PeakCount { n: f.n, got: f.peaks_t.len() }.into());
        }
        let peaks = f.peaks_t.into_iter().map(Threshold).collect();
        Ok(AmendmentInstance::new(peaks, Threshold(f.status_quo_t), f.vote_policy)?)
    }
}

impl From<&AmendmentInstance> for AmendmentFile {
    fn from(a: &AmendmentInstance) -> Self {
        AmendmentFile {
            n: a.n(),
            status_quo_t: a.status_quo().0,
            peaks_t: a.peaks().iter().map(|t| t.0).collect(),
            vote_policy: a.policy(),
        }
    }
}
