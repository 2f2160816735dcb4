use std::fmt;

use itertools::Itertools;

use crate::adc::{family_size, AdcAgent, AltSet, Alternative, Threshold};
use crate::model::{AgentType, Implementation, Junction};
use crate::rate::Rate;

use super::BoundsError;

/// A per-agent restriction on satisfying sets, relative to the observed
/// votes. "Realizable" outcomes are those some feasible rule selects on
/// the observed votes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Assumption {
    None,
    /// `v_i ∈ Y_i` and some feasible rule in `R_i`.
    VoteInYAndFeasibleRule,
    /// A feasible rule in `R_i` selects a realizable outcome in `Y_i`.
    FeasibleRuleSelectsY,
    /// At least `k` feasible rules in `R_i`.
    MinFeasibleRules,
    /// `Y_i` contains a realizable outcome.
    RealizableY,
    /// Some rule in `R_i`, feasible or not, selects a realizable outcome in `Y_i`.
    RuleSelectsY,
    /// Some rule in `R_i` selects a realizable outcome.
    RuleSelectsRealizable,
    /// `Y_i` holds exactly one realizable outcome and some rule in `R_i`
    /// selects the other one.
    ExactlyOneYOtherByRule,
    /// `v_i ∈ Y_i`.
    VoteInY,
}

/// Homogeneous agent type plus an assumption on every agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InstanceClass {
    pub agent_type: AgentType,
    pub assumption: Assumption,
    k: u32,
    row: Option<&'static str>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Formula {
    Zero,
    TwoOverN,
    Pigeonhole,
    Half,
    One,
}

const NAMED: [(&str, AgentType, Assumption, Formula); 12] = [
    ("any-none", AgentType::Any, Assumption::None, Formula::Zero),
    ("abs-conj-vote", AgentType::AbsoluteConjunctivist, Assumption::VoteInYAndFeasibleRule, Formula::Zero),
    ("abs-conj-realizable", AgentType::AbsoluteConjunctivist, Assumption::FeasibleRuleSelectsY, Formula::TwoOverN),
    ("abs-disj-rule", AgentType::AbsoluteDisjunctivist, Assumption::MinFeasibleRules, Formula::TwoOverN),
    ("abs-disj-k", AgentType::AbsoluteDisjunctivist, Assumption::MinFeasibleRules, Formula::Pigeonhole),
    ("abs-disj-y", AgentType::AbsoluteDisjunctivist, Assumption::RealizableY, Formula::Half),
    ("ii-conj", AgentType::IiConjunctivist, Assumption::RuleSelectsY, Formula::Half),
    ("ii-disj-rule", AgentType::IiDisjunctivist, Assumption::RuleSelectsRealizable, Formula::Half),
    ("ii-disj-y", AgentType::IiDisjunctivist, Assumption::RealizableY, Formula::Half),
    ("ii-disj-last", AgentType::IiDisjunctivist, Assumption::ExactlyOneYOtherByRule, Formula::One),
    ("conseq-y", AgentType::Consequentialist, Assumption::RealizableY, Formula::Half),
    ("conseq-consistent", AgentType::Consequentialist, Assumption::VoteInY, Formula::Half),
];

/// Ids of the rows of the worst-case table, in table order.
pub const TABLE_ROWS: [&str; 10] = [
    "any-none",
    "abs-conj-vote",
    "abs-conj-realizable",
    "abs-disj-rule",
    "abs-disj-k",
    "abs-disj-y",
    "ii-conj",
    "ii-disj-rule",
    "ii-disj-y",
    "ii-disj-last",
];

pub const CLASS_IDS: [&str; 12] = [
    "any-none",
    "abs-conj-vote",
    "abs-conj-realizable",
    "abs-disj-rule",
    "abs-disj-k",
    "abs-disj-y",
    "ii-conj",
    "ii-disj-rule",
    "ii-disj-y",
    "ii-disj-last",
    "conseq-y",
    "conseq-consistent",
];

impl InstanceClass {
    /// A named class. `k` is required by `abs-disj-k` and rejected elsewhere.
    pub fn parse(id: &str, k: Option<u32>) -> Result<InstanceClass, BoundsError> {
        let &(row, agent_type, assumption, formula) =
            NAMED.iter().find(|row| row.0 == id).ok_or_else(|| BoundsError::UnknownClass(id.to_string()))?;
        let k = match (formula, k) {
            (Formula::Pigeonhole, Some(k)) => k,
            (Formula::Pigeonhole, None) => return Err(BoundsError::MissingK),
            (_, Some(_)) => return Err(BoundsError::UnexpectedK(id.to_string())),
            (_, None) if assumption == Assumption::MinFeasibleRules => 1,
            (_, None) => 0,
        };
        Ok(InstanceClass { agent_type, assumption, k, row: Some(row) })
    }

    /// Every instance whose agents are all of type `ty`.
    pub fn unrestricted(ty: AgentType) -> InstanceClass {
        InstanceClass { agent_type: ty, assumption: Assumption::None, k: 0, row: None }
    }

    fn named(&self) -> Option<&'static (&'static str, AgentType, Assumption, Formula)> {
        let row = self.row?;
        NAMED.iter().find(|r| r.0 == row)
    }

    pub fn is_table_row(&self) -> bool {
        self.row.is_some_and(|r| TABLE_ROWS.contains(&r))
    }

    pub fn k(&self) -> Option<u32> {
        self.named().filter(|r| r.3 == Formula::Pigeonhole).map(|_| self.k)
    }

    pub fn id(&self) -> String {
        match self.named() {
            Some(row) => row.0.to_string(),
            None => format!("{}-none", self.agent_type.as_str().replace('_', "-")),
        }
    }

    /// The closed-form worst-case rate for `n` agents.
    pub fn formula(&self, n: u32) -> Result<Rate, BoundsError> {
        let Some(&(_, _, _, formula)) = self.named() else {
            return Err(BoundsError::NoFormula(self.id()));
        };
        if n < 2 {
            return Err(BoundsError::TooFewAgents(n));
        }
        let n64 = n as u64;
        Ok(match formula {
            Formula::Zero => Rate::ZERO,
            Formula::TwoOverN => Rate::new(2, n64),
            Formula::Pigeonhole => {
                let m = family_size(n) as u64;
                if self.k as u64 > m {
                    return Err(BoundsError::Unsatisfiable { class: self.id(), n });
                }
                Rate::new((n64 * self.k as u64).div_ceil(m), n64)
            }
            Formula::Half => Rate::new(1, 2),
            Formula::One => Rate::ONE,
        })
    }

    /// Whether `agent`, voting `vote` when `votes_p` of `n` agents vote p
    /// under the full supermajority family, belongs to this class.
    pub fn admits(&self, agent: &AdcAgent, vote: Alternative, votes_p: u32, n: u32) -> bool {
        if !agent.is_type(self.agent_type) {
            return false;
        }
        let realizable: AltSet = Alternative::BOTH
            .into_iter()
            .filter(|a| match a {
                Alternative::StatusQuo => votes_p < n,
                Alternative::Proposal => votes_p >= Threshold::majority(n).0,
            })
            .collect();
        let feasible = |t: &&Threshold| crate::adc::in_family(**t, n);
        let selected = |t: &Threshold| t.select(votes_p);
        let y_real = agent.outcomes.intersection(realizable);
        match self.assumption {
            Assumption::None => true,
            Assumption::VoteInYAndFeasibleRule => {
                agent.outcomes.contains(vote) && agent.rules.iter().any(|t| feasible(&t))
            }
            Assumption::FeasibleRuleSelectsY => {
                agent.rules.iter().filter(feasible).any(|t| y_real.contains(selected(t)))
            }
            Assumption::MinFeasibleRules => agent.rules.iter().filter(feasible).count() >= self.k as usize,
            Assumption::RealizableY => !y_real.is_empty(),
            Assumption::RuleSelectsY => agent.rules.iter().any(|t| y_real.contains(selected(t))),
            Assumption::RuleSelectsRealizable => agent.rules.iter().any(|t| realizable.contains(selected(t))),
            Assumption::ExactlyOneYOtherByRule => {
                y_real.len() == 1
                    && agent
                        .rules
                        .iter()
                        .any(|t| realizable.contains(selected(t)) && !agent.outcomes.contains(selected(t)))
            }
            Assumption::VoteInY => agent.outcomes.contains(vote),
        }
    }

    /// Every satisfying set an agent voting `vote` may hold, in a fixed order.
    ///
    /// Implementation-indifferent rule sets are listed by representative:
    /// only the smallest and largest threshold of such a set affect
    /// acceptance, so `{∅} ∪ {{a, b} : a ≤ b}` covers every behaviour.
    pub fn agent_specs(&self, n: u32, votes_p: u32, vote: Alternative) -> Vec<AdcAgent> {
        let flags: Vec<(Junction, Implementation)> = match self.agent_type.flags() {
            Some(f) => vec![f],
            None => vec![
                (Junction::Disjunctive, Implementation::Absolute),
                (Junction::Conjunctive, Implementation::Absolute),
                (Junction::Disjunctive, Implementation::Indifferent),
                (Junction::Conjunctive, Implementation::Indifferent),
            ],
        };
        let mut out = Vec::new();
        for (junction, implementation) in flags {
            for rules in rule_sets(n, implementation) {
                for outcomes in AltSet::ALL {
                    let agent = AdcAgent { junction, implementation, rules: rules.iter().copied().collect(), outcomes };
                    if self.admits(&agent, vote, votes_p, n) {
                        out.push(agent);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.named().map(|r| r.3) {
            Some(Formula::Pigeonhole) => write!(f, "{} (k = {})", self.id(), self.k),
            _ => f.write_str(&self.id()),
        }
    }
}

fn rule_sets(n: u32, implementation: Implementation) -> Vec<Vec<Threshold>> {
    match implementation {
        Implementation::Absolute => Threshold::family(n).powerset().collect(),
        Implementation::Indifferent => {
            let mut sets = vec![Vec::new()];
            for a in 1..=n {
                sets.push(vec![Threshold(a)]);
                sets.extend((a + 1..=n).map(|b| vec![Threshold(a), Threshold(b)]));
            }
            sets
        }
    }
}
