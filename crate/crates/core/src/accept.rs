//! The per-type acceptance predicate and the substitution that rewrites any
//! agent as an absolute disjunctivist on the observed profile.

use std::collections::BTreeSet;

use crate::model::{Decision, GenericInstance, Implementation, Junction, OutcomeId, SatisfyingSpec};

/// Whether `agent` accepts `decision` on the instance's observed profile.
///
/// Absolute agents test rule membership directly. Implementation-indifferent
/// agents test whether some rule in their set would have produced the same
/// outcome, so two decisions with equal outcomes are always judged alike.
pub fn accepts(agent: &SatisfyingSpec, decision: &Decision, instance: &GenericInstance) -> bool {
    let by_outcome = agent.outcome_set.contains(&decision.outcome);
    // Short-circuit before the rule side, which is the costly part for II agents.
    match (agent.junction, by_outcome) {
        (Junction::Disjunctive, true) => return true,
        (Junction::Conjunctive, false) => return false,
        _ => {}
    }
    match agent.implementation {
        Implementation::Absolute => agent.rule_set.contains(&decision.rule),
        Implementation::Indifferent => agent.rule_set.iter().any(|r| instance.value_of(r) == Some(&decision.outcome)),
    }
}

/// An absolute-disjunctive spec accepting exactly the same decisions of the
/// observed profile as `agent`. The vote is carried over unchanged.
pub fn substitute_absolute_disjunctivist(agent: &SatisfyingSpec, instance: &GenericInstance) -> SatisfyingSpec {
    let realized = |agent: &SatisfyingSpec| -> BTreeSet<OutcomeId> {
        agent.rule_set.iter().filter_map(|r| instance.value_of(r).cloned()).collect()
    };
    let (rule_set, outcome_set) = match (agent.junction, agent.implementation) {
        (Junction::Disjunctive, Implementation::Absolute) => {
            return agent.clone();
        }
        (Junction::Disjunctive, Implementation::Indifferent) => {
            let mut ys = agent.outcome_set.clone();
            ys.extend(realized(agent));
            (BTreeSet::new(), ys)
        }
        (Junction::Conjunctive, Implementation::Indifferent) => {
            let realized = realized(agent);
            let ys = agent.outcome_set.intersection(&realized).cloned().collect();
            (BTreeSet::new(), ys)
        }
        (Junction::Conjunctive, Implementation::Absolute) => {
            let rs = agent
                .rule_set
                .iter()
                .filter(|r| instance.value_of(r).is_some_and(|o| agent.outcome_set.contains(o)))
                .cloned()
                .collect();
            (rs, BTreeSet::new())
        }
    };
    SatisfyingSpec {
        rule_set,
        outcome_set,
        junction: Junction::Disjunctive,
        implementation: Implementation::Absolute,
        vote: agent.vote.clone(),
    }
}
