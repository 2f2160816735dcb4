//! Acceptance-maximizing mechanisms over generic instances.
//!
//! Every mechanism breaks ties by the smallest outcome id and then the
//! smallest rule id, and falls back to the first feasible decision in that
//! order when no agent accepts anything.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::accept::substitute_absolute_disjunctivist;
use crate::model::{AgentType, Decision, GenericInstance, OutcomeId, RuleId, SolveReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MechanismError {
    #[error("agent {agent} is not a {expected}")]
    AgentType { agent: usize, expected: AgentType },
}

pub(crate) fn require_type(instance: &GenericInstance, ty: AgentType) -> Result<(), MechanismError> {
    match instance.agents().iter().position(|a| !a.is_type(ty)) {
        Some(agent) => Err(MechanismError::AgentType { agent, expected: ty }),
        None => Ok(()),
    }
}

fn first_feasible(instance: &GenericInstance) -> Decision {
    instance.feasible_decisions().into_iter().next().expect("validated instances have a feasible decision")
}

/// Feasible rules grouped by the feasible outcome they realize, both in id
/// order.
fn realizable(instance: &GenericInstance) -> BTreeMap<&OutcomeId, Vec<&RuleId>> {
    let mut by_outcome: BTreeMap<&OutcomeId, Vec<&RuleId>> = BTreeMap::new();
    for r in instance.feasible_rules() {
        let y = instance.value_of(r).expect("validated rule");
        if instance.feasible_outcomes().contains(y) {
            by_outcome.entry(y).or_default().push(r);
        }
    }
    by_outcome
}

/// For each realizable outcome `a`, counts the agents that accept `a`
/// outright, then picks the feasible rule realizing `a` that wins the most
/// of the remaining agents through their rule sets. The best (rule, outcome)
/// pair over all outcomes is returned.
pub fn max_accept_absolute_disjunctivists(instance: &GenericInstance) -> Result<SolveReport, MechanismError> {
    require_type(instance, AgentType::AbsoluteDisjunctivist)?;
    let agents = instance.agents();
    let mut best: Option<(usize, Decision)> = None;
    for (outcome, rules) in realizable(instance) {
        let by_outcome: Vec<bool> = agents.iter().map(|a| a.outcome_set.contains(outcome)).collect();
        let base = by_outcome.iter().filter(|&&b| b).count();
        let mut best_rule = rules[0];
        let mut best_marginal = 0;
        for (k, &rule) in rules.iter().enumerate() {
            let marginal =
                agents.iter().zip(&by_outcome).filter(|(a, &in_base)| !in_base && a.rule_set.contains(rule)).count();
            if k == 0 || marginal > best_marginal {
                best_rule = rule;
                best_marginal = marginal;
            }
        }
        let total = base + best_marginal;
        if best.as_ref().is_none_or(|(t, _)| total > *t) {
            best = Some((total, Decision { rule: best_rule.clone(), outcome: outcome.clone() }));
        }
    }
    let (total, decision) = best.expect("validated instances have a feasible decision");
    let report = instance.report(decision);
    debug_assert_eq!(report.acceptance_count, total);
    Ok(report)
}

/// Rewrites every agent as an equivalent absolute disjunctivist on the
/// observed profile and solves that instance. Acceptance is reported
/// against the original agents.
pub fn max_accept_all_types(instance: &GenericInstance) -> SolveReport {
    let substituted = instance.agents().iter().map(|a| substitute_absolute_disjunctivist(a, instance)).collect();
    let reduced = instance.with_agents_unchecked(substituted);
    let on_reduced = max_accept_absolute_disjunctivists(&reduced).expect("substitutes are absolute disjunctivists");
    let report = instance.report(on_reduced.decision);
    debug_assert_eq!(report.acceptance_count, on_reduced.acceptance_count);
    report
}

/// Approval voting over realizable outcomes using the agents' outcome sets.
pub fn max_accept_consequentialists_generic(instance: &GenericInstance) -> Result<SolveReport, MechanismError> {
    require_type(instance, AgentType::Consequentialist)?;
    let approved: BTreeSet<&OutcomeId> = instance
        .agents()
        .iter()
        .flat_map(|a| a.outcome_set.iter())
        .filter(|y| instance.feasible_outcomes().contains(*y))
        .collect();
    if approved.is_empty() {
        return Ok(instance.report(first_feasible(instance)));
    }
    let support = |y: &OutcomeId| instance.agents().iter().filter(|a| a.outcome_set.contains(y)).count();
    let mut favourite: Option<(&OutcomeId, usize)> = None;
    for &y in &approved {
        let s = support(y);
        if favourite.is_none_or(|(_, best)| s > best) {
            favourite = Some((y, s));
        }
    }
    let favourite = favourite.map(|(y, _)| y);

    // One pass over the rules: stop early if the favourite is realizable,
    // otherwise remember the first rule realizing each approved outcome.
    let mut first_rule: BTreeMap<&OutcomeId, &RuleId> = BTreeMap::new();
    for r in instance.feasible_rules() {
        let y = instance.value_of(r).expect("validated rule");
        if !instance.feasible_outcomes().contains(y) {
            continue;
        }
        if Some(y) == favourite {
            return Ok(instance.report(Decision { rule: r.clone(), outcome: y.clone() }));
        }
        if approved.contains(y) {
            first_rule.entry(y).or_insert(r);
        }
    }
    let mut best: Option<(usize, Decision)> = None;
    for (y, r) in first_rule {
        let s = support(y);
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((s, Decision { rule: r.clone(), outcome: y.clone() }));
        }
    }
    let decision = match best {
        Some((s, d)) if s > 0 => d,
        _ => first_feasible(instance),
    };
    Ok(instance.report(decision))
}

/// The feasible rule with a feasible value contained in the most rule sets.
/// Only rules named by some agent are considered.
pub fn max_accept_absolute_proceduralists(instance: &GenericInstance) -> Result<SolveReport, MechanismError> {
    require_type(instance, AgentType::AbsoluteProceduralist)?;
    let named: BTreeSet<&RuleId> = instance.agents().iter().flat_map(|a| a.rule_set.iter()).collect();
    let candidates = instance.feasible_decisions().into_iter().filter(|d| named.contains(&d.rule));
    let decision = most_named(instance, candidates, |i, r| instance.agents()[i].rule_set.contains(r))
        .unwrap_or_else(|| first_feasible(instance));
    Ok(instance.report(decision))
}

/// Drops from each rule set the rules whose value on the profile is not an
/// acceptable outcome, then picks the feasible rule left in the most sets.
pub fn max_accept_absolute_conjunctivists(instance: &GenericInstance) -> Result<SolveReport, MechanismError> {
    require_type(instance, AgentType::AbsoluteConjunctivist)?;
    let filtered: Vec<BTreeSet<&RuleId>> = instance
        .agents()
        .iter()
        .map(|a| {
            a.rule_set.iter().filter(|r| instance.value_of(r).is_some_and(|y| a.outcome_set.contains(y))).collect()
        })
        .collect();
    let decision = most_named(instance, instance.feasible_decisions().into_iter(), |i, r| filtered[i].contains(r))
        .unwrap_or_else(|| first_feasible(instance));
    Ok(instance.report(decision))
}

fn most_named(
    instance: &GenericInstance,
    candidates: impl Iterator<Item = Decision>,
    member: impl Fn(usize, &RuleId) -> bool,
) -> Option<Decision> {
    let mut best: Option<(usize, Decision)> = None;
    for d in candidates {
        let c = (0..instance.n()).filter(|&i| member(i, &d.rule)).count();
        if best.as_ref().is_none_or(|(b, _)| c > *b) {
            best = Some((c, d));
        }
    }
    best.map(|(_, d)| d)
}
