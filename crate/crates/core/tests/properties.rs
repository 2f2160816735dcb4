use std::collections::BTreeSet;

use acceptmax_core::adc::{
    adc_absolute_disjunctivists, adc_consequentialists, adc_ii_conjunctivists, adc_ii_disjunctivists, AdcAgent,
    AdcInstance, Alternative, Threshold,
};
use acceptmax_core::amendment::{amend_iterative, amend_one_step, check_universal_acceptance};
use acceptmax_core::bounds::brute_force_max;
use acceptmax_core::mechanism::max_accept_all_types;
use acceptmax_core::oracle::oracle_max_count;
use acceptmax_core::{
    accepts, substitute_absolute_disjunctivist, AdcError, AdcReport, AmendmentInstance, GenericInstance,
    Implementation, Junction, OutcomeId, RuleId, RuleRef, SatisfyingSpec, VotePolicy,
};
use num_rational::Ratio;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn junction() -> impl Strategy<Value = Junction> {
    prop_oneof![Just(Junction::Disjunctive), Just(Junction::Conjunctive)]
}

fn implementation() -> impl Strategy<Value = Implementation> {
    prop_oneof![Just(Implementation::Absolute), Just(Implementation::Indifferent)]
}

fn spec(rules: usize, outcomes: usize) -> impl Strategy<Value = SatisfyingSpec> {
    let rs: Vec<String> = (0..rules).map(|r| format!("r{r}")).collect();
    let ys: Vec<String> = (0..outcomes).map(|o| format!("o{o}")).collect();
    (junction(), implementation(), subsequence(rs, 0..=rules), subsequence(ys, 0..=outcomes))
        .prop_map(|(j, i, r, y)| SatisfyingSpec::new(j, i, r, y))
}

/// Random outcome universe, rule values, feasible subsets and agents of
/// mixed types.
fn generic_instance() -> impl Strategy<Value = GenericInstance> {
    (1usize..=4, 1usize..=6, 1usize..=7)
        .prop_flat_map(|(outcomes, rules, agents)| {
            (
                Just(outcomes),
                proptest::collection::vec(0..outcomes, rules),
                proptest::collection::vec(any::<bool>(), outcomes),
                proptest::collection::vec(any::<bool>(), rules),
                proptest::collection::vec(spec(rules, outcomes), agents),
            )
        })
        .prop_filter_map("no feasible decision", |(outcomes, values, fo, fr, agents)| {
            let refs: Vec<RuleRef> =
                values.iter().enumerate().map(|(r, &o)| RuleRef::new(format!("r{r}"), format!("o{o}"))).collect();
            let fo: BTreeSet<OutcomeId> =
                (0..outcomes).filter(|&o| fo[o]).map(|o| OutcomeId::new(format!("o{o}"))).collect();
            let fr: BTreeSet<RuleId> =
                (0..values.len()).filter(|&r| fr[r]).map(|r| RuleId::new(format!("r{r}"))).collect();
            let universe = (0..outcomes).map(|o| OutcomeId::new(format!("o{o}"))).collect();
            GenericInstance::new(universe, refs, fo, fr, agents).ok()
        })
}

type Retype = fn(&AdcAgent) -> AdcAgent;
type AdcMechanism = fn(&AdcInstance) -> Result<AdcReport, AdcError>;

fn alt_set() -> impl Strategy<Value = Vec<Alternative>> {
    subsequence(Alternative::BOTH.to_vec(), 0..=2)
}

fn adc_agent(n: u32) -> impl Strategy<Value = AdcAgent> {
    let family: Vec<u32> = Threshold::family(n).map(|t| t.0).collect();
    let grid: Vec<u32> = (1..=n).collect();
    (junction(), implementation()).prop_flat_map(move |(j, i)| {
        let pool = if i == Implementation::Absolute { family.clone() } else { grid.clone() };
        let len = pool.len();
        (subsequence(pool, 0..=len), alt_set()).prop_map(move |(r, y)| AdcAgent::new(j, i, r, y))
    })
}

fn adc_instance(max_n: u32) -> impl Strategy<Value = AdcInstance> {
    (1..=max_n).prop_flat_map(|n| {
        let family: Vec<u32> = Threshold::family(n).map(|t| t.0).collect();
        let len = family.len();
        (
            proptest::collection::vec(
                prop_oneof![Just(Alternative::Proposal), Just(Alternative::StatusQuo)],
                n as usize,
            ),
            subsequence(family, 1..=len),
            proptest::collection::vec(adc_agent(n), n as usize),
        )
            .prop_map(|(votes, feasible, agents)| {
                AdcInstance::new(votes, feasible.into_iter().map(Threshold).collect(), agents).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn substitution_preserves_acceptance(instance in generic_instance()) {
        for agent in instance.agents() {
            let sub = substitute_absolute_disjunctivist(agent, &instance);
            prop_assert!(sub.is_absolute_disjunctive());
            for d in instance.feasible_decisions() {
                prop_assert_eq!(accepts(agent, &d, &instance), accepts(&sub, &d, &instance));
            }
        }
    }

    #[test]
    fn substitution_is_idempotent(instance in generic_instance()) {
        for agent in instance.agents() {
            let once = substitute_absolute_disjunctivist(agent, &instance);
            prop_assert_eq!(substitute_absolute_disjunctivist(&once, &instance), once);
        }
    }

    #[test]
    fn generic_mechanism_attains_oracle_maximum(instance in generic_instance()) {
        let report = max_accept_all_types(&instance);
        prop_assert!(instance.is_feasible(&report.decision));
        prop_assert_eq!(report.acceptance_count, oracle_max_count(&instance));
        prop_assert_eq!(instance.report(report.decision.clone()), report);
    }

    #[test]
    fn adc_mechanisms_attain_oracle_maximum(instance in adc_instance(9)) {
        let best = brute_force_max(&instance);
        prop_assert_eq!(best, oracle_max_count(&instance.to_generic()));
        let cases: [(Retype, AdcMechanism); 4] = [
            (|a| AdcAgent::consequentialist(a.outcomes.iter()), adc_consequentialists),
            (|a| AdcAgent::absolute_disjunctive(a.rules.iter().map(|t| t.0), a.outcomes.iter()), adc_absolute_disjunctivists),
            (|a| AdcAgent::ii_disjunctive(a.rules.iter().map(|t| t.0), a.outcomes.iter()), adc_ii_disjunctivists),
            (|a| AdcAgent::ii_conjunctive(a.rules.iter().map(|t| t.0), a.outcomes.iter()), adc_ii_conjunctivists),
        ];
        for (make, mechanism) in cases {
            let Ok(typed) = AdcInstance::new(
                instance.votes().to_vec(),
                instance.feasible().clone(),
                instance.agents().iter().map(make).collect(),
            ) else {
                // absolute agents may name thresholds outside the family
                continue;
            };
            let report = mechanism(&typed).unwrap();
            prop_assert!(typed.feasible().contains(&report.decision.threshold));
            prop_assert_eq!(report.acceptance_count, brute_force_max(&typed));
            prop_assert_eq!(typed.report(report.decision), report);
        }
    }

    #[test]
    fn enlarging_a_satisfying_set_never_lowers_the_maximum(
        instance in adc_instance(6),
        who in any::<prop::sample::Index>(),
        extra_t in 1u32..=6,
        extra_y in prop_oneof![Just(Alternative::Proposal), Just(Alternative::StatusQuo)],
    ) {
        let i = who.index(instance.agents().len());
        let before = brute_force_max(&instance);
        let mut agents = instance.agents().to_vec();
        agents[i].outcomes.insert(extra_y);
        let grown_y = AdcInstance::new(instance.votes().to_vec(), instance.feasible().clone(), agents.clone()).unwrap();
        prop_assert!(brute_force_max(&grown_y) >= before);
        agents[i].rules.insert(Threshold(extra_t.min(instance.n())));
        if let Ok(grown_r) = AdcInstance::new(instance.votes().to_vec(), instance.feasible().clone(), agents) {
            prop_assert!(brute_force_max(&grown_r) >= brute_force_max(&grown_y));
        }
    }

    #[test]
    fn threshold_and_delta_agree(n in 1u32..=40, t in 1u32..=40, v in 0u32..=40) {
        prop_assume!(t <= n && v <= n);
        let t = Threshold(t);
        let delta = t.delta(n);
        prop_assert_eq!(delta.as_ratio(), Ratio::new(u64::from(t.0 - 1), u64::from(n)));
        prop_assert_eq!(Threshold::from_delta(delta.as_ratio(), n), t);
        prop_assert_eq!(t.select(v) == Alternative::Proposal, v >= t.0);
        prop_assert_eq!(Threshold::parse_rule_id(&t.rule_id()), Some(t));
    }

    #[test]
    fn amendment_steps_are_universally_accepted(
        peaks in (2u32..=12).prop_flat_map(|n| (Just(n), proptest::collection::vec(Threshold::majority(n).0..=n, n as usize))),
        sq in any::<prop::sample::Index>(),
        policy in prop_oneof![Just(VotePolicy::Nearer), Just(VotePolicy::StatusQuo), Just(VotePolicy::Proposal)],
    ) {
        let (n, peaks) = peaks;
        let family: Vec<Threshold> = Threshold::family(n).collect();
        let status_quo = family[sq.index(family.len())];
        let instance = AmendmentInstance::new(peaks.into_iter().map(Threshold).collect(), status_quo, policy).unwrap();
        let h = instance.h();
        let trace = amend_iterative(&instance);
        prop_assert!(check_universal_acceptance(&trace, &instance));
        prop_assert_eq!(trace.final_decision.rule, if status_quo <= h { h } else { status_quo });
        let one = amend_one_step(&instance);
        prop_assert_eq!(one.universal.unwrap_or(true), true);
        let fixed = AmendmentInstance::new(instance.peaks().to_vec(), h, policy).unwrap();
        prop_assert_eq!(amend_iterative(&fixed).final_decision.rule, h);
    }
}
