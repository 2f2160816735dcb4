//! Seeded fixtures shared by the benchmarks.

use acceptmax_core::{GenericInstance, Implementation, Junction, OutcomeId, RuleRef, SatisfyingSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A fully feasible generic instance with random satisfying sets of mixed
/// types. Same arguments, same instance.
pub fn random_generic(agents: usize, rules: usize, outcomes: usize, seed: u64) -> GenericInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome_ids: Vec<String> = (0..outcomes).map(|o| format!("o{o}")).collect();
    let rule_refs: Vec<RuleRef> =
        (0..rules).map(|r| RuleRef::new(format!("r{r}"), outcome_ids.choose(&mut rng).unwrap().clone())).collect();
    let specs = (0..agents)
        .map(|_| {
            let junction = if rng.gen() { Junction::Disjunctive } else { Junction::Conjunctive };
            let implementation = if rng.gen() { Implementation::Absolute } else { Implementation::Indifferent };
            let rs: Vec<String> = rule_refs.iter().filter(|_| rng.gen_bool(0.3)).map(|r| r.id.to_string()).collect();
            let ys: Vec<String> = outcome_ids.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
            SatisfyingSpec::new(junction, implementation, rs, ys)
        })
        .collect();
    GenericInstance::fully_feasible(outcome_ids.into_iter().map(OutcomeId::new).collect(), rule_refs, specs)
        .expect("generated ids are consistent")
}
