use std::sync::atomic::{AtomicUsize, Ordering};

use itertools::Itertools;
use rayon::prelude::*;

use crate::adc::{AdcAgent, AdcInstance, Alternative, Threshold};

use super::class::InstanceClass;

/// Acceptance of each feasible decision packed one byte per decision,
/// majority first. Summing packed masks over agents counts acceptances for
/// all decisions at once.
pub(crate) type Packed = u64;

/// Largest electorate the packed counters support.
pub const MAX_N: u32 = 15;

pub(crate) fn packed_mask(agent: &AdcAgent, votes_p: u32, n: u32) -> Packed {
    Threshold::family(n)
        .enumerate()
        .filter(|(_, t)| agent.accepts(*t, t.select(votes_p), votes_p))
        .fold(0, |acc, (j, _)| acc | 1 << (8 * j))
}

pub(crate) fn max_lane(acc: Packed, lanes: usize) -> u32 {
    (0..lanes).map(|j| (acc >> (8 * j)) as u32 & 0xff).max().unwrap_or(0)
}

/// Admissible satisfying sets for one p-vote count.
#[derive(Clone, Debug)]
pub(crate) struct Slice {
    pub votes_p: u32,
    pub p_specs: Vec<AdcAgent>,
    pub r_specs: Vec<AdcAgent>,
    pub p_masks: Vec<Packed>,
    pub r_masks: Vec<Packed>,
}

impl Slice {
    pub fn new(class: &InstanceClass, n: u32, votes_p: u32) -> Self {
        let p_specs = class.agent_specs(n, votes_p, Alternative::Proposal);
        let r_specs = class.agent_specs(n, votes_p, Alternative::StatusQuo);
        let masks = |specs: &[AdcAgent]| specs.iter().map(|a| packed_mask(a, votes_p, n)).collect();
        Slice { votes_p, p_masks: masks(&p_specs), r_masks: masks(&r_specs), p_specs, r_specs }
    }

    /// Some instance with this vote count belongs to the class.
    pub fn satisfiable(&self, n: u32) -> bool {
        (self.votes_p == 0 || !self.p_specs.is_empty()) && (self.votes_p == n || !self.r_specs.is_empty())
    }

    /// Specs and masks for position `i` (p-voters first).
    pub fn at(&self, i: usize) -> (&[AdcAgent], &[Packed]) {
        if i < self.votes_p as usize {
            (&self.p_specs, &self.p_masks)
        } else {
            (&self.r_specs, &self.r_masks)
        }
    }

    /// The instance with p-voters first and the given spec indices.
    pub fn instance(&self, n: u32, picks: &[usize]) -> AdcInstance {
        let votes = (0..n as usize)
            .map(|i| if i < self.votes_p as usize { Alternative::Proposal } else { Alternative::StatusQuo })
            .collect();
        let agents = picks.iter().enumerate().map(|(i, &k)| self.at(i).0[k].clone()).collect();
        AdcInstance::with_full_family(votes, agents).expect("enumerated specs are valid")
    }
}

pub(crate) fn slices(class: &InstanceClass, n: u32) -> Vec<Slice> {
    (0..=n).map(|v| Slice::new(class, n, v)).filter(|s| s.satisfiable(n)).collect()
}

fn binomial(n: u32, k: u32) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of instances in the class: every vote vector times every
/// admissible satisfying set per agent. Saturates at `u128::MAX`.
pub fn class_size(class: &InstanceClass, n: u32) -> u128 {
    (0..=n)
        .map(|v| {
            let s = Slice::new(class, n, v);
            let p = (s.p_specs.len() as u128).checked_pow(v);
            let r = (s.r_specs.len() as u128).checked_pow(n - v);
            match (p, r) {
                (Some(p), Some(r)) => binomial(n, v).saturating_mul(p).saturating_mul(r),
                _ => u128::MAX,
            }
        })
        .fold(0u128, u128::saturating_add)
}

/// Every instance of the class: all vote vectors in lexicographic order
/// (`p` before `r`), then all per-agent satisfying sets.
pub fn enumerate_instances(class: InstanceClass, n: u32) -> impl Iterator<Item = AdcInstance> {
    let by_v: Vec<Slice> = (0..=n).map(|v| Slice::new(&class, n, v)).collect();
    (0..n).map(|_| [Alternative::Proposal, Alternative::StatusQuo]).multi_cartesian_product().flat_map(move |votes| {
        let v = votes.iter().filter(|a| **a == Alternative::Proposal).count();
        let slice = &by_v[v];
        let lists: Vec<Vec<AdcAgent>> = votes
            .iter()
            .map(|a| match a {
                Alternative::Proposal => slice.p_specs.clone(),
                Alternative::StatusQuo => slice.r_specs.clone(),
            })
            .collect();
        lists.into_iter().multi_cartesian_product().map(move |agents| {
            AdcInstance::with_full_family(votes.clone(), agents).expect("enumerated specs are valid")
        })
    })
}

/// One representative per agent permutation: p-voters first, each side a
/// multiset of satisfying sets. Acceptance counts are invariant under
/// permuting agents, so class minima over this stream equal those over
/// [`enumerate_instances`].
pub fn canonical_instances(class: InstanceClass, n: u32) -> impl Iterator<Item = AdcInstance> {
    slices(&class, n).into_iter().flat_map(move |slice| {
        let v = slice.votes_p as usize;
        let ps: Vec<Vec<usize>> = (0..slice.p_specs.len()).combinations_with_replacement(v).collect();
        let rs: Vec<Vec<usize>> = (0..slice.r_specs.len()).combinations_with_replacement(n as usize - v).collect();
        ps.into_iter().cartesian_product(rs).map(move |(p, r)| slice.instance(n, &[p, r].concat()))
    })
}

/// Fewest acceptances the best decision can get, with the first instance
/// (in canonical order) attaining it.
#[derive(Clone, Debug)]
pub(crate) struct Worst {
    pub count: u32,
    pub instance: AdcInstance,
}

struct Task<'a> {
    slice: &'a Slice,
    first: usize,
}

/// Exhaustive minimum over the canonical stream. Work is split by vote
/// count and first pick; ties resolve to the earliest task, so the result
/// does not depend on scheduling.
pub(crate) fn exhaustive_min(class: &InstanceClass, n: u32) -> Option<Worst> {
    let slices = slices(class, n);
    let lanes = Threshold::family(n).count();
    let tasks: Vec<Task> =
        slices.iter().flat_map(|s| (0..s.at(0).0.len()).map(move |first| Task { slice: s, first })).collect();
    let zero_at = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<(u32, Vec<usize>)>> = tasks
        .par_iter()
        .enumerate()
        .map(|(idx, task)| {
            if zero_at.load(Ordering::Relaxed) < idx {
                return None;
            }
            let found = search_task(task, n, lanes);
            if found.0 == 0 {
                zero_at.fetch_min(idx, Ordering::Relaxed);
            }
            Some(found)
        })
        .collect();
    let (idx, (count, picks)) = results
        .into_iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| (i, r)))
        .min_by_key(|(i, (count, _))| (*count, *i))?;
    Some(Worst { count, instance: tasks[idx].slice.instance(n, &picks) })
}

fn search_task(task: &Task, n: u32, lanes: usize) -> (u32, Vec<usize>) {
    let mut picks = vec![0usize; n as usize];
    picks[0] = task.first;
    let mut best = (u32::MAX, Vec::new());
    let acc = task.slice.at(0).1[task.first];
    descend(task.slice, n as usize, lanes, 1, acc, &mut picks, &mut best);
    best
}

/// Depth-first over non-decreasing picks within each side. Returns `true`
/// once a zero-acceptance instance is found.
fn descend(
    slice: &Slice,
    n: usize,
    lanes: usize,
    depth: usize,
    acc: Packed,
    picks: &mut [usize],
    best: &mut (u32, Vec<usize>),
) -> bool {
    if depth == n {
        let count = max_lane(acc, lanes);
        if count < best.0 {
            *best = (count, picks.to_vec());
        }
        return count == 0;
    }
    let v = slice.votes_p as usize;
    let start = if depth == v { 0 } else { picks[depth - 1] };
    let masks = slice.at(depth).1;
    for (k, &mask) in masks.iter().enumerate().skip(start) {
        picks[depth] = k;
        if descend(slice, n, lanes, depth + 1, acc + mask, picks, best) {
            return true;
        }
    }
    false
}

/// Most acceptances any feasible decision gets, by trying them all.
pub fn brute_force_max(instance: &AdcInstance) -> usize {
    instance.feasible().iter().map(|&t| instance.report(instance.decision(t)).acceptance_count).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AgentType;
    use crate::oracle::oracle_max_count;

    #[test]
    fn full_count_matches_example() {
        let c = InstanceClass::parse("abs-disj-rule", None).unwrap();
        assert_eq!(class_size(&c, 3), 8 * 12u128.pow(3));
        assert_eq!(enumerate_instances(c, 3).count() as u128, class_size(&c, 3));
    }

    #[test]
    fn any_none_contains_the_empty_instance() {
        let c = InstanceClass::parse("any-none", None).unwrap();
        let empty = AdcAgent::absolute_disjunctive([], []);
        assert!(canonical_instances(c, 2).any(|inst| inst.agents().iter().all(|a| *a == empty)));
    }

    #[test]
    fn canonical_stream_counts_multisets() {
        let c = InstanceClass::unrestricted(AgentType::Consequentialist);
        // four outcome sets per agent; multisets of size v and 3 - v
        let multisets = |k: u32| binomial(4 + k - 1, k);
        let want: u128 = (0..=3).map(|v| multisets(v) * multisets(3 - v)).sum();
        assert_eq!(canonical_instances(c, 3).count() as u128, want);
    }

    #[test]
    fn packed_count_matches_oracle() {
        for ty in [AgentType::AbsoluteConjunctivist, AgentType::IiDisjunctivist, AgentType::Any] {
            for inst in canonical_instances(InstanceClass::unrestricted(ty), 2) {
                let v = inst.votes_p();
                let acc: Packed = inst.agents().iter().map(|a| packed_mask(a, v, 2)).sum();
                let fast = max_lane(acc, 1) as usize;
                assert_eq!(fast, brute_force_max(&inst));
                assert_eq!(fast, oracle_max_count(&inst.to_generic()));
            }
        }
    }

    #[test]
    fn exhaustive_min_is_first_in_canonical_order() {
        let c = InstanceClass::parse("conseq-y", None).unwrap();
        let worst = exhaustive_min(&c, 4).unwrap();
        assert_eq!(worst.count, 2);
        let first = canonical_instances(c, 4).find(|i| brute_force_max(i) == 2).unwrap();
        assert_eq!(worst.instance, first);
    }
}
