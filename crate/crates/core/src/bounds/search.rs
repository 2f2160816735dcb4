use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adc::{AdcInstance, Threshold};

use super::class::InstanceClass;
use super::enumerate::{max_lane, slices, Packed, Slice, Worst, MAX_N};
use super::BoundsError;

/// Draws instances of a class: a satisfiable p-vote count, the votes in
/// random order and an admissible satisfying set per agent, all uniform.
#[derive(Clone, Debug)]
pub struct ClassSampler {
    n: u32,
    slices: Vec<Slice>,
}

impl ClassSampler {
    pub fn new(class: &InstanceClass, n: u32) -> Result<Self, BoundsError> {
        if n > MAX_N {
            return Err(BoundsError::TooManyAgents(n));
        }
        let slices = slices(class, n);
        if n == 0 || slices.is_empty() {
            return Err(BoundsError::Unsatisfiable { class: class.id(), n });
        }
        Ok(ClassSampler { n, slices })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> AdcInstance {
        let slice = &self.slices[rng.gen_range(0..self.slices.len())];
        let picks: Vec<usize> = (0..self.n as usize).map(|i| rng.gen_range(0..slice.at(i).0.len())).collect();
        let grouped = slice.instance(self.n, &picks);
        let mut order: Vec<usize> = (0..self.n as usize).collect();
        order.shuffle(rng);
        let votes = order.iter().map(|&i| grouped.votes()[i]).collect();
        let agents = order.iter().map(|&i| grouped.agents()[i].clone()).collect();
        AdcInstance::with_full_family(votes, agents).expect("a permutation of a valid instance is valid")
    }
}

/// Evaluations per independently seeded chunk.
const CHUNK: u64 = 4096;
/// Local-search moves before a fresh random restart.
const RESTART: u64 = 256;

/// Random restarts plus single-agent hill climbing toward fewer
/// acceptances. Chunk `c` draws from stream `c` of the seed, and chunks
/// reduce by (count, chunk), so the result depends only on the arguments.
pub(crate) fn randomized_min(class: &InstanceClass, n: u32, seed: u64, samples: u64) -> Option<Worst> {
    let slices = slices(class, n);
    if slices.is_empty() {
        return None;
    }
    let lanes = Threshold::family(n).count();
    let chunks = samples.div_ceil(CHUNK).max(1);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let budget = CHUNK.min(samples.saturating_sub(c * CHUNK)).max(1);
            (search_chunk(&slices, n, lanes, seed, c, budget), c)
        })
        .min_by_key(|((count, _, _), c)| (*count, *c))?;
    let ((count, s, picks), _) = best;
    Some(Worst { count, instance: slices[s].instance(n, &picks) })
}

fn search_chunk(
    slices: &[Slice],
    n: u32,
    lanes: usize,
    seed: u64,
    chunk: u64,
    budget: u64,
) -> (u32, usize, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let n = n as usize;
    let mut best = (u32::MAX, 0, Vec::new());
    let mut spent = 0;
    while spent < budget {
        let s = rng.gen_range(0..slices.len());
        let slice = &slices[s];
        let mut picks: Vec<usize> = (0..n).map(|i| rng.gen_range(0..slice.at(i).0.len())).collect();
        let mut acc: Packed = picks.iter().enumerate().map(|(i, &k)| slice.at(i).1[k]).sum();
        let mut count = max_lane(acc, lanes);
        spent += 1;
        for _ in 0..RESTART {
            if count < best.0 {
                best = (count, s, picks.clone());
            }
            if count == 0 || spent >= budget {
                break;
            }
            let i = rng.gen_range(0..n);
            let masks = slice.at(i).1;
            let k = rng.gen_range(0..masks.len());
            let next = acc - masks[picks[i]] + masks[k];
            let next_count = max_lane(next, lanes);
            spent += 1;
            if next_count <= count {
                picks[i] = k;
                acc = next;
                count = next_count;
            }
        }
        if count < best.0 {
            best = (count, s, picks);
        }
        if best.0 == 0 {
            break;
        }
    }
    best
}
