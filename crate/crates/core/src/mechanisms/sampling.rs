use num_bigint::{BigInt, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::allocation::{DeterministicAllocation, RandomizedAllocation};

/// The crate's single seeded generator.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws one support allocation with its exact probability.
///
/// Probabilities are scaled to integers over their common denominator `D`; a
/// uniform integer in `[0, D)` selects the atom by cumulative mass in canonical
/// support order.
pub fn sample_allocation(dist: &RandomizedAllocation, seed: u64) -> DeterministicAllocation {
    let support = dist.support();
    let denom = support
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(a.probability.denom()));
    let mut rng = seeded_rng(seed);
    let (_, mag) = denom.into_parts();
    let draw = BigInt::from_biguint(Sign::Plus, rng.gen_biguint_below(&mag));
    let denom = BigInt::from_biguint(Sign::Plus, mag);
    let mut acc = BigInt::from(0);
    for atom in support {
        acc += atom.probability.numer() * (&denom / atom.probability.denom());
        if draw < acc {
            return atom.allocation.clone();
        }
    }
    support[support.len() - 1].allocation.clone()
}
