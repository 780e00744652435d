#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharegame::netgraph::{generate, FamilySpec, Graph, Neighborhoods};
use sharegame::OwnerSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph with a random size in `sizes` and a random density.
pub fn random_graph(rng: &mut impl Rng, sizes: std::ops::RangeInclusive<usize>) -> Graph {
    let n = rng.random_range(sizes);
    let prob = rng.random_range(0.05..0.6);
    generate(&FamilySpec::ErRandom {
        n,
        prob,
        seed: rng.random(),
    })
    .unwrap()
}

/// Every subset of `0..n` as an owner set (n <= 20).
pub fn all_subsets(n: usize) -> impl Iterator<Item = OwnerSet> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Smallest dominating set size by exhaustive subset enumeration, using
/// BFS distances rather than the cached neighborhoods.
pub fn brute_force_domination_number(g: &Graph, k: usize) -> usize {
    let n = g.node_count();
    let masks: Vec<u32> = (0..n)
        .map(|i| {
            g.distances_within(i, k)
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_some())
                .fold(0u32, |m, (j, _)| m | 1 << j)
        })
        .collect();
    let full = (1u32 << n) - 1;
    (0u32..=full)
        .filter(|&set| {
            (0..n)
                .filter(|&i| set >> i & 1 == 1)
                .fold(0, |m, i| m | masks[i])
                == full
        })
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

pub fn hoods(g: &Graph, k: usize) -> Neighborhoods {
    Neighborhoods::new(g, k).unwrap()
}
