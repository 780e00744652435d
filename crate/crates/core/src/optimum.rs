//! Socially optimal purchase sets: minimum distance-k dominating sets by
//! branch and bound, a greedy upper bound, and export of the covering
//! integer program as an LP file.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::game::OwnerSet;
use crate::netgraph::{Graph, Neighborhoods};

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub owners: OwnerSet,
    /// The search finished within budget, so no smaller dominating set exists.
    pub proven_optimal: bool,
    pub nodes_explored: u64,
}

impl OptResult {
    pub fn size(&self) -> usize {
        self.owners.len()
    }

    /// Social cost `p * |owners|`.
    pub fn cost(&self, price: f64) -> f64 {
        price * self.owners.len() as f64
    }
}

/// Minimum distance-k dominating set of `graph`.
pub fn min_dominating_exact(graph: &Graph, k: usize, node_budget: u64) -> Result<OptResult> {
    let hoods = Neighborhoods::new(graph, k)?;
    Ok(min_dominating_exact_in(&hoods, node_budget))
}

/// Repeatedly takes the node covering the most uncovered nodes (ties to the
/// lowest id) until everything is covered.
pub fn min_dominating_greedy(hoods: &Neighborhoods) -> OwnerSet {
    let n = hoods.node_count();
    let mut covered = vec![false; n];
    let mut left = n;
    let mut picked = Vec::new();
    while left > 0 {
        let (best, _) = (0..n)
            .map(|c| (c, hoods.of(c).iter().filter(|&&v| !covered[v]).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        for &v in hoods.of(best) {
            if !std::mem::replace(&mut covered[v], true) {
                left -= 1;
            }
        }
        picked.push(best);
    }
    OwnerSet::new(picked)
}

/// Branch and bound over which node covers the hardest uncovered node.
///
/// The incumbent starts at the greedy solution. Each search node computes a
/// lower bound by greedily packing uncovered nodes whose remaining
/// candidate sets are pairwise disjoint (each needs its own owner). The
/// branching node is the uncovered node with the fewest remaining
/// candidates; candidates are tried in decreasing order of new coverage,
/// and each tried candidate is excluded from the later sibling branches.
pub fn min_dominating_exact_in(hoods: &Neighborhoods, node_budget: u64) -> OptResult {
    let n = hoods.node_count();
    let balls: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut set = FixedBitSet::with_capacity(n);
            for &j in hoods.of(i) {
                set.insert(j);
            }
            set
        })
        .collect();
    let greedy = min_dominating_greedy(hoods);
    let mut solver = Solver {
        balls,
        best: greedy.as_slice().to_vec(),
        explored: 0,
        budget: node_budget,
        aborted: false,
    };
    let mut chosen = Vec::new();
    solver.search(
        &mut chosen,
        &FixedBitSet::with_capacity(n),
        &FixedBitSet::with_capacity(n),
    );
    OptResult {
        owners: OwnerSet::new(solver.best),
        proven_optimal: !solver.aborted,
        nodes_explored: solver.explored,
    }
}

struct Solver {
    /// Closed k-hop ball of each node; by symmetry also the set of nodes
    /// able to cover it.
    balls: Vec<FixedBitSet>,
    best: Vec<usize>,
    explored: u64,
    budget: u64,
    aborted: bool,
}

impl Solver {
    fn search(&mut self, chosen: &mut Vec<usize>, covered: &FixedBitSet, excluded: &FixedBitSet) {
        if self.explored >= self.budget {
            self.aborted = true;
            return;
        }
        self.explored += 1;
        let n = self.balls.len();
        if covered.count_ones(..) == n {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        if chosen.len() + 1 >= self.best.len() {
            return;
        }

        // remaining candidates of every uncovered node
        let mut open: Vec<(usize, FixedBitSet, usize)> = Vec::new();
        for u in covered.zeroes() {
            let mut avail = self.balls[u].clone();
            avail.difference_with(excluded);
            let count = avail.count_ones(..);
            if count == 0 {
                return;
            }
            open.push((u, avail, count));
        }
        open.sort_by_key(|&(u, _, count)| (count, u));

        let mut used = FixedBitSet::with_capacity(n);
        let mut packed = 0;
        for (_, avail, _) in &open {
            if avail.is_disjoint(&used) {
                used.union_with(avail);
                packed += 1;
            }
        }
        if chosen.len() + packed >= self.best.len() {
            return;
        }

        let (_, avail, _) = &open[0];
        let mut candidates: Vec<(usize, usize)> = avail
            .ones()
            .map(|c| (c, self.balls[c].difference(covered).count()))
            .collect();
        candidates.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let mut local_excluded = excluded.clone();
        for (c, _) in candidates {
            let mut next = covered.clone();
            next.union_with(&self.balls[c]);
            chosen.push(c);
            self.search(chosen, &next, &local_excluded);
            chosen.pop();
            if self.aborted {
                return;
            }
            local_excluded.insert(c);
        }
    }
}

/// Number of variable terms written per LP line before wrapping.
const TERMS_PER_LINE: usize = 12;

/// The covering integer program in CPLEX LP format: minimise `p * sum x_i`
/// subject to one covering constraint `c{i}` per node, all `x_i` binary.
pub fn export_ilp(hoods: &Neighborhoods, price: f64) -> String {
    let n = hoods.node_count();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ minimum distance-{} dominating set, {n} nodes",
        hoods.k()
    );
    out.push_str("Minimize\n obj:");
    write_sum(&mut out, (0..n).map(|i| (Some(price), i)));
    out.push_str("\nSubject To\n");
    for i in 0..n {
        let _ = write!(out, " c{i}:");
        write_sum(&mut out, hoods.of(i).iter().map(|&j| (None, j)));
        out.push_str(" >= 1\n");
    }
    out.push_str("Binary\n");
    for i in 0..n {
        let _ = writeln!(out, " x{i}");
    }
    out.push_str("End\n");
    out
}

fn write_sum(out: &mut String, terms: impl Iterator<Item = (Option<f64>, usize)>) {
    for (idx, (coef, var)) in terms.enumerate() {
        if idx > 0 {
            if idx % TERMS_PER_LINE == 0 {
                out.push_str("\n  ");
            }
            out.push_str(" +");
        }
        match coef {
            Some(c) => {
                let _ = write!(out, " {c} x{var}");
            }
            None => {
                let _ = write!(out, " x{var}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_dominating;
    use crate::netgraph::{generate, FamilySpec};

    fn hoods(spec: FamilySpec, k: usize) -> Neighborhoods {
        Neighborhoods::new(&generate(&spec).unwrap(), k).unwrap()
    }

    /// Smallest dominating set size by trying subsets in increasing size.
    fn brute_force_size(h: &Neighborhoods) -> usize {
        let n = h.node_count();
        let masks: Vec<u32> = (0..n)
            .map(|i| h.of(i).iter().fold(0u32, |m, &j| m | 1 << j))
            .collect();
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        (0u32..=full)
            .filter(|&set| {
                let cov = (0..n)
                    .filter(|&i| set >> i & 1 == 1)
                    .fold(0u32, |m, i| m | masks[i]);
                cov == full
            })
            .map(|set| set.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn greedy_examples() {
        let star = min_dominating_greedy(&hoods(FamilySpec::Star { n: 100 }, 1));
        assert_eq!(star.as_slice(), &[0]);
        let h = hoods(FamilySpec::Chain { n: 6 }, 1);
        assert_eq!(min_dominating_greedy(&h).len(), 2);
        assert_eq!(brute_force_size(&h), 2);
        let complete = min_dominating_greedy(&hoods(FamilySpec::Complete { n: 9 }, 1));
        assert_eq!(complete.len(), 1);
    }

    #[test]
    fn exact_small_families() {
        for (spec, k, want) in [
            (FamilySpec::Star { n: 100 }, 1, 1),
            (FamilySpec::Chain { n: 100 }, 1, 34),
            (FamilySpec::Chain { n: 10 }, 2, 2),
            (FamilySpec::Complete { n: 12 }, 1, 1),
        ] {
            let r = min_dominating_exact_in(&hoods(spec.clone(), k), DEFAULT_NODE_BUDGET);
            assert!(r.proven_optimal, "{spec}");
            assert_eq!(r.size(), want, "{spec} k={k}");
            assert!(is_dominating(&hoods(spec, k), &r.owners));
        }
    }

    #[test]
    fn karate_optima() {
        let g = generate(&FamilySpec::Karate).unwrap();
        for (k, want) in [(1, 4), (2, 2), (3, 1), (4, 1)] {
            let r = min_dominating_exact(&g, k, DEFAULT_NODE_BUDGET).unwrap();
            assert!(r.proven_optimal);
            assert_eq!(r.size(), want, "k={k}");
            assert_eq!(r.cost(1.0), want as f64);
        }
    }

    #[test]
    fn budget_exhaustion_keeps_incumbent() {
        let g = generate(&FamilySpec::Karate).unwrap();
        let r = min_dominating_exact(&g, 1, 0).unwrap();
        assert!(!r.proven_optimal);
        let h = Neighborhoods::new(&g, 1).unwrap();
        assert!(is_dominating(&h, &r.owners));
        assert_eq!(r.owners, min_dominating_greedy(&h));
    }

    #[test]
    fn empty_graph() {
        let r = min_dominating_exact(&Graph::empty(0), 1, 10).unwrap();
        assert!(r.proven_optimal && r.owners.is_empty());
    }

    #[test]
    fn lp_export_chain_two() {
        let lp = export_ilp(&hoods(FamilySpec::Chain { n: 2 }, 1), 1.0);
        assert_eq!(
            lp,
            "\\ minimum distance-1 dominating set, 2 nodes\n\
             Minimize\n obj: 1 x0 + 1 x1\n\
             Subject To\n c0: x0 + x1 >= 1\n c1: x0 + x1 >= 1\n\
             Binary\n x0\n x1\nEnd\n"
        );
    }

    #[test]
    fn lp_export_shape() {
        let lp = export_ilp(&hoods(FamilySpec::Star { n: 3 }, 1), 2.5);
        assert!(lp.contains(" c0: x0 + x1 + x2 >= 1\n"));
        assert!(lp.contains(" obj: 2.5 x0 + 2.5 x1 + 2.5 x2\n"));
        let lp = export_ilp(&hoods(FamilySpec::Karate, 2), 1.0);
        let constraints = lp.lines().filter(|l| l.starts_with(" c")).count();
        assert_eq!(constraints, 34);
        assert!(lp.lines().all(|l| l.len() < 255));
    }
}
