//! Efficiency of equilibria: exact enumeration of equilibrium owner sets on
//! small graphs, flow-based feasibility of SGG-AC owner sets, price of
//! anarchy / stability, and Monte Carlo statistics of best-response
//! dynamics.

use rayon::prelude::*;

use crate::dynamics::{best_response_dynamics, derive_seed};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::game::{Game, OwnerSet, Profile, Variant};
use crate::netgraph::Neighborhoods;
use crate::optimum::{min_dominating_exact_in, DEFAULT_NODE_BUDGET};

pub const DEFAULT_MAX_N_SGG: usize = 20;
pub const DEFAULT_MAX_N_SGGAC: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub opt_cost: f64,
    pub worst_ne_cost: f64,
    pub best_ne_cost: f64,
    pub poa: f64,
    pub pos: f64,
    /// Extrema are over all equilibria (enumeration) rather than a sample,
    /// and the optimum is proven.
    pub exact: bool,
}

impl EfficiencyReport {
    fn new(price: f64, opt: usize, best: usize, worst: usize, exact: bool) -> Self {
        let ratio = |x: usize| if opt == 0 { 1.0 } else { x as f64 / opt as f64 };
        Self {
            opt_cost: price * opt as f64,
            worst_ne_cost: price * worst as f64,
            best_ne_cost: price * best as f64,
            poa: ratio(worst),
            pos: ratio(best),
            exact,
        }
    }
}

fn check_size(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        return Err(Error::Size { n, max_n });
    }
    Ok(())
}

/// All k-independent dominating sets (the SGG equilibrium owner sets),
/// sorted, found by backtracking over nodes in id order.
pub fn enumerate_ne_owner_sets_sgg(hoods: &Neighborhoods, max_n: usize) -> Result<Vec<OwnerSet>> {
    let n = hoods.node_count();
    check_size(n, max_n)?;
    // closing[i]: nodes whose last possible dominator is i
    let mut closing = vec![Vec::new(); n];
    for u in 0..n {
        let last = *hoods
            .of(u)
            .last()
            .expect("neighborhood contains the node itself");
        closing[last].push(u);
    }
    let mut walk = Backtrack {
        hoods,
        closing,
        near_owners: vec![0; n],
        chosen: Vec::new(),
        found: Vec::new(),
    };
    walk.visit(0);
    let mut found = walk.found;
    found.sort();
    Ok(found)
}

struct Backtrack<'a> {
    hoods: &'a Neighborhoods,
    closing: Vec<Vec<usize>>,
    /// Owners within k hops of each node (including itself).
    near_owners: Vec<usize>,
    chosen: Vec<usize>,
    found: Vec<OwnerSet>,
}

impl Backtrack<'_> {
    fn visit(&mut self, idx: usize) {
        if idx == self.near_owners.len() {
            self.found.push(OwnerSet::new(self.chosen.clone()));
            return;
        }
        if self.near_owners[idx] == 0 {
            self.shift(idx, true);
            self.chosen.push(idx);
            self.visit(idx + 1);
            self.chosen.pop();
            self.shift(idx, false);
        }
        if self.closing[idx].iter().all(|&u| self.near_owners[u] > 0) {
            self.visit(idx + 1);
        }
    }

    fn shift(&mut self, owner: usize, add: bool) {
        for &j in self.hoods.of(owner) {
            if add {
                self.near_owners[j] += 1;
            } else {
                self.near_owners[j] -= 1;
            }
        }
    }
}

/// An equilibrium profile with exactly `owners` buying, if one exists.
///
/// Every non-owner must reach an owner, and every owner with another owner
/// in range needs at least `xi` followers. The follower assignment is a
/// bipartite flow: source to each non-owner (capacity 1), non-owner to each
/// contested owner it reaches (capacity 1), contested owner to sink
/// (capacity `xi`). Non-owners left over follow the lowest-id owner they
/// reach.
pub fn sggac_witness(hoods: &Neighborhoods, xi: usize, owners: &OwnerSet) -> Option<Profile> {
    let n = hoods.node_count();
    if owners.iter().any(|o| o >= n) {
        return None;
    }
    let is_owner = owners.to_mask(n);
    let reachable = |v: usize| -> Vec<usize> {
        hoods
            .of(v)
            .iter()
            .copied()
            .filter(|&o| o != v && is_owner[o])
            .collect()
    };
    let contested: Vec<usize> = owners
        .iter()
        .filter(|&o| !reachable(o).is_empty())
        .collect();
    let non_owners: Vec<usize> = (0..n).filter(|&v| !is_owner[v]).collect();
    if non_owners.iter().any(|&v| reachable(v).is_empty()) {
        return None;
    }

    // network layout: source, non-owners, contested owners, sink
    let source = 0;
    let sink = 1 + non_owners.len() + contested.len();
    let contested_slot = |o: usize| contested.binary_search(&o).ok();
    let mut net = FlowNetwork::new(sink + 1);
    let mut links = Vec::new();
    for (idx, &v) in non_owners.iter().enumerate() {
        net.add_arc(source, 1 + idx, 1);
        for o in reachable(v) {
            if let Some(slot) = contested_slot(o) {
                let id = net.add_arc(1 + idx, 1 + non_owners.len() + slot, 1);
                links.push((v, o, id));
            }
        }
    }
    for slot in 0..contested.len() {
        net.add_arc(1 + non_owners.len() + slot, sink, xi);
    }
    if net.max_flow(source, sink) < xi * contested.len() {
        return None;
    }

    let mut targets: Vec<usize> = (0..n).collect();
    let mut assigned = vec![false; n];
    for (v, o, id) in links {
        if net.flow(id) > 0 {
            targets[v] = o;
            assigned[v] = true;
        }
    }
    for &v in &non_owners {
        if !assigned[v] {
            targets[v] = reachable(v)[0];
        }
    }
    Some(Profile::sgg_ac(targets))
}

/// Whether some SGG-AC equilibrium has exactly `owners` as its buyers.
pub fn sggac_owner_set_feasible(hoods: &Neighborhoods, xi: usize, owners: &OwnerSet) -> bool {
    sggac_witness(hoods, xi, owners).is_some()
}

/// Price of anarchy and stability by exhaustive search over equilibrium
/// owner sets; limited to graphs with at most `max_n` nodes.
pub fn exact_efficiency(game: &Game<'_>, max_n: usize) -> Result<EfficiencyReport> {
    let hoods = game.neighborhoods();
    let n = hoods.node_count();
    check_size(n, max_n)?;
    let opt = min_dominating_exact_in(hoods, DEFAULT_NODE_BUDGET);
    let cfg = game.config();
    let (best, worst) = match cfg.variant() {
        Variant::Sgg => {
            let sizes: Vec<usize> = enumerate_ne_owner_sets_sgg(hoods, max_n)?
                .iter()
                .map(OwnerSet::len)
                .collect();
            (
                sizes.iter().copied().min().unwrap_or(0),
                sizes.iter().copied().max().unwrap_or(0),
            )
        }
        Variant::SggAc => {
            let xi = cfg.xi().expect("SGG-AC config has a threshold");
            let feasible_of_size = |size: usize| {
                subsets_of_size(n, size).any(|set| sggac_owner_set_feasible(hoods, xi, &set))
            };
            let best = (0..=n).find(|&s| feasible_of_size(s)).unwrap_or(0);
            let worst = (0..=n).rev().find(|&s| feasible_of_size(s)).unwrap_or(0);
            (best, worst)
        }
    };
    Ok(EfficiencyReport::new(
        cfg.price(),
        opt.size(),
        best,
        worst,
        opt.proven_optimal,
    ))
}

/// All `size`-element subsets of `0..n` in colexicographic order.
fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = OwnerSet> {
    let mut current: Option<Vec<usize>> = (size <= n).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // advance to the next combination
        let mut next = out.clone();
        let mut i = 0;
        loop {
            if i == size {
                current = None;
                break;
            }
            let limit = if i + 1 < size { next[i + 1] } else { n };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                current = Some(next);
                break;
            }
            i += 1;
        }
        Some(OwnerSet::new(out))
    })
}

/// Social cost statistics over independent best-response runs.
#[derive(Debug, Clone, PartialEq)]
pub struct CostStats {
    pub runs: usize,
    pub mean: f64,
    /// Unbiased sample standard deviation (0 for a single run).
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub mean_passes: f64,
}

/// Runs best-response dynamics `runs` times, run `r` seeded by
/// `derive_seed(master_seed, r)`. Runs may execute in parallel; the
/// statistics are summed in run order so results do not depend on the
/// worker count.
pub fn empirical_cost_stats(game: &Game<'_>, runs: usize, master_seed: u64) -> Result<CostStats> {
    let outcomes = run_replicates(game, runs, master_seed)?;
    let costs: Vec<f64> = outcomes.iter().map(|&(c, _)| c).collect();
    let count = runs as f64;
    let mean = costs.iter().sum::<f64>() / count;
    let std = if runs > 1 {
        (costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(CostStats {
        runs,
        mean,
        std,
        min: costs.iter().copied().fold(f64::INFINITY, f64::min),
        max: costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_passes: outcomes.iter().map(|&(_, p)| p as f64).sum::<f64>() / count,
    })
}

/// `(social cost, passes)` of each run, in run order.
fn run_replicates(game: &Game<'_>, runs: usize, master_seed: u64) -> Result<Vec<(f64, usize)>> {
    if runs == 0 {
        return Err(Error::Argument("runs must be at least 1".into()));
    }
    (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let out = best_response_dynamics(game, derive_seed(master_seed, r))?;
            assert!(
                game.is_nash(&out.profile),
                "dynamics returned a non-equilibrium"
            );
            Ok((game.social_cost(&out.profile)?, out.passes))
        })
        .collect()
}

/// Efficiency estimated from sampled equilibria; the worst sampled cost
/// only bounds the true price of anarchy from below.
pub fn sampled_efficiency(
    game: &Game<'_>,
    runs: usize,
    master_seed: u64,
) -> Result<EfficiencyReport> {
    let price = game.config().price();
    let owners: Vec<usize> = run_replicates(game, runs, master_seed)?
        .iter()
        .map(|&(c, _)| (c / price).round() as usize)
        .collect();
    let opt = min_dominating_exact_in(game.neighborhoods(), DEFAULT_NODE_BUDGET);
    Ok(EfficiencyReport::new(
        price,
        opt.size(),
        *owners.iter().min().expect("runs >= 1"),
        *owners.iter().max().expect("runs >= 1"),
        false,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;
    use crate::netgraph::{generate, FamilySpec, Graph};

    fn six_node_graph() -> Graph {
        let edges = [(3, 1), (3, 2), (3, 4), (3, 5), (3, 6), (4, 6), (5, 6)];
        Graph::from_edges(6, edges.iter().map(|&(u, v)| (u - 1, v - 1))).unwrap()
    }

    fn set(ids: &[usize]) -> OwnerSet {
        OwnerSet::new(ids.to_vec())
    }

    /// Independent dominating sets by checking all 2^n subsets directly
    /// against pairwise distances.
    fn brute_force_ids(g: &Graph, k: usize) -> Vec<OwnerSet> {
        let n = g.node_count();
        let dist: Vec<Vec<Option<usize>>> =
            (0..n).map(|i| g.distances_within(i, usize::MAX)).collect();
        let close = |a: usize, b: usize| dist[a][b].is_some_and(|d| d <= k);
        let mut out = Vec::new();
        for mask in 0u32..1 << n {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let independent = members
                .iter()
                .all(|&a| members.iter().all(|&b| a == b || !close(a, b)));
            let dominating = (0..n).all(|v| members.iter().any(|&o| close(v, o)));
            if independent && dominating {
                out.push(OwnerSet::new(members));
            }
        }
        out.sort();
        out
    }

    #[test]
    fn six_node_graph_enumeration() {
        let g = six_node_graph();
        let hoods = Neighborhoods::new(&g, 1).unwrap();
        let sets = enumerate_ne_owner_sets_sgg(&hoods, 20).unwrap();
        assert_eq!(sets, brute_force_ids(&g, 1));
        // 1-based {3}, {1,2,6}, {1,2,4,5}
        for s in [set(&[2]), set(&[0, 1, 5]), set(&[0, 1, 3, 4])] {
            assert!(sets.contains(&s), "{s:?}");
        }
    }

    #[test]
    fn star_and_complete_enumeration() {
        let star = generate(&FamilySpec::Star { n: 5 }).unwrap();
        let sets = enumerate_ne_owner_sets_sgg(&Neighborhoods::new(&star, 1).unwrap(), 20).unwrap();
        assert_eq!(sets, vec![set(&[0]), set(&[1, 2, 3, 4])]);

        let k4 = generate(&FamilySpec::Complete { n: 4 }).unwrap();
        let sets = enumerate_ne_owner_sets_sgg(&Neighborhoods::new(&k4, 1).unwrap(), 20).unwrap();
        assert_eq!(sets, (0..4).map(|i| set(&[i])).collect::<Vec<_>>());
    }

    #[test]
    fn enumeration_size_limit() {
        let g = generate(&FamilySpec::Chain { n: 21 }).unwrap();
        let hoods = Neighborhoods::new(&g, 1).unwrap();
        assert!(matches!(
            enumerate_ne_owner_sets_sgg(&hoods, 20),
            Err(Error::Size { n: 21, max_n: 20 })
        ));
    }

    #[test]
    fn flow_feasibility_examples() {
        let k6 = Neighborhoods::new(&generate(&FamilySpec::Complete { n: 6 }).unwrap(), 1).unwrap();
        assert!(sggac_owner_set_feasible(&k6, 2, &set(&[0, 1])));
        let k4 = Neighborhoods::new(&generate(&FamilySpec::Complete { n: 4 }).unwrap(), 1).unwrap();
        assert!(!sggac_owner_set_feasible(&k4, 2, &set(&[0, 1])));
        let star = Neighborhoods::new(&generate(&FamilySpec::Star { n: 100 }).unwrap(), 1).unwrap();
        assert!(sggac_owner_set_feasible(&star, 5, &set(&[0])));
        // not dominating
        let chain = Neighborhoods::new(&generate(&FamilySpec::Chain { n: 5 }).unwrap(), 1).unwrap();
        assert!(!sggac_owner_set_feasible(&chain, 1, &set(&[0])));
    }

    #[test]
    fn witness_is_equilibrium() {
        let g = generate(&FamilySpec::Complete { n: 6 }).unwrap();
        let game = Game::new(&g, GameConfig::sgg_ac_with_xi(1, 2.0, 1.0, 2).unwrap());
        let s = sggac_witness(game.neighborhoods(), 2, &set(&[0, 1])).unwrap();
        game.check_profile(&s).unwrap();
        assert!(game.is_nash(&s));
        assert_eq!(game.followers(&s, 0).unwrap().len(), 2);
    }

    #[test]
    fn exact_efficiency_star() {
        let g = generate(&FamilySpec::Star { n: 10 }).unwrap();
        let game = Game::new(&g, GameConfig::sgg(1, 2.0, 1.0).unwrap());
        let r = exact_efficiency(&game, DEFAULT_MAX_N_SGG).unwrap();
        assert_eq!(
            (r.opt_cost, r.best_ne_cost, r.worst_ne_cost, r.poa, r.pos),
            (1.0, 1.0, 9.0, 9.0, 1.0)
        );
        assert!(r.exact);
    }

    #[test]
    fn exact_efficiency_six_node() {
        let g = six_node_graph();
        let game = Game::new(&g, GameConfig::sgg(1, 2.0, 1.0).unwrap());
        let r = exact_efficiency(&game, DEFAULT_MAX_N_SGG).unwrap();
        assert_eq!((r.opt_cost, r.pos, r.poa), (1.0, 1.0, 4.0));
    }

    #[test]
    fn exact_efficiency_complete_access_costs() {
        let g = generate(&FamilySpec::Complete { n: 6 }).unwrap();
        let game = Game::new(&g, GameConfig::sgg_ac_with_xi(1, 2.0, 1.0, 2).unwrap());
        let r = exact_efficiency(&game, DEFAULT_MAX_N_SGGAC).unwrap();
        assert_eq!((r.opt_cost, r.worst_ne_cost, r.poa), (1.0, 2.0, 2.0));
        assert_eq!(r.pos, 1.0);
    }

    #[test]
    fn combinations_are_complete() {
        for n in 0..7 {
            for size in 0..=n + 1 {
                let all: Vec<OwnerSet> = subsets_of_size(n, size).collect();
                let expected = if size > n {
                    0
                } else {
                    (0..size).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
                };
                assert_eq!(all.len(), expected, "n={n} size={size}");
                let unique: std::collections::HashSet<_> = all.iter().cloned().collect();
                assert_eq!(unique.len(), all.len());
                assert!(all.iter().all(|s| s.len() == size));
            }
        }
    }

    #[test]
    fn stats_of_star() {
        let g = generate(&FamilySpec::Star { n: 20 }).unwrap();
        let game = Game::new(&g, GameConfig::sgg(1, 2.0, 1.0).unwrap());
        let stats = empirical_cost_stats(&game, 200, 9).unwrap();
        assert!(stats.min == 1.0 || stats.min == 19.0);
        assert_eq!(stats.max, 19.0);
        assert!(stats.mean > 15.0 && stats.mean <= 19.0);
        assert_eq!(stats, empirical_cost_stats(&game, 200, 9).unwrap());
        assert!(empirical_cost_stats(&game, 0, 9).is_err());
        let one = empirical_cost_stats(&game, 1, 9).unwrap();
        assert_eq!(one.std, 0.0);
    }

    #[test]
    fn sampled_report_is_flagged() {
        let g = generate(&FamilySpec::Karate).unwrap();
        let game = Game::new(&g, GameConfig::sgg(1, 2.0, 1.0).unwrap());
        let r = sampled_efficiency(&game, 50, 1).unwrap();
        assert!(!r.exact);
        assert_eq!(r.opt_cost, 4.0);
        assert!(1.0 <= r.pos && r.pos <= r.poa);
    }
}
