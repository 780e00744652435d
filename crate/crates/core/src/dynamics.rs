//! Equilibrium-finding procedures: best-response dynamics, the greedy
//! constructive equilibrium, and repair of a socially optimal owner set
//! into an equilibrium with access costs.

use std::collections::VecDeque;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{is_dominating, Game, OwnerSet, Profile, Variant, MONEY_TOL};

/// Number of passes best-response dynamics may need before it must have
/// reached an equilibrium.
pub const PASS_BOUND: usize = 3;

/// Safety cap on passes; only reached if the pass bound is already broken.
const PASS_CAP: usize = 64;

/// Kind of improving deviation, as classified at the moment it happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeviationCase {
    /// An unserved node buys because no other owner is within k hops.
    UnservedBuys = 1,
    /// An unserved node rents (free rides) from an owner within k hops.
    UnservedRents = 2,
    /// A non-owner buys although an owner is in range, because it already
    /// has at least `xi` followers.
    FollowedNonOwnerBuys = 3,
    /// An owner with another owner in range gives up its good.
    OwnerDefects = 4,
}

impl DeviationCase {
    pub fn index(self) -> usize {
        self as usize - 1
    }
}

#[derive(Debug, Clone)]
pub struct DynamicsResult {
    pub profile: Profile,
    /// Passes over the node order executed before the equilibrium check held.
    pub passes: usize,
    pub deviations: usize,
    pub seed: u64,
    /// `case_counts[pass][case - 1]`: deviations of each case in each pass.
    pub case_counts: Vec<[usize; 4]>,
}

impl DynamicsResult {
    pub fn count(&self, pass: usize, case: DeviationCase) -> usize {
        self.case_counts
            .get(pass)
            .map_or(0, |counts| counts[case.index()])
    }
}

/// SplitMix64 finaliser.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `run` under `master`; independent of worker scheduling.
pub fn derive_seed(master: u64, run: u64) -> u64 {
    mix64(mix64(master) ^ run)
}

/// Best-response dynamics from the empty profile with a random node order.
///
/// SGG starts with nobody buying; SGG-AC starts with each node pointing at a
/// uniformly random other node within k hops (isolated nodes buy). The node
/// order is drawn once and reused by every pass. A node moves only when it
/// can strictly improve, and then to a uniformly random best response.
pub fn best_response_dynamics(game: &Game<'_>, seed: u64) -> Result<DynamicsResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = initial_profile(game, &mut rng);
    let mut order: Vec<usize> = (0..game.node_count()).collect();
    order.shuffle(&mut rng);
    run_passes(game, profile, &order, &mut rng, seed)
}

/// Same as [`best_response_dynamics`] but with a caller-chosen node order.
/// The seed still drives the SGG-AC initial profile and tie-breaking.
pub fn best_response_dynamics_ordered(
    game: &Game<'_>,
    order: &[usize],
    seed: u64,
) -> Result<DynamicsResult> {
    let n = game.node_count();
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
    {
        return Err(Error::Argument(format!(
            "node order must be a permutation of 0..{n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = initial_profile(game, &mut rng);
    run_passes(game, profile, order, &mut rng, seed)
}

fn initial_profile(game: &Game<'_>, rng: &mut impl Rng) -> Profile {
    let n = game.node_count();
    match game.config().variant() {
        Variant::Sgg => Profile::from_choices(Variant::Sgg, vec![0; n]),
        Variant::SggAc => {
            let hoods = game.neighborhoods();
            let targets = (0..n)
                .map(|i| {
                    let others: Vec<usize> =
                        hoods.of(i).iter().copied().filter(|&j| j != i).collect();
                    others.choose(rng).copied().unwrap_or(i)
                })
                .collect();
            Profile::sgg_ac(targets)
        }
    }
}

fn run_passes(
    game: &Game<'_>,
    mut s: Profile,
    order: &[usize],
    rng: &mut impl Rng,
    seed: u64,
) -> Result<DynamicsResult> {
    let mut passes = 0;
    let mut deviations = 0;
    let mut case_counts = Vec::new();
    while !game.is_nash(&s) {
        if passes == PASS_CAP {
            break;
        }
        passes += 1;
        let mut counts = [0usize; 4];
        for &i in order {
            let current = game.utility(&s, i);
            if current >= game.best_utility(&s, i) - MONEY_TOL {
                continue;
            }
            let best = game.best_response_set(&s, i);
            let next = *best.choose(rng).expect("best-response set is never empty");
            counts[classify(game, &s, i, next).index()] += 1;
            s.set(i, next);
            deviations += 1;
        }
        case_counts.push(counts);
    }
    if passes > PASS_BOUND {
        return Err(Error::PassBound { passes });
    }
    Ok(DynamicsResult {
        profile: s,
        passes,
        deviations,
        seed,
        case_counts,
    })
}

/// Classifies the improving move of `i` from its strategy in `s` to `next`.
pub fn classify(game: &Game<'_>, s: &Profile, i: usize, next: usize) -> DeviationCase {
    let buys_next = match s.variant() {
        Variant::Sgg => next == 1,
        Variant::SggAc => next == i,
    };
    let served = game.utility(s, i) > MONEY_TOL;
    match (s.is_owner(i), buys_next) {
        (true, false) => DeviationCase::OwnerDefects,
        (false, true) if game.other_owner_in_range(s, i) => DeviationCase::FollowedNonOwnerBuys,
        (false, true) => DeviationCase::UnservedBuys,
        (false, false) if !served => DeviationCase::UnservedRents,
        _ => unreachable!(
            "node {i} moved from {} to {next} without improving",
            s.choice(i)
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PickRule {
    LowestId,
    Random(u64),
}

/// Constructive equilibrium: repeatedly pick a remaining node, make it an
/// owner, let every remaining node within k hops follow it, and remove
/// them all.
pub fn greedy_ne(game: &Game<'_>, rule: PickRule) -> Profile {
    let n = game.node_count();
    let hoods = game.neighborhoods();
    let variant = game.config().variant();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];
    let mut choices = vec![0; n];
    let mut rng = match rule {
        PickRule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        PickRule::LowestId => None,
    };
    while !remaining.is_empty() {
        let owner = match rng.as_mut() {
            Some(rng) => remaining[rng.random_range(0..remaining.len())],
            None => remaining[0],
        };
        for &j in hoods.of(owner) {
            if alive[j] {
                alive[j] = false;
                choices[j] = match variant {
                    Variant::Sgg => usize::from(j == owner),
                    Variant::SggAc => owner,
                };
            }
        }
        remaining.retain(|&j| alive[j]);
    }
    Profile::from_choices(variant, choices)
}

/// Upper bound on the number of owners [`stabilize`] may produce from an
/// optimal owner set of size `opt_size`.
pub fn stabilize_owner_bound(opt_size: usize, k: usize, xi: usize) -> usize {
    opt_size * (xi / (k / 2 + 1)).max(1)
}

/// Turns a distance-k dominating owner set into an SGG-AC equilibrium.
///
/// Every non-owner first follows its nearest owner (multi-source BFS, so
/// each owner's followers induce a connected subgraph). Then, while some
/// owner with fewer than `xi` followers has another owner in range, it
/// follows the lowest-id such owner; its former followers move to the
/// lowest-id owner they can reach, and those that reach none are scanned in
/// ascending id order, each becoming a new owner followed by all still
/// unserved nodes within k hops.
pub fn stabilize(game: &Game<'_>, opt_owners: &OwnerSet) -> Result<Profile> {
    let cfg = game.config();
    let xi = cfg.xi().ok_or(Error::Variant { expected: "SGG-AC" })?;
    let graph = game.graph();
    let hoods = game.neighborhoods();
    let n = graph.node_count();
    if opt_owners.iter().any(|o| o >= n) {
        return Err(Error::Argument("owner id out of range".into()));
    }
    if !is_dominating(hoods, opt_owners) {
        return Err(Error::Argument(format!(
            "owner set is not distance-{} dominating",
            cfg.k()
        )));
    }

    let mut target = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for o in opt_owners.iter() {
        target[o] = o;
        queue.push_back(o);
    }
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if target[v] == usize::MAX {
                target[v] = target[u];
                queue.push_back(v);
            }
        }
    }
    debug_assert!((0..n).all(|v| hoods.contains(v, target[v])));
    let mut s = Profile::sgg_ac(target);

    let lowest_owner_in_range = |s: &Profile, v: usize| {
        hoods
            .of(v)
            .iter()
            .copied()
            .find(|&j| j != v && s.is_owner(j))
    };

    // each round retires one original owner, so at most |opt| rounds
    for _ in 0..=opt_owners.len() {
        let poor = (0..n).find(|&i| {
            s.is_owner(i) && game.follower_count(&s, i) < xi && game.other_owner_in_range(&s, i)
        });
        let Some(i) = poor else {
            return Ok(s);
        };
        let former = game.followers(&s, i)?;
        let j = lowest_owner_in_range(&s, i).expect("poor owner has an owner in range");
        s.set(i, j);

        let mut unserved = Vec::new();
        for f in former {
            match lowest_owner_in_range(&s, f) {
                Some(o) => s.set(f, o),
                None => unserved.push(f),
            }
        }
        let mut pending = vec![false; n];
        for &u in &unserved {
            pending[u] = true;
        }
        for &l in &unserved {
            if !std::mem::replace(&mut pending[l], false) {
                continue;
            }
            s.set(l, l);
            for &m in hoods.of(l) {
                if std::mem::replace(&mut pending[m], false) {
                    s.set(m, l);
                }
            }
        }
    }
    unreachable!("repair loop retires an original owner every round")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;
    use crate::netgraph::{generate, FamilySpec, Graph};

    fn sgg(g: &Graph, k: usize) -> Game<'_> {
        Game::new(g, GameConfig::sgg(k, 2.0, 1.0).unwrap())
    }

    fn sggac(g: &Graph, k: usize, xi: usize) -> Game<'_> {
        Game::new(g, GameConfig::sgg_ac_with_xi(k, 2.0, 1.0, xi).unwrap())
    }

    #[test]
    fn chain_three_orders() {
        let g = generate(&FamilySpec::Chain { n: 3 }).unwrap();
        let game = sgg(&g, 1);
        let mid = best_response_dynamics_ordered(&game, &[1, 0, 2], 0).unwrap();
        assert_eq!(mid.profile.owners().as_slice(), &[1]);
        let ends = best_response_dynamics_ordered(&game, &[0, 1, 2], 0).unwrap();
        assert_eq!(ends.profile.owners().as_slice(), &[0, 2]);
        assert_eq!(ends.passes, 1);
    }

    #[test]
    fn star_center_first_costs_one() {
        let g = generate(&FamilySpec::Star { n: 100 }).unwrap();
        let game = sgg(&g, 1);
        let order: Vec<usize> = (0..100).collect();
        let r = best_response_dynamics_ordered(&game, &order, 1).unwrap();
        assert_eq!(game.social_cost(&r.profile).unwrap(), 1.0);
        let mut leaf_first = order.clone();
        leaf_first.swap(0, 5);
        let r = best_response_dynamics_ordered(&game, &leaf_first, 1).unwrap();
        assert_eq!(game.social_cost(&r.profile).unwrap(), 99.0);
    }

    #[test]
    fn rejects_bad_order() {
        let g = generate(&FamilySpec::Chain { n: 3 }).unwrap();
        let game = sgg(&g, 1);
        assert!(best_response_dynamics_ordered(&game, &[0, 0, 2], 0).is_err());
        assert!(best_response_dynamics_ordered(&game, &[0, 1], 0).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        let g = generate(&FamilySpec::Karate).unwrap();
        let game = sggac(&g, 1, 2);
        let a = best_response_dynamics(&game, 42).unwrap();
        let b = best_response_dynamics(&game, 42).unwrap();
        assert_eq!(a.profile, b.profile);
        assert_eq!(a.passes, b.passes);
        assert_eq!(a.case_counts, b.case_counts);
    }

    #[test]
    fn isolated_nodes_buy_under_access_costs() {
        let g = Graph::from_edges(4, [(0, 1)]).unwrap();
        let game = sggac(&g, 2, 1);
        let r = best_response_dynamics(&game, 3).unwrap();
        assert!(game.is_nash(&r.profile));
        assert!(r.profile.is_owner(2) && r.profile.is_owner(3));
    }

    #[test]
    fn empty_graph_needs_no_pass() {
        let g = Graph::empty(0);
        let r = best_response_dynamics(&sgg(&g, 1), 0).unwrap();
        assert_eq!((r.passes, r.deviations), (0, 0));
    }

    #[test]
    fn seeds_are_spread() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|r| derive_seed(7, r)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
    }

    #[test]
    fn greedy_examples() {
        let chain = generate(&FamilySpec::Chain { n: 5 }).unwrap();
        let s = greedy_ne(&sgg(&chain, 1), PickRule::LowestId);
        assert_eq!(s.owners().as_slice(), &[0, 2, 4]);

        let star = generate(&FamilySpec::Star { n: 100 }).unwrap();
        let s = greedy_ne(&sgg(&star, 1), PickRule::LowestId);
        assert_eq!(s.owners().as_slice(), &[0]);

        let empty = Graph::empty(3);
        let s = greedy_ne(&sggac(&empty, 1, 2), PickRule::LowestId);
        assert_eq!(s.owners().as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn greedy_is_nash_in_both_variants() {
        let g = generate(&FamilySpec::Karate).unwrap();
        for k in 1..=3 {
            for game in [sgg(&g, k), sggac(&g, k, 2), sggac(&g, k, 7)] {
                for rule in [PickRule::LowestId, PickRule::Random(5), PickRule::Random(6)] {
                    let s = greedy_ne(&game, rule);
                    game.check_profile(&s).unwrap();
                    assert!(game.is_nash(&s), "k={k} {rule:?}");
                }
            }
        }
    }

    #[test]
    fn stabilize_star_keeps_center() {
        let g = generate(&FamilySpec::Star { n: 100 }).unwrap();
        let game = sggac(&g, 1, 2);
        let s = stabilize(&game, &OwnerSet::new(vec![0])).unwrap();
        assert!(game.is_nash(&s));
        assert_eq!(s.owners().as_slice(), &[0]);
    }

    #[test]
    fn stabilize_two_center_tree() {
        let g = generate(&FamilySpec::TwoCenterTree {
            arm_len: 1,
            arms: 3,
        })
        .unwrap();
        let centers = OwnerSet::new(vec![0, 1]);

        let game = sggac(&g, 1, 2);
        let s = stabilize(&game, &centers).unwrap();
        assert!(game.is_nash(&s));
        assert_eq!(game.social_cost(&s).unwrap(), 2.0);

        let game = sggac(&g, 1, 5);
        let s = stabilize(&game, &centers).unwrap();
        assert!(game.is_nash(&s));
        assert_eq!(s.choice(0), 1, "first center follows the second");
        assert_eq!(s.owners().as_slice(), &[1, 2, 3, 4]);
        assert_eq!(game.social_cost(&s).unwrap(), 4.0);
        assert!(4 <= stabilize_owner_bound(2, 1, 5));
    }

    #[test]
    fn stabilize_rejects_bad_input() {
        let g = generate(&FamilySpec::Chain { n: 5 }).unwrap();
        let game = sggac(&g, 1, 2);
        assert!(matches!(
            stabilize(&game, &OwnerSet::new(vec![0])),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            stabilize(&sgg(&g, 1), &OwnerSet::new(vec![1, 3])),
            Err(Error::Variant { .. })
        ));
    }
}
