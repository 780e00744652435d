//! Game semantics: configurations, strategy profiles, utilities, follower
//! sets and equilibrium predicates for the plain game (SGG) and the game
//! with access costs (SGG-AC).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::netgraph::{Graph, Neighborhoods};

/// Absolute tolerance used for every comparison between money amounts.
pub const MONEY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Free riding within k hops costs nothing.
    Sgg,
    /// Renters pay an access cost `a` to the owner they follow.
    SggAc,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Sgg => "SGG",
            Variant::SggAc => "SGG-AC",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "sgg" => Ok(Variant::Sgg),
            "sgg-ac" | "sggac" => Ok(Variant::SggAc),
            other => Err(Error::Config(format!("unknown game variant {other:?}"))),
        }
    }
}

/// Parameters of one game instance.
///
/// Only the ordering of the three utility tiers matters to equilibria, so
/// `b` never changes costs as long as `b > p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameConfig {
    variant: Variant,
    k: usize,
    b: f64,
    p: f64,
    a: f64,
}

impl GameConfig {
    pub fn sgg(k: usize, b: f64, p: f64) -> Result<Self> {
        Self::check_common(k, b, p)?;
        Ok(Self {
            variant: Variant::Sgg,
            k,
            b,
            p,
            a: 0.0,
        })
    }

    /// Game with access cost `a`; requires `0 < a < p` and `p / a` not an integer.
    pub fn sgg_ac(k: usize, b: f64, p: f64, a: f64) -> Result<Self> {
        Self::check_common(k, b, p)?;
        if !(a > 0.0 && a < p) {
            return Err(Error::Config(format!(
                "access cost must satisfy 0 < a < p (a={a}, p={p})"
            )));
        }
        let ratio = p / a;
        if (ratio - ratio.round()).abs() < MONEY_TOL {
            return Err(Error::Config(format!(
                "p/a must not be an integer (p={p}, a={a})"
            )));
        }
        Ok(Self {
            variant: Variant::SggAc,
            k,
            b,
            p,
            a,
        })
    }

    /// Game with follower threshold `xi`, using `a = p / (xi + 0.5)` so
    /// that `ceil(p/a) - 1 = xi` and `p/a` is never an integer.
    pub fn sgg_ac_with_xi(k: usize, b: f64, p: f64, xi: usize) -> Result<Self> {
        if xi == 0 {
            return Err(Error::Config(
                "follower threshold must be at least 1".into(),
            ));
        }
        Self::sgg_ac(k, b, p, p / (xi as f64 + 0.5))
    }

    fn check_common(k: usize, b: f64, p: f64) -> Result<()> {
        if k == 0 {
            return Err(Error::Config("hop radius k must be at least 1".into()));
        }
        if !(p > 0.0 && b > p && b.is_finite()) {
            return Err(Error::Config(format!(
                "benefit and price must satisfy b > p > 0 (b={b}, p={p})"
            )));
        }
        Ok(())
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn benefit(&self) -> f64 {
        self.b
    }

    pub fn price(&self) -> f64 {
        self.p
    }

    /// Access cost, `None` for SGG.
    pub fn access_cost(&self) -> Option<f64> {
        (self.variant == Variant::SggAc).then_some(self.a)
    }

    /// Follower threshold `ceil(p/a) - 1`, `None` for SGG.
    pub fn xi(&self) -> Option<usize> {
        self.access_cost()
            .map(|a| ((self.p / a).ceil() as usize).saturating_sub(1))
    }
}

/// A pure strategy profile stored as one value per node.
///
/// SGG: `1` buys, `0` does not. SGG-AC: the id of the node whose good is
/// accessed, with `s_i = i` meaning `i` buys.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    variant: Variant,
    choices: Vec<usize>,
}

impl Profile {
    pub fn sgg_from_owners(n: usize, owners: &OwnerSet) -> Self {
        let mut choices = vec![0; n];
        for i in owners.iter() {
            choices[i] = 1;
        }
        Self {
            variant: Variant::Sgg,
            choices,
        }
    }

    pub fn sgg(buys: &[bool]) -> Self {
        Self {
            variant: Variant::Sgg,
            choices: buys.iter().map(|&b| b as usize).collect(),
        }
    }

    pub fn sgg_ac(targets: Vec<usize>) -> Self {
        Self {
            variant: Variant::SggAc,
            choices: targets,
        }
    }

    pub fn from_choices(variant: Variant, choices: Vec<usize>) -> Self {
        Self { variant, choices }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn choice(&self, i: usize) -> usize {
        self.choices[i]
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub(crate) fn set(&mut self, i: usize, value: usize) {
        self.choices[i] = value;
    }

    pub fn is_owner(&self, i: usize) -> bool {
        match self.variant {
            Variant::Sgg => self.choices[i] == 1,
            Variant::SggAc => self.choices[i] == i,
        }
    }

    pub fn owners(&self) -> OwnerSet {
        OwnerSet::from_sorted_unchecked((0..self.len()).filter(|&i| self.is_owner(i)).collect())
    }

    pub fn owner_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_owner(i)).count()
    }

    /// One `node strategy` line per node.
    pub fn to_text(&self) -> String {
        self.choices
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{i} {s}\n"))
            .collect()
    }

    /// Parses the `node strategy` line format. Every node `0..n` must
    /// appear exactly once; `#` comment lines are skipped.
    pub fn parse(text: &str, variant: Variant) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let nums: Vec<usize> = trimmed
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("invalid profile line {trimmed:?}"),
                })?;
            if nums.len() != 2 {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "expected `node strategy`".into(),
                });
            }
            entries.push((nums[0], nums[1], idx + 1));
        }
        let n = entries.len();
        let mut choices = vec![None; n];
        for (node, strategy, line) in entries {
            if node >= n || choices[node].is_some() {
                return Err(Error::Parse {
                    line,
                    msg: format!("node {node} missing from or repeated in 0..{n}"),
                });
            }
            choices[node] = Some(strategy);
        }
        Ok(Self {
            variant,
            choices: choices.into_iter().map(Option::unwrap).collect(),
        })
    }
}

/// A set of buying nodes, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OwnerSet(Vec<usize>);

impl OwnerSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self(members)
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for i in self.iter() {
            mask[i] = true;
        }
        mask
    }
}

impl FromIterator<usize> for OwnerSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Every node lies within `k` hops of some member of `owners`.
pub fn is_dominating(hoods: &Neighborhoods, owners: &OwnerSet) -> bool {
    (0..hoods.node_count()).all(|i| hoods.of(i).iter().any(|&j| owners.contains(j)))
}

/// Owners pairwise at distance at least `k + 1`.
pub fn is_k_independent(hoods: &Neighborhoods, owners: &OwnerSet) -> bool {
    owners
        .iter()
        .all(|i| hoods.of(i).iter().all(|&j| j == i || !owners.contains(j)))
}

/// Exactly the owner sets of SGG equilibria.
pub fn is_k_independent_dominating(hoods: &Neighborhoods, owners: &OwnerSet) -> bool {
    owners.iter().all(|i| i < hoods.node_count())
        && is_k_independent(hoods, owners)
        && is_dominating(hoods, owners)
}

/// A game instance: a graph, a configuration, and the cached closed
/// k-hop neighborhoods all queries run against.
#[derive(Debug, Clone)]
pub struct Game<'g> {
    graph: &'g Graph,
    cfg: GameConfig,
    hoods: Neighborhoods,
}

impl<'g> Game<'g> {
    pub fn new(graph: &'g Graph, cfg: GameConfig) -> Self {
        let hoods = Neighborhoods::new(graph, cfg.k()).expect("GameConfig guarantees k >= 1");
        Self { graph, cfg, hoods }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn config(&self) -> &GameConfig {
        &self.cfg
    }

    pub fn neighborhoods(&self) -> &Neighborhoods {
        &self.hoods
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Checks that `s` matches this game's variant, node count and, for
    /// SGG-AC, that each `s_i` lies in N_i(k).
    pub fn check_profile(&self, s: &Profile) -> Result<()> {
        if s.variant() != self.cfg.variant() {
            return Err(Error::Argument(format!(
                "profile is for {}, game is {}",
                s.variant(),
                self.cfg.variant()
            )));
        }
        if s.len() != self.node_count() {
            return Err(Error::Argument(format!(
                "profile has {} entries, graph has {} nodes",
                s.len(),
                self.node_count()
            )));
        }
        for (i, &c) in s.choices().iter().enumerate() {
            let ok = match s.variant() {
                Variant::Sgg => c <= 1,
                Variant::SggAc => self.hoods.contains(i, c),
            };
            if !ok {
                return Err(Error::Argument(format!(
                    "strategy {c} of node {i} is outside its strategy set"
                )));
            }
        }
        Ok(())
    }

    /// Strategy set S_i in ascending order.
    pub fn strategy_set(&self, i: usize) -> Vec<usize> {
        match self.cfg.variant() {
            Variant::Sgg => vec![0, 1],
            Variant::SggAc => self.hoods.of(i).to_vec(),
        }
    }

    /// F_i: the nodes within k hops whose strategy points at `i`.
    pub fn followers(&self, s: &Profile, i: usize) -> Result<Vec<usize>> {
        if self.cfg.variant() != Variant::SggAc {
            return Err(Error::Variant { expected: "SGG-AC" });
        }
        Ok(self
            .hoods
            .of(i)
            .iter()
            .copied()
            .filter(|&j| j != i && s.choice(j) == i)
            .collect())
    }

    pub(crate) fn follower_count(&self, s: &Profile, i: usize) -> usize {
        self.hoods
            .of(i)
            .iter()
            .filter(|&&j| j != i && s.choice(j) == i)
            .count()
    }

    /// Whether some node other than `i` within k hops currently buys.
    pub(crate) fn other_owner_in_range(&self, s: &Profile, i: usize) -> bool {
        self.hoods.of(i).iter().any(|&j| j != i && s.is_owner(j))
    }

    /// Utility of `i` if it played `x` while everyone else keeps `s`.
    pub fn deviation_utility(&self, s: &Profile, i: usize, x: usize) -> f64 {
        let (b, p) = (self.cfg.b, self.cfg.p);
        match self.cfg.variant() {
            Variant::Sgg => {
                if x == 1 {
                    b - p
                } else if self.other_owner_in_range(s, i) {
                    b
                } else {
                    0.0
                }
            }
            Variant::SggAc => {
                if x == i {
                    b - p + self.cfg.a * self.follower_count(s, i) as f64
                } else if s.is_owner(x) {
                    b - self.cfg.a
                } else {
                    0.0
                }
            }
        }
    }

    pub fn utility(&self, s: &Profile, i: usize) -> f64 {
        self.deviation_utility(s, i, s.choice(i))
    }

    /// Whether every node accesses some good.
    pub fn is_in_t(&self, s: &Profile) -> bool {
        (0..s.len()).all(|i| match s.variant() {
            Variant::Sgg => self.hoods.of(i).iter().any(|&j| s.is_owner(j)),
            Variant::SggAc => s.is_owner(s.choice(i)),
        })
    }

    /// `p` times the number of owners; defined only on the all-served set.
    pub fn social_cost(&self, s: &Profile) -> Result<f64> {
        if !self.is_in_t(s) {
            return Err(Error::Domain(
                "some node accesses no good; social cost is undefined".into(),
            ));
        }
        Ok(self.cfg.p * s.owner_count() as f64)
    }

    /// Largest utility `i` can reach against `s_{-i}`.
    pub fn best_utility(&self, s: &Profile, i: usize) -> f64 {
        self.strategy_set(i)
            .into_iter()
            .map(|x| self.deviation_utility(s, i, x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// All strategies of `i` attaining the best utility against `s_{-i}`.
    pub fn best_response_set(&self, s: &Profile, i: usize) -> Vec<usize> {
        let options: Vec<(usize, f64)> = self
            .strategy_set(i)
            .into_iter()
            .map(|x| (x, self.deviation_utility(s, i, x)))
            .collect();
        let best = options
            .iter()
            .map(|&(_, u)| u)
            .fold(f64::NEG_INFINITY, f64::max);
        options
            .into_iter()
            .filter(|&(_, u)| u >= best - MONEY_TOL)
            .map(|(x, _)| x)
            .collect()
    }

    /// Whether `i` can strictly improve by deviating.
    pub fn can_improve(&self, s: &Profile, i: usize) -> bool {
        self.utility(s, i) < self.best_utility(s, i) - MONEY_TOL
    }

    /// No node can strictly improve its utility by deviating unilaterally.
    pub fn is_nash(&self, s: &Profile) -> bool {
        (0..s.len()).all(|i| !self.can_improve(s, i))
    }

    pub fn is_k_independent_dominating(&self, owners: &OwnerSet) -> bool {
        is_k_independent_dominating(&self.hoods, owners)
    }
}
