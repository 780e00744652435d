//! Generators for the synthetic datasets and the worst-case tree families.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::Graph;
use crate::error::{Error, Result};

/// A named graph family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// Node 0 adjacent to every other node.
    Star {
        n: usize,
    },
    /// Path 0 - 1 - ... - (n-1).
    Chain {
        n: usize,
    },
    /// G(n, p), each pair included independently; deterministic for a seed.
    ErRandom {
        n: usize,
        prob: f64,
        seed: u64,
    },
    /// Two adjacent centers (nodes 0 and 1), each carrying `arms` paths of
    /// `arm_len` nodes attached by one endpoint.
    TwoCenterTree {
        arm_len: usize,
        arms: usize,
    },
    /// One center (node 0) carrying `arms` paths of `arm_len` nodes.
    CenterArmsTree {
        arm_len: usize,
        arms: usize,
    },
    Complete {
        n: usize,
    },
    /// Zachary's karate club (34 nodes, 78 edges).
    Karate,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        match *self {
            FamilySpec::Star { n } | FamilySpec::Chain { n } | FamilySpec::Complete { n } => {
                if n < 1 {
                    return bad(format!("{self}: n must be at least 1"));
                }
            }
            FamilySpec::ErRandom { n, prob, .. } => {
                if n < 1 {
                    return bad(format!("{self}: n must be at least 1"));
                }
                if !(0.0..=1.0).contains(&prob) {
                    return bad(format!("{self}: edge probability must lie in [0, 1]"));
                }
            }
            FamilySpec::TwoCenterTree { arm_len, arms }
            | FamilySpec::CenterArmsTree { arm_len, arms } => {
                if arm_len < 1 || arms < 1 {
                    return bad(format!(
                        "{self}: arm length and arm count must be at least 1"
                    ));
                }
            }
            FamilySpec::Karate => {}
        }
        Ok(())
    }

    /// Short dataset label used in reports.
    pub fn label(&self) -> String {
        match *self {
            FamilySpec::Star { n } => format!("star{n}"),
            FamilySpec::Chain { n } => format!("chain{n}"),
            FamilySpec::ErRandom { n, prob, .. } => format!("random{n}_{prob}"),
            FamilySpec::TwoCenterTree { arm_len, arms } => {
                format!("two_center_tree_k{arm_len}_m{arms}")
            }
            FamilySpec::CenterArmsTree { arm_len, arms } => {
                format!("center_arms_tree_k{arm_len}_m{arms}")
            }
            FamilySpec::Complete { n } => format!("complete{n}"),
            FamilySpec::Karate => "karate".to_string(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Star { n } => write!(f, "star({n})"),
            FamilySpec::Chain { n } => write!(f, "chain({n})"),
            FamilySpec::ErRandom { n, prob, seed } => {
                write!(f, "er_random({n}, {prob}, seed={seed})")
            }
            FamilySpec::TwoCenterTree { arm_len, arms } => {
                write!(f, "two_center_tree(k={arm_len}, m={arms})")
            }
            FamilySpec::CenterArmsTree { arm_len, arms } => {
                write!(f, "center_arms_tree(k={arm_len}, m={arms})")
            }
            FamilySpec::Complete { n } => write!(f, "complete({n})"),
            FamilySpec::Karate => write!(f, "karate"),
        }
    }
}

pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    match *spec {
        FamilySpec::Star { n } => Graph::from_edges(n, (1..n).map(|i| (0, i))),
        FamilySpec::Chain { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        FamilySpec::ErRandom { n, prob, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(prob) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        FamilySpec::TwoCenterTree { arm_len, arms } => {
            let n = 2 + 2 * arms * arm_len;
            let mut edges = vec![(0, 1)];
            for a in 0..2 * arms {
                let center = if a < arms { 0 } else { 1 };
                push_arm(&mut edges, center, 2 + a * arm_len, arm_len);
            }
            Graph::from_edges(n, edges)
        }
        FamilySpec::CenterArmsTree { arm_len, arms } => {
            let n = 1 + arms * arm_len;
            let mut edges = Vec::new();
            for a in 0..arms {
                push_arm(&mut edges, 0, 1 + a * arm_len, arm_len);
            }
            Graph::from_edges(n, edges)
        }
        FamilySpec::Complete { n } => {
            Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        FamilySpec::Karate => karate_club(),
    }
}

/// Path `first, first+1, ..., first+len-1` hung off `center` by `first`.
fn push_arm(edges: &mut Vec<(usize, usize)>, center: usize, first: usize, len: usize) {
    edges.push((center, first));
    for i in 1..len {
        edges.push((first + i - 1, first + i));
    }
}

/// Zachary karate club, members numbered 1..=34.
#[rustfmt::skip]
const KARATE_EDGES: [(usize, usize); 78] = [
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (1, 8), (1, 9), (1, 11), (1, 12),
    (1, 13), (1, 14), (1, 18), (1, 20), (1, 22), (1, 32), (2, 3), (2, 4), (2, 8), (2, 14),
    (2, 18), (2, 20), (2, 22), (2, 31), (3, 4), (3, 8), (3, 9), (3, 10), (3, 14), (3, 28),
    (3, 29), (3, 33), (4, 8), (4, 13), (4, 14), (5, 7), (5, 11), (6, 7), (6, 11), (6, 17),
    (7, 17), (9, 31), (9, 33), (9, 34), (10, 34), (14, 34), (15, 33), (15, 34), (16, 33),
    (16, 34), (19, 33), (19, 34), (20, 34), (21, 33), (21, 34), (23, 33), (23, 34), (24, 26),
    (24, 28), (24, 30), (24, 33), (24, 34), (25, 26), (25, 28), (25, 32), (26, 32), (27, 30),
    (27, 34), (28, 34), (29, 32), (29, 34), (30, 33), (30, 34), (31, 33), (31, 34), (32, 33),
    (32, 34), (33, 34),
];

/// Zachary's karate club with members renumbered to 0..34.
pub fn karate_club() -> Result<Graph> {
    Graph::from_edges(34, KARATE_EDGES.iter().map(|&(u, v)| (u - 1, v - 1)))
}
