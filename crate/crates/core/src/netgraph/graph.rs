use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Undirected simple graph on the dense node ids `0..n`.
///
/// Immutable once built; adjacency lists are sorted and symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are collapsed; self-loops and out-of-range ids are errors.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Argument(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::Argument(format!("self-loop on node {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self {
            adj,
            edges: set.into_iter().collect(),
        })
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.adj[u].binary_search(&v).is_ok()
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.node_count() {
            return Err(Error::Argument(format!(
                "node {i} out of range (graph has {} nodes)",
                self.node_count()
            )));
        }
        Ok(())
    }

    /// BFS distances from `source`, truncated at `limit` hops. Nodes farther
    /// than `limit` (or unreachable) are `None`.
    pub fn distances_within(&self, source: usize, limit: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if du == limit {
                continue;
            }
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest-path distance, or `None` when disconnected.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_node(u)?;
        self.check_node(v)?;
        Ok(self.distances_within(u, usize::MAX)[v])
    }

    /// Closed k-hop neighborhood of `i`: every node within distance `k`,
    /// including `i`, sorted ascending.
    pub fn k_hop_neighborhood(&self, i: usize, k: usize) -> Result<Vec<usize>> {
        self.check_node(i)?;
        if k == 0 {
            return Err(Error::Argument("hop radius k must be at least 1".into()));
        }
        Ok(self.ball(i, k))
    }

    fn ball(&self, i: usize, radius: usize) -> Vec<usize> {
        self.distances_within(i, radius)
            .iter()
            .enumerate()
            .filter_map(|(j, d)| d.map(|_| j))
            .collect()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Closed k-hop neighborhoods of every node, computed once per `(graph, k)`.
#[derive(Debug, Clone)]
pub struct Neighborhoods {
    k: usize,
    balls: Vec<Vec<usize>>,
}

impl Neighborhoods {
    pub fn new(graph: &Graph, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Argument("hop radius k must be at least 1".into()));
        }
        Ok(Self::with_radius(graph, k))
    }

    /// Like [`Neighborhoods::new`] but also allows radius 0 (singleton balls).
    pub(crate) fn with_radius(graph: &Graph, radius: usize) -> Self {
        let balls = (0..graph.node_count())
            .map(|i| graph.ball(i, radius))
            .collect();
        Self { k: radius, balls }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.balls.len()
    }

    /// Sorted closed neighborhood N_i(k).
    pub fn of(&self, i: usize) -> &[usize] {
        &self.balls[i]
    }

    /// Whether `j` lies within `k` hops of `i`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.balls[i].binary_search(&j).is_ok()
    }
}

/// Graph read from an edge-list file plus the original id of each dense node.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub original_ids: Vec<u64>,
}

/// Parses an edge list: one `u v` pair per line (spaces or tabs), `#`
/// comment lines and blank lines skipped. Ids are remapped to `0..n` in
/// ascending order of the original ids.
pub fn load_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two node ids, got {trimmed:?}"),
            });
        };
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid node id {tok:?}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            return Err(Error::SelfLoop { line: line_no });
        }
        raw.push((u, v));
    }

    let ids: BTreeMap<u64, usize> = raw
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(dense, orig)| (orig, dense))
        .collect();
    let original_ids: Vec<u64> = ids.keys().copied().collect();
    let graph = Graph::from_edges(
        original_ids.len(),
        raw.iter().map(|(u, v)| (ids[u], ids[v])),
    )?;
    Ok(LoadedGraph {
        graph,
        original_ids,
    })
}

/// Reads and parses an edge-list file.
pub fn read_edge_list(path: &std::path::Path) -> Result<LoadedGraph> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_edge_list(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn parses_simple_edge_list() {
        let g = load_edge_list("0 1\n1 2").unwrap().graph;
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn dedupes_and_remaps() {
        let loaded = load_edge_list("5 7\n7 5\n# c").unwrap();
        assert_eq!(loaded.graph.node_count(), 2);
        assert_eq!(loaded.graph.edges(), &[(0, 1)]);
        assert_eq!(loaded.original_ids, vec![5, 7]);
    }

    #[test]
    fn accepts_tabs_and_preserves_sorted_id_order() {
        let loaded = load_edge_list("10\t3\n\n3 200\n").unwrap();
        assert_eq!(loaded.original_ids, vec![3, 10, 200]);
        assert_eq!(loaded.graph.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn rejects_self_loop_with_line_number() {
        let err = load_edge_list("3 3").unwrap_err();
        assert!(matches!(err, Error::SelfLoop { line: 1 }), "{err}");
        let err = load_edge_list("# x\n0 1\n4 4\n").unwrap_err();
        assert!(matches!(err, Error::SelfLoop { line: 3 }));
    }

    #[test]
    fn rejects_malformed_lines() {
        for (text, line) in [("0 1\n2\n", 2), ("a b", 1), ("0 1 2", 1), ("0 -1", 1)] {
            match load_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn k_hop_on_chain() {
        let g = chain(5);
        assert_eq!(g.k_hop_neighborhood(2, 2).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(g.k_hop_neighborhood(0, 1).unwrap(), vec![0, 1]);
        assert!(g.k_hop_neighborhood(5, 1).is_err());
        assert!(g.k_hop_neighborhood(0, 0).is_err());
    }

    #[test]
    fn isolated_node_neighborhood_is_itself() {
        let g = Graph::empty(3);
        for k in 1..4 {
            assert_eq!(g.k_hop_neighborhood(1, k).unwrap(), vec![1]);
        }
    }

    #[test]
    fn components() {
        assert_eq!(chain(4).connected_components(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(
            Graph::empty(3).connected_components(),
            vec![vec![0], vec![1], vec![2]]
        );
        let triangles =
            Graph::from_edges(6, [(0, 2), (2, 4), (4, 0), (1, 3), (3, 5), (5, 1)]).unwrap();
        assert_eq!(
            triangles.connected_components(),
            vec![vec![0, 2, 4], vec![1, 3, 5]]
        );
    }

    #[test]
    fn from_edges_validates() {
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
        assert!(Graph::from_edges(2, [(1, 1)]).is_err());
        let g = Graph::from_edges(3, [(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(g.has_edge(1, 0) && !g.has_edge(0, 2));
    }

    #[test]
    fn distances() {
        let g = chain(5);
        assert_eq!(g.distance(0, 4).unwrap(), Some(4));
        assert_eq!(Graph::empty(2).distance(0, 1).unwrap(), None);
    }
}
