//! Edmonds-Karp maximum flow on a small integer-capacity network.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: usize,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    /// Adds `from -> to` with capacity `cap` and returns the arc id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: usize) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.out[from].push(id);
        self.out[to].push(id + 1);
        id
    }

    /// Flow currently on arc `id` (its reverse residual capacity).
    pub fn flow(&self, id: usize) -> usize {
        self.arcs[id ^ 1].cap
    }

    /// Pushes flow along shortest augmenting paths until none remain.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let mut total = 0;
        let mut via = vec![usize::MAX; self.out.len()];
        loop {
            via.fill(usize::MAX);
            let mut queue = VecDeque::from([source]);
            let mut reached = false;
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    reached = true;
                    break;
                }
                for &id in &self.out[u] {
                    let Arc { to, cap } = self.arcs[id];
                    if cap > 0 && to != source && via[to] == usize::MAX {
                        via[to] = id;
                        queue.push_back(to);
                    }
                }
            }
            if !reached || source == sink {
                return total;
            }
            let mut push = usize::MAX;
            let mut v = sink;
            while v != source {
                let id = via[v];
                push = push.min(self.arcs[id].cap);
                v = self.arcs[id ^ 1].to;
            }
            let mut v = sink;
            while v != source {
                let id = via[v];
                self.arcs[id].cap -= push;
                self.arcs[id ^ 1].cap += push;
                v = self.arcs[id ^ 1].to;
            }
            total += push;
        }
    }
}
