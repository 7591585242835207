//! Internally vertex-disjoint paths by unit-capacity augmentation on the
//! vertex-split network.

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Reusable flow network. Node `2v` is the in-copy of vertex `v`, `2v+1`
/// the out-copy, and `2n` the super sink.
#[derive(Default)]
pub(crate) struct VertexFlow {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i32>,
    parent_arc: Vec<usize>,
    queue: VecDeque<usize>,
}

pub(crate) enum Role {
    /// May appear as an interior vertex of at most one path.
    Free,
    /// Never used.
    Blocked,
    /// Path endpoint, absorbing up to the given number of paths.
    Target(i32),
}

impl VertexFlow {
    fn reset(&mut self, nodes: usize) {
        self.head.clear();
        self.head.resize(nodes, NONE);
        self.next.clear();
        self.to.clear();
        self.cap.clear();
    }

    fn arc(&mut self, from: usize, to: usize, cap: i32) {
        for (a, b, c) in [(from, to, cap), (to, from, 0)] {
            self.to.push(b);
            self.cap.push(c);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    /// Up to `want` internally disjoint paths from `source` to vertices with
    /// role [`Role::Target`]. Each path is returned as a vertex sequence
    /// starting at `source`.
    pub(crate) fn paths<N, I>(
        &mut self,
        n: usize,
        neighbors: N,
        role: impl Fn(usize) -> Role,
        source: usize,
        want: usize,
    ) -> Vec<Vec<usize>>
    where
        N: Fn(usize) -> I,
        I: IntoIterator<Item = usize>,
    {
        let sink = 2 * n;
        self.reset(2 * n + 1);
        for v in 0..n {
            if v == source {
                continue;
            }
            match role(v) {
                Role::Free => self.arc(2 * v, 2 * v + 1, 1),
                Role::Blocked => {}
                Role::Target(c) => self.arc(2 * v, sink, c),
            }
        }
        for u in 0..n {
            let from_ok = u == source || matches!(role(u), Role::Free);
            if !from_ok {
                continue;
            }
            for w in neighbors(u) {
                if w != source && !matches!(role(w), Role::Blocked) {
                    self.arc(2 * u + 1, 2 * w, 1);
                }
            }
        }

        let start = 2 * source + 1;
        let mut found = 0;
        while found < want && self.augment(start, sink) {
            found += 1;
        }

        // Walk the saturated forward arcs from the source.
        let mut out = Vec::with_capacity(found);
        let mut a = self.head[start];
        while a != NONE {
            if a % 2 == 0 && self.cap[a ^ 1] > 0 {
                let mut path = vec![source];
                let mut node = self.to[a];
                loop {
                    if node == sink {
                        break;
                    }
                    let v = node / 2;
                    if node % 2 == 0 {
                        if *path.last().unwrap() != v {
                            path.push(v);
                        }
                    }
                    // follow a saturated forward arc out of this node
                    let mut b = self.head[node];
                    let mut moved = false;
                    while b != NONE {
                        if b % 2 == 0 && self.cap[b ^ 1] > 0 {
                            node = self.to[b];
                            moved = true;
                            break;
                        }
                        b = self.next[b];
                    }
                    debug_assert!(moved, "flow decomposition broke off");
                    if !moved {
                        break;
                    }
                }
                out.push(path);
            }
            a = self.next[a];
        }
        out
    }

    fn augment(&mut self, start: usize, sink: usize) -> bool {
        self.parent_arc.clear();
        self.parent_arc.resize(self.head.len(), NONE);
        self.queue.clear();
        self.queue.push_back(start);
        let mut seen = vec![false; self.head.len()];
        seen[start] = true;
        while let Some(x) = self.queue.pop_front() {
            let mut a = self.head[x];
            while a != NONE {
                let y = self.to[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    self.parent_arc[y] = a;
                    if y == sink {
                        let mut node = sink;
                        while node != start {
                            let pa = self.parent_arc[node];
                            self.cap[pa] -= 1;
                            self.cap[pa ^ 1] += 1;
                            node = self.to[pa ^ 1];
                        }
                        return true;
                    }
                    self.queue.push_back(y);
                }
                a = self.next[a];
            }
        }
        false
    }
}

/// Local vertex connectivity between non-adjacent `s` and `t`, capped at `limit`.
pub(crate) fn local_connectivity<N, I>(
    flow: &mut VertexFlow,
    n: usize,
    neighbors: N,
    alive: impl Fn(usize) -> bool,
    s: usize,
    t: usize,
    limit: usize,
) -> usize
where
    N: Fn(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    flow.paths(
        n,
        neighbors,
        |v| {
            if v == t {
                Role::Target(limit as i32)
            } else if alive(v) {
                Role::Free
            } else {
                Role::Blocked
            }
        },
        s,
        limit,
    )
    .len()
}
