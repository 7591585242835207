//! Identifier-stable undirected multigraph.
//!
//! Vertex and edge identifiers are dense indices that are never reused, so
//! certificates and label genealogies can keep referring to entities that
//! have since been deleted. Incidence lists are unordered; cyclic orders
//! live in [`crate::stgraph`] and [`crate::planarity::Embedding`].

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid vertex reference {0}")]
    InvalidVertex(VertexId),
    #[error("invalid edge reference {0}")]
    InvalidEdge(EdgeId),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = GraphError> = std::result::Result<T, E>;

#[derive(Clone, Debug, Default)]
pub struct Graph {
    alive: Vec<bool>,
    incidence: Vec<Vec<EdgeId>>,
    ends: Vec<Option<(VertexId, VertexId)>>,
    live_vertices: usize,
    live_edges: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph with vertices `0..n` and no edges.
    pub fn with_vertices(n: usize) -> Self {
        Graph {
            alive: vec![true; n],
            incidence: vec![Vec::new(); n],
            ends: Vec::new(),
            live_vertices: n,
            live_edges: 0,
        }
    }

    /// Builds a graph on vertices `0..n` from endpoint pairs.
    ///
    /// Panics if an endpoint is out of range; intended for literals and
    /// generators whose input is known to be well formed.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))
                .expect("edge endpoint out of range");
        }
        g
    }

    /// Graph with the same vertex slots (live and dead) as `self` and no edges.
    pub fn empty_like(&self) -> Self {
        Graph {
            alive: self.alive.clone(),
            incidence: vec![Vec::new(); self.alive.len()],
            ends: Vec::new(),
            live_vertices: self.live_vertices,
            live_edges: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.live_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.live_edges
    }

    /// One past the largest vertex identifier ever allocated.
    pub fn vertex_bound(&self) -> usize {
        self.alive.len()
    }

    /// One past the largest edge identifier ever allocated.
    pub fn edge_bound(&self) -> usize {
        self.ends.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.alive.get(v.0).copied().unwrap_or(false)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        matches!(self.ends.get(e.0), Some(Some(_)))
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex(v))
        }
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        self.ends
            .get(e.0)
            .copied()
            .flatten()
            .ok_or(GraphError::InvalidEdge(e))
    }

    /// The endpoint of `e` that is not `v`.
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> Result<VertexId> {
        let (a, b) = self.endpoints(e)?;
        if a == v {
            Ok(b)
        } else if b == v {
            Ok(a)
        } else {
            Err(GraphError::Precondition(format!("{v} is not an endpoint of {e}")))
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence.get(v.0).map_or(0, Vec::len)
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        self.incidence.get(v.0).map_or(&[], Vec::as_slice)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident(v).iter().map(move |&e| {
            let (a, b) = self.ends[e.0].expect("incidence lists only hold live edges");
            if a == v {
                b
            } else {
                a
            }
        })
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| VertexId(i))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.ends
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|(a, b)| (EdgeId(i), a, b)))
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = VertexId(self.alive.len());
        self.alive.push(true);
        self.incidence.push(Vec::new());
        self.live_vertices += 1;
        v
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let e = EdgeId(self.ends.len());
        self.ends.push(Some((u, v)));
        self.incidence[u.0].push(e);
        self.incidence[v.0].push(e);
        self.live_edges += 1;
        Ok(e)
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        let (u, v) = self.endpoints(e)?;
        self.ends[e.0] = None;
        for w in [u, v] {
            let list = &mut self.incidence[w.0];
            if let Some(pos) = list.iter().position(|&x| x == e) {
                list.swap_remove(pos);
            }
        }
        self.live_edges -= 1;
        Ok((u, v))
    }

    /// Removes `v` together with all incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        self.check_vertex(v)?;
        while let Some(&e) = self.incidence[v.0].last() {
            self.remove_edge(e)?;
        }
        self.alive[v.0] = false;
        self.live_vertices -= 1;
        Ok(())
    }

    /// Replaces `e = ab` by a path `a x b` through a fresh vertex `x`.
    pub fn subdivide(&mut self, e: EdgeId) -> Result<VertexId> {
        let (a, b) = self.remove_edge(e)?;
        let x = self.add_vertex();
        self.add_edge(a, x)?;
        self.add_edge(x, b)?;
        Ok(x)
    }

    /// Removes a degree-2 vertex and joins its two (distinct) neighbors.
    ///
    /// The new edge is added even if it parallels an existing one.
    pub fn suppress(&mut self, v: VertexId) -> Result<EdgeId> {
        self.check_vertex(v)?;
        if self.degree(v) != 2 {
            return Err(GraphError::Precondition(format!(
                "suppress needs degree 2, {v} has degree {}",
                self.degree(v)
            )));
        }
        let nbrs: Vec<VertexId> = self.neighbors(v).collect();
        if nbrs[0] == nbrs[1] {
            return Err(GraphError::Precondition(format!(
                "suppress needs two distinct neighbors at {v}"
            )));
        }
        self.remove_vertex(v)?;
        self.add_edge(nbrs[0], nbrs[1])
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if !self.contains_vertex(u) || !self.contains_vertex(v) {
            return None;
        }
        let (s, o) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.incident(s).iter().copied().find(|&e| {
            let (a, b) = self.ends[e.0].unwrap();
            (a == s && b == o) || (a == o && b == s)
        })
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.find_edge(u, v).is_some()
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges().any(|(_, a, b)| a == b)
    }

    pub fn is_simple(&self) -> bool {
        if self.has_self_loops() {
            return false;
        }
        let pairs = self.edge_pairs();
        pairs.windows(2).all(|w| w[0] != w[1])
    }

    /// Sorted list of normalized `(min, max)` endpoint pairs, with multiplicity.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .edges()
            .map(|(_, a, b)| (a.0.min(b.0), a.0.max(b.0)))
            .collect();
        pairs.sort_unstable();
        pairs
    }

    /// Same live vertex set and same endpoint-pair multiset.
    pub fn same_structure(&self, other: &Graph) -> bool {
        self.vertices().eq(other.vertices()) && self.edge_pairs() == other.edge_pairs()
    }

    /// Simple version of this graph: loops dropped, parallel classes
    /// collapsed, vertex slots unchanged. Runs as two stable bucket passes
    /// over the endpoint keys, so the output edges are in lexicographic order.
    pub fn dedupe_multiedges(&self) -> Graph {
        let keys: Vec<(usize, usize)> = self
            .edges()
            .filter(|(_, a, b)| a != b)
            .map(|(_, a, b)| (a.0.min(b.0), a.0.max(b.0)))
            .collect();
        let bound = self.vertex_bound();
        let by_second = bucket_pass(&keys, bound, |k| k.1);
        let sorted = bucket_pass(&by_second, bound, |k| k.0);
        let mut out = self.empty_like();
        let mut last = None;
        for k in sorted {
            if last != Some(k) {
                out.add_edge(VertexId(k.0), VertexId(k.1))
                    .expect("dedupe keeps vertex slots");
                last = Some(k);
            }
        }
        out
    }

    /// Cross-checks the edge table against the incidence lists.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut seen = vec![0usize; self.ends.len()];
        let mut live_v = 0;
        for (vi, list) in self.incidence.iter().enumerate() {
            if !self.alive[vi] {
                if !list.is_empty() {
                    return Err(format!("dead vertex v{vi} has incident edges"));
                }
                continue;
            }
            live_v += 1;
            for &e in list {
                let Some((a, b)) = self.ends.get(e.0).copied().flatten() else {
                    return Err(format!("v{vi} lists dead edge {e}"));
                };
                if a.0 != vi && b.0 != vi {
                    return Err(format!("v{vi} lists {e} which is not incident"));
                }
                seen[e.0] += 1;
            }
        }
        let mut live_e = 0;
        for (i, ends) in self.ends.iter().enumerate() {
            if let Some((a, b)) = ends {
                live_e += 1;
                if !self.contains_vertex(*a) || !self.contains_vertex(*b) {
                    return Err(format!("e{i} has a dead endpoint"));
                }
                if seen[i] != 2 {
                    return Err(format!("e{i} appears {} times in incidence lists", seen[i]));
                }
            } else if seen[i] != 0 {
                return Err(format!("dead edge e{i} is still listed"));
            }
        }
        if live_v != self.live_vertices || live_e != self.live_edges {
            return Err("live counters disagree with tables".into());
        }
        let degree_sum: usize = self.incidence.iter().map(Vec::len).sum();
        if degree_sum != 2 * live_e {
            return Err("degree sum differs from twice the edge count".into());
        }
        Ok(())
    }

    /// Connected components as sorted vertex lists, ignoring vertices in `removed`.
    pub fn components_without(&self, removed: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut mark = vec![false; self.vertex_bound()];
        for &r in removed {
            if r.0 < mark.len() {
                mark[r.0] = true;
            }
        }
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for s in self.vertices() {
            if mark[s.0] {
                continue;
            }
            mark[s.0] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !mark[w.0] {
                        mark[w.0] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&[]).len() <= 1
    }

    /// Articulation points of the graph with `skip` (if any) deleted.
    pub fn articulation_points_without(&self, skip: Option<VertexId>) -> Vec<VertexId> {
        let nb = self.vertex_bound();
        let mut disc = vec![usize::MAX; nb];
        let mut low = vec![0usize; nb];
        let mut is_cut = vec![false; nb];
        let mut time = 0;
        if let Some(s) = skip {
            if s.0 < nb {
                disc[s.0] = usize::MAX - 1;
            }
        }
        // frame: (vertex, parent edge, next incidence position)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = Vec::new();
        for root in self.vertices() {
            if disc[root.0] != usize::MAX {
                continue;
            }
            disc[root.0] = time;
            low[root.0] = time;
            time += 1;
            let mut root_children = 0;
            stack.push((root, None, 0));
            while let Some(&mut (v, pe, ref mut pos)) = stack.last_mut() {
                let inc = self.incident(v);
                if *pos < inc.len() {
                    let e = inc[*pos];
                    *pos += 1;
                    if Some(e) == pe {
                        continue;
                    }
                    let w = self.opposite(e, v).unwrap();
                    if disc[w.0] == usize::MAX - 1 {
                        continue;
                    }
                    if disc[w.0] == usize::MAX {
                        disc[w.0] = time;
                        low[w.0] = time;
                        time += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, Some(e), 0));
                    } else {
                        low[v.0] = low[v.0].min(disc[w.0]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p.0] = low[p.0].min(low[v.0]);
                        if p != root && low[v.0] >= disc[p.0] {
                            is_cut[p.0] = true;
                        }
                    }
                }
            }
            if root_children >= 2 {
                is_cut[root.0] = true;
            }
        }
        (0..nb).filter(|&i| is_cut[i]).map(VertexId).collect()
    }

    /// Connected, at least two vertices, and no cut vertex.
    pub fn is_biconnected(&self) -> bool {
        self.vertex_count() >= 2
            && self.is_connected()
            && self.articulation_points_without(None).is_empty()
    }
}

pub(crate) fn bucket_pass(
    keys: &[(usize, usize)],
    bound: usize,
    key: impl Fn(&(usize, usize)) -> usize,
) -> Vec<(usize, usize)> {
    let mut start = vec![0usize; bound + 1];
    for k in keys {
        start[key(k) + 1] += 1;
    }
    for i in 0..bound {
        start[i + 1] += start[i];
    }
    let mut out = vec![(0, 0); keys.len()];
    for k in keys {
        let slot = &mut start[key(k)];
        out[*slot] = *k;
        *slot += 1;
    }
    out
}
