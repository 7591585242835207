//! Construction sequences of simple triconnected graphs from K4.
//!
//! Four operations build every simple triconnected graph from K4:
//!
//! * `a`: add an edge `xy` between two non-adjacent vertices;
//! * `b`: subdivide an edge `ab` by a new vertex `x` and add `xy`, `y ∉ {a, b}`;
//! * `c`: subdivide two non-parallel edges by new vertices `x`, `y` and add `xy`;
//! * `d`: add a new vertex joined to three distinct old vertices.
//!
//! Vertices and edges are referred to by labels. Vertex labels are handed
//! out in creation order (`0..4` for K4). Edge labels too, with K4's edges
//! `0:01 1:02 2:03 3:12 4:13 5:23`. When an edge is subdivided, the half at
//! the endpoint with the smaller label keeps the label and the other half
//! gets a fresh one; every such event is recorded in the genealogy.
//!
//! New labels per operation, in order: `a` the edge; `b` the fresh half,
//! then `xy`; `c` the fresh half of `e`, of `f`, then `xy` (with `x` on
//! `e` labelled first); `d` the edges from the new vertex to `min(a, b)`,
//! `max(a, b)` and `c`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::decomposition::is_triconnected;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::menger::{local_connectivity, VertexFlow};

pub const K4_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionOp {
    /// Add the edge `xy`.
    AddEdge { x: usize, y: usize },
    /// Subdivide edge `edge` by a new vertex and join it to `y`.
    SubdivideConnect { edge: usize, y: usize },
    /// Subdivide `e` and `f` by new vertices and join them.
    DoubleSubdivide { e: usize, f: usize },
    /// New vertex joined to `a`, `b`, `c`.
    AddClaw { a: usize, b: usize, c: usize },
}

impl ConstructionOp {
    pub fn kind(&self) -> char {
        match self {
            ConstructionOp::AddEdge { .. } => 'a',
            ConstructionOp::SubdivideConnect { .. } => 'b',
            ConstructionOp::DoubleSubdivide { .. } => 'c',
            ConstructionOp::AddClaw { .. } => 'd',
        }
    }

    /// `(new vertices, new edge labels)` created by this operation.
    pub fn deltas(&self) -> (usize, usize) {
        match self {
            ConstructionOp::AddEdge { .. } => (0, 1),
            ConstructionOp::SubdivideConnect { .. } => (1, 2),
            ConstructionOp::DoubleSubdivide { .. } => (2, 3),
            ConstructionOp::AddClaw { .. } => (1, 3),
        }
    }
}

/// Edge `parent` was subdivided by `vertex` during operation `op` (1-based).
/// The half at the smaller-labelled endpoint kept `parent`, the other half
/// is `fresh`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubdivisionEvent {
    pub op: usize,
    pub parent: usize,
    pub vertex: usize,
    pub fresh: usize,
}

impl SubdivisionEvent {
    pub fn retained(&self) -> usize {
        self.parent
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConstructionSequence {
    pub ops: Vec<ConstructionOp>,
    pub genealogy: Vec<SubdivisionEvent>,
    /// Vertex label -> vertex of the graph the sequence was computed for.
    /// Empty means the identity.
    pub vertex_map: Vec<VertexId>,
    /// All `a` operations come after every other operation.
    pub canonical: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CseqError {
    #[error("operation {index}: {reason}")]
    Replay { index: usize, reason: String },
    #[error("label {label} is not alive after {t} operations")]
    NotAlive { label: usize, t: usize },
    #[error("input is not simple and triconnected: {0}")]
    NotTriconnected(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Labels created by one operation, in creation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Created {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Incremental replay state. Graph vertex ids equal vertex labels.
#[derive(Clone, Debug)]
pub struct Replay {
    graph: Graph,
    edge_of: Vec<EdgeId>,
    label_of: Vec<usize>,
    applied: usize,
    genealogy: Vec<SubdivisionEvent>,
}

impl Default for Replay {
    fn default() -> Self {
        Self::new()
    }
}

impl Replay {
    /// The base K4.
    pub fn new() -> Self {
        let mut r = Replay {
            graph: Graph::with_vertices(4),
            edge_of: Vec::new(),
            label_of: Vec::new(),
            applied: 0,
            genealogy: Vec::new(),
        };
        for (a, b) in K4_EDGES {
            r.push_edge(a, b);
        }
        r
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    /// Number of operations applied so far.
    pub fn applied(&self) -> usize {
        self.applied
    }

    pub fn edge_label_count(&self) -> usize {
        self.edge_of.len()
    }

    pub fn genealogy(&self) -> &[SubdivisionEvent] {
        &self.genealogy
    }

    pub fn edge(&self, label: usize) -> Option<EdgeId> {
        self.edge_of.get(label).copied()
    }

    pub fn label_of_edge(&self, e: EdgeId) -> usize {
        self.label_of[e.0]
    }

    pub fn edge_ends(&self, label: usize) -> Option<(usize, usize)> {
        let e = self.edge(label)?;
        let (a, b) = self.graph.endpoints(e).ok()?;
        Some((a.0, b.0))
    }

    pub fn has_vertex(&self, label: usize) -> bool {
        label < self.graph.vertex_bound()
    }

    fn push_edge(&mut self, a: usize, b: usize) -> usize {
        let e = self.graph.add_edge(VertexId(a), VertexId(b)).unwrap();
        let label = self.edge_of.len();
        self.edge_of.push(e);
        if self.label_of.len() <= e.0 {
            self.label_of.resize(e.0 + 1, usize::MAX);
        }
        self.label_of[e.0] = label;
        label
    }

    fn subdivide(&mut self, label: usize, op: usize) -> (usize, usize) {
        let e = self.edge_of[label];
        let (a, b) = self.graph.remove_edge(e).unwrap();
        let (lo, hi) = (a.0.min(b.0), a.0.max(b.0));
        let x = self.graph.add_vertex().0;
        let kept = self.graph.add_edge(VertexId(lo), VertexId(x)).unwrap();
        if self.label_of.len() <= kept.0 {
            self.label_of.resize(kept.0 + 1, usize::MAX);
        }
        self.label_of[kept.0] = label;
        self.edge_of[label] = kept;
        let fresh = self.push_edge(x, hi);
        self.genealogy.push(SubdivisionEvent { op, parent: label, vertex: x, fresh });
        (x, fresh)
    }

    fn check_edge(&self, label: usize) -> Result<(), String> {
        if label < self.edge_of.len() {
            Ok(())
        } else {
            Err(format!("edge label {label} does not exist"))
        }
    }

    fn check_vertex(&self, label: usize) -> Result<(), String> {
        if self.has_vertex(label) {
            Ok(())
        } else {
            Err(format!("vertex label {label} does not exist"))
        }
    }

    /// Checks the operation's preconditions against the current state.
    pub fn check(&self, op: &ConstructionOp) -> Result<(), String> {
        match *op {
            ConstructionOp::AddEdge { x, y } => {
                self.check_vertex(x)?;
                self.check_vertex(y)?;
                if x == y {
                    return Err(format!("edge {x} {y} would be a loop"));
                }
                if self.graph.has_edge(VertexId(x), VertexId(y)) {
                    return Err(format!("vertices {x} and {y} are already adjacent"));
                }
            }
            ConstructionOp::SubdivideConnect { edge, y } => {
                self.check_edge(edge)?;
                self.check_vertex(y)?;
                let (a, b) = self.edge_ends(edge).unwrap();
                if y == a || y == b {
                    return Err(format!("vertex {y} is an endpoint of edge {edge}"));
                }
            }
            ConstructionOp::DoubleSubdivide { e, f } => {
                self.check_edge(e)?;
                self.check_edge(f)?;
                if e == f {
                    return Err(format!("edge {e} given twice"));
                }
                let (a, b) = self.edge_ends(e).unwrap();
                let (c, d) = self.edge_ends(f).unwrap();
                if (a.min(b), a.max(b)) == (c.min(d), c.max(d)) {
                    return Err(format!("edges {e} and {f} are parallel"));
                }
            }
            ConstructionOp::AddClaw { a, b, c } => {
                for v in [a, b, c] {
                    self.check_vertex(v)?;
                }
                if a == b || b == c || a == c {
                    return Err(format!("claw attachments {a} {b} {c} are not distinct"));
                }
            }
        }
        Ok(())
    }

    /// Applies one operation, returning the labels it created.
    pub fn apply(&mut self, op: &ConstructionOp) -> Result<Created, CseqError> {
        let index = self.applied + 1;
        self.check(op).map_err(|reason| CseqError::Replay { index, reason })?;
        let mut created = Created::default();
        match *op {
            ConstructionOp::AddEdge { x, y } => {
                created.edges.push(self.push_edge(x, y));
            }
            ConstructionOp::SubdivideConnect { edge, y } => {
                let (x, fresh) = self.subdivide(edge, index);
                created.vertices.push(x);
                created.edges.push(fresh);
                created.edges.push(self.push_edge(x, y));
            }
            ConstructionOp::DoubleSubdivide { e, f } => {
                let (x, fe) = self.subdivide(e, index);
                let (y, ff) = self.subdivide(f, index);
                created.vertices.extend([x, y]);
                created.edges.extend([fe, ff]);
                created.edges.push(self.push_edge(x, y));
            }
            ConstructionOp::AddClaw { a, b, c } => {
                let x = self.graph.add_vertex().0;
                created.vertices.push(x);
                for v in [a.min(b), a.max(b), c] {
                    created.edges.push(self.push_edge(x, v));
                }
            }
        }
        self.applied = index;
        Ok(created)
    }
}

impl ConstructionSequence {
    /// Input vertex of a vertex label.
    pub fn input_vertex(&self, label: usize) -> VertexId {
        if self.vertex_map.is_empty() {
            VertexId(label)
        } else {
            self.vertex_map[label]
        }
    }

    /// Whether every `a` operation comes after every other operation.
    pub fn is_canonical_order(&self) -> bool {
        let first_a = self.ops.iter().position(|o| o.kind() == 'a');
        match first_a {
            None => true,
            Some(i) => self.ops[i..].iter().all(|o| o.kind() == 'a'),
        }
    }

    /// Index of the first operation of the trailing block of `a` operations.
    pub fn trailing_add_edge_start(&self) -> usize {
        let mut i = self.ops.len();
        while i > 0 && self.ops[i - 1].kind() == 'a' {
            i -= 1;
        }
        i
    }

    /// The replay state after the first `t` operations.
    pub fn replay_prefix(&self, t: usize) -> Result<Replay, CseqError> {
        let mut r = Replay::new();
        for op in &self.ops[..t.min(self.ops.len())] {
            r.apply(op)?;
        }
        Ok(r)
    }

    /// The final graph, on vertex labels.
    pub fn replay(&self) -> Result<Graph, CseqError> {
        Ok(self.replay_prefix(self.ops.len())?.into_graph())
    }

    /// Like [`replay`](Self::replay), additionally checking that every
    /// prefix state is simple and triconnected.
    pub fn replay_validating(&self) -> Result<Graph, CseqError> {
        let mut r = Replay::new();
        for (i, op) in self.ops.iter().enumerate() {
            r.apply(op)?;
            if !is_triconnected(r.graph()) {
                return Err(CseqError::Replay {
                    index: i + 1,
                    reason: "result is not simple and triconnected".into(),
                });
            }
        }
        Ok(r.into_graph())
    }

    /// The final graph mapped to input vertex ids, on `bound` vertex slots.
    pub fn replay_on_input(&self, bound: usize) -> Result<Graph, CseqError> {
        let g = self.replay()?;
        let mut out = Graph::with_vertices(bound);
        for (_, a, b) in g.edges() {
            let (ia, ib) = (self.input_vertex(a.0), self.input_vertex(b.0));
            if ia.0 >= bound || ib.0 >= bound {
                return Err(CseqError::NotTriconnected(
                    "vertex map points outside the graph".into(),
                ));
            }
            out.add_edge(ia, ib).unwrap();
        }
        Ok(out)
    }

    /// Endpoints (vertex labels) of edge `label` after `t` operations.
    pub fn resolve_label(&self, label: usize, t: usize) -> Result<(usize, usize), CseqError> {
        let r = self.replay_prefix(t)?;
        r.edge_ends(label).ok_or(CseqError::NotAlive { label, t })
    }

    /// Checks that vertex `label` exists after `t` operations.
    pub fn resolve_vertex(&self, label: usize, t: usize) -> Result<usize, CseqError> {
        let r = self.replay_prefix(t)?;
        if r.has_vertex(label) {
            Ok(label)
        } else {
            Err(CseqError::NotAlive { label, t })
        }
    }

    /// Path of final-graph vertices (labels) that edge `label`, as it was
    /// after `t` operations, has been subdivided into. Runs from the
    /// smaller-labelled endpoint to the larger one.
    pub fn expand_label(&self, label: usize, t: usize) -> Result<Vec<usize>, CseqError> {
        let (a, b) = self.resolve_label(label, t)?;
        let index = GenealogyIndex::new(&self.genealogy);
        Ok(index.expand(label, a.min(b), a.max(b), t))
    }

    /// Writes the text dump: a `canonical`/`noncanonical` line, one line per
    /// operation, one `g` line per subdivision event, one `map` line per
    /// vertex label when the map is not the identity.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", if self.canonical { "canonical" } else { "noncanonical" }).unwrap();
        for op in &self.ops {
            match *op {
                ConstructionOp::AddEdge { x, y } => writeln!(s, "a {x} {y}"),
                ConstructionOp::SubdivideConnect { edge, y } => writeln!(s, "b {edge} {y}"),
                ConstructionOp::DoubleSubdivide { e, f } => writeln!(s, "c {e} {f}"),
                ConstructionOp::AddClaw { a, b, c } => writeln!(s, "d {a} {b} {c}"),
            }
            .unwrap();
        }
        for ev in &self.genealogy {
            writeln!(s, "g {} {} {} {} {}", ev.op, ev.parent, ev.vertex, ev.retained(), ev.fresh)
                .unwrap();
        }
        for (label, v) in self.vertex_map.iter().enumerate() {
            writeln!(s, "map {label} {}", v.0).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, CseqError> {
        let mut seq = ConstructionSequence::default();
        let mut saw_header = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |reason: &str| CseqError::Parse { line, reason: reason.to_string() };
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let mut parts = t.split_whitespace();
            let head = parts.next().unwrap();
            let nums: Vec<usize> = parts
                .map(|p| p.parse::<usize>().map_err(|_| err(&format!("bad number {p:?}"))))
                .collect::<Result<_, _>>()?;
            let need = |k: usize| {
                if nums.len() == k {
                    Ok(())
                } else {
                    Err(err(&format!("{head:?} takes {k} numbers")))
                }
            };
            match head {
                "canonical" | "noncanonical" if !saw_header => {
                    need(0)?;
                    saw_header = true;
                    seq.canonical = head == "canonical";
                }
                "a" => {
                    need(2)?;
                    seq.ops.push(ConstructionOp::AddEdge { x: nums[0], y: nums[1] });
                }
                "b" => {
                    need(2)?;
                    seq.ops.push(ConstructionOp::SubdivideConnect { edge: nums[0], y: nums[1] });
                }
                "c" => {
                    need(2)?;
                    seq.ops.push(ConstructionOp::DoubleSubdivide { e: nums[0], f: nums[1] });
                }
                "d" => {
                    need(3)?;
                    seq.ops.push(ConstructionOp::AddClaw { a: nums[0], b: nums[1], c: nums[2] });
                }
                "g" => {
                    need(5)?;
                    if nums[1] != nums[3] {
                        return Err(err("retained label must equal the parent label"));
                    }
                    seq.genealogy.push(SubdivisionEvent {
                        op: nums[0],
                        parent: nums[1],
                        vertex: nums[2],
                        fresh: nums[4],
                    });
                }
                "map" => {
                    need(2)?;
                    if nums[0] != seq.vertex_map.len() {
                        return Err(err("map lines must list labels in order"));
                    }
                    seq.vertex_map.push(VertexId(nums[1]));
                }
                _ => return Err(err(&format!("unknown directive {head:?}"))),
            }
        }
        if !saw_header {
            return Err(CseqError::Parse { line: 1, reason: "missing canonical line".into() });
        }
        Ok(seq)
    }
}

/// Subdivision events grouped by parent label, in operation order.
pub struct GenealogyIndex {
    by_parent: HashMap<usize, Vec<SubdivisionEvent>>,
}

impl GenealogyIndex {
    pub fn new(events: &[SubdivisionEvent]) -> Self {
        let mut by_parent: HashMap<usize, Vec<SubdivisionEvent>> = HashMap::new();
        for ev in events {
            by_parent.entry(ev.parent).or_default().push(*ev);
        }
        for list in by_parent.values_mut() {
            list.sort_by_key(|e| e.op);
        }
        GenealogyIndex { by_parent }
    }

    /// Expands edge `label` with endpoints `from`, `to` as of time `t` into
    /// the final path from `from` to `to`.
    pub fn expand(&self, label: usize, from: usize, to: usize, t: usize) -> Vec<usize> {
        let mut path = vec![from];
        // segments still to expand, rightmost at the bottom
        let mut stack = vec![(label, from, to, t)];
        while let Some((l, a, b, after)) = stack.pop() {
            let next = self
                .by_parent
                .get(&l)
                .and_then(|list| list.iter().find(|ev| ev.op > after));
            match next {
                None => path.push(b),
                Some(ev) => {
                    let x = ev.vertex;
                    if a < b {
                        stack.push((ev.fresh, x, b, ev.op));
                        stack.push((l, a, x, ev.op));
                    } else {
                        stack.push((l, x, b, ev.op));
                        stack.push((ev.fresh, a, x, ev.op));
                    }
                }
            }
        }
        path
    }
}

/// One reverse step of the reduction towards K4, on input vertex ids.
#[derive(Clone, Copy, Debug)]
enum Reduction {
    A { x: usize, y: usize },
    B { x: usize, a: usize, b: usize, y: usize },
    C { x: usize, a: usize, b: usize, y: usize, c: usize, d: usize },
    D { x: usize, a: usize, b: usize, c: usize },
}

struct Reducer {
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    live: usize,
    flow: VertexFlow,
}

impl Reducer {
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    fn add(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
    }

    fn kill(&mut self, x: usize) -> Vec<usize> {
        let nbrs: Vec<usize> = self.adj[x].iter().copied().collect();
        for &w in &nbrs {
            self.remove(x, w);
        }
        self.alive[x] = false;
        self.live -= 1;
        nbrs
    }

    fn revive(&mut self, x: usize, nbrs: &[usize]) {
        self.alive[x] = true;
        self.live += 1;
        for &w in nbrs {
            self.add(x, w);
        }
    }

    /// The current graph, obtained from a triconnected graph by one reverse
    /// step touching `attach`, is triconnected iff every non-adjacent pair of
    /// `attach` is joined by three internally disjoint paths: any separator
    /// of the reduced graph must split two of the attachments.
    fn still_triconnected(&mut self, attach: &[usize]) -> bool {
        if self.live < 4 {
            return false;
        }
        let n = self.adj.len();
        for i in 0..attach.len() {
            for j in i + 1..attach.len() {
                let (s, t) = (attach[i], attach[j]);
                if s == t || self.adjacent(s, t) {
                    continue;
                }
                let adj = &self.adj;
                let alive = &self.alive;
                let k = local_connectivity(
                    &mut self.flow,
                    n,
                    |v| adj[v].iter().copied().collect::<Vec<_>>(),
                    |v| alive[v],
                    s,
                    t,
                    3,
                );
                if k < 3 {
                    return false;
                }
            }
        }
        true
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    fn try_claw(&mut self) -> Option<Reduction> {
        for x in 0..self.adj.len() {
            if !self.alive[x] || self.degree(x) != 3 {
                continue;
            }
            let nbrs = self.kill(x);
            if self.still_triconnected(&nbrs) {
                return Some(Reduction::D { x, a: nbrs[0], b: nbrs[1], c: nbrs[2] });
            }
            self.revive(x, &nbrs);
        }
        None
    }

    fn try_subdivide_connect(&mut self) -> Option<Reduction> {
        for x in 0..self.adj.len() {
            if !self.alive[x] || self.degree(x) != 3 {
                continue;
            }
            let nbrs: Vec<usize> = self.adj[x].iter().copied().collect();
            for &y in &nbrs {
                let rest: Vec<usize> = nbrs.iter().copied().filter(|&w| w != y).collect();
                let (a, b) = (rest[0], rest[1]);
                if self.adjacent(a, b) {
                    continue;
                }
                self.kill(x);
                self.add(a, b);
                if self.still_triconnected(&[a, b, y]) {
                    return Some(Reduction::B { x, a, b, y });
                }
                self.remove(a, b);
                self.revive(x, &nbrs);
            }
        }
        None
    }

    fn try_double_subdivide(&mut self) -> Option<Reduction> {
        for x in 0..self.adj.len() {
            if !self.alive[x] || self.degree(x) != 3 {
                continue;
            }
            let nx: Vec<usize> = self.adj[x].iter().copied().collect();
            for &y in &nx {
                if y < x || self.degree(y) != 3 {
                    continue;
                }
                let ny: Vec<usize> = self.adj[y].iter().copied().collect();
                let ab: Vec<usize> = nx.iter().copied().filter(|&w| w != y).collect();
                let cd: Vec<usize> = ny.iter().copied().filter(|&w| w != x).collect();
                let (a, b, c, d) = (ab[0], ab[1], cd[0], cd[1]);
                if (a, b) == (c, d) || self.adjacent(a, b) || self.adjacent(c, d) {
                    continue;
                }
                self.kill(x);
                self.kill(y);
                self.add(a, b);
                self.add(c, d);
                if self.still_triconnected(&[a, b, c, d]) {
                    return Some(Reduction::C { x, a, b, y, c, d });
                }
                self.remove(a, b);
                self.remove(c, d);
                self.revive(y, &cd);
                self.revive(x, &nx);
                self.add(x, y);
            }
        }
        None
    }

    fn try_remove_edge(&mut self, x: usize, y: usize) -> bool {
        if self.degree(x) < 4 || self.degree(y) < 4 {
            return false;
        }
        self.remove(x, y);
        if self.still_triconnected(&[x, y]) {
            return true;
        }
        self.add(x, y);
        false
    }

    fn try_add_edge(&mut self) -> Option<Reduction> {
        for x in 0..self.adj.len() {
            if !self.alive[x] {
                continue;
            }
            let nbrs: Vec<usize> = self.adj[x].range(x + 1..).copied().collect();
            for y in nbrs {
                if self.try_remove_edge(x, y) {
                    return Some(Reduction::A { x, y });
                }
            }
        }
        None
    }
}

/// Computes a construction sequence of a simple triconnected graph by
/// greedily reversing operations until K4 remains.
///
/// Edges whose removal keeps the graph triconnected are removed first (they
/// form the trailing block of `a` operations). Then each step prefers, in
/// order, reversing a `d`, `b`, `c` and finally an `a` operation, breaking
/// ties by smallest vertex ids.
pub fn compute_sequence(g: &Graph) -> Result<ConstructionSequence, CseqError> {
    if !is_triconnected(g) {
        return Err(CseqError::NotTriconnected(if !g.is_simple() {
            "graph has loops or parallel edges".into()
        } else if g.vertex_count() < 4 {
            "fewer than four vertices".into()
        } else {
            "graph has a cut vertex or a separation pair".into()
        }));
    }
    let nb = g.vertex_bound();
    let mut adj = vec![BTreeSet::new(); nb];
    for (_, a, b) in g.edges() {
        adj[a.0].insert(b.0);
        adj[b.0].insert(a.0);
    }
    let alive: Vec<bool> = (0..nb).map(|i| g.contains_vertex(VertexId(i))).collect();
    let mut r = Reducer { adj, alive, live: g.vertex_count(), flow: VertexFlow::default() };

    // Stage 1: a single lexicographic pass suffices, since removing edges
    // never makes another edge removable.
    let mut removed: Vec<(usize, usize)> = Vec::new();
    for (x, y) in g.edge_pairs() {
        if r.try_remove_edge(x, y) {
            removed.push((x, y));
        }
    }

    // Stage 2
    let mut steps: Vec<Reduction> = Vec::new();
    while r.live > 4 {
        let step = r
            .try_claw()
            .or_else(|| r.try_subdivide_connect())
            .or_else(|| r.try_double_subdivide())
            .or_else(|| r.try_add_edge())
            .expect("a triconnected graph other than K4 always admits a reverse operation");
        steps.push(step);
    }

    let base: Vec<usize> = (0..nb).filter(|&v| r.alive[v]).collect();
    let mut b = SequenceBuilder::new(nb, &base);
    for step in steps.iter().rev() {
        b.push(*step);
    }
    for &(x, y) in removed.iter().rev() {
        b.push(Reduction::A { x, y });
    }
    let mut seq = b.finish();
    seq.canonical = seq.is_canonical_order();
    debug_assert_eq!(seq.replay_on_input(nb).unwrap().edge_pairs(), g.edge_pairs());
    Ok(seq)
}

/// Turns reverse steps on input ids into labelled forward operations.
struct SequenceBuilder {
    label_of: Vec<usize>,
    vertex_map: Vec<VertexId>,
    edge_label: HashMap<(usize, usize), usize>,
    replay: Replay,
    ops: Vec<ConstructionOp>,
}

impl SequenceBuilder {
    fn new(bound: usize, base: &[usize]) -> Self {
        let mut label_of = vec![usize::MAX; bound];
        for (i, &v) in base.iter().enumerate() {
            label_of[v] = i;
        }
        let mut edge_label = HashMap::new();
        for (l, (a, b)) in K4_EDGES.iter().enumerate() {
            edge_label.insert(key(base[*a], base[*b]), l);
        }
        SequenceBuilder {
            label_of,
            vertex_map: base.iter().map(|&v| VertexId(v)).collect(),
            edge_label,
            replay: Replay::new(),
            ops: Vec::new(),
        }
    }

    fn new_vertex(&mut self, input: usize, label: usize) {
        debug_assert_eq!(label, self.vertex_map.len());
        self.label_of[input] = label;
        self.vertex_map.push(VertexId(input));
    }

    /// Records the effect of subdividing input edge `ab` by input vertex `x`.
    fn subdivided(&mut self, a: usize, b: usize, x: usize, fresh: usize) {
        let l = self.edge_label.remove(&key(a, b)).unwrap();
        let (lo, hi) = if self.label_of[a] < self.label_of[b] { (a, b) } else { (b, a) };
        self.edge_label.insert(key(lo, x), l);
        self.edge_label.insert(key(x, hi), fresh);
    }

    fn push(&mut self, step: Reduction) {
        let op = match step {
            Reduction::A { x, y } => {
                ConstructionOp::AddEdge { x: self.label_of[x], y: self.label_of[y] }
            }
            Reduction::B { a, b, y, .. } => ConstructionOp::SubdivideConnect {
                edge: self.edge_label[&key(a, b)],
                y: self.label_of[y],
            },
            Reduction::C { a, b, c, d, .. } => ConstructionOp::DoubleSubdivide {
                e: self.edge_label[&key(a, b)],
                f: self.edge_label[&key(c, d)],
            },
            Reduction::D { a, b, c, .. } => ConstructionOp::AddClaw {
                a: self.label_of[a],
                b: self.label_of[b],
                c: self.label_of[c],
            },
        };
        let created = self.replay.apply(&op).expect("reverse steps replay forwards");
        match step {
            Reduction::A { x, y } => {
                self.edge_label.insert(key(x, y), created.edges[0]);
            }
            Reduction::B { x, a, b, y } => {
                self.new_vertex(x, created.vertices[0]);
                self.subdivided(a, b, x, created.edges[0]);
                self.edge_label.insert(key(x, y), created.edges[1]);
            }
            Reduction::C { x, a, b, y, c, d } => {
                self.new_vertex(x, created.vertices[0]);
                self.subdivided(a, b, x, created.edges[0]);
                self.new_vertex(y, created.vertices[1]);
                self.subdivided(c, d, y, created.edges[1]);
                self.edge_label.insert(key(x, y), created.edges[2]);
            }
            Reduction::D { x, .. } => {
                self.new_vertex(x, created.vertices[0]);
                for &l in &created.edges {
                    let (p, q) = self.replay.edge_ends(l).unwrap();
                    let w = self.vertex_map[p.min(q)].0;
                    self.edge_label.insert(key(x, w), l);
                }
            }
        }
        self.ops.push(op);
    }

    fn finish(self) -> ConstructionSequence {
        ConstructionSequence {
            ops: self.ops,
            genealogy: self.replay.genealogy().to_vec(),
            vertex_map: self.vertex_map,
            canonical: false,
        }
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}
