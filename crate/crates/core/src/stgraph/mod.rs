//! Plane st-graphs: an embedded acyclic orientation with a single source
//! and a single sink in which every face is bounded by two directed paths
//! from the face's source to its sink.
//!
//! The embedding is a dart-based rotation system. Edge `e` has dart `2e`
//! at its tail and `2e + 1` at its head. The face successor of dart `d` is
//! `rot_next(twin(d))`. A vertex that is neither source nor sink of a face
//! passes through it; every vertex other than the global source and sink
//! passes through exactly two faces, its left and right face. The left face
//! is the one entered along an incoming edge and left along an outgoing
//! edge in rotation order.
//!
//! Vertex ids and edge ids are dense and never reused. Subdividing an edge
//! keeps its id on the half at the endpoint with the smaller vertex id, so
//! that ids agree with construction-sequence labels.

mod order;
mod small;

pub use order::OrderList;
pub use small::{aux_graph_build, small_candidates, AuxGraph, SmallTracker};

use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::cseq::K4_EDGES;
use crate::graph::{EdgeId, Graph, VertexId};

pub type FaceId = usize;

/// Pole-count bound for the fast vertex-vertex query.
pub const SMALL_THRESHOLD: usize = 11;

const NONE: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StError {
    #[error("vertex {0} does not exist")]
    InvalidVertex(VertexId),
    #[error("edge {0} does not exist")]
    InvalidEdge(EdgeId),
    #[error("face {0} does not exist")]
    InvalidFace(FaceId),
    #[error("vertex {0} is not on face {1}")]
    NotOnFace(VertexId, FaceId),
    #[error("an edge needs two distinct endpoints, got {0} twice")]
    SameEndpoints(VertexId),
    #[error("vertex {0} is a pole of {1} faces, above the fast-query bound")]
    ThresholdExceeded(VertexId, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub source: VertexId,
    pub sink: VertexId,
    /// Number of boundary edges.
    pub size: usize,
    rep: usize,
    source_slot: usize,
    sink_slot: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Corner {
    Source,
    Sink,
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct PlaneStGraph {
    vert: Vec<usize>,
    rot_next: Vec<usize>,
    rot_prev: Vec<usize>,
    face_of: Vec<usize>,
    first: Vec<usize>,
    degree: Vec<usize>,
    faces: Vec<Face>,
    left: Vec<usize>,
    right: Vec<usize>,
    poles: Vec<Vec<FaceId>>,
    order: OrderList,
    source: VertexId,
    sink: VertexId,
}

impl PlaneStGraph {
    /// K4 on `0..4` with edges oriented from lower to higher id, order
    /// `0 < 1 < 2 < 3`, and faces `012`, `013`, `023`, `123`.
    pub fn init_k4() -> Self {
        // rotations as edge ids, counterclockwise, with 0 inside triangle 123
        let rotation = [vec![0, 1, 2], vec![3, 0, 4], vec![5, 1, 3], vec![4, 2, 5]];
        Self::from_rotation(4, &K4_EDGES, &rotation)
    }

    /// Builds the structure from oriented edges `(tail, head)` (edge id =
    /// index) and per-vertex rotations given as edge ids. Vertex order is
    /// the id order, which must be topological. Face poles and left/right
    /// faces are derived from the corners.
    pub fn from_rotation(n: usize, edges: &[(usize, usize)], rotation: &[Vec<usize>]) -> Self {
        let darts = 2 * edges.len();
        let mut h = PlaneStGraph {
            vert: vec![NONE; darts],
            rot_next: vec![NONE; darts],
            rot_prev: vec![NONE; darts],
            face_of: vec![NONE; darts],
            first: vec![NONE; n],
            degree: vec![0; n],
            faces: Vec::new(),
            left: vec![NONE; n],
            right: vec![NONE; n],
            poles: vec![Vec::new(); n],
            order: OrderList::new(n),
            source: VertexId(0),
            sink: VertexId(n.saturating_sub(1)),
        };
        for (e, &(t, hd)) in edges.iter().enumerate() {
            assert!(t < hd, "edges must follow the vertex order");
            h.vert[2 * e] = t;
            h.vert[2 * e + 1] = hd;
        }
        for (v, rot) in rotation.iter().enumerate() {
            let ds: Vec<usize> = rot
                .iter()
                .map(|&e| if edges[e].0 == v { 2 * e } else { 2 * e + 1 })
                .collect();
            for i in 0..ds.len() {
                let (d, nd) = (ds[i], ds[(i + 1) % ds.len()]);
                assert_eq!(h.vert[d], v, "rotation of {v} lists a foreign edge");
                h.rot_next[d] = nd;
                h.rot_prev[nd] = d;
            }
            h.first[v] = ds.first().copied().unwrap_or(NONE);
            h.degree[v] = ds.len();
        }
        for d in 0..darts {
            if h.face_of[d] != NONE {
                continue;
            }
            let id = h.faces.len();
            h.faces.push(Face {
                source: VertexId(NONE),
                sink: VertexId(NONE),
                size: 0,
                rep: d,
                source_slot: NONE,
                sink_slot: NONE,
            });
            let mut x = d;
            loop {
                h.face_of[x] = id;
                h.faces[id].size += 1;
                x = h.phi(x);
                if x == d {
                    break;
                }
            }
        }
        for v in 0..n {
            for d in h.darts_at(v) {
                let f = h.face_of[d];
                match h.corner(d) {
                    Corner::Source => h.add_pole(v, f, true),
                    Corner::Sink => h.add_pole(v, f, false),
                    Corner::Left => h.left[v] = f,
                    Corner::Right => h.right[v] = f,
                }
            }
        }
        h
    }

    #[inline]
    fn phi(&self, d: usize) -> usize {
        self.rot_next[d ^ 1]
    }

    /// Role of the vertex at the corner between `rot_prev(d)` and `d`,
    /// which lies in face `face_of[d]`.
    fn corner(&self, d: usize) -> Corner {
        let p = self.rot_prev[d];
        match (p & 1 == 1, d & 1 == 1) {
            (false, false) => Corner::Source,
            (true, true) => Corner::Sink,
            (true, false) => Corner::Left,
            (false, true) => Corner::Right,
        }
    }

    fn darts_at(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree[v]);
        let start = self.first[v];
        if start == NONE {
            return out;
        }
        let mut d = start;
        loop {
            out.push(d);
            d = self.rot_next[d];
            if d == start {
                break;
            }
        }
        out
    }

    fn add_pole(&mut self, v: usize, f: FaceId, is_source: bool) {
        let slot = self.poles[v].len();
        self.poles[v].push(f);
        let face = &mut self.faces[f];
        if is_source {
            face.source = VertexId(v);
            face.source_slot = slot;
        } else {
            face.sink = VertexId(v);
            face.sink_slot = slot;
        }
    }

    fn remove_pole(&mut self, v: usize, f: FaceId, is_source: bool) {
        let slot = if is_source { self.faces[f].source_slot } else { self.faces[f].sink_slot };
        let list = &mut self.poles[v];
        debug_assert_eq!(list[slot], f);
        list.swap_remove(slot);
        if slot < list.len() {
            let moved = list[slot];
            let mf = &mut self.faces[moved];
            if mf.source.0 == v {
                mf.source_slot = slot;
            } else {
                mf.sink_slot = slot;
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.first.len()
    }

    pub fn edge_count(&self) -> usize {
        self.vert.len() / 2
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v.0]
    }

    /// `(tail, head)` of `e`.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (VertexId(self.vert[2 * e.0]), VertexId(self.vert[2 * e.0 + 1]))
    }

    /// The two faces on either side of `e`.
    pub fn edge_faces(&self, e: EdgeId) -> (FaceId, FaceId) {
        (self.face_of[2 * e.0], self.face_of[2 * e.0 + 1])
    }

    pub fn left_face(&self, v: VertexId) -> Option<FaceId> {
        Some(self.left[v.0]).filter(|&f| f != NONE)
    }

    pub fn right_face(&self, v: VertexId) -> Option<FaceId> {
        Some(self.right[v.0]).filter(|&f| f != NONE)
    }

    /// Faces in which `v` is source or sink.
    pub fn pole_faces(&self, v: VertexId) -> &[FaceId] {
        &self.poles[v.0]
    }

    pub fn order_less(&self, a: VertexId, b: VertexId) -> bool {
        self.order.less(a.0, b.0)
    }

    /// Vertices in st-order.
    pub fn order(&self) -> Vec<VertexId> {
        self.order.iter().map(VertexId).collect()
    }

    /// Neighbors of `v` in rotation order.
    pub fn rotation(&self, v: VertexId) -> Vec<VertexId> {
        self.darts_at(v.0).into_iter().map(|d| VertexId(self.vert[d ^ 1])).collect()
    }

    /// Edges at `v` in rotation order.
    pub fn rotation_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.darts_at(v.0).into_iter().map(|d| EdgeId(d / 2)).collect()
    }

    /// The underlying graph; edge ids are preserved.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.vertex_count());
        for e in 0..self.edge_count() {
            g.add_edge(VertexId(self.vert[2 * e]), VertexId(self.vert[2 * e + 1])).unwrap();
        }
        g
    }

    /// Some edge joining `a` and `b`, by a rotation scan of the smaller degree.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let (s, o) = if self.degree[a.0] <= self.degree[b.0] { (a, b) } else { (b, a) };
        self.darts_at(s.0).into_iter().find(|&d| self.vert[d ^ 1] == o.0).map(|d| EdgeId(d / 2))
    }

    pub fn random_face<R: Rng>(&self, rng: &mut R) -> FaceId {
        rng.gen_range(0..self.faces.len())
    }

    /// `v` lies on the boundary of `f`.
    #[inline]
    pub fn on_face(&self, v: VertexId, f: FaceId) -> bool {
        let face = &self.faces[f];
        face.source == v || face.sink == v || self.left[v.0] == f || self.right[v.0] == f
    }

    /// Boundary of `f` as a closed walk: `edges[i]` joins `verts[i]` and
    /// `verts[i + 1]` (cyclically).
    pub fn face_vertices_and_edges(
        &self,
        f: FaceId,
        verts: &mut Vec<VertexId>,
        edges: &mut Vec<EdgeId>,
    ) {
        verts.clear();
        edges.clear();
        let start = self.faces[f].rep;
        let mut d = start;
        loop {
            verts.push(VertexId(self.vert[d]));
            edges.push(EdgeId(d / 2));
            d = self.phi(d);
            if d == start {
                break;
            }
        }
    }

    /// The two directed source-to-sink paths bounding `f`.
    pub fn face_boundary(&self, f: FaceId) -> (Vec<VertexId>, Vec<VertexId>) {
        let (mut verts, mut edges) = (Vec::new(), Vec::new());
        self.face_vertices_and_edges(f, &mut verts, &mut edges);
        let k = verts.len();
        let s = verts.iter().position(|&v| v == self.faces[f].source).unwrap();
        let cyc: Vec<VertexId> = (0..=k).map(|i| verts[(s + i) % k]).collect();
        let t = cyc.iter().position(|&v| v == self.faces[f].sink).unwrap();
        let first = cyc[..=t].to_vec();
        let mut second = cyc[t..].to_vec();
        second.reverse();
        (first, second)
    }

    /// Query (1): a face containing vertex `a` and edge `b`.
    pub fn query_vertex_edge(&self, a: VertexId, b: EdgeId) -> Option<FaceId> {
        let (f, g) = self.edge_faces(b);
        [f, g].into_iter().find(|&x| self.on_face(a, x))
    }

    fn faces_of(&self, a: VertexId) -> impl Iterator<Item = FaceId> + '_ {
        self.poles[a.0]
            .iter()
            .copied()
            .chain([self.left[a.0], self.right[a.0]])
            .filter(|&f| f != NONE)
    }

    /// Query (2): a face containing `a` and `b`, for `a` a pole of at most
    /// [`SMALL_THRESHOLD`] faces.
    pub fn query_vertex_vertex(&self, a: VertexId, b: VertexId) -> Result<Option<FaceId>, StError> {
        let c = self.poles[a.0].len();
        if c > SMALL_THRESHOLD {
            return Err(StError::ThresholdExceeded(a, c));
        }
        Ok(self.faces_of(a).find(|&f| self.on_face(b, f)))
    }

    /// Query (2) without the pole bound, scanning the vertex with fewer pole faces.
    pub fn query_vertex_vertex_slow(&self, a: VertexId, b: VertexId) -> Option<FaceId> {
        let (s, o) = if self.poles[a.0].len() <= self.poles[b.0].len() { (a, b) } else { (b, a) };
        self.faces_of(s).find(|&f| self.on_face(o, f))
    }

    /// Query (3): a face containing `a`, `b` and `c`. One of them passes
    /// through any common face, so only left and right faces are candidates.
    pub fn query_three_vertices(&self, a: VertexId, b: VertexId, c: VertexId) -> Option<FaceId> {
        [a, b, c]
            .into_iter()
            .flat_map(|v| [self.left[v.0], self.right[v.0]])
            .filter(|&f| f != NONE)
            .find(|&f| self.on_face(a, f) && self.on_face(b, f) && self.on_face(c, f))
    }

    /// A face containing both edges.
    pub fn query_edge_edge(&self, e: EdgeId, f: EdgeId) -> Option<FaceId> {
        let (e1, e2) = self.edge_faces(e);
        let (f1, f2) = self.edge_faces(f);
        [e1, e2].into_iter().find(|&x| x == f1 || x == f2)
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), StError> {
        if v.0 < self.vertex_count() {
            Ok(())
        } else {
            Err(StError::InvalidVertex(v))
        }
    }

    /// Modification (4): subdivides `e` by a new vertex `x`, placed right
    /// after the tail in the order. The half at the endpoint with the
    /// smaller id keeps `e`; returns `x` and the other half.
    pub fn subdivide_edge(&mut self, e: EdgeId) -> Result<(VertexId, EdgeId), StError> {
        if e.0 >= self.edge_count() {
            return Err(StError::InvalidEdge(e));
        }
        let (u, v) = (self.vert[2 * e.0], self.vert[2 * e.0 + 1]);
        let x = self.first.len();
        let e2 = self.edge_count();
        let (f_fwd, f_back) = (self.face_of[2 * e.0], self.face_of[2 * e.0 + 1]);
        self.vert.extend([x, v]);
        self.rot_next.extend([NONE, NONE]);
        self.rot_prev.extend([NONE, NONE]);
        self.face_of.extend([f_fwd, f_back]);
        // new edge darts take the place of the moved dart
        let (into_x, out_of_x) = if u < v {
            // e = u -> x, e2 = x -> v
            self.vert[2 * e2] = x;
            self.vert[2 * e2 + 1] = v;
            self.replace_dart(2 * e.0 + 1, 2 * e2 + 1);
            self.vert[2 * e.0 + 1] = x;
            (2 * e.0 + 1, 2 * e2)
        } else {
            // e = x -> v, e2 = u -> x
            self.vert[2 * e2] = u;
            self.vert[2 * e2 + 1] = x;
            self.replace_dart(2 * e.0, 2 * e2);
            self.vert[2 * e.0] = x;
            (2 * e2 + 1, 2 * e.0)
        };
        self.rot_next[into_x] = out_of_x;
        self.rot_prev[into_x] = out_of_x;
        self.rot_next[out_of_x] = into_x;
        self.rot_prev[out_of_x] = into_x;
        self.first.push(into_x);
        self.degree.push(2);
        self.left.push(self.face_of[out_of_x]);
        self.right.push(self.face_of[into_x]);
        self.poles.push(Vec::new());
        self.faces[f_fwd].size += 1;
        self.faces[f_back].size += 1;
        let y = self.order.insert_after(u);
        debug_assert_eq!(y, x);
        Ok((VertexId(x), EdgeId(e2)))
    }

    /// Puts dart `new` in the rotation slot of `old`.
    fn replace_dart(&mut self, old: usize, new: usize) {
        let v = self.vert[old];
        let (p, n) = (self.rot_prev[old], self.rot_next[old]);
        if p == old {
            self.rot_next[new] = new;
            self.rot_prev[new] = new;
        } else {
            self.rot_next[new] = n;
            self.rot_prev[new] = p;
            self.rot_next[p] = new;
            self.rot_prev[n] = new;
        }
        if self.first[v] == old {
            self.first[v] = new;
        }
    }

    /// Puts dart `new` (at vertex `v`) just before `before` in the rotation.
    fn insert_dart_before(&mut self, new: usize, before: usize) {
        let p = self.rot_prev[before];
        self.rot_next[p] = new;
        self.rot_prev[new] = p;
        self.rot_next[new] = before;
        self.rot_prev[before] = new;
        self.degree[self.vert[new]] += 1;
    }

    /// The dart at `v` whose preceding corner lies in face `f`.
    fn corner_dart(&self, v: VertexId, f: FaceId) -> Result<usize, StError> {
        let start = self.first[v.0];
        if start != NONE {
            let mut d = start;
            loop {
                if self.face_of[d] == f {
                    return Ok(d);
                }
                d = self.rot_next[d];
                if d == start {
                    break;
                }
            }
        }
        Err(StError::NotOnFace(v, f))
    }

    /// Modification (5): adds the edge `ab` inside face `f`, oriented from
    /// the order-smaller endpoint. The side with the shorter boundary gets a
    /// new face id; the other keeps `f`. Adjacent endpoints are accepted and
    /// give a parallel edge.
    pub fn insert_edge(&mut self, a: VertexId, b: VertexId, f: FaceId) -> Result<EdgeId, StError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if f >= self.faces.len() {
            return Err(StError::InvalidFace(f));
        }
        if a == b {
            return Err(StError::SameEndpoints(a));
        }
        for v in [a, b] {
            if !self.on_face(v, f) {
                return Err(StError::NotOnFace(v, f));
            }
        }
        let (tail, head) = if self.order.less(a.0, b.0) { (a.0, b.0) } else { (b.0, a.0) };
        let dt = self.corner_dart(VertexId(tail), f)?;
        let dh = self.corner_dart(VertexId(head), f)?;
        let e = self.edge_count();
        let (t, h) = (2 * e, 2 * e + 1);
        self.vert.extend([tail, head]);
        self.rot_next.extend([NONE, NONE]);
        self.rot_prev.extend([NONE, NONE]);
        self.face_of.extend([f, f]);
        self.insert_dart_before(t, dt);
        self.insert_dart_before(h, dh);

        // Side A is t followed by the walk from dh; side B is h followed by
        // the walk from dt. Walk both in lockstep to find the shorter.
        let (mut xa, mut xb) = (dh, dt);
        let mut steps = 0;
        let a_shorter = loop {
            if xa == t {
                break true;
            }
            if xb == h {
                break false;
            }
            xa = self.phi(xa);
            xb = self.phi(xb);
            steps += 1;
        };
        let old_size = self.faces[f].size;
        let (short_start, short_chord, long_chord) = if a_shorter { (dh, t, h) } else { (dt, h, t) };
        let short_size = steps + 1;
        let long_size = old_size - steps + 1;

        let g = self.faces.len();
        let (s_f, t_f) = (self.faces[f].source.0, self.faces[f].sink.0);
        let (mut s_inside, mut t_inside) = (false, false);
        self.face_of[short_chord] = g;
        let mut d = short_start;
        let mut first_dart = true;
        while d != short_chord {
            self.face_of[d] = g;
            let w = self.vert[d];
            if !first_dart {
                if self.left[w] == f {
                    self.left[w] = g;
                }
                if self.right[w] == f {
                    self.right[w] = g;
                }
                s_inside |= w == s_f;
                t_inside |= w == t_f;
            }
            first_dart = false;
            d = self.phi(d);
        }
        self.faces.push(Face {
            source: VertexId(NONE),
            sink: VertexId(NONE),
            size: short_size,
            rep: short_chord,
            source_slot: NONE,
            sink_slot: NONE,
        });
        self.faces[f].size = long_size;
        self.faces[f].rep = long_chord;

        let ends = |v: usize| v == tail || v == head;
        let short_has = (ends(s_f) || s_inside, ends(t_f) || t_inside);
        let long_has = (ends(s_f) || !s_inside, ends(t_f) || !t_inside);
        let (short_poles, long_poles) = if short_has == (true, true) {
            ((s_f, t_f), (tail, head))
        } else if long_has == (true, true) {
            ((tail, head), (s_f, t_f))
        } else if short_has.0 {
            ((s_f, head), (tail, t_f))
        } else {
            ((tail, t_f), (s_f, head))
        };
        self.remove_pole(s_f, f, true);
        self.remove_pole(t_f, f, false);
        self.add_pole(long_poles.0, f, true);
        self.add_pole(long_poles.1, f, false);
        self.add_pole(short_poles.0, g, true);
        self.add_pole(short_poles.1, g, false);

        for (w, c) in [(tail, t), (head, h)] {
            for d in [c, self.rot_next[c]] {
                match self.corner(d) {
                    Corner::Left => self.left[w] = self.face_of[d],
                    Corner::Right => self.right[w] = self.face_of[d],
                    _ => {}
                }
            }
        }
        Ok(EdgeId(e))
    }

    /// Full structural check by independent face tracing.
    pub fn audit(&self) -> Result<(), String> {
        let n = self.vertex_count();
        let m = self.edge_count();
        let darts = 2 * m;
        // rotations
        let mut seen = vec![false; darts];
        for v in 0..n {
            let mut count = 0;
            if self.first[v] != NONE {
                let mut d = self.first[v];
                loop {
                    if self.vert[d] != v {
                        return Err(format!("dart {d} in rotation of {v} belongs elsewhere"));
                    }
                    if self.rot_prev[self.rot_next[d]] != d {
                        return Err(format!("rotation links broken at dart {d}"));
                    }
                    if seen[d] {
                        return Err(format!("dart {d} repeats in a rotation"));
                    }
                    seen[d] = true;
                    count += 1;
                    d = self.rot_next[d];
                    if d == self.first[v] {
                        break;
                    }
                }
            }
            if count != self.degree[v] {
                return Err(format!("vertex {v} has {count} darts, degree says {}", self.degree[v]));
            }
        }
        if let Some(d) = seen.iter().position(|&s| !s) {
            return Err(format!("dart {d} is in no rotation"));
        }
        // acyclicity and single source / sink
        self.order.audit()?;
        if self.order.len() != n {
            return Err("order list size differs from vertex count".into());
        }
        for e in 0..m {
            let (u, v) = (self.vert[2 * e], self.vert[2 * e + 1]);
            if !self.order.less(u, v) {
                return Err(format!("edge {e} = {u}->{v} goes against the order"));
            }
        }
        for v in 0..n {
            let ds = self.darts_at(v);
            let ins = ds.iter().filter(|&&d| d & 1 == 1).count();
            let outs = ds.len() - ins;
            let is_s = v == self.source.0;
            let is_t = v == self.sink.0;
            if (ins == 0) != is_s || (outs == 0) != is_t {
                return Err(format!("vertex {v} violates the single source/sink property"));
            }
            let switches = (0..ds.len())
                .filter(|&i| (ds[i] & 1) != (ds[(i + 1) % ds.len()] & 1))
                .count();
            if switches > 2 {
                return Err(format!("vertex {v} is not bimodal"));
            }
        }
        // faces
        let mut traced = vec![NONE; darts];
        let mut cycles = 0;
        for d0 in 0..darts {
            if traced[d0] != NONE {
                continue;
            }
            let f = self.face_of[d0];
            if f >= self.faces.len() {
                return Err(format!("dart {d0} has no valid face"));
            }
            let mut cyc = Vec::new();
            let mut d = d0;
            loop {
                if traced[d] != NONE || self.face_of[d] != f {
                    return Err(format!("face {f} tracing is inconsistent at dart {d}"));
                }
                traced[d] = f;
                cyc.push(d);
                d = self.phi(d);
                if d == d0 {
                    break;
                }
            }
            cycles += 1;
            let face = &self.faces[f];
            if face.size != cyc.len() {
                return Err(format!("face {f} has {} edges, size says {}", cyc.len(), face.size));
            }
            if !cyc.contains(&face.rep) {
                return Err(format!("face {f} representative is off the face"));
            }
            // two directed paths: one run of forward darts, one of backward
            let k = cyc.len();
            let runs = (0..k).filter(|&i| (cyc[i] & 1) != (cyc[(i + 1) % k] & 1)).count();
            if runs != 2 {
                return Err(format!("face {f} is not bounded by two directed paths"));
            }
            let start = (0..k)
                .find(|&i| cyc[i] & 1 == 0 && cyc[(i + k - 1) % k] & 1 == 1)
                .unwrap();
            let src = self.vert[cyc[start]];
            let end = (0..k).find(|&i| cyc[i] & 1 == 1 && cyc[(i + k - 1) % k] & 1 == 0).unwrap();
            let snk = self.vert[cyc[end]];
            if face.source.0 != src || face.sink.0 != snk {
                return Err(format!(
                    "face {f} poles stored as {}/{}, traced as {src}/{snk}",
                    face.source.0, face.sink.0
                ));
            }
            if self.poles[src].get(face.source_slot) != Some(&f)
                || self.poles[snk].get(face.sink_slot) != Some(&f)
            {
                return Err(format!("face {f} pole slots are stale"));
            }
        }
        if cycles != self.faces.len() {
            return Err(format!("{cycles} traced faces, {} stored", self.faces.len()));
        }
        if self.faces.len() + n != m + 2 {
            return Err(format!("Euler count fails: n={n} m={m} f={}", self.faces.len()));
        }
        // left/right faces and pole lists
        for v in 0..n {
            let (mut l, mut r, mut p) = (NONE, NONE, Vec::new());
            for d in self.darts_at(v) {
                match self.corner(d) {
                    Corner::Left => l = self.face_of[d],
                    Corner::Right => r = self.face_of[d],
                    _ => p.push(self.face_of[d]),
                }
            }
            if l != self.left[v] || r != self.right[v] {
                return Err(format!("vertex {v} left/right faces are stale"));
            }
            let mut stored = self.poles[v].clone();
            p.sort_unstable();
            stored.sort_unstable();
            if p != stored {
                return Err(format!("vertex {v} pole faces are stale"));
            }
        }
        Ok(())
    }

    /// Text dump: the order, one line per face, one line per vertex.
    pub fn debug_dump(&self) -> String {
        let mut s = String::new();
        let order: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        writeln!(s, "order {}", order.join(" ")).unwrap();
        for (i, f) in self.faces.iter().enumerate() {
            writeln!(s, "face {i} source {} sink {} size {}", f.source.0, f.sink.0, f.size).unwrap();
        }
        let opt = |f: usize| if f == NONE { "-".to_string() } else { f.to_string() };
        for v in 0..self.vertex_count() {
            let mut p = self.poles[v].clone();
            p.sort_unstable();
            let p: Vec<String> = p.iter().map(|f| f.to_string()).collect();
            writeln!(
                s,
                "vertex {v} left {} right {} poles {}",
                opt(self.left[v]),
                opt(self.right[v]),
                p.join(" ")
            )
            .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::collections::BTreeSet;

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    fn face_set(h: &PlaneStGraph, f: FaceId) -> BTreeSet<usize> {
        let (mut vs, mut es) = (Vec::new(), Vec::new());
        h.face_vertices_and_edges(f, &mut vs, &mut es);
        vs.iter().map(|x| x.0).collect()
    }

    fn find_face(h: &PlaneStGraph, verts: &[usize]) -> FaceId {
        let want: BTreeSet<usize> = verts.iter().copied().collect();
        (0..h.face_count()).find(|&f| face_set(h, f) == want).expect("face exists")
    }

    /// W5-shaped state: K4 with edge 0-2 subdivided by 4 and 4 joined to 1.
    /// The hub is 1 and the rim is the cycle 0 4 2 3.
    fn w5() -> PlaneStGraph {
        let mut h = PlaneStGraph::init_k4();
        let (x, _) = h.subdivide_edge(EdgeId(1)).unwrap();
        let f = h.query_vertex_vertex(v(1), x).unwrap().unwrap();
        h.insert_edge(x, v(1), f).unwrap();
        h.audit().unwrap();
        h
    }

    #[test]
    fn k4_initial_state() {
        let h = PlaneStGraph::init_k4();
        h.audit().unwrap();
        assert_eq!(h.face_count(), 4);
        let f234 = find_face(&h, &[1, 2, 3]);
        assert_eq!((h.face(f234).source, h.face(f234).sink), (v(1), v(3)));
        assert_eq!(h.pole_faces(v(2)), &[find_face(&h, &[0, 1, 2])]);
        let lr: BTreeSet<FaceId> =
            [h.left_face(v(2)).unwrap(), h.right_face(v(2)).unwrap()].into_iter().collect();
        let want: BTreeSet<FaceId> =
            [find_face(&h, &[1, 2, 3]), find_face(&h, &[0, 2, 3])].into_iter().collect();
        assert_eq!(lr, want);
        // s and t share a face
        assert!(h.query_vertex_vertex(v(0), v(3)).unwrap().is_some());
        assert_eq!(h.left_face(v(0)), None);
    }

    #[test]
    fn k4_queries() {
        let h = PlaneStGraph::init_k4();
        let e34 = EdgeId(5);
        assert_eq!(h.query_vertex_edge(v(1), e34), Some(find_face(&h, &[1, 2, 3])));
        assert_eq!(h.query_vertex_edge(v(0), e34), Some(find_face(&h, &[0, 2, 3])));
        let f = h.query_vertex_vertex(v(1), v(2)).unwrap().unwrap();
        assert!(f == find_face(&h, &[0, 1, 2]) || f == find_face(&h, &[1, 2, 3]));
        assert_eq!(h.query_three_vertices(v(1), v(2), v(3)), Some(find_face(&h, &[1, 2, 3])));
    }

    #[test]
    fn w5_queries_and_chord() {
        let mut h = w5();
        assert_eq!(h.face_count(), 5);
        let hub = v(1);
        assert!([0, 2, 3, 4].iter().all(|&i| h.edge_between(hub, v(i)).is_some()));
        let outer = find_face(&h, &[0, 4, 2, 3]);
        assert_eq!(h.query_vertex_vertex(v(0), v(2)).unwrap(), Some(outer));
        assert_eq!(h.query_three_vertices(v(0), v(4), v(2)), Some(outer));
        assert_eq!(h.query_three_vertices(hub, v(0), v(2)), None);
        let e03 = h.edge_between(v(0), v(3)).unwrap();
        assert_eq!(h.query_vertex_edge(hub, e03), Some(find_face(&h, &[1, 3, 0])));
        let e42 = h.edge_between(v(4), v(2)).unwrap();
        assert_eq!(h.query_edge_edge(e03, e42), Some(outer));
        let spoke = h.edge_between(hub, v(4)).unwrap();
        let e23 = h.edge_between(v(2), v(3)).unwrap();
        assert_eq!(h.query_edge_edge(spoke, e23), None);

        // chord 0-2 through the rim face
        let e = h.insert_edge(v(2), v(0), outer).unwrap();
        h.audit().unwrap();
        assert_eq!(h.endpoints(e), (v(0), v(2)));
        assert_eq!(h.face_count(), 6);
        find_face(&h, &[0, 4, 2]);
        find_face(&h, &[0, 2, 3]);
        assert_eq!(h.query_vertex_vertex(v(4), v(3)).unwrap(), None);
    }

    #[test]
    fn subdivide_k4_edge() {
        let mut h = PlaneStGraph::init_k4();
        let f123 = find_face(&h, &[0, 1, 2]);
        let f124 = find_face(&h, &[0, 1, 3]);
        let (x, e2) = h.subdivide_edge(EdgeId(0)).unwrap();
        h.audit().unwrap();
        assert_eq!(x, v(4));
        assert_eq!(h.endpoints(EdgeId(0)), (v(0), x));
        assert_eq!(h.endpoints(e2), (x, v(1)));
        let lr: BTreeSet<FaceId> = [h.left_face(x).unwrap(), h.right_face(x).unwrap()].into();
        assert_eq!(lr, [f123, f124].into());
        assert!(h.pole_faces(x).is_empty());
        assert_eq!(h.face(f124).size, 4);
        let (p1, p2) = h.face_boundary(f124);
        let mut paths = vec![p1, p2];
        paths.sort();
        assert_eq!(paths, vec![vec![v(0), v(3)], vec![v(0), x, v(1), v(3)]]);

        // subdividing the retained half again chains 0 -> 5 -> 4 -> 1
        let (y, _) = h.subdivide_edge(EdgeId(0)).unwrap();
        h.audit().unwrap();
        assert_eq!(h.order()[..4], [v(0), y, x, v(1)]);
    }

    #[test]
    fn subdivide_keeps_id_at_smaller_endpoint() {
        let mut h = PlaneStGraph::init_k4();
        let (x, _) = h.subdivide_edge(EdgeId(0)).unwrap();
        // edge 0 is now 0 -> 4; the fresh half is 4 -> 1
        let f = h.query_vertex_vertex(x, v(3)).unwrap().unwrap();
        h.insert_edge(x, v(3), f).unwrap();
        // subdividing 4 -> 1 keeps the id at 1 (smaller than 4), the fresh half at 4
        let e41 = h.edge_between(x, v(1)).unwrap();
        let (y, fresh) = h.subdivide_edge(e41).unwrap();
        h.audit().unwrap();
        let (t, hd) = h.endpoints(e41);
        assert_eq!((t, hd), (y, v(1)));
        assert_eq!(h.endpoints(fresh), (x, y));
    }

    #[test]
    fn insert_after_subdivision() {
        let mut h = PlaneStGraph::init_k4();
        let f124 = find_face(&h, &[0, 1, 3]);
        let (x, _) = h.subdivide_edge(EdgeId(0)).unwrap();
        let e = h.insert_edge(x, v(3), f124).unwrap();
        h.audit().unwrap();
        assert_eq!(h.endpoints(e), (x, v(3)));
        let a = find_face(&h, &[0, 4, 3]);
        let b = find_face(&h, &[4, 1, 3]);
        assert_eq!(h.face(b).source, x);
        assert_eq!(h.face(a).source, v(0));
        assert!(h.pole_faces(x).contains(&b));
        assert!(!h.pole_faces(x).contains(&a));
        assert_eq!(h.insert_edge(v(2), v(3), a), Err(StError::NotOnFace(v(2), a)));
        assert_eq!(h.insert_edge(v(3), v(3), a), Err(StError::SameEndpoints(v(3))));
    }

    #[test]
    fn parallel_insert_makes_a_two_gon() {
        let mut h = PlaneStGraph::init_k4();
        let f = find_face(&h, &[0, 1, 2]);
        let e = h.insert_edge(v(0), v(1), f).unwrap();
        h.audit().unwrap();
        let (x, _) = h.subdivide_edge(e).unwrap();
        let g = h.query_vertex_vertex(x, v(2)).unwrap().unwrap();
        h.insert_edge(x, v(2), g).unwrap();
        h.audit().unwrap();
        assert_eq!(h.face_count(), 6);
    }

    #[test]
    fn random_soak_with_brute_force_queries() {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut h = PlaneStGraph::init_k4();
        let (mut vs, mut es) = (Vec::new(), Vec::new());
        for step in 0..3000 {
            if rng.gen_bool(0.4) {
                let e = EdgeId(rng.gen_range(0..h.edge_count()));
                h.subdivide_edge(e).unwrap();
            } else {
                let f = h.random_face(&mut rng);
                h.face_vertices_and_edges(f, &mut vs, &mut es);
                if vs.len() < 4 {
                    continue;
                }
                let i = rng.gen_range(0..vs.len());
                let j = (i + rng.gen_range(2..vs.len() - 1)) % vs.len();
                if h.edge_between(vs[i], vs[j]).is_some() {
                    continue;
                }
                h.insert_edge(vs[i], vs[j], f).unwrap();
            }
            if step % 100 == 0 {
                h.audit().unwrap();
                // brute-force co-faciality
                let sets: Vec<BTreeSet<usize>> =
                    (0..h.face_count()).map(|f| face_set(&h, f)).collect();
                for _ in 0..50 {
                    let a = rng.gen_range(0..h.vertex_count());
                    let b = rng.gen_range(0..h.vertex_count());
                    let any = sets.iter().any(|s| s.contains(&a) && s.contains(&b));
                    let got = h.query_vertex_vertex_slow(v(a), v(b));
                    assert_eq!(got.is_some(), any);
                    if let Some(f) = got {
                        assert!(sets[f].contains(&a) && sets[f].contains(&b));
                    }
                    let c = rng.gen_range(0..h.vertex_count());
                    if a != b && b != c && a != c {
                        let any3 = sets
                            .iter()
                            .any(|s| s.contains(&a) && s.contains(&b) && s.contains(&c));
                        assert_eq!(h.query_three_vertices(v(a), v(b), v(c)).is_some(), any3);
                    }
                }
            }
        }
        h.audit().unwrap();
    }

    #[test]
    fn dump_lists_every_face_and_vertex() {
        let h = PlaneStGraph::init_k4();
        let d = h.debug_dump();
        assert!(d.starts_with("order 0 1 2 3\n"));
        assert_eq!(d.lines().filter(|l| l.starts_with("face ")).count(), 4);
        assert!(d.contains("vertex 0 left - right - poles"));
    }
}
