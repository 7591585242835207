//! The auxiliary pole graph and the list of vertices that admit the fast
//! vertex-vertex query while edges are still waiting to be inserted.

use super::{PlaneStGraph, SMALL_THRESHOLD};
use crate::graph::VertexId;

/// Vertices that are a pole of some face and incident to a pending edge,
/// with one edge per face whose source and sink both qualify.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuxGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
}

fn pending_counts(h: &PlaneStGraph, pending: &[(VertexId, VertexId)]) -> Vec<usize> {
    let mut count = vec![0usize; h.vertex_count()];
    for &(a, b) in pending {
        count[a.0] += 1;
        count[b.0] += 1;
    }
    count
}

pub fn aux_graph_build(h: &PlaneStGraph, pending: &[(VertexId, VertexId)]) -> AuxGraph {
    let count = pending_counts(h, pending);
    let qualifies = |v: VertexId| count[v.0] > 0 && !h.pole_faces(v).is_empty();
    let vertices: Vec<VertexId> =
        (0..h.vertex_count()).map(VertexId).filter(|&v| qualifies(v)).collect();
    let edges = (0..h.face_count())
        .map(|f| (h.face(f).source, h.face(f).sink))
        .filter(|&(s, t)| qualifies(s) && qualifies(t))
        .collect();
    AuxGraph { vertices, edges }
}

/// Vertices incident to a pending edge that are a pole of at most
/// [`SMALL_THRESHOLD`] faces, in increasing order.
pub fn small_candidates(h: &PlaneStGraph, pending: &[(VertexId, VertexId)]) -> Vec<VertexId> {
    let count = pending_counts(h, pending);
    (0..h.vertex_count())
        .map(VertexId)
        .filter(|&v| count[v.0] > 0 && h.pole_faces(v).len() <= SMALL_THRESHOLD)
        .collect()
}

/// Incrementally maintained candidate list. Entries are checked lazily when
/// taken, so callers only need to [`refresh`](Self::refresh) the vertices
/// whose pole counts may have dropped.
#[derive(Clone, Debug, Default)]
pub struct SmallTracker {
    pending: Vec<usize>,
    listed: Vec<bool>,
    stack: Vec<VertexId>,
}

impl SmallTracker {
    pub fn new(h: &PlaneStGraph, pending: &[(VertexId, VertexId)]) -> Self {
        let mut t = SmallTracker {
            pending: pending_counts(h, pending),
            listed: vec![false; h.vertex_count()],
            stack: Vec::new(),
        };
        for v in (0..h.vertex_count()).rev() {
            t.refresh(h, VertexId(v));
        }
        t
    }

    fn qualifies(&self, h: &PlaneStGraph, v: VertexId) -> bool {
        self.pending[v.0] > 0 && h.pole_faces(v).len() <= SMALL_THRESHOLD
    }

    pub fn refresh(&mut self, h: &PlaneStGraph, v: VertexId) {
        if v.0 < self.listed.len() && !self.listed[v.0] && self.qualifies(h, v) {
            self.listed[v.0] = true;
            self.stack.push(v);
        }
    }

    /// Records that the pending edge `ab` has been handled.
    pub fn done(&mut self, a: VertexId, b: VertexId) {
        self.pending[a.0] -= 1;
        self.pending[b.0] -= 1;
    }

    pub fn pending_at(&self, v: VertexId) -> usize {
        self.pending[v.0]
    }

    /// A qualifying vertex, if any; it stays listed until it stops qualifying.
    pub fn peek(&mut self, h: &PlaneStGraph) -> Option<VertexId> {
        while let Some(&v) = self.stack.last() {
            if self.qualifies(h, v) {
                return Some(v);
            }
            self.stack.pop();
            self.listed[v.0] = false;
        }
        None
    }
}
