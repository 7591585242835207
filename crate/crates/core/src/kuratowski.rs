//! Kuratowski subdivisions for operations whose attachments share no face,
//! and their lifting through later subdivisions and virtual edges.
//!
//! Take two attachments `a`, `b` on no common face. The boundary `C` of the
//! face that `a` lies inside once it is removed is a cycle; the pieces of
//! the graph hanging off `C` that contain `a` and `b` overlap, either skew
//! (giving K3,3) or on the same three vertices (giving K5).

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::certify::{KuratowskiKind, KuratowskiSubdivision};
use crate::cseq::{ConstructionOp, ConstructionSequence, GenealogyIndex};
use crate::decomposition::{EdgeOrigin, TriconnectedComponent};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::menger::{Role, VertexFlow};
use crate::stgraph::{FaceId, PlaneStGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Attachment {
    Vertex(VertexId),
    Edge(EdgeId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KuratowskiError {
    #[error("the host graph is K5, which has no K3,3 subdivision")]
    HostIsK5,
    #[error("no K3,3 subdivision found around the K5 subdivision")]
    NotFound,
}

/// Attachments of `op` in the order their new vertices are created.
pub fn attachments(op: &ConstructionOp) -> Vec<Attachment> {
    use Attachment::*;
    match *op {
        ConstructionOp::AddEdge { x, y } => vec![Vertex(VertexId(x)), Vertex(VertexId(y))],
        ConstructionOp::SubdivideConnect { edge, y } => {
            vec![Edge(EdgeId(edge)), Vertex(VertexId(y))]
        }
        ConstructionOp::DoubleSubdivide { e, f } => vec![Edge(EdgeId(e)), Edge(EdgeId(f))],
        ConstructionOp::AddClaw { a, b, c } => {
            vec![Vertex(VertexId(a)), Vertex(VertexId(b)), Vertex(VertexId(c))]
        }
    }
}

fn faces_of(h: &PlaneStGraph, a: Attachment) -> Vec<FaceId> {
    match a {
        Attachment::Vertex(v) => {
            let mut f: Vec<FaceId> = h.pole_faces(v).to_vec();
            f.extend(h.left_face(v));
            f.extend(h.right_face(v));
            f.sort_unstable();
            f.dedup();
            f
        }
        Attachment::Edge(e) => {
            let (f, g) = h.edge_faces(e);
            vec![f, g]
        }
    }
}

fn cofacial(h: &PlaneStGraph, a: Attachment, b: Attachment) -> bool {
    let fb = faces_of(h, b);
    faces_of(h, a).iter().any(|f| fb.contains(f))
}

/// Face boundary rotated so that it starts with `edges[i]`.
fn walk_from(h: &PlaneStGraph, f: FaceId, start: impl Fn(VertexId, EdgeId) -> bool) -> Vec<VertexId> {
    let (mut verts, mut edges) = (Vec::new(), Vec::new());
    h.face_vertices_and_edges(f, &mut verts, &mut edges);
    let i = (0..verts.len()).find(|&i| start(verts[i], edges[i])).expect("face contains start");
    verts.rotate_left(i);
    verts
}

/// The boundary cycle of the face that contains `a` after removing it.
pub fn merged_face_cycle(h: &PlaneStGraph, a: Attachment) -> Vec<VertexId> {
    match a {
        Attachment::Edge(e) => {
            let (f1, f2) = h.edge_faces(e);
            let w1 = walk_from(h, f1, |_, x| x == e);
            let w2 = walk_from(h, f2, |_, x| x == e);
            // w1 = p q ..., the path q .. p avoids e; w2 runs p .. q
            let mut cycle: Vec<VertexId> = w1[1..].to_vec();
            cycle.extend_from_slice(&w2[1..]);
            cycle
        }
        Attachment::Vertex(v) => {
            let mut by_start: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
            for f in faces_of(h, a) {
                let w = walk_from(h, f, |x, _| x == v);
                by_start.insert(w[1], w[1..].to_vec());
            }
            let first = *by_start.keys().min().expect("a vertex lies on faces");
            let mut cycle = Vec::new();
            let mut at = first;
            loop {
                let seg = &by_start[&at];
                cycle.extend_from_slice(&seg[..seg.len() - 1]);
                at = *seg.last().unwrap();
                if at == first {
                    break;
                }
            }
            cycle
        }
    }
}

/// A chord of a cycle, or a component of the graph minus the cycle together
/// with the edges joining it to the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CComponent {
    /// Vertices off the cycle.
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    /// Vertices on the cycle, in increasing order.
    pub attachments: Vec<VertexId>,
}

fn component_from(g: &Graph, on_cycle: &[bool], start: VertexId, seen: &mut [bool]) -> CComponent {
    let mut vertices = vec![start];
    let mut edges = Vec::new();
    let mut att = Vec::new();
    seen[start.0] = true;
    let mut i = 0;
    while i < vertices.len() {
        let u = vertices[i];
        i += 1;
        for w in g.neighbors(u) {
            if on_cycle[w.0] {
                edges.push((u, w));
                att.push(w);
            } else {
                if u.0 < w.0 {
                    edges.push((u, w));
                }
                if !seen[w.0] {
                    seen[w.0] = true;
                    vertices.push(w);
                }
            }
        }
    }
    att.sort_unstable();
    att.dedup();
    CComponent { vertices, edges, attachments: att }
}

/// All components of `g` with respect to `cycle`; they partition the edges
/// not on the cycle.
pub fn c_components(g: &Graph, cycle: &[VertexId]) -> Vec<CComponent> {
    let nb = g.vertex_bound();
    let mut on_cycle = vec![false; nb];
    for v in cycle {
        on_cycle[v.0] = true;
    }
    let k = cycle.len();
    let mut cycle_edges = HashSet::new();
    for i in 0..k {
        let (a, b) = (cycle[i], cycle[(i + 1) % k]);
        cycle_edges.insert((a.min(b), a.max(b)));
    }
    let mut out = Vec::new();
    for (_, a, b) in g.edges() {
        if on_cycle[a.0] && on_cycle[b.0] && !cycle_edges.contains(&(a.min(b), a.max(b))) {
            out.push(CComponent {
                vertices: Vec::new(),
                edges: vec![(a, b)],
                attachments: vec![a.min(b), a.max(b)],
            });
        }
    }
    let mut seen = vec![false; nb];
    for v in g.vertices() {
        if !on_cycle[v.0] && !seen[v.0] {
            out.push(component_from(g, &on_cycle, v, &mut seen));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Overlap {
    /// `x1, x3` attach the first component, `x2, x4` the second, in cyclic order.
    Skew([VertexId; 4]),
    Equivalent([VertexId; 3]),
    Avoid,
}

/// How two sets of attachments on `cycle` relate.
pub fn classify_overlap(a: &[VertexId], b: &[VertexId], cycle: &[VertexId]) -> Overlap {
    let sa: HashSet<VertexId> = a.iter().copied().collect();
    let sb: HashSet<VertexId> = b.iter().copied().collect();
    for (first, second, shift) in [(&sa, &sb, 0), (&sb, &sa, 1)] {
        let mut got = Vec::with_capacity(4);
        for &v in cycle {
            let want = if got.len() % 2 == 0 { first } else { second };
            if want.contains(&v) {
                got.push(v);
                if got.len() == 4 {
                    break;
                }
            }
        }
        if got.len() == 4 {
            got.rotate_left(shift);
            return Overlap::Skew([got[0], got[1], got[2], got[3]]);
        }
    }
    if sa == sb && sa.len() == 3 {
        let mut s: Vec<VertexId> = cycle.iter().copied().filter(|v| sa.contains(v)).collect();
        s.truncate(3);
        return Overlap::Equivalent([s[0], s[1], s[2]]);
    }
    Overlap::Avoid
}

/// Internally disjoint paths from `start` to each of `targets`, using only
/// vertices in `inside` as interior vertices. `nbrs` gives adjacency.
pub fn disjoint_paths(
    n: usize,
    nbrs: &dyn Fn(usize) -> Vec<usize>,
    inside: &HashSet<usize>,
    start: usize,
    targets: &[VertexId],
) -> Vec<Vec<VertexId>> {
    let tset: HashSet<usize> = targets.iter().map(|v| v.0).collect();
    let mut flow = VertexFlow::default();
    let paths = flow.paths(
        n,
        nbrs,
        |v| {
            if tset.contains(&v) {
                Role::Target(1)
            } else if inside.contains(&v) {
                Role::Free
            } else {
                Role::Blocked
            }
        },
        start,
        targets.len(),
    );
    assert_eq!(paths.len(), targets.len(), "attachments are reachable by disjoint paths");
    let mut out: Vec<Vec<VertexId>> = Vec::with_capacity(targets.len());
    for t in targets {
        let p = paths.iter().find(|p| *p.last().unwrap() == t.0).expect("one path per target");
        out.push(p.iter().map(|&x| VertexId(x)).collect());
    }
    out
}

/// The graph after `op`, with new vertices numbered from
/// `h.vertex_count()` in creation order.
pub fn host_after(h: &PlaneStGraph, op: &ConstructionOp) -> Graph {
    let mut g = h.to_graph();
    match *op {
        ConstructionOp::AddEdge { x, y } => {
            g.add_edge(VertexId(x), VertexId(y)).unwrap();
        }
        ConstructionOp::SubdivideConnect { edge, y } => {
            let x = g.subdivide(EdgeId(edge)).unwrap();
            g.add_edge(x, VertexId(y)).unwrap();
        }
        ConstructionOp::DoubleSubdivide { e, f } => {
            let x = g.subdivide(EdgeId(e)).unwrap();
            let y = g.subdivide(EdgeId(f)).unwrap();
            g.add_edge(x, y).unwrap();
        }
        ConstructionOp::AddClaw { a, b, c } => {
            let x = g.add_vertex();
            for w in [a, b, c] {
                g.add_edge(x, VertexId(w)).unwrap();
            }
        }
    }
    g
}

/// For a claw whose attachments are pairwise co-facial but share no face:
/// a state and a subdivide-and-connect operation that fails there and whose
/// result is contained in the graph with the claw.
pub fn claw_reduction(
    h: &PlaneStGraph,
    a: VertexId,
    b: VertexId,
    c: VertexId,
) -> (PlaneStGraph, ConstructionOp) {
    let mut h2 = h.clone();
    let e = match h.edge_between(a, b) {
        Some(e) => e,
        None => {
            let f = faces_of(h, Attachment::Vertex(a))
                .into_iter()
                .find(|&f| h.on_face(b, f))
                .expect("a and b share a face");
            h2.insert_edge(a, b, f).expect("insertion inside a common face")
        }
    };
    (h2, ConstructionOp::SubdivideConnect { edge: e.0, y: c.0 })
}

/// A K5 or K3,3 subdivision in the graph obtained by applying `op` to `h`,
/// assuming the attachments of `op` share no face of `h`. New vertices get
/// ids from `h.vertex_count()` in creation order.
pub fn extract(h: &PlaneStGraph, op: &ConstructionOp) -> KuratowskiSubdivision {
    let atts = attachments(op);
    let mut pairs = Vec::new();
    for i in 0..atts.len() {
        for j in i + 1..atts.len() {
            if !cofacial(h, atts[i], atts[j]) {
                pairs.extend([(i, j), (j, i)]);
            }
        }
    }
    if pairs.is_empty() {
        let ConstructionOp::AddClaw { a, b, c } = *op else {
            panic!("attachments of {op:?} share a face");
        };
        let (h2, op2) = claw_reduction(h, VertexId(a), VertexId(b), VertexId(c));
        return [(0, 1), (1, 0)]
            .into_iter()
            .find_map(|(i, j)| try_pair(&h2, &op2, i, j))
            .unwrap_or_else(|| panic!("no Kuratowski subdivision found for {op:?}"));
    }
    pairs
        .into_iter()
        .find_map(|(i, j)| try_pair(h, op, i, j))
        .unwrap_or_else(|| panic!("no Kuratowski subdivision found for {op:?}"))
}

/// Cyclic open arc test: `x` lies strictly between `from` and `to` going forward.
fn strictly_between(x: usize, from: usize, to: usize) -> bool {
    if from < to {
        from < x && x < to
    } else {
        x > from || x < to
    }
}

/// Builds the witness around the face cycle of attachment `i`, with the
/// piece containing attachment `j` routed by disjoint paths.
fn try_pair(
    h: &PlaneStGraph,
    op: &ConstructionOp,
    i: usize,
    j: usize,
) -> Option<KuratowskiSubdivision> {
    let n = h.vertex_count();
    let atts = attachments(op);
    let prime = |k: usize| match atts[k] {
        Attachment::Vertex(v) => v,
        Attachment::Edge(_) => VertexId(
            n + atts[..k].iter().filter(|a| matches!(a, Attachment::Edge(_))).count(),
        ),
    };
    let (a, b) = (atts[i], atts[j]);
    let (ap, bp) = (prime(i), prime(j));
    let t_path = match op {
        ConstructionOp::AddClaw { .. } => vec![ap, VertexId(n), bp],
        _ => vec![ap, bp],
    };

    let g = h.to_graph();
    let cycle = merged_face_cycle(h, a);
    let nb = g.vertex_bound();
    let (lg, rg) = (nb + 2, nb + 3);
    let total = nb + 4;
    let mut on_cycle = vec![false; total];
    for v in &cycle {
        on_cycle[v.0] = true;
    }
    let pos: HashMap<VertexId, usize> = cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut att_a: Vec<VertexId> = match a {
        Attachment::Vertex(v) => g.neighbors(v).collect(),
        Attachment::Edge(e) => {
            let (p, q) = h.endpoints(e);
            vec![p, q]
        }
    };
    if att_a.iter().any(|v| !on_cycle[v.0]) {
        return None;
    }
    att_a.sort_unstable_by_key(|v| pos[v]);

    let split = match b {
        Attachment::Edge(e) => Some(h.endpoints(e)),
        Attachment::Vertex(_) => None,
    };
    let mut seen = vec![false; nb];
    let hb = match (b, split) {
        (Attachment::Vertex(v), _) if on_cycle[v.0] => return None,
        (Attachment::Vertex(v), _) => component_from(&g, &on_cycle, v, &mut seen),
        (_, Some((p, q))) if on_cycle[p.0] && on_cycle[q.0] => CComponent {
            vertices: Vec::new(),
            edges: vec![(p, q)],
            attachments: vec![p.min(q), p.max(q)],
        },
        (_, Some((p, q))) => {
            let s = if on_cycle[p.0] { q } else { p };
            component_from(&g, &on_cycle, s, &mut seen)
        }
        _ => unreachable!(),
    };
    let inside: HashSet<usize> = hb.vertices.iter().map(|v| v.0).collect();
    let s_b: HashSet<VertexId> = hb.attachments.iter().copied().collect();
    let base = |u: usize| -> Vec<usize> {
        if u >= nb {
            return match split {
                Some((p, q)) if u == bp.0 => vec![p.0, q.0],
                _ => Vec::new(),
            };
        }
        g.neighbors(VertexId(u))
            .map(|w| match split {
                Some((p, q)) if (u == p.0 && w == q) || (u == q.0 && w == p) => bp.0,
                _ => w.0,
            })
            .collect()
    };
    let to_vertices = |p: &[usize]| p.iter().map(|&x| VertexId(x)).collect::<Vec<_>>();
    let mut flow = VertexFlow::default();

    // free endpoints first
    let want = if split.is_some() { 2 } else { 3 };
    let free = flow.paths(
        total,
        |u| if on_cycle[u] { Vec::new() } else { base(u) },
        |v| {
            if s_b.contains(&VertexId(v)) {
                Role::Target(1)
            } else if inside.contains(&v) {
                Role::Free
            } else {
                Role::Blocked
            }
        },
        bp.0,
        want,
    );
    let mut found: Option<(Overlap, Vec<Vec<VertexId>>)> = None;
    'pairs: for p in 0..free.len() {
        for q in 0..free.len() {
            if p == q {
                continue;
            }
            let (y, y2) = (VertexId(*free[p].last().unwrap()), VertexId(*free[q].last().unwrap()));
            let (py, py2) = (pos[&y], pos[&y2]);
            let x3 = att_a.iter().find(|x| strictly_between(pos[x], py, py2));
            let x1 = att_a.iter().find(|x| strictly_between(pos[x], py2, py));
            if let (Some(&x1), Some(&x3)) = (x1, x3) {
                found = Some((
                    Overlap::Skew([x1, y, x3, y2]),
                    vec![to_vertices(&free[p]), to_vertices(&free[q])],
                ));
                break 'pairs;
            }
        }
    }
    if found.is_none() && att_a.len() == 3 && free.len() == 3 {
        let ends: HashSet<VertexId> = free.iter().map(|p| VertexId(*p.last().unwrap())).collect();
        if att_a.iter().all(|x| ends.contains(x)) {
            let paths = att_a
                .iter()
                .map(|x| to_vertices(free.iter().find(|p| *p.last().unwrap() == x.0).unwrap()))
                .collect();
            found = Some((Overlap::Equivalent([att_a[0], att_a[1], att_a[2]]), paths));
        }
    }
    // Branch inside the second piece: a vertex z with disjoint paths to b'
    // and to the cycle, on both sides of a pair of the first piece's
    // attachments, or to all three of them.
    let mut z = bp;
    let mut zb = vec![bp];
    let candidates: Vec<usize> =
        std::iter::once(bp.0).chain(hb.vertices.iter().map(|v| v.0)).collect();
    if found.is_none() {
        'outer: for ii in 0..att_a.len() {
            for jj in ii + 1..att_a.len() {
                let (x1, x3) = (att_a[ii], att_a[jj]);
                let side = |v: usize| strictly_between(pos[&VertexId(v)], pos[&x1], pos[&x3]);
                let has_l = s_b.iter().any(|v| *v != x1 && *v != x3 && side(v.0));
                let has_r = s_b.iter().any(|v| *v != x1 && *v != x3 && !side(v.0));
                if !has_l || !has_r {
                    continue;
                }
                for &src in &candidates {
                    let want = if src == bp.0 { 2 } else { 3 };
                    let paths = flow.paths(
                        total,
                        |u| {
                            if u == lg || u == rg {
                                Vec::new()
                            } else if on_cycle[u] {
                                if u == x1.0 || u == x3.0 {
                                    Vec::new()
                                } else if side(u) {
                                    vec![lg]
                                } else {
                                    vec![rg]
                                }
                            } else {
                                base(u)
                            }
                        },
                        |v| {
                            if v == lg || v == rg || v == bp.0 {
                                Role::Target(1)
                            } else if inside.contains(&v)
                                || (on_cycle[v]
                                    && v != x1.0
                                    && v != x3.0
                                    && s_b.contains(&VertexId(v)))
                            {
                                Role::Free
                            } else {
                                Role::Blocked
                            }
                        },
                        src,
                        want,
                    );
                    if paths.len() < want {
                        continue;
                    }
                    let end = |t: usize| paths.iter().find(|p| *p.last().unwrap() == t).unwrap();
                    let (pl, pr) = (end(lg), end(rg));
                    let ps = vec![to_vertices(&pl[..pl.len() - 1]), to_vertices(&pr[..pr.len() - 1])];
                    let (x2, x4) = (*ps[0].last().unwrap(), *ps[1].last().unwrap());
                    if src != bp.0 {
                        z = VertexId(src);
                        zb = to_vertices(end(bp.0));
                    }
                    found = Some((Overlap::Skew([x1, x2, x3, x4]), ps));
                    break 'outer;
                }
            }
        }
    }
    if found.is_none() && att_a.len() == 3 && att_a.iter().all(|x| s_b.contains(x)) {
        for &src in &candidates {
            let want = if src == bp.0 { 3 } else { 4 };
            let paths = flow.paths(
                total,
                |u| if on_cycle[u] { Vec::new() } else { base(u) },
                |v| {
                    if v == bp.0 || att_a.contains(&VertexId(v)) {
                        Role::Target(1)
                    } else if inside.contains(&v) {
                        Role::Free
                    } else {
                        Role::Blocked
                    }
                },
                src,
                want,
            );
            if paths.len() < want {
                continue;
            }
            let end = |t: usize| paths.iter().find(|p| *p.last().unwrap() == t).unwrap();
            let ps = att_a.iter().map(|x| to_vertices(end(x.0))).collect();
            if src != bp.0 {
                z = VertexId(src);
                zb = to_vertices(end(bp.0));
            }
            found = Some((Overlap::Equivalent([att_a[0], att_a[1], att_a[2]]), ps));
            break;
        }
    }
    let (overlap, paths_b) = found?;
    // a' to z through b'
    let mut t_path = t_path;
    t_path.extend(zb.iter().rev().skip(1));

    let k = cycle.len();
    let arc = |from: VertexId, to: VertexId| -> Vec<VertexId> {
        let (mut i, j) = (pos[&from], pos[&to]);
        let mut p = vec![cycle[i]];
        while i != j {
            i = (i + 1) % k;
            p.push(cycle[i]);
        }
        p
    };
    let mut paths: Vec<Vec<VertexId>>;
    match overlap {
        Overlap::Skew([x1, x2, x3, x4]) => {
            paths = vec![vec![ap, x1], vec![ap, x3]];
            paths.extend(paths_b);
            paths.push(t_path);
            paths.extend([arc(x1, x2), arc(x2, x3), arc(x3, x4), arc(x4, x1)]);
            Some(KuratowskiSubdivision {
                kind: KuratowskiKind::K33,
                branch: vec![ap, x2, x4, z, x1, x3],
                paths,
            })
        }
        Overlap::Equivalent(s) => {
            paths = s.iter().map(|&x| vec![ap, x]).collect();
            paths.extend(paths_b);
            paths.push(t_path);
            paths.extend([arc(s[0], s[1]), arc(s[1], s[2]), arc(s[2], s[0])]);
            Some(KuratowskiSubdivision {
                kind: KuratowskiKind::K5,
                branch: vec![ap, z, s[0], s[1], s[2]],
                paths,
            })
        }
        Overlap::Avoid => None,
    }
}

/// Rewrites a witness found after `t` operations of `seq` into the final
/// graph of `seq`, on the vertices of the graph `seq` was computed for.
/// Pairs that are not edges of the replay after `t` operations are taken as
/// final edges.
pub fn lift_through_sequence(
    k: &KuratowskiSubdivision,
    seq: &ConstructionSequence,
    t: usize,
) -> KuratowskiSubdivision {
    let r = seq.replay_prefix(t).expect("prefix of a valid sequence replays");
    let index = GenealogyIndex::new(&seq.genealogy);
    let g = r.graph();
    let paths = k
        .paths
        .iter()
        .map(|p| {
            let mut out = vec![p[0]];
            for w in p.windows(2) {
                let (u, x) = (w[0], w[1]);
                let e = if g.contains_vertex(u) && g.contains_vertex(x) {
                    g.find_edge(u, x)
                } else {
                    None
                };
                match e {
                    Some(e) => {
                        let label = r.label_of_edge(e);
                        let seg = index.expand(label, u.0, x.0, t);
                        out.extend(seg[1..].iter().map(|&y| VertexId(y)));
                    }
                    None => out.push(x),
                }
            }
            out.iter().map(|v| seq.input_vertex(v.0)).collect()
        })
        .collect();
    KuratowskiSubdivision {
        kind: k.kind,
        branch: k.branch.iter().map(|v| seq.input_vertex(v.0)).collect(),
        paths,
    }
}

/// Rewrites a witness in component `ci` into the block the components were
/// computed from: vertices are mapped and every virtual edge is replaced by
/// a path through the components on its other side.
pub fn expand_virtual(
    k: &KuratowskiSubdivision,
    comps: &[TriconnectedComponent],
    ci: usize,
    block: &Graph,
) -> KuratowskiSubdivision {
    let c = &comps[ci];
    let map = |v: VertexId| c.vertex_map[v.0];
    let paths = k
        .paths
        .iter()
        .map(|p| {
            let mut out = vec![map(p[0])];
            for w in p.windows(2) {
                let e = c.graph.find_edge(w[0], w[1]).expect("witness edge in component");
                match c.origin[e.0] {
                    EdgeOrigin::Real(_) => out.push(map(w[1])),
                    EdgeOrigin::Virtual { partner_component, partner_edge } => {
                        let seg = route_through(
                            comps,
                            partner_component,
                            partner_edge,
                            block,
                            map(w[0]),
                            map(w[1]),
                        );
                        out.extend_from_slice(&seg[1..]);
                    }
                }
            }
            out
        })
        .collect();
    KuratowskiSubdivision { kind: k.kind, branch: k.branch.iter().map(|&v| map(v)).collect(), paths }
}

/// A path from `from` to `to` using real edges of the components reachable
/// from `start` without crossing its virtual edge `skip`.
fn route_through(
    comps: &[TriconnectedComponent],
    start: usize,
    skip: EdgeId,
    block: &Graph,
    from: VertexId,
    to: VertexId,
) -> Vec<VertexId> {
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    let mut stack = vec![(start, skip)];
    while let Some((c, entry)) = stack.pop() {
        for (i, o) in comps[c].origin.iter().enumerate() {
            match *o {
                EdgeOrigin::Real(be) => {
                    let (a, b) = block.endpoints(be).unwrap();
                    adj.entry(a).or_default().push(b);
                    adj.entry(b).or_default().push(a);
                }
                EdgeOrigin::Virtual { partner_component, partner_edge } => {
                    if EdgeId(i) != entry {
                        stack.push((partner_component, partner_edge));
                    }
                }
            }
        }
    }
    let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    parent.insert(from, from);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in adj.get(&u).map(|v| v.as_slice()).unwrap_or(&[]) {
            if w == to || (w != from && !parent.contains_key(&w)) {
                if !parent.contains_key(&w) {
                    parent.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut path = vec![to];
    let mut x = to;
    while x != from {
        x = *parent.get(&x).expect("the other side connects the pair");
        path.push(x);
    }
    path.reverse();
    path
}

/// Converts a K5 subdivision in a triconnected `host` other than K5 into a
/// K3,3 subdivision. K3,3 input is returned unchanged.
pub fn to_k33(
    k: &KuratowskiSubdivision,
    host: &Graph,
) -> Result<KuratowskiSubdivision, KuratowskiError> {
    if k.kind == KuratowskiKind::K33 {
        return Ok(k.clone());
    }
    if host.vertex_count() == 5 {
        return Err(KuratowskiError::HostIsK5);
    }
    let mut in_k: HashSet<VertexId> = HashSet::new();
    for p in &k.paths {
        in_k.extend(p.iter().copied());
    }
    // structure graph: nodes are vertices, edges are host paths
    let mut nodes: Vec<VertexId> = k.branch.clone();
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    if let Some(pi) = k.paths.iter().position(|p| p.len() > 2) {
        let p = &k.paths[pi];
        let (v1, v2) = (p[0], p[p.len() - 1]);
        let interior: HashSet<VertexId> = p[1..p.len() - 1].iter().copied().collect();
        let q = bridge_from(host, &interior, &in_k, &[v1, v2]).ok_or(KuratowskiError::NotFound)?;
        let (u, w) = (q[0], *q.last().unwrap());
        let at = p.iter().position(|&x| x == u).unwrap();
        nodes.push(u);
        for (qi, other) in k.paths.iter().enumerate() {
            if qi != pi {
                match other.iter().position(|&x| x == w) {
                    Some(at2) if at2 > 0 && at2 + 1 < other.len() => {
                        nodes.push(w);
                        edges.push(other[..=at2].to_vec());
                        edges.push(other[at2..].to_vec());
                    }
                    _ => edges.push(other.clone()),
                }
            }
        }
        edges.push(p[..=at].to_vec());
        edges.push(p[at..].to_vec());
        edges.push(q);
    } else {
        let z = host.vertices().find(|v| !in_k.contains(v)).ok_or(KuratowskiError::HostIsK5)?;
        let inside: HashSet<usize> =
            host.vertices().filter(|v| !in_k.contains(v)).map(|v| v.0).collect();
        let nbrs = |u: usize| host.neighbors(VertexId(u)).map(|w| w.0).collect::<Vec<_>>();
        let mut flow = VertexFlow::default();
        let branch: HashSet<usize> = k.branch.iter().map(|v| v.0).collect();
        let fan = flow.paths(
            host.vertex_bound(),
            nbrs,
            |v| {
                if branch.contains(&v) {
                    Role::Target(1)
                } else if inside.contains(&v) {
                    Role::Free
                } else {
                    Role::Blocked
                }
            },
            z.0,
            3,
        );
        if fan.len() < 3 {
            return Err(KuratowskiError::NotFound);
        }
        nodes.push(z);
        edges.extend(k.paths.iter().cloned());
        edges.extend(fan.into_iter().map(|p| p.into_iter().map(VertexId).collect()));
    }
    find_k33(&nodes, &edges).ok_or(KuratowskiError::NotFound)
}

/// Shortest path from `sources` to another vertex of `in_k`, avoiding
/// `forbidden` and with its interior outside `in_k`.
fn bridge_from(
    host: &Graph,
    sources: &HashSet<VertexId>,
    in_k: &HashSet<VertexId>,
    forbidden: &[VertexId],
) -> Option<Vec<VertexId>> {
    let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
    let mut start: Vec<VertexId> = sources.iter().copied().collect();
    start.sort_unstable();
    let mut queue: VecDeque<VertexId> = start.iter().copied().collect();
    for &s in &start {
        parent.insert(s, s);
    }
    while let Some(u) = queue.pop_front() {
        for w in host.neighbors(u) {
            if forbidden.contains(&w) || parent.contains_key(&w) {
                continue;
            }
            parent.insert(w, u);
            if in_k.contains(&w) {
                let mut path = vec![w];
                let mut x = w;
                while parent[&x] != x {
                    x = parent[&x];
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Searches the subsets of structure edges for a K3,3 subdivision.
fn find_k33(nodes: &[VertexId], edges: &[Vec<VertexId>]) -> Option<KuratowskiSubdivision> {
    let idx: HashMap<VertexId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let ends: Vec<(usize, usize)> =
        edges.iter().map(|p| (idx[&p[0]], idx[p.last().unwrap()])).collect();
    let (nn, ne) = (nodes.len(), edges.len());
    for mask in 1u32..(1 << ne) {
        if mask.count_ones() < 9 {
            continue;
        }
        let mut deg = vec![0; nn];
        for (e, &(a, b)) in ends.iter().enumerate() {
            if mask >> e & 1 == 1 {
                deg[a] += 1;
                deg[b] += 1;
            }
        }
        if deg.iter().any(|&d| d == 1 || d > 3) || deg.iter().filter(|&&d| d == 3).count() != 6 {
            continue;
        }
        // chains between degree-3 nodes
        let mut used = 0u32;
        let mut chains: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for s in 0..nn {
            if deg[s] != 3 {
                continue;
            }
            for e in 0..ne {
                if mask >> e & 1 == 0 || used >> e & 1 == 1 {
                    continue;
                }
                let (a, b) = ends[e];
                if a != s && b != s {
                    continue;
                }
                let mut list = vec![e];
                used |= 1 << e;
                let mut at = if a == s { b } else { a };
                while deg[at] == 2 {
                    let next = (0..ne).find(|&f| {
                        mask >> f & 1 == 1 && used >> f & 1 == 0 && (ends[f].0 == at || ends[f].1 == at)
                    })?;
                    used |= 1 << next;
                    list.push(next);
                    at = if ends[next].0 == at { ends[next].1 } else { ends[next].0 };
                }
                chains.push((s, at, list));
            }
        }
        if used != mask || chains.len() != 9 {
            continue;
        }
        let Some(sides) = bipartition(nn, &chains) else { continue };
        let mut branch: Vec<usize> = (0..nn).filter(|&v| deg[v] == 3 && sides[v] == 0).collect();
        branch.extend((0..nn).filter(|&v| deg[v] == 3 && sides[v] == 1));
        if branch.len() != 6 || branch[..3].iter().any(|&v| sides[v] != 0) {
            continue;
        }
        let mut pairs: Vec<(usize, usize)> =
            chains.iter().map(|&(a, b, _)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.len() != 9 {
            continue;
        }
        let paths = chains
            .iter()
            .map(|(s, _, list)| {
                let mut path = vec![nodes[*s]];
                for &e in list {
                    let p = &edges[e];
                    if *path.last().unwrap() == p[0] {
                        path.extend_from_slice(&p[1..]);
                    } else {
                        path.extend(p.iter().rev().skip(1));
                    }
                }
                path
            })
            .collect();
        return Some(KuratowskiSubdivision {
            kind: KuratowskiKind::K33,
            branch: branch.into_iter().map(|v| nodes[v]).collect(),
            paths,
        });
    }
    None
}

fn bipartition(nn: usize, chains: &[(usize, usize, Vec<usize>)]) -> Option<Vec<u8>> {
    let mut side = vec![u8::MAX; nn];
    let start = chains.first()?.0;
    side[start] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b, _) in chains {
            for (x, y) in [(a, b), (b, a)] {
                if side[x] != u8::MAX {
                    if side[y] == u8::MAX {
                        side[y] = 1 - side[x];
                        changed = true;
                    } else if side[y] == side[x] {
                        return None;
                    }
                }
            }
        }
    }
    let zero = chains.iter().flat_map(|c| [c.0, c.1]).filter(|&v| side[v] == 0).collect::<HashSet<_>>();
    (zero.len() == 3).then_some(side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_kuratowski;
    use crate::cseq::compute_sequence;
    use crate::generate::{complete, hypercube};
    use crate::planarity::{apply_op, check_attachments, run_sequence, RunOutcome};

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    fn w5_state() -> PlaneStGraph {
        let mut h = PlaneStGraph::init_k4();
        let op = ConstructionOp::SubdivideConnect { edge: 1, y: 1 };
        let f = check_attachments(&h, &op).unwrap();
        apply_op(&mut h, &op, f).unwrap();
        h
    }

    fn embedded(g: &Graph) -> PlaneStGraph {
        let seq = compute_sequence(g).unwrap();
        match run_sequence(&seq).unwrap() {
            RunOutcome::Embedded(h) => h,
            RunOutcome::Failed(_) => panic!("planar input"),
        }
    }

    fn check(h: &PlaneStGraph, op: ConstructionOp) -> KuratowskiSubdivision {
        assert!(check_attachments(h, &op).is_none());
        let k = extract(h, &op);
        let r = verify_kuratowski(&host_after(h, &op), &k);
        assert!(r.ok, "{r}: {k:?}");
        k
    }

    #[test]
    fn merged_cycles_on_w5() {
        let h = w5_state();
        // hub 1: the rim
        let mut c = merged_face_cycle(&h, Attachment::Vertex(v(1)));
        c.sort_unstable();
        assert_eq!(c, vec![v(0), v(2), v(3), v(4)]);
        // spoke 1-0 (edge 0): faces 1 0 4 and 1 0 3
        let mut c = merged_face_cycle(&h, Attachment::Edge(EdgeId(0)));
        assert_eq!(c.len(), 4);
        c.sort_unstable();
        assert_eq!(c, vec![v(0), v(1), v(3), v(4)]);
    }

    #[test]
    fn merged_cycle_is_a_cycle_of_the_graph() {
        let h = w5_state();
        let g = h.to_graph();
        for a in (0..5).map(|x| Attachment::Vertex(v(x))).chain((0..8).map(|e| Attachment::Edge(EdgeId(e)))) {
            let c = merged_face_cycle(&h, a);
            let k = c.len();
            let set: HashSet<_> = c.iter().collect();
            assert_eq!(set.len(), k);
            for i in 0..k {
                assert!(g.has_edge(c[i], c[(i + 1) % k]));
            }
        }
    }

    #[test]
    fn c_components_of_w5_spoke_cycle() {
        let h = w5_state();
        let g = h.to_graph();
        let cycle = merged_face_cycle(&h, Attachment::Edge(EdgeId(0)));
        let comps = c_components(&g, &cycle);
        // the chord 1-0 and the piece at vertex 2
        assert_eq!(comps.len(), 2);
        let piece = comps.iter().find(|c| !c.vertices.is_empty()).unwrap();
        assert_eq!(piece.vertices, vec![v(2)]);
        assert_eq!(piece.attachments, vec![v(1), v(3), v(4)]);
        assert!(c_components(&g, &[v(0), v(1), v(2)]).len() >= 1);
    }

    #[test]
    fn overlap_classification() {
        let c: Vec<VertexId> = (0..6).map(v).collect();
        assert!(matches!(classify_overlap(&[v(0), v(2)], &[v(1), v(3)], &c), Overlap::Skew(_)));
        assert_eq!(
            classify_overlap(&[v(0), v(2), v(4)], &[v(0), v(2), v(4)], &c),
            Overlap::Equivalent([v(0), v(2), v(4)])
        );
        assert_eq!(classify_overlap(&[v(0), v(1)], &[v(2), v(3)], &c), Overlap::Avoid);
        assert_eq!(classify_overlap(&[v(0), v(2)], &[v(2), v(4)], &c), Overlap::Avoid);
        if let Overlap::Skew([x1, x2, x3, x4]) = classify_overlap(&[v(1), v(3)], &[v(0), v(2)], &c) {
            assert!([x1, x3].iter().all(|x| [v(1), v(3)].contains(x)));
            assert!([x2, x4].iter().all(|x| [v(0), v(2)].contains(x)));
        } else {
            panic!("skew expected");
        }
    }

    /// Brute-force overlap by the definitions, for every pair of subsets of a 6-cycle.
    #[test]
    fn overlap_matches_definitions() {
        let c: Vec<VertexId> = (0..6).map(v).collect();
        let subsets: Vec<Vec<VertexId>> = (1u32..64)
            .filter(|m| m.count_ones() >= 2)
            .map(|m| (0..6).filter(|i| m >> i & 1 == 1).map(v).collect())
            .collect();
        for a in &subsets {
            for b in &subsets {
                let mut skew = false;
                for p in 0..6 {
                    for q in p + 1..6 {
                        for r in q + 1..6 {
                            for s in r + 1..6 {
                                let (x1, x2, x3, x4) = (v(p), v(q), v(r), v(s));
                                skew |= a.contains(&x1) && b.contains(&x2) && a.contains(&x3) && b.contains(&x4);
                                skew |= b.contains(&x1) && a.contains(&x2) && b.contains(&x3) && a.contains(&x4);
                            }
                        }
                    }
                }
                let equiv = a == b && a.len() == 3;
                let got = classify_overlap(a, b, &c);
                let sym = classify_overlap(b, a, &c);
                match got {
                    Overlap::Skew([x1, x2, x3, x4]) => {
                        assert!(skew);
                        assert!(a.contains(&x1) && a.contains(&x3) && b.contains(&x2) && b.contains(&x4));
                        assert!(matches!(sym, Overlap::Skew(_)));
                    }
                    Overlap::Equivalent(_) => assert!(equiv && !skew),
                    Overlap::Avoid => {
                        assert!(!skew && !equiv);
                        assert_eq!(sym, Overlap::Avoid);
                    }
                }
            }
        }
    }

    #[test]
    fn w5_spokes_give_k33() {
        let h = w5_state();
        let k = check(&h, ConstructionOp::DoubleSubdivide { e: 0, f: 3 });
        assert_eq!(k.kind, KuratowskiKind::K33);
    }

    #[test]
    fn bipyramid_apexes_give_k5() {
        // a claw on face 1 2 3 of K4 puts 0 and the new vertex 4 on opposite sides
        let mut h = PlaneStGraph::init_k4();
        let op = ConstructionOp::AddClaw { a: 1, b: 2, c: 3 };
        let f = check_attachments(&h, &op).unwrap();
        apply_op(&mut h, &op, f).unwrap();
        let k = check(&h, ConstructionOp::AddEdge { x: 0, y: 4 });
        assert_eq!(k.kind, KuratowskiKind::K5);
        assert!(verify_kuratowski(&complete(5), &k).ok);
    }

    #[test]
    fn every_failing_operation_on_small_states_extracts() {
        let h = w5_state();
        let (n, m) = (h.vertex_count(), h.edge_count());
        let mut count = 0;
        let mut ops = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                if h.edge_between(v(x), v(y)).is_none() {
                    ops.push(ConstructionOp::AddEdge { x, y });
                }
            }
            for e in 0..m {
                let (a, b) = h.endpoints(EdgeId(e));
                if a.0 != x && b.0 != x {
                    ops.push(ConstructionOp::SubdivideConnect { edge: e, y: x });
                }
            }
            for y in x + 1..n {
                for z in y + 1..n {
                    ops.push(ConstructionOp::AddClaw { a: x, b: y, c: z });
                    ops.push(ConstructionOp::AddClaw { a: z, b: x, c: y });
                }
            }
        }
        for e in 0..m {
            for f in 0..m {
                if e != f {
                    ops.push(ConstructionOp::DoubleSubdivide { e, f });
                }
            }
        }
        for op in ops {
            if check_attachments(&h, &op).is_none() {
                check(&h, op);
                count += 1;
            }
        }
        assert!(count > 10);
    }

    #[test]
    fn cube_claw_uses_the_reduction() {
        let h = embedded(&hypercube(3));
        let n = h.vertex_count();
        let mut found = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (va, vb, vc) = (v(a), v(b), v(c));
                    let pair = |x, y| cofacial(&h, Attachment::Vertex(x), Attachment::Vertex(y));
                    if pair(va, vb) && pair(va, vc) && pair(vb, vc) && h.query_three_vertices(va, vb, vc).is_none() {
                        check(&h, ConstructionOp::AddClaw { a, b, c });
                        found += 1;
                    }
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn k5_to_k33_in_larger_host() {
        let mut g = complete(5);
        let x = g.add_vertex();
        for w in [0, 1, 2] {
            g.add_edge(x, v(w)).unwrap();
        }
        let paths: Vec<Vec<VertexId>> =
            (0..5).flat_map(|i| (i + 1..5).map(move |j| vec![v(i), v(j)])).collect();
        let k = KuratowskiSubdivision { kind: KuratowskiKind::K5, branch: (0..5).map(v).collect(), paths };
        let k33 = to_k33(&k, &g).unwrap();
        assert_eq!(k33.kind, KuratowskiKind::K33);
        let r = verify_kuratowski(&g, &k33);
        assert!(r.ok, "{r}");
        assert_eq!(to_k33(&k33, &g).unwrap(), k33);
        assert_eq!(to_k33(&k, &complete(5)), Err(KuratowskiError::HostIsK5));
    }

    #[test]
    fn k5_to_k33_with_subdivided_path() {
        // K5 with edge 0-1 subdivided by 5, and 5 joined to 2
        let mut g = complete(5);
        let e = g.find_edge(v(0), v(1)).unwrap();
        let s = g.subdivide(e).unwrap();
        g.add_edge(s, v(2)).unwrap();
        let mut paths: Vec<Vec<VertexId>> =
            (0..5).flat_map(|i| (i + 1..5).map(move |j| vec![v(i), v(j)])).collect();
        paths[0] = vec![v(0), s, v(1)];
        let k = KuratowskiSubdivision { kind: KuratowskiKind::K5, branch: (0..5).map(v).collect(), paths };
        assert!(verify_kuratowski(&g, &k).ok);
        let k33 = to_k33(&k, &g).unwrap();
        let r = verify_kuratowski(&g, &k33);
        assert!(r.ok, "{r}");
    }
}
