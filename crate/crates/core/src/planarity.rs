//! The incremental test on a simple triconnected graph and the full
//! pipeline: decompose, test every triconnected component, merge the
//! embeddings or lift a Kuratowski subdivision back to the input.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::certify::{Certificate, Embedding, KuratowskiSubdivision};
use crate::cseq::{compute_sequence, ConstructionOp, ConstructionSequence, Created, CseqError};
use crate::decomposition::{
    biconnected_components, triconnected_components, Block, ComponentKind, EdgeOrigin,
    TriconnectedComponent,
};
use crate::graph::{bucket_pass, EdgeId, Graph, VertexId};
use crate::kuratowski;
use crate::stgraph::{FaceId, PlaneStGraph, SmallTracker, StError};

/// A face of `h` containing every attachment of `op`. Vertex and edge ids
/// of `h` must equal the labels used by `op`.
pub fn check_attachments(h: &PlaneStGraph, op: &ConstructionOp) -> Option<FaceId> {
    match *op {
        ConstructionOp::AddEdge { x, y } => {
            let (x, y) = (VertexId(x), VertexId(y));
            match h.query_vertex_vertex(x, y) {
                Ok(f) => f,
                Err(_) => h.query_vertex_vertex_slow(x, y),
            }
        }
        ConstructionOp::SubdivideConnect { edge, y } => {
            h.query_vertex_edge(VertexId(y), EdgeId(edge))
        }
        ConstructionOp::DoubleSubdivide { e, f } => h.query_edge_edge(EdgeId(e), EdgeId(f)),
        ConstructionOp::AddClaw { a, b, c } => {
            h.query_three_vertices(VertexId(a), VertexId(b), VertexId(c))
        }
    }
}

/// The face among `x`'s left and right faces that contains `y`.
fn side_with(h: &PlaneStGraph, x: VertexId, y: VertexId) -> Result<FaceId, StError> {
    [h.left_face(x), h.right_face(x)]
        .into_iter()
        .flatten()
        .find(|&f| h.on_face(y, f))
        .ok_or(StError::NotOnFace(y, h.left_face(x).unwrap_or(0)))
}

/// Applies `op` inside face `f`. Returns the created ids, which agree with
/// the labels a replay assigns.
pub fn apply_op(
    h: &mut PlaneStGraph,
    op: &ConstructionOp,
    f: FaceId,
) -> Result<Created, StError> {
    let mut created = Created::default();
    match *op {
        ConstructionOp::AddEdge { x, y } => {
            created.edges.push(h.insert_edge(VertexId(x), VertexId(y), f)?.0);
        }
        ConstructionOp::SubdivideConnect { edge, y } => {
            let (x, half) = h.subdivide_edge(EdgeId(edge))?;
            let e = h.insert_edge(x, VertexId(y), f)?;
            created.vertices.push(x.0);
            created.edges.extend([half.0, e.0]);
        }
        ConstructionOp::DoubleSubdivide { e, f: g } => {
            let (x, hx) = h.subdivide_edge(EdgeId(e))?;
            let (y, hy) = h.subdivide_edge(EdgeId(g))?;
            let xy = h.insert_edge(x, y, f)?;
            created.vertices.extend([x.0, y.0]);
            created.edges.extend([hx.0, hy.0, xy.0]);
        }
        ConstructionOp::AddClaw { a, b, c } => {
            // the half at min(a, b) keeps the id of the inserted edge
            let ab = h.insert_edge(VertexId(a), VertexId(b), f)?;
            let (x, half) = h.subdivide_edge(ab)?;
            let g = side_with(h, x, VertexId(c))?;
            let xc = h.insert_edge(x, VertexId(c), g)?;
            created.vertices.push(x.0);
            created.edges.extend([ab.0, half.0, xc.0]);
        }
    }
    Ok(created)
}

/// State at the first operation whose attachments share no face.
#[derive(Clone, Debug)]
pub struct Failure {
    /// Embedding before the failing operation.
    pub state: PlaneStGraph,
    pub op: ConstructionOp,
    /// Number of operations after which a replay contains every edge of
    /// the state plus the failing operation, except edges added in the
    /// trailing block (which are never subdivided).
    pub lift_time: usize,
}

#[derive(Clone, Debug)]
pub enum RunOutcome {
    Embedded(PlaneStGraph),
    Failed(Failure),
}

/// Replays `seq` on the plane st-graph, starting from K4. The trailing
/// block of edge additions is processed in lexicographic order, taking
/// endpoints with few pole faces first.
pub fn run_sequence(seq: &ConstructionSequence) -> Result<RunOutcome, StError> {
    let mut h = PlaneStGraph::init_k4();
    let start = seq.trailing_add_edge_start();
    for (i, op) in seq.ops[..start].iter().enumerate() {
        let f = match op {
            ConstructionOp::AddEdge { x, y } => {
                h.query_vertex_vertex_slow(VertexId(*x), VertexId(*y))
            }
            _ => check_attachments(&h, op),
        };
        match f {
            Some(f) => {
                apply_op(&mut h, op, f)?;
            }
            None => {
                return Ok(RunOutcome::Failed(Failure { state: h, op: *op, lift_time: i + 1 }))
            }
        }
    }

    let keys: Vec<(usize, usize)> = seq.ops[start..]
        .iter()
        .map(|op| match *op {
            ConstructionOp::AddEdge { x, y } => (x.min(y), x.max(y)),
            _ => unreachable!("trailing block holds edge additions only"),
        })
        .collect();
    let bound = h.vertex_count();
    let sorted = bucket_pass(&bucket_pass(&keys, bound, |k| k.1), bound, |k| k.0);
    let pending: Vec<(VertexId, VertexId)> =
        sorted.iter().map(|&(a, b)| (VertexId(a), VertexId(b))).collect();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); bound];
    for (i, &(a, b)) in pending.iter().enumerate().rev() {
        at[a.0].push(i);
        at[b.0].push(i);
    }
    let mut done = vec![false; pending.len()];
    let mut tracker = SmallTracker::new(&h, &pending);
    let mut cursor = 0;
    let mut left = pending.len();
    while left > 0 {
        let (idx, face) = match tracker.peek(&h) {
            Some(v) => {
                let idx = loop {
                    let i = at[v.0].pop().expect("pending count matches the lists");
                    if !done[i] {
                        break i;
                    }
                };
                let (a, b) = pending[idx];
                let w = if a == v { b } else { a };
                (idx, h.query_vertex_vertex(v, w)?)
            }
            None => {
                while done[cursor] {
                    cursor += 1;
                }
                let (a, b) = pending[cursor];
                (cursor, h.query_vertex_vertex_slow(a, b))
            }
        };
        let (a, b) = pending[idx];
        let Some(f) = face else {
            return Ok(RunOutcome::Failed(Failure {
                state: h,
                op: ConstructionOp::AddEdge { x: a.0, y: b.0 },
                lift_time: start,
            }));
        };
        let (s, t) = (h.face(f).source, h.face(f).sink);
        h.insert_edge(a, b, f)?;
        done[idx] = true;
        left -= 1;
        tracker.done(a, b);
        for v in [s, t, a, b] {
            tracker.refresh(&h, v);
        }
    }
    Ok(RunOutcome::Embedded(h))
}

/// Rotation system of an embedded state, on the vertices of the graph the
/// sequence was computed for.
pub fn embedding_of(h: &PlaneStGraph, seq: &ConstructionSequence) -> Embedding {
    let bound = (0..h.vertex_count()).map(|l| seq.input_vertex(l).0 + 1).max().unwrap_or(0);
    let mut rotation = vec![Vec::new(); bound];
    for l in 0..h.vertex_count() {
        rotation[seq.input_vertex(l).0] =
            h.rotation(VertexId(l)).into_iter().map(|w| seq.input_vertex(w.0)).collect();
    }
    Embedding { rotation }
}

/// Runs the test for a given sequence of `g`.
pub fn test_with_sequence(seq: &ConstructionSequence) -> Certificate {
    match run_sequence(seq).expect("operations of a valid sequence apply to the embedding") {
        RunOutcome::Embedded(h) => Certificate::Planar(embedding_of(&h, seq)),
        RunOutcome::Failed(fail) => {
            let k = kuratowski::extract(&fail.state, &fail.op);
            Certificate::NonPlanar(kuratowski::lift_through_sequence(&k, seq, fail.lift_time))
        }
    }
}

/// Tests a simple triconnected graph on at least four vertices.
pub fn test_component(g: &Graph) -> Result<Certificate, CseqError> {
    let seq = compute_sequence(g)?;
    Ok(test_with_sequence(&seq))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Worker threads for testing components; 1 runs inline.
    pub jobs: usize,
    /// Convert K5 witnesses to K3,3 where the component allows it.
    pub k33: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { jobs: 1, k33: false }
    }
}

/// Tests any graph. Embeddings describe the underlying simple graph.
pub fn test_planarity(g: &Graph) -> Certificate {
    test_planarity_with(g, &Options::default())
}

pub fn test_planarity_with(g: &Graph, opts: &Options) -> Certificate {
    if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| pipeline(g, opts))
    } else {
        pipeline(g, opts)
    }
}

/// Per component: its rotation as local edge ids, or a witness on local vertices.
type ComponentResult = Result<Vec<Vec<EdgeId>>, KuratowskiSubdivision>;

fn pipeline(g: &Graph, opts: &Options) -> Certificate {
    let d = g.dedupe_multiedges();
    let blocks = biconnected_components(&d);
    let mut rotation = vec![Vec::new(); d.vertex_bound()];
    for block in &blocks.blocks {
        if block.graph.edge_count() < 3 {
            for (_, a, b) in block.graph.edges() {
                let (ia, ib) = (block.vertex_map[a.0], block.vertex_map[b.0]);
                rotation[ia.0].push(ib);
                rotation[ib.0].push(ia);
            }
            continue;
        }
        let comps = triconnected_components(&block.graph)
            .expect("blocks are simple, biconnected and have at least three edges");
        let results: Vec<ComponentResult> = if opts.jobs > 1 {
            comps.par_iter().map(|c| component_rotation(c, opts)).collect()
        } else {
            comps.iter().map(|c| component_rotation(c, opts)).collect()
        };
        let mut rots = Vec::with_capacity(comps.len());
        for (ci, r) in results.into_iter().enumerate() {
            match r {
                Ok(rot) => rots.push(rot),
                Err(k) => {
                    let k = kuratowski::expand_virtual(&k, &comps, ci, &block.graph);
                    return Certificate::NonPlanar(map_witness(&k, &block.vertex_map));
                }
            }
        }
        for (v, list) in merge_block(block, &comps, &rots) {
            rotation[v.0].extend(list);
        }
    }
    Certificate::Planar(Embedding { rotation })
}

fn map_witness(k: &KuratowskiSubdivision, map: &[VertexId]) -> KuratowskiSubdivision {
    KuratowskiSubdivision {
        kind: k.kind,
        branch: k.branch.iter().map(|v| map[v.0]).collect(),
        paths: k.paths.iter().map(|p| p.iter().map(|v| map[v.0]).collect()).collect(),
    }
}

fn component_rotation(c: &TriconnectedComponent, opts: &Options) -> ComponentResult {
    let n = c.graph.vertex_bound();
    match c.kind {
        ComponentKind::Polygon => {
            Ok((0..n).map(|v| c.graph.incident(VertexId(v)).to_vec()).collect())
        }
        ComponentKind::Bond => {
            let mut rot: Vec<Vec<EdgeId>> =
                (0..n).map(|v| c.graph.incident(VertexId(v)).to_vec()).collect();
            rot[1].reverse();
            Ok(rot)
        }
        ComponentKind::Triconnected => {
            match test_component(&c.graph).expect("triconnected components are triconnected") {
                Certificate::Planar(emb) => Ok((0..n)
                    .map(|v| {
                        emb.rotation[v]
                            .iter()
                            .map(|&w| c.graph.find_edge(VertexId(v), w).unwrap())
                            .collect()
                    })
                    .collect()),
                Certificate::NonPlanar(k) if opts.k33 => {
                    Err(kuratowski::to_k33(&k, &c.graph).unwrap_or(k))
                }
                Certificate::NonPlanar(k) => Err(k),
            }
        }
    }
}

/// Splices the component rotations of one block along their virtual edge
/// pairs. Returns input vertex -> neighbors in rotation order.
fn merge_block(
    block: &Block,
    comps: &[TriconnectedComponent],
    rots: &[Vec<Vec<EdgeId>>],
) -> Vec<(VertexId, Vec<VertexId>)> {
    let nb = block.graph.vertex_bound();
    let local: Vec<HashMap<VertexId, VertexId>> = comps
        .iter()
        .map(|c| c.vertex_map.iter().enumerate().map(|(i, &v)| (v, VertexId(i))).collect())
        .collect();
    // handles are (component, local edge)
    let mut lists: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); nb];
    for (v, rot) in rots[0].iter().enumerate() {
        lists[comps[0].vertex_map[v].0] = rot.iter().map(|&e| (0, e)).collect();
    }
    let mut visited = vec![false; comps.len()];
    visited[0] = true;
    let mut queue = vec![0];
    while let Some(c) = queue.pop() {
        for e in comps[c].virtual_edges() {
            let EdgeOrigin::Virtual { partner_component: d, partner_edge: pe } =
                comps[c].origin[e.0]
            else {
                unreachable!()
            };
            if visited[d] {
                continue;
            }
            visited[d] = true;
            queue.push(d);
            let (u, w) = comps[c].graph.endpoints(e).unwrap();
            let (du, dw) = comps[d].graph.endpoints(pe).unwrap();
            // other vertices of d appear in no component seen so far
            for (lv, rot) in rots[d].iter().enumerate() {
                if lv != du.0 && lv != dw.0 {
                    lists[comps[d].vertex_map[lv].0] = rot.iter().map(|&x| (d, x)).collect();
                }
            }
            for lv in [u, w] {
                let bv = comps[c].vertex_map[lv.0];
                let dv = local[d][&bv];
                let rot = &rots[d][dv.0];
                let at = rot.iter().position(|&x| x == pe).expect("virtual edge in rotation");
                let k = rot.len();
                let insert: Vec<(usize, EdgeId)> =
                    (1..k).map(|i| (d, rot[(at + i) % k])).collect();
                let list = &mut lists[bv.0];
                let pos = list.iter().position(|&h| h == (c, e)).expect("handle present");
                list.splice(pos..=pos, insert);
            }
        }
    }
    lists
        .into_iter()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(v, l)| {
            let nbrs = l
                .into_iter()
                .map(|(c, e)| match comps[c].origin[e.0] {
                    EdgeOrigin::Real(be) => {
                        block.vertex_map[block.graph.opposite(be, VertexId(v)).unwrap().0]
                    }
                    EdgeOrigin::Virtual { .. } => unreachable!("virtual edges are spliced out"),
                })
                .collect();
            (block.vertex_map[v], nbrs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{verify_embedding, verify_kuratowski, KuratowskiKind};
    use crate::cseq::Replay;
    use crate::decomposition::is_triconnected;
    use crate::generate::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    /// K4 plus the W5 op: subdivide edge 1 (0-2) and join the new vertex to 1.
    fn w5_state() -> PlaneStGraph {
        let mut h = PlaneStGraph::init_k4();
        let op = ConstructionOp::SubdivideConnect { edge: 1, y: 1 };
        let f = check_attachments(&h, &op).unwrap();
        apply_op(&mut h, &op, f).unwrap();
        h
    }

    fn assert_planar(g: &Graph, c: &Certificate) -> Embedding {
        match c {
            Certificate::Planar(e) => {
                let r = verify_embedding(g, e);
                assert!(r.ok, "{r}");
                e.clone()
            }
            Certificate::NonPlanar(_) => panic!("expected planar"),
        }
    }

    fn assert_nonplanar(g: &Graph, c: &Certificate) -> KuratowskiSubdivision {
        match c {
            Certificate::NonPlanar(k) => {
                let r = verify_kuratowski(g, k);
                assert!(r.ok, "{r}");
                k.clone()
            }
            Certificate::Planar(_) => panic!("expected nonplanar"),
        }
    }

    #[test]
    fn k4_claw_face_is_found() {
        let h = PlaneStGraph::init_k4();
        let op = ConstructionOp::AddClaw { a: 1, b: 2, c: 3 };
        let f = check_attachments(&h, &op).unwrap();
        for x in [1, 2, 3] {
            assert!(h.on_face(v(x), f));
        }
    }

    #[test]
    fn w5_double_subdivide_queries() {
        let h = w5_state();
        // hub 1, rim 0 4 2 3; rim edges 0-3 (id 2) and 2-3 (id 5) share the outer face
        assert!(check_attachments(&h, &ConstructionOp::DoubleSubdivide { e: 2, f: 5 }).is_some());
        // spokes 1-0 (id 0) and 1-2 (id 3) are not on a common face
        let spoke = ConstructionOp::DoubleSubdivide { e: 0, f: 3 };
        assert!(check_attachments(&h, &spoke).is_none());
    }

    #[test]
    fn claw_on_k4_gives_bipyramid() {
        let mut h = PlaneStGraph::init_k4();
        let op = ConstructionOp::AddClaw { a: 1, b: 2, c: 3 };
        let f = check_attachments(&h, &op).unwrap();
        let created = apply_op(&mut h, &op, f).unwrap();
        let mut r = Replay::new();
        assert_eq!(r.apply(&op).unwrap(), created);
        assert_eq!((h.vertex_count(), h.edge_count(), h.face_count()), (5, 9, 6));
        h.audit().unwrap();
        assert!(h.to_graph().same_structure(r.graph()));
    }

    #[test]
    fn claw_with_reversed_pair_keeps_labels() {
        let mut h = PlaneStGraph::init_k4();
        let op = ConstructionOp::AddClaw { a: 3, b: 1, c: 2 };
        let f = check_attachments(&h, &op).unwrap();
        let created = apply_op(&mut h, &op, f).unwrap();
        let mut r = Replay::new();
        assert_eq!(r.apply(&op).unwrap(), created);
        for e in 0..h.edge_count() {
            let (a, b) = h.endpoints(EdgeId(e));
            let (p, q) = r.edge_ends(e).unwrap();
            assert_eq!((a.0.min(b.0), a.0.max(b.0)), (p.min(q), p.max(q)));
        }
    }

    #[test]
    fn claw_on_adjacent_pair_leaves_simple_state() {
        let mut h = PlaneStGraph::init_k4();
        // 0 and 1 are adjacent; face 0 1 2 holds all three
        let op = ConstructionOp::AddClaw { a: 0, b: 1, c: 2 };
        let f = check_attachments(&h, &op).unwrap();
        apply_op(&mut h, &op, f).unwrap();
        h.audit().unwrap();
        assert!(h.to_graph().is_simple());
        assert!(is_triconnected(&h.to_graph()));
    }

    #[test]
    fn named_graphs() {
        let g = k4();
        let e = assert_planar(&g, &test_planarity(&g));
        assert_eq!(e.faces().len(), 4);
        let g = octahedron();
        let e = assert_planar(&g, &test_planarity(&g));
        assert_eq!(e.faces().len(), 8);
        let g = complete(5);
        assert_nonplanar(&g, &test_planarity(&g));
        let g = complete_bipartite(3, 3);
        let k = assert_nonplanar(&g, &test_planarity(&g));
        assert_eq!(k.kind, KuratowskiKind::K33);
        let g = petersen();
        let k = assert_nonplanar(&g, &test_planarity(&g));
        assert_eq!(k.kind, KuratowskiKind::K33);
    }

    #[test]
    fn trees_and_small_graphs() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]);
        assert_planar(&g, &test_planarity(&g));
        let g = Graph::with_vertices(3);
        assert_planar(&g, &test_planarity(&g));
        let g = Graph::new();
        assert_planar(&g, &test_planarity(&g));
    }

    #[test]
    fn k5_minus_edge_is_planar() {
        let mut g = complete(5);
        let e = g.find_edge(v(0), v(1)).unwrap();
        g.remove_edge(e).unwrap();
        assert_planar(&g, &test_planarity(&g));
    }

    #[test]
    fn diamond_and_two_k4_blocks() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]);
        let e = assert_planar(&g, &test_planarity(&g));
        assert_eq!(e.faces().len(), 3);
        let mut g = complete(4);
        for _ in 0..3 {
            g.add_vertex();
        }
        for (a, b) in [(3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)] {
            g.add_edge(v(a), v(b)).unwrap();
        }
        let e = assert_planar(&g, &test_planarity(&g));
        assert_eq!(e.faces().len(), 7);
    }

    #[test]
    fn two_k5_sharing_a_vertex() {
        let mut g = complete(5);
        for _ in 0..4 {
            g.add_vertex();
        }
        let second = [4, 5, 6, 7, 8];
        for i in 0..5 {
            for j in i + 1..5 {
                g.add_edge(v(second[i]), v(second[j])).unwrap();
            }
        }
        let k = assert_nonplanar(&g, &test_planarity(&g));
        let block_of = |x: VertexId| x.0 <= 4;
        let first = block_of(k.branch[0]) && k.branch[0].0 != 4;
        for p in &k.paths {
            for &x in p {
                if x.0 != 4 {
                    assert_eq!(block_of(x), first);
                }
            }
        }
    }

    #[test]
    fn multigraph_input_is_deduped() {
        let mut g = complete(4);
        g.add_edge(v(0), v(1)).unwrap();
        g.add_edge(v(2), v(2)).unwrap();
        assert_planar(&g, &test_planarity(&g));
    }

    #[test]
    fn parallel_jobs_give_the_same_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 30, 60);
            let a = test_planarity(&g);
            let b = test_planarity_with(&g, &Options { jobs: 3, k33: false });
            assert_eq!(a, b);
        }
    }

    #[test]
    fn random_planar_graphs_embed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [5, 8, 20, 60] {
            let (g, seq) = random_planar_3conn(&mut rng, n, 0.5);
            let e = assert_planar(&g, &test_with_sequence(&seq));
            assert_eq!(e.faces().len(), g.edge_count() + 2 - g.vertex_count());
            assert_planar(&g, &test_planarity(&g));
        }
        for n in [10, 50, 200] {
            let g = random_triangulation(&mut rng, n);
            assert_planar(&g, &test_planarity(&g));
        }
    }

    #[test]
    fn random_graphs_certify_both_ways() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (mut planar, mut nonplanar) = (0, 0);
        for i in 0..200 {
            let n = 5 + i % 20;
            let g = random_graph(&mut rng, n, n + i % (2 * n));
            match test_planarity(&g) {
                c @ Certificate::Planar(_) => {
                    assert_planar(&g, &c);
                    planar += 1;
                }
                c => {
                    assert_nonplanar(&g, &c);
                    nonplanar += 1;
                }
            }
        }
        assert!(planar > 20 && nonplanar > 20, "{planar} {nonplanar}");
    }

    #[test]
    fn random_triconnected_nonplanar_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for i in 0..60 {
            let (g, seq) = random_3conn(&mut rng, 6 + i % 25, 0.8);
            match test_with_sequence(&seq) {
                c @ Certificate::Planar(_) => {
                    assert_planar(&g, &c);
                }
                c => {
                    assert_nonplanar(&g, &c);
                }
            }
        }
    }

    #[test]
    fn k33_option_converts_k5_witnesses() {
        // K5 with one edge subdivided is triconnected? no: use K5 plus a vertex on three branches
        let mut g = complete(5);
        let x = g.add_vertex();
        for w in [0, 1, 2] {
            g.add_edge(x, v(w)).unwrap();
        }
        let c = test_planarity_with(&g, &Options { jobs: 1, k33: true });
        let k = assert_nonplanar(&g, &c);
        assert_eq!(k.kind, KuratowskiKind::K33);
    }

    #[test]
    fn planar_faces_match_oracle_on_small_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut checked = 0;
        for _ in 0..30 {
            let (g, seq) = random_planar_3conn(&mut rng, 7, 0.4);
            let e = assert_planar(&g, &test_with_sequence(&seq));
            if let Ok(o) = crate::certify::oracle_embedding(&g) {
                assert_eq!(e.face_degrees(), o.unwrap().face_degrees());
                checked += 1;
            }
        }
        assert!(checked > 10);
    }
}
