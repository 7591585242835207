//! Graph generators: named families and seeded random families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cseq::{ConstructionOp, ConstructionSequence, Replay, K4_EDGES};
use crate::graph::{Graph, VertexId};
use crate::planarity::apply_op;
use crate::stgraph::PlaneStGraph;

pub fn k4() -> Graph {
    Graph::from_edges(4, &K4_EDGES)
}

/// Wheel on `n >= 4` vertices: rim `0..n-1`, hub `n-1`.
pub fn wheel(n: usize) -> Graph {
    assert!(n >= 4, "a wheel needs at least four vertices");
    let rim = n - 1;
    let mut edges: Vec<(usize, usize)> = (0..rim).map(|i| (i, (i + 1) % rim)).collect();
    edges.extend((0..rim).map(|i| (i, rim)));
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::from_edges(n, &edges)
}

/// Parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect();
    Graph::from_edges(a + b, &edges)
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges)
}

/// The `d`-dimensional hypercube; vertex ids are the bit strings.
pub fn hypercube(d: usize) -> Graph {
    let n = 1usize << d;
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| (0..d).filter(move |&k| v >> k & 1 == 0).map(move |k| (v, v | 1 << k)))
        .collect();
    Graph::from_edges(n, &edges)
}

pub fn octahedron() -> Graph {
    // antipodal pairs i, i + 3 are the non-edges
    let edges: Vec<(usize, usize)> = (0..6)
        .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
        .filter(|&(i, j)| j != i + 3)
        .collect();
    Graph::from_edges(6, &edges)
}

/// Prism over a `k`-cycle: cycles `0..k` and `k..2k` joined by a matching.
pub fn prism(k: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, (i + 1) % k));
        edges.push((k + i, k + (i + 1) % k));
        edges.push((i, k + i));
    }
    Graph::from_edges(2 * k, &edges)
}

/// Uniform simple graph with `n` vertices and `min(m, n(n-1)/2)` edges.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    pairs.truncate(m);
    pairs.sort_unstable();
    Graph::from_edges(n, &pairs)
}

/// Random triangulation on `n >= 4` vertices by repeatedly splitting a
/// random triangular face of K4 with a new vertex.
pub fn random_triangulation<R: Rng>(rng: &mut R, n: usize) -> Graph {
    assert!(n >= 4, "a triangulation needs at least four vertices");
    let mut g = k4();
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    while g.vertex_count() < n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        let x = g.add_vertex().0;
        for v in [a, b, c] {
            g.add_edge(VertexId(x), VertexId(v)).unwrap();
        }
        faces[i] = [a, b, x];
        faces.push([a, c, x]);
        faces.push([b, c, x]);
    }
    g
}

fn random_op<R: Rng>(rng: &mut R, r: &Replay, kinds: &[char]) -> ConstructionOp {
    let n = r.graph().vertex_bound();
    let m = r.edge_label_count();
    match *kinds.choose(rng).unwrap() {
        'a' => ConstructionOp::AddEdge { x: rng.gen_range(0..n), y: rng.gen_range(0..n) },
        'b' => ConstructionOp::SubdivideConnect { edge: rng.gen_range(0..m), y: rng.gen_range(0..n) },
        'c' => ConstructionOp::DoubleSubdivide { e: rng.gen_range(0..m), f: rng.gen_range(0..m) },
        _ => ConstructionOp::AddClaw {
            a: rng.gen_range(0..n),
            b: rng.gen_range(0..n),
            c: rng.gen_range(0..n),
        },
    }
}

/// Random simple triconnected graph on `n >= 4` vertices, built by random
/// `b`, `c`, `d` operations from K4 followed by about `extra * n` random `a`
/// operations. Returns the graph (on vertex labels) and its canonical
/// construction sequence.
pub fn random_3conn<R: Rng>(rng: &mut R, n: usize, extra: f64) -> (Graph, ConstructionSequence) {
    assert!(n >= 4, "a triconnected graph needs at least four vertices");
    let mut r = Replay::new();
    let mut ops = Vec::new();
    while r.graph().vertex_count() < n {
        let kinds: &[char] =
            if n - r.graph().vertex_count() >= 2 { &['b', 'c', 'd'] } else { &['b', 'd'] };
        let op = random_op(rng, &r, kinds);
        if r.check(&op).is_ok() {
            r.apply(&op).unwrap();
            ops.push(op);
        }
    }
    let want = (extra * n as f64).round() as usize;
    let max_edges = n * (n - 1) / 2;
    let mut added = 0;
    let mut attempts = 0;
    while added < want && r.graph().edge_count() < max_edges && attempts < 50 * want + 100 {
        attempts += 1;
        let op = random_op(rng, &r, &['a']);
        if r.check(&op).is_ok() {
            r.apply(&op).unwrap();
            ops.push(op);
            added += 1;
        }
    }
    let seq = ConstructionSequence {
        ops,
        genealogy: r.genealogy().to_vec(),
        vertex_map: Vec::new(),
        canonical: true,
    };
    (r.into_graph(), seq)
}

/// Random planar simple triconnected graph on `n >= 4` vertices with a
/// canonical construction sequence. Each operation is placed inside a
/// random face of the current embedding, so every prefix stays planar;
/// afterwards about `extra * n` chords are added inside random faces.
pub fn random_planar_3conn<R: Rng>(
    rng: &mut R,
    n: usize,
    extra: f64,
) -> (Graph, ConstructionSequence) {
    assert!(n >= 4, "a triconnected graph needs at least four vertices");
    let mut r = Replay::new();
    let mut h = PlaneStGraph::init_k4();
    let mut ops = Vec::new();
    let mut boundary = Vec::new();
    let mut edges = Vec::new();
    let mut place = |rng: &mut R, r: &mut Replay, h: &mut PlaneStGraph, kinds: &[char]| {
        let f = h.random_face(rng);
        h.face_vertices_and_edges(f, &mut boundary, &mut edges);
        let k = boundary.len();
        let op = match *kinds.choose(rng).unwrap() {
            'a' if k >= 4 => {
                let i = rng.gen_range(0..k);
                let j = (i + rng.gen_range(2..k - 1)) % k;
                ConstructionOp::AddEdge { x: boundary[i].0, y: boundary[j].0 }
            }
            'b' => {
                let i = rng.gen_range(0..k);
                // edges[i] joins boundary[i] and boundary[i + 1]
                let j = (i + rng.gen_range(2..k)) % k;
                ConstructionOp::SubdivideConnect { edge: edges[i].0, y: boundary[j].0 }
            }
            'c' => {
                let i = rng.gen_range(0..k);
                let j = (i + rng.gen_range(1..k)) % k;
                ConstructionOp::DoubleSubdivide { e: edges[i].0, f: edges[j].0 }
            }
            'd' => {
                let mut idx: Vec<usize> = (0..k).collect();
                idx.shuffle(rng);
                ConstructionOp::AddClaw {
                    a: boundary[idx[0]].0,
                    b: boundary[idx[1]].0,
                    c: boundary[idx[2]].0,
                }
            }
            _ => return None,
        };
        if r.check(&op).is_err() {
            return None;
        }
        let created = r.apply(&op).unwrap();
        let placed = apply_op(h, &op, f).expect("attachments share the chosen face");
        debug_assert_eq!(placed, created);
        Some(op)
    };
    while r.graph().vertex_count() < n {
        let kinds: &[char] =
            if n - r.graph().vertex_count() >= 2 { &['b', 'c', 'd'] } else { &['b', 'd'] };
        if let Some(op) = place(rng, &mut r, &mut h, kinds) {
            ops.push(op);
        }
    }
    let want = (extra * n as f64).round() as usize;
    let mut added = 0;
    let mut attempts = 0;
    while added < want && attempts < 50 * want + 100 {
        attempts += 1;
        if let Some(op) = place(rng, &mut r, &mut h, &['a']) {
            ops.push(op);
            added += 1;
        }
    }
    let seq = ConstructionSequence {
        ops,
        genealogy: r.genealogy().to_vec(),
        vertex_map: Vec::new(),
        canonical: true,
    };
    (r.into_graph(), seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::is_triconnected;
    use rand::SeedableRng;

    #[test]
    fn named_counts() {
        assert_eq!((wheel(5).vertex_count(), wheel(5).edge_count()), (5, 8));
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(complete_bipartite(3, 3).edge_count(), 9);
        let p = petersen();
        assert_eq!(p.edge_count(), 15);
        assert!(p.vertices().all(|v| p.degree(v) == 3));
        assert!(p.is_simple());
        let q = hypercube(3);
        assert_eq!((q.vertex_count(), q.edge_count()), (8, 12));
        let o = octahedron();
        assert_eq!((o.vertex_count(), o.edge_count()), (6, 12));
        assert!(o.vertices().all(|v| o.degree(v) == 4));
        assert_eq!(prism(3).edge_count(), 9);
        for g in [k4(), wheel(7), complete(6), petersen(), q, o, prism(5)] {
            assert!(is_triconnected(&g));
        }
    }

    #[test]
    fn random_families() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = random_graph(&mut rng, 10, 20);
        assert_eq!(g.edge_count(), 20);
        assert!(g.is_simple());
        let t = random_triangulation(&mut rng, 30);
        assert_eq!(t.edge_count(), 3 * 30 - 6);
        assert!(is_triconnected(&t));
        for n in [4, 5, 9, 20] {
            let (g, seq) = random_3conn(&mut rng, n, 0.5);
            assert_eq!(g.vertex_count(), n);
            assert!(is_triconnected(&g));
            assert!(seq.is_canonical_order());
            assert_eq!(seq.replay().unwrap().edge_pairs(), g.edge_pairs());
        }
    }

    #[test]
    fn planar_3conn_is_planar_and_replays() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for n in [4, 6, 15, 60] {
            let (g, seq) = random_planar_3conn(&mut rng, n, 0.3);
            assert_eq!(g.vertex_count(), n);
            assert!(g.edge_count() <= 3 * n - 6);
            assert!(is_triconnected(&g));
            assert!(seq.is_canonical_order());
            assert_eq!(seq.replay().unwrap().edge_pairs(), g.edge_pairs());
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = random_3conn(&mut rand_chacha::ChaCha8Rng::seed_from_u64(7), 50, 0.3);
        let b = random_3conn(&mut rand_chacha::ChaCha8Rng::seed_from_u64(7), 50, 0.3);
        assert_eq!(a.0.edge_pairs(), b.0.edge_pairs());
        assert_eq!(a.1, b.1);
    }
}
