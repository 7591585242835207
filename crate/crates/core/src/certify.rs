//! Certificates and their verifiers, a construction-sequence validator and a
//! brute-force planarity oracle for small graphs.
//!
//! Nothing here calls into the producers: verifiers only rely on [`Graph`]
//! and, for sequences, on replay and the triconnectivity test.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cseq::ConstructionSequence;
use crate::graph::{Graph, VertexId};

/// Default bound on the number of rotation systems the oracle may try.
pub const ORACLE_BUDGET: u64 = 10_000_000;

/// Rotation system: `rotation[v]` lists the neighbors of `v` in cyclic
/// order. Slots of absent vertices are empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Embedding {
    pub rotation: Vec<Vec<VertexId>>,
}

impl Embedding {
    /// Faces as closed vertex walks.
    pub fn faces(&self) -> Vec<Vec<VertexId>> {
        let tracer = Tracer::new(&self.rotation);
        tracer.faces()
    }

    /// Sorted face lengths.
    pub fn face_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.faces().iter().map(|f| f.len()).collect();
        d.sort_unstable();
        d
    }

    /// The same embedding with every rotation reversed.
    pub fn mirrored(&self) -> Embedding {
        Embedding {
            rotation: self
                .rotation
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KuratowskiKind {
    K5,
    K33,
}

impl fmt::Display for KuratowskiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KuratowskiKind::K5 => write!(f, "K5"),
            KuratowskiKind::K33 => write!(f, "K3,3"),
        }
    }
}

/// Subdivision of K5 or K3,3. For K3,3 the first three branch vertices form
/// one side. Each path is a vertex sequence between two branch vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KuratowskiSubdivision {
    pub kind: KuratowskiKind,
    pub branch: Vec<VertexId>,
    pub paths: Vec<Vec<VertexId>>,
}

impl KuratowskiSubdivision {
    /// Every edge of the witness, as ordered pairs along the paths.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.paths.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Planar(Embedding),
    NonPlanar(KuratowskiSubdivision),
}

impl Certificate {
    pub fn is_planar(&self) -> bool {
        matches!(self, Certificate::Planar(_))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    /// First violated clause when `ok` is false.
    pub reason: Option<String>,
    pub faces: usize,
    pub paths: usize,
}

impl VerificationReport {
    fn fail(reason: impl Into<String>) -> Self {
        VerificationReport { ok: false, reason: Some(reason.into()), ..Default::default() }
    }

    fn pass() -> Self {
        VerificationReport { ok: true, ..Default::default() }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            None => write!(f, "ok ({} faces, {} paths)", self.faces, self.paths),
            Some(r) => write!(f, "failed: {r}"),
        }
    }
}

/// Face tracing over a neighbor-list rotation system.
struct Tracer {
    /// Dart `(u, i)` is `u -> rotation[u][i]`, flattened with `offset`.
    offset: Vec<usize>,
    head: Vec<usize>,
    /// Position of the reverse dart inside its tail's rotation.
    twin_pos: Vec<usize>,
}

impl Tracer {
    fn new(rotation: &[Vec<VertexId>]) -> Self {
        let mut offset = Vec::with_capacity(rotation.len() + 1);
        let mut total = 0;
        for r in rotation {
            offset.push(total);
            total += r.len();
        }
        offset.push(total);
        let mut pos: HashMap<(usize, usize), usize> = HashMap::with_capacity(total);
        let mut head = Vec::with_capacity(total);
        for (u, r) in rotation.iter().enumerate() {
            for (i, w) in r.iter().enumerate() {
                pos.insert((u, w.0), i);
                head.push(w.0);
            }
        }
        let mut twin_pos = vec![usize::MAX; total];
        for (u, r) in rotation.iter().enumerate() {
            for (i, w) in r.iter().enumerate() {
                if let Some(&j) = pos.get(&(w.0, u)) {
                    twin_pos[offset[u] + i] = j;
                }
            }
        }
        Tracer { offset, head, twin_pos }
    }

    fn darts(&self) -> usize {
        self.head.len()
    }

    /// Successor of dart `d` along its face, if the reverse dart exists.
    fn next(&self, d: usize) -> Option<usize> {
        let v = self.head[d];
        let j = self.twin_pos[d];
        if j == usize::MAX {
            return None;
        }
        let deg = self.offset[v + 1] - self.offset[v];
        Some(self.offset[v] + (j + 1) % deg)
    }

    fn tail(&self, d: usize) -> usize {
        self.offset.partition_point(|&o| o <= d) - 1
    }

    fn faces(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.darts()];
        let mut out = Vec::new();
        for s in 0..self.darts() {
            if seen[s] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                face.push(VertexId(self.tail(d)));
                match self.next(d) {
                    Some(n) => d = n,
                    None => break,
                }
            }
            out.push(face);
        }
        out
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Checks a rotation system against the simple graph underlying `g`: each
/// rotation is a permutation of the neighbors, and every connected
/// component satisfies `n - m + f = 2`.
pub fn verify_embedding(g: &Graph, emb: &Embedding) -> VerificationReport {
    let g = g.dedupe_multiedges();
    let nb = g.vertex_bound();
    if emb.rotation.len() > nb {
        return VerificationReport::fail(format!(
            "rotation lists {} vertex slots, the graph has {nb}",
            emb.rotation.len()
        ));
    }
    for v in 0..nb {
        let rot: &[VertexId] = emb.rotation.get(v).map(|r| r.as_slice()).unwrap_or(&[]);
        if !g.contains_vertex(VertexId(v)) {
            if !rot.is_empty() {
                return VerificationReport::fail(format!("vertex {v} is not in the graph"));
            }
            continue;
        }
        let mut got: Vec<usize> = rot.iter().map(|w| w.0).collect();
        let mut want: Vec<usize> = g.neighbors(VertexId(v)).map(|w| w.0).collect();
        got.sort_unstable();
        want.sort_unstable();
        if got != want {
            return VerificationReport::fail(format!(
                "rotation at {v} is not a permutation of its neighbors"
            ));
        }
    }
    let mut rotation = emb.rotation.clone();
    rotation.resize(nb, Vec::new());
    let tracer = Tracer::new(&rotation);
    let faces = tracer.faces();

    let mut dsu = Dsu::new(nb);
    for (_, a, b) in g.edges() {
        dsu.union(a.0, b.0);
    }
    let mut per: HashMap<usize, (i64, i64, i64)> = HashMap::new();
    for v in g.vertices() {
        per.entry(dsu.find(v.0)).or_default().0 += 1;
    }
    for (_, a, _) in g.edges() {
        per.entry(dsu.find(a.0)).or_default().1 += 1;
    }
    for f in &faces {
        per.entry(dsu.find(f[0].0)).or_default().2 += 1;
    }
    for (&root, &(n, m, f)) in &per {
        // an isolated vertex has no darts but bounds one face
        let f = if m == 0 { 1 } else { f };
        if n - m + f != 2 {
            return VerificationReport::fail(format!(
                "component of vertex {root}: n - m + f = {n} - {m} + {f} != 2"
            ));
        }
    }
    VerificationReport { faces: faces.len(), ..VerificationReport::pass() }
}

/// Checks that `k` is a K5 or K3,3 subdivision inside `g`.
pub fn verify_kuratowski(g: &Graph, k: &KuratowskiSubdivision) -> VerificationReport {
    let want_branch = match k.kind {
        KuratowskiKind::K5 => 5,
        KuratowskiKind::K33 => 6,
    };
    if k.branch.len() != want_branch {
        return VerificationReport::fail(format!(
            "{} needs {want_branch} branch vertices, got {}",
            k.kind,
            k.branch.len()
        ));
    }
    let mut slot: HashMap<VertexId, usize> = HashMap::new();
    for (i, &b) in k.branch.iter().enumerate() {
        if !g.contains_vertex(b) {
            return VerificationReport::fail(format!("branch vertex {b} is not in the graph"));
        }
        if slot.insert(b, i).is_some() {
            return VerificationReport::fail(format!("branch vertex {b} is repeated"));
        }
    }
    let want_paths = if k.kind == KuratowskiKind::K5 { 10 } else { 9 };
    if k.paths.len() != want_paths {
        return VerificationReport::fail(format!(
            "{} needs {want_paths} paths, got {}",
            k.kind,
            k.paths.len()
        ));
    }
    let mut interior_used: HashMap<VertexId, usize> = HashMap::new();
    let mut pairs = Vec::new();
    for (pi, p) in k.paths.iter().enumerate() {
        if p.len() < 2 {
            return VerificationReport::fail(format!("path {pi} has fewer than two vertices"));
        }
        let (s, t) = (p[0], p[p.len() - 1]);
        let (Some(&i), Some(&j)) = (slot.get(&s), slot.get(&t)) else {
            return VerificationReport::fail(format!(
                "path {pi} does not run between branch vertices"
            ));
        };
        for w in p.windows(2) {
            if !g.contains_vertex(w[0]) || !g.contains_vertex(w[1]) || !g.has_edge(w[0], w[1]) {
                return VerificationReport::fail(format!(
                    "path {pi} uses the edge {} {} which is not in the graph",
                    w[0].0, w[1].0
                ));
            }
        }
        for &v in &p[1..p.len() - 1] {
            if slot.contains_key(&v) {
                return VerificationReport::fail(format!(
                    "path {pi} passes through branch vertex {v}"
                ));
            }
            if let Some(other) = interior_used.insert(v, pi) {
                return VerificationReport::fail(format!(
                    "paths {other} and {pi} share the vertex {v}"
                ));
            }
        }
        pairs.push((i.min(j), i.max(j)));
    }
    pairs.sort_unstable();
    let expected: Vec<(usize, usize)> = match k.kind {
        KuratowskiKind::K5 => (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect(),
        KuratowskiKind::K33 => (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect(),
    };
    if pairs != expected {
        let missing = expected.iter().find(|p| !pairs.contains(p));
        return VerificationReport::fail(match missing {
            Some(&(i, j)) => format!(
                "no path joins branch vertices {} and {}",
                k.branch[i], k.branch[j]
            ),
            None => "paths do not realize the required pattern".to_string(),
        });
    }
    VerificationReport { paths: k.paths.len(), ..VerificationReport::pass() }
}

/// Replays `seq` checking every prefix for simplicity and triconnectivity,
/// the canonical flag and the genealogy, and compares the result with `g`.
pub fn verify_sequence(g: &Graph, seq: &ConstructionSequence) -> VerificationReport {
    if seq.canonical != seq.is_canonical_order() {
        return VerificationReport::fail(format!(
            "sequence is flagged {} but its operation order says otherwise",
            if seq.canonical { "canonical" } else { "noncanonical" }
        ));
    }
    if let Err(e) = seq.replay_validating() {
        return VerificationReport::fail(e.to_string());
    }
    match seq.replay_prefix(seq.ops.len()) {
        Ok(r) if r.genealogy() != seq.genealogy.as_slice() => {
            return VerificationReport::fail("genealogy does not match the replay");
        }
        Err(e) => return VerificationReport::fail(e.to_string()),
        _ => {}
    }
    let labels = seq.replay().map(|h| h.vertex_count()).unwrap_or(0);
    if !seq.vertex_map.is_empty() && seq.vertex_map.len() != labels {
        return VerificationReport::fail("vertex map does not cover every vertex label");
    }
    let mut mapped: Vec<usize> = (0..labels).map(|l| seq.input_vertex(l).0).collect();
    mapped.sort_unstable();
    let verts: Vec<usize> = g.vertices().map(|v| v.0).collect();
    if mapped != verts {
        return VerificationReport::fail("final graph has a different vertex set");
    }
    match seq.replay_on_input(g.vertex_bound()) {
        Ok(h) if h.edge_pairs() == g.edge_pairs() => VerificationReport::pass(),
        Ok(_) => VerificationReport::fail("final graph differs from the input"),
        Err(e) => VerificationReport::fail(e.to_string()),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{needed} rotation systems exceed the budget of {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("the oracle needs a simple graph")]
    NotSimple,
}

/// Number of rotation systems the oracle enumerates for `g` (saturating),
/// with mirror images dropped at the first vertex of maximum degree.
pub fn oracle_cost(g: &Graph) -> u64 {
    let fixed = g.vertices().max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v.0)));
    let mut cost: u64 = 1;
    for v in g.vertices() {
        for k in 2..g.degree(v) as u64 {
            cost = cost.saturating_mul(k);
        }
        if Some(v) == fixed && g.degree(v) >= 3 {
            cost /= 2;
        }
    }
    cost
}

/// Planarity by exhaustive search over rotation systems.
pub fn oracle_planarity(g: &Graph) -> Result<bool, OracleError> {
    oracle_planarity_with_budget(g, ORACLE_BUDGET)
}

pub fn oracle_planarity_with_budget(g: &Graph, budget: u64) -> Result<bool, OracleError> {
    Ok(oracle_embedding_with_budget(g, budget)?.is_some())
}

/// Some planar rotation system of `g`, by exhaustive search.
pub fn oracle_embedding(g: &Graph) -> Result<Option<Embedding>, OracleError> {
    oracle_embedding_with_budget(g, ORACLE_BUDGET)
}

pub fn oracle_embedding_with_budget(
    g: &Graph,
    budget: u64,
) -> Result<Option<Embedding>, OracleError> {
    if !g.is_simple() {
        return Err(OracleError::NotSimple);
    }
    let needed = oracle_cost(g);
    if needed > budget {
        return Err(OracleError::Budget { needed, budget });
    }
    let nb = g.vertex_bound();
    let adj: Vec<Vec<usize>> = (0..nb)
        .map(|v| {
            if g.contains_vertex(VertexId(v)) {
                g.neighbors(VertexId(v)).map(|w| w.0).collect()
            } else {
                Vec::new()
            }
        })
        .collect();

    // Faces a genus-0 embedding has: m - n + 2 per component with edges.
    let mut dsu = Dsu::new(nb);
    for (_, a, b) in g.edges() {
        dsu.union(a.0, b.0);
    }
    let mut roots: Vec<usize> =
        g.vertices().filter(|&v| g.degree(v) > 0).map(|v| dsu.find(v.0)).collect();
    roots.sort_unstable();
    roots.dedup();
    let active = g.vertices().filter(|&v| g.degree(v) > 0).count();
    let target = g.edge_count() + 2 * roots.len() - active;

    // Cyclic orders per vertex as successor tables over adjacency slots.
    let fixed = g.vertices().max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v.0)));
    let choices: Vec<Vec<Vec<usize>>> = (0..nb)
        .map(|v| {
            let d = adj[v].len();
            if d == 0 {
                return vec![Vec::new()];
            }
            let mut rest: Vec<usize> = (1..d).collect();
            let mut orders = Vec::new();
            // mirror images have equal face counts; drop them at one vertex
            let halve = Some(VertexId(v)) == fixed && d >= 3;
            permutations(&mut rest, 0, &mut |p| {
                if !halve || p[0] < p[p.len() - 1] {
                    let mut o = vec![0];
                    o.extend_from_slice(p);
                    orders.push(o);
                }
            });
            orders
                .into_iter()
                .map(|o| {
                    let mut succ = vec![0; d];
                    for i in 0..d {
                        succ[o[i]] = o[(i + 1) % d];
                    }
                    succ
                })
                .collect()
        })
        .collect();

    let mut offset = vec![0; nb + 1];
    for v in 0..nb {
        offset[v + 1] = offset[v] + adj[v].len();
    }
    let darts = offset[nb];
    let mut head = vec![0; darts];
    let mut twin_slot = vec![0; darts];
    for u in 0..nb {
        for (i, &w) in adj[u].iter().enumerate() {
            head[offset[u] + i] = w;
            twin_slot[offset[u] + i] = adj[w].iter().position(|&x| x == u).unwrap();
        }
    }

    let mut pick = vec![0usize; nb];
    let mut seen = vec![false; darts];
    loop {
        seen.iter_mut().for_each(|s| *s = false);
        let mut faces = 0;
        for s in 0..darts {
            if seen[s] {
                continue;
            }
            faces += 1;
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                let v = head[d];
                d = offset[v] + choices[v][pick[v]][twin_slot[d]];
            }
        }
        if faces == target {
            let rotation = (0..nb)
                .map(|v| {
                    let mut r = Vec::with_capacity(adj[v].len());
                    if !adj[v].is_empty() {
                        let mut i = 0;
                        loop {
                            r.push(VertexId(adj[v][i]));
                            i = choices[v][pick[v]][i];
                            if i == 0 {
                                break;
                            }
                        }
                    }
                    r
                })
                .collect();
            return Ok(Some(Embedding { rotation }));
        }
        // odometer step
        let mut v = 0;
        loop {
            if v == nb {
                return Ok(None);
            }
            pick[v] += 1;
            if pick[v] < choices[v].len() {
                break;
            }
            pick[v] = 0;
            v += 1;
        }
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}
