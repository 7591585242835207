//! Biconnected and triconnected components.
//!
//! Triconnected components are produced by recursive splitting at the
//! lexicographically smallest separation pair followed by merging of
//! adjacent bonds and adjacent polygons. This is quadratic or worse; the
//! [`reassemble`] round trip is the correctness check for it.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("input graph is not biconnected")]
    NotBiconnected,
    #[error("input graph is not simple")]
    NotSimple,
    #[error("input graph has fewer than three edges")]
    TooSmall,
    #[error("{0} {1} is not a separation pair")]
    NotSeparating(VertexId, VertexId),
    #[error("virtual edge {edge} of component {component} has no matching partner")]
    DanglingVirtual { component: usize, edge: EdgeId },
}

/// A maximal biconnected subgraph (or a bridge), with dense local ids.
#[derive(Clone, Debug)]
pub struct Block {
    pub graph: Graph,
    /// Local vertex -> input vertex.
    pub vertex_map: Vec<VertexId>,
    /// Local edge -> input edge.
    pub edge_map: Vec<EdgeId>,
}

#[derive(Clone, Debug, Default)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    /// Vertices without incident edges.
    pub isolated: Vec<VertexId>,
}

/// Splits `g` into blocks by the lowpoint DFS. Self-loops are ignored.
pub fn biconnected_components(g: &Graph) -> BlockDecomposition {
    let nb = g.vertex_bound();
    let mut disc = vec![usize::MAX; nb];
    let mut low = vec![0usize; nb];
    let mut time = 0;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut blocks_edges: Vec<Vec<EdgeId>> = Vec::new();
    let mut isolated = Vec::new();
    let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = Vec::new();

    for root in g.vertices() {
        if disc[root.0] != usize::MAX {
            continue;
        }
        if g.incident(root).iter().all(|&e| g.opposite(e, root) == Ok(root)) {
            isolated.push(root);
            disc[root.0] = time;
            time += 1;
            continue;
        }
        disc[root.0] = time;
        low[root.0] = time;
        time += 1;
        stack.push((root, None, 0));
        while let Some(&mut (v, pe, ref mut pos)) = stack.last_mut() {
            let inc = g.incident(v);
            if *pos < inc.len() {
                let e = inc[*pos];
                *pos += 1;
                if Some(e) == pe {
                    continue;
                }
                let w = g.opposite(e, v).unwrap();
                if w == v {
                    continue;
                }
                if disc[w.0] == usize::MAX {
                    edge_stack.push(e);
                    disc[w.0] = time;
                    low[w.0] = time;
                    time += 1;
                    stack.push((w, Some(e), 0));
                } else if disc[w.0] < disc[v.0] {
                    edge_stack.push(e);
                    low[v.0] = low[v.0].min(disc[w.0]);
                }
            } else {
                stack.pop();
                if let (Some(&(p, _, _)), Some(tree_edge)) = (stack.last(), pe) {
                    low[p.0] = low[p.0].min(low[v.0]);
                    if low[v.0] >= disc[p.0] {
                        let mut comp = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            comp.push(e);
                            if e == tree_edge {
                                break;
                            }
                        }
                        blocks_edges.push(comp);
                    }
                }
            }
        }
    }

    let blocks = blocks_edges
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable();
            let mut verts: Vec<VertexId> = edges
                .iter()
                .flat_map(|&e| {
                    let (a, b) = g.endpoints(e).unwrap();
                    [a, b]
                })
                .collect();
            verts.sort_unstable();
            verts.dedup();
            let local = local_index(&verts);
            let mut graph = Graph::with_vertices(verts.len());
            for &e in &edges {
                let (a, b) = g.endpoints(e).unwrap();
                graph.add_edge(VertexId(local[&a]), VertexId(local[&b])).unwrap();
            }
            Block { graph, vertex_map: verts, edge_map: edges }
        })
        .collect();
    BlockDecomposition { blocks, isolated }
}

fn local_index(verts: &[VertexId]) -> BTreeMap<VertexId, usize> {
    verts.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeparationPair(pub VertexId, pub VertexId);

/// The lexicographically smallest separation pair of a biconnected graph,
/// or `None` if it is triconnected (or has at most three vertices).
///
/// For each vertex `x` in increasing order, the cut vertices of `g - x`
/// are the partners of `x`; this covers every pair in O(n (n + m)).
pub fn find_separation_pair(g: &Graph) -> Result<Option<SeparationPair>, DecompositionError> {
    if !g.is_biconnected() {
        return Err(DecompositionError::NotBiconnected);
    }
    if g.vertex_count() <= 3 {
        return Ok(None);
    }
    for x in g.vertices() {
        if let Some(&y) = g
            .articulation_points_without(Some(x))
            .iter()
            .find(|&&y| y > x)
        {
            return Ok(Some(SeparationPair(x, y)));
        }
    }
    Ok(None)
}

/// Simple, at least four vertices, connected, no cut vertex, no separation pair.
pub fn is_triconnected(g: &Graph) -> bool {
    g.vertex_count() >= 4
        && g.is_simple()
        && g.is_biconnected()
        && matches!(find_separation_pair(g), Ok(None))
}

/// One side of a split, on the vertex slots of the split graph.
#[derive(Clone, Debug)]
pub struct SplitSide {
    pub graph: Graph,
    /// Side edge -> split-graph edge, `None` for the virtual edge.
    pub origin: Vec<Option<EdgeId>>,
    pub virtual_edge: EdgeId,
}

/// Splits biconnected `g` at `{x, y}`: the second side collects the
/// component of `g - {x, y}` holding the smallest vertex together with its
/// attachment edges, the first side keeps everything else (including a real
/// edge `xy`). Each side receives a virtual edge `xy`; the two are partners.
pub fn split(g: &Graph, pair: SeparationPair) -> Result<(SplitSide, SplitSide), DecompositionError> {
    let SeparationPair(x, y) = pair;
    let comps = g.components_without(&[x, y]);
    if x == y || comps.len() < 2 || !g.contains_vertex(x) || !g.contains_vertex(y) {
        return Err(DecompositionError::NotSeparating(x, y));
    }
    let mut in_second = vec![false; g.vertex_bound()];
    for &v in &comps[0] {
        in_second[v.0] = true;
    }
    let mut sides = [(g.empty_like(), Vec::new()), (g.empty_like(), Vec::new())];
    for (e, a, b) in g.edges() {
        let second = in_second[a.0] || in_second[b.0];
        let (graph, origin) = &mut sides[second as usize];
        graph.add_edge(a, b).unwrap();
        origin.push(Some(e));
    }
    let mut out = sides.map(|(mut graph, mut origin)| {
        let used: Vec<bool> = (0..graph.vertex_bound())
            .map(|i| graph.degree(VertexId(i)) > 0 || i == x.0 || i == y.0)
            .collect();
        for (i, u) in used.iter().enumerate() {
            if !u && graph.contains_vertex(VertexId(i)) {
                graph.remove_vertex(VertexId(i)).unwrap();
            }
        }
        let virtual_edge = graph.add_edge(x, y).unwrap();
        origin.push(None);
        SplitSide { graph, origin, virtual_edge }
    });
    let second = std::mem::replace(
        &mut out[1],
        SplitSide { graph: Graph::new(), origin: Vec::new(), virtual_edge: EdgeId(0) },
    );
    let [first, _] = out;
    Ok((first, second))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Bond,
    Polygon,
    Triconnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// Edge of the decomposed input graph.
    Real(EdgeId),
    /// Virtual edge paired with `partner_edge` of component `partner_component`.
    Virtual { partner_component: usize, partner_edge: EdgeId },
}

#[derive(Clone, Debug)]
pub struct TriconnectedComponent {
    pub kind: ComponentKind,
    /// Component graph on dense local vertex ids.
    pub graph: Graph,
    /// Local vertex -> input vertex.
    pub vertex_map: Vec<VertexId>,
    /// Indexed by local edge id.
    pub origin: Vec<EdgeOrigin>,
}

impl TriconnectedComponent {
    pub fn virtual_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.origin
            .iter()
            .enumerate()
            .filter(|(_, o)| matches!(o, EdgeOrigin::Virtual { .. }))
            .map(|(i, _)| EdgeId(i))
    }

    pub fn real_edge_count(&self) -> usize {
        self.origin.iter().filter(|o| matches!(o, EdgeOrigin::Real(_))).count()
    }

    /// Local id of an input vertex, if it belongs to this component.
    pub fn local_vertex(&self, input: VertexId) -> Option<VertexId> {
        self.vertex_map.iter().position(|&v| v == input).map(VertexId)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tag {
    Real(EdgeId),
    Virtual(usize),
}

#[derive(Clone, Copy, Debug)]
struct PieceEdge {
    u: VertexId,
    v: VertexId,
    tag: Tag,
}

/// Triconnected components of a simple biconnected graph with at least three edges.
pub fn triconnected_components(
    g: &Graph,
) -> Result<Vec<TriconnectedComponent>, DecompositionError> {
    if !g.is_simple() {
        return Err(DecompositionError::NotSimple);
    }
    if g.edge_count() < 3 {
        return Err(DecompositionError::TooSmall);
    }
    if !g.is_biconnected() {
        return Err(DecompositionError::NotBiconnected);
    }

    let mut next_virtual = 0usize;
    let mut work: Vec<Vec<PieceEdge>> = vec![g
        .edges()
        .map(|(e, u, v)| PieceEdge { u, v, tag: Tag::Real(e) })
        .collect()];
    let mut done: Vec<(ComponentKind, Vec<PieceEdge>)> = Vec::new();

    while let Some(piece) = work.pop() {
        let mut verts: Vec<VertexId> = piece.iter().flat_map(|e| [e.u, e.v]).collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() == 2 {
            done.push((ComponentKind::Bond, piece));
            continue;
        }

        // Split off every parallel class as a bond.
        let mut classes: BTreeMap<(VertexId, VertexId), Vec<PieceEdge>> = BTreeMap::new();
        for e in &piece {
            classes.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(*e);
        }
        if classes.values().any(|c| c.len() >= 2) {
            let mut rest = Vec::new();
            for ((a, b), mut class) in classes {
                if class.len() >= 2 {
                    let id = next_virtual;
                    next_virtual += 1;
                    class.push(PieceEdge { u: a, v: b, tag: Tag::Virtual(id) });
                    done.push((ComponentKind::Bond, class));
                    rest.push(PieceEdge { u: a, v: b, tag: Tag::Virtual(id) });
                } else {
                    rest.extend(class);
                }
            }
            work.push(rest);
            continue;
        }

        let local = local_index(&verts);
        let mut lg = Graph::with_vertices(verts.len());
        for e in &piece {
            lg.add_edge(VertexId(local[&e.u]), VertexId(local[&e.v])).unwrap();
        }
        match find_separation_pair(&lg)? {
            None => {
                let kind = if verts.len() == 3 {
                    ComponentKind::Polygon
                } else {
                    ComponentKind::Triconnected
                };
                done.push((kind, piece));
            }
            Some(pair) => {
                let (first, second) = split(&lg, pair)?;
                let id = next_virtual;
                next_virtual += 1;
                for side in [first, second] {
                    let mut edges = Vec::new();
                    for (se, a, b) in side.graph.edges() {
                        let (u, v) = (verts[a.0], verts[b.0]);
                        let tag = match side.origin[se.0] {
                            Some(le) => piece[le.0].tag,
                            None => Tag::Virtual(id),
                        };
                        edges.push(PieceEdge { u, v, tag });
                    }
                    work.push(edges);
                }
            }
        }
    }

    Ok(merge_pieces(done, next_virtual))
}

fn merge_pieces(
    pieces: Vec<(ComponentKind, Vec<PieceEdge>)>,
    virtual_count: usize,
) -> Vec<TriconnectedComponent> {
    let mut holders = vec![[usize::MAX; 2]; virtual_count];
    for (i, (_, edges)) in pieces.iter().enumerate() {
        for e in edges {
            if let Tag::Virtual(id) = e.tag {
                let h = &mut holders[id];
                if h[0] == usize::MAX {
                    h[0] = i;
                } else {
                    h[1] = i;
                }
            }
        }
    }

    let mut parent: Vec<usize> = (0..pieces.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merged_away = vec![false; virtual_count];
    for (id, &[a, b]) in holders.iter().enumerate() {
        let (ka, kb) = (pieces[a].0, pieces[b].0);
        if ka == kb && ka != ComponentKind::Triconnected {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
            merged_away[id] = true;
        }
    }

    let mut groups: BTreeMap<usize, (ComponentKind, Vec<PieceEdge>)> = BTreeMap::new();
    for (i, (kind, edges)) in pieces.into_iter().enumerate() {
        let r = find(&mut parent, i);
        let entry = groups.entry(r).or_insert_with(|| (kind, Vec::new()));
        entry.1.extend(
            edges
                .into_iter()
                .filter(|e| !matches!(e.tag, Tag::Virtual(id) if merged_away[id])),
        );
    }

    // Build components; remember where each surviving virtual edge landed.
    let mut landing: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); virtual_count];
    let mut comps = Vec::with_capacity(groups.len());
    for (ci, (_, (kind, mut edges))) in groups.into_iter().enumerate() {
        edges.sort_by_key(|e| match e.tag {
            Tag::Real(x) => (0, x.0),
            Tag::Virtual(x) => (1, x),
        });
        let mut verts: Vec<VertexId> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local = local_index(&verts);
        let mut graph = Graph::with_vertices(verts.len());
        let mut origin = Vec::with_capacity(edges.len());
        for e in &edges {
            let le = graph.add_edge(VertexId(local[&e.u]), VertexId(local[&e.v])).unwrap();
            match e.tag {
                Tag::Real(x) => origin.push(EdgeOrigin::Real(x)),
                Tag::Virtual(id) => {
                    landing[id].push((ci, le));
                    origin.push(EdgeOrigin::Virtual {
                        partner_component: usize::MAX,
                        partner_edge: EdgeId(usize::MAX),
                    });
                }
            }
        }
        comps.push(TriconnectedComponent { kind, graph, vertex_map: verts, origin });
    }
    for pair in landing.iter().filter(|l| l.len() == 2) {
        let [(c1, e1), (c2, e2)] = [pair[0], pair[1]];
        comps[c1].origin[e1.0] =
            EdgeOrigin::Virtual { partner_component: c2, partner_edge: e2 };
        comps[c2].origin[e2.0] =
            EdgeOrigin::Virtual { partner_component: c1, partner_edge: e1 };
    }
    comps
}

/// Glues partner virtual edges back together. Returns a graph on vertex
/// slots `0..=max input id` whose edges are the real edges in increasing
/// order of their input id.
pub fn reassemble(components: &[TriconnectedComponent]) -> Result<Graph, DecompositionError> {
    let mut real: Vec<(EdgeId, VertexId, VertexId)> = Vec::new();
    let mut bound = 0;
    for (ci, c) in components.iter().enumerate() {
        bound = bound.max(c.vertex_map.iter().map(|v| v.0 + 1).max().unwrap_or(0));
        for (e, a, b) in c.graph.edges() {
            let (ia, ib) = (c.vertex_map[a.0], c.vertex_map[b.0]);
            match c.origin[e.0] {
                EdgeOrigin::Real(x) => real.push((x, ia, ib)),
                EdgeOrigin::Virtual { partner_component, partner_edge } => {
                    let dangling = DecompositionError::DanglingVirtual { component: ci, edge: e };
                    let partner = components.get(partner_component).ok_or(dangling.clone())?;
                    match partner.origin.get(partner_edge.0) {
                        Some(EdgeOrigin::Virtual { partner_component: pc, partner_edge: pe })
                            if *pc == ci && *pe == e => {}
                        _ => return Err(dangling),
                    }
                    let (pa, pb) = partner.graph.endpoints(partner_edge).map_err(|_| dangling.clone())?;
                    let (pa, pb) = (partner.vertex_map[pa.0], partner.vertex_map[pb.0]);
                    if (pa.min(pb), pa.max(pb)) != (ia.min(ib), ia.max(ib)) {
                        return Err(dangling);
                    }
                }
            }
        }
    }
    real.sort_unstable();
    let mut g = Graph::with_vertices(bound);
    for (_, a, b) in real {
        g.add_edge(a, b).unwrap();
    }
    Ok(g)
}
