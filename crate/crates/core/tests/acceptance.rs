//! Acceptance checks. Each test writes one `criterion N: PASS|FAIL ...` line
//! straight to stdout so the summary survives output capture. Tests run one
//! at a time so the timing check is not disturbed by the others.

use std::collections::HashSet;
use std::io::Write;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use cseq_planarity::certify::{
    oracle_embedding, oracle_planarity, verify_embedding, verify_kuratowski, verify_sequence,
    OracleError,
};
use cseq_planarity::cseq::{compute_sequence, ConstructionSequence};
use cseq_planarity::generate::{
    complete, complete_bipartite, hypercube, k4, octahedron, petersen, prism, random_3conn,
    random_graph, random_planar_3conn, random_triangulation, wheel,
};
use cseq_planarity::planarity::{check_attachments, apply_op, run_sequence, RunOutcome};
use cseq_planarity::stgraph::PlaneStGraph;
use cseq_planarity::{test_planarity, Certificate, Graph, KuratowskiKind, VertexId};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXHAUSTIVE_MAX_N: usize = 6;
const EXHAUSTIVE_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_ORACLE_GRAPHS: usize = 1000;
const RANDOM_ORACLE_MAX_N: usize = 10;
const CERTIFIED_GRAPHS: usize = 5000;
const SEQUENCE_GRAPHS: usize = 200;
const SEQUENCE_MAX_N: usize = 200;
const VERIFY_SEQUENCE_MAX_N: usize = 30;
const FACE_MAX_N: usize = 8;
const FACE_MIN_CHECKED: usize = 50;
const SCALING_SIZES: [usize; 3] = [10_000, 20_000, 40_000];
const SCALING_MAX_RATIO: f64 = 3.0;
const LARGE_N: usize = 100_000;
const LARGE_LIMIT: Duration = Duration::from_secs(30);
const SOAK_OPS: usize = 100_000;
const SOAK_AUDIT_EVERY: usize = 1_000;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(criterion: u32, ok: bool, detail: impl std::fmt::Display) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {criterion}: {status} {detail}").unwrap();
    out.flush().unwrap();
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn certificate_ok(g: &Graph, c: &Certificate) -> Result<(), String> {
    let r = match c {
        Certificate::Planar(e) => verify_embedding(g, e),
        Certificate::NonPlanar(k) => verify_kuratowski(g, k),
    };
    if r.ok {
        Ok(())
    } else {
        Err(r.to_string())
    }
}

/// Planarity by the oracle, or by the edge bound when the oracle is over budget.
fn reference_planarity(g: &Graph) -> Option<bool> {
    match oracle_planarity(g) {
        Ok(p) => Some(p),
        Err(OracleError::Budget { .. }) if g.edge_count() > 3 * g.vertex_count() - 6 => Some(false),
        Err(_) => None,
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(p, k + 1, out);
            p.swap(k, i);
        }
    }
    go(&mut p, 0, &mut out);
    out
}

/// All graphs on `n` vertices up to isomorphism, as edge lists.
fn nonisomorphic_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut index = vec![vec![0; n]; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        index[i][j] = k;
        index[j][i] = k;
    }
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let canon = perms
            .iter()
            .map(|p| {
                pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).fold(0u32, |acc, (_, &(i, j))| {
                    acc | 1 << index[p[i]][p[j]]
                })
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(pairs.iter().enumerate().filter(|(k, _)| canon >> k & 1 == 1).map(|(_, &e)| e).collect());
        }
    }
    out
}

#[test]
fn criterion_1_exhaustive_small_graphs() {
    let _serial = serial();
    let start = Instant::now();
    let (mut total, mut bad) = (0, Vec::new());
    for n in 1..=EXHAUSTIVE_MAX_N {
        for edges in nonisomorphic_graphs(n) {
            let g = Graph::from_edges(n, &edges);
            let got = test_planarity(&g).is_planar();
            total += 1;
            if reference_planarity(&g) != Some(got) {
                bad.push(edges);
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        bad.is_empty() && total == 1 + 2 + 4 + 11 + 34 + 156 && elapsed <= EXHAUSTIVE_LIMIT,
        format!("{total} graphs up to n={EXHAUSTIVE_MAX_N}, {} mismatches, {elapsed:.1?}", bad.len()),
    );
}

#[test]
fn criterion_2_random_graphs_against_oracle() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checked, mut skipped, mut bad) = (0, 0, 0);
    for _ in 0..RANDOM_ORACLE_GRAPHS {
        let n = rng.gen_range(1..=RANDOM_ORACLE_MAX_N);
        let m = rng.gen_range(n..=3 * n).min(n * (n - 1) / 2);
        let g = random_graph(&mut rng, n, m);
        let got = test_planarity(&g).is_planar();
        match reference_planarity(&g) {
            Some(p) => {
                checked += 1;
                if p != got {
                    bad += 1;
                }
            }
            None => skipped += 1,
        }
    }
    report(
        2,
        bad == 0 && checked >= RANDOM_ORACLE_GRAPHS / 2,
        format!("{checked} checked, {skipped} over budget, {bad} mismatches"),
    );
}

fn named_graphs() -> Vec<Graph> {
    let mut v = vec![
        k4(),
        octahedron(),
        petersen(),
        complete(5),
        complete(6),
        complete_bipartite(3, 3),
        complete_bipartite(3, 4),
        hypercube(3),
        hypercube(4),
    ];
    v.extend((4..10).map(wheel));
    v.extend((3..8).map(prism));
    v
}

fn with_extra_edges(rng: &mut ChaCha8Rng, mut g: Graph) -> Graph {
    let n = g.vertex_count();
    let missing = n * (n - 1) / 2 - g.edge_count();
    let want = rng.gen_range(1..=3).min(missing);
    let mut added = 0;
    while added < want {
        let (a, b) = (VertexId(rng.gen_range(0..n)), VertexId(rng.gen_range(0..n)));
        if a != b && !g.has_edge(a, b) {
            g.add_edge(a, b).unwrap();
            added += 1;
        }
    }
    g
}

#[test]
fn criterion_3_certificates_verify() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut graphs: Vec<Graph> = named_graphs();
    while graphs.len() < CERTIFIED_GRAPHS {
        let n = rng.gen_range(5..60);
        let g = match graphs.len() % 5 {
            0 => random_planar_3conn(&mut rng, n, 0.3).0,
            1 => random_3conn(&mut rng, n, 0.5).0,
            2 => {
                let m = rng.gen_range(n..=3 * n);
                random_graph(&mut rng, n, m)
            }
            3 => random_triangulation(&mut rng, n),
            _ => {
                let base = random_planar_3conn(&mut rng, n, 0.2).0;
                with_extra_edges(&mut rng, base)
            }
        };
        graphs.push(g);
    }
    let (mut planar, mut bad) = (0, Vec::new());
    for (i, g) in graphs.iter().enumerate() {
        let c = test_planarity(g);
        planar += c.is_planar() as usize;
        if let Err(e) = certificate_ok(g, &c) {
            bad.push(format!("#{i}: {e}"));
        }
    }
    report(
        3,
        bad.is_empty(),
        format!(
            "{} graphs, {planar} planar, {} bad certificates{}",
            graphs.len(),
            bad.len(),
            bad.first().map(|b| format!(" (first {b})")).unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_4_sequences_replay() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut verified, mut bad) = (0, Vec::new());
    for i in 0..SEQUENCE_GRAPHS {
        let n = rng.gen_range(4..=SEQUENCE_MAX_N);
        let extra = rng.gen_range(0.0..1.5);
        let (g, _) = random_3conn(&mut rng, n, extra);
        let seq = match compute_sequence(&g) {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        match seq.replay_on_input(g.vertex_bound()) {
            Ok(r) if r.same_structure(&g) => {}
            _ => bad.push(format!("#{i}: replay differs")),
        }
        if n <= VERIFY_SEQUENCE_MAX_N {
            let r = verify_sequence(&g, &seq);
            verified += 1;
            if !r.ok {
                bad.push(format!("#{i}: {r}"));
            }
        }
    }
    report(
        4,
        bad.is_empty() && verified > 0,
        format!("{SEQUENCE_GRAPHS} graphs, {verified} sequences verified, {} failures", bad.len()),
    );
}

#[test]
fn criterion_5_face_degrees_match_oracle() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut checked, mut bad) = (0, 0);
    for _ in 0..400 {
        let n = rng.gen_range(4..=FACE_MAX_N);
        let extra = rng.gen_range(0.0..0.6);
        let (g, _) = random_planar_3conn(&mut rng, n, extra);
        let Ok(Some(o)) = oracle_embedding(&g) else { continue };
        let Certificate::Planar(e) = test_planarity(&g) else {
            bad += 1;
            continue;
        };
        let (mut a, mut b) = (e.face_degrees(), o.face_degrees());
        a.sort_unstable();
        b.sort_unstable();
        checked += 1;
        if a != b {
            bad += 1;
        }
    }
    report(
        5,
        bad == 0 && checked >= FACE_MIN_CHECKED,
        format!("{checked} components checked, {bad} mismatches"),
    );
}

#[test]
fn criterion_6_named_graphs() {
    let _serial = serial();
    let faces = |g: &Graph| match test_planarity(g) {
        Certificate::Planar(e) if verify_embedding(g, &e).ok => Some(e.faces().len()),
        _ => None,
    };
    let kind = |g: &Graph| match test_planarity(g) {
        Certificate::NonPlanar(k) if verify_kuratowski(g, &k).ok => Some(k.kind),
        _ => None,
    };
    let checks = [
        ("K4 has 4 faces", faces(&k4()) == Some(4)),
        ("octahedron has 8 faces", faces(&octahedron()) == Some(8)),
        ("K5 is nonplanar", kind(&complete(5)).is_some()),
        ("K3,3 is nonplanar", kind(&complete_bipartite(3, 3)).is_some()),
        ("Petersen gives K3,3", kind(&petersen()) == Some(KuratowskiKind::K33)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    report(6, failed.is_empty(), format!("{} checks, failed: {failed:?}", checks.len()));
}

fn time_embedding(seq: &ConstructionSequence) -> Duration {
    let start = Instant::now();
    let out = run_sequence(seq).expect("sequence runs");
    let t = start.elapsed();
    assert!(matches!(out, RunOutcome::Embedded(_)), "planar sequence fails");
    t
}

#[test]
fn criterion_7_embedding_scales_linearly() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let times: Vec<Duration> = SCALING_SIZES
        .iter()
        .map(|&n| {
            let (_, seq) = random_planar_3conn(&mut rng, n, 0.5);
            (0..5).map(|_| time_embedding(&seq)).min().unwrap()
        })
        .collect();
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64()).collect();
    let (_, seq) = random_planar_3conn(&mut rng, LARGE_N, 0.5);
    let large = time_embedding(&seq);
    report(
        7,
        ratios.iter().all(|&r| r <= SCALING_MAX_RATIO) && large <= LARGE_LIMIT,
        format!("times {times:.2?}, ratios {ratios:.2?}, n={LARGE_N} in {large:.2?}"),
    );
}

#[test]
fn criterion_8_stgraph_soak() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (_, seq) = random_planar_3conn(&mut rng, SOAK_OPS * 3 / 5, 1.0);
    let mut h = PlaneStGraph::init_k4();
    let (mut applied, mut audits, mut errors) = (0, 0, Vec::new());
    for op in seq.ops.iter().take(SOAK_OPS) {
        let Some(f) = check_attachments(&h, op) else {
            errors.push(format!("op {applied}: no common face for {op:?}"));
            break;
        };
        if let Err(e) = apply_op(&mut h, op, f) {
            errors.push(format!("op {applied}: {e}"));
            break;
        }
        applied += 1;
        if applied % SOAK_AUDIT_EVERY == 0 {
            audits += 1;
            if let Err(e) = h.audit() {
                errors.push(format!("audit after {applied}: {e}"));
                break;
            }
        }
    }
    report(
        8,
        errors.is_empty() && applied >= SOAK_OPS && audits == SOAK_OPS / SOAK_AUDIT_EVERY,
        format!("{applied} operations, {audits} audits, errors {errors:?}"),
    );
}
