//! Command-line front end: graph files, certificate formats and the
//! subcommands behind the `planarity` binary.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use cseq_planarity::certify::{
    oracle_planarity_with_budget, verify_embedding, verify_kuratowski, verify_sequence,
    VerificationReport, ORACLE_BUDGET,
};
use cseq_planarity::cseq::compute_sequence;
use cseq_planarity::generate;
use cseq_planarity::planarity::{run_sequence, RunOutcome};
use cseq_planarity::{
    test_planarity_with, Certificate, Embedding, Graph, KuratowskiKind, KuratowskiSubdivision,
    Options, VertexId,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Planar, or the certificate verified.
pub const EXIT_OK: i32 = 0;
/// Nonplanar, or the certificate was rejected.
pub const EXIT_NO: i32 = 1;
/// Bad input or usage.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Parser)]
#[command(name = "planarity", version, about = "Certifying planarity testing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a graph and print its certificate.
    Test {
        /// Graph file, or `-` for stdin.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads for the components.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Run the independent checker on the certificate before printing.
        #[arg(long)]
        certify: bool,
        /// Prefer K3,3 witnesses.
        #[arg(long)]
        k33: bool,
    },
    /// Check a JSON certificate against a graph.
    Verify { graph: PathBuf, certificate: PathBuf },
    /// Print a construction sequence of a triconnected graph.
    Cseq {
        input: PathBuf,
        /// Also replay and check the sequence.
        #[arg(long)]
        verify: bool,
    },
    /// Write a generated graph.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Vertex count, or the dimension for hypercubes and the rim length
        /// for wheels and prisms.
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Edge count for `random`.
        #[arg(long)]
        m: Option<usize>,
        /// Extra edges per vertex for the triconnected generators.
        #[arg(long, default_value_t = 0.5)]
        extra: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide planarity by exhaustive search over rotation systems.
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = ORACLE_BUDGET)]
        budget: u64,
    },
    /// Time the embedding phase on generated planar sequences.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec![10_000, 20_000, 40_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        repeat: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    K4,
    Wheel,
    Complete,
    K33,
    Petersen,
    Octahedron,
    Hypercube,
    Prism,
    Random,
    Triangulation,
    Random3conn,
    RandomPlanar,
}

/// Parses the graph format: an `n <count>` header, then one `u v` pair per
/// line. Blank lines and `#` comments are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, CliError> {
    let mut g: Option<Graph> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |reason: String| CliError::Parse { line, reason };
        let t = raw.split('#').next().unwrap().trim();
        if t.is_empty() {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("not a number: {s}")));
        match (&mut g, parts.as_slice()) {
            (None, ["n", count]) => g = Some(Graph::with_vertices(num(count)?)),
            (None, _) => return Err(err("expected header `n <count>`".into())),
            (Some(_), ["n", _]) => return Err(err("repeated header".into())),
            (Some(g), [a, b]) => {
                let (a, b) = (num(a)?, num(b)?);
                let n = g.vertex_bound();
                if a >= n || b >= n {
                    return Err(err(format!("vertex out of range 0..{n}")));
                }
                g.add_edge(VertexId(a), VertexId(b)).map_err(|e| err(e.to_string()))?;
            }
            (Some(_), _) => return Err(err(format!("expected `u v`, got `{t}`"))),
        }
    }
    g.ok_or_else(|| CliError::Parse { line: 0, reason: "missing header `n <count>`".into() })
}

pub fn format_graph(g: &Graph) -> String {
    let mut s = format!("n {}\n", g.vertex_bound());
    for (_, a, b) in g.edges() {
        writeln!(s, "{} {}", a.0, b.0).unwrap();
    }
    s
}

/// Serialized certificate. Planar certificates carry `rotation`; nonplanar
/// ones carry `kind`, `branch` and `paths`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub planar: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<usize>>>,
}

fn ids(vs: &[VertexId]) -> Vec<usize> {
    vs.iter().map(|v| v.0).collect()
}

fn vertices(xs: &[usize]) -> Vec<VertexId> {
    xs.iter().map(|&x| VertexId(x)).collect()
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::Planar(e) => CertificateJson {
                planar: true,
                rotation: Some(e.rotation.iter().map(|r| ids(r)).collect()),
                kind: None,
                branch: None,
                paths: None,
            },
            Certificate::NonPlanar(k) => CertificateJson {
                planar: false,
                rotation: None,
                kind: Some(k.kind.to_string()),
                branch: Some(ids(&k.branch)),
                paths: Some(k.paths.iter().map(|p| ids(p)).collect()),
            },
        }
    }
}

impl TryFrom<CertificateJson> for Certificate {
    type Error = CliError;

    fn try_from(c: CertificateJson) -> Result<Self, CliError> {
        let missing = |field: &str| CliError::Certificate(format!("missing `{field}`"));
        if c.planar {
            let rotation = c.rotation.ok_or_else(|| missing("rotation"))?;
            return Ok(Certificate::Planar(Embedding {
                rotation: rotation.iter().map(|r| vertices(r)).collect(),
            }));
        }
        let kind = match c.kind.as_deref() {
            Some("K5") => KuratowskiKind::K5,
            Some("K3,3") | Some("K33") => KuratowskiKind::K33,
            Some(other) => return Err(CliError::Certificate(format!("unknown kind `{other}`"))),
            None => return Err(missing("kind")),
        };
        Ok(Certificate::NonPlanar(KuratowskiSubdivision {
            kind,
            branch: vertices(&c.branch.ok_or_else(|| missing("branch"))?),
            paths: c.paths.ok_or_else(|| missing("paths"))?.iter().map(|p| vertices(p)).collect(),
        }))
    }
}

pub fn verify_certificate(g: &Graph, c: &Certificate) -> VerificationReport {
    match c {
        Certificate::Planar(e) => verify_embedding(g, e),
        Certificate::NonPlanar(k) => verify_kuratowski(g, k),
    }
}

pub fn render(g: &Graph, c: &Certificate, format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Json => {
            s = serde_json::to_string_pretty(&CertificateJson::from(c)).unwrap();
            s.push('\n');
        }
        Format::Text => match c {
            Certificate::Planar(e) => {
                writeln!(s, "planar").unwrap();
                writeln!(s, "faces {}", e.faces().len()).unwrap();
                for v in g.vertices() {
                    let r: Vec<String> = e.rotation[v.0].iter().map(|w| w.0.to_string()).collect();
                    writeln!(s, "{}: {}", v.0, r.join(" ")).unwrap();
                }
            }
            Certificate::NonPlanar(k) => {
                writeln!(s, "nonplanar {}", k.kind).unwrap();
                let b: Vec<String> = k.branch.iter().map(|v| v.0.to_string()).collect();
                writeln!(s, "branch {}", b.join(" ")).unwrap();
                for p in &k.paths {
                    let p: Vec<String> = p.iter().map(|v| v.0.to_string()).collect();
                    writeln!(s, "path {}", p.join(" ")).unwrap();
                }
            }
        },
        Format::Dot => {
            let (marked, branch) = match c {
                Certificate::Planar(_) => (Vec::new(), Vec::new()),
                Certificate::NonPlanar(k) => {
                    let mut e: Vec<(usize, usize)> =
                        k.edges().map(|(a, b)| (a.0.min(b.0), a.0.max(b.0))).collect();
                    e.sort_unstable();
                    (e, ids(&k.branch))
                }
            };
            writeln!(s, "graph G {{").unwrap();
            for v in g.vertices() {
                if branch.contains(&v.0) {
                    writeln!(s, "  {} [style=filled, fillcolor=red];", v.0).unwrap();
                } else {
                    writeln!(s, "  {};", v.0).unwrap();
                }
            }
            for (_, a, b) in g.edges() {
                let key = (a.0.min(b.0), a.0.max(b.0));
                if marked.binary_search(&key).is_ok() {
                    writeln!(s, "  {} -- {} [color=red, penwidth=2];", a.0, b.0).unwrap();
                } else {
                    writeln!(s, "  {} -- {};", a.0, b.0).unwrap();
                }
            }
            writeln!(s, "}}").unwrap();
        }
    }
    s
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.display().to_string(), source };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read_input(path)?)
}

pub fn generate(kind: GenKind, n: usize, m: Option<usize>, extra: f64, seed: u64) -> Result<Graph, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let need = |min: usize| {
        if n < min {
            Err(CliError::Input(format!("{kind:?} needs n >= {min}")))
        } else {
            Ok(())
        }
    };
    Ok(match kind {
        GenKind::K4 => generate::k4(),
        GenKind::Wheel => {
            need(3)?;
            generate::wheel(n)
        }
        GenKind::Complete => generate::complete(n),
        GenKind::K33 => generate::complete_bipartite(3, 3),
        GenKind::Petersen => generate::petersen(),
        GenKind::Octahedron => generate::octahedron(),
        GenKind::Hypercube => generate::hypercube(n),
        GenKind::Prism => {
            need(3)?;
            generate::prism(n)
        }
        GenKind::Random => {
            let m = m.unwrap_or(2 * n).min(n * n.saturating_sub(1) / 2);
            generate::random_graph(&mut rng, n, m)
        }
        GenKind::Triangulation => {
            need(4)?;
            generate::random_triangulation(&mut rng, n)
        }
        GenKind::Random3conn => {
            need(4)?;
            generate::random_3conn(&mut rng, n, extra).0
        }
        GenKind::RandomPlanar => {
            need(4)?;
            generate::random_planar_3conn(&mut rng, n, extra).0
        }
    })
}

/// Runs a subcommand, writing its report to `out`, and returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let w = |out: &mut dyn Write, s: &str| {
        out.write_all(s.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source })
    };
    match cli.command {
        Command::Test { input, format, jobs, certify, k33 } => {
            let g = read_graph(&input)?;
            let c = test_planarity_with(&g, &Options { jobs: jobs.max(1), k33 });
            if certify {
                let r = verify_certificate(&g, &c);
                if !r.ok {
                    return Err(CliError::Certificate(format!("checker rejected the result: {r}")));
                }
            }
            w(out, &render(&g, &c, format))?;
            Ok(if c.is_planar() { EXIT_OK } else { EXIT_NO })
        }
        Command::Verify { graph, certificate } => {
            let g = read_graph(&graph)?;
            let json: CertificateJson = serde_json::from_str(&read_input(&certificate)?)
                .map_err(|e| CliError::Certificate(e.to_string()))?;
            let r = verify_certificate(&g, &Certificate::try_from(json)?);
            w(out, &format!("{r}\n"))?;
            Ok(if r.ok { EXIT_OK } else { EXIT_NO })
        }
        Command::Cseq { input, verify } => {
            let g = read_graph(&input)?;
            let seq = compute_sequence(&g).map_err(|e| CliError::Input(e.to_string()))?;
            w(out, &seq.to_text())?;
            if verify {
                let r = verify_sequence(&g, &seq);
                w(out, &format!("# {r}\n"))?;
                if !r.ok {
                    return Ok(EXIT_NO);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Gen { kind, n, m, extra, seed } => {
            w(out, &format_graph(&generate(kind, n, m, extra, seed)?))?;
            Ok(EXIT_OK)
        }
        Command::Oracle { input, budget } => {
            let g = read_graph(&input)?.dedupe_multiedges();
            match oracle_planarity_with_budget(&g, budget) {
                Ok(p) => {
                    w(out, if p { "planar\n" } else { "nonplanar\n" })?;
                    Ok(if p { EXIT_OK } else { EXIT_NO })
                }
                Err(e) => Err(CliError::Input(e.to_string())),
            }
        }
        Command::Bench { sizes, seed, repeat } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut prev: Option<f64> = None;
            for n in sizes {
                if n < 4 {
                    return Err(CliError::Input("bench sizes must be at least 4".into()));
                }
                let (_, seq) = generate::random_planar_3conn(&mut rng, n, 0.5);
                let mut best = f64::INFINITY;
                for _ in 0..repeat.max(1) {
                    let start = Instant::now();
                    let outcome = run_sequence(&seq).map_err(|e| CliError::Input(e.to_string()))?;
                    best = best.min(start.elapsed().as_secs_f64());
                    if !matches!(outcome, RunOutcome::Embedded(_)) {
                        return Err(CliError::Input("generated sequence is not planar".into()));
                    }
                }
                let ratio = prev.map(|p| format!(" ratio {:.2}", best / p)).unwrap_or_default();
                w(out, &format!("n {n} ops {} time {:.3} ms{ratio}\n", seq.ops.len(), best * 1e3))?;
                prev = Some(best);
            }
            Ok(EXIT_OK)
        }
    }
}
