//! Certifying planarity testing through construction sequences of
//! 3-connected graphs.
//!
//! A simple triconnected graph is built from K4 by a sequence of edge
//! additions, subdivisions and claw attachments ([`cseq`]). The test replays
//! the sequence on a plane st-graph ([`stgraph`]); an operation fits iff all
//! its attachments share a face. Arbitrary graphs are first split into
//! triconnected components ([`decomposition`]). The answer is certified by
//! either a rotation system or a Kuratowski subdivision, both checkable by
//! [`certify`].

pub mod certify;
pub mod cseq;
pub mod decomposition;
pub mod generate;
pub mod graph;
pub mod kuratowski;
pub(crate) mod menger;
pub mod planarity;
pub mod stgraph;

pub use graph::{EdgeId, Graph, GraphError, VertexId};
pub use certify::{Certificate, Embedding, KuratowskiKind, KuratowskiSubdivision};
pub use planarity::{test_planarity, test_planarity_with, Options};
