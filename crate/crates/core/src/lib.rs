//! Graph classification with hyperdimensional computing.
//!
//! Each vertex of a graph is identified by its PageRank rank and mapped to the
//! random bipolar basis hypervector with that index. An edge is the binding of
//! its two vertex hypervectors, and a graph is the majority vote of its edge
//! hypervectors. Training sums the graph hypervectors of each class into a
//! class vector; a query graph is assigned the class whose vector has the
//! highest cosine similarity to its encoding.
//!
//! ```
//! use graphhd::{Encoder, EncoderConfig, Graph, train};
//!
//! let cfg = EncoderConfig { dim: 1024, seed: 7, ..EncoderConfig::default() };
//! let encoder = Encoder::new(cfg)?;
//! let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)])?;
//! let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)])?;
//! let model = train([(&path, 0), (&star, 1)], 2, &encoder)?;
//! assert_eq!(model.predict(&star, &encoder)?.label, 1);
//! # Ok::<(), graphhd::Error>(())
//! ```

pub mod basis;
pub mod bitslice;
pub mod encoder;
pub mod error;
pub mod eval;
pub mod generate;
pub mod graph;
pub mod hypervector;
pub mod model;
pub mod pagerank;
pub mod report;
pub mod tudataset;

pub use basis::{basis_vector, generate_basis, BasisSet};
pub use encoder::{encode_edge, encode_graph, encode_vertices, Encoder, EncoderConfig};
pub use error::{Error, Result};
pub use eval::{cross_validate, scaling_benchmark, CvConfig, CvReport, FoldRecord, ScalingConfig, ScalingReport};
pub use generate::{generate_er_dataset, triangles_vs_stars};
pub use graph::{dataset_stats, Dataset, DatasetStats, Graph};
pub use hypervector::{
    bind, bundle_accumulate, cosine_similarity, encode_record, normalize, permute, tie_break_signs, Accumulator,
    Hypervector,
};
pub use model::{load_model, predict, save_model, train, train_dataset, Model, Prediction};
pub use pagerank::{pagerank, rank_vertices, CentralityScores, RankAssignment};
pub use report::{emit_cv_report, emit_scaling_report, ReportFormat};
pub use tudataset::{load_tudataset, write_tudataset};
