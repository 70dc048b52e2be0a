//! Graph encoding: PageRank-rank vertex hypervectors, bound edges, bundled
//! graphs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::basis::BasisSet;
use crate::bitslice::BitSliceAccumulator;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypervector::{tie_break_signs, Accumulator, Hypervector};
use crate::pagerank::{pagerank, rank_vertices, DEFAULT_DAMPING, DEFAULT_ITERATIONS};

pub const DEFAULT_DIM: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncoderConfig {
    pub dim: usize,
    pub seed: u64,
    pub pagerank_iterations: usize,
    pub damping: f64,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            dim: DEFAULT_DIM,
            seed: 0,
            pagerank_iterations: DEFAULT_ITERATIONS,
            damping: DEFAULT_DAMPING,
        }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if self.pagerank_iterations == 0 {
            return Err(Error::InvalidArgument("PageRank iterations must be at least 1".into()));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "damping {} outside (0, 1)",
                self.damping
            )));
        }
        Ok(())
    }
}

fn check_basis(basis: &BasisSet, cfg: &EncoderConfig) -> Result<()> {
    cfg.validate()?;
    if basis.dim() != cfg.dim {
        return Err(Error::DimensionMismatch {
            expected: cfg.dim,
            found: basis.dim(),
        });
    }
    if basis.seed() != cfg.seed {
        return Err(Error::ConfigMismatch(format!(
            "basis seed {} differs from configured seed {}",
            basis.seed(),
            cfg.seed
        )));
    }
    Ok(())
}

/// Vertex `i` gets basis vector `rank[i]`, its position by decreasing
/// PageRank. The returned vectors are shared with the basis.
pub fn encode_vertices(g: &Graph, basis: &BasisSet, cfg: &EncoderConfig) -> Result<Vec<Arc<Hypervector>>> {
    check_basis(basis, cfg)?;
    let scores = pagerank(g, cfg.pagerank_iterations, cfg.damping)?;
    Ok(basis.get_many(&rank_vertices(&scores).rank))
}

/// Edge hypervector: the binding of its endpoint vectors.
pub fn encode_edge(hu: &Hypervector, hv: &Hypervector) -> Result<Hypervector> {
    hu.bind(hv)
}

fn bundle_edges(g: &Graph, basis: &BasisSet, cfg: &EncoderConfig) -> Result<Option<BitSliceAccumulator>> {
    if g.edge_count() == 0 {
        check_basis(basis, cfg)?;
        return Ok(None);
    }
    let vertices = encode_vertices(g, basis, cfg)?;
    let mut acc = BitSliceAccumulator::new(cfg.dim)?;
    for &(u, v) in g.edges() {
        acc.add_bound(&vertices[u as usize], &vertices[v as usize])?;
    }
    Ok(Some(acc))
}

/// Sum of the edge hypervectors of every undirected edge of `g`.
///
/// An edgeless graph yields an accumulator with `n_added() == 0`; callers
/// decide how to treat it.
pub fn encode_graph(g: &Graph, basis: &BasisSet, cfg: &EncoderConfig) -> Result<Accumulator> {
    match bundle_edges(g, basis, cfg)? {
        Some(acc) => Ok(acc.to_accumulator()),
        None => Accumulator::new(cfg.dim),
    }
}

/// Encodes graphs against one shared basis.
///
/// Besides the integer bundle from [`encode_graph`], it produces the bipolar
/// graph hypervector (the majority of the edge hypervectors) directly from the
/// bit-sliced counters, which is what training and inference consume.
#[derive(Debug)]
pub struct Encoder {
    config: EncoderConfig,
    basis: BasisSet,
    tie_signs: Hypervector,
}

impl Encoder {
    pub fn new(config: EncoderConfig) -> Result<Self> {
        config.validate()?;
        Self::with_basis(config, BasisSet::new(config.seed, config.dim)?)
    }

    pub fn with_basis(config: EncoderConfig, basis: BasisSet) -> Result<Self> {
        check_basis(&basis, &config)?;
        Ok(Self {
            tie_signs: tie_break_signs(config.seed, config.dim)?,
            config,
            basis,
        })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    /// Materializes enough basis vectors for graphs of up to `max_vertices`.
    pub fn reserve(&self, max_vertices: usize) {
        self.basis.reserve(max_vertices);
    }

    pub fn vertices(&self, g: &Graph) -> Result<Vec<Arc<Hypervector>>> {
        encode_vertices(g, &self.basis, &self.config)
    }

    pub fn graph(&self, g: &Graph) -> Result<Accumulator> {
        encode_graph(g, &self.basis, &self.config)
    }

    /// Majority of the edge hypervectors, or `None` for an edgeless graph.
    pub fn graph_hypervector(&self, g: &Graph) -> Result<Option<Hypervector>> {
        bundle_edges(g, &self.basis, &self.config)?
            .map(|acc| acc.majority(&self.tie_signs))
            .transpose()
    }
}
