//! Class-vector model: training by bundling graph hypervectors per class and
//! inference by maximum cosine similarity.
//!
//! # Model file layout
//!
//! All integers are little-endian.
//!
//! | offset | size | field |
//! |-------:|-----:|-------|
//! | 0 | 8 | magic `GRAPHHD\0` |
//! | 8 | 2 | format version (`u16`, currently 1) |
//! | 10 | 2 | flags (`u16`; bit 0: basis embedded) |
//! | 12 | 4 | dim (`u32`) |
//! | 16 | 4 | class count k (`u32`) |
//! | 20 | 8 | seed (`u64`) |
//! | 28 | 4 | PageRank iterations (`u32`) |
//! | 32 | 8 | damping (`f64` bits) |
//! | 40 | 8 | training graphs seen (`u64`) |
//! | 48 | 8 | edgeless training graphs skipped (`u64`) |
//! | 56 | k × (4 + 4·dim) | per class: n_added (`u32`), then dim counts (`i32`) |
//! | … | 4 + b × 8·⌈dim/64⌉ | only with bit 0: basis count b (`u32`), then b packed sign vectors (`u64` words, set bit = -1) |
//! | end − 4 | 4 | CRC-32 (IEEE) of every preceding byte |

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::basis::BasisSet;
use crate::encoder::{Encoder, EncoderConfig};
use crate::error::{Error, Result};
use crate::graph::{Dataset, Graph};
use crate::hypervector::{cosine_similarity, words_for, Accumulator, Hypervector};

pub const MODEL_MAGIC: &[u8; 8] = b"GRAPHHD\0";
pub const MODEL_FORMAT_VERSION: u16 = 1;
const FLAG_EMBEDDED_BASIS: u16 = 1;
const HEADER_LEN: usize = 56;

/// Trained class vectors plus the encoder configuration that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    class_vectors: Vec<Accumulator>,
    config: EncoderConfig,
    train_graph_count: usize,
    skipped_edgeless: usize,
    embedded_basis: Option<Vec<Hypervector>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub label: usize,
    /// Cosine similarity of the query to each class vector. All zeros when
    /// the query graph had no edges.
    pub similarities: Vec<f64>,
    /// Set when the query had no edges and `label` is the majority training
    /// class rather than a similarity decision.
    pub edgeless_fallback: bool,
}

struct Partial {
    classes: Vec<Accumulator>,
    skipped: usize,
}

impl Partial {
    fn new(k: usize, dim: usize) -> Self {
        Self {
            classes: (0..k)
                .map(|_| Accumulator::new(dim).expect("encoder dimension is validated"))
                .collect(),
            skipped: 0,
        }
    }

    fn merge(mut self, other: Partial) -> Result<Self> {
        for (a, b) in self.classes.iter_mut().zip(&other.classes) {
            a.merge(b)?;
        }
        self.skipped += other.skipped;
        Ok(self)
    }
}

/// Builds one class vector per class: the element-wise sum of the bipolar
/// graph hypervectors of that class's training graphs.
///
/// Edgeless graphs are skipped and counted. Every class in `0..k` needs at
/// least one graph with an edge.
pub fn train<'a, I>(samples: I, k: usize, encoder: &Encoder) -> Result<Model>
where
    I: IntoIterator<Item = (&'a Graph, usize)>,
{
    let samples: Vec<(&Graph, usize)> = samples.into_iter().collect();
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(&(_, bad)) = samples.iter().find(|(_, l)| *l >= k) {
        return Err(Error::InvalidArgument(format!("label {bad} outside 0..{k}")));
    }
    let dim = encoder.config().dim;
    if let Some(max_n) = samples.iter().map(|(g, _)| g.vertex_count()).max() {
        encoder.reserve(max_n);
    }

    let partial = samples
        .par_iter()
        .try_fold(
            || Partial::new(k, dim),
            |mut acc, &(g, label)| {
                match encoder.graph_hypervector(g)? {
                    Some(h) => acc.classes[label].add(&h)?,
                    None => acc.skipped += 1,
                }
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce_with(|a, b| a.merge(b))
        .expect("at least one sample")?;

    if partial.skipped > 0 {
        log::warn!("skipped {} edgeless training graphs", partial.skipped);
    }
    if let Some(empty) = partial.classes.iter().position(Accumulator::is_empty) {
        return Err(Error::EmptyClass(empty));
    }
    Ok(Model {
        class_vectors: partial.classes,
        config: *encoder.config(),
        train_graph_count: samples.len(),
        skipped_edgeless: partial.skipped,
        embedded_basis: None,
    })
}

/// Trains on every graph of `ds`.
pub fn train_dataset(ds: &Dataset, encoder: &Encoder) -> Result<Model> {
    train(
        ds.graphs().iter().zip(ds.labels().iter().copied()),
        ds.class_count(),
        encoder,
    )
}

/// Classifies `g` with `model`; see [`Model::predict`].
pub fn predict(g: &Graph, model: &Model, encoder: &Encoder) -> Result<Prediction> {
    model.predict(g, encoder)
}

impl Model {
    pub fn k(&self) -> usize {
        self.class_vectors.len()
    }

    pub fn class_vectors(&self) -> &[Accumulator] {
        &self.class_vectors
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn train_graph_count(&self) -> usize {
        self.train_graph_count
    }

    pub fn skipped_edgeless(&self) -> usize {
        self.skipped_edgeless
    }

    /// Class with the most bundled training graphs, lowest index on ties.
    pub fn majority_class(&self) -> usize {
        let mut best = 0;
        for (i, c) in self.class_vectors.iter().enumerate() {
            if c.n_added() > self.class_vectors[best].n_added() {
                best = i;
            }
        }
        best
    }

    pub fn embedded_basis(&self) -> Option<&[Hypervector]> {
        self.embedded_basis.as_deref()
    }

    /// Stores the first `count` basis vectors in the model so that a saved
    /// file does not depend on the random generator reproducing them.
    pub fn embed_basis(&mut self, basis: &BasisSet, count: usize) -> Result<()> {
        if basis.dim() != self.config.dim || basis.seed() != self.config.seed {
            return Err(Error::ConfigMismatch("basis does not belong to this model".into()));
        }
        basis.reserve(count);
        let mut vectors = basis.materialized();
        vectors.truncate(count);
        self.embedded_basis = Some(vectors);
        Ok(())
    }

    /// An encoder matching this model, using the embedded basis if present.
    pub fn encoder(&self) -> Result<Encoder> {
        let basis = match &self.embedded_basis {
            Some(v) => BasisSet::from_vectors(self.config.seed, self.config.dim, v.clone())?,
            None => BasisSet::new(self.config.seed, self.config.dim)?,
        };
        Encoder::with_basis(self.config, basis)
    }

    fn check_encoder(&self, encoder: &Encoder) -> Result<()> {
        let cfg = encoder.config();
        if cfg.dim != self.config.dim {
            return Err(Error::DimensionMismatch {
                expected: self.config.dim,
                found: cfg.dim,
            });
        }
        if *cfg != self.config {
            return Err(Error::ConfigMismatch(format!(
                "model was trained with {:?}, encoder uses {:?}",
                self.config, cfg
            )));
        }
        Ok(())
    }

    /// Scores an already-encoded query against every class vector.
    pub fn classify(&self, query: Option<&Hypervector>) -> Result<Prediction> {
        let Some(query) = query else {
            return Ok(Prediction {
                label: self.majority_class(),
                similarities: vec![0.0; self.k()],
                edgeless_fallback: true,
            });
        };
        let similarities = self
            .class_vectors
            .iter()
            .map(|c| cosine_similarity(query, c))
            .collect::<Result<Vec<_>>>()?;
        let mut label = 0;
        for (i, &s) in similarities.iter().enumerate() {
            if s > similarities[label] {
                label = i;
            }
        }
        Ok(Prediction {
            label,
            similarities,
            edgeless_fallback: false,
        })
    }

    /// Encodes `g` exactly as during training and returns the most similar
    /// class, lowest index on ties.
    pub fn predict(&self, g: &Graph, encoder: &Encoder) -> Result<Prediction> {
        self.check_encoder(encoder)?;
        self.classify(encoder.graph_hypervector(g)?.as_ref())
    }

    /// Predicts many graphs in parallel; results keep input order.
    pub fn predict_all(&self, graphs: &[&Graph], encoder: &Encoder) -> Result<Vec<Prediction>> {
        self.check_encoder(encoder)?;
        graphs
            .par_iter()
            .map(|g| self.classify(encoder.graph_hypervector(g)?.as_ref()))
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let dim = self.config.dim;
        let mut out = Vec::with_capacity(HEADER_LEN + self.k() * (4 + 4 * dim) + 4);
        out.extend_from_slice(MODEL_MAGIC);
        out.extend_from_slice(&MODEL_FORMAT_VERSION.to_le_bytes());
        let flags = if self.embedded_basis.is_some() { FLAG_EMBEDDED_BASIS } else { 0 };
        out.extend_from_slice(&flags.to_le_bytes());
        out.extend_from_slice(&(dim as u32).to_le_bytes());
        out.extend_from_slice(&(self.k() as u32).to_le_bytes());
        out.extend_from_slice(&self.config.seed.to_le_bytes());
        out.extend_from_slice(&(self.config.pagerank_iterations as u32).to_le_bytes());
        out.extend_from_slice(&self.config.damping.to_bits().to_le_bytes());
        out.extend_from_slice(&(self.train_graph_count as u64).to_le_bytes());
        out.extend_from_slice(&(self.skipped_edgeless as u64).to_le_bytes());
        for c in &self.class_vectors {
            out.extend_from_slice(&c.n_added().to_le_bytes());
            for &v in c.counts() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        if let Some(basis) = &self.embedded_basis {
            out.extend_from_slice(&(basis.len() as u32).to_le_bytes());
            for v in basis {
                for &w in v.words() {
                    out.extend_from_slice(&w.to_le_bytes());
                }
            }
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN + 4 {
            return Err(Error::ModelFormat(format!(
                "truncated: {} bytes is shorter than the {}-byte header",
                bytes.len(),
                HEADER_LEN + 4
            )));
        }
        if &bytes[..8] != MODEL_MAGIC {
            return Err(Error::ModelFormat("not a model file (bad magic)".into()));
        }
        let (payload, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().unwrap());
        let computed = crc32fast::hash(payload);
        if stored != computed {
            return Err(Error::Checksum { stored, computed });
        }

        let mut r = Reader { buf: payload, pos: 8 };
        let version = r.u16()?;
        if version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported format version {version} (this build reads version {MODEL_FORMAT_VERSION})"
            )));
        }
        let flags = r.u16()?;
        let dim = r.u32()? as usize;
        let k = r.u32()? as usize;
        let config = EncoderConfig {
            dim,
            seed: r.u64()?,
            pagerank_iterations: r.u32()? as usize,
            damping: f64::from_bits(r.u64()?),
        };
        config.validate().map_err(|e| Error::ModelFormat(format!("bad header: {e}")))?;
        let train_graph_count = r.u64()? as usize;
        let skipped_edgeless = r.u64()? as usize;

        let mut class_vectors = Vec::with_capacity(k);
        for i in 0..k {
            let n_added = r.u32()?;
            let counts = (0..dim).map(|_| r.i32()).collect::<Result<Vec<_>>>()?;
            let acc = Accumulator::from_parts(counts, n_added)
                .map_err(|e| Error::ModelFormat(format!("class {i}: {e}")))?;
            class_vectors.push(acc);
        }
        let embedded_basis = if flags & FLAG_EMBEDDED_BASIS != 0 {
            let count = r.u32()? as usize;
            let mut vectors = Vec::with_capacity(count);
            for _ in 0..count {
                let words = (0..words_for(dim)).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
                vectors.push(Hypervector::from_words(dim, words));
            }
            Some(vectors)
        } else {
            None
        };
        if r.pos != payload.len() {
            return Err(Error::ModelFormat(format!(
                "{} unexpected trailing bytes",
                payload.len() - r.pos
            )));
        }
        Ok(Model {
            class_vectors,
            config,
            train_graph_count,
            skipped_edgeless,
            embedded_basis,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }

    /// Loads a model and checks that it was trained at dimension `dim`.
    pub fn load_with_dim(path: impl AsRef<Path>, dim: usize) -> Result<Self> {
        let model = Self::load(path)?;
        if model.config.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: model.config.dim,
            });
        }
        Ok(model)
    }
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    model.save(path)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    Model::load(path)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos + N;
        let bytes = self.buf.get(self.pos..end).ok_or_else(|| {
            Error::ModelFormat(format!("truncated at byte {} of {}", self.pos, self.buf.len()))
        })?;
        self.pos = end;
        Ok(bytes.try_into().unwrap())
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take()?))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }
}
