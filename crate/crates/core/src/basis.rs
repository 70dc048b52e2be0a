//! Seeded basis hypervectors.
//!
//! Vector `i` of a basis is drawn from a ChaCha8 generator seeded with the
//! basis seed and positioned on stream `i`, so every vector is a pure function
//! of `(seed, i, dim)` and can be materialized in any order.

use std::sync::{Arc, RwLock};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypervector::{words_for, Hypervector};

pub(crate) fn keyed_hypervector(seed: u64, stream: u64, dim: usize) -> Result<Hypervector> {
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let words = (0..words_for(dim)).map(|_| rng.next_u64()).collect();
    Ok(Hypervector::from_words(dim, words))
}

/// Basis vector `index` for the given seed and dimension.
pub fn basis_vector(seed: u64, dim: usize, index: usize) -> Result<Hypervector> {
    keyed_hypervector(seed, index as u64, dim)
}

/// A lazily extended, shareable sequence of random basis hypervectors.
///
/// Reads take a shared lock; extension happens under the write lock, so
/// concurrent first access from several encoding threads is safe.
pub struct BasisSet {
    seed: u64,
    dim: usize,
    vectors: RwLock<Vec<Arc<Hypervector>>>,
}

impl std::fmt::Debug for BasisSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BasisSet")
            .field("seed", &self.seed)
            .field("dim", &self.dim)
            .field("materialized", &self.len())
            .finish()
    }
}

/// Creates a basis with its first `count` vectors materialized.
pub fn generate_basis(seed: u64, dim: usize, count: usize) -> Result<BasisSet> {
    let basis = BasisSet::new(seed, dim)?;
    basis.reserve(count);
    Ok(basis)
}

impl BasisSet {
    pub fn new(seed: u64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            seed,
            dim,
            vectors: RwLock::new(Vec::new()),
        })
    }

    /// Builds a basis whose leading vectors are given explicitly (for example
    /// read back from a model file). Further indices are generated from `seed`.
    pub fn from_vectors(seed: u64, dim: usize, vectors: Vec<Hypervector>) -> Result<Self> {
        let basis = Self::new(seed, dim)?;
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        *basis.vectors.write().expect("basis lock poisoned") =
            vectors.into_iter().map(Arc::new).collect();
        Ok(basis)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors materialized so far.
    pub fn len(&self) -> usize {
        self.vectors.read().expect("basis lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ensures at least `count` vectors are materialized.
    pub fn reserve(&self, count: usize) {
        if self.len() >= count {
            return;
        }
        let mut vectors = self.vectors.write().expect("basis lock poisoned");
        let start = vectors.len();
        for i in start..count {
            let v = keyed_hypervector(self.seed, i as u64, self.dim)
                .expect("dimension validated at construction");
            vectors.push(Arc::new(v));
        }
    }

    /// Vector `index`, materializing it (and all lower indices) if needed.
    pub fn get(&self, index: usize) -> Arc<Hypervector> {
        self.reserve(index + 1);
        Arc::clone(&self.vectors.read().expect("basis lock poisoned")[index])
    }

    /// The vectors at each of `indices`, taking the lock once.
    pub fn get_many(&self, indices: &[usize]) -> Vec<Arc<Hypervector>> {
        if let Some(&max) = indices.iter().max() {
            self.reserve(max + 1);
        }
        let vectors = self.vectors.read().expect("basis lock poisoned");
        indices.iter().map(|&i| Arc::clone(&vectors[i])).collect()
    }

    /// Clones of the materialized vectors, in index order.
    pub fn materialized(&self) -> Vec<Hypervector> {
        self.vectors
            .read()
            .expect("basis lock poisoned")
            .iter()
            .map(|v| (**v).clone())
            .collect()
    }
}
