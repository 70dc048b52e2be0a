//! Bipolar hypervectors and the core HDC operations.
//!
//! A [`Hypervector`] stores one sign bit per element packed into `u64` words:
//! a set bit is `-1`, a clear bit is `+1`. Binding is then a word-wise XOR and
//! similarity between two bipolar vectors is a popcount. Bits past `dim` in the
//! last word are always zero.
//!
//! An [`Accumulator`] holds the integer column sums of a bundle before the
//! majority vote.

use rand::RngCore;

use crate::basis::keyed_hypervector;
use crate::error::{Error, Result};

/// Stream id reserved for bundle tie-breaking signs. Basis vectors use stream
/// ids equal to their index, so this one never collides in practice.
pub(crate) const TIE_BREAK_STREAM: u64 = u64::MAX;

pub(crate) const fn words_for(dim: usize) -> usize {
    dim.div_ceil(64)
}

fn tail_mask(dim: usize) -> u64 {
    match dim % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A bipolar vector with elements in {-1, +1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypervector {
    dim: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for Hypervector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let preview: String = self
            .iter()
            .take(16)
            .map(|s| if s > 0 { '+' } else { '-' })
            .collect();
        write!(f, "Hypervector(dim={}, [{}", self.dim, preview)?;
        if self.dim > 16 {
            write!(f, "...")?;
        }
        write!(f, "])")
    }
}

impl Hypervector {
    /// The all-(+1) vector, identity element of binding.
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            dim,
            words: vec![0; words_for(dim)],
        })
    }

    /// Builds a hypervector from explicit signs. Every entry must be -1 or +1.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut h = Self::identity(signs.len())?;
        for (j, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => h.words[j / 64] |= 1 << (j % 64),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "element {j} is {other}, expected -1 or +1"
                    )))
                }
            }
        }
        Ok(h)
    }

    /// Draws every element uniformly from {-1, +1}.
    pub fn random<R: RngCore + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        let words = (0..words_for(dim)).map(|_| rng.next_u64()).collect();
        Ok(Self::from_words(dim, words))
    }

    /// Wraps packed sign words (set bit = -1), clearing bits past `dim`.
    pub(crate) fn from_words(dim: usize, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(dim));
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(dim);
        }
        Self { dim, words }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Packed sign words; bit `j % 64` of word `j / 64` is set when element `j` is -1.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Element `j` as -1 or +1.
    pub fn get(&self, j: usize) -> i8 {
        assert!(j < self.dim, "index {j} out of range for dim {}", self.dim);
        if self.words[j / 64] >> (j % 64) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.dim).map(move |j| self.get(j))
    }

    pub fn to_signs(&self) -> Vec<i8> {
        self.iter().collect()
    }

    /// Number of -1 elements.
    pub fn count_negative(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn negate(&self) -> Self {
        let words = self.words.iter().map(|w| !w).collect();
        Self::from_words(self.dim, words)
    }

    /// Element-wise product.
    pub fn bind(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self::from_words(self.dim, words))
    }

    /// Cyclic rotation: element `j` moves to position `(j + shift) mod dim`.
    pub fn permute(&self, shift: i64) -> Self {
        let d = self.dim as i64;
        let shift = shift.rem_euclid(d) as usize;
        if shift == 0 {
            return self.clone();
        }
        let mut words = vec![0u64; self.words.len()];
        for j in 0..self.dim {
            if self.words[j / 64] >> (j % 64) & 1 == 1 {
                let t = (j + shift) % self.dim;
                words[t / 64] |= 1 << (t % 64);
            }
        }
        Self::from_words(self.dim, words)
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming(&self, other: &Self) -> Result<usize> {
        check_dims(self.dim, other.dim)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn dot(&self, other: &Self) -> Result<i64> {
        let h = self.hamming(other)? as i64;
        Ok(self.dim as i64 - 2 * h)
    }
}

/// Element-wise product of two hypervectors.
pub fn bind(a: &Hypervector, b: &Hypervector) -> Result<Hypervector> {
    a.bind(b)
}

/// Cyclic rotation by `shift` positions.
pub fn permute(h: &Hypervector, shift: i64) -> Hypervector {
    h.permute(shift)
}

/// The signs used to resolve zero counts when normalizing a bundle with an
/// even number of addends. Element `j` depends only on `(seed, j)`.
pub fn tie_break_signs(seed: u64, dim: usize) -> Result<Hypervector> {
    keyed_hypervector(seed, TIE_BREAK_STREAM, dim)
}

/// Integer column sums of a bundle of bipolar vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Accumulator {
    counts: Vec<i32>,
    n_added: u32,
}

impl Accumulator {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            counts: vec![0; dim],
            n_added: 0,
        })
    }

    /// Rebuilds an accumulator from stored counts, checking the magnitude and
    /// parity invariants of a sum of `n_added` bipolar vectors.
    pub fn from_parts(counts: Vec<i32>, n_added: u32) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let n = i64::from(n_added);
        for (j, &c) in counts.iter().enumerate() {
            let c = i64::from(c);
            if c.abs() > n || (c - n).rem_euclid(2) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "count {c} at element {j} is not reachable with {n_added} bipolar addends"
                )));
            }
        }
        Ok(Self { counts, n_added })
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[i32] {
        &self.counts
    }

    pub fn n_added(&self) -> u32 {
        self.n_added
    }

    pub fn is_empty(&self) -> bool {
        self.n_added == 0
    }

    /// Adds one bipolar vector to the column sums.
    pub fn add(&mut self, h: &Hypervector) -> Result<()> {
        check_dims(self.dim(), h.dim())?;
        for (chunk, &w) in self.counts.chunks_mut(64).zip(h.words()) {
            for (b, c) in chunk.iter_mut().enumerate() {
                *c += 1 - 2 * ((w >> b) & 1) as i32;
            }
        }
        self.n_added += 1;
        Ok(())
    }

    /// Adds `bind(a, b)` without materializing the bound vector.
    pub fn add_bound(&mut self, a: &Hypervector, b: &Hypervector) -> Result<()> {
        check_dims(self.dim(), a.dim())?;
        check_dims(self.dim(), b.dim())?;
        for ((chunk, &wa), &wb) in self.counts.chunks_mut(64).zip(a.words()).zip(b.words()) {
            let w = wa ^ wb;
            for (bit, c) in chunk.iter_mut().enumerate() {
                *c += 1 - 2 * ((w >> bit) & 1) as i32;
            }
        }
        self.n_added += 1;
        Ok(())
    }

    /// Adds another accumulator's counts. Merging is associative and
    /// commutative, so partial bundles built on separate threads can be
    /// combined in any order.
    pub fn merge(&mut self, other: &Accumulator) -> Result<()> {
        check_dims(self.dim(), other.dim())?;
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.n_added += other.n_added;
        Ok(())
    }

    /// Majority vote: the sign of each count. Zero counts take the sign of
    /// `tie_break_signs(tie_seed, dim)` at that element.
    pub fn normalize(&self, tie_seed: u64) -> Result<Hypervector> {
        if self.is_empty() {
            return Err(Error::EmptyBundle);
        }
        let dim = self.dim();
        let mut words = vec![0u64; words_for(dim)];
        let mut has_ties = false;
        for (word, chunk) in words.iter_mut().zip(self.counts.chunks(64)) {
            for (b, &c) in chunk.iter().enumerate() {
                *word |= u64::from(c < 0) << b;
                has_ties |= c == 0;
            }
        }
        if has_ties {
            let ties = tie_break_signs(tie_seed, dim)?;
            for ((word, chunk), &t) in words.iter_mut().zip(self.counts.chunks(64)).zip(ties.words()) {
                let zero_mask = chunk
                    .iter()
                    .enumerate()
                    .fold(0u64, |m, (b, &c)| m | (u64::from(c == 0) << b));
                *word |= zero_mask & t;
            }
        }
        Ok(Hypervector::from_words(dim, words))
    }

    fn dot_bipolar(&self, h: &Hypervector) -> i64 {
        let mut dot = 0i64;
        for (chunk, &w) in self.counts.chunks(64).zip(h.words()) {
            for (b, &c) in chunk.iter().enumerate() {
                let c = i64::from(c);
                dot += if (w >> b) & 1 == 1 { -c } else { c };
            }
        }
        dot
    }

    fn norm_squared(&self) -> i64 {
        self.counts.iter().map(|&c| i64::from(c) * i64::from(c)).sum()
    }
}

/// Returns `acc` with `h` added.
pub fn bundle_accumulate(mut acc: Accumulator, h: &Hypervector) -> Result<Accumulator> {
    acc.add(h)?;
    Ok(acc)
}

/// Majority vote over an accumulator; see [`Accumulator::normalize`].
pub fn normalize(acc: &Accumulator, tie_seed: u64) -> Result<Hypervector> {
    acc.normalize(tie_seed)
}

/// Either kind of vector that can enter a similarity computation.
#[derive(Clone, Copy, Debug)]
pub enum VectorRef<'a> {
    Bipolar(&'a Hypervector),
    Counts(&'a Accumulator),
}

impl<'a> From<&'a Hypervector> for VectorRef<'a> {
    fn from(h: &'a Hypervector) -> Self {
        VectorRef::Bipolar(h)
    }
}

impl<'a> From<&'a Accumulator> for VectorRef<'a> {
    fn from(a: &'a Accumulator) -> Self {
        VectorRef::Counts(a)
    }
}

impl VectorRef<'_> {
    pub fn dim(&self) -> usize {
        match self {
            VectorRef::Bipolar(h) => h.dim(),
            VectorRef::Counts(a) => a.dim(),
        }
    }

    fn norm_squared(&self) -> i64 {
        match self {
            VectorRef::Bipolar(h) => h.dim() as i64,
            VectorRef::Counts(a) => a.norm_squared(),
        }
    }
}

/// Cosine similarity between bipolar vectors and/or integer accumulators.
pub fn cosine_similarity<'a, 'b>(
    a: impl Into<VectorRef<'a>>,
    b: impl Into<VectorRef<'b>>,
) -> Result<f64> {
    let (a, b) = (a.into(), b.into());
    check_dims(a.dim(), b.dim())?;
    let dot = match (a, b) {
        (VectorRef::Bipolar(x), VectorRef::Bipolar(y)) => x.dot(y)?,
        (VectorRef::Counts(x), VectorRef::Bipolar(y)) | (VectorRef::Bipolar(y), VectorRef::Counts(x)) => {
            x.dot_bipolar(y)
        }
        (VectorRef::Counts(x), VectorRef::Counts(y)) => x
            .counts
            .iter()
            .zip(&y.counts)
            .map(|(&p, &q)| i64::from(p) * i64::from(q))
            .sum(),
    };
    let (na, nb) = (a.norm_squared(), b.norm_squared());
    if na == 0 || nb == 0 {
        return Err(Error::UndefinedSimilarity);
    }
    // sqrt of the product keeps cos(x, x) exactly 1 whenever na * nb is exact.
    let cos = dot as f64 / (na as f64 * nb as f64).sqrt();
    Ok(cos.clamp(-1.0, 1.0))
}

/// Record-based encoding: binds each key to its value and takes the majority
/// of the bound pairs.
pub fn encode_record(keys: &[Hypervector], values: &[Hypervector], tie_seed: u64) -> Result<Hypervector> {
    if keys.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: keys.len(),
            right: values.len(),
        });
    }
    let first = keys.first().ok_or(Error::EmptyBundle)?;
    let mut acc = Accumulator::new(first.dim())?;
    for (k, v) in keys.iter().zip(values) {
        acc.add_bound(k, v)?;
    }
    acc.normalize(tie_seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(matches!(Hypervector::identity(0), Err(Error::InvalidDimension(0))));
        assert!(matches!(Accumulator::new(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn from_signs_round_trips_and_rejects_zero() {
        let signs = [1, -1, -1, 1, 1, -1, 1];
        let h = Hypervector::from_signs(&signs).unwrap();
        assert_eq!(h.to_signs(), signs);
        assert!(Hypervector::from_signs(&[1, 0, -1]).is_err());
    }

    #[test]
    fn bind_with_self_is_identity() {
        let x = Hypervector::random(10_000, &mut rng(1)).unwrap();
        let id = Hypervector::identity(10_000).unwrap();
        assert_eq!(bind(&x, &x).unwrap(), id);
        assert_eq!(bind(&x, &id).unwrap(), x);
    }

    #[test]
    fn bind_dimension_mismatch() {
        let a = Hypervector::identity(8).unwrap();
        let b = Hypervector::identity(9).unwrap();
        assert!(matches!(
            bind(&a, &b),
            Err(Error::DimensionMismatch { expected: 8, found: 9 })
        ));
    }

    #[test]
    fn normalize_signs() {
        let acc = Accumulator::from_parts(vec![3, -1, 5], 5).unwrap();
        assert_eq!(acc.normalize(0).unwrap().to_signs(), vec![1, -1, 1]);
    }

    #[test]
    fn normalize_breaks_ties_deterministically() {
        let acc = Accumulator::from_parts(vec![0, 2], 2).unwrap();
        let a = acc.normalize(7).unwrap();
        let b = acc.normalize(7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(1), 1);
        assert_eq!(a.get(0), tie_break_signs(7, 2).unwrap().get(0));
    }

    #[test]
    fn tie_signs_are_balanced_across_seeds() {
        let d = 10_000;
        let neg = tie_break_signs(3, d).unwrap().count_negative();
        assert!((neg as f64 / d as f64 - 0.5).abs() < 0.02);
    }

    #[test]
    fn normalize_empty_bundle_fails() {
        let acc = Accumulator::new(4).unwrap();
        assert!(matches!(acc.normalize(0), Err(Error::EmptyBundle)));
    }

    #[test]
    fn majority_of_one_and_two_vs_one() {
        let mut r = rng(5);
        let x = Hypervector::random(1000, &mut r).unwrap();
        let y = Hypervector::random(1000, &mut r).unwrap();
        let one = bundle_accumulate(Accumulator::new(1000).unwrap(), &x).unwrap();
        assert_eq!(normalize(&one, 0).unwrap(), x);
        let mut acc = Accumulator::new(1000).unwrap();
        for h in [&x, &x, &y] {
            acc.add(h).unwrap();
        }
        assert_eq!(acc.normalize(0).unwrap(), x);
    }

    #[test]
    fn from_parts_checks_parity_and_magnitude() {
        assert!(Accumulator::from_parts(vec![1, 2], 3).is_err());
        assert!(Accumulator::from_parts(vec![5], 3).is_err());
        assert!(Accumulator::from_parts(vec![-3, 1], 3).is_ok());
    }

    #[test]
    fn permute_rotates_right() {
        let h = Hypervector::from_signs(&[1, -1, -1, 1, -1]).unwrap();
        assert_eq!(h.permute(1).to_signs(), vec![-1, 1, -1, -1, 1]);
        assert_eq!(h.permute(0), h);
        assert_eq!(h.permute(5), h);
        assert_eq!(h.permute(-2).permute(2), h);
    }

    #[test]
    fn cosine_edge_cases() {
        let x = Hypervector::random(10_000, &mut rng(2)).unwrap();
        assert_eq!(cosine_similarity(&x, &x).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&x, &x.negate()).unwrap(), -1.0);
        let zero = Accumulator::from_parts(vec![0; 10_000], 2).unwrap();
        assert!(matches!(cosine_similarity(&zero, &x), Err(Error::UndefinedSimilarity)));
        let mut acc = Accumulator::new(10_000).unwrap();
        acc.add(&x).unwrap();
        assert_eq!(cosine_similarity(&acc, &x).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&x, &acc).unwrap(), 1.0);
        acc.add(&x).unwrap();
        assert_eq!(cosine_similarity(&acc, &acc).unwrap(), 1.0);
    }

    #[test]
    fn encode_record_single_pair_and_errors() {
        let mut r = rng(3);
        let k = Hypervector::random(256, &mut r).unwrap();
        let v = Hypervector::random(256, &mut r).unwrap();
        assert_eq!(
            encode_record(std::slice::from_ref(&k), std::slice::from_ref(&v), 0).unwrap(),
            bind(&k, &v).unwrap()
        );
        assert!(matches!(encode_record(&[], &[], 0), Err(Error::EmptyBundle)));
        assert!(matches!(
            encode_record(std::slice::from_ref(&k), &[v.clone(), v], 0),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn tail_bits_stay_clear() {
        let h = Hypervector::random(70, &mut rng(9)).unwrap();
        assert_eq!(h.words()[1] >> 6, 0);
        assert_eq!(h.negate().words()[1] >> 6, 0);
        assert_eq!(h.negate().count_negative() + h.count_negative(), 70);
    }
}
