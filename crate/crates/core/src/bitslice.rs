//! Bit-sliced bundling.
//!
//! Keeps, for every element, the number of `-1` addends seen so far as a
//! binary counter spread across bit planes: bit `p` of element `j`'s counter
//! lives in bit `j % 64` of `planes[p][j / 64]`. Adding a packed hypervector is
//! a ripple-carry add of one bit per element, done 64 elements at a time, and
//! the majority vote is a word-parallel comparison against `n_added / 2`.

use crate::error::{Error, Result};
use crate::hypervector::{words_for, Accumulator, Hypervector};

#[derive(Clone, Debug)]
pub struct BitSliceAccumulator {
    dim: usize,
    planes: Vec<Vec<u64>>,
    n_added: u32,
}

impl BitSliceAccumulator {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            dim,
            planes: Vec::new(),
            n_added: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_added(&self) -> u32 {
        self.n_added
    }

    fn check(&self, h: &Hypervector) -> Result<()> {
        if h.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: h.dim(),
            });
        }
        Ok(())
    }

    #[inline]
    fn add_word(&mut self, w: usize, mut x: u64) {
        for plane in self.planes.iter_mut() {
            if x == 0 {
                return;
            }
            let carry = plane[w] & x;
            plane[w] ^= x;
            x = carry;
        }
        if x != 0 {
            let mut plane = vec![0u64; words_for(self.dim)];
            plane[w] = x;
            self.planes.push(plane);
        }
    }

    pub fn add(&mut self, h: &Hypervector) -> Result<()> {
        self.check(h)?;
        for (w, &x) in h.words().iter().enumerate() {
            self.add_word(w, x);
        }
        self.n_added += 1;
        Ok(())
    }

    /// Adds `bind(a, b)`; the sign bits of the product are `a ^ b`.
    pub fn add_bound(&mut self, a: &Hypervector, b: &Hypervector) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        for (w, (&x, &y)) in a.words().iter().zip(b.words()).enumerate() {
            self.add_word(w, x ^ y);
        }
        self.n_added += 1;
        Ok(())
    }

    /// Number of `-1` addends at element `j`.
    pub fn negatives_at(&self, j: usize) -> u32 {
        let (w, b) = (j / 64, j % 64);
        self.planes
            .iter()
            .enumerate()
            .map(|(p, plane)| (((plane[w] >> b) & 1) as u32) << p)
            .sum()
    }

    /// Converts to integer column sums: `count = n_added - 2 * negatives`.
    pub fn to_accumulator(&self) -> Accumulator {
        let n = self.n_added as i32;
        let counts = (0..self.dim)
            .map(|j| n - 2 * self.negatives_at(j) as i32)
            .collect();
        Accumulator::from_parts(counts, self.n_added).expect("bit-sliced counts satisfy the bundle invariants")
    }

    /// Word-parallel majority vote. An element is `-1` when more than half of
    /// the addends were `-1`; exact halves take the sign from `tie_signs`.
    pub fn majority(&self, tie_signs: &Hypervector) -> Result<Hypervector> {
        if self.n_added == 0 {
            return Err(Error::EmptyBundle);
        }
        self.check(tie_signs)?;
        let threshold = self.n_added / 2;
        let even = self.n_added.is_multiple_of(2);
        let top = self.planes.len().max(32 - threshold.leading_zeros() as usize);
        let mut out = Vec::with_capacity(words_for(self.dim));
        for (w, &tie) in tie_signs.words().iter().enumerate() {
            // Compare the per-element counter against `threshold` from the
            // most significant plane down.
            let mut greater = 0u64;
            let mut equal = u64::MAX;
            for p in (0..top).rev() {
                let x = self.planes.get(p).map_or(0, |plane| plane[w]);
                if (threshold >> p) & 1 == 1 {
                    equal &= x;
                } else {
                    greater |= equal & x;
                    equal &= !x;
                }
            }
            let ties = if even { equal & tie } else { 0 };
            out.push(greater | ties);
        }
        Ok(Hypervector::from_words(self.dim, out))
    }
}
