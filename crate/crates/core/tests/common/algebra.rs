//! Randomized checks of the hypervector algebra, runnable from both the
//! property-test target and the acceptance suite.

use graphhd::bitslice::BitSliceAccumulator;
use graphhd::{bind, cosine_similarity, permute, tie_break_signs, Accumulator, Hypervector};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DIMS: [usize; 3] = [8, 64, 10_000];
pub const CASES: u32 = 1000;

fn hv(dim: usize, seed: u64) -> Hypervector {
    Hypervector::random(dim, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn is_bipolar(h: &Hypervector, dim: usize) -> bool {
    let s = h.to_signs();
    s.len() == dim && s.iter().all(|&x| x == 1 || x == -1)
}

fn prop_bipolar_closure(dim: usize, (a, b, shift, n, tie): (u64, u64, i64, usize, u64)) -> Result<(), TestCaseError> {
    let (x, y) = (hv(dim, a), hv(dim, b));
    prop_assert!(is_bipolar(&x, dim));
    prop_assert!(is_bipolar(&bind(&x, &y).unwrap(), dim));
    prop_assert!(is_bipolar(&permute(&x, shift), dim));
    prop_assert!(is_bipolar(&x.negate(), dim));
    let mut acc = Accumulator::new(dim).unwrap();
    for i in 0..n {
        acc.add(&hv(dim, a.wrapping_add(i as u64))).unwrap();
    }
    prop_assert!(is_bipolar(&acc.normalize(tie).unwrap(), dim));
    Ok(())
}

fn prop_bind_algebra(dim: usize, (a, b, c): (u64, u64, u64)) -> Result<(), TestCaseError> {
    let (x, y, z) = (hv(dim, a), hv(dim, b), hv(dim, c));
    let id = Hypervector::identity(dim).unwrap();
    prop_assert_eq!(bind(&x, &x).unwrap(), id.clone());
    prop_assert_eq!(bind(&x, &id).unwrap(), x.clone());
    prop_assert_eq!(bind(&bind(&x, &y).unwrap(), &y).unwrap(), x.clone());
    prop_assert_eq!(bind(&x, &y).unwrap(), bind(&y, &x).unwrap());
    prop_assert_eq!(
        bind(&bind(&x, &y).unwrap(), &z).unwrap(),
        bind(&x, &bind(&y, &z).unwrap()).unwrap()
    );
    // Element-wise product, checked against the signs.
    let xy = bind(&x, &y).unwrap().to_signs();
    for ((p, q), r) in x.to_signs().iter().zip(y.to_signs()).zip(xy) {
        prop_assert_eq!(p * q, r);
    }
    // Binding with a common vector preserves similarity.
    let lhs = cosine_similarity(&bind(&x, &z).unwrap(), &bind(&y, &z).unwrap()).unwrap();
    prop_assert_eq!(lhs, cosine_similarity(&x, &y).unwrap());
    Ok(())
}

fn prop_bundle_majority(dim: usize, (seed, n, tie): (u64, usize, u64)) -> Result<(), TestCaseError> {
    let vectors: Vec<Hypervector> = (0..n).map(|i| hv(dim, seed ^ ((i as u64) << 32))).collect();
    let mut sums = vec![0i64; dim];
    for v in &vectors {
        for (s, x) in sums.iter_mut().zip(v.to_signs()) {
            *s += i64::from(x);
        }
    }
    let mut acc = Accumulator::new(dim).unwrap();
    let mut sliced = BitSliceAccumulator::new(dim).unwrap();
    for v in &vectors {
        acc.add(v).unwrap();
        sliced.add(v).unwrap();
    }
    let counts: Vec<i64> = acc.counts().iter().map(|&c| i64::from(c)).collect();
    prop_assert_eq!(&counts, &sums);
    prop_assert_eq!(acc.n_added() as usize, n);

    let ties = tie_break_signs(tie, dim).unwrap();
    let expected = super::sign_majority(&sums, &ties.to_signs());
    let majority = acc.normalize(tie).unwrap();
    prop_assert_eq!(majority.to_signs(), expected);
    prop_assert_eq!(sliced.majority(&ties).unwrap(), majority);
    prop_assert_eq!(sliced.to_accumulator(), acc);
    Ok(())
}

fn prop_tie_break_determinism(dim: usize, (seed, other, extra): (u64, u64, usize)) -> Result<(), TestCaseError> {
    let t = tie_break_signs(seed, dim).unwrap();
    prop_assert_eq!(&t, &tie_break_signs(seed, dim).unwrap());
    // Element j depends on (seed, j) only.
    let longer = tie_break_signs(seed, dim + extra).unwrap().to_signs();
    prop_assert_eq!(&longer[..dim], &t.to_signs()[..]);
    // An even bundle of x and -x is all ties, so it normalizes to the tie signs.
    let x = hv(dim, other);
    let mut acc = Accumulator::new(dim).unwrap();
    acc.add(&x).unwrap();
    acc.add(&x.negate()).unwrap();
    prop_assert_eq!(acc.normalize(seed).unwrap(), t.clone());
    prop_assert_eq!(acc.normalize(seed).unwrap(), acc.normalize(seed).unwrap());
    Ok(())
}

fn prop_permutation_inverse(dim: usize, (seed, s, t): (u64, i64, i64)) -> Result<(), TestCaseError> {
    let x = hv(dim, seed);
    prop_assert_eq!(permute(&permute(&x, s), -s), x.clone());
    prop_assert_eq!(permute(&permute(&x, s), t), permute(&x, s + t));
    prop_assert_eq!(permute(&x, dim as i64), x.clone());
    let signs = x.to_signs();
    let moved = permute(&x, s).to_signs();
    for (j, &v) in signs.iter().enumerate() {
        prop_assert_eq!(moved[(j as i64 + s).rem_euclid(dim as i64) as usize], v);
    }
    Ok(())
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases: CASES,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub const PROPERTIES: [&str; 5] = [
    "bipolar closure",
    "bind algebra",
    "bundle majority",
    "tie-break determinism",
    "permutation inverse",
];

/// Runs property `name` for `CASES` random cases at dimension `dim`.
pub fn run(name: &str, dim: usize) -> Result<(), String> {
    let mut r = runner();
    // Small shifts stay in range of d; large ones check wrap-around.
    let shift = prop_oneof![-100i64..100, any::<i64>().prop_map(|s| s / 4)];
    match name {
        "bipolar closure" => report(r.run(
            &(any::<u64>(), any::<u64>(), shift, 1usize..8, any::<u64>()),
            |v| prop_bipolar_closure(dim, v),
        )),
        "bind algebra" => report(r.run(&(any::<u64>(), any::<u64>(), any::<u64>()), |v| {
            prop_bind_algebra(dim, v)
        })),
        "bundle majority" => report(r.run(&(any::<u64>(), 1usize..10, any::<u64>()), |v| {
            prop_bundle_majority(dim, v)
        })),
        "tie-break determinism" => report(r.run(&(any::<u64>(), any::<u64>(), 0usize..200), |v| {
            prop_tie_break_determinism(dim, v)
        })),
        "permutation inverse" => report(r.run(&(any::<u64>(), shift.clone(), shift), |v| {
            prop_permutation_inverse(dim, v)
        })),
        other => Err(format!("unknown property {other}")),
    }
}
