//! Fixtures shared by the criterion benches.

use spf_core::functor::FunctorExpr;
use spf_core::linalg::{Matrix, Ring};

pub fn functor(s: &str) -> FunctorExpr {
    s.parse().expect("bench functor")
}

/// A dense n×n integer matrix with entries from a fixed linear congruence in [−4, 4].
pub fn congruential_matrix(n: usize, seed: u64) -> Matrix {
    let mut x = seed;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((x >> 33) % 9) as i64 - 4
                })
                .collect()
        })
        .collect();
    Matrix::from_i64_rows(Ring::Integers, &rows)
}

/// (functor, ring, rank, height) triples for the simplicial engine.
pub fn derived_cases() -> Vec<(&'static str, Ring, usize, usize)> {
    vec![
        ("G[2]", Ring::Integers, 2, 1),
        ("S[3]", Ring::PrimeField(3), 1, 2),
        ("Schur[2,1]", Ring::Integers, 2, 1),
        ("T[2]", Ring::Integers, 1, 2),
    ]
}
