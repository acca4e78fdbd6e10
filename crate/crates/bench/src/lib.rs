//! Shared inputs for the benchmark targets.

use num_bigint::BigInt;
use num_rational::BigRational;

use hypertoric::linalg::IntMatrix;
use hypertoric::torus::TorusSpec;

pub fn rank2_spec() -> TorusSpec {
    TorusSpec::from_basis(IntMatrix::from_rows(&[
        vec![1, 1, 0, 1, 0],
        vec![1, 0, 1, 0, 1],
    ]))
    .unwrap()
}

pub fn line_spec(n: usize) -> TorusSpec {
    TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1; n + 1]])).unwrap()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// A fixed dense integer matrix with nontrivial invariant factors.
pub fn snf_input() -> IntMatrix {
    IntMatrix::from_rows(&[
        vec![4, -6, 10, 2, 8],
        vec![2, 0, -8, 6, 4],
        vec![0, 3, 9, -3, 12],
        vec![6, 6, 6, 6, 6],
        vec![-2, 4, 0, 10, -8],
    ])
}
