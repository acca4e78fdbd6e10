//! The subtorus model: a rank-`d` subtorus of the compact `N`-torus given by
//! an integer basis matrix `B` of its Lie-algebra lattice, together with the
//! derived Gale dual, weight vectors, walls, and the regularity and
//! smoothness tests.
//!
//! Coordinates: the weight of the subtorus on the `i`-th quaternionic
//! coordinate is column `i` of `B`, written in the basis dual to `B`'s rows.
//! All indices in this crate are 0-based; the CLI renders them 1-based.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    gale_dual, is_saturated, primitive_vector, rank_of_bigint_rows, saturate, IntMatrix,
};

/// A validated subtorus: the basis `B`, its Gale dual `A`, and the derived
/// degeneracy bookkeeping.
#[derive(Debug, Clone)]
pub struct TorusSpec {
    b: IntMatrix,
    a: IntMatrix,
    zero_weight_cols: Vec<usize>,
    zero_projection_cols: Vec<usize>,
}

impl TorusSpec {
    /// Validate a basis matrix and derive the spec. Fails on empty-width,
    /// rank-deficient or unsaturated input; the unsaturated error carries a
    /// saturated replacement basis.
    pub fn from_basis(b: IntMatrix) -> Result<Self> {
        // the 0x0 basis is the point spec, needed as a recursion base for
        // fixed loci; any other empty-width basis is malformed
        if b.cols() == 0 && b.rows() > 0 {
            return Err(Error::InvalidTorus("ambient rank is zero".into()));
        }
        if b.rows() > 0 {
            for r in 0..b.rows() {
                if b.row(r).iter().all(Zero::is_zero) {
                    return Err(Error::InvalidTorus(format!("basis row {r} is zero")));
                }
            }
            if b.rank() < b.rows() {
                return Err(Error::InvalidTorus(
                    "basis rows are linearly dependent".into(),
                ));
            }
            if !is_saturated(&b)? {
                return Err(Error::Unsaturated {
                    saturation: saturate(&b),
                });
            }
        }
        let a = gale_dual(&b)?;
        let zero_weight_cols = (0..b.cols())
            .filter(|&i| b.column(i).iter().all(Zero::is_zero))
            .collect();
        let zero_projection_cols = (0..a.cols())
            .filter(|&i| a.column(i).iter().all(Zero::is_zero))
            .collect();
        Ok(Self {
            b,
            a,
            zero_weight_cols,
            zero_projection_cols,
        })
    }

    /// Ambient rank `N`.
    pub fn ambient_rank(&self) -> usize {
        self.b.cols()
    }

    /// Rank `d` of the subtorus.
    pub fn rank(&self) -> usize {
        self.b.rows()
    }

    /// Rank `n = N - d` of the quotient torus.
    pub fn quotient_rank(&self) -> usize {
        self.ambient_rank() - self.rank()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.b
    }

    /// The Gale dual `A` (`n x N`, `A B^T = 0`, surjective over the integers).
    pub fn gale(&self) -> &IntMatrix {
        &self.a
    }

    /// Weight of the subtorus action on coordinate `i` (column `i` of `B`).
    pub fn weight(&self, i: usize) -> Vec<BigInt> {
        self.b.column(i)
    }

    /// Normal vector of the `i`-th arrangement hyperplane (column `i` of `A`).
    pub fn hyperplane_normal(&self, i: usize) -> Vec<BigInt> {
        self.a.column(i)
    }

    /// Coordinates with zero weight: each splits off a flat quaternionic
    /// factor and takes no part in walls or circuits.
    pub fn zero_weights(&self) -> &[usize] {
        &self.zero_weight_cols
    }

    /// Coordinates whose quotient projection vanishes: the corresponding
    /// hyperplane is empty for every regular parameter.
    pub fn zero_projections(&self) -> &[usize] {
        &self.zero_projection_cols
    }
}

/// Rational parameter of the quotient, in reduced units. `alpha` is the real
/// parameter; `beta_re`/`beta_im` carry the complex one.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub alpha: Vec<BigRational>,
    pub beta_re: Vec<BigRational>,
    pub beta_im: Vec<BigRational>,
}

impl Parameter {
    pub fn new(
        alpha: Vec<BigRational>,
        beta_re: Vec<BigRational>,
        beta_im: Vec<BigRational>,
    ) -> Result<Self> {
        if alpha.len() != beta_re.len() || alpha.len() != beta_im.len() {
            return Err(Error::Dimension(
                "alpha, beta_re and beta_im must have equal length".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta_re,
            beta_im,
        })
    }

    /// Parameter with the given real part and zero complex part.
    pub fn real(alpha: Vec<BigRational>) -> Self {
        let d = alpha.len();
        Self {
            alpha,
            beta_re: vec![BigRational::zero(); d],
            beta_im: vec![BigRational::zero(); d],
        }
    }

    pub fn rank(&self) -> usize {
        self.alpha.len()
    }
}

/// A wall: a codimension-one subspace of the dual of the subtorus algebra
/// spanned by weight vectors. `normal` is the primitive integer normal with
/// positive leading entry; `circuit` lists the coordinates pairing
/// nontrivially with it and `span_set` the nonzero weights lying on the wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub id: usize,
    pub normal: Vec<BigInt>,
    pub span_set: Vec<usize>,
    pub circuit: Vec<usize>,
}

impl Wall {
    /// The wall normal written in ambient coordinates (`normal^T B`).
    pub fn ambient_normal(&self, spec: &TorusSpec) -> Vec<BigInt> {
        let n = spec.ambient_rank();
        let mut out = vec![BigInt::zero(); n];
        for (j, y) in self.normal.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            for (c, out_c) in out.iter_mut().enumerate() {
                *out_c += y * spec.basis().entry(j, c);
            }
        }
        out
    }
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_rat_int(a: &[BigRational], b: &[BigInt]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * BigRational::from(y.clone()))
        .sum()
}

/// All walls of the weight configuration, one per distinct hyperplane
/// spanned by weights, sorted by (circuit size, circuit) and id-numbered in
/// that order. For rank one the single wall is the origin.
pub fn enumerate_walls(spec: &TorusSpec) -> Vec<Wall> {
    let d = spec.rank();
    let nonzero: Vec<usize> = (0..spec.ambient_rank())
        .filter(|i| !spec.zero_weight_cols.contains(i))
        .collect();
    let mut normals: Vec<Vec<BigInt>> = Vec::new();
    if d == 1 {
        normals.push(vec![BigInt::from(1)]);
    } else {
        // spanning subsets of size d-1 with rank d-1 determine the hyperplanes
        for subset in subsets_of_size(&nonzero, d - 1) {
            let cols: Vec<Vec<BigInt>> = subset.iter().map(|&i| spec.weight(i)).collect();
            if rank_of_bigint_rows(&cols) != d - 1 {
                continue;
            }
            let mat = IntMatrix::from_bigint_rows(cols, d);
            let kernel = crate::linalg::integer_kernel_basis(&mat);
            debug_assert_eq!(kernel.rows(), 1);
            let normal = primitive_vector(kernel.row(0));
            if !normals.contains(&normal) {
                normals.push(normal);
            }
        }
    }
    let mut walls: Vec<Wall> = normals
        .into_iter()
        .map(|normal| {
            let mut span_set = Vec::new();
            let mut circuit = Vec::new();
            for i in 0..spec.ambient_rank() {
                if spec.zero_weight_cols.contains(&i) {
                    continue;
                }
                if dot_int(&spec.weight(i), &normal).is_zero() {
                    span_set.push(i);
                } else {
                    circuit.push(i);
                }
            }
            Wall {
                id: 0,
                normal,
                span_set,
                circuit,
            }
        })
        .collect();
    walls.sort_by(|a, b| (a.circuit.len(), &a.circuit).cmp(&(b.circuit.len(), &b.circuit)));
    for (id, w) in walls.iter_mut().enumerate() {
        w.id = id;
    }
    walls
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        items: &[usize],
        start: usize,
        k: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = items.len() - start;
        if remaining < k - cur.len() {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, i + 1, k, cur, out);
            cur.pop();
        }
    }
    go(items, 0, k, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub regular: bool,
    /// Walls on which the whole parameter triple vanishes.
    pub violating_walls: Vec<usize>,
}

/// A parameter is regular unless some wall annihilates alpha and both parts
/// of beta simultaneously.
pub fn is_regular_value(walls: &[Wall], param: &Parameter) -> RegularityReport {
    let violating: Vec<usize> = walls
        .iter()
        .filter(|w| {
            dot_rat_int(&param.alpha, &w.normal).is_zero()
                && dot_rat_int(&param.beta_re, &w.normal).is_zero()
                && dot_rat_int(&param.beta_im, &w.normal).is_zero()
        })
        .map(|w| w.id)
        .collect();
    RegularityReport {
        regular: violating.is_empty(),
        violating_walls: violating,
    }
}

#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// A column set whose nonsingular minor has determinant of magnitude > 1.
    pub witness: Option<Vec<usize>>,
}

/// The quotient is smooth (the subtorus acts freely on regular fibers) iff
/// every nonsingular `d x d` minor of `B` is unimodular.
pub fn is_smooth(spec: &TorusSpec) -> SmoothnessReport {
    use num_traits::{One, Signed};
    let d = spec.rank();
    let all: Vec<usize> = (0..spec.ambient_rank()).collect();
    for subset in subsets_of_size(&all, d) {
        let sub = spec.basis().select_columns(&subset);
        let det = sub.determinant();
        if !det.is_zero() && det.abs() > BigInt::one() {
            return SmoothnessReport {
                smooth: false,
                witness: Some(subset),
            };
        }
    }
    SmoothnessReport {
        smooth: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    pub(crate) fn rank2_example() -> TorusSpec {
        TorusSpec::from_basis(IntMatrix::from_rows(&[
            vec![1, 1, 0, 1, 0],
            vec![1, 0, 1, 0, 1],
        ]))
        .unwrap()
    }

    pub(crate) fn line_example(n: usize) -> TorusSpec {
        TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1; n + 1]])).unwrap()
    }

    #[test]
    fn validates_line_example() {
        let spec = line_example(1);
        assert_eq!(spec.ambient_rank(), 2);
        assert_eq!(spec.rank(), 1);
        assert_eq!(spec.quotient_rank(), 1);
        assert_eq!(spec.weight(0), vec![BigInt::one()]);
        assert_eq!(spec.weight(1), vec![BigInt::one()]);
        assert!(spec.zero_weights().is_empty());
    }

    #[test]
    fn validates_rank2_example_weights() {
        let spec = rank2_example();
        assert_eq!(spec.weight(0), vec![BigInt::one(), BigInt::one()]);
        assert_eq!(spec.weight(1), vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(spec.weight(3), vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(spec.weight(2), vec![BigInt::zero(), BigInt::one()]);
        assert_eq!(spec.weight(4), vec![BigInt::zero(), BigInt::one()]);
    }

    #[test]
    fn flags_zero_weight_split() {
        let spec =
            TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]])).unwrap();
        assert_eq!(spec.zero_weights(), &[2]);
    }

    #[test]
    fn rejects_degenerate_bases() {
        assert!(TorusSpec::from_basis(IntMatrix::from_rows(&[vec![0, 0]])).is_err());
        assert!(TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1, 1], vec![2, 2]])).is_err());
        match TorusSpec::from_basis(IntMatrix::from_rows(&[vec![2, 2]])) {
            Err(Error::Unsaturated { saturation }) => {
                assert_eq!(saturation, IntMatrix::from_rows(&[vec![1, 1]]));
            }
            other => panic!("expected unsaturated, got {other:?}"),
        }
    }

    #[test]
    fn walls_of_rank2_example() {
        let spec = rank2_example();
        let walls = enumerate_walls(&spec);
        assert_eq!(walls.len(), 3);
        // sorted by (|circuit|, circuit)
        assert_eq!(walls[0].circuit, vec![0, 1, 3]);
        assert_eq!(walls[0].normal, vec![BigInt::from(1), BigInt::from(0)]);
        assert_eq!(walls[0].span_set, vec![2, 4]);
        assert_eq!(walls[1].circuit, vec![0, 2, 4]);
        assert_eq!(walls[1].normal, vec![BigInt::from(0), BigInt::from(1)]);
        assert_eq!(walls[1].span_set, vec![1, 3]);
        assert_eq!(walls[2].circuit, vec![1, 2, 3, 4]);
        assert_eq!(walls[2].normal, vec![BigInt::from(1), BigInt::from(-1)]);
        assert_eq!(walls[2].span_set, vec![0]);
        // ambient normals match the isotropy generators up to nothing at all
        assert_eq!(
            walls[1].ambient_normal(&spec),
            [1, 0, 1, 0, 1].map(BigInt::from).to_vec()
        );
        assert_eq!(
            walls[2].ambient_normal(&spec),
            [0, 1, -1, 1, -1].map(BigInt::from).to_vec()
        );
    }

    #[test]
    fn wall_partition_covers_everything() {
        let spec = rank2_example();
        for w in enumerate_walls(&spec) {
            let mut both: Vec<usize> = w.span_set.iter().chain(&w.circuit).copied().collect();
            both.sort_unstable();
            assert_eq!(both, vec![0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn rank1_has_single_origin_wall() {
        let spec = line_example(3);
        let walls = enumerate_walls(&spec);
        assert_eq!(walls.len(), 1);
        assert_eq!(walls[0].circuit, vec![0, 1, 2, 3]);
        assert!(walls[0].span_set.is_empty());

        let tiny = TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1]])).unwrap();
        let walls = enumerate_walls(&tiny);
        assert_eq!(walls.len(), 1);
        assert_eq!(walls[0].circuit, vec![0]);
    }

    #[test]
    fn regularity_line_example() {
        let spec = line_example(2);
        let walls = enumerate_walls(&spec);
        let origin = Parameter::real(vec![rat(0)]);
        assert!(!is_regular_value(&walls, &origin).regular);
        let one = Parameter::real(vec![rat(1)]);
        assert!(is_regular_value(&walls, &one).regular);
        // nonzero beta rescues alpha = 0
        let rescued = Parameter::new(vec![rat(0)], vec![rat(1)], vec![rat(0)]).unwrap();
        assert!(is_regular_value(&walls, &rescued).regular);
    }

    #[test]
    fn regularity_rank2_example() {
        let spec = rank2_example();
        let walls = enumerate_walls(&spec);
        let on_wall = Parameter::real(vec![rat(1), rat(0)]);
        let report = is_regular_value(&walls, &on_wall);
        assert!(!report.regular);
        assert_eq!(report.violating_walls.len(), 1);
        assert_eq!(walls[report.violating_walls[0]].circuit, vec![0, 2, 4]);
        let generic = Parameter::real(vec![rat(3), rat(1)]);
        assert!(is_regular_value(&walls, &generic).regular);
    }

    #[test]
    fn smoothness_tests() {
        assert!(is_smooth(&line_example(1)).smooth);
        assert!(is_smooth(&rank2_example()).smooth);
        let orbifold = TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1, 2]])).unwrap();
        let report = is_smooth(&orbifold);
        assert!(!report.smooth);
        assert_eq!(report.witness, Some(vec![1]));
    }

    #[test]
    fn walls_invariant_under_unimodular_row_change() {
        let spec = rank2_example();
        // multiply by [[1,1],[0,1]]
        let changed = TorusSpec::from_basis(IntMatrix::from_rows(&[
            vec![2, 1, 1, 1, 1],
            vec![1, 0, 1, 0, 1],
        ]))
        .unwrap();
        let w1: Vec<Vec<usize>> = enumerate_walls(&spec)
            .into_iter()
            .map(|w| w.circuit)
            .collect();
        let w2: Vec<Vec<usize>> = enumerate_walls(&changed)
            .into_iter()
            .map(|w| w.circuit)
            .collect();
        assert_eq!(w1, w2);
    }
}
