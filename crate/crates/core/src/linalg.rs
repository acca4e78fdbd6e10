//! Exact integer and rational linear algebra: Smith and Hermite normal forms,
//! saturated integer kernels, Gale duals, rational solving and minors.
//!
//! Everything here is deterministic and exact; these routines underpin all
//! other modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        Self {
            rows: r,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.entry(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.entry_mut(c, r) = self.entry(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a * other.entry(k, c);
                    *out.entry_mut(r, c) += prod;
                }
            }
        }
        out
    }

    pub fn mul_int_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| BigRational::from(a.clone()) * b)
                    .sum()
            })
            .collect()
    }

    /// Vertical concatenation.
    pub fn stack(&self, bottom: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, bottom.cols, "column count mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&bottom.data);
        IntMatrix {
            rows: self.rows + bottom.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                *out.entry_mut(r, j) = self.entry(r, c).clone();
            }
        }
        out
    }

    pub fn delete_columns(&self, drop: &[usize]) -> IntMatrix {
        let keep: Vec<usize> = (0..self.cols).filter(|c| !drop.contains(c)).collect();
        self.select_columns(&keep)
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square input only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<BigInt>, r: usize, c: usize| m[r * n + c].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                // swap in a row with a nonzero pivot
                let Some(p) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for c in 0..n {
                    m.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for r in k + 1..n {
                for c in k + 1..n {
                    let num = at(&m, k, k) * at(&m, r, c) - at(&m, r, k) * at(&m, k, c);
                    m[r * n + c] = num / &prev;
                }
                m[r * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        sign * at(&m, n - 1, n - 1)
    }

    /// Rank over the rationals (fraction-free elimination).
    pub fn rank(&self) -> usize {
        rank_of_bigint_rows(
            &(0..self.rows)
                .map(|r| self.row(r).to_vec())
                .collect::<Vec<_>>(),
        )
    }
}

/// Rank over Q of a list of integer row vectors, by fraction-free elimination.
pub fn rank_of_bigint_rows(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| !r.iter().all(Zero::is_zero))
        .cloned()
        .collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < m.len() && col < cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..cols {
                let val = &m[r][c] * &pivot - &factor * &m[rank][c];
                m[r][c] = val;
            }
            // keep entries small
            let g = row_gcd(&m[r]);
            if g > BigInt::one() {
                for c in 0..cols {
                    m[r][c] = &m[r][c] / &g;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

fn row_gcd(row: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in row {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Unimodular decomposition `U * M * V = S` with `S` diagonal and each
/// diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The nonzero diagonal of `S`, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k)
            .map(|i| self.s.entry(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form. Pivoting picks the smallest nonzero entry in absolute
/// value (ties broken by row then column index), which bounds entry growth
/// and makes the output deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = smallest_pivot(&s, t) else {
            break;
        };
        swap_rows(&mut s, &mut u, t, pr);
        swap_cols(&mut s, &mut v, t, pc);

        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for r in t + 1..rows {
                if !s.entry(r, t).is_zero() {
                    let q = rounded_quotient(s.entry(r, t), s.entry(t, t));
                    if !q.is_zero() {
                        row_axpy(&mut s, &mut u, r, t, &q);
                    }
                    if !s.entry(r, t).is_zero() {
                        // remainder became the smaller pivot
                        swap_rows(&mut s, &mut u, t, r);
                        dirty = true;
                    }
                }
            }
            // clear row t to the right of the pivot
            for c in t + 1..cols {
                if !s.entry(t, c).is_zero() {
                    let q = rounded_quotient(s.entry(t, c), s.entry(t, t));
                    if !q.is_zero() {
                        col_axpy(&mut s, &mut v, c, t, &q);
                    }
                    if !s.entry(t, c).is_zero() {
                        swap_cols(&mut s, &mut v, t, c);
                        dirty = true;
                    }
                }
            }
            if !dirty && column_clear(&s, t) && row_clear(&s, t) {
                break;
            }
        }

        // divisibility: pivot must divide every remaining entry
        let mut fixed = true;
        'scan: for r in t + 1..rows {
            for c in t + 1..cols {
                if !(s.entry(r, c) % s.entry(t, t)).is_zero() {
                    // fold row r into row t and redo this pivot position
                    let one = BigInt::one();
                    row_axpy(&mut s, &mut u, t, r, &-&one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            if s.entry(t, t).is_negative() {
                negate_row(&mut s, &mut u, t);
            }
            t += 1;
        }
    }
    SmithDecomposition { u, s, v }
}

fn smallest_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for r in t..s.rows() {
        for c in t..s.cols() {
            let x = s.entry(r, c);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, r, c)),
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

fn swap_rows(s: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..s.cols() {
        let tmp = s.entry(a, c).clone();
        *s.entry_mut(a, c) = s.entry(b, c).clone();
        *s.entry_mut(b, c) = tmp;
    }
    for c in 0..u.cols() {
        let tmp = u.entry(a, c).clone();
        *u.entry_mut(a, c) = u.entry(b, c).clone();
        *u.entry_mut(b, c) = tmp;
    }
}

fn swap_cols(s: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..s.rows() {
        let tmp = s.entry(r, a).clone();
        *s.entry_mut(r, a) = s.entry(r, b).clone();
        *s.entry_mut(r, b) = tmp;
    }
    for r in 0..v.rows() {
        let tmp = v.entry(r, a).clone();
        *v.entry_mut(r, a) = v.entry(r, b).clone();
        *v.entry_mut(r, b) = tmp;
    }
}

/// row[dst] -= q * row[src], applied to S and U in lockstep.
fn row_axpy(s: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for c in 0..s.cols() {
        let delta = q * s.entry(src, c);
        *s.entry_mut(dst, c) -= delta;
    }
    for c in 0..u.cols() {
        let delta = q * u.entry(src, c);
        *u.entry_mut(dst, c) -= delta;
    }
}

/// col[dst] -= q * col[src], applied to S and V in lockstep.
fn col_axpy(s: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for r in 0..s.rows() {
        let delta = q * s.entry(r, src);
        *s.entry_mut(r, dst) -= delta;
    }
    for r in 0..v.rows() {
        let delta = q * v.entry(r, src);
        *v.entry_mut(r, dst) -= delta;
    }
}

fn negate_row(s: &mut IntMatrix, u: &mut IntMatrix, r: usize) {
    for c in 0..s.cols() {
        let x = -s.entry(r, c).clone();
        *s.entry_mut(r, c) = x;
    }
    for c in 0..u.cols() {
        let x = -u.entry(r, c).clone();
        *u.entry_mut(r, c) = x;
    }
}

fn column_clear(s: &IntMatrix, t: usize) -> bool {
    (t + 1..s.rows()).all(|r| s.entry(r, t).is_zero())
}

fn row_clear(s: &IntMatrix, t: usize) -> bool {
    (t + 1..s.cols()).all(|c| s.entry(t, c).is_zero())
}

/// Quotient rounded to nearest, so the remainder has magnitude at most |b|/2.
fn rounded_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) != (b.is_negative()) {
            q -= 1;
        } else {
            q += 1;
        }
    }
    q
}

/// Row-style Hermite normal form of the row lattice. Zero rows are dropped,
/// pivots are positive, entries below a pivot vanish and entries above it
/// are reduced into `[0, pivot)`. This is the canonical basis used for all
/// kernel and Gale-dual outputs.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|r| m.row(r).to_vec())
        .filter(|r| !r.iter().all(Zero::is_zero))
        .collect();
    let cols = m.cols();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next_row = 0;
    for col in 0..cols {
        // gcd-combine all rows >= next_row with a nonzero entry in this column
        loop {
            let mut nz: Vec<usize> = (next_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            if nz.is_empty() {
                break;
            }
            if nz.len() == 1 {
                let r = nz[0];
                rows.swap(next_row, r);
                if rows[next_row][col].is_negative() {
                    for x in rows[next_row].iter_mut() {
                        *x = -x.clone();
                    }
                }
                pivots.push((next_row, col));
                next_row += 1;
                break;
            }
            // reduce the pair with the two smallest entries
            nz.sort_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let (small, big) = (nz[0], nz[1]);
            let q = rounded_quotient(&rows[big][col].clone(), &rows[small][col].clone());
            for c in 0..cols {
                let delta = &q * &rows[small][c];
                rows[big][c] -= delta;
            }
        }
    }
    // reduce entries above each pivot into [0, pivot)
    for &(pr, pc) in pivots.iter() {
        for r in 0..pr {
            let p = rows[pr][pc].clone();
            let e = rows[r][pc].clone();
            let q = e.div_floor(&p);
            if !q.is_zero() {
                for c in 0..cols {
                    let delta = &q * &rows[pr][c];
                    rows[r][c] -= delta;
                }
            }
        }
    }
    rows.truncate(pivots.len());
    IntMatrix::from_bigint_rows(rows, cols)
}

/// A basis (as matrix rows, in Hermite normal form) of the saturated lattice
/// `{ x : M x = 0 }`.
pub fn integer_kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let k = m.rows().min(m.cols());
    let rank = (0..k).filter(|&i| !snf.s.entry(i, i).is_zero()).count();
    // M = U^-1 S V^-1, so M x = 0 iff S (V^-1 x) = 0: kernel basis = columns
    // of V beyond the rank.
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for c in rank..m.cols() {
        basis.push(snf.v.column(c));
    }
    hermite_normal_form(&IntMatrix::from_bigint_rows(basis, m.cols()))
}

/// Basis (HNF rows) of the saturation of the row lattice of `m`.
pub fn saturate(m: &IntMatrix) -> IntMatrix {
    integer_kernel_basis(&integer_kernel_basis(m))
}

/// Whether the row lattice equals its saturation. Requires full row rank.
pub fn is_saturated(m: &IntMatrix) -> Result<bool> {
    if m.rank() < m.rows() {
        return Err(Error::RankDeficient);
    }
    let snf = smith_normal_form(m);
    Ok(snf.invariant_factors().iter().all(One::is_one))
}

/// A particular rational solution of `M x = b`, or `None` if inconsistent.
///
/// For full-row-rank `M` the canonical solution `M^T (M M^T)^{-1} b` is
/// returned, which makes downstream outputs deterministic and independent of
/// elimination order.
pub fn solve_rational(m: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(m.rows(), b.len(), "rhs length mismatch");
    if m.rows() == 0 {
        return Some(vec![BigRational::zero(); m.cols()]);
    }
    if m.rank() == m.rows() {
        // canonical: x = M^T y with (M M^T) y = b
        let gram = m.mul(&m.transpose());
        let y = solve_square_rational(&gram, b)?;
        let mt = m.transpose();
        return Some(mt.mul_rat_vec(&y));
    }
    // general case: rational row reduction of the augmented system
    let rows = m.rows();
    let cols = m.cols();
    let mut aug: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = m
                .row(r)
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, p);
        let pv = aug[rank][col].clone();
        for c in col..=cols {
            aug[rank][c] = &aug[rank][c] / &pv;
        }
        for r in 0..rows {
            if r != rank && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=cols {
                    let delta = &f * &aug[rank][c];
                    aug[r][c] = &aug[r][c] - delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // inconsistent iff a zero row has nonzero rhs
    for r in rank..rows {
        if !aug[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

/// Solve a nonsingular square rational system by Gaussian elimination.
pub(crate) fn solve_square_rational(m: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> = m
                .row(r)
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            row.push(b[r].clone());
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let pv = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &pv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let delta = &f * &a[col][c];
                    a[r][c] = &a[r][c] - delta;
                }
            }
        }
    }
    Some((0..n).map(|r| a[r][n].clone()).collect())
}

/// The Gale dual of a saturated full-row-rank `d x N` matrix: an integer
/// `(N-d) x N` matrix `A` with `A B^T = 0` whose rows form a basis of the
/// saturated kernel lattice, so the induced map `Z^N -> Z^(N-d)` is
/// surjective. Returned in Hermite normal form.
pub fn gale_dual(b: &IntMatrix) -> Result<IntMatrix> {
    if b.rows() == 0 {
        return Ok(IntMatrix::identity(b.cols()));
    }
    if !is_saturated(b)? {
        return Err(Error::Unsaturated {
            saturation: saturate(b),
        });
    }
    Ok(integer_kernel_basis(b))
}

/// Exact inverse of a unimodular integer matrix.
pub fn inverse_unimodular(m: &IntMatrix) -> IntMatrix {
    assert_eq!(m.rows(), m.cols(), "inverse of non-square matrix");
    let n = m.rows();
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[j] = BigRational::one();
        let x = solve_rational(m, &e).expect("unimodular matrix is invertible");
        cols.push(
            x.into_iter()
                .map(|v| {
                    assert!(v.denom().is_one(), "matrix is not unimodular");
                    v.numer().clone()
                })
                .collect(),
        );
    }
    let mut out = IntMatrix::zero(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            *out.entry_mut(i, j) = v.clone();
        }
    }
    out
}

/// Greatest common divisor of a set of integers (0 for the empty set).
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for x in xs {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divide an integer vector by the gcd of its entries and normalize the sign
/// so the first nonzero entry is positive. Zero vectors pass through.
pub fn primitive_vector(v: &[BigInt]) -> Vec<BigInt> {
    let g = gcd_all(v.iter());
    let mut out: Vec<BigInt> = if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    };
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    out
}
