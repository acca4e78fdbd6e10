//! The rational hyperplane arrangement attached to a spec and a real
//! parameter: exact face enumeration by sign vectors, the bounded polyhedral
//! complex with its face counts, bounded chambers, and the core components
//! with their pairwise intersections.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    integer_kernel_basis, rank_of_bigint_rows, solve_rational, solve_square_rational, IntMatrix,
};
use crate::lp::{self, Constraint, LpResult, Rel};
use crate::torus::TorusSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_rational(x: &BigRational) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }
}

/// A sign vector over the arrangement indices; chambers carry no zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    /// Face order: `self` lies on the boundary of (or equals) `other` iff
    /// every nonzero entry of `self` agrees with `other`.
    pub fn refines(&self, other: &SignVector) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(s, o)| *s == Sign::Zero || s == o)
    }

    pub fn zero_set(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Zero)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_full_support(&self) -> bool {
        self.0.iter().all(|s| *s != Sign::Zero)
    }
}

impl std::fmt::Display for SignVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s.as_char())?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for SignVector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')' && *c != ',')
            .map(|c| match c {
                '+' => Ok(Sign::Pos),
                '-' => Ok(Sign::Neg),
                '0' => Ok(Sign::Zero),
                other => Err(format!("invalid sign character {other:?}")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(SignVector)
    }
}

/// One hyperplane `{ p : <normal, p> + offset = 0 }` of the arrangement.
/// A zero normal makes the locus empty (offset nonzero) or everything
/// (offset zero); either way the sign of every point is forced.
#[derive(Debug, Clone)]
pub struct Hyperplane {
    pub index: usize,
    pub normal: Vec<BigInt>,
    pub offset: BigRational,
}

impl Hyperplane {
    pub fn has_zero_normal(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    /// The sign forced on every point when the normal vanishes.
    pub fn forced_sign(&self) -> Option<Sign> {
        self.has_zero_normal()
            .then(|| Sign::of_rational(&self.offset))
    }

    /// Empty locus: zero normal with nonzero offset.
    pub fn is_empty_locus(&self) -> bool {
        self.has_zero_normal() && !self.offset.is_zero()
    }

    fn eval(&self, p: &[BigRational]) -> BigRational {
        let mut acc = self.offset.clone();
        for (a, x) in self.normal.iter().zip(p) {
            if !a.is_zero() {
                acc += BigRational::from(a.clone()) * x;
            }
        }
        acc
    }
}

/// The arrangement in the `n`-dimensional quotient dual space.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub hyperplanes: Vec<Hyperplane>,
    dim: usize,
}

impl Arrangement {
    /// Assemble an arrangement directly from hyperplane data in an
    /// `dim`-dimensional space.
    pub fn from_parts(hyperplanes: Vec<Hyperplane>, dim: usize) -> Arrangement {
        Arrangement { hyperplanes, dim }
    }

    /// Build from a spec and real parameter: the canonical lift `h` of
    /// `alpha` supplies the offsets, the Gale dual columns the normals.
    pub fn build(spec: &TorusSpec, alpha: &[BigRational]) -> Result<Arrangement> {
        if alpha.len() != spec.rank() {
            return Err(Error::Dimension(format!(
                "alpha has length {}, expected {}",
                alpha.len(),
                spec.rank()
            )));
        }
        let h = solve_rational(spec.basis(), alpha)
            .expect("full-row-rank basis always admits the canonical lift");
        let hyperplanes = (0..spec.ambient_rank())
            .map(|i| Hyperplane {
                index: i,
                normal: spec.hyperplane_normal(i),
                offset: h[i].clone(),
            })
            .collect();
        Ok(Arrangement {
            hyperplanes,
            dim: spec.quotient_rank(),
        })
    }

    /// Ambient dimension `n` of the arrangement.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sign_vector_at(&self, p: &[BigRational]) -> SignVector {
        SignVector(
            self.hyperplanes
                .iter()
                .map(|hp| Sign::of_rational(&hp.eval(p)))
                .collect(),
        )
    }

    /// Enumerate every realizable face, depth-first over sign prefixes.
    /// Output is sorted by sign vector.
    ///
    /// The search is exact throughout but avoids linear programs where sign
    /// combinatorics already decide realizability: while the constrained
    /// normals stay linearly independent every sign pattern is realizable
    /// (the evaluation map is surjective), a first linear dependence confines
    /// the new functional to an exactly computable interval, and witness
    /// points are carried down the tree so that only genuinely ambiguous
    /// extensions fall back to the exact LP.
    pub fn enumerate_faces(&self) -> Vec<Face> {
        self.enumerate_faces_threaded(1)
    }

    /// As [`enumerate_faces`](Self::enumerate_faces), optionally splitting the
    /// search over worker threads by sign prefix. The result is identical for
    /// every thread count.
    pub fn enumerate_faces_threaded(&self, threads: usize) -> Vec<Face> {
        let prefixes = if threads <= 1 {
            vec![Vec::new()]
        } else {
            self.search_prefixes(threads)
        };
        let mut faces: Vec<Face> = if prefixes.len() <= 1 {
            let mut out = Vec::new();
            self.dfs_from(&Vec::new(), &mut out);
            out
        } else {
            let chunks: Vec<Vec<Face>> = std::thread::scope(|scope| {
                let workers: Vec<_> = prefixes
                    .iter()
                    .map(|prefix| {
                        scope.spawn(move || {
                            let mut out = Vec::new();
                            self.dfs_from(prefix, &mut out);
                            out
                        })
                    })
                    .collect();
                workers
                    .into_iter()
                    .map(|w| w.join().expect("worker panicked"))
                    .collect()
            });
            chunks.into_iter().flatten().collect()
        };
        faces.sort_by(|a, b| a.sign.cmp(&b.sign));
        faces
    }

    /// Sign prefixes over the first unforced indices, enough to feed the
    /// requested worker count.
    fn search_prefixes(&self, threads: usize) -> Vec<Vec<Sign>> {
        let unforced: Vec<usize> = self
            .hyperplanes
            .iter()
            .filter(|h| !h.has_zero_normal())
            .map(|h| h.index)
            .collect();
        let mut depth = 0;
        let mut count = 1usize;
        while count < 2 * threads && depth < unforced.len() && depth < 4 {
            depth += 1;
            count *= 3;
        }
        let mut prefixes = vec![Vec::new()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(prefixes.len() * 3);
            for p in &prefixes {
                for s in [Sign::Neg, Sign::Zero, Sign::Pos] {
                    let mut q = p.clone();
                    q.push(s);
                    next.push(q);
                }
            }
            prefixes = next;
        }
        prefixes
    }

    /// DFS over hyperplane indices. `pin` prescribes the signs of the first
    /// unforced indices (used for work splitting); forced indices always take
    /// their forced sign.
    fn dfs_from(&self, pin: &[Sign], out: &mut Vec<Face>) {
        let mut state = SearchState {
            assigned: Vec::new(),
            echelon: IntEchelon::new(),
            zero_echelon: IntEchelon::new(),
            all_independent: true,
        };
        let mut signs: Vec<Sign> = Vec::with_capacity(self.hyperplanes.len());
        let witness = vec![BigRational::zero(); self.dim];
        self.dfs(0, pin, 0, &mut state, &mut signs, &witness, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        i: usize,
        pin: &[Sign],
        pinned_used: usize,
        state: &mut SearchState,
        signs: &mut Vec<Sign>,
        witness: &[BigRational],
        out: &mut Vec<Face>,
    ) {
        if i == self.hyperplanes.len() {
            out.push(self.make_face(SignVector(signs.clone()), witness.to_vec()));
            return;
        }
        let hp = &self.hyperplanes[i];
        if let Some(forced) = hp.forced_sign() {
            signs.push(forced);
            self.dfs(i + 1, pin, pinned_used, state, signs, witness, out);
            signs.pop();
            return;
        }
        let candidates: &[Sign] = if pinned_used < pin.len() {
            match pin[pinned_used] {
                Sign::Neg => &[Sign::Neg],
                Sign::Zero => &[Sign::Zero],
                Sign::Pos => &[Sign::Pos],
            }
        } else {
            &[Sign::Neg, Sign::Zero, Sign::Pos]
        };
        let value_here = hp.eval(witness);
        let residue = state.echelon.residue(&hp.normal);
        let dependence = if residue.iter().all(Zero::is_zero) {
            state
                .all_independent
                .then(|| self.dependence_data(state, hp))
        } else {
            None
        };
        for &s in candidates {
            let child_witness: Option<Vec<BigRational>> = if Sign::of_rational(&value_here) == s {
                Some(witness.to_vec())
            } else if !residue.iter().all(Zero::is_zero) {
                // the new normal leaves the span of the constrained ones:
                // translate the witness along a direction invisible to them
                Some(self.translate_witness(state, hp, witness, &value_here, s))
            } else if let Some((lambda, constant)) = &dependence {
                // all previous constraints independent, this one dependent:
                // the achievable values form an exactly computable interval
                self.dependent_witness(state, lambda, constant, s)
            } else if state.zero_echelon.rank() == self.dim {
                // the equalities pin a unique point and it has the wrong sign
                None
            } else {
                self.lp_witness(state, hp, s)
            };
            let Some(child_witness) = child_witness else {
                continue;
            };
            let saved_all = state.all_independent;
            let ech_token = if residue.iter().all(Zero::is_zero) {
                state.all_independent = false;
                None
            } else {
                Some(state.echelon.insert(residue.clone()))
            };
            let zero_token = if s == Sign::Zero {
                let zr = state.zero_echelon.residue(&hp.normal);
                if zr.iter().all(Zero::is_zero) {
                    None
                } else {
                    Some(state.zero_echelon.insert(zr))
                }
            } else {
                None
            };
            state.assigned.push((i, s));
            signs.push(s);
            self.dfs(
                i + 1,
                pin,
                pinned_used + 1,
                state,
                signs,
                &child_witness,
                out,
            );
            signs.pop();
            state.assigned.pop();
            if let Some(tok) = zero_token {
                state.zero_echelon.remove(tok);
            }
            if let Some(tok) = ech_token {
                state.echelon.remove(tok);
            }
            state.all_independent = saved_all;
        }
    }

    /// Express the dependent functional through the assigned ones:
    /// `f_new = constant + sum lambda_j f_j`.
    fn dependence_data(
        &self,
        state: &SearchState,
        hp: &Hyperplane,
    ) -> (Vec<BigRational>, BigRational) {
        let rows: Vec<Vec<BigInt>> = state
            .assigned
            .iter()
            .map(|&(j, _)| self.hyperplanes[j].normal.clone())
            .collect();
        let m = IntMatrix::from_bigint_rows(rows, self.dim);
        let target: Vec<BigRational> = hp
            .normal
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        let lambda =
            solve_rational(&m.transpose(), &target).expect("dependent normal lies in the span");
        let mut constant = hp.offset.clone();
        for (l, &(j, _)) in lambda.iter().zip(&state.assigned) {
            constant -= l * &self.hyperplanes[j].offset;
        }
        (lambda, constant)
    }

    /// Feasibility and witness for a sign of a functional linearly dependent
    /// on an independent assigned family. Over the open sign orthant the
    /// dependent value ranges over an interval with endpoints read off the
    /// dependence; a witness is assembled by solving for explicit target
    /// values.
    fn dependent_witness(
        &self,
        state: &SearchState,
        lambda: &[BigRational],
        constant: &BigRational,
        s: Sign,
    ) -> Option<Vec<BigRational>> {
        let contributions: Vec<BigRational> = lambda
            .iter()
            .zip(&state.assigned)
            .map(|(l, &(_, sj))| match sj {
                Sign::Pos => l.clone(),
                Sign::Neg => -l.clone(),
                Sign::Zero => BigRational::zero(),
            })
            .collect();
        let epsilons = epsilon_for_target(&contributions, constant, s)?;
        // solve for the witness with the explicit target values
        let rows: Vec<Vec<BigInt>> = state
            .assigned
            .iter()
            .map(|&(j, _)| self.hyperplanes[j].normal.clone())
            .collect();
        let m = IntMatrix::from_bigint_rows(rows, self.dim);
        let rhs: Vec<BigRational> = state
            .assigned
            .iter()
            .zip(&epsilons)
            .map(|(&(j, sj), eps)| {
                let t = match sj {
                    Sign::Pos => eps.clone(),
                    Sign::Neg => -eps.clone(),
                    Sign::Zero => BigRational::zero(),
                };
                t - &self.hyperplanes[j].offset
            })
            .collect();
        let witness = solve_rational(&m, &rhs).expect("independent system is solvable");
        Some(witness)
    }

    /// Move the witness along a direction orthogonal to every constrained
    /// normal so the new functional takes a value of the requested sign.
    fn translate_witness(
        &self,
        state: &SearchState,
        hp: &Hyperplane,
        witness: &[BigRational],
        value_here: &BigRational,
        s: Sign,
    ) -> Vec<BigRational> {
        let d = if state.echelon.rank() == 0 {
            hp.normal
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect::<Vec<_>>()
        } else {
            let rows: Vec<Vec<BigInt>> = state.echelon.rows().to_vec();
            let e = IntMatrix::from_bigint_rows(rows, self.dim);
            let target: Vec<BigRational> = e
                .mul_int_vec(&hp.normal)
                .into_iter()
                .map(BigRational::from)
                .collect();
            // orthogonal residue of the normal against the echelon rows
            let gram = e.mul(&e.transpose());
            let y =
                solve_square_rational(&gram, &target).expect("echelon Gram matrix is invertible");
            let mut d: Vec<BigRational> = hp
                .normal
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            for (yi, r) in y.iter().zip(0..e.rows()) {
                for (dc, ec) in d.iter_mut().zip(e.row(r)) {
                    *dc -= yi * BigRational::from(ec.clone());
                }
            }
            d
        };
        let rate: BigRational = d
            .iter()
            .zip(&hp.normal)
            .map(|(a, b)| a * BigRational::from(b.clone()))
            .sum();
        debug_assert!(!rate.is_zero());
        let target = match s {
            Sign::Pos => BigRational::from(BigInt::from(1)),
            Sign::Neg => BigRational::from(BigInt::from(-1)),
            Sign::Zero => BigRational::zero(),
        };
        let t = (target - value_here) / rate;
        witness.iter().zip(&d).map(|(w, dc)| w + &t * dc).collect()
    }

    /// Exact LP fallback for ambiguous extensions.
    fn lp_witness(
        &self,
        state: &SearchState,
        hp: &Hyperplane,
        s: Sign,
    ) -> Option<Vec<BigRational>> {
        let mut equalities: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
        let mut stricts: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
        let mut push = |hp: &Hyperplane, s: Sign| {
            let coeffs: Vec<BigRational> = hp
                .normal
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            match s {
                Sign::Zero => equalities.push((coeffs, -hp.offset.clone())),
                Sign::Pos => stricts.push((coeffs, -hp.offset.clone())),
                Sign::Neg => stricts.push((
                    coeffs.iter().map(|x| -x.clone()).collect(),
                    hp.offset.clone(),
                )),
            }
        };
        for &(j, sj) in &state.assigned {
            push(&self.hyperplanes[j], sj);
        }
        push(hp, s);
        lp::strict_feasible_point(self.dim, &equalities, &stricts)
    }

    fn make_face(&self, sign: SignVector, witness: Vec<BigRational>) -> Face {
        debug_assert_eq!(
            self.sign_vector_at(&witness),
            sign,
            "witness must realize its face"
        );
        let zero_normals: Vec<Vec<BigInt>> = sign
            .0
            .iter()
            .enumerate()
            .filter(|(i, s)| **s == Sign::Zero && !self.hyperplanes[*i].has_zero_normal())
            .map(|(i, _)| self.hyperplanes[i].normal.clone())
            .collect();
        let rank = rank_of_bigint_rows(&zero_normals);
        let dim = self.dim - rank;
        let affine_dirs = if zero_normals.is_empty() {
            IntMatrix::identity(self.dim)
        } else {
            integer_kernel_basis(&IntMatrix::from_bigint_rows(zero_normals, self.dim))
        };
        let bounded = if dim == 0 {
            true
        } else {
            self.face_bounded(&sign, &affine_dirs)
        };
        let affine_dirs = (0..affine_dirs.rows())
            .map(|r| affine_dirs.row(r).to_vec())
            .collect();
        Face {
            sign,
            dim,
            bounded,
            witness,
            affine_dirs,
        }
    }

    /// Boundedness of a face: its recession cone, written in the coordinates
    /// of the face's direction space, must be the origin.
    ///
    /// The projected oriented normals `g_i` cut the cone `{y : g_i.y >= 0}`.
    /// Cheap exact rejections first: no constraints at all, a kernel
    /// direction of the `g_i`, or a coordinate direction satisfying every
    /// constraint all certify recession. Otherwise the cone is trivial iff
    /// maximizing the summed slack stays at zero: a nonzero cone point with
    /// zero slack sum would be orthogonal to every `g_i`, which the rank
    /// check has excluded.
    fn face_bounded(&self, sign: &SignVector, affine_dirs: &IntMatrix) -> bool {
        let k = affine_dirs.rows();
        if k == 0 {
            return true;
        }
        let mut gs: Vec<Vec<BigInt>> = Vec::new();
        for (i, s) in sign.0.iter().enumerate() {
            let hp = &self.hyperplanes[i];
            if *s == Sign::Zero || hp.has_zero_normal() {
                continue;
            }
            let mut g = affine_dirs.mul_int_vec(&hp.normal);
            if g.iter().all(Zero::is_zero) {
                continue;
            }
            if *s == Sign::Neg {
                for x in g.iter_mut() {
                    *x = -x.clone();
                }
            }
            gs.push(g);
        }
        if gs.is_empty() {
            return false;
        }
        if rank_of_bigint_rows(&gs) < k {
            return false;
        }
        for j in 0..k {
            if gs.iter().all(|g| !g[j].is_negative()) {
                return false;
            }
            if gs.iter().all(|g| !g[j].is_positive()) {
                return false;
            }
        }
        let cons: Vec<Constraint> = gs
            .iter()
            .map(|g| {
                Constraint::new(
                    g.iter().map(|x| BigRational::from(x.clone())).collect(),
                    Rel::Ge,
                    BigRational::zero(),
                )
            })
            .collect();
        let obj: Vec<BigRational> = (0..k)
            .map(|j| BigRational::from(gs.iter().map(|g| g[j].clone()).sum::<BigInt>()))
            .collect();
        match lp::maximize(&obj, &cons) {
            LpResult::Unbounded => false,
            LpResult::Optimal { value, .. } => {
                debug_assert!(value.is_zero(), "cone slack LP must peak at the origin");
                true
            }
            LpResult::Infeasible => unreachable!("the origin is always in the cone"),
        }
    }
}

/// Backtrackable state of the face search.
struct SearchState {
    /// Constrained hyperplanes with their signs, in assignment order.
    assigned: Vec<(usize, Sign)>,
    /// Echelon span of the assigned normals.
    echelon: IntEchelon,
    /// Echelon span of the zero-signed normals (flat detection).
    zero_echelon: IntEchelon,
    /// Whether the assigned normals are linearly independent.
    all_independent: bool,
}

/// Integer row echelon with push/pop, used for incremental rank and span
/// membership along the search path.
struct IntEchelon {
    rows: Vec<Vec<BigInt>>,
}

impl IntEchelon {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    fn leading(v: &[BigInt]) -> usize {
        v.iter().position(|x| !x.is_zero()).expect("nonzero row")
    }

    /// Fraction-free reduction of `v` against the echelon rows; the result is
    /// zero exactly when `v` lies in their rational span.
    fn residue(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let l = Self::leading(row);
            if v[l].is_zero() {
                continue;
            }
            let a = row[l].clone();
            let b = v[l].clone();
            for (x, y) in v.iter_mut().zip(row) {
                *x = &a * &*x - &b * y;
            }
            let g = crate::linalg::gcd_all(v.iter());
            if !g.is_zero() && !g.is_one() {
                for x in v.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        v
    }

    /// Insert a fully reduced nonzero residue, keeping leading-column order.
    /// Returns the position token for [`remove`](Self::remove).
    fn insert(&mut self, v: Vec<BigInt>) -> usize {
        let l = Self::leading(&v);
        let pos = self.rows.partition_point(|r| Self::leading(r) < l);
        self.rows.insert(pos, v);
        pos
    }

    fn remove(&mut self, pos: usize) {
        self.rows.remove(pos);
    }
}

/// Positive weights `eps_j` making `constant + sum a_j eps_j` take the
/// requested sign, or `None` when no positive weights can (the feasibility
/// interval of the dependent functional misses the sign region).
fn epsilon_for_target(
    a: &[BigRational],
    constant: &BigRational,
    target: Sign,
) -> Option<Vec<BigRational>> {
    use num_traits::One;
    let one = BigRational::one();
    match target {
        Sign::Neg => {
            let neg_a: Vec<BigRational> = a.iter().map(|x| -x.clone()).collect();
            epsilon_for_target(&neg_a, &-constant.clone(), Sign::Pos)
        }
        Sign::Pos => {
            let mut eps = vec![one.clone(); a.len()];
            if constant.is_positive() {
                let sum_abs: BigRational = a.iter().map(Signed::abs).sum();
                if !sum_abs.is_zero() {
                    let delta = constant / (BigRational::from(BigInt::from(2)) * sum_abs);
                    for (e, coeff) in eps.iter_mut().zip(a) {
                        if !coeff.is_zero() {
                            *e = delta.clone();
                        }
                    }
                }
                Some(eps)
            } else {
                let j = a.iter().position(|x| x.is_positive())?;
                let others: BigRational = a
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, x)| x.abs())
                    .sum();
                eps[j] = (&one + constant.abs() + others) / &a[j];
                Some(eps)
            }
        }
        Sign::Zero => {
            let mut eps = vec![one.clone(); a.len()];
            let two = BigRational::from(BigInt::from(2));
            if constant.is_zero() {
                let pos = a.iter().position(|x| x.is_positive());
                let neg = a.iter().position(|x| x.is_negative());
                match (pos, neg) {
                    (None, None) => Some(eps),
                    (Some(jp), Some(jn)) => {
                        let ap = a[jp].clone();
                        let an = -a[jn].clone();
                        let rest: BigRational = a
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != jp && *i != jn)
                            .map(|(_, x)| x.clone())
                            .sum();
                        let prod = &ap * &an;
                        let delta = &prod / (&two * rest.abs() + &one);
                        for (i, e) in eps.iter_mut().enumerate() {
                            if i != jp && i != jn {
                                *e = delta.clone();
                            }
                        }
                        eps[jp] = an.clone();
                        eps[jn] = (&prod + &delta * &rest) / &an;
                        debug_assert!(eps[jn].is_positive());
                        Some(eps)
                    }
                    _ => None,
                }
            } else {
                let j = if constant.is_positive() {
                    a.iter().position(|x| x.is_negative())?
                } else {
                    a.iter().position(|x| x.is_positive())?
                };
                let rest: BigRational = a
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, x)| x.clone())
                    .sum();
                let delta = constant.abs() / (&two * rest.abs() + &one);
                for (i, e) in eps.iter_mut().enumerate() {
                    if i != j {
                        *e = delta.clone();
                    }
                }
                eps[j] = (-constant.clone() - &delta * &rest) / &a[j];
                debug_assert!(eps[j].is_positive());
                Some(eps)
            }
        }
    }
}

/// A face of the arrangement: its sign vector, dimension, boundedness, an
/// exact relative-interior witness and an integer basis of its direction
/// space.
#[derive(Debug, Clone)]
pub struct Face {
    pub sign: SignVector,
    pub dim: usize,
    pub bounded: bool,
    pub witness: Vec<BigRational>,
    pub affine_dirs: Vec<Vec<BigInt>>,
}

/// The compact-face complex: all bounded faces, face counts by dimension and
/// the covering incidences of the face order.
#[derive(Debug, Clone)]
pub struct BoundedComplex {
    pub faces: Vec<Face>,
    /// `counts[k]` = number of bounded `k`-dimensional faces, `k = 0..=n`.
    pub counts: Vec<usize>,
    /// Pairs `(lower, upper)` of indices into `faces` with
    /// `dim(lower) + 1 == dim(upper)` and `lower` on the boundary of `upper`.
    pub incidence: Vec<(usize, usize)>,
}

impl BoundedComplex {
    pub fn alternating_sum(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// Extract the bounded complex from a full face enumeration.
pub fn bounded_complex(arr: &Arrangement, faces: &[Face]) -> BoundedComplex {
    let bounded: Vec<Face> = faces.iter().filter(|f| f.bounded).cloned().collect();
    let mut counts = vec![0usize; arr.dim() + 1];
    for f in &bounded {
        counts[f.dim] += 1;
    }
    let mut incidence = Vec::new();
    for (i, lo) in bounded.iter().enumerate() {
        for (j, hi) in bounded.iter().enumerate() {
            if lo.dim + 1 == hi.dim && lo.sign.refines(&hi.sign) {
                incidence.push((i, j));
            }
        }
    }
    BoundedComplex {
        faces: bounded,
        counts,
        incidence,
    }
}

/// A bounded chamber: a full-support bounded region with its exact vertex
/// set and its oriented defining inequalities `<coeffs, p> >= rhs`.
#[derive(Debug, Clone)]
pub struct BoundedChamber {
    pub sign: SignVector,
    pub vertices: Vec<Vec<BigRational>>,
    pub inequalities: Vec<(Vec<BigInt>, BigRational)>,
}

/// The full-support bounded faces, each with vertex list and inequalities.
pub fn bounded_chambers(arr: &Arrangement, faces: &[Face]) -> Vec<BoundedChamber> {
    faces
        .iter()
        .filter(|f| f.bounded && f.sign.is_full_support())
        .map(|f| {
            let vertices = faces
                .iter()
                .filter(|v| v.dim == 0 && v.bounded && v.sign.refines(&f.sign))
                .map(|v| v.witness.clone())
                .collect();
            let inequalities = arr
                .hyperplanes
                .iter()
                .filter(|hp| !hp.has_zero_normal())
                .map(|hp| {
                    let s = f.sign.0[hp.index];
                    let flip = s == Sign::Neg;
                    let coeffs: Vec<BigInt> = hp
                        .normal
                        .iter()
                        .map(|x| if flip { -x.clone() } else { x.clone() })
                        .collect();
                    let rhs = if flip {
                        hp.offset.clone()
                    } else {
                        -hp.offset.clone()
                    };
                    (coeffs, rhs)
                })
                .collect();
            BoundedChamber {
                sign: f.sign.clone(),
                vertices,
                inequalities,
            }
        })
        .collect()
}

/// Pairwise intersection data of the core components.
#[derive(Debug, Clone)]
pub struct CoreStructure {
    pub components: Vec<BoundedChamber>,
    /// For each pair `(i, j)`, `i < j`, the index into `complex.faces` of the
    /// common face, or `None` when the components are disjoint.
    pub intersections: Vec<(usize, usize, Option<usize>)>,
}

/// Components of the core (one toric variety per bounded chamber) and how
/// they intersect. Requires every weight to be nonzero; specs with zero
/// weights must be split into their flat factors first.
pub fn core_components(
    spec: &TorusSpec,
    arr: &Arrangement,
    faces: &[Face],
    complex: &BoundedComplex,
) -> Result<CoreStructure> {
    if !spec.zero_weights().is_empty() {
        return Err(Error::ZeroWeights(spec.zero_weights().to_vec()));
    }
    let components = bounded_chambers(arr, faces);
    let mut intersections = Vec::new();
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let common = complex
                .faces
                .iter()
                .enumerate()
                .filter(|(_, f)| {
                    f.sign.refines(&components[i].sign) && f.sign.refines(&components[j].sign)
                })
                .max_by_key(|(_, f)| f.dim)
                .map(|(idx, _)| idx);
            intersections.push((i, j, common));
        }
    }
    Ok(CoreStructure {
        components,
        intersections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::TorusSpec;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn rr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn line_spec(n: usize) -> TorusSpec {
        TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1; n + 1]])).unwrap()
    }

    fn rank2_spec() -> TorusSpec {
        TorusSpec::from_basis(IntMatrix::from_rows(&[
            vec![1, 1, 0, 1, 0],
            vec![1, 0, 1, 0, 1],
        ]))
        .unwrap()
    }

    #[test]
    fn line_arrangement_offsets() {
        let spec = line_spec(1);
        let arr = Arrangement::build(&spec, &[rat(1)]).unwrap();
        assert_eq!(arr.hyperplanes[0].normal, vec![BigInt::from(1)]);
        assert_eq!(arr.hyperplanes[0].offset, rr(1, 2));
        assert_eq!(arr.hyperplanes[1].normal, vec![BigInt::from(-1)]);
        assert_eq!(arr.hyperplanes[1].offset, rr(1, 2));
        // F_1 = {-1/2}, F_2 = {1/2}
    }

    #[test]
    fn line_arrangement_faces() {
        let spec = line_spec(1);
        let arr = Arrangement::build(&spec, &[rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        assert_eq!(faces.len(), 5);
        let chambers = faces.iter().filter(|f| f.dim == 1).count();
        let vertices = faces.iter().filter(|f| f.dim == 0).count();
        assert_eq!((chambers, vertices), (3, 2));
        let complex = bounded_complex(&arr, &faces);
        assert_eq!(complex.counts, vec![2, 1]);
        assert_eq!(complex.alternating_sum(), 1);
        // the segment covers both endpoints
        assert_eq!(complex.incidence.len(), 2);
    }

    #[test]
    fn single_central_hyperplane_in_plane() {
        // one hyperplane through the origin in dimension 2:
        // basis [1,-1] gives normals (1,1) and offset 0 on both columns?
        // simpler: N=3, d=1 with a repeated zero offset is overkill; build
        // the three-face picture directly from a rank-1 spec with alpha = 0
        // being nonregular; instead use B = [1 1] with alpha = 0 shifted:
        // a central arrangement comes from B=[[1,-1]] and alpha = 0 is not
        // regular, so test the raw enumerator on a hand-built arrangement.
        let arr = Arrangement {
            hyperplanes: vec![Hyperplane {
                index: 0,
                normal: vec![BigInt::from(1), BigInt::from(0)],
                offset: rat(0),
            }],
            dim: 2,
        };
        let faces = arr.enumerate_faces();
        assert_eq!(faces.len(), 3);
        let line = faces.iter().find(|f| f.sign.0 == vec![Sign::Zero]).unwrap();
        assert_eq!(line.dim, 1);
        assert!(!line.bounded);
        assert!(faces.iter().filter(|f| f.dim == 2).all(|f| !f.bounded));
    }

    #[test]
    fn rank2_example_bounded_counts() {
        let spec = rank2_spec();
        let arr = Arrangement::build(&spec, &[rat(3), rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        let complex = bounded_complex(&arr, &faces);
        assert_eq!(complex.counts, vec![8, 14, 9, 2]);
        assert_eq!(complex.alternating_sum(), 1);
    }

    #[test]
    fn rank2_example_empty_triples() {
        let spec = rank2_spec();
        let arr = Arrangement::build(&spec, &[rat(3), rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        // F_1 n F_2 n F_4 = F_1 n F_3 n F_5 = empty: no face has zeros there
        for zs in [[0usize, 1, 3], [0, 2, 4]] {
            assert!(!faces
                .iter()
                .any(|f| zs.iter().all(|&i| f.sign.0[i] == Sign::Zero)));
        }
    }

    #[test]
    fn rank2_example_compact_chambers() {
        let spec = rank2_spec();
        let arr = Arrangement::build(&spec, &[rat(3), rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        let chambers = bounded_chambers(&arr, &faces);
        let mut signs: Vec<String> = chambers.iter().map(|c| c.sign.to_string()).collect();
        signs.sort();
        assert_eq!(signs, vec!["(+,+,+,+,+)", "(+,+,-,+,-)"]);
        // tetrahedron and a 6-vertex polytope
        let mut vertex_counts: Vec<usize> = chambers.iter().map(|c| c.vertices.len()).collect();
        vertex_counts.sort_unstable();
        assert_eq!(vertex_counts, vec![4, 6]);
    }

    #[test]
    fn rank2_example_second_chamber() {
        let spec = rank2_spec();
        // alpha in the adjacent chamber (t > s > 0)
        let arr = Arrangement::build(&spec, &[rat(1), rat(3)]).unwrap();
        let faces = arr.enumerate_faces();
        let chambers = bounded_chambers(&arr, &faces);
        let mut signs: Vec<String> = chambers.iter().map(|c| c.sign.to_string()).collect();
        signs.sort();
        assert_eq!(signs, vec!["(+,+,+,+,+)", "(+,-,+,-,+)"]);
        let complex = bounded_complex(&arr, &faces);
        assert_eq!(complex.counts, vec![8, 14, 9, 2]);
    }

    #[test]
    fn core_components_of_rank2_example() {
        let spec = rank2_spec();
        let arr = Arrangement::build(&spec, &[rat(3), rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        let complex = bounded_complex(&arr, &faces);
        let core = core_components(&spec, &arr, &faces, &complex).unwrap();
        assert_eq!(core.components.len(), 2);
        assert_eq!(core.intersections.len(), 1);
        let (_, _, common) = core.intersections[0];
        let face = &complex.faces[common.expect("components meet")];
        // they meet along the segment with zeros exactly at indices 2 and 4
        assert_eq!(face.dim, 1);
        assert_eq!(face.sign.zero_set(), vec![2, 4]);
    }

    #[test]
    fn line_core_is_single_simplex() {
        let spec = line_spec(2);
        let arr = Arrangement::build(&spec, &[rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        let complex = bounded_complex(&arr, &faces);
        let core = core_components(&spec, &arr, &faces, &complex).unwrap();
        assert_eq!(core.components.len(), 1);
        assert!(core.intersections.is_empty());
        assert_eq!(core.components[0].vertices.len(), 3);
    }

    #[test]
    fn point_spec_core() {
        let spec = TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1]])).unwrap();
        let arr = Arrangement::build(&spec, &[rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].dim, 0);
        assert!(faces[0].bounded);
        let complex = bounded_complex(&arr, &faces);
        let core = core_components(&spec, &arr, &faces, &complex).unwrap();
        assert_eq!(core.components.len(), 1);
    }

    #[test]
    fn zero_weight_split_is_rejected_by_core() {
        let spec =
            TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]])).unwrap();
        let arr = Arrangement::build(&spec, &[rat(1), rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        let complex = bounded_complex(&arr, &faces);
        match core_components(&spec, &arr, &faces, &complex) {
            Err(Error::ZeroWeights(idx)) => assert_eq!(idx, vec![2]),
            other => panic!("expected zero-weight error, got {other:?}"),
        }
    }

    #[test]
    fn threaded_enumeration_matches_sequential() {
        let spec = rank2_spec();
        let arr = Arrangement::build(&spec, &[rat(3), rat(1)]).unwrap();
        let seq = arr.enumerate_faces();
        let par = arr.enumerate_faces_threaded(4);
        assert_eq!(seq.len(), par.len());
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!(a.sign, b.sign);
            assert_eq!(a.dim, b.dim);
            assert_eq!(a.bounded, b.bounded);
            assert_eq!(a.witness, b.witness);
        }
    }

    #[test]
    fn counts_stable_under_lift_translation() {
        // d_k must not depend on which lift h of alpha is used: translating
        // the witness alpha within its chamber only translates hyperplanes.
        let spec = rank2_spec();
        for alpha in [[rat(3), rat(1)], [rat(5), rat(2)], [rr(7, 2), rr(3, 2)]] {
            let arr = Arrangement::build(&spec, &alpha).unwrap();
            let faces = arr.enumerate_faces();
            let complex = bounded_complex(&arr, &faces);
            assert_eq!(complex.counts, vec![8, 14, 9, 2]);
        }
    }
}
