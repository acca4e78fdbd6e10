//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex over `BigRational` with Bland's pivot
//! rule, so termination is guaranteed and every answer is exact. Variables
//! are unrestricted in sign (they are split internally); instances at the
//! scale of this crate are small, so simplicity wins over sparsity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Rel,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, rel: Rel, rhs: BigRational) -> Self {
        Self { coeffs, rel, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
}

/// Maximize `objective . x` subject to the constraints, `x` free.
pub fn maximize(objective: &[BigRational], constraints: &[Constraint]) -> LpResult {
    Tableau::build(objective, constraints).solve()
}

/// Any point satisfying the constraints, or `None` if there is none.
pub fn feasible_point(constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    let n = constraints.first().map_or(0, |c| c.coeffs.len());
    let zero_obj = vec![BigRational::zero(); n];
    match maximize(&zero_obj, constraints) {
        LpResult::Optimal { point, .. } => Some(point),
        LpResult::Infeasible => None,
        LpResult::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

/// A point satisfying every equality `eq . x = rhs` and every strict
/// inequality `coeffs . x > rhs`, or `None`.
///
/// Strictness is handled by maximizing a slack `t` with `coeffs.x - t >= rhs`
/// and `t <= 1`; the system has a strict solution iff the optimum is
/// positive, and the optimizer itself is then a valid witness.
pub fn strict_feasible_point(
    n_vars: usize,
    equalities: &[(Vec<BigRational>, BigRational)],
    stricts: &[(Vec<BigRational>, BigRational)],
) -> Option<Vec<BigRational>> {
    if stricts.is_empty() {
        let cons: Vec<Constraint> = equalities
            .iter()
            .map(|(c, r)| {
                let mut coeffs = c.clone();
                coeffs.resize(n_vars, BigRational::zero());
                Constraint::new(coeffs, Rel::Eq, r.clone())
            })
            .collect();
        return if cons.is_empty() {
            Some(vec![BigRational::zero(); n_vars])
        } else {
            feasible_point(&cons)
        };
    }
    // variables: x_0..x_{n-1}, t
    let mut cons: Vec<Constraint> = Vec::with_capacity(equalities.len() + stricts.len() + 1);
    for (c, r) in equalities {
        let mut coeffs = c.clone();
        coeffs.resize(n_vars, BigRational::zero());
        coeffs.push(BigRational::zero());
        cons.push(Constraint::new(coeffs, Rel::Eq, r.clone()));
    }
    for (c, r) in stricts {
        let mut coeffs = c.clone();
        coeffs.resize(n_vars, BigRational::zero());
        coeffs.push(-BigRational::one());
        cons.push(Constraint::new(coeffs, Rel::Ge, r.clone()));
    }
    let mut cap = vec![BigRational::zero(); n_vars];
    cap.push(BigRational::one());
    cons.push(Constraint::new(cap.clone(), Rel::Le, BigRational::one()));
    let mut obj = vec![BigRational::zero(); n_vars];
    obj.push(BigRational::one());
    match maximize(&obj, &cons) {
        LpResult::Optimal { value, mut point } if value.is_positive() => {
            point.truncate(n_vars);
            Some(point)
        }
        _ => None,
    }
}

/// Dense simplex tableau in standard equality form with nonnegative
/// variables; free original variables are split as differences.
struct Tableau {
    n_orig: usize,
    n_structural: usize, // split vars + slacks
    n_total: usize,      // + artificials
    m: usize,
    // rows[i] = coefficients over all n_total variables, then rhs
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    objective: Vec<BigRational>, // over original free variables
}

impl Tableau {
    fn build(objective: &[BigRational], constraints: &[Constraint]) -> Self {
        let n_orig = objective.len();
        let m = constraints.len();
        let n_slack = constraints.iter().filter(|c| c.rel != Rel::Eq).count();
        let n_structural = 2 * n_orig + n_slack;
        let n_total = n_structural + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack_idx = 2 * n_orig;
        for (i, c) in constraints.iter().enumerate() {
            assert_eq!(c.coeffs.len(), n_orig, "constraint arity mismatch");
            let mut row = vec![BigRational::zero(); n_total + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[2 * j] = a.clone();
                row[2 * j + 1] = -a.clone();
            }
            match c.rel {
                Rel::Le => {
                    row[slack_idx] = BigRational::one();
                    slack_idx += 1;
                }
                Rel::Ge => {
                    row[slack_idx] = -BigRational::one();
                    slack_idx += 1;
                }
                Rel::Eq => {}
            }
            row[n_total] = c.rhs.clone();
            // normalize to nonnegative rhs so artificials start feasible
            if row[n_total].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[n_structural + i] = BigRational::one();
            basis.push(n_structural + i);
            rows.push(row);
        }
        Tableau {
            n_orig,
            n_structural,
            n_total,
            m,
            rows,
            basis,
            objective: objective.to_vec(),
        }
    }

    fn solve(mut self) -> LpResult {
        // phase 1: minimize the sum of artificials
        let mut cost = vec![BigRational::zero(); self.n_total];
        for j in self.n_structural..self.n_total {
            cost[j] = -BigRational::one();
        }
        self.run_simplex(&cost, true);
        let phase1 = self.objective_value(&cost);
        if phase1.is_negative() {
            return LpResult::Infeasible;
        }
        self.evict_artificials();

        // phase 2: the real objective over split variables
        let mut cost = vec![BigRational::zero(); self.n_total];
        for j in 0..self.n_orig {
            cost[2 * j] = self.objective[j].clone();
            cost[2 * j + 1] = -self.objective[j].clone();
        }
        if !self.run_simplex(&cost, false) {
            return LpResult::Unbounded;
        }
        let mut point = vec![BigRational::zero(); self.n_orig];
        let values = self.basic_values();
        for j in 0..self.n_orig {
            point[j] = &values[2 * j] - &values[2 * j + 1];
        }
        LpResult::Optimal {
            value: self.objective_value(&cost),
            point,
        }
    }

    fn basic_values(&self) -> Vec<BigRational> {
        let mut vals = vec![BigRational::zero(); self.n_total];
        for (i, &b) in self.basis.iter().enumerate() {
            vals[b] = self.rows[i][self.n_total].clone();
        }
        vals
    }

    fn objective_value(&self, cost: &[BigRational]) -> BigRational {
        self.basic_values()
            .iter()
            .zip(cost)
            .map(|(v, c)| v * c)
            .sum()
    }

    /// Bland's rule simplex on the current basis, maximizing `cost . vars`.
    /// In phase 1 artificial columns may re-enter; in phase 2 (`phase1 =
    /// false`) they are barred. Returns false on unboundedness.
    ///
    /// Negated reduced costs are kept in a dedicated row and updated with
    /// each pivot instead of being recomputed from the basis.
    fn run_simplex(&mut self, cost: &[BigRational], phase1: bool) -> bool {
        // z[j] = c_B B^-1 A_j - c_j; entering variables have z[j] < 0
        let mut z = vec![BigRational::zero(); self.n_total + 1];
        for i in 0..self.m {
            let cb = &cost[self.basis[i]];
            if !cb.is_zero() {
                for (zj, rj) in z.iter_mut().zip(&self.rows[i]) {
                    if !rj.is_zero() {
                        *zj += cb * rj;
                    }
                }
            }
        }
        for j in 0..self.n_total {
            if !cost[j].is_zero() {
                z[j] -= &cost[j];
            }
        }
        loop {
            // Bland: entering variable = smallest eligible index
            let entering = (0..self.n_total).find(|&j| {
                (phase1 || j < self.n_structural) && z[j].is_negative() && !self.basis.contains(&j)
            });
            let Some(e) = entering else {
                return true; // optimal
            };
            // ratio test, Bland tie-break on the leaving basic variable index
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][e];
                if a.is_positive() {
                    let ratio = &self.rows[i][self.n_total] / a;
                    match &leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]) {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((l, _)) = leave else {
                return false; // unbounded along e
            };
            self.pivot(l, e);
            let f = z[e].clone();
            if !f.is_zero() {
                for (zj, rj) in z.iter_mut().zip(&self.rows[l]) {
                    if !rj.is_zero() {
                        *zj -= &f * rj;
                    }
                }
            }
        }
    }

    fn pivot(&mut self, l: usize, e: usize) {
        let pv = self.rows[l][e].clone();
        for x in self.rows[l].iter_mut() {
            *x = &*x / &pv;
        }
        for i in 0..self.m {
            if i != l && !self.rows[i][e].is_zero() {
                let f = self.rows[i][e].clone();
                let (head, tail) = if i < l {
                    let (a, b) = self.rows.split_at_mut(l);
                    (&mut a[i], &b[0])
                } else {
                    let (a, b) = self.rows.split_at_mut(i);
                    (&mut b[0], &a[l])
                };
                for (x, p) in head.iter_mut().zip(tail.iter()) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        self.basis[l] = e;
    }

    /// After phase 1, pivot artificial variables out of the basis where
    /// possible and drop redundant rows that offer no pivot.
    fn evict_artificials(&mut self) {
        let mut i = 0;
        while i < self.m {
            if self.basis[i] >= self.n_structural {
                let col = (0..self.n_structural).find(|&j| !self.rows[i][j].is_zero());
                match col {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // redundant constraint
                        self.rows.remove(i);
                        self.basis.remove(i);
                        self.m -= 1;
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}

/// Clear denominators and common factors from a rational vector, yielding a
/// primitive integer direction with the same orientation.
pub fn integerize(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = crate::linalg::gcd_all(ints.iter());
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.iter().map(|x| x / &g).collect()
    }
}
