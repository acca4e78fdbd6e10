//! Topological invariants: the Poincaré polynomial from bounded face counts,
//! two presentations of the cohomology ring (circuit monomials and minimal
//! empty-intersection monomials), the reduction that eliminates the linear
//! relations, per-component ideals, and an exact Hilbert-function computation
//! used to cross-check all of them degree by degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arrangement::{bounded_chambers, bounded_complex, Arrangement, Sign, SignVector};
use crate::error::{Error, Result};
use crate::linalg::rank_of_bigint_rows;
use crate::lp;
use crate::torus::{enumerate_walls, is_regular_value, is_smooth, Parameter, TorusSpec};

/// Poincaré polynomial in the variable `t`; only even degrees occur, so
/// `betti[k]` is the coefficient of `t^(2k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincarePolynomial {
    pub betti: Vec<u64>,
}

impl PoincarePolynomial {
    /// Expand `sum_k d_k (t^2 - 1)^k` from bounded face counts.
    pub fn from_face_counts(counts: &[usize]) -> PoincarePolynomial {
        let n = counts.len();
        let mut betti = vec![0i64; n];
        for (k, &d) in counts.iter().enumerate() {
            // (t^2 - 1)^k contributes C(k, j) (-1)^(k-j) to t^(2j)
            for (j, b) in betti.iter_mut().enumerate().take(k + 1) {
                let c = binomial(k, j) * d as i64;
                if (k - j) % 2 == 0 {
                    *b += c;
                } else {
                    *b -= c;
                }
            }
        }
        assert!(
            betti.iter().all(|&b| b >= 0),
            "face counts produced a negative Betti number: {betti:?}"
        );
        PoincarePolynomial {
            betti: betti.into_iter().map(|b| b as u64).collect(),
        }
    }

    pub fn total_rank(&self) -> u64 {
        self.betti.iter().sum()
    }

    /// Largest `k` with `betti[k] != 0` (0 for the zero polynomial).
    pub fn top_power(&self) -> usize {
        self.betti.iter().rposition(|&b| b != 0).unwrap_or(0)
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut out = 1i64;
    for i in 0..k.min(n - k) {
        out = out * (n - i) as i64 / (i + 1) as i64;
    }
    out
}

impl std::fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut wrote = false;
        for (k, &b) in self.betti.iter().enumerate() {
            if b == 0 {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match (k, b) {
                (0, b) => write!(f, "{b}")?,
                (_, 1) => write!(f, "t^{}", 2 * k)?,
                (_, b) => write!(f, "{b}t^{}", 2 * k)?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Betti numbers of the quotient at a regular real parameter.
pub fn poincare_polynomial(spec: &TorusSpec, alpha: &[BigRational]) -> Result<PoincarePolynomial> {
    ensure_regular(spec, alpha)?;
    let arr = Arrangement::build(spec, alpha)?;
    let faces = arr.enumerate_faces();
    let complex = bounded_complex(&arr, &faces);
    Ok(PoincarePolynomial::from_face_counts(&complex.counts))
}

fn ensure_regular(spec: &TorusSpec, alpha: &[BigRational]) -> Result<()> {
    let walls = enumerate_walls(spec);
    let report = is_regular_value(&walls, &Parameter::real(alpha.to_vec()));
    if !report.regular {
        return Err(Error::NotRegular {
            walls: report.violating_walls,
        });
    }
    Ok(())
}

/// Which family of monomial generators to present the ring with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialMode {
    /// One generator per wall circuit; parameter-free.
    Circuits,
    /// Inclusion-minimal index sets whose hyperplanes have empty common
    /// intersection; needs a regular real parameter.
    EmptyIntersections,
}

/// Whether the presented ring is valid over the integers (smooth quotient)
/// or only over the rationals (orbifold).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientValidity {
    Integral,
    RationalOnly,
}

/// Presentation of the cohomology ring: one degree-one generator per
/// coordinate, integer linear relations, and square-free monomial relations
/// given by index sets.
#[derive(Debug, Clone)]
pub struct RingPresentation {
    pub nvars: usize,
    pub linear_relations: Vec<Vec<BigInt>>,
    pub monomials: Vec<Vec<usize>>,
    pub coefficients: CoefficientValidity,
}

/// The ring presentation in the chosen monomial mode. The linear relations
/// are always the canonical kernel basis of the weight matrix.
pub fn cohomology_presentation(
    spec: &TorusSpec,
    mode: MonomialMode,
    alpha: Option<&[BigRational]>,
) -> Result<RingPresentation> {
    let monomials = match mode {
        MonomialMode::Circuits => enumerate_walls(spec)
            .into_iter()
            .map(|w| w.circuit)
            .collect(),
        MonomialMode::EmptyIntersections => {
            let alpha = alpha.ok_or(Error::MissingParameter)?;
            ensure_regular(spec, alpha)?;
            let arr = Arrangement::build(spec, alpha)?;
            minimal_empty_sets(&arr, None)
        }
    };
    Ok(RingPresentation {
        nvars: spec.ambient_rank(),
        linear_relations: gale_rows(spec),
        monomials,
        coefficients: coefficient_validity(spec),
    })
}

fn gale_rows(spec: &TorusSpec) -> Vec<Vec<BigInt>> {
    let a = spec.gale();
    (0..a.rows()).map(|r| a.row(r).to_vec()).collect()
}

fn coefficient_validity(spec: &TorusSpec) -> CoefficientValidity {
    if is_smooth(spec).smooth {
        CoefficientValidity::Integral
    } else {
        CoefficientValidity::RationalOnly
    }
}

/// Inclusion-minimal `J` with `inter_{i in J} F_i` empty (optionally further
/// intersected with a closed chamber), by increasing size then
/// lexicographically. Helly's theorem bounds minimal certificates by `n + 1`
/// indices, so the search is finite.
fn minimal_empty_sets(arr: &Arrangement, chamber: Option<&SignVector>) -> Vec<Vec<usize>> {
    let n_planes = arr.hyperplanes.len();
    let dim = arr.dim();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let chamber_constraints: Vec<(Vec<BigRational>, BigRational, lp::Rel)> = match chamber {
        None => Vec::new(),
        Some(sign) => arr
            .hyperplanes
            .iter()
            .filter(|hp| !hp.has_zero_normal())
            .map(|hp| {
                let rat: Vec<BigRational> = hp
                    .normal
                    .iter()
                    .map(|x| BigRational::from(x.clone()))
                    .collect();
                let rel = match sign.0[hp.index] {
                    Sign::Pos => lp::Rel::Ge,
                    Sign::Neg => lp::Rel::Le,
                    Sign::Zero => lp::Rel::Eq,
                };
                (rat, -hp.offset.clone(), rel)
            })
            .collect(),
    };
    for size in 1..=(dim + 1).min(n_planes) {
        for subset in subsets(n_planes, size) {
            if found.iter().any(|g| g.iter().all(|i| subset.contains(i))) {
                continue;
            }
            let mut cons: Vec<lp::Constraint> = chamber_constraints
                .iter()
                .map(|(c, rhs, rel)| lp::Constraint::new(c.clone(), *rel, rhs.clone()))
                .collect();
            let mut trivially_empty = false;
            for &i in &subset {
                let hp = &arr.hyperplanes[i];
                if hp.is_empty_locus() {
                    trivially_empty = true;
                    break;
                }
                let rat: Vec<BigRational> = hp
                    .normal
                    .iter()
                    .map(|x| BigRational::from(x.clone()))
                    .collect();
                cons.push(lp::Constraint::new(rat, lp::Rel::Eq, -hp.offset.clone()));
            }
            let empty = trivially_empty || lp::feasible_point(&cons).is_none();
            if empty {
                found.push(subset);
            }
        }
    }
    found
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        if n - start < k - cur.len() {
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// The presentation of the cohomology of a single core component: the same
/// linear relations, with monomials from index sets whose hyperplanes miss
/// the component's closed chamber.
pub fn component_ideal(
    spec: &TorusSpec,
    alpha: &[BigRational],
    epsilon: &SignVector,
) -> Result<RingPresentation> {
    let arr = Arrangement::build(spec, alpha)?;
    let faces = arr.enumerate_faces();
    let chambers = bounded_chambers(&arr, &faces);
    if !chambers.iter().any(|c| &c.sign == epsilon) {
        return Err(Error::NotBoundedChamber);
    }
    Ok(RingPresentation {
        nvars: spec.ambient_rank(),
        linear_relations: gale_rows(spec),
        monomials: minimal_empty_sets(&arr, Some(epsilon)),
        coefficients: coefficient_validity(spec),
    })
}

/// Multivariate integer polynomial, dense in the exponent map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub nvars: usize,
    terms: BTreeMap<Vec<u16>, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn linear_form(coeffs: &[BigInt]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(nvars);
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u16; nvars];
                e[j] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &BigInt)> {
        self.terms.iter()
    }

    /// Coefficient vector over a monomial basis index map; exponents outside
    /// the map are an error.
    fn coefficient_row(&self, index: &BTreeMap<Vec<u16>, usize>) -> Vec<BigInt> {
        let mut row = vec![BigInt::zero(); index.len()];
        for (e, c) in &self.terms {
            row[*index.get(e).expect("monomial outside basis")] = c.clone();
        }
        row
    }

    /// Multiply by the monomial with the given exponent vector.
    fn shift(&self, by: &[u16]) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let shifted: Vec<u16> = e.iter().zip(by).map(|(x, y)| x + y).collect();
            out.terms.insert(shifted, c.clone());
        }
        out
    }

    fn var_name(nvars: usize, j: usize) -> String {
        if nvars == 1 {
            "v".to_string()
        } else {
            format!("v{}", j + 1)
        }
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // graded lex, highest first
        let mut entries: Vec<(&Vec<u16>, &BigInt)> = self.terms.iter().collect();
        entries.sort_by(|a, b| {
            let da: usize = a.0.iter().map(|&x| x as usize).sum();
            let db: usize = b.0.iter().map(|&x| x as usize).sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (idx, (e, c)) in entries.iter().enumerate() {
            let is_const = e.iter().all(|&x| x == 0);
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (j, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", Self::var_name(self.nvars, j))?;
                if p > 1 {
                    write!(f, "^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// The presentation after eliminating the linear relations: polynomial
/// generators in one variable per subtorus rank. Renders over `Z` for smooth
/// quotients and over `Q` for orbifolds.
#[derive(Debug, Clone)]
pub struct ReducedPresentation {
    pub nvars: usize,
    pub generators: Vec<Polynomial>,
    pub coefficients: CoefficientValidity,
}

impl std::fmt::Display for ReducedPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let base = match self.coefficients {
            CoefficientValidity::Integral => "Z",
            CoefficientValidity::RationalOnly => "Q",
        };
        write!(f, "{base}[")?;
        for j in 0..self.nvars {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", Polynomial::var_name(self.nvars, j))?;
        }
        write!(f, "]/(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Substitute each degree-one generator by its weight vector, collapsing the
/// linear relations exactly; every monomial becomes a product of integer
/// linear forms in the reduced variables.
pub fn reduce_presentation(spec: &TorusSpec, pres: &RingPresentation) -> ReducedPresentation {
    let d = spec.rank();
    let generators = pres
        .monomials
        .iter()
        .map(|j_set| {
            let mut acc = Polynomial::constant(d, BigInt::one());
            for &i in j_set {
                acc = acc.mul(&Polynomial::linear_form(&spec.weight(i)));
            }
            acc
        })
        .collect();
    ReducedPresentation {
        nvars: d,
        generators,
        coefficients: pres.coefficients,
    }
}

/// Exact dimensions of the graded pieces of the quotient by the generated
/// ideal, for internal degrees `0..=through_degree` (internal degree `k`
/// corresponds to cohomological degree `2k`).
pub fn hilbert_function(pres: &ReducedPresentation, through_degree: usize) -> Vec<u64> {
    let nvars = pres.nvars;
    let gens: Vec<&Polynomial> = pres.generators.iter().filter(|g| !g.is_zero()).collect();
    let mut out = Vec::with_capacity(through_degree + 1);
    for k in 0..=through_degree {
        let basis = monomials_of_degree(nvars, k);
        if basis.is_empty() {
            out.push(0);
            continue;
        }
        let index: BTreeMap<Vec<u16>, usize> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for g in &gens {
            let dg = g.degree();
            if dg > k {
                continue;
            }
            for shift in monomials_of_degree(nvars, k - dg) {
                rows.push(g.shift(&shift).coefficient_row(&index));
            }
        }
        let rank = rank_of_bigint_rows(&rows);
        out.push((basis.len() - rank) as u64);
    }
    out
}

/// All exponent vectors of total degree `k` in `nvars` variables,
/// lexicographically by leading exponent descending.
fn monomials_of_degree(nvars: usize, k: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; nvars];
    fn go(pos: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u16;
            out.push(cur.clone());
            return;
        }
        for take in (0..=left).rev() {
            cur[pos] = take as u16;
            go(pos + 1, left - take, cur, out);
        }
        cur[pos] = 0;
    }
    if nvars == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(0, k, &mut cur, &mut out);
    out
}

/// Instance-wise check that the presented ring is generated in degree one:
/// the total Betti rank must equal the vertex count of the bounded complex
/// and the top cohomological degree twice the maximal face dimension.
#[derive(Debug, Clone)]
pub struct KirwanReport {
    pub surjective: bool,
    pub total_rank: u64,
    pub vertex_count: u64,
    pub top_power: usize,
    pub max_face_dim: usize,
}

pub fn kirwan_surjectivity_check(spec: &TorusSpec, alpha: &[BigRational]) -> Result<KirwanReport> {
    ensure_regular(spec, alpha)?;
    let arr = Arrangement::build(spec, alpha)?;
    let faces = arr.enumerate_faces();
    let complex = bounded_complex(&arr, &faces);
    let poincare = PoincarePolynomial::from_face_counts(&complex.counts);
    let vertex_count = complex.counts.first().copied().unwrap_or(0) as u64;
    let max_face_dim = complex.counts.iter().rposition(|&c| c > 0).unwrap_or(0);
    let report = KirwanReport {
        surjective: poincare.total_rank() == vertex_count && poincare.top_power() == max_face_dim,
        total_rank: poincare.total_rank(),
        vertex_count,
        top_power: poincare.top_power(),
        max_face_dim,
    };
    Ok(report)
}
