//! Chamber structure of the parameter space for a fixed complex parameter,
//! chamber identification, wall-crossing classification (biholomorphism vs.
//! Mukai flop) with the recursive fixed-locus spec, and the period report.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arrangement::Sign;
use crate::error::{Error, Result};
use crate::linalg::{inverse_unimodular, saturate, smith_normal_form, solve_rational, IntMatrix};
use crate::lp;
use crate::torus::{is_regular_value, Parameter, TorusSpec, Wall};

fn pairing(v: &[BigRational], y: &[BigInt]) -> BigRational {
    v.iter()
        .zip(y)
        .map(|(a, b)| a * BigRational::from(b.clone()))
        .sum()
}

/// Walls whose complexified span contains the fixed complex parameter; only
/// these separate chambers.
pub fn active_walls(
    walls: &[Wall],
    beta_re: &[BigRational],
    beta_im: &[BigRational],
) -> Vec<usize> {
    walls
        .iter()
        .filter(|w| pairing(beta_re, &w.normal).is_zero() && pairing(beta_im, &w.normal).is_zero())
        .map(|w| w.id)
        .collect()
}

/// One chamber: signs of the pairings with the active wall normals, plus an
/// exact interior witness.
#[derive(Debug, Clone)]
pub struct ChamberCell {
    pub signs: Vec<Sign>,
    pub witness: Vec<BigRational>,
}

#[derive(Debug, Clone)]
pub struct ChamberStructure {
    pub active: Vec<usize>,
    pub chambers: Vec<ChamberCell>,
}

/// All realizable strict sign patterns over the active walls. With no active
/// walls there is a single chamber containing everything.
pub fn enumerate_chambers(
    spec: &TorusSpec,
    walls: &[Wall],
    beta_re: &[BigRational],
    beta_im: &[BigRational],
) -> ChamberStructure {
    let active = active_walls(walls, beta_re, beta_im);
    let d = spec.rank();
    let normals: Vec<&Vec<BigInt>> = active.iter().map(|&s| &walls[s].normal).collect();
    let mut chambers = Vec::new();
    let mut signs: Vec<Sign> = Vec::with_capacity(normals.len());
    let mut stricts: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    dfs_chambers(d, &normals, &mut signs, &mut stricts, &mut chambers);
    chambers.sort_by(|a, b| a.signs.cmp(&b.signs));
    ChamberStructure { active, chambers }
}

fn dfs_chambers(
    d: usize,
    normals: &[&Vec<BigInt>],
    signs: &mut Vec<Sign>,
    stricts: &mut Vec<(Vec<BigRational>, BigRational)>,
    out: &mut Vec<ChamberCell>,
) {
    let i = signs.len();
    if i == normals.len() {
        if let Some(witness) = lp::strict_feasible_point(d, &[], stricts) {
            out.push(ChamberCell {
                signs: signs.clone(),
                witness,
            });
        }
        return;
    }
    for s in [Sign::Neg, Sign::Pos] {
        let coeffs: Vec<BigRational> = normals[i]
            .iter()
            .map(|x| {
                let v = BigRational::from(x.clone());
                if s == Sign::Neg {
                    -v
                } else {
                    v
                }
            })
            .collect();
        stricts.push((coeffs, BigRational::zero()));
        if lp::strict_feasible_point(d, &[], stricts).is_some() {
            signs.push(s);
            dfs_chambers(d, normals, signs, stricts, out);
            signs.pop();
        }
        stricts.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChamberLocation {
    /// Signs over the active walls, in active-list order.
    Interior(Vec<Sign>),
    /// The parameter pairs to zero with these active walls.
    OnWalls(Vec<usize>),
}

/// Locate a real parameter in the chamber structure for the given complex
/// parameter.
pub fn chamber_of(
    walls: &[Wall],
    beta_re: &[BigRational],
    beta_im: &[BigRational],
    alpha: &[BigRational],
) -> ChamberLocation {
    let active = active_walls(walls, beta_re, beta_im);
    let mut signs = Vec::with_capacity(active.len());
    let mut on = Vec::new();
    for &s in &active {
        let p = pairing(alpha, &walls[s].normal);
        if p.is_zero() {
            on.push(s);
        } else if p > BigRational::zero() {
            signs.push(Sign::Pos);
        } else {
            signs.push(Sign::Neg);
        }
    }
    if on.is_empty() {
        ChamberLocation::Interior(signs)
    } else {
        ChamberLocation::OnWalls(on)
    }
}

/// The fixed locus of a wall's isotropy circle: the quotient subtorus acting
/// on the coordinates outside the circuit, plus the data needed to project
/// parameters onto the wall.
#[derive(Debug, Clone)]
pub struct FixedLocus {
    pub spec: TorusSpec,
    /// Ambient coordinate indices that survive (the circuit is deleted).
    pub coordinates: Vec<usize>,
    /// Basis of the image lattice before saturation, on the surviving
    /// coordinates; rows correspond to `completion` rows.
    image_basis: IntMatrix,
    /// Rows completing the wall normal to a unimodular basis.
    completion: IntMatrix,
}

impl FixedLocus {
    /// Express a parameter lying on the wall in the quotient spec's
    /// coordinates. The real part must pair to zero with the wall normal.
    pub fn project_parameter(
        &self,
        alpha: &[BigRational],
        beta_re: &[BigRational],
        beta_im: &[BigRational],
    ) -> Parameter {
        let project = |v: &[BigRational]| -> Vec<BigRational> {
            let cv = self.completion.mul_rat_vec(v);
            let d1 = self.spec.rank();
            let mut out = Vec::with_capacity(d1);
            let img_t = self.image_basis.transpose();
            for j in 0..d1 {
                // write the saturated basis row in terms of the image rows
                let target: Vec<BigRational> = self
                    .spec
                    .basis()
                    .row(j)
                    .iter()
                    .map(|x| BigRational::from(x.clone()))
                    .collect();
                let q = solve_rational(&img_t, &target)
                    .expect("saturated basis lies in the rational row span");
                out.push(q.iter().zip(&cv).map(|(a, b)| a * b).sum());
            }
            out
        };
        Parameter {
            alpha: project(alpha),
            beta_re: project(beta_re),
            beta_im: project(beta_im),
        }
    }
}

/// Build the fixed-locus spec of a wall: delete the circuit coordinates and
/// quotient the subtorus lattice by the wall normal. The result is saturated
/// and recursion-ready; for rank-one specs it degenerates to the trivial
/// subtorus of the surviving coordinates.
pub fn fixed_locus_spec(spec: &TorusSpec, wall: &Wall) -> Result<FixedLocus> {
    let d = spec.rank();
    let coordinates: Vec<usize> = (0..spec.ambient_rank())
        .filter(|i| !wall.circuit.contains(i))
        .collect();
    // complete the primitive normal y to a unimodular matrix with first row y
    let y = IntMatrix::from_bigint_rows(vec![wall.normal.clone()], d);
    let snf = smith_normal_form(&y);
    debug_assert!(snf.s.entry(0, 0).is_one(), "wall normals are primitive");
    let mut w = inverse_unimodular(&snf.v);
    // first row of v^-1 is ±y; normalize the sign so it is exactly y
    let first = w.row(0).to_vec();
    if first != wall.normal {
        for c in 0..w.cols() {
            let neg = -w.entry(0, c).clone();
            *w.entry_mut(0, c) = neg;
        }
        debug_assert_eq!(w.row(0), &wall.normal[..]);
    }
    let completion_rows: Vec<Vec<BigInt>> = (1..d).map(|r| w.row(r).to_vec()).collect();
    let completion = IntMatrix::from_bigint_rows(completion_rows, d);
    let image_full = completion.mul(spec.basis());
    let image_basis = image_full.select_columns(&coordinates);
    let saturated = saturate(&image_basis);
    let quotient = TorusSpec::from_basis(saturated)?;
    Ok(FixedLocus {
        spec: quotient,
        coordinates,
        image_basis,
        completion,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    /// The two sides are canonically biholomorphic (circuit of size at most
    /// two).
    Isomorphism,
    /// The two sides differ by a Mukai flop along a projective-space bundle
    /// over the fixed locus.
    MukaiFlop,
}

#[derive(Debug, Clone)]
pub struct CrossingReport {
    pub wall: usize,
    pub circuit: Vec<usize>,
    pub kind: CrossingKind,
    /// Projective dimension of the flop fiber (`#circuit - 1`); flops only.
    pub fiber_projective_dim: Option<usize>,
    /// Codimension of the exceptional locus (`#circuit - 1`); flops only.
    pub codim: Option<usize>,
    /// Where the crossing segment meets the wall.
    pub alpha_on_wall: Vec<BigRational>,
    pub fixed_locus: FixedLocus,
    pub v0_param: Parameter,
}

/// Classify the transition between two regular parameters whose chambers
/// are adjacent across exactly one active wall.
pub fn classify_crossing(
    spec: &TorusSpec,
    walls: &[Wall],
    beta_re: &[BigRational],
    beta_im: &[BigRational],
    alpha_plus: &[BigRational],
    alpha_minus: &[BigRational],
) -> Result<CrossingReport> {
    let active = active_walls(walls, beta_re, beta_im);
    let signs_plus = match chamber_of(walls, beta_re, beta_im, alpha_plus) {
        ChamberLocation::Interior(s) => s,
        ChamberLocation::OnWalls(on) => return Err(Error::OnWall(on)),
    };
    let signs_minus = match chamber_of(walls, beta_re, beta_im, alpha_minus) {
        ChamberLocation::Interior(s) => s,
        ChamberLocation::OnWalls(on) => return Err(Error::OnWall(on)),
    };
    let differing: Vec<usize> = active
        .iter()
        .zip(signs_plus.iter().zip(&signs_minus))
        .filter(|(_, (a, b))| a != b)
        .map(|(&s, _)| s)
        .collect();
    let wall_id = match differing.len() {
        0 => return Err(Error::SameChamber),
        1 => differing[0],
        _ => return Err(Error::NotAdjacent(differing)),
    };
    let wall = &walls[wall_id];
    // the segment between the two parameters meets the wall exactly once,
    // and stays on the common side of every other active wall
    let pp = pairing(alpha_plus, &wall.normal);
    let pm = pairing(alpha_minus, &wall.normal);
    let t = &pp / (&pp - &pm);
    let alpha_on_wall: Vec<BigRational> = alpha_plus
        .iter()
        .zip(alpha_minus)
        .map(|(p, m)| p + &t * (m - p))
        .collect();
    let fixed_locus = fixed_locus_spec(spec, wall)?;
    let v0_param = fixed_locus.project_parameter(&alpha_on_wall, beta_re, beta_im);
    let size = wall.circuit.len();
    let (kind, fiber, codim) = if size >= 3 {
        (CrossingKind::MukaiFlop, Some(size - 1), Some(size - 1))
    } else {
        (CrossingKind::Isomorphism, None, None)
    };
    Ok(CrossingReport {
        wall: wall_id,
        circuit: wall.circuit.clone(),
        kind,
        fiber_projective_dim: fiber,
        codim,
        alpha_on_wall,
        fixed_locus,
        v0_param,
    })
}

/// The degree-two cohomology classes of the quotient's Kähler forms, which
/// are the parameters themselves under the degree-two identification.
#[derive(Debug, Clone)]
pub struct PeriodReport {
    pub omega1: Vec<BigRational>,
    pub omega_c_re: Vec<BigRational>,
    pub omega_c_im: Vec<BigRational>,
}

/// Requires every coordinate direction to project nontrivially (no column of
/// the Gale dual vanishes) and the parameter to be regular.
pub fn period(spec: &TorusSpec, walls: &[Wall], param: &Parameter) -> Result<PeriodReport> {
    if let Some(&i) = spec.zero_projections().first() {
        return Err(Error::PeriodHypothesis(i));
    }
    let report = is_regular_value(walls, param);
    if !report.regular {
        return Err(Error::NotRegular {
            walls: report.violating_walls,
        });
    }
    Ok(PeriodReport {
        omega1: param.alpha.clone(),
        omega_c_re: param.beta_re.clone(),
        omega_c_im: param.beta_im.clone(),
    })
}
