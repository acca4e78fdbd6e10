//! One function per subcommand, each producing a JSON results value plus the
//! human rendering; `report` composes them all.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use hypertoric::arrangement::{
    bounded_chambers, bounded_complex, core_components, Arrangement, SignVector,
};
use hypertoric::stability::{
    destabilizing_direction, has_closed_orbit, is_semistable, kempf_ness_descent, moment_complex,
    moment_real, FlowOptions, FlowStatus, OrbitStatus,
};
use hypertoric::topology::{
    cohomology_presentation, hilbert_function, kirwan_surjectivity_check, reduce_presentation,
    CoefficientValidity, MonomialMode, PoincarePolynomial,
};
use hypertoric::torus::{enumerate_walls, is_regular_value, is_smooth, Parameter, TorusSpec};
use hypertoric::wallcross::{
    chamber_of, classify_crossing, enumerate_chambers, period, ChamberLocation, CrossingKind,
};
use hypertoric::{Error as CoreError, IntMatrix};

use crate::report::{
    combination_s, indices_json, indices_s, ints_json, ints_s, matrix_json, monomial_s, rat_s,
    rats_json, rats_s,
};
use crate::specfile::SpecFile;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(anyhow::Error),
    Precondition(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Parse(e) => format!("{e:#}"),
            CliError::Precondition(m) => m.clone(),
            CliError::Internal(m) => m.clone(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        // library indices are 0-based; every CLI-facing label is 1-based
        let wall_list = |ws: &[usize]| {
            ws.iter()
                .map(|&s| format!("W{}", s + 1))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let msg = match &e {
            CoreError::NotRegular { walls } => {
                format!("not a regular value (annihilated by {})", wall_list(walls))
            }
            CoreError::OnWall(on) => format!("parameter lies on {}", wall_list(on)),
            CoreError::NotAdjacent(ws) => format!(
                "chambers are not adjacent: signs differ across {}",
                wall_list(ws)
            ),
            CoreError::ZeroWeights(idx) => format!(
                "split trivial quaternionic factors first (zero weights at columns {})",
                indices_s(idx)
            ),
            CoreError::PeriodHypothesis(i) => format!(
                "period map hypothesis violated: coordinate {} generates a subtorus direction",
                i + 1
            ),
            other => other.to_string(),
        };
        CliError::Precondition(msg)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub threads: usize,
}

#[derive(Debug, Default)]
pub struct CommandOutput {
    pub results: Value,
    pub human: Vec<String>,
    pub warnings: Vec<String>,
    pub svg: Option<String>,
}

fn build_spec(file: &SpecFile) -> Result<TorusSpec, CliError> {
    TorusSpec::from_basis(file.basis.clone()).map_err(|e| match e {
        CoreError::Unsaturated { ref saturation } => CliError::Precondition(format!(
            "{e}; a saturated basis for the same subtorus is {}",
            matrix_s(saturation)
        )),
        other => CliError::Precondition(other.to_string()),
    })
}

fn matrix_s(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|r| ints_s(m.row(r))).collect();
    format!("[{}]", rows.join(", "))
}

fn require_parameter(file: &SpecFile, spec: &TorusSpec) -> Result<Parameter, CliError> {
    let p = file
        .parameter
        .clone()
        .ok_or_else(|| CliError::Precondition("this command needs a [parameter] section".into()))?;
    if p.rank() != spec.rank() {
        return Err(CliError::Precondition(format!(
            "parameter has rank {}, subtorus has rank {}",
            p.rank(),
            spec.rank()
        )));
    }
    Ok(p)
}

fn spec_warnings(spec: &TorusSpec) -> Vec<String> {
    let mut out = Vec::new();
    if !spec.zero_weights().is_empty() {
        out.push(format!(
            "columns {} have zero weight: the quotient splits off flat quaternionic factors",
            indices_s(spec.zero_weights())
        ));
    }
    if !spec.zero_projections().is_empty() {
        out.push(format!(
            "columns {} generate subtorus directions: their hyperplanes are empty",
            indices_s(spec.zero_projections())
        ));
    }
    out
}

pub fn validate(file: &SpecFile) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let weights: Vec<Value> = (0..spec.ambient_rank())
        .map(|i| ints_json(&spec.weight(i)))
        .collect();
    let results = json!({
        "ambient_rank": spec.ambient_rank(),
        "rank": spec.rank(),
        "quotient_rank": spec.quotient_rank(),
        "basis": matrix_json(spec.basis()),
        "gale_dual": matrix_json(spec.gale()),
        "weights": weights,
        "zero_weight_columns": indices_json(spec.zero_weights()),
        "zero_projection_columns": indices_json(spec.zero_projections()),
    });
    let mut human = vec![format!(
        "valid torus: ambient rank {}, subtorus rank {}, quotient rank {}",
        spec.ambient_rank(),
        spec.rank(),
        spec.quotient_rank()
    )];
    let ws: Vec<String> = (0..spec.ambient_rank())
        .map(|i| format!("u{} -> {}", i + 1, ints_s(&spec.weight(i))))
        .collect();
    human.push(format!("weights: {}", ws.join(", ")));
    Ok(CommandOutput {
        results,
        human,
        warnings: spec_warnings(&spec),
        svg: None,
    })
}

pub fn walls(file: &SpecFile) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let walls = enumerate_walls(&spec);
    let mut human = vec![format!("{} wall(s)", walls.len())];
    let wall_values: Vec<Value> = walls
        .iter()
        .map(|w| {
            human.push(format!(
                "W{}: circuit {}, normal {} = {}",
                w.id + 1,
                indices_s(&w.circuit),
                ints_s(&w.normal),
                combination_s(&w.ambient_normal(&spec), "X"),
            ));
            json!({
                "id": w.id + 1,
                "normal": ints_json(&w.normal),
                "ambient_normal": ints_json(&w.ambient_normal(&spec)),
                "span_set": indices_json(&w.span_set),
                "circuit": indices_json(&w.circuit),
            })
        })
        .collect();
    Ok(CommandOutput {
        results: json!({ "count": walls.len(), "walls": wall_values }),
        human,
        warnings: spec_warnings(&spec),
        svg: None,
    })
}

pub fn regular(file: &SpecFile) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    let walls = enumerate_walls(&spec);
    let report = is_regular_value(&walls, &param);
    let human = if report.regular {
        vec!["(alpha, beta) is a regular value".to_string()]
    } else {
        vec![format!(
            "(alpha, beta) is NOT regular: annihilated by walls {}",
            report
                .violating_walls
                .iter()
                .map(|&s| format!("W{}", s + 1))
                .collect::<Vec<_>>()
                .join(", ")
        )]
    };
    Ok(CommandOutput {
        results: json!({
            "regular": report.regular,
            "violating_walls": indices_json(&report.violating_walls),
        }),
        human,
        warnings: Vec::new(),
        svg: None,
    })
}

pub fn smooth(file: &SpecFile) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let report = is_smooth(&spec);
    let human = match &report.witness {
        None => vec!["smooth: every nonsingular minor is unimodular".to_string()],
        Some(j) => vec![format!(
            "NOT smooth: columns {} give a nonsingular minor with |det| > 1 (orbifold)",
            indices_s(j)
        )],
    };
    Ok(CommandOutput {
        results: json!({
            "smooth": report.smooth,
            "witness": report.witness.as_deref().map(indices_json),
            "coefficient_ring": if report.smooth { "Z" } else { "Q" },
        }),
        human,
        warnings: Vec::new(),
        svg: None,
    })
}

pub fn arrangement(
    file: &SpecFile,
    opts: Options,
    want_svg: bool,
) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    let arr = Arrangement::build(&spec, &param.alpha)?;
    let faces = arr.enumerate_faces_threaded(opts.threads);
    let complex = bounded_complex(&arr, &faces);
    let chambers = bounded_chambers(&arr, &faces);
    let hyperplanes: Vec<Value> = arr
        .hyperplanes
        .iter()
        .map(|hp| {
            json!({
                "index": hp.index + 1,
                "normal": ints_json(&hp.normal),
                "offset": rat_s(&hp.offset),
                "empty": hp.is_empty_locus(),
            })
        })
        .collect();
    let compact: Vec<String> = chambers.iter().map(|c| c.sign.to_string()).collect();
    let mut human = vec![
        format!(
            "{} hyperplanes in dimension {}",
            arr.hyperplanes.len(),
            arr.dim()
        ),
        format!("faces: {} total", faces.len()),
        format!(
            "bounded face counts by dimension: {}",
            complex
                .counts
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
        format!("compact chambers: {}", compact.join(", ")),
    ];
    for hp in arr.hyperplanes.iter().filter(|hp| hp.is_empty_locus()) {
        human.push(format!("F{} is empty", hp.index + 1));
    }
    let svg = if want_svg {
        Some(hypertoric::svg::arrangement_svg(&arr, &faces)?)
    } else {
        None
    };
    Ok(CommandOutput {
        results: json!({
            "hyperplanes": hyperplanes,
            "total_faces": faces.len(),
            "bounded_counts": complex.counts,
            "compact_chambers": compact,
        }),
        human,
        warnings: spec_warnings(&spec),
        svg,
    })
}

fn regular_or_err(spec: &TorusSpec, alpha: &[BigRational]) -> Result<(), CliError> {
    let walls = enumerate_walls(spec);
    let report = is_regular_value(&walls, &Parameter::real(alpha.to_vec()));
    if !report.regular {
        return Err(CoreError::NotRegular {
            walls: report.violating_walls,
        }
        .into());
    }
    Ok(())
}

pub fn betti(file: &SpecFile, opts: Options) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    regular_or_err(&spec, &param.alpha)?;
    let arr = Arrangement::build(&spec, &param.alpha)?;
    let faces = arr.enumerate_faces_threaded(opts.threads);
    let complex = bounded_complex(&arr, &faces);
    let poincare = PoincarePolynomial::from_face_counts(&complex.counts);
    let kirwan = kirwan_surjectivity_check(&spec, &param.alpha)?;
    let human = vec![
        format!("P = {poincare}"),
        format!(
            "face counts: {}",
            complex
                .counts
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
        format!(
            "degree-one classes generate: total rank {} = {} vertices, top degree {}",
            kirwan.total_rank,
            kirwan.vertex_count,
            2 * kirwan.top_power
        ),
    ];
    Ok(CommandOutput {
        results: json!({
            "poincare": poincare.to_string(),
            "betti_even": poincare.betti,
            "face_counts": complex.counts,
            "kirwan_surjective": kirwan.surjective,
        }),
        human,
        warnings: Vec::new(),
        svg: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RingMode {
    Circuits,
    Intersections,
}

pub fn ring(file: &SpecFile, mode: RingMode, reduced: bool) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let (lib_mode, alpha) = match mode {
        RingMode::Circuits => (MonomialMode::Circuits, None),
        RingMode::Intersections => {
            let param = require_parameter(file, &spec)?;
            (MonomialMode::EmptyIntersections, Some(param.alpha))
        }
    };
    let pres = cohomology_presentation(&spec, lib_mode, alpha.as_deref())?;
    let lin_pretty: Vec<String> = pres
        .linear_relations
        .iter()
        .map(|r| combination_s(r, "u"))
        .collect();
    let mono_pretty: Vec<String> = pres.monomials.iter().map(|m| monomial_s(m, "u")).collect();
    let coeff = match pres.coefficients {
        CoefficientValidity::Integral => "Z",
        CoefficientValidity::RationalOnly => "Q",
    };
    let mut human = vec![
        format!("linear relations: {}", lin_pretty.join(", ")),
        format!("monomial relations: {}", mono_pretty.join(", ")),
        format!("coefficients: {coeff}"),
    ];
    let mut results = json!({
        "mode": match mode { RingMode::Circuits => "circuits", RingMode::Intersections => "intersections" },
        "linear_relations": pres.linear_relations.iter().map(|r| ints_json(r)).collect::<Vec<_>>(),
        "linear_relations_pretty": lin_pretty,
        "monomials": pres.monomials.iter().map(|m| indices_json(m)).collect::<Vec<_>>(),
        "monomials_pretty": mono_pretty,
        "coefficients": coeff,
    });
    if reduced {
        let red = reduce_presentation(&spec, &pres);
        let hilbert = hilbert_function(&red, spec.quotient_rank() + 1);
        human.push(format!("reduced: {red}"));
        results["reduced"] = json!({
            "variables": red.nvars,
            "ring": red.to_string(),
            "generators": red.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "hilbert": hilbert,
        });
    }
    Ok(CommandOutput {
        results,
        human,
        warnings: spec_warnings(&spec),
        svg: None,
    })
}

pub fn core(file: &SpecFile, opts: Options) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    let arr = Arrangement::build(&spec, &param.alpha)?;
    let faces = arr.enumerate_faces_threaded(opts.threads);
    let complex = bounded_complex(&arr, &faces);
    let structure = core_components(&spec, &arr, &faces, &complex)?;
    let mut human = vec![format!("{} core component(s)", structure.components.len())];
    let comps: Vec<Value> = structure
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| {
            human.push(format!(
                "M{}: {} with {} vertices",
                k + 1,
                c.sign,
                c.vertices.len()
            ));
            json!({
                "sign": c.sign.to_string(),
                "vertices": c.vertices.iter().map(|v| rats_json(v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let inters: Vec<Value> = structure
        .intersections
        .iter()
        .map(|(i, j, common)| {
            let common_face = common.map(|idx| &complex.faces[idx]);
            human.push(match common_face {
                Some(fc) => format!(
                    "M{} and M{} meet in a {}-dimensional face {}",
                    i + 1,
                    j + 1,
                    fc.dim,
                    fc.sign
                ),
                None => format!("M{} and M{} are disjoint", i + 1, j + 1),
            });
            json!({
                "pair": [i + 1, j + 1],
                "common_face": common_face.map(|fc| fc.sign.to_string()),
                "dim": common_face.map(|fc| fc.dim),
            })
        })
        .collect();
    Ok(CommandOutput {
        results: json!({ "components": comps, "intersections": inters }),
        human,
        warnings: Vec::new(),
        svg: None,
    })
}

pub fn chambers(file: &SpecFile, want_svg: bool) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    let walls = enumerate_walls(&spec);
    let structure = enumerate_chambers(&spec, &walls, &param.beta_re, &param.beta_im);
    let mut human = vec![
        format!(
            "active walls: {}",
            if structure.active.is_empty() {
                "none".to_string()
            } else {
                structure
                    .active
                    .iter()
                    .map(|&s| format!("W{}", s + 1))
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        ),
        format!("{} chambers", structure.chambers.len()),
    ];
    let cells: Vec<Value> = structure
        .chambers
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let signs = SignVector(c.signs.clone());
            human.push(format!(
                "C{}: {} witness {}",
                k + 1,
                signs,
                rats_s(&c.witness)
            ));
            json!({
                "signs": signs.to_string(),
                "witness": rats_json(&c.witness),
            })
        })
        .collect();
    // locate the file's own alpha in the structure
    let location = match chamber_of(&walls, &param.beta_re, &param.beta_im, &param.alpha) {
        ChamberLocation::Interior(signs) => {
            let s = SignVector(signs).to_string();
            human.push(format!("alpha lies in chamber {s}"));
            json!({ "interior": s })
        }
        ChamberLocation::OnWalls(on) => {
            human.push(format!("alpha lies on wall(s) {}", indices_s(&on)));
            json!({ "on_walls": indices_json(&on) })
        }
    };
    let svg = if want_svg {
        Some(hypertoric::svg::chamber_svg(&spec, &walls, &structure)?)
    } else {
        None
    };
    Ok(CommandOutput {
        results: json!({
            "active_walls": indices_json(&structure.active),
            "count": structure.chambers.len(),
            "chambers": cells,
            "alpha_location": location,
        }),
        human,
        warnings: Vec::new(),
        svg,
    })
}

pub fn cross(file: &SpecFile, to: &[BigRational]) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    if to.len() != spec.rank() {
        return Err(CliError::Usage(format!(
            "--to must give {} rational coordinates",
            spec.rank()
        )));
    }
    let walls = enumerate_walls(&spec);
    let report = classify_crossing(
        &spec,
        &walls,
        &param.beta_re,
        &param.beta_im,
        &param.alpha,
        to,
    )?;
    let kind = match report.kind {
        CrossingKind::Isomorphism => "isomorphism",
        CrossingKind::MukaiFlop => "mukai_flop",
    };
    let v0 = &report.fixed_locus;
    let mut human = vec![format!(
        "crossing wall W{} with circuit {}",
        report.wall + 1,
        indices_s(&report.circuit)
    )];
    match report.kind {
        CrossingKind::Isomorphism => {
            human.push("kind: isomorphism (the two sides are biholomorphic)".to_string());
        }
        CrossingKind::MukaiFlop => {
            human.push(format!(
                "kind: Mukai flop, fiber CP^{}, codimension {}",
                report.fiber_projective_dim.unwrap_or(0),
                report.codim.unwrap_or(0)
            ));
        }
    }
    human.push(format!(
        "V0: basis {} on coordinates {}, alpha = {}",
        matrix_s(v0.spec.basis()),
        indices_s(&v0.coordinates),
        rats_s(&report.v0_param.alpha)
    ));
    Ok(CommandOutput {
        results: json!({
            "wall": report.wall + 1,
            "circuit": indices_json(&report.circuit),
            "kind": kind,
            "fiber_projective_dim": report.fiber_projective_dim,
            "codim": report.codim,
            "alpha_on_wall": rats_json(&report.alpha_on_wall),
            "v0": {
                "basis": matrix_json(v0.spec.basis()),
                "coordinates": indices_json(&v0.coordinates),
                "ambient_rank": v0.spec.ambient_rank(),
                "rank": v0.spec.rank(),
                "quotient_rank": v0.spec.quotient_rank(),
                "alpha": rats_json(&report.v0_param.alpha),
                "beta_re": rats_json(&report.v0_param.beta_re),
                "beta_im": rats_json(&report.v0_param.beta_im),
            },
        }),
        human,
        warnings: Vec::new(),
        svg: None,
    })
}

pub fn stability(file: &SpecFile) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    let moduli = file
        .moduli
        .clone()
        .ok_or_else(|| CliError::Precondition("this command needs a [point] section".into()))?;
    if moduli.len() != spec.ambient_rank() {
        return Err(CliError::Precondition(format!(
            "point has {} coordinates, ambient rank is {}",
            moduli.len(),
            spec.ambient_rank()
        )));
    }
    let mu = moment_real(&moduli, &spec);
    let semistable = is_semistable(&moduli, &param.alpha, &spec);
    let orbit = has_closed_orbit(&moduli, &param.alpha, &spec);
    let cert = destabilizing_direction(&moduli, &param.alpha, &spec);
    let orbit_s = match orbit {
        OrbitStatus::Closed => "closed",
        OrbitStatus::NotClosed => "not_closed",
        OrbitStatus::NotSemistable => "not_semistable",
    };
    let mut human = vec![
        format!("real moment value: {}", rats_s(&mu)),
        format!("semistable: {semistable}"),
        format!("orbit: {orbit_s}"),
    ];
    if let Some(x) = &cert {
        human.push(format!("destabilizing direction: {}", ints_s(x)));
    }
    Ok(CommandOutput {
        results: json!({
            "moment_real": rats_json(&mu),
            "semistable": semistable,
            "orbit": orbit_s,
            "destabilizing_direction": cert.as_deref().map(ints_json),
        }),
        human,
        warnings: Vec::new(),
        svg: None,
    })
}

pub fn flow(file: &SpecFile, tol: f64, max_iter: usize) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    let point = file
        .point
        .clone()
        .ok_or_else(|| CliError::Precondition("this command needs a [point] section".into()))?;
    if point.z.len() != spec.ambient_rank() {
        return Err(CliError::Precondition(format!(
            "point has {} coordinates, ambient rank is {}",
            point.z.len(),
            spec.ambient_rank()
        )));
    }
    let mut warnings = Vec::new();
    let mu_c = moment_complex(&point, &spec);
    let mismatch: f64 = mu_c
        .iter()
        .zip(param.beta_re.iter().zip(&param.beta_im))
        .map(|(m, (re, im))| {
            let target =
                num_complex::Complex64::new(re.to_f64().unwrap_or(0.0), im.to_f64().unwrap_or(0.0));
            (m - target).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    if mismatch > tol.max(1e-9) {
        warnings.push(format!(
            "complex moment value differs from beta by {mismatch:.3e}; the flow assumes the point lies on the beta fiber"
        ));
    }
    let res = kempf_ness_descent(&point, &param.alpha, &spec, FlowOptions { tol, max_iter });
    let status = match res.status {
        FlowStatus::Converged => "converged",
        FlowStatus::Diverged => "diverged",
        FlowStatus::MaxIter => "max_iter",
    };
    let mut human = vec![
        format!("status: {status} after {} iterations", res.iterations),
        format!("minimizer: {:?}", res.minimizer),
        format!("residual |alpha - moment|: {:.3e}", res.residual),
    ];
    if let Some(x) = &res.certificate {
        human.push(format!("destabilizing direction: {}", ints_s(x)));
    }
    Ok(CommandOutput {
        results: json!({
            "status": status,
            "minimizer": res.minimizer,
            "residual": res.residual,
            "iterations": res.iterations,
            "certificate": res.certificate.as_deref().map(ints_json),
            "complex_moment_mismatch": mismatch,
        }),
        human,
        warnings,
        svg: None,
    })
}

pub fn period_cmd(file: &SpecFile) -> Result<CommandOutput, CliError> {
    let spec = build_spec(file)?;
    let param = require_parameter(file, &spec)?;
    let walls = enumerate_walls(&spec);
    let report = period(&spec, &walls, &param)?;
    Ok(CommandOutput {
        results: json!({
            "omega1": rats_json(&report.omega1),
            "omega_c_re": rats_json(&report.omega_c_re),
            "omega_c_im": rats_json(&report.omega_c_im),
        }),
        human: vec![
            format!(
                "[omega_1] = {} in the dual subtorus basis",
                rats_s(&report.omega1)
            ),
            format!(
                "[omega_C] = {} + i*{}",
                rats_s(&report.omega_c_re),
                rats_s(&report.omega_c_im)
            ),
        ],
        warnings: Vec::new(),
        svg: None,
    })
}

/// Everything applicable in one document; sections whose preconditions fail
/// are reported as skipped with the reason.
pub fn full_report(file: &SpecFile, opts: Options) -> Result<CommandOutput, CliError> {
    let mut sections = serde_json::Map::new();
    let mut human = Vec::new();
    let mut warnings = Vec::new();

    let add = |name: &str,
               out: Result<CommandOutput, CliError>,
               sections: &mut serde_json::Map<String, Value>,
               human: &mut Vec<String>,
               warnings: &mut Vec<String>| {
        match out {
            Ok(o) => {
                sections.insert(name.to_string(), o.results);
                human.push(format!("-- {name} --"));
                human.extend(o.human);
                for w in o.warnings {
                    if !warnings.contains(&w) {
                        warnings.push(w);
                    }
                }
            }
            Err(e) => {
                sections.insert(name.to_string(), json!({ "skipped": e.message() }));
                human.push(format!("-- {name}: skipped ({}) --", e.message()));
            }
        }
    };

    add(
        "validate",
        validate(file),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "walls",
        walls(file),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "smooth",
        smooth(file),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "regular",
        regular(file),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "arrangement",
        arrangement(file, opts, false),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "betti",
        betti(file, opts),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "ring",
        ring(file, RingMode::Circuits, true),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "core",
        core(file, opts),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "chambers",
        chambers(file, false),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "period",
        period_cmd(file),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "stability",
        stability(file),
        &mut sections,
        &mut human,
        &mut warnings,
    );
    add(
        "flow",
        flow(file, 1e-8, 100_000),
        &mut sections,
        &mut human,
        &mut warnings,
    );

    Ok(CommandOutput {
        results: Value::Object(sections),
        human,
        warnings,
        svg: None,
    })
}

/// Input echo for reports.
pub fn inputs_json(path: &str, file: &SpecFile) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("file".into(), json!(path));
    map.insert("basis".into(), matrix_json(&file.basis));
    if let Some(p) = &file.parameter {
        map.insert("alpha".into(), rats_json(&p.alpha));
        map.insert("beta_re".into(), rats_json(&p.beta_re));
        map.insert("beta_im".into(), rats_json(&p.beta_im));
    }
    if let Some(m) = &file.moduli {
        map.insert("z2".into(), rats_json(m.z2()));
        map.insert("w2".into(), rats_json(m.w2()));
    }
    Value::Object(map)
}
