//! Parsing of spec files: a TOML document with a `[torus]` table (the
//! integer basis matrix), an optional `[parameter]` table (rationals as
//! `"p/q"` strings or integers) and an optional `[point]` table (exact
//! squared moduli, or complex coordinates as `[re, im]` pairs).

use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use hypertoric::linalg::IntMatrix;
use hypertoric::stability::{ExactModuli, NumericPoint};
use hypertoric::torus::Parameter;

#[derive(Debug)]
pub struct SpecFile {
    /// Raw basis matrix; spec validation happens downstream so `validate`
    /// can diagnose bad bases instead of refusing to parse them.
    pub basis: IntMatrix,
    pub parameter: Option<Parameter>,
    pub moduli: Option<ExactModuli>,
    pub point: Option<NumericPoint>,
}

pub fn parse_spec(path: &std::path::Path) -> anyhow::Result<SpecFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_spec_str(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse_spec_str(text: &str) -> anyhow::Result<SpecFile> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| anyhow!(describe_toml_error(&e, text)))?;
    for key in table.keys() {
        if !matches!(key.as_str(), "torus" | "parameter" | "point") {
            bail!("unknown section [{key}]");
        }
    }

    let torus = table
        .get("torus")
        .ok_or_else(|| anyhow!("missing [torus] section"))?
        .as_table()
        .ok_or_else(|| anyhow!("[torus] must be a table"))?;
    let basis_value = torus
        .get("basis")
        .ok_or_else(|| anyhow!("[torus] needs a basis matrix"))?;
    let basis = parse_matrix(basis_value)?;
    if let Some(n) = torus.get("n") {
        let n = n
            .as_integer()
            .ok_or_else(|| anyhow!("torus.n must be an integer"))?;
        if n as usize != basis.cols() {
            bail!(
                "torus.n = {n} does not match the basis row length {}",
                basis.cols()
            );
        }
    }
    for key in torus.keys() {
        if !matches!(key.as_str(), "basis" | "n") {
            bail!("unknown key torus.{key}");
        }
    }

    let parameter = match table.get("parameter") {
        None => None,
        Some(value) => {
            let t = value
                .as_table()
                .ok_or_else(|| anyhow!("[parameter] must be a table"))?;
            for key in t.keys() {
                if !matches!(key.as_str(), "alpha" | "beta_re" | "beta_im") {
                    bail!("unknown key parameter.{key}");
                }
            }
            let alpha = parse_rational_list(
                t.get("alpha")
                    .ok_or_else(|| anyhow!("parameter.alpha is required"))?,
                "parameter.alpha",
            )?;
            let d = alpha.len();
            let beta_re = match t.get("beta_re") {
                Some(v) => parse_rational_list(v, "parameter.beta_re")?,
                None => vec![BigRational::zero(); d],
            };
            let beta_im = match t.get("beta_im") {
                Some(v) => parse_rational_list(v, "parameter.beta_im")?,
                None => vec![BigRational::zero(); d],
            };
            Some(
                Parameter::new(alpha, beta_re, beta_im)
                    .map_err(|e| anyhow!("invalid [parameter]: {e}"))?,
            )
        }
    };

    let (moduli, point) = match table.get("point") {
        None => (None, None),
        Some(value) => {
            let t = value
                .as_table()
                .ok_or_else(|| anyhow!("[point] must be a table"))?;
            for key in t.keys() {
                if !matches!(key.as_str(), "z2" | "w2" | "z" | "w") {
                    bail!("unknown key point.{key}");
                }
            }
            let has_exact = t.contains_key("z2") || t.contains_key("w2");
            let has_numeric = t.contains_key("z") || t.contains_key("w");
            if has_exact && has_numeric {
                bail!("[point] must give either z2/w2 or z/w, not both");
            }
            if has_exact {
                let z2 = parse_rational_list(
                    t.get("z2").ok_or_else(|| anyhow!("point.z2 is required"))?,
                    "point.z2",
                )?;
                let w2 = match t.get("w2") {
                    Some(v) => parse_rational_list(v, "point.w2")?,
                    None => vec![BigRational::zero(); z2.len()],
                };
                let moduli =
                    ExactModuli::new(z2, w2).map_err(|e| anyhow!("invalid [point]: {e}"))?;
                let numeric = NumericPoint::from_moduli(&moduli);
                (Some(moduli), Some(numeric))
            } else if has_numeric {
                let z = parse_complex_list(
                    t.get("z").ok_or_else(|| anyhow!("point.z is required"))?,
                    "point.z",
                )?;
                let w = match t.get("w") {
                    Some(v) => parse_complex_list(v, "point.w")?,
                    None => vec![Complex64::new(0.0, 0.0); z.len()],
                };
                let numeric =
                    NumericPoint::new(z, w).map_err(|e| anyhow!("invalid [point]: {e}"))?;
                let moduli = numeric.exact_moduli();
                (Some(moduli), Some(numeric))
            } else {
                bail!("[point] must give z2/w2 or z/w");
            }
        }
    };

    Ok(SpecFile {
        basis,
        parameter,
        moduli,
        point,
    })
}

fn describe_toml_error(e: &toml::de::Error, text: &str) -> String {
    match e.span() {
        Some(span) => {
            let line = text[..span.start.min(text.len())]
                .bytes()
                .filter(|&b| b == b'\n')
                .count()
                + 1;
            format!("parse error at line {line}: {}", e.message())
        }
        None => format!("parse error: {}", e.message()),
    }
}

fn parse_matrix(value: &toml::Value) -> anyhow::Result<IntMatrix> {
    let rows = value
        .as_array()
        .ok_or_else(|| anyhow!("basis must be an array of rows"))?;
    if rows.is_empty() {
        bail!("basis needs at least one row");
    }
    let mut parsed: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    let mut width = None;
    for (r, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| anyhow!("basis row {} must be an array", r + 1))?;
        let ints: Vec<BigInt> = entries
            .iter()
            .map(|e| parse_integer(e, &format!("basis row {}", r + 1)))
            .collect::<anyhow::Result<_>>()?;
        match width {
            None => width = Some(ints.len()),
            Some(w) if w != ints.len() => {
                bail!(
                    "basis row {} has {} entries, expected {} as in row 1",
                    r + 1,
                    ints.len(),
                    w
                );
            }
            _ => {}
        }
        parsed.push(ints);
    }
    let cols = width.unwrap_or(0);
    if cols == 0 {
        bail!("basis rows must be nonempty");
    }
    Ok(IntMatrix::from_bigint_rows(parsed, cols))
}

fn parse_integer(value: &toml::Value, what: &str) -> anyhow::Result<BigInt> {
    match value {
        toml::Value::Integer(i) => Ok(BigInt::from(*i)),
        toml::Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| anyhow!("{what}: {s:?} is not an integer")),
        other => bail!("{what}: expected an integer, got {other}"),
    }
}

fn parse_rational_list(value: &toml::Value, what: &str) -> anyhow::Result<Vec<BigRational>> {
    let arr = value
        .as_array()
        .ok_or_else(|| anyhow!("{what} must be an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| parse_rational(v).with_context(|| format!("{what}[{}]", i + 1)))
        .collect()
}

pub fn parse_rational(value: &toml::Value) -> anyhow::Result<BigRational> {
    match value {
        toml::Value::Integer(i) => Ok(BigRational::from(BigInt::from(*i))),
        toml::Value::String(s) => parse_rational_str(s),
        other => bail!("expected a rational \"p/q\" string or integer, got {other}"),
    }
}

pub fn parse_rational_str(s: &str) -> anyhow::Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| anyhow!("{s:?} is not a rational number"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| anyhow!("{s:?} is not a rational number"))?;
    if den.is_zero() {
        bail!("{s:?} has a zero denominator");
    }
    Ok(BigRational::new(num, den))
}

fn parse_complex_list(value: &toml::Value, what: &str) -> anyhow::Result<Vec<Complex64>> {
    let arr = value
        .as_array()
        .ok_or_else(|| anyhow!("{what} must be an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            let pair = v
                .as_array()
                .ok_or_else(|| anyhow!("{what}[{}] must be a [re, im] pair", i + 1))?;
            if pair.len() != 2 {
                bail!("{what}[{}] must have exactly two entries", i + 1);
            }
            let num = |x: &toml::Value| -> anyhow::Result<f64> {
                match x {
                    toml::Value::Float(f) => Ok(*f),
                    toml::Value::Integer(n) => Ok(*n as f64),
                    other => bail!("{what}[{}]: {other} is not a number", i + 1),
                }
            };
            Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?))
        })
        .collect()
}

/// Comma-separated rationals, used for `--to` style flags.
pub fn parse_rational_csv(s: &str) -> anyhow::Result<Vec<BigRational>> {
    s.split(',').map(parse_rational_str).collect()
}
