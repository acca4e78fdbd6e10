//! SVG 1.1 figures for the two planar cases: arrangements in a
//! two-dimensional quotient space and chamber structures of a rank-two
//! subtorus. Output is deterministic for fixed input.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arrangement::{Arrangement, Face};
use crate::error::{Error, Result};
use crate::torus::{TorusSpec, Wall};
use crate::wallcross::ChamberStructure;

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 40.0;

fn f(x: f64) -> String {
    format!("{x:.2}")
}

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn from_bounds(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Frame {
        let span_x = (max_x - min_x).max(1e-6);
        let span_y = (max_y - min_y).max(1e-6);
        let scale = (CANVAS - 2.0 * MARGIN) / span_x.max(span_y);
        Frame {
            min_x,
            min_y,
            scale,
            height: span_y * scale + 2.0 * MARGIN,
        }
    }

    fn width(&self) -> f64 {
        CANVAS
    }

    fn to_svg(&self, p: (f64, f64)) -> (f64, f64) {
        (
            (p.0 - self.min_x) * self.scale + MARGIN,
            self.height - ((p.1 - self.min_y) * self.scale + MARGIN),
        )
    }
}

fn rat_pair(p: &[BigRational]) -> (f64, f64) {
    (p[0].to_f64().unwrap_or(0.0), p[1].to_f64().unwrap_or(0.0))
}

/// Clip the line `a x + b y + c = 0` to an axis-aligned rectangle; returns
/// the two extreme boundary points if the line meets the rectangle.
fn clip_line(
    a: f64,
    b: f64,
    c: f64,
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
) -> Option<((f64, f64), (f64, f64))> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let eps = 1e-9;
    if a.abs() > eps {
        for y in [min_y, max_y] {
            let x = -(b * y + c) / a;
            if x >= min_x - eps && x <= max_x + eps {
                pts.push((x, y));
            }
        }
    }
    if b.abs() > eps {
        for x in [min_x, max_x] {
            let y = -(a * x + c) / b;
            if y >= min_y - eps && y <= max_y + eps {
                pts.push((x, y));
            }
        }
    }
    let mut best: Option<((f64, f64), (f64, f64))> = None;
    let mut best_d = eps;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2);
            if d > best_d {
                best_d = d;
                best = Some((pts[i], pts[j]));
            }
        }
    }
    best
}

/// Render a two-dimensional arrangement: hyperplanes as clipped lines,
/// bounded two-dimensional faces shaded, vertices dotted, hyperplanes
/// labelled `F1..FN`.
pub fn arrangement_svg(arr: &Arrangement, faces: &[Face]) -> Result<String> {
    if arr.dim() != 2 {
        return Err(Error::FigureDimension);
    }
    let vertices: Vec<(f64, f64)> = faces
        .iter()
        .filter(|fc| fc.dim == 0)
        .map(|fc| rat_pair(&fc.witness))
        .collect();
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (-1.0f64, -1.0f64, 1.0f64, 1.0f64);
    if !vertices.is_empty() {
        min_x = vertices.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
        max_x = vertices
            .iter()
            .map(|v| v.0)
            .fold(f64::NEG_INFINITY, f64::max);
        min_y = vertices.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        max_y = vertices
            .iter()
            .map(|v| v.1)
            .fold(f64::NEG_INFINITY, f64::max);
        let pad = 0.35 * ((max_x - min_x) + (max_y - min_y)).max(1.0);
        min_x -= pad;
        min_y -= pad;
        max_x += pad;
        max_y += pad;
    }
    let frame = Frame::from_bounds(min_x, min_y, max_x, max_y);
    let mut out = String::new();
    svg_open(&mut out, frame.width(), frame.height);

    // shaded bounded regions
    for fc in faces.iter().filter(|fc| fc.bounded && fc.dim == 2) {
        let mut poly: Vec<(f64, f64)> = faces
            .iter()
            .filter(|v| v.dim == 0 && v.sign.refines(&fc.sign))
            .map(|v| rat_pair(&v.witness))
            .collect();
        if poly.len() < 3 {
            continue;
        }
        let cx = poly.iter().map(|p| p.0).sum::<f64>() / poly.len() as f64;
        let cy = poly.iter().map(|p| p.1).sum::<f64>() / poly.len() as f64;
        poly.sort_by(|p, q| {
            let ap = (p.1 - cy).atan2(p.0 - cx);
            let aq = (q.1 - cy).atan2(q.0 - cx);
            ap.total_cmp(&aq)
        });
        let pts: Vec<String> = poly
            .iter()
            .map(|p| {
                let (x, y) = frame.to_svg(*p);
                format!("{},{}", f(x), f(y))
            })
            .collect();
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"#b8cdec\" fill-opacity=\"0.55\" stroke=\"none\"/>\n",
            pts.join(" ")
        ));
    }

    // hyperplane lines and labels
    for hp in &arr.hyperplanes {
        if hp.has_zero_normal() {
            continue;
        }
        let a = hp.normal[0].to_f64().unwrap_or(0.0);
        let b = hp.normal[1].to_f64().unwrap_or(0.0);
        let c = hp.offset.to_f64().unwrap_or(0.0);
        if let Some((p, q)) = clip_line(a, b, c, min_x, min_y, max_x, max_y) {
            let (x1, y1) = frame.to_svg(p);
            let (x2, y2) = frame.to_svg(q);
            out.push_str(&format!(
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#334\" stroke-width=\"1.2\"/>\n",
                f(x1), f(y1), f(x2), f(y2)
            ));
            let lx = x1 + 0.92 * (x2 - x1);
            let ly = y1 + 0.92 * (y2 - y1);
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-size=\"13\" fill=\"#334\">F{}</text>\n",
                f(lx + 4.0),
                f(ly - 4.0),
                hp.index + 1
            ));
        }
    }

    // vertices
    for v in &vertices {
        let (x, y) = frame.to_svg(*v);
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"2.6\" fill=\"#222\"/>\n",
            f(x),
            f(y)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Render the chamber structure of a rank-two subtorus: active walls as
/// lines through the origin, chambers labelled at their witnesses, weight
/// directions dotted.
pub fn chamber_svg(
    spec: &TorusSpec,
    walls: &[Wall],
    structure: &ChamberStructure,
) -> Result<String> {
    if spec.rank() != 2 {
        return Err(Error::FigureDimension);
    }
    let r = 1.2f64;
    let frame = Frame::from_bounds(-r, -r, r, r);
    let mut out = String::new();
    svg_open(&mut out, frame.width(), frame.height);
    // walls
    for &s in &structure.active {
        let w = &walls[s];
        let a = w.normal[0].to_f64().unwrap_or(0.0);
        let b = w.normal[1].to_f64().unwrap_or(0.0);
        let norm = (a * a + b * b).sqrt().max(1e-12);
        // direction orthogonal to the normal
        let (dx, dy) = (-b / norm, a / norm);
        let (x1, y1) = frame.to_svg((-r * dx, -r * dy));
        let (x2, y2) = frame.to_svg((r * dx, r * dy));
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#334\" stroke-width=\"1.2\"/>\n",
            f(x1), f(y1), f(x2), f(y2)
        ));
        let (lx, ly) = frame.to_svg((0.93 * r * dx, 0.93 * r * dy));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"13\" fill=\"#334\">W{}</text>\n",
            f(lx + 4.0),
            f(ly - 4.0),
            s + 1
        ));
    }
    // weight directions, with coincident weights sharing one label
    let mut seen: Vec<(f64, f64, Vec<usize>)> = Vec::new();
    for i in 0..spec.ambient_rank() {
        let wt = spec.weight(i);
        if wt.iter().all(Zero::is_zero) {
            continue;
        }
        let (a, b) = (wt[0].to_f64().unwrap_or(0.0), wt[1].to_f64().unwrap_or(0.0));
        let norm = (a * a + b * b).sqrt();
        let dir = (a / norm, b / norm);
        match seen
            .iter_mut()
            .find(|(x, y, _)| (x - dir.0).abs() < 1e-9 && (y - dir.1).abs() < 1e-9)
        {
            Some((_, _, idx)) => idx.push(i),
            None => seen.push((dir.0, dir.1, vec![i])),
        }
    }
    for (dx, dy, idx) in &seen {
        let (x, y) = frame.to_svg((0.45 * r * dx, 0.45 * r * dy));
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#a33\"/>\n",
            f(x),
            f(y)
        ));
        let label = idx
            .iter()
            .map(|i| format!("u{}", i + 1))
            .collect::<Vec<_>>()
            .join("=");
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#a33\">{}</text>\n",
            f(x + 5.0),
            f(y - 5.0),
            label
        ));
    }
    // chamber labels at witness directions
    for (k, ch) in structure.chambers.iter().enumerate() {
        let (mut x, mut y) = (
            ch.witness[0].to_f64().unwrap_or(0.0),
            ch.witness[1].to_f64().unwrap_or(0.0),
        );
        let norm = (x * x + y * y).sqrt();
        if norm > 1e-12 {
            x = 0.75 * r * x / norm;
            y = 0.75 * r * y / norm;
        }
        let (sx, sy) = frame.to_svg((x, y));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"14\" fill=\"#171\">C{}</text>\n",
            f(sx),
            f(sy),
            k + 1
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn svg_open(out: &mut String, width: f64, height: f64) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        f(width), f(height), f(width), f(height)
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        f(width),
        f(height)
    ));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::torus::enumerate_walls;
    use crate::wallcross::enumerate_chambers;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn arrangement_figure_for_planar_case() {
        // three coordinates, rank one: the arrangement is three lines in the
        // plane bounding a triangle
        let spec = TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1, 1, 1]])).unwrap();
        let arr = Arrangement::build(&spec, &[rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        let svg = arrangement_svg(&arr, &faces).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains(">F1<") && svg.contains(">F3<"));
        // deterministic
        assert_eq!(svg, arrangement_svg(&arr, &faces).unwrap());
    }

    #[test]
    fn arrangement_figure_needs_dimension_two() {
        let spec = TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1, 1]])).unwrap();
        let arr = Arrangement::build(&spec, &[rat(1)]).unwrap();
        let faces = arr.enumerate_faces();
        assert!(matches!(
            arrangement_svg(&arr, &faces),
            Err(Error::FigureDimension)
        ));
    }

    #[test]
    fn chamber_figure_for_rank_two() {
        let spec = TorusSpec::from_basis(IntMatrix::from_rows(&[
            vec![1, 1, 0, 1, 0],
            vec![1, 0, 1, 0, 1],
        ]))
        .unwrap();
        let walls = enumerate_walls(&spec);
        let zero = vec![rat(0), rat(0)];
        let cs = enumerate_chambers(&spec, &walls, &zero, &zero);
        let svg = chamber_svg(&spec, &walls, &cs).unwrap();
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches(">C").count(), 6);
        assert!(svg.contains("u2=u4"));
    }

    #[test]
    fn chamber_figure_needs_rank_two() {
        let spec = TorusSpec::from_basis(IntMatrix::from_rows(&[vec![1, 1]])).unwrap();
        let walls = enumerate_walls(&spec);
        let zero = vec![rat(0)];
        let cs = enumerate_chambers(&spec, &walls, &zero, &zero);
        assert!(matches!(
            chamber_svg(&spec, &walls, &cs),
            Err(Error::FigureDimension)
        ));
    }
}
