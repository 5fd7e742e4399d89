//! Text formats: ideal files and the side-car describing a generated model.
//!
//! An ideal file starts with `ring p=<prime> vars=<comma list>` (optionally
//! `weights=<comma list>`) followed by one polynomial per line. Blank lines
//! and lines starting with `#` are ignored.

use std::sync::Arc;

use thiserror::Error;

use crate::exactalg::FieldSpec;
use crate::groebner::{GroebnerError, Ideal};
use crate::polyring::{PolyError, Polynomial, RingSpec};
use crate::curvegen::{Ambient, CurveError, CurveModel, PointCluster, Recipe};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn syntax(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Syntax { line, msg: msg.into() }
}

fn content_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn split_u32(line: usize, s: &str) -> Result<Vec<u32>, IoError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| syntax(line, format!("bad integer `{x}`")))).collect()
}

pub fn ring_header(ring: &RingSpec) -> String {
    let mut h = format!("ring p={} vars={}", ring.p(), ring.names().join(","));
    if !ring.is_standard_graded() {
        h.push_str(&format!(" weights={}", join(ring.weights())));
    }
    h
}

fn parse_header(line: usize, s: &str) -> Result<Arc<RingSpec>, IoError> {
    let mut words = s.split_whitespace();
    if words.next() != Some("ring") {
        return Err(syntax(line, "expected `ring p=<prime> vars=<list>`"));
    }
    let (mut p, mut vars, mut weights) = (None, None, None);
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| syntax(line, format!("expected key=value, got `{w}`")))?;
        match k {
            "p" => p = Some(v.parse::<u64>().map_err(|_| syntax(line, format!("bad characteristic `{v}`")))?),
            "vars" => vars = Some(v.split(',').map(str::to_string).collect::<Vec<_>>()),
            "weights" => weights = Some(split_u32(line, v)?),
            _ => return Err(syntax(line, format!("unknown key `{k}`"))),
        }
    }
    let p = p.ok_or_else(|| syntax(line, "missing p="))?;
    let field = FieldSpec::prime(p).map_err(|e| syntax(line, e.to_string()))?;
    let vars = vars.ok_or_else(|| syntax(line, "missing vars="))?;
    Ok(RingSpec::new(field, vars, weights)?)
}

pub fn write_polys(ring: &RingSpec, polys: &[Polynomial]) -> String {
    let mut s = ring_header(ring);
    s.push('\n');
    for f in polys {
        s.push_str(&f.to_string());
        s.push('\n');
    }
    s
}

/// Ring and polynomials of an ideal file, in file order.
pub fn read_polys(s: &str) -> Result<(Arc<RingSpec>, Vec<Polynomial>), IoError> {
    let mut lines = content_lines(s);
    let (n, header) = lines.next().ok_or_else(|| syntax(1, "empty ideal file"))?;
    let ring = parse_header(n, header)?;
    let mut polys = Vec::new();
    for (n, l) in lines {
        polys.push(Polynomial::parse(&ring, l).map_err(|e| syntax(n, e.to_string()))?);
    }
    Ok((ring, polys))
}

pub fn write_ideal(i: &Ideal) -> String {
    write_polys(i.ring(), i.generators())
}

pub fn read_ideal(s: &str) -> Result<Ideal, IoError> {
    let (ring, polys) = read_polys(s)?;
    Ok(Ideal::new(&ring, polys)?)
}

/// Side-car for a generated model: recipe, ambient surface, degree, seed and
/// one `point` line per imposed cluster.
pub fn write_sidecar(m: &CurveModel) -> String {
    let mut s = String::new();
    s.push_str(&format!("recipe {}\n", m.recipe.map(|r| r.tag()).unwrap_or("-")));
    s.push_str(&format!("ambient {}\n", m.ambient));
    s.push_str(&format!("degree {}\n", m.degree));
    s.push_str(&format!("seed {}\n", m.seed));
    for c in &m.points {
        s.push_str(&format!("point mult={} modulus={} chart={};{}\n", c.multiplicity, join(&c.modulus), join(&c.chart[0]), join(&c.chart[1])));
    }
    s
}

fn parse_point(line: usize, rest: &str) -> Result<PointCluster, IoError> {
    let (mut mult, mut modulus, mut chart) = (None, None, None);
    for w in rest.split_whitespace() {
        let (k, v) = w.split_once('=').ok_or_else(|| syntax(line, format!("expected key=value, got `{w}`")))?;
        match k {
            "mult" => mult = Some(v.parse().map_err(|_| syntax(line, "bad multiplicity"))?),
            "modulus" => modulus = Some(split_u32(line, v)?),
            "chart" => {
                let (a, b) = v.split_once(';').ok_or_else(|| syntax(line, "chart needs two coordinates"))?;
                chart = Some([split_u32(line, a)?, split_u32(line, b)?]);
            }
            _ => return Err(syntax(line, format!("unknown key `{k}`"))),
        }
    }
    let c = PointCluster {
        modulus: modulus.ok_or_else(|| syntax(line, "missing modulus="))?,
        chart: chart.ok_or_else(|| syntax(line, "missing chart="))?,
        multiplicity: mult.ok_or_else(|| syntax(line, "missing mult="))?,
    };
    let d = c.modulus.len().saturating_sub(1);
    if d == 0 || c.modulus[d] != 1 || c.chart.iter().any(|x| x.len() != d) {
        return Err(syntax(line, "modulus must be monic of positive degree with chart residues of matching length"));
    }
    Ok(c)
}

/// Rebuilds a model from its ideal file and side-car.
pub fn read_model(ideal_file: &str, sidecar: &str) -> Result<CurveModel, IoError> {
    let (ring, defining_forms) = read_polys(ideal_file)?;
    let (mut recipe, mut ambient, mut degree, mut seed) = (None, None, None, None);
    let mut points = Vec::new();
    for (n, l) in content_lines(sidecar) {
        let (k, v) = l.split_once(' ').map(|(k, v)| (k, v.trim())).unwrap_or((l, ""));
        match k {
            "recipe" => recipe = Some(if v == "-" { None } else { Some(v.parse::<Recipe>()?) }),
            "ambient" => ambient = Some(v.parse::<Ambient>()?),
            "degree" => degree = Some(v.parse().map_err(|_| syntax(n, "bad degree"))?),
            "seed" => seed = Some(v.parse().map_err(|_| syntax(n, "bad seed"))?),
            "point" => points.push(parse_point(n, v)?),
            _ => return Err(syntax(n, format!("unknown key `{k}`"))),
        }
    }
    let ambient = ambient.ok_or_else(|| syntax(0, "side-car lacks `ambient`"))?;
    if ring.nvars() != ambient.nvars() {
        return Err(syntax(1, format!("{ambient} models live in {} variables", ambient.nvars())));
    }
    let forms_expected = if ambient == Ambient::Plane { 1 } else { 2 };
    if defining_forms.len() != forms_expected {
        return Err(syntax(0, format!("{ambient} models have {forms_expected} defining forms, file has {}", defining_forms.len())));
    }
    for (n, c) in points.iter().enumerate() {
        if c.modulus.iter().chain(c.chart.iter().flatten()).any(|&x| x >= ring.p()) {
            return Err(syntax(n + 1, "point coordinates must be reduced modulo p"));
        }
    }
    Ok(CurveModel {
        recipe: recipe.flatten(),
        ambient,
        degree: degree.ok_or_else(|| syntax(0, "side-car lacks `degree`"))?,
        ring,
        defining_forms,
        points,
        seed: seed.ok_or_else(|| syntax(0, "side-car lacks `seed`"))?,
    })
}
