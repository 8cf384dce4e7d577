use crate::report::{to_value, Failure, InputDigest};
use serde::Serialize;
use std::path::Path;
use trop_morse::compose::IndexedPointSet;
use trop_morse::curve::{CurveDivisor, TropicalCurve};
use trop_morse::fixtures::{self, Fixture};
use trop_morse::toric::LatticePolytope;
use trop_morse::torus::{Lattice, TorusQuadraticDivisor};

/// One resolved input with its provenance.
pub struct Loaded<T> {
    pub source: String,
    pub digests: Vec<InputDigest>,
    pub value: T,
}

fn read(path: &str) -> Result<(String, InputDigest), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("{path}: {e}")))?;
    let digest = InputDigest::of(path, &bytes);
    let text = String::from_utf8(bytes).map_err(|_| Failure::input(format!("{path}: not UTF-8")))?;
    Ok((text, digest))
}

fn fixture_digest<T: Serialize>(id: &str, content: &T) -> InputDigest {
    let canonical = serde_json::to_string(&to_value(content)).expect("json");
    InputDigest::of(format!("fixture:{id}"), canonical.as_bytes())
}

fn curve_content(curve: &TropicalCurve, div: &CurveDivisor) -> serde_json::Value {
    serde_json::json!({ "curve": curve.to_spec(), "divisor": div.to_spec() })
}

fn wrong_kind(id: &str, wanted: &str) -> Failure {
    Failure::input(format!("fixture `{id}` is not {wanted}"))
}

pub fn curves(
    files: Option<(&str, &str)>,
    ids: &[String],
) -> Result<Vec<Loaded<(TropicalCurve, CurveDivisor)>>, Failure> {
    let mut out = Vec::new();
    if let Some((curve_path, div_path)) = files {
        let (curve_text, curve_digest) = read(curve_path)?;
        let (div_text, div_digest) = read(div_path)?;
        let curve = TropicalCurve::from_json(&curve_text).map_err(|e| Failure::from(e).within(curve_path))?;
        let div = CurveDivisor::from_json(&div_text).map_err(|e| Failure::from(e).within(div_path))?;
        out.push(Loaded { source: format!("{curve_path} + {div_path}"), digests: vec![curve_digest, div_digest], value: (curve, div) });
    }
    for id in ids {
        match fixtures::lookup(id)? {
            Fixture::Curve(curve, div) => {
                let digest = fixture_digest(id, &curve_content(&curve, &div));
                out.push(Loaded { source: format!("fixture:{id}"), digests: vec![digest], value: (curve, div) });
            }
            _ => return Err(wrong_kind(id, "a curve")),
        }
    }
    if out.is_empty() {
        return Err(Failure::input("no input: give CURVE DIVISOR files or --fixture"));
    }
    Ok(out)
}

/// Files parsed by `parse`, then fixtures mapped by `pick`.
fn collect<T>(
    files: &[String],
    ids: &[String],
    parse: impl Fn(&str) -> Result<T, Failure>,
    pick: impl Fn(&str, Fixture) -> Result<(T, InputDigest), Failure>,
) -> Result<Vec<Loaded<T>>, Failure> {
    let mut out = Vec::new();
    for path in files {
        let (text, digest) = read(path)?;
        let value = parse(&text).map_err(|e| e.within(path))?;
        out.push(Loaded { source: path.clone(), digests: vec![digest], value });
    }
    for id in ids {
        let (value, digest) = pick(id, fixtures::lookup(id)?)?;
        out.push(Loaded { source: format!("fixture:{id}"), digests: vec![digest], value });
    }
    if out.is_empty() {
        return Err(Failure::input("no input: give files or --fixture"));
    }
    Ok(out)
}

pub fn tori(files: &[String], ids: &[String]) -> Result<Vec<Loaded<TorusQuadraticDivisor>>, Failure> {
    collect(
        files,
        ids,
        |text| Ok(TorusQuadraticDivisor::from_json(text)?),
        |id, fixture| match fixture {
            Fixture::Torus(d) => {
                let digest = fixture_digest(id, &d);
                Ok((d, digest))
            }
            _ => Err(wrong_kind(id, "a torus divisor")),
        },
    )
}

pub fn lattices(files: &[String], ids: &[String]) -> Result<Vec<Loaded<Lattice>>, Failure> {
    collect(
        files,
        ids,
        |text| Ok(Lattice::from_json(text)?),
        |id, fixture| match fixture {
            Fixture::Torus(d) => {
                let lattice = Lattice::new(d.matrix().to_vec())?;
                let digest = fixture_digest(id, &lattice);
                Ok((lattice, digest))
            }
            _ => Err(wrong_kind(id, "a lattice")),
        },
    )
}

pub fn polytopes(files: &[String], ids: &[String]) -> Result<Vec<Loaded<LatticePolytope>>, Failure> {
    collect(
        files,
        ids,
        |text| Ok(LatticePolytope::from_json(text)?),
        |id, fixture| match fixture {
            Fixture::Polytope(p) => {
                let digest = fixture_digest(id, &p);
                Ok((p, digest))
            }
            _ => Err(wrong_kind(id, "a polytope")),
        },
    )
}

/// Something point data can be computed from.
pub enum Operand {
    Curve(TropicalCurve, CurveDivisor),
    Torus(TorusQuadraticDivisor),
    /// Polytope with the sign of its divisor.
    Polytope(LatticePolytope, i8),
    Points(IndexedPointSet),
}

impl Operand {
    pub fn points(&self) -> Result<IndexedPointSet, Failure> {
        Ok(match self {
            Operand::Curve(c, d) => IndexedPointSet::from_curve(c, d)?,
            Operand::Torus(d) => IndexedPointSet::from_torus(d)?,
            Operand::Polytope(p, sign) => IndexedPointSet::from_toric(p, *sign)?,
            Operand::Points(set) => set.clone(),
        })
    }
}

/// A point set file, a report whose single result holds `points` and
/// `euler`, or a fixture id optionally prefixed by `neg:`.
pub fn operand(spec: &str) -> Result<Loaded<Operand>, Failure> {
    if Path::new(spec).is_file() {
        let (text, digest) = read(spec)?;
        let set = point_set_from_text(&text).map_err(|e| e.within(spec))?;
        return Ok(Loaded { source: spec.to_string(), digests: vec![digest], value: Operand::Points(set) });
    }
    let (negate, id) = match spec.strip_prefix("neg:") {
        Some(rest) => (true, rest),
        None => (false, spec),
    };
    let (value, content) = match fixtures::lookup(id)? {
        Fixture::Curve(c, d) => {
            let d = if negate { d.negated() } else { d };
            let content = curve_content(&c, &d);
            (Operand::Curve(c, d), content)
        }
        Fixture::Torus(d) => {
            let d = if negate {
                let matrix = d.matrix().iter().map(|r| r.iter().map(|v| -v).collect()).collect();
                let shift = d.shift().iter().map(|c| -c.clone()).collect();
                TorusQuadraticDivisor::new(matrix, shift)?
            } else {
                d
            };
            let content = to_value(&d);
            (Operand::Torus(d), content)
        }
        Fixture::Polytope(p) => {
            let content = to_value(&p);
            (Operand::Polytope(p, if negate { -1 } else { 1 }), content)
        }
    };
    Ok(Loaded { source: format!("fixture:{spec}"), digests: vec![fixture_digest(spec, &content)], value })
}

fn point_set_from_text(text: &str) -> Result<IndexedPointSet, Failure> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Failure::input(format!("parse error: {e}")))?;
    let inner = match value.get("results").and_then(|r| r.as_array()) {
        Some(results) if results.len() == 1 => &results[0],
        Some(_) => return Err(Failure::input("a report operand must hold exactly one result")),
        None => &value,
    };
    Ok(IndexedPointSet::from_json(&inner.to_string())?)
}
