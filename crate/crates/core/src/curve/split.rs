//! Cutting a curve at points of `s₀ ∩ s` and checking the gluing formulas
//!
//! `χ(C) = χ(C′) + χ(C″) − #(C′ ∩ C″)` and `rot(C) = rot(C′) + rot(C″)`.
//!
//! Every cut point is replaced by one copy per incident direction, so the
//! curve falls apart into closed subcurves (the parts). A point split into
//! `c` copies is counted `c` times on the right and corrected by `c − 1`,
//! which is the two-part formula when the parts are grouped into `C′, C″`.

use super::points::intersection_points;
use super::rotation::analyze;
use super::{
    edge_profiles, CurveDivisor, CurveError, Edge, End, Location, Profile, TropicalCurve, Vertex,
};
use crate::exact::{format_rational, Rational};
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartSummary {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub euler: i64,
    pub rotation: i64,
    pub chi_top: i64,
    pub rr_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub parts: Vec<PartSummary>,
    pub euler_whole: i64,
    pub euler_parts: i64,
    /// `Σ_p (copies(p) − 1)` over the cut points.
    pub overlap: i64,
    pub rotation_whole: i64,
    pub rotation_parts: i64,
    pub identity_ok: bool,
}

/// Result of cutting: the cut curve, its divisor, and copies per cut point.
pub(crate) struct CutCurve {
    pub curve: TropicalCurve,
    pub divisor: CurveDivisor,
    pub copies: usize,
    pub cut_count: usize,
}

fn vertex_copy(id: &str, k: usize) -> String {
    format!("{id}#{k}")
}

pub(crate) fn cut(curve: &TropicalCurve, div: &CurveDivisor, cuts: &[Location]) -> Result<CutCurve, CurveError> {
    let points = intersection_points(curve, div)?;
    let known: BTreeSet<&Location> = points.iter().map(|p| &p.location).collect();
    let cuts: BTreeSet<&Location> = cuts.iter().collect();
    if let Some(bad) = cuts.iter().find(|c| !known.contains(*c)) {
        return Err(CurveError::CutNotIntersection(bad.to_string()));
    }
    let profiles = edge_profiles(curve, div)?;

    let cut_vertices: BTreeSet<&str> = cuts
        .iter()
        .filter_map(|c| match c {
            Location::Vertex { vertex } => Some(vertex.as_str()),
            _ => None,
        })
        .collect();
    let mut edge_cuts: BTreeMap<&str, Vec<&Rational>> = BTreeMap::new();
    for c in &cuts {
        if let Location::Edge { edge, position } = c {
            edge_cuts.entry(edge.as_str()).or_default().push(position);
        }
    }

    let mut vertices: Vec<Vertex> = Vec::new();
    let mut copies = 0usize;
    for (v, vertex) in curve.vertices().iter().enumerate() {
        if cut_vertices.contains(vertex.id.as_str()) {
            let valence = curve.valence(v);
            for k in 0..valence {
                vertices.push(Vertex { id: vertex_copy(&vertex.id, k), at_infinity: vertex.at_infinity });
            }
            copies += valence;
        } else {
            vertices.push(vertex.clone());
        }
    }
    // Name of the vertex an edge end attaches to after the cut.
    let attach = |e: usize, end: End| -> String {
        let (t, h) = curve.ends(e);
        let v = if end == End::Tail { t } else { h };
        let id = &curve.vertices()[v].id;
        if cut_vertices.contains(id.as_str()) {
            let k = curve
                .incident(v)
                .iter()
                .position(|he| he.edge == e && he.end == end)
                .expect("half-edge is incident to its vertex");
            vertex_copy(id, k)
        } else {
            id.clone()
        }
    };

    let mut edges = Vec::new();
    let mut new_profiles = BTreeMap::new();
    for (e, edge) in curve.edges().iter().enumerate() {
        let positions = edge_cuts.get(edge.id.as_str()).cloned().unwrap_or_default();
        if positions.is_empty() {
            edges.push(Edge { tail: attach(e, End::Tail), head: attach(e, End::Head), ..edge.clone() });
            new_profiles.insert(edge.id.clone(), profiles[e].clone());
            continue;
        }
        let zero = Rational::zero();
        let mut stops: Vec<&Rational> = vec![&zero];
        stops.extend(positions.iter().copied());
        stops.push(&edge.length);
        for (i, w) in stops.windows(2).enumerate() {
            let tail = if i == 0 {
                attach(e, End::Tail)
            } else {
                format!("{}@{}#b", edge.id, format_rational(w[0]))
            };
            let head = if i + 2 == stops.len() {
                attach(e, End::Head)
            } else {
                format!("{}@{}#a", edge.id, format_rational(w[1]))
            };
            for id in [&tail, &head] {
                if id.contains('@') && !vertices.iter().any(|v| &v.id == id) {
                    vertices.push(Vertex { id: id.clone(), at_infinity: false });
                }
            }
            let id = format!("{}#{i}", edge.id);
            edges.push(Edge { id: id.clone(), tail, head, length: w[1] - w[0] });
            new_profiles.insert(id, profiles[e].restrict(w[0], w[1]));
        }
        copies += 2 * positions.len();
    }
    let curve = TropicalCurve::new(vertices, edges)?;
    let divisor = CurveDivisor::new(format!("{}|cut", div.curve), new_profiles);
    Ok(CutCurve { curve, divisor, copies, cut_count: cuts.len() })
}

/// Splits into the connected components of a curve, with restricted divisors.
pub(crate) fn components_of(curve: &TropicalCurve, div: &CurveDivisor) -> Result<Vec<(TropicalCurve, CurveDivisor)>, CurveError> {
    let mut out = Vec::new();
    for comp in curve.components() {
        let members: BTreeSet<usize> = comp.iter().copied().collect();
        let vertices: Vec<Vertex> = comp.iter().map(|&v| curve.vertices()[v].clone()).collect();
        let mut edges = Vec::new();
        let mut profiles: BTreeMap<String, Profile> = BTreeMap::new();
        for (e, edge) in curve.edges().iter().enumerate() {
            if members.contains(&curve.ends(e).0) {
                edges.push(edge.clone());
                if let Some(p) = div.profile(&edge.id) {
                    profiles.insert(edge.id.clone(), p.clone());
                }
            }
        }
        out.push((TropicalCurve::new(vertices, edges)?, CurveDivisor::new(div.curve.clone(), profiles)));
    }
    Ok(out)
}

/// Cuts at `cut_points` and checks both gluing identities on the parts.
pub fn split_verify(
    curve: &TropicalCurve,
    div: &CurveDivisor,
    cut_points: &[Location],
) -> Result<SplitReport, CurveError> {
    let whole = analyze(curve, div)?;
    let cut = cut(curve, div, cut_points)?;
    let mut parts = Vec::new();
    for (part, pdiv) in components_of(&cut.curve, &cut.divisor)? {
        let r = analyze(&part, &pdiv)?;
        parts.push(PartSummary {
            vertices: part.vertices().iter().map(|v| v.id.clone()).collect(),
            edges: part.edges().iter().map(|e| e.id.clone()).collect(),
            euler: r.euler,
            rotation: r.rotation,
            chi_top: r.chi_top,
            rr_ok: r.rr_ok,
        });
    }
    let euler_parts: i64 = parts.iter().map(|p| p.euler).sum();
    let rotation_parts: i64 = parts.iter().map(|p| p.rotation).sum();
    let overlap = cut.copies as i64 - cut.cut_count as i64;
    Ok(SplitReport {
        identity_ok: whole.euler == euler_parts - overlap && whole.rotation == rotation_parts,
        parts,
        euler_whole: whole.euler,
        euler_parts,
        overlap,
        rotation_whole: whole.rotation,
        rotation_parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{intersection_points, PointKind};
    use crate::exact::rat;
    use crate::fixtures;

    #[test]
    fn elliptic_cut_at_one_crossing_gives_one_interval() {
        let (curve, div) = fixtures::elliptic(2);
        let cut_at = Location::Edge { edge: "e".into(), position: rat(1, 2) };
        let r = split_verify(&curve, &div, &[cut_at]).unwrap();
        assert_eq!(r.parts.len(), 1);
        assert_eq!(r.parts[0].chi_top, 1);
        assert_eq!((r.euler_whole, r.euler_parts, r.overlap), (2, 3, 1));
        assert_eq!((r.rotation_whole, r.rotation_parts), (2, 2));
        assert!(r.identity_ok);
        assert!(r.parts.iter().all(|p| p.rr_ok));
    }

    #[test]
    fn theta_cut_at_both_vertices_gives_three_segments() {
        let curve = fixtures::theta_curve();
        let div = fixtures::theta_divisor();
        let pts = intersection_points(&curve, &div).unwrap();
        assert!(pts.iter().any(|p| matches!(p.kind, PointKind::VertexStar { .. })));
        let cuts = vec![Location::Vertex { vertex: "u".into() }, Location::Vertex { vertex: "w".into() }];
        let r = split_verify(&curve, &div, &cuts).unwrap();
        assert_eq!(r.parts.len(), 3);
        assert!(r.parts.iter().all(|p| p.edges.len() == 1 && p.chi_top == 1));
        assert_eq!(r.overlap, 4);
        assert!(r.identity_ok);
    }

    #[test]
    fn empty_cut_keeps_the_whole_curve() {
        let (curve, div) = fixtures::tropical_line(3);
        let r = split_verify(&curve, &div, &[]).unwrap();
        assert_eq!(r.parts.len(), 1);
        assert_eq!(r.overlap, 0);
        assert_eq!(r.euler_parts, r.euler_whole);
        assert!(r.identity_ok);
    }

    #[test]
    fn cut_outside_the_intersection_set_is_rejected() {
        let (curve, div) = fixtures::elliptic(2);
        let bad = Location::Edge { edge: "e".into(), position: rat(1, 3) };
        assert!(matches!(split_verify(&curve, &div, &[bad]), Err(CurveError::CutNotIntersection(_))));
    }
}
