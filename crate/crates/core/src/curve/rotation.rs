//! Rotation number, degree and the curve Riemann–Roch identity
//! `χ(LMD•(C; s)) = deg([s]) + χ_top(C)`.

use super::points::{check_budget, points_unchecked};
use super::{permissible_profiles, CurveDivisor, CurveError, IntersectionPoint, Profile, TropicalCurve};
use crate::exact::{format_rational, to_i64, Rational};
use crate::graded::GradedModule;
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};

/// `χ_top(C) = #vertices − #edges`.
pub fn chi_top(curve: &TropicalCurve) -> i64 {
    curve.vertices().len() as i64 - curve.edges().len() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PieceEnd {
    /// The piece ends at a point of `s₀ ∩ s`.
    Cut,
    /// The piece ends at a vertex outside `s₀ ∩ s` and continues through it.
    Through(usize),
}

struct Piece {
    start: PieceEnd,
    end: PieceEnd,
    change: Rational,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Cuts every edge at the intersection points and returns the resulting
/// pieces with the change of `f′` across each.
fn pieces(curve: &TropicalCurve, profiles: &[&Profile], points: &[IntersectionPoint]) -> Vec<Piece> {
    let cut_vertices: HashSet<&str> = points
        .iter()
        .filter_map(|p| match &p.location {
            super::Location::Vertex { vertex } => Some(vertex.as_str()),
            _ => None,
        })
        .collect();
    let mut interior: BTreeMap<&str, Vec<&Rational>> = BTreeMap::new();
    for p in points {
        if let super::Location::Edge { edge, position } = &p.location {
            interior.entry(edge.as_str()).or_default().push(position);
        }
    }

    let mut out = Vec::new();
    for (e, edge) in curve.edges().iter().enumerate() {
        let (t, h) = curve.ends(e);
        let vertex_end = |v: usize| {
            if cut_vertices.contains(curve.vertices()[v].id.as_str()) {
                PieceEnd::Cut
            } else {
                PieceEnd::Through(v)
            }
        };
        let zero = Rational::zero();
        let mut stops: Vec<(&Rational, PieceEnd)> = vec![(&zero, vertex_end(t))];
        if let Some(cuts) = interior.get(edge.id.as_str()) {
            stops.extend(cuts.iter().map(|&p| (p, PieceEnd::Cut)));
        }
        stops.push((&edge.length, vertex_end(h)));
        for w in stops.windows(2) {
            let change = profiles[e].value_at(w[1].0) - profiles[e].value_at(w[0].0);
            out.push(Piece { start: w[0].1, end: w[1].1, change });
        }
    }
    out
}

pub(crate) fn rotation_unchecked(
    curve: &TropicalCurve,
    profiles: &[&Profile],
    points: &[IntersectionPoint],
) -> i64 {
    let pieces = pieces(curve, profiles, points);
    // Join pieces through vertices that are not cut.
    let mut parent: Vec<usize> = (0..pieces.len()).collect();
    let mut first_at_vertex: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, piece) in pieces.iter().enumerate() {
        for end in [piece.start, piece.end] {
            if let PieceEnd::Through(v) = end {
                match first_at_vertex.get(&v) {
                    Some(&j) => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                    None => {
                        first_at_vertex.insert(v, i);
                    }
                }
            }
        }
    }
    let mut is_interval: BTreeMap<usize, bool> = BTreeMap::new();
    let mut change: BTreeMap<usize, Rational> = BTreeMap::new();
    for (i, piece) in pieces.iter().enumerate() {
        let root = find(&mut parent, i);
        let cut = piece.start == PieceEnd::Cut || piece.end == PieceEnd::Cut;
        *is_interval.entry(root).or_insert(false) |= cut;
        *change.entry(root).or_insert_with(Rational::zero) += &piece.change;
    }
    // Circle components avoid s0 ∩ s entirely and contribute nothing.
    let total: Rational = change
        .into_iter()
        .filter(|(root, _)| is_interval[root])
        .map(|(_, c)| c)
        .fold(Rational::zero(), |acc, c| acc + c);
    to_i64(&total)
}

/// Rotation number: the sum, over the open-interval components of
/// `C ∖ (s₀ ∩ s)`, of the lifted change of `f′` from one end to the other.
///
/// A loop whose closure meets `s₀ ∩ s` in a single point is treated as an
/// interval with both ends at that point and contributes its total lifted
/// winding.
pub fn rotation_number(curve: &TropicalCurve, div: &CurveDivisor) -> Result<i64, CurveError> {
    let profiles = permissible_profiles(curve, div)?;
    check_budget(curve, &profiles)?;
    let points = points_unchecked(curve, &profiles);
    Ok(rotation_unchecked(curve, &profiles, &points))
}

pub(crate) fn degree_unchecked(curve: &TropicalCurve, profiles: &[&Profile]) -> i64 {
    // The outgoing slopes at a finite vertex sum to the slope of the integral
    // affine transition functions around it; deg([s]) is minus their total.
    let mut total = Rational::zero();
    for (v, vertex) in curve.vertices().iter().enumerate() {
        if vertex.at_infinity {
            continue;
        }
        for he in curve.incident(v) {
            total -= profiles[he.edge].outgoing_slope(he.end);
        }
    }
    to_i64(&total)
}

/// `deg([s]) = ∫_C c₁([s])`, computed from the transition cocycle of the
/// local data. Equal to [`rotation_number`] for permissible divisors.
pub fn degree(curve: &TropicalCurve, div: &CurveDivisor) -> Result<i64, CurveError> {
    let profiles = permissible_profiles(curve, div)?;
    Ok(degree_unchecked(curve, &profiles))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RrCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
}

/// Checks `χ(LMD) = deg + χ_top`.
pub fn verify_rr(curve: &TropicalCurve, div: &CurveDivisor) -> Result<RrCheck, CurveError> {
    let report = analyze(curve, div)?;
    Ok(RrCheck { lhs: report.euler, rhs: report.degree + report.chi_top, ok: report.rr_ok })
}

/// Serialized form of one intersection point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointRecord {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<String>,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ascending: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descending: Option<usize>,
    pub levels: Vec<i64>,
    pub lmd: GradedModule,
    pub index: i64,
}

impl From<&IntersectionPoint> for PointRecord {
    fn from(p: &IntersectionPoint) -> Self {
        let (vertex, edge, position) = match &p.location {
            super::Location::Vertex { vertex } => (Some(vertex.clone()), None, None),
            super::Location::Edge { edge, position } => (None, Some(edge.clone()), Some(format_rational(position))),
        };
        let (ascending, descending) = match p.kind {
            super::PointKind::VertexStar { ascending, descending } => (Some(ascending), Some(descending)),
            super::PointKind::InfiniteLeaf { ascending } => {
                (Some(usize::from(ascending)), Some(usize::from(!ascending)))
            }
            _ => (None, None),
        };
        PointRecord {
            label: p.location.to_string(),
            vertex,
            edge,
            position,
            kind: p.kind.name(),
            ascending,
            descending,
            levels: p.levels.clone(),
            lmd: p.local_lmd(),
            index: p.index(),
        }
    }
}

/// Everything `curve check` reports for one (curve, divisor) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveReport {
    pub points: Vec<PointRecord>,
    pub lmd: GradedModule,
    pub euler: i64,
    pub rotation: i64,
    pub degree: i64,
    pub chi_top: i64,
    pub rr_ok: bool,
}

/// Validates once and computes points, LMD, rotation, degree and `χ_top`.
///
/// The two sides of the identity come from separate routes: the left from
/// local classification of the points, the right from the transition cocycle
/// and the graph's cell counts.
pub fn analyze(curve: &TropicalCurve, div: &CurveDivisor) -> Result<CurveReport, CurveError> {
    let profiles = permissible_profiles(curve, div)?;
    check_budget(curve, &profiles)?;
    let points = points_unchecked(curve, &profiles);
    let lmd: GradedModule = points.iter().map(|p| p.local_lmd()).sum();
    let euler = lmd.euler();
    let rotation = rotation_unchecked(curve, &profiles, &points);
    let degree = degree_unchecked(curve, &profiles);
    let chi_top = chi_top(curve);
    Ok(CurveReport {
        points: points.iter().map(PointRecord::from).collect(),
        lmd,
        euler,
        rotation,
        degree,
        chi_top,
        rr_ok: euler == degree + chi_top,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{lmd, Edge, Vertex};
    use crate::exact::{int, rat};
    use crate::fixtures;

    #[test]
    fn chi_top_examples() {
        assert_eq!(chi_top(&fixtures::elliptic(1).0), 0);
        assert_eq!(chi_top(&fixtures::tropical_line(1).0), 1);
        assert_eq!(chi_top(&fixtures::theta_curve()), -1);
    }

    #[test]
    fn elliptic_identity() {
        for n in (-5..=-1).chain(1..=10) {
            let (curve, div) = fixtures::elliptic(n);
            let r = analyze(&curve, &div).unwrap();
            assert_eq!((r.euler, r.rotation, r.degree, r.chi_top), (n, n, n, 0), "n={n}");
            assert!(r.rr_ok);
        }
    }

    #[test]
    fn tropical_line_identity() {
        for n in -4..=10 {
            let (curve, div) = fixtures::tropical_line(n);
            let check = verify_rr(&curve, &div).unwrap();
            assert_eq!(check, RrCheck { lhs: n + 1, rhs: n + 1, ok: true }, "n={n}");
            assert_eq!(rotation_number(&curve, &div).unwrap(), n);
            assert_eq!(degree(&curve, &div).unwrap(), n);
        }
    }

    #[test]
    fn constant_circle_is_trivial() {
        let (curve, div) = fixtures::constant_circle(rat(1, 2));
        let r = analyze(&curve, &div).unwrap();
        assert_eq!((r.euler, r.rotation, r.degree, r.chi_top), (0, 0, 0, 0));
    }

    /// A tree with one global profile: exact zero-sum at every vertex and
    /// `f′ = 0` at the leaves. Telescoping makes the rotation vanish.
    #[test]
    fn principal_profile_on_a_tree_has_rotation_zero() {
        let curve = TropicalCurve::new(
            vec![
                Vertex { id: "o".into(), at_infinity: false },
                Vertex { id: "x".into(), at_infinity: true },
                Vertex { id: "y".into(), at_infinity: true },
                Vertex { id: "z".into(), at_infinity: false },
            ],
            vec![
                Edge { id: "a".into(), tail: "x".into(), head: "o".into(), length: int(1) },
                Edge { id: "b".into(), tail: "o".into(), head: "y".into(), length: int(1) },
                Edge { id: "c".into(), tail: "o".into(), head: "z".into(), length: int(2) },
            ],
        )
        .unwrap();
        // outgoing slopes at o: a 1, b 1, c -2
        let p = |pairs: &[(Rational, Rational)]| crate::curve::Profile::from_pairs(pairs.iter().cloned());
        let div = CurveDivisor::new(
            "tree",
            [
                ("a".to_string(), p(&[(int(0), int(0)), (rat(1, 2), rat(5, 2)), (int(1), int(-1))])),
                ("b".to_string(), p(&[(int(0), int(1)), (rat(1, 2), rat(-1, 2)), (int(1), int(0))])),
                ("c".to_string(), p(&[(int(0), int(-2)), (int(1), rat(3, 2)), (int(2), int(0))])),
            ]
            .into(),
        );
        let r = analyze(&curve, &div).unwrap();
        assert_eq!((r.rotation, r.degree, r.chi_top), (0, 0, 1));
        assert_eq!(r.euler, 1);
        assert_eq!(lmd(&curve, &div).unwrap().euler(), 1);
    }

    #[test]
    fn rescaling_lengths_changes_nothing() {
        for (curve, div) in [fixtures::elliptic(4), fixtures::tropical_line(3), fixtures::star(1, 2)] {
            let before = analyze(&curve, &div).unwrap();
            for factor in [rat(1, 3), rat(7, 2)] {
                let after = analyze(&curve.rescaled(&factor).unwrap(), &div.rescaled(&factor)).unwrap();
                assert_eq!(after.lmd, before.lmd);
                assert_eq!((after.rotation, after.degree), (before.rotation, before.degree));
            }
        }
    }

    #[test]
    fn negated_min_type_divisor_is_concentrated_in_degree_one() {
        let (curve, div) = fixtures::elliptic(5);
        let plus = analyze(&curve, &div).unwrap();
        assert_eq!(plus.lmd, GradedModule::free(0, 5));
        let minus = analyze(&curve, &div.negated()).unwrap();
        assert_eq!(minus.lmd, GradedModule::free(1, 5));
        assert_eq!(minus.euler, -5);
    }

    #[test]
    fn non_permissible_input_is_a_distinct_error() {
        let (curve, div) = fixtures::constant_circle(int(1));
        assert!(matches!(verify_rr(&curve, &div), Err(CurveError::NotPermissible(_))));
    }
}
