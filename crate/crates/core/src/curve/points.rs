//! The intersection set `s₀ ∩ s` and its local Morse data.
//!
//! A point belongs to `s₀ ∩ s` when the derivative of the local potential is
//! an integer there. Its local type only depends on which incident
//! directions are ascending for `f − m·x` (`m` the integer level hit), so the
//! local Morse data never depends on edge lengths.

use super::{permissible_profiles, CurveDivisor, CurveError, HalfEdge, Profile, TropicalCurve};
use crate::exact::{count_integers_strictly_between, format_rational, integers_strictly_between, to_i64, Rational};
use crate::graded::GradedModule;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Upper bound on `#(s₀ ∩ s)` accepted by [`intersection_points`].
pub const MAX_POINTS: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Vertex { vertex: String },
    Edge { edge: String, position: Rational },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Vertex { vertex } => write!(f, "v:{vertex}"),
            Location::Edge { edge, position } => write!(f, "e:{edge}@{}", format_rational(position)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointKind {
    /// Finite vertex with `ascending + descending` equal to its valence.
    VertexStar { ascending: usize, descending: usize },
    /// End of an unbounded leaf; `f′ = 0` there.
    InfiniteLeaf { ascending: bool },
    EdgeUpCrossing,
    EdgeDownCrossing,
    /// `f′` touches an integer from one side.
    EdgeTouch,
}

impl PointKind {
    /// Number of descending directions at the point.
    pub fn descending(&self) -> usize {
        match *self {
            PointKind::VertexStar { descending, .. } => descending,
            PointKind::InfiniteLeaf { ascending } => usize::from(!ascending),
            PointKind::EdgeUpCrossing => 0,
            PointKind::EdgeDownCrossing => 2,
            PointKind::EdgeTouch => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PointKind::VertexStar { .. } => "vertex_star",
            PointKind::InfiniteLeaf { .. } => "infinite_leaf",
            PointKind::EdgeUpCrossing => "edge_up_crossing",
            PointKind::EdgeDownCrossing => "edge_down_crossing",
            PointKind::EdgeTouch => "edge_touch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub location: Location,
    pub kind: PointKind,
    /// Integer level of `f′` at the point; for vertices one entry per
    /// incident half-edge (outgoing slopes) in incidence order.
    pub levels: Vec<i64>,
}

impl IntersectionPoint {
    pub fn local_lmd(&self) -> GradedModule {
        local_lmd(&self.kind)
    }

    /// Local Morse index `χ(LMD)`.
    pub fn index(&self) -> i64 {
        self.local_lmd().euler()
    }
}

/// Local Morse data of a classified point.
///
/// Relative cohomology of a small star neighbourhood modulo its strict
/// sublevel set: with `q > 0` contractible descending branches this is
/// `Z^(q−1)` in degree 1; with none it is `Z` in degree 0. An ascending leaf
/// end has empty sublevel set, a descending one a contractible sublevel set.
pub fn local_lmd(kind: &PointKind) -> GradedModule {
    match *kind {
        PointKind::VertexStar { descending: 0, .. } => GradedModule::free(0, 1),
        PointKind::VertexStar { descending, .. } => GradedModule::free(1, descending as u64 - 1),
        PointKind::InfiniteLeaf { ascending: true } => GradedModule::free(0, 1),
        PointKind::InfiniteLeaf { ascending: false } => GradedModule::zero(),
        PointKind::EdgeUpCrossing => GradedModule::free(0, 1),
        PointKind::EdgeDownCrossing => GradedModule::free(1, 1),
        PointKind::EdgeTouch => GradedModule::zero(),
    }
}

fn star_kind(profiles: &[&Profile], incident: &[HalfEdge]) -> PointKind {
    let ascending = incident
        .iter()
        .filter(|he| profiles[he.edge].step_sign(he.end) == Ordering::Greater)
        .count();
    PointKind::VertexStar { ascending, descending: incident.len() - ascending }
}

pub(crate) fn check_budget(curve: &TropicalCurve, profiles: &[&Profile]) -> Result<(), CurveError> {
    let mut total = BigInt::from(curve.vertices().len());
    for p in profiles {
        total += p.breakpoints().len();
        for w in p.breakpoints().windows(2) {
            total += count_integers_strictly_between(&w[0].value, &w[1].value);
        }
    }
    if total.to_u64().is_none_or(|t| t > MAX_POINTS) {
        return Err(CurveError::TooManyPoints(total.to_string()));
    }
    Ok(())
}

/// All points of `s₀ ∩ s`, sorted by vertex id then by `(edge id, position)`.
pub fn intersection_points(
    curve: &TropicalCurve,
    div: &CurveDivisor,
) -> Result<Vec<IntersectionPoint>, CurveError> {
    let profiles = permissible_profiles(curve, div)?;
    check_budget(curve, &profiles)?;
    Ok(points_unchecked(curve, &profiles))
}

pub(crate) fn points_unchecked(curve: &TropicalCurve, profiles: &[&Profile]) -> Vec<IntersectionPoint> {
    let mut out = Vec::new();

    for (v, vertex) in curve.vertices().iter().enumerate() {
        let incident = curve.incident(v);
        let location = Location::Vertex { vertex: vertex.id.clone() };
        if vertex.at_infinity {
            let he = incident[0];
            let ascending = profiles[he.edge].step_sign(he.end) == Ordering::Greater;
            out.push(IntersectionPoint { location, kind: PointKind::InfiniteLeaf { ascending }, levels: vec![0] });
            continue;
        }
        let slopes: Vec<Rational> = incident.iter().map(|he| profiles[he.edge].outgoing_slope(he.end)).collect();
        // Valence-2 vertices lie on a line and are only hit when f' is integral there.
        if slopes.iter().all(|s| s.is_integer()) {
            out.push(IntersectionPoint {
                location,
                kind: star_kind(profiles, incident),
                levels: slopes.iter().map(to_i64).collect(),
            });
        }
    }

    for (edge, profile) in curve.edges().iter().zip(profiles) {
        let pts = profile.breakpoints();
        for (j, w) in pts.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            let kind = if b.value > a.value { PointKind::EdgeUpCrossing } else { PointKind::EdgeDownCrossing };
            for m in integers_strictly_between(&a.value, &b.value) {
                let level = Rational::from_integer(m);
                let position =
                    &a.position + (&level - &a.value) * (&b.position - &a.position) / (&b.value - &a.value);
                out.push(IntersectionPoint {
                    location: Location::Edge { edge: edge.id.clone(), position },
                    kind,
                    levels: vec![to_i64(&level)],
                });
            }
            // interior breakpoint at the right end of this segment
            let k = j + 1;
            if k + 1 < pts.len() && pts[k].value.is_integer() {
                let level = &pts[k].value;
                let before = (&pts[k - 1].value - level).cmp(&Rational::zero());
                let after = (&pts[k + 1].value - level).cmp(&Rational::zero());
                let kind = match (before, after) {
                    (Ordering::Less, Ordering::Greater) => PointKind::EdgeUpCrossing,
                    (Ordering::Greater, Ordering::Less) => PointKind::EdgeDownCrossing,
                    _ => PointKind::EdgeTouch,
                };
                out.push(IntersectionPoint {
                    location: Location::Edge { edge: edge.id.clone(), position: pts[k].position.clone() },
                    kind,
                    levels: vec![to_i64(level)],
                });
            }
        }
    }

    out.sort_by(|x, y| x.location.cmp(&y.location));
    out
}

/// `LMD•(C; s)`: the direct sum of the local Morse data over `s₀ ∩ s`.
pub fn lmd(curve: &TropicalCurve, div: &CurveDivisor) -> Result<GradedModule, CurveError> {
    Ok(intersection_points(curve, div)?.iter().map(|p| p.local_lmd()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::fixtures;

    #[test]
    fn local_indices_follow_one_minus_q() {
        let star = |p, q| local_lmd(&PointKind::VertexStar { ascending: p, descending: q }).euler();
        assert_eq!(star(3, 0), 1);
        assert_eq!(star(2, 1), 0);
        assert_eq!(star(1, 2), -1);
        assert_eq!(star(0, 3), -2);
        assert_eq!(local_lmd(&PointKind::VertexStar { ascending: 0, descending: 3 }), GradedModule::free(1, 2));
        assert_eq!(local_lmd(&PointKind::InfiniteLeaf { ascending: true }).euler(), 1);
        assert_eq!(local_lmd(&PointKind::InfiniteLeaf { ascending: false }).euler(), 0);
        assert_eq!(local_lmd(&PointKind::EdgeDownCrossing), GradedModule::free(1, 1));
        assert_eq!(local_lmd(&PointKind::EdgeUpCrossing).euler(), 1);
        assert!(local_lmd(&PointKind::EdgeTouch).is_zero());
        for kind in [
            PointKind::VertexStar { ascending: 2, descending: 2 },
            PointKind::InfiniteLeaf { ascending: false },
            PointKind::EdgeUpCrossing,
            PointKind::EdgeDownCrossing,
            PointKind::EdgeTouch,
        ] {
            assert_eq!(local_lmd(&kind).euler(), 1 - kind.descending() as i64);
        }
    }

    #[test]
    fn elliptic_points_sit_at_multiples_of_one_over_n() {
        for n in 1..=6 {
            let (curve, div) = fixtures::elliptic(n);
            let pts = intersection_points(&curve, &div).unwrap();
            assert_eq!(pts.len(), n as usize);
            assert_eq!(pts[0].kind, PointKind::VertexStar { ascending: 2, descending: 0 });
            for (k, p) in pts[1..].iter().enumerate() {
                assert_eq!(p.kind, PointKind::EdgeUpCrossing);
                assert_eq!(
                    p.location,
                    Location::Edge { edge: "e".into(), position: rat(k as i64 + 1, n) }
                );
                assert_eq!(p.levels, vec![k as i64 + 1]);
            }
            assert_eq!(lmd(&curve, &div).unwrap(), GradedModule::free(0, n as u64));
        }
    }

    #[test]
    fn tropical_line_has_two_leaves_and_interior_crossings() {
        for n in 1..=6 {
            let (curve, div) = fixtures::tropical_line(n);
            let pts = intersection_points(&curve, &div).unwrap();
            let leaves = pts.iter().filter(|p| matches!(p.kind, PointKind::InfiniteLeaf { ascending: true })).count();
            let ups = pts.iter().filter(|p| p.kind == PointKind::EdgeUpCrossing).count();
            assert_eq!((leaves, ups, pts.len()), (2, n as usize - 1, n as usize + 1));
            assert_eq!(lmd(&curve, &div).unwrap(), GradedModule::free(0, n as u64 + 1));
        }
    }

    #[test]
    fn constant_half_circle_misses_the_lattice() {
        let (curve, div) = fixtures::constant_circle(rat(1, 2));
        assert!(intersection_points(&curve, &div).unwrap().is_empty());
        assert!(lmd(&curve, &div).unwrap().is_zero());
    }

    #[test]
    fn touches_and_crossings_at_breakpoints() {
        let (curve, _) = fixtures::constant_circle(rat(1, 2));
        // 1/2 -> 1 -> 1/2 touches 1; 1/2 -> 1 (at 1/2) then -> 3/2 crosses.
        let touch = crate::curve::Profile::from_pairs([(int(0), rat(1, 2)), (rat(1, 2), int(1)), (int(1), rat(1, 2))]);
        let div = CurveDivisor::new("c", [("e".to_string(), touch)].into());
        let pts = intersection_points(&curve, &div).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].kind, PointKind::EdgeTouch);
        assert!(lmd(&curve, &div).unwrap().is_zero());

        let cross = crate::curve::Profile::from_pairs([(int(0), rat(1, 2)), (rat(1, 2), int(1)), (int(1), rat(3, 2))]);
        let div = CurveDivisor::new("c", [("e".to_string(), cross)].into());
        let pts = intersection_points(&curve, &div).unwrap();
        // the vertex slopes 1/2 and -3/2 are not integral, so only the crossing remains
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].kind, PointKind::EdgeUpCrossing);
    }

    #[test]
    fn star_fixture_centres() {
        for (p, q, ind) in [(3, 0, 1), (2, 1, 0), (1, 2, -1), (0, 3, -2)] {
            let (curve, div) = fixtures::star(p, q);
            let pts = intersection_points(&curve, &div).unwrap();
            let centre = pts.iter().find(|pt| pt.location == Location::Vertex { vertex: "o".into() }).unwrap();
            assert_eq!(centre.kind, PointKind::VertexStar { ascending: p, descending: q });
            assert_eq!(centre.index(), ind);
        }
    }

    #[test]
    fn too_many_points_is_rejected() {
        let (curve, _) = fixtures::constant_circle(rat(1, 2));
        let steep = crate::curve::Profile::from_pairs([(int(0), rat(1, 2)), (int(1), rat(1 << 40, 1) + rat(1, 2))]);
        let div = CurveDivisor::new("c", [("e".to_string(), steep)].into());
        assert!(matches!(intersection_points(&curve, &div), Err(CurveError::TooManyPoints(_))));
    }
}
