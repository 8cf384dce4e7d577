//! Tropical curves and their smooth divisors.
//!
//! A curve is a finite multigraph whose edges carry positive rational lengths
//! and whose `at_infinity` vertices are the ends of unbounded leaves. A divisor
//! is given edge by edge by the derivative `f′` of a local potential, written
//! as a continuous piecewise-linear profile in the tail→head parametrization
//! of the edge. Charts on neighbouring edges may differ by an integral affine
//! function, so at a finite vertex the outgoing slopes need only sum to an
//! integer; that integer is the local contribution of the transition cocycle.
//!
//! The outgoing slope of an edge at its tail is `f′(0)`, at its head it is
//! `−f′(L)`. All checks are exact.

mod points;
mod random;
mod rotation;
mod split;

pub use points::{intersection_points, lmd, local_lmd, IntersectionPoint, Location, PointKind};
pub use random::{random_curve, random_divisor, RandomCurveParams};
pub use rotation::{analyze, chi_top, degree, rotation_number, verify_rr, CurveReport, PointRecord, RrCheck};
pub use split::{split_verify, PartSummary, SplitReport};

use crate::exact::{format_rational, parse_rational, serde_rational, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum CurveError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("divisor is not permissible: {0}")]
    NotPermissible(ValidationReport),
    #[error("cut point {0} is not in the intersection set")]
    CutNotIntersection(String),
    #[error("intersection set too large: {0} points (limit {limit})", limit = points::MAX_POINTS)]
    TooManyPoints(String),
    #[error("{0}")]
    Unsupported(String),
}

fn structural(msg: impl Into<String>) -> CurveError {
    CurveError::Structural(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    #[serde(default)]
    pub at_infinity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
    #[serde(with = "serde_rational")]
    pub length: Rational,
}

/// On-disk curve schema, before structural checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveSpec {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Tail,
    Head,
}

/// One end of an edge, seen from the vertex it is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

#[derive(Clone, Debug)]
pub struct TropicalCurve {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    // (tail, head) vertex indices per edge
    ends: Vec<(usize, usize)>,
    incidence: Vec<Vec<HalfEdge>>,
}

impl PartialEq for TropicalCurve {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl TropicalCurve {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, CurveError> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(structural(format!("duplicate vertex id `{}`", v.id)));
            }
        }
        let mut edge_index = HashMap::new();
        let mut ends = Vec::with_capacity(edges.len());
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(structural(format!("duplicate edge id `{}`", e.id)));
            }
            let lookup = |id: &str| {
                vertex_index.get(id).copied().ok_or_else(|| {
                    structural(format!("edge `{}` cites unknown vertex `{id}`", e.id))
                })
            };
            let (t, h) = (lookup(&e.tail)?, lookup(&e.head)?);
            if !e.length.is_positive() {
                return Err(structural(format!(
                    "edge `{}` has non-positive length {}",
                    e.id,
                    format_rational(&e.length)
                )));
            }
            if vertices[t].at_infinity && vertices[h].at_infinity {
                return Err(structural(format!("edge `{}` joins two vertices at infinity", e.id)));
            }
            ends.push((t, h));
            incidence[t].push(HalfEdge { edge: i, end: End::Tail });
            incidence[h].push(HalfEdge { edge: i, end: End::Head });
        }
        for (v, inc) in vertices.iter().zip(&incidence) {
            if v.at_infinity && inc.len() != 1 {
                return Err(structural(format!(
                    "vertex `{}` is at infinity but has valence {}",
                    v.id,
                    inc.len()
                )));
            }
        }
        Ok(Self { vertices, edges, vertex_index, edge_index, ends, incidence })
    }

    pub fn from_spec(spec: CurveSpec) -> Result<Self, CurveError> {
        Self::new(spec.vertices, spec.edges)
    }

    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        let spec: CurveSpec =
            serde_json::from_str(text).map_err(|e| CurveError::Parse(e.to_string()))?;
        Self::from_spec(spec)
    }

    pub fn to_spec(&self) -> CurveSpec {
        CurveSpec { vertices: self.vertices.clone(), edges: self.edges.clone() }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_idx(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_idx(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// `(tail, head)` vertex indices of edge `e`.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn incident(&self, v: usize) -> &[HalfEdge] {
        &self.incidence[v]
    }

    /// Number of half-edges at `v`; a loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Vertex indices grouped by connected component, each group ascending.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for he in &self.incidence[v] {
                    let (t, h) = self.ends[he.edge];
                    let w = if he.end == End::Tail { h } else { t };
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// First Betti number `E − V + #components`.
    pub fn genus(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    /// Same curve with every edge length multiplied by `factor > 0`.
    pub fn rescaled(&self, factor: &Rational) -> Result<Self, CurveError> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { length: &e.length * factor, ..e.clone() })
            .collect();
        Self::new(self.vertices.clone(), edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    pub position: Rational,
    pub value: Rational,
}

/// Piecewise-linear derivative profile of one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile(Vec<Breakpoint>);

impl Profile {
    pub fn new(points: Vec<Breakpoint>) -> Self {
        Self(points)
    }

    pub fn from_pairs<I: IntoIterator<Item = (Rational, Rational)>>(pairs: I) -> Self {
        Self(pairs.into_iter().map(|(position, value)| Breakpoint { position, value }).collect())
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.0
    }

    fn check_shape(&self, edge: &Edge) -> Result<(), CurveError> {
        let pts = &self.0;
        if pts.len() < 2 {
            return Err(structural(format!("profile of edge `{}` needs at least two breakpoints", edge.id)));
        }
        if !pts[0].position.is_zero() {
            return Err(structural(format!("profile of edge `{}` must start at position 0", edge.id)));
        }
        if pts[pts.len() - 1].position != edge.length {
            return Err(structural(format!(
                "profile of edge `{}` must end at the edge length {}",
                edge.id,
                format_rational(&edge.length)
            )));
        }
        if pts.windows(2).any(|w| w[0].position >= w[1].position) {
            return Err(structural(format!(
                "profile of edge `{}` has non-increasing positions",
                edge.id
            )));
        }
        Ok(())
    }

    /// `f′` at the given end of the edge.
    pub fn end_value(&self, end: End) -> &Rational {
        match end {
            End::Tail => &self.0[0].value,
            End::Head => &self.0[self.0.len() - 1].value,
        }
    }

    /// Outgoing slope at the given end: `f′(0)` at the tail, `−f′(L)` at the head.
    pub fn outgoing_slope(&self, end: End) -> Rational {
        match end {
            End::Tail => self.0[0].value.clone(),
            End::Head => -self.0[self.0.len() - 1].value.clone(),
        }
    }

    /// Sign of the profile's own slope on the segment adjacent to `end`.
    ///
    /// When the outgoing slope at `end` equals the integer level hit there,
    /// `Greater` means the potential minus that level rises when leaving the
    /// vertex along this edge (an ascending direction).
    pub fn step_sign(&self, end: End) -> Ordering {
        let n = self.0.len();
        match end {
            End::Tail => self.0[1].value.cmp(&self.0[0].value),
            End::Head => self.0[n - 1].value.cmp(&self.0[n - 2].value),
        }
    }

    /// Piecewise-linear interpolation at `pos` (clamped to the edge).
    pub fn value_at(&self, pos: &Rational) -> Rational {
        let pts = &self.0;
        if *pos <= pts[0].position {
            return pts[0].value.clone();
        }
        for w in pts.windows(2) {
            if *pos <= w[1].position {
                let t = (pos - &w[0].position) / (&w[1].position - &w[0].position);
                return &w[0].value + t * (&w[1].value - &w[0].value);
            }
        }
        pts[pts.len() - 1].value.clone()
    }

    /// Profile restricted to `[from, to]`, reparametrized to start at 0.
    pub fn restrict(&self, from: &Rational, to: &Rational) -> Profile {
        let mut out = vec![Breakpoint { position: Rational::zero(), value: self.value_at(from) }];
        for b in &self.0 {
            if b.position > *from && b.position < *to {
                out.push(Breakpoint { position: &b.position - from, value: b.value.clone() });
            }
        }
        out.push(Breakpoint { position: to - from, value: self.value_at(to) });
        Profile(out)
    }

    /// Sum of two profiles on the same edge, on the union of breakpoints.
    pub fn add(&self, other: &Profile) -> Profile {
        let mut positions: Vec<Rational> =
            self.0.iter().chain(&other.0).map(|b| b.position.clone()).collect();
        positions.sort();
        positions.dedup();
        Profile(
            positions
                .into_iter()
                .map(|p| {
                    let value = self.value_at(&p) + other.value_at(&p);
                    Breakpoint { position: p, value }
                })
                .collect(),
        )
    }

    fn to_strings(&self) -> Vec<[String; 2]> {
        self.0
            .iter()
            .map(|b| [format_rational(&b.position), format_rational(&b.value)])
            .collect()
    }
}

/// On-disk divisor schema: `{"curve": name, "profiles": {edge: [[pos, val], …]}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorSpec {
    pub curve: String,
    pub profiles: BTreeMap<String, Vec<[String; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveDivisor {
    pub curve: String,
    profiles: BTreeMap<String, Profile>,
}

impl CurveDivisor {
    pub fn new(curve: impl Into<String>, profiles: BTreeMap<String, Profile>) -> Self {
        Self { curve: curve.into(), profiles }
    }

    pub fn from_spec(spec: DivisorSpec) -> Result<Self, CurveError> {
        let mut profiles = BTreeMap::new();
        for (edge, pairs) in spec.profiles {
            let mut pts = Vec::with_capacity(pairs.len());
            for [pos, val] in &pairs {
                let parse = |t: &str| {
                    parse_rational(t)
                        .map_err(|e| CurveError::Parse(format!("profile of edge `{edge}`: {e}")))
                };
                pts.push(Breakpoint { position: parse(pos)?, value: parse(val)? });
            }
            profiles.insert(edge, Profile(pts));
        }
        Ok(Self { curve: spec.curve, profiles })
    }

    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        let spec: DivisorSpec =
            serde_json::from_str(text).map_err(|e| CurveError::Parse(e.to_string()))?;
        Self::from_spec(spec)
    }

    pub fn to_spec(&self) -> DivisorSpec {
        DivisorSpec {
            curve: self.curve.clone(),
            profiles: self.profiles.iter().map(|(k, p)| (k.clone(), p.to_strings())).collect(),
        }
    }

    pub fn profile(&self, edge_id: &str) -> Option<&Profile> {
        self.profiles.get(edge_id)
    }

    pub fn profiles(&self) -> &BTreeMap<String, Profile> {
        &self.profiles
    }

    /// Edgewise sum of two divisors on the same curve.
    pub fn add(&self, other: &CurveDivisor) -> CurveDivisor {
        let profiles = self
            .profiles
            .iter()
            .filter_map(|(k, p)| other.profiles.get(k).map(|q| (k.clone(), p.add(q))))
            .collect();
        CurveDivisor { curve: self.curve.clone(), profiles }
    }

    /// Edgewise negation `−s`.
    pub fn negated(&self) -> CurveDivisor {
        let profiles = self
            .profiles
            .iter()
            .map(|(k, p)| {
                let pts = p.0.iter().map(|b| Breakpoint { position: b.position.clone(), value: -b.value.clone() });
                (k.clone(), Profile(pts.collect()))
            })
            .collect();
        CurveDivisor { curve: self.curve.clone(), profiles }
    }

    /// Same divisor on a curve whose lengths were scaled by `factor`.
    pub fn rescaled(&self, factor: &Rational) -> CurveDivisor {
        let profiles = self
            .profiles
            .iter()
            .map(|(k, p)| {
                let pts = p.0.iter().map(|b| Breakpoint { position: &b.position * factor, value: b.value.clone() });
                (k.clone(), Profile(pts.collect()))
            })
            .collect();
        CurveDivisor { curve: self.curve.clone(), profiles }
    }
}

/// Resolves the profile of every edge, in edge order, after shape checks.
pub(crate) fn edge_profiles<'a>(
    curve: &TropicalCurve,
    div: &'a CurveDivisor,
) -> Result<Vec<&'a Profile>, CurveError> {
    let known: HashSet<&str> = curve.edges.iter().map(|e| e.id.as_str()).collect();
    if let Some(extra) = div.profiles.keys().find(|k| !known.contains(k.as_str())) {
        return Err(structural(format!("divisor has a profile for unknown edge `{extra}`")));
    }
    curve
        .edges
        .iter()
        .map(|e| {
            let p = div
                .profiles
                .get(&e.id)
                .ok_or_else(|| structural(format!("divisor has no profile for edge `{}`", e.id)))?;
            p.check_shape(e)?;
            Ok(p)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Outgoing slopes at a finite vertex do not sum to an integer.
    Balance { vertex: String, sum: Rational },
    /// The derivative does not vanish at an end at infinity.
    LeafDecay { vertex: String, edge: String, value: Rational },
    /// Non-integral outgoing slope at a finite vertex of valence other than two.
    Prepermissibility { vertex: String, edge: String, slope: Rational },
    /// `f′` is constant at an integer on a segment, so the intersection set is infinite.
    Plateau { edge: String, from: Rational, to: Rational, level: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Balance { vertex, sum } => write!(
                f,
                "balance: outgoing slopes at vertex `{vertex}` sum to {}, not an integer",
                format_rational(sum)
            ),
            Violation::LeafDecay { vertex, edge, value } => write!(
                f,
                "decay: f' = {} on edge `{edge}` at vertex `{vertex}` at infinity (must be 0)",
                format_rational(value)
            ),
            Violation::Prepermissibility { vertex, edge, slope } => write!(
                f,
                "prepermissibility: outgoing slope {} along edge `{edge}` at vertex `{vertex}` is not an integer",
                format_rational(slope)
            ),
            Violation::Plateau { edge, from, to, level } => write!(
                f,
                "permissibility: f' = {} on [{}, {}] of edge `{edge}` (infinite intersection set)",
                format_rational(level),
                format_rational(from),
                format_rational(to)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_permissible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "permissible");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Checks balance, decay at infinity, prepermissibility and permissibility.
///
/// Structural problems (missing or malformed profiles) are returned as
/// `Err`; every other failure is listed in the report.
pub fn validate(curve: &TropicalCurve, div: &CurveDivisor) -> Result<ValidationReport, CurveError> {
    let profiles = edge_profiles(curve, div)?;
    let mut violations = Vec::new();

    for (v, vertex) in curve.vertices.iter().enumerate() {
        let incident = curve.incident(v);
        if vertex.at_infinity {
            let he = incident[0];
            let value = profiles[he.edge].end_value(he.end);
            if !value.is_zero() {
                violations.push(Violation::LeafDecay {
                    vertex: vertex.id.clone(),
                    edge: curve.edges[he.edge].id.clone(),
                    value: value.clone(),
                });
            }
            continue;
        }
        let mut sum = Rational::zero();
        for he in incident {
            let slope = profiles[he.edge].outgoing_slope(he.end);
            if incident.len() != 2 && !slope.is_integer() {
                violations.push(Violation::Prepermissibility {
                    vertex: vertex.id.clone(),
                    edge: curve.edges[he.edge].id.clone(),
                    slope: slope.clone(),
                });
            }
            sum += slope;
        }
        if !sum.is_integer() {
            violations.push(Violation::Balance { vertex: vertex.id.clone(), sum });
        }
    }

    for (edge, profile) in curve.edges.iter().zip(&profiles) {
        for w in profile.0.windows(2) {
            if w[0].value == w[1].value && w[0].value.is_integer() {
                violations.push(Violation::Plateau {
                    edge: edge.id.clone(),
                    from: w[0].position.clone(),
                    to: w[1].position.clone(),
                    level: w[0].value.clone(),
                });
            }
        }
    }
    Ok(ValidationReport { violations })
}

/// Validates and returns the per-edge profiles, or the failure as an error.
pub(crate) fn permissible_profiles<'a>(
    curve: &TropicalCurve,
    div: &'a CurveDivisor,
) -> Result<Vec<&'a Profile>, CurveError> {
    let report = validate(curve, div)?;
    if !report.is_permissible() {
        return Err(CurveError::NotPermissible(report));
    }
    edge_profiles(curve, div)
}

/// Connected `d`-fold cyclic cover of a curve that is a single circle.
///
/// The circle is cut open at its first edge; copy `i` of that edge runs from
/// sheet `i` to sheet `i + 1 mod d`. Profiles are pulled back unchanged.
pub fn cyclic_cover(
    curve: &TropicalCurve,
    div: &CurveDivisor,
    d: usize,
) -> Result<(TropicalCurve, CurveDivisor), CurveError> {
    let is_circle = !curve.vertices.is_empty()
        && curve.is_connected()
        && curve.vertices.iter().enumerate().all(|(v, vx)| !vx.at_infinity && curve.valence(v) == 2);
    if !is_circle {
        return Err(CurveError::Unsupported(
            "cyclic covers need a connected curve with only finite 2-valent vertices (a circle)".into(),
        ));
    }
    if d == 0 {
        return Err(CurveError::Unsupported("cover degree must be positive".into()));
    }
    edge_profiles(curve, div)?;
    let sheet_id = |id: &str, i: usize| format!("{id}~{i}");
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut profiles = BTreeMap::new();
    for i in 0..d {
        for v in &curve.vertices {
            vertices.push(Vertex { id: sheet_id(&v.id, i), at_infinity: false });
        }
        for (k, e) in curve.edges.iter().enumerate() {
            let head_sheet = if k == 0 { (i + 1) % d } else { i };
            edges.push(Edge {
                id: sheet_id(&e.id, i),
                tail: sheet_id(&e.tail, i),
                head: sheet_id(&e.head, head_sheet),
                length: e.length.clone(),
            });
            profiles.insert(sheet_id(&e.id, i), div.profiles[&e.id].clone());
        }
    }
    let cover = TropicalCurve::new(vertices, edges)?;
    Ok((cover, CurveDivisor::new(format!("{}~cover{d}", div.curve), profiles)))
}
