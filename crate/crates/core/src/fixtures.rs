//! Built-in named examples.

use crate::curve::{CurveDivisor, Edge, Profile, TropicalCurve, Vertex};
use crate::exact::{int, rat, Rational};
use crate::toric::{Facet, LatticePolytope};
use crate::torus::TorusQuadraticDivisor;
use std::collections::BTreeMap;

fn vertex(id: &str, at_infinity: bool) -> Vertex {
    Vertex { id: id.into(), at_infinity }
}

fn edge(id: &str, tail: &str, head: &str, length: Rational) -> Edge {
    Edge { id: id.into(), tail: tail.into(), head: head.into(), length }
}

fn divisor(name: String, profiles: Vec<(&str, Vec<(Rational, Rational)>)>) -> CurveDivisor {
    let profiles: BTreeMap<String, Profile> =
        profiles.into_iter().map(|(e, pts)| (e.to_string(), Profile::from_pairs(pts))).collect();
    CurveDivisor::new(name, profiles)
}

fn circle() -> TropicalCurve {
    TropicalCurve::new(vec![vertex("v", false)], vec![edge("e", "v", "v", int(1))])
        .expect("fixture is well formed")
}

/// Circle of circumference 1 with `f′` rising linearly from 0 to `n`.
///
/// The chart changes by `x ↦ n·x` across the vertex, so the degree is `n`.
/// Not permissible for `n = 0`.
pub fn elliptic(n: i64) -> (TropicalCurve, CurveDivisor) {
    let div = divisor(format!("elliptic:{n}"), vec![("e", vec![(int(0), int(0)), (int(1), int(n))])]);
    (circle(), div)
}

/// Circle with constant `f′ = value`.
pub fn constant_circle(value: Rational) -> (TropicalCurve, CurveDivisor) {
    let div = divisor("constant".into(), vec![("e", vec![(int(0), value.clone()), (int(1), value)])]);
    (circle(), div)
}

/// The line `[−∞, +∞]` subdivided at a 2-valent vertex `v`, with the divisor
/// of the segment `[0, n]`: `f′` runs from 0 up to `n − 1/2`, jumps by the
/// integer `n` in the chart at `v`, and returns from `−1/2` to 0.
pub fn tropical_line(n: i64) -> (TropicalCurve, CurveDivisor) {
    let curve = TropicalCurve::new(
        vec![vertex("-inf", true), vertex("v", false), vertex("+inf", true)],
        vec![edge("e1", "-inf", "v", int(1)), edge("e2", "v", "+inf", int(1))],
    )
    .expect("fixture is well formed");
    let div = divisor(
        format!("tp1:{n}"),
        vec![
            ("e1", vec![(int(0), int(0)), (int(1), int(n) - rat(1, 2))]),
            ("e2", vec![(int(0), rat(-1, 2)), (int(1), int(0))]),
        ],
    );
    (curve, div)
}

/// A vertex `o` joined to `p + q` leaves, with `p` ascending and `q`
/// descending directions at `o`.
///
/// All outgoing slopes at `o` are 0. Along an ascending edge `f′` bumps up
/// to `1/2` and back, so its leaf end is descending, and vice versa.
pub fn star(p: usize, q: usize) -> (TropicalCurve, CurveDivisor) {
    let mut vertices = vec![vertex("o", false)];
    let mut edges = Vec::new();
    let mut profiles = Vec::new();
    let names: Vec<(String, String)> = (0..p + q).map(|i| (format!("a{i}"), format!("l{i}"))).collect();
    for (i, (e, l)) in names.iter().enumerate() {
        vertices.push(vertex(l, true));
        edges.push(edge(e, "o", l, int(1)));
        let bump = if i < p { rat(1, 2) } else { rat(-1, 2) };
        profiles.push((e.as_str(), vec![(int(0), int(0)), (rat(1, 2), bump), (int(1), int(0))]));
    }
    let curve = TropicalCurve::new(vertices, edges).expect("fixture is well formed");
    (curve, divisor(format!("star:{p},{q}"), profiles))
}

/// Two vertices `u`, `w` joined by three parallel edges `a`, `b`, `c`.
pub fn theta_curve() -> TropicalCurve {
    TropicalCurve::new(
        vec![vertex("u", false), vertex("w", false)],
        vec![
            edge("a", "u", "w", int(1)),
            edge("b", "u", "w", int(1)),
            edge("c", "u", "w", int(1)),
        ],
    )
    .expect("fixture is well formed")
}

/// Outgoing slopes `(1, 1, −2)` at `u` and `(2, −1, −1)` at `w`.
pub fn theta_divisor() -> CurveDivisor {
    divisor(
        "theta".into(),
        vec![
            ("a", vec![(int(0), int(1)), (rat(1, 2), rat(1, 2)), (int(1), int(-2))]),
            ("b", vec![(int(0), int(1)), (rat(1, 2), rat(3, 2)), (int(1), int(1))]),
            ("c", vec![(int(0), int(-2)), (rat(1, 2), rat(-1, 2)), (int(1), int(1))]),
        ],
    )
}

fn polytope(vertices: Vec<Vec<i64>>, facets: Vec<(Vec<i64>, i64)>) -> LatticePolytope {
    let facets = facets.into_iter().map(|(a, b)| Facet { a, b }).collect();
    LatticePolytope::new(vertices, facets).expect("fixture is well formed")
}

fn unit(n: usize, i: usize, value: i64) -> Vec<i64> {
    (0..n).map(|j| if i == j { value } else { 0 }).collect()
}

/// The unit cube `[0,1]ⁿ`.
pub fn cube(n: usize) -> LatticePolytope {
    let vertices = (0..1u64 << n).map(|bits| (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as i64).collect()).collect();
    let facets = (0..n).flat_map(|i| [(unit(n, i, 1), 1), (unit(n, i, -1), 0)]).collect();
    polytope(vertices, facets)
}

/// `k·Δₙ = conv{0, k·e₁, …, k·eₙ}`.
pub fn dilated_simplex(k: i64, n: usize) -> LatticePolytope {
    let mut vertices = vec![vec![0; n]];
    vertices.extend((0..n).map(|i| unit(n, i, k)));
    let mut facets: Vec<(Vec<i64>, i64)> = (0..n).map(|i| (unit(n, i, -1), 0)).collect();
    facets.push((vec![1; n], k));
    polytope(vertices, facets)
}

/// The standard simplex `Δₙ`.
pub fn simplex(n: usize) -> LatticePolytope {
    dilated_simplex(1, n)
}

/// The segment `[0, length]` in `R¹`.
pub fn segment(length: i64) -> LatticePolytope {
    polytope(vec![vec![0], vec![length]], vec![(vec![1], length), (vec![-1], 0)])
}

/// A fixture resolved from its id.
#[derive(Clone, Debug)]
pub enum Fixture {
    Curve(TropicalCurve, CurveDivisor),
    Torus(TorusQuadraticDivisor),
    Polytope(LatticePolytope),
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`; run with --fixtures for the list")]
    Unknown(String),
    #[error("bad fixture arguments in `{0}`")]
    BadArguments(String),
}

/// Id patterns accepted by [`lookup`] with a short description.
pub const CATALOG: &[(&str, &str)] = &[
    ("elliptic:N", "circle of length 1 with f' rising from 0 to N (N != 0)"),
    ("tp1:N", "tropical line with the degree-N divisor"),
    ("star:P,Q", "vertex with P ascending and Q descending leaf directions"),
    ("theta", "theta graph with a degree-0 divisor"),
    ("diag:A,B,...", "torus R^n/Z^n with the diagonal quadratic divisor (also a lattice)"),
    ("cube:N", "unit cube [0,1]^N"),
    ("simplex:N", "standard simplex in R^N"),
    ("dilated-simplex:K,N", "K times the standard simplex in R^N"),
    ("segment:L", "segment [0, L]"),
];

fn numbers<T: std::str::FromStr>(id: &str, args: &str) -> Result<Vec<T>, FixtureError> {
    args.split(',')
        .map(|a| a.trim().parse::<T>().map_err(|_| FixtureError::BadArguments(id.into())))
        .collect()
}

fn exactly<T: Copy, const N: usize>(id: &str, values: Vec<T>) -> Result<[T; N], FixtureError> {
    values.try_into().map_err(|_| FixtureError::BadArguments(id.into()))
}

fn small(id: &str, n: usize, max: usize) -> Result<usize, FixtureError> {
    if (1..=max).contains(&n) {
        Ok(n)
    } else {
        Err(FixtureError::BadArguments(id.into()))
    }
}

/// Resolves ids such as `elliptic:3`, `diag:2,-1` or `cube:3`.
pub fn lookup(id: &str) -> Result<Fixture, FixtureError> {
    let (name, args) = id.split_once(':').unwrap_or((id, ""));
    let bad = || FixtureError::BadArguments(id.into());
    Ok(match name {
        "elliptic" => {
            let [n] = exactly(id, numbers::<i64>(id, args)?)?;
            if n == 0 || n.abs() > 1 << 20 {
                return Err(bad());
            }
            let (c, d) = elliptic(n);
            Fixture::Curve(c, d)
        }
        "tp1" => {
            let [n] = exactly(id, numbers::<i64>(id, args)?)?;
            if n.abs() > 1 << 20 {
                return Err(bad());
            }
            let (c, d) = tropical_line(n);
            Fixture::Curve(c, d)
        }
        "star" => {
            let [p, q] = exactly(id, numbers::<usize>(id, args)?)?;
            if p + q == 0 || p + q > 64 {
                return Err(bad());
            }
            let (c, d) = star(p, q);
            Fixture::Curve(c, d)
        }
        "theta" if args.is_empty() => Fixture::Curve(theta_curve(), theta_divisor()),
        "diag" => {
            let entries = numbers::<i64>(id, args)?;
            Fixture::Torus(TorusQuadraticDivisor::diagonal(&entries).map_err(|_| bad())?)
        }
        "cube" => {
            let [n] = exactly(id, numbers::<usize>(id, args)?)?;
            Fixture::Polytope(cube(small(id, n, 8)?))
        }
        "simplex" => {
            let [n] = exactly(id, numbers::<usize>(id, args)?)?;
            Fixture::Polytope(simplex(small(id, n, 8)?))
        }
        "dilated-simplex" => {
            let [k, n] = exactly(id, numbers::<i64>(id, args)?)?;
            if !(1..=1000).contains(&k) || !(1..=8).contains(&n) {
                return Err(bad());
            }
            Fixture::Polytope(dilated_simplex(k, n as usize))
        }
        "segment" => {
            let [l] = exactly(id, numbers::<i64>(id, args)?)?;
            if !(1..=1 << 20).contains(&l) {
                return Err(bad());
            }
            Fixture::Polytope(segment(l))
        }
        _ => return Err(FixtureError::Unknown(id.into())),
    })
}
