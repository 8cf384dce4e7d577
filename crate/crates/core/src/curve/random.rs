//! Seeded random curves and permissible divisors for property runs.

use super::{CurveDivisor, CurveError, Edge, End, Profile, TropicalCurve, Vertex};
use crate::exact::{int, rat, Rational};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomCurveParams {
    /// First Betti number of the result.
    pub genus: usize,
    /// Number of unbounded leaves.
    pub leaves: usize,
    /// Upper bound on the edge count, subdivisions included.
    pub max_edges: usize,
}

impl Default for RandomCurveParams {
    fn default() -> Self {
        Self { genus: 2, leaves: 1, max_edges: 12 }
    }
}

fn random_length(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(1..=8), rng.random_range(1..=4))
}

/// A connected curve of exactly the requested genus and leaf count.
///
/// A random tree on one to three core vertices receives `genus` extra edges
/// (loops and parallel edges allowed), then the leaves, then random
/// subdivisions by 2-valent vertices while the edge budget lasts. Edge
/// orientations and lengths are random.
pub fn random_curve(params: &RandomCurveParams, seed: u64) -> Result<TropicalCurve, CurveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_core = if params.genus == 0 && params.leaves == 0 { 2 } else { 1 };
    let core = rng.random_range(min_core..=3usize.max(min_core));
    let base_edges = core - 1 + params.genus + params.leaves;
    if base_edges > params.max_edges {
        return Err(CurveError::Unsupported(format!(
            "genus {} with {} leaves needs at least {base_edges} edges, budget is {}",
            params.genus, params.leaves, params.max_edges
        )));
    }

    let mut vertices: Vec<Vertex> =
        (0..core).map(|i| Vertex { id: format!("v{i}"), at_infinity: false }).collect();
    // (tail, head) as vertex indices
    let mut links: Vec<(usize, usize)> = Vec::new();
    for i in 1..core {
        links.push((rng.random_range(0..i), i));
    }
    for _ in 0..params.genus {
        links.push((rng.random_range(0..core), rng.random_range(0..core)));
    }
    for i in 0..params.leaves {
        vertices.push(Vertex { id: format!("inf{i}"), at_infinity: true });
        links.push((rng.random_range(0..core), vertices.len() - 1));
    }
    let subdivisions = rng.random_range(0..=params.max_edges - base_edges).min(4);
    for i in 0..subdivisions {
        let k = rng.random_range(0..links.len());
        let (t, h) = links[k];
        vertices.push(Vertex { id: format!("m{i}"), at_infinity: false });
        let m = vertices.len() - 1;
        links[k] = (t, m);
        links.push((m, h));
    }
    links.shuffle(&mut rng);

    let edges = links
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let (t, h) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            Edge {
                id: format!("e{i}"),
                tail: vertices[t].id.clone(),
                head: vertices[h].id.clone(),
                length: random_length(&mut rng),
            }
        })
        .collect();
    TropicalCurve::new(vertices, edges)
}

/// Integers in `[-bound, bound]` summing to zero.
fn zero_sum(rng: &mut ChaCha8Rng, count: usize, bound: i64) -> Vec<i64> {
    let mut values: Vec<i64> = (0..count).map(|_| rng.random_range(-bound..=bound)).collect();
    let mut sum: i64 = values.iter().sum();
    while sum != 0 {
        let step = -sum.signum();
        let movable: Vec<usize> =
            (0..count).filter(|&i| (values[i] + step).abs() <= bound).collect();
        let i = movable[rng.random_range(0..movable.len())];
        values[i] += step;
        sum += step;
    }
    values
}

fn random_value(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let den = rng.random_range(1..=3i64);
    rat(rng.random_range(-bound * den..=bound * den), den)
}

/// A deterministic permissible divisor on `curve`.
///
/// Vertices of valence other than two get integer outgoing slopes in
/// `[-max_level, max_level]` summing to zero; leaves get `0`. At a 2-valent
/// vertex the first slope is a random rational and the second is chosen so
/// the two sum to a random integer in `{-1, 0, 1}`. Each edge receives up to
/// `breakpoints_per_edge` random interior breakpoints, and a constant-integer
/// segment is broken by a midpoint lifted by `1/2`.
pub fn random_divisor(
    curve: &TropicalCurve,
    seed: u64,
    max_level: i64,
    breakpoints_per_edge: usize,
) -> Result<CurveDivisor, CurveError> {
    if max_level < 0 {
        return Err(CurveError::Unsupported(format!("max_level must be non-negative, got {max_level}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge_count = curve.edges().len();
    let mut tail_value = vec![Rational::zero(); edge_count];
    let mut head_value = vec![Rational::zero(); edge_count];
    let mut set = |edge: usize, end: End, slope: Rational| match end {
        End::Tail => tail_value[edge] = slope,
        End::Head => head_value[edge] = -slope,
    };

    for (v, vertex) in curve.vertices().iter().enumerate() {
        let incident = curve.incident(v);
        if vertex.at_infinity {
            set(incident[0].edge, incident[0].end, Rational::zero());
        } else if incident.len() == 2 {
            let first = random_value(&mut rng, max_level);
            let jump = int(rng.random_range(-1..=1));
            set(incident[1].edge, incident[1].end, jump - &first);
            set(incident[0].edge, incident[0].end, first);
        } else {
            let slopes = zero_sum(&mut rng, incident.len(), max_level);
            for (he, s) in incident.iter().zip(slopes) {
                set(he.edge, he.end, int(s));
            }
        }
    }

    let mut profiles = BTreeMap::new();
    for (e, edge) in curve.edges().iter().enumerate() {
        let count = rng.random_range(0..=breakpoints_per_edge);
        let slots = 4 * (count as i64 + 1);
        let mut numerators: Vec<i64> = (1..slots).collect();
        numerators.shuffle(&mut rng);
        let mut chosen: Vec<i64> = numerators.into_iter().take(count).collect();
        chosen.sort_unstable();

        let mut pts = vec![(Rational::zero(), tail_value[e].clone())];
        for k in chosen {
            pts.push((&edge.length * rat(k, slots), random_value(&mut rng, max_level)));
        }
        pts.push((edge.length.clone(), head_value[e].clone()));

        let mut fixed = vec![pts[0].clone()];
        for w in pts.windows(2) {
            if w[0].1 == w[1].1 && w[0].1.is_integer() {
                let mid = (&w[0].0 + &w[1].0) / int(2);
                fixed.push((mid, &w[0].1 + rat(1, 2)));
            }
            fixed.push(w[1].clone());
        }
        profiles.insert(edge.id.clone(), Profile::from_pairs(fixed));
    }
    Ok(CurveDivisor::new(format!("random-{seed}"), profiles))
}
