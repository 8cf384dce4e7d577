//! Lattice polytopes, the log-sum-exp potential `f_P` and its moment map,
//! Ehrhart polynomials, and the local Morse data of `±s_P`.
//!
//! A polytope is loaded with both its vertices and its facet inequalities
//! `a·x ≤ b`; the two descriptions are checked against each other on the
//! lattice points of the bounding box instead of computing hulls.

use crate::exact::{format_rational, Rational};
use crate::graded::GradedModule;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Upper bound on the number of box points scanned by one count.
pub const MAX_SCAN: u64 = 20_000_000;

/// Upper bound on vertex subsets tried by the hull cross-check.
const MAX_SUBSETS: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("vertex and facet descriptions disagree: {0}")]
    Inconsistent(String),
    #[error("polytope is not full-dimensional (dimension {dim} in R^{n})")]
    NotFullDimensional { dim: usize, n: usize },
    #[error("scan of {0} box points exceeds the limit {MAX_SCAN}")]
    TooLarge(String),
    #[error("dilation factor must be non-negative, got {0}")]
    BadDilation(i64),
}

fn schema(msg: impl Into<String>) -> ToricError {
    ToricError::Schema(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub a: Vec<i64>,
    pub b: i64,
}

impl Facet {
    fn value(&self, x: &[i64]) -> i128 {
        self.a.iter().zip(x).map(|(&a, &x)| a as i128 * x as i128).sum()
    }
}

#[derive(Deserialize)]
struct PolytopeInput {
    n: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePolytope {
    n: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    #[serde(skip)]
    dim: usize,
}

fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect()).collect()
}

/// Row echelon form in place; returns the rank.
fn echelon(a: &mut [Vec<Rational>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                let pivot_row = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank(rows: &[Vec<i64>]) -> usize {
    echelon(&mut to_rational_rows(rows))
}

fn affine_dim(points: &[&Vec<i64>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((first, rest)) => {
            let diffs: Vec<Vec<i64>> =
                rest.iter().map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect()).collect();
            rank(&diffs)
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut out: u64 = 1;
    for i in 0..k.min(n.saturating_sub(k)) {
        out = out.saturating_mul(n - i) / (i + 1);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Whether `p` lies in the simplex spanned by `simplex` (affinely independent).
fn in_simplex(simplex: &[&Vec<i64>], p: &[i64]) -> bool {
    let n = p.len();
    let k = simplex.len();
    // columns: [v_i; 1], augmented with [p; 1]
    let mut rows: Vec<Vec<Rational>> = (0..=n)
        .map(|r| {
            let mut row: Vec<Rational> = simplex
                .iter()
                .map(|v| Rational::from_integer(BigInt::from(if r < n { v[r] } else { 1 })))
                .collect();
            row.push(Rational::from_integer(BigInt::from(if r < n { p[r] } else { 1 })));
            row
        })
        .collect();
    let rank = echelon(&mut rows);
    // a pivot in the augmented column means the system is inconsistent
    if rows[..rank].iter().any(|r| r[..k].iter().all(Zero::is_zero)) {
        return false;
    }
    rows[..rank].iter().all(|r| {
        let c = r.iter().position(|x| !x.is_zero()).expect("nonzero pivot row");
        !(&r[k] / &r[c]).is_negative()
    })
}

/// Lattice points of a box in lexicographic order, by odometer.
fn box_points(lo: &[i64], hi: &[i64]) -> Result<Vec<Vec<i64>>, ToricError> {
    let mut size: u64 = 1;
    for (l, h) in lo.iter().zip(hi) {
        if h < l {
            return Ok(Vec::new());
        }
        size = size.saturating_mul((h - l + 1) as u64);
    }
    if size > MAX_SCAN {
        return Err(ToricError::TooLarge(size.to_string()));
    }
    let n = lo.len();
    let mut out = Vec::with_capacity(size as usize);
    let mut x = lo.to_vec();
    loop {
        out.push(x.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
        }
    }
}

impl LatticePolytope {
    pub fn new(vertices: Vec<Vec<i64>>, facets: Vec<Facet>) -> Result<Self, ToricError> {
        let n = vertices.first().map(Vec::len).ok_or_else(|| schema("polytope needs at least one vertex"))?;
        if n == 0 {
            return Err(schema("ambient dimension must be at least 1"));
        }
        if vertices.iter().any(|v| v.len() != n) || facets.iter().any(|f| f.a.len() != n) {
            return Err(schema(format!("all vertices and facet normals must have {n} coordinates")));
        }
        let bound = 1i64 << 20;
        if vertices.iter().flatten().chain(facets.iter().flat_map(|f| f.a.iter().chain([&f.b]))).any(|v| v.abs() > bound) {
            return Err(schema("coordinates and facet data must have magnitude at most 2^20"));
        }
        let mut sorted = vertices.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(schema("duplicate vertex"));
        }
        let refs: Vec<&Vec<i64>> = vertices.iter().collect();
        let dim = affine_dim(&refs);
        let poly = Self { n, vertices, facets, dim };
        poly.cross_validate()?;
        Ok(poly)
    }

    pub fn from_json(text: &str) -> Result<Self, ToricError> {
        let input: PolytopeInput = serde_json::from_str(text).map_err(|e| ToricError::Parse(e.to_string()))?;
        if input.vertices.iter().any(|v| v.len() != input.n) {
            return Err(schema(format!("n = {} does not match the vertex coordinates", input.n)));
        }
        Self::new(input.vertices, input.facets)
    }

    fn cross_validate(&self) -> Result<(), ToricError> {
        for (i, v) in self.vertices.iter().enumerate() {
            if let Some(f) = self.facets.iter().position(|f| f.value(v) > f.b as i128) {
                return Err(ToricError::Inconsistent(format!("vertex {i} violates facet {f}")));
            }
        }
        for (j, f) in self.facets.iter().enumerate() {
            let tight: Vec<&Vec<i64>> = self.vertices.iter().filter(|v| f.value(v) == f.b as i128).collect();
            if tight.is_empty() {
                return Err(ToricError::Inconsistent(format!("facet {j} is not tight at any vertex")));
            }
            if self.dim == self.n && affine_dim(&tight) + 1 != self.n {
                return Err(ToricError::Inconsistent(format!("facet {j} does not cut out a codimension-one face")));
            }
        }
        if self.dim == self.n {
            for (i, v) in self.vertices.iter().enumerate() {
                if self.facets.iter().filter(|f| f.value(v) == f.b as i128).count() < self.n {
                    return Err(ToricError::Inconsistent(format!("vertex {i} lies on fewer than {} facets", self.n)));
                }
            }
        }

        let subsets = binomial(self.vertices.len() as u64, self.dim as u64 + 1);
        if subsets > MAX_SUBSETS {
            return Err(ToricError::TooLarge(format!("{subsets} vertex subsets")));
        }
        let simplices: Vec<Vec<&Vec<i64>>> = combinations(self.vertices.len(), self.dim + 1)
            .into_iter()
            .map(|c| c.into_iter().map(|i| &self.vertices[i]).collect::<Vec<_>>())
            .filter(|s| affine_dim(s) == self.dim)
            .collect();
        let (lo, hi) = self.bounding_box(1);
        let lo: Vec<i64> = lo.iter().map(|v| v - 1).collect();
        let hi: Vec<i64> = hi.iter().map(|v| v + 1).collect();
        for p in box_points(&lo, &hi)? {
            if self.contains(&p, 1) && !simplices.iter().any(|s| in_simplex(s, &p)) {
                return Err(ToricError::Inconsistent(format!(
                    "lattice point {p:?} satisfies the facets but is outside the vertex hull"
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Dimension of the affine hull of the vertices.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.n
    }

    fn require_full(&self) -> Result<(), ToricError> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(ToricError::NotFullDimensional { dim: self.dim, n: self.n })
        }
    }

    fn bounding_box(&self, k: i64) -> (Vec<i64>, Vec<i64>) {
        let lo = (0..self.n).map(|i| k * self.vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi = (0..self.n).map(|i| k * self.vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        (lo, hi)
    }

    fn contains(&self, x: &[i64], k: i64) -> bool {
        self.facets.iter().all(|f| f.value(x) <= k as i128 * f.b as i128)
    }

    fn contains_strictly(&self, x: &[i64], k: i64) -> bool {
        self.facets.iter().all(|f| f.value(x) < k as i128 * f.b as i128)
    }

    /// Integer points of `kP`, sorted lexicographically.
    pub fn lattice_points(&self, k: i64) -> Result<Vec<Vec<i64>>, ToricError> {
        if k < 0 {
            return Err(ToricError::BadDilation(k));
        }
        let (lo, hi) = self.bounding_box(k);
        Ok(box_points(&lo, &hi)?.into_iter().filter(|x| self.contains(x, k)).collect())
    }

    /// Lattice points of the interior of `kP`, sorted lexicographically.
    pub fn interior_lattice_points(&self, k: i64) -> Result<Vec<Vec<i64>>, ToricError> {
        self.require_full()?;
        if k < 0 {
            return Err(ToricError::BadDilation(k));
        }
        let (lo, hi) = self.bounding_box(k);
        Ok(box_points(&lo, &hi)?.into_iter().filter(|x| self.contains_strictly(x, k)).collect())
    }

    /// `kP` with the same facet normals.
    pub fn dilate(&self, k: i64) -> Result<Self, ToricError> {
        if k <= 0 {
            return Err(ToricError::BadDilation(k));
        }
        let vertices = self.vertices.iter().map(|v| v.iter().map(|x| x * k).collect()).collect();
        let facets = self.facets.iter().map(|f| Facet { a: f.a.clone(), b: f.b * k }).collect();
        Self::new(vertices, facets)
    }
}

/// Polynomial with exact rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    pub coefficients: Vec<Rational>,
}

impl EhrhartPolynomial {
    pub fn eval(&self, k: i64) -> Rational {
        let k = Rational::from_integer(BigInt::from(k));
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * &k + c)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(format_rational).collect()
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Lagrange interpolation through `(i, values[i])`, `i = 0, 1, …`.
fn interpolate(values: &[Rational]) -> Vec<Rational> {
    let m = values.len();
    let mut out = vec![Rational::zero(); m];
    for (i, y) in values.iter().enumerate() {
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for j in (0..m).filter(|&j| j != i) {
            basis = poly_mul(&basis, &[Rational::from_integer(BigInt::from(-(j as i64))), Rational::one()]);
            denom *= Rational::from_integer(BigInt::from(i as i64 - j as i64));
        }
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += y * b / &denom;
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// `Ehr_P`, interpolated exactly through the counts at `k = 0, …, n`.
pub fn ehrhart(p: &LatticePolytope) -> Result<EhrhartPolynomial, ToricError> {
    let mut values = vec![Rational::one()];
    for k in 1..=p.n as i64 {
        values.push(Rational::from_integer(BigInt::from(p.lattice_points(k)?.len())));
    }
    Ok(EhrhartPolynomial { coefficients: interpolate(&values) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReciprocityRow {
    pub k: i64,
    /// `(−1)ⁿ · Ehr_P(−k)`.
    pub signed_value: String,
    pub interior_count: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReciprocityReport {
    pub rows: Vec<ReciprocityRow>,
    pub ok: bool,
}

/// Checks `(−1)ⁿ Ehr_P(−k) = #(int(kP) ∩ Zⁿ)` for `k = 1, …, kmax`.
pub fn verify_reciprocity(p: &LatticePolytope, kmax: i64) -> Result<ReciprocityReport, ToricError> {
    p.require_full()?;
    let ehr = ehrhart(p)?;
    let sign = if p.n % 2 == 0 { Rational::one() } else { -Rational::one() };
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let signed = &sign * ehr.eval(-k);
        let interior = p.interior_lattice_points(k)?.len();
        let ok = signed == Rational::from_integer(BigInt::from(interior));
        rows.push(ReciprocityRow { k, signed_value: format_rational(&signed), interior_count: interior, ok });
    }
    let ok = rows.iter().all(|r| r.ok);
    Ok(ReciprocityReport { rows, ok })
}

/// `f_P(x) = log Σ_{m ∈ P∩Zⁿ} exp⟨m, x⟩` with all coefficients `a_u = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogPolynomial {
    pub exponents: Vec<Vec<i64>>,
}

/// The potential of `P`, with exponent set `P ∩ Zⁿ`.
pub fn potential(p: &LatticePolytope) -> Result<LogPolynomial, ToricError> {
    let exponents = p.lattice_points(1)?;
    if exponents.is_empty() {
        return Err(schema("polytope has no lattice points"));
    }
    Ok(LogPolynomial { exponents })
}

impl LogPolynomial {
    /// `(max_m ⟨m,x⟩, softmax weights)`.
    fn weights(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let dots: Vec<f64> =
            self.exponents.iter().map(|m| m.iter().zip(x).map(|(&a, b)| a as f64 * b).sum()).collect();
        let top = dots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = dots.iter().map(|d| (d - top).exp()).collect();
        let total: f64 = raw.iter().sum();
        (top + total.ln(), raw.into_iter().map(|w| w / total).collect())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.weights(x).0
    }

    /// `∇f_P(x) = Σ w_m m`.
    pub fn moment_map(&self, x: &[f64]) -> Vec<f64> {
        let (_, w) = self.weights(x);
        let n = x.len();
        (0..n).map(|i| self.exponents.iter().zip(&w).map(|(m, w)| w * m[i] as f64).sum()).collect()
    }

    /// `∇²f_P(x) = Σ w_m (m − μ)(m − μ)ᵀ`.
    pub fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let (_, w) = self.weights(x);
        let mu = self.moment_map(x);
        let n = x.len();
        let mut h = vec![vec![0.0; n]; n];
        for (m, w) in self.exponents.iter().zip(&w) {
            let d: Vec<f64> = (0..n).map(|i| m[i] as f64 - mu[i]).collect();
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += w * d[i] * d[j];
                }
            }
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricLmd {
    pub sign: i8,
    pub lmd: GradedModule,
    pub euler: i64,
    pub lattice_count: usize,
    pub interior_count: usize,
    pub boundary_count: usize,
}

/// Local Morse data of `s_P` (`sign = 1`) or `−s_P` (`sign = −1`) on `X_P`.
///
/// For `+s_P` every lattice point of `P` is a local minimum and contributes
/// `Z` in degree 0. For `−s_P` interior lattice points are local maxima and
/// contribute `Z` in degree `n`; at a boundary point the sublevel set is a
/// contractible punctured neighbourhood, so it contributes nothing.
pub fn toric_lmd(p: &LatticePolytope, sign: i8) -> Result<ToricLmd, ToricError> {
    p.require_full()?;
    if sign != 1 && sign != -1 {
        return Err(schema(format!("sign must be +1 or -1, got {sign}")));
    }
    let lattice_count = p.lattice_points(1)?.len();
    let interior_count = p.interior_lattice_points(1)?.len();
    let lmd = if sign == 1 {
        GradedModule::free(0, lattice_count as u64)
    } else {
        GradedModule::free(p.n as i64, interior_count as u64)
    };
    Ok(ToricLmd {
        sign,
        euler: lmd.euler(),
        lmd,
        lattice_count,
        interior_count,
        boundary_count: lattice_count - interior_count,
    })
}

fn det_i64(rows: &[Vec<i64>]) -> BigInt {
    crate::torus::determinant(&crate::torus::to_big(rows))
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, x| g.gcd(x));
    v.into_iter().map(|x| x / g).collect()
}

/// Whether every vertex is simple and its primitive edge directions form a
/// basis of `Zⁿ`.
///
/// Two vertices span an edge when the facets tight at both have normals of
/// rank `n − 1`.
pub fn delzant_check(p: &LatticePolytope) -> Result<bool, ToricError> {
    p.require_full()?;
    let tight: Vec<Vec<usize>> = p
        .vertices
        .iter()
        .map(|v| (0..p.facets.len()).filter(|&f| p.facets[f].value(v) == p.facets[f].b as i128).collect())
        .collect();
    for (i, v) in p.vertices.iter().enumerate() {
        let mut directions = Vec::new();
        for (j, w) in p.vertices.iter().enumerate() {
            if i == j {
                continue;
            }
            let common: Vec<Vec<i64>> =
                tight[i].iter().filter(|f| tight[j].contains(f)).map(|&f| p.facets[f].a.clone()).collect();
            if rank(&common) + 1 == p.n {
                directions.push(primitive(w.iter().zip(v).map(|(a, b)| a - b).collect()));
            }
        }
        if directions.len() != p.n || !det_i64(&directions).abs().is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}
