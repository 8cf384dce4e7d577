//! Quadratic divisors on integral affine tori `Rⁿ/Zⁿ`.
//!
//! A divisor class is represented by its quadratic normal form
//! `q(x) = ½ xᵀMx + cᵀx` with `M` symmetric integral and `c` rational. The
//! intersection set is `{x ∈ Rⁿ/Zⁿ : Mx + c ∈ Zⁿ}`, every point is a
//! nondegenerate critical point of index `n₋(M)`, and `χ(LMD) = det M`.
//!
//! Counting goes through the Smith normal form of `M`; the determinant is
//! computed separately by fraction-free elimination and the index by exact
//! symmetric `LDLᵀ`.

use crate::exact::{format_rational, serde_rational_vec, Rational, MAX_INPUT_MAGNITUDE};
use crate::graded::GradedModule;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

/// Upper bound on the number of points [`intersection_points`] will list.
pub const MAX_POINTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TorusError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("linear part is singular (det M = 0)")]
    Degenerate,
    #[error("lattice matrix is singular")]
    Singular,
    #[error("{0} intersection points exceed the listing limit {MAX_POINTS}")]
    TooManyPoints(BigInt),
    #[error("value {0} does not fit in 64 bits")]
    Overflow(BigInt),
}

fn schema(msg: impl Into<String>) -> TorusError {
    TorusError::Schema(msg.into())
}

fn check_square(n: usize, rows: &[Vec<i64>], what: &str) -> Result<(), TorusError> {
    if n == 0 {
        return Err(schema("dimension n must be at least 1"));
    }
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(schema(format!("{what} must be {n}×{n}")));
    }
    if rows.iter().flatten().any(|v| v.unsigned_abs() > MAX_INPUT_MAGNITUDE as u64) {
        return Err(schema(format!("{what} entries must have magnitude at most 2^53")));
    }
    Ok(())
}

pub(crate) fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

/// Smith normal form `U·A·V = diag(d₁, …)` with `U`, `V` unimodular and
/// `d₁ | d₂ | …` nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(rows: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= factor * s;
    }
}

fn col_axpy(rows: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    for r in rows.iter_mut() {
        let s = r[source].clone();
        r[target] -= factor * s;
    }
}

fn swap_cols(rows: &mut [Vec<BigInt>], a: usize, b: usize) {
    for r in rows.iter_mut() {
        r.swap(a, b);
    }
}

/// Smith normal form of an `m×n` integer matrix.
pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> SmithForm {
    let m = matrix.len();
    let n = matrix.first().map_or(0, Vec::len);
    let mut a = matrix.to_vec();
    let mut u = identity(m);
    let mut v = identity(n);

    'outer: for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else { break 'outer };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let stray = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match stray {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -x.clone();
            }
        }
    }
    let diagonal = (0..m.min(n)).map(|i| a[i][i].clone()).collect();
    SmithForm { diagonal, left: u, right: v }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = matrix.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Numbers of positive, negative and zero eigenvalues of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Sylvester inertia by exact symmetric `LDLᵀ`, using a `2×2` pivot
/// `[[0, b], [b, 0]]` (one positive, one negative eigenvalue) whenever the
/// remaining diagonal is zero.
pub fn inertia(matrix: &[Vec<i64>]) -> Inertia {
    let mut a: Vec<Vec<Rational>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
        .collect();
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    while !a.is_empty() {
        let k = a.len();
        if let Some(p) = (0..k).find(|&i| !a[i][i].is_zero()) {
            let d = a[p][p].clone();
            if d.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            let rest: Vec<usize> = (0..k).filter(|&i| i != p).collect();
            a = rest
                .iter()
                .map(|&i| rest.iter().map(|&j| &a[i][j] - &a[i][p] * &a[p][j] / &d).collect())
                .collect();
        } else if let Some((p, q)) =
            (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
        {
            out.positive += 1;
            out.negative += 1;
            let b = a[p][q].clone();
            let rest: Vec<usize> = (0..k).filter(|&i| i != p && i != q).collect();
            a = rest
                .iter()
                .map(|&i| {
                    rest.iter()
                        .map(|&j| &a[i][j] - (&a[i][p] * &a[q][j] + &a[i][q] * &a[p][j]) / &b)
                        .collect()
                })
                .collect();
        } else {
            out.zero += k;
            break;
        }
    }
    out
}

#[derive(Deserialize)]
struct TorusInput {
    n: usize,
    matrix: Vec<Vec<i64>>,
    #[serde(default, with = "serde_rational_vec")]
    shift: Vec<Rational>,
}

/// `dq_s(x) = Mx + c` on `Rⁿ/Zⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusQuadraticDivisor {
    n: usize,
    matrix: Vec<Vec<i64>>,
    #[serde(with = "serde_rational_vec")]
    shift: Vec<Rational>,
}

impl TorusQuadraticDivisor {
    /// An empty `shift` means `c = 0`.
    pub fn new(matrix: Vec<Vec<i64>>, shift: Vec<Rational>) -> Result<Self, TorusError> {
        let n = matrix.len();
        check_square(n, &matrix, "matrix")?;
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(schema(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let shift = if shift.is_empty() { vec![Rational::zero(); n] } else { shift };
        if shift.len() != n {
            return Err(schema(format!("shift must have {n} entries, found {}", shift.len())));
        }
        Ok(Self { n, matrix, shift })
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self, TorusError> {
        let n = entries.len();
        let matrix = (0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect();
        Self::new(matrix, Vec::new())
    }

    pub fn from_json(text: &str) -> Result<Self, TorusError> {
        let input: TorusInput = serde_json::from_str(text).map_err(|e| TorusError::Parse(e.to_string()))?;
        if input.matrix.len() != input.n {
            return Err(schema(format!("n = {} but the matrix has {} rows", input.n, input.matrix.len())));
        }
        Self::new(input.matrix, input.shift)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn shift(&self) -> &[Rational] {
        &self.shift
    }

    /// Divisor on the product torus: `M ⊕ M′`, `c ⊕ c′`.
    pub fn block_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut matrix = vec![vec![0; n]; n];
        for i in 0..self.n {
            matrix[i][..self.n].copy_from_slice(&self.matrix[i]);
        }
        for i in 0..other.n {
            matrix[self.n + i][self.n..].copy_from_slice(&other.matrix[i]);
        }
        let shift = self.shift.iter().chain(&other.shift).cloned().collect();
        Self { n, matrix, shift }
    }

    /// `(UᵀMU, Uᵀc)`, the same divisor in the lattice basis given by the columns of `U`.
    pub fn change_basis(&self, u: &[Vec<i64>]) -> Result<Self, TorusError> {
        check_square(self.n, u, "basis change")?;
        let n = self.n;
        let mut matrix = vec![vec![0i64; n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut sum = BigInt::zero();
                for k in 0..n {
                    for l in 0..n {
                        sum += BigInt::from(u[k][i]) * self.matrix[k][l] * u[l][j];
                    }
                }
                *entry = sum.to_i64().ok_or(TorusError::Overflow(sum))?;
            }
        }
        let shift = (0..n)
            .map(|i| (0..n).map(|k| &self.shift[k] * BigInt::from(u[k][i])).sum())
            .collect();
        Self::new(matrix, shift)
    }
}

/// `#(s₀ ∩ s)` or the degenerate marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionCount {
    Finite(BigInt),
    Degenerate,
}

impl Serialize for IntersectionCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            IntersectionCount::Finite(n) => match n.to_u64() {
                Some(v) => s.serialize_u64(v),
                None => s.serialize_str(&n.to_string()),
            },
            IntersectionCount::Degenerate => s.serialize_str("degenerate"),
        }
    }
}

/// Order of `Zⁿ/MZⁿ`, the product of the Smith invariant factors.
pub fn intersection_count(d: &TorusQuadraticDivisor) -> IntersectionCount {
    let snf = smith_normal_form(&to_big(&d.matrix));
    if snf.diagonal.iter().any(Zero::is_zero) {
        IntersectionCount::Degenerate
    } else {
        IntersectionCount::Finite(snf.diagonal.iter().product())
    }
}

fn fractional(x: Rational) -> Rational {
    &x - x.floor()
}

/// All `x ∈ [0, 1)ⁿ` with `Mx + c ∈ Zⁿ`, sorted lexicographically.
///
/// With `UMV = D` the condition becomes `Dy + Uc ∈ Zⁿ` for `x = Vy`, which
/// has `dᵢ` solutions modulo 1 in each coordinate.
pub fn intersection_points(d: &TorusQuadraticDivisor) -> Result<Vec<Vec<Rational>>, TorusError> {
    let snf = smith_normal_form(&to_big(&d.matrix));
    if snf.diagonal.iter().any(Zero::is_zero) {
        return Err(TorusError::Degenerate);
    }
    let total: BigInt = snf.diagonal.iter().product();
    if total > BigInt::from(MAX_POINTS) {
        return Err(TorusError::TooManyPoints(total));
    }
    let n = d.n;
    let uc: Vec<Rational> = (0..n)
        .map(|i| (0..n).map(|k| &d.shift[k] * &snf.left[i][k]).sum())
        .collect();
    let mut out = Vec::new();
    let mut k = vec![BigInt::zero(); n];
    loop {
        let y: Vec<Rational> = (0..n)
            .map(|i| (Rational::from_integer(k[i].clone()) - &uc[i]) / Rational::from_integer(snf.diagonal[i].clone()))
            .collect();
        let x: Vec<Rational> = (0..n)
            .map(|i| fractional((0..n).map(|j| &y[j] * &snf.right[i][j]).sum()))
            .collect();
        out.push(x);
        // odometer over k_i ∈ [0, d_i)
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
                return Ok(out);
            }
            k[i] += 1;
            if k[i] < snf.diagonal[i] {
                break;
            }
            k[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Morse index `n₋(M)` shared by every point of the intersection set.
pub fn morse_index(d: &TorusQuadraticDivisor) -> Result<usize, TorusError> {
    let inertia = inertia(&d.matrix);
    if inertia.zero > 0 {
        return Err(TorusError::Degenerate);
    }
    Ok(inertia.negative)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusLmdReport {
    /// `None` when the linear part is singular.
    pub count: Option<u64>,
    pub index: Option<usize>,
    pub lmd: GradedModule,
    pub euler: i64,
    /// `∫ c₁([s])ⁿ / n! = det M`.
    pub chern_volume: i64,
    pub degenerate: bool,
}

fn fit_i64(v: &BigInt) -> Result<i64, TorusError> {
    v.to_i64().ok_or_else(|| TorusError::Overflow(v.clone()))
}

/// Local Morse data of the quadratic divisor.
///
/// Nondegenerate: `free(n₋(M), #(s₀ ∩ s))`. Degenerate: a small generic
/// translate of the section misses the zero section entirely, so the data
/// is zero.
pub fn lmd(d: &TorusQuadraticDivisor) -> Result<TorusLmdReport, TorusError> {
    let det = fit_i64(&determinant(&to_big(&d.matrix)))?;
    match intersection_count(d) {
        IntersectionCount::Degenerate => Ok(TorusLmdReport {
            count: None,
            index: None,
            lmd: GradedModule::zero(),
            euler: 0,
            chern_volume: det,
            degenerate: true,
        }),
        IntersectionCount::Finite(count) => {
            let count = fit_i64(&count)?;
            let index = morse_index(d)?;
            let lmd = GradedModule::free(index as i64, count as u64);
            Ok(TorusLmdReport {
                count: Some(count as u64),
                index: Some(index),
                euler: lmd.euler(),
                lmd,
                chern_volume: det,
                degenerate: false,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HesseCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
}

/// Checks `χ(LMD) = det M`; the two sides come from the Smith form with
/// `LDLᵀ` signs and from Bareiss elimination respectively.
pub fn verify_hesse_rr(d: &TorusQuadraticDivisor) -> Result<HesseCheck, TorusError> {
    let report = lmd(d)?;
    let rhs = report.chern_volume;
    Ok(HesseCheck { lhs: report.euler, rhs, ok: report.euler == rhs })
}

#[derive(Deserialize)]
struct LatticeInput {
    n: usize,
    lattice: Vec<Vec<i64>>,
}

/// Integer matrix whose columns span the lattice `Λ ⊆ Zⁿ` of `B = Rⁿ/Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    n: usize,
    lattice: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(lattice: Vec<Vec<i64>>) -> Result<Self, TorusError> {
        let n = lattice.len();
        check_square(n, &lattice, "lattice")?;
        Ok(Self { n, lattice })
    }

    pub fn from_json(text: &str) -> Result<Self, TorusError> {
        let input: LatticeInput = serde_json::from_str(text).map_err(|e| TorusError::Parse(e.to_string()))?;
        if input.lattice.len() != input.n {
            return Err(schema(format!("n = {} but the lattice has {} rows", input.n, input.lattice.len())));
        }
        Self::new(input.lattice)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.lattice
    }
}

/// `#B(Z) = #(Zⁿ/LZⁿ) = vol(B)`, from the Smith invariant factors of `L`.
pub fn bohr_sommerfeld_count(l: &Lattice) -> Result<BigInt, TorusError> {
    let snf = smith_normal_form(&to_big(&l.lattice));
    if snf.diagonal.iter().any(Zero::is_zero) {
        return Err(TorusError::Singular);
    }
    Ok(snf.diagonal.iter().product())
}

/// Label of a torus point, e.g. `(1/2,0)`.
pub fn point_label(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}
