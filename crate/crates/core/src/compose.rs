//! Products, covers and symmetric powers of pointwise local Morse data.
//!
//! Everything here works on the per-point modules produced by [`curve`],
//! [`torus`] and [`toric`]: the data of a sum of potentials on a product is
//! the tensor product of the factors' data at each pair of points.
//!
//! [`curve`]: crate::curve
//! [`torus`]: crate::torus
//! [`toric`]: crate::toric

use crate::curve::{self, chi_top, cyclic_cover, degree, CurveDivisor, CurveError, TropicalCurve};
use crate::graded::{sym_euler, GradedModule};
use crate::toric::{self, LatticePolytope, ToricError};
use crate::torus::{self, point_label, TorusError, TorusQuadraticDivisor};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error)]
pub enum ComposeError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("point set states euler {stated} but its points sum to {actual}")]
    EulerMismatch { stated: i64, actual: i64 },
    #[error("cover degree must be positive")]
    ZeroDegree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledPoint {
    pub label: String,
    pub lmd: GradedModule,
}

/// Per-point local Morse data with unique labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexedPointSet {
    points: Vec<LabelledPoint>,
}

#[derive(Serialize, Deserialize)]
struct PointSetSchema {
    points: Vec<LabelledPoint>,
    euler: i64,
}

impl Serialize for IndexedPointSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointSetSchema { points: self.points.clone(), euler: self.euler() }.serialize(s)
    }
}

impl IndexedPointSet {
    pub fn new(points: Vec<LabelledPoint>) -> Result<Self, ComposeError> {
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.label.as_str()) {
                return Err(ComposeError::DuplicateLabel(p.label.clone()));
            }
        }
        Ok(Self { points })
    }

    /// Reads `{"points":[{"label":…,"lmd":[[deg,rank]…]}…],"euler":int}`.
    pub fn from_json(text: &str) -> Result<Self, ComposeError> {
        let schema: PointSetSchema = serde_json::from_str(text).map_err(|e| ComposeError::Parse(e.to_string()))?;
        let set = Self::new(schema.points)?;
        if set.euler() != schema.euler {
            return Err(ComposeError::EulerMismatch { stated: schema.euler, actual: set.euler() });
        }
        Ok(set)
    }

    pub fn points(&self) -> &[LabelledPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn euler(&self) -> i64 {
        self.points.iter().map(|p| p.lmd.euler()).sum()
    }

    /// The direct sum of all point modules.
    pub fn total(&self) -> GradedModule {
        self.points.iter().map(|p| &p.lmd).sum()
    }

    pub fn from_curve(curve: &TropicalCurve, div: &CurveDivisor) -> Result<Self, ComposeError> {
        let points = curve::intersection_points(curve, div)?
            .iter()
            .map(|p| LabelledPoint { label: p.location.to_string(), lmd: p.local_lmd() })
            .collect();
        Self::new(points)
    }

    /// Every point carries `Z` in degree `n₋(M)`; a degenerate divisor gives
    /// the empty set.
    pub fn from_torus(d: &TorusQuadraticDivisor) -> Result<Self, ComposeError> {
        let points = match torus::morse_index(d) {
            Err(TorusError::Degenerate) => Vec::new(),
            Err(e) => return Err(e.into()),
            Ok(index) => torus::intersection_points(d)?
                .iter()
                .map(|x| LabelledPoint { label: point_label(x), lmd: GradedModule::free(index as i64, 1) })
                .collect(),
        };
        Self::new(points)
    }

    /// Lattice points of `P` with the data of `s_P` (`sign = 1`) or `−s_P`.
    pub fn from_toric(p: &LatticePolytope, sign: i8) -> Result<Self, ComposeError> {
        toric::toric_lmd(p, sign)?;
        let interior: BTreeSet<Vec<i64>> = p.interior_lattice_points(1)?.into_iter().collect();
        let points = p
            .lattice_points(1)?
            .into_iter()
            .map(|m| {
                let lmd = match (sign, interior.contains(&m)) {
                    (1, _) => GradedModule::free(0, 1),
                    (_, true) => GradedModule::free(p.n() as i64, 1),
                    (_, false) => GradedModule::zero(),
                };
                let coords: Vec<String> = m.iter().map(i64::to_string).collect();
                LabelledPoint { label: format!("({})", coords.join(",")), lmd }
            })
            .collect();
        Self::new(points)
    }
}

/// One point per pair, labelled by the JSON pair of labels, with the tensor
/// product of the two modules.
pub fn kunneth(a: &IndexedPointSet, b: &IndexedPointSet) -> IndexedPointSet {
    let mut points = Vec::with_capacity(a.len() * b.len());
    for p in &a.points {
        for q in &b.points {
            let label = serde_json::to_string(&[&p.label, &q.label]).expect("strings serialize");
            points.push(LabelledPoint { label, lmd: p.lmd.tensor(&q.lmd) });
        }
    }
    IndexedPointSet { points }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub euler: i64,
    /// `deg + χ_top` of each factor.
    pub factors: [i64; 2],
    pub ok: bool,
}

/// Checks `χ(LMD(C₁ × C₂)) = (deg₁ + χ_top,1)(deg₂ + χ_top,2)`; the right side
/// uses only degrees and cell counts.
pub fn verify_product_rr(
    curve1: &TropicalCurve,
    div1: &CurveDivisor,
    curve2: &TropicalCurve,
    div2: &CurveDivisor,
) -> Result<ProductCheck, ComposeError> {
    let product = kunneth(&IndexedPointSet::from_curve(curve1, div1)?, &IndexedPointSet::from_curve(curve2, div2)?);
    let factors = [degree(curve1, div1)? + chi_top(curve1), degree(curve2, div2)? + chi_top(curve2)];
    let euler = product.euler();
    Ok(ProductCheck { euler, factors, ok: euler == factors[0] * factors[1] })
}

/// `d` disjoint copies; copy `i` of label `l` is `i:l`.
pub fn etale_disjoint(points: &IndexedPointSet, d: usize) -> Result<IndexedPointSet, ComposeError> {
    if d == 0 {
        return Err(ComposeError::ZeroDegree);
    }
    let points = (0..d)
        .flat_map(|i| points.points.iter().map(move |p| LabelledPoint { label: format!("{i}:{}", p.label), lmd: p.lmd.clone() }))
        .collect();
    Ok(IndexedPointSet { points })
}

/// Points of the connected `d`-fold cyclic cover of a circle, recomputed on
/// the cover from the pulled-back profile.
pub fn etale_cyclic(curve: &TropicalCurve, div: &CurveDivisor, d: usize) -> Result<IndexedPointSet, ComposeError> {
    if d == 0 {
        return Err(ComposeError::ZeroDegree);
    }
    let (cover, pulled) = cyclic_cover(curve, div, d)?;
    IndexedPointSet::from_curve(&cover, &pulled)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EtaleCheck {
    pub degree: usize,
    pub base_euler: i64,
    pub cover_euler: i64,
    pub ok: bool,
}

/// Checks `χ(cover) = d · χ(base)`.
pub fn verify_etale(base: &IndexedPointSet, cover: &IndexedPointSet, d: usize) -> EtaleCheck {
    let (base_euler, cover_euler) = (base.euler(), cover.euler());
    EtaleCheck { degree: d, base_euler, cover_euler, ok: cover_euler == d as i64 * base_euler }
}

fn serialize_big<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(small) => s.serialize_i64(small),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymCheck {
    pub n: u64,
    pub euler: i64,
    #[serde(serialize_with = "serialize_big")]
    pub formula: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub oracle: BigInt,
    pub ok: bool,
}

/// Coefficient of `tⁿ` in `Π_p (1 − t)^(−χ_p)`, by exact series products.
pub fn sym_oracle(points: &IndexedPointSet, n: u64) -> BigInt {
    let len = n as usize;
    let mut series = vec![BigInt::zero(); len + 1];
    series[0] = BigInt::one();
    for p in &points.points {
        let e = p.lmd.euler();
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                for k in 1..=len {
                    let prev = series[k - 1].clone();
                    series[k] += prev;
                }
            } else {
                for k in (1..=len).rev() {
                    let prev = series[k - 1].clone();
                    series[k] -= prev;
                }
            }
        }
    }
    series.swap_remove(len)
}

/// Compares the symmetric-power Euler number `C(n + χ − 1, n)` with the
/// pointwise series product.
pub fn verify_sym(points: &IndexedPointSet, n: u64) -> SymCheck {
    let euler = points.euler();
    let formula = sym_euler(euler, n);
    let oracle = sym_oracle(points, n);
    SymCheck { n, euler, ok: formula == oracle, formula, oracle }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn plus_points(count: usize) -> IndexedPointSet {
        IndexedPointSet::new(
            (0..count).map(|i| LabelledPoint { label: format!("p{i}"), lmd: GradedModule::free(0, 1) }).collect(),
        )
        .unwrap()
    }

    /// Multisets of size `n` from `k` points: `C(n + k − 1, n)`, by counting
    /// non-decreasing index sequences.
    fn multisets(k: usize, n: usize) -> u64 {
        fn go(start: usize, k: usize, left: usize) -> u64 {
            if left == 0 {
                return 1;
            }
            (start..k).map(|i| go(i, k, left - 1)).sum()
        }
        go(0, k, n)
    }

    #[test]
    fn product_of_elliptic_curves() {
        let (c2, d2) = fixtures::elliptic(2);
        let (c3, d3) = fixtures::elliptic(3);
        let product = kunneth(&IndexedPointSet::from_curve(&c2, &d2).unwrap(), &IndexedPointSet::from_curve(&c3, &d3).unwrap());
        assert_eq!(product.len(), 6);
        assert!(product.points().iter().all(|p| p.lmd == GradedModule::free(0, 1)));
        assert_eq!(product.euler(), 6);
        assert!(verify_product_rr(&c2, &d2, &c3, &d3).unwrap().ok);
    }

    #[test]
    fn product_with_the_empty_set_is_empty() {
        let empty = IndexedPointSet::default();
        let product = kunneth(&plus_points(3), &empty);
        assert!(product.is_empty());
        assert_eq!(product.euler(), 0);
    }

    #[test]
    fn torus_product_matches_the_block_diagonal_torus() {
        let a = TorusQuadraticDivisor::diagonal(&[2]).unwrap();
        let b = TorusQuadraticDivisor::diagonal(&[-1]).unwrap();
        let product = kunneth(&IndexedPointSet::from_torus(&a).unwrap(), &IndexedPointSet::from_torus(&b).unwrap());
        assert_eq!(product.len(), 2);
        assert!(product.points().iter().all(|p| p.lmd == GradedModule::free(1, 1)));
        assert_eq!(product.euler(), -2);
        let direct = torus::lmd(&a.block_sum(&b)).unwrap();
        assert_eq!(product.total(), direct.lmd);
        assert_eq!(product.euler(), direct.euler);
    }

    #[test]
    fn products_of_tropical_lines() {
        for m in 0..4 {
            for n in 0..4 {
                let (c1, d1) = fixtures::tropical_line(m);
                let (c2, d2) = fixtures::tropical_line(n);
                let check = verify_product_rr(&c1, &d1, &c2, &d2).unwrap();
                assert_eq!(check.euler, (m + 1) * (n + 1));
                assert!(check.ok);
            }
        }
        let (c, d) = fixtures::elliptic(4);
        let (c0, d0) = fixtures::constant_circle(crate::exact::rat(1, 2));
        let check = verify_product_rr(&c, &d, &c0, &d0).unwrap();
        assert_eq!((check.euler, check.ok), (0, true));
    }

    #[test]
    fn covers_scale_the_euler_number() {
        for n in [-3, -1, 1, 2, 5] {
            let (c, d) = fixtures::elliptic(n);
            let base = IndexedPointSet::from_curve(&c, &d).unwrap();
            for deg in 1..=4 {
                let cyclic = etale_cyclic(&c, &d, deg).unwrap();
                assert_eq!(cyclic.euler(), deg as i64 * n);
                assert!(verify_etale(&base, &cyclic, deg).ok);
                let disjoint = etale_disjoint(&base, deg).unwrap();
                assert!(verify_etale(&base, &disjoint, deg).ok);
            }
            assert_eq!(etale_disjoint(&base, 1).unwrap().total(), base.total());
        }
        let five = plus_points(5);
        assert_eq!(etale_disjoint(&five, 3).unwrap().euler(), 15);
        let (line, div) = fixtures::tropical_line(2);
        assert!(matches!(etale_cyclic(&line, &div, 2), Err(ComposeError::Curve(CurveError::Unsupported(_)))));
        assert!(matches!(etale_disjoint(&five, 0), Err(ComposeError::ZeroDegree)));
    }

    #[test]
    fn sym_examples() {
        let two = plus_points(2);
        assert_eq!(verify_sym(&two, 2).formula, BigInt::from(3));
        assert_eq!(multisets(2, 2), 3);
        assert!(verify_sym(&two, 2).ok);
        let zero = IndexedPointSet::new(vec![
            LabelledPoint { label: "a".into(), lmd: GradedModule::free(0, 1) },
            LabelledPoint { label: "b".into(), lmd: GradedModule::free(1, 1) },
        ])
        .unwrap();
        for n in 1..6 {
            let check = verify_sym(&zero, n);
            assert_eq!((check.formula.clone(), check.ok), (BigInt::zero(), true));
        }
        let (c, d) = fixtures::tropical_line(1);
        let check = verify_sym(&IndexedPointSet::from_curve(&c, &d).unwrap(), 3);
        assert_eq!((check.formula, check.ok), (BigInt::from(4), true));
    }

    #[test]
    fn sym_matches_multiset_counts_for_plus_points() {
        for k in 0..6 {
            for n in 0..6 {
                assert_eq!(verify_sym(&plus_points(k), n as u64).oracle, BigInt::from(multisets(k, n)));
            }
        }
    }

    #[test]
    fn sym_formula_matches_series_on_mixed_sets() {
        let modules = [
            GradedModule::free(0, 1),
            GradedModule::free(1, 1),
            GradedModule::free(0, 2),
            GradedModule::free(1, 2),
            GradedModule::zero(),
        ];
        // every multiset of at most 6 points drawn from the five modules
        let mut stack = vec![Vec::<usize>::new()];
        while let Some(choice) = stack.pop() {
            let set = IndexedPointSet::new(
                choice.iter().enumerate().map(|(i, &m)| LabelledPoint { label: i.to_string(), lmd: modules[m].clone() }).collect(),
            )
            .unwrap();
            for n in 0..=8 {
                assert!(verify_sym(&set, n).ok);
            }
            if choice.len() < 6 {
                let start = choice.last().copied().unwrap_or(0);
                for m in start..modules.len() {
                    let mut next = choice.clone();
                    next.push(m);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn toric_point_sets() {
        let plus = IndexedPointSet::from_toric(&fixtures::segment(5), 1).unwrap();
        assert_eq!((plus.len(), plus.euler()), (6, 6));
        let minus = IndexedPointSet::from_toric(&fixtures::segment(5), -1).unwrap();
        assert_eq!((minus.len(), minus.euler()), (6, -4));
        assert_eq!(minus.total(), GradedModule::free(1, 4));
    }

    #[test]
    fn point_set_json() {
        let set = plus_points(2);
        let text = serde_json::to_string(&set).unwrap();
        assert_eq!(text, r#"{"points":[{"label":"p0","lmd":[[0,1]]},{"label":"p1","lmd":[[0,1]]}],"euler":2}"#);
        assert_eq!(IndexedPointSet::from_json(&text).unwrap(), set);
        let wrong = text.replace("\"euler\":2", "\"euler\":3");
        assert!(matches!(IndexedPointSet::from_json(&wrong), Err(ComposeError::EulerMismatch { .. })));
        let dup = text.replace("p1", "p0");
        assert!(matches!(IndexedPointSet::from_json(&dup), Err(ComposeError::DuplicateLabel(_))));
    }
}
