//! Finitely generated free graded modules over the integers.
//!
//! Local Morse data computed in this crate is always torsion free, so a module
//! is recorded by its Betti table: a finitely supported map from cohomological
//! degree to rank. Zero ranks are never stored.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedModule {
    betti: BTreeMap<i64, u64>,
}

impl GradedModule {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `Z^rank` concentrated in `degree`; the zero module when `rank == 0`.
    pub fn free(degree: i64, rank: u64) -> Self {
        let mut betti = BTreeMap::new();
        if rank > 0 {
            betti.insert(degree, rank);
        }
        Self { betti }
    }

    /// Builds a module from `(degree, rank)` pairs, adding repeated degrees.
    pub fn from_pairs<I: IntoIterator<Item = (i64, u64)>>(pairs: I) -> Self {
        let mut module = Self::zero();
        for (degree, rank) in pairs {
            module.add_rank(degree, rank);
        }
        module
    }

    fn add_rank(&mut self, degree: i64, rank: u64) {
        if rank > 0 {
            *self.betti.entry(degree).or_insert(0) += rank;
        }
    }

    pub fn rank(&self, degree: i64) -> u64 {
        self.betti.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> u64 {
        self.betti.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.betti.is_empty()
    }

    /// Degrees with nonzero rank, ascending.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.betti.keys().copied()
    }

    /// `(degree, rank)` pairs sorted by degree.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.betti.iter().map(|(&d, &r)| (d, r))
    }

    pub fn to_pairs(&self) -> Vec<(i64, u64)> {
        self.iter().collect()
    }

    /// `Σ_d (−1)^d · rank(d)`.
    pub fn euler(&self) -> i64 {
        self.iter()
            .map(|(d, r)| if d.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, r) in other.iter() {
            out.add_rank(d, r);
        }
        out
    }

    /// Tensor product; Betti tables convolve.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.iter() {
            for (j, b) in other.iter() {
                out.add_rank(i + j, a * b);
            }
        }
        out
    }

    /// Regrades by `by`: degree `d` moves to `d + by`.
    pub fn shift(&self, by: i64) -> Self {
        Self::from_pairs(self.iter().map(|(d, r)| (d + by, r)))
    }
}

impl<'a> Sum<&'a GradedModule> for GradedModule {
    fn sum<I: Iterator<Item = &'a GradedModule>>(iter: I) -> Self {
        iter.fold(GradedModule::zero(), |acc, m| acc.direct_sum(m))
    }
}

impl Sum for GradedModule {
    fn sum<I: Iterator<Item = GradedModule>>(iter: I) -> Self {
        iter.fold(GradedModule::zero(), |acc, m| acc.direct_sum(&m))
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(d, r)| if r == 1 { format!("Z[{d}]") } else { format!("Z^{r}[{d}]") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for GradedModule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|(d, r)| [d as i128, r as i128]))
    }
}

impl<'de> Deserialize<'de> for GradedModule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, i64)>::deserialize(d)?;
        let mut module = GradedModule::zero();
        for (degree, rank) in pairs {
            let rank = u64::try_from(rank)
                .map_err(|_| D::Error::custom(format!("negative rank {rank} in degree {degree}")))?;
            module.add_rank(degree, rank);
        }
        Ok(module)
    }
}

/// Coefficient of `tⁿ` in `(1 − t)^(−chi)`, i.e. the generalized binomial
/// `C(n + chi − 1, n) = chi (chi + 1) ⋯ (chi + n − 1) / n!`.
///
/// This is the Euler characteristic of the `n`-th symmetric power of a
/// module with Euler characteristic `chi`.
pub fn sym_euler(chi: i64, n: u64) -> BigInt {
    let mut coeff = BigInt::one();
    let chi = BigInt::from(chi);
    for k in 1..=n {
        let k = BigInt::from(k);
        // Exact: the running value is C(chi + k - 1, k) at every step.
        coeff = coeff * (&chi + &k - BigInt::one()) / k;
        if coeff.is_zero() {
            break;
        }
    }
    coeff
}
