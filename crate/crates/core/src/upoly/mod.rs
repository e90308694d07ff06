//! Univariate polynomials in `Z[a]` written in exponent-multiset form.
//!
//! A finite multiset `H` of nonnegative integers stands for
//! `a^H = sum (H, n) a^n`; sets are the special case of multiplicity one.
//! Products and sums of such polynomials follow the multiset rules
//! `a^(M+L) = a^M a^L` and `a^(M ∪ L) = a^M + a^L`.

pub mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A finite set of nonnegative integers.
pub type IntSet = BTreeSet<u32>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UpolyError {
    #[error("geometric polynomial needs n >= 1")]
    ZeroLength,
    #[error("residue {t} out of range for modulus {n}")]
    ResidueOutOfRange { t: u32, n: u32 },
}

/// Sparse polynomial in `Z[a]`: exponent → nonzero integer.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct ExpPoly {
    coeffs: BTreeMap<u32, BigInt>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: u32, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// `a^H` for a multiset `H` given as an iterator; repeated exponents add.
    pub fn from_exponents<I: IntoIterator<Item = u32>>(exps: I) -> Self {
        let mut p = Self::zero();
        for e in exps {
            p.add_term(e, BigInt::one());
        }
        p
    }

    pub fn from_set(set: &IntSet) -> Self {
        Self::from_exponents(set.iter().copied())
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `1 + a + ... + a^(n-1)`.
    pub fn geometric(n: u32) -> Result<Self, UpolyError> {
        if n == 0 {
            return Err(UpolyError::ZeroLength);
        }
        Ok(Self::from_exponents(0..n))
    }

    /// `a - 1`.
    pub fn a_minus_one() -> Self {
        Self::from_terms([(0, BigInt::from(-1)), (1, BigInt::one())])
    }

    pub fn add_term(&mut self, exp: u32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, exp: u32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigInt)> + '_ {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn support(&self) -> IntSet {
        self.coeffs.keys().copied().collect()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_nonneg(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Coefficients all in `{0, 1}`.
    pub fn is_characteristic(&self) -> bool {
        self.coeffs.values().all(|c| c.is_one())
    }

    /// Smallest exponent carrying a negative coefficient.
    pub fn first_negative(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .find(|(_, c)| c.is_negative())
            .map(|(&e, _)| e)
    }

    /// The set `H` when the polynomial is `a^H` for a set `H`.
    pub fn to_set(&self) -> Option<IntSet> {
        self.is_characteristic().then(|| self.support())
    }

    /// Multiplication by `a^k`.
    pub fn shift(&self, k: u32) -> Self {
        ExpPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        ExpPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    /// `self * (a - 1)`.
    pub fn times_a_minus_one(&self) -> Self {
        let mut out = self.shift(1);
        out -= self;
        out
    }

    /// Exact division in `Z[a]`; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &ExpPoly) -> Option<ExpPoly> {
        let d_deg = divisor.degree()?;
        let d_lead = divisor.coeffs[&d_deg].clone();
        let mut rem = self.clone();
        let mut quot = ExpPoly::zero();
        while let Some(r_deg) = rem.degree() {
            if r_deg < d_deg {
                return None;
            }
            let r_lead = &rem.coeffs[&r_deg];
            let (q, r) = r_lead.div_rem(&d_lead);
            if !r.is_zero() {
                return None;
            }
            let shift = r_deg - d_deg;
            for (e, c) in divisor.iter() {
                rem.add_term(e + shift, -(c * &q));
            }
            quot.add_term(shift, q);
        }
        Some(quot)
    }

    /// `[H]_t`: the terms whose exponent is congruent to `t` modulo `n`.
    pub fn residue_filter(&self, t: u32, n: u32) -> Result<ExpPoly, UpolyError> {
        if n == 0 || t >= n {
            return Err(UpolyError::ResidueOutOfRange { t, n });
        }
        Ok(ExpPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&e, _)| e % n == t)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        })
    }

    /// Dense `i64` coefficient vector indexed by exponent.
    ///
    /// Panics if a coefficient does not fit in `i64`.
    pub fn to_dense(&self) -> Vec<i64> {
        let len = self.degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![0i64; len];
        for (&e, c) in &self.coeffs {
            out[e as usize] = c.to_i64().expect("coefficient exceeds i64");
        }
        out
    }

    pub fn from_dense(coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(e, &c)| (e as u32, BigInt::from(c))),
        )
    }
}

/// `a^L (a-1) a^J - a^Lp (a-1) a^J + k a^J >= 0`, coefficientwise.
pub fn telescoped_ineq(l: &ExpPoly, lp: &ExpPoly, k: u32, j: &ExpPoly) -> bool {
    telescoped_poly(l, lp, k, j).is_nonneg()
}

/// The polynomial tested by [`telescoped_ineq`].
pub fn telescoped_poly(l: &ExpPoly, lp: &ExpPoly, k: u32, j: &ExpPoly) -> ExpPoly {
    let diff = l - lp;
    &(&diff.times_a_minus_one() * j) + &j.scale(&BigInt::from(k))
}

/// Witness constant for a row `i` of the one-b layer.
///
/// Given `a^I` and the sets `M_j` of the right factor, returns
/// `k_i = (a^I, a^i) + max({0} ∪ {γ_j >= 0})` with
/// `γ_j = (a^I (a-1) a^(M_j), a^i)`. Whenever the one-b layer is
/// nonnegative, row `i` then satisfies
/// `a^(L_i)(a-1)a^J - a^(L'_i)(a-1)a^J + k_i a^J >= 0`.
pub fn row_slack_constant(i_poly: &ExpPoly, row: u32, m_sets: &[ExpPoly]) -> BigInt {
    let base = i_poly.times_a_minus_one();
    let best = m_sets
        .iter()
        .map(|m| (&base * m).coeff(row))
        .filter(|g| !g.is_negative())
        .max()
        .unwrap_or_default();
    i_poly.coeff(row) + best
}

impl AddAssign<&ExpPoly> for ExpPoly {
    fn add_assign(&mut self, rhs: &ExpPoly) {
        for (&e, c) in &rhs.coeffs {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&ExpPoly> for ExpPoly {
    fn sub_assign(&mut self, rhs: &ExpPoly) {
        for (&e, c) in &rhs.coeffs {
            self.add_term(e, -c);
        }
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for ExpPoly {
            type Output = ExpPoly;
            fn $method(self, rhs: ExpPoly) -> ExpPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&e, c) in &self.coeffs {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mono = match e {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ExpPolyRepr {
    coeffs: Vec<(u32, crate::json::Coeff)>,
}

impl Serialize for ExpPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExpPolyRepr {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e, crate::json::Coeff(c.clone())))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExpPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ExpPolyRepr::deserialize(deserializer)?;
        Ok(ExpPoly::from_terms(
            repr.coeffs.into_iter().map(|(e, c)| (e, c.0)),
        ))
    }
}

/// Convenience: the set `{lo, ..., hi}`.
pub fn range_set(lo: u32, hi: u32) -> IntSet {
    (lo..=hi).collect()
}
