//! Words over `{a, b}` and sparse polynomials in `Z<a, b>`.

mod expr;
mod word;

pub use expr::ExprError;
pub use word::{Word, WordParseError};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::json::Coeff;
use crate::upoly::{ExpPoly, IntSet};

/// A noncommutative polynomial with integer coefficients over `{a, b}`.
///
/// Terms are kept in canonical form (no zero coefficients) and iterate in
/// word order: length, then number of `b`s, then a-runs.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct NcPoly {
    terms: BTreeMap<Word, BigInt>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        Self::term(w, BigInt::one())
    }

    pub fn term(w: Word, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(w, coeff.into());
        p
    }

    /// Characteristic polynomial of a finite set of words.
    pub fn from_words<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Self {
        let mut p = Self::zero();
        for w in words {
            p.add_term(w.clone(), BigInt::one());
        }
        p
    }

    /// Embeds `a^H` from `Z[a]`.
    pub fn from_upoly(h: &ExpPoly) -> Self {
        let mut p = Self::zero();
        for (e, c) in h.iter() {
            p.add_term(Word::a_pow(e), c.clone());
        }
        p
    }

    pub fn a_set(set: &IntSet) -> Self {
        Self::from_upoly(&ExpPoly::from_set(set))
    }

    pub fn letter_a() -> Self {
        Self::from_word(Word::a_pow(1))
    }

    pub fn letter_b() -> Self {
        Self::from_word(Word::b())
    }

    /// `a - 1`.
    pub fn a_minus_one() -> Self {
        &Self::letter_a() - &Self::one()
    }

    /// `A - 1 = a + b - 1`.
    pub fn alphabet_minus_one() -> Self {
        &(&Self::letter_a() + &Self::letter_b()) - &Self::one()
    }

    pub fn add_term(&mut self, w: Word, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    /// `(P, w)`.
    pub fn coeff(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.terms.contains_key(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> + '_ {
        self.terms.keys()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    /// `P_g`: the terms whose words carry exactly `g` letters `b`.
    pub fn b_layer(&self, g: usize) -> Self {
        NcPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.b_count() == g)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest number of `b`s over the support; `None` for the zero polynomial.
    pub fn b_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::b_count).max()
    }

    /// `[P_0, ..., P_h]` with `h` the b-degree; empty for zero.
    pub fn layers(&self) -> Vec<NcPoly> {
        let Some(h) = self.b_degree() else {
            return Vec::new();
        };
        let mut out = vec![NcPoly::zero(); h + 1];
        for (w, c) in &self.terms {
            out[w.b_count()].terms.insert(w.clone(), c.clone());
        }
        out
    }

    /// `P~`, with `(P~, w~) = (P, w)`.
    pub fn reversal(&self) -> Self {
        NcPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.reversed(), c.clone()))
                .collect(),
        }
    }

    /// All coefficients in `{0, 1}`.
    pub fn is_characteristic(&self) -> bool {
        self.terms.values().all(|c| c.is_one())
    }

    /// `P >= 0`.
    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// First term (in word order) with a negative coefficient.
    pub fn first_negative(&self) -> Option<(&Word, &BigInt)> {
        self.terms.iter().find(|(_, c)| c.is_negative())
    }

    /// First term (in word order) whose coefficient is not `1`.
    pub fn first_non_characteristic(&self) -> Option<(&Word, &BigInt)> {
        self.terms.iter().find(|(_, c)| !c.is_one())
    }

    /// Restriction to `a*`, as a univariate polynomial.
    pub fn a_part(&self) -> ExpPoly {
        ExpPoly::from_terms(
            self.terms
                .iter()
                .filter(|(w, _)| w.is_a_power())
                .map(|(w, c)| (w.first_run(), c.clone())),
        )
    }

    /// Multiplies on the right by a univariate polynomial.
    pub fn mul_upoly_right(&self, h: &ExpPoly) -> Self {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            for (e, d) in h.iter() {
                out.add_term(w.a_suffixed(e), c * d);
            }
        }
        out
    }

    /// Multiplies on the left by a univariate polynomial.
    pub fn mul_upoly_left(&self, h: &ExpPoly) -> Self {
        let mut out = NcPoly::zero();
        for (e, d) in h.iter() {
            for (w, c) in &self.terms {
                out.add_term(w.a_prefixed(e), c * d);
            }
        }
        out
    }

    /// Parses an expression such as `1 + a^2ba^{0..6} - (a-1)b`.
    ///
    /// Grammar: sums and differences of products; factors are `a`, `b`,
    /// integers, parenthesised expressions, `a^k`, `a^{...}` where the
    /// braces hold a comma-separated multiset of exponents and ranges
    /// `lo..hi` (inclusive), and `b^k`, `(...)^k`.
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        expr::parse(text)
    }
}

impl AddAssign<&NcPoly> for NcPoly {
    fn add_assign(&mut self, rhs: &NcPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&NcPoly> for NcPoly {
    fn sub_assign(&mut self, rhs: &NcPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for NcPoly {
            type Output = NcPoly;
            fn $method(self, rhs: NcPoly) -> NcPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        -&self
    }
}

impl std::iter::Sum for NcPoly {
    fn sum<I: Iterator<Item = NcPoly>>(iter: I) -> NcPoly {
        let mut out = NcPoly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

impl fmt::Display for NcPoly {
    /// Terms in exponent notation, e.g. `1 + a^2ba^3 - 2b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&w.to_pretty())?;
            } else {
                write!(f, "{mag}{}", w.to_pretty())?;
            }
        }
        Ok(())
    }
}

impl FromStr for NcPoly {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[derive(Serialize, Deserialize)]
struct NcPolyRepr {
    terms: Vec<(String, Coeff)>,
}

impl Serialize for NcPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NcPolyRepr {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.to_string(), Coeff(c.clone())))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NcPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = NcPolyRepr::deserialize(deserializer)?;
        let mut p = NcPoly::zero();
        for (w, c) in repr.terms {
            let w: Word = w.parse().map_err(serde::de::Error::custom)?;
            p.add_term(w, c.0);
        }
        Ok(p)
    }
}
