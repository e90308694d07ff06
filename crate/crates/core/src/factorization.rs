//! Factorization pairs `(P, S)`: layer decomposition, verification, sign
//! normalization, 4-code classification, and the row search for the next
//! layer of `P` under the layer inequalities.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{code_polynomial, CodeSpec};
use crate::cyclic::{verify_krasner, KrasnerPair};
use crate::ncpoly::{NcPoly, Word};
use crate::upoly::search::CoefficientSearch;
use crate::upoly::{ExpPoly, IntSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactorizationError {
    #[error("neither (P, S) nor (-P, -S) has characteristic top layers")]
    T2Violation,
    #[error("b-degrees {p_degree} + {s_degree} of P and S do not describe a 4-code")]
    NotAFourCode { p_degree: usize, s_degree: usize },
    #[error("P and S must both be nonzero")]
    ZeroFactor,
}

/// A candidate factorization `C = P(A - 1)S + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationPair {
    #[serde(rename = "P")]
    pub p: NcPoly,
    #[serde(rename = "S")]
    pub s: NcPoly,
}

impl FactorizationPair {
    pub fn new(p: NcPoly, s: NcPoly) -> Self {
        FactorizationPair { p, s }
    }

    pub fn p_layers(&self) -> Vec<NcPoly> {
        self.p.layers()
    }

    pub fn s_layers(&self) -> Vec<NcPoly> {
        self.s.layers()
    }

    pub fn negated(&self) -> Self {
        FactorizationPair {
            p: -&self.p,
            s: -&self.s,
        }
    }

    /// `(S~, P~)`, a factorization of the reversed code.
    pub fn reversed_swap(&self) -> Self {
        FactorizationPair {
            p: self.s.reversal(),
            s: self.p.reversal(),
        }
    }

    /// `P(A - 1)S + 1`.
    pub fn code_polynomial(&self) -> NcPoly {
        code_polynomial(&self.p, &self.s)
    }
}

/// Layers `C_0, ..., C_(k+h+1)` of `P(A - 1)S + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerStack {
    pub layers: Vec<NcPoly>,
}

impl LayerStack {
    pub fn total(&self) -> NcPoly {
        self.layers.iter().cloned().sum()
    }

    /// Index of the last nonzero layer.
    pub fn top(&self) -> Option<usize> {
        self.layers.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_nonneg(&self) -> bool {
        self.layers.iter().all(NcPoly::is_nonneg)
    }
}

fn layer_or_zero(layers: &[NcPoly], i: usize) -> NcPoly {
    layers.get(i).cloned().unwrap_or_default()
}

/// `sum_{i+h=r} P_i b S_h + sum_{i+h=r+1} P_i (a-1) S_h`, i.e. `C_(r+1)`.
pub fn layer_expression(p_layers: &[NcPoly], s_layers: &[NcPoly], r: usize) -> NcPoly {
    let b = NcPoly::letter_b();
    let am1 = NcPoly::a_minus_one();
    let mut out = NcPoly::zero();
    for i in 0..=r {
        let (pi, sh) = (layer_or_zero(p_layers, i), layer_or_zero(s_layers, r - i));
        if !pi.is_zero() && !sh.is_zero() {
            out += &(&(&pi * &b) * &sh);
        }
    }
    for i in 0..=r + 1 {
        let (pi, sh) = (
            layer_or_zero(p_layers, i),
            layer_or_zero(s_layers, r + 1 - i),
        );
        if !pi.is_zero() && !sh.is_zero() {
            out += &(&(&pi * &am1) * &sh);
        }
    }
    out
}

/// Computes the layers through `C_0 = P_0(a-1)S_0 + 1` and the recursion
/// for `C_(r+1)`.
pub fn layer_decompose(f: &FactorizationPair) -> LayerStack {
    let (pl, sl) = (f.p_layers(), f.s_layers());
    if pl.is_empty() || sl.is_empty() {
        return LayerStack {
            layers: vec![NcPoly::one()],
        };
    }
    let top = pl.len() - 1 + sl.len() - 1 + 1;
    let mut layers = Vec::with_capacity(top + 1);
    let mut c0 = &(&pl[0] * &NcPoly::a_minus_one()) * &sl[0];
    c0 += &NcPoly::one();
    layers.push(c0);
    for r in 0..top {
        layers.push(layer_expression(&pl, &sl, r));
    }
    let stack = LayerStack { layers };
    debug_assert_eq!(stack.total(), f.code_polynomial());
    stack
}

/// `P(A - 1)S + 1` equals the characteristic polynomial of `C`.
pub fn verify_factorization(code: &CodeSpec, f: &FactorizationPair) -> bool {
    f.code_polynomial() == code.characteristic()
}

/// `P, S` or `-P, -S` both have coefficients in `{0, 1}`.
pub fn is_positive(f: &FactorizationPair) -> bool {
    (f.p.is_characteristic() && f.s.is_characteristic())
        || ((-&f.p).is_characteristic() && (-&f.s).is_characteristic())
}

/// For every word `w b a^j` in `supp(S)`, the word `a^j` is in `supp(S)`.
pub fn check_s_closure(s: &NcPoly) -> bool {
    s.support()
        .filter(|w| !w.is_a_power())
        .all(|w| s.contains(&Word::a_pow(w.last_run())))
}

/// Result of sign normalization of a factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignReport {
    /// `+1` or `-1`; `(sign P, sign S)` has characteristic top layers.
    pub sign: i8,
    /// `L_p` with `P_k = sum_p p b a^(L_p)`, keyed by `p` in `supp(P_(k-1))`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_side: Option<BTreeMap<String, IntSet>>,
    /// `M_s` with `S_h = sum_s a^(M_s) b s`, keyed by `s` in `supp(S_(h-1))`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_side: Option<BTreeMap<String, IntSet>>,
}

impl SignReport {
    /// Preferred shape when both hold: the S-side.
    pub fn preferred_side(&self) -> Option<&'static str> {
        match (&self.s_side, &self.p_side) {
            (Some(_), _) => Some("S"),
            (None, Some(_)) => Some("P"),
            _ => None,
        }
    }
}

/// Picks the sign making the top layers of `P` and `S` characteristic and
/// reports which of the two shapes `P_k = sum p b a^(L_p)`,
/// `S_h = sum a^(M_s) b s` holds.
pub fn normalize_sign(f: &FactorizationPair) -> Result<SignReport, FactorizationError> {
    if f.p.is_zero() || f.s.is_zero() {
        return Err(FactorizationError::ZeroFactor);
    }
    for sign in [1i8, -1] {
        let g = if sign == 1 { f.clone() } else { f.negated() };
        let (pl, sl) = (g.p_layers(), g.s_layers());
        let (pk, sh) = (pl.last().unwrap(), sl.last().unwrap());
        if !pk.is_characteristic() || !sh.is_characteristic() {
            continue;
        }
        let p_side = (pl.len() >= 2)
            .then(|| side_shape(pk, &pl[pl.len() - 2], Word::split_last_b))
            .flatten();
        let s_side = (sl.len() >= 2)
            .then(|| {
                side_shape(sh, &sl[sl.len() - 2], |w| {
                    w.split_first_b().map(|(m, s)| (s, m))
                })
            })
            .flatten();
        return Ok(SignReport {
            sign,
            p_side,
            s_side,
        });
    }
    Err(FactorizationError::T2Violation)
}

// Every word of `top` splits into a word of `supp(below)` and an exponent;
// `below` must be nonnegative and nonzero.
fn side_shape(
    top: &NcPoly,
    below: &NcPoly,
    split: impl Fn(&Word) -> Option<(Word, u32)>,
) -> Option<BTreeMap<String, IntSet>> {
    if below.is_zero() || !below.is_nonneg() {
        return None;
    }
    let mut map: BTreeMap<String, IntSet> = below
        .support()
        .map(|w| (w.to_string(), IntSet::new()))
        .collect();
    for w in top.support() {
        let (base, e) = split(w)?;
        map.get_mut(&base.to_string())?.insert(e);
    }
    Some(map)
}

/// `H` when `poly` is `a^H` for a set `H`.
pub fn a_set(poly: &NcPoly) -> Option<IntSet> {
    if !poly.support().all(Word::is_a_power) {
        return None;
    }
    poly.a_part().to_set()
}

/// Reads a characteristic one-b layer `sum_i a^i b a^(L_i)` as `i -> L_i`.
pub fn rows_by_prefix(layer: &NcPoly) -> Option<BTreeMap<u32, IntSet>> {
    let mut out: BTreeMap<u32, IntSet> = BTreeMap::new();
    for (w, c) in layer.terms() {
        if w.b_count() != 1 || !num_traits::One::is_one(c) {
            return None;
        }
        out.entry(w.first_run()).or_default().insert(w.last_run());
    }
    Some(out)
}

/// Reads a characteristic one-b layer `sum_j a^(M_j) b a^j` as `j -> M_j`.
pub fn rows_by_suffix(layer: &NcPoly) -> Option<BTreeMap<u32, IntSet>> {
    let mut out: BTreeMap<u32, IntSet> = BTreeMap::new();
    for (w, c) in layer.terms() {
        if w.b_count() != 1 || !num_traits::One::is_one(c) {
            return None;
        }
        out.entry(w.last_run()).or_default().insert(w.first_run());
    }
    Some(out)
}

/// The Krasner pair `(I, J)` when `P_0 = a^I`, `S_0 = a^J`.
pub fn krasner_of(p0: &NcPoly, s0: &NcPoly) -> Option<KrasnerPair> {
    let i = a_set(p0)?;
    let j = a_set(s0)?;
    let n = i.last()? + j.last()? + 1;
    verify_krasner(&i, &j, n).then(|| KrasnerPair::new(i, j, n))
}

/// `P_0 = a^I`, `S_0 = a^J` with `(I, J)` Krasner and
/// `S_1 = sum_{j in J} a^(M_j) b a^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrasnerShape {
    pub krasner: KrasnerPair,
    #[serde(rename = "M")]
    pub m: BTreeMap<u32, IntSet>,
}

pub fn krasner_shape(f: &FactorizationPair) -> Option<KrasnerShape> {
    let (pl, sl) = (f.p_layers(), f.s_layers());
    let krasner = krasner_of(pl.first()?, sl.first()?)?;
    let m = rows_by_suffix(&layer_or_zero(&sl, 1))?;
    if !m.keys().all(|j| krasner.j.contains(j)) {
        return None;
    }
    Some(KrasnerShape { krasner, m })
}

/// Which pair the 4-code statements apply to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `(P, S)` itself.
    Direct,
    /// `(S~, P~)`.
    Swapped,
}

/// Structured reading of a nonnegative 4-code factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum PositiveShape {
    /// `P = P_0 + ... + P_3`, `S = a^(S_0)`.
    #[serde(rename = "1")]
    OneSided { s0: ExpPoly },
    /// `P = a^I + sum a^i b a^(L_i) + sum_w w b a^(L_w)`, `S = a^J + sum_{j in J} a^(M_j) b a^j`.
    #[serde(rename = "2")]
    TopRowsOverJ {
        krasner: KrasnerPair,
        #[serde(rename = "I'")]
        i_prime: IntSet,
        #[serde(rename = "L")]
        l: BTreeMap<u32, IntSet>,
        #[serde(rename = "M")]
        m: BTreeMap<u32, IntSet>,
        #[serde(rename = "L_w")]
        l_w: BTreeMap<String, IntSet>,
    },
    /// `P = a^I + sum a^i b a^(L_i) + sum a^i b a^l b a^(L_(i,l))`, `S = a^J + sum_{j in J'} a^(M_j) b a^j`.
    #[serde(rename = "3")]
    NestedRows {
        krasner: KrasnerPair,
        #[serde(rename = "I'")]
        i_prime: IntSet,
        #[serde(rename = "J'")]
        j_prime: IntSet,
        #[serde(rename = "L")]
        l: BTreeMap<u32, IntSet>,
        #[serde(rename = "M")]
        m: BTreeMap<u32, IntSet>,
        #[serde(rename = "L2")]
        l2: Vec<(u32, u32, IntSet)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub orientation: Orientation,
    /// 1 for `P = P_0 + ... + P_3, S = S_0`; 2 for `P = P_0 + P_1 + P_2, S = S_0 + S_1`.
    pub layer_case: u8,
    /// Sign making both factors nonnegative, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    /// Every positive shape the oriented pair matches.
    pub positive_shapes: Vec<PositiveShape>,
}

/// Classifies a factorization whose code has words with up to four `b`s.
pub fn classify_4code(f: &FactorizationPair) -> Result<Classification, FactorizationError> {
    if f.p.is_zero() || f.s.is_zero() {
        return Err(FactorizationError::ZeroFactor);
    }
    let (k, h) = (f.p.b_degree().unwrap(), f.s.b_degree().unwrap());
    let (orientation, layer_case) = match (k, h) {
        (3, 0) => (Orientation::Direct, 1),
        (2, 1) => (Orientation::Direct, 2),
        (1, 2) => (Orientation::Swapped, 2),
        (0, 3) => (Orientation::Swapped, 1),
        _ => {
            return Err(FactorizationError::NotAFourCode {
                p_degree: k,
                s_degree: h,
            })
        }
    };
    let oriented = match orientation {
        Orientation::Direct => f.clone(),
        Orientation::Swapped => f.reversed_swap(),
    };
    let sign = if oriented.p.is_nonneg() && oriented.s.is_nonneg() {
        Some(1)
    } else if (-&oriented.p).is_nonneg() && (-&oriented.s).is_nonneg() {
        Some(-1)
    } else {
        None
    };
    let positive_shapes = match sign {
        Some(sg) => {
            let g = if sg == 1 {
                oriented
            } else {
                oriented.negated()
            };
            positive_shapes(&g, layer_case)
        }
        None => Vec::new(),
    };
    Ok(Classification {
        orientation,
        layer_case,
        sign,
        positive_shapes,
    })
}

fn positive_shapes(g: &FactorizationPair, layer_case: u8) -> Vec<PositiveShape> {
    let mut out = Vec::new();
    if layer_case == 1 {
        out.push(PositiveShape::OneSided { s0: g.s.a_part() });
        return out;
    }
    if !g.p.is_characteristic() || !g.s.is_characteristic() {
        return out;
    }
    let (pl, sl) = (g.p_layers(), g.s_layers());
    let Some(krasner) = krasner_of(&pl[0], &sl[0]) else {
        return out;
    };
    let (Some(l), Some(m)) = (rows_by_prefix(&pl[1]), rows_by_suffix(&sl[1])) else {
        return out;
    };
    let i_prime: IntSet = l.keys().copied().collect();
    let j_prime: IntSet = m.keys().copied().collect();

    if j_prime.is_subset(&krasner.j) {
        let mut l_w: BTreeMap<String, IntSet> = BTreeMap::new();
        for w in pl[2].support() {
            let (x, e) = w.split_last_b().unwrap();
            l_w.entry(x.to_string()).or_default().insert(e);
        }
        out.push(PositiveShape::TopRowsOverJ {
            krasner: krasner.clone(),
            i_prime: i_prime.clone(),
            l: l.clone(),
            m: m.clone(),
            l_w,
        });
    }

    let mut l2: BTreeMap<(u32, u32), IntSet> = BTreeMap::new();
    let nested = pl[2].support().all(|w| {
        let r = w.runs();
        let (i, ell) = (r[0], r[1]);
        let ok = l.get(&i).is_some_and(|li| li.contains(&ell));
        if ok {
            l2.entry((i, ell)).or_default().insert(r[2]);
        }
        ok
    });
    if nested {
        out.push(PositiveShape::NestedRows {
            krasner,
            i_prime,
            j_prime,
            l,
            m,
            l2: l2.into_iter().map(|((i, ell), s)| (i, ell, s)).collect(),
        });
    }
    out
}

/// Admissible rows for the next layer `P_(r+1)`, grouped by prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCandidates {
    /// Prefix `x` with `r` letters `b`; the row is `x b a^X`.
    pub prefix: Word,
    /// The part of the layer expression not involving `P_(r+1)` on this row.
    pub base: ExpPoly,
    /// Every signed choice `X` with `max |X| <= bound` and
    /// `X (a-1) S_0 + base >= 0`, as a polynomial in `a`.
    pub choices: Vec<ExpPoly>,
}

impl RowCandidates {
    pub fn has_negative_choice(&self) -> bool {
        self.choices.iter().any(|c| !c.is_nonneg())
    }
}

/// Outcome of the next-layer row search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NextLayerSearch {
    /// Rows whose base is nonzero; every other row must be zero in `P_(r+1)`.
    pub rows: Vec<RowCandidates>,
}

impl NextLayerSearch {
    /// Some choice of `P_(r+1)` makes the layer expression nonnegative.
    pub fn is_feasible(&self) -> bool {
        self.rows.iter().all(|r| !r.choices.is_empty())
    }

    /// A feasible `P_(r+1)` with a negative coefficient exists.
    pub fn admits_negative_layer(&self) -> bool {
        self.is_feasible() && self.rows.iter().any(RowCandidates::has_negative_choice)
    }

    /// Whether a given `P_(r+1)` is among the admissible choices.
    pub fn admits(&self, next: &NcPoly) -> bool {
        let mut rows: BTreeMap<Word, ExpPoly> = BTreeMap::new();
        for (w, c) in next.terms() {
            let Some((x, e)) = w.split_last_b() else {
                return false;
            };
            rows.entry(x).or_default().add_term(e, c.clone());
        }
        let known: BTreeMap<&Word, &RowCandidates> =
            self.rows.iter().map(|r| (&r.prefix, r)).collect();
        if !self.is_feasible() || rows.keys().any(|x| !known.contains_key(x)) {
            return false;
        }
        self.rows.iter().all(|r| {
            let chosen = rows.get(&r.prefix).cloned().unwrap_or_default();
            r.choices.contains(&chosen)
        })
    }
}

/// Enumerates, row by row, the layers `P_(r+1)` (coefficients in
/// `{-1, 0, 1}`, exponents up to `bound`) for which the layer expression
/// `sum_{i+h=r} P_i b S_h + sum_{i+h=r+1} P_i (a-1) S_h` is nonnegative,
/// given `P_0, ..., P_r`. The expression splits into independent rows
/// `x b a^*` because `P_(r+1)` only enters through `P_(r+1)(a-1)S_0`.
pub fn search_next_layer(p_layers: &[NcPoly], s: &NcPoly, r: usize, bound: u32) -> NextLayerSearch {
    let sl = s.layers();
    let known: Vec<NcPoly> = p_layers.iter().take(r + 1).cloned().collect();
    let base = layer_expression(&known, &sl, r);
    let kernel = layer_or_zero(&sl, 0).a_part().times_a_minus_one();
    let mut rows: BTreeMap<Word, ExpPoly> = BTreeMap::new();
    for (w, c) in base.terms() {
        let (x, e) = w.split_last_b().expect("layer r+1 words contain b");
        rows.entry(x).or_default().add_term(e, c.clone());
    }
    let rows = rows
        .into_iter()
        .map(|(prefix, base)| {
            let mut choices = Vec::new();
            let _ = CoefficientSearch::signed(bound)
                .require_nonneg(&kernel, &base)
                .for_each(|a, _| {
                    choices.push(ExpPoly::from_dense(a));
                    ControlFlow::Continue(())
                });
            RowCandidates {
                prefix,
                base,
                choices,
            }
        })
        .collect();
    NextLayerSearch { rows }
}
