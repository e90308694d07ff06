//! Constructions of positive factorizations from Krasner pairs: seeds,
//! S-towers, 3-codes, one-layer extensions of `P` and their inverse, and
//! 4-codes with nested rows.
//!
//! Index sets derived from the parameters (`T_j`, `R_i`, `J_i`, `I_j`,
//! `Q_k`, `J_z`, `R_(i,l)`) are always recomputed here and never taken as
//! input. Checks run in a fixed order and the first failure is reported.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::code_from_factorization;
use crate::cyclic::KrasnerPair;
use crate::factorization::{a_set, layer_decompose, rows_by_suffix, FactorizationPair};
use crate::ncpoly::{NcPoly, Word};
use crate::upoly::{ExpPoly, IntSet};

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ConstructError {
    #[error("({i:?}, {j:?}) is not a Krasner factorization of Z_{n}")]
    NotKrasner { i: IntSet, j: IntSet, n: u32 },
    #[error("malformed parameters: {reason}")]
    InvalidSpec { reason: String },
    #[error("base pair is not usable: {reason}")]
    InvalidBase { reason: String },
    #[error("level {level}: a^M (a-1) a^I + a^I has a negative coefficient for M = M_{word}")]
    TowerConditionViolated { level: usize, word: Word },
    #[error("a^(M_{j}) (a-1) a^I + a^I has a negative coefficient")]
    ColumnTile { j: u32 },
    #[error("row {i} has nonempty L_{i} but {i} lies in no T_j")]
    RowSupport { i: u32 },
    #[error("a^(L_{i}) (a-1) a^J + a^(J_{i}) has a negative coefficient")]
    RowBound { i: u32 },
    #[error("a^(L_{i}) (a-1) a^(M_{j}) + a^(L_{i}) has a negative coefficient")]
    OffKrasnerRow { i: u32, j: u32 },
    #[error("C_1 has the negative coefficient {coeff} at {word}")]
    NegativeCoefficient { word: Word, coeff: String },
    #[error("the extension key {z} does not occur as z b a^j, j in J, in the top code layer")]
    NotExtendable { z: Word },
    #[error("a^(L_z) (a-1) a^J + a^(J_z) has a negative coefficient for z = {z}")]
    ExtensionRowBound { z: Word },
    #[error("a^(L_z) (a-1) a^(M_{j}) + a^(L_z) has a negative coefficient for z = {z}")]
    ExtensionShifted { z: Word, j: u32 },
    #[error("every extension set is empty")]
    EmptyExtension,
    #[error("S_1 has the column {j} outside J")]
    ColumnOutsideJ { j: u32 },
    #[error("layer {r} of P is zero")]
    ZeroLayer { r: usize },
    #[error("a^(L_{i}) (a-1) a^J + a^J is not a 0/1 polynomial")]
    RowTile { i: u32 },
    #[error("column {j} has nonempty M_{j} but {j} lies in no R_i")]
    ColumnSupport { j: u32 },
    #[error("a^(M_{j}) (a-1) a^I + a^(I_{j}) has a negative coefficient")]
    ColumnBound { j: u32 },
    #[error(
        "a^(L_({i},{l})) (a-1) a^(M_{j}) + a^(L_({i},{l})) + a^(M_{j}) has a negative coefficient"
    )]
    InnerHoles { i: u32, l: u32, j: u32 },
    #[error("a^(L_({i},{l})) (a-1) a^(M_{j}) + a^(M_{j}) has a negative coefficient")]
    InnerShifted { i: u32, l: u32, j: u32 },
    #[error("a^(L_({i},{l})) (a-1) a^J + a^J is not a 0/1 polynomial")]
    SecondRowTile { i: u32, l: u32 },
    #[error(
        "a^(L_{i}) (a-1) a^(M_{j}) + a^(M_{j}) is negative at a^{l} but {j} is not in R_({i},{l})"
    )]
    SecondRowCover { i: u32, l: u32, j: u32 },
    #[error("internal consistency check failed: {reason}")]
    Unsound { reason: String },
}

fn set_poly(s: &IntSet) -> ExpPoly {
    ExpPoly::from_set(s)
}

fn empty() -> &'static IntSet {
    static EMPTY: IntSet = IntSet::new();
    &EMPTY
}

/// `a^L (a - 1) a^K`.
fn shifted(l: &IntSet, k: &IntSet) -> ExpPoly {
    &set_poly(l).times_a_minus_one() * &set_poly(k)
}

fn require_krasner(k: &KrasnerPair) -> Result<(), ConstructError> {
    if k.is_valid() {
        Ok(())
    } else {
        Err(ConstructError::NotKrasner {
            i: k.i.clone(),
            j: k.j.clone(),
            n: k.n,
        })
    }
}

/// `sum_(x in X) prefix b a^x`.
fn row(prefix: &Word, x: &IntSet) -> NcPoly {
    let mut out = NcPoly::zero();
    for &e in x {
        let mut runs = prefix.runs().to_vec();
        runs.push(e);
        out.add_term(Word::from_runs(runs), 1.into());
    }
    out
}

/// Confirms that `(P, S)` is a positive factorization whose code has the
/// expected number of `b`s.
fn assemble(p: NcPoly, s: NcPoly, b_degree: usize) -> Result<FactorizationPair, ConstructError> {
    let unsound = |reason: String| Err(ConstructError::Unsound { reason });
    if !p.is_characteristic() || !s.is_characteristic() {
        return unsound("constructed P or S is not a 0/1 polynomial".into());
    }
    match code_from_factorization(&p, &s) {
        Ok(code) if code.b_degree() == Some(b_degree) => Ok(FactorizationPair::new(p, s)),
        Ok(code) => unsound(format!(
            "expected a {b_degree}-code, got b-degree {:?}",
            code.b_degree()
        )),
        Err(e) => unsound(format!("P(A-1)S + 1 is not a code polynomial: {e}")),
    }
}

fn code_degree(p: &NcPoly, s: &NcPoly) -> usize {
    p.b_degree().unwrap_or(0) + s.b_degree().unwrap_or(0) + 1
}

/// `(a^I, a^J)`, a factorization of the 1-code `a^n + a^I b a^J`.
pub fn krasner_seed(k: &KrasnerPair) -> Result<FactorizationPair, ConstructError> {
    require_krasner(k)?;
    let p = NcPoly::from_upoly(&k.i_poly());
    let s = NcPoly::from_upoly(&k.j_poly());
    assemble(p, s, 1)
}

/// Parameters of an S-tower: `S_0 = a^J` and
/// `S_t = sum_(w in supp S_(t-1)) a^(M_w) b w`, with `P = a^I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub krasner: KrasnerPair,
    /// One map `w -> M_w` per level; missing words have `M_w` empty.
    pub levels: Vec<BTreeMap<Word, IntSet>>,
}

pub fn build_tower(spec: &TowerSpec) -> Result<FactorizationPair, ConstructError> {
    let k = &spec.krasner;
    require_krasner(k)?;
    let i_poly = k.i_poly();
    let mut below = NcPoly::from_upoly(&k.j_poly());
    let mut s = below.clone();
    for (level, maps) in spec.levels.iter().enumerate() {
        let mut next = NcPoly::zero();
        for (w, m) in maps {
            if !below.contains(w) {
                return Err(ConstructError::InvalidSpec {
                    reason: format!("level {level}: {w} is not a word of the previous level"),
                });
            }
            let t = &(&set_poly(m).times_a_minus_one() * &i_poly) + &i_poly;
            if !t.is_nonneg() {
                return Err(ConstructError::TowerConditionViolated {
                    level,
                    word: w.clone(),
                });
            }
            for &e in m {
                let mut runs = vec![e];
                runs.extend_from_slice(w.runs());
                next.add_term(Word::from_runs(runs), 1.into());
            }
        }
        s += &next;
        below = next;
    }
    let p = NcPoly::from_upoly(&i_poly);
    let degree = code_degree(&p, &s);
    assemble(p, s, degree)
}

/// Parameters of a 3-code:
/// `P = a^I + sum_(i in I') a^i b a^(L_i)`, `S = a^J + sum_(j in J) a^(M_j) b a^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeCodeSpec {
    pub krasner: KrasnerPair,
    #[serde(rename = "Iprime")]
    pub i_prime: IntSet,
    /// `i -> L_i` for `i` in `I'`; missing rows are empty.
    #[serde(rename = "L")]
    pub l: BTreeMap<u32, IntSet>,
    /// `j -> M_j` for `j` in `J`; missing columns are empty.
    #[serde(rename = "M")]
    pub m: BTreeMap<u32, IntSet>,
}

impl ThreeCodeSpec {
    fn l_of(&self, i: u32) -> &IntSet {
        self.l.get(&i).unwrap_or(empty())
    }

    fn m_of(&self, j: u32) -> &IntSet {
        self.m.get(&j).unwrap_or(empty())
    }

    fn validate(&self) -> Result<(), ConstructError> {
        require_krasner(&self.krasner)?;
        if let Some(i) = self.l.keys().find(|i| !self.i_prime.contains(i)) {
            return Err(ConstructError::InvalidSpec {
                reason: format!("L_{i} given but {i} is not in I'"),
            });
        }
        if let Some(j) = self.m.keys().find(|j| !self.krasner.j.contains(j)) {
            return Err(ConstructError::InvalidSpec {
                reason: format!("M_{j} given but {j} is not in J"),
            });
        }
        Ok(())
    }

    /// `T_j` with `a^(T_j) = a^(M_j) (a-1) a^I + a^I`, in the order of `J`.
    fn columns(&self) -> Result<Vec<(u32, IntSet)>, ConstructError> {
        let i_poly = self.krasner.i_poly();
        self.krasner
            .j
            .iter()
            .map(|&j| {
                let t = &shifted(self.m_of(j), &self.krasner.i) + &i_poly;
                t.to_set()
                    .map(|t| (j, t))
                    .ok_or(ConstructError::ColumnTile { j })
            })
            .collect()
    }

    /// The column, support and row conditions on `(L, M)`: together they
    /// are equivalent to `C_1 >= 0`.
    pub fn check_columns_and_rows(&self) -> Result<(), ConstructError> {
        let columns = self.columns()?;
        for &i in &self.i_prime {
            if !self.l_of(i).is_empty() && !columns.iter().any(|(_, t)| t.contains(&i)) {
                return Err(ConstructError::RowSupport { i });
            }
        }
        for &i in &self.i_prime {
            let j_i = ExpPoly::from_exponents(
                columns
                    .iter()
                    .filter(|(_, t)| t.contains(&i))
                    .map(|(j, _)| *j),
            );
            if !(&shifted(self.l_of(i), &self.krasner.j) + &j_i).is_nonneg() {
                return Err(ConstructError::RowBound { i });
            }
        }
        Ok(())
    }

    /// Rows of `P_1` off `I` against every column of `S_1`.
    pub fn check_off_krasner_rows(&self) -> Result<(), ConstructError> {
        for &i in self.i_prime.difference(&self.krasner.i) {
            let l = set_poly(self.l_of(i));
            for &j in &self.krasner.j {
                if !(&shifted(self.l_of(i), self.m_of(j)) + &l).is_nonneg() {
                    return Err(ConstructError::OffKrasnerRow { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> NcPoly {
        let mut p = NcPoly::from_upoly(&self.krasner.i_poly());
        for &i in &self.i_prime {
            p += &row(&Word::a_pow(i), self.l_of(i));
        }
        p
    }

    pub fn s(&self) -> NcPoly {
        let mut s = NcPoly::from_upoly(&self.krasner.j_poly());
        for (&j, m) in &self.m {
            for &e in m {
                s.add_term(Word::from_runs(vec![e, j]), 1.into());
            }
        }
        s
    }

    /// `a^I b a^J + sum_i a^i b a^(L_i) (a-1) a^J + sum_j a^I (a-1) a^(M_j) b a^j`.
    pub fn c1(&self) -> NcPoly {
        let k = &self.krasner;
        let mut out = NcPoly::zero();
        for &i in &k.i {
            out += &row(&Word::a_pow(i), &k.j);
        }
        for &i in &self.i_prime {
            for (e, c) in shifted(self.l_of(i), &k.j).iter() {
                out.add_term(Word::from_runs(vec![i, e]), c.clone());
            }
        }
        for &j in &k.j {
            for (e, c) in shifted(&k.i, self.m_of(j)).iter() {
                out.add_term(Word::from_runs(vec![e, j]), c.clone());
            }
        }
        out
    }
}

/// Checks the 3-code conditions and returns `(P, S)`.
pub fn check_three_code(spec: &ThreeCodeSpec) -> Result<FactorizationPair, ConstructError> {
    spec.validate()?;
    spec.check_columns_and_rows()?;
    spec.check_off_krasner_rows()?;
    let (p, s) = (spec.p(), spec.s());
    let degree = code_degree(&p, &s);
    assemble(p, s, degree)
}

/// Computes `C_1` directly and returns it when nonnegative. The verdict is
/// cross-checked against the column and row conditions.
pub fn check_c1(spec: &ThreeCodeSpec) -> Result<NcPoly, ConstructError> {
    spec.validate()?;
    let c1 = spec.c1();
    let by_conditions = spec.check_columns_and_rows();
    match (c1.first_negative(), by_conditions) {
        (None, Ok(())) => Ok(c1),
        (Some((word, coeff)), Err(_)) => Err(ConstructError::NegativeCoefficient {
            word: word.clone(),
            coeff: coeff.to_string(),
        }),
        (None, Err(e)) => Err(ConstructError::Unsound {
            reason: format!("C_1 >= 0 but {e}"),
        }),
        (Some((word, _)), Ok(())) => Err(ConstructError::Unsound {
            reason: format!("conditions hold but C_1 is negative at {word}"),
        }),
    }
}

/// `S = a^J + sum_(j in J') a^(M_j) b a^j` split into `J` and `j -> M_j`.
fn s_shape(s: &NcPoly) -> Result<(IntSet, BTreeMap<u32, IntSet>), ConstructError> {
    let bad = |reason: &str| ConstructError::InvalidBase {
        reason: reason.into(),
    };
    if !s.is_characteristic() || s.b_degree().is_some_and(|d| d > 1) {
        return Err(bad(
            "S must be a 0/1 polynomial with at most one b per word",
        ));
    }
    let j = a_set(&s.b_layer(0)).ok_or_else(|| bad("S_0 is not a^J"))?;
    let m = rows_by_suffix(&s.b_layer(1))
        .ok_or_else(|| bad("S_1 is not of the form sum a^(M_j) b a^j"))?;
    Ok((j, m))
}

fn require_columns_in_j(j: &IntSet, m: &BTreeMap<u32, IntSet>) -> Result<(), ConstructError> {
    match m.keys().find(|c| !j.contains(c)) {
        Some(&c) => Err(ConstructError::ColumnOutsideJ { j: c }),
        None => Ok(()),
    }
}

fn require_positive_code(f: &FactorizationPair) -> Result<(), ConstructError> {
    if !f.p.is_characteristic() || !f.s.is_characteristic() {
        return Err(ConstructError::InvalidBase {
            reason: "P and S must be 0/1 polynomials".into(),
        });
    }
    code_from_factorization(&f.p, &f.s)
        .map(|_| ())
        .map_err(|e| ConstructError::InvalidBase {
            reason: format!("P(A-1)S + 1 is not a code polynomial: {e}"),
        })
}

/// A positive factorization `(P', S)` with top layer `P'_k`, and a new
/// layer `P_(k+1) = sum_z z b a^(L_z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeocExtension {
    pub base: FactorizationPair,
    /// `z -> L_z`.
    #[serde(rename = "L")]
    pub l: BTreeMap<Word, IntSet>,
}

/// `Q_k` with `J_z` for each `z`: the `z` with `z b a^j` in the top layer
/// `C'_(k+1)` of the base code, `j` in `J`.
pub fn extension_rows(base: &FactorizationPair) -> Result<BTreeMap<Word, IntSet>, ConstructError> {
    let (j, _) = s_shape(&base.s)?;
    let k = base.p.b_degree().unwrap_or(0);
    let layers = layer_decompose(base);
    let mut q: BTreeMap<Word, IntSet> = BTreeMap::new();
    if let Some(top) = layers.layers.get(k + 1) {
        for w in top.support() {
            let (z, e) = w.split_last_b().expect("layer words contain b");
            if j.contains(&e) {
                q.entry(z).or_default().insert(e);
            }
        }
    }
    Ok(q)
}

/// Appends `P_(k+1) = sum_z z b a^(L_z)` to a positive factorization.
pub fn extend_layer(ext: &TeocExtension) -> Result<FactorizationPair, ConstructError> {
    let base = &ext.base;
    require_positive_code(base)?;
    let (j, m) = s_shape(&base.s)?;
    require_columns_in_j(&j, &m)?;
    let rows: Vec<(&Word, &IntSet)> = ext.l.iter().filter(|(_, l)| !l.is_empty()).collect();
    if rows.is_empty() {
        return Err(ConstructError::EmptyExtension);
    }
    let q = extension_rows(base)?;
    for (z, _) in &rows {
        if !q.contains_key(*z) {
            return Err(ConstructError::NotExtendable { z: (*z).clone() });
        }
    }
    for (z, l) in &rows {
        if !(&shifted(l, &j) + &set_poly(&q[*z])).is_nonneg() {
            return Err(ConstructError::ExtensionRowBound { z: (*z).clone() });
        }
    }
    let k = base.p.b_degree().unwrap_or(0);
    let top = base.p.b_layer(k);
    for (z, l) in &rows {
        if top.contains(z) {
            continue;
        }
        for &c in &j {
            let col = m.get(&c).unwrap_or(empty());
            if !(&shifted(l, col) + &set_poly(l)).is_nonneg() {
                return Err(ConstructError::ExtensionShifted {
                    z: (*z).clone(),
                    j: c,
                });
            }
        }
    }
    let mut p = base.p.clone();
    for (z, l) in &rows {
        p += &row(z, l);
    }
    let degree = code_degree(&p, &base.s);
    assemble(p, base.s.clone(), degree)
}

/// `(P_0 + ... + P_r, S)`.
pub fn peel_layers(f: &FactorizationPair, r: usize) -> Result<FactorizationPair, ConstructError> {
    require_positive_code(f)?;
    let (j, m) = s_shape(&f.s)?;
    require_columns_in_j(&j, &m)?;
    if f.p.b_layer(r).is_zero() {
        return Err(ConstructError::ZeroLayer { r });
    }
    let p: NcPoly = (0..=r).map(|g| f.p.b_layer(g)).sum();
    let degree = code_degree(&p, &f.s);
    assemble(p, f.s.clone(), degree)
}

/// Parameters of a 4-code with nested rows over `I' = I`:
/// `P = a^I + sum_i a^i b a^(L_i) + sum_(i, l in L_i) a^i b a^l b a^(L_(i,l))`,
/// `S = a^J + sum_(j in J') a^(M_j) b a^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourCodeSpec {
    pub krasner: KrasnerPair,
    #[serde(rename = "Jprime")]
    pub j_prime: IntSet,
    /// `i -> L_i`, `i` in `I`.
    #[serde(rename = "L")]
    pub l: BTreeMap<u32, IntSet>,
    /// `j -> M_j`, `j` in `J'`.
    #[serde(rename = "M")]
    pub m: BTreeMap<u32, IntSet>,
    /// `(i, l, L_(i,l))` with `l` in `L_i`.
    #[serde(rename = "L2")]
    pub l2: Vec<(u32, u32, IntSet)>,
}

impl FourCodeSpec {
    fn l_of(&self, i: u32) -> &IntSet {
        self.l.get(&i).unwrap_or(empty())
    }

    fn m_of(&self, j: u32) -> &IntSet {
        self.m.get(&j).unwrap_or(empty())
    }

    fn l2_map(&self) -> BTreeMap<(u32, u32), &IntSet> {
        self.l2.iter().map(|(i, l, s)| ((*i, *l), s)).collect()
    }

    fn validate(&self) -> Result<(), ConstructError> {
        require_krasner(&self.krasner)?;
        let invalid = |reason: String| Err(ConstructError::InvalidSpec { reason });
        if let Some(i) = self.l.keys().find(|i| !self.krasner.i.contains(i)) {
            return invalid(format!(
                "L_{i} given but {i} is not in I; only rows over I are supported"
            ));
        }
        if let Some(j) = self.m.keys().find(|j| !self.j_prime.contains(j)) {
            return invalid(format!("M_{j} given but {j} is not in J'"));
        }
        let mut seen = BTreeMap::new();
        for (i, l, _) in &self.l2 {
            if !self.l_of(*i).contains(l) {
                return invalid(format!("L_({i},{l}) given but {l} is not in L_{i}"));
            }
            if seen.insert((*i, *l), ()).is_some() {
                return invalid(format!("L_({i},{l}) given twice"));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> NcPoly {
        let mut p = NcPoly::from_upoly(&self.krasner.i_poly());
        for &i in &self.krasner.i {
            p += &row(&Word::a_pow(i), self.l_of(i));
        }
        for (i, l, x) in &self.l2 {
            p += &row(&Word::from_runs(vec![*i, *l]), x);
        }
        p
    }

    pub fn s(&self) -> NcPoly {
        let mut s = NcPoly::from_upoly(&self.krasner.j_poly());
        for &j in &self.j_prime {
            for &e in self.m_of(j) {
                s.add_term(Word::from_runs(vec![e, j]), 1.into());
            }
        }
        s
    }

    /// `P_2 b S_0 + P_1 b S_1 + P_2 (a-1) S_1`, the part of the code layer
    /// with three `b`s that depends on the nested rows.
    pub fn x3(&self) -> NcPoly {
        let pl = self.p();
        let s = self.s();
        let (p1, p2) = (pl.b_layer(1), pl.b_layer(2));
        let (s0, s1) = (s.b_layer(0), s.b_layer(1));
        let b = NcPoly::letter_b();
        &(&(&(&p2 * &b) * &s0) + &(&(&p1 * &b) * &s1)) + &(&(&p2 * &NcPoly::a_minus_one()) * &s1)
    }

    /// The two inner conditions for every `(i, l)`, `l` in `L_i`, and `j` in `J'`.
    pub fn check_inner(&self) -> Result<(), ConstructError> {
        let l2 = self.l2_map();
        for &i in &self.krasner.i {
            for &l in self.l_of(i) {
                let x = l2.get(&(i, l)).copied().unwrap_or(empty());
                for &j in &self.j_prime {
                    let m = self.m_of(j);
                    let mut poly = &shifted(x, m) + &set_poly(m);
                    if self.krasner.j.contains(&j) {
                        poly = &poly + &set_poly(x);
                        if !poly.is_nonneg() {
                            return Err(ConstructError::InnerHoles { i, l, j });
                        }
                    } else if !poly.is_nonneg() {
                        return Err(ConstructError::InnerShifted { i, l, j });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Checks the nested-row 4-code conditions and returns `(P, S)`.
pub fn check_four_code(spec: &FourCodeSpec) -> Result<FactorizationPair, ConstructError> {
    spec.validate()?;
    let k = &spec.krasner;
    let j_poly = k.j_poly();

    let mut r: BTreeMap<u32, IntSet> = BTreeMap::new();
    for &i in &k.i {
        let tile = &shifted(spec.l_of(i), &k.j) + &j_poly;
        match tile.to_set() {
            Some(set) => r.insert(i, set),
            None => return Err(ConstructError::RowTile { i }),
        };
    }
    for &j in &spec.j_prime {
        if !spec.m_of(j).is_empty() && !r.values().any(|set| set.contains(&j)) {
            return Err(ConstructError::ColumnSupport { j });
        }
    }
    for &j in &spec.j_prime {
        let i_j = ExpPoly::from_exponents(
            r.iter()
                .filter(|(_, set)| set.contains(&j))
                .map(|(i, _)| *i),
        );
        if !(&shifted(spec.m_of(j), &k.i) + &i_j).is_nonneg() {
            return Err(ConstructError::ColumnBound { j });
        }
    }
    spec.check_inner()?;

    let l2 = spec.l2_map();
    let mut r2: BTreeMap<(u32, u32), IntSet> = BTreeMap::new();
    for &i in &k.i {
        for &l in spec.l_of(i) {
            let x = l2.get(&(i, l)).copied().unwrap_or(empty());
            match (&shifted(x, &k.j) + &j_poly).to_set() {
                Some(set) => r2.insert((i, l), set),
                None => return Err(ConstructError::SecondRowTile { i, l }),
            };
        }
    }
    for &i in &k.i {
        for &j in &spec.j_prime {
            let m = spec.m_of(j);
            let inner = &shifted(spec.l_of(i), m) + &set_poly(m);
            for (l, c) in inner.iter() {
                if c.sign() != num_bigint::Sign::Minus {
                    continue;
                }
                let covered = r2
                    .get(&(i, l))
                    .map_or(k.j.contains(&j), |set| set.contains(&j));
                if !covered {
                    return Err(ConstructError::SecondRowCover { i, l, j });
                }
            }
        }
    }

    let (p, s) = (spec.p(), spec.s());
    let degree = code_degree(&p, &s);
    assemble(p, s, degree)
}
