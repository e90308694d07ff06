//! Factorizations of the cyclic group `Z_n`: Krasner pairs, group
//! factorizations and the Hajós characterization through pairs `(M, L)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::upoly::{ExpPoly, IntSet};

/// Largest `n` accepted by the subset-division enumeration by default.
pub const DEFAULT_ENUM_BOUND: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclicError {
    #[error("the group order n must be positive")]
    ZeroModulus,
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: u32, bound: u32 },
    #[error("(T, R) is not a factorization of Z_{n}")]
    NotAFactorization { n: u32 },
}

/// A pair `(I, J)` with `a^I a^J = 1 + a + ... + a^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KrasnerPair {
    #[serde(rename = "I")]
    pub i: IntSet,
    #[serde(rename = "J")]
    pub j: IntSet,
    pub n: u32,
}

impl KrasnerPair {
    pub fn new(i: IntSet, j: IntSet, n: u32) -> Self {
        KrasnerPair { i, j, n }
    }

    pub fn is_valid(&self) -> bool {
        verify_krasner(&self.i, &self.j, self.n)
    }

    pub fn swapped(&self) -> Self {
        KrasnerPair {
            i: self.j.clone(),
            j: self.i.clone(),
            n: self.n,
        }
    }

    pub fn i_poly(&self) -> ExpPoly {
        ExpPoly::from_set(&self.i)
    }

    pub fn j_poly(&self) -> ExpPoly {
        ExpPoly::from_set(&self.j)
    }

    fn sort_key(&self) -> (usize, &IntSet, &IntSet) {
        (self.i.len(), &self.i, &self.j)
    }
}

/// A factorization `(T, R)` of `Z_n`; elements are kept in `N`, not reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFactorization {
    #[serde(rename = "T")]
    pub t: IntSet,
    #[serde(rename = "R")]
    pub r: IntSet,
    pub n: u32,
}

/// Krasner pair and sets `(M, L)` with `a^T = a^M (a-1) a^I + a^I` and
/// `a^R = a^L (a-1) a^J + a^J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HajosWitness {
    pub krasner: KrasnerPair,
    #[serde(rename = "M")]
    pub m: IntSet,
    #[serde(rename = "L")]
    pub l: IntSet,
}

impl HajosWitness {
    /// Re-checks both identities against `(T, R)`.
    pub fn certifies(&self, t: &IntSet, r: &IntSet) -> bool {
        self.krasner.is_valid()
            && hajos_side(&self.m, &self.krasner.i) == ExpPoly::from_set(t)
            && hajos_side(&self.l, &self.krasner.j) == ExpPoly::from_set(r)
    }

    pub fn is_strong(&self) -> bool {
        is_strong_hajos(&self.m, &self.l)
    }
}

/// `a^M (a-1) a^I + a^I`.
pub fn hajos_side(m: &IntSet, i: &IntSet) -> ExpPoly {
    let ip = ExpPoly::from_set(i);
    &(&ExpPoly::from_set(m).times_a_minus_one() * &ip) + &ip
}

/// Every residue mod `n` is `t + r` for exactly one `(t, r)` in `T x R`.
pub fn is_factorization(t: &IntSet, r: &IntSet, n: u32) -> Result<bool, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    if t.is_empty() || r.is_empty() || t.len() as u64 * r.len() as u64 != u64::from(n) {
        return Ok(false);
    }
    let mut seen = vec![false; n as usize];
    for &x in t {
        for &y in r {
            let k = ((u64::from(x) + u64::from(y)) % u64::from(n)) as usize;
            if std::mem::replace(&mut seen[k], true) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `a^I a^J = 1 + a + ... + a^(n-1)`.
pub fn verify_krasner(i: &IntSet, j: &IntSet, n: u32) -> bool {
    match ExpPoly::geometric(n) {
        Ok(g) => &ExpPoly::from_set(i) * &ExpPoly::from_set(j) == g,
        Err(_) => false,
    }
}

/// All Krasner pairs of `Z_n` by subset division, with the default bound.
pub fn enumerate_krasner(n: u32) -> Result<Vec<KrasnerPair>, CyclicError> {
    enumerate_krasner_bounded(n, DEFAULT_ENUM_BOUND)
}

/// All Krasner pairs of `Z_n` in canonical order: for every `I ∋ 0` inside
/// `{0..n-1}`, divide the geometric polynomial by `a^I` and keep exact
/// quotients with coefficients in `{0, 1}`.
pub fn enumerate_krasner_bounded(n: u32, bound: u32) -> Result<Vec<KrasnerPair>, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    if n > bound {
        return Err(CyclicError::BoundExceeded { n, bound });
    }
    let g = ExpPoly::geometric(n).expect("n > 0");
    let mut out = Vec::new();
    let rest = n - 1;
    for mask in 0u64..(1u64 << rest) {
        // |I| must divide n
        let size = mask.count_ones() + 1;
        if !n.is_multiple_of(size) {
            continue;
        }
        let i: IntSet = std::iter::once(0)
            .chain((0..rest).filter(|b| mask >> b & 1 == 1).map(|b| b + 1))
            .collect();
        if let Some(q) = g.div_exact(&ExpPoly::from_set(&i)) {
            if let Some(j) = q.to_set() {
                out.push(KrasnerPair { i, j, n });
            }
        }
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// Krasner pairs from divisor chains `1 = m_0 | m_1 | ... | m_s = n`: `I`
/// collects the blocks `{0, m_t, ..., m_(t+1) - m_t}` of even steps, `J`
/// those of odd steps, and both orientations are returned. Every pair is
/// checked with [`verify_krasner`] before it is kept.
pub fn enumerate_krasner_chain(n: u32) -> Result<Vec<KrasnerPair>, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    let mut found: BTreeSet<(IntSet, IntSet)> = BTreeSet::new();
    let mut chain = vec![1u32];
    divisor_chains(n, &mut chain, &mut |chain| {
        let mut sides = [IntSet::from([0]), IntSet::from([0])];
        for (step, w) in chain.windows(2).enumerate() {
            let block: Vec<u32> = (0..w[1] / w[0]).map(|k| k * w[0]).collect();
            let side = &mut sides[step % 2];
            *side = side
                .iter()
                .flat_map(|&x| block.iter().map(move |&y| x + y))
                .collect();
        }
        let [i, j] = sides;
        found.insert((j.clone(), i.clone()));
        found.insert((i, j));
    });
    let mut out: Vec<KrasnerPair> = found
        .into_iter()
        .map(|(i, j)| KrasnerPair { i, j, n })
        .filter(KrasnerPair::is_valid)
        .collect();
    sort_canonical(&mut out);
    Ok(out)
}

fn divisor_chains(n: u32, chain: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    let last = *chain.last().unwrap();
    if last == n {
        visit(chain);
        return;
    }
    let mut next = 2 * last;
    while next <= n {
        if n.is_multiple_of(next) {
            chain.push(next);
            divisor_chains(n, chain, visit);
            chain.pop();
        }
        next += last;
    }
}

/// Krasner pairs used by the Hajós search: the subset-division enumeration
/// when `n` is within the default bound, the divisor-chain construction
/// beyond it.
pub fn krasner_pairs(n: u32) -> Result<Vec<KrasnerPair>, CyclicError> {
    if n <= DEFAULT_ENUM_BOUND {
        enumerate_krasner(n)
    } else {
        enumerate_krasner_chain(n)
    }
}

fn sort_canonical(pairs: &mut [KrasnerPair]) {
    pairs.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
}

/// Default cap on the elements of `M` and `L`.
pub fn default_witness_bound(n: u32) -> u32 {
    2 * n
}

/// Solves `a^T = a^M (a-1) a^I + a^I` for a set `M`. The quotient is unique
/// when it exists, so this is complete for the given `I`.
pub fn solve_side(t: &IntSet, i: &IntSet) -> Option<IntSet> {
    let ip = ExpPoly::from_set(i);
    let diff = &ExpPoly::from_set(t) - &ip;
    diff.div_exact(&ip.times_a_minus_one())?.to_set()
}

/// All Hajós witnesses for `(T, R)` with `max M, max L <= bound`, one per
/// admissible Krasner pair, in canonical Krasner order.
pub fn hajos_witnesses(
    t: &IntSet,
    r: &IntSet,
    n: u32,
    bound: u32,
) -> Result<Vec<HajosWitness>, CyclicError> {
    if !is_factorization(t, r, n)? {
        return Err(CyclicError::NotAFactorization { n });
    }
    let within = |s: &IntSet| s.last().is_none_or(|&x| x <= bound);
    let mut out = Vec::new();
    for k in krasner_pairs(n)? {
        let Some(m) = solve_side(t, &k.i) else {
            continue;
        };
        let Some(l) = solve_side(r, &k.j) else {
            continue;
        };
        if within(&m) && within(&l) {
            out.push(HajosWitness { krasner: k, m, l });
        }
    }
    Ok(out)
}

/// The first Hajós witness in canonical order, or `None` within the bound.
pub fn hajos_witness(
    t: &IntSet,
    r: &IntSet,
    n: u32,
    bound: u32,
) -> Result<Option<HajosWitness>, CyclicError> {
    Ok(hajos_witnesses(t, r, n, bound)?.into_iter().next())
}

/// `a^M (a-1) a^L + a^L >= 0` or `a^M (a-1) a^L + a^M >= 0`.
pub fn is_strong_hajos(m: &IntSet, l: &IntSet) -> bool {
    let mp = ExpPoly::from_set(m);
    let lp = ExpPoly::from_set(l);
    let core = &mp.times_a_minus_one() * &lp;
    (&core + &lp).is_nonneg() || (&core + &mp).is_nonneg()
}

/// `a^M (a-1) a^L + a^M + a^L`.
pub fn holes_poly(m: &IntSet, l: &IntSet) -> ExpPoly {
    let mp = ExpPoly::from_set(m);
    let lp = ExpPoly::from_set(l);
    &(&(&mp.times_a_minus_one() * &lp) + &mp) + &lp
}
