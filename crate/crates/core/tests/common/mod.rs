//! Shared oracles and generators for the integration tests. The oracles
//! work on plain dense `i64` vectors and strings so that they do not share
//! code with the library paths they check.
#![allow(dead_code)]

pub mod sweeps;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fcodes::codes::CodeSpec;
use fcodes::cyclic::KrasnerPair;
use fcodes::ncpoly::{NcPoly, Word};
use fcodes::upoly::{ExpPoly, IntSet};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::Rng;

pub type Dense = Vec<i64>;

pub fn dense(set: &IntSet) -> Dense {
    let mut v = vec![0; set.last().map_or(0, |m| *m as usize + 1)];
    for &e in set {
        v[e as usize] += 1;
    }
    v
}

pub fn dense_mul(a: &[i64], b: &[i64]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn dense_add(a: &[i64], b: &[i64]) -> Dense {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

pub fn dense_scale(a: &[i64], k: i64) -> Dense {
    a.iter().map(|x| x * k).collect()
}

/// `v (a - 1)`.
pub fn times_am1(a: &[i64]) -> Dense {
    dense_mul(a, &[-1, 1])
}

pub fn geo(n: u32) -> Dense {
    vec![1; n as usize]
}

/// Drops trailing zero coefficients.
pub fn trim(mut a: Dense) -> Dense {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn nonneg(a: &[i64]) -> bool {
    a.iter().all(|x| *x >= 0)
}

pub fn zero_one(a: &[i64]) -> bool {
    a.iter().all(|x| *x == 0 || *x == 1)
}

pub fn from_dense_set(a: &[i64]) -> IntSet {
    a.iter()
        .enumerate()
        .filter(|(_, x)| **x != 0)
        .map(|(i, _)| i as u32)
        .collect()
}

/// `a^X (a-1) a^Y + a^Z`.
pub fn shifted_plus(x: &IntSet, y: &IntSet, z: &IntSet) -> Dense {
    dense_add(&dense_mul(&times_am1(&dense(x)), &dense(y)), &dense(z))
}

/// Dense vector of an `ExpPoly` with small coefficients.
pub fn to_dense(p: &ExpPoly) -> Dense {
    let mut v = vec![0; p.degree().map_or(0, |d| d as usize + 1)];
    for (e, c) in p.iter() {
        v[e as usize] = i64::try_from(c).expect("small coefficient");
    }
    v
}

/// Every pair `(I, J)` of subsets of `{0, ..., n-1}` whose sums `i + j`
/// cover `{0, ..., n-1}` exactly once, by direct bitmask tiling.
pub fn krasner_oracle(n: u32) -> Vec<(IntSet, IntSet)> {
    assert!((1..=20).contains(&n));
    let full: u64 = (1u64 << n) - 1;
    let masks: Vec<u64> = (0..(1u64 << n)).filter(|m| m & 1 == 1).collect();
    let bits = |m: u64| (0..n).filter(move |b| m >> b & 1 == 1);
    let mut out = Vec::new();
    for &im in &masks {
        let k = im.count_ones();
        if !n.is_multiple_of(k) {
            continue;
        }
        for &jm in &masks {
            if jm.count_ones() * k != n {
                continue;
            }
            let mut acc = 0u64;
            let mut ok = true;
            for i in bits(im) {
                let shifted = jm << i;
                if shifted & acc != 0 || shifted & !full != 0 {
                    ok = false;
                    break;
                }
                acc |= shifted;
            }
            if ok && acc == full {
                out.push((bits(im).collect(), bits(jm).collect()));
            }
        }
    }
    out
}

pub fn oracle_pairs(n: u32) -> Vec<KrasnerPair> {
    krasner_oracle(n)
        .into_iter()
        .map(|(i, j)| KrasnerPair::new(i, j, n))
        .collect()
}

/// Words of a code as strings over `{a, b}`.
pub fn code_strings(code: &CodeSpec) -> Vec<String> {
    code.words().iter().map(|w| w.to_string()).collect()
}

/// `sum 2^(-|w|) == 1`, computed over a common power-of-two denominator.
pub fn kraft_is_one(words: &[String]) -> bool {
    let max = words.iter().map(String::len).max().unwrap_or(0);
    let total: BigInt = words
        .iter()
        .map(|w| BigInt::from(1) << (max - w.len()))
        .sum();
    total == BigInt::from(1) << max
}

/// Looks for one word with two distinct factorizations among all products
/// of at most `max_factors` codewords.
pub fn brute_force_ambiguity(words: &[String], max_factors: usize) -> Option<String> {
    let mut seen: HashMap<String, Vec<usize>> = HashMap::new();
    let mut frontier: Vec<(String, Vec<usize>)> = vec![(String::new(), Vec::new())];
    for _ in 0..max_factors {
        let mut next = Vec::new();
        for (s, seq) in &frontier {
            for (k, w) in words.iter().enumerate() {
                let t = format!("{s}{w}");
                let mut sq = seq.clone();
                sq.push(k);
                match seen.get(&t) {
                    Some(other) if *other != sq => return Some(t),
                    Some(_) => {}
                    None => {
                        seen.insert(t.clone(), sq.clone());
                        next.push((t, sq));
                    }
                }
            }
        }
        frontier = next;
    }
    None
}

/// `P(A-1)S + 1` on string-keyed maps, by expanding products word by word.
pub fn code_polynomial_oracle(p: &NcPoly, s: &NcPoly) -> BTreeMap<String, i64> {
    let pm: Vec<(String, i64)> = p
        .terms()
        .map(|(w, c)| (letters(w), i64::try_from(c).unwrap()))
        .collect();
    let sm: Vec<(String, i64)> = s
        .terms()
        .map(|(w, c)| (letters(w), i64::try_from(c).unwrap()))
        .collect();
    let mid = [("a", 1i64), ("b", 1), ("", -1)];
    let mut out: BTreeMap<String, i64> = BTreeMap::new();
    for (x, cx) in &pm {
        for (m, cm) in mid {
            for (y, cy) in &sm {
                *out.entry(format!("{x}{m}{y}")).or_default() += cx * cm * cy;
            }
        }
    }
    *out.entry(String::new()).or_default() += 1;
    out.retain(|_, c| *c != 0);
    out
}

pub fn letters(w: &Word) -> String {
    if w.is_empty() {
        String::new()
    } else {
        w.to_string()
    }
}

pub fn random_subset(rng: &mut StdRng, lo: u32, hi: u32, p: f64) -> IntSet {
    (lo..=hi).filter(|_| rng.gen_bool(p)).collect()
}

pub fn pick<'a, T>(rng: &mut StdRng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

pub fn set(xs: &[u32]) -> IntSet {
    xs.iter().copied().collect()
}

pub fn word_set(p: &NcPoly) -> BTreeSet<String> {
    p.support().map(letters).collect()
}
