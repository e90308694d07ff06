//! Exhaustive and randomized sweeps shared by the property tests (small
//! bounds) and the acceptance harness (full bounds).

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use fcodes::codes::{code_from_factorization, is_maximal_code};
use fcodes::construct::{
    build_tower, check_c1, check_four_code, check_three_code, extend_layer, extension_rows,
    krasner_seed, peel_layers, ConstructError, FourCodeSpec, TeocExtension, ThreeCodeSpec,
    TowerSpec,
};
use fcodes::cyclic::{holes_poly, KrasnerPair};
use fcodes::factorization::{
    check_s_closure, is_positive, krasner_shape, layer_decompose, search_next_layer,
    verify_factorization, FactorizationPair,
};
use fcodes::ncpoly::{NcPoly, Word};
use fcodes::upoly::search::{positive_part, CoefficientSearch};
use fcodes::upoly::{ExpPoly, IntSet};
use rand::rngs::StdRng;
use rand::Rng;

use super::*;

/// Case and failure counts with a few failure descriptions.
#[derive(Debug, Default)]
pub struct Tally {
    pub cases: u64,
    pub failures: u64,
    pub examples: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 5 {
                self.examples.push(describe());
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        for e in other.examples {
            if self.examples.len() < 5 {
                self.examples.push(e);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} cases, {} failures", self.cases, self.failures);
        if let Some(e) = self.examples.first() {
            s.push_str(&format!("; first: {e}"));
        }
        s
    }
}

fn poly(d: &[i64]) -> ExpPoly {
    ExpPoly::from_dense(d)
}

/// All `X` in `{0, ..., bound}` with `kernel_k * a^X + base_k >= 0` for
/// every constraint `k`.
pub fn admissible(bound: u32, constraints: &[(Dense, Dense)]) -> Vec<IntSet> {
    let mut search = CoefficientSearch::subsets(bound);
    for (kernel, base) in constraints {
        search = search.require_nonneg(&poly(kernel), &poly(base));
    }
    search.collect().iter().map(|a| positive_part(a)).collect()
}

fn am1_set(x: &IntSet) -> Dense {
    times_am1(&dense(x))
}

/// Column sets `M` with `a^M (a-1) a^I + a^I >= 0`.
pub fn column_sets(k: &KrasnerPair, bound: u32) -> Vec<IntSet> {
    admissible(bound, &[(am1_set(&k.i), dense(&k.i))])
}

/// Every `M` in `{0..2n}` with `a^M (a-1) a^I + a^I >= 0` gives a 0/1
/// polynomial, over all Krasner pairs with `n <= nmax`.
pub fn ul_sweep(nmax: u32) -> Tally {
    let mut t = Tally::default();
    for n in 1..=nmax {
        for k in oracle_pairs(n) {
            for m in column_sets(&k, 2 * n) {
                let v = shifted_plus(&m, &k.i, &k.i);
                t.check(nonneg(&v) && zero_one(&v), || {
                    format!("n={n} I={:?} M={m:?}", k.i)
                });
            }
        }
    }
    t
}

/// `a^M (a-1) a^L + a^M + a^L` is 0/1 whenever `M` and `L` satisfy the
/// two Hajós inequalities against the same Krasner pair.
pub fn holes_sweep(nmax: u32) -> Tally {
    let mut t = Tally::default();
    let mut buf = Vec::new();
    for n in 1..=nmax {
        for k in oracle_pairs(n) {
            let ms: Vec<(IntSet, Dense, Dense)> = column_sets(&k, 2 * n)
                .into_iter()
                .map(|m| {
                    let d = dense(&m);
                    (m, times_am1(&d), d)
                })
                .collect();
            let ls: Vec<(IntSet, Dense)> = column_sets(&k.swapped(), 2 * n)
                .into_iter()
                .map(|l| {
                    let d = dense(&l);
                    (l, d)
                })
                .collect();
            let mut pair = 0usize;
            for (m, m_am1, dm) in &ms {
                for (l, dl) in &ls {
                    holes_dense(m_am1, dm, dl, &mut buf);
                    // The library path allocates BigInt polynomials, so it
                    // is compared on a stride of the pairs.
                    let lib_ok = !pair.is_multiple_of(61)
                        || to_dense(&holes_poly(m, l)) == trim(buf.clone());
                    pair += 1;
                    t.check(zero_one(&buf) && lib_ok, || {
                        format!("n={n} I={:?} M={m:?} L={l:?}", k.i)
                    });
                }
            }
        }
    }
    t
}

fn holes_dense(m_am1: &[i64], dm: &[i64], dl: &[i64], out: &mut Dense) {
    out.clear();
    out.resize((m_am1.len() + dl.len()).max(dm.len()), 0);
    for (i, x) in m_am1.iter().enumerate() {
        if *x != 0 {
            for (j, y) in dl.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
    }
    for (i, x) in dm.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in dl.iter().enumerate() {
        out[i] += x;
    }
}

/// With `a^L (a-1) a^J + k a^J >= 0` (`1 <= k <= 4`) the coefficient of
/// every `a^j`, `j` in `J`, in `a^L (a-1) a^J + a^J` is at most 1.
pub fn co1_sweep(nmax: u32) -> Tally {
    let mut t = Tally::default();
    for n in 1..=nmax {
        for k in oracle_pairs(n) {
            for mult in 1..=4 {
                let base = dense_scale(&dense(&k.j), mult);
                for l in admissible(2 * n, &[(am1_set(&k.j), base)]) {
                    let v = shifted_plus(&l, &k.j, &k.j);
                    let ok =
                        k.j.iter()
                            .all(|&j| v.get(j as usize).copied().unwrap_or(0) <= 1);
                    t.check(ok, || format!("n={n} J={:?} L={l:?} k={mult}", k.j));
                }
            }
        }
    }
    t
}

/// (i) `(a^H (a-1) + k) [n] >= 0` implies `(a^H (a-1) + 1) [n]` is 0/1;
/// (ii) a nonnegative multiset `H` with `(a^H (a-1) + 1) [n] >= 0` is a set.
pub fn lg0_sweep(nmax: u32) -> Tally {
    let mut t = Tally::default();
    for n in 1..=nmax {
        let g = geo(n);
        let kernel = times_am1(&g);
        let bound = 2 * n;
        for k in 0..=4 {
            let search = CoefficientSearch::subsets(bound)
                .require_nonneg(&poly(&kernel), &poly(&dense_scale(&g, k)));
            let _ = search.for_each(|a, _| {
                let h: IntSet = positive_part(a);
                let v = dense_mul(&dense_add(&times_am1(&dense(&h)), &[1]), &g);
                let hyp = nonneg(&dense_mul(&dense_add(&times_am1(&dense(&h)), &[k]), &g));
                t.check(hyp && zero_one(&v), || format!("(i) n={n} k={k} H={h:?}"));
                ControlFlow::Continue(())
            });
        }
        let multiset = CoefficientSearch::with_choices(bound.min(12), vec![0, 1, 2, 3])
            .require_nonneg(&poly(&kernel), &poly(&g));
        let _ = multiset.for_each(|a, _| {
            let v = dense_mul(&dense_add(&times_am1(a), &[1]), &g);
            t.check(nonneg(&v) && a.iter().all(|c| *c <= 1), || {
                format!("(ii) n={n} H={a:?}")
            });
            ControlFlow::Continue(())
        });
    }
    t
}

/// Disjoint `X, X'` in `{0..b}`, `k <= kmax`: `a^X (a-1) - a^X' (a-1) + k >= 0`
/// forces `X'` empty, and `k > 0` when `X` is nonempty. Brute force.
pub fn l3_sweep(b: u32, kmax: i64) -> Tally {
    let mut t = Tally::default();
    let width = b as usize + 1;
    let total = 3usize.pow(width as u32);
    for code in 0..total {
        let mut c = vec![0i64; width];
        let mut x = code;
        for slot in c.iter_mut() {
            *slot = [0, 1, -1][x % 3];
            x /= 3;
        }
        let base = times_am1(&c);
        for k in 0..=kmax {
            let v = dense_add(&base, &[k]);
            if !nonneg(&v) {
                continue;
            }
            let has_neg = c.contains(&-1);
            let has_pos = c.contains(&1);
            t.check(!has_neg && (!has_pos || k > 0), || {
                format!("X coeffs {c:?}, k={k}")
            });
        }
    }
    t
}

/// Krasner `(I, J)` with `n <= nmax`, disjoint `L, L'` in `{0..2n}`,
/// `k <= 3`: `a^L (a-1) a^J - a^L' (a-1) a^J + k a^J >= 0` forces `L'`
/// empty, and `k > 0` when `L` is nonempty.
pub fn l4c_sweep(nmax: u32) -> Tally {
    let mut t = Tally::default();
    for n in 1..=nmax {
        for kp in oracle_pairs(n) {
            let kernel = am1_set(&kp.j);
            for k in 0..=3 {
                let base = dense_scale(&dense(&kp.j), k);
                let search =
                    CoefficientSearch::signed(2 * n).require_nonneg(&poly(&kernel), &poly(&base));
                let _ = search.for_each(|a, _| {
                    let l: IntSet = positive_part(a);
                    let lp: IntSet = a
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c < 0)
                        .map(|(e, _)| e as u32)
                        .collect();
                    let lib = fcodes::upoly::telescoped_ineq(
                        &ExpPoly::from_set(&l),
                        &ExpPoly::from_set(&lp),
                        k as u32,
                        &ExpPoly::from_set(&kp.j),
                    );
                    t.check(lib && lp.is_empty() && (l.is_empty() || k > 0), || {
                        format!("n={n} J={:?} L={l:?} L'={lp:?} k={k}", kp.j)
                    });
                    ControlFlow::Continue(())
                });
            }
        }
    }
    t
}

/// Everything a constructed pair must satisfy.
pub fn audit(label: &str, f: &FactorizationPair, t: &mut Tally) {
    let code = match code_from_factorization(&f.p, &f.s) {
        Ok(c) => c,
        Err(e) => {
            t.check(false, || format!("{label}: {e}"));
            return;
        }
    };
    let strings = code_strings(&code);
    let oracle = code_polynomial_oracle(&f.p, &f.s);
    let expected: BTreeMap<String, i64> = code.words().iter().map(|w| (letters(w), 1)).collect();
    t.check(oracle == expected, || {
        format!("{label}: word-level expansion differs")
    });
    t.check(verify_factorization(&code, f), || {
        format!("{label}: verify_factorization")
    });
    t.check(is_positive(f), || format!("{label}: not positive"));
    t.check(is_maximal_code(&code), || {
        format!("{label}: not a maximal code")
    });
    t.check(kraft_is_one(&strings), || {
        format!("{label}: Kraft sum differs from 1")
    });
}

/// Nonnegative `P_1` whenever `P_0 = a^I`, `S_0 = a^J` are Krasner and
/// `S_1 = sum_(j in J) a^(M_j) b a^j`.
pub fn first_layer_nonneg(f: &FactorizationPair) -> Option<bool> {
    krasner_shape(f).map(|_| f.p.b_layer(1).is_nonneg())
}

/// With `S = a^J + sum_(j in J) a^(M_j) b a^j` and `P >= 0` of top layer
/// `k`, every word of `C_(k+1)` ends in `b a^j` with `j` in `J`.
pub fn top_layer_columns(f: &FactorizationPair) -> Option<bool> {
    let shape = krasner_shape(f)?;
    if !f.p.is_nonneg() {
        return None;
    }
    let k = f.p.b_degree()?;
    let layers = layer_decompose(f).layers;
    let top = layers.get(k + 1)?;
    let ok = top
        .support()
        .all(|w| shape.krasner.j.contains(&w.last_run()));
    Some(ok)
}

/// Characteristic `P_0`, `S_0` for codes containing `a^p`, `p` prime,
/// when `S = S_0 + S_1` with `S_1` characteristic.
pub fn prime_base_characteristic(f: &FactorizationPair, n: u32) -> Option<bool> {
    let prime = n >= 2 && (2..n).all(|d| !n.is_multiple_of(d));
    if !prime || f.s.b_degree().is_some_and(|d| d > 1) || !f.s.b_layer(1).is_characteristic() {
        return None;
    }
    Some(f.p.b_layer(0).is_characteristic() && f.s.b_layer(0).is_characteristic())
}

/// Results of the construction sweep at one Krasner pair.
#[derive(Default)]
pub struct Built {
    pub pairs: Vec<(String, FactorizationPair)>,
    pub three_codes: Vec<ThreeCodeSpec>,
    /// Constructions expected to succeed that did not, or internal errors.
    pub errors: Vec<String>,
    pub rejected_four_codes: u64,
}

fn random_tower_levels(
    k: &KrasnerPair,
    cols: &[IntSet],
    rng: &mut StdRng,
    levels: usize,
) -> Vec<BTreeMap<Word, IntSet>> {
    let mut below: Vec<Word> = k.j.iter().map(|&j| Word::a_pow(j)).collect();
    let mut out = Vec::new();
    for _ in 0..levels {
        if below.is_empty() || below.len() > 16 {
            break;
        }
        let mut map = BTreeMap::new();
        let mut next = Vec::new();
        for w in &below {
            if rng.gen_bool(0.6) {
                let m = pick(rng, cols).clone();
                for &e in &m {
                    let mut runs = vec![e];
                    runs.extend_from_slice(w.runs());
                    next.push(Word::from_runs(runs));
                }
                map.insert(w.clone(), m);
            }
        }
        out.push(map);
        below = next;
    }
    out
}

/// One random S-tower with a single level over `J`.
pub fn random_one_level_tower(k: &KrasnerPair, cols: &[IntSet], rng: &mut StdRng) -> TowerSpec {
    let level =
        k.j.iter()
            .map(|&j| (Word::a_pow(j), pick(rng, cols).clone()))
            .collect();
    TowerSpec {
        krasner: k.clone(),
        levels: vec![level],
    }
}

/// Admissible `L_z` for each `z` of `Q_k`.
pub fn extension_choices(base: &FactorizationPair, bound: u32) -> BTreeMap<Word, Vec<IntSet>> {
    let Ok(q) = extension_rows(base) else {
        return BTreeMap::new();
    };
    let j = fcodes::factorization::a_set(&base.s.b_layer(0)).unwrap_or_default();
    let cols = fcodes::factorization::rows_by_suffix(&base.s.b_layer(1)).unwrap_or_default();
    let k = base.p.b_degree().unwrap_or(0);
    let top = base.p.b_layer(k);
    q.into_iter()
        .map(|(z, jz)| {
            let mut cons = vec![(am1_set(&j), dense(&jz))];
            if !top.contains(&z) {
                for c in &j {
                    let m = cols.get(c).cloned().unwrap_or_default();
                    cons.push((dense_add(&am1_set(&m), &[1]), Vec::new()));
                }
            }
            let sets = admissible(bound, &cons)
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect();
            (z, sets)
        })
        .collect()
}

/// A random nonempty extension, if any row admits one.
pub fn random_extension(
    base: &FactorizationPair,
    bound: u32,
    rng: &mut StdRng,
) -> Option<TeocExtension> {
    let choices = extension_choices(base, bound);
    let usable: Vec<(&Word, &Vec<IntSet>)> =
        choices.iter().filter(|(_, v)| !v.is_empty()).collect();
    if usable.is_empty() {
        return None;
    }
    let mut l = BTreeMap::new();
    for (z, sets) in &usable {
        if rng.gen_bool(0.4) {
            l.insert((*z).clone(), pick(rng, sets).clone());
        }
    }
    if l.is_empty() {
        let (z, sets) = pick(rng, &usable);
        l.insert((*z).clone(), pick(rng, sets).clone());
    }
    Some(TeocExtension {
        base: base.clone(),
        l,
    })
}

/// The rows `z -> L_z` of the top layer of `P`.
pub fn top_rows(p: &NcPoly) -> BTreeMap<Word, IntSet> {
    let k = p.b_degree().unwrap_or(0);
    let mut out: BTreeMap<Word, IntSet> = BTreeMap::new();
    for w in p.b_layer(k).support() {
        if let Some((z, e)) = w.split_last_b() {
            out.entry(z).or_default().insert(e);
        }
    }
    out
}

/// Peels the top layer off `f` and extends again with the rows read back
/// from it; both must reproduce their inputs exactly.
pub fn round_trip(f: &FactorizationPair) -> Result<(), String> {
    let k = f.p.b_degree().ok_or("P is zero")?;
    if k == 0 {
        return Err("no layer to peel".into());
    }
    let base = peel_layers(f, k - 1).map_err(|e| e.to_string())?;
    let again = extend_layer(&TeocExtension {
        base,
        l: top_rows(&f.p),
    })
    .map_err(|e| e.to_string())?;
    if again == *f {
        Ok(())
    } else {
        Err("extension of the peeled pair differs".into())
    }
}

#[allow(clippy::filter_map_bool_then)]
fn random_three_code(k: &KrasnerPair, cols: &[IntSet], rng: &mut StdRng) -> Option<ThreeCodeSpec> {
    let n = k.n;
    let m: BTreeMap<u32, IntSet> =
        k.j.iter()
            .filter_map(|&j| rng.gen_bool(0.6).then(|| (j, pick(rng, cols).clone())))
            .collect();
    let t: Vec<(u32, IntSet)> =
        k.j.iter()
            .map(|&j| {
                let mj = m.get(&j).cloned().unwrap_or_default();
                (j, from_dense_set(&shifted_plus(&mj, &k.i, &k.i)))
            })
            .collect();
    let candidates: IntSet = t.iter().flat_map(|(_, s)| s.iter().copied()).collect();
    let mut i_prime = IntSet::new();
    let mut l = BTreeMap::new();
    for &i in &candidates {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let j_i: IntSet = t
            .iter()
            .filter(|(_, s)| s.contains(&i))
            .map(|(j, _)| *j)
            .collect();
        let mut cons = vec![(am1_set(&k.j), dense(&j_i))];
        if !k.i.contains(&i) {
            for &j in &k.j {
                let mj = m.get(&j).cloned().unwrap_or_default();
                cons.push((dense_add(&am1_set(&mj), &[1]), Vec::new()));
            }
        }
        let sets = admissible(2 * n, &cons);
        i_prime.insert(i);
        l.insert(i, pick(rng, &sets).clone());
    }
    Some(ThreeCodeSpec {
        krasner: k.clone(),
        i_prime,
        l,
        m,
    })
}

pub fn random_four_code(k: &KrasnerPair, rng: &mut StdRng, admissible_inner: bool) -> FourCodeSpec {
    let n = k.n;
    let rows = admissible(2 * n, &[(am1_set(&k.j), dense(&k.j))]);
    let l: BTreeMap<u32, IntSet> = k.i.iter().map(|&i| (i, pick(rng, &rows).clone())).collect();
    let r: BTreeMap<u32, IntSet> = l
        .iter()
        .map(|(&i, li)| (i, from_dense_set(&shifted_plus(li, &k.j, &k.j))))
        .collect();
    let pool: IntSet = r
        .values()
        .flat_map(|s| s.iter().copied())
        .chain(k.j.iter().copied())
        .collect();
    let j_prime: IntSet = pool.into_iter().filter(|_| rng.gen_bool(0.3)).collect();
    let mut m = BTreeMap::new();
    for &j in &j_prime {
        let i_j: IntSet = r
            .iter()
            .filter(|(_, s)| s.contains(&j))
            .map(|(i, _)| *i)
            .collect();
        let sets = admissible(2 * n, &[(am1_set(&k.i), dense(&i_j))]);
        m.insert(j, pick(rng, &sets).clone());
    }
    let mut l2 = Vec::new();
    for (&i, li) in &l {
        for &e in li {
            if rng.gen_bool(0.3) {
                continue;
            }
            let x = if admissible_inner {
                let mut cons = vec![(am1_set(&k.j), dense(&k.j))];
                for &j in &j_prime {
                    let mj = m.get(&j).cloned().unwrap_or_default();
                    if k.j.contains(&j) {
                        cons.push((dense_add(&am1_set(&mj), &[1]), dense(&mj)));
                    } else {
                        cons.push((am1_set(&mj), dense(&mj)));
                    }
                }
                pick(rng, &admissible(2 * n, &cons)).clone()
            } else {
                random_subset(rng, 0, 2 * n, 0.25)
            };
            l2.push((i, e, x));
        }
    }
    FourCodeSpec {
        krasner: k.clone(),
        j_prime,
        l,
        m,
        l2,
    }
}

/// Runs every construction at one Krasner pair: the seed, towers,
/// 3-codes, extensions (with round trips) and 4-codes.
pub fn construct_at(k: &KrasnerPair, rng: &mut StdRng, draws: usize) -> Built {
    let mut out = Built::default();
    let n = k.n;
    let cols = column_sets(k, 2 * n);
    let push =
        |out: &mut Built, label: String, r: Result<FactorizationPair, ConstructError>| match r {
            Ok(f) => out.pairs.push((label, f)),
            Err(e) => out.errors.push(format!("{label}: {e}")),
        };
    push(&mut out, format!("seed {k:?}"), krasner_seed(k));
    for m in cols.iter().take(draws) {
        let level = k.j.iter().map(|&j| (Word::a_pow(j), m.clone())).collect();
        let spec = TowerSpec {
            krasner: k.clone(),
            levels: vec![level],
        };
        push(&mut out, format!("uniform tower {m:?}"), build_tower(&spec));
    }
    for d in 0..draws {
        let levels = random_tower_levels(k, &cols, rng, 1 + d % 2);
        let spec = TowerSpec {
            krasner: k.clone(),
            levels,
        };
        push(&mut out, format!("random tower {d}"), build_tower(&spec));
    }
    for d in 0..draws {
        if let Some(spec) = random_three_code(k, &cols, rng) {
            push(
                &mut out,
                format!("three-code {d} {spec:?}"),
                check_three_code(&spec),
            );
            out.three_codes.push(spec);
        }
    }
    let bases: Vec<FactorizationPair> = out.pairs.iter().map(|(_, f)| f.clone()).collect();
    for (d, base) in bases.iter().enumerate().take(draws) {
        let mut current = base.clone();
        for step in 0..2 {
            let Some(ext) = random_extension(&current, 2 * n, rng) else {
                break;
            };
            match extend_layer(&ext) {
                Ok(f) => {
                    if let Err(e) = round_trip(&f) {
                        out.errors.push(format!("round trip {d}.{step}: {e}"));
                    }
                    out.pairs.push((format!("extension {d}.{step}"), f.clone()));
                    current = f;
                }
                Err(e) => {
                    out.errors.push(format!("extension {d}.{step}: {e}"));
                    break;
                }
            }
        }
    }
    for d in 0..draws {
        let spec = random_four_code(k, rng, true);
        match check_four_code(&spec) {
            Ok(f) => out.pairs.push((format!("four-code {d}"), f)),
            Err(ConstructError::SecondRowCover { .. }) => out.rejected_four_codes += 1,
            Err(e) => out.errors.push(format!("four-code {d}: {e}")),
        }
    }
    out
}

/// Builds and audits constructions for every Krasner pair at each `n`.
pub struct SoundnessReport {
    pub audit: Tally,
    pub first_layer: Tally,
    pub top_columns: Tally,
    pub prime_base: Tally,
    pub holes_redundancy: Tally,
    pub constructed: usize,
    pub rejected_four_codes: u64,
}

pub fn soundness_sweep(
    ns: std::ops::RangeInclusive<u32>,
    draws: usize,
    rng: &mut StdRng,
) -> SoundnessReport {
    let mut rep = SoundnessReport {
        audit: Tally::default(),
        first_layer: Tally::default(),
        top_columns: Tally::default(),
        prime_base: Tally::default(),
        holes_redundancy: Tally::default(),
        constructed: 0,
        rejected_four_codes: 0,
    };
    for n in ns {
        for k in oracle_pairs(n) {
            let built = construct_at(&k, rng, draws);
            for e in &built.errors {
                rep.audit.check(false, || e.clone());
            }
            rep.constructed += built.pairs.len();
            rep.rejected_four_codes += built.rejected_four_codes;
            for (label, f) in &built.pairs {
                audit(label, f, &mut rep.audit);
                if let Some(ok) = first_layer_nonneg(f) {
                    rep.first_layer.check(ok, || label.clone());
                }
                if let Some(ok) = top_layer_columns(f) {
                    rep.top_columns.check(ok, || label.clone());
                }
                if let Some(ok) = prime_base_characteristic(f, n) {
                    rep.prime_base.check(ok, || label.clone());
                }
            }
            for spec in &built.three_codes {
                for &i in spec.i_prime.intersection(&k.i) {
                    for &j in &k.j {
                        let l = spec.l.get(&i).cloned().unwrap_or_default();
                        let m = spec.m.get(&j).cloned().unwrap_or_default();
                        let v = dense_add(&shifted_plus(&m, &l, &m), &dense(&l));
                        rep.holes_redundancy
                            .check(zero_one(&v), || format!("{spec:?} i={i} j={j}"));
                    }
                }
            }
        }
    }
    rep
}

/// `C_1 >= 0` and the column/row conditions agree on every single-row,
/// single-column parameter choice with elements up to `bound(n)`.
pub fn c1_agreement_exhaustive(nmax: u32, bound: impl Fn(u32) -> u32) -> Tally {
    let mut t = Tally::default();
    for n in 1..=nmax {
        let b = bound(n);
        let subsets: Vec<IntSet> = (0..(1u32 << (b + 1)))
            .map(|mask| (0..=b).filter(|e| mask >> e & 1 == 1).collect())
            .collect();
        for k in oracle_pairs(n) {
            for &j in &k.j {
                for mj in &subsets {
                    for i in 0..=b {
                        for li in &subsets {
                            let spec = ThreeCodeSpec {
                                krasner: k.clone(),
                                i_prime: [i].into_iter().collect(),
                                l: BTreeMap::from([(i, li.clone())]),
                                m: BTreeMap::from([(j, mj.clone())]),
                            };
                            let r = check_c1(&spec);
                            t.check(!matches!(r, Err(ConstructError::Unsound { .. })), || {
                                format!("{spec:?}")
                            });
                        }
                    }
                }
            }
        }
    }
    t
}

/// Random multi-row parameter draws for the same agreement.
pub fn c1_agreement_random(draws: usize, nmax: u32, rng: &mut StdRng) -> (Tally, u64) {
    let mut t = Tally::default();
    let mut accepted = 0;
    let pairs: Vec<KrasnerPair> = (1..=nmax).flat_map(oracle_pairs).collect();
    for _ in 0..draws {
        let k = pick(rng, &pairs).clone();
        let n = k.n;
        let cols = column_sets(&k, 2 * n);
        let m: BTreeMap<u32, IntSet> =
            k.j.iter()
                .map(|&j| {
                    let s = if rng.gen_bool(0.7) {
                        pick(rng, &cols).clone()
                    } else {
                        random_subset(rng, 0, 2 * n, 0.2)
                    };
                    (j, s)
                })
                .collect();
        let i_prime = random_subset(rng, 0, 2 * n, 0.15);
        let l = i_prime
            .iter()
            .map(|&i| (i, random_subset(rng, 0, 2 * n, 0.2)))
            .collect();
        let spec = ThreeCodeSpec {
            krasner: k,
            i_prime,
            l,
            m,
        };
        let r = check_c1(&spec);
        accepted += u64::from(r.is_ok());
        t.check(!matches!(r, Err(ConstructError::Unsound { .. })), || {
            format!("{spec:?}")
        });
    }
    (t, accepted)
}

/// Nonnegativity of the three-b layer agrees with the inner conditions.
pub fn x3_agreement(draws: usize, nmax: u32, rng: &mut StdRng) -> (Tally, u64) {
    let mut t = Tally::default();
    let mut holds = 0;
    let pairs: Vec<KrasnerPair> = (1..=nmax).flat_map(oracle_pairs).collect();
    for _ in 0..draws {
        let k = pick(rng, &pairs).clone();
        let admissible_inner = rng.gen_bool(0.5);
        let spec = random_four_code(&k, rng, admissible_inner);
        let direct = spec.x3().is_nonneg();
        let by_conditions = spec.check_inner().is_ok();
        holds += u64::from(direct);
        t.check(direct == by_conditions, || {
            format!("{spec:?}: direct {direct}, conditions {by_conditions}")
        });
    }
    (t, holds)
}

/// Random closed `S >= 0` over `Z_p` and nonnegative lower layers of `P`:
/// counts feasible next layers with a negative coefficient.
pub fn negative_layer_search(trials: usize, primes: &[u32], rng: &mut StdRng) -> (Tally, u64) {
    let mut t = Tally::default();
    let mut feasible = 0;
    for trial in 0..trials {
        let p = *pick(rng, primes);
        let pairs = oracle_pairs(p);
        let k = pick(rng, &pairs).clone();
        let mut s = NcPoly::from_upoly(&k.j_poly());
        for &j in &k.j {
            for m in random_subset(rng, 0, 2 * p, 0.25) {
                s.add_term(Word::from_runs(vec![m, j]), 1.into());
            }
        }
        debug_assert!(check_s_closure(&s));
        let mut layers = vec![NcPoly::from_upoly(&k.i_poly())];
        for r in 0..2 {
            let search = search_next_layer(&layers, &s, r, 2 * p);
            let ok = !search.admits_negative_layer();
            t.check(ok, || {
                format!("trial {trial}: p={p} S={s} P={layers:?} r={r}")
            });
            if !search.is_feasible() {
                break;
            }
            feasible += 1;
            let mut next = NcPoly::zero();
            for row in &search.rows {
                let nonneg: Vec<&ExpPoly> = row.choices.iter().filter(|c| c.is_nonneg()).collect();
                if nonneg.is_empty() {
                    continue;
                }
                let choice = *pick(rng, &nonneg);
                for (e, c) in choice.iter() {
                    let mut runs = row.prefix.runs().to_vec();
                    runs.push(e);
                    next.add_term(Word::from_runs(runs), c.clone());
                }
            }
            if next.is_zero() {
                break;
            }
            layers.push(next);
        }
    }
    (t, feasible)
}
