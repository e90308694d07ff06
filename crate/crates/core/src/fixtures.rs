//! Worked instances with their known results, replayable from the CLI.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::codes::{
    code_from_factorization, code_polynomial, is_maximal_code, kraft_sum, sardinas_patterson,
};
use crate::construct::{
    check_c1, check_four_code, check_three_code, extend_layer, peel_layers, ConstructError,
    FourCodeSpec, TeocExtension, ThreeCodeSpec,
};
use crate::cyclic::{hajos_witnesses, holes_poly, is_factorization, is_strong_hajos, KrasnerPair};
use crate::factorization::{
    check_s_closure, classify_4code, is_positive, layer_decompose, layer_expression,
    normalize_sign, search_next_layer, FactorizationPair, PositiveShape,
};
use crate::ncpoly::{NcPoly, Word};
use crate::upoly::{range_set, ExpPoly, IntSet};

pub const NAMES: [&str; 5] = ["ex1", "sic", "noc1", "hajos24", "remark"];

fn poly(s: &str) -> NcPoly {
    NcPoly::parse(s).expect("fixture polynomial")
}

fn set(xs: &[u32]) -> IntSet {
    xs.iter().copied().collect()
}

fn odd_to_19() -> IntSet {
    (1..20).step_by(2).collect()
}

/// The 4-code with `P = 1 + a^2 b a^{0..6} + a^2 b a^3 b a^{0..6}`,
/// `S = a^{0..4} + a^{0,1} b a^{0..4}`.
pub fn ex1_pair() -> FactorizationPair {
    FactorizationPair::new(
        poly("1 + a^2ba^{0..6} + a^2ba^3ba^{0..6}"),
        poly("a^{0..4} + a^{0,1}ba^{0..4}"),
    )
}

/// Its code layers `C_0, ..., C_4`.
pub fn ex1_layers() -> Vec<NcPoly> {
    [
        "a^5",
        "a^2ba^{7..11}",
        "ba^{0,1}ba^{0..4} + a^2ba^{2,4,5,6,7,8}ba^{0..4} + a^2ba^3ba^{7..11}",
        "a^2ba^{0..6}ba^{0,1}ba^{0..4} + a^2ba^3ba^{2..8}ba^{0..4}",
        "a^2ba^3ba^{0..6}ba^{0,1}ba^{0..4}",
    ]
    .into_iter()
    .map(poly)
    .collect()
}

/// The 3-code parameters read off `P_0 + P_1` and `S` of [`ex1_pair`].
pub fn ex1_three_code() -> ThreeCodeSpec {
    let k = KrasnerPair::new(set(&[0]), range_set(0, 4), 5);
    ThreeCodeSpec {
        m: k.j.iter().map(|&j| (j, set(&[0, 1]))).collect(),
        krasner: k,
        i_prime: set(&[2]),
        l: BTreeMap::from([(2, range_set(0, 6))]),
    }
}

pub fn z24_krasner() -> KrasnerPair {
    KrasnerPair::new(set(&[0, 2, 4, 12, 14, 16]), set(&[0, 1, 6, 7]), 24)
}

/// Nested-row 4-code over `Z_24` with `J' = {21}`, `M_21 = {2, 3}`, the
/// given `L_i` for every `i` and `L_(i,l)` for every `l` in `L_i`.
pub fn z24_four_code(l_i: &IntSet, l2: &IntSet) -> FourCodeSpec {
    let k = z24_krasner();
    let l = k.i.iter().map(|&i| (i, l_i.clone())).collect();
    let l2 =
        k.i.iter()
            .flat_map(|&i| l_i.iter().map(move |&e| (i, e, l2.clone())))
            .collect();
    FourCodeSpec {
        krasner: k,
        j_prime: set(&[21]),
        l,
        m: BTreeMap::from([(21, set(&[2, 3]))]),
        l2,
    }
}

/// Strong variant: `L_i = L_(i,l) = {1, 3, ..., 19}`.
pub fn sic_spec() -> FourCodeSpec {
    z24_four_code(&odd_to_19(), &odd_to_19())
}

/// Non-strong variant: `L_i = {1, 9, 11, 13}`, `L_(i,l) = {1, 3, ..., 19}`.
pub fn noc1_spec() -> FourCodeSpec {
    z24_four_code(&set(&[1, 9, 11, 13]), &odd_to_19())
}

pub fn hajos24_t() -> IntSet {
    set(&[0, 4, 8, 12, 16, 20])
}

pub fn hajos24_r() -> IntSet {
    set(&[0, 3, 6, 21])
}

pub fn hajos24_r_strong() -> IntSet {
    set(&[0, 27, 6, 21])
}

/// `P_0 = 1`, `P_1 = b a^{0,2} - a b a^2` and `S = a^{0,1} + b a^4`: the
/// layer expression at `r = 0` is nonnegative although `P_1` is not.
pub fn remark_layers() -> (Vec<NcPoly>, NcPoly) {
    (
        vec![NcPoly::one(), poly("ba^{0,2} - aba^2")],
        poly("a^{0,1} + ba^4"),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub output: Value,
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: &'static str, passed: bool) {
        self.0.push(Check { name, passed });
    }

    fn finish(self, name: &str, output: Value) -> FixtureReport {
        FixtureReport {
            name: name.to_string(),
            passed: self.0.iter().all(|c| c.passed),
            checks: self.0,
            output,
        }
    }
}

fn strings(polys: &[NcPoly]) -> Vec<String> {
    polys.iter().map(ToString::to_string).collect()
}

pub fn run(name: &str) -> Option<FixtureReport> {
    Some(match name {
        "ex1" => run_ex1(),
        "sic" => run_sic(),
        "noc1" => run_noc1(),
        "hajos24" => run_hajos24(),
        "remark" => run_remark(),
        _ => return None,
    })
}

fn run_ex1() -> FixtureReport {
    let mut c = Checks(Vec::new());
    let f = ex1_pair();
    let layers = layer_decompose(&f).layers;
    c.add("layers", layers == ex1_layers());
    let code = code_from_factorization(&f.p, &f.s);
    c.add("code polynomial is characteristic", code.is_ok());
    let code = code.unwrap_or_default();
    let verdict = sardinas_patterson(&code);
    let kraft = kraft_sum(&code);
    c.add("unique decipherability", verdict.is_code);
    c.add("kraft sum is 1", num_traits::One::is_one(&kraft));
    c.add("positive", is_positive(&f));
    let sign = normalize_sign(&f);
    let s_side_ok = sign.as_ref().is_ok_and(|r| {
        r.sign == 1
            && r.s_side
                .as_ref()
                .is_some_and(|m| m.len() == 5 && m.values().all(|x| *x == set(&[0, 1])))
    });
    c.add("sign and S-side shape", s_side_ok);
    c.add("S closure", check_s_closure(&f.s));
    let class = classify_4code(&f);
    let nested = class.as_ref().is_ok_and(|cl| {
        cl.layer_case == 2
            && cl.positive_shapes.iter().any(
                |s| matches!(s, PositiveShape::NestedRows { i_prime, .. } if *i_prime == set(&[2])),
            )
    });
    c.add("classification", nested);

    let three = check_three_code(&ex1_three_code());
    let base = peel_layers(&f, 1);
    c.add(
        "three-code parameters give P_0 + P_1",
        three.is_ok() && three.as_ref().ok() == base.as_ref().ok(),
    );
    c.add(
        "C_1 from parameters",
        check_c1(&ex1_three_code()).ok() == Some(ex1_layers()[1].clone()),
    );
    let extended = base.as_ref().ok().map(|b| {
        extend_layer(&TeocExtension {
            base: b.clone(),
            l: BTreeMap::from([(Word::from_runs(vec![2, 3]), range_set(0, 6))]),
        })
    });
    c.add(
        "extension reproduces the pair",
        extended == Some(Ok(f.clone())),
    );
    let two = peel_layers(&f, 0);
    c.add(
        "peel to a 2-code",
        two.is_ok_and(|t| t.code_polynomial().b_degree() == Some(2)),
    );

    let output = json!({
        "P": f.p.to_string(),
        "S": f.s.to_string(),
        "layers": strings(&layers),
        "code_size": code.len(),
        "is_code": verdict.is_code,
        "kraft_sum": kraft.to_string(),
        "classification": class.ok(),
    });
    c.finish("ex1", output)
}

fn four_code_summary(f: &FactorizationPair) -> Value {
    let layers = layer_decompose(f).layers;
    json!({
        "layer_sizes": layers.iter().map(NcPoly::len).collect::<Vec<_>>(),
        "P_terms": f.p.len(),
        "S": f.s.to_string(),
    })
}

fn run_sic() -> FixtureReport {
    let mut c = Checks(Vec::new());
    let spec = sic_spec();
    let f = check_four_code(&spec);
    c.add("accepted", f.is_ok());
    let mut output = json!({ "accepted": f.is_ok() });
    if let Ok(f) = &f {
        let code = code_from_factorization(&f.p, &f.s).unwrap_or_default();
        c.add("4-code", code.b_degree() == Some(4));
        c.add("positive", is_positive(f));
        c.add("maximal code", is_maximal_code(&code));
        let class = classify_4code(f);
        c.add(
            "nested rows with I' = I",
            class.as_ref().is_ok_and(|cl| {
                cl.positive_shapes
                    .iter()
                    .any(|s| matches!(s, PositiveShape::NestedRows { i_prime, .. } if *i_prime == spec.krasner.i))
            }),
        );
        output = four_code_summary(f);
    }
    let strong = is_strong_hajos(&set(&[2, 3]), &odd_to_19());
    c.add("strong (M, L')", strong);
    let witnesses = hajos_witnesses(&hajos24_t(), &hajos24_r_strong(), 24, 48).unwrap_or_default();
    c.add(
        "strong witness for (T, R')",
        witnesses
            .iter()
            .any(|w| w.m == set(&[2, 3]) && w.l == odd_to_19() && w.is_strong()),
    );
    c.finish("sic", output)
}

fn run_noc1() -> FixtureReport {
    let mut c = Checks(Vec::new());
    let f = check_four_code(&noc1_spec());
    c.add("accepted", f.is_ok());
    let mut output = json!({ "accepted": f.is_ok() });
    if let Ok(f) = &f {
        let code = code_from_factorization(&f.p, &f.s).unwrap_or_default();
        c.add("4-code", code.b_degree() == Some(4));
        c.add("maximal code", is_maximal_code(&code));
        let peel = peel_layers(f, 1);
        c.add(
            "peel refused",
            peel == Err(ConstructError::ColumnOutsideJ { j: 21 }),
        );
        let cut: NcPoly = (0..=1).map(|g| f.p.b_layer(g)).sum();
        let cut_poly = code_polynomial(&cut, &f.s);
        c.add(
            "truncated pair is not a code",
            !cut_poly.is_characteristic(),
        );
        output = four_code_summary(f);
        output["peel_r1"] = serde_json::to_value(peel.err()).unwrap_or(Value::Null);
        output["truncated_negative"] = json!(cut_poly
            .first_negative()
            .map(|(w, k)| (w.to_string(), k.to_string())));
    }
    let without = check_four_code(&z24_four_code(&set(&[1, 9, 11, 13]), &IntSet::new()));
    c.add(
        "empty nested rows rejected",
        matches!(
            without,
            Err(ConstructError::SecondRowCover { l: 11, j: 21, .. })
        ),
    );
    c.finish("noc1", output)
}

fn run_hajos24() -> FixtureReport {
    let mut c = Checks(Vec::new());
    let (t, r) = (hajos24_t(), hajos24_r());
    c.add(
        "group factorization",
        is_factorization(&t, &r, 24).unwrap_or(false),
    );
    let witnesses = hajos_witnesses(&t, &r, 24, 48).unwrap_or_default();
    let (m, l) = (set(&[2, 3]), set(&[1, 9, 11, 13]));
    let quoted = witnesses.iter().find(|w| w.m == m && w.l == l);
    c.add("quoted (M, L) is a witness", quoted.is_some());
    c.add("quoted (M, L) is not strong", !is_strong_hajos(&m, &l));
    let holes = holes_poly(&m, &l);
    c.add(
        "holes polynomial",
        holes == ExpPoly::from_set(&set(&[1, 2, 5, 9, 13, 17])),
    );
    let output = json!({
        "T": t,
        "R": r,
        "witness": quoted,
        "witness_count": witnesses.len(),
        "holes": holes.to_string(),
    });
    c.finish("hajos24", output)
}

fn run_remark() -> FixtureReport {
    let mut c = Checks(Vec::new());
    let (pl, s) = remark_layers();
    let expr = layer_expression(&pl, &s.layers(), 0);
    c.add("layer expression", expr == poly("ba + aba^2"));
    c.add("S closure fails", !check_s_closure(&s));
    let search = search_next_layer(&pl[..1], &s, 0, 4);
    c.add(
        "row search admits a negative layer",
        search.admits_negative_layer(),
    );
    c.add("row search admits P_1", search.admits(&pl[1]));
    let output = json!({
        "P_1": pl[1].to_string(),
        "S": s.to_string(),
        "layer_expression": expr.to_string(),
    });
    c.finish("remark", output)
}
