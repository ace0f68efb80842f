//! Named verification checks, a parallel runner and report serialization.
//!
//! Each check runs over a grid of integer parameters derived from a
//! [`SuiteConfig`] and yields one [`CheckResult`] per grid point. A failing
//! result carries a witness: the first counterexample found for that point.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::frobenius_limit::{
    be_equivalence_check, frobenius_label, frobenius_limit_check, n_min, stabilization_check,
    Comparison,
};
use crate::prime::Prime;
use crate::sl2_modp::{
    is_tilting_char, simple_char, steinberg_char, steinberg_defect, tilting_defect,
};
use crate::verlinde_ring::{
    embed_label, fpdim_estimate, shared_table, steinberg_factorization_check, t2p2_check,
    tilting_image_class, verp_closed_fusion, FusionTable, VerLevel,
};

pub const REPORT_SCHEMA: u64 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance for floating point Frobenius-Perron comparisons.
pub const FPDIM_TOLERANCE: f64 = 1e-6;

/// Above this many labels, associativity is sampled instead of exhaustive.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 60;
pub const ASSOCIATIVITY_SAMPLES: usize = 10_000;
const ASSOCIATIVITY_SEED: u64 = 0x05ee_d0fa_550c;

/// Parameter ranges for a suite run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub primes: Vec<u64>,
    /// Largest tensor power `i` (and stabilization range `r`).
    pub max_i: u32,
    /// Optional cap on the level `n`.
    pub max_n: Option<u32>,
    /// Levels are used while `|Lambda^[n]| <= max_lambda`.
    pub max_lambda: u64,
    /// Largest weight in the tilting-character checks.
    pub max_m: u64,
    /// Largest Steinberg level `r`.
    pub max_r: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            primes: vec![2, 3, 5],
            max_i: 8,
            max_n: None,
            max_lambda: 120,
            max_m: 60,
            max_r: 4,
        }
    }
}

impl SuiteConfig {
    /// Largest `n` with `|Lambda^[n]| <= max_lambda` and `n <= max_n`, at least 1.
    pub fn max_level(&self, p: u64) -> u32 {
        let mut n = 1;
        while VerLevel::from_raw(p, n + 1).is_ok_and(|l| l.lambda_bound() <= self.max_lambda)
            && self.max_n.is_none_or(|m| n < m)
        {
            n += 1;
        }
        n
    }

    fn validate(&self) -> Result<()> {
        for p in &self.primes {
            Prime::new(*p)?;
        }
        Ok(())
    }
}

pub type Params = Vec<(String, u64)>;

/// One check at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub check_id: String,
    pub params: Params,
    pub passed: bool,
    /// Present iff `passed` is false.
    pub witness: Option<Value>,
    pub elapsed: Duration,
}

type Grid = fn(&SuiteConfig) -> Vec<Vec<u64>>;
type Runner = fn(&[u64]) -> Result<Option<Value>>;

/// A registered check: its id, the statement it verifies, and its grid.
pub struct CheckSpec {
    pub id: &'static str,
    pub anchor: &'static str,
    pub param_names: &'static [&'static str],
    grid: Grid,
    run: Runner,
}

impl CheckSpec {
    pub fn grid(&self, config: &SuiteConfig) -> Vec<Params> {
        (self.grid)(config)
            .into_iter()
            .map(|values| {
                self.param_names
                    .iter()
                    .map(|s| s.to_string())
                    .zip(values)
                    .collect()
            })
            .collect()
    }
}

static REGISTRY: &[CheckSpec] = &[
    CheckSpec {
        id: "be_equivalence",
        anchor: "Rep(SL_2) -> C is an equivalence: [Lbar_1^i : Lbar_a] = [V^i : L(a)]",
        param_names: &["p", "i"],
        grid: grid_p_i,
        run: run_be_equivalence,
    },
    CheckSpec {
        id: "embedding",
        anchor: "L_a^[n] = L_{pa}^[n+1]: N^(n)_{ab}^c = N^(n+1)_{pa,pb}^{pc}",
        param_names: &["p", "n"],
        grid: grid_embedding,
        run: run_embedding,
    },
    CheckSpec {
        id: "ext_locus",
        anchor: "T^[j+1]_{2p-2} has constituents 1, L_c, 1 with c = (2p-2)p^(n-j-1)",
        param_names: &["p", "n"],
        grid: grid_p_n_from_2,
        run: run_ext_locus,
    },
    CheckSpec {
        id: "fpdim",
        anchor: "FPdim is a ring homomorphism K(Ver_{p^n}) -> R",
        param_names: &["p", "n"],
        grid: grid_p_n_with_generator,
        run: run_fpdim,
    },
    CheckSpec {
        id: "frobenius_label",
        anchor: "Fr(L_b^[n]) = L_b^[n-1] = L_{pb}^[n] exactly for b in Lambda^[n-1]",
        param_names: &["p", "n"],
        grid: grid_p_n_from_2,
        run: run_frobenius_label,
    },
    CheckSpec {
        id: "frobenius_limit",
        anchor: "Fr(Lbar_a) = Lbar_{pa} against the Frobenius twist of V^i",
        param_names: &["p", "i"],
        grid: grid_p_i,
        run: run_frobenius_limit,
    },
    CheckSpec {
        id: "good_filtration",
        anchor: "St_r (x) L(m) is tilting for m <= 2p^r - 1 (character level)",
        param_names: &["p", "r"],
        grid: grid_p_r,
        run: run_good_filtration,
    },
    CheckSpec {
        id: "ideal_vanishing",
        anchor: "T_m maps to zero in Ver_{p^n} exactly when m >= p^n - 1",
        param_names: &["p", "n"],
        grid: grid_p_n,
        run: run_ideal_vanishing,
    },
    CheckSpec {
        id: "level_one",
        anchor: "K(Ver_p) is the level p-2 truncated Clebsch-Gordan ring",
        param_names: &["p"],
        grid: grid_p,
        run: run_level_one,
    },
    CheckSpec {
        id: "ring_axioms",
        anchor: "K(Ver_{p^n}) is a commutative associative unital ring with nonnegative structure constants",
        param_names: &["p", "n"],
        grid: grid_p_n,
        run: run_ring_axioms,
    },
    CheckSpec {
        id: "stabilization",
        anchor: "[L_1^i : L_b] agrees at levels n and n-1 for b in Lambda^[n-1] when 2i < p^(n-1) - p^(n-2)",
        param_names: &["p", "r"],
        grid: grid_p_i,
        run: run_stabilization,
    },
    CheckSpec {
        id: "steinberg_factorization",
        anchor: "[L_a] = prod_j [T^[j]_{a_(n-j)}] over the base-p digits of a",
        param_names: &["p", "n"],
        grid: grid_p_n,
        run: run_steinberg_factorization,
    },
    CheckSpec {
        id: "steinberg_simple",
        anchor: "St_r = L(p^r - 1) = T(p^r - 1)",
        param_names: &["p", "r"],
        grid: grid_p_r,
        run: run_steinberg_simple,
    },
    CheckSpec {
        id: "tilting_validation",
        anchor: "Donkin's tilting characters have tilting, Weyl and simple expansions of the right shape",
        param_names: &["p", "m_max"],
        grid: grid_tilting,
        run: run_tilting_validation,
    },
];

/// All registered checks, sorted by id.
pub fn registry() -> &'static [CheckSpec] {
    REGISTRY
}

pub fn check_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

pub fn find_check(id: &str) -> Result<&'static CheckSpec> {
    REGISTRY
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCheckId(id.to_string()))
}

fn grid_p(config: &SuiteConfig) -> Vec<Vec<u64>> {
    config.primes.iter().map(|p| vec![*p]).collect()
}

fn grid_p_n(config: &SuiteConfig) -> Vec<Vec<u64>> {
    levels(config, 1, 0)
}

fn grid_p_n_from_2(config: &SuiteConfig) -> Vec<Vec<u64>> {
    levels(config, 2, 0)
}

fn grid_p_n_with_generator(config: &SuiteConfig) -> Vec<Vec<u64>> {
    levels(config, 1, 0)
        .into_iter()
        .filter(|v| VerLevel::from_raw(v[0], v[1] as u32).is_ok_and(|l| l.has_generator()))
        .collect()
}

fn grid_embedding(config: &SuiteConfig) -> Vec<Vec<u64>> {
    levels(config, 1, 1)
}

// (p, n) with from <= n <= max_level(p) - headroom
fn levels(config: &SuiteConfig, from: u32, headroom: u32) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for p in &config.primes {
        let top = config.max_level(*p).saturating_sub(headroom);
        for n in from..=top {
            out.push(vec![*p, u64::from(n)]);
        }
    }
    out
}

fn grid_p_i(config: &SuiteConfig) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for p in &config.primes {
        for i in 1..=config.max_i {
            out.push(vec![*p, u64::from(i)]);
        }
    }
    out
}

fn grid_p_r(config: &SuiteConfig) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for p in &config.primes {
        for r in 1..=config.max_r {
            out.push(vec![*p, u64::from(r)]);
        }
    }
    out
}

fn grid_tilting(config: &SuiteConfig) -> Vec<Vec<u64>> {
    config
        .primes
        .iter()
        .map(|p| vec![*p, config.max_m])
        .collect()
}

pub(crate) fn big_json(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integers are valid JSON numbers"))
}

fn class_json(class: &BTreeMap<u64, BigInt>) -> Value {
    Value::Object(
        class
            .iter()
            .map(|(a, c)| (a.to_string(), big_json(c)))
            .collect(),
    )
}

fn prime(v: u64) -> Result<Prime> {
    Prime::new(v)
}

fn level(p: u64, n: u64) -> Result<VerLevel> {
    let n = u32::try_from(n).map_err(|_| Error::InvalidParameter(format!("level {n}")))?;
    VerLevel::from_raw(p, n)
}

fn table(p: u64, n: u64) -> Result<std::sync::Arc<FusionTable>> {
    shared_table(level(p, n)?)
}

fn comparison_witness(c: &Comparison, lhs: &str, rhs: &str) -> Option<Value> {
    c.witness().map(|(a, l, r)| {
        json!({
            "label": a,
            lhs: big_json(&l),
            rhs: big_json(&r),
        })
    })
}

fn run_be_equivalence(v: &[u64]) -> Result<Option<Value>> {
    let c = be_equivalence_check(prime(v[0])?, v[1] as u32)?;
    Ok(comparison_witness(&c, "limit", "rep_sl2"))
}

fn run_frobenius_limit(v: &[u64]) -> Result<Option<Value>> {
    let c = frobenius_limit_check(prime(v[0])?, v[1] as u32)?;
    Ok(comparison_witness(&c, "scaled_limit", "twisted_rep_sl2"))
}

fn run_embedding(v: &[u64]) -> Result<Option<Value>> {
    let (p, n) = (v[0], v[1]);
    let low = table(p, n)?;
    let high = table(p, n + 1)?;
    let len = low.len() as u64;
    for a in 0..len {
        for b in 0..len {
            for c in 0..len {
                let lhs = low.constant(a, b, c);
                let (pa, pb, pc) = (
                    embed_label(low.level(), a)?,
                    embed_label(low.level(), b)?,
                    embed_label(low.level(), c)?,
                );
                let rhs = high.constant(pa, pb, pc);
                if lhs != rhs {
                    return Ok(Some(json!({
                        "a": a, "b": b, "c": c,
                        "level_n": big_json(&lhs),
                        "level_n_plus_1": big_json(&rhs),
                    })));
                }
            }
        }
    }
    Ok(None)
}

fn run_ext_locus(v: &[u64]) -> Result<Option<Value>> {
    let t = table(v[0], v[1])?;
    for j in 1..v[1] as u32 {
        if !t2p2_check(&t, j)? {
            return Ok(Some(json!({ "j": j })));
        }
    }
    Ok(None)
}

fn run_fpdim(v: &[u64]) -> Result<Option<Value>> {
    let t = table(v[0], v[1])?;
    let dims = (0..t.len() as u64)
        .map(|a| fpdim_estimate(&t, a))
        .collect::<Result<Vec<f64>>>()?;
    for a in 0..t.len() as u64 {
        for b in a..t.len() as u64 {
            let lhs = dims[a as usize] * dims[b as usize];
            let rhs: f64 = t
                .product(a, b)
                .iter()
                .map(|(c, n)| n.to_f64().unwrap_or(f64::INFINITY) * dims[*c as usize])
                .sum();
            if (lhs - rhs).abs() >= FPDIM_TOLERANCE {
                return Ok(Some(json!({
                    "a": a, "b": b,
                    "fpdim_product": lhs,
                    "fpdim_of_class": rhs,
                })));
            }
        }
    }
    Ok(None)
}

fn run_frobenius_label(v: &[u64]) -> Result<Option<Value>> {
    let (p, n) = (prime(v[0])?, v[1] as u32);
    let upper = level(v[0], v[1])?;
    let lower = upper.lower().expect("n >= 2");
    for b in upper.labels() {
        let ok = match frobenius_label(p, n, b) {
            Ok(l) => lower.contains(b) && embed_label(lower, l.a())? == p.get() * b,
            Err(Error::OutsideFrobeniusDomain { .. }) => !lower.contains(b),
            Err(e) => return Err(e),
        };
        if !ok {
            return Ok(Some(json!({ "b": b })));
        }
    }
    Ok(None)
}

fn run_good_filtration(v: &[u64]) -> Result<Option<Value>> {
    let (p, r) = (prime(v[0])?, v[1] as u32);
    let st = steinberg_char(p, r)?;
    let bound = 2 * p
        .checked_pow(r)
        .ok_or_else(|| Error::InvalidParameter(format!("p^{r} overflows")))?
        - 1;
    for m in good_filtration_weights(bound) {
        let product = &simple_char(p, m) * &st;
        if !is_tilting_char(product.poly(), p)? {
            return Ok(Some(json!({ "m": m })));
        }
    }
    Ok(None)
}

/// Weights `m` tested against `St_r` when `2p^r - 1 = bound`.
///
/// Every weight up to 60 below the bound, and the bound itself.
pub fn good_filtration_weights(bound: u64) -> Vec<u64> {
    let mut weights: Vec<u64> = (0..=bound.min(60)).collect();
    if bound > 60 {
        weights.push(bound);
    }
    weights
}

fn run_ideal_vanishing(v: &[u64]) -> Result<Option<Value>> {
    let lvl = level(v[0], v[1])?;
    let top = lvl.p().checked_pow(lvl.n()).expect("level is valid");
    for m in 0..=top + 5 {
        let zero = tilting_image_class(lvl, m)?.is_zero();
        if zero != (m >= top - 1) {
            return Ok(Some(json!({ "m": m, "image_is_zero": zero })));
        }
    }
    Ok(None)
}

fn run_level_one(v: &[u64]) -> Result<Option<Value>> {
    let p = prime(v[0])?;
    let t = table(v[0], 1)?;
    for a in 0..t.len() as u64 {
        for b in 0..t.len() as u64 {
            let closed = verp_closed_fusion(p, a, b)?;
            if t.product(a, b) != closed.mults() {
                return Ok(Some(json!({
                    "a": a, "b": b,
                    "table": class_json(t.product(a, b)),
                    "closed_form": class_json(closed.mults()),
                })));
            }
        }
    }
    Ok(None)
}

fn run_ring_axioms(v: &[u64]) -> Result<Option<Value>> {
    let t = table(v[0], v[1])?;
    if let Err(e) = t.validate() {
        return Ok(Some(
            json!({ "axiom": "unit, commutativity or nonnegativity", "detail": e.to_string() }),
        ));
    }
    Ok(associativity_witness(&t)
        .map(|(a, b, c)| json!({ "axiom": "associativity", "a": a, "b": b, "c": c })))
}

/// First triple with `(L_a L_b) L_c != L_a (L_b L_c)`: exhaustive up to
/// [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`] labels, seeded samples beyond.
pub fn associativity_witness(t: &FusionTable) -> Option<(u64, u64, u64)> {
    let len = t.len() as u64;
    let holds = |(a, b, c): (u64, u64, u64)| t.triple_left(a, b, c) == t.triple_right(a, b, c);
    if t.len() <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        (0..len)
            .into_par_iter()
            .flat_map_iter(|a| (0..len).flat_map(move |b| (0..len).map(move |c| (a, b, c))))
            .filter(|x| !holds(*x))
            .min()
    } else {
        let mut rng = StdRng::seed_from_u64(ASSOCIATIVITY_SEED);
        let triples: Vec<_> = (0..ASSOCIATIVITY_SAMPLES)
            .map(|_| {
                (
                    rng.gen_range(0..len),
                    rng.gen_range(0..len),
                    rng.gen_range(0..len),
                )
            })
            .collect();
        triples.into_par_iter().filter(|x| !holds(*x)).min()
    }
}

fn run_stabilization(v: &[u64]) -> Result<Option<Value>> {
    let (p, r) = (prime(v[0])?, v[1] as u32);
    let start = n_min(p, r)?;
    for n in start..start + 3 {
        if let Some(m) = stabilization_check(p, n, r, false)? {
            return Ok(Some(json!({
                "n": n,
                "i": m.i,
                "level_n": class_json(&m.upper),
                "level_n_minus_1": class_json(&m.lower),
            })));
        }
    }
    Ok(None)
}

fn run_steinberg_factorization(v: &[u64]) -> Result<Option<Value>> {
    let t = table(v[0], v[1])?;
    for a in 0..t.len() as u64 {
        if !steinberg_factorization_check(&t, a)? {
            return Ok(Some(json!({ "a": a })));
        }
    }
    Ok(None)
}

fn run_steinberg_simple(v: &[u64]) -> Result<Option<Value>> {
    Ok(steinberg_defect(prime(v[0])?, v[1] as u32)?
        .map(|d| json!({ "r": v[1], "defect": d.to_string() })))
}

fn run_tilting_validation(v: &[u64]) -> Result<Option<Value>> {
    let p = prime(v[0])?;
    for m in 0..=v[1] {
        if let Some(d) = tilting_defect(p, m)? {
            return Ok(Some(json!({ "m": m, "defect": d.to_string() })));
        }
    }
    Ok(None)
}

fn run_one(spec: &CheckSpec, params: Params) -> CheckResult {
    let values: Vec<u64> = params.iter().map(|(_, v)| *v).collect();
    let start = Instant::now();
    let outcome = (spec.run)(&values);
    let elapsed = start.elapsed();
    let witness = match outcome {
        Ok(w) => w,
        Err(e) => Some(json!({ "error": e.to_string() })),
    };
    CheckResult {
        check_id: spec.id.to_string(),
        params,
        passed: witness.is_none(),
        witness,
        elapsed,
    }
}

/// Runs every check in `suite` over its grid.
///
/// Results are ordered by check id, then by parameter values.
pub fn run_suite<S: AsRef<str>>(suite: &[S], config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let ids: BTreeSet<&str> = suite.iter().map(AsRef::as_ref).collect();
    let specs = ids
        .iter()
        .map(|id| find_check(id))
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(&CheckSpec, Params)> = specs
        .iter()
        .flat_map(|spec| {
            spec.grid(config)
                .into_iter()
                .map(move |params| (*spec, params))
        })
        .collect();
    let mut results: Vec<CheckResult> = tasks
        .into_par_iter()
        .map(|(spec, params)| run_one(spec, params))
        .collect();
    results.sort_by(|x, y| {
        let key = |r: &CheckResult| {
            (
                r.check_id.clone(),
                r.params.iter().map(|(_, v)| *v).collect::<Vec<_>>(),
            )
        };
        key(x).cmp(&key(y))
    });
    Ok(VerificationReport::new(results))
}

/// Counts of passed and failed results.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub version: String,
    pub schema: u64,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

impl VerificationReport {
    pub fn new(results: Vec<CheckResult>) -> Self {
        let passed = results.iter().filter(|r| r.passed).count();
        let summary = Summary {
            passed,
            failed: results.len() - passed,
        };
        Self {
            version: VERSION.to_string(),
            schema: REPORT_SCHEMA,
            results,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// 0 iff every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json_value(&self, with_timing: bool) -> Value {
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|r| {
                let mut obj = Map::new();
                obj.insert("check".into(), json!(r.check_id));
                let params: Map<String, Value> = r
                    .params
                    .iter()
                    .map(|(k, v)| (k.clone(), json!(v)))
                    .collect();
                obj.insert("params".into(), Value::Object(params));
                obj.insert("passed".into(), json!(r.passed));
                if let Some(w) = &r.witness {
                    obj.insert("witness".into(), w.clone());
                }
                if with_timing {
                    obj.insert("elapsed_us".into(), json!(r.elapsed.as_micros() as u64));
                }
                Value::Object(obj)
            })
            .collect();
        json!({
            "schema": self.schema,
            "version": self.version,
            "results": results,
            "summary": { "passed": self.summary.passed, "failed": self.summary.failed },
        })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value(true).to_string()
    }

    /// Parses a report written by [`VerificationReport::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidParameter(format!("report: {m}"));
        let value: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let schema = value
            .get("schema")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing schema"))?;
        if schema != REPORT_SCHEMA {
            return Err(bad(&format!("unsupported schema {schema}")));
        }
        let version = value
            .get("version")
            .and_then(Value::as_str)
            .unwrap_or_default()
            .to_string();
        let mut results = Vec::new();
        for r in value
            .get("results")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing results"))?
        {
            let check_id = r
                .get("check")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("missing check"))?;
            let params = r
                .get("params")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("missing params"))?
                .iter()
                .map(|(k, v)| {
                    v.as_u64()
                        .map(|v| (k.clone(), v))
                        .ok_or_else(|| bad("params must be integers"))
                })
                .collect::<Result<Params>>()?;
            let passed = r
                .get("passed")
                .and_then(Value::as_bool)
                .ok_or_else(|| bad("missing passed"))?;
            let witness = r.get("witness").cloned();
            if witness.is_some() == passed {
                return Err(bad("witness must be present exactly for failures"));
            }
            let elapsed =
                Duration::from_micros(r.get("elapsed_us").and_then(Value::as_u64).unwrap_or(0));
            results.push(CheckResult {
                check_id: check_id.to_string(),
                params,
                passed,
                witness,
                elapsed,
            });
        }
        let mut report = Self::new(results);
        report.version = version;
        let summary = value.get("summary").ok_or_else(|| bad("missing summary"))?;
        let count = |k: &str| summary.get(k).and_then(Value::as_u64).map(|c| c as usize);
        if count("passed") != Some(report.summary.passed)
            || count("failed") != Some(report.summary.failed)
        {
            return Err(bad("summary does not match results"));
        }
        Ok(report)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# Verification report (version {}, schema {})\n",
            self.version, self.schema
        );
        let _ = writeln!(out, "| check | params | result | witness |");
        let _ = writeln!(out, "|---|---|---|---|");
        for r in &self.results {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let witness = r.witness.as_ref().map(Value::to_string).unwrap_or_default();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                r.check_id,
                params.join(", "),
                if r.passed { "pass" } else { "FAIL" },
                witness.replace('|', "\\|")
            );
        }
        let _ = writeln!(
            out,
            "\n{} passed, {} failed",
            self.summary.passed, self.summary.failed
        );
        out
    }
}

pub fn emit_report(report: &VerificationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Markdown => report.to_markdown(),
    }
}
