//! Acceptance gate: one PASS/FAIL line per criterion, each with its time limit.
//!
//! Runs without the libtest harness so the lines always appear; exits nonzero on any failure.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use verlab_core::frobenius_limit::{
    be_equivalence_check, frobenius_label, frobenius_limit_check, n_min, stabilization_check,
    stable_class,
};
use verlab_core::sl2_modp::{
    is_tilting_char, simple_char, steinberg_char, steinberg_defect, tilting_defect,
};
use verlab_core::verify_suite::{associativity_witness, good_filtration_weights, SuiteConfig};
use verlab_core::verlinde_ring::{
    embed_label, fpdim_estimate, shared_table, steinberg_factorization_check, t2p2_check,
    tensor_power_class, tilting_image_class, verp_closed_fusion, FusionTable, VerLevel,
};
use verlab_core::Prime;

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

const FPDIM_TOLERANCE: f64 = 1e-6;

fn p(q: u64) -> Prime {
    Prime::new(q).unwrap()
}

fn level(q: u64, n: u32) -> VerLevel {
    VerLevel::from_raw(q, n).unwrap()
}

fn table(q: u64, n: u32) -> std::sync::Arc<FusionTable> {
    shared_table(level(q, n)).unwrap()
}

fn class(pairs: &[(u64, i64)]) -> BTreeMap<u64, BigInt> {
    pairs.iter().map(|(a, c)| (*a, BigInt::from(*c))).collect()
}

fn fail(msg: impl Into<String>) -> Outcome {
    Err(msg.into())
}

// (p, n) grid shared by the Steinberg factorization and t2p2 criteria
fn steinberg_grid() -> Vec<(u64, u32)> {
    vec![(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)]
}

// every level of the default verification grid
fn default_levels() -> Vec<(u64, u32)> {
    let config = SuiteConfig::default();
    config
        .primes
        .iter()
        .flat_map(|q| (1..=config.max_level(*q)).map(move |n| (*q, n)))
        .collect()
}

fn be_equivalence() -> Outcome {
    for q in [2, 3, 5] {
        for i in 0..=8 {
            let c = be_equivalence_check(p(q), i).map_err(|e| e.to_string())?;
            if let Some((a, lhs, rhs)) = c.witness() {
                return fail(format!(
                    "p={q} i={i}: label {a} limit {lhs} vs Rep(SL2) {rhs}"
                ));
            }
        }
    }
    Ok(())
}

fn stabilization() -> Outcome {
    for q in [2, 3, 5] {
        for r in 1..=8 {
            let start = n_min(p(q), r).unwrap();
            for n in start..start + 3 {
                if let Some(m) =
                    stabilization_check(p(q), n, r, false).map_err(|e| e.to_string())?
                {
                    return fail(format!("p={q} r={r} n={n}: i={} disagrees", m.i));
                }
            }
        }
    }
    match stabilization_check(p(2), 2, 2, true) {
        Ok(Some(_)) => {}
        other => {
            return fail(format!(
                "(2,2,2) with override should disagree, got {other:?}"
            ))
        }
    }
    let at_level_2 = tensor_power_class(level(2, 2), 2).unwrap().into_mults();
    let (stable, _) = stable_class(p(2), 2).unwrap();
    if at_level_2 != class(&[(0, 2)]) || stable != class(&[(0, 2), (2, 1)]) {
        return fail(format!("(2,2) class {at_level_2:?}, stable {stable:?}"));
    }
    Ok(())
}

fn ideal_vanishing() -> Outcome {
    for (q, n) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (5, 2)] {
        let top = q.pow(n);
        for m in 0..=top + 5 {
            let zero = tilting_image_class(level(q, n), m)
                .map_err(|e| e.to_string())?
                .is_zero();
            if zero != (m + 1 >= top) {
                return fail(format!("p={q} n={n} m={m}: image zero = {zero}"));
            }
        }
    }
    Ok(())
}

fn steinberg_factorization() -> Outcome {
    for (q, n) in steinberg_grid() {
        let t = table(q, n);
        for a in level(q, n).labels() {
            if !steinberg_factorization_check(&t, a).map_err(|e| e.to_string())? {
                return fail(format!("p={q} n={n} a={a}"));
            }
        }
    }
    Ok(())
}

fn ext_locus() -> Outcome {
    for (q, n) in steinberg_grid() {
        let t = table(q, n);
        for j in 1..n {
            if !t2p2_check(&t, j).map_err(|e| e.to_string())? {
                return fail(format!("p={q} n={n} j={j}"));
            }
        }
    }
    Ok(())
}

fn ring_axioms() -> Outcome {
    for (q, n) in default_levels() {
        let t = table(q, n);
        t.validate().map_err(|e| format!("p={q} n={n}: {e}"))?;
        if let Some(triple) = associativity_witness(&t) {
            return fail(format!("p={q} n={n}: associativity fails at {triple:?}"));
        }
    }
    Ok(())
}

fn level_one() -> Outcome {
    for q in [2, 3, 5, 7] {
        let t = table(q, 1);
        for a in 0..q - 1 {
            for b in 0..q - 1 {
                let closed = verp_closed_fusion(p(q), a, b).unwrap();
                if t.product(a, b) != closed.mults() {
                    return fail(format!("p={q} a={a} b={b}"));
                }
            }
        }
    }
    Ok(())
}

fn embedding() -> Outcome {
    for (q, n) in [(2, 2), (2, 3), (3, 2)] {
        let (low, high) = (table(q, n), table(q, n + 1));
        for a in low.level().labels() {
            for b in low.level().labels() {
                for c in low.level().labels() {
                    let e = |x| embed_label(low.level(), x).unwrap();
                    if low.constant(a, b, c) != high.constant(e(a), e(b), e(c)) {
                        return fail(format!("p={q} n={n} (a,b,c)=({a},{b},{c})"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn tilting_suite() -> Outcome {
    for q in [2, 3, 5, 7] {
        for m in 0..=60 {
            if let Some(d) = tilting_defect(p(q), m).map_err(|e| e.to_string())? {
                return fail(format!("p={q}: {d}"));
            }
        }
        for r in 0..=4 {
            if let Some(d) = steinberg_defect(p(q), r).map_err(|e| e.to_string())? {
                return fail(format!("p={q}: {d}"));
            }
            let st = steinberg_char(p(q), r).unwrap();
            for m in good_filtration_weights(2 * q.pow(r) - 1) {
                let product = &simple_char(p(q), m) * &st;
                if !is_tilting_char(product.poly(), p(q)).map_err(|e| e.to_string())? {
                    return fail(format!("p={q} r={r}: St_r (x) L({m}) not tilting"));
                }
            }
        }
    }
    Ok(())
}

fn frobenius_checks() -> Outcome {
    for q in [2, 3] {
        for i in 0..=6 {
            let c = frobenius_limit_check(p(q), i).map_err(|e| e.to_string())?;
            if let Some((a, lhs, rhs)) = c.witness() {
                return fail(format!("p={q} i={i}: label {a}: {lhs} vs {rhs}"));
            }
        }
    }
    for (q, n) in default_levels().into_iter().filter(|(_, n)| *n >= 2) {
        let lower = level(q, n - 1);
        for b in level(q, n).labels() {
            let ok = match frobenius_label(p(q), n, b) {
                Ok(l) => lower.contains(b) && embed_label(lower, l.a()).unwrap() == q * b,
                Err(_) => !lower.contains(b),
            };
            if !ok {
                return fail(format!("frobenius_label p={q} n={n} b={b}"));
            }
        }
    }
    Ok(())
}

fn fpdim_consistency() -> Outcome {
    for (q, n) in default_levels() {
        let t = table(q, n);
        if !t.level().has_generator() {
            continue;
        }
        let dims: Vec<f64> = (0..t.len() as u64)
            .map(|a| fpdim_estimate(&t, a))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for a in 0..t.len() as u64 {
            for b in a..t.len() as u64 {
                let rhs: f64 = t
                    .product(a, b)
                    .iter()
                    .map(|(c, m)| m.to_f64().unwrap() * dims[*c as usize])
                    .sum();
                let err = (dims[a as usize] * dims[b as usize] - rhs).abs();
                if err >= FPDIM_TOLERANCE {
                    return fail(format!("p={q} n={n} a={a} b={b}: error {err:e}"));
                }
            }
        }
    }
    let d2 = fpdim_estimate(&table(2, 2), 1).unwrap();
    let d3 = fpdim_estimate(&table(2, 3), 1).unwrap();
    if (d2 - 2f64.sqrt()).abs() >= FPDIM_TOLERANCE
        || (d3 - 2.0 * (PI / 8.0).cos()).abs() >= FPDIM_TOLERANCE
    {
        return fail(format!("FPdim(L_1) = {d2} at (2,2), {d3} at (2,3)"));
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("1 BE-equivalence, p in {2,3,5}, i <= 8", 60, be_equivalence),
        (
            "2 stabilization over three levels, i <= r <= 8; (2,2,2) disagrees",
            10,
            stabilization,
        ),
        (
            "3 ideal vanishing exactly for m >= p^n - 1",
            30,
            ideal_vanishing,
        ),
        (
            "4 Steinberg factorization of every label",
            60,
            steinberg_factorization,
        ),
        ("5 T_{2p-2} constituents for every j", 30, ext_locus),
        ("6 fusion ring axioms", 120, ring_axioms),
        ("7 n=1 truncated Clebsch-Gordan oracle", 5, level_one),
        ("8 embedding compatibility", 60, embedding),
        ("9 tilting/Steinberg validation suite", 60, tilting_suite),
        ("10 Frobenius limit and label checks", 10, frobenius_checks),
        ("11 FP-dimension consistency", 30, fpdim_consistency),
    ];
    let mut failures = Vec::new();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("took {elapsed:.1?}, limit {limit}s"))
            } else {
                Ok(())
            }
        });
        match &outcome {
            Ok(()) => println!("PASS  {name}  ({elapsed:.2?}, limit {limit}s)"),
            Err(why) => {
                println!("FAIL  {name}  ({elapsed:.2?}, limit {limit}s): {why}");
                failures.push(name);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures.len(),
        criteria.len()
    );
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
