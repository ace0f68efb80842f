//! Characters of `SL_2`-modules in characteristic `p`.
//!
//! Simple characters come from Steinberg's tensor product theorem, tilting
//! characters from Donkin's recursion for `SL_2`. Everything downstream
//! (simple multiplicities of tensor powers of the natural module, Steinberg
//! levels, the polynomials `P_m` with `[T_m] = P_m([V])`) is greedy
//! triangular decomposition against one of these bases.
//!
//! `is_tilting_char` only tests the character: a module whose character has
//! a nonnegative tilting expansion need not itself be tilting.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::char_ring::{greedy_decompose, weyl_char, LaurentPoly, SymChar};
use crate::error::{Error, Result};
use crate::prime::Prime;

/// Highest weight `m` of `SL_2`, i.e. `m * omega`.
pub type Weight = u64;

/// Default search bound for [`min_steinberg_level`].
pub const DEFAULT_R_MAX: u32 = 16;

/// Base-`p` digits `(a_0, a_1, ...)`, least significant first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicDigits {
    p: Prime,
    digits: Vec<u64>,
}

impl PAdicDigits {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit `a_i`, zero beyond the stored length.
    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn value(&self) -> u64 {
        self.digits
            .iter()
            .rev()
            .fold(0, |acc, d| acc * self.p.get() + d)
    }
}

pub fn p_adic_digits(a: u64, p: Prime) -> PAdicDigits {
    let mut digits = Vec::new();
    let mut rest = a;
    while rest > 0 {
        digits.push(rest % p.get());
        rest /= p.get();
    }
    PAdicDigits { p, digits }
}

type CharCache = RwLock<HashMap<(u64, u64), Arc<SymChar>>>;

static SIMPLE_CACHE: OnceLock<CharCache> = OnceLock::new();
static TILTING_CACHE: OnceLock<CharCache> = OnceLock::new();

// Write-once: concurrent fills compute the same value and the first insert wins.
fn cached<F>(cache: &'static OnceLock<CharCache>, key: (u64, u64), compute: F) -> Arc<SymChar>
where
    F: FnOnce() -> SymChar,
{
    let cache = cache.get_or_init(Default::default);
    if let Some(hit) = cache.read().expect("character cache poisoned").get(&key) {
        return Arc::clone(hit);
    }
    let value = Arc::new(compute());
    let mut guard = cache.write().expect("character cache poisoned");
    Arc::clone(guard.entry(key).or_insert(value))
}

pub(crate) fn simple_char_shared(p: Prime, a: Weight) -> Arc<SymChar> {
    cached(&SIMPLE_CACHE, (p.get(), a), || {
        let mut acc = SymChar::one();
        let mut twist = 1u64;
        for d in p_adic_digits(a, p).digits() {
            acc = &acc * &weyl_char(*d).frobenius(twist);
            twist *= p.get();
        }
        acc
    })
}

/// `ch L(a) = prod_i F^i(ch L(a_i))` over the base-`p` digits of `a`.
pub fn simple_char(p: Prime, a: Weight) -> SymChar {
    (*simple_char_shared(p, a)).clone()
}

pub(crate) fn tilting_char_shared(p: Prime, m: Weight) -> Arc<SymChar> {
    let q = p.get();
    if m < q {
        return Arc::new(weyl_char(m));
    }
    cached(&TILTING_CACHE, (q, m), || {
        if m <= 2 * q - 2 {
            return &weyl_char(m) + &weyl_char(2 * q - 2 - m);
        }
        let shifted = m - (q - 1);
        let (low, high) = (shifted % q, shifted / q);
        let head = tilting_char_shared(p, q - 1 + low);
        let tail = tilting_char_shared(p, high).frobenius(q);
        &*head * &tail
    })
}

/// `ch T(m)` by Donkin's recursion.
///
/// `T(m)` is the Weyl module below `p`, `chi_m + chi_(2p-2-m)` for
/// `p <= m <= 2p-2`, and `T(p-1+a) (x) T(b)^(1)` once `m - (p-1) = a + p*b`
/// exceeds that range.
pub fn tilting_char(p: Prime, m: Weight) -> SymChar {
    (*tilting_char_shared(p, m)).clone()
}

/// `St_r = L((p^r - 1) rho)`.
pub fn steinberg_char(p: Prime, r: u32) -> Result<SymChar> {
    let top = p
        .checked_pow(r)
        .ok_or(Error::Inconsistent(format!("p^{r} overflows for p={p}")))?;
    Ok(tilting_char(p, top - 1))
}

pub fn decompose_simples(f: &LaurentPoly, p: Prime) -> Result<BTreeMap<Weight, BigInt>> {
    greedy_decompose(f, |a| Ok(simple_char_shared(p, a)))
}

pub fn decompose_tiltings(f: &LaurentPoly, p: Prime) -> Result<BTreeMap<Weight, BigInt>> {
    greedy_decompose(f, |m| Ok(tilting_char_shared(p, m)))
}

pub fn decompose_weyl(f: &LaurentPoly) -> Result<BTreeMap<Weight, BigInt>> {
    greedy_decompose(f, |m| Ok(weyl_char(m)))
}

pub(crate) fn first_negative(mults: &BTreeMap<u64, BigInt>) -> Option<(u64, &BigInt)> {
    mults
        .iter()
        .find(|(_, c)| c.is_negative())
        .map(|(a, c)| (*a, c))
}

/// `[V^{(x) i} : L(a)]` for the natural module `V`.
pub fn tensor_power_simple_mults(p: Prime, i: u32) -> Result<BTreeMap<Weight, BigInt>> {
    let ch = weyl_char(1).pow(i);
    let mults = decompose_simples(ch.poly(), p)?;
    if let Some((a, c)) = first_negative(&mults) {
        return Err(Error::NegativeMultiplicity {
            context: format!("V^{i} at p={p}"),
            label: a,
            value: c.to_string(),
        });
    }
    Ok(mults)
}

/// True iff the tilting expansion of `f` has no negative coefficient.
pub fn is_tilting_char(f: &LaurentPoly, p: Prime) -> Result<bool> {
    Ok(first_negative(&decompose_tiltings(f, p)?).is_none())
}

/// Least `r <= r_max` such that `f * ch St_r` passes [`is_tilting_char`].
pub fn min_steinberg_level(f: &SymChar, p: Prime, r_max: u32) -> Result<u32> {
    for r in 0..=r_max {
        let Some(top) = p.checked_pow(r) else { break };
        let product = f * &*tilting_char_shared(p, top - 1);
        if is_tilting_char(product.poly(), p)? {
            return Ok(r);
        }
    }
    Err(Error::NotFound { r_max })
}

/// Coefficients (by degree) of the polynomial `P_m` with `ch T(m) = P_m(v + v^-1)`.
pub fn tilting_poly(p: Prime, m: Weight) -> Result<Vec<BigInt>> {
    let natural = weyl_char(1);
    let mut powers = vec![SymChar::one()];
    for j in 1..=m as usize {
        let next = &powers[j - 1] * &natural;
        powers.push(next);
    }
    let coeffs = greedy_decompose(
        tilting_char_shared(p, m).poly(),
        |j| Ok(&powers[j as usize]),
    )?;
    let mut out = vec![BigInt::default(); m as usize + 1];
    for (j, c) in coeffs {
        out[j as usize] = c;
    }
    Ok(out)
}

/// A property of [`tilting_char`] that failed validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TiltingDefect {
    /// The Weyl expansion of `ch T(m)` has a negative coefficient or `chi_m` is not simple in it.
    WeylExpansion { m: Weight },
    /// The simple expansion of `ch T(m)` has a negative coefficient.
    SimpleExpansion { m: Weight },
    /// `ch St_r` differs from `ch L(p^r - 1)`.
    SteinbergNotSimple { r: u32 },
    /// `V^(x) i` has a negative tilting coefficient or `T(i)` does not occur once.
    PowerExpansion { i: Weight },
    /// `T(m) (x) V` is not tilting, or differs from `T(m+1) + T(m-1)` below `p - 1`.
    GeneratorProduct { m: Weight },
}

impl std::fmt::Display for TiltingDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::WeylExpansion { m } => write!(f, "Weyl expansion of T({m})"),
            Self::SimpleExpansion { m } => write!(f, "simple expansion of T({m})"),
            Self::SteinbergNotSimple { r } => write!(f, "St_{r} is not simple"),
            Self::PowerExpansion { i } => write!(f, "tilting expansion of V^{i}"),
            Self::GeneratorProduct { m } => write!(f, "T({m}) (x) V"),
        }
    }
}

/// Runs the character-level checks on `T(m)` and `V^(x) m`.
pub fn tilting_defect(p: Prime, m: Weight) -> Result<Option<TiltingDefect>> {
    let t = tilting_char_shared(p, m);

    let weyl = decompose_weyl(t.poly())?;
    if first_negative(&weyl).is_some() || weyl.get(&m).map(|c| c == &BigInt::from(1)) != Some(true)
    {
        return Ok(Some(TiltingDefect::WeylExpansion { m }));
    }
    if first_negative(&decompose_simples(t.poly(), p)?).is_some() {
        return Ok(Some(TiltingDefect::SimpleExpansion { m }));
    }

    let power = weyl_char(1).pow(m as u32);
    let tiltings = decompose_tiltings(power.poly(), p)?;
    if first_negative(&tiltings).is_some()
        || tiltings.get(&m).map(|c| c == &BigInt::from(1)) != Some(true)
    {
        return Ok(Some(TiltingDefect::PowerExpansion { i: m }));
    }

    let product = &*t * &weyl_char(1);
    let mut ok = is_tilting_char(product.poly(), p)?;
    if ok && m + 2 <= p.get() {
        let mut expected = tilting_char(p, m + 1);
        if m > 0 {
            expected = &expected + &*tilting_char_shared(p, m - 1);
        }
        ok = product == expected;
    }
    if !ok {
        return Ok(Some(TiltingDefect::GeneratorProduct { m }));
    }
    Ok(None)
}

/// Checks `ch T(p^r - 1) = ch L(p^r - 1)`.
pub fn steinberg_defect(p: Prime, r: u32) -> Result<Option<TiltingDefect>> {
    let st = steinberg_char(p, r)?;
    let top = p.checked_pow(r).expect("checked by steinberg_char") - 1;
    Ok((st != *simple_char_shared(p, top)).then_some(TiltingDefect::SteinbergNotSimple { r }))
}
