//! The Grothendieck ring of `Ver_{p^n}` in the basis of simple objects.
//!
//! Simples are labelled by `Lambda^[n] = [0, p^n - p^(n-1))`. Everything is
//! driven by the rule for `L_1 (x) L_a` ([`fuse_l1`]): powers of `L_1`, the
//! full structure constants ([`structure_constants`]), and the images of
//! tilting modules.
//!
//! A recursive reference to `L_x` at a level where `x` is not a label
//! contributes zero. At `n = 1` this truncates `a + 1 = p - 1`; at `p = 2`
//! it removes the non-existent `L_1` of `Ver_2`.

mod cache;
mod fpdim;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::prime::Prime;
use crate::sl2_modp::{p_adic_digits, tilting_poly};

pub use cache::{CacheOutcome, TableCache, TABLE_SCHEMA};
pub use fpdim::{fpdim_estimate, FPDIM_MAX_ITERATIONS, FPDIM_STOP};
pub use table::{shared_table, structure_constants, FusionTable, DEFAULT_BUDGET};

/// A level `Ver_{p^n}`, `n >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VerLevel {
    p: Prime,
    n: u32,
    bound: u64,
}

impl VerLevel {
    pub fn new(p: Prime, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLevel(n));
        }
        let too_large = || Error::LevelTooLarge { p: p.get(), n };
        let top = p.checked_pow(n).ok_or_else(too_large)?;
        // keep p * label representable one level up
        top.checked_mul(p.get()).ok_or_else(too_large)?;
        let bound = top - top / p.get();
        Ok(Self { p, n, bound })
    }

    pub fn from_raw(p: u64, n: u32) -> Result<Self> {
        Self::new(Prime::new(p)?, n)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `|Lambda^[n]| = p^n - p^(n-1)`.
    pub fn lambda_bound(&self) -> u64 {
        self.bound
    }

    pub fn labels(&self) -> Range<u64> {
        0..self.bound
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.bound
    }

    pub fn check_label(&self, a: u64) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::LabelOutOfRange {
                p: self.p.get(),
                n: self.n,
                a,
                bound: self.bound,
            })
        }
    }

    /// `Ver_{p^(n-1)}`, or `None` at `n = 1`.
    pub fn lower(&self) -> Option<VerLevel> {
        (self.n > 1).then(|| VerLevel::new(self.p, self.n - 1).expect("lower level is valid"))
    }

    pub fn higher(&self) -> Result<VerLevel> {
        VerLevel::new(self.p, self.n + 1)
    }

    /// False only for `Ver_2`, whose single simple is the unit.
    pub fn has_generator(&self) -> bool {
        self.bound > 1
    }
}

impl fmt::Display for VerLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ver_{{{}^{}}}", self.p, self.n)
    }
}

/// A simple object `L_a^[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VerLabel {
    level: VerLevel,
    a: u64,
}

impl VerLabel {
    pub fn new(level: VerLevel, a: u64) -> Result<Self> {
        level.check_label(a)?;
        Ok(Self { level, a })
    }

    pub fn level(&self) -> VerLevel {
        self.level
    }

    pub fn a(&self) -> u64 {
        self.a
    }
}

pub fn lambda_set(p: Prime, n: u32) -> Result<Vec<u64>> {
    Ok(VerLevel::new(p, n)?.labels().collect())
}

/// An element of `K(Ver_{p^n})` in the simple basis.
///
/// `is_virtual` is false only for classes known to be nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    level: VerLevel,
    mults: BTreeMap<u64, BigInt>,
    is_virtual: bool,
}

impl KClass {
    pub fn zero(level: VerLevel) -> Self {
        Self {
            level,
            mults: BTreeMap::new(),
            is_virtual: false,
        }
    }

    pub fn unit(level: VerLevel) -> Self {
        Self::simple_unchecked(level, 0)
    }

    pub fn simple(level: VerLevel, a: u64) -> Result<Self> {
        level.check_label(a)?;
        Ok(Self::simple_unchecked(level, a))
    }

    fn simple_unchecked(level: VerLevel, a: u64) -> Self {
        Self {
            level,
            mults: BTreeMap::from([(a, BigInt::one())]),
            is_virtual: false,
        }
    }

    /// Builds a class from raw multiplicities; labels must lie in `Lambda`.
    pub fn from_mults(level: VerLevel, mults: BTreeMap<u64, BigInt>) -> Result<Self> {
        if let Some(a) = mults.keys().find(|a| !level.contains(**a)) {
            level.check_label(*a)?;
        }
        let mults: BTreeMap<u64, BigInt> =
            mults.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let is_virtual = mults.values().any(|c| c.is_negative());
        Ok(Self {
            level,
            mults,
            is_virtual,
        })
    }

    fn from_raw(level: VerLevel, mults: BTreeMap<u64, BigInt>, is_virtual: bool) -> Self {
        debug_assert!(mults.keys().all(|a| level.contains(*a)));
        debug_assert!(mults.values().all(|c| !c.is_zero()));
        Self {
            level,
            mults,
            is_virtual,
        }
    }

    pub fn level(&self) -> VerLevel {
        self.level
    }

    pub fn mults(&self) -> &BTreeMap<u64, BigInt> {
        &self.mults
    }

    pub fn into_mults(self) -> BTreeMap<u64, BigInt> {
        self.mults
    }

    pub fn get(&self, a: u64) -> BigInt {
        self.mults.get(&a).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.mults.is_empty()
    }

    pub fn is_virtual(&self) -> bool {
        self.is_virtual
    }

    pub fn has_negative(&self) -> bool {
        self.mults.values().any(|c| c.is_negative())
    }

    /// Checks nonnegativity and clears the virtual flag.
    pub fn into_actual(mut self, context: &str) -> Result<Self> {
        if let Some((a, c)) = self.mults.iter().find(|(_, c)| c.is_negative()) {
            return Err(Error::NegativeMultiplicity {
                context: context.to_string(),
                label: *a,
                value: c.to_string(),
            });
        }
        self.is_virtual = false;
        Ok(self)
    }

    /// `self + k * other`.
    pub fn add_scaled(&mut self, k: &BigInt, other: &KClass) {
        assert_eq!(self.level, other.level, "classes from different levels");
        if k.is_zero() {
            return;
        }
        for (a, c) in &other.mults {
            add_into(&mut self.mults, *a, &(c * k));
        }
        self.is_virtual |= other.is_virtual || k.is_negative();
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.mults.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}[L_{a}]")?;
        }
        Ok(())
    }
}

pub(crate) fn add_into(map: &mut BTreeMap<u64, BigInt>, key: u64, value: &BigInt) {
    if value.is_zero() {
        return;
    }
    let slot = map.entry(key).or_default();
    *slot += value;
    if slot.is_zero() {
        map.remove(&key);
    }
}

// [L_1 (x) L_a : L_b] at level n, with every label multiplied by `label_scale`
// before it lands in `out`; references outside Lambda add nothing.
fn fuse_into(p: u64, n: u32, a: u64, label_scale: u64, out: &mut BTreeMap<u64, BigInt>) {
    if n == 0 {
        return;
    }
    let top = p.pow(n);
    let bound = top - top / p;
    if bound <= 1 || a >= bound {
        return;
    }
    let low_digit = a % p;
    if low_digit < p - 1 {
        if a + 1 < bound {
            add_into(out, (a + 1) * label_scale, &BigInt::one());
        }
        if low_digit > 0 {
            add_into(out, (a - 1) * label_scale, &BigInt::one());
        }
    } else if n > 1 {
        add_into(out, (a - 1) * label_scale, &BigInt::from(2));
        fuse_into(p, n - 1, (a + 1 - p) / p, label_scale * p, out);
    }
}

fn fuse_raw(level: VerLevel, a: u64) -> BTreeMap<u64, BigInt> {
    let mut out = BTreeMap::new();
    fuse_into(level.p.get(), level.n, a, 1, &mut out);
    out
}

/// The class of `L_1 (x) L_a` at level `n`.
pub fn fuse_l1(level: VerLevel, a: u64) -> Result<KClass> {
    if !level.has_generator() {
        return Err(Error::NoSuchSimple {
            p: level.p.get(),
            n: level.n,
        });
    }
    level.check_label(a)?;
    Ok(KClass::from_raw(level, fuse_raw(level, a), false))
}

/// Multiplies `x` by `[L_1]`, reading `L_1` as zero when it does not exist.
pub(crate) fn times_generator(level: VerLevel, x: &BTreeMap<u64, BigInt>) -> BTreeMap<u64, BigInt> {
    let mut out = BTreeMap::new();
    for (a, c) in x {
        for (b, m) in fuse_raw(level, *a) {
            add_into(&mut out, b, &(c * m));
        }
    }
    out
}

/// `[(x)^j L_1]` for `j = 0..=max_power`, with the zero convention for `Ver_2`.
pub(crate) fn power_classes_lenient(level: VerLevel, max_power: u32) -> Vec<BTreeMap<u64, BigInt>> {
    let mut out = Vec::with_capacity(max_power as usize + 1);
    out.push(BTreeMap::from([(0, BigInt::one())]));
    for j in 1..=max_power as usize {
        let next = times_generator(level, &out[j - 1]);
        out.push(next);
    }
    out
}

/// `[(x)^i L_1^[n]]` in the simple basis.
pub fn tensor_power_class(level: VerLevel, i: u32) -> Result<KClass> {
    if i > 0 && !level.has_generator() {
        return Err(Error::NoSuchSimple {
            p: level.p.get(),
            n: level.n,
        });
    }
    let mut classes = power_classes_lenient(level, i);
    let top = classes.pop().expect("nonempty");
    KClass::from_raw(level, top, false).into_actual("tensor power of L_1")
}

/// `L_a^[n] = L_{pa}^[n+1]`.
pub fn embed_label(level: VerLevel, a: u64) -> Result<u64> {
    level.check_label(a)?;
    Ok(a * level.p.get())
}

/// `[T_m]` in `Ver_{p^n}`: `P_m` evaluated at `[L_1]` through power classes.
pub fn tilting_image_class(level: VerLevel, m: u64) -> Result<KClass> {
    let poly = tilting_poly(level.p, m)?;
    let powers = power_classes_lenient(level, m as u32);
    let mut acc = BTreeMap::new();
    for (coeff, power) in poly.iter().zip(&powers) {
        if coeff.is_zero() {
            continue;
        }
        for (b, c) in power {
            add_into(&mut acc, *b, &(c * coeff));
        }
    }
    KClass::from_raw(level, acc, true).into_actual(&format!("image of T_{m} in {level}"))
}

/// Evaluates `poly` at `[L_base]` in `K(Ver_{p^n})`.
pub fn general_image_class(table: &FusionTable, base: u64, poly: &[BigInt]) -> Result<KClass> {
    table.evaluate(poly, base)
}

/// Checks `[L_a] = prod_j [T^[j]_{a_(n-j)}]` with `T^[j]` read at `L_{p^(n-j)}`.
pub fn steinberg_factorization_check(table: &FusionTable, a: u64) -> Result<bool> {
    let level = table.level();
    level.check_label(a)?;
    let p = level.p;
    let digits = p_adic_digits(a, p);
    let mut product = KClass::unit(level);
    for j in 1..=level.n {
        let digit = digits.digit((level.n - j) as usize);
        let base = p.get().pow(level.n - j);
        let factor = table.evaluate(&tilting_poly(p, digit)?, base)?;
        product = table.multiply(&product, &factor);
    }
    Ok(product.mults == KClass::simple(level, a)?.mults)
}

/// Labels `a` with `Ext^1(L_a, 1) != 0`: `p^i + p^(i-1)(p-2)`, `1 <= i <= n-1`.
pub fn ext1_locus(level: VerLevel) -> Vec<u64> {
    let p = level.p.get();
    (1..level.n)
        .map(|i| p.pow(i) + p.pow(i - 1) * (p - 2))
        .filter(|a| level.contains(*a))
        .collect()
}

/// Checks `[T^[j+1]_{2p-2}] = 2[1] + [L_c]`, `c = (2p-2) p^(n-j-1)`.
///
/// The `[L_c]` term is dropped when `c` is not a label (this happens for
/// `p = 2`, `j = 1`).
pub fn t2p2_check(table: &FusionTable, j: u32) -> Result<bool> {
    let level = table.level();
    if j == 0 || j >= level.n {
        return Err(Error::InvalidParameter(format!(
            "j must satisfy 1 <= j <= n-1 = {}, got {j}",
            level.n - 1
        )));
    }
    let p = level.p.get();
    let base = p.pow(level.n - j - 1);
    let image = table.evaluate(&tilting_poly(level.p, 2 * p - 2)?, base)?;
    let c = (2 * p - 2) * base;
    let mut expected = BTreeMap::from([(0, BigInt::from(2))]);
    if level.contains(c) {
        add_into(&mut expected, c, &BigInt::one());
    }
    Ok(image.mults == expected)
}

/// Level `p - 2` truncated Clebsch-Gordan rule for `Ver_p`.
pub fn verp_closed_fusion(p: Prime, a: u64, b: u64) -> Result<KClass> {
    let level = VerLevel::new(p, 1)?;
    level.check_label(a)?;
    level.check_label(b)?;
    let q = p.get() as i64;
    let (a, b) = (a as i64, b as i64);
    let low = (a - b).abs();
    let high = (a + b).min(2 * (q - 2) - a - b);
    let mults = (low..=high)
        .step_by(2)
        .map(|c| (c as u64, BigInt::one()))
        .collect();
    Ok(KClass::from_raw(level, mults, false))
}
