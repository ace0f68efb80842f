//! Symmetric Laurent characters in one variable `v` over the integers.
//!
//! A character of an `SL_2`-module is a finite sum `sum c_e v^e` that is
//! invariant under `v -> v^-1`. [`LaurentPoly`] stores arbitrary finitely
//! supported exponent maps; [`SymChar`] is the symmetric subring. The
//! [`greedy_decompose`] engine expands a symmetric character in any
//! unitriangular basis indexed by its top exponent (Weyl, simple, tilting,
//! or powers of `v + v^-1`).

use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Finitely supported map from exponent to a nonzero integer coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exponent: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, &coeff.into());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c.into());
        }
        p
    }

    /// Adds `c * v^e` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, exponent: i64, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exponent).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        self.coeffs.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn top_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn bottom_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// First exponent whose coefficient differs from its mirror, if any.
    pub fn symmetry_defect(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .find(|(e, c)| self.coeffs.get(&-**e) != Some(*c))
            .map(|(e, _)| *e)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_defect().is_none()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Replaces every exponent `e` by `factor * e`.
    pub fn scale_exponents(&self, factor: i64) -> Self {
        if factor == 0 {
            let total: BigInt = self.coeffs.values().sum();
            return Self::monomial(0, total);
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e * factor, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Subtracts `k * other` in place.
    pub fn sub_scaled(&mut self, k: &BigInt, other: &LaurentPoly) {
        for (e, c) in &other.coeffs {
            self.add_term(*e, &-(c * k));
        }
    }
}

/// Exact convolution product.
pub fn laurent_mul(f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (e1, c1) in &f.coeffs {
        for (e2, c2) in &g.coeffs {
            out.add_term(e1 + e2, &(c1 * c2));
        }
    }
    out
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        laurent_mul(self, rhs)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.sub_scaled(&BigInt::one(), rhs);
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// Writes `c*v^e` terms joined by `+`, highest exponent first; `0` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}*v^{e}")?;
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Accepts `c*v^e` terms joined by `+` (or `-`), with `1*` and `v^0` optional:
    /// `v^2+2+v^-2`, `1*v^3+1*v^1`, `-3*v`, `v^2-1`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        if compact == "0" {
            return Ok(Self::zero());
        }

        let mut terms = Vec::new();
        let mut current = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let splits = match ch {
                '+' => true,
                '-' => !matches!(prev, None | Some('^') | Some('+') | Some('*')),
                _ => false,
            };
            if splits {
                if current.is_empty() {
                    return Err(err("empty term"));
                }
                terms.push(std::mem::take(&mut current));
            }
            if ch != '+' {
                current.push(ch);
            }
            prev = Some(ch);
        }
        if current.is_empty() {
            return Err(err("trailing operator"));
        }
        terms.push(current);

        let mut poly = Self::zero();
        for term in terms {
            let (coeff, exponent) =
                parse_term(&term).ok_or_else(|| err(&format!("bad term {term:?}")))?;
            poly.add_term(exponent, &coeff);
        }
        Ok(poly)
    }
}

fn parse_term(term: &str) -> Option<(BigInt, i64)> {
    let (sign, body) = match term.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, term),
    };
    let Some(vpos) = body.find('v') else {
        let c: BigInt = body.parse().ok()?;
        return Some((c * sign, 0));
    };
    let (coeff_part, var_part) = body.split_at(vpos);
    let coeff: BigInt = match coeff_part {
        "" => BigInt::one(),
        s => s.strip_suffix('*')?.parse().ok()?,
    };
    let exponent = match &var_part[1..] {
        "" => 1,
        rest => rest.strip_prefix('^')?.parse().ok()?,
    };
    Some((coeff * sign, exponent))
}

/// A Laurent polynomial invariant under `v -> v^-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymChar(LaurentPoly);

impl SymChar {
    pub fn new(poly: LaurentPoly) -> Result<Self> {
        match poly.symmetry_defect() {
            None => Ok(Self(poly)),
            Some(e) => Err(Error::NonSymmetricInput {
                exponent: e,
                mirror: -e,
            }),
        }
    }

    pub fn zero() -> Self {
        Self(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self(LaurentPoly::one())
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Highest exponent, which is `>= 0` for any nonzero symmetric character.
    pub fn top_weight(&self) -> Option<u64> {
        self.0.top_exponent().map(|e| e as u64)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.is_nonnegative()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self(self.0.scale(k))
    }

    pub fn pow(&self, k: u32) -> Self {
        Self(self.0.pow(k))
    }

    /// Exponent scaling `v -> v^p`, the character of the Frobenius twist.
    pub fn frobenius(&self, p: u64) -> Self {
        Self(self.0.scale_exponents(p as i64))
    }
}

impl Mul for &SymChar {
    type Output = SymChar;
    fn mul(self, rhs: &SymChar) -> SymChar {
        SymChar(&self.0 * &rhs.0)
    }
}

impl Add for &SymChar {
    type Output = SymChar;
    fn add(self, rhs: &SymChar) -> SymChar {
        SymChar(&self.0 + &rhs.0)
    }
}

impl Sub for &SymChar {
    type Output = SymChar;
    fn sub(self, rhs: &SymChar) -> SymChar {
        SymChar(&self.0 - &rhs.0)
    }
}

impl fmt::Display for SymChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for SymChar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SymChar::new(s.parse()?)
    }
}

/// The Weyl character `v^m + v^(m-2) + ... + v^-m`.
pub fn weyl_char(m: u64) -> SymChar {
    let m = m as i64;
    SymChar(LaurentPoly::from_terms((0..=m).map(|k| (m - 2 * k, 1))))
}

pub fn frobenius_substitute(f: &SymChar, p: u64) -> SymChar {
    f.frobenius(p)
}

/// Expands a symmetric `f` as `sum c[m] * basis(m)`.
///
/// `basis(m)` must equal `v^m` plus strictly lower terms. The top exponent of
/// the remainder strictly decreases on every subtraction, so the loop ends.
pub fn greedy_decompose<B, F>(f: &LaurentPoly, mut basis: F) -> Result<BTreeMap<u64, BigInt>>
where
    F: FnMut(u64) -> Result<B>,
    B: Borrow<SymChar>,
{
    if let Some(e) = f.symmetry_defect() {
        return Err(Error::NonSymmetricInput {
            exponent: e,
            mirror: -e,
        });
    }
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    while let Some(top) = rest.top_exponent() {
        let c = rest.coeff(top);
        let index = top as u64;
        let element = basis(index)?;
        let element = element.borrow();
        check_unitriangular(index, element)?;
        rest.sub_scaled(&c, element.poly());
        out.insert(index, c);
    }
    Ok(out)
}

fn check_unitriangular(index: u64, element: &SymChar) -> Result<()> {
    let top = element.poly().top_exponent();
    if top != Some(index as i64) {
        return Err(Error::BasisNotUnitriangular {
            index,
            reason: format!("top exponent is {top:?}"),
        });
    }
    if !element.poly().coeff(index as i64).is_one() {
        return Err(Error::BasisNotUnitriangular {
            index,
            reason: "leading coefficient is not 1".into(),
        });
    }
    Ok(())
}

/// `sum c[m] * basis(m)`, the inverse of [`greedy_decompose`].
pub fn recombine<B, F>(coeffs: &BTreeMap<u64, BigInt>, mut basis: F) -> Result<LaurentPoly>
where
    F: FnMut(u64) -> Result<B>,
    B: Borrow<SymChar>,
{
    let mut out = LaurentPoly::zero();
    for (m, c) in coeffs {
        let element = basis(*m)?;
        out.sub_scaled(&-c, element.borrow().poly());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    /// Dense-vector convolution, independent of the sparse product.
    fn dense_convolution(f: &[(i64, i64)], g: &[(i64, i64)]) -> Vec<(i64, i64)> {
        let offset = 64i64;
        let mut acc = vec![0i64; 257];
        for &(e1, c1) in f {
            for &(e2, c2) in g {
                acc[(e1 + e2 + 2 * offset) as usize] += c1 * c2;
            }
        }
        acc.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i as i64 - 2 * offset, *c))
            .collect()
    }

    #[test]
    fn mul_examples() {
        let v = lp(&[(1, 1), (-1, 1)]);
        assert_eq!(&v * &LaurentPoly::one(), v);
        assert_eq!(&v * &v, lp(&[(2, 1), (0, 2), (-2, 1)]));
        let v2 = [(2, 1), (-2, 1)];
        let expected = dense_convolution(&[(1, 1), (-1, 1)], &v2);
        assert_eq!(expected, vec![(-3, 1), (-1, 1), (1, 1), (3, 1)]);
        assert_eq!(&v * &lp(&v2), lp(&expected));
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(weyl_char(0), SymChar::one());
        assert_eq!(weyl_char(1).into_poly(), lp(&[(1, 1), (-1, 1)]));
        // closed-form sum over k = 0..=3 of v^(3-2k)
        let closed: Vec<(i64, i64)> = (0..=3).map(|k| (3 - 2 * k, 1)).collect();
        assert_eq!(weyl_char(3).into_poly(), lp(&closed));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(
            frobenius_substitute(&weyl_char(1), 2).into_poly(),
            lp(&[(2, 1), (-2, 1)])
        );
        assert_eq!(frobenius_substitute(&SymChar::one(), 7), SymChar::one());
        let f = SymChar::new(lp(&[(2, 1), (0, 1), (-2, 1)])).unwrap();
        assert_eq!(
            frobenius_substitute(&f, 3).into_poly(),
            lp(&[(6, 1), (0, 1), (-6, 1)])
        );
    }

    fn weyl_basis(m: u64) -> Result<SymChar> {
        Ok(weyl_char(m))
    }

    #[test]
    fn greedy_examples() {
        let f = &weyl_char(2) + &weyl_char(0);
        let d = greedy_decompose(f.poly(), weyl_basis).unwrap();
        assert_eq!(d, BTreeMap::from([(0, 1.into()), (2, 1.into())]));

        let sq = weyl_char(1).pow(2);
        let d = greedy_decompose(sq.poly(), weyl_basis).unwrap();
        assert_eq!(d, BTreeMap::from([(0, 1.into()), (2, 1.into())]));

        // simple characters at p = 2 in degrees <= 2: L(0) = 1, L(2) = v^2 + v^-2
        let simple_p2 = |m: u64| -> Result<SymChar> {
            Ok(match m {
                0 => SymChar::one(),
                2 => SymChar::new(lp(&[(2, 1), (-2, 1)])).unwrap(),
                _ => unreachable!(),
            })
        };
        let d = greedy_decompose(sq.poly(), simple_p2).unwrap();
        assert_eq!(d, BTreeMap::from([(0, 2.into()), (2, 1.into())]));
    }

    #[test]
    fn greedy_rejects_asymmetric_input() {
        let f = lp(&[(2, 1), (0, 1)]);
        assert!(matches!(
            greedy_decompose(&f, weyl_basis),
            Err(Error::NonSymmetricInput { exponent: 2, .. })
        ));
    }

    #[test]
    fn greedy_rejects_bad_basis() {
        let f = weyl_char(2);
        let bad = |m: u64| -> Result<SymChar> { Ok(weyl_char(m).scale(&2.into())) };
        assert!(matches!(
            greedy_decompose(f.poly(), bad),
            Err(Error::BasisNotUnitriangular { index: 2, .. })
        ));
    }

    #[test]
    fn virtual_decomposition_is_allowed() {
        let f = SymChar::new(lp(&[(2, 1), (-2, 1)])).unwrap();
        let d = greedy_decompose(f.poly(), weyl_basis).unwrap();
        assert_eq!(d, BTreeMap::from([(0, (-1).into()), (2, 1.into())]));
    }

    #[test]
    fn display_and_parse() {
        let w = weyl_char(3);
        assert_eq!(w.to_string(), "1*v^3+1*v^1+1*v^-1+1*v^-3");
        assert_eq!("1*v^3+1*v^1+1*v^-1+1*v^-3".parse::<SymChar>().unwrap(), w);
        assert_eq!(
            "v^2 + 2 + v^-2".parse::<SymChar>().unwrap(),
            weyl_char(1).pow(2)
        );
        assert_eq!("v+v^-1".parse::<SymChar>().unwrap(), weyl_char(1));
        assert_eq!(
            "v^2-1".parse::<LaurentPoly>().unwrap(),
            lp(&[(2, 1), (0, -1)])
        );
        assert_eq!(
            "1*v^2+-2*v^0".parse::<LaurentPoly>().unwrap(),
            lp(&[(2, 1), (0, -2)])
        );
        assert_eq!("3*v^0".parse::<LaurentPoly>().unwrap(), lp(&[(0, 3)]));
        assert_eq!("0".parse::<LaurentPoly>().unwrap(), LaurentPoly::zero());
        assert!("v^2+".parse::<LaurentPoly>().is_err());
        assert!("2*w".parse::<LaurentPoly>().is_err());
        assert!("v^2".parse::<SymChar>().is_err());
    }

    #[test]
    fn coefficients_do_not_overflow() {
        let big = weyl_char(1).pow(80);
        let c = big.poly().coeff(0);
        // central binomial coefficient C(80, 40)
        assert_eq!(c.to_string(), "107507208733336176461620");
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..=6, -5i64..=5), 0..6).prop_map(LaurentPoly::from_terms)
    }

    fn arb_sym() -> impl Strategy<Value = SymChar> {
        prop::collection::vec((0i64..=8, -4i64..=6), 0..5).prop_map(|terms| {
            let mut p = LaurentPoly::zero();
            for (e, c) in terms {
                p.add_term(e, &c.into());
                if e != 0 {
                    p.add_term(-e, &c.into());
                }
            }
            SymChar::new(p).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert!(!(&f - &f).terms().any(|(_, c)| c.is_zero()));
        }

        #[test]
        fn symmetric_products_stay_symmetric(f in arb_sym(), g in arb_sym()) {
            prop_assert!((&f * &g).poly().is_symmetric());
        }

        #[test]
        fn greedy_round_trip(f in arb_sym()) {
            let d = greedy_decompose(f.poly(), weyl_basis).unwrap();
            prop_assert_eq!(recombine(&d, weyl_basis).unwrap(), f.poly().clone());
            let powers = |m: u64| -> Result<SymChar> { Ok(weyl_char(1).pow(m as u32)) };
            let d = greedy_decompose(f.poly(), powers).unwrap();
            prop_assert_eq!(recombine(&d, powers).unwrap(), f.poly().clone());
        }

        #[test]
        fn frobenius_is_multiplicative(f in arb_sym(), g in arb_sym(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            prop_assert_eq!((&f * &g).frobenius(p), &f.frobenius(p) * &g.frobenius(p));
        }

        #[test]
        fn display_parse_round_trip(f in arb_poly()) {
            prop_assert_eq!(f.to_string().parse::<LaurentPoly>().unwrap(), f);
        }
    }

    #[test]
    fn clebsch_gordan() {
        for m in 1..40 {
            assert_eq!(
                &weyl_char(1) * &weyl_char(m),
                &weyl_char(m + 1) + &weyl_char(m - 1)
            );
        }
    }
}
