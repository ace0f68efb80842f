//! Frobenius on labels, stabilization of tensor powers of `L_1` across
//! levels, and the limit multiplicities compared against `Rep(SL_2)`.
//!
//! For `2i < p^(n-1) - p^(n-2)` the class of `L_1^(x) i` in `Ver_{p^n}` agrees
//! label by label with its class in `Ver_{p^(n-1)}`. The least such `n` is
//! the start of the stable window; the class there is the class of
//! `Lbar_1^(x) i` in the limit category.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::char_ring::weyl_char;
use crate::error::{Error, Result};
use crate::prime::Prime;
use crate::sl2_modp::{decompose_simples, tensor_power_simple_mults};
use crate::verlinde_ring::{power_classes_lenient, VerLabel, VerLevel};

/// A simple object `Lbar_a` of the limit category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LimitLabel {
    pub a: u64,
}

/// Levels used to read off the stable class of `L_1^(x) i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableWindow {
    pub p: Prime,
    pub i: u32,
    pub n_min: u32,
    pub n_checked: Vec<u32>,
}

/// Least `n >= 2` with `2i < p^(n-1) - p^(n-2)`.
pub fn n_min(p: Prime, i: u32) -> Result<u32> {
    let mut n = 2;
    loop {
        if in_stable_range(p, n, i)? {
            return Ok(n);
        }
        n += 1;
    }
}

/// `2r < p^(n-1) - p^(n-2)`, the sharp sufficient condition for stabilization.
pub fn in_stable_range(p: Prime, n: u32, r: u32) -> Result<bool> {
    if n < 2 {
        return Ok(false);
    }
    // |Lambda^[n-1]| = p^(n-2) (p - 1); anything past u64 is certainly large enough
    let size = p
        .checked_pow(n - 2)
        .and_then(|q| q.checked_mul(p.get() - 1));
    Ok(size.is_none_or(|s| 2 * u64::from(r) < s))
}

/// The coarser sufficient condition `n > 4r`.
pub fn coarse_bound(n: u32, r: u32) -> bool {
    u64::from(n) > 4 * u64::from(r)
}

/// `Fr(L_b^[n]) = L_b^[n-1]`, defined for `b` in `Lambda^[n-1]`.
pub fn frobenius_label(p: Prime, n: u32, b: u64) -> Result<VerLabel> {
    let level = VerLevel::new(p, n)?;
    let Some(lower) = level.lower() else {
        return Err(Error::InvalidLevel(n));
    };
    if !lower.contains(b) {
        return Err(Error::OutsideFrobeniusDomain {
            p: p.get(),
            lower: n - 1,
            b,
        });
    }
    VerLabel::new(lower, b)
}

fn power_classes(p: Prime, n: u32, r: u32) -> Result<Vec<BTreeMap<u64, BigInt>>> {
    Ok(power_classes_lenient(VerLevel::new(p, n)?, r))
}

/// First tensor power at which two adjacent levels disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityMismatch {
    pub i: u32,
    pub upper: BTreeMap<u64, BigInt>,
    pub lower: BTreeMap<u64, BigInt>,
}

/// Compares `[L_1^(x) i]` at levels `n` and `n - 1` for `i <= r`.
///
/// Outside `2r < p^(n-1) - p^(n-2)` this returns [`Error::BoundViolated`]
/// unless `override_bounds` is set; a disagreement there is an observation,
/// not an error. A missing `L_1` (at `Ver_2`) is read as zero.
pub fn stabilization_check(
    p: Prime,
    n: u32,
    r: u32,
    override_bounds: bool,
) -> Result<Option<StabilityMismatch>> {
    if n < 2 {
        return Err(Error::InvalidLevel(n));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if !override_bounds && !in_stable_range(p, n, r)? {
        return Err(Error::BoundViolated { p: p.get(), n, r });
    }
    let lower_level = VerLevel::new(p, n - 1)?;
    let upper = power_classes(p, n, r)?;
    let lower = power_classes(p, n - 1, r)?;
    for (i, (u, l)) in upper.into_iter().zip(lower).enumerate() {
        if u.keys().any(|b| !lower_level.contains(*b)) || u != l {
            return Ok(Some(StabilityMismatch {
                i: i as u32,
                upper: u,
                lower: l,
            }));
        }
    }
    Ok(None)
}

/// The class of `Lbar_1^(x) i`, read at `n_min` and confirmed at `n_min + 1`.
pub fn stable_class(p: Prime, i: u32) -> Result<(BTreeMap<u64, BigInt>, StableWindow)> {
    stable_class_over(p, i, 2)
}

/// Like [`stable_class`], requiring agreement at `levels` consecutive levels from `n_min`.
pub fn stable_class_over(
    p: Prime,
    i: u32,
    levels: u32,
) -> Result<(BTreeMap<u64, BigInt>, StableWindow)> {
    let start = n_min(p, i)?;
    let mut classes = Vec::new();
    for n in start..start + levels.max(1) {
        let class = power_classes(p, n, i)?.pop().expect("nonempty");
        if let Some((_, previous)) = classes.last() {
            if previous != &class {
                return Err(Error::StabilityFailure {
                    p: p.get(),
                    i,
                    lower: n - 1,
                    upper: n,
                });
            }
        }
        classes.push((n, class));
    }
    let n_checked = classes.iter().map(|(n, _)| *n).collect();
    let (_, class) = classes.swap_remove(0);
    Ok((
        class,
        StableWindow {
            p,
            i,
            n_min: start,
            n_checked,
        },
    ))
}

/// `[Lbar_1^(x) i : Lbar_a]`.
pub fn limit_multiplicity(p: Prime, i: u32, a: u64) -> Result<(BigInt, StableWindow)> {
    let (class, window) = stable_class(p, i)?;
    Ok((class.get(&a).cloned().unwrap_or_default(), window))
}

/// Outcome of comparing two label -> multiplicity maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub lhs: BTreeMap<u64, BigInt>,
    pub rhs: BTreeMap<u64, BigInt>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Smallest label where the sides differ, with both values.
    pub fn witness(&self) -> Option<(u64, BigInt, BigInt)> {
        let get = |m: &BTreeMap<u64, BigInt>, a: &u64| m.get(a).cloned().unwrap_or_default();
        self.lhs
            .keys()
            .chain(self.rhs.keys())
            .filter(|a| get(&self.lhs, a) != get(&self.rhs, a))
            .min()
            .map(|a| (*a, get(&self.lhs, a), get(&self.rhs, a)))
    }
}

/// Limit multiplicities of `Lbar_1^(x) i` against the simple multiplicities of `V^(x) i`.
pub fn be_equivalence_check(p: Prime, i: u32) -> Result<Comparison> {
    let (lhs, _) = stable_class(p, i)?;
    let rhs = tensor_power_simple_mults(p, i)?;
    Ok(Comparison { lhs, rhs })
}

/// Stable class with labels scaled by `p` against the simple expansion of `F(ch V^(x) i)`.
pub fn frobenius_limit_check(p: Prime, i: u32) -> Result<Comparison> {
    let (class, _) = stable_class(p, i)?;
    let lhs = class.into_iter().map(|(a, c)| (a * p.get(), c)).collect();
    let twisted = weyl_char(1).pow(i).frobenius(p.get());
    let rhs = decompose_simples(twisted.poly(), p)?;
    Ok(Comparison { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verlinde_ring::embed_label;

    fn p(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    fn class(pairs: &[(u64, i64)]) -> BTreeMap<u64, BigInt> {
        pairs.iter().map(|(a, c)| (*a, BigInt::from(*c))).collect()
    }

    #[test]
    fn frobenius_label_examples() {
        let l = frobenius_label(p(2), 3, 1).unwrap();
        assert_eq!((l.level().n(), l.a()), (2, 1));
        assert_eq!(frobenius_label(p(3), 2, 0).unwrap().a(), 0);
        assert_eq!(
            frobenius_label(p(2), 2, 1),
            Err(Error::OutsideFrobeniusDomain {
                p: 2,
                lower: 1,
                b: 1
            })
        );
        assert!(frobenius_label(p(2), 1, 0).is_err());
    }

    #[test]
    fn frobenius_label_domain() {
        for q in [2, 3, 5] {
            for n in 2..=4 {
                let upper = VerLevel::new(p(q), n).unwrap();
                let lower = upper.lower().unwrap();
                for b in upper.labels() {
                    match frobenius_label(p(q), n, b) {
                        Ok(l) => {
                            assert!(lower.contains(b));
                            assert_eq!(embed_label(lower, l.a()).unwrap(), q * b);
                        }
                        Err(_) => assert!(!lower.contains(b)),
                    }
                }
            }
        }
    }

    #[test]
    fn window_examples() {
        assert_eq!(n_min(p(2), 3).unwrap(), 5);
        assert_eq!(n_min(p(2), 8).unwrap(), 7);
        assert_eq!(n_min(p(3), 1).unwrap(), 3);
        assert_eq!(n_min(p(3), 0).unwrap(), 2);
        assert_eq!(n_min(p(5), 0).unwrap(), 2);
    }

    #[test]
    fn coarse_bound_implies_sharp_bound() {
        for q in [2, 3, 5, 7, 11, 13] {
            for r in 1..=64 {
                let first_coarse = 4 * r + 1;
                assert!(coarse_bound(first_coarse, r));
                assert!(
                    in_stable_range(p(q), first_coarse, r).unwrap(),
                    "p={q} r={r}"
                );
                assert!(n_min(p(q), r).unwrap() <= first_coarse);
            }
        }
    }

    #[test]
    fn stabilization_examples() {
        assert_eq!(stabilization_check(p(2), 5, 2, false).unwrap(), None);
        // 2 * 1 < 3 - 1 fails, yet both levels agree on i <= 1
        assert_eq!(
            stabilization_check(p(3), 2, 1, false),
            Err(Error::BoundViolated { p: 3, n: 2, r: 1 })
        );
        assert_eq!(stabilization_check(p(3), 2, 1, true).unwrap(), None);
        assert_eq!(
            stabilization_check(p(2), 2, 2, false),
            Err(Error::BoundViolated { p: 2, n: 2, r: 2 })
        );
        let mismatch = stabilization_check(p(2), 2, 2, true).unwrap().unwrap();
        assert_eq!(mismatch.i, 1);
        assert_eq!(power_classes(p(2), 2, 2).unwrap()[2], class(&[(0, 2)]));
    }

    #[test]
    fn limit_examples() {
        let (m, window) = limit_multiplicity(p(2), 2, 0).unwrap();
        assert_eq!(m, BigInt::from(2));
        assert_eq!(window.n_checked, vec![window.n_min, window.n_min + 1]);
        let (m, window) = limit_multiplicity(p(2), 3, 3).unwrap();
        assert_eq!((m, window.n_min), (BigInt::from(1), 5));
        for q in [2, 3, 5] {
            assert_eq!(limit_multiplicity(p(q), 0, 0).unwrap().0, BigInt::from(1));
            assert_eq!(
                limit_multiplicity(p(q), 2, 10_000).unwrap().0,
                BigInt::from(0)
            );
        }
        assert_eq!(stable_class(p(2), 3).unwrap().0, class(&[(1, 2), (3, 1)]));
    }

    #[test]
    fn be_equivalence_examples() {
        let c = be_equivalence_check(p(2), 3).unwrap();
        assert!(c.passed());
        assert_eq!(c.lhs, class(&[(1, 2), (3, 1)]));
        assert_eq!(
            be_equivalence_check(p(2), 2).unwrap().rhs,
            class(&[(0, 2), (2, 1)])
        );
        for q in [2, 3, 5, 7] {
            let c = be_equivalence_check(p(q), 1).unwrap();
            assert_eq!((c.lhs.clone(), c.witness()), (class(&[(1, 1)]), None));
        }
    }

    #[test]
    fn frobenius_limit_examples() {
        assert_eq!(
            frobenius_limit_check(p(2), 2).unwrap().lhs,
            class(&[(0, 2), (4, 1)])
        );
        assert!(frobenius_limit_check(p(2), 2).unwrap().passed());
        assert_eq!(
            frobenius_limit_check(p(3), 1).unwrap().rhs,
            class(&[(3, 1)])
        );
        let c = frobenius_limit_check(p(2), 3).unwrap();
        assert!(c.passed());
        assert_eq!(c.rhs, class(&[(2, 2), (6, 1)]));
    }

    #[test]
    fn witness_is_smallest_difference() {
        let c = Comparison {
            lhs: class(&[(1, 2), (3, 1), (5, 1)]),
            rhs: class(&[(1, 2), (4, 1)]),
        };
        assert!(!c.passed());
        assert_eq!(c.witness(), Some((3, BigInt::from(1), BigInt::from(0))));
    }
}
