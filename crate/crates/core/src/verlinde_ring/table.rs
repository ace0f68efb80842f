use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{add_into, fuse_raw, power_classes_lenient, KClass, VerLevel};
use crate::error::{Error, Result};

/// Default cap on `|Lambda|^3` for a table build.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

/// Structure constants `N_ab^c` of `K(Ver_{p^n})`.
///
/// `power_matrix[j][b] = [(x)^j L_1 : L_b]` for `j = 0..|Lambda|`. It is
/// lower unitriangular, and its inverse expresses each `[L_a]` as an integer
/// polynomial in `[L_1]` ([`FusionTable::label_poly`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTable {
    level: VerLevel,
    power_matrix: Vec<Vec<BigInt>>,
    label_polys: Vec<Vec<BigInt>>,
    products: Vec<BTreeMap<u64, BigInt>>,
}

/// Builds the full table for `level`, refusing if `|Lambda|^3 > budget`.
///
/// Products follow the recursion
/// `[L_{a+1}] = [L_1][L_a] - sum_{c <= a} [L_1 (x) L_a : L_c] [L_c]`,
/// which is forward substitution against the unitriangular power matrix.
pub fn structure_constants(level: VerLevel, budget: u128) -> Result<FusionTable> {
    let len = level.lambda_bound();
    let required = (len as u128).pow(3);
    if required > budget {
        return Err(Error::BudgetExceeded {
            p: level.p().get(),
            n: level.n(),
            required,
            budget,
        });
    }
    let len = len as usize;

    let power_matrix = build_power_matrix(level)?;
    let label_polys = invert_unitriangular(&power_matrix);

    let generator: Vec<BTreeMap<u64, BigInt>> =
        (0..len as u64).map(|a| fuse_raw(level, a)).collect();
    for (a, row) in generator.iter().enumerate().take(len.saturating_sub(1)) {
        let next = a as u64 + 1;
        if row.get(&next).map(BigInt::is_one) != Some(true) || row.keys().any(|c| *c > next) {
            return Err(Error::Inconsistent(format!(
                "L_1 (x) L_{a} is not unitriangular in {level}"
            )));
        }
    }

    let columns: Vec<Vec<BTreeMap<u64, BigInt>>> = (0..len)
        .into_par_iter()
        .map(|b| product_column(&generator, b as u64, len))
        .collect();

    let mut products = vec![BTreeMap::new(); len * len];
    for (b, column) in columns.into_iter().enumerate() {
        for (a, class) in column.into_iter().enumerate() {
            products[a * len + b] = class;
        }
    }

    let table = FusionTable {
        level,
        power_matrix,
        label_polys,
        products,
    };
    table.check_nonnegative()?;
    Ok(table)
}

// [L_a (x) L_b] for all a, by the L_1 recursion in a.
fn product_column(
    generator: &[BTreeMap<u64, BigInt>],
    b: u64,
    len: usize,
) -> Vec<BTreeMap<u64, BigInt>> {
    let mut column: Vec<BTreeMap<u64, BigInt>> = Vec::with_capacity(len);
    column.push(BTreeMap::from([(b, BigInt::one())]));
    for a in 0..len.saturating_sub(1) {
        let mut next = BTreeMap::new();
        for (c, m) in &column[a] {
            for (d, k) in &generator[*c as usize] {
                add_into(&mut next, *d, &(m * k));
            }
        }
        for (c, k) in &generator[a] {
            if *c as usize != a + 1 {
                for (d, m) in &column[*c as usize] {
                    add_into(&mut next, *d, &-(m * k));
                }
            }
        }
        column.push(next);
    }
    column
}

fn build_power_matrix(level: VerLevel) -> Result<Vec<Vec<BigInt>>> {
    let len = level.lambda_bound() as usize;
    let classes = power_classes_lenient(level, len.saturating_sub(1) as u32);
    let mut matrix = Vec::with_capacity(len);
    for (j, class) in classes.into_iter().enumerate() {
        let mut row = vec![BigInt::zero(); len];
        for (b, c) in class {
            let b = b as usize;
            if b > j {
                return Err(Error::Inconsistent(format!(
                    "[L_1^{j} : L_{b}] is nonzero above the diagonal in {level}"
                )));
            }
            row[b] = c;
        }
        if !row[j].is_one() {
            return Err(Error::Inconsistent(format!(
                "[L_1^{j} : L_{j}] = {} in {level}, expected 1",
                row[j]
            )));
        }
        matrix.push(row);
    }
    Ok(matrix)
}

// Rows of the inverse of a lower unitriangular matrix.
fn invert_unitriangular(matrix: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let len = matrix.len();
    let mut inverse: Vec<Vec<BigInt>> = Vec::with_capacity(len);
    for a in 0..len {
        let mut row = vec![BigInt::zero(); len];
        row[a] = BigInt::one();
        for b in 0..a {
            let k = &matrix[a][b];
            if k.is_zero() {
                continue;
            }
            for (j, q) in inverse[b].iter().enumerate().take(b + 1) {
                if !q.is_zero() {
                    row[j] -= k * q;
                }
            }
        }
        inverse.push(row);
    }
    inverse
}

impl FusionTable {
    pub(crate) fn from_parts(
        level: VerLevel,
        power_matrix: Vec<Vec<BigInt>>,
        products: Vec<BTreeMap<u64, BigInt>>,
    ) -> Self {
        let label_polys = invert_unitriangular(&power_matrix);
        Self {
            level,
            power_matrix,
            label_polys,
            products,
        }
    }

    pub fn level(&self) -> VerLevel {
        self.level
    }

    /// `|Lambda^[n]|`.
    pub fn len(&self) -> usize {
        self.level.lambda_bound() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn power_matrix(&self) -> &[Vec<BigInt>] {
        &self.power_matrix
    }

    /// Coefficients of the polynomial `Q_a` with `[L_a] = Q_a([L_1])`.
    pub fn label_poly(&self, a: u64) -> &[BigInt] {
        &self.label_polys[a as usize]
    }

    /// `[L_a (x) L_b]` as a sparse map `c -> N_ab^c`.
    pub fn product(&self, a: u64, b: u64) -> &BTreeMap<u64, BigInt> {
        &self.products[a as usize * self.len() + b as usize]
    }

    pub fn constant(&self, a: u64, b: u64, c: u64) -> BigInt {
        self.product(a, b).get(&c).cloned().unwrap_or_default()
    }

    /// Nonzero `(a, b, c, N_ab^c)` in lexicographic order.
    pub fn constants(&self) -> impl Iterator<Item = (u64, u64, u64, &BigInt)> + '_ {
        let len = self.len() as u64;
        (0..len).flat_map(move |a| {
            (0..len).flat_map(move |b| self.product(a, b).iter().map(move |(c, n)| (a, b, *c, n)))
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.products.iter().map(BTreeMap::len).sum()
    }

    /// Product in `K(Ver_{p^n})`.
    pub fn multiply(&self, x: &KClass, y: &KClass) -> KClass {
        assert_eq!(x.level(), self.level, "class from a different level");
        assert_eq!(y.level(), self.level, "class from a different level");
        let mut out = BTreeMap::new();
        for (a, c) in x.mults() {
            for (b, d) in y.mults() {
                let k = c * d;
                for (e, n) in self.product(*a, *b) {
                    add_into(&mut out, *e, &(&k * n));
                }
            }
        }
        KClass::from_raw(self.level, out, x.is_virtual() || y.is_virtual())
    }

    /// Evaluates `sum_j poly[j] [L_base]^j` by Horner's rule.
    ///
    /// `base` is only consulted when `poly` has positive degree.
    pub fn evaluate(&self, poly: &[BigInt], base: u64) -> Result<KClass> {
        let degree = poly.iter().rposition(|c| !c.is_zero());
        let Some(degree) = degree else {
            return Ok(KClass::zero(self.level));
        };
        if degree > 0 {
            self.level.check_label(base)?;
        }
        let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
        for coeff in poly[..=degree].iter().rev() {
            let mut next = BTreeMap::new();
            for (c, m) in &acc {
                for (d, n) in self.product(*c, base) {
                    add_into(&mut next, *d, &(m * n));
                }
            }
            add_into(&mut next, 0, coeff);
            acc = next;
        }
        let is_virtual = poly.iter().any(|c| c.is_negative());
        Ok(KClass::from_raw(self.level, acc, is_virtual))
    }

    /// `sum_e N_ab^e N_ec^d` as a map over `d`: the class of `(L_a L_b) L_c`.
    pub fn triple_left(&self, a: u64, b: u64, c: u64) -> BTreeMap<u64, BigInt> {
        let mut out = BTreeMap::new();
        for (e, n) in self.product(a, b) {
            for (d, m) in self.product(*e, c) {
                add_into(&mut out, *d, &(n * m));
            }
        }
        out
    }

    /// The class of `L_a (L_b L_c)`.
    pub fn triple_right(&self, a: u64, b: u64, c: u64) -> BTreeMap<u64, BigInt> {
        let mut out = BTreeMap::new();
        for (e, n) in self.product(b, c) {
            for (d, m) in self.product(a, *e) {
                add_into(&mut out, *d, &(n * m));
            }
        }
        out
    }

    fn check_nonnegative(&self) -> Result<()> {
        for (a, b, c, n) in self.constants() {
            if n.is_negative() {
                return Err(Error::NegativeMultiplicity {
                    context: format!("N_{{{a},{b}}} in {}", self.level),
                    label: c,
                    value: n.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Structural invariants: unitriangular powers, unit, symmetry, nonnegativity.
    pub fn validate(&self) -> Result<()> {
        let len = self.len();
        let bad = |msg: String| Err(Error::TableFormat(msg));
        if self.power_matrix.len() != len || self.power_matrix.iter().any(|r| r.len() != len) {
            return bad(format!("power matrix must be {len}x{len}"));
        }
        for (j, row) in self.power_matrix.iter().enumerate() {
            if !row[j].is_one() || row[j + 1..].iter().any(|c| !c.is_zero()) {
                return bad(format!("power matrix row {j} is not unitriangular"));
            }
        }
        if self.products.len() != len * len {
            return bad("wrong number of products".into());
        }
        for b in 0..len as u64 {
            if self.product(0, b) != &BTreeMap::from([(b, BigInt::one())]) {
                return bad(format!("L_0 does not act as the unit on L_{b}"));
            }
        }
        for a in 0..len as u64 {
            for b in a + 1..len as u64 {
                if self.product(a, b) != self.product(b, a) {
                    return bad(format!("N_{{{a},{b}}} != N_{{{b},{a}}}"));
                }
            }
        }
        self.check_nonnegative()
    }
}

type TableMemo = RwLock<HashMap<(u64, u32), Arc<FusionTable>>>;

static TABLES: OnceLock<TableMemo> = OnceLock::new();

/// Process-wide memoized table for `level` under [`DEFAULT_BUDGET`].
pub fn shared_table(level: VerLevel) -> Result<Arc<FusionTable>> {
    let memo = TABLES.get_or_init(Default::default);
    let key = (level.p().get(), level.n());
    if let Some(t) = memo.read().expect("table memo poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(structure_constants(level, DEFAULT_BUDGET)?);
    let mut guard = memo.write().expect("table memo poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(table)))
}
