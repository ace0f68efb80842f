//! Frobenius-Perron dimensions by power iteration (floating point, test oracle only).

use num_traits::ToPrimitive;

use super::table::FusionTable;
use crate::error::{Error, Result};

/// Stop once successive estimates differ by less than this.
pub const FPDIM_STOP: f64 = 1e-9;
pub const FPDIM_MAX_ITERATIONS: u32 = 10_000;

type Matrix = Vec<Vec<f64>>;

/// Dominant eigenvalue of the fusion matrix `(N_a)_{bc} = N_ab^c`.
///
/// Iterates on `B = N_a + I`, whose only eigenvalue of maximal modulus is
/// `FPdim(a) + 1` even when `N_a` has `-FPdim(a)` in its spectrum. Each
/// iteration squares the normalized iterate, so step `k` sees `B^(2^k)`.
pub fn fpdim_estimate(table: &FusionTable, a: u64) -> Result<f64> {
    table.level().check_label(a)?;
    let len = table.len();
    let mut shifted = vec![vec![0.0; len]; len];
    for (b, row) in shifted.iter_mut().enumerate() {
        for (c, n) in table.product(a, b as u64) {
            row[*c as usize] = n.to_f64().unwrap_or(f64::INFINITY);
        }
        row[b] += 1.0;
    }

    let mut iterate = shifted.clone();
    normalize(&mut iterate);
    let mut previous = rayleigh_estimate(&shifted, &iterate);
    for _ in 0..FPDIM_MAX_ITERATIONS {
        iterate = square(&iterate);
        normalize(&mut iterate);
        let estimate = rayleigh_estimate(&shifted, &iterate);
        if (estimate - previous).abs() < FPDIM_STOP {
            return Ok(estimate - 1.0);
        }
        previous = estimate;
    }
    Err(Error::NoConvergence {
        iterations: FPDIM_MAX_ITERATIONS,
    })
}

fn square(m: &Matrix) -> Matrix {
    let len = m.len();
    let mut out = vec![vec![0.0; len]; len];
    for (i, row) in m.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if *x == 0.0 {
                continue;
            }
            for (j, y) in m[k].iter().enumerate() {
                out[i][j] += x * y;
            }
        }
    }
    out
}

fn normalize(m: &mut Matrix) {
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale > 0.0 {
        m.iter_mut()
            .flat_map(|r| r.iter_mut())
            .for_each(|x| *x /= scale);
    }
}

// v = iterate * 1 approximates the Perron vector; return |B v|_inf / |v|_inf.
fn rayleigh_estimate(shifted: &Matrix, iterate: &Matrix) -> f64 {
    let v: Vec<f64> = iterate.iter().map(|row| row.iter().sum()).collect();
    let bv: Vec<f64> = shifted
        .iter()
        .map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum())
        .collect();
    let norm = |x: &[f64]| x.iter().fold(0.0f64, |acc, y| acc.max(y.abs()));
    norm(&bv) / norm(&v)
}
