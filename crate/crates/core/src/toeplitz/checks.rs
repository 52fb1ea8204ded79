//! Convergence checks for the sphere model: norm limit, asymptotic
//! multiplicativity, trace asymptotics and the Hilbert-Smith limit.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::matrix::toeplitz_matrix;
use super::observable::Observable;
use crate::error::{Error, Result};

/// One row of a check table. The meaning of `value`, `reference` and `gap`
/// depends on the suite; see [`CheckTable::columns`].
#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub k: u32,
    pub value: f64,
    pub reference: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckTable {
    pub suite: &'static str,
    pub columns: [&'static str; 4],
    pub rows: Vec<CheckRow>,
    /// Measured constant of the `O(1/k)` rate where the suite has one.
    pub measured_constant: Option<f64>,
    pub violations: Vec<String>,
}

impl CheckTable {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const NORM_TOL: f64 = 1e-9;
const ZERO_GAP: f64 = 1e-12;

fn validate_ks(ks: &[u32]) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::InvalidInput("empty degree list".into()));
    }
    if ks.contains(&0) {
        return Err(Error::InvalidInput("Toeplitz degrees must be >= 1".into()));
    }
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("degree list must be strictly increasing".into()));
    }
    Ok(())
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Boundedness test for a sequence `k * err`: the maximum over the second
/// half of the rows must not exceed twice the median of all rows.
fn bounded_tail(scaled: &[f64]) -> Option<String> {
    if scaled.iter().all(|x| x.abs() <= ZERO_GAP) {
        return None;
    }
    let med = median(scaled);
    let tail = &scaled[scaled.len() / 2..];
    let tail_max = tail.iter().copied().fold(0.0, f64::max);
    (tail_max > 2.0 * med).then(|| format!("tail max {tail_max} exceeds twice the median {med}"))
}

/// `||T_f||` against `sup |f|`.
pub fn bms1_check(f: &Observable, ks: &[u32]) -> Result<CheckTable> {
    validate_ks(ks)?;
    let sup = f.sup_norm();
    let rows: Vec<CheckRow> = ks
        .par_iter()
        .map(|&k| {
            let norm = toeplitz_matrix(f, k)?.operator_norm();
            Ok(CheckRow {
                k,
                value: norm,
                reference: sup,
                gap: sup - norm,
            })
        })
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    for r in &rows {
        if r.gap < -NORM_TOL {
            violations.push(format!("k={}: norm {} exceeds sup {}", r.k, r.value, sup));
        }
    }
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    if last.k >= 8 * first.k && first.gap > ZERO_GAP && last.gap >= first.gap / 4.0 {
        violations.push(format!(
            "gap not shrinking: {} at k={} vs {} at k={}",
            last.gap, last.k, first.gap, first.k
        ));
    }
    Ok(CheckTable {
        suite: "bms1",
        columns: ["k", "norm", "sup", "gap"],
        rows,
        measured_constant: None,
        violations,
    })
}

/// `||T_f T_g - T_{fg}||` scaled by `k`.
pub fn bms2_check(f: &Observable, g: &Observable, ks: &[u32]) -> Result<CheckTable> {
    validate_ks(ks)?;
    let fg = f.mul(g);
    let rows: Vec<CheckRow> = ks
        .par_iter()
        .map(|&k| {
            let tf = toeplitz_matrix(f, k)?;
            let tg = toeplitz_matrix(g, k)?;
            let tfg = toeplitz_matrix(&fg, k)?;
            let defect = tf.mul(&tg).sub(&tfg).operator_norm();
            Ok(CheckRow {
                k,
                value: defect,
                reference: 0.0,
                gap: k as f64 * defect,
            })
        })
        .collect::<Result<_>>()?;
    let scaled: Vec<f64> = rows.iter().map(|r| r.gap).collect();
    let violations = bounded_tail(&scaled).into_iter().collect();
    Ok(CheckTable {
        suite: "bms2",
        columns: ["k", "defect", "reference", "k_defect"],
        measured_constant: Some(scaled.iter().copied().fold(0.0, f64::max)),
        rows,
        violations,
    })
}

/// `k^-1 Tr T_f` against the exact sphere average of `f`.
pub fn bms3_check(f: &Observable, ks: &[u32]) -> Result<CheckTable> {
    validate_ks(ks)?;
    let exact = f.integral().to_f64().unwrap_or(f64::NAN);
    let rows: Vec<CheckRow> = ks
        .par_iter()
        .map(|&k| {
            let tr = toeplitz_matrix(f, k)?.trace().re / k as f64;
            Ok(CheckRow {
                k,
                value: tr,
                reference: exact,
                gap: tr - exact,
            })
        })
        .collect::<Result<_>>()?;
    Ok(rate_table("bms3", ["k", "trace_over_k", "integral", "error"], rows))
}

/// `k^-1 Tr(T_f T_g^*)` against the exact `L^2` pairing of `f` and `g`.
pub fn hs_limit_check(f: &Observable, g: &Observable, ks: &[u32]) -> Result<CheckTable> {
    validate_ks(ks)?;
    let exact = f.mul(g).integral().to_f64().unwrap_or(f64::NAN);
    let rows: Vec<CheckRow> = ks
        .par_iter()
        .map(|&k| {
            let tf = toeplitz_matrix(f, k)?;
            let tg = toeplitz_matrix(g, k)?;
            let v = tf.hs_inner(&tg).re / k as f64;
            Ok(CheckRow {
                k,
                value: v,
                reference: exact,
                gap: v - exact,
            })
        })
        .collect::<Result<_>>()?;
    Ok(rate_table("hs", ["k", "hs_over_k", "pairing", "error"], rows))
}

/// Measures `C = max k |error|` and checks the `C/k` rate is stable.
fn rate_table(suite: &'static str, columns: [&'static str; 4], rows: Vec<CheckRow>) -> CheckTable {
    let scaled: Vec<f64> = rows.iter().map(|r| r.k as f64 * r.gap.abs()).collect();
    let mut violations: Vec<String> = bounded_tail(&scaled).into_iter().collect();
    if let Some(r) = rows.iter().find(|r| !r.value.is_finite()) {
        violations.push(format!("k={}: non-finite value", r.k));
    }
    CheckTable {
        suite,
        columns,
        measured_constant: Some(scaled.iter().copied().fold(0.0, f64::max)),
        rows,
        violations,
    }
}
