//! The level-k modular S-matrix of SU(n) and the Kac ratio
//! `S_{lambda,mu} / S_{0,mu} = chi_lambda(t_mu)`.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_data::{
    alternant, character_with_group, dual, enumerate_labels, label_count, level, weyl_group, DominantWeight,
    TorusElement,
};
use crate::numeric::ComplexNeumaier;

/// Resource caps for S-matrix construction.
#[derive(Clone, Copy, Debug)]
pub struct SLimits {
    /// Upper bound on `|Lambda_k|^2 * n!`, the number of phase evaluations.
    pub max_cost: u128,
    pub max_labels: u128,
}

impl Default for SLimits {
    fn default() -> Self {
        Self {
            max_cost: 2_000_000_000,
            max_labels: 50_000,
        }
    }
}

/// The point `exp(-2 pi i (mu + rho) / (k + n))` of the maximal torus, with
/// `mu + rho` identified with its coweight by the invariant form.
///
/// Phases are kept as exact rationals `2 pi * num_j / (n (k + n))` where
/// `num_j = -(n p_j - sum p)` and `p` are the partition coordinates of
/// `mu + rho`.
pub fn torus_element(mu: &DominantWeight, n: usize, k: u32) -> Result<TorusElement> {
    if mu.n() != n {
        return Err(Error::InvalidInput(format!("{mu} is not a weight of SU({n})")));
    }
    if level(mu) > k as u64 {
        return Err(Error::InvalidLabel(format!("{mu} has level {} > k = {k}", level(mu))));
    }
    let p = mu.shifted_partition();
    let total: i64 = p.iter().sum();
    let n_i = n as i64;
    let num = p.iter().map(|&pj| -(n_i * pj - total)).collect();
    TorusElement::rational(num, n_i * (k as i64 + n_i))
}

/// Value of the Kac ratio together with whether `lambda` itself lies in the
/// level-k label set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KacRatio {
    pub value: Complex64,
    pub lambda_in_label_set: bool,
}

/// `S_{lambda,mu} / S_{0,mu}`, evaluated as the character of `lambda` at
/// [`torus_element`]`(mu)`. Any dominant `lambda` is accepted.
pub fn s_ratio(lambda: &DominantWeight, mu: &DominantWeight, k: u32) -> Result<KacRatio> {
    let n = mu.n();
    if lambda.n() != n {
        return Err(Error::InvalidInput(format!("rank mismatch between {lambda} and {mu}")));
    }
    let t = torus_element(mu, n, k)?;
    Ok(KacRatio {
        value: character_with_group(lambda, &t, &weyl_group(n))?,
        lambda_in_label_set: level(lambda) <= k as u64,
    })
}

/// Table of `s_ratio(lambda, mu)` for a fixed `lambda` and every `mu` in
/// `labels`, reusing the Weyl group between evaluations.
pub fn s_ratio_row(lambda: &DominantWeight, labels: &[DominantWeight], k: u32) -> Result<Vec<Complex64>> {
    let n = lambda.n();
    let group = weyl_group(n);
    labels
        .par_iter()
        .map(|mu| {
            let t = torus_element(mu, n, k)?;
            character_with_group(lambda, &t, &group)
        })
        .collect()
}

/// The unitary, symmetric S-matrix with `S_{00} > 0`.
#[derive(Clone, Debug)]
pub struct SMatrix {
    n: usize,
    k: u32,
    labels: Vec<DominantWeight>,
    index: HashMap<DominantWeight, usize>,
    entries: Vec<Complex64>,
}

impl SMatrix {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        Self::with_limits(n, k, &SLimits::default())
    }

    /// Kac-Peterson alternating sum over the Weyl group, normalized by the
    /// norm of the vacuum row and the phase of `S_{00}`.
    pub fn with_limits(n: usize, k: u32, limits: &SLimits) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("SU(n) requires n >= 2, got {n}")));
        }
        let size = label_count(n, k);
        let order: u128 = (1..=n as u128).product();
        if size > limits.max_labels || size * size * order > limits.max_cost {
            return Err(Error::ResourceLimit(format!(
                "S-matrix for SU({n}) at level {k}: {size} labels, {} phase evaluations",
                size * size * order
            )));
        }
        let labels = enumerate_labels(n, k);
        let tori = labels
            .iter()
            .map(|mu| torus_element(mu, n, k))
            .collect::<Result<Vec<_>>>()?;
        let group = weyl_group(n);
        let shifted: Vec<Vec<i64>> = labels.iter().map(DominantWeight::shifted_partition).collect();
        let m = labels.len();

        let mut entries: Vec<Complex64> = (0..m * m)
            .into_par_iter()
            .map(|idx| alternant(&shifted[idx / m], &tori[idx % m], &group))
            .collect();

        let mut norm = ComplexNeumaier::new();
        entries[..m]
            .iter()
            .for_each(|z| norm.add(Complex64::new(z.norm_sqr(), 0.0)));
        let scale = entries[0].conj() / entries[0].norm() / norm.value().re.sqrt();
        entries.par_iter_mut().for_each(|z| *z *= scale);

        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(Self {
            n,
            k,
            labels,
            index,
            entries,
        })
    }

    /// Reassembles a matrix from stored entries (used by the on-disk cache).
    pub fn from_entries(n: usize, k: u32, entries: Vec<Complex64>) -> Result<Self> {
        let labels = enumerate_labels(n, k);
        if entries.len() != labels.len() * labels.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} S-matrix entries, got {}",
                labels.len() * labels.len(),
                entries.len()
            )));
        }
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(Self {
            n,
            k,
            labels,
            index,
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn labels(&self) -> &[DominantWeight] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn index_of(&self, label: &DominantWeight) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| {
            Error::InvalidLabel(format!(
                "{label} is not in the level-{} label set of SU({})",
                self.k, self.n
            ))
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let m = self.len();
        &self.entries[i * m..(i + 1) * m]
    }

    pub fn entry(&self, lambda: &DominantWeight, mu: &DominantWeight) -> Result<Complex64> {
        Ok(self.get(self.index_of(lambda)?, self.index_of(mu)?))
    }

    /// Index of the dual label for every row.
    pub fn dual_indices(&self) -> Vec<usize> {
        self.labels.iter().map(|l| self.index[&dual(l)]).collect()
    }

    /// Measures every structural invariant of the matrix. `O(|Lambda_k|^3)`.
    pub fn invariant_report(&self) -> SMatrixReport {
        let m = self.len();
        let duals = self.dual_indices();
        let (unitarity, charge) = (0..m)
            .into_par_iter()
            .map(|i| {
                let mut u: f64 = 0.0;
                let mut c: f64 = 0.0;
                for j in 0..m {
                    let mut ssd = ComplexNeumaier::new();
                    let mut ss = ComplexNeumaier::new();
                    for l in 0..m {
                        ssd.add(self.get(i, l) * self.get(j, l).conj());
                        ss.add(self.get(i, l) * self.get(l, j));
                    }
                    let id = if i == j { 1.0 } else { 0.0 };
                    let cc = if duals[i] == j { 1.0 } else { 0.0 };
                    u = u.max((ssd.value() - id).norm());
                    c = c.max((ss.value() - cc).norm());
                }
                (u, c)
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
        let mut symmetry: f64 = 0.0;
        for i in 0..m {
            for j in i + 1..m {
                symmetry = symmetry.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        let s00 = self.get(0, 0);
        let vacuum_min = (0..m).map(|j| self.get(0, j).re).fold(f64::INFINITY, f64::min);
        let vacuum_imag = (0..m).map(|j| self.get(0, j).im.abs()).fold(0.0, f64::max);
        SMatrixReport {
            n: self.n,
            k: self.k,
            size: m,
            unitarity_error: unitarity,
            symmetry_error: symmetry,
            charge_conjugation_error: charge,
            s00_re: s00.re,
            s00_im: s00.im,
            vacuum_min_re: vacuum_min,
            vacuum_max_abs_im: vacuum_imag,
            ratio_consistency_error: None,
        }
    }
}

/// Measured deviations from the S-matrix invariants.
#[derive(Clone, Debug, Serialize)]
pub struct SMatrixReport {
    pub n: usize,
    pub k: u32,
    pub size: usize,
    pub unitarity_error: f64,
    pub symmetry_error: f64,
    pub charge_conjugation_error: f64,
    pub s00_re: f64,
    pub s00_im: f64,
    pub vacuum_min_re: f64,
    pub vacuum_max_abs_im: f64,
    pub ratio_consistency_error: Option<f64>,
}

impl SMatrixReport {
    pub const UNITARITY_TOL: f64 = 1e-10;
    pub const SYMMETRY_TOL: f64 = 1e-10;
    pub const CHARGE_TOL: f64 = 1e-9;
    pub const RATIO_TOL: f64 = 1e-9;

    pub fn passes(&self) -> bool {
        self.unitarity_error < Self::UNITARITY_TOL
            && self.symmetry_error < Self::SYMMETRY_TOL
            && self.charge_conjugation_error < Self::CHARGE_TOL
            && self.s00_re > 0.0
            && self.s00_im.abs() < Self::SYMMETRY_TOL
            && self.vacuum_min_re > 0.0
            && self.ratio_consistency_error.is_none_or(|e| e < Self::RATIO_TOL)
    }
}

/// `max |S_{lambda,mu} / S_{0,mu} - chi_lambda(t_mu)|` over the label set.
pub fn ratio_consistency_check(n: usize, k: u32) -> Result<f64> {
    let s = SMatrix::new(n, k)?;
    ratio_consistency_error(&s)
}

pub fn ratio_consistency_error(s: &SMatrix) -> Result<f64> {
    let group = weyl_group(s.n());
    let tori = s
        .labels()
        .iter()
        .map(|mu| torus_element(mu, s.n(), s.k()))
        .collect::<Result<Vec<_>>>()?;
    let m = s.len();
    (0..m)
        .into_par_iter()
        .map(|i| {
            let lambda = &s.labels()[i];
            let mut worst: f64 = 0.0;
            for (j, t) in tori.iter().enumerate() {
                let chi = character_with_group(lambda, t, &group)?;
                let ratio = s.get(i, j) / s.get(0, j);
                worst = worst.max((ratio - chi).norm());
            }
            Ok(worst)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}
