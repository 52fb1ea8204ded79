//! Weights, the normalized invariant form, Weyl dimensions and characters for
//! the Lie algebra of SU(n).
//!
//! Weights are stored in the fundamental-weight (Dynkin label) basis. The
//! invariant form is the inverse Cartan matrix of `A_{n-1}`, which for this
//! simply-laced type already gives the highest root squared length 2.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{root_of_unity, sin_pi_rational, ComplexNeumaier};

/// A dominant weight of SU(n) in Dynkin-label coordinates.
///
/// The rank is implied by the length: `n - 1` coordinates for SU(n).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DominantWeight(Vec<u32>);

impl DominantWeight {
    pub fn new(coords: Vec<u32>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput(
                "a weight of SU(n) needs n - 1 >= 1 coordinates".into(),
            ));
        }
        Ok(Self(coords))
    }

    /// The zero weight (trivial representation) of SU(n).
    pub fn zero(n: usize) -> Self {
        assert!(n >= 2, "SU(n) requires n >= 2");
        Self(vec![0; n - 1])
    }

    /// `d` times the first fundamental weight.
    pub fn first_fundamental_multiple(n: usize, d: u32) -> Self {
        let mut w = Self::zero(n);
        w.0[0] = d;
        w
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// `n` for the SU(n) this weight belongs to.
    pub fn n(&self) -> usize {
        self.0.len() + 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Partition (epsilon) coordinates: row lengths of the Young diagram,
    /// `n` entries with the last one 0.
    pub fn partition(&self) -> Vec<i64> {
        let n = self.n();
        let mut parts = vec![0i64; n];
        for j in (0..n - 1).rev() {
            parts[j] = parts[j + 1] + self.0[j] as i64;
        }
        parts
    }

    /// Partition coordinates of `self + rho`: strictly decreasing.
    pub fn shifted_partition(&self) -> Vec<i64> {
        let n = self.n() as i64;
        self.partition()
            .into_iter()
            .enumerate()
            .map(|(j, l)| l + n - 1 - j as i64)
            .collect()
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

impl std::str::FromStr for DominantWeight {
    type Err = Error;

    /// Parses comma-separated Dynkin labels, e.g. `1,0`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidInput(format!("bad weight coordinate '{c}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }
}

/// Static data of SU(n): the invariant form, rho and the highest root.
#[derive(Clone, Debug)]
pub struct RankData {
    pub n: usize,
    /// `(omega_i, omega_j)` for the fundamental weights.
    pub quadratic_form: Vec<Vec<Ratio<i64>>>,
    pub rho: DominantWeight,
    pub theta: DominantWeight,
}

impl RankData {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("SU(n) requires n >= 2, got {n}")));
        }
        let r = n - 1;
        let quadratic_form = (0..r)
            .map(|i| (0..r).map(|j| inverse_cartan_entry(n, i, j)).collect())
            .collect();
        let theta = if n == 2 {
            DominantWeight(vec![2])
        } else {
            let mut t = vec![0; r];
            t[0] = 1;
            t[r - 1] = 1;
            DominantWeight(t)
        };
        Ok(Self {
            n,
            quadratic_form,
            rho: DominantWeight(vec![1; r]),
            theta,
        })
    }

    /// Simple root `alpha_i` in weight coordinates (row `i` of the Cartan
    /// matrix). Entries may be negative, so they are returned as plain
    /// integers.
    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let r = self.n - 1;
        (0..r)
            .map(|j| match (i as i64 - j as i64).abs() {
                0 => 2,
                1 => -1,
                _ => 0,
            })
            .collect()
    }

    pub fn pairing(&self, a: &[i64], b: &[i64]) -> Ratio<i64> {
        let mut acc = Ratio::zero();
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                acc += self.quadratic_form[i][j] * (ai * bj);
            }
        }
        acc
    }
}

// (A^{-1})_{ij} = min(i,j) (n - max(i,j)) / n with 1-based indices.
fn inverse_cartan_entry(n: usize, i: usize, j: usize) -> Ratio<i64> {
    let (i, j) = (i as i64 + 1, j as i64 + 1);
    Ratio::new(i.min(j) * (n as i64 - i.max(j)), n as i64)
}

fn check_same_rank(a: &DominantWeight, b: &DominantWeight) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::InvalidInput(format!(
            "rank mismatch: {a} belongs to SU({}), {b} to SU({})",
            a.n(),
            b.n()
        )));
    }
    Ok(())
}

/// The invariant form normalized so that `(theta, theta) = 2`, exact.
pub fn killing_form(lambda: &DominantWeight, mu: &DominantWeight) -> Result<Ratio<i64>> {
    check_same_rank(lambda, mu)?;
    let n = lambda.n();
    let mut acc = Ratio::zero();
    for (i, &a) in lambda.coords().iter().enumerate() {
        for (j, &b) in mu.coords().iter().enumerate() {
            acc += inverse_cartan_entry(n, i, j) * (a as i64 * b as i64);
        }
    }
    Ok(acc)
}

/// `(lambda, theta)`; all comarks of SU(n) are 1.
pub fn level(lambda: &DominantWeight) -> u64 {
    lambda.coords().iter().map(|&a| a as u64).sum()
}

/// All dominant weights of SU(n) with level at most `k`, lexicographic.
pub fn enumerate_labels(n: usize, k: u32) -> Vec<DominantWeight> {
    assert!(n >= 2, "SU(n) requires n >= 2");
    let mut out = Vec::new();
    let mut cur = vec![0u32; n - 1];
    fill_labels(&mut cur, 0, k, &mut out);
    out
}

fn fill_labels(cur: &mut Vec<u32>, pos: usize, budget: u32, out: &mut Vec<DominantWeight>) {
    if pos == cur.len() {
        out.push(DominantWeight(cur.clone()));
        return;
    }
    for a in 0..=budget {
        cur[pos] = a;
        fill_labels(cur, pos + 1, budget - a, out);
    }
    cur[pos] = 0;
}

/// Number of labels of SU(n) at level k: `C(k + n - 1, n - 1)`.
pub fn label_count(n: usize, k: u32) -> u128 {
    let r = (n - 1) as u128;
    let mut c: u128 = 1;
    for i in 1..=r {
        c = c * (k as u128 + i) / i;
    }
    c
}

/// Weyl dimension formula, exact. Saturates at `u128::MAX`.
pub fn weyl_dim(lambda: &DominantWeight) -> u128 {
    let nu = lambda.shifted_partition();
    let n = nu.len();
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..n {
        for j in i + 1..n {
            num *= BigUint::from((nu[i] - nu[j]) as u64);
            den *= BigUint::from((j - i) as u64);
        }
    }
    (num / den).to_u128().unwrap_or(u128::MAX)
}

/// Highest weight of the dual representation: Dynkin labels reversed.
pub fn dual(lambda: &DominantWeight) -> DominantWeight {
    DominantWeight(lambda.coords().iter().rev().copied().collect())
}

/// The label whose coweight exponentiates to a generator of the center.
///
/// Convention: the first fundamental weight. Its dual `omega_{n-1}` would do
/// equally well.
pub fn center_label(n: usize) -> DominantWeight {
    DominantWeight::first_fundamental_multiple(n, 1)
}

/// Phases exactly representable as `2 pi * num_i / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPhases {
    pub num: Vec<i64>,
    pub den: i64,
}

/// A diagonal element of SU(n), given by the arguments of its eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusElement {
    phases: Vec<f64>,
    exact: Option<RationalPhases>,
}

const PHASE_SUM_TOL: f64 = 1e-12;
const REGULARITY_TOL: f64 = 1e-14;

impl TorusElement {
    /// Builds an element from real angles; their sum must vanish mod 2 pi.
    pub fn from_phases(phases: Vec<f64>) -> Result<Self> {
        if phases.len() < 2 {
            return Err(Error::InvalidInput(
                "a torus element of SU(n) needs n >= 2 phases".into(),
            ));
        }
        let tau = 2.0 * std::f64::consts::PI;
        let s: f64 = phases.iter().sum();
        let off = (s / tau - (s / tau).round()).abs() * tau;
        if off > PHASE_SUM_TOL {
            return Err(Error::InvalidInput(format!(
                "phases must sum to 0 mod 2pi (off by {off:e})"
            )));
        }
        Ok(Self { phases, exact: None })
    }

    /// Builds the element with phases `2 pi * num_i / den`; the numerators
    /// must sum to a multiple of `den`.
    pub fn rational(num: Vec<i64>, den: i64) -> Result<Self> {
        if num.len() < 2 || den <= 0 {
            return Err(Error::InvalidInput(
                "rational torus element needs n >= 2 and den > 0".into(),
            ));
        }
        if num.iter().sum::<i64>().rem_euclid(den) != 0 {
            return Err(Error::InvalidInput("rational phases must sum to 0 mod 2pi".into()));
        }
        let tau = 2.0 * std::f64::consts::PI;
        let phases = num.iter().map(|&p| tau * p as f64 / den as f64).collect();
        Ok(Self {
            phases,
            exact: Some(RationalPhases { num, den }),
        })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn exact(&self) -> Option<&RationalPhases> {
        self.exact.as_ref()
    }

    pub fn n(&self) -> usize {
        self.phases.len()
    }

    /// Eigenvalues `exp(i phase_j)`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect()
    }

    /// Vandermonde product `prod_{i<j} (x_i - x_j)` of the eigenvalues.
    pub fn vandermonde(&self) -> Complex64 {
        let n = self.n();
        let mut prod = Complex64::new(1.0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                prod *= self.eigen_difference(i, j);
            }
        }
        prod
    }

    pub fn is_regular(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| self.half_angle_sine(i, j).abs() > REGULARITY_TOL))
    }

    // sin((phi_i - phi_j) / 2)
    fn half_angle_sine(&self, i: usize, j: usize) -> f64 {
        match &self.exact {
            Some(ex) => sin_pi_rational((ex.num[i] - ex.num[j]) as i128, ex.den as i128),
            None => ((self.phases[i] - self.phases[j]) / 2.0).sin(),
        }
    }

    // x_i - x_j = 2i sin((phi_i - phi_j)/2) exp(i (phi_i + phi_j)/2)
    fn eigen_difference(&self, i: usize, j: usize) -> Complex64 {
        let mid = match &self.exact {
            Some(ex) => root_of_unity((ex.num[i] + ex.num[j]) as i128, 2 * ex.den as i128),
            None => Complex64::from_polar(1.0, (self.phases[i] + self.phases[j]) / 2.0),
        };
        Complex64::new(0.0, 2.0 * self.half_angle_sine(i, j)) * mid
    }
}

/// Permutations of `0..n` in lexicographic order with their signs. These are
/// the Weyl group of SU(n) acting on epsilon coordinates.
pub fn weyl_group(n: usize) -> Vec<(Vec<usize>, i8)> {
    (0..n)
        .permutations(n)
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            (p, sign)
        })
        .collect()
}

/// Alternant `a_nu(t) = sum_w sign(w) prod_i x_i^{nu_{w(i)}}` with compensated
/// summation over the Weyl group.
pub(crate) fn alternant(nu: &[i64], t: &TorusElement, group: &[(Vec<usize>, i8)]) -> Complex64 {
    let mut acc = ComplexNeumaier::new();
    match t.exact() {
        Some(ex) => {
            for (w, sign) in group {
                let e: i128 = w
                    .iter()
                    .enumerate()
                    .map(|(i, &wi)| ex.num[i] as i128 * nu[wi] as i128)
                    .sum();
                acc.add(root_of_unity(e, ex.den as i128) * f64::from(*sign));
            }
        }
        None => {
            for (w, sign) in group {
                let angle: f64 = w.iter().enumerate().map(|(i, &wi)| t.phases[i] * nu[wi] as f64).sum();
                acc.add(Complex64::from_polar(f64::from(*sign), angle));
            }
        }
    }
    acc.value()
}

/// Character of the irreducible representation `lambda` at a regular torus
/// element, as the ratio of alternants `a_{lambda+rho} / a_rho`.
pub fn character(lambda: &DominantWeight, t: &TorusElement) -> Result<Complex64> {
    character_with_group(lambda, t, &weyl_group(lambda.n()))
}

pub(crate) fn character_with_group(
    lambda: &DominantWeight,
    t: &TorusElement,
    group: &[(Vec<usize>, i8)],
) -> Result<Complex64> {
    if t.n() != lambda.n() {
        return Err(Error::InvalidInput(format!(
            "torus element has {} phases but {lambda} is a weight of SU({})",
            t.n(),
            lambda.n()
        )));
    }
    if lambda.is_zero() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if !t.is_regular() {
        return Err(Error::SingularElement(
            "eigenvalues are not pairwise distinct; the Vandermonde denominator vanishes".into(),
        ));
    }
    let numerator = alternant(&lambda.shifted_partition(), t, group);
    Ok(numerator / t.vandermonde())
}
