//! Toeplitz operators on degree-k holomorphic sections over the sphere.
//!
//! Sections are polynomials of degree at most `k` in the affine coordinate
//! `z`, with pointwise norm `|s|^2 / (1 + |z|^2)^k` and the Fubini-Study area
//! form normalized to total mass 1. The monomials `z^j` are orthogonal with
//! squared norms `j! (k - j)! / (k + 1)!`. Through stereographic projection
//!
//! ```text
//! x1 + i x2 = 2 z / (1 + |z|^2),   x3 = (1 - |z|^2) / (1 + |z|^2)
//! ```
//!
//! every matrix element of a polynomial observable reduces to a finite sum
//! of Beta integrals, evaluated here in exact rational arithmetic.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::observable::Observable;
use crate::error::{Error, Result};

/// Squared norms of the monomial sections at degree `k`.
#[derive(Clone, Debug)]
pub struct BergmanBasis {
    pub k: u32,
    pub norms: Vec<BigRational>,
}

impl BergmanBasis {
    pub fn new(k: u32) -> Self {
        let norms = (0..=k).map(|j| monomial_norm(k, j)).collect();
        Self { k, norms }
    }

    pub fn dim(&self) -> usize {
        self.norms.len()
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `j! (k - j)! / (k + 1)!`.
pub fn monomial_norm(k: u32, j: u32) -> BigRational {
    BigRational::new(factorial(j) * factorial(k - j), factorial(k + 1))
}

/// `x! / y!` as a rational.
fn factorial_ratio(x: u32, y: u32) -> BigRational {
    if x >= y {
        BigRational::from_integer((y + 1..=x).fold(BigInt::one(), |acc, i| acc * i))
    } else {
        BigRational::new(BigInt::one(), (x + 1..=y).fold(BigInt::one(), |acc, i| acc * i))
    }
}

fn binomial(n: u32, r: u32) -> BigInt {
    (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Complex rational `re + i im`.
#[derive(Clone, Debug, Default)]
struct GaussRational {
    re: BigRational,
    im: BigRational,
}

impl GaussRational {
    fn add_scaled(&mut self, other: &GaussRational, s: &BigRational) {
        self.re += &other.re * s;
        self.im += &other.im * s;
    }
}

/// Rewrites `f` in the variables `w = x1 + i x2`, `wbar` and `x3`:
/// keys `(p, q, c)` for `w^p wbar^q x3^c`.
fn to_holomorphic_form(f: &Observable) -> BTreeMap<(u32, u32, u32), GaussRational> {
    let mut out: BTreeMap<(u32, u32, u32), GaussRational> = BTreeMap::new();
    for (&(a, b, c), coef) in f.terms() {
        // x1^a = 2^-a sum_s C(a,s) w^s wbar^(a-s)
        // x2^b = (2i)^-b sum_t C(b,t) (-1)^(b-t) w^t wbar^(b-t)
        let denom = BigRational::from_integer(BigInt::one() << (a + b));
        // i^-b
        let (ire, iim): (i64, i64) = match b % 4 {
            0 => (1, 0),
            1 => (0, -1),
            2 => (-1, 0),
            _ => (0, 1),
        };
        for s in 0..=a {
            for t in 0..=b {
                let sign = if (b - t) % 2 == 0 { 1 } else { -1 };
                let base = coef * BigRational::from_integer(binomial(a, s) * binomial(b, t) * sign) / &denom;
                let term = GaussRational {
                    re: &base * BigRational::from_integer(ire.into()),
                    im: &base * BigRational::from_integer(iim.into()),
                };
                let e = out.entry((s + t, a - s + b - t, c)).or_default();
                e.add_scaled(&term, &BigRational::one());
            }
        }
    }
    out
}

/// `<z^i, w^p wbar^q x3^c z^j> / ||z^i||^2` at degree `k`, exact. Requires
/// `j + p = i + q`.
fn normalized_element(k: u32, i: u32, j: u32, p: u32, q: u32, c: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for r in 0..=c {
        // B(a, b) with a - 1 = j + p + r and b - 1 = k + q + c - j - r, divided
        // by B(i + 1, k + 1 - i)
        let ratio = factorial_ratio(j + p + r, i) * factorial_ratio(k + q + c - j - r, k - i)
            / factorial_ratio(k + 1 + p + q + c, k + 1);
        let term = ratio * BigRational::from_integer(binomial(c, r));
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc * BigRational::from_integer(BigInt::one() << (p + q))
}

/// Matrix of `T_f` at degree `k` in the orthonormalized monomial basis.
#[derive(Clone, Debug)]
pub struct ToeplitzMatrix {
    pub k: u32,
    pub entries: DMatrix<Complex64>,
}

/// Builds `T_f^(k)`. Row `i` and column `j` refer to `z^i / ||z^i||`.
pub fn toeplitz_matrix(f: &Observable, k: u32) -> Result<ToeplitzMatrix> {
    if k < 1 {
        return Err(Error::InvalidInput("Toeplitz operators need degree k >= 1".into()));
    }
    let form = to_holomorphic_form(f);
    let dim = k as usize + 1;
    let rows: Vec<Vec<(usize, Complex64)>> = (0..=k)
        .into_par_iter()
        .map(|i| {
            let mut row = BTreeMap::<u32, GaussRational>::new();
            for (&(p, q, c), coef) in &form {
                // j = i + q - p
                let j = i as i64 + q as i64 - p as i64;
                if j < 0 || j > k as i64 {
                    continue;
                }
                let j = j as u32;
                let v = normalized_element(k, i, j, p, q, c);
                row.entry(j).or_default().add_scaled(coef, &v);
            }
            row.into_iter()
                .map(|(j, z)| {
                    // ||z^i|| / ||z^j|| = sqrt(i! (k-i)! / (j! (k-j)!))
                    let norm_ratio = (factorial_ratio(i, j) * factorial_ratio(k - i, k - j))
                        .to_f64()
                        .expect("finite ratio")
                        .sqrt();
                    let re = z.re.to_f64().expect("finite") * norm_ratio;
                    let im = z.im.to_f64().expect("finite") * norm_ratio;
                    (j as usize, Complex64::new(re, im))
                })
                .collect()
        })
        .collect();
    let mut entries = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, z) in row {
            entries[(i, j)] = z;
        }
    }
    Ok(ToeplitzMatrix { k, entries })
}

/// Settings for the largest singular value of a non-Hermitian matrix.
const POWER_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

impl ToeplitzMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            k: self.k,
            entries: self.entries.adjoint(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            k: self.k,
            entries: &self.entries * &other.entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            k: self.k,
            entries: &self.entries - &other.entries,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `Tr(A B^*)`.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn hermitian_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() < HERMITIAN_TOL
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Operator norm: symmetric eigensolver for Hermitian matrices, otherwise
    /// power iteration on `A^* A`.
    pub fn operator_norm(&self) -> f64 {
        if self.is_hermitian() {
            return self.hermitian_eigenvalues().iter().map(|x| x.abs()).fold(0.0, f64::max);
        }
        let gram = self.entries.adjoint() * &self.entries;
        let n = self.dim();
        let mut v = nalgebra::DVector::from_fn(n, |i, _| {
            // fixed, non-symmetric start so no singular vector is missed by parity
            Complex64::new(1.0 + ((i * 7919) % 104_729) as f64 / 104_729.0, 0.0)
        });
        v /= Complex64::new(v.norm(), 0.0);
        let mut estimate = 0.0;
        for _ in 0..10 * n {
            let next = &gram * &v;
            let norm = next.norm();
            if norm == 0.0 {
                return 0.0;
            }
            let converged = (norm - estimate).abs() <= POWER_TOL * norm;
            estimate = norm;
            v = next / Complex64::new(norm, 0.0);
            if converged {
                return estimate.sqrt();
            }
        }
        // slow separation of the top singular values: solve exactly
        gram.symmetric_eigenvalues()
            .iter()
            .fold(0.0f64, |m, x| m.max(*x))
            .max(0.0)
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(s: &str) -> Observable {
        s.parse().unwrap()
    }

    fn beta(a: u32, b: u32) -> BigRational {
        BigRational::new(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))
    }

    #[test]
    fn norms_match_beta_integrals() {
        for k in [1u32, 5, 12] {
            let basis = BergmanBasis::new(k);
            assert_eq!(basis.dim(), k as usize + 1);
            for j in 0..=k {
                assert_eq!(basis.norms[j as usize], beta(j + 1, k + 1 - j));
            }
        }
    }

    #[test]
    fn identity_for_constant_one() {
        let t = toeplitz_matrix(&obs("1"), 9).unwrap();
        let id = DMatrix::<Complex64>::identity(10, 10);
        assert!((&t.entries - id).iter().all(|z| z.norm() < 1e-12));
        let t = toeplitz_matrix(&obs("x1^2 + x2^2 + x3^2"), 9).unwrap();
        let id = DMatrix::<Complex64>::identity(10, 10);
        assert!((&t.entries - id).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn x3_is_diagonal_with_closed_form() {
        for k in [1u32, 4, 17] {
            let t = toeplitz_matrix(&obs("x3"), k).unwrap();
            for i in 0..=k as usize {
                for j in 0..=k as usize {
                    let expect = if i == j {
                        (k as f64 - 2.0 * i as f64) / (k as f64 + 2.0)
                    } else {
                        0.0
                    };
                    assert!((t.entries[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn x1_is_real_symmetric_tridiagonal() {
        let k = 8;
        let t = toeplitz_matrix(&obs("x1"), k).unwrap();
        for i in 0..=k as usize {
            for j in 0..=k as usize {
                let z = t.entries[(i, j)];
                assert!(z.im.abs() < 1e-15);
                assert!((z - t.entries[(j, i)]).norm() < 1e-14);
                if i.abs_diff(j) != 1 {
                    assert_eq!(z.norm(), 0.0);
                } else {
                    assert!(z.re.abs() > 1e-3);
                }
            }
        }
    }

    #[test]
    fn x1_elements_match_direct_beta_oracle() {
        // <z^i, x1 z^(i+1)> = ∫ u^(i+1) (1+u)^(-k-3) du = B(i+2, k+1-i)
        let k = 10u32;
        let t = toeplitz_matrix(&obs("x1"), k).unwrap();
        for i in 0..k {
            let raw = beta(i + 2, k + 1 - i);
            let denom = (monomial_norm(k, i) * monomial_norm(k, i + 1)).to_f64().unwrap().sqrt();
            let expect = raw.to_f64().unwrap() / denom;
            assert!((t.entries[(i as usize, i as usize + 1)].re - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn hermitian_for_real_observables() {
        for f in ["x2", "x1*x2 + x3^3", "x1^2*x2 - 1/3*x2^3 + x3", "(x1 + x2)^4"] {
            let t = toeplitz_matrix(&obs(f), 12).unwrap();
            assert!(t.hermitian_defect() < 1e-12, "{f}");
        }
    }

    #[test]
    fn power_iteration_agrees_with_svd() {
        let a = toeplitz_matrix(&obs("x1"), 10).unwrap();
        let b = toeplitz_matrix(&obs("x2"), 10).unwrap();
        let ab = a.mul(&b);
        assert!(!ab.is_hermitian());
        let svd = ab.entries.clone().singular_values().max();
        assert!((ab.operator_norm() - svd).abs() < 1e-8);
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(toeplitz_matrix(&obs("x3"), 0).is_err());
    }
}
