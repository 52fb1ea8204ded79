//! Large-level behavior of Hilbert-Smith pairings and operator norms.
//!
//! The pairing `<Z(gamma1, lambda1), Z(gamma2, lambda2)>` grows like `k^m`
//! with `m = (g - 1)(n^2 - 1)`; its rescaling converges to the `L2` pairing
//! of the holonomy functions on the moduli space. That integral is never
//! evaluated directly here: limits are estimated from the sequence by
//! Richardson extrapolation in powers of `1/k`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve_ops::{curve_operator_on, hs_inner, operator_norm, BlockDecomposition, CutSystem, LabeledMulticurve};
use crate::error::{Error, Result};
use crate::lie_data::{center_label, character, enumerate_labels, level, weyl_dim, DominantWeight};
use crate::s_matrix::torus_element;

/// Default tolerance for declaring an extrapolated limit converged.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-4;
/// Highest Richardson order exposed.
pub const MAX_ORDER: usize = 4;

/// `(g - 1)(n^2 - 1)`, the complex dimension of the moduli space.
pub fn scaling_exponent(n: usize, g: u32) -> u32 {
    (g - 1) * (n as u32 * n as u32 - 1)
}

/// How the raw pairing was normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// `k^{-m}`
    Level,
    /// `2^{3g-3} p^{-(3g-3)}` with `p = 2k + 4` (SU(2) skein normalization).
    Skein,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SequencePoint {
    pub k: u32,
    #[serde(with = "crate::numeric::complex_json")]
    pub raw: Complex64,
    #[serde(with = "crate::numeric::complex_json")]
    pub scaled: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaledSequence {
    pub n: usize,
    pub g: u32,
    pub m: u32,
    pub scaling: Scaling,
    pub points: Vec<SequencePoint>,
    pub a: LabeledMulticurve,
    pub b: LabeledMulticurve,
}

impl ScaledSequence {
    pub fn values(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.scaled).collect()
    }
}

/// An extrapolated limit with the difference between the last two windows
/// as its error estimate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LimitEstimate {
    #[serde(with = "crate::numeric::complex_json")]
    pub value: Complex64,
    pub error_bound: f64,
    pub order_used: usize,
    pub converged: bool,
}

fn check_increasing(ks: &[u32]) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::InvalidInput("empty level list".into()));
    }
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("levels must be strictly increasing".into()));
    }
    Ok(())
}

fn raw_pairing(cut: &CutSystem, a: &LabeledMulticurve, b: &LabeledMulticurve, k: u32) -> Result<Complex64> {
    let dec = BlockDecomposition::new(cut, k)?;
    let opa = curve_operator_on(&dec, a)?;
    let opb = curve_operator_on(&dec, b)?;
    hs_inner(&opa, &opb)
}

/// `k^{-m} <Z(a), Z(b)>` for every `k` in `ks`.
pub fn scaled_hs_sequence(
    cut: &CutSystem,
    a: &LabeledMulticurve,
    b: &LabeledMulticurve,
    ks: &[u32],
) -> Result<ScaledSequence> {
    cut.validate()?;
    check_increasing(ks)?;
    if ks[0] == 0 {
        return Err(Error::InvalidInput("k = 0 cannot be rescaled by k^-m".into()));
    }
    let m = scaling_exponent(cut.n, cut.g);
    let points = ks
        .par_iter()
        .map(|&k| {
            let raw = raw_pairing(cut, a, b, k)?;
            Ok(SequencePoint {
                k,
                raw,
                scaled: raw / (k as f64).powi(m as i32),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledSequence {
        n: cut.n,
        g: cut.g,
        m,
        scaling: Scaling::Level,
        points,
        a: a.clone(),
        b: b.clone(),
    })
}

/// SU(2) pairings rescaled by `2^{3g-3} p^{-(3g-3)}` for even `p = 2k + 4`,
/// with all components colored by the defining representation.
pub fn mn_scaled_sequence(
    cut: &CutSystem,
    a: &LabeledMulticurve,
    b: &LabeledMulticurve,
    ps: &[u32],
) -> Result<ScaledSequence> {
    if cut.n != 2 {
        return Err(Error::OutOfScope(format!(
            "the skein normalization is for SU(2), not SU({})",
            cut.n
        )));
    }
    if let Some(p) = ps.iter().find(|&&p| p % 2 != 0 || p < 4) {
        return Err(Error::OutOfScope(format!("p = {p}: p must be even and at least 4")));
    }
    let defining = center_label(2);
    for mc in [a, b] {
        if let Some((c, l)) = mc
            .labels
            .iter()
            .find(|(c, l)| mc.support.contains(c) && **l != defining)
        {
            return Err(Error::OutOfScope(format!(
                "curve '{c}' labeled {l}; the skein comparison covers the defining representation only"
            )));
        }
    }
    let ks: Vec<u32> = ps.iter().map(|p| (p - 4) / 2).collect();
    let mut seq = scaled_hs_sequence(cut, a, b, &ks)?;
    let e = 3 * cut.g as i32 - 3;
    for (pt, &p) in seq.points.iter_mut().zip(ps) {
        pt.scaled = pt.raw * 2f64.powi(e) / (p as f64).powi(e);
    }
    seq.scaling = Scaling::Skein;
    Ok(seq)
}

/// Polynomial interpolation through `(h_i, v_i)` evaluated at `h = 0`
/// (Neville's scheme).
fn neville_at_zero(h: &[f64], v: &[Complex64]) -> Complex64 {
    let mut t = v.to_vec();
    let n = t.len();
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (h[i], h[i + level]);
            // difference form: constant data passes through exactly
            t[i] = t[i + 1] + (t[i + 1] - t[i]) * (hj / (hi - hj));
        }
    }
    t[0]
}

/// Richardson extrapolation in `h = 1/k` eliminating `order` error terms.
pub fn richardson_extrapolate(seq: &ScaledSequence, order: usize) -> Result<LimitEstimate> {
    richardson_with_tol(seq, order, DEFAULT_CONVERGENCE_TOL)
}

pub fn richardson_with_tol(seq: &ScaledSequence, order: usize, tol: f64) -> Result<LimitEstimate> {
    let ks: Vec<u32> = seq.points.iter().map(|p| p.k).collect();
    extrapolate_points(&ks, &seq.values(), order, tol)
}

/// Extrapolates `values[i]` sampled at levels `ks[i]` to `k = infinity`.
///
/// The estimate uses the last `order + 1` points; the error bound is its
/// distance to the estimate from the window one point earlier.
pub fn extrapolate_points(ks: &[u32], values: &[Complex64], order: usize, tol: f64) -> Result<LimitEstimate> {
    if ks.len() != values.len() {
        return Err(Error::InvalidInput("levels and values differ in length".into()));
    }
    if ks.len() < order + 2 {
        return Err(Error::InvalidInput(format!(
            "insufficient points for order {order}: need {}, have {}",
            order + 2,
            ks.len()
        )));
    }
    if order > MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "order {order} exceeds the maximum {MAX_ORDER}"
        )));
    }
    let mut sorted = ks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ks.len() || ks.contains(&0) {
        return Err(Error::InvalidInput("levels must be distinct and positive".into()));
    }
    let h: Vec<f64> = ks.iter().map(|&k| 1.0 / k as f64).collect();
    let len = ks.len();
    let last = neville_at_zero(&h[len - order - 1..], &values[len - order - 1..]);
    let prev = neville_at_zero(&h[len - order - 2..len - 1], &values[len - order - 2..len - 1]);
    let error_bound = (last - prev).norm();
    Ok(LimitEstimate {
        value: last,
        error_bound,
        order_used: order,
        converged: error_bound < tol,
    })
}

/// Whether a cut-system curve can be removed without disconnecting the
/// pieces.
pub fn is_non_separating(cut: &CutSystem, curve: &str) -> bool {
    let mut reduced = cut.clone();
    reduced.curves.retain(|c| c != curve);
    let mut touched = Vec::new();
    for (p, piece) in reduced.pieces.iter_mut().enumerate() {
        let before = piece.boundary.len();
        piece.boundary.retain(|(c, _)| c != curve);
        if piece.boundary.len() != before {
            touched.push(p);
        }
    }
    if touched.len() < 2 {
        return true;
    }
    // connectivity of the pieces once the curve is gone
    let mut reach = vec![false; reduced.pieces.len()];
    let mut stack = vec![touched[0]];
    while let Some(p) = stack.pop() {
        if reach[p] {
            continue;
        }
        reach[p] = true;
        for (c, _) in &reduced.pieces[p].boundary {
            for (q, other) in reduced.pieces.iter().enumerate() {
                if !reach[q] && other.boundary.iter().any(|(d, _)| d == c) {
                    stack.push(q);
                }
            }
        }
    }
    reach[touched[1]]
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormRow {
    pub k: u32,
    pub norm: f64,
    pub dim: f64,
    pub gap: f64,
}

/// Operator norms of a single labeled non-separating curve against the
/// dimension of its label.
#[derive(Clone, Debug, Serialize)]
pub struct NormLimitReport {
    pub rows: Vec<NormRow>,
    pub violations: Vec<String>,
}

impl NormLimitReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Gap slack: `dim - norm < GAP_CONSTANT * dim / k` for `k >= GAP_FROM_LEVEL`.
pub const GAP_CONSTANT: f64 = 10.0;
pub const GAP_FROM_LEVEL: u32 = 50;

pub fn norm_limit_check(cut: &CutSystem, mc: &LabeledMulticurve, ks: &[u32]) -> Result<NormLimitReport> {
    cut.validate()?;
    check_increasing(ks)?;
    if cut.d != 0 {
        return Err(Error::OutOfScope(
            "the norm limit equals dim(lambda) only for the untwisted moduli space (d = 0)".into(),
        ));
    }
    let [curve] = mc.support.as_slice() else {
        return Err(Error::InvalidInput(
            "norm check expects exactly one supported curve".into(),
        ));
    };
    if !is_non_separating(cut, curve) {
        return Err(Error::InvalidInput(format!("curve '{curve}' separates the surface")));
    }
    let label = mc
        .labels
        .get(curve)
        .ok_or_else(|| Error::InvalidInput(format!("curve '{curve}' has no label")))?;
    if let Some(&k) = ks.iter().find(|&&k| (k as u64) < level(label)) {
        return Err(Error::InvalidLabel(format!("{label} is not a level-{k} label")));
    }
    let dim = weyl_dim(label) as f64;
    let rows = ks
        .par_iter()
        .map(|&k| {
            let norm = if cut.curves.len() == 1 {
                // the complement has genus >= 1, so no block is empty
                character_sup(label, cut.n, k)?
            } else {
                let dec = BlockDecomposition::new(cut, k)?;
                operator_norm(&curve_operator_on(&dec, mc)?)?
            };
            Ok(NormRow {
                k,
                norm,
                dim,
                gap: dim - norm,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    for r in &rows {
        if r.gap < -1e-12 {
            violations.push(format!("k = {}: norm {} exceeds dim {}", r.k, r.norm, r.dim));
        }
        if r.k >= GAP_FROM_LEVEL && r.gap >= GAP_CONSTANT * dim / r.k as f64 {
            violations.push(format!(
                "k = {}: gap {} is not below {}*dim/k",
                r.k, r.gap, GAP_CONSTANT
            ));
        }
    }
    for w in rows.windows(2) {
        if w[1].gap > w[0].gap + 1e-12 {
            violations.push(format!("gap grows from k = {} to k = {}", w[0].k, w[1].k));
        }
    }
    Ok(NormLimitReport { rows, violations })
}

/// `max |chi_lambda(t_mu)|` over the level-`k` labels `mu`: the norm of the
/// curve operator when every block of the decomposition is nonzero.
pub fn character_sup(lambda: &DominantWeight, n: usize, k: u32) -> Result<f64> {
    enumerate_labels(n, k)
        .par_iter()
        .map(|mu| Ok(character(lambda, &torus_element(mu, n, k)?)?.norm()))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Largest `|s(k_i) - s(k_j)|` over pairs within `[from, to]`.
pub fn tail_oscillation(seq: &ScaledSequence, from: u32, to: u32) -> f64 {
    let window: Vec<Complex64> = seq
        .points
        .iter()
        .filter(|p| p.k >= from && p.k <= to)
        .map(|p| p.scaled)
        .collect();
    let mut worst: f64 = 0.0;
    for (i, a) in window.iter().enumerate() {
        for b in &window[i + 1..] {
            worst = worst.max((a - b).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::lie_data::DominantWeight;

    fn w(c: &[u32]) -> DominantWeight {
        DominantWeight::new(c.to_vec()).unwrap()
    }

    fn synthetic(ks: &[u32], f: impl Fn(f64) -> f64) -> ScaledSequence {
        ScaledSequence {
            n: 2,
            g: 2,
            m: 3,
            scaling: Scaling::Level,
            points: ks
                .iter()
                .map(|&k| SequencePoint {
                    k,
                    raw: Complex64::new(0.0, 0.0),
                    scaled: Complex64::new(f(k as f64), 0.0),
                })
                .collect(),
            a: LabeledMulticurve::empty(),
            b: LabeledMulticurve::empty(),
        }
    }

    #[test]
    fn exponents() {
        assert_eq!(scaling_exponent(2, 2), 3);
        assert_eq!(scaling_exponent(3, 2), 8);
        assert_eq!(scaling_exponent(2, 3), 6);
    }

    #[test]
    fn richardson_exact_cases() {
        let lin = synthetic(&[3, 7, 20], |k| 0.25 + 3.0 / k);
        let est = richardson_extrapolate(&lin, 1).unwrap();
        assert!((est.value.re - 0.25).abs() < 1e-14);
        assert!(est.error_bound < 1e-13 && est.converged);

        let constant = synthetic(&[1, 2, 3, 4], |_| 1.5);
        let est = richardson_extrapolate(&constant, 2).unwrap();
        assert_eq!(est.value.re, 1.5);
        assert_eq!(est.error_bound, 0.0);
    }

    #[test]
    fn richardson_errors() {
        let s = synthetic(&[4, 8], |k| 1.0 / k);
        assert!(matches!(richardson_extrapolate(&s, 5), Err(Error::InvalidInput(_))));
        assert!(matches!(richardson_extrapolate(&s, 1), Err(Error::InvalidInput(_))));
        let dup = synthetic(&[4, 4, 8], |k| 1.0 / k);
        assert!(richardson_extrapolate(&dup, 1).is_err());
    }

    #[test]
    fn volume_sequence() {
        let cut = CutSystem::closed(2, 2, 0);
        let e = LabeledMulticurve::empty();
        let seq = scaled_hs_sequence(&cut, &e, &e, &[32, 64, 128, 256]).unwrap();
        for p in &seq.points {
            let nn = p.k as f64 + 2.0;
            assert_eq!(p.raw.re, nn * (nn * nn - 1.0) / 6.0);
        }
        let est = richardson_extrapolate(&seq, 2).unwrap();
        assert!((est.value.re - 1.0 / 6.0).abs() < 1e-6, "{est:?}");
    }

    #[test]
    fn mn_scope_errors() {
        let cut = CutSystem::non_separating(2, 2, 0);
        let mc = LabeledMulticurve::single("c1", w(&[1]));
        assert!(matches!(
            mn_scaled_sequence(&cut, &mc, &mc, &[8, 7]),
            Err(Error::OutOfScope(_))
        ));
        let two = LabeledMulticurve::single("c1", w(&[2]));
        assert!(matches!(
            mn_scaled_sequence(&cut, &two, &mc, &[8]),
            Err(Error::OutOfScope(_))
        ));
        let su3 = CutSystem::non_separating(3, 2, 0);
        assert!(matches!(
            mn_scaled_sequence(&su3, &mc, &mc, &[8]),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn mn_and_level_scalings_are_related_exactly() {
        let cut = CutSystem::non_separating(2, 2, 0);
        let mc = LabeledMulticurve::single("c1", w(&[1]));
        let ks = [6u32, 10, 30];
        let ps: Vec<u32> = ks.iter().map(|k| 2 * k + 4).collect();
        let lv = scaled_hs_sequence(&cut, &mc, &mc, &ks).unwrap();
        let mn = mn_scaled_sequence(&cut, &mc, &mc, &ps).unwrap();
        for (a, b) in lv.points.iter().zip(&mn.points) {
            let ratio = b.scaled.re / a.scaled.re;
            let k = a.k as f64;
            assert!((ratio - (k / (k + 2.0)).powi(3)).abs() < 1e-13);
        }
    }

    #[test]
    fn norm_check_su2() {
        let cut = CutSystem::non_separating(2, 2, 0);
        let mc = LabeledMulticurve::single("c1", w(&[1]));
        let rep = norm_limit_check(&cut, &mc, &[2, 10, 50, 100, 200]).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        for r in &rep.rows {
            let expect = 2.0 * (PI / (r.k as f64 + 2.0)).cos();
            assert!((r.norm - expect).abs() < 1e-13);
        }
        let vac = LabeledMulticurve::single("c1", w(&[0]));
        let rep = norm_limit_check(&cut, &vac, &[4, 8]).unwrap();
        assert!(rep.rows.iter().all(|r| r.gap == 0.0));
    }

    #[test]
    fn character_sup_matches_block_norm() {
        for (n, label, ks) in [
            (2usize, w(&[2]), 2..=12u32),
            (3, w(&[1, 0]), 1..=6),
            (3, w(&[1, 1]), 2..=5),
        ] {
            for k in ks {
                for g in [2, 3] {
                    let cut = CutSystem::non_separating(n, g, 0);
                    let mc = LabeledMulticurve::single("c1", label.clone());
                    let dec = BlockDecomposition::new(&cut, k).unwrap();
                    assert!(dec.dims().iter().all(|&d| d > 0));
                    let blocks = operator_norm(&curve_operator_on(&dec, &mc).unwrap()).unwrap();
                    let fast = character_sup(&label, n, k).unwrap();
                    assert!((blocks - fast).abs() < 1e-12, "n={n} k={k} g={g}");
                }
            }
        }
    }

    #[test]
    fn norm_check_scope() {
        let mc = LabeledMulticurve::single("c1", w(&[1]));
        let twisted = CutSystem::non_separating(2, 2, 1);
        assert!(matches!(
            norm_limit_check(&twisted, &mc, &[4]),
            Err(Error::OutOfScope(_))
        ));
        let sep = CutSystem::separating(2, 1, 1, 0, 0);
        assert!(matches!(norm_limit_check(&sep, &mc, &[4]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn separation_detection() {
        assert!(is_non_separating(&CutSystem::non_separating(2, 2, 0), "c1"));
        assert!(!is_non_separating(&CutSystem::separating(2, 1, 1, 0, 0), "c1"));
        let pants = CutSystem::genus_two_pants(2, 0);
        assert!(["a", "b", "c"].iter().all(|c| is_non_separating(&pants, c)));
    }
}
