//! Dimensions of TQFT spaces of cut surfaces through Verlinde sums.
//!
//! A piece of genus `g` with boundary labels `mu_1..mu_b` has dimension
//! `sum_nu S_{0 nu}^{2-2g-b} prod_j S_{mu_j nu}`. The marked point carrying
//! `d * lambda_0` counts as one more boundary label on its piece.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve_ops::{CutSystem, Side};
use crate::error::{Error, Result};
use crate::lie_data::{level, DominantWeight};
use crate::numeric::ComplexNeumaier;
use crate::s_matrix::SMatrix;

/// Relative tolerance for accepting a Verlinde sum as an integer.
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// A connected surface with labeled boundary, obtained by cutting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfacePiece {
    pub genus: u32,
    pub boundary_labels: Vec<DominantWeight>,
    pub marked_label: Option<DominantWeight>,
}

impl SurfacePiece {
    pub fn closed(genus: u32) -> Self {
        Self {
            genus,
            boundary_labels: Vec::new(),
            marked_label: None,
        }
    }
}

/// A rounded Verlinde sum with the distance to the integer it was rounded to.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerlindeValue {
    pub value: u64,
    pub residual: f64,
    #[serde(skip)]
    pub raw: Complex64,
}

/// Which side of an oriented cut curve receives the curve's label; the other
/// side receives the dual label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SideConvention {
    #[default]
    PlusGetsLabel,
    MinusGetsLabel,
}

impl SideConvention {
    pub fn flipped(self) -> Self {
        match self {
            SideConvention::PlusGetsLabel => SideConvention::MinusGetsLabel,
            SideConvention::MinusGetsLabel => SideConvention::PlusGetsLabel,
        }
    }

    fn takes_label(self, side: Side) -> bool {
        matches!(
            (self, side),
            (SideConvention::PlusGetsLabel, Side::Plus) | (SideConvention::MinusGetsLabel, Side::Minus)
        )
    }
}

/// Powers of the vacuum row for one Euler-characteristic exponent.
fn vacuum_powers(s: &SMatrix, exponent: i32) -> Vec<Complex64> {
    s.row(0).iter().map(|z| z.powi(exponent)).collect()
}

fn sum_with_powers(s: &SMatrix, vacuum: &[Complex64], label_indices: &[usize]) -> Complex64 {
    let mut acc = ComplexNeumaier::new();
    for (nu, v) in vacuum.iter().enumerate() {
        let mut term = *v;
        for &l in label_indices {
            term *= s.get(l, nu);
        }
        acc.add(term);
    }
    acc.value()
}

fn round_to_dimension(raw: Complex64, what: impl FnOnce() -> String) -> Result<VerlindeValue> {
    let nearest = raw.re.round();
    let residual = (raw - Complex64::new(nearest, 0.0)).norm();
    if residual > INTEGRALITY_TOL * raw.norm().max(1.0) || nearest < 0.0 {
        return Err(Error::NumericalFailure(format!(
            "Verlinde sum for {} is {raw}, not a nonnegative integer (residual {residual:e})",
            what()
        )));
    }
    Ok(VerlindeValue {
        value: nearest as u64,
        residual,
        raw,
    })
}

/// Verlinde sum for one piece, with the residual before rounding.
pub fn verlinde_sum(piece: &SurfacePiece, s: &SMatrix) -> Result<VerlindeValue> {
    let mut indices = piece
        .boundary_labels
        .iter()
        .map(|l| s.index_of(l))
        .collect::<Result<Vec<_>>>()?;
    if let Some(m) = &piece.marked_label {
        indices.push(s.index_of(m)?);
    }
    let exponent = 2 - 2 * piece.genus as i32 - indices.len() as i32;
    let raw = sum_with_powers(s, &vacuum_powers(s, exponent), &indices);
    round_to_dimension(raw, || format!("genus {} with {} labels", piece.genus, indices.len()))
}

pub fn verlinde_dim(piece: &SurfacePiece, s: &SMatrix) -> Result<u64> {
    verlinde_sum(piece, s).map(|v| v.value)
}

fn check_closed_args(n: usize, k: u32, g: u32, d: u32) -> Result<()> {
    if g <= 1 {
        return Err(Error::OutOfScope(format!(
            "closed surfaces of genus {g} <= 1 are not treated"
        )));
    }
    if d as usize >= n {
        return Err(Error::InvalidInput(format!("d = {d} must be a residue mod n = {n}")));
    }
    if d > k {
        return Err(Error::InvalidLabel(format!("d * lambda_0 has level {d} > k = {k}")));
    }
    Ok(())
}

/// Dimension of the space of a closed genus-`g` surface whose marked point
/// carries `d * lambda_0`.
pub fn dim_z(n: usize, k: u32, g: u32, d: u32) -> Result<u64> {
    check_closed_args(n, k, g, d)?;
    dim_z_with(&SMatrix::new(n, k)?, g, d).map(|v| v.value)
}

/// [`dim_z`] against a prebuilt S-matrix, keeping the residual.
pub fn dim_z_with(s: &SMatrix, g: u32, d: u32) -> Result<VerlindeValue> {
    check_closed_args(s.n(), s.k(), g, d)?;
    let piece = SurfacePiece {
        genus: g,
        boundary_labels: Vec::new(),
        marked_label: Some(DominantWeight::first_fundamental_multiple(s.n(), d)),
    };
    verlinde_sum(&piece, s)
}

/// Precomputed per-piece data for evaluating block dimensions of one cut
/// system at one level, for many labelings.
#[derive(Clone, Debug)]
pub struct BlockDimPlan<'a> {
    s: &'a SMatrix,
    duals: Vec<usize>,
    pieces: Vec<PiecePlan>,
}

#[derive(Clone, Debug)]
struct PiecePlan {
    genus: u32,
    vacuum: Vec<Complex64>,
    // (curve index, receives the label itself rather than its dual)
    incidences: Vec<(usize, bool)>,
    marked: Option<usize>,
}

impl<'a> BlockDimPlan<'a> {
    pub fn new(cut: &CutSystem, s: &'a SMatrix, convention: SideConvention) -> Result<Self> {
        cut.validate()?;
        if cut.n != s.n() {
            return Err(Error::InvalidInput(format!(
                "cut system is for SU({}) but the S-matrix is for SU({})",
                cut.n,
                s.n()
            )));
        }
        if cut.d > s.k() {
            return Err(Error::InvalidLabel(format!(
                "d * lambda_0 has level {} > k = {}",
                cut.d,
                s.k()
            )));
        }
        let marked_index = s.index_of(&DominantWeight::first_fundamental_multiple(cut.n, cut.d))?;
        let pieces = cut
            .pieces
            .iter()
            .enumerate()
            .map(|(p, piece)| {
                let incidences: Vec<(usize, bool)> = piece
                    .boundary
                    .iter()
                    .map(|(id, side)| (cut.curve_index(id).expect("validated"), convention.takes_label(*side)))
                    .collect();
                let marked = (p == cut.marked_piece).then_some(marked_index);
                let b = incidences.len() + usize::from(marked.is_some());
                let exponent = 2 - 2 * piece.genus as i32 - b as i32;
                PiecePlan {
                    genus: piece.genus,
                    vacuum: vacuum_powers(s, exponent),
                    incidences,
                    marked,
                }
            })
            .collect();
        Ok(Self {
            s,
            duals: s.dual_indices(),
            pieces,
        })
    }

    /// Block dimension for a labeling given as label indices, one per curve.
    pub fn dim(&self, labeling: &[usize]) -> Result<u64> {
        let mut total: u64 = 1;
        let mut indices = Vec::new();
        for piece in &self.pieces {
            indices.clear();
            indices.extend(
                piece
                    .incidences
                    .iter()
                    .map(|&(c, own)| if own { labeling[c] } else { self.duals[labeling[c]] }),
            );
            indices.extend(piece.marked);
            let raw = sum_with_powers(self.s, &piece.vacuum, &indices);
            let v = round_to_dimension(raw, || format!("a genus-{} piece", piece.genus))?;
            if v.value == 0 {
                return Ok(0);
            }
            total *= v.value;
        }
        Ok(total)
    }

    pub fn s(&self) -> &SMatrix {
        self.s
    }
}

/// Dimension of the summand of the factorization selected by `labeling`
/// (one label per curve of the cut system, in curve order).
pub fn block_dim(cut: &CutSystem, labeling: &[DominantWeight], s: &SMatrix, convention: SideConvention) -> Result<u64> {
    if labeling.len() != cut.curves.len() {
        return Err(Error::InvalidInput(format!(
            "labeling has {} entries for {} curves",
            labeling.len(),
            cut.curves.len()
        )));
    }
    for l in labeling {
        if level(l) > s.k() as u64 {
            return Err(Error::InvalidLabel(format!("{l} has level above k = {}", s.k())));
        }
    }
    let idx = labeling.iter().map(|l| s.index_of(l)).collect::<Result<Vec<_>>>()?;
    BlockDimPlan::new(cut, s, convention)?.dim(&idx)
}

/// All labelings of `curves` curves by `m` labels, lexicographic.
pub(crate) fn labelings(curves: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.checked_pow(curves as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        let mut v = vec![0; curves];
        for slot in v.iter_mut().rev() {
            *slot = code % m;
            code /= m;
        }
        v
    })
}

/// Both sides of the factorization of the closed-surface space along a cut.
#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub n: usize,
    pub k: u32,
    pub genus: u32,
    pub d: u32,
    pub block_sum: u64,
    pub dim_z: u64,
    pub blocks: usize,
}

/// Checks `sum_mu block_dim(mu) == dim_z` exactly.
pub fn factorization_check(cut: &CutSystem, k: u32) -> Result<FactorizationReport> {
    let s = SMatrix::new(cut.n, k)?;
    factorization_check_with(cut, &s, SideConvention::default())
}

pub fn factorization_check_with(
    cut: &CutSystem,
    s: &SMatrix,
    convention: SideConvention,
) -> Result<FactorizationReport> {
    let plan = BlockDimPlan::new(cut, s, convention)?;
    let all: Vec<Vec<usize>> = labelings(cut.curves.len(), s.len()).collect();
    let dims = all.par_iter().map(|mu| plan.dim(mu)).collect::<Result<Vec<_>>>()?;
    let block_sum: u64 = dims.iter().sum();
    let dim = dim_z_with(s, cut.g, cut.d)?.value;
    let report = FactorizationReport {
        n: cut.n,
        k: s.k(),
        genus: cut.g,
        d: cut.d,
        block_sum,
        dim_z: dim,
        blocks: all.len(),
    };
    if block_sum != dim {
        return Err(Error::InvariantViolation(format!(
            "factorization fails: sum of block dimensions {block_sum} != dim Z {dim}"
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_data::{dual, enumerate_labels};

    fn w(c: &[u32]) -> DominantWeight {
        DominantWeight::new(c.to_vec()).unwrap()
    }

    fn su2_genus2(k: u64) -> u64 {
        let n = k + 2;
        n * (n * n - 1) / 6
    }

    #[test]
    fn cylinder_is_one_dimensional() {
        for (n, k) in [(2, 5), (3, 4), (4, 2)] {
            let s = SMatrix::new(n, k).unwrap();
            for lam in s.labels() {
                let piece = SurfacePiece {
                    genus: 0,
                    boundary_labels: vec![lam.clone(), dual(lam)],
                    marked_label: None,
                };
                assert_eq!(verlinde_dim(&piece, &s).unwrap(), 1);
            }
        }
    }

    #[test]
    fn genus_two_closed_forms() {
        let s = SMatrix::new(2, 1).unwrap();
        assert_eq!(verlinde_dim(&SurfacePiece::closed(2), &s).unwrap(), 4);
        assert_eq!(dim_z(2, 1, 2, 0).unwrap(), 4);
        for k in 0..=30u32 {
            assert_eq!(dim_z(2, k, 2, 0).unwrap(), su2_genus2(k as u64), "k = {k}");
        }
    }

    #[test]
    fn trivial_marked_label_changes_nothing() {
        for (n, k, g) in [(2, 6, 3), (3, 4, 2)] {
            let s = SMatrix::new(n, k).unwrap();
            assert_eq!(
                dim_z_with(&s, g, 0).unwrap().value,
                verlinde_dim(&SurfacePiece::closed(g), &s).unwrap()
            );
        }
    }

    #[test]
    fn dim_z_argument_errors() {
        assert!(matches!(dim_z(2, 3, 1, 0), Err(Error::OutOfScope(_))));
        assert!(matches!(dim_z(3, 0, 2, 1), Err(Error::InvalidLabel(_))));
        assert!(matches!(dim_z(2, 3, 2, 2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn su2_pair_of_pants_fusion() {
        // N_{a b c} is 1 iff the triangle and parity conditions hold at level k
        let k = 5u32;
        let s = SMatrix::new(2, k).unwrap();
        for a in 0..=k {
            for b in 0..=k {
                for c in 0..=k {
                    let piece = SurfacePiece {
                        genus: 0,
                        boundary_labels: vec![w(&[a]), w(&[b]), w(&[c])],
                        marked_label: None,
                    };
                    let allowed = (a + b + c) % 2 == 0 && c <= a + b && a <= b + c && b <= a + c && a + b + c <= 2 * k;
                    assert_eq!(verlinde_dim(&piece, &s).unwrap(), u64::from(allowed), "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn duality_invariance() {
        let s = SMatrix::new(3, 4).unwrap();
        let labels = enumerate_labels(3, 4);
        for a in &labels {
            for b in labels.iter().step_by(3) {
                let p = SurfacePiece {
                    genus: 1,
                    boundary_labels: vec![a.clone(), b.clone()],
                    marked_label: None,
                };
                let q = SurfacePiece {
                    genus: 1,
                    boundary_labels: vec![dual(a), dual(b)],
                    marked_label: None,
                };
                assert_eq!(verlinde_dim(&p, &s).unwrap(), verlinde_dim(&q, &s).unwrap());
            }
        }
    }

    #[test]
    fn non_separating_block_closed_form() {
        let cut = CutSystem::non_separating(2, 2, 0);
        for k in [1u32, 3, 10] {
            let s = SMatrix::new(2, k).unwrap();
            for m in 0..=k {
                let d = block_dim(&cut, &[w(&[m])], &s, SideConvention::default()).unwrap();
                let j = (m + 1) as u64;
                assert_eq!(d, j * (k as u64 + 2 - j));
            }
            let too_big = block_dim(&cut, &[w(&[k + 1])], &s, SideConvention::default());
            assert!(matches!(too_big, Err(Error::InvalidLabel(_))));
        }
    }

    #[test]
    fn empty_cut_block_is_dim_z() {
        let cut = CutSystem::closed(2, 3, 0);
        let s = SMatrix::new(2, 4).unwrap();
        assert_eq!(
            block_dim(&cut, &[], &s, SideConvention::default()).unwrap(),
            dim_z(2, 4, 3, 0).unwrap()
        );
        let rep = factorization_check(&cut, 4).unwrap();
        assert_eq!(rep.block_sum, rep.dim_z);
        assert_eq!(rep.blocks, 1);
    }

    #[test]
    fn factorization_su2_k3() {
        let rep = factorization_check(&CutSystem::non_separating(2, 2, 0), 3).unwrap();
        assert_eq!((rep.block_sum, rep.dim_z), (20, 20));
    }

    #[test]
    fn factorization_separating_su2() {
        for k in 0..=16 {
            let cut = CutSystem::separating(2, 1, 1, 0, 0);
            let rep = factorization_check(&cut, k).unwrap();
            assert_eq!(rep.dim_z, su2_genus2(k as u64));
        }
    }

    #[test]
    fn marked_piece_placement_does_not_change_dimensions() {
        for (n, k) in [(2u32, 6u32), (3, 4)] {
            let s = SMatrix::new(n as usize, k).unwrap();
            for d in 0..n {
                let a = factorization_check_with(
                    &CutSystem::separating(n as usize, 1, 2, d, 0),
                    &s,
                    SideConvention::default(),
                )
                .unwrap();
                let b = factorization_check_with(
                    &CutSystem::separating(n as usize, 1, 2, d, 1),
                    &s,
                    SideConvention::default(),
                )
                .unwrap();
                assert_eq!(a.block_sum, b.block_sum);
            }
        }
    }

    #[test]
    fn dims_nondecreasing_in_level() {
        for n in [2usize, 3] {
            let mut prev = 0;
            for k in 0..8 {
                let d = dim_z(n, k, 2, 0).unwrap();
                assert!(d >= prev);
                prev = d;
            }
        }
    }

    #[test]
    fn labelings_are_lexicographic() {
        let v: Vec<Vec<usize>> = labelings(2, 3).collect();
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], vec![0, 0]);
        assert_eq!(v[1], vec![0, 1]);
        assert_eq!(v[8], vec![2, 2]);
        assert_eq!(labelings(0, 5).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }
}
