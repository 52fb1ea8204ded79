//! Curve operators of labeled multicurves supported on a fixed cut system.
//!
//! Cutting the surface along the curves of a [`CutSystem`] splits the TQFT
//! space into blocks indexed by labelings `mu` of the curves. A labeled
//! multicurve supported on those curves acts on the block `mu` by the scalar
//! `prod_i S_{lambda_i, mu_i} / S_{0, mu_i}`, so every operator here is
//! diagonal in the same decomposition and is stored as one eigenvalue per
//! block.
//!
//! Only curves of one disjoint system are representable. Curves with
//! essential intersections would need non-diagonal matrices.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_data::{dual, level, DominantWeight};
use crate::numeric::pairwise_sum;
use crate::s_matrix::{s_ratio_row, SMatrix};
use crate::verlinde::{labelings, BlockDimPlan, SideConvention};

/// Side of an oriented curve a boundary component lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub genus: u32,
    pub boundary: Vec<(String, Side)>,
}

/// A closed surface of genus `g` cut along disjoint curves into pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSystem {
    pub n: usize,
    pub g: u32,
    pub d: u32,
    pub curves: Vec<String>,
    pub pieces: Vec<Piece>,
    pub marked_piece: usize,
}

fn violation(rule: &'static str, detail: impl Into<String>) -> Error {
    Error::CutSystem {
        rule,
        detail: detail.into(),
    }
}

impl CutSystem {
    /// No curves: the whole genus-`g` surface as one piece.
    pub fn closed(n: usize, g: u32, d: u32) -> Self {
        Self {
            n,
            g,
            d,
            curves: Vec::new(),
            pieces: vec![Piece {
                genus: g,
                boundary: Vec::new(),
            }],
            marked_piece: 0,
        }
    }

    /// One non-separating curve `c1`; a single piece of genus `g - 1` with two
    /// boundary circles.
    pub fn non_separating(n: usize, g: u32, d: u32) -> Self {
        Self {
            n,
            g,
            d,
            curves: vec!["c1".into()],
            pieces: vec![Piece {
                genus: g - 1,
                boundary: vec![("c1".into(), Side::Plus), ("c1".into(), Side::Minus)],
            }],
            marked_piece: 0,
        }
    }

    /// One separating curve `c1` splitting off genus `g1` and `g2`.
    pub fn separating(n: usize, g1: u32, g2: u32, d: u32, marked_piece: usize) -> Self {
        Self {
            n,
            g: g1 + g2,
            d,
            curves: vec!["c1".into()],
            pieces: vec![
                Piece {
                    genus: g1,
                    boundary: vec![("c1".into(), Side::Plus)],
                },
                Piece {
                    genus: g2,
                    boundary: vec![("c1".into(), Side::Minus)],
                },
            ],
            marked_piece,
        }
    }

    /// Genus 2 cut into two pairs of pants along three non-separating
    /// curves `a`, `b`, `c`.
    pub fn genus_two_pants(n: usize, d: u32) -> Self {
        let pants = |side| Piece {
            genus: 0,
            boundary: ["a", "b", "c"].iter().map(|c| (c.to_string(), side)).collect(),
        };
        Self {
            n,
            g: 2,
            d,
            curves: vec!["a".into(), "b".into(), "c".into()],
            pieces: vec![pants(Side::Plus), pants(Side::Minus)],
            marked_piece: 0,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cut: Self = serde_json::from_str(s)?;
        cut.validate()?;
        Ok(cut)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&read_input(path)?)
    }

    pub fn curve_index(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c == id)
    }

    /// Checks every structural rule; the first violation is returned.
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(violation("rank", format!("SU(n) requires n >= 2, got {}", self.n)));
        }
        if self.d as usize >= self.n {
            return Err(violation(
                "marked label",
                format!("d = {} is not a residue mod {}", self.d, self.n),
            ));
        }
        if self.pieces.is_empty() {
            return Err(violation("pieces", "a cut system needs at least one piece"));
        }
        if self.marked_piece >= self.pieces.len() {
            return Err(violation(
                "marked piece",
                format!("index {} but only {} pieces", self.marked_piece, self.pieces.len()),
            ));
        }
        let mut seen = HashMap::new();
        for (i, c) in self.curves.iter().enumerate() {
            if seen.insert(c.as_str(), i).is_some() {
                return Err(violation("curve identifiers", format!("curve '{c}' listed twice")));
            }
        }
        let mut incidences: HashMap<&str, (u32, u32)> = self.curves.iter().map(|c| (c.as_str(), (0, 0))).collect();
        for (p, piece) in self.pieces.iter().enumerate() {
            for (id, side) in &piece.boundary {
                let entry = incidences
                    .get_mut(id.as_str())
                    .ok_or_else(|| violation("curve identifiers", format!("piece {p} uses unknown curve '{id}'")))?;
                match side {
                    Side::Plus => entry.0 += 1,
                    Side::Minus => entry.1 += 1,
                }
            }
        }
        for c in &self.curves {
            let (plus, minus) = incidences[c.as_str()];
            if (plus, minus) != (1, 1) {
                return Err(violation(
                    "curve incidence count",
                    format!("curve '{c}' has {plus} '+' and {minus} '-' incidences, expected one of each"),
                ));
            }
        }
        let chi: i64 = self
            .pieces
            .iter()
            .map(|p| 2 - 2 * p.genus as i64 - p.boundary.len() as i64)
            .sum();
        if chi != 2 - 2 * self.g as i64 {
            return Err(violation(
                "Euler characteristic",
                format!("pieces sum to {chi}, genus {} needs {}", self.g, 2 - 2 * self.g as i64),
            ));
        }
        // union-find over pieces joined by shared curves
        let mut parent: Vec<usize> = (0..self.pieces.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut owner: HashMap<&str, usize> = HashMap::new();
        for (p, piece) in self.pieces.iter().enumerate() {
            for (id, _) in &piece.boundary {
                if let Some(&q) = owner.get(id.as_str()) {
                    let (a, b) = (find(&mut parent, p), find(&mut parent, q));
                    parent[a] = b;
                } else {
                    owner.insert(id, p);
                }
            }
        }
        let root = find(&mut parent, 0);
        if let Some(p) = (1..self.pieces.len()).find(|&p| find(&mut parent, p) != root) {
            return Err(violation(
                "connectivity",
                format!("piece {p} is not connected to piece 0"),
            ));
        }
        Ok(())
    }
}

/// Validates a cut system, naming the first violated rule.
pub fn validate_cut_system(cut: &CutSystem) -> Result<()> {
    cut.validate()
}

/// A multicurve made of curves of a cut system, each with a label and an
/// orientation relative to the cut system's orientation of that curve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledMulticurve {
    pub support: Vec<String>,
    pub labels: BTreeMap<String, DominantWeight>,
    #[serde(default)]
    pub orientations: BTreeMap<String, Side>,
}

impl LabeledMulticurve {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(curve: &str, label: DominantWeight) -> Self {
        Self {
            support: vec![curve.to_string()],
            labels: BTreeMap::from([(curve.to_string(), label)]),
            orientations: BTreeMap::from([(curve.to_string(), Side::Plus)]),
        }
    }

    pub fn with_orientation(mut self, curve: &str, side: Side) -> Self {
        self.orientations.insert(curve.to_string(), side);
        self
    }

    /// Union of two multicurves with disjoint supports.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for c in &other.support {
            if out.support.contains(c) {
                return Err(Error::InvalidInput(format!("curve '{c}' is in both supports")));
            }
            out.support.push(c.clone());
        }
        out.labels.extend(other.labels.clone());
        out.orientations.extend(other.orientations.clone());
        Ok(out)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&read_input(path)?)
    }

    pub fn orientation(&self, curve: &str) -> Side {
        self.orientations.get(curve).copied().unwrap_or(Side::Plus)
    }

    /// Label as seen from the cut system's orientation of the curve.
    fn effective_label(&self, curve: &str) -> Option<DominantWeight> {
        let l = self.labels.get(curve)?;
        Some(match self.orientation(curve) {
            Side::Plus => l.clone(),
            Side::Minus => dual(l),
        })
    }

    fn validate_against(&self, cut: &CutSystem, k: u32) -> Result<()> {
        for c in &self.support {
            if cut.curve_index(c).is_none() {
                return Err(Error::InvalidInput(format!(
                    "multicurve uses curve '{c}' absent from the cut system"
                )));
            }
            let l = self
                .labels
                .get(c)
                .ok_or_else(|| Error::InvalidInput(format!("supported curve '{c}' has no label")))?;
            if l.n() != cut.n {
                return Err(Error::InvalidInput(format!(
                    "label {l} on '{c}' is not a weight of SU({})",
                    cut.n
                )));
            }
            if level(l) > k as u64 {
                return Err(Error::InvalidLabel(format!("label {l} on '{c}' exceeds level k = {k}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
        _ => Error::Io(e),
    })
}

/// Caps for block enumeration.
#[derive(Clone, Copy, Debug)]
pub struct BlockLimits {
    pub max_blocks: usize,
}

impl Default for BlockLimits {
    fn default() -> Self {
        Self { max_blocks: 5_000_000 }
    }
}

/// The factorization of the space along a cut system at level `k`: every
/// labeling of the curves with the dimension of its summand. Zero-dimensional
/// summands are kept so operators on the same cut align index by index.
#[derive(Debug)]
pub struct BlockDecomposition {
    cut: CutSystem,
    s: SMatrix,
    convention: SideConvention,
    labelings: Vec<Vec<usize>>,
    dims: Vec<u64>,
    total_dim: u64,
}

impl BlockDecomposition {
    pub fn new(cut: &CutSystem, k: u32) -> Result<Arc<Self>> {
        Self::with_options(
            cut,
            SMatrix::new(cut.n, k)?,
            SideConvention::default(),
            &BlockLimits::default(),
        )
    }

    pub fn with_options(
        cut: &CutSystem,
        s: SMatrix,
        convention: SideConvention,
        limits: &BlockLimits,
    ) -> Result<Arc<Self>> {
        let count = (s.len() as u128).pow(cut.curves.len() as u32);
        if count > limits.max_blocks as u128 {
            return Err(Error::ResourceLimit(format!(
                "{count} blocks for {} curves at level {} (cap {})",
                cut.curves.len(),
                s.k(),
                limits.max_blocks
            )));
        }
        let plan = BlockDimPlan::new(cut, &s, convention)?;
        let labelings: Vec<Vec<usize>> = labelings(cut.curves.len(), s.len()).collect();
        let dims = labelings
            .par_iter()
            .map(|mu| plan.dim(mu))
            .collect::<Result<Vec<_>>>()?;
        let total_dim = dims.iter().sum();
        Ok(Arc::new(Self {
            cut: cut.clone(),
            s,
            convention,
            labelings,
            dims,
            total_dim,
        }))
    }

    pub fn cut(&self) -> &CutSystem {
        &self.cut
    }

    pub fn k(&self) -> u32 {
        self.s.k()
    }

    pub fn s(&self) -> &SMatrix {
        &self.s
    }

    pub fn convention(&self) -> SideConvention {
        self.convention
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn total_dim(&self) -> u64 {
        self.total_dim
    }

    /// Labeling of block `b` as weights, in curve order.
    pub fn labeling(&self, b: usize) -> Vec<DominantWeight> {
        self.labelings[b].iter().map(|&i| self.s.labels()[i].clone()).collect()
    }

    fn same_as(&self, other: &Self) -> bool {
        self.cut == other.cut && self.k() == other.k() && self.convention == other.convention
    }
}

/// `Z^(k)(gamma, lambda)` in diagonal form.
#[derive(Clone, Debug)]
pub struct DiagonalCurveOperator {
    blocks: Arc<BlockDecomposition>,
    eigenvalues: Vec<Complex64>,
}

impl DiagonalCurveOperator {
    pub fn k(&self) -> u32 {
        self.blocks.k()
    }

    pub fn decomposition(&self) -> &Arc<BlockDecomposition> {
        &self.blocks
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn total_dim(&self) -> u64 {
        self.blocks.total_dim
    }

    /// `(labeling, eigenvalue, dim)` for every block, lexicographic in the
    /// labeling.
    pub fn blocks(&self) -> impl Iterator<Item = (Vec<DominantWeight>, Complex64, u64)> + '_ {
        (0..self.eigenvalues.len()).map(|b| (self.blocks.labeling(b), self.eigenvalues[b], self.blocks.dims[b]))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            blocks: Arc::clone(&self.blocks),
            eigenvalues: self.eigenvalues.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Blockwise product of two operators on the same decomposition.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_compatible(self, other)?;
        Ok(Self {
            blocks: Arc::clone(&self.blocks),
            eigenvalues: self
                .eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }
}

/// Builds the operator of `mc` on the blocks of `decomposition`.
pub fn curve_operator_on(
    decomposition: &Arc<BlockDecomposition>,
    mc: &LabeledMulticurve,
) -> Result<DiagonalCurveOperator> {
    let cut = &decomposition.cut;
    let s = &decomposition.s;
    mc.validate_against(cut, s.k())?;
    let mut factors: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for c in &mc.support {
        let label = mc.effective_label(c).expect("validated");
        factors.push((
            cut.curve_index(c).expect("validated"),
            s_ratio_row(&label, s.labels(), s.k())?,
        ));
    }
    let eigenvalues = decomposition
        .labelings
        .iter()
        .map(|mu| {
            factors
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, (c, row)| acc * row[mu[*c]])
        })
        .collect();
    Ok(DiagonalCurveOperator {
        blocks: Arc::clone(decomposition),
        eigenvalues,
    })
}

/// Builds the operator of `mc` at level `k` from scratch.
pub fn curve_operator(cut: &CutSystem, mc: &LabeledMulticurve, k: u32) -> Result<DiagonalCurveOperator> {
    mc.validate_against(cut, k)?;
    curve_operator_on(&BlockDecomposition::new(cut, k)?, mc)
}

/// Identity operator on a decomposition.
pub fn identity_operator(decomposition: &Arc<BlockDecomposition>) -> DiagonalCurveOperator {
    DiagonalCurveOperator {
        blocks: Arc::clone(decomposition),
        eigenvalues: vec![Complex64::new(1.0, 0.0); decomposition.len()],
    }
}

fn check_compatible(a: &DiagonalCurveOperator, b: &DiagonalCurveOperator) -> Result<()> {
    if Arc::ptr_eq(&a.blocks, &b.blocks) || a.blocks.same_as(&b.blocks) {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "operators are defined on different cut systems, levels or side conventions".into(),
        ))
    }
}

/// Hilbert-Smith pairing `Tr(A B^*)`, reduced in a fixed pairwise order.
pub fn hs_inner(a: &DiagonalCurveOperator, b: &DiagonalCurveOperator) -> Result<Complex64> {
    check_compatible(a, b)?;
    let terms: Vec<Complex64> = a
        .eigenvalues
        .par_iter()
        .zip(b.eigenvalues.par_iter())
        .zip(a.blocks.dims.par_iter())
        .map(|((x, y), &d)| x * y.conj() * d as f64)
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Largest `|eigenvalue|` over blocks of positive dimension.
pub fn operator_norm(a: &DiagonalCurveOperator) -> Result<f64> {
    a.eigenvalues
        .iter()
        .zip(a.blocks.dims.iter())
        .filter(|(_, &d)| d > 0)
        .map(|(z, _)| z.norm())
        .reduce(f64::max)
        .ok_or_else(|| Error::DegenerateSpace("every block is zero-dimensional".into()))
}

/// Hilbert-Smith Gram matrix of a family of operators on one decomposition.
pub fn gram_matrix(ops: &[DiagonalCurveOperator]) -> Result<Vec<Vec<Complex64>>> {
    ops.iter()
        .map(|a| ops.iter().map(|b| hs_inner(a, b)).collect())
        .collect()
}
