//! Finitely supported probability measures on ℝⁿ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{dist_sq, norm_sq, Matrix};

/// Total-mass tolerance for weight validation.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Atoms closer than this (Euclidean) are merged by [`DiscreteMeasure::coalesced`].
pub const COALESCE_TOL: f64 = 1e-12;

/// A probability measure Σ wᵢ δ_{xᵢ} with positive weights.
///
/// Weights are stored as given and never renormalized; construction rejects
/// inputs whose weights are nonpositive or do not sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureDoc")]
pub struct DiscreteMeasure {
    dim: usize,
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// Wire form of a measure; `weights` defaults to uniform.
#[derive(Debug, Clone, Deserialize)]
struct MeasureDoc {
    dim: usize,
    atoms: Vec<Vec<f64>>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

impl TryFrom<MeasureDoc> for DiscreteMeasure {
    type Error = Error;
    fn try_from(doc: MeasureDoc) -> Result<Self> {
        let weights = match doc.weights {
            Some(w) => w,
            None => uniform_weights(doc.atoms.len()),
        };
        DiscreteMeasure::with_dim(doc.dim, doc.atoms, weights)
    }
}

fn uniform_weights(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

impl DiscreteMeasure {
    /// Builds a measure, inferring the dimension from the first atom.
    pub fn new(atoms: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let dim = atoms.first().map(Vec::len).ok_or(Error::EmptyMeasure)?;
        Self::with_dim(dim, atoms, weights)
    }

    pub fn with_dim(dim: usize, atoms: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let m = Self { dim, atoms, weights };
        m.validate()?;
        Ok(m)
    }

    /// Uniform measure (1/N) Σ δ_{xᵢ}.
    pub fn uniform(atoms: Vec<Vec<f64>>) -> Result<Self> {
        let w = uniform_weights(atoms.len());
        Self::new(atoms, w)
    }

    /// Point mass at `x`.
    pub fn dirac(x: Vec<f64>) -> Result<Self> {
        Self::new(vec![x], vec![1.0])
    }

    /// Checks every invariant: positive finite weights summing to 1, atoms of
    /// length `dim`, finite coordinates.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if self.atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if self.weights.len() != self.atoms.len() {
            return Err(Error::BadWeights(format!("{} weights for {} atoms", self.weights.len(), self.atoms.len())));
        }
        for atom in &self.atoms {
            if atom.len() != self.dim {
                return Err(Error::DimMismatch { expected: self.dim, found: atom.len() });
            }
            if atom.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("atom coordinate".into()));
            }
        }
        if let Some((i, w)) = self.weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w <= 0.0) {
            return Err(Error::BadWeights(format!("weight {i} is {w}, must be positive")));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::BadWeights(format!("weights sum to {total}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of listed atoms (duplicates included).
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Vec<f64>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atom(&self, i: usize) -> &[f64] {
        &self.atoms[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.atoms.iter().map(Vec::as_slice).zip(self.weights.iter().copied())
    }

    /// M₂(μ) = Σ wᵢ‖xᵢ‖², also the Bessel bound of μ.
    pub fn second_moment(&self) -> f64 {
        self.iter().map(|(x, w)| w * norm_sq(x)).sum()
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim];
        for (x, w) in self.iter() {
            for (mi, xi) in m.iter_mut().zip(x) {
                *mi += w * xi;
            }
        }
        m
    }

    /// Merges atoms within `tol` of an earlier atom, summing weights.
    ///
    /// Returns the merged measure and, for every original atom, the index of
    /// the atom it was merged into. `tol = 0` merges exact duplicates only.
    pub fn coalesce(&self, tol: f64) -> (DiscreteMeasure, Vec<usize>) {
        let tol_sq = tol * tol;
        let mut atoms: Vec<Vec<f64>> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        let mut index = Vec::with_capacity(self.len());
        for (x, w) in self.iter() {
            match atoms.iter().position(|a| dist_sq(a, x) <= tol_sq) {
                Some(k) => {
                    weights[k] += w;
                    index.push(k);
                }
                None => {
                    atoms.push(x.to_vec());
                    weights.push(w);
                    index.push(atoms.len() - 1);
                }
            }
        }
        (DiscreteMeasure { dim: self.dim, atoms, weights }, index)
    }

    /// [`coalesce`](Self::coalesce) at [`COALESCE_TOL`].
    pub fn coalesced(&self) -> DiscreteMeasure {
        self.coalesce(COALESCE_TOL).0
    }

    /// A#μ: atoms mapped to A xᵢ, weights unchanged.
    pub fn pushforward_linear(&self, a: &Matrix) -> Result<DiscreteMeasure> {
        if !a.is_square() || a.rows() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: a.rows() });
        }
        Ok(DiscreteMeasure {
            dim: self.dim,
            atoms: self.atoms.iter().map(|x| a.apply(x)).collect(),
            weights: self.weights.clone(),
        })
    }

    /// T#μ for a map given by its values on the atoms (one image per atom).
    pub fn pushforward_map(&self, images: &[Vec<f64>]) -> Result<DiscreteMeasure> {
        check_images(self, images)?;
        Ok(DiscreteMeasure { dim: self.dim, atoms: images.to_vec(), weights: self.weights.clone() })
    }

    /// True when atoms and weights agree position by position within `tol`.
    pub fn approx_eq(&self, other: &DiscreteMeasure, tol: f64) -> bool {
        self.dim == other.dim
            && self.len() == other.len()
            && self.weights.iter().zip(&other.weights).all(|(a, b)| (a - b).abs() <= tol)
            && self.atoms.iter().zip(&other.atoms).all(|(x, y)| x.iter().zip(y).all(|(a, b)| (a - b).abs() <= tol))
    }

    /// Same support and weights up to `tol`, ignoring atom order, after coalescing both.
    pub fn same_measure(&self, other: &DiscreteMeasure, tol: f64) -> bool {
        let a = self.coalesce(tol).0;
        let b = other.coalesce(tol).0;
        if a.dim != b.dim || a.len() != b.len() {
            return false;
        }
        let matched = a.iter().all(|(x, w)| {
            b.iter().any(|(y, v)| (w - v).abs() <= tol && x.iter().zip(y).all(|(p, q)| (p - q).abs() <= tol))
        });
        matched
    }
}

pub(crate) fn check_images(m: &DiscreteMeasure, images: &[Vec<f64>]) -> Result<()> {
    if images.len() < m.len() {
        return Err(Error::MissingImage { index: images.len() });
    }
    if images.len() > m.len() {
        return Err(Error::InvalidArgument(format!("{} images for {} atoms", images.len(), m.len())));
    }
    for img in images {
        if img.len() != m.dim() {
            return Err(Error::DimMismatch { expected: m.dim(), found: img.len() });
        }
        if img.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("map image".into()));
        }
    }
    Ok(())
}

/// Convex combination Σ w_k μ_k, coalesced. Components with zero weight are dropped.
pub fn mixture(measures: &[DiscreteMeasure], weights: &[f64]) -> Result<DiscreteMeasure> {
    let first = measures.first().ok_or(Error::EmptyMeasure)?;
    if measures.len() != weights.len() {
        return Err(Error::BadWeights(format!("{} mixture weights for {} measures", weights.len(), measures.len())));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::BadWeights("mixture weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::BadWeights(format!("mixture weights sum to {total}")));
    }
    let dim = first.dim();
    let mut atoms = Vec::new();
    let mut ws = Vec::new();
    for (m, &w) in measures.iter().zip(weights) {
        if m.dim() != dim {
            return Err(Error::DimMismatch { expected: dim, found: m.dim() });
        }
        if w == 0.0 {
            continue;
        }
        for (x, v) in m.iter() {
            atoms.push(x.to_vec());
            ws.push(w * v);
        }
    }
    let raw = DiscreteMeasure { dim, atoms, weights: ws };
    Ok(raw.coalesced())
}
