//! Redundancy of a discrete frame: the kernel dimension of its synthesis map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::frame_operator_inverse;
use crate::measures::{DiscreteMeasure, COALESCE_TOL};
use crate::numerics::{dot, inverse, numeric_rank, Matrix};

/// Synthesis map ω ↦ Σ wᵢ ω(xᵢ) xᵢ as an n×N matrix with columns wᵢ xᵢ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisMatrix {
    pub matrix: Matrix,
    /// Atom weights, defining the inner product on the domain.
    pub weights: Vec<f64>,
}

impl SynthesisMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn atom_count(&self) -> usize {
        self.matrix.cols()
    }

    /// Applies the synthesis map to a function given by its values on the atoms.
    pub fn apply(&self, omega: &[f64]) -> Vec<f64> {
        self.matrix.apply(omega)
    }
}

/// Builds the synthesis matrix over the atoms as listed (no coalescing).
pub fn synthesis_matrix(m: &DiscreteMeasure) -> SynthesisMatrix {
    let (n, count) = (m.dim(), m.len());
    let mut matrix = Matrix::zeros(n, count);
    for (j, (x, w)) in m.iter().enumerate() {
        for r in 0..n {
            matrix[(r, j)] = w * x[r];
        }
    }
    SynthesisMatrix { matrix, weights: m.weights().to_vec() }
}

/// N − rank of the synthesis matrix, with N counted after merging coincident atoms.
///
/// `tol` is the absolute singular-value cutoff; `None` uses the default
/// relative cutoff of the rank routine.
pub fn redundancy_rank(m: &DiscreteMeasure, tol: Option<f64>) -> usize {
    let c = m.coalesced();
    let u = synthesis_matrix(&c);
    c.len() - numeric_rank(&u.matrix, tol)
}

/// Σᵢ (1 − wᵢ xᵢᵗ S⁻¹ xᵢ) over the coalesced atoms; equals N − n for a frame.
pub fn redundancy_trace(m: &DiscreteMeasure) -> Result<f64> {
    let c = m.coalesced();
    let (_, s_inv) = frame_operator_inverse(&c)?;
    Ok(c.iter().map(|(x, w)| 1.0 - w * dot(x, &s_inv.apply(x))).sum())
}

/// Redundancy of μ and of A#μ for an invertible A.
pub fn equivalence_redundancy_check(m: &DiscreteMeasure, a: &Matrix) -> Result<(usize, usize)> {
    if !a.is_square() || a.rows() != m.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), found: a.rows() });
    }
    inverse(a)?;
    frame_operator_inverse(m)?;
    let pushed = m.pushforward_linear(a)?;
    Ok((redundancy_rank(m, None), redundancy_rank(&pushed, None)))
}

/// Number of distinct atoms after merging within [`COALESCE_TOL`].
pub fn distinct_atoms(m: &DiscreteMeasure) -> usize {
    m.coalesce(COALESCE_TOL).0.len()
}
