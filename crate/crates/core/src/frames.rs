//! Frame operators, optimal frame bounds and the canonical dual.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::numerics::{dot, eig_sym, inverse, Matrix};
use crate::transport::Coupling;

/// λ_min must exceed this multiple of max(1, λ_max) for a frame.
pub const FRAME_RTOL: f64 = 1e-10;
/// Default relative tolerance on (B − A)/B for tightness.
pub const TIGHT_RTOL: f64 = 1e-9;

/// Frame operator and optimal bounds of a measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub frame_operator: Matrix,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub second_moment: f64,
}

/// S = Σ wᵢ xᵢ xᵢᵗ.
pub fn frame_operator(m: &DiscreteMeasure) -> Matrix {
    let n = m.dim();
    let mut s = Matrix::zeros(n, n);
    for (x, w) in m.iter() {
        for r in 0..n {
            let wx = w * x[r];
            for c in r..n {
                s[(r, c)] += wx * x[c];
            }
        }
    }
    for r in 0..n {
        for c in 0..r {
            s[(r, c)] = s[(c, r)];
        }
    }
    s
}

/// Extreme eigenvalues (λ_min, λ_max) of the frame operator.
pub fn frame_bounds(m: &DiscreteMeasure) -> (f64, f64) {
    let spectrum = eig_sym(&frame_operator(m)).expect("frame operator is symmetric");
    (spectrum.min(), spectrum.max())
}

fn is_frame_bound(lower: f64, upper: f64) -> bool {
    lower > FRAME_RTOL * upper.max(1.0)
}

/// Computes S, its extreme eigenvalues and the classification flags.
///
/// `tol` is the relative tightness tolerance on (B − A)/B; the Parseval flag
/// additionally needs |B − 1| ≤ tol.
pub fn analyze(m: &DiscreteMeasure, tol: f64) -> FrameReport {
    let s = frame_operator(m);
    let spectrum = eig_sym(&s).expect("frame operator is symmetric");
    let (lower, upper) = (spectrum.min(), spectrum.max());
    let is_frame = is_frame_bound(lower, upper);
    let is_tight = is_frame && (upper - lower) <= tol * upper;
    let is_parseval = is_tight && (upper - 1.0).abs() <= tol && (lower - 1.0).abs() <= tol;
    FrameReport {
        frame_operator: s,
        lower_bound: lower,
        upper_bound: upper,
        is_frame,
        is_tight,
        is_parseval,
        second_moment: m.second_moment(),
    }
}

/// Returns S and S⁻¹, or `NotAFrame` with the measured λ_min.
pub(crate) fn frame_operator_inverse(m: &DiscreteMeasure) -> Result<(Matrix, Matrix)> {
    let s = frame_operator(m);
    let spectrum = eig_sym(&s)?;
    if !is_frame_bound(spectrum.min(), spectrum.max()) {
        return Err(Error::NotAFrame { lower_bound: spectrum.min() });
    }
    let inv = inverse(&s)?;
    Ok((s, inv))
}

/// Canonical dual S⁻¹#μ together with the graph coupling (Id × S⁻¹)#μ.
pub fn canonical_dual(m: &DiscreteMeasure) -> Result<(DiscreteMeasure, Coupling)> {
    let (_, s_inv) = frame_operator_inverse(m)?;
    let coupling = Coupling::linear_graph(m, &s_inv)?;
    Ok((coupling.target().clone(), coupling))
}

/// Reproducing kernel K(x, y) = xᵗ S⁻¹ y of the range of the analysis operator.
pub fn rkhs_kernel(m: &DiscreteMeasure, x: &[f64], y: &[f64]) -> Result<f64> {
    check_len(m, x)?;
    check_len(m, y)?;
    let (_, s_inv) = frame_operator_inverse(m)?;
    Ok(dot(x, &s_inv.apply(y)))
}

/// |Σᵢ wᵢ ⟨u, xᵢ⟩ K(z, xᵢ) − ⟨u, z⟩|: the reproducing property for f = ⟨u, ·⟩.
pub fn reproducing_check(m: &DiscreteMeasure, u: &[f64], z: &[f64]) -> Result<f64> {
    check_len(m, u)?;
    check_len(m, z)?;
    let (_, s_inv) = frame_operator_inverse(m)?;
    let kz = s_inv.apply(z);
    let sum: f64 = m.iter().map(|(x, w)| w * dot(u, x) * dot(&kz, x)).sum();
    Ok((sum - dot(u, z)).abs())
}

fn check_len(m: &DiscreteMeasure, v: &[f64]) -> Result<()> {
    if v.len() != m.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), found: v.len() });
    }
    Ok(())
}
