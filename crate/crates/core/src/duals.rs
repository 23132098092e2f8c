//! Exact, approximate and pseudo duals: certification and constructions.
//!
//! Certificates always store the mixed operator M = Σ γᵢⱼ xᵢ yⱼᵗ of the
//! coupling as computed. The Neumann and rescue constructions are phrased in
//! terms of A = Mᵗ and transpose internally.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{frame_bounds, frame_operator, frame_operator_inverse};
use crate::measures::DiscreteMeasure;
use crate::numerics::{dot, inverse, norm_sq, spectral_norm, Matrix};
use crate::transport::{combine, optimize_mixed_operator, Coupling, MixedOperatorFit};

/// Default absolute tolerance on ‖M − Id‖ for an exact dual.
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Exact,
    Approximate,
    Pseudo,
    None,
}

impl Classification {
    /// Exact, approximate and pseudo duals all have an invertible mixed operator.
    pub fn is_dual(self) -> bool {
        self != Classification::None
    }

    /// At least approximate.
    pub fn is_approximate(self) -> bool {
        matches!(self, Classification::Exact | Classification::Approximate)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Exact => "exact",
            Classification::Approximate => "approximate",
            Classification::Pseudo => "pseudo",
            Classification::None => "none",
        };
        f.write_str(s)
    }
}

/// Which dual class a coupling witnesses, with the numbers behind the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCertificate {
    pub classification: Classification,
    /// ‖M − Id‖ in the operator 2-norm.
    pub deviation: f64,
    pub mixed_operator: Matrix,
    /// 1 / (B_μ ‖M⁻¹‖²); present when M is invertible.
    pub dual_lower_bound: Option<f64>,
    /// M₂(ν); present when M is invertible.
    pub dual_upper_bound: Option<f64>,
    pub tol: f64,
}

/// Classifies a coupling γ ∈ Γ(μ, ν) by the strictest class its mixed operator meets.
pub fn certify(c: &Coupling, tol: f64) -> DualCertificate {
    let m = c.mixed_frame_operator();
    let n = m.rows();
    let deviation = spectral_norm(&m.sub(&Matrix::identity(n)).expect("square"));
    let inv = inverse(&m).ok();
    let classification = if deviation <= tol {
        Classification::Exact
    } else if deviation < 1.0 {
        Classification::Approximate
    } else if inv.is_some() {
        Classification::Pseudo
    } else {
        Classification::None
    };
    let (dual_lower_bound, dual_upper_bound) = match &inv {
        Some(inv) => {
            let (_, b_mu) = frame_bounds(c.source());
            let k = spectral_norm(inv);
            (Some(1.0 / (b_mu * k * k)), Some(c.target().second_moment()))
        }
        None => (None, None),
    };
    DualCertificate { classification, deviation, mixed_operator: m, dual_lower_bound, dual_upper_bound, tol }
}

/// Searches Γ(μ, ν) for a coupling with mixed operator Id and certifies the best one found.
pub fn search_dual(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    iters: usize,
    fw_tol: f64,
    tol: f64,
) -> Result<(DualCertificate, MixedOperatorFit)> {
    let fit = optimize_mixed_operator(mu, nu, &Matrix::identity(mu.dim()), iters, fw_tol)?;
    Ok((certify(&fit.coupling, tol), fit))
}

/// T#μ with T(x) = AᵗS⁻¹x + h(x) − Σ_y w_y ⟨S⁻¹x, y⟩ h(y), and its graph coupling.
///
/// The mixed operator of the result is A for every h; A only has to be
/// invertible, so this covers exact (A = Id), approximate and pseudo duals.
pub fn pushforward_family(
    mu: &DiscreteMeasure,
    a: &Matrix,
    h: Option<&[Vec<f64>]>,
) -> Result<(DiscreteMeasure, Coupling)> {
    let n = mu.dim();
    if !a.is_square() || a.rows() != n {
        return Err(Error::DimMismatch { expected: n, found: a.rows() });
    }
    if inverse(a).is_err() {
        return Err(Error::SingularMixedOperator);
    }
    let (_, s_inv) = frame_operator_inverse(mu)?;
    let linear = a.transpose().matmul(&s_inv)?;
    let mut images: Vec<Vec<f64>> = mu.atoms().iter().map(|x| linear.apply(x)).collect();

    if let Some(h) = h {
        if h.len() != mu.len() {
            return Err(Error::MissingImage { index: h.len().min(mu.len()) });
        }
        for v in h {
            if v.len() != n {
                return Err(Error::DimMismatch { expected: n, found: v.len() });
            }
        }
        // H = Σ w_y y h(y)ᵗ, so the correction at x is Hᵗ S⁻¹ x
        let mut hm = Matrix::zeros(n, n);
        for ((y, w), hy) in mu.iter().zip(h) {
            for r in 0..n {
                for c in 0..n {
                    hm[(r, c)] += w * y[r] * hy[c];
                }
            }
        }
        let corr = hm.transpose().matmul(&s_inv)?;
        for ((img, x), hx) in images.iter_mut().zip(mu.atoms()).zip(h) {
            let k = corr.apply(x);
            for ((t, hv), kv) in img.iter_mut().zip(hx).zip(&k) {
                *t += hv - kv;
            }
        }
    }

    let coupling = Coupling::graph(mu, &images)?;
    Ok((coupling.target().clone(), coupling))
}

/// (AᵗS⁻¹)#μ with its graph coupling; requires ‖A − Id‖ < 1.
pub fn approx_dual_pushforward(mu: &DiscreteMeasure, a: &Matrix) -> Result<(DiscreteMeasure, Coupling)> {
    let n = mu.dim();
    if !a.is_square() || a.rows() != n {
        return Err(Error::DimMismatch { expected: n, found: a.rows() });
    }
    let deviation = spectral_norm(&a.sub(&Matrix::identity(n))?);
    if deviation >= 1.0 {
        return Err(Error::DeviationTooLarge { deviation });
    }
    pushforward_family(mu, a, None)
}

/// Exact dual T#μ with T(x) = S⁻¹x + h(x) − Σ_y w_y ⟨S⁻¹x, y⟩ h(y).
pub fn pushforward_dual(mu: &DiscreteMeasure, h: &[Vec<f64>]) -> Result<(DiscreteMeasure, Coupling)> {
    pushforward_family(mu, &Matrix::identity(mu.dim()), Some(h))
}

/// One partial sum of the Neumann scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannStep {
    pub order: usize,
    pub measure: DiscreteMeasure,
    pub coupling: Coupling,
    /// Mixed operator of the new coupling, (Id − (Id − A)^{N+1})ᵗ.
    pub mixed_operator: Matrix,
    /// ‖mixed operator − Id‖.
    pub deviation: f64,
    /// ‖Id − A‖^{N+1}.
    pub error_bound: f64,
}

/// ν_N = P_N#ν with P_N = Σ_{k=0}^{N} (Id − A)^k, A = Mᵗ, and γ̃_N = (Id, P_N)#γ.
pub fn neumann_approx_dual(c: &Coupling, order: usize) -> Result<NeumannStep> {
    Ok(neumann_sequence(c, order)?.pop().expect("nonempty"))
}

/// All partial sums ν_0, …, ν_N.
pub fn neumann_sequence(c: &Coupling, order: usize) -> Result<Vec<NeumannStep>> {
    let m = c.mixed_frame_operator();
    let n = m.rows();
    let id = Matrix::identity(n);
    let a = m.transpose();
    let e = id.sub(&a)?;
    let q = spectral_norm(&e);
    if q >= 1.0 {
        return Err(Error::NotApproximate { deviation: q });
    }
    let mut steps = Vec::with_capacity(order + 1);
    let mut power = id.clone();
    let mut partial = Matrix::zeros(n, n);
    for k in 0..=order {
        partial = partial.add(&power)?;
        let coupling = c.map_target(&partial)?;
        let mixed = coupling.mixed_frame_operator();
        let deviation = spectral_norm(&mixed.sub(&id)?);
        steps.push(NeumannStep {
            order: k,
            measure: coupling.target().clone(),
            coupling,
            mixed_operator: mixed,
            deviation,
            error_bound: q.powi(k as i32 + 1),
        });
        power = power.matmul(&e)?;
    }
    Ok(steps)
}

/// Pushes ν forward by (Mᵗ)⁻¹; the resulting coupling has mixed operator Id.
pub fn rescue_exact_dual(c: &Coupling) -> Result<(DiscreteMeasure, Coupling)> {
    let m = c.mixed_frame_operator();
    let inv = inverse(&m.transpose()).map_err(|_| Error::SingularMixedOperator)?;
    let coupling = c.map_target(&inv)?;
    Ok((coupling.target().clone(), coupling))
}

/// Both sides of ∫|⟨M⁻¹x, f⟩|²dμ · ∫|⟨y, f⟩|²dν ≥ ‖f‖⁴.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uncertainty {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn uncertainty_product(c: &Coupling, f: &[f64]) -> Result<Uncertainty> {
    let n = c.dim();
    if f.len() != n {
        return Err(Error::DimMismatch { expected: n, found: f.len() });
    }
    let m = c.mixed_frame_operator();
    let inv = inverse(&m).map_err(|_| Error::SingularMixedOperator)?;
    // ⟨M⁻¹x, f⟩ = ⟨x, M⁻ᵗf⟩
    let g = inv.transpose().apply(f);
    let s_mu = frame_operator(c.source());
    let s_nu = frame_operator(c.target());
    let lhs = dot(&g, &s_mu.apply(&g)) * dot(f, &s_nu.apply(f));
    let r = norm_sq(f);
    Ok(Uncertainty { lhs, rhs: r * r })
}

/// Lower-bound inequalities between the two marginals of a dual pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInequalities {
    pub mu_lower: f64,
    pub mu_upper: f64,
    pub nu_lower: f64,
    pub nu_upper: f64,
    /// ‖M⁻¹‖.
    pub inverse_norm: f64,
    /// 1 / (B_μ ‖M⁻¹‖²).
    pub nu_lower_guarantee: f64,
    /// 1 / (B_ν ‖M⁻¹‖²).
    pub mu_lower_guarantee: f64,
    /// A_ν − guarantee.
    pub nu_slack: f64,
    /// A_μ − guarantee.
    pub mu_slack: f64,
    /// Both slacks vanish (within 1e−8 relative to the guarantee).
    pub equality: bool,
}

pub fn bound_inequalities(c: &Coupling) -> Result<BoundInequalities> {
    let m = c.mixed_frame_operator();
    let inv = inverse(&m).map_err(|_| Error::SingularMixedOperator)?;
    frame_operator_inverse(c.source())?;
    frame_operator_inverse(c.target())?;
    let (mu_lower, mu_upper) = frame_bounds(c.source());
    let (nu_lower, nu_upper) = frame_bounds(c.target());
    let k = spectral_norm(&inv);
    let nu_lower_guarantee = 1.0 / (mu_upper * k * k);
    let mu_lower_guarantee = 1.0 / (nu_upper * k * k);
    let nu_slack = nu_lower - nu_lower_guarantee;
    let mu_slack = mu_lower - mu_lower_guarantee;
    let equality =
        nu_slack.abs() <= 1e-8 * nu_lower_guarantee.max(1.0) && mu_slack.abs() <= 1e-8 * mu_lower_guarantee.max(1.0);
    Ok(BoundInequalities {
        mu_lower,
        mu_upper,
        nu_lower,
        nu_upper,
        inverse_norm: k,
        nu_lower_guarantee,
        mu_lower_guarantee,
        nu_slack,
        mu_slack,
        equality,
    })
}

/// Certificate for w γ₁ + (1 − w) γ₂ into w ν₁ + (1 − w) ν₂; both inputs must be approximate.
pub fn convex_combination_certificate(
    c1: &Coupling,
    c2: &Coupling,
    w: f64,
    tol: f64,
) -> Result<(DualCertificate, Coupling)> {
    let combined = combine(c1, c2, w)?;
    for c in [c1, c2] {
        let cert = certify(c, tol);
        if !cert.classification.is_approximate() {
            return Err(Error::NotApproximate { deviation: cert.deviation });
        }
    }
    Ok((certify(&combined, tol), combined))
}
