use serde::{Deserialize, Serialize};

use super::{simplex::solve_transport, Coupling};
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::numerics::Matrix;

pub const FW_DEFAULT_ITERS: usize = 10_000;
pub const FW_DEFAULT_TOL: f64 = 1e-8;

/// Outcome of a Frank–Wolfe search for a coupling with a prescribed mixed operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedOperatorFit {
    pub coupling: Coupling,
    /// ‖Σ γᵢⱼ xᵢ yⱼᵗ − target‖_F at the returned plan.
    pub residual: f64,
    /// Last Frank–Wolfe duality gap; bounds f(γ) − min f from above.
    pub duality_gap: f64,
    pub iterations: usize,
    /// Residual before each iteration (nonincreasing).
    pub history: Vec<f64>,
}

/// Minimizes f(γ) = ‖Σ γᵢⱼ xᵢ yⱼᵗ − target‖_F² over Γ(μ, ν).
///
/// Starts at μ ⊗ ν. The linear minimization step is a transportation problem
/// with cost ∇f, solved by the network simplex; the step length is the exact
/// minimizer of the quadratic along the segment. Stops once the duality gap
/// drops to `tol` or after `iters` iterations. f is convex, so the gap
/// certifies global optimality.
pub fn optimize_mixed_operator(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    target: &Matrix,
    iters: usize,
    tol: f64,
) -> Result<MixedOperatorFit> {
    let n = mu.dim();
    if nu.dim() != n {
        return Err(Error::DimMismatch { expected: n, found: nu.dim() });
    }
    if !target.is_square() || target.rows() != n {
        return Err(Error::DimMismatch { expected: n, found: target.rows() });
    }
    let x = Matrix::from_rows(mu.atoms().to_vec())?;
    let y = Matrix::from_rows(nu.atoms().to_vec())?;
    let xt = x.transpose();
    let yt = y.transpose();
    let mixed = |plan: &Matrix| xt.matmul(&plan.matmul(&y).expect("shape")).expect("shape");

    let mut plan = Matrix::outer(mu.weights(), nu.weights());
    let mut current = mixed(&plan);
    let mut history = Vec::new();
    let mut gap = f64::INFINITY;
    let mut iterations = 0;

    while iterations < iters {
        let r = current.sub(target)?;
        let f = r.frobenius_dot(&r);
        history.push(f.sqrt());
        let grad = x.matmul(&r)?.matmul(&yt)?.scale(2.0);
        let vertex = solve_transport(mu.weights(), nu.weights(), &grad).plan;
        gap = grad.frobenius_dot(&plan.sub(&vertex)?);
        if gap <= tol {
            break;
        }
        iterations += 1;
        let d = mixed(&vertex).sub(&current)?;
        let denom = d.frobenius_dot(&d);
        if denom == 0.0 {
            break;
        }
        let step = (-r.frobenius_dot(&d) / denom).clamp(0.0, 1.0);
        if step == 0.0 {
            break;
        }
        plan = plan.add(&vertex.sub(&plan)?.scale(step))?;
        current = current.add(&d.scale(step))?;
    }

    // recompute from the plan to drop accumulated drift
    let coupling = Coupling::new(mu.clone(), nu.clone(), clamp_nonnegative(plan))?;
    let residual = coupling.mixed_frame_operator().sub(target)?.frobenius_norm();
    Ok(MixedOperatorFit { coupling, residual, duality_gap: gap.max(0.0), iterations, history })
}

fn clamp_nonnegative(mut plan: Matrix) -> Matrix {
    for i in 0..plan.rows() {
        for j in 0..plan.cols() {
            if plan[(i, j)] < 0.0 {
                plan[(i, j)] = 0.0;
            }
        }
    }
    plan
}
