//! Couplings between discrete measures, exact W₂, gluing and mixed frame operators.

mod brute;
mod frank_wolfe;
mod simplex;

use serde::{Deserialize, Serialize};

pub use brute::{w2_bruteforce, BRUTEFORCE_MAX_ATOMS};
pub use frank_wolfe::{optimize_mixed_operator, MixedOperatorFit, FW_DEFAULT_ITERS, FW_DEFAULT_TOL};
pub use simplex::{solve_transport, TransportSolution};

use crate::error::{Error, Result};
use crate::measures::{check_images, DiscreteMeasure, COALESCE_TOL};
use crate::numerics::{dist_sq, Matrix};

/// Row/column-sum tolerance for a valid plan.
pub const MARGINAL_TOL: f64 = 1e-10;

/// A transport plan between two discrete measures.
///
/// `plan[(i, j)]` is the mass moved from source atom i to target atom j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CouplingDoc")]
pub struct Coupling {
    source: DiscreteMeasure,
    target: DiscreteMeasure,
    plan: Matrix,
}

#[derive(Deserialize)]
struct CouplingDoc {
    source: DiscreteMeasure,
    target: DiscreteMeasure,
    plan: Matrix,
}

impl TryFrom<CouplingDoc> for Coupling {
    type Error = Error;
    fn try_from(doc: CouplingDoc) -> Result<Self> {
        Coupling::new(doc.source, doc.target, doc.plan)
    }
}

impl Coupling {
    /// Validates shape, nonnegativity and both marginals (within [`MARGINAL_TOL`]).
    pub fn new(source: DiscreteMeasure, target: DiscreteMeasure, plan: Matrix) -> Result<Self> {
        if source.dim() != target.dim() {
            return Err(Error::DimMismatch { expected: source.dim(), found: target.dim() });
        }
        if plan.rows() != source.len() || plan.cols() != target.len() {
            return Err(Error::InvalidPlan(format!(
                "plan is {}x{} but measures have {} and {} atoms",
                plan.rows(),
                plan.cols(),
                source.len(),
                target.len()
            )));
        }
        if let Some(v) = plan.as_slice().iter().find(|v| **v < 0.0) {
            return Err(Error::InvalidPlan(format!("negative mass {v}")));
        }
        for i in 0..plan.rows() {
            let r: f64 = plan.row(i).iter().sum();
            if (r - source.weight(i)).abs() > MARGINAL_TOL {
                return Err(Error::MarginalMismatch(format!(
                    "row {i} carries {r}, source weight is {}",
                    source.weight(i)
                )));
            }
        }
        for j in 0..plan.cols() {
            let c: f64 = (0..plan.rows()).map(|i| plan[(i, j)]).sum();
            if (c - target.weight(j)).abs() > MARGINAL_TOL {
                return Err(Error::MarginalMismatch(format!(
                    "column {j} carries {c}, target weight is {}",
                    target.weight(j)
                )));
            }
        }
        Ok(Self { source, target, plan })
    }

    /// Builds a coupling whose target may list coincident atoms; those are
    /// merged and their plan columns summed.
    pub(crate) fn with_raw_target(
        source: DiscreteMeasure,
        raw_target: &DiscreteMeasure,
        raw_plan: &Matrix,
    ) -> Result<Self> {
        let (target, index) = raw_target.coalesce(COALESCE_TOL);
        let mut plan = Matrix::zeros(source.len(), target.len());
        for i in 0..raw_plan.rows() {
            for (j, &k) in index.iter().enumerate() {
                plan[(i, k)] += raw_plan[(i, j)];
            }
        }
        Coupling::new(source, target, plan)
    }

    pub fn source(&self) -> &DiscreteMeasure {
        &self.source
    }

    pub fn target(&self) -> &DiscreteMeasure {
        &self.target
    }

    pub fn plan(&self) -> &Matrix {
        &self.plan
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// Product coupling μ ⊗ ν.
    pub fn product(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Self> {
        if mu.dim() != nu.dim() {
            return Err(Error::DimMismatch { expected: mu.dim(), found: nu.dim() });
        }
        let plan = Matrix::outer(mu.weights(), nu.weights());
        Coupling::new(mu.clone(), nu.clone(), plan)
    }

    /// Graph coupling (Id, T)#μ onto T#μ, with T given by its atom images.
    /// Atoms sharing an image collapse into one target atom.
    pub fn graph(mu: &DiscreteMeasure, images: &[Vec<f64>]) -> Result<Self> {
        check_images(mu, images)?;
        let raw_target = mu.pushforward_map(images)?;
        Coupling::with_raw_target(mu.clone(), &raw_target, &Matrix::diag(mu.weights()))
    }

    /// Graph coupling of a linear map x ↦ A x.
    pub fn linear_graph(mu: &DiscreteMeasure, a: &Matrix) -> Result<Self> {
        let images = mu.pushforward_linear(a)?.atoms().to_vec();
        Coupling::graph(mu, &images)
    }

    /// The diagonal self-coupling (Id, Id)#μ.
    pub fn diagonal(mu: &DiscreteMeasure) -> Result<Self> {
        Coupling::graph(mu, mu.atoms())
    }

    /// Swaps the roles of source and target.
    pub fn transpose(&self) -> Coupling {
        Coupling { source: self.target.clone(), target: self.source.clone(), plan: self.plan.transpose() }
    }

    /// (Id, L)#γ: pushes the target through the linear map `l`, keeping the plan.
    pub fn map_target(&self, l: &Matrix) -> Result<Coupling> {
        let raw = self.target.pushforward_linear(l)?;
        Coupling::with_raw_target(self.source.clone(), &raw, &self.plan)
    }

    /// Mixed frame operator Σᵢⱼ γᵢⱼ xᵢ yⱼᵗ.
    pub fn mixed_frame_operator(&self) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (i, x) in self.source.atoms().iter().enumerate() {
            // Σⱼ γᵢⱼ yⱼ first, then one outer product per source atom
            let mut ybar = vec![0.0; n];
            for (j, y) in self.target.atoms().iter().enumerate() {
                let g = self.plan[(i, j)];
                if g != 0.0 {
                    for (b, yk) in ybar.iter_mut().zip(y) {
                        *b += g * yk;
                    }
                }
            }
            for r in 0..n {
                for c in 0..n {
                    out[(r, c)] += x[r] * ybar[c];
                }
            }
        }
        out
    }

    /// Σᵢⱼ γᵢⱼ ‖xᵢ − yⱼ‖².
    pub fn transport_cost(&self) -> f64 {
        let mut total = 0.0;
        for (i, x) in self.source.atoms().iter().enumerate() {
            for (j, y) in self.target.atoms().iter().enumerate() {
                let g = self.plan[(i, j)];
                if g != 0.0 {
                    total += g * dist_sq(x, y);
                }
            }
        }
        total
    }

    /// Σᵢⱼ γᵢⱼ (xᵢ − L yⱼ)(xᵢ − L yⱼ)ᵗ; with `l = None` the plain displacement.
    pub fn displacement_moment(&self, l: Option<&Matrix>) -> Matrix {
        let n = self.dim();
        let mapped: Vec<Vec<f64>> = match l {
            Some(l) => self.target.atoms().iter().map(|y| l.apply(y)).collect(),
            None => self.target.atoms().to_vec(),
        };
        let mut out = Matrix::zeros(n, n);
        for (i, x) in self.source.atoms().iter().enumerate() {
            for (j, y) in mapped.iter().enumerate() {
                let g = self.plan[(i, j)];
                if g == 0.0 {
                    continue;
                }
                let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                for r in 0..n {
                    for c in 0..n {
                        out[(r, c)] += g * d[r] * d[c];
                    }
                }
            }
        }
        out
    }

    /// Checks the marginals again (useful after deserializing by hand).
    pub fn validate(&self) -> Result<()> {
        Coupling::new(self.source.clone(), self.target.clone(), self.plan.clone()).map(|_| ())
    }
}

/// Optimal cost, W₂ and plan for a pair of measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportResult {
    /// Σ γᵢⱼ‖xᵢ − yⱼ‖² at the optimum.
    pub cost: f64,
    pub w2: f64,
    pub plan: Coupling,
    /// Dual infeasibility plus complementary slackness violation at termination.
    pub slackness_residual: f64,
}

/// Exact W₂ by network simplex on the bipartite transportation problem.
pub fn solve_w2(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<TransportResult> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimMismatch { expected: mu.dim(), found: nu.dim() });
    }
    let mut cost = Matrix::zeros(mu.len(), nu.len());
    for (i, x) in mu.atoms().iter().enumerate() {
        for (j, y) in nu.atoms().iter().enumerate() {
            cost[(i, j)] = dist_sq(x, y);
        }
    }
    let sol = solve_transport(mu.weights(), nu.weights(), &cost);
    let plan = Coupling::new(mu.clone(), nu.clone(), sol.plan)?;
    let c = plan.transport_cost();
    Ok(TransportResult { cost: c, w2: c.max(0.0).sqrt(), plan, slackness_residual: sol.slackness_residual })
}

/// Glues γ₁₂ ∈ Γ(μ₁, μ₂) and γ₂₃ ∈ Γ(μ₂, μ₃) through μ₂ into a coupling of μ₁ and μ₃.
///
/// plan[i][k] = Σⱼ γ₁₂[i][j] γ₂₃[j][k] / m₂(j), where m₂(j) is the mass of
/// middle atom j; middle atoms without mass are skipped.
pub fn glue(c12: &Coupling, c23: &Coupling) -> Result<Coupling> {
    let mid_a = c12.target();
    let mid_b = c23.source();
    if !mid_a.approx_eq(mid_b, MARGINAL_TOL) {
        return Err(Error::MarginalMismatch("target of the first coupling differs from source of the second".into()));
    }
    let (m, k, l) = (c12.plan.rows(), c12.plan.cols(), c23.plan.cols());
    let mut plan = Matrix::zeros(m, l);
    for j in 0..k {
        let mass: f64 = c23.plan.row(j).iter().sum();
        if mass <= 0.0 {
            continue;
        }
        for i in 0..m {
            let a = c12.plan[(i, j)];
            if a == 0.0 {
                continue;
            }
            let f = a / mass;
            for t in 0..l {
                plan[(i, t)] += f * c23.plan[(j, t)];
            }
        }
    }
    Coupling::new(c12.source.clone(), c23.target.clone(), plan)
}

/// Convex combination w γ₁ + (1 − w) γ₂ of two couplings with a common source;
/// the target is the (coalesced) mixture of the two targets.
pub fn combine(c1: &Coupling, c2: &Coupling, w: f64) -> Result<Coupling> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::InvalidArgument(format!("mixing weight {w} outside [0, 1]")));
    }
    if !c1.source.approx_eq(&c2.source, MARGINAL_TOL) {
        return Err(Error::SourceMismatch);
    }
    let parts: Vec<(&Coupling, f64)> = [(c1, w), (c2, 1.0 - w)].into_iter().filter(|(_, s)| *s > 0.0).collect();
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for (c, s) in &parts {
        for (y, v) in c.target.iter() {
            atoms.push(y.to_vec());
            weights.push(s * v);
        }
    }
    let raw_target = DiscreteMeasure::with_dim(c1.dim(), atoms, weights)?;
    let mut plan = Matrix::zeros(c1.source.len(), raw_target.len());
    let mut offset = 0;
    for (c, s) in &parts {
        for i in 0..c.plan.rows() {
            for j in 0..c.plan.cols() {
                plan[(i, offset + j)] = s * c.plan[(i, j)];
            }
        }
        offset += c.plan.cols();
    }
    Coupling::with_raw_target(c1.source.clone(), &raw_target, &plan)
}
