//! Perturbations of frames and their duals, and the sampled approximate-dual pipeline.
//!
//! Every construction reports which hypotheses hold. A claim is only checked
//! (and reported as [`Assertion::Holds`] or [`Assertion::Violated`]) when its
//! hypotheses are met; otherwise the report says [`Assertion::NotApplicable`].

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::duals::{certify, pushforward_family, Classification, DualCertificate};
use crate::error::{Error, Result};
use crate::frames::{canonical_dual, frame_bounds, frame_operator_inverse};
use crate::measures::{DiscreteMeasure, COALESCE_TOL};
use crate::numerics::{dist_sq, eig_sym, inverse};
use crate::transport::{glue, solve_w2, Coupling, MARGINAL_TOL};

/// Slack allowed when checking an inequality that a hypothesis guarantees.
pub const CLAIM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assertion {
    /// Hypotheses hold and the claimed inequality was verified.
    Holds,
    /// Hypotheses hold but the claimed inequality failed.
    Violated,
    /// No hypothesis held, so nothing was claimed.
    NotApplicable,
}

impl Assertion {
    fn check(applies: bool, ok: bool) -> Self {
        match (applies, ok) {
            (false, _) => Assertion::NotApplicable,
            (true, true) => Assertion::Holds,
            (true, false) => Assertion::Violated,
        }
    }
}

/// Hypotheses of the perturbation statements; `None` when not evaluated.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HypothesisFlags {
    /// λ < A.
    pub quadratic_closeness: Option<bool>,
    /// A · C ≤ 1.
    pub ac_le_one: Option<bool>,
    /// M₂(ν) · C_direction < 1.
    pub m2c_lt_one: Option<bool>,
    /// Σ π ‖x − M⁻¹y‖² · C_ν < 1.
    pub inv_closeness: Option<bool>,
    /// Quantities come from a held-out sample, not the target measure itself.
    pub estimated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    /// Σ π ‖x − y‖² of the coupling between η and μ (W₂² in the pipeline).
    pub lambda: f64,
    /// Lower frame bound A of the reference measure.
    pub base_lower_bound: f64,
    /// (√A − √λ)² when λ < A.
    pub lower_bound_estimate: Option<f64>,
    /// Measured λ_min(S_η).
    pub eta_lower_bound: f64,
    /// Upper frame bound C of the dual.
    pub dual_upper_bound: Option<f64>,
    /// λ_max of Σ π (x − y)(x − y)ᵗ.
    pub direction_constant: Option<f64>,
    /// Σ π ‖x − M⁻¹y‖².
    pub inverse_cost: Option<f64>,
    /// Smallest proven upper bound on the certificate deviation.
    pub deviation_bound: Option<f64>,
    pub flags: HypothesisFlags,
    pub certificate: Option<DualCertificate>,
    pub assertion: Assertion,
}

fn check_coupling(c: &Coupling, source: &DiscreteMeasure, target: &DiscreteMeasure) -> Result<()> {
    if c.dim() != source.dim() {
        return Err(Error::DimMismatch { expected: source.dim(), found: c.dim() });
    }
    if !c.source().approx_eq(source, MARGINAL_TOL) || !c.target().approx_eq(target, MARGINAL_TOL) {
        return Err(Error::MarginalMismatch("coupling marginals differ from (η, μ)".into()));
    }
    Ok(())
}

fn min_eig(m: &DiscreteMeasure) -> f64 {
    frame_bounds(m).0
}

/// Lower frame bound of η from a coupling π ∈ Γ(η, μ) of cost λ < A_μ.
///
/// Without `c` the optimal W₂ plan is used. When λ < A the claim
/// λ_min(S_η) ≥ (√A − √λ)² is checked.
pub fn perturbed_frame_bound(
    mu: &DiscreteMeasure,
    eta: &DiscreteMeasure,
    c: Option<&Coupling>,
) -> Result<PerturbationReport> {
    if mu.dim() != eta.dim() {
        return Err(Error::DimMismatch { expected: mu.dim(), found: eta.dim() });
    }
    frame_operator_inverse(mu)?;
    let lambda = match c {
        Some(c) => {
            check_coupling(c, eta, mu)?;
            c.transport_cost()
        }
        None => solve_w2(eta, mu)?.cost,
    };
    let a = min_eig(mu);
    let eta_lower = min_eig(eta);
    let close = lambda < a;
    let estimate = close.then(|| (a.sqrt() - lambda.sqrt()).powi(2));
    let ok = estimate.is_some_and(|b| eta_lower >= b - CLAIM_SLACK);
    Ok(PerturbationReport {
        lambda,
        base_lower_bound: a,
        lower_bound_estimate: estimate,
        eta_lower_bound: eta_lower,
        dual_upper_bound: None,
        direction_constant: None,
        inverse_cost: None,
        deviation_bound: None,
        flags: HypothesisFlags { quadratic_closeness: Some(close), ..Default::default() },
        certificate: None,
        assertion: Assertion::check(close, ok),
    })
}

/// Glues π ∈ Γ(η, μ) with an exact dual coupling γ ∈ Γ(μ, ν) and certifies ν as a dual of η.
///
/// With A = λ_min(S_μ) and C = λ_max(S_ν), the glued deviation is at most
/// √(λC); under λ < A and AC ≤ 1 this is below √(AC) ≤ 1.
pub fn perturbed_approx_dual(
    mu: &DiscreteMeasure,
    dual: &Coupling,
    eta: &DiscreteMeasure,
    c: &Coupling,
    tol: f64,
) -> Result<PerturbationReport> {
    if !dual.source().approx_eq(mu, MARGINAL_TOL) {
        return Err(Error::MarginalMismatch("dual coupling does not start at μ".into()));
    }
    let base = certify(dual, tol);
    if base.classification != Classification::Exact {
        return Err(Error::NotExactDual { deviation: base.deviation });
    }
    check_coupling(c, eta, mu)?;
    let glued = glue(c, dual)?;
    let cert = certify(&glued, tol);

    let lambda = c.transport_cost();
    let a = min_eig(mu);
    let (_, cap) = frame_bounds(dual.target());
    let close = lambda < a;
    // the canonical dual sits exactly on AC = 1
    let ac = a * cap <= 1.0 + CLAIM_SLACK;
    let bound = (lambda * cap).sqrt();
    let ok = cert.deviation <= bound + CLAIM_SLACK && cert.deviation < (a * cap).sqrt() + CLAIM_SLACK;
    Ok(PerturbationReport {
        lambda,
        base_lower_bound: a,
        lower_bound_estimate: close.then(|| (a.sqrt() - lambda.sqrt()).powi(2)),
        eta_lower_bound: min_eig(eta),
        dual_upper_bound: Some(cap),
        direction_constant: None,
        inverse_cost: None,
        deviation_bound: Some(bound),
        flags: HypothesisFlags { quadratic_closeness: Some(close), ac_le_one: Some(ac), ..Default::default() },
        assertion: Assertion::check(close && ac, ok),
        certificate: Some(cert),
    })
}

/// The directional and inverse-displacement variants of [`perturbed_approx_dual`].
///
/// The directional hypothesis M₂(ν)·C_direction < 1 needs an exact base pair;
/// the inverse-displacement hypothesis Σ π‖x − M⁻¹y‖² · λ_max(S_ν) < 1 only
/// needs the base mixed operator M to be invertible. Whenever one holds the
/// glued deviation must be below 1.
pub fn variant_certificates(
    mu: &DiscreteMeasure,
    base: &Coupling,
    eta: &DiscreteMeasure,
    c: &Coupling,
    tol: f64,
) -> Result<PerturbationReport> {
    if !base.source().approx_eq(mu, MARGINAL_TOL) {
        return Err(Error::MarginalMismatch("base coupling does not start at μ".into()));
    }
    check_coupling(c, eta, mu)?;
    let base_cert = certify(base, tol);
    let m_inv = inverse(&base_cert.mixed_operator).map_err(|_| Error::SingularMixedOperator)?;
    let glued = glue(c, base)?;
    let cert = certify(&glued, tol);

    let nu = base.target();
    let (_, cap) = frame_bounds(nu);
    let m2 = nu.second_moment();

    let mut bounds = Vec::new();
    let (direction, m2c) = if base_cert.classification == Classification::Exact {
        let cd = eig_sym(&c.displacement_moment(None))?.max().max(0.0);
        let holds = m2 * cd < 1.0;
        bounds.push(((m2 * cd).sqrt(), holds));
        (Some(cd), Some(holds))
    } else {
        (None, None)
    };
    let inv_cost = c.displacement_moment(Some(&m_inv)).trace();
    let inv_close = inv_cost * cap < 1.0;
    bounds.push(((inv_cost * cap).sqrt(), inv_close));

    let applies = bounds.iter().any(|(_, h)| *h);
    let ok = cert.deviation < 1.0 && bounds.iter().all(|(b, _)| cert.deviation <= b + CLAIM_SLACK);
    let best = bounds.iter().map(|(b, _)| *b).fold(f64::INFINITY, f64::min);
    let lambda = c.transport_cost();
    let a = min_eig(mu);
    Ok(PerturbationReport {
        lambda,
        base_lower_bound: a,
        lower_bound_estimate: (lambda < a).then(|| (a.sqrt() - lambda.sqrt()).powi(2)),
        eta_lower_bound: min_eig(eta),
        dual_upper_bound: Some(cap),
        direction_constant: direction,
        inverse_cost: Some(inv_cost),
        deviation_bound: Some(best),
        flags: HypothesisFlags {
            quadratic_closeness: Some(lambda < a),
            m2c_lt_one: m2c,
            inv_closeness: Some(inv_close),
            ..Default::default()
        },
        assertion: Assertion::check(applies, ok),
        certificate: Some(cert),
    })
}

/// ξ = (MᵗS_η⁻¹)#η, which pairs with η through the same mixed operator M as the base pair.
pub fn matched_mixed_dual(
    mu: &DiscreteMeasure,
    base: &Coupling,
    eta: &DiscreteMeasure,
    c: &Coupling,
    tol: f64,
) -> Result<(DiscreteMeasure, Coupling)> {
    if !base.source().approx_eq(mu, MARGINAL_TOL) {
        return Err(Error::MarginalMismatch("base coupling does not start at μ".into()));
    }
    check_coupling(c, eta, mu)?;
    let cert = certify(base, tol);
    if !cert.classification.is_approximate() {
        return Err(Error::NotApproximate { deviation: cert.deviation });
    }
    match frame_operator_inverse(eta) {
        Ok(_) => {}
        Err(Error::NotAFrame { lower_bound }) => return Err(Error::EtaNotFrame { lower_bound }),
        Err(e) => return Err(e),
    }
    pushforward_family(eta, &cert.mixed_operator, None)
}

/// Draws i.i.d. points of a distribution on ℝⁿ.
pub trait Sampler {
    fn dim(&self) -> usize;
    fn draw(&self, rng: &mut dyn RngCore) -> Vec<f64>;
}

/// Isotropic Gaussian N(mean, σ² Id).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianSampler {
    pub mean: Vec<f64>,
    pub std_dev: f64,
}

impl Sampler for GaussianSampler {
    fn dim(&self) -> usize {
        self.mean.len()
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        self.mean
            .iter()
            .map(|m| {
                let z: f64 = StandardNormal.sample(rng);
                m + self.std_dev * z
            })
            .collect()
    }
}

pub enum EtaSource<'a> {
    Discrete(&'a DiscreteMeasure),
    Sampler(&'a dyn Sampler),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Number N of atoms of μ̂.
    pub samples: usize,
    pub seed: u64,
    /// A_N; defaults to A_η / 4.
    pub a_n: Option<f64>,
    /// Held-out draws in sampler mode; defaults to 10 N.
    pub holdout: Option<usize>,
    pub tol: f64,
}

impl PipelineConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, a_n: None, holdout: None, tol: crate::duals::EXACT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub mu_hat: DiscreteMeasure,
    pub nu_hat: DiscreteMeasure,
    /// W₂(η, μ̂), exact for discrete η and against the held-out sample otherwise.
    pub w2: f64,
    /// Lower frame bound of η (or of the held-out sample).
    pub eta_lower_bound: f64,
    pub a_n: f64,
    /// C_N = λ_max(S_ν̂) = 1 / λ_min(S_μ̂).
    pub c_n: f64,
    pub report: PerturbationReport,
}

/// Builds μ̂, its canonical dual ν̂, and certifies ν̂ as an approximate dual of η.
///
/// For a discrete η, μ̂ is uniform on N atoms of η picked by
/// [`greedy_subsample`]. For a sampler, μ̂ is uniform on N draws and η is
/// replaced by a held-out sample, and the flags are marked estimated. The
/// hypotheses are W₂(η, μ̂) < √A_N and A_N · C_N ≤ 1; when both hold the glued
/// certificate must have deviation below 1.
pub fn discrete_dual_pipeline(eta: EtaSource<'_>, config: &PipelineConfig) -> Result<PipelineOutput> {
    let n = match &eta {
        EtaSource::Discrete(m) => m.dim(),
        EtaSource::Sampler(s) => s.dim(),
    };
    if config.samples < n {
        return Err(Error::TooFewSamples { samples: config.samples, dim: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (target, mu_hat, estimated) = match eta {
        EtaSource::Discrete(m) => {
            let m = m.coalesced();
            let mu_hat = greedy_subsample(&m, config.samples, &mut rng)?;
            (m, mu_hat, false)
        }
        EtaSource::Sampler(s) => {
            let draws: Vec<Vec<f64>> = (0..config.samples).map(|_| s.draw(&mut rng)).collect();
            let holdout = config.holdout.unwrap_or(10 * config.samples).max(1);
            let held: Vec<Vec<f64>> = (0..holdout).map(|_| s.draw(&mut rng)).collect();
            (DiscreteMeasure::uniform(held)?, DiscreteMeasure::uniform(draws)?, true)
        }
    };

    let (a_eta, _) = frame_bounds(&target);
    if let Err(Error::NotAFrame { lower_bound }) = frame_operator_inverse(&target) {
        return Err(Error::EtaNotFrame { lower_bound });
    }
    let (nu_hat, dual) = canonical_dual(&mu_hat)?;
    let a_n = config.a_n.unwrap_or(a_eta / 4.0);
    let c_n = frame_bounds(&nu_hat).1;

    let ot = solve_w2(&target, &mu_hat)?;
    let glued = glue(&ot.plan, &dual)?;
    let cert = certify(&glued, config.tol);

    let close = ot.w2 < a_n.sqrt();
    let ac = a_n * c_n <= 1.0 + CLAIM_SLACK;
    let bound = (ot.cost * c_n).sqrt();
    let ok = cert.deviation < 1.0 && cert.deviation <= bound + CLAIM_SLACK;
    let report = PerturbationReport {
        lambda: ot.cost,
        base_lower_bound: a_n,
        lower_bound_estimate: close.then(|| (a_n.sqrt() - ot.w2).powi(2)),
        eta_lower_bound: a_eta,
        dual_upper_bound: Some(c_n),
        direction_constant: None,
        inverse_cost: None,
        deviation_bound: Some(bound),
        flags: HypothesisFlags {
            quadratic_closeness: Some(close),
            ac_le_one: Some(ac),
            estimated,
            ..Default::default()
        },
        assertion: Assertion::check(close && ac, ok),
        certificate: Some(cert),
    };
    Ok(PipelineOutput { mu_hat, nu_hat, w2: ot.w2, eta_lower_bound: a_eta, a_n, c_n, report })
}

/// Uniform measure on `count` atoms of `eta` with small W₂ to `eta`.
///
/// Farthest-point seeding from a random first atom, then local swaps: an
/// atom of the subsample is exchanged with an η atom it receives mass from
/// whenever that strictly lowers the exact W₂. Deterministic given the rng.
pub fn greedy_subsample(eta: &DiscreteMeasure, count: usize, rng: &mut dyn RngCore) -> Result<DiscreteMeasure> {
    let total = eta.len();
    if count == 0 || count > total {
        return Err(Error::InvalidArgument(format!("cannot pick {count} of {total} atoms")));
    }
    let first = rng.random_range(0..total);
    let mut chosen = vec![first];
    let mut in_set = vec![false; total];
    in_set[first] = true;
    let mut nearest: Vec<f64> = (0..total).map(|i| dist_sq(eta.atom(i), eta.atom(first))).collect();
    while chosen.len() < count {
        let mut best = None;
        for i in 0..total {
            if in_set[i] {
                continue;
            }
            if best.is_none_or(|b: usize| nearest[i] > nearest[b]) {
                best = Some(i);
            }
        }
        let j = best.expect("unused atom remains");
        chosen.push(j);
        in_set[j] = true;
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(dist_sq(eta.atom(i), eta.atom(j)));
        }
    }

    let build = |idx: &[usize]| DiscreteMeasure::uniform(idx.iter().map(|&i| eta.atom(i).to_vec()).collect());
    let mut current = build(&chosen)?;
    let mut ot = solve_w2(eta, &current)?;
    const MAX_PASSES: usize = 100;
    // Medoid moves priced on the current plan: each one lowers the cost of a
    // feasible plan for the new subsample, so the exact W₂ cannot increase.
    for _ in 0..MAX_PASSES {
        let mut moved = false;
        for slot in 0..count {
            let column: Vec<(usize, f64)> =
                (0..total).map(|i| (i, ot.plan.plan()[(i, slot)])).filter(|&(_, p)| p > 0.0).collect();
            let cost_at = |c: usize| column.iter().map(|&(i, p)| p * dist_sq(eta.atom(i), eta.atom(c))).sum::<f64>();
            let here = cost_at(chosen[slot]);
            let mut best = (chosen[slot], here);
            for &(cand, _) in &column {
                if in_set[cand] {
                    continue;
                }
                let c = cost_at(cand);
                if c < best.1 {
                    best = (cand, c);
                }
            }
            if best.1 < here - COALESCE_TOL * (1.0 + here) {
                in_set[chosen[slot]] = false;
                in_set[best.0] = true;
                chosen[slot] = best.0;
                moved = true;
            }
        }
        if !moved {
            break;
        }
        current = build(&chosen)?;
        ot = solve_w2(eta, &current)?;
    }
    for _ in 0..MAX_PASSES {
        let mut improved = false;
        for slot in 0..count {
            let candidates: Vec<usize> =
                (0..total).filter(|&i| !in_set[i] && ot.plan.plan()[(i, slot)] > 0.0).collect();
            for cand in candidates {
                let mut trial = chosen.clone();
                trial[slot] = cand;
                let m = build(&trial)?;
                let t = solve_w2(eta, &m)?;
                if t.cost < ot.cost - COALESCE_TOL * (1.0 + ot.cost) {
                    in_set[chosen[slot]] = false;
                    in_set[cand] = true;
                    chosen = trial;
                    current = m;
                    ot = t;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(current)
}

/// Convenience: the Gaussian-cloud sampler used by the CLI.
pub fn standard_sampler(mean: Vec<f64>, std_dev: f64) -> GaussianSampler {
    GaussianSampler { mean, std_dev }
}
