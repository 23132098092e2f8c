use itertools::Itertools;

use super::{Coupling, TransportResult};
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::numerics::{dist_sq, Matrix};

/// Largest atom count accepted by [`w2_bruteforce`].
pub const BRUTEFORCE_MAX_ATOMS: usize = 7;

/// W₂ between two uniform N-atom measures by enumerating all N! permutation plans.
///
/// The permutation plans are the extreme points of the uniform transportation
/// polytope (Birkhoff), so the minimum over them is the exact optimum. This is
/// an oracle for [`super::solve_w2`] and shares no code with it.
pub fn w2_bruteforce(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<TransportResult> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimMismatch { expected: mu.dim(), found: nu.dim() });
    }
    let n = mu.len();
    if nu.len() != n {
        return Err(Error::Unsupported(format!("atom counts differ ({n} vs {})", nu.len())));
    }
    if n > BRUTEFORCE_MAX_ATOMS {
        return Err(Error::Unsupported(format!("{n} atoms exceeds {BRUTEFORCE_MAX_ATOMS}")));
    }
    let w = 1.0 / n as f64;
    let uniform = |m: &DiscreteMeasure| m.weights().iter().all(|x| (x - w).abs() <= 1e-12);
    if !uniform(mu) || !uniform(nu) {
        return Err(Error::Unsupported("weights are not uniform".into()));
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in (0..n).permutations(n) {
        let c: f64 = perm.iter().enumerate().map(|(i, &j)| dist_sq(mu.atom(i), nu.atom(j))).sum::<f64>() * w;
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, perm));
        }
    }
    let (cost, perm) = best.expect("at least one permutation");
    let mut plan = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        plan[(i, j)] = mu.weight(i);
    }
    // column sums equal nu's weights up to the uniformity tolerance
    let target = nu.clone();
    let plan = Coupling::new(mu.clone(), target, plan)?;
    Ok(TransportResult { cost, w2: cost.sqrt(), plan, slackness_residual: 0.0 })
}
