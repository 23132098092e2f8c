//! Named example measures and couplings, embedded from `fixtures/*.json`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::transport::Coupling;

/// Seed of the Gaussian cloud used by the sampling pipeline checks.
pub const CLOUD_SEED: u64 = 7;
/// Atom count of that cloud.
pub const CLOUD_SIZE: usize = 100;

const FILES: &[(&str, &str)] = &[
    ("delta0", include_str!("../fixtures/delta0.json")),
    ("delta1", include_str!("../fixtures/delta1.json")),
    ("mu1", include_str!("../fixtures/mu1.json")),
    ("mu2", include_str!("../fixtures/mu2.json")),
    ("eta", include_str!("../fixtures/eta.json")),
    ("nu_half", include_str!("../fixtures/nu_half.json")),
    ("mu_k1_vs_delta1", include_str!("../fixtures/mu_k1_vs_delta1.json")),
    ("delta1_x_eta", include_str!("../fixtures/delta1_x_eta.json")),
    ("four_vector_pair", include_str!("../fixtures/four_vector_pair.json")),
    ("zero_mean_product", include_str!("../fixtures/zero_mean_product.json")),
    ("neumann_scalar", include_str!("../fixtures/neumann_scalar.json")),
];

/// A pair of measures on the same space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurePair {
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    Measure(DiscreteMeasure),
    Pair(MeasurePair),
    Coupling(Coupling),
}

/// Names of all shipped fixtures, plus the generated `gaussian_cloud`.
pub fn names() -> Vec<&'static str> {
    let mut v: Vec<&str> = FILES.iter().map(|(n, _)| *n).collect();
    v.push("gaussian_cloud");
    v
}

/// Raw JSON text of a shipped fixture.
pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<Fixture> {
    if name == "gaussian_cloud" {
        return Ok(Fixture::Measure(gaussian_cloud(CLOUD_SIZE, CLOUD_SEED)));
    }
    let text = source(name).ok_or_else(|| Error::InvalidArgument(format!("unknown fixture '{name}'")))?;
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("fixture {name}: {e}")))?;
    let parse_err = |e: serde_json::Error| Error::InvalidArgument(format!("fixture {name}: {e}"));
    if value.get("plan").is_some() {
        Ok(Fixture::Coupling(serde_json::from_value(value).map_err(parse_err)?))
    } else if value.get("mu").is_some() {
        Ok(Fixture::Pair(serde_json::from_value(value).map_err(parse_err)?))
    } else {
        Ok(Fixture::Measure(serde_json::from_value(value).map_err(parse_err)?))
    }
}

pub fn measure(name: &str) -> Result<DiscreteMeasure> {
    match load(name)? {
        Fixture::Measure(m) => Ok(m),
        _ => Err(Error::InvalidArgument(format!("fixture '{name}' is not a measure"))),
    }
}

pub fn pair(name: &str) -> Result<MeasurePair> {
    match load(name)? {
        Fixture::Pair(p) => Ok(p),
        _ => Err(Error::InvalidArgument(format!("fixture '{name}' is not a measure pair"))),
    }
}

pub fn coupling(name: &str) -> Result<Coupling> {
    match load(name)? {
        Fixture::Coupling(c) => Ok(c),
        _ => Err(Error::InvalidArgument(format!("fixture '{name}' is not a coupling"))),
    }
}

/// μ_k = ½δ₁ + ½δ_{1 − 1/(k+1)} on ℝ.
pub fn mu_k(k: u32) -> DiscreteMeasure {
    let second = 1.0 - 1.0 / (k as f64 + 1.0);
    DiscreteMeasure::new(vec![vec![1.0], vec![second]], vec![0.5, 0.5]).expect("valid")
}

/// Uniform measure on `count` standard normal draws in ℝ², shifted by e₁.
pub fn gaussian_cloud(count: usize, seed: u64) -> DiscreteMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = (0..count)
        .map(|_| {
            let x: f64 = StandardNormal.sample(&mut rng);
            let y: f64 = StandardNormal.sample(&mut rng);
            vec![x + 1.0, y]
        })
        .collect();
    DiscreteMeasure::uniform(atoms).expect("nonempty cloud")
}
