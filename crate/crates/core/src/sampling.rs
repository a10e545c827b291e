//! Random rational scenarios for property tests and oracle sweeps.

use rand::Rng;

use crate::interval_set::IntervalSet;
use crate::oracle::{discretize, suggest_density, DiscretizedScenario};
use crate::scenario::Scenario;
use crate::Rational;

#[derive(Clone, Debug)]
pub struct SamplingConfig {
    /// Endpoints are multiples of `1/q` with `q ≤ max_denominator`; lengths
    /// likewise.
    pub max_denominator: i64,
    /// Lengths are drawn from `(0, max_length]`.
    pub max_length: i64,
    pub max_pieces: usize,
    pub empty_probability: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            max_denominator: 8,
            max_length: 2,
            max_pieces: 2,
            empty_probability: 0.15,
        }
    }
}

fn random_support<R: Rng + ?Sized>(rng: &mut R, q: i64, cfg: &SamplingConfig) -> IntervalSet {
    if rng.random_bool(cfg.empty_probability) {
        return IntervalSet::empty();
    }
    let pieces = rng.random_range(1..=cfg.max_pieces);
    let raw: Vec<_> = (0..pieces)
        .map(|_| {
            let a = rng.random_range(-q..q);
            let b = rng.random_range(a + 1..=q);
            (Rational::new(a, q), Rational::new(b, q))
        })
        .collect();
    IntervalSet::normalize(raw).expect("endpoints lie in [-1, 1]")
}

fn random_length<R: Rng + ?Sized>(rng: &mut R, cfg: &SamplingConfig) -> Rational {
    let q = rng.random_range(1..=cfg.max_denominator);
    Rational::new(rng.random_range(1..=cfg.max_length * q), q)
}

/// Every support shares one endpoint denominator; each length has its own.
pub fn random_scenario<R: Rng + ?Sized>(rng: &mut R, cfg: &SamplingConfig) -> Scenario {
    let q = rng.random_range(1..=cfg.max_denominator);
    let mut s = Scenario::with_lengths(
        random_length(rng, cfg),
        random_length(rng, cfg),
        random_length(rng, cfg),
        random_length(rng, cfg),
    );
    for support in [
        &mut s.psi_t11,
        &mut s.psi_t21,
        &mut s.psi_t22,
        &mut s.psi_t12,
        &mut s.psi_r11,
        &mut s.psi_r12,
        &mut s.psi_r22,
        &mut s.psi_r21,
    ] {
        *support = random_support(rng, q, cfg);
    }
    s
}

/// Draws until the scenario discretizes at its suggested density with every
/// array dimension at most `max_dim`.
pub fn random_discretized<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &SamplingConfig,
    max_dim: usize,
) -> DiscretizedScenario {
    loop {
        let s = random_scenario(rng, cfg);
        let Ok(d) = discretize(&s, suggest_density(&s)) else {
            continue;
        };
        if [&d.t1, &d.t2, &d.r1, &d.r2]
            .iter()
            .all(|g| g.dim() <= max_dim)
        {
            return d;
        }
    }
}
