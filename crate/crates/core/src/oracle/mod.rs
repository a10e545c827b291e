//! Randomized matrix oracle for the analytic dimension formulas.
//!
//! A scenario is discretized at an integer grid density, each operator is
//! replaced by a generic Gaussian matrix on its support block, and every
//! dimension is recomputed from numerical ranks and subspace intersections.
//! Generic matrices attain the support-pattern ranks with probability one, so
//! the integer-rounded results must equal the formulas scaled by the density.

mod grid;
pub mod linalg;

use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

pub use grid::{
    discretize, sample_channels, suggest_density, ArrayGrid, Atom, Channels, DiscretizedScenario,
};

use crate::dof_region::{aux_quantities, corner_points_lemma1};
use crate::error::Result;
use crate::scalar::positive_part;
use crate::scenario::{lm, operator_dims, OperatorDims, Scenario};
use crate::Rational;

use linalg::{
    intersection_dim, numerical_rank, range_and_complement, ANGLE_TOLERANCE, RANK_TOLERANCE,
};

/// Operator dimensions from numerical ranks, in grid units.
pub fn oracle_dims(d: &DiscretizedScenario, h: &Channels) -> Result<OperatorDims<usize>> {
    oracle_dims_with_tolerance(d, h, RANK_TOLERANCE)
}

pub fn oracle_dims_with_tolerance(
    d: &DiscretizedScenario,
    h: &Channels,
    rel_tol: f64,
) -> Result<OperatorDims<usize>> {
    let rank = |m| numerical_rank(m, rel_tol);
    let (rank_h11, rank_h12) = (rank(&h.h11)?, rank(&h.h12)?);
    let (rank_h21, rank_h22) = (rank(&h.h21)?, rank(&h.h22)?);
    let (t1, t2, r1, r2) = (d.t1.dim(), d.t2.dim(), d.r1.dim(), d.r2.dim());
    Ok(OperatorDims {
        dim_t1: t1,
        dim_t2: t2,
        dim_r1: r1,
        dim_r2: r2,
        rank_h11,
        rank_h12,
        rank_h21,
        rank_h22,
        null_h12: t2 - rank_h12,
        null_h21: t1 - rank_h21,
        perp_h11: r1 - rank_h11,
        perp_h22: r2 - rank_h22,
    })
}

/// Zero-forcing resource of the downlink transmitter, in grid units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreimageCount {
    /// `dim H₁₂^←(R(H₁₁)^⊥)`: transmit patterns whose self-interference
    /// lands orthogonal to the uplink signal.
    pub preimage: usize,
    /// The preimage capped by what the downlink transmitter radiates toward
    /// its receiver and what that receiver resolves.
    pub flow2: usize,
}

pub fn oracle_corner_flow2(d: &DiscretizedScenario, h: &Channels) -> Result<PreimageCount> {
    let (h12_range, _) = range_and_complement(&h.h12, RANK_TOLERANCE)?;
    let (_, h11_perp) = range_and_complement(&h.h11, RANK_TOLERANCE)?;
    let nullity = d.t2.dim() - h12_range.ncols();
    let preimage = nullity + intersection_dim(&h11_perp, &h12_range, ANGLE_TOLERANCE)?;
    let s = &d.scenario;
    let radiated = d.t2.coordinates_in(&s.psi_t22).len();
    let resolved = d.r2.coordinates_in(&s.psi_r22).len();
    Ok(PreimageCount {
        preimage,
        flow2: preimage.min(radiated).min(resolved),
    })
}

/// Dimension of the preimage for generic kernels, in scenario units.
///
/// Split R₁'s space into `A = Ψ_R11∖Ψ_R12`, `B = Ψ_R11∩Ψ_R12` and
/// `C = Ψ_R12∖Ψ_R11`. `R(H₁₁)^⊥` meets the coordinates `B ⊕ C` in
/// `C ⊕ (generic subspace of B of dim (b − r₁₁)⁺)`, and a generic `R(H₁₂)`
/// inside `B ⊕ C` meets that in `(r₁₂ − b + (b − r₁₁)⁺)⁺` dimensions.
pub fn generic_preimage_dim(s: &Scenario) -> Result<Rational> {
    let dims = operator_dims(s)?;
    let b = Rational::from_integer(2) * lm(&s.l_r1, &s.psi_r11.intersect(&s.psi_r12));
    let shared = positive_part(dims.rank_h12 - b + positive_part(b - dims.rank_h11));
    Ok(dims.null_h12 + shared)
}

/// Conditions under which the achievability sketch for the flow-1 corner
/// applies verbatim.
pub fn sketch_conditions_hold(s: &Scenario) -> Result<bool> {
    let aux = aux_quantities(s)?;
    let user_tx = lm(&s.l_t1, &s.psi_t11);
    let bs_rx = lm(&s.l_r1, &s.psi_r11);
    let bs_cross_tx = lm(&s.l_t2, &s.psi_t12);
    let bs_cross_rx = lm(&s.l_r1, &s.psi_r12);
    let overlap = lm(&s.l_t2, &s.psi_t22.intersect(&s.psi_t12));
    let needed =
        positive_part(bs_cross_tx - bs_cross_rx) + lm(&s.l_r1, &s.psi_r12.difference(&s.psi_r11));
    Ok(user_tx >= bs_rx
        && aux.d_t2 <= aux.delta_r2
        && overlap >= needed
        && bs_cross_tx >= bs_cross_rx)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CornerCheck {
    /// Sketch conditions hold and every trial reproduces `d'_2`.
    Match,
    /// Sketch conditions hold but some trial disagrees with `d'_2`.
    Mismatch {
        numerical: Rational,
        analytic: Rational,
    },
    /// Outside the sketch's conditions; the difference is recorded, not judged.
    NotApplicable { discrepancy: Option<Rational> },
}

impl CornerCheck {
    pub fn label(&self) -> &'static str {
        match self {
            CornerCheck::Match => "match",
            CornerCheck::Mismatch { .. } => "mismatch",
            CornerCheck::NotApplicable { .. } => "not_applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Grid density; chosen with [`suggest_density`] when absent.
    pub density: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: 10,
            seed: 0,
            density: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantityCheck {
    pub name: &'static str,
    pub analytic: Rational,
    /// Smallest and largest integer count seen across trials.
    pub numerical_min: usize,
    pub numerical_max: usize,
    /// Largest `|numerical − analytic·G|` across trials.
    pub gap: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub label: String,
    pub grid_density: u64,
    pub seed: u64,
    pub trials: usize,
    pub analytic: OperatorDims<Rational>,
    /// Numerical dimensions of the worst trial, divided by the density.
    pub numerical: OperatorDims<Rational>,
    pub quantities: Vec<QuantityCheck>,
    pub max_rank_gap: u64,
    pub preimage_dim_numerical: Rational,
    pub preimage_dim_generic: Rational,
    pub preimage_gap: u64,
    pub flow2_numerical: Rational,
    /// `d'_2` from the achievability formulas; absent on an indicator tie
    /// whose branches disagree.
    pub preimage_dim_analytic: Option<Rational>,
    pub sketch_conditions: bool,
    pub corner: CornerCheck,
    pub ill_conditioned_trials: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_rank_gap == 0
            && self.preimage_gap == 0
            && self.ill_conditioned_trials == 0
            && !matches!(self.corner, CornerCheck::Mismatch { .. })
    }

    pub fn to_json(&self) -> Value {
        let q = |x: &Rational| Value::String(x.to_string());
        let quantities: Vec<Value> = self
            .quantities
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "analytic": q(&c.analytic),
                    "numerical_min": c.numerical_min,
                    "numerical_max": c.numerical_max,
                    "gap": c.gap,
                    "pass": c.gap == 0,
                })
            })
            .collect();
        let corner = match &self.corner {
            CornerCheck::Match => json!({"status": "match"}),
            CornerCheck::Mismatch {
                numerical,
                analytic,
            } => {
                json!({"status": "mismatch", "numerical": q(numerical), "analytic": q(analytic)})
            }
            CornerCheck::NotApplicable { discrepancy } => json!({
                "status": "not_applicable",
                "discrepancy": discrepancy.as_ref().map(q),
            }),
        };
        let dims = |d: &OperatorDims<Rational>| {
            Value::Object(
                OperatorDims::<Rational>::NAMES
                    .iter()
                    .zip(d.values())
                    .map(|(n, v)| ((*n).to_owned(), q(v)))
                    .collect(),
            )
        };
        json!({
            "label": self.label,
            "grid_density": self.grid_density,
            "seed": self.seed,
            "trials": self.trials,
            "analytic": dims(&self.analytic),
            "numerical": dims(&self.numerical),
            "quantities": quantities,
            "max_rank_gap": self.max_rank_gap,
            "preimage_dim_numerical": q(&self.preimage_dim_numerical),
            "preimage_dim_generic": q(&self.preimage_dim_generic),
            "preimage_gap": self.preimage_gap,
            "flow2_numerical": q(&self.flow2_numerical),
            "preimage_dim_analytic": self.preimage_dim_analytic.as_ref().map(q),
            "sketch_conditions": self.sketch_conditions,
            "corner": corner,
            "ill_conditioned_trials": self.ill_conditioned_trials,
            "pass": self.passed(),
        })
    }
}

struct Trial {
    dims: OperatorDims<usize>,
    count: PreimageCount,
}

fn run_trial(d: &DiscretizedScenario, seed: u64) -> Result<Trial> {
    let h = sample_channels(d, seed);
    Ok(Trial {
        dims: oracle_dims(d, &h)?,
        count: oracle_corner_flow2(d, &h)?,
    })
}

fn grid_gap(numerical: usize, analytic: &Rational, g: &Rational) -> u64 {
    let diff = (Rational::from_integer(numerical as i64) - analytic * g).abs();
    u64::try_from(diff.ceil().to_integer()).expect("nonnegative")
}

/// Runs the oracle over `trials` consecutive seeds starting at `seed`.
pub fn verify(s: &Scenario, trials: usize, seed: u64) -> Result<OracleReport> {
    verify_with(
        s,
        &VerifyOptions {
            trials,
            seed,
            density: None,
        },
    )
}

pub fn verify_with(s: &Scenario, opts: &VerifyOptions) -> Result<OracleReport> {
    verify_against(s, opts, &operator_dims(s)?)
}

/// Like [`verify_with`] but compares against caller-supplied analytic values.
pub fn verify_against(
    s: &Scenario,
    opts: &VerifyOptions,
    analytic: &OperatorDims<Rational>,
) -> Result<OracleReport> {
    let density = opts.density.unwrap_or_else(|| suggest_density(s));
    let d = discretize(s, density)?;
    let g = Rational::from_integer(density as i64);

    let outcomes: Vec<Result<Trial>> = (0..opts.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(&d, opts.seed.wrapping_add(t)))
        .collect();
    let ill_conditioned_trials = outcomes.iter().filter(|o| o.is_err()).count();
    let trials: Vec<Trial> = outcomes.into_iter().filter_map(Result::ok).collect();

    let names = OperatorDims::<Rational>::NAMES;
    let analytic_values = analytic.values();
    let mut quantities: Vec<QuantityCheck> = names
        .iter()
        .zip(analytic_values)
        .map(|(name, a)| QuantityCheck {
            name,
            analytic: *a,
            numerical_min: usize::MAX,
            numerical_max: 0,
            gap: 0,
        })
        .collect();
    let mut worst: Option<(u64, &Trial)> = None;
    for trial in &trials {
        let mut total = 0;
        for (check, &n) in quantities.iter_mut().zip(trial.dims.values()) {
            let gap = grid_gap(n, &check.analytic, &g);
            check.numerical_min = check.numerical_min.min(n);
            check.numerical_max = check.numerical_max.max(n);
            check.gap = check.gap.max(gap);
            total += gap;
        }
        if worst.is_none_or(|(w, _)| total > w) {
            worst = Some((total, trial));
        }
    }
    for check in &mut quantities {
        if trials.is_empty() {
            check.numerical_min = 0;
        }
    }
    let max_rank_gap = quantities.iter().map(|c| c.gap).max().unwrap_or(0);

    let per_unit = |n: usize| Rational::new(n as i64, density as i64);
    let generic = generic_preimage_dim(s)?;
    let preimage_gap = trials
        .iter()
        .map(|t| grid_gap(t.count.preimage, &generic, &g))
        .max()
        .unwrap_or(0);
    let (numerical, preimage_dim_numerical, flow2_numerical) = match worst {
        Some((_, t)) => (
            t.dims.map(|&n| per_unit(n)),
            per_unit(t.count.preimage),
            per_unit(t.count.flow2),
        ),
        None => (
            analytic.map(|_| Rational::from_integer(0)),
            Rational::from_integer(0),
            Rational::from_integer(0),
        ),
    };

    let analytic_corner = corner_points_lemma1(s).ok().map(|c| c.prime.d2);
    let sketch_conditions = sketch_conditions_hold(s)?;
    let corner = match (&analytic_corner, sketch_conditions) {
        (Some(expected), true) => {
            match trials.iter().find(|t| per_unit(t.count.flow2) != *expected) {
                None => CornerCheck::Match,
                Some(t) => CornerCheck::Mismatch {
                    numerical: per_unit(t.count.flow2),
                    analytic: *expected,
                },
            }
        }
        (expected, _) => CornerCheck::NotApplicable {
            discrepancy: expected.map(|e| flow2_numerical - e),
        },
    };

    Ok(OracleReport {
        label: s.label.clone(),
        grid_density: density,
        seed: opts.seed,
        trials: opts.trials,
        analytic: analytic.clone(),
        numerical,
        quantities,
        max_rank_gap,
        preimage_dim_numerical,
        preimage_dim_generic: generic,
        preimage_gap,
        flow2_numerical,
        preimage_dim_analytic: analytic_corner,
        sketch_conditions,
        corner,
        ill_conditioned_trials,
    })
}

/// True when every oracle dimension is unchanged across the given relative
/// rank thresholds.
pub fn rank_is_threshold_robust(
    d: &DiscretizedScenario,
    h: &Channels,
    tolerances: &[f64],
) -> Result<bool> {
    let reference = oracle_dims_with_tolerance(d, h, tolerances[0])?;
    for &tol in &tolerances[1..] {
        if oracle_dims_with_tolerance(d, h, tol)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::IntervalSet;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn s4_oracle_dims() {
        let s = library::s4();
        let d = discretize(&s, 10).unwrap();
        let h = sample_channels(&d, 0);
        let dims = oracle_dims(&d, &h).unwrap();
        assert_eq!(dims.rank_h12, 4);
        assert_eq!(dims.null_h12, 16);
        let count = oracle_corner_flow2(&d, &h).unwrap();
        assert_eq!(count.flow2, 16);
        assert!(sketch_conditions_hold(&s).unwrap());
    }

    #[test]
    fn rank_example_at_density_ten() {
        let mut s = crate::Scenario::with_lengths(r(1, 1), r(1, 1), r(1, 2), r(1, 1));
        s.psi_t12 = IntervalSet::interval(r(0, 1), r(1, 2)).unwrap();
        s.psi_t22 = IntervalSet::interval(r(1, 2), r(1, 1)).unwrap();
        s.psi_r12 = IntervalSet::interval(r(0, 1), r(4, 5)).unwrap();
        s.psi_r11 = IntervalSet::interval(r(4, 5), r(1, 1)).unwrap();
        let d = discretize(&s, 10).unwrap();
        let h = sample_channels(&d, 5);
        assert_eq!(h.h12.shape(), (10, 20));
        assert_eq!(oracle_dims(&d, &h).unwrap().rank_h12, 8);
    }

    #[test]
    fn verify_s4_and_s1() {
        let rep = verify(&library::s4(), 20, 0).unwrap();
        assert_eq!(rep.max_rank_gap, 0);
        assert_eq!(rep.corner, CornerCheck::Match);
        assert_eq!(rep.flow2_numerical, r(8, 5));
        assert!(rep.passed());

        let rep = verify(&library::s1(), 5, 0).unwrap();
        assert_eq!(rep.max_rank_gap, 0);
        assert_eq!(rep.preimage_gap, 0);
        assert!(!rep.sketch_conditions);
        assert!(rep.passed());
    }

    #[test]
    fn no_self_interference_gives_full_flow2() {
        let mut s = library::s4();
        s.psi_r12 = IntervalSet::empty();
        let d = discretize(&s, suggest_density(&s)).unwrap();
        let h = sample_channels(&d, 1);
        let g = d.grid_density as i64;
        let d2_max = crate::dof_region::fd_bounds(&s).unwrap().d2_max;
        assert_eq!(
            Rational::from_integer(oracle_corner_flow2(&d, &h).unwrap().flow2 as i64),
            d2_max * g
        );
    }

    #[test]
    fn wide_self_interference_confines_flow2_to_nullspace() {
        let mut s = library::s4();
        s.psi_t12 = IntervalSet::interval(r(-1, 1), r(1, 2)).unwrap();
        s.l_r1 = r(4, 1);
        s.psi_r12 = IntervalSet::interval(r(0, 1), r(1, 2)).unwrap();
        let d = discretize(&s, suggest_density(&s)).unwrap();
        let h = sample_channels(&d, 2);
        let dims = operator_dims(&s).unwrap();
        let count = oracle_corner_flow2(&d, &h).unwrap();
        let g = Rational::from_integer(d.grid_density as i64);
        assert_eq!(
            Rational::from_integer(count.preimage as i64),
            generic_preimage_dim(&s).unwrap() * g
        );
        assert!(Rational::from_integer(count.preimage as i64) >= dims.null_h12 * g);
    }

    #[test]
    fn empty_scenario_is_all_zero() {
        let s = crate::Scenario::with_lengths(r(1, 1), r(1, 1), r(1, 1), r(1, 1));
        let rep = verify(&s, 3, 0).unwrap();
        assert_eq!(rep.max_rank_gap, 0);
        assert!(rep.analytic.values().iter().all(|v| **v == r(0, 1)));
        assert!(rep.passed());
    }

    #[test]
    fn corrupted_analytic_is_caught() {
        let s = library::s4();
        let mut bad = operator_dims(&s).unwrap();
        bad.null_h12 += r(1, 10);
        let rep = verify_against(&s, &VerifyOptions::default(), &bad).unwrap();
        assert_eq!(rep.max_rank_gap, 1);
        assert!(!rep.passed());
    }

    #[test]
    fn thresholds_agree_on_s4() {
        let d = discretize(&library::s4(), 10).unwrap();
        let h = sample_channels(&d, 3);
        assert!(rank_is_threshold_robust(&d, &h, &[1e-6, 1e-7, 1e-8, 1e-9, 1e-10]).unwrap());
    }
}
