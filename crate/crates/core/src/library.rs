//! Built-in scenario families and the sweeps over them.
//!
//! * Case A: every support identical (backscatter fully overlaps the forward
//!   paths), base-station arrays `L_BS`, user arrays `L_USR`.
//! * Case B: all four arrays equal, forward supports `Ψ_fwd` and backscatter
//!   supports `Ψ_back` shared by every node.
//! * Case C: the Case B supports with distinct base-station and user lengths.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::dof_region::{compare, region_from_bounds, Classification, DofRegion, FdBounds};
use crate::error::{Error, Result};
use crate::interval_set::IntervalSet;
use crate::scalar::{min_of, Scalar};
use crate::scenario::Scenario;
use crate::Rational;

/// Base-station arrays are `R₁` and `T₂`; user arrays are `T₁` and `R₂`.
fn symmetric<S: Scalar>(
    l_bs: S,
    l_usr: S,
    fwd: &IntervalSet<S>,
    back: &IntervalSet<S>,
    label: String,
) -> Result<Scenario<S>> {
    let s = Scenario {
        l_t1: l_usr.clone(),
        l_t2: l_bs.clone(),
        l_r1: l_bs,
        l_r2: l_usr,
        psi_t11: fwd.clone(),
        psi_t22: fwd.clone(),
        psi_r11: fwd.clone(),
        psi_r22: fwd.clone(),
        psi_t21: back.clone(),
        psi_t12: back.clone(),
        psi_r12: back.clone(),
        psi_r21: back.clone(),
        label,
    };
    s.check()?;
    Ok(s)
}

pub fn case_a<S: Scalar>(l_bs: S, l_usr: S, psi: &IntervalSet<S>) -> Result<Scenario<S>> {
    if psi.is_empty() {
        return Err(Error::InvalidScenario(vec![crate::scenario::Violation {
            field: "psi".into(),
            message: "must be nonempty".into(),
        }]));
    }
    let label = format!("case A: L_BS={l_bs}, L_USR={l_usr}, psi={psi}");
    symmetric(l_bs, l_usr, psi, psi, label)
}

pub fn case_b<S: Scalar>(l: S, fwd: &IntervalSet<S>, back: &IntervalSet<S>) -> Result<Scenario<S>> {
    let label = format!("case B: L={l}, fwd={fwd}, back={back}");
    symmetric(l.clone(), l, fwd, back, label)
}

pub fn case_c<S: Scalar>(
    l_bs: S,
    l_usr: S,
    fwd: &IntervalSet<S>,
    back: &IntervalSet<S>,
) -> Result<Scenario<S>> {
    let label = format!("case C: L_BS={l_bs}, L_USR={l_usr}, fwd={fwd}, back={back}");
    symmetric(l_bs, l_usr, fwd, back, label)
}

/// Region bounds written directly in the case parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm<S> {
    /// Common per-flow maximum.
    pub d_max: S,
    pub fd_sum: S,
    pub fdp_sum: S,
}

impl<S: Scalar> ClosedForm<S> {
    fn bounds(&self, sum: &S) -> FdBounds<S> {
        FdBounds {
            d1_max: self.d_max.clone(),
            d2_max: self.d_max.clone(),
            d_sum_max: sum.clone(),
        }
    }

    pub fn hd_region(&self) -> DofRegion<S> {
        region_from_bounds(&self.bounds(&self.d_max))
    }

    pub fn fd_region(&self) -> DofRegion<S> {
        region_from_bounds(&self.bounds(&self.fd_sum))
    }

    pub fn fdp_region(&self) -> DofRegion<S> {
        region_from_bounds(&self.bounds(&self.fdp_sum))
    }
}

/// Case A: `d_i ≤ |Ψ|·min{2L_BS, 2L_USR}`, FD sum `|Ψ|·min{2L_BS, 2L_USR}`,
/// FD' sum `2L_BS|Ψ|`.
pub fn case_a_closed_form<S: Scalar>(l_bs: &S, l_usr: &S, psi_measure: &S) -> ClosedForm<S> {
    let two = S::two();
    let d_max =
        psi_measure.clone() * min_of(two.clone() * l_bs.clone(), two.clone() * l_usr.clone());
    ClosedForm {
        d_max: d_max.clone(),
        fd_sum: d_max,
        fdp_sum: two * l_bs.clone() * psi_measure.clone(),
    }
}

/// Case B: `d_i ≤ 2L|Ψ_fwd|`, both FD sums `2L(2|Ψ_fwd∖Ψ_back| + |Ψ_back|)`.
pub fn case_b_closed_form<S: Scalar>(
    l: &S,
    fwd: &IntervalSet<S>,
    back: &IntervalSet<S>,
) -> ClosedForm<S> {
    let two_l = S::two() * l.clone();
    let sum = two_l.clone() * (S::two() * fwd.difference(back).measure() + back.measure());
    ClosedForm {
        d_max: two_l * fwd.measure(),
        fd_sum: sum.clone(),
        fdp_sum: sum,
    }
}

/// Case B rectangularity test: `|Ψ_back∖Ψ_fwd| ≥ |Ψ_fwd∩Ψ_back|`.
pub fn case_b_predicts_rectangular<S: Scalar>(fwd: &IntervalSet<S>, back: &IntervalSet<S>) -> bool {
    back.difference(fwd).measure() >= fwd.intersect(back).measure()
}

/// The worked example with strictly interior corners.
pub fn s4() -> Scenario {
    let r = Rational::new;
    let iv = |lo, hi| IntervalSet::interval(lo, hi).expect("in range");
    let unit = iv(r(0, 1), r(1, 1));
    let centered = iv(r(-1, 2), r(1, 2));
    let half = iv(r(0, 1), r(1, 2));
    Scenario {
        l_t1: r(1, 1),
        l_t2: r(1, 1),
        l_r1: r(1, 2),
        l_r2: r(1, 1),
        psi_t11: unit.clone(),
        psi_t21: half.clone(),
        psi_t22: centered.clone(),
        psi_t12: half.clone(),
        psi_r11: unit,
        psi_r12: iv(r(0, 1), r(2, 5)),
        psi_r22: centered,
        psi_r21: half,
        label: "S4".into(),
    }
}

/// Case A with `L_BS = 1`, `L_USR = 1/2`, `Ψ = [0, 1)`.
pub fn s1() -> Scenario {
    let unit = IntervalSet::interval(Rational::from_integer(0), Rational::from_integer(1))
        .expect("in range");
    case_a(Rational::from_integer(1), Rational::new(1, 2), &unit)
        .expect("valid")
        .with_label("S1")
}

/// Case B with `2L = 1`, `Ψ_fwd = [-1/2, 1/2)`, `Ψ_back = [0, 1)`.
pub fn s2() -> Scenario {
    let r = Rational::new;
    let fwd = IntervalSet::interval(r(-1, 2), r(1, 2)).expect("in range");
    let back = IntervalSet::interval(r(0, 1), r(1, 1)).expect("in range");
    case_b(r(1, 2), &fwd, &back)
        .expect("valid")
        .with_label("S2")
}

pub fn preset(name: &str) -> Option<Scenario> {
    match name.to_ascii_lowercase().as_str() {
        "s1" => Some(s1()),
        "s2" => Some(s2()),
        "s4" => Some(s4()),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow<S> {
    pub param: S,
    pub d1_max: S,
    pub d2_max: S,
    /// Largest `d₁ + d₂` inside `D_FD`.
    pub d_sum_fd: S,
    /// Largest `d₁ + d₂` inside `D_FD'`.
    pub d_sum_fdp: S,
    pub classification: Classification,
    pub rect_fd: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult<S> {
    pub parameter: String,
    pub rows: Vec<SweepRow<S>>,
}

pub const SWEEP_CSV_HEADER: &str = "param,d1_max,d2_max,d_sum_fd,d_sum_fdp,class,rect_fd";

impl<S: Scalar> SweepResult<S> {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(SWEEP_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.param,
                row.d1_max,
                row.d2_max,
                row.d_sum_fd,
                row.d_sum_fdp,
                row.classification,
                row.rect_fd
            );
        }
        out
    }
}

pub fn sweep_row<S: Scalar>(param: S, s: &Scenario<S>) -> Result<SweepRow<S>> {
    let summary = compare(s)?;
    Ok(SweepRow {
        param,
        d1_max: summary.bounds.d1_max,
        d2_max: summary.bounds.d2_max,
        d_sum_fd: summary.fd.max_sum(),
        d_sum_fdp: summary.fdp.max_sum(),
        classification: summary.classification,
        rect_fd: summary.fd.is_rectangular(),
    })
}

/// Case B with unit-measure supports sliding past each other:
/// `Ψ_fwd = [w − 1, w)` against `Ψ_back = [0, 1)`, so the overlap is `w`,
/// for `w = 0, 1/(steps−1), …, 1`.
pub fn overlap_sweep<S: Scalar>(l: S, steps: usize) -> Result<SweepResult<S>> {
    if steps < 2 {
        return Err(Error::BadRange(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    if l.partial_cmp(&S::zero()) != Some(Ordering::Greater) {
        return Err(Error::BadRange(format!("half-length must be > 0, got {l}")));
    }
    let last = i64::try_from(steps - 1).map_err(|_| Error::BadRange("too many steps".into()))?;
    let back = IntervalSet::interval(S::zero(), S::one())?;
    let rows = (0..=last)
        .map(|i| {
            let w = S::from_ratio(i, last);
            let fwd = IntervalSet::interval(w.clone() - S::one(), w.clone())?;
            sweep_row(w, &case_b(l.clone(), &fwd, &back)?)
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        parameter: "overlap".into(),
        rows,
    })
}

/// Case C rows for each base-station half-length, user arrays held fixed.
pub fn length_sweep<S: Scalar>(
    l_usr: S,
    l_bs_values: &[S],
    fwd: &IntervalSet<S>,
    back: &IntervalSet<S>,
) -> Result<SweepResult<S>> {
    if l_bs_values.is_empty() {
        return Err(Error::BadRange("no base-station lengths given".into()));
    }
    if l_bs_values
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(Error::BadRange(
            "base-station lengths must be strictly increasing".into(),
        ));
    }
    let rows = l_bs_values
        .iter()
        .map(|l_bs| {
            sweep_row(
                l_bs.clone(),
                &case_c(l_bs.clone(), l_usr.clone(), fwd, back)?,
            )
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        parameter: "l_bs".into(),
        rows,
    })
}
