//! Degrees-of-freedom regions of the three-node network.
//!
//! Three regions are built from a [`Scenario`]:
//!
//! * `D_FD`: full duplex with self- and inter-node interference, bounded by
//!   the per-flow maxima and the sum bound [`FdBounds::d_sum_max`].
//! * `D_FD'`: full duplex with self-interference only, where the sum bound
//!   keeps just the base-station term.
//! * `D_HD`: half duplex, the time-sharing triangle between the flow maxima.
//!
//! Corner points are available both from the achievability construction
//! ([`corner_points_lemma1`]) and from the closed-form bound expression
//! ([`corner_points_lemma2`]); the two must coincide.

mod polygon;

use std::fmt;

pub use polygon::{DofRegion, Point};

use crate::error::{Error, Result};
use crate::scalar::{max_of, min_of, positive_part, Scalar};
use crate::scenario::{lm, Scenario};

#[derive(Clone, Debug, PartialEq)]
pub struct FdBounds<S> {
    pub d1_max: S,
    pub d2_max: S,
    pub d_sum_max: S,
}

/// The two halves of the sum bound, before the factor 2 and the `min`.
#[derive(Clone, Debug, PartialEq)]
pub struct SumTerms<S> {
    /// `L_T2|Ψ_T22∖Ψ_T12| + L_R1|Ψ_R11∖Ψ_R12| + max{L_T2|Ψ_T12|, L_R1|Ψ_R12|}`
    pub base_station: S,
    /// `L_T1|Ψ_T11∖Ψ_T21| + L_R2|Ψ_R22∖Ψ_R21| + max{L_T1|Ψ_T21|, L_R2|Ψ_R21|}`
    pub user: S,
}

pub fn sum_terms<S: Scalar>(s: &Scenario<S>) -> Result<SumTerms<S>> {
    s.check()?;
    let base_station = lm(&s.l_t2, &s.psi_t22.difference(&s.psi_t12))
        + lm(&s.l_r1, &s.psi_r11.difference(&s.psi_r12))
        + max_of(lm(&s.l_t2, &s.psi_t12), lm(&s.l_r1, &s.psi_r12));
    let user = lm(&s.l_t1, &s.psi_t11.difference(&s.psi_t21))
        + lm(&s.l_r2, &s.psi_r22.difference(&s.psi_r21))
        + max_of(lm(&s.l_t1, &s.psi_t21), lm(&s.l_r2, &s.psi_r21));
    Ok(SumTerms { base_station, user })
}

fn flow_maxima<S: Scalar>(s: &Scenario<S>) -> (S, S) {
    let two = S::two();
    (
        two.clone() * min_of(lm(&s.l_t1, &s.psi_t11), lm(&s.l_r1, &s.psi_r11)),
        two * min_of(lm(&s.l_t2, &s.psi_t22), lm(&s.l_r2, &s.psi_r22)),
    )
}

/// Per-flow maxima and the sum bound of `D_FD`.
pub fn fd_bounds<S: Scalar>(s: &Scenario<S>) -> Result<FdBounds<S>> {
    let terms = sum_terms(s)?;
    let (d1_max, d2_max) = flow_maxima(s);
    Ok(FdBounds {
        d1_max,
        d2_max,
        d_sum_max: S::two() * min_of(terms.base_station, terms.user),
    })
}

/// Bounds of `D_FD'`: the sum bound drops the user-side term.
pub fn fdp_bounds<S: Scalar>(s: &Scenario<S>) -> Result<FdBounds<S>> {
    let terms = sum_terms(s)?;
    let (d1_max, d2_max) = flow_maxima(s);
    Ok(FdBounds {
        d1_max,
        d2_max,
        d_sum_max: S::two() * terms.base_station,
    })
}

/// Auxiliary quantities of the achievability construction.
///
/// `d_*` count what one end can zero-force given the other end's limits;
/// `delta_*` count what remains once the opposite flow runs at full rate.
/// Values are evaluated verbatim and may come out negative.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxQuantities<S> {
    pub d_t1: S,
    pub d_t2: S,
    pub d_r1: S,
    pub d_r2: S,
    pub delta_t1: S,
    pub delta_t2: S,
    pub delta_r1: S,
    pub delta_r2: S,
}

impl<S> AuxQuantities<S> {
    pub const NAMES: [&'static str; 8] = [
        "d_t1", "d_t2", "d_r1", "d_r2", "delta_t1", "delta_t2", "delta_r1", "delta_r2",
    ];

    pub fn values(&self) -> [&S; 8] {
        [
            &self.d_t1,
            &self.d_t2,
            &self.d_r1,
            &self.d_r2,
            &self.delta_t1,
            &self.delta_t2,
            &self.delta_r1,
            &self.delta_r2,
        ]
    }
}

pub fn aux_quantities<S: Scalar>(s: &Scenario<S>) -> Result<AuxQuantities<S>> {
    s.check()?;
    let two = S::two();
    let (t11, t21, t22, t12) = (&s.psi_t11, &s.psi_t21, &s.psi_t22, &s.psi_t12);
    let (r11, r12, r22, r21) = (&s.psi_r11, &s.psi_r12, &s.psi_r22, &s.psi_r21);
    let (lt1, lt2, lr1, lr2) = (&s.l_t1, &s.l_t2, &s.l_r1, &s.l_r2);

    // Shape shared by every quantity: 2L|own∖cross| + 2·min{L|own∩cross|, budget}.
    let assemble =
        |l: &S, own: &crate::IntervalSet<S>, cross: &crate::IntervalSet<S>, budget: S| {
            two.clone() * lm(l, &own.difference(cross))
                + two.clone() * min_of(lm(l, &own.intersect(cross)), budget)
        };

    let d_t2 = assemble(
        lt2,
        t22,
        t12,
        positive_part(lm(lt2, t12) - lm(lr1, r12)) + lm(lr1, &r12.difference(r11)),
    );
    let d_t1 = assemble(
        lt1,
        t11,
        t21,
        positive_part(lm(lt1, t21) - lm(lr2, r21)) + lm(lr2, &r21.difference(r22)),
    );
    let d_r1 = assemble(
        lr1,
        r11,
        r12,
        positive_part(lm(lr1, r12) - lm(lt2, t12)) + lm(lt2, &t12.difference(t22)),
    );
    let d_r2 = assemble(
        lr2,
        r22,
        r21,
        positive_part(lm(lr2, r21) - lm(lt1, t21)) + lm(lt1, &t21.difference(t11)),
    );

    let delta_t2 = assemble(
        lt2,
        t22,
        t12,
        lm(lt2, t12)
            - (lm(lt1, t11)
                - (lm(lr1, &r11.difference(r12)) + positive_part(lm(lr1, r12) - lm(lt2, t12)))),
    );
    let delta_t1 = assemble(
        lt1,
        t11,
        t21,
        lm(lt1, t21)
            - (lm(lt2, t22)
                - (lm(lr2, &r22.difference(r21)) + positive_part(lm(lr2, r21) - lm(lt1, t21)))),
    );
    let delta_r1 = assemble(
        lr1,
        r11,
        r12,
        lm(lr1, r12)
            - (lm(lr2, r22)
                - (lm(lt2, &t22.difference(t12)) + positive_part(lm(lt2, t12) - lm(lr1, r12)))),
    );
    let delta_r2 = assemble(
        lr2,
        r22,
        r21,
        lm(lr2, r21)
            - (lm(lr1, r11)
                - (lm(lt1, &t11.difference(t21)) + positive_part(lm(lt1, t21) - lm(lr2, r21)))),
    );

    Ok(AuxQuantities {
        d_t1,
        d_t2,
        d_r1,
        d_r2,
        delta_t1,
        delta_t2,
        delta_r1,
        delta_r2,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CornerPoints<S> {
    /// Flow 1 at its maximum.
    pub prime: Point<S>,
    /// Flow 2 at its maximum.
    pub double_prime: Point<S>,
    pub aux: AuxQuantities<S>,
}

fn clamp<S: Scalar>(x: S, hi: &S) -> S {
    min_of(positive_part(x), hi.clone())
}

/// Resolves an indicator-selected corner coordinate. On an exact tie both
/// branches are evaluated and must agree.
fn select_branch<S: Scalar>(
    quantity: &'static str,
    order: std::cmp::Ordering,
    when_greater: S,
    when_less: S,
    cap: &S,
) -> Result<S> {
    let (a, b) = (clamp(when_greater, cap), clamp(when_less, cap));
    match order {
        std::cmp::Ordering::Greater => Ok(a),
        std::cmp::Ordering::Less => Ok(b),
        std::cmp::Ordering::Equal if a == b => Ok(a),
        std::cmp::Ordering::Equal => Err(Error::AmbiguousCorner {
            quantity,
            first: a.to_string(),
            second: b.to_string(),
        }),
    }
}

/// Corner points from the achievability construction.
///
/// The second coordinate of the flow-1 corner is `min{d_T2, δ_R2}` when
/// `L_T1|Ψ_T11| ≥ L_R1|Ψ_R11|` and `min{δ_T2, d_R2}` otherwise; the flow-2
/// corner mirrors this with the test `L_R2|Ψ_R22| < L_T2|Ψ_T22|`. The
/// resulting coordinate is clamped to `[0, flow max]`.
pub fn corner_points_lemma1<S: Scalar>(s: &Scenario<S>) -> Result<CornerPoints<S>> {
    let aux = aux_quantities(s)?;
    let (d1_max, d2_max) = flow_maxima(s);

    let user_tx = lm(&s.l_t1, &s.psi_t11);
    let bs_rx = lm(&s.l_r1, &s.psi_r11);
    let prime_d2 = select_branch(
        "d'_2",
        user_tx.partial_cmp(&bs_rx).expect("comparable"),
        min_of(aux.d_t2.clone(), aux.delta_r2.clone()),
        min_of(aux.delta_t2.clone(), aux.d_r2.clone()),
        &d2_max,
    )?;

    let bs_tx = lm(&s.l_t2, &s.psi_t22);
    let user_rx = lm(&s.l_r2, &s.psi_r22);
    let double_prime_d1 = select_branch(
        "d''_1",
        bs_tx.partial_cmp(&user_rx).expect("comparable"),
        min_of(aux.d_t1.clone(), aux.delta_r1.clone()),
        min_of(aux.delta_t1.clone(), aux.d_r1.clone()),
        &d1_max,
    )?;

    Ok(CornerPoints {
        prime: Point::new(d1_max, prime_d2),
        double_prime: Point::new(double_prime_d1, d2_max),
        aux,
    })
}

/// Corner points read off the bounds: each flow at its maximum with the
/// other taking what the sum bound leaves.
pub fn corner_points_lemma2<S: Scalar>(s: &Scenario<S>) -> Result<(Point<S>, Point<S>)> {
    Ok(corners_from_bounds(&fd_bounds(s)?))
}

fn corners_from_bounds<S: Scalar>(b: &FdBounds<S>) -> (Point<S>, Point<S>) {
    let residual = |other: &S| positive_part(b.d_sum_max.clone() - other.clone());
    (
        Point::new(
            b.d1_max.clone(),
            positive_part(min_of(b.d2_max.clone(), residual(&b.d1_max))),
        ),
        Point::new(
            positive_part(min_of(b.d1_max.clone(), residual(&b.d2_max))),
            b.d2_max.clone(),
        ),
    )
}

/// Region cut out by per-flow maxima and a sum bound.
pub fn region_from_bounds<S: Scalar>(b: &FdBounds<S>) -> DofRegion<S> {
    let (prime, double_prime) = corners_from_bounds(b);
    DofRegion::hull([
        Point::new(b.d1_max.clone(), S::zero()),
        prime,
        double_prime,
        Point::new(S::zero(), b.d2_max.clone()),
    ])
}

/// `D_FD`: full duplex with self- and inter-node interference.
pub fn fd_region<S: Scalar>(s: &Scenario<S>) -> Result<DofRegion<S>> {
    Ok(region_from_bounds(&fd_bounds(s)?))
}

/// `D_FD'`: full duplex with self-interference only.
pub fn fdp_region<S: Scalar>(s: &Scenario<S>) -> Result<DofRegion<S>> {
    Ok(region_from_bounds(&fdp_bounds(s)?))
}

/// `D_HD`: time sharing between the two flow maxima.
pub fn hd_region<S: Scalar>(s: &Scenario<S>) -> Result<DofRegion<S>> {
    s.check()?;
    let (d1_max, d2_max) = flow_maxima(s);
    Ok(DofRegion::hull([
        Point::new(d1_max, S::zero()),
        Point::new(S::zero(), d2_max),
    ]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inclusion {
    Equal,
    ProperSubset,
    NotSubset,
}

impl Inclusion {
    fn symbol(self) -> &'static str {
        match self {
            Inclusion::Equal => "=",
            Inclusion::ProperSubset => "<",
            Inclusion::NotSubset => "!<=",
        }
    }
}

pub fn region_subset<S: Scalar>(a: &DofRegion<S>, b: &DofRegion<S>) -> Inclusion {
    match (a.is_subset_of(b), b.is_subset_of(a)) {
        (true, true) => Inclusion::Equal,
        (true, false) => Inclusion::ProperSubset,
        (false, _) => Inclusion::NotSubset,
    }
}

pub fn region_is_rectangular<S: Scalar>(r: &DofRegion<S>) -> bool {
    r.is_rectangular()
}

/// Pairwise relations between the half-duplex and both full-duplex regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub hd_fd: Inclusion,
    pub fd_fdp: Inclusion,
    pub hd_fdp: Inclusion,
}

impl Classification {
    pub fn all_equal(&self) -> bool {
        self.hd_fd == Inclusion::Equal && self.fd_fdp == Inclusion::Equal
    }

    pub fn is_nested(&self) -> bool {
        self.hd_fd != Inclusion::NotSubset
            && self.fd_fdp != Inclusion::NotSubset
            && self.hd_fdp != Inclusion::NotSubset
    }
}

/// Chain notation, e.g. `HD<FD=FD'`.
impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HD{}FD{}FD'", self.hd_fd.symbol(), self.fd_fdp.symbol())
    }
}

pub fn classify<S: Scalar>(
    hd: &DofRegion<S>,
    fd: &DofRegion<S>,
    fdp: &DofRegion<S>,
) -> Classification {
    Classification {
        hd_fd: region_subset(hd, fd),
        fd_fdp: region_subset(fd, fdp),
        hd_fdp: region_subset(hd, fdp),
    }
}

/// Everything the region-level commands report for one scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionSummary<S> {
    pub bounds: FdBounds<S>,
    pub fdp_sum_max: S,
    pub hd: DofRegion<S>,
    pub fd: DofRegion<S>,
    pub fdp: DofRegion<S>,
    pub classification: Classification,
}

pub fn compare<S: Scalar>(s: &Scenario<S>) -> Result<RegionSummary<S>> {
    let bounds = fd_bounds(s)?;
    let fdp_b = fdp_bounds(s)?;
    let hd = hd_region(s)?;
    let fd = region_from_bounds(&bounds);
    let fdp = region_from_bounds(&fdp_b);
    let classification = classify(&hd, &fd, &fdp);
    Ok(RegionSummary {
        bounds,
        fdp_sum_max: fdp_b.d_sum_max,
        hd,
        fd,
        fdp,
        classification,
    })
}
