//! Three-node full-duplex network description and its operator dimensions.
//!
//! Flow 1 is the uplink `T₁ → R₁` (user 1 to the base-station receiver) and
//! flow 2 the downlink `T₂ → R₂` (base-station transmitter to user 2).
//! `H₁₂` carries self-interference into the base station and `H₂₁` carries
//! inter-node interference from user 1 to user 2.
//!
//! Array lengths are stored as half-lengths `L`; every formula writes the
//! factor `2L` explicitly.

use std::fmt;

use crate::error::{Error, Result};
use crate::interval_set::IntervalSet;
use crate::scalar::{min_of, positive_part, Scalar};
use crate::Rational;

/// A scenario invariant that does not hold, tagged with the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    fn new(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: field.to_owned(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.field, self.message)
    }
}

/// Names of the eight support fields, in storage order.
pub const SUPPORT_FIELDS: [&str; 8] = [
    "psi_t11", "psi_t21", "psi_t22", "psi_t12", "psi_r11", "psi_r12", "psi_r22", "psi_r21",
];

/// Names of the four half-length fields, in storage order.
pub const LENGTH_FIELDS: [&str; 4] = ["l_t1", "l_t2", "l_r1", "l_r2"];

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<S = Rational> {
    pub l_t1: S,
    pub l_t2: S,
    pub l_r1: S,
    pub l_r2: S,
    /// Departures from T₁ toward R₁ (signal).
    pub psi_t11: IntervalSet<S>,
    /// Departures from T₁ toward R₂ (inter-node interference).
    pub psi_t21: IntervalSet<S>,
    /// Departures from T₂ toward R₂ (signal).
    pub psi_t22: IntervalSet<S>,
    /// Departures from T₂ toward R₁ (self-interference).
    pub psi_t12: IntervalSet<S>,
    /// Arrivals at R₁ from T₁ (signal).
    pub psi_r11: IntervalSet<S>,
    /// Arrivals at R₁ from T₂ (self-interference).
    pub psi_r12: IntervalSet<S>,
    /// Arrivals at R₂ from T₂ (signal).
    pub psi_r22: IntervalSet<S>,
    /// Arrivals at R₂ from T₁ (inter-node interference).
    pub psi_r21: IntervalSet<S>,
    pub label: String,
}

/// Scenario with supports given as raw pairs, before canonicalization.
///
/// This is the shape a scenario file deserializes into; [`RawScenario::build`]
/// reports every problem at once instead of stopping at the first.
#[derive(Clone, Debug, PartialEq)]
pub struct RawScenario<S = Rational> {
    pub lengths: [S; 4],
    pub supports: [Vec<(S, S)>; 8],
    pub label: String,
}

impl<S: Scalar> RawScenario<S> {
    pub fn validate(&self) -> Vec<Violation> {
        self.build().err().unwrap_or_default()
    }

    pub fn build(&self) -> std::result::Result<Scenario<S>, Vec<Violation>> {
        let mut violations = length_violations(&self.lengths);
        let mut sets = Vec::with_capacity(8);
        for (name, pairs) in SUPPORT_FIELDS.iter().zip(&self.supports) {
            match IntervalSet::normalize(pairs.iter().cloned()) {
                Ok(set) => sets.push(set),
                Err(e) => {
                    violations.push(Violation::new(name, e.to_string()));
                    sets.push(IntervalSet::empty());
                }
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }
        let [l_t1, l_t2, l_r1, l_r2] = self.lengths.clone();
        let mut sets = sets.into_iter();
        let mut next = || sets.next().expect("eight supports");
        Ok(Scenario {
            l_t1,
            l_t2,
            l_r1,
            l_r2,
            psi_t11: next(),
            psi_t21: next(),
            psi_t22: next(),
            psi_t12: next(),
            psi_r11: next(),
            psi_r12: next(),
            psi_r22: next(),
            psi_r21: next(),
            label: self.label.clone(),
        })
    }
}

fn length_violations<S: Scalar>(lengths: &[S; 4]) -> Vec<Violation> {
    LENGTH_FIELDS
        .iter()
        .zip(lengths)
        .filter(|(_, l)| (*l).partial_cmp(&S::zero()) != Some(std::cmp::Ordering::Greater))
        .map(|(name, _)| Violation::new(name, "must be > 0"))
        .collect()
}

impl<S: Scalar> Scenario<S> {
    /// Scenario with every support empty.
    pub fn with_lengths(l_t1: S, l_t2: S, l_r1: S, l_r2: S) -> Self {
        Self {
            l_t1,
            l_t2,
            l_r1,
            l_r2,
            psi_t11: IntervalSet::empty(),
            psi_t21: IntervalSet::empty(),
            psi_t22: IntervalSet::empty(),
            psi_t12: IntervalSet::empty(),
            psi_r11: IntervalSet::empty(),
            psi_r12: IntervalSet::empty(),
            psi_r22: IntervalSet::empty(),
            psi_r21: IntervalSet::empty(),
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn lengths(&self) -> [&S; 4] {
        [&self.l_t1, &self.l_t2, &self.l_r1, &self.l_r2]
    }

    pub fn supports(&self) -> [&IntervalSet<S>; 8] {
        [
            &self.psi_t11,
            &self.psi_t21,
            &self.psi_t22,
            &self.psi_t12,
            &self.psi_r11,
            &self.psi_r12,
            &self.psi_r22,
            &self.psi_r21,
        ]
    }

    /// Interval sets are canonical by construction, so only lengths can fail.
    pub fn validate(&self) -> Vec<Violation> {
        let lengths = [
            self.l_t1.clone(),
            self.l_t2.clone(),
            self.l_r1.clone(),
            self.l_r2.clone(),
        ];
        length_violations(&lengths)
    }

    pub fn check(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidScenario(violations))
        }
    }

    pub fn to_raw(&self) -> RawScenario<S> {
        RawScenario {
            lengths: [
                self.l_t1.clone(),
                self.l_t2.clone(),
                self.l_r1.clone(),
                self.l_r2.clone(),
            ],
            supports: self.supports().map(|s| s.pieces().to_vec()),
            label: self.label.clone(),
        }
    }

    /// Relabels flow 1 ↔ flow 2 (T₁↔T₂, R₁↔R₂ with matching supports).
    pub fn swap_flows(&self) -> Self {
        Self {
            l_t1: self.l_t2.clone(),
            l_t2: self.l_t1.clone(),
            l_r1: self.l_r2.clone(),
            l_r2: self.l_r1.clone(),
            psi_t11: self.psi_t22.clone(),
            psi_t21: self.psi_t12.clone(),
            psi_t22: self.psi_t11.clone(),
            psi_t12: self.psi_t21.clone(),
            psi_r11: self.psi_r22.clone(),
            psi_r12: self.psi_r21.clone(),
            psi_r22: self.psi_r11.clone(),
            psi_r21: self.psi_r12.clone(),
            label: self.label.clone(),
        }
    }

    /// Multiplies all four half-lengths by `c`.
    pub fn scale_lengths(&self, c: &S) -> Self {
        Self {
            l_t1: self.l_t1.clone() * c.clone(),
            l_t2: self.l_t2.clone() * c.clone(),
            l_r1: self.l_r1.clone() * c.clone(),
            l_r2: self.l_r2.clone() * c.clone(),
            ..self.clone()
        }
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Scenario<T> {
        Scenario {
            l_t1: f(&self.l_t1),
            l_t2: f(&self.l_t2),
            l_r1: f(&self.l_r1),
            l_r2: f(&self.l_r2),
            psi_t11: self.psi_t11.map_scalar(&f),
            psi_t21: self.psi_t21.map_scalar(&f),
            psi_t22: self.psi_t22.map_scalar(&f),
            psi_t12: self.psi_t12.map_scalar(&f),
            psi_r11: self.psi_r11.map_scalar(&f),
            psi_r12: self.psi_r12.map_scalar(&f),
            psi_r22: self.psi_r22.map_scalar(&f),
            psi_r21: self.psi_r21.map_scalar(&f),
            label: self.label.clone(),
        }
    }
}

/// `L·|Ψ|`, half the signal-space dimension an array of half-length `L`
/// resolves over support `Ψ`.
pub(crate) fn lm<S: Scalar>(l: &S, psi: &IntervalSet<S>) -> S {
    l.clone() * psi.measure()
}

/// Point-to-point degrees of freedom `min{2L_T|Ψ_T|, 2L_R|Ψ_R|}`.
pub fn p2p_dof<S: Scalar>(l_t: &S, psi_t: &IntervalSet<S>, l_r: &S, psi_r: &IntervalSet<S>) -> S {
    S::two() * min_of(lm(l_t, psi_t), lm(l_r, psi_r))
}

/// Signal-space and operator dimensions of one scenario.
///
/// Generic over the value type so the matrix oracle can reuse it for integer
/// grid counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDims<T> {
    pub dim_t1: T,
    pub dim_t2: T,
    pub dim_r1: T,
    pub dim_r2: T,
    pub rank_h11: T,
    pub rank_h12: T,
    pub rank_h21: T,
    pub rank_h22: T,
    pub null_h12: T,
    pub null_h21: T,
    pub perp_h11: T,
    pub perp_h22: T,
}

impl<T> OperatorDims<T> {
    pub const NAMES: [&'static str; 12] = [
        "dim_t1", "dim_t2", "dim_r1", "dim_r2", "rank_h11", "rank_h12", "rank_h21", "rank_h22",
        "null_h12", "null_h21", "perp_h11", "perp_h22",
    ];

    pub fn values(&self) -> [&T; 12] {
        [
            &self.dim_t1,
            &self.dim_t2,
            &self.dim_r1,
            &self.dim_r2,
            &self.rank_h11,
            &self.rank_h12,
            &self.rank_h21,
            &self.rank_h22,
            &self.null_h12,
            &self.null_h21,
            &self.perp_h11,
            &self.perp_h22,
        ]
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> OperatorDims<U> {
        OperatorDims {
            dim_t1: f(&self.dim_t1),
            dim_t2: f(&self.dim_t2),
            dim_r1: f(&self.dim_r1),
            dim_r2: f(&self.dim_r2),
            rank_h11: f(&self.rank_h11),
            rank_h12: f(&self.rank_h12),
            rank_h21: f(&self.rank_h21),
            rank_h22: f(&self.rank_h22),
            null_h12: f(&self.null_h12),
            null_h21: f(&self.null_h21),
            perp_h11: f(&self.perp_h11),
            perp_h22: f(&self.perp_h22),
        }
    }
}

impl<T: Clone> OperatorDims<T> {
    /// Field permutation matching [`Scenario::swap_flows`].
    pub fn swap_flows(&self) -> Self {
        Self {
            dim_t1: self.dim_t2.clone(),
            dim_t2: self.dim_t1.clone(),
            dim_r1: self.dim_r2.clone(),
            dim_r2: self.dim_r1.clone(),
            rank_h11: self.rank_h22.clone(),
            rank_h12: self.rank_h21.clone(),
            rank_h21: self.rank_h12.clone(),
            rank_h22: self.rank_h11.clone(),
            null_h12: self.null_h21.clone(),
            null_h21: self.null_h12.clone(),
            perp_h11: self.perp_h22.clone(),
            perp_h22: self.perp_h11.clone(),
        }
    }
}

/// Evaluates every dimension quantity of the scenario exactly.
pub fn operator_dims<S: Scalar>(s: &Scenario<S>) -> Result<OperatorDims<S>> {
    s.check()?;
    let two = S::two();
    let twice = |l: &S, psi: &IntervalSet<S>| two.clone() * lm(l, psi);

    // Null space of a cross operator: everything the transmitter radiates
    // outside the cross support, plus the part of the cross support the
    // receiver cannot resolve.
    let cross_null = |l_t: &S, own: &IntervalSet<S>, cross_t: &IntervalSet<S>, l_r: &S, cross_r| {
        twice(l_t, &own.difference(cross_t))
            + two.clone() * positive_part(lm(l_t, cross_t) - lm(l_r, cross_r))
    };
    // Orthogonal complement of a direct operator's range inside the receive space.
    let direct_perp = |l_r: &S, own: &IntervalSet<S>, cross_r: &IntervalSet<S>, l_t: &S, own_t| {
        twice(l_r, &cross_r.difference(own))
            + two.clone() * positive_part(lm(l_r, own) - lm(l_t, own_t))
    };

    Ok(OperatorDims {
        dim_t1: twice(&s.l_t1, &s.psi_t11.union(&s.psi_t21)),
        dim_t2: twice(&s.l_t2, &s.psi_t22.union(&s.psi_t12)),
        dim_r1: twice(&s.l_r1, &s.psi_r11.union(&s.psi_r12)),
        dim_r2: twice(&s.l_r2, &s.psi_r22.union(&s.psi_r21)),
        rank_h11: p2p_dof(&s.l_t1, &s.psi_t11, &s.l_r1, &s.psi_r11),
        rank_h12: p2p_dof(&s.l_t2, &s.psi_t12, &s.l_r1, &s.psi_r12),
        rank_h21: p2p_dof(&s.l_t1, &s.psi_t21, &s.l_r2, &s.psi_r21),
        rank_h22: p2p_dof(&s.l_t2, &s.psi_t22, &s.l_r2, &s.psi_r22),
        null_h12: cross_null(&s.l_t2, &s.psi_t22, &s.psi_t12, &s.l_r1, &s.psi_r12),
        null_h21: cross_null(&s.l_t1, &s.psi_t11, &s.psi_t21, &s.l_r2, &s.psi_r21),
        perp_h11: direct_perp(&s.l_r1, &s.psi_r11, &s.psi_r12, &s.l_t1, &s.psi_t11),
        perp_h22: direct_perp(&s.l_r2, &s.psi_r22, &s.psi_r21, &s.l_t2, &s.psi_t22),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library;
    use crate::sampling::{random_scenario, SamplingConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn iv(lo: Rational, hi: Rational) -> IntervalSet {
        IntervalSet::interval(lo, hi).unwrap()
    }

    #[test]
    fn validation_reports_fields() {
        let mut s = library::s4();
        assert!(s.validate().is_empty());
        s.l_t1 = r(0, 1);
        let v = s.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "l_t1 must be > 0");
        assert!(matches!(operator_dims(&s), Err(Error::InvalidScenario(_))));

        let mut raw = library::s4().to_raw();
        raw.supports[4] = vec![(r(0, 1), r(3, 2))];
        raw.lengths[3] = r(-1, 1);
        let v = raw.validate();
        assert_eq!(v.len(), 2);
        assert!(v.iter().any(|x| x.field == "psi_r11"));
        assert!(v.iter().any(|x| x.field == "l_r2"));
    }

    #[test]
    fn p2p_examples() {
        let unit = iv(r(0, 1), r(1, 1));
        assert_eq!(p2p_dof(&r(1, 1), &unit, &r(1, 1), &unit), r(2, 1));
        assert_eq!(p2p_dof(&r(1, 2), &unit, &r(1, 1), &unit), r(1, 1));
        assert_eq!(
            p2p_dof(&r(1, 1), &IntervalSet::empty(), &r(1, 1), &unit),
            r(0, 1)
        );
    }

    #[test]
    fn self_interference_rank_example() {
        let mut s = Scenario::with_lengths(r(1, 1), r(1, 1), r(1, 2), r(1, 1));
        s.psi_t12 = iv(r(0, 1), r(1, 2));
        s.psi_r12 = iv(r(0, 1), r(4, 5));
        assert_eq!(operator_dims(&s).unwrap().rank_h12, r(4, 5));
    }

    #[test]
    fn fully_overlapped_null_vanishes() {
        let psi = iv(r(0, 1), r(1, 2));
        let mut s = Scenario::with_lengths(r(1, 1), r(1, 2), r(1, 1), r(1, 1));
        s.psi_t22 = psi.clone();
        s.psi_t12 = psi.clone();
        s.psi_r12 = psi;
        assert_eq!(operator_dims(&s).unwrap().null_h12, r(0, 1));
    }

    #[test]
    fn s4_dimensions() {
        let d = operator_dims(&library::s4()).unwrap();
        assert_eq!(d.perp_h11, r(0, 1));
        assert_eq!(d.rank_h12, r(2, 5));
        assert_eq!(d.null_h12, r(8, 5));
        assert_eq!(d.dim_t2, r(2, 1));
        assert_eq!(d.dim_r1, r(1, 1));
    }

    #[test]
    fn random_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = SamplingConfig::default();
        for _ in 0..300 {
            let s = random_scenario(&mut rng, &cfg);
            let d = operator_dims(&s).unwrap();
            for (rank, t, r_) in [
                (&d.rank_h11, &d.dim_t1, &d.dim_r1),
                (&d.rank_h12, &d.dim_t2, &d.dim_r1),
                (&d.rank_h21, &d.dim_t1, &d.dim_r2),
                (&d.rank_h22, &d.dim_t2, &d.dim_r2),
            ] {
                assert!(rank <= t && rank <= r_);
            }
            // Rank-nullity inside each transmit space.
            assert_eq!(d.null_h12 + d.rank_h12, d.dim_t2);
            assert_eq!(d.null_h21 + d.rank_h21, d.dim_t1);
            assert_eq!(d.perp_h11 + d.rank_h11, d.dim_r1);
            assert_eq!(d.perp_h22 + d.rank_h22, d.dim_r2);

            assert_eq!(operator_dims(&s.swap_flows()).unwrap(), d.swap_flows());
            let c = r(5, 3);
            assert_eq!(
                operator_dims(&s.scale_lengths(&c)).unwrap(),
                d.map(|x| x * c)
            );
        }
    }

    #[test]
    fn monotone_under_support_enlargement() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cfg = SamplingConfig::default();
        for _ in 0..200 {
            let a = random_scenario(&mut rng, &cfg);
            let b = random_scenario(&mut rng, &cfg);
            let mut big = a.clone();
            big.psi_t11 = a.psi_t11.union(&b.psi_t11);
            big.psi_t12 = a.psi_t12.union(&b.psi_t12);
            big.psi_r21 = a.psi_r21.union(&b.psi_r21);
            big.psi_r22 = a.psi_r22.union(&b.psi_r22);
            let (small, large) = (operator_dims(&a).unwrap(), operator_dims(&big).unwrap());
            for (name, (x, y)) in OperatorDims::<Rational>::NAMES
                .iter()
                .zip(small.values().into_iter().zip(large.values()))
            {
                if name.starts_with("dim") || name.starts_with("rank") {
                    assert!(x <= y, "{name} decreased");
                }
            }
        }
    }
}
