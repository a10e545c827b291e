//! Finite unions of half-open subintervals of the directional-cosine axis.
//!
//! Every scattering support in the network model is an [`IntervalSet`], and
//! every `|Ψ|` in the dimension formulas is its [`measure`](IntervalSet::measure).
//! Sets are kept in canonical form (sorted, disjoint, non-touching pieces), so
//! structural equality is set equality.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet<S = Rational> {
    pieces: Vec<(S, S)>,
}

impl<S: Scalar> IntervalSet<S> {
    pub fn empty() -> Self {
        Self { pieces: Vec::new() }
    }

    /// The whole axis `[-1, 1)`.
    pub fn full() -> Self {
        Self {
            pieces: vec![(-S::one(), S::one())],
        }
    }

    /// Single interval `[lo, hi)`.
    pub fn interval(lo: S, hi: S) -> Result<Self> {
        Self::normalize([(lo, hi)])
    }

    /// Builds the canonical set covering the given `[lo, hi)` pairs.
    ///
    /// Overlapping and touching pairs are merged and empty pairs dropped.
    pub fn normalize<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
    {
        let lower = -S::one();
        let upper = S::one();
        let mut pieces = Vec::new();
        for (lo, hi) in raw {
            // Written so that NaN endpoints land here too.
            if !(lo >= lower && hi <= upper && lo <= upper && hi >= lower) {
                return Err(Error::OutOfRange {
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
            if lo > hi {
                return Err(Error::MalformedPair {
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
            if lo < hi {
                pieces.push((lo, hi));
            }
        }
        Ok(Self::from_valid_pieces(pieces))
    }

    /// Merges pieces already known to be in range with `lo < hi`.
    fn from_valid_pieces(mut pieces: Vec<(S, S)>) -> Self {
        pieces.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("endpoints are comparable"));
        let mut merged: Vec<(S, S)> = Vec::with_capacity(pieces.len());
        for (lo, hi) in pieces {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        Self { pieces: merged }
    }

    pub fn pieces(&self) -> &[(S, S)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Lebesgue measure: the sum of piece lengths.
    pub fn measure(&self) -> S {
        self.pieces
            .iter()
            .fold(S::zero(), |acc, (lo, hi)| acc + (hi.clone() - lo.clone()))
    }

    pub fn union(&self, other: &Self) -> Self {
        let pieces = self.pieces.iter().chain(&other.pieces).cloned().collect();
        Self::from_valid_pieces(pieces)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a_lo, a_hi) = &self.pieces[i];
            let (b_lo, b_hi) = &other.pieces[j];
            let lo = if a_lo > b_lo { a_lo } else { b_lo };
            let hi = if a_hi < b_hi { a_hi } else { b_hi };
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a_hi < b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { pieces: out }
    }

    /// Points of `self` not in `other`.
    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let mut j = 0;
        for (lo, hi) in &self.pieces {
            let mut cursor = lo.clone();
            while j < other.pieces.len() && other.pieces[j].1 <= cursor {
                j += 1;
            }
            let mut k = j;
            while k < other.pieces.len() && other.pieces[k].0 < *hi {
                let (b_lo, b_hi) = &other.pieces[k];
                if *b_lo > cursor {
                    out.push((cursor.clone(), b_lo.clone()));
                }
                if *b_hi > cursor {
                    cursor = b_hi.clone();
                }
                if cursor >= *hi {
                    break;
                }
                k += 1;
            }
            if cursor < *hi {
                out.push((cursor, hi.clone()));
            }
        }
        Self { pieces: out }
    }

    /// Half-open membership test.
    pub fn contains_point(&self, x: &S) -> bool {
        self.pieces.iter().any(|(lo, hi)| lo <= x && x < hi)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Every endpoint of every piece, in increasing order.
    pub fn endpoints(&self) -> impl Iterator<Item = &S> {
        self.pieces.iter().flat_map(|(lo, hi)| [lo, hi])
    }

    /// Converts the endpoints into another scalar type.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> IntervalSet<T> {
        IntervalSet {
            pieces: self.pieces.iter().map(|(lo, hi)| (f(lo), f(hi))).collect(),
        }
    }
}

impl<S: Scalar> Default for IntervalSet<S> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<S: Scalar> fmt::Display for IntervalSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(lo, hi)| format!("[{lo}, {hi})"))
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}
