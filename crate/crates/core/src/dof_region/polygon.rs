//! Convex polygons in the closed first quadrant with exact predicates.

use std::fmt;

use crate::scalar::Scalar;
use crate::Rational;

/// A `(d₁, d₂)` degrees-of-freedom tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S = Rational> {
    pub d1: S,
    pub d2: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(d1: S, d2: S) -> Self {
        Self { d1, d2 }
    }

    pub fn origin() -> Self {
        Self::new(S::zero(), S::zero())
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.d2.clone(), self.d1.clone())
    }

    fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.d1
            .partial_cmp(&other.d1)
            .and_then(|o| Some(o.then(self.d2.partial_cmp(&other.d2)?)))
            .expect("coordinates are comparable")
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// Twice the signed area of triangle `(o, a, b)`; positive for a left turn.
fn cross<S: Scalar>(o: &Point<S>, a: &Point<S>, b: &Point<S>) -> S {
    (a.d1.clone() - o.d1.clone()) * (b.d2.clone() - o.d2.clone())
        - (a.d2.clone() - o.d2.clone()) * (b.d1.clone() - o.d1.clone())
}

/// Convex region of achievable `(d₁, d₂)` tuples.
///
/// Vertices run counter-clockwise from the origin with duplicate and
/// collinear vertices removed. Zero-area regions collapse to a segment (two
/// vertices) or the single origin vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct DofRegion<S = Rational> {
    vertices: Vec<Point<S>>,
}

impl<S: Scalar> DofRegion<S> {
    /// Convex hull of the origin and `points`, which must lie in the closed
    /// first quadrant.
    pub fn hull<I: IntoIterator<Item = Point<S>>>(points: I) -> Self {
        let mut pts: Vec<Point<S>> = std::iter::once(Point::origin()).chain(points).collect();
        debug_assert!(pts.iter().all(|p| p.d1 >= S::zero() && p.d2 >= S::zero()));
        pts.sort_by(|a, b| a.lex_cmp(b));
        pts.dedup();
        if pts.len() < 3 {
            return Self { vertices: pts };
        }

        // Monotone chain; collinear points are popped.
        let mut hull: Vec<Point<S>> = Vec::with_capacity(pts.len() + 1);
        let turns_left = |hull: &[Point<S>], p: &Point<S>| {
            cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) > S::zero()
        };
        for p in &pts {
            while hull.len() >= 2 && !turns_left(&hull, p) {
                hull.pop();
            }
            hull.push(p.clone());
        }
        let lower_len = hull.len() + 1;
        for p in pts.iter().rev().skip(1) {
            while hull.len() >= lower_len && !turns_left(&hull, p) {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
        Self { vertices: hull }
    }

    pub fn vertices(&self) -> &[Point<S>] {
        &self.vertices
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        let v = &self.vertices;
        match v.len() {
            1 => *p == v[0],
            2 => {
                let within = |x: &S, a: &S, b: &S| {
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    lo <= x && x <= hi
                };
                cross(&v[0], &v[1], p).is_zero()
                    && within(&p.d1, &v[0].d1, &v[1].d1)
                    && within(&p.d2, &v[0].d2, &v[1].d2)
            }
            n => (0..n).all(|i| cross(&v[i], &v[(i + 1) % n], p) >= S::zero()),
        }
    }

    /// Containment of convex regions: every vertex of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.vertices.iter().all(|p| other.contains(p))
    }

    pub fn d1_extent(&self) -> S {
        self.vertices
            .iter()
            .map(|p| p.d1.clone())
            .fold(S::zero(), crate::scalar::max_of)
    }

    pub fn d2_extent(&self) -> S {
        self.vertices
            .iter()
            .map(|p| p.d2.clone())
            .fold(S::zero(), crate::scalar::max_of)
    }

    /// Largest `d₁ + d₂` over the region.
    pub fn max_sum(&self) -> S {
        self.vertices
            .iter()
            .map(|p| p.d1.clone() + p.d2.clone())
            .fold(S::zero(), crate::scalar::max_of)
    }

    /// Equal to the full box `[0, d₁ extent] × [0, d₂ extent]`.
    pub fn is_rectangular(&self) -> bool {
        self.contains(&Point::new(self.d1_extent(), self.d2_extent()))
    }

    pub fn swap_axes(&self) -> Self {
        Self::hull(self.vertices.iter().map(Point::swapped))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::hull(
            self.vertices
                .iter()
                .map(|p| Point::new(p.d1.clone() * c.clone(), p.d2.clone() * c.clone())),
        )
    }
}

impl<S: Scalar> fmt::Display for DofRegion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}
