//! Finite discretization of the four array signal spaces.
//!
//! Overlaying every support endpoint splits the cosine axis into atomic
//! intervals that are either inside or outside each support. An array of
//! half-length `L` resolves `2L·|atom|` dimensions per atom; multiplying by
//! the grid density `G` makes every such count an integer.

use nalgebra::DMatrix;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::interval_set::IntervalSet;
use crate::scenario::Scenario;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub lo: Rational,
    pub hi: Rational,
    /// First coordinate of this atom inside the array's signal space.
    pub offset: usize,
    pub dim: usize,
}

/// Coordinates of one array's discretized signal space.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrayGrid {
    pub atoms: Vec<Atom>,
}

impl ArrayGrid {
    pub fn dim(&self) -> usize {
        self.atoms.iter().map(|a| a.dim).sum()
    }

    /// Coordinates whose atoms lie inside `support`.
    pub fn coordinates_in(&self, support: &IntervalSet) -> Vec<usize> {
        self.atoms
            .iter()
            .filter(|a| support.contains_point(&((a.lo + a.hi) / 2)))
            .flat_map(|a| a.offset..a.offset + a.dim)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscretizedScenario {
    pub scenario: Scenario,
    pub grid_density: u64,
    pub t1: ArrayGrid,
    pub t2: ArrayGrid,
    pub r1: ArrayGrid,
    pub r2: ArrayGrid,
}

fn breakpoints(s: &Scenario) -> Vec<Rational> {
    let mut points: Vec<Rational> = s
        .supports()
        .iter()
        .flat_map(|set| set.endpoints().copied())
        .collect();
    points.sort();
    points.dedup();
    points
}

/// Atoms of the union support, each paired with its unscaled dimension `2L·|atom|`.
fn array_atoms(
    points: &[Rational],
    l: &Rational,
    union: &IntervalSet,
) -> Vec<(Rational, Rational, Rational)> {
    points
        .windows(2)
        .filter(|w| union.contains_point(&((w[0] + w[1]) / 2)))
        .map(|w| (w[0], w[1], Rational::from_integer(2) * l * (w[1] - w[0])))
        .collect()
}

fn array_unions(s: &Scenario) -> [(Rational, IntervalSet); 4] {
    [
        (s.l_t1, s.psi_t11.union(&s.psi_t21)),
        (s.l_t2, s.psi_t22.union(&s.psi_t12)),
        (s.l_r1, s.psi_r11.union(&s.psi_r12)),
        (s.l_r2, s.psi_r22.union(&s.psi_r21)),
    ]
}

/// Least grid density making every atomic block dimension an integer.
pub fn suggest_density(s: &Scenario) -> u64 {
    let points = breakpoints(s);
    let density = array_unions(s)
        .iter()
        .flat_map(|(l, union)| array_atoms(&points, l, union))
        .fold(1i64, |acc, (_, _, dim)| acc.lcm(dim.denom()));
    u64::try_from(density).expect("denominators are positive")
}

pub fn discretize(s: &Scenario, density: u64) -> Result<DiscretizedScenario> {
    s.check()?;
    let non_integral = || Error::NonIntegralGrid {
        density,
        suggested: suggest_density(s),
    };
    let g = Rational::from_integer(i64::try_from(density).map_err(|_| non_integral())?);
    if density == 0 {
        return Err(non_integral());
    }
    let points = breakpoints(s);
    let mut grids = Vec::with_capacity(4);
    for (l, union) in array_unions(s) {
        let mut offset = 0;
        let mut atoms = Vec::new();
        for (lo, hi, dim) in array_atoms(&points, &l, &union) {
            let scaled = dim * g;
            if !scaled.is_integer() {
                return Err(non_integral());
            }
            let dim = usize::try_from(scaled.to_integer()).map_err(|_| non_integral())?;
            atoms.push(Atom {
                lo,
                hi,
                offset,
                dim,
            });
            offset += dim;
        }
        grids.push(ArrayGrid { atoms });
    }
    let [t1, t2, r1, r2]: [ArrayGrid; 4] = grids.try_into().expect("four arrays");
    Ok(DiscretizedScenario {
        scenario: s.clone(),
        grid_density: density,
        t1,
        t2,
        r1,
        r2,
    })
}

/// Generic finite kernels: `hij` maps T_j's grid to R_i's grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Channels {
    pub h11: DMatrix<f64>,
    pub h12: DMatrix<f64>,
    pub h21: DMatrix<f64>,
    pub h22: DMatrix<f64>,
}

fn block(
    rng: &mut ChaCha8Rng,
    rx: &ArrayGrid,
    rx_support: &IntervalSet,
    tx: &ArrayGrid,
    tx_support: &IntervalSet,
) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rx.dim(), tx.dim());
    let rows = rx.coordinates_in(rx_support);
    let cols = tx.coordinates_in(tx_support);
    if rows.is_empty() || cols.is_empty() {
        return m;
    }
    for &r in &rows {
        for &c in &cols {
            m[(r, c)] = StandardNormal.sample(rng);
        }
    }
    m
}

/// Draws standard-normal entries on each operator's support block; entries
/// outside the block are exactly zero. Deterministic in `seed`.
pub fn sample_channels(d: &DiscretizedScenario, seed: u64) -> Channels {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = &d.scenario;
    let h11 = block(&mut rng, &d.r1, &s.psi_r11, &d.t1, &s.psi_t11);
    let h12 = block(&mut rng, &d.r1, &s.psi_r12, &d.t2, &s.psi_t12);
    let h21 = block(&mut rng, &d.r2, &s.psi_r21, &d.t1, &s.psi_t21);
    let h22 = block(&mut rng, &d.r2, &s.psi_r22, &d.t2, &s.psi_t22);
    Channels { h11, h12, h21, h22 }
}
