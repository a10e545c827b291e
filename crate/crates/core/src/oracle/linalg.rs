//! Small dense numerical rank and subspace routines on top of nalgebra's SVD.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Singular values at or below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Principal angles below this many radians count as a shared direction.
pub const ANGLE_TOLERANCE: f64 = 1e-6;

/// Minimum separation, as a ratio, between singular values and the cutoff.
pub const GAP_RATIO: f64 = 10.0;

/// Counts values above `cutoff`, refusing when any value sits within
/// [`GAP_RATIO`] of it.
fn count_above(values: &[f64], cutoff: f64, context: &str) -> Result<usize> {
    if values
        .iter()
        .any(|&v| v > cutoff / GAP_RATIO && v < cutoff * GAP_RATIO)
    {
        return Err(Error::IllConditioned {
            context: context.to_owned(),
        });
    }
    Ok(values.iter().filter(|&&v| v > cutoff).count())
}

/// Singular values in decreasing order together with a full orthogonal
/// `rows × rows` left factor whose columns follow the same order.
fn full_left_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let rows = m.nrows();
    if rows == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    // Zero columns make U square without changing the column space.
    let cols = m.ncols().max(rows);
    let mut padded = DMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (rows, m.ncols())).copy_from(m);
    let svd = padded.svd(true, false);
    let u = svd.u.expect("left factor requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u = DMatrix::from_fn(rows, rows, |r, c| u[(r, order[c])]);
    (values, u)
}

fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Number of singular values above `rel_tol · σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> Result<usize> {
    let values = singular_values(m);
    match values.first() {
        Some(&top) if top > 0.0 => count_above(&values, rel_tol * top, "rank"),
        _ => Ok(0),
    }
}

/// Orthonormal bases of the column space of `m` and of its orthogonal
/// complement in `ℝ^rows`.
pub fn range_and_complement(
    m: &DMatrix<f64>,
    rel_tol: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let rows = m.nrows();
    let (values, u) = full_left_svd(m);
    let rank = match values.first() {
        Some(&top) if top > 0.0 => count_above(&values, rel_tol * top, "range")?,
        _ => 0,
    };
    Ok((
        u.columns(0, rank).into_owned(),
        u.columns(rank, rows - rank).into_owned(),
    ))
}

/// Dimension of `span(a) ∩ span(b)` for orthonormal bases `a`, `b`.
///
/// The singular values of `(I − aaᵀ)b` are the sines of the principal angles
/// between the two subspaces; zero angles are shared directions.
pub fn intersection_dim(a: &DMatrix<f64>, b: &DMatrix<f64>, angle_tol: f64) -> Result<usize> {
    if a.ncols() == 0 || b.ncols() == 0 {
        return Ok(0);
    }
    let residual = b - a * (a.transpose() * b);
    let sines = singular_values(&residual);
    let separated = count_above(&sines, angle_tol.sin(), "principal angles")?;
    Ok(b.ncols() - separated)
}
