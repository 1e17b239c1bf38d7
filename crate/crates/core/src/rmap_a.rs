//! The type-A combinatorial R as a piecewise-linear integer map, together
//! with its large-carrier limit recursions.
//!
//! For a pair `(x, y)` of same-rank elements the map sends
//! `x'_i = y_i + P_{i+1} - P_i` and `y'_i = x_i + P_i - P_{i+1}` where
//! `P_i` is a cyclic max-plus expression in the coordinates.  All
//! subscripts are reduced into `1..=n` modulo `n`.

use crate::crystal::ElementA;
use crate::error::{Error, Result};

fn check_pair(x: &ElementA, y: &ElementA) -> Result<usize> {
    if x.rank() != y.rank() {
        return Err(Error::DimensionMismatch { left: x.rank(), right: y.rank() });
    }
    Ok(x.rank())
}

/// Reduces a 1-based subscript into `1..=n`.
fn wrap(k: i64, n: usize) -> usize {
    ((k - 1).rem_euclid(n as i64) + 1) as usize
}

/// `P_i(x, y)` per the defining max-plus expression, `i` in `1..=n`.
pub fn pfun(i: usize, x: &ElementA, y: &ElementA) -> Result<i64> {
    let n = check_pair(x, y)?;
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i, min: 1, max: n });
    }
    let mut best = i64::MIN;
    let mut prefix = 0i64;
    for j in 1..=n {
        // prefix = sum_{k=1}^{j-1} (y_{k+i-1} - x_{k+i-1})
        let cand = prefix + y.coord(wrap((j + i - 1) as i64, n));
        best = best.max(cand);
        let k = wrap((j + i - 1) as i64, n);
        prefix += y.coord(k) - x.coord(k);
    }
    Ok(best)
}

/// All of `P_1..P_n` at once.
pub fn pvalues(x: &ElementA, y: &ElementA) -> Result<Vec<i64>> {
    let n = check_pair(x, y)?;
    (1..=n).map(|i| pfun(i, x, y)).collect()
}

/// Applies the combinatorial R: `(x, y) -> (x', y')` with the shapes swapped.
pub fn apply_r_a(x: &ElementA, y: &ElementA) -> Result<(ElementA, ElementA)> {
    let (xp, yp, _) = apply_r_a_with_pvalues(x, y)?;
    Ok((xp, yp))
}

/// As [`apply_r_a`], also surfacing the `P_i` intermediates.
pub fn apply_r_a_with_pvalues(x: &ElementA, y: &ElementA) -> Result<(ElementA, ElementA, Vec<i64>)> {
    let n = check_pair(x, y)?;
    let p = pvalues(x, y)?;
    let mut xp = Vec::with_capacity(n);
    let mut yp = Vec::with_capacity(n);
    for i in 1..=n {
        let p_i = p[i - 1];
        let p_next = p[i % n]; // P_{n+1} = P_1
        xp.push(y.coord(i) + p_next - p_i);
        yp.push(x.coord(i) + p_i - p_next);
    }
    let xp = ElementA::new(xp)
        .map_err(|e| Error::InternalInvariantViolation(format!("x' invalid: {e}")))?;
    let yp = ElementA::new(yp)
        .map_err(|e| Error::InternalInvariantViolation(format!("y' invalid: {e}")))?;
    if xp.shape() != y.shape() || yp.shape() != x.shape() {
        return Err(Error::InternalInvariantViolation("shape swap failed".into()));
    }
    Ok((xp, yp, p))
}

/// The `x_n -> infinity` limit `p_i` of `P_i`, via the descending recursion
/// `p_n = y_n`, `p_i = max(y_i, y_i - x_i + p_{i+1})`.
pub fn pfun_limit(i: usize, x: &ElementA, y: &ElementA) -> Result<i64> {
    let n = check_pair(x, y)?;
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i, min: 1, max: n });
    }
    Ok(pfun_limit_all(x, y)?[i - 1])
}

/// All of `p_1..p_n`.
pub fn pfun_limit_all(x: &ElementA, y: &ElementA) -> Result<Vec<i64>> {
    let n = check_pair(x, y)?;
    let mut p = vec![0i64; n];
    p[n - 1] = y.coord(n);
    for i in (1..n).rev() {
        p[i - 1] = (y.coord(i)).max(y.coord(i) - x.coord(i) + p[i]);
    }
    Ok(p)
}

/// The limiting site output `x'_i = min(p_{i+1}, x_i)` for `1 <= i <= n-1`.
pub fn limit_site_output(x: &ElementA, y: &ElementA) -> Result<Vec<i64>> {
    let n = check_pair(x, y)?;
    let p = pfun_limit_all(x, y)?;
    Ok((1..n).map(|i| p[i].min(x.coord(i))).collect())
}
