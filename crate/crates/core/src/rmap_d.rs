//! The type-D combinatorial R as a piecewise-linear integer map.
//!
//! The map is assembled from the building blocks `alpha_{i,j}` and
//! `alpha'_{i,j}`, their maxima `V_i`, the twisted values `V_i^a`
//! obtained by precomposition with an automorphism, and the `W_i`.
//! All intermediates are surfaced through [`VwProfile`] so the limit
//! module and the verification suites can inspect them.

use crate::crystal::{apply_automorphism, Automorphism, ElementD};
use crate::error::{Error, Result};

fn check_pair(x: &ElementD, y: &ElementD) -> Result<usize> {
    if x.rank() != y.rank() {
        return Err(Error::DimensionMismatch { left: x.rank(), right: y.rank() });
    }
    Ok(x.rank())
}

fn check_vi(i: usize, n: usize) -> Result<()> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, min: 0, max: n });
    }
    Ok(())
}

fn check_j(j: usize, n: usize) -> Result<()> {
    if j < 1 || j > n - 1 {
        return Err(Error::IndexOutOfRange { index: j, min: 1, max: n - 1 });
    }
    Ok(())
}

fn beta(i: usize, n: usize, x: &ElementD, y: &ElementD) -> i64 {
    if i == n - 1 {
        0
    } else if i == n {
        x.low(n) - y.up(n)
    } else {
        x.up(n) - y.low(n)
    }
}

fn beta_prime(i: usize, n: usize, x: &ElementD, y: &ElementD) -> i64 {
    if i == n - 1 {
        (y.up(n) - 2 * x.low(n)).max(y.low(n) - 2 * x.up(n))
    } else if i == n {
        y.up(n) - x.low(n)
    } else {
        y.low(n) - x.up(n)
    }
}

/// `alpha_{i,j}(x, y)` for `i` in `0..=n`, `j` in `1..=n-1`.
pub fn alpha(i: usize, j: usize, x: &ElementD, y: &ElementD) -> Result<i64> {
    let n = check_pair(x, y)?;
    check_vi(i, n)?;
    check_j(j, n)?;
    let delta = if j == n - 1 { beta(i, n, x, y) } else { 0 };
    let head = delta.max(y.low(j) - x.up(j));
    let tail = if j <= i {
        x.shape() + (j + 1..=i).map(|k| y.low(k) - x.low(k)).sum::<i64>()
    } else {
        y.shape() + (i + 1..=j).map(|k| x.low(k) - y.low(k)).sum::<i64>()
    };
    Ok(head + tail)
}

/// `alpha'_{i,j}(x, y)` for `i` in `0..=n`, `j` in `1..=n-1`.
pub fn alpha_prime(i: usize, j: usize, x: &ElementD, y: &ElementD) -> Result<i64> {
    let n = check_pair(x, y)?;
    check_vi(i, n)?;
    check_j(j, n)?;
    let delta = if j == n - 1 { beta_prime(i, n, x, y) } else { 0 };
    let head = delta.max(x.up(j) - y.low(j));
    let tail = x.shape()
        + (1..=i).map(|k| y.low(k) - x.low(k)).sum::<i64>()
        + (1..=j).map(|k| y.up(k) - x.up(k)).sum::<i64>();
    Ok(head + tail)
}

/// `V_i = max over j of { alpha_{i,j}, alpha'_{i,j} }`.
pub fn vfun(i: usize, x: &ElementD, y: &ElementD) -> Result<i64> {
    let n = check_pair(x, y)?;
    check_vi(i, n)?;
    let mut best = i64::MIN;
    for j in 1..=n - 1 {
        best = best.max(alpha(i, j, x, y)?).max(alpha_prime(i, j, x, y)?);
    }
    Ok(best)
}

/// `V_i^a`: `V_i` precomposed with the automorphism `a`.
pub fn vfun_twisted(i: usize, a: Automorphism, x: &ElementD, y: &ElementD) -> Result<i64> {
    let (xt, yt) = apply_automorphism(a, x, y)?;
    vfun(i, &xt, &yt)
}

/// `W_i` for `i` in `1..=n-1`.
pub fn wfun(i: usize, x: &ElementD, y: &ElementD) -> Result<i64> {
    let n = check_pair(x, y)?;
    check_j(i, n)?;
    if i == n - 1 {
        return Ok(vfun(n, x, y)? + vfun_twisted(n, Automorphism::SigmaN, x, y)?);
    }
    let v_i = vfun(i, x, y)?;
    let v_im1 = vfun(i - 1, x, y)?;
    let vs_i = vfun_twisted(i, Automorphism::Star, x, y)?;
    let vs_im1 = vfun_twisted(i - 1, Automorphism::Star, x, y)?;
    Ok((v_i + vs_im1 - y.up(i)).max(v_im1 + vs_i - x.low(i)) + x.up(i).min(y.low(i)))
}

/// Every `V`/`W` intermediate entering the output display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VwProfile {
    /// `V_0..V_n`, indexed directly.
    pub v: Vec<i64>,
    /// `V_0^*..V_n^*`.
    pub vstar: Vec<i64>,
    /// `V_0^{sigma_1}`.
    pub v0_sigma1: i64,
    /// `V_n^{sigma_n}`.
    pub vn_sigman: i64,
    /// `W_1..W_{n-1}`; `w[i]` holds `W_i`, slot 0 unused.
    pub w: Vec<i64>,
}

pub fn vw_profile(x: &ElementD, y: &ElementD) -> Result<VwProfile> {
    let n = check_pair(x, y)?;
    let v: Vec<i64> = (0..=n).map(|i| vfun(i, x, y)).collect::<Result<_>>()?;
    let vstar: Vec<i64> = (0..=n)
        .map(|i| vfun_twisted(i, Automorphism::Star, x, y))
        .collect::<Result<_>>()?;
    let v0_sigma1 = vfun_twisted(0, Automorphism::Sigma1, x, y)?;
    let vn_sigman = vfun_twisted(n, Automorphism::SigmaN, x, y)?;
    let mut w = vec![0i64; n];
    for i in 1..=n - 1 {
        w[i] = wfun(i, x, y)?;
    }
    Ok(VwProfile { v, vstar, v0_sigma1, vn_sigman, w })
}

/// Applies the type-D combinatorial R: `(x, y) -> (x', y')`, shapes swapped.
pub fn apply_r_d(x: &ElementD, y: &ElementD) -> Result<(ElementD, ElementD)> {
    let (xp, yp, _) = apply_r_d_with_profile(x, y)?;
    Ok((xp, yp))
}

/// As [`apply_r_d`], also surfacing the `V`/`W` intermediates.
pub fn apply_r_d_with_profile(
    x: &ElementD,
    y: &ElementD,
) -> Result<(ElementD, ElementD, VwProfile)> {
    let n = check_pair(x, y)?;
    if n < 3 {
        return Err(Error::UnsupportedRank { n, min: 3 });
    }
    let p = vw_profile(x, y)?;

    let mut xu = vec![0i64; n];
    let mut xl = vec![0i64; n];
    let mut yu = vec![0i64; n];
    let mut yl = vec![0i64; n];

    xu[0] = y.up(1) + p.v0_sigma1 - p.v[1];
    for i in 2..=n - 1 {
        xu[i - 1] = y.up(i) + p.v[i - 1] - p.v[i] + p.w[i] - p.w[i - 1];
    }
    xu[n - 1] = y.up(n) + p.v[n - 1] - p.vn_sigman;
    for i in 1..=n {
        xl[i - 1] = y.low(i) + p.v[i - 1] - p.v[i];
        yu[i - 1] = x.up(i) + p.vstar[i - 1] - p.vstar[i];
    }
    yl[0] = x.low(1) + p.v0_sigma1 - p.vstar[1];
    for i in 2..=n - 1 {
        yl[i - 1] = x.low(i) + p.vstar[i - 1] - p.vstar[i] + p.w[i] - p.w[i - 1];
    }
    yl[n - 1] = x.low(n) + p.vstar[n - 1] - p.vn_sigman;

    let xp = ElementD::new(xu, xl)
        .map_err(|e| Error::InternalInvariantViolation(format!("x' invalid: {e}")))?;
    let yp = ElementD::new(yu, yl)
        .map_err(|e| Error::InternalInvariantViolation(format!("y' invalid: {e}")))?;
    if xp.shape() != y.shape() || yp.shape() != x.shape() {
        return Err(Error::InternalInvariantViolation("shape swap failed".into()));
    }
    Ok((xp, yp, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{elements_d, ElementA};
    use crate::rmap_a;

    fn ed(u: &[i64], l: &[i64]) -> ElementD {
        ElementD::new(u.to_vec(), l.to_vec()).unwrap()
    }

    #[test]
    fn alpha_empty_sum_case() {
        // i = j hits the empty-sum branch: alpha = max(.., ybar_j - x_j) + l(x)
        let x = ed(&[1, 0, 2], &[0, 1, 0]);
        let y = ed(&[0, 1, 1], &[1, 0, 0]);
        let a = alpha(1, 1, &x, &y).unwrap();
        assert_eq!(a, 0i64.max(y.low(1) - x.up(1)) + x.shape());
    }

    #[test]
    fn alpha_vacuum_against_letter() {
        let x = ElementD::vacuum(3, 5).unwrap();
        let y = ed(&[1, 0, 0], &[0, 0, 0]);
        // j > i branch: l(y) + (xbar_1 - ybar_1) = 1
        assert_eq!(alpha(0, 1, &x, &y).unwrap(), 1);
    }

    #[test]
    fn beta_cases() {
        let x = ed(&[0, 1, 2], &[1, 0, 0]);
        let y = ed(&[1, 0, 0], &[0, 1, 1]);
        let n = 3;
        assert_eq!(beta(n - 1, n, &x, &y), 0);
        assert_eq!(beta(n, n, &x, &y), x.low(n) - y.up(n));
        assert_eq!(beta_prime(n, n, &x, &y), y.up(n) - x.low(n));
        // barred n-coordinates zero: beta'_{n-1} = y_n
        let x0 = ed(&[0, 1, 2], &[1, 0, 0]);
        let y0 = ed(&[1, 0, 1], &[0, 1, 0]);
        assert_eq!(beta_prime(n - 1, n, &x0, &y0), y0.up(n).max(y0.low(n) - 2 * x0.up(n)));
    }

    #[test]
    fn twisting_twice_is_identity() {
        for x in elements_d(3, 2) {
            for y in elements_d(3, 1) {
                for a in [Automorphism::Star, Automorphism::Sigma1, Automorphism::SigmaN] {
                    let (xt, yt) = apply_automorphism(a, &x, &y).unwrap();
                    for i in 0..=3 {
                        assert_eq!(
                            vfun_twisted(i, a, &xt, &yt).unwrap(),
                            vfun(i, &x, &y).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn star_fixes_v0_and_vn_on_symmetric_pairs() {
        for x in elements_d(3, 2) {
            for i in [0usize, 3] {
                assert_eq!(
                    vfun(i, &x, &x).unwrap(),
                    vfun_twisted(i, Automorphism::Star, &x, &x).unwrap()
                );
            }
        }
    }

    #[test]
    fn lemma_v_n_minus_1_identity() {
        for x in elements_d(3, 2) {
            for y in elements_d(3, 2) {
                let n = 3;
                let lhs = vfun(n - 1, &x, &y).unwrap();
                let rhs = (vfun(n, &x, &y).unwrap() - y.low(n))
                    .max(vfun_twisted(n, Automorphism::SigmaN, &x, &y).unwrap() - y.up(n));
                assert_eq!(lhs, rhs, "x={x:?} y={y:?}");
            }
        }
    }

    #[test]
    fn w1_equals_v0_plus_v0_sigma1() {
        for x in elements_d(3, 2) {
            for y in elements_d(3, 1) {
                assert_eq!(
                    wfun(1, &x, &y).unwrap(),
                    vfun(0, &x, &y).unwrap()
                        + vfun_twisted(0, Automorphism::Sigma1, &x, &y).unwrap()
                );
            }
        }
    }

    #[test]
    fn barred_zero_reduction_to_type_a() {
        for xa in crate::crystal::elements_a(3, 2) {
            for ya in crate::crystal::elements_a(3, 2) {
                let x = ElementD::from_element_a(&xa);
                let y = ElementD::from_element_a(&ya);
                let lx = x.shape();
                let p1 = rmap_a::pfun(1, &xa, &ya).unwrap();
                for i in 0..=3usize {
                    assert_eq!(vfun(i, &x, &y).unwrap(), lx + p1, "V_{i}");
                    let p_next = rmap_a::pfun(if i == 3 { 1 } else { i + 1 }, &xa, &ya).unwrap();
                    assert_eq!(
                        vfun_twisted(i, Automorphism::Star, &x, &y).unwrap(),
                        lx + p_next,
                        "V*_{i}"
                    );
                }
                assert_eq!(
                    vfun_twisted(0, Automorphism::Sigma1, &x, &y).unwrap(),
                    lx + rmap_a::pfun(2, &xa, &ya).unwrap()
                );
                assert_eq!(
                    vfun_twisted(3, Automorphism::SigmaN, &x, &y).unwrap(),
                    lx + rmap_a::pfun(3, &xa, &ya).unwrap()
                );
                for i in 1..=2usize {
                    assert_eq!(
                        wfun(i, &x, &y).unwrap(),
                        2 * lx
                            + rmap_a::pfun(1, &xa, &ya).unwrap()
                            + rmap_a::pfun(i + 1, &xa, &ya).unwrap()
                    );
                }
                // Theorem: the full map agrees with the type-A map
                let (xp, yp) = apply_r_d(&x, &y).unwrap();
                let (xap, yap) = rmap_a::apply_r_a(&xa, &ya).unwrap();
                assert!(xp.is_barred_zero() && yp.is_barred_zero());
                assert_eq!(xp.upper(), xap.coords());
                assert_eq!(yp.upper(), yap.coords());
            }
        }
    }

    #[test]
    fn specific_reduction_example() {
        let x = ed(&[1, 0, 5], &[0, 0, 0]);
        let y = ed(&[0, 1, 0], &[0, 0, 0]);
        let (xp, yp) = apply_r_d(&x, &y).unwrap();
        let (xa, ya) = rmap_a::apply_r_a(
            &ElementA::new(vec![1, 0, 5]).unwrap(),
            &ElementA::new(vec![0, 1, 0]).unwrap(),
        )
        .unwrap();
        assert_eq!(xp.upper(), xa.coords());
        assert_eq!(yp.upper(), ya.coords());
        assert!(xp.is_barred_zero() && yp.is_barred_zero());
    }

    #[test]
    fn vacuum_pairs_swap_shapes() {
        let (xp, yp) =
            apply_r_d(&ElementD::vacuum(3, 7).unwrap(), &ElementD::vacuum(3, 2).unwrap()).unwrap();
        assert_eq!(xp, ElementD::vacuum(3, 2).unwrap());
        assert_eq!(yp, ElementD::vacuum(3, 7).unwrap());
    }

    #[test]
    fn conservation_and_involution() {
        for lx in 1..=2 {
            for ly in 1..=2 {
                for x in elements_d(3, lx) {
                    for y in elements_d(3, ly) {
                        let (xp, yp) = apply_r_d(&x, &y).unwrap();
                        for i in 1..=3 {
                            assert_eq!(
                                (x.up(i) - x.low(i)) + (y.up(i) - y.low(i)),
                                (xp.up(i) - xp.low(i)) + (yp.up(i) - yp.low(i)),
                                "weight at {i}: x={x:?} y={y:?}"
                            );
                        }
                        let (xb, yb) = apply_r_d(&xp, &yp).unwrap();
                        assert_eq!((xb, yb), (x.clone(), y.clone()));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_rank_two() {
        let x = ed(&[1, 0], &[0, 0]);
        assert!(matches!(apply_r_d(&x, &x), Err(Error::UnsupportedRank { .. })));
    }
}
