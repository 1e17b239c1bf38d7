//! Normalized large-carrier limits of the `V_i` and `W_i` functions.
//!
//! The limits are taken with `x_n -> infinity, xbar_n -> 0`, subtracting
//! `l(x)` (for `V`) or `2 l(x)` (for `W`).  Over the integers every
//! max-plus expression stabilizes exactly, so the limit is computed by
//! finite saturation with a two-point witness: evaluate at `x_n = M` and
//! `x_n = M + 1` and require equality.  Twisted limits are obtained by
//! twisting before taking the limit; this commutes with the limit only
//! for `sigma_1`.

use crate::crystal::{Automorphism, ElementD};
use crate::error::{Error, Result};
use crate::rmap_d::{vfun, vfun_twisted, wfun};

/// Which limiting function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitVariant {
    /// `v_i`.
    Plain,
    /// `v_i^*`.
    Star,
    /// `v_i^{sigma_1}` (used at `i = 0`).
    Sigma1,
    /// `v_i^{sigma_n}` (used at `i = n`).
    SigmaN,
}

/// The complete set of limit values entering the factorized output display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitProfile {
    /// `v_0..v_n`.
    pub v: Vec<i64>,
    /// `v_0^*..v_n^*`.
    pub vstar: Vec<i64>,
    /// `v_0^{sigma_1}`.
    pub v0_sigma1: i64,
    /// `v_n^{sigma_n}`.
    pub vn_sigman: i64,
    /// `w_0..w_{n-1}` with `w_0 = 2 v_0` by convention.
    pub w: Vec<i64>,
}

fn require_barred_n_zero(x: &ElementD) -> Result<usize> {
    let n = x.rank();
    if x.low(n) != 0 {
        return Err(Error::ConstraintViolation { upper: x.up(n), lower: x.low(n) });
    }
    Ok(n)
}

/// Starting saturation level: every other coordinate of `x` and `y`, plus one.
fn base_level(x: &ElementD, y: &ElementD) -> i64 {
    let n = x.rank();
    x.upper()[..n - 1].iter().sum::<i64>()
        + x.lower().iter().sum::<i64>()
        + y.shape()
        + 1
}

const SATURATION_DOUBLINGS: u32 = 6;

/// Evaluates `f(x[x_n = M], y)` at two consecutive saturation points and
/// returns the stable value, doubling `M` a few times before giving up.
fn stabilize(x: &ElementD, y: &ElementD, f: impl Fn(&ElementD, &ElementD) -> Result<i64>) -> Result<i64> {
    let mut m = base_level(x, y);
    for _ in 0..=SATURATION_DOUBLINGS {
        let a = f(&x.with_upper_n(m)?, y)?;
        let b = f(&x.with_upper_n(m + 1)?, y)?;
        if a == b {
            return Ok(a);
        }
        m *= 2;
    }
    Err(Error::NotStabilized)
}

/// `lim* V_i^a = lim_{x_n -> inf, xbar_n -> 0} (V_i^a(x, y) - l(x))`,
/// computed by saturation.  `x` must already have `xbar_n = 0`; its `x_n`
/// value is ignored.
pub fn vlim_direct(i: usize, variant: LimitVariant, x: &ElementD, y: &ElementD) -> Result<i64> {
    require_barred_n_zero(x)?;
    stabilize(x, y, |xs, ys| {
        let raw = match variant {
            LimitVariant::Plain => vfun(i, xs, ys)?,
            LimitVariant::Star => vfun_twisted(i, Automorphism::Star, xs, ys)?,
            LimitVariant::Sigma1 => vfun_twisted(i, Automorphism::Sigma1, xs, ys)?,
            LimitVariant::SigmaN => vfun_twisted(i, Automorphism::SigmaN, xs, ys)?,
        };
        Ok(raw - xs.shape())
    })
}

/// Direct limit `lim** W_i` for `1 <= i <= n-1` (`w_0 = 2 v_0` by convention).
pub fn wlim_direct(i: usize, x: &ElementD, y: &ElementD) -> Result<i64> {
    require_barred_n_zero(x)?;
    if i == 0 {
        return Ok(2 * vlim_direct(0, LimitVariant::Plain, x, y)?);
    }
    stabilize(x, y, |xs, ys| Ok(wfun(i, xs, ys)? - 2 * xs.shape()))
}

fn plus(v: i64) -> i64 {
    v.max(0)
}

/// The full chain `v_0^*..v_n^*` via the descending closed recursion,
/// seeded by `v_{n-1}^* = y_n - ybar_n`.  The top value `v_n^* = v_n`
/// is taken from the plain chain.
fn vstar_chain(x: &ElementD, y: &ElementD) -> Result<Vec<i64>> {
    let n = x.rank();
    let mut vs = vec![0i64; n + 1];
    vs[n - 1] = y.up(n) - y.low(n);
    for i in (1..=n - 1).rev() {
        vs[i - 1] = y.up(i) - x.up(i) + vs[i].max(plus(x.up(i) - y.low(i)));
    }
    Ok(vs)
}

/// The chain `v_0..v_n` via the ascending closed recursion from the base
/// `v_0`, which is obtained from the direct limit (the recursion does not
/// determine it).
fn v_chain(x: &ElementD, y: &ElementD) -> Result<Vec<i64>> {
    let n = x.rank();
    let mut v = vec![0i64; n + 1];
    v[0] = vlim_direct(0, LimitVariant::Plain, x, y)?;
    for i in 1..=n - 1 {
        v[i] = (y.low(i) - x.low(i) + v[i - 1]).max(plus(y.low(i) - x.up(i)));
    }
    v[n] = y.low(n) - y.up(n)
        + (y.up(n) + y.low(n - 1) - x.low(n - 1) + v[n - 2])
            .max(plus(y.up(n) + y.low(n - 1) - x.up(n - 1)));
    Ok(v)
}

/// Limit values via the closed recursions of the limit lemmas.
///
/// `Plain` and `Star` support every `i`; `SigmaN` is defined at `i = n`
/// (where it equals `y_n - ybar_n`); `Sigma1` has no closed recursion and
/// falls back to the direct limit.
pub fn vlim_recursive(i: usize, variant: LimitVariant, x: &ElementD, y: &ElementD) -> Result<i64> {
    let n = require_barred_n_zero(x)?;
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, min: 0, max: n });
    }
    match variant {
        LimitVariant::Star => {
            if i == n {
                // V_n^* = V_n
                Ok(v_chain(x, y)?[n])
            } else {
                Ok(vstar_chain(x, y)?[i])
            }
        }
        LimitVariant::Plain => Ok(v_chain(x, y)?[i]),
        LimitVariant::SigmaN => {
            if i != n {
                return Err(Error::IndexOutOfRange { index: i, min: n, max: n });
            }
            Ok(y.up(n) - y.low(n))
        }
        LimitVariant::Sigma1 => vlim_direct(i, variant, x, y),
    }
}

/// `w_i` by the closed formula in terms of the `v` chains.
pub fn wlim(i: usize, x: &ElementD, y: &ElementD) -> Result<i64> {
    let n = require_barred_n_zero(x)?;
    if i > n - 1 {
        return Err(Error::IndexOutOfRange { index: i, min: 0, max: n - 1 });
    }
    let v = v_chain(x, y)?;
    if i == 0 {
        return Ok(2 * v[0]);
    }
    let mut vs = vstar_chain(x, y)?;
    vs[n] = v[n];
    Ok(v[i] + vs[i] - (vs[i] - vs[i - 1] + y.up(i)).min(v[i] - v[i - 1] + x.low(i))
        + x.up(i).min(y.low(i)))
}

/// Assembles every limit value needed by the factorized output display.
/// `w` entries come from the closed formula.
pub fn limit_profile(x: &ElementD, y: &ElementD) -> Result<LimitProfile> {
    let n = require_barred_n_zero(x)?;
    let v = v_chain(x, y)?;
    let mut vstar = vstar_chain(x, y)?;
    vstar[n] = v[n];
    let v0_sigma1 = vlim_direct(0, LimitVariant::Sigma1, x, y)?;
    let vn_sigman = y.up(n) - y.low(n);
    let mut w = vec![0i64; n];
    w[0] = 2 * v[0];
    for i in 1..=n - 1 {
        w[i] = wlim(i, x, y)?;
    }
    Ok(LimitProfile { v, vstar, v0_sigma1, vn_sigman, w })
}

/// The right-hand sides of the factorized output display evaluated on the
/// limit profile.  `x` supplies `l(x)` (its `x_n` must already be large
/// enough that the true map has stabilized); the returned pair is
/// `(x', y')` with `l(x') = l(y)` and `l(y') = l(x)`.
pub fn rhs_theorem51(x: &ElementD, y: &ElementD) -> Result<(ElementD, ElementD)> {
    let n = require_barred_n_zero(x)?;
    if x.rank() != y.rank() {
        return Err(Error::DimensionMismatch { left: x.rank(), right: y.rank() });
    }
    if n < 3 {
        return Err(Error::UnsupportedRank { n, min: 3 });
    }
    let p = limit_profile(x, y)?;

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
    }
    for i in 1..=n - 1 {
        yu[i - 1] = x.up(i) + p.vstar[i - 1] - p.vstar[i];
    }
    yl[0] = x.low(1) + p.v0_sigma1 - p.vstar[1];
    for i in 2..=n - 1 {
        yl[i - 1] = x.low(i) + p.vstar[i - 1] - p.vstar[i] + p.w[i] - p.w[i - 1];
    }
    yl[n - 1] = 0; // ybar'_n = xbar_n + v*_{n-1} - v_n^{sigma_n} = 0
    // l(y') = l(x) fixes the carrier's n-coordinate.
    yu[n - 1] = x.shape()
        - yu[..n - 1].iter().sum::<i64>()
        - yl.iter().sum::<i64>();
    if yu[n - 1] < 0 {
        return Err(Error::ShapeMismatch(format!(
            "carrier coordinate y'_n = {} is negative; carrier too small",
            yu[n - 1]
        )));
    }

    let xp = ElementD::new(xu, xl)
        .map_err(|e| Error::InternalInvariantViolation(format!("x' invalid: {e}")))?;
    let yp = ElementD::new(yu, yl)
        .map_err(|e| Error::InternalInvariantViolation(format!("y' invalid: {e}")))?;
    if xp.shape() != y.shape() {
        return Err(Error::InternalInvariantViolation("l(x') != l(y)".into()));
    }
    Ok((xp, yp))
}
