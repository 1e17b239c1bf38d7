//! The five-integer local map `gamma` and the recursion scheme that
//! assembles a full local R step out of it.
//!
//! `gamma` encodes one box interaction of the particle / antiparticle
//! carrier passes.  Chaining it twice across the site (a descending pass
//! for the particle carriers, an ascending pass for the antiparticle
//! carriers) reproduces the large-carrier combinatorial R.

use crate::crystal::ElementD;
use crate::error::{Error, Result};

fn plus(v: i64) -> i64 {
    v.max(0)
}

/// `gamma(A, B, C, D, E) -> (F, G, H, I, J)`.
///
/// The outputs satisfy `F+G = A+B`, `H+I = C+D` and `F+H+J = B+D+E`.
pub fn gamma(a: i64, b: i64, c: i64, d: i64, e: i64) -> Result<(i64, i64, i64, i64, i64)> {
    for (idx, v) in [a, b, c, d, e].into_iter().enumerate() {
        if v < 0 {
            return Err(Error::NegativeInput { index: idx + 1, value: v });
        }
    }
    let f = a.min(e);
    let g = b + plus(a - e);
    let h = c.min(b + plus(e - a));
    let i = d + plus(c - b - plus(e - a));
    let j = d + plus(b - c + plus(e - a));
    debug_assert_eq!(f + g, a + b);
    debug_assert_eq!(h + i, c + d);
    debug_assert_eq!(f + h + j, b + d + e);
    Ok((f, g, h, i, j))
}

/// Intermediate counts of the recursion scheme, exposed for cross-checking
/// against the carrier-sweep picture: `z`/`zbar` are the running empty-box
/// and bound-state counts, `y_circ`/`ybar_circ` the per-letter box counts
/// after the particle passes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalStepTrace {
    /// `z^(0) .. z^(2n-2)`.
    pub z: Vec<i64>,
    /// `zbar^(0) .. zbar^(2n-2)`.
    pub zbar: Vec<i64>,
    /// `y_i^o` for `i = 1..n-1`; entry `[i-1]`.
    pub y_circ: Vec<i64>,
    /// `ybar_i^o` for `i = 1..n-1`; entry `[i-1]`.
    pub ybar_circ: Vec<i64>,
}

/// One local automaton step by the recursion scheme: carrier `x` (with
/// `xbar_n = 0` and `x_n` large) against site `y`, producing the new site
/// `x'` of shape `l(y)` and the outgoing carrier `y'` of shape `l(x)`.
pub fn local_step(x: &ElementD, y: &ElementD) -> Result<(ElementD, ElementD, LocalStepTrace)> {
    let n = x.rank();
    if n != y.rank() {
        return Err(Error::DimensionMismatch { left: n, right: y.rank() });
    }
    if n < 3 {
        return Err(Error::UnsupportedRank { n, min: 3 });
    }
    if x.low(n) != 0 {
        return Err(Error::ConstraintViolation { upper: x.up(n), lower: x.low(n) });
    }

    let mut z = vec![0i64; 2 * n - 1];
    let mut zbar = vec![0i64; 2 * n - 1];
    let mut y_circ = vec![0i64; n - 1];
    let mut ybar_circ = vec![0i64; n - 1];
    let mut xp = vec![0i64; n];
    let mut xbp = vec![0i64; n];
    let mut yp = vec![0i64; n];
    let mut ybp = vec![0i64; n];

    // step 1: seed with the site's vacuum and bound-state counts
    z[0] = y.up(n);
    zbar[0] = y.low(n);

    // step 2: particle carriers, i = n-1 down to 1
    for i in (1..=n - 1).rev() {
        let k = n - 1 - i;
        let (f, g, h, iv, j) = gamma(y.low(i), zbar[k], z[k], y.up(i), x.up(i))?;
        zbar[k + 1] = f;
        ybar_circ[i - 1] = g;
        y_circ[i - 1] = h;
        z[k + 1] = iv;
        yp[i - 1] = j;
    }

    // step 3: antiparticle carriers, i = 1 up to n-1
    for i in 1..=n - 1 {
        let k = n - 2 + i;
        let (f, g, h, iv, j) = gamma(z[k], ybar_circ[i - 1], y_circ[i - 1], zbar[k], x.low(i))?;
        xbp[i - 1] = f;
        z[k + 1] = g;
        zbar[k + 1] = h;
        xp[i - 1] = iv;
        ybp[i - 1] = j;
    }

    // step 4: close the books
    xp[n - 1] = z[2 * n - 2];
    xbp[n - 1] = zbar[2 * n - 2];
    let carried: i64 = yp[..n - 1].iter().sum::<i64>() + ybp[..n - 1].iter().sum::<i64>();
    yp[n - 1] = x.shape() - carried;
    ybp[n - 1] = 0;
    if yp[n - 1] < 0 {
        return Err(Error::ShapeMismatch(format!(
            "carrier coordinate y'_n = {} is negative; carrier too small",
            yp[n - 1]
        )));
    }

    let xp = ElementD::new(xp, xbp)
        .map_err(|e| Error::InternalInvariantViolation(format!("x' invalid: {e}")))?;
    let ypd = ElementD::new(yp, ybp)
        .map_err(|e| Error::InternalInvariantViolation(format!("y' invalid: {e}")))?;
    if xp.shape() != y.shape() {
        return Err(Error::ShapeMismatch(format!(
            "l(x') = {} but l(y) = {}; carrier too small",
            xp.shape(),
            y.shape()
        )));
    }
    Ok((xp, ypd, LocalStepTrace { z, zbar, y_circ, ybar_circ }))
}
