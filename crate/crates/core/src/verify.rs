//! Exhaustive and seeded verification suites for the identities behind the
//! R maps, their limits, and the automaton factorization theorems.
//!
//! Every suite enumerates all instances within its bounds (plus a few
//! seeded random carriers where the carrier space is unbounded) and
//! reports failures with reproducible inputs.  The PRNG is ChaCha8 with
//! the seed recorded in the report.

use crate::crystal::{
    apply_automorphism, carrier_parts_d, compositions, elements_a, elements_d, elements_a_coords,
    elements_d_coords, Automorphism, CarrierElement, CarrierSpec, ElementA, ElementD,
};
use crate::dynamics::{evolve_factorized, evolve_r, AutomatonState};
use crate::error::{Error, Result};
use crate::gamma::{gamma, local_step};
use crate::limits::{limit_profile, rhs_theorem51, vlim_direct, vlim_recursive, wlim, wlim_direct, LimitVariant};
use crate::rmap_a::{apply_r_a, pfun, pvalues};
use crate::rmap_d::{apply_r_d, vfun, vfun_twisted, wfun};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

pub const SUITES: &[&str] = &[
    "r-involution",
    "yang-baxter",
    "weight",
    "lemma31",
    "tableII",
    "lemmaA1",
    "lemmaA2",
    "reductionA",
    "lemma33",
    "limits51",
    "limits52",
    "gamma-identities",
    "lemma53",
    "lemma54",
    "theorem51",
    "theorem21",
    "theorem41",
    "p-monotone",
    "carrier-law",
];

/// Size limits for a suite, parsed from `key=value,key=value`.
#[derive(Debug, Clone, Default)]
pub struct Bounds(BTreeMap<String, i64>);

impl Bounds {
    pub fn parse(s: &str) -> Result<Bounds> {
        let mut map = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::ConfigError(format!("bad bound {part:?}, want key=value")))?;
            let v: i64 = v
                .trim()
                .parse()
                .map_err(|_| Error::ConfigError(format!("bad bound value {v:?}")))?;
            map.insert(k.trim().to_string(), v);
        }
        Ok(Bounds(map))
    }

    pub fn get(&self, key: &str, default: i64) -> i64 {
        *self.0.get(key).unwrap_or(&default)
    }
}

/// A single failed case, re-runnable from its serialized input.
#[derive(Debug, Clone, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub input: String,
    pub detail: String,
}

/// Outcome of one suite run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub millis: u128,
    pub seed: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type SuiteOutcome = (u64, Vec<Failure>);

fn merge(a: SuiteOutcome, b: SuiteOutcome) -> SuiteOutcome {
    let (ca, mut fa) = a;
    let (cb, fb) = b;
    fa.extend(fb);
    (ca + cb, fa)
}

/// `gamma` without the non-negativity gate, for identity checks whose
/// instantiated variables may be negative.
fn gamma_raw(a: i64, b: i64, c: i64, d: i64, e: i64) -> (i64, i64, i64, i64, i64) {
    let plus = |v: i64| v.max(0);
    (
        a.min(e),
        b + plus(a - e),
        c.min(b + plus(e - a)),
        d + plus(c - b - plus(e - a)),
        d + plus(b - c + plus(e - a)),
    )
}

fn fail(failures: &mut Vec<Failure>, input: String, detail: String) {
    failures.push(Failure { input, detail });
}

fn pair_input(x: &ElementD, y: &ElementD) -> String {
    format!(
        "x = {:?}|{:?}, y = {:?}|{:?}",
        x.upper(),
        x.lower(),
        y.upper(),
        y.lower()
    )
}

fn pair_input_a(x: &ElementA, y: &ElementA) -> String {
    format!("x = {:?}, y = {:?}", x.coords(), y.coords())
}

fn suite_gamma_identities(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 4);
    let mut cases = 0;
    let mut failures = Vec::new();
    for a in 0..=max {
        for bb in 0..=max {
            for c in 0..=max {
                for d in 0..=max {
                    for e in 0..=max {
                        cases += 1;
                        let (f, g, h, i, j) = gamma(a, bb, c, d, e)?;
                        let ok = f >= 0
                            && g >= 0
                            && h >= 0
                            && i >= 0
                            && j >= 0
                            && f + g == a + bb
                            && h + i == c + d
                            && f + h + j == bb + d + e;
                        if !ok {
                            fail(
                                &mut failures,
                                format!("gamma({a},{bb},{c},{d},{e})"),
                                format!("identities violated by output ({f},{g},{h},{i},{j})"),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok((cases, failures))
}

fn d_pairs(max_shape: i64) -> Vec<(ElementD, ElementD)> {
    let mut out = Vec::new();
    for lx in 1..=max_shape {
        for ly in 1..=max_shape {
            for x in elements_d(3, lx) {
                for y in elements_d(3, ly) {
                    out.push((x.clone(), y));
                }
            }
        }
    }
    out
}

fn a_pairs(n: usize, max_shape: i64) -> Vec<(ElementA, ElementA)> {
    let mut out = Vec::new();
    for lx in 1..=max_shape {
        for ly in 1..=max_shape {
            for x in elements_a(n, lx) {
                for y in elements_a(n, ly) {
                    out.push((x.clone(), y));
                }
            }
        }
    }
    out
}

fn suite_r_involution(b: &Bounds) -> Result<SuiteOutcome> {
    let shape = b.get("shape", 2);
    let nmax = b.get("n", 3) as usize;
    let mut cases = 0;
    let mut failures = Vec::new();
    for n in 2..=nmax {
        for (x, y) in a_pairs(n, shape) {
            cases += 1;
            let (xp, yp) = apply_r_a(&x, &y)?;
            let (x2, y2) = apply_r_a(&xp, &yp)?;
            if xp.shape() != y.shape() || yp.shape() != x.shape() {
                fail(&mut failures, pair_input_a(&x, &y), "shapes not swapped".into());
            } else if (x2, y2) != (x.clone(), y.clone()) {
                fail(&mut failures, pair_input_a(&x, &y), "R applied twice is not the identity".into());
            }
        }
    }
    for (x, y) in d_pairs(shape) {
        cases += 1;
        let (xp, yp) = apply_r_d(&x, &y)?;
        let (x2, y2) = apply_r_d(&xp, &yp)?;
        if xp.shape() != y.shape() || yp.shape() != x.shape() {
            fail(&mut failures, pair_input(&x, &y), "shapes not swapped".into());
        } else if (x2, y2) != (x.clone(), y.clone()) {
            fail(&mut failures, pair_input(&x, &y), "R applied twice is not the identity".into());
        }
    }
    Ok((cases, failures))
}

fn suite_yang_baxter(b: &Bounds) -> Result<SuiteOutcome> {
    let shape = b.get("shape", 2);
    let nmax = b.get("n", 3) as usize;
    let mut triples_a = Vec::new();
    for n in 2..=nmax {
        for la in 1..=shape {
            for lb in 1..=shape {
                for lc in 1..=shape {
                    for x in elements_a(n, la) {
                        for y in elements_a(n, lb) {
                            for z in elements_a(n, lc) {
                                triples_a.push((x.clone(), y.clone(), z));
                            }
                        }
                    }
                }
            }
        }
    }
    let outcome_a = triples_a
        .par_iter()
        .map(|(x, y, z)| -> Result<SuiteOutcome> {
            let r12 = |t: (ElementA, ElementA, ElementA)| -> Result<_> {
                let (a, b) = apply_r_a(&t.0, &t.1)?;
                Ok((a, b, t.2))
            };
            let r23 = |t: (ElementA, ElementA, ElementA)| -> Result<_> {
                let (b, c) = apply_r_a(&t.1, &t.2)?;
                Ok((t.0, b, c))
            };
            let t = (x.clone(), y.clone(), z.clone());
            let lhs = r12(r23(r12(t.clone())?)?)?;
            let rhs = r23(r12(r23(t)?)?)?;
            let mut failures = Vec::new();
            if lhs != rhs {
                fail(
                    &mut failures,
                    format!("x = {:?}, y = {:?}, z = {:?}", x.coords(), y.coords(), z.coords()),
                    "Yang-Baxter compositions disagree".into(),
                );
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))?;

    let mut triples_d = Vec::new();
    for la in 1..=shape {
        for lb in 1..=shape {
            for lc in 1..=shape {
                for x in elements_d(3, la) {
                    for y in elements_d(3, lb) {
                        for z in elements_d(3, lc) {
                            triples_d.push((x.clone(), y.clone(), z));
                        }
                    }
                }
            }
        }
    }
    let outcome_d = triples_d
        .par_iter()
        .map(|(x, y, z)| -> Result<SuiteOutcome> {
            let r12 = |t: (ElementD, ElementD, ElementD)| -> Result<_> {
                let (a, b) = apply_r_d(&t.0, &t.1)?;
                Ok((a, b, t.2))
            };
            let r23 = |t: (ElementD, ElementD, ElementD)| -> Result<_> {
                let (b, c) = apply_r_d(&t.1, &t.2)?;
                Ok((t.0, b, c))
            };
            let t = (x.clone(), y.clone(), z.clone());
            let lhs = r12(r23(r12(t.clone())?)?)?;
            let rhs = r23(r12(r23(t)?)?)?;
            let mut failures = Vec::new();
            if lhs != rhs {
                fail(
                    &mut failures,
                    format!("x = {}, y = {}, z = {}", pair_input(x, y), pair_input(y, z), pair_input(z, x)),
                    "Yang-Baxter compositions disagree".into(),
                );
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))?;
    Ok(merge(outcome_a, outcome_d))
}

fn suite_weight(b: &Bounds) -> Result<SuiteOutcome> {
    let shape = b.get("shape", 2);
    let nmax = b.get("n", 3) as usize;
    let mut cases = 0;
    let mut failures = Vec::new();
    for n in 2..=nmax {
        for (x, y) in a_pairs(n, shape) {
            cases += 1;
            let (xp, yp) = apply_r_a(&x, &y)?;
            for i in 1..=n {
                if x.coord(i) + y.coord(i) != xp.coord(i) + yp.coord(i) {
                    fail(&mut failures, pair_input_a(&x, &y), format!("weight not conserved at {i}"));
                    break;
                }
            }
        }
    }
    for (x, y) in d_pairs(shape) {
        cases += 1;
        let (xp, yp) = apply_r_d(&x, &y)?;
        for i in 1..=3 {
            let before = (x.up(i) - x.low(i)) + (y.up(i) - y.low(i));
            let after = (xp.up(i) - xp.low(i)) + (yp.up(i) - yp.low(i));
            if before != after {
                fail(&mut failures, pair_input(&x, &y), format!("weight not conserved at {i}"));
                break;
            }
        }
    }
    Ok((cases, failures))
}

fn coord_pairs_d(max: i64) -> Vec<(ElementD, ElementD)> {
    let elems = elements_d_coords(3, max);
    let mut out = Vec::with_capacity(elems.len() * elems.len());
    for x in &elems {
        for y in &elems {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

fn suite_lemma31(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    coord_pairs_d(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let n = 3;
            let lhs = vfun(n - 1, x, y)?;
            let rhs = (vfun(n, x, y)? - y.low(n))
                .max(vfun_twisted(n, Automorphism::SigmaN, x, y)? - y.up(n));
            let mut failures = Vec::new();
            if lhs != rhs {
                fail(&mut failures, pair_input(x, y), format!("V_(n-1) = {lhs} but max form = {rhs}"));
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_table2(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    coord_pairs_d(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let n = 3usize;
            let mut failures = Vec::new();
            let mut check = |name: String, lhs: i64, rhs: i64| {
                if lhs != rhs {
                    fail(&mut failures, pair_input(x, y), format!("{name}: {lhs} != {rhs}"));
                }
            };
            for i in 1..=n - 1 {
                check(
                    format!("V_{i} under sigma1"),
                    vfun_twisted(i, Automorphism::Sigma1, x, y)?,
                    vfun(i, x, y)?,
                );
                check(
                    format!("V_{i} under sigman"),
                    vfun_twisted(i, Automorphism::SigmaN, x, y)?,
                    vfun(i, x, y)?,
                );
            }
            for i in [0, n] {
                check(
                    format!("V_{i} under star"),
                    vfun_twisted(i, Automorphism::Star, x, y)?,
                    vfun(i, x, y)?,
                );
            }
            for a in [Automorphism::Star, Automorphism::Sigma1, Automorphism::SigmaN] {
                let (xa, ya) = apply_automorphism(a, x, y)?;
                for i in 1..=n - 1 {
                    check(format!("W_{i} under {a:?}"), wfun(i, &xa, &ya)?, wfun(i, x, y)?);
                }
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_lemma_a1(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    coord_pairs_d(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let lhs = wfun(1, x, y)?;
            let rhs = vfun(0, x, y)? + vfun_twisted(0, Automorphism::Sigma1, x, y)?;
            let mut failures = Vec::new();
            if lhs != rhs {
                fail(&mut failures, pair_input(x, y), format!("W_1 = {lhs} but V_0 + V_0^s1 = {rhs}"));
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_lemma_a2(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    let plus = |v: i64| v.max(0);
    coord_pairs_d(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let n = 3usize;
            let lx = x.shape();
            let ly = y.shape();
            let mut failures = Vec::new();
            for i in 1..=n - 2 {
                let vs_i = vfun_twisted(i, Automorphism::Star, x, y)?;
                let vs_im1 = vfun_twisted(i - 1, Automorphism::Star, x, y)?;
                let lhs1 = vs_i.max(lx).max(lx + x.up(i) - y.low(i));
                let rhs1 = (x.up(i) - y.up(i) + vs_im1).max(ly).max(ly + x.up(i) - y.low(i));
                if lhs1 != rhs1 {
                    fail(&mut failures, pair_input(x, y), format!("relation 1 at i={i}: {lhs1} != {rhs1}"));
                }
                let v_i = vfun(i, x, y)?;
                let v_im1 = vfun(i - 1, x, y)?;
                let lhs2 = v_i.max(ly).max(ly + y.low(i) - x.up(i));
                let rhs2 = (y.low(i) - x.low(i) + v_im1).max(lx).max(lx + y.low(i) - x.up(i));
                if lhs2 != rhs2 {
                    fail(&mut failures, pair_input(x, y), format!("relation 2 at i={i}: {lhs2} != {rhs2}"));
                }
            }
            let xcap = y.low(n) - y.up(n) + plus(y.low(n - 1) + y.up(n) - x.up(n - 1) - x.low(n));
            let lhs3 = vfun(n, x, y)?.max(ly + xcap);
            let rhs3 = (y.low(n - 1) + y.low(n) - x.low(n - 1) - x.low(n) + vfun(n - 2, x, y)?)
                .max(lx + xcap);
            if lhs3 != rhs3 {
                fail(&mut failures, pair_input(x, y), format!("relation 3: {lhs3} != {rhs3}"));
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn barred_zero_pairs(max: i64) -> Vec<(ElementA, ElementA)> {
    let elems = elements_a_coords(3, max);
    let mut out = Vec::with_capacity(elems.len() * elems.len());
    for x in &elems {
        for y in &elems {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

fn suite_reduction_a(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 4);
    barred_zero_pairs(max)
        .par_iter()
        .map(|(xa, ya)| -> Result<SuiteOutcome> {
            let x = ElementD::from_element_a(xa);
            let y = ElementD::from_element_a(ya);
            let (xp, yp) = apply_r_d(&x, &y)?;
            let (xap, yap) = apply_r_a(xa, ya)?;
            let mut failures = Vec::new();
            let ok = xp.is_barred_zero()
                && yp.is_barred_zero()
                && xp.upper() == xap.coords()
                && yp.upper() == yap.coords();
            if !ok {
                fail(
                    &mut failures,
                    pair_input_a(xa, ya),
                    "type-D map does not reduce to the type-A map".into(),
                );
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_lemma33(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 4);
    barred_zero_pairs(max)
        .par_iter()
        .map(|(xa, ya)| -> Result<SuiteOutcome> {
            let n = 3usize;
            let x = ElementD::from_element_a(xa);
            let y = ElementD::from_element_a(ya);
            let lx = x.shape();
            let p1 = pfun(1, xa, ya)?;
            let mut failures = Vec::new();
            let mut check = |name: String, lhs: i64, rhs: i64| {
                if lhs != rhs {
                    fail(&mut failures, pair_input_a(xa, ya), format!("{name}: {lhs} != {rhs}"));
                }
            };
            for i in 0..=n {
                check(format!("V_{i}"), vfun(i, &x, &y)?, lx + p1);
                let p_next = pfun(if i == n { 1 } else { i + 1 }, xa, ya)?;
                check(
                    format!("V*_{i}"),
                    vfun_twisted(i, Automorphism::Star, &x, &y)?,
                    lx + p_next,
                );
            }
            check(
                "V_0^s1".into(),
                vfun_twisted(0, Automorphism::Sigma1, &x, &y)?,
                lx + pfun(2, xa, ya)?,
            );
            check(
                "V_n^sn".into(),
                vfun_twisted(n, Automorphism::SigmaN, &x, &y)?,
                lx + pfun(n, xa, ya)?,
            );
            for i in 1..=n - 1 {
                check(
                    format!("W_{i}"),
                    wfun(i, &x, &y)?,
                    2 * lx + p1 + pfun(i + 1, xa, ya)?,
                );
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn limit_pairs(max: i64) -> Vec<(ElementD, ElementD)> {
    let parts = carrier_parts_d(3, max);
    let elems = elements_d_coords(3, max);
    let mut out = Vec::with_capacity(parts.len() * elems.len());
    for x in &parts {
        for y in &elems {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

fn suite_limits51(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    limit_pairs(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let mut failures = Vec::new();
            for i in 0..=3usize {
                for variant in [LimitVariant::Plain, LimitVariant::Star] {
                    let rec = vlim_recursive(i, variant, x, y)?;
                    let dir = vlim_direct(i, variant, x, y)?;
                    if rec != dir {
                        fail(
                            &mut failures,
                            pair_input(x, y),
                            format!("{variant:?} limit at i={i}: recursion {rec} != direct {dir}"),
                        );
                    }
                }
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_limits52(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    limit_pairs(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let mut failures = Vec::new();
            for i in 1..=2usize {
                let rec = wlim(i, x, y)?;
                let dir = wlim_direct(i, x, y)?;
                if rec != dir {
                    fail(
                        &mut failures,
                        pair_input(x, y),
                        format!("w_{i}: formula {rec} != direct {dir}"),
                    );
                }
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn saturated(x: &ElementD, y: &ElementD) -> Result<ElementD> {
    let n = x.rank();
    let m = x.upper()[..n - 1].iter().sum::<i64>()
        + x.lower().iter().sum::<i64>()
        + 2 * y.shape()
        + 1;
    x.with_upper_n(m)
}

fn suite_lemma53(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    limit_pairs(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let n = 3usize;
            let p = limit_profile(x, y)?;
            let sat = saturated(x, y)?;
            let mut failures = Vec::new();
            for i in 1..=n - 1 {
                let m_i = sat.up(i).min(y.low(i));
                let m_next = sat.up(i + 1).min(y.low(i + 1));
                let got = gamma_raw(
                    y.low(i),
                    m_next,
                    p.vstar[i] + m_next,
                    y.up(i),
                    sat.up(i),
                );
                let want = (
                    m_i,
                    y.low(i) - m_i + m_next,
                    -m_i + m_next + y.up(i) + p.vstar[i] - p.vstar[i - 1],
                    p.vstar[i - 1] + m_i,
                    sat.up(i) + p.vstar[i - 1] - p.vstar[i],
                );
                if got != want {
                    fail(
                        &mut failures,
                        pair_input(&sat, y),
                        format!("i={i}: gamma gave {got:?}, lemma says {want:?}"),
                    );
                }
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_lemma54(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    limit_pairs(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let n = 3usize;
            let p = limit_profile(x, y)?;
            let sat = saturated(x, y)?;
            let mut failures = Vec::new();
            for i in 1..=n - 1 {
                let m_i = sat.up(i).min(y.low(i));
                let m_next = sat.up(i + 1).min(y.low(i + 1));
                let got = gamma_raw(
                    p.v[i - 1] + m_i,
                    y.low(i) - m_i + m_next,
                    -m_i + m_next + y.up(i) + p.vstar[i] - p.vstar[i - 1],
                    m_i + p.v[i - 1] + p.vstar[i - 1] - p.w[i - 1],
                    sat.low(i),
                );
                let want = (
                    y.low(i) + p.v[i - 1] - p.v[i],
                    p.v[i] + m_next,
                    m_next + p.v[i] + p.vstar[i] - p.w[i],
                    y.up(i) + p.w[i] - p.w[i - 1] - p.v[i] + p.v[i - 1],
                    sat.low(i) + p.w[i] - p.w[i - 1] - p.vstar[i] + p.vstar[i - 1],
                );
                if got != want {
                    fail(
                        &mut failures,
                        pair_input(&sat, y),
                        format!("i={i}: gamma gave {got:?}, lemma says {want:?}"),
                    );
                }
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_theorem51(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 1);
    let shape = b.get("shape", 2);
    let mut pairs = Vec::new();
    for x in carrier_parts_d(3, max) {
        for ly in 1..=shape {
            for y in elements_d(3, ly) {
                pairs.push((x.clone(), y));
            }
        }
    }
    pairs
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let sat = saturated(x, y)?;
            let (x1, y1, _) = local_step(&sat, y)?;
            let (x2, y2) = rhs_theorem51(&sat, y)?;
            let (x3, y3) = apply_r_d(&sat, y)?;
            let mut failures = Vec::new();
            if (x1.clone(), y1.clone()) != (x2.clone(), y2.clone()) {
                fail(
                    &mut failures,
                    pair_input(&sat, y),
                    "recursion scheme disagrees with the limit display".into(),
                );
            } else if (x1, y1) != (x3, y3) {
                fail(
                    &mut failures,
                    pair_input(&sat, y),
                    "recursion scheme disagrees with the R map".into(),
                );
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn capacity_lists(total_max: i64, sites_max: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for n_sites in 1..=sites_max {
        for total in n_sites as i64..=total_max {
            for comp in compositions(total - n_sites as i64, n_sites) {
                out.push(comp.into_iter().map(|c| c + 1).collect());
            }
        }
    }
    out
}

fn product_states_a(n: usize, caps: &[i64]) -> Vec<AutomatonState> {
    let mut states: Vec<Vec<ElementA>> = vec![Vec::new()];
    for &l in caps {
        let choices = elements_a(n, l);
        let mut next = Vec::with_capacity(states.len() * choices.len());
        for prefix in &states {
            for c in &choices {
                let mut s = prefix.clone();
                s.push(c.clone());
                next.push(s);
            }
        }
        states = next;
    }
    states.into_iter().map(|s| AutomatonState::new_a(s).unwrap()).collect()
}

fn product_states_d(n: usize, caps: &[i64]) -> Vec<AutomatonState> {
    let mut states: Vec<Vec<ElementD>> = vec![Vec::new()];
    for &l in caps {
        let choices = elements_d(n, l);
        let mut next = Vec::with_capacity(states.len() * choices.len());
        for prefix in &states {
            for c in &choices {
                let mut s = prefix.clone();
                s.push(c.clone());
                next.push(s);
            }
        }
        states = next;
    }
    states.into_iter().map(|s| AutomatonState::new_d(s).unwrap()).collect()
}

/// The vacuum carrier plus `count` seeded random non-vacuum carriers for a
/// configuration with total capacity `total`.
fn seeded_carriers(
    kind_d: bool,
    n: usize,
    total: i64,
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Result<Vec<CarrierSpec>> {
    let margin = 2 * total + 1;
    let mut out = vec![CarrierSpec::vacuum(kind_d, n, margin)?];
    for _ in 0..count {
        if kind_d {
            let mut upper: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            let mut lower: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            upper[n - 1] = 0;
            lower[n - 1] = 0;
            if upper.iter().chain(&lower).all(|&c| c == 0) {
                upper[0] = 1;
            }
            out.push(CarrierSpec::saturated_d(&upper, &lower, margin)?);
        } else {
            let mut side: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            side[n - 1] = 0;
            if side.iter().all(|&c| c == 0) {
                side[0] = 1;
            }
            out.push(CarrierSpec::saturated_a(&side, margin)?);
        }
    }
    Ok(out)
}

fn theorem_equivalence(
    states: Vec<(AutomatonState, CarrierSpec)>,
) -> Result<SuiteOutcome> {
    states
        .par_iter()
        .map(|(state, carrier)| -> Result<SuiteOutcome> {
            let mut failures = Vec::new();
            let input = || {
                format!(
                    "state = {}, carrier = {:?}",
                    crate::statefile::serialize_state(state).replace('\n', "; "),
                    carrier.element
                )
            };
            match (evolve_r(state, carrier), evolve_factorized(state, carrier)) {
                (Ok((by_r, _)), Ok(by_k)) => {
                    if by_r != by_k {
                        fail(&mut failures, input(), "R evolution and factorized evolution disagree".into());
                    }
                }
                (r, k) => {
                    fail(
                        &mut failures,
                        input(),
                        format!("evolution errored: r = {:?}, factorized = {:?}", r.err(), k.err()),
                    );
                }
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_theorem21(b: &Bounds, seed: u64) -> Result<SuiteOutcome> {
    let suml = b.get("suml", 4);
    let sites = b.get("sites", 3) as usize;
    let nmax = b.get("n", 3) as usize;
    let carriers = b.get("carriers", 10) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = Vec::new();
    for n in 2..=nmax {
        for caps in capacity_lists(suml, sites) {
            let total: i64 = caps.iter().sum();
            let specs = seeded_carriers(false, n, total, &mut rng, carriers)?;
            for state in product_states_a(n, &caps) {
                for spec in &specs {
                    work.push((state.clone(), spec.clone()));
                }
            }
        }
    }
    theorem_equivalence(work)
}

fn suite_theorem41(b: &Bounds, seed: u64) -> Result<SuiteOutcome> {
    let suml = b.get("suml", 3);
    let sites = b.get("sites", 2) as usize;
    let carriers = b.get("carriers", 10) as usize;
    let n = 3usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = Vec::new();
    for caps in capacity_lists(suml, sites) {
        let total: i64 = caps.iter().sum();
        let specs = seeded_carriers(true, n, total, &mut rng, carriers)?;
        for state in product_states_d(n, &caps) {
            for spec in &specs {
                work.push((state.clone(), spec.clone()));
            }
        }
    }
    theorem_equivalence(work)
}

fn suite_p_monotone(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 4);
    barred_zero_pairs(max)
        .par_iter()
        .map(|(x, y)| -> Result<SuiteOutcome> {
            let n = 3usize;
            let p = pvalues(x, y)?;
            let mut failures = Vec::new();
            for i in 1..=n {
                let p_i = p[i - 1];
                let p_next = p[i % n];
                if p_next < p_i - y.coord(i) {
                    fail(
                        &mut failures,
                        pair_input_a(x, y),
                        format!("P_{} = {p_next} < P_{i} - y_{i} = {}", i + 1, p_i - y.coord(i)),
                    );
                }
            }
            Ok((1, failures))
        })
        .try_reduce(|| (0, Vec::new()), |a, b| Ok(merge(a, b)))
}

fn suite_carrier_law(b: &Bounds) -> Result<SuiteOutcome> {
    let max = b.get("max", 2);
    let n = 3usize;
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut sides = Vec::new();
    let mut side = vec![0i64; n - 1];
    loop {
        sides.push(side.clone());
        let mut k = 0;
        loop {
            if k == n - 1 {
                break;
            }
            side[k] += 1;
            if side[k] <= max {
                break;
            }
            side[k] = 0;
            k += 1;
        }
        if side.iter().all(|&c| c == 0) {
            break;
        }
    }
    for y in elements_a_coords(n, max) {
        for s in &sides {
            cases += 1;
            let mut full = s.clone();
            full.push(0);
            let carrier = CarrierSpec::saturated_a(&full, 2 * y.shape() + 1)?;
            let state = AutomatonState::new_a(vec![y.clone()])?;
            let (next, out) = evolve_r(&state, &carrier)?;
            let AutomatonState::A(next_sites) = &next else { unreachable!() };
            let CarrierElement::A(yp) = &out else { unreachable!() };
            let CarrierElement::A(x) = &carrier.element else { unreachable!() };
            for a in 1..=n - 1 {
                if yp.coord(a) != x.coord(a) + y.coord(a) - next_sites[0].coord(a) {
                    fail(
                        &mut failures,
                        format!("x = {:?}, y = {:?}", x.coords(), y.coords()),
                        format!("final load law violated for species {a}"),
                    );
                }
            }
        }
    }
    Ok((cases, failures))
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("CRYSTAL_AUTOMATA_THREADS") {
        let k: usize = v
            .parse()
            .map_err(|_| Error::ConfigError(format!("CRYSTAL_AUTOMATA_THREADS = {v:?} is not a number")))?;
        builder = builder.num_threads(k.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::ConfigError(format!("thread pool: {e}")))
}

/// Runs one named suite and collects its report.  Unknown names yield
/// `UnknownSuite`.
pub fn run_suite(name: &str, bounds: &Bounds, seed: u64) -> Result<Report> {
    let start = std::time::Instant::now();
    let pool = thread_pool()?;
    let outcome = pool.install(|| match name {
        "gamma-identities" => suite_gamma_identities(bounds),
        "r-involution" => suite_r_involution(bounds),
        "yang-baxter" => suite_yang_baxter(bounds),
        "weight" => suite_weight(bounds),
        "lemma31" => suite_lemma31(bounds),
        "tableII" => suite_table2(bounds),
        "lemmaA1" => suite_lemma_a1(bounds),
        "lemmaA2" => suite_lemma_a2(bounds),
        "reductionA" => suite_reduction_a(bounds),
        "lemma33" => suite_lemma33(bounds),
        "limits51" => suite_limits51(bounds),
        "limits52" => suite_limits52(bounds),
        "lemma53" => suite_lemma53(bounds),
        "lemma54" => suite_lemma54(bounds),
        "theorem51" => suite_theorem51(bounds),
        "theorem21" => suite_theorem21(bounds, seed),
        "theorem41" => suite_theorem41(bounds, seed),
        "p-monotone" => suite_p_monotone(bounds),
        "carrier-law" => suite_carrier_law(bounds),
        other => Err(Error::UnknownSuite(other.to_string())),
    })?;
    let (cases, mut failures) = outcome;
    failures.sort();
    failures.dedup();
    Ok(Report {
        suite: name.to_string(),
        cases,
        failures,
        millis: start.elapsed().as_millis(),
        seed,
    })
}
