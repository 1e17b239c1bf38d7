//! Crystal elements, their validation, and the involutive automorphisms.
//!
//! A type-A element is a vector of non-negative integers `(x_1, ..., x_n)`
//! of total sum `l` (its shape).  A type-D element carries an unbarred and
//! a barred coordinate vector subject to `x_n * xbar_n = 0`.  The letter
//! `n` plays the role of the vacuum throughout.

use crate::error::{Error, Result};

fn check_nonneg(coords: &[i64]) -> Result<()> {
    for (i, &c) in coords.iter().enumerate() {
        if c < 0 {
            return Err(Error::NegativeCoordinate { index: i + 1, value: c });
        }
    }
    Ok(())
}

/// A type-A crystal element: non-negative coordinates summing to its shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementA {
    coords: Vec<i64>,
}

impl ElementA {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        check_nonneg(&coords)?;
        Ok(ElementA { coords })
    }

    /// The vacuum element of shape `l`: all mass on the letter `n`.
    pub fn vacuum(n: usize, l: i64) -> Result<Self> {
        if l < 1 {
            return Err(Error::InvalidShape);
        }
        if n < 2 {
            return Err(Error::UnsupportedRank { n, min: 2 });
        }
        let mut coords = vec![0; n];
        coords[n - 1] = l;
        Ok(ElementA { coords })
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn shape(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// 1-based coordinate access.
    pub fn coord(&self, i: usize) -> i64 {
        self.coords[i - 1]
    }

    pub fn is_vacuum(&self) -> bool {
        self.coords[..self.rank() - 1].iter().all(|&c| c == 0)
    }
}

/// A type-D crystal element: unbarred coordinates `x_1..x_n` and barred
/// coordinates `xbar_1..xbar_n` with `x_n * xbar_n = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementD {
    upper: Vec<i64>,
    lower: Vec<i64>,
}

impl ElementD {
    pub fn new(upper: Vec<i64>, lower: Vec<i64>) -> Result<Self> {
        if upper.is_empty() || lower.is_empty() {
            return Err(Error::EmptyVector);
        }
        if upper.len() != lower.len() {
            return Err(Error::LengthMismatch { left: upper.len(), right: lower.len() });
        }
        if upper.len() < 2 {
            return Err(Error::UnsupportedRank { n: upper.len(), min: 2 });
        }
        check_nonneg(&upper)?;
        check_nonneg(&lower)?;
        let n = upper.len();
        if upper[n - 1] * lower[n - 1] != 0 {
            return Err(Error::ConstraintViolation { upper: upper[n - 1], lower: lower[n - 1] });
        }
        Ok(ElementD { upper, lower })
    }

    /// The vacuum element of shape `l`: all mass on the unbarred letter `n`.
    pub fn vacuum(n: usize, l: i64) -> Result<Self> {
        if l < 1 {
            return Err(Error::InvalidShape);
        }
        if n < 2 {
            return Err(Error::UnsupportedRank { n, min: 2 });
        }
        let mut upper = vec![0; n];
        upper[n - 1] = l;
        Ok(ElementD { upper, lower: vec![0; n] })
    }

    /// Construction without the validity checks, for internal intermediates
    /// whose validity is guaranteed by the caller.
    pub(crate) fn new_unchecked(upper: Vec<i64>, lower: Vec<i64>) -> Self {
        debug_assert_eq!(upper.len(), lower.len());
        ElementD { upper, lower }
    }

    pub fn rank(&self) -> usize {
        self.upper.len()
    }

    pub fn shape(&self) -> i64 {
        self.upper.iter().sum::<i64>() + self.lower.iter().sum::<i64>()
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    /// 1-based unbarred coordinate `x_i`.
    pub fn up(&self, i: usize) -> i64 {
        self.upper[i - 1]
    }

    /// 1-based barred coordinate `xbar_i`.
    pub fn low(&self, i: usize) -> i64 {
        self.lower[i - 1]
    }

    /// All barred coordinates zero (the type-A embedding regime).
    pub fn is_barred_zero(&self) -> bool {
        self.lower.iter().all(|&c| c == 0)
    }

    pub fn is_vacuum(&self) -> bool {
        let n = self.rank();
        self.upper[..n - 1].iter().all(|&c| c == 0) && self.lower.iter().all(|&c| c == 0)
    }

    /// Copy with the `x_n` coordinate replaced; requires `xbar_n = 0`.
    pub fn with_upper_n(&self, value: i64) -> Result<Self> {
        let n = self.rank();
        if self.lower[n - 1] != 0 {
            return Err(Error::ConstraintViolation { upper: value, lower: self.lower[n - 1] });
        }
        let mut upper = self.upper.clone();
        upper[n - 1] = value;
        ElementD::new(upper, self.lower.clone())
    }

    /// Drops the barred coordinates; only valid when they all vanish.
    pub fn to_element_a(&self) -> Result<ElementA> {
        if !self.is_barred_zero() {
            return Err(Error::ConstraintViolation {
                upper: self.up(self.rank()),
                lower: self.lower.iter().sum(),
            });
        }
        ElementA::new(self.upper.clone())
    }

    pub fn from_element_a(x: &ElementA) -> Self {
        ElementD::new_unchecked(x.coords().to_vec(), vec![0; x.rank()])
    }
}

/// The three involutive automorphisms acting on a pair of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Automorphism {
    /// `x_i <-> ybar_i`, `xbar_i <-> y_i` for all `i` (exchanges shapes).
    Star,
    /// `x_1 <-> xbar_1`, `y_1 <-> ybar_1`.
    Sigma1,
    /// `x_n <-> xbar_n`, `y_n <-> ybar_n`.
    SigmaN,
}

/// Applies the automorphism to a pair of same-rank elements.
///
/// Valid inputs always yield valid outputs, and applying the same
/// automorphism twice returns the original pair.
pub fn apply_automorphism(a: Automorphism, x: &ElementD, y: &ElementD) -> Result<(ElementD, ElementD)> {
    if x.rank() != y.rank() {
        return Err(Error::DimensionMismatch { left: x.rank(), right: y.rank() });
    }
    let n = x.rank();
    let (mut xu, mut xl) = (x.upper().to_vec(), x.lower().to_vec());
    let (mut yu, mut yl) = (y.upper().to_vec(), y.lower().to_vec());
    match a {
        Automorphism::Star => {
            for i in 0..n {
                std::mem::swap(&mut xu[i], &mut yl[i]);
                std::mem::swap(&mut xl[i], &mut yu[i]);
            }
        }
        Automorphism::Sigma1 => {
            std::mem::swap(&mut xu[0], &mut xl[0]);
            std::mem::swap(&mut yu[0], &mut yl[0]);
        }
        Automorphism::SigmaN => {
            std::mem::swap(&mut xu[n - 1], &mut xl[n - 1]);
            std::mem::swap(&mut yu[n - 1], &mut yl[n - 1]);
        }
    }
    debug_assert_eq!(xu[n - 1] * xl[n - 1], 0);
    debug_assert_eq!(yu[n - 1] * yl[n - 1], 0);
    Ok((ElementD::new_unchecked(xu, xl), ElementD::new_unchecked(yu, yl)))
}

/// A carrier element together with the margin by which its `x_n`
/// coordinate must dominate every other coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CarrierElement {
    A(ElementA),
    D(ElementD),
}

impl CarrierElement {
    pub fn rank(&self) -> usize {
        match self {
            CarrierElement::A(x) => x.rank(),
            CarrierElement::D(x) => x.rank(),
        }
    }

    /// The dominant coordinate `x_n`.
    pub fn upper_n(&self) -> i64 {
        match self {
            CarrierElement::A(x) => x.coord(x.rank()),
            CarrierElement::D(x) => x.up(x.rank()),
        }
    }

    /// Largest coordinate other than `x_n`.
    fn side_max(&self) -> i64 {
        match self {
            CarrierElement::A(x) => x.coords()[..x.rank() - 1].iter().copied().max().unwrap_or(0),
            CarrierElement::D(x) => {
                let n = x.rank();
                x.upper()[..n - 1]
                    .iter()
                    .chain(&x.lower()[..n - 1])
                    .copied()
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Copy with `x_n` incremented by `delta` (the stabilization witness).
    pub fn bump_upper_n(&self, delta: i64) -> Result<CarrierElement> {
        Ok(match self {
            CarrierElement::A(x) => {
                let mut coords = x.coords().to_vec();
                let n = x.rank();
                coords[n - 1] += delta;
                CarrierElement::A(ElementA::new(coords)?)
            }
            CarrierElement::D(x) => {
                CarrierElement::D(x.with_upper_n(x.up(x.rank()) + delta)?)
            }
        })
    }
}

/// Operationalizes membership in `B_L[n]`: the carrier's `x_n` exceeds every
/// other coordinate by at least `vacuum_margin`, and a type-D carrier has
/// `xbar_n = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierSpec {
    pub element: CarrierElement,
    pub vacuum_margin: i64,
}

impl CarrierSpec {
    pub fn new(element: CarrierElement, vacuum_margin: i64) -> Result<Self> {
        if vacuum_margin < 0 {
            return Err(Error::ConfigError("vacuum margin must be non-negative".into()));
        }
        if let CarrierElement::D(x) = &element {
            if x.low(x.rank()) != 0 {
                return Err(Error::ConstraintViolation {
                    upper: x.up(x.rank()),
                    lower: x.low(x.rank()),
                });
            }
        }
        if element.upper_n() < vacuum_margin + element.side_max() {
            return Err(Error::MarginTooSmall);
        }
        Ok(CarrierSpec { element, vacuum_margin })
    }

    /// Builds a carrier from its finite coordinates, saturating `x_n` to
    /// `margin + sum of other coordinates + 1`.
    pub fn saturated_a(side: &[i64], margin: i64) -> Result<Self> {
        let mut coords = side.to_vec();
        let extra: i64 = side.iter().sum();
        *coords.last_mut().ok_or(Error::EmptyVector)? = 0;
        let n = coords.len();
        coords[n - 1] = margin + extra + 1;
        CarrierSpec::new(CarrierElement::A(ElementA::new(coords)?), margin)
    }

    /// Type-D analogue of [`CarrierSpec::saturated_a`]; `xbar_n` is forced to 0.
    pub fn saturated_d(upper: &[i64], lower: &[i64], margin: i64) -> Result<Self> {
        let mut upper = upper.to_vec();
        let mut lower = lower.to_vec();
        if upper.len() != lower.len() {
            return Err(Error::LengthMismatch { left: upper.len(), right: lower.len() });
        }
        let n = upper.len();
        if n < 2 {
            return Err(Error::UnsupportedRank { n, min: 2 });
        }
        upper[n - 1] = 0;
        lower[n - 1] = 0;
        let extra: i64 = upper.iter().sum::<i64>() + lower.iter().sum::<i64>();
        upper[n - 1] = margin + extra + 1;
        CarrierSpec::new(CarrierElement::D(ElementD::new(upper, lower)?), margin)
    }

    /// The pure vacuum carrier of the given kind and rank.
    pub fn vacuum(kind_d: bool, n: usize, margin: i64) -> Result<Self> {
        if kind_d {
            CarrierSpec::saturated_d(&vec![0; n], &vec![0; n], margin)
        } else {
            CarrierSpec::saturated_a(&vec![0; n], margin)
        }
    }
}

/// All non-negative integer vectors of the given length summing to `total`.
pub fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    fn rec(total: i64, parts: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && total >= 0 {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// Every type-A element of rank `n` and shape `l`.
pub fn elements_a(n: usize, l: i64) -> Vec<ElementA> {
    compositions(l, n)
        .into_iter()
        .map(|c| ElementA::new(c).unwrap())
        .collect()
}

/// Every type-D element of rank `n` and shape `l`.
pub fn elements_d(n: usize, l: i64) -> Vec<ElementD> {
    let mut out = Vec::new();
    for c in compositions(l, 2 * n) {
        let upper = c[..n].to_vec();
        let lower = c[n..].to_vec();
        if upper[n - 1] * lower[n - 1] != 0 {
            continue;
        }
        out.push(ElementD::new_unchecked(upper, lower));
    }
    out
}

/// Every type-A element of rank `n` with each coordinate at most `max`
/// (excluding the zero vector, which has no shape).
pub fn elements_a_coords(n: usize, max: i64) -> Vec<ElementA> {
    let mut out = Vec::new();
    let mut coords = vec![0i64; n];
    loop {
        if coords.iter().any(|&c| c > 0) {
            out.push(ElementA::new(coords.clone()).unwrap());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            coords[k] += 1;
            if coords[k] <= max {
                break;
            }
            coords[k] = 0;
            k += 1;
        }
    }
}

/// Every type-D element of rank `n` with each coordinate at most `max`.
pub fn elements_d_coords(n: usize, max: i64) -> Vec<ElementD> {
    let mut out = Vec::new();
    let mut coords = vec![0i64; 2 * n];
    loop {
        let upper = &coords[..n];
        let lower = &coords[n..];
        if coords.iter().any(|&c| c > 0) && upper[n - 1] * lower[n - 1] == 0 {
            out.push(ElementD::new_unchecked(upper.to_vec(), lower.to_vec()));
        }
        let mut k = 0;
        loop {
            if k == 2 * n {
                return out;
            }
            coords[k] += 1;
            if coords[k] <= max {
                break;
            }
            coords[k] = 0;
            k += 1;
        }
    }
}

/// Finite parts of type-D carriers: coordinates `<= max` for indices below
/// `n`, with `x_n = xbar_n = 0` (saturation fills `x_n` later).
pub fn carrier_parts_d(n: usize, max: i64) -> Vec<ElementD> {
    let mut out = Vec::new();
    let mut coords = vec![0i64; 2 * (n - 1)];
    loop {
        let mut upper = coords[..n - 1].to_vec();
        upper.push(0);
        let mut lower = coords[n - 1..].to_vec();
        lower.push(0);
        out.push(ElementD::new_unchecked(upper, lower));
        let mut k = 0;
        loop {
            if k == 2 * (n - 1) {
                return out;
            }
            coords[k] += 1;
            if coords[k] <= max {
                break;
            }
            coords[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_a_construction() {
        let x = ElementA::new(vec![0, 0, 3]).unwrap();
        assert_eq!(x.rank(), 3);
        assert_eq!(x.shape(), 3);
        assert!(x.is_vacuum());
        let y = ElementA::new(vec![1, 0, 2]).unwrap();
        assert_eq!(y.shape(), 3);
        assert!(matches!(
            ElementA::new(vec![1, -1, 0]),
            Err(Error::NegativeCoordinate { index: 2, value: -1 })
        ));
        assert!(matches!(ElementA::new(vec![]), Err(Error::EmptyVector)));
    }

    #[test]
    fn element_d_construction() {
        let x = ElementD::new(vec![1, 0], vec![0, 0]).unwrap();
        assert_eq!(x.rank(), 2);
        assert_eq!(x.shape(), 1);
        assert!(matches!(
            ElementD::new(vec![0, 1], vec![0, 1]),
            Err(Error::ConstraintViolation { .. })
        ));
        let v = ElementD::new(vec![0, 0, 1], vec![0, 0, 0]).unwrap();
        assert!(v.is_vacuum());
        assert_eq!(v.shape(), 1);
        assert!(matches!(
            ElementD::new(vec![1, 0], vec![0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn vacuum_elements() {
        assert_eq!(ElementA::vacuum(2, 3).unwrap().coords(), &[0, 3]);
        let v = ElementD::vacuum(3, 1).unwrap();
        assert_eq!(v.upper(), &[0, 0, 1]);
        assert_eq!(v.lower(), &[0, 0, 0]);
        assert!(matches!(ElementA::vacuum(2, 0), Err(Error::InvalidShape)));
        assert!(matches!(ElementD::vacuum(3, 0), Err(Error::InvalidShape)));
    }

    #[test]
    fn star_swaps_definitionally() {
        let x = ElementD::new(vec![1, 0], vec![0, 0]).unwrap();
        let y = ElementD::new(vec![0, 1], vec![0, 0]).unwrap();
        let (xs, ys) = apply_automorphism(Automorphism::Star, &x, &y).unwrap();
        assert_eq!(xs.upper(), &[0, 0]);
        assert_eq!(xs.lower(), &[0, 1]);
        assert_eq!(ys.upper(), &[0, 0]);
        assert_eq!(ys.lower(), &[1, 0]);
        // star exchanges shapes
        assert_eq!(xs.shape(), y.shape());
        assert_eq!(ys.shape(), x.shape());
    }

    #[test]
    fn sigma_n_swaps_definitionally() {
        let x = ElementD::new(vec![0, 2], vec![0, 0]).unwrap();
        let y = ElementD::new(vec![0, 0], vec![0, 1]).unwrap();
        let (xs, ys) = apply_automorphism(Automorphism::SigmaN, &x, &y).unwrap();
        assert_eq!(xs.upper(), &[0, 0]);
        assert_eq!(xs.lower(), &[0, 2]);
        assert_eq!(ys.upper(), &[0, 1]);
        assert_eq!(ys.lower(), &[0, 0]);
    }

    #[test]
    fn automorphisms_are_involutions() {
        for a in [Automorphism::Star, Automorphism::Sigma1, Automorphism::SigmaN] {
            for x in elements_d(3, 2) {
                for y in elements_d(3, 1) {
                    let (x1, y1) = apply_automorphism(a, &x, &y).unwrap();
                    let (x2, y2) = apply_automorphism(a, &x1, &y1).unwrap();
                    assert_eq!((x2, y2), (x.clone(), y.clone()));
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(elements_a(3, 2).len(), 6);
        // rank-3 type D, shape 1: letters 1,2,3,3bar,2bar,1bar
        assert_eq!(elements_d(3, 1).len(), 6);
        assert_eq!(elements_d(3, 2).len(), 20);
    }

    #[test]
    fn carrier_margin_check() {
        assert!(CarrierSpec::new(
            CarrierElement::A(ElementA::new(vec![2, 1]).unwrap()),
            2
        )
        .is_err());
        let c = CarrierSpec::saturated_a(&[2, 0], 3).unwrap();
        assert_eq!(c.element.upper_n(), 3 + 2 + 1);
        let d = CarrierSpec::saturated_d(&[1, 0, 0], &[0, 1, 0], 2).unwrap();
        assert_eq!(d.element.upper_n(), 2 + 2 + 1);
    }
}
