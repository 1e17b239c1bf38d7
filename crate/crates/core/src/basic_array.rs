//! Capacity-1 cell arrays and the operators acting on them: the blockwise
//! expansion `P` and its inverse, the rearrangement `Q`, and the carrier
//! sweep `K_a` implementing the seven loading-unloading actions.

use crate::crystal::{ElementA, ElementD};
use crate::error::{Error, Result};
use std::fmt;

/// Which family of crystals the array came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    A,
    D,
}

/// One capacity-1 cell: a letter `1..n` or (type D) a barred letter
/// `1bar..nbar`.  The letter `n` is the vacuum, `nbar` a bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub barred: bool,
}

impl Letter {
    pub fn plain(index: usize) -> Self {
        Letter { index, barred: false }
    }

    pub fn barred(index: usize) -> Self {
        Letter { index, barred: true }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "-{}", self.index)
        } else {
            write!(f, "{}", self.index)
        }
    }
}

/// A ball species moved by a carrier: index `1..=n-1`, optionally barred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Species {
    pub index: usize,
    pub barred: bool,
}

/// A sequence of capacity-1 cells partitioned into blocks by walls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicArray {
    pub kind: Kind,
    pub n: usize,
    pub cells: Vec<Letter>,
    /// Block lengths, one per original site.
    pub blocks: Vec<usize>,
}

impl BasicArray {
    fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut start = 0;
        for &len in &self.blocks {
            out.push(start..start + len);
            start += len;
        }
        out
    }

    /// `(#cells with the letter) - (#cells with its bar partner)`, used by
    /// the sweep conservation law.
    pub fn species_balance(&self, s: Species) -> i64 {
        let mut bal = 0i64;
        for c in &self.cells {
            if c.index == s.index {
                if c.barred == s.barred {
                    bal += 1;
                } else {
                    bal -= 1;
                }
            }
        }
        bal
    }

    pub fn render(&self) -> String {
        let mut out = String::from("|");
        for r in self.block_ranges() {
            let body: Vec<String> = self.cells[r].iter().map(|c| c.to_string()).collect();
            out.push_str(&body.join(" "));
            out.push('|');
        }
        out
    }
}

/// Expands each site into its canonical block of capacity-1 cells:
/// `[1bar^{ybar_1} .. nbar^{ybar_n} n^{y_n} .. 1^{y_1}]` for type D,
/// `[n^{y_n} .. 1^{y_1}]` for type A.
pub fn expand_site_a(y: &ElementA) -> Vec<Letter> {
    let n = y.rank();
    let mut cells = Vec::new();
    for i in (1..=n).rev() {
        for _ in 0..y.coord(i) {
            cells.push(Letter::plain(i));
        }
    }
    cells
}

pub fn expand_site_d(y: &ElementD) -> Vec<Letter> {
    let n = y.rank();
    let mut cells = Vec::new();
    for i in 1..=n {
        for _ in 0..y.low(i) {
            cells.push(Letter::barred(i));
        }
    }
    for i in (1..=n).rev() {
        for _ in 0..y.up(i) {
            cells.push(Letter::plain(i));
        }
    }
    cells
}

/// The inverse of the site expansion; fails unless the block is arranged
/// exactly canonically.
pub fn contract_site_a(n: usize, block: &[Letter], block_no: usize) -> Result<ElementA> {
    let mut coords = vec![0i64; n];
    let mut last = n + 1;
    for c in block {
        if c.barred || c.index < 1 || c.index > n || c.index > last {
            return Err(Error::NotCanonicallyOrdered { block: block_no });
        }
        last = c.index;
        coords[c.index - 1] += 1;
    }
    ElementA::new(coords)
}

pub fn contract_site_d(n: usize, block: &[Letter], block_no: usize) -> Result<ElementD> {
    let mut upper = vec![0i64; n];
    let mut lower = vec![0i64; n];
    // canonical order: barred ascending, then unbarred descending
    let mut phase_barred = true;
    let mut last_barred = 0usize;
    let mut last_plain = n + 1;
    for c in block {
        if c.index < 1 || c.index > n {
            return Err(Error::NotCanonicallyOrdered { block: block_no });
        }
        if c.barred {
            if !phase_barred || c.index < last_barred {
                return Err(Error::NotCanonicallyOrdered { block: block_no });
            }
            last_barred = c.index;
            lower[c.index - 1] += 1;
        } else {
            phase_barred = false;
            if c.index > last_plain {
                return Err(Error::NotCanonicallyOrdered { block: block_no });
            }
            last_plain = c.index;
            upper[c.index - 1] += 1;
        }
    }
    ElementD::new(upper, lower).map_err(|_| Error::NotCanonicallyOrdered { block: block_no })
}

/// The rearrangement `Q`, applied blockwise: vacuum letters `n` pack to the
/// left end and (type D) bound states `nbar` to the right end; all other
/// letters keep their relative order.
pub fn rearrange_q(arr: &BasicArray) -> BasicArray {
    let n = arr.n;
    let mut cells = Vec::with_capacity(arr.cells.len());
    for r in arr.block_ranges() {
        let block = &arr.cells[r];
        let vacua = block.iter().filter(|c| **c == Letter::plain(n)).count();
        cells.extend(std::iter::repeat(Letter::plain(n)).take(vacua));
        cells.extend(block.iter().filter(|c| c.index != n).copied());
        if arr.kind == Kind::D {
            let bound = block.iter().filter(|c| **c == Letter::barred(n)).count();
            cells.extend(std::iter::repeat(Letter::barred(n)).take(bound));
        }
    }
    BasicArray { kind: arr.kind, n, cells, blocks: arr.blocks.clone() }
}

/// One left-to-right carrier sweep for the given species, ignoring walls.
/// Returns the new array and the carrier's final load.
pub fn k_motion(s: Species, arr: &BasicArray, initial_load: i64) -> Result<(BasicArray, i64)> {
    let n = arr.n;
    if s.index < 1 || s.index >= n {
        return Err(Error::InvalidSpecies {
            species: format!("{}{}", if s.barred { "-" } else { "" }, s.index),
        });
    }
    if initial_load < 0 {
        return Err(Error::NegativeInput { index: 0, value: initial_load });
    }
    if arr.kind == Kind::A && s.barred {
        return Err(Error::InvalidSpecies { species: format!("-{}", s.index) });
    }
    let ball = Letter { index: s.index, barred: s.barred };
    let anti = Letter { index: s.index, barred: !s.barred };
    let vacuum = Letter::plain(n);
    let bound = Letter::barred(n);

    let before = arr.species_balance(s);
    let mut cells = arr.cells.clone();
    let mut load = initial_load;
    for c in cells.iter_mut() {
        if *c == ball {
            // act 2: pick the ball up
            load += 1;
            *c = vacuum;
        } else if *c == vacuum {
            if load >= 1 {
                // act 1: unload into the empty box
                load -= 1;
                *c = ball;
            } // act 4: nothing
        } else if *c == anti {
            if load >= 1 {
                // act 5: pair annihilation into a bound state
                load -= 1;
                *c = bound;
            } // act 7: nothing
        } else if *c == bound && arr.kind == Kind::D {
            // act 6: pair creation, extract a ball
            load += 1;
            *c = anti;
        } // act 3: other letters are ignored
    }
    let out = BasicArray { kind: arr.kind, n, cells, blocks: arr.blocks.clone() };
    debug_assert_eq!(load + out.species_balance(s), initial_load + before);
    Ok((out, load))
}
