//! Time evolution of the automaton: the R-based step (threading a large
//! carrier through the sites) and the factorized step assembled from the
//! expansion `P`, the carrier sweeps `K_a`, and the rearrangement `Q`.

use crate::basic_array::{
    contract_site_a, contract_site_d, expand_site_a, expand_site_d, k_motion, rearrange_q,
    BasicArray, Kind, Species,
};
use crate::crystal::{CarrierElement, CarrierSpec, ElementA, ElementD};
use crate::error::{Error, Result};
use crate::rmap_a::apply_r_a;
use crate::rmap_d::apply_r_d;

/// A row of automaton sites, all of the same kind and rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomatonState {
    A(Vec<ElementA>),
    D(Vec<ElementD>),
}

impl AutomatonState {
    pub fn new_a(sites: Vec<ElementA>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::EmptyVector);
        }
        let n = sites[0].rank();
        for s in &sites {
            if s.rank() != n {
                return Err(Error::DimensionMismatch { left: n, right: s.rank() });
            }
        }
        Ok(AutomatonState::A(sites))
    }

    pub fn new_d(sites: Vec<ElementD>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::EmptyVector);
        }
        let n = sites[0].rank();
        if n < 3 {
            return Err(Error::UnsupportedRank { n, min: 3 });
        }
        for s in &sites {
            if s.rank() != n {
                return Err(Error::DimensionMismatch { left: n, right: s.rank() });
            }
        }
        Ok(AutomatonState::D(sites))
    }

    pub fn kind(&self) -> Kind {
        match self {
            AutomatonState::A(_) => Kind::A,
            AutomatonState::D(_) => Kind::D,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            AutomatonState::A(s) => s[0].rank(),
            AutomatonState::D(s) => s[0].rank(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AutomatonState::A(s) => s.len(),
            AutomatonState::D(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn capacities(&self) -> Vec<i64> {
        match self {
            AutomatonState::A(s) => s.iter().map(|x| x.shape()).collect(),
            AutomatonState::D(s) => s.iter().map(|x| x.shape()).collect(),
        }
    }

    pub fn total_capacity(&self) -> i64 {
        self.capacities().iter().sum()
    }

    /// Componentwise letter balance `#a - #abar` summed over the sites,
    /// indexed `a = 1..n`.
    pub fn weight(&self) -> Vec<i64> {
        let n = self.rank();
        let mut w = vec![0i64; n];
        match self {
            AutomatonState::A(sites) => {
                for s in sites {
                    for a in 1..=n {
                        w[a - 1] += s.coord(a);
                    }
                }
            }
            AutomatonState::D(sites) => {
                for s in sites {
                    for a in 1..=n {
                        w[a - 1] += s.up(a) - s.low(a);
                    }
                }
            }
        }
        w
    }
}

/// Componentwise letter balance of a carrier element, indexed `a = 1..n`.
pub fn carrier_weight(c: &CarrierElement) -> Vec<i64> {
    match c {
        CarrierElement::A(x) => x.coords().to_vec(),
        CarrierElement::D(x) => {
            (1..=x.rank()).map(|a| x.up(a) - x.low(a)).collect()
        }
    }
}

/// Threads the carrier through the sites once (no stabilization witness).
fn thread_once(state: &AutomatonState, carrier: &CarrierElement) -> Result<(AutomatonState, CarrierElement)> {
    match (state, carrier) {
        (AutomatonState::A(sites), CarrierElement::A(x)) => {
            let mut c = x.clone();
            let mut out = Vec::with_capacity(sites.len());
            for y in sites {
                let (xp, yp) = apply_r_a(&c, y)?;
                out.push(xp);
                c = yp;
            }
            Ok((AutomatonState::A(out), CarrierElement::A(c)))
        }
        (AutomatonState::D(sites), CarrierElement::D(x)) => {
            let mut c = x.clone();
            let mut out = Vec::with_capacity(sites.len());
            for y in sites {
                let (xp, yp) = apply_r_d(&c, y)?;
                out.push(xp);
                c = yp;
            }
            Ok((AutomatonState::D(out), CarrierElement::D(c)))
        }
        _ => Err(Error::ShapeMismatch("state kind and carrier kind differ".into())),
    }
}

/// One time step by the R map: `x x Y -> X' x y'` site by site.  The
/// carrier must be large enough that the new state does not depend on its
/// exact `x_n`; this is checked by rerunning with `x_n + 1`.
pub fn evolve_r(state: &AutomatonState, carrier: &CarrierSpec) -> Result<(AutomatonState, CarrierElement)> {
    if carrier.element.rank() != state.rank() {
        return Err(Error::DimensionMismatch {
            left: carrier.element.rank(),
            right: state.rank(),
        });
    }
    let (next, out_carrier) = thread_once(state, &carrier.element)?;
    let bumped = carrier.element.bump_upper_n(1)?;
    let (witness, _) = thread_once(state, &bumped)?;
    if witness != next {
        return Err(Error::MarginTooSmall);
    }
    Ok((next, out_carrier))
}

/// The blockwise expansion `P` of a state into capacity-1 cells.
pub fn expand_p(state: &AutomatonState) -> BasicArray {
    let n = state.rank();
    let mut cells = Vec::new();
    let mut blocks = Vec::new();
    match state {
        AutomatonState::A(sites) => {
            for y in sites {
                let block = expand_site_a(y);
                blocks.push(block.len());
                cells.extend(block);
            }
        }
        AutomatonState::D(sites) => {
            for y in sites {
                let block = expand_site_d(y);
                blocks.push(block.len());
                cells.extend(block);
            }
        }
    }
    BasicArray { kind: state.kind(), n, cells, blocks }
}

/// The inverse expansion `P^{-1}`; defined only on canonically ordered
/// arrays.
pub fn contract_p_inverse(arr: &BasicArray) -> Result<AutomatonState> {
    let n = arr.n;
    let mut start = 0usize;
    match arr.kind {
        Kind::A => {
            let mut sites = Vec::with_capacity(arr.blocks.len());
            for (b, &len) in arr.blocks.iter().enumerate() {
                sites.push(contract_site_a(n, &arr.cells[start..start + len], b + 1)?);
                start += len;
            }
            AutomatonState::new_a(sites)
        }
        Kind::D => {
            let mut sites = Vec::with_capacity(arr.blocks.len());
            for (b, &len) in arr.blocks.iter().enumerate() {
                sites.push(contract_site_d(n, &arr.cells[start..start + len], b + 1)?);
                start += len;
            }
            AutomatonState::new_d(sites)
        }
    }
}

/// A labelled intermediate snapshot of the factorized evolution together
/// with the final load of the carrier that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSnapshot {
    pub label: String,
    pub species: Species,
    pub array: BasicArray,
    pub final_load: i64,
}

/// The full record of one factorized step: the expanded array, a snapshot
/// after every carrier sweep (`t_i` for the `i`-carrier, `tbar_i` for the
/// `ibar`-carrier), and the array after `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutionTrace {
    pub expanded: BasicArray,
    pub snapshots: Vec<TraceSnapshot>,
    pub after_q: BasicArray,
}

fn carrier_load(carrier: &CarrierElement, s: Species) -> i64 {
    match carrier {
        CarrierElement::A(x) => x.coord(s.index),
        CarrierElement::D(x) => {
            if s.barred {
                x.low(s.index)
            } else {
                x.up(s.index)
            }
        }
    }
}

/// One time step by the factorized operator string, recording every
/// intermediate array.
pub fn evolve_factorized_traced(
    state: &AutomatonState,
    carrier: &CarrierSpec,
) -> Result<(AutomatonState, EvolutionTrace)> {
    if carrier.element.rank() != state.rank() {
        return Err(Error::DimensionMismatch {
            left: carrier.element.rank(),
            right: state.rank(),
        });
    }
    let n = state.rank();
    let expanded = expand_p(state);
    let mut snapshots = Vec::new();
    let mut arr = expanded.clone();
    for a in (1..=n - 1).rev() {
        let s = Species { index: a, barred: false };
        let (next, load) = k_motion(s, &arr, carrier_load(&carrier.element, s))?;
        arr = next;
        snapshots.push(TraceSnapshot {
            label: format!("t_{a}"),
            species: s,
            array: arr.clone(),
            final_load: load,
        });
    }
    arr = rearrange_q(&arr);
    let after_q = arr.clone();
    if state.kind() == Kind::D {
        for a in 1..=n - 1 {
            let s = Species { index: a, barred: true };
            let (next, load) = k_motion(s, &arr, carrier_load(&carrier.element, s))?;
            arr = next;
            snapshots.push(TraceSnapshot {
                label: format!("tbar_{a}"),
                species: s,
                array: arr.clone(),
                final_load: load,
            });
        }
    }
    let out = contract_p_inverse(&arr)?;
    Ok((out, EvolutionTrace { expanded, snapshots, after_q }))
}

/// One time step by the factorized operator string
/// `P^{-1} K_{nbar-1} .. K_{1bar} Q K_1 .. K_{n-1} P` (type D) or
/// `P^{-1} Q K_1 .. K_{n-1} P` (type A).
pub fn evolve_factorized(state: &AutomatonState, carrier: &CarrierSpec) -> Result<AutomatonState> {
    evolve_factorized_traced(state, carrier).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basic_array::Letter;

    fn state_a(coords: &[&[i64]]) -> AutomatonState {
        AutomatonState::new_a(coords.iter().map(|c| ElementA::new(c.to_vec()).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn vacuum_fixed_point() {
        let state = AutomatonState::new_a(vec![
            ElementA::vacuum(3, 2).unwrap(),
            ElementA::vacuum(3, 1).unwrap(),
        ])
        .unwrap();
        let carrier = CarrierSpec::vacuum(false, 3, state.total_capacity()).unwrap();
        let (next, out) = evolve_r(&state, &carrier).unwrap();
        assert_eq!(next, state);
        assert_eq!(out, carrier.element);
        assert_eq!(evolve_factorized(&state, &carrier).unwrap(), state);

        let state = AutomatonState::new_d(vec![ElementD::vacuum(3, 2).unwrap()]).unwrap();
        let carrier = CarrierSpec::vacuum(true, 3, state.total_capacity()).unwrap();
        let (next, _) = evolve_r(&state, &carrier).unwrap();
        assert_eq!(next, state);
        assert_eq!(evolve_factorized(&state, &carrier).unwrap(), state);
    }

    #[test]
    fn classic_box_ball_step() {
        // n=2 capacity-1 sites [1][2][1][2] -> [2][1][2][1]
        let state = state_a(&[&[1, 0], &[0, 1], &[1, 0], &[0, 1]]);
        let carrier = CarrierSpec::vacuum(false, 2, state.total_capacity()).unwrap();
        let (next, _) = evolve_r(&state, &carrier).unwrap();
        assert_eq!(next, state_a(&[&[0, 1], &[1, 0], &[0, 1], &[1, 0]]));
        assert_eq!(evolve_factorized(&state, &carrier).unwrap(), next);
    }

    #[test]
    fn margin_witness_rejects_small_carrier() {
        let state = state_a(&[&[2, 0]]);
        // carrier with x_2 = 1 cannot absorb two balls
        let carrier = CarrierSpec::new(
            CarrierElement::A(ElementA::new(vec![0, 1]).unwrap()),
            0,
        )
        .unwrap();
        assert!(matches!(evolve_r(&state, &carrier), Err(Error::MarginTooSmall)));
    }

    #[test]
    fn expand_contract_round_trip() {
        for l1 in 1..=2 {
            for l2 in 1..=2 {
                for s1 in crate::crystal::elements_d(3, l1) {
                    for s2 in crate::crystal::elements_d(3, l2) {
                        let state = AutomatonState::new_d(vec![s1.clone(), s2]).unwrap();
                        let arr = expand_p(&state);
                        assert_eq!(contract_p_inverse(&arr).unwrap(), state);
                    }
                }
            }
        }
    }

    #[test]
    fn expand_examples() {
        let state = AutomatonState::new_d(vec![
            ElementD::new(vec![1, 0, 0], vec![1, 0, 0]).unwrap(),
        ])
        .unwrap();
        assert_eq!(expand_p(&state).cells, vec![Letter::barred(1), Letter::plain(1)]);
        let bad = BasicArray {
            kind: Kind::D,
            n: 3,
            cells: vec![Letter::plain(1), Letter::barred(3)],
            blocks: vec![2],
        };
        assert!(matches!(
            contract_p_inverse(&bad),
            Err(Error::NotCanonicallyOrdered { block: 1 })
        ));
    }

    #[test]
    fn carrier_final_load_law_type_a() {
        // single site, type A: y'_a = x_a + y_a - x'_a
        for xs in crate::crystal::elements_a_coords(3, 2) {
            let mut side = xs.coords().to_vec();
            side[2] = 0;
            for y in crate::crystal::elements_a(3, 2) {
                let carrier = CarrierSpec::saturated_a(&side, 2 + y.shape()).unwrap();
                let state = AutomatonState::new_a(vec![y.clone()]).unwrap();
                let (next, out) = evolve_r(&state, &carrier).unwrap();
                let AutomatonState::A(sites) = &next else { unreachable!() };
                let CarrierElement::A(yp) = &out else { unreachable!() };
                for a in 1..=2 {
                    let x_a = match &carrier.element {
                        CarrierElement::A(x) => x.coord(a),
                        _ => unreachable!(),
                    };
                    assert_eq!(yp.coord(a), x_a + y.coord(a) - sites[0].coord(a));
                }
            }
        }
    }

    #[test]
    fn factorized_equals_r_type_a() {
        // n=3, two sites, capacities summing to <= 3, vacuum carrier
        for l1 in 1..=2i64 {
            for l2 in 1..=(3 - l1) {
                for s1 in crate::crystal::elements_a(3, l1) {
                    for s2 in crate::crystal::elements_a(3, l2) {
                        let state = AutomatonState::new_a(vec![s1.clone(), s2]).unwrap();
                        let carrier =
                            CarrierSpec::vacuum(false, 3, state.total_capacity()).unwrap();
                        let (by_r, _) = evolve_r(&state, &carrier).unwrap();
                        let by_k = evolve_factorized(&state, &carrier).unwrap();
                        assert_eq!(by_r, by_k, "state {state:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn factorized_equals_r_type_d() {
        for l in 1..=2i64 {
            for s in crate::crystal::elements_d(3, l) {
                let state = AutomatonState::new_d(vec![s]).unwrap();
                for xpart in crate::crystal::carrier_parts_d(3, 1) {
                    let carrier = CarrierSpec::saturated_d(
                        xpart.upper(),
                        xpart.lower(),
                        state.total_capacity(),
                    )
                    .unwrap();
                    let (by_r, _) = evolve_r(&state, &carrier).unwrap();
                    let by_k = evolve_factorized(&state, &carrier).unwrap();
                    assert_eq!(by_r, by_k, "state {state:?} carrier {carrier:?}");
                }
            }
        }
    }

    #[test]
    fn weight_conservation() {
        for l in 1..=2i64 {
            for s in crate::crystal::elements_d(3, l) {
                let state = AutomatonState::new_d(vec![s]).unwrap();
                let carrier = CarrierSpec::vacuum(true, 3, state.total_capacity()).unwrap();
                let (next, out) = evolve_r(&state, &carrier).unwrap();
                let before: Vec<i64> = state
                    .weight()
                    .iter()
                    .zip(carrier_weight(&carrier.element))
                    .map(|(a, b)| a + b)
                    .collect();
                let after: Vec<i64> = next
                    .weight()
                    .iter()
                    .zip(carrier_weight(&out))
                    .map(|(a, b)| a + b)
                    .collect();
                assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn multi_site_chaining() {
        // evolving two sites equals two single-site steps with carrier hand-off
        for s1 in crate::crystal::elements_d(3, 1) {
            for s2 in crate::crystal::elements_d(3, 2) {
                let state = AutomatonState::new_d(vec![s1.clone(), s2.clone()]).unwrap();
                let carrier = CarrierSpec::vacuum(true, 3, state.total_capacity()).unwrap();
                let (next, out) = evolve_r(&state, &carrier).unwrap();
                let CarrierElement::D(x0) = &carrier.element else { unreachable!() };
                let (t1, c1) = apply_r_d(x0, &s1).unwrap();
                let (t2, c2) = apply_r_d(&c1, &s2).unwrap();
                assert_eq!(next, AutomatonState::new_d(vec![t1, t2]).unwrap());
                assert_eq!(out, CarrierElement::D(c2));
            }
        }
    }

    #[test]
    fn trace_matches_local_step_recursion() {
        // Table III correspondence at N = 1: the recursion variables equal
        // the box counts along the factorized evolution.
        let n = 3usize;
        for xpart in crate::crystal::carrier_parts_d(n, 1) {
            for y in crate::crystal::elements_d(n, 2) {
                // each bound state releases two balls into the carrier,
                // so the margin must cover twice the site shape
                let carrier =
                    CarrierSpec::saturated_d(xpart.upper(), xpart.lower(), 2 * y.shape()).unwrap();
                let CarrierElement::D(x) = &carrier.element else { unreachable!() };
                let (xp, yp, trace) = crate::gamma::local_step(x, &y).unwrap();
                let state = AutomatonState::new_d(vec![y.clone()]).unwrap();
                let (_, tr) = evolve_factorized_traced(&state, &carrier).unwrap();
                for snap in &tr.snapshots {
                    let i = snap.species.index;
                    let empties = snap
                        .array
                        .cells
                        .iter()
                        .filter(|c| **c == Letter::plain(n))
                        .count() as i64;
                    let bound = snap
                        .array
                        .cells
                        .iter()
                        .filter(|c| **c == Letter::barred(n))
                        .count() as i64;
                    let balls = snap.array.cells.iter().filter(|c| c.index == i && !c.barred).count()
                        as i64;
                    let anti = snap.array.cells.iter().filter(|c| c.index == i && c.barred).count()
                        as i64;
                    if !snap.species.barred {
                        assert_eq!(empties, trace.z[n - i]);
                        assert_eq!(bound, trace.zbar[n - i]);
                        assert_eq!(balls, trace.y_circ[i - 1]);
                        assert_eq!(anti, trace.ybar_circ[i - 1]);
                        assert_eq!(snap.final_load, yp.up(i));
                    } else {
                        assert_eq!(empties, trace.z[n - 1 + i]);
                        assert_eq!(bound, trace.zbar[n - 1 + i]);
                        assert_eq!(balls, xp.up(i));
                        assert_eq!(anti, xp.low(i));
                        assert_eq!(snap.final_load, yp.low(i));
                    }
                }
            }
        }
    }
}
