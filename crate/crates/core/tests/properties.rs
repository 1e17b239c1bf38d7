//! Randomized invariant checks complementing the exhaustive suites.

use crystal_automata::basic_array::{k_motion, BasicArray, Kind, Letter, Species};
use crystal_automata::crystal::{CarrierSpec, ElementA, ElementD};
use crystal_automata::dynamics::{
    contract_p_inverse, evolve_factorized, evolve_r, expand_p, AutomatonState,
};
use crystal_automata::gamma::gamma;
use crystal_automata::rmap_a::apply_r_a;
use crystal_automata::rmap_d::apply_r_d;
use crystal_automata::statefile::{parse_state, serialize_state};
use proptest::prelude::*;

fn element_a(n: usize, max: i64) -> impl Strategy<Value = ElementA> {
    prop::collection::vec(0..=max, n)
        .prop_filter("nonzero shape", |c| c.iter().any(|&v| v > 0))
        .prop_map(|c| ElementA::new(c).unwrap())
}

fn element_d(n: usize, max: i64) -> impl Strategy<Value = ElementD> {
    (
        prop::collection::vec(0..=max, n),
        prop::collection::vec(0..=max, n),
    )
        .prop_filter("valid element", move |(u, l)| {
            u[n - 1] * l[n - 1] == 0 && (u.iter().any(|&v| v > 0) || l.iter().any(|&v| v > 0))
        })
        .prop_map(|(u, l)| ElementD::new(u, l).unwrap())
}

proptest! {
    #[test]
    fn r_a_involution_and_conservation(
        x in element_a(4, 5),
        y in element_a(4, 5),
    ) {
        let (xp, yp) = apply_r_a(&x, &y).unwrap();
        prop_assert_eq!(xp.shape(), y.shape());
        prop_assert_eq!(yp.shape(), x.shape());
        for i in 1..=4 {
            prop_assert_eq!(x.coord(i) + y.coord(i), xp.coord(i) + yp.coord(i));
        }
        let (x2, y2) = apply_r_a(&xp, &yp).unwrap();
        prop_assert_eq!((x2, y2), (x, y));
    }

    #[test]
    fn r_d_involution_and_conservation(
        x in element_d(3, 3),
        y in element_d(3, 3),
    ) {
        let (xp, yp) = apply_r_d(&x, &y).unwrap();
        prop_assert_eq!(xp.shape(), y.shape());
        prop_assert_eq!(yp.shape(), x.shape());
        for i in 1..=3 {
            prop_assert_eq!(
                (x.up(i) - x.low(i)) + (y.up(i) - y.low(i)),
                (xp.up(i) - xp.low(i)) + (yp.up(i) - yp.low(i))
            );
        }
        let (x2, y2) = apply_r_d(&xp, &yp).unwrap();
        prop_assert_eq!((x2, y2), (x, y));
    }

    #[test]
    fn gamma_identities_random(
        a in 0i64..200, b in 0i64..200, c in 0i64..200, d in 0i64..200, e in 0i64..200,
    ) {
        let (f, g, h, i, j) = gamma(a, b, c, d, e).unwrap();
        prop_assert!(f >= 0 && g >= 0 && h >= 0 && i >= 0 && j >= 0);
        prop_assert_eq!(f + g, a + b);
        prop_assert_eq!(h + i, c + d);
        prop_assert_eq!(f + h + j, b + d + e);
    }

    #[test]
    fn statefile_round_trip_a(sites in prop::collection::vec(element_a(3, 4), 1..5)) {
        let state = AutomatonState::new_a(sites).unwrap();
        let text = serialize_state(&state);
        prop_assert_eq!(parse_state(&text).unwrap(), state);
        prop_assert_eq!(serialize_state(&parse_state(&text).unwrap()), text);
    }

    #[test]
    fn statefile_round_trip_d(sites in prop::collection::vec(element_d(3, 3), 1..4)) {
        let state = AutomatonState::new_d(sites).unwrap();
        let text = serialize_state(&state);
        prop_assert_eq!(parse_state(&text).unwrap(), state);
    }

    #[test]
    fn expand_contract_round_trip(sites in prop::collection::vec(element_d(3, 3), 1..4)) {
        let state = AutomatonState::new_d(sites).unwrap();
        prop_assert_eq!(contract_p_inverse(&expand_p(&state)).unwrap(), state);
    }

    #[test]
    fn k_motion_conserves_balance(
        cells in prop::collection::vec((1usize..=3, any::<bool>()), 1..20),
        load in 0i64..4,
        species in 1usize..=2,
        barred in any::<bool>(),
    ) {
        let arr = BasicArray {
            kind: Kind::D,
            n: 3,
            cells: cells.iter().map(|&(i, b)| Letter { index: i, barred: b }).collect(),
            blocks: vec![cells.len()],
        };
        let s = Species { index: species, barred };
        let (out, final_load) = k_motion(s, &arr, load).unwrap();
        prop_assert!(final_load >= 0);
        prop_assert_eq!(out.cells.len(), arr.cells.len());
        prop_assert_eq!(
            final_load + out.species_balance(s),
            load + arr.species_balance(s)
        );
    }

    #[test]
    fn theorem_equivalence_random_d(
        sites in prop::collection::vec(element_d(3, 2), 1..3),
    ) {
        let state = AutomatonState::new_d(sites).unwrap();
        let carrier = CarrierSpec::vacuum(true, 3, 2 * state.total_capacity()).unwrap();
        let (by_r, _) = evolve_r(&state, &carrier).unwrap();
        let by_k = evolve_factorized(&state, &carrier).unwrap();
        prop_assert_eq!(by_r, by_k);
    }
}
