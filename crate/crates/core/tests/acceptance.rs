//! Acceptance gate: one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use crystal_automata::crystal::ElementA;
use crystal_automata::dynamics::{evolve_r, AutomatonState};
use crystal_automata::crystal::CarrierSpec;
use crystal_automata::gamma::gamma;
use crystal_automata::rmap_a::apply_r_a;
use crystal_automata::verify::{run_suite, Bounds};

struct Gate {
    failed: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failed: Vec::new() }
    }

    fn criterion(&mut self, number: u32, name: &str, ok: bool, detail: String) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {number} ({name}): {verdict} [{detail}]");
        if !ok {
            self.failed.push(format!("criterion {number} ({name}): {detail}"));
        }
    }

    fn suites(&mut self, number: u32, name: &str, specs: &[(&str, &str, u64)], min_cases: u64) {
        let mut ok = true;
        let mut details = Vec::new();
        for (suite, bounds, seed) in specs {
            match run_suite(suite, &Bounds::parse(bounds).unwrap(), *seed) {
                Ok(r) => {
                    let good = r.passed() && r.cases >= min_cases;
                    if !good {
                        ok = false;
                    }
                    details.push(format!(
                        "{suite}: {} cases, {} failures, {} ms",
                        r.cases,
                        r.failures.len(),
                        r.millis
                    ));
                    if let Some(f) = r.failures.first() {
                        details.push(format!("first failure: {} :: {}", f.input, f.detail));
                    }
                }
                Err(e) => {
                    ok = false;
                    details.push(format!("{suite}: error {e}"));
                }
            }
        }
        self.criterion(number, name, ok, details.join("; "));
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();

    gate.suites(1, "Theorem 2.1 equivalence", &[("theorem21", "", 0)], 1);
    gate.suites(2, "Theorem 4.1 equivalence", &[("theorem41", "", 0)], 1);
    gate.suites(3, "Theorem 5.1 triple agreement", &[("theorem51", "", 0)], 1);
    gate.suites(
        4,
        "lemma suite",
        &[
            ("lemma31", "", 0),
            ("tableII", "", 0),
            ("reductionA", "", 0),
            ("lemma33", "", 0),
            ("limits51", "", 0),
            ("limits52", "", 0),
            ("lemma53", "", 0),
            ("lemma54", "", 0),
            ("lemmaA1", "", 0),
            ("lemmaA2", "", 0),
            ("p-monotone", "", 0),
        ],
        10_000,
    );
    gate.suites(5, "gamma identities", &[("gamma-identities", "max=4", 0)], 3125);
    gate.suites(
        6,
        "R involution and Yang-Baxter",
        &[("r-involution", "", 0), ("yang-baxter", "", 0)],
        1,
    );
    gate.suites(
        7,
        "conservation laws",
        &[("weight", "", 0), ("carrier-law", "", 0)],
        1,
    );

    // criterion 8: worked micro-examples
    let micro = (|| -> Result<bool, crystal_automata::Error> {
        let (xp, yp) = apply_r_a(
            &ElementA::new(vec![2, 0])?,
            &ElementA::new(vec![0, 1])?,
        )?;
        let r_ok = xp.coords() == [1, 0] && yp.coords() == [1, 1];

        let state = AutomatonState::new_a(vec![
            ElementA::new(vec![1, 0])?,
            ElementA::new(vec![0, 1])?,
            ElementA::new(vec![1, 0])?,
            ElementA::new(vec![0, 1])?,
        ])?;
        let carrier = CarrierSpec::vacuum(false, 2, state.total_capacity())?;
        let (next, _) = evolve_r(&state, &carrier)?;
        let expected = AutomatonState::new_a(vec![
            ElementA::new(vec![0, 1])?,
            ElementA::new(vec![1, 0])?,
            ElementA::new(vec![0, 1])?,
            ElementA::new(vec![1, 0])?,
        ])?;
        let bb_ok = next == expected;

        let g_ok = gamma(1, 0, 2, 0, 3)? == (1, 0, 2, 0, 0);
        Ok(r_ok && bb_ok && g_ok)
    })();
    match micro {
        Ok(ok) => gate.criterion(8, "worked micro-examples", ok, "3 fixtures".into()),
        Err(e) => gate.criterion(8, "worked micro-examples", false, format!("error: {e}")),
    }

    assert!(gate.failed.is_empty(), "failed criteria:\n{}", gate.failed.join("\n"));
}
