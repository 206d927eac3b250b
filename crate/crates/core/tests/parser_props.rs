mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weakpoisson::dsl::*;

use common::docs::{document, expr};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(doc in document()) {
        let text = print_system(&doc);
        let back = parse_system(&text).map_err(|d| TestCaseError::fail(format!("{d}\n{text}")))?;
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(print_system(&back), text);
    }

    #[test]
    fn expressions_round_trip(e in expr()) {
        let text = expr_to_string(&e);
        prop_assert_eq!(parse_expression(&text).unwrap(), e);
    }
}

fn assert_positioned(text: &str) {
    match load_system(text) {
        Ok(_) => {}
        Err(d) => {
            let lines = text.split('\n').count();
            assert!(d.line >= 1 && d.column >= 1 && d.line <= lines, "{d:?} for {text:?}");
        }
    }
}

#[test]
fn random_bytes_give_diagnostics_not_crashes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6773_7973);
    let alphabet = b"coordsvectorgaugewedge xyzd/dp1()+-*^;,=:{}#\n0123456789";
    for i in 0..100_000 {
        let len = rng.gen_range(0..48);
        let bytes: Vec<u8> = if i % 2 == 0 {
            (0..len).map(|_| rng.gen()).collect()
        } else {
            (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
        };
        assert_positioned(&String::from_utf8_lossy(&bytes));
    }
}

#[test]
fn mutated_fixtures_give_diagnostics_not_crashes() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let sources: Vec<String> = ["heisenberg", "contact-2", "triangular-3"]
        .iter()
        .map(|n| fixtures::source(n).unwrap())
        .collect();
    for _ in 0..2_000 {
        let mut bytes = sources[rng.gen_range(0..sources.len())].clone().into_bytes();
        for _ in 0..rng.gen_range(1..4) {
            let at = rng.gen_range(0..bytes.len());
            match rng.gen_range(0..3) {
                0 => bytes[at] = rng.gen_range(32..127),
                1 => {
                    bytes.remove(at);
                }
                _ => bytes.insert(at, rng.gen_range(32..127)),
            }
        }
        assert_positioned(&String::from_utf8_lossy(&bytes));
    }
}

#[test]
fn deep_nesting_is_a_diagnostic() {
    for text in ["(".repeat(100_000), "-".repeat(100_000) + "x;", "wedge(".repeat(50_000)] {
        let d = parse_system(&text).unwrap_err();
        assert!(d.line >= 1 && d.column >= 1);
    }
}
