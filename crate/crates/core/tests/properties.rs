//! Randomized law checks. Each case is generated from a proptest-chosen seed.

mod common;

use proptest::prelude::*;

use common::*;

fn run(case: CaseResult) -> Result<(), TestCaseError> {
    case.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lie_identities(seed in any::<u64>()) {
        run(lie_identities_case(seed))?;
    }

    #[test]
    fn embed_straighten_round_trip(seed in any::<u64>()) {
        run(embed_round_trip_case(seed))?;
    }

    #[test]
    fn reduce_matches_word_commutators(seed in any::<u64>()) {
        run(reduce_oracle_case(seed))?;
    }

    #[test]
    fn coproduct_laws(seed in any::<u64>()) {
        run(coproduct_case(seed))?;
    }

    #[test]
    fn eulerian_idempotent(seed in any::<u64>()) {
        run(eulerian_case(seed))?;
    }

    #[test]
    fn format_round_trip(seed in any::<u64>()) {
        run(format_round_trip_case(seed))?;
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        run(json_case(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parser_never_panics(seed in any::<u64>()) {
        run(parser_fuzz_case(seed))?;
    }

    #[test]
    fn parser_on_raw_strings(text in "\\PC{0,40}") {
        if let Err(e) = whitealg::expr_io::parse_expr(&text) {
            prop_assert!(e.position <= text.len());
        }
    }
}
