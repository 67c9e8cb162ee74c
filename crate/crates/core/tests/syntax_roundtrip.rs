use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use sct_core::random::{random_formula, random_sequent, tiny_signature};
use sct_core::{parse_formula, parse_sequent, print_formula, print_sequent, Signature};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn formulas_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = random_formula(&mut rng, &tiny_signature(), 5, &[]);
        let text = print_formula(&phi);
        let back = parse_formula(&text, &mut Signature::new()).unwrap();
        prop_assert_eq!(&back, &phi, "{}", text);
        prop_assert_eq!(print_formula(&back), text);
    }

    #[test]
    fn sequents_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = random_sequent(&mut rng, &tiny_signature(), 3, 3);
        let text = print_sequent(&s);
        let back = parse_sequent(&text, &mut Signature::new()).unwrap();
        prop_assert!(back.same_display(&s), "{}", text);
    }
}
