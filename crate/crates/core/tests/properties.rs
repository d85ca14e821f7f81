use onerel::classify::classify_out;
use onerel::smallcancel::{dehn_reduce, symmetrize};
use onerel::{balance_relator, Error, Gen, Letter, Word};
use proptest::prelude::*;

fn arb_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..4, 1..=max).prop_map(|ix| Word::from_letters(ix.into_iter().map(|i| Letter::all()[i])))
}

fn class_of(r: &Word, n: i64) -> Option<String> {
    match classify_out(r, n) {
        Ok(rep) => Some(rep.out_class.to_string()),
        Err(Error::TheoryViolation(m)) => panic!("theory violation on {r}: {m}"),
        Err(_) => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classification_is_invariant_under_rotation_inverse_and_conjugation(
        r in arb_word(12), k in 0usize..12, c in arb_word(4), n in 2i64..6,
    ) {
        let (core, _) = r.cyclic_reduce();
        prop_assume!(!core.is_identity());
        let base = class_of(&core, n);
        prop_assert_eq!(&base, &class_of(&core.rotate_left(k % core.len()), n));
        prop_assert_eq!(&base, &class_of(&core.inverse(), n));
        prop_assert_eq!(&base, &class_of(&core.conjugate_by(&c), n));
    }

    #[test]
    fn balancing_contract(r in arb_word(14), n in 2i64..6) {
        let Ok(bp) = balance_relator(&r, n) else { return Ok(()) };
        prop_assert_eq!(bp.s.exponent_sum(Gen::A), 0);
        prop_assert!(bp.s.is_cyclically_reduced());
        prop_assert!(bp.basis_change.is_basis());
        let g = num_integer::gcd(r.exponent_sum(Gen::A), r.exponent_sum(Gen::B));
        prop_assert_eq!(bp.s.exponent_sum(Gen::B).abs(), g);
    }

    #[test]
    fn dehn_output_is_shorter_and_has_no_long_member_prefix(w in arb_word(30)) {
        let ss = symmetrize(&["a b A b^2".parse::<Word>().unwrap().pow(6)]);
        let out = dehn_reduce(&w, &ss);
        prop_assert!(out.len() <= w.len());
        let letters = out.to_letters();
        for m in ss.members() {
            let m = m.to_letters();
            let half = m.len() / 2 + 1;
            for start in 0..letters.len() {
                let tail = &letters[start..];
                let common = tail.iter().zip(&m).take_while(|(x, y)| x == y).count();
                prop_assert!(common < half, "{} keeps more than half of a member", out);
            }
        }
    }
}
