//! Property tests: group axioms, cyclotomic arithmetic against a complex embedding,
//! companion matrices, and the homomorphism property of the built representations.

use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use ratrep_core::catalog::{entries_for, instantiate, GroupInstance};
use ratrep_core::cyclotomic::CycNumber;
use ratrep_core::format::{parse_word, word_text};
use ratrep_core::pairs::required_pairs;
use ratrep_core::rep::{all_rational_irreps, companion_power, RationalRep};

fn catalog3() -> &'static [GroupInstance] {
    static CELL: OnceLock<Vec<GroupInstance>> = OnceLock::new();
    CELL.get_or_init(|| entries_for(3).iter().map(|e| instantiate(e.name, 3).unwrap()).collect())
}

fn reps3() -> &'static [(usize, Vec<RationalRep>)] {
    static CELL: OnceLock<Vec<(usize, Vec<RationalRep>)>> = OnceLock::new();
    CELL.get_or_init(|| {
        catalog3()
            .iter()
            .enumerate()
            .filter(|(_, inst)| inst.family.index() > 1)
            .map(|(i, inst)| {
                let ps = required_pairs(inst).unwrap();
                (i, all_rational_irreps(&inst.group, &ps.pairs).unwrap())
            })
            .collect()
    })
}

/// Complex embedding `zeta_n -> exp(2 pi i / n)`.
fn embed(x: &CycNumber) -> (f64, f64) {
    let n = x.order() as f64;
    x.terms().fold((0.0, 0.0), |(re, im), (k, c)| {
        let a = 2.0 * std::f64::consts::PI * k as f64 / n;
        let c = c.to_f64().unwrap();
        (re + c * a.cos(), im + c * a.sin())
    })
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
}

fn cyc(n: u64) -> impl Strategy<Value = CycNumber> {
    prop::collection::vec((0..n as i64, -4i64..5, 1i64..4), 0..6).prop_map(move |terms| {
        let t: Vec<(i64, Rational64)> = terms.into_iter().map(|(e, a, b)| (e, Rational64::new(a, b))).collect();
        CycNumber::from_exponent_terms(n, &t).unwrap()
    })
}

fn field_pair() -> impl Strategy<Value = (u64, CycNumber, CycNumber)> {
    prop::sample::select(vec![3u64, 9, 27, 5, 25]).prop_flat_map(|n| (Just(n), cyc(n), cyc(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_axioms(gi in 0usize..33, x in 0u32..243, y in 0u32..243, z in 0u32..243) {
        let g = &catalog3()[gi % catalog3().len()].group;
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.inv(g.mul(x, y)), g.mul(g.inv(y), g.inv(x)));
        prop_assert_eq!(g.mul(x, y), g.mul(g.mul(y, x), g.comm(x, y)));
        prop_assert_eq!(g.conj(x, y), g.mul(g.mul(g.inv(y), x), y));
        prop_assert_eq!(g.pow(x, -1), g.inv(x));
    }

    #[test]
    fn collection_matches_multiplication(gi in 0usize..33, word in prop::collection::vec((0usize..5, -4i64..5), 0..12)) {
        let g = &catalog3()[gi % catalog3().len()].group;
        let direct = word.iter().fold(g.identity(), |acc, &(i, e)| g.mul(acc, g.pow(g.gen(i), e)));
        prop_assert_eq!(g.collect(&word).unwrap(), direct);
    }

    #[test]
    fn word_text_round_trip(exps in prop::collection::vec(-3i64..4, 5)) {
        let w: Vec<(usize, i64)> = exps.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e)).collect();
        prop_assert_eq!(parse_word(&word_text(&w), 5).unwrap(), w);
    }

    #[test]
    fn cyclotomic_ring_operations_embed((_n, a, b) in field_pair()) {
        let (ea, eb) = (embed(&a), embed(&b));
        let s = a.checked_add(&b).unwrap();
        prop_assert!(close(embed(&s), (ea.0 + eb.0, ea.1 + eb.1)));
        let m = a.checked_mul(&b).unwrap();
        prop_assert!(close(embed(&m), (ea.0 * eb.0 - ea.1 * eb.1, ea.0 * eb.1 + ea.1 * eb.0)));
        prop_assert!(close(embed(&a.conj()), (ea.0, -ea.1)));
    }

    #[test]
    fn galois_action_is_multiplicative((n, a, b) in field_pair(), t in 1i64..125) {
        let p = if n % 3 == 0 { 3 } else { 5 };
        prop_assume!(t % p != 0);
        let m = a.checked_mul(&b).unwrap();
        prop_assert_eq!(m.conj_by(t).unwrap(), a.conj_by(t).unwrap().checked_mul(&b.conj_by(t).unwrap()).unwrap());
    }

    #[test]
    fn trace_is_sum_of_conjugates((n, a, _b) in field_pair()) {
        let p = if n % 3 == 0 { 3 } else { 5 };
        let sum: f64 = (1..n as i64).filter(|t| t % p != 0).map(|t| embed(&a.conj_by(t).unwrap()).0).sum();
        prop_assert!((a.trace_from(n).unwrap().to_f64().unwrap() - sum).abs() < 1e-7);
    }

    #[test]
    fn companion_powers(d in prop::sample::select(vec![3u64, 9, 27, 5, 25, 125]), k in 0u64..300, l in 0u64..300) {
        let p = if d % 3 == 0 { 3 } else { 5 };
        prop_assert!(companion_power(d, d).is_identity());
        prop_assert!(!companion_power(d, d / p).is_identity());
        prop_assert_eq!(companion_power(d, k).mul(&companion_power(d, l)), companion_power(d, k + l));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn representations_are_homomorphisms(ri in 0usize..1000, k in 0usize..1000, x in 0u32..243, y in 0u32..243) {
        let (gi, reps) = &reps3()[ri % reps3().len()];
        let g = &catalog3()[*gi].group;
        let rep = &reps[k % reps.len()];
        prop_assert_eq!(rep.image_of(g, x).mul(&rep.image_of(g, y)), rep.image_of(g, g.mul(x, y)));
    }
}
