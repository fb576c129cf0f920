//! Worked examples for the group engine, characters, catalog, pairs and decompositions.

use std::collections::BTreeMap;

use num_rational::Rational64;
use ratrep_core::catalog::{classify, entries_for, ingest, instantiate, residue_fingerprint};
use ratrep_core::character::{
    character_inner_product, galois_orbit, induce, inner_product, is_camina_pair, is_vz_group, linear_characters,
    omega, ClassFunction, LinearCharacter,
};
use ratrep_core::cyclotomic::{field_of_values, CycNumber};
use ratrep_core::pairs::{generic_search, linear_pairs, orbit_keys, quotient_lift_pairs, required_pairs, verify_pair};
use ratrep_core::pc::{PcGroup, PcPresentation};
use ratrep_core::wedderburn::{decompose, perlis_walker, Component, Decomposition};
use ratrep_core::Error;

fn abelian(p: u32, parts: &[usize]) -> PcGroup {
    let n: usize = parts.iter().sum();
    let mut pr = PcPresentation::new(p, n).unwrap();
    let mut k = 0;
    for &part in parts {
        for j in 0..part - 1 {
            let mut w = vec![0; n];
            w[k + j + 1] = 1;
            pr.set_power(k + j, &w).unwrap();
        }
        k += part;
    }
    PcGroup::new(pr).unwrap()
}

fn r(x: i64) -> Rational64 {
    Rational64::from_integer(x)
}

#[test]
fn collection_in_phi2_elementary() {
    let inst = instantiate("Phi_2(1^5)", 3).unwrap();
    let g = &inst.group;
    let a = inst.element("alpha").unwrap();
    let a1 = inst.element("alpha1").unwrap();
    let a2 = inst.element("alpha2").unwrap();
    assert_eq!(g.mul(a1, a), g.mul(g.mul(a, a1), a2));
    assert_eq!(g.collect(&[]).unwrap(), g.identity());
    for x in 0..g.order() as u32 {
        assert_eq!(g.mul(x, g.inv(x)), 0);
        assert_eq!(g.comm(x, x), 0);
        assert_eq!(g.mul(0, x), x);
    }
}

#[test]
fn power_and_subgroups_of_phi2_41() {
    let inst = instantiate("Phi_2(41)", 3).unwrap();
    let g = &inst.group;
    let a = inst.element("alpha").unwrap();
    assert_eq!(g.pow(a, 27), inst.element("alpha2").unwrap());
    let z = g.center();
    assert_eq!(z.order(), 27);
    assert_eq!(z, g.closure(&[g.pow(a, 3)]));
    assert_eq!(g.derived_subgroup(), g.closure(&[g.pow(a, 27)]));
    let inst = instantiate("Phi_2(311)a", 3).unwrap();
    let g = &inst.group;
    let a = inst.element("alpha").unwrap();
    assert_eq!(g.center(), g.closure(&[g.pow(a, 3), inst.element("gamma").unwrap()]));
    assert_eq!(g.center().order(), 27);
}

#[test]
fn classes_and_degrees() {
    let inst = instantiate("Phi_5(1^5)", 3).unwrap();
    let g = &inst.group;
    let z = g.center();
    let d = g.derived_subgroup();
    let cls = g.conjugacy_classes();
    for (c, &rep) in cls.reps.iter().enumerate() {
        if !z.contains(rep) {
            let mut coset: Vec<u32> = d.members().iter().map(|&m| g.mul(rep, m)).collect();
            coset.sort_unstable();
            let mut class: Vec<u32> = (0..g.order() as u32).filter(|&x| cls.class_of[x as usize] as usize == c).collect();
            class.sort_unstable();
            assert_eq!(class, coset);
        }
    }
    assert_eq!(g.char_degree_counts().unwrap(), BTreeMap::from([(1, 81), (9, 2)]));
    let ab = abelian(3, &[2, 1, 1, 1]);
    assert_eq!(ab.conjugacy_classes().len(), 243);
    assert_eq!(ab.char_degree_counts().unwrap(), BTreeMap::from([(1, 243)]));
    let inst = instantiate("Phi_8(32)", 3).unwrap();
    let g = &inst.group;
    let counts = g.char_degree_counts().unwrap();
    assert_eq!(counts.values().sum::<u64>() as usize, g.conjugacy_classes().len());
    assert_eq!(counts.iter().map(|(d, c)| d * d * c).sum::<u64>(), 243);
    assert_eq!(g.abelian_invariants_mod(&g.whole(), &g.derived_subgroup()).unwrap(), vec![9, 3]);
}

#[test]
fn cyclic_subgroup_class_counts() {
    assert_eq!(abelian(3, &[2, 1]).cyclic_subgroup_classes().count(), 1 + 4 + 3);
    assert_eq!(abelian(3, &[1, 1, 1, 1, 1]).cyclic_subgroup_classes().count(), 122);
    assert_eq!(abelian(5, &[5]).cyclic_subgroup_classes().count(), 6);
}

#[test]
fn lattice_examples() {
    let inst = instantiate("Phi_2(1^5)", 3).unwrap();
    assert_eq!(inst.group.maximal_subgroups().len(), (81 - 1) / 2);
    let inst = instantiate("Phi_10(search)", 3).unwrap();
    let g = &inst.group;
    let d = g.derived_subgroup();
    assert_eq!(d.order(), 27);
    assert_eq!(g.overgroups_of(&d, 27), vec![d]);
}

#[test]
fn cyclotomic_examples() {
    let z3 = CycNumber::root_of_unity(3, 1).unwrap();
    let sum = CycNumber::one().checked_add(&z3).unwrap().checked_add(&z3.pow(2)).unwrap();
    assert!(sum.is_zero());
    let minus_one_minus_z = CycNumber::from_integer(-1).checked_add(&z3.scale(r(-1))).unwrap();
    assert_eq!(z3.conj_by(2).unwrap(), minus_one_minus_z);
    let z9 = CycNumber::root_of_unity(9, 1).unwrap();
    let expected = CycNumber::from_exponent_terms(9, &[(3, r(-1)), (0, r(-1))]).unwrap();
    assert_eq!(z9.pow(6), expected);
    assert_eq!(CycNumber::root_of_unity(3, 0).unwrap(), CycNumber::one());
    assert_eq!(z9.pow(3).detect_order(), Some(3));
    assert_eq!(CycNumber::one().checked_add(&z3).unwrap().detect_order(), None);
    assert_eq!(field_of_values([&CycNumber::one(), &CycNumber::from_integer(-1)]).unwrap(), 1);
}

#[test]
fn linear_character_examples() {
    let c3 = abelian(3, &[1]);
    let chars = linear_characters(&c3, &c3.whole()).unwrap();
    assert_eq!(chars.len(), 3);
    assert_eq!(chars.iter().filter(|c| c.order() == 1).count(), 1);
    let h = abelian(3, &[2, 1]);
    let chars = linear_characters(&h, &h.whole()).unwrap();
    assert_eq!(chars.iter().filter(|c| c.order() == 9).count() / 6, 3);
    let c9 = abelian(3, &[2]);
    let faithful = LinearCharacter::from_images(&c9, 9, &[c9.gen(0)], &[1]).unwrap();
    let vals: Vec<CycNumber> = c9.members_values(&faithful);
    assert_eq!(field_of_values(vals.iter()).unwrap(), 9);
    let chi = ClassFunction::from_linear(&c9, &faithful).unwrap();
    let orbit = galois_orbit(&chi).unwrap();
    assert_eq!(orbit.size, 6);
    assert_eq!(omega(&chi).unwrap().degree(), r(6));
    let triv = ClassFunction::trivial(&c9);
    assert_eq!(omega(&triv).unwrap(), triv);
    assert_eq!(triv.kernel(&c9), c9.whole());
    assert_eq!(inner_product(&c9, &triv, &triv).unwrap(), r(1));
    assert_eq!(inner_product(&c9, &ClassFunction::regular(&c9), &triv).unwrap(), r(1));
}

trait MemberValues {
    fn members_values(&self, psi: &LinearCharacter) -> Vec<CycNumber>;
}

impl MemberValues for PcGroup {
    fn members_values(&self, psi: &LinearCharacter) -> Vec<CycNumber> {
        psi.subgroup().members().iter().map(|&x| psi.value(x).unwrap()).collect()
    }
}

#[test]
fn phi5_vz_induction() {
    let inst = instantiate("Phi_5(1^5)", 3).unwrap();
    let g = &inst.group;
    let z = g.center();
    let zchars = linear_characters(g, &z).unwrap();
    assert_eq!(zchars.iter().filter(|c| c.order() == 3).count(), 2);
    let el = |n: &str| inst.element(n).unwrap();
    let n = g.exponent(&g.whole());
    let psi =
        LinearCharacter::from_images(g, n, &[el("alpha1"), el("alpha3"), el("beta")], &[0, 0, n / 3]).unwrap();
    let chi = induce(g, &psi).unwrap();
    assert_eq!(character_inner_product(g, &chi, &chi).unwrap(), 1);
    for x in 0..g.order() as u32 {
        let v = chi.value_at(g, x);
        if z.contains(x) {
            assert_eq!(*v, psi.value(x).unwrap().scale(r(9)));
        } else {
            assert!(v.is_zero());
        }
    }
    assert!(is_camina_pair(g, &z) && is_vz_group(g));
    let ab = abelian(3, &[5]);
    assert!(!is_vz_group(&ab) && !is_camina_pair(&ab, &ab.center()));
    let inst = instantiate("Phi_8(32)", 3).unwrap();
    assert!(is_camina_pair(&inst.group, &inst.group.center()));
}

#[test]
fn catalog_examples() {
    let g = instantiate("Phi_5(1^5)", 3).unwrap().group;
    assert_eq!((g.order(), g.center().order(), g.derived_subgroup().order()), (243, 3, 3));
    assert!(matches!(instantiate("Phi_3(311)b_1", 3), Err(Error::Parameter(_))));
    let names3: Vec<&str> = entries_for(3).iter().map(|e| e.name).collect();
    let names5: Vec<&str> = entries_for(5).iter().map(|e| e.name).collect();
    assert!(names5.iter().any(|n| n.starts_with("Phi_3")) && !names3.iter().any(|n| n.starts_with("Phi_3")));
    assert_eq!(classify(&abelian(3, &[2, 2, 1])).unwrap().index(), 1);
    let inst = instantiate("Phi_8(32)", 3).unwrap();
    let g = &inst.group;
    assert_eq!(g.char_degree_counts().unwrap().keys().copied().collect::<Vec<_>>(), vec![1, 3, 9]);
    assert_eq!(g.exponent_mod(&g.whole(), &g.center()), 9);
}

#[test]
fn ingestion_round_trip_and_rejection() {
    for p in [3, 5] {
        for e in entries_for(p) {
            let inst = instantiate(e.name, p).unwrap();
            let again = ingest(&inst.text.to_text()).unwrap();
            assert_eq!(again.family, inst.family, "{}", e.name);
            assert_eq!(again.group.center(), inst.group.center());
        }
    }
    assert!(ingest("p 3\ngens 2\n").is_err());
    let wrong = "p 3\ngens 5\ncommutator 2 1 = g5\nsubgroup Z = g5\n";
    assert!(matches!(ingest(wrong), Err(Error::Presentation(_))));
    let inconsistent = "p 3\ngens 5\npower 1 = g2\ncommutator 2 1 = g3\n";
    assert!(ingest(inconsistent).is_err());
}

#[test]
fn parameter_variants_are_distinct() {
    for (a, b) in [("Phi_3(311)b_1", "Phi_3(311)b_nu"), ("Phi_7(2111)b_1", "Phi_7(2111)b_nu")] {
        let ga = instantiate(a, 5).unwrap().group;
        let gb = instantiate(b, 5).unwrap().group;
        assert_eq!(ga.char_degree_counts().unwrap(), gb.char_degree_counts().unwrap());
        assert_ne!(residue_fingerprint(&ga), residue_fingerprint(&gb), "{a} and {b}");
    }
}

#[test]
fn pair_examples() {
    let ab = abelian(3, &[2, 1]);
    let lp = linear_pairs(&ab).unwrap();
    assert_eq!(lp.iter().filter(|p| p.d == 9).count(), 3);
    assert_eq!(lp[0].d, 1);
    assert_eq!(lp[0].subgroup, ab.whole());
    assert_eq!(orbit_keys(&generic_search(&ab).unwrap()), orbit_keys(&lp));
    let inst = instantiate("Phi_2(41)", 3).unwrap();
    let g = &inst.group;
    let lin = linear_pairs(g).unwrap();
    assert_eq!(lin.len(), g.cyclic_counts_mod(&g.whole(), &g.derived_subgroup()).values().sum::<u64>() as usize);
    let inst = instantiate("Phi_5(1^5)", 3).unwrap();
    let ps = required_pairs(&inst).unwrap();
    assert_eq!(ps.pairs.iter().filter(|p| p.degree > 1).count(), 1);
    let g = &inst.group;
    assert_eq!(
        orbit_keys(&quotient_lift_pairs(g, &g.trivial()).unwrap()),
        orbit_keys(&generic_search(g).unwrap())
    );
}

#[test]
fn phi4_lift_from_quotient() {
    let inst = instantiate("Phi_4(1^5)", 3).unwrap();
    let g = &inst.group;
    let k = g.closure(&[inst.element("beta1").unwrap()]);
    let pairs = quotient_lift_pairs(g, &k).unwrap();
    for pr in pairs.iter().filter(|p| p.degree > 1) {
        let chi = verify_pair(g, pr).unwrap();
        assert!(k.is_subgroup_of(&chi.kernel(g)));
    }
    assert!(pairs.iter().any(|p| p.degree == 3));
}

#[test]
fn closed_forms_match_search_at_p3() {
    for e in entries_for(3) {
        let inst = instantiate(e.name, 3).unwrap();
        let ps = required_pairs(&inst).unwrap();
        let search = generic_search(&inst.group).unwrap();
        assert_eq!(orbit_keys(&ps.pairs), orbit_keys(&search), "{}", e.name);
        for pr in &ps.pairs {
            verify_pair(&inst.group, pr).unwrap();
        }
    }
}

fn decomposition_of(name: &str, p: u32) -> Decomposition {
    let inst = instantiate(name, p).unwrap();
    let ps = required_pairs(&inst).unwrap();
    let rep = decompose(&inst, &ps.pairs).unwrap();
    assert!(rep.formula.is_some(), "{name}");
    rep.oracle
}

fn c(n: u64, d: u64) -> Component {
    Component::new(n, d)
}

#[test]
fn decomposition_examples() {
    let d = decomposition_of("Phi_5(1^5)", 3);
    assert_eq!(d, Decomposition::from_components([(c(1, 1), 1), (c(1, 3), 40), (c(9, 3), 1)]));
    let d = decomposition_of("Phi_8(32)", 3);
    let expected =
        Decomposition::from_components([(c(1, 1), 1), (c(1, 3), 4), (c(1, 9), 3), (c(3, 3), 3), (c(9, 3), 1)]);
    assert_eq!(d, expected);
    assert_eq!(d.identity_line(), "dimension 1 + 8 + 18 + 54 + 162 = 243");
    let d = decomposition_of("Phi_10(search)", 3);
    assert_eq!(d.matrix_part(), Decomposition::from_components([(c(3, 3), 1), (c(3, 9), 1), (c(9, 3), 1)]));
    let d = decomposition_of("Phi_3(311)b_1", 5);
    let expected = Decomposition::from_components([
        (c(1, 1), 1),
        (c(1, 5), 6),
        (c(1, 25), 5),
        (c(5, 5), 5),
        (c(5, 125), 1),
    ]);
    assert_eq!(d, expected);
    assert_eq!(d.identity_line(), "dimension 1 + 24 + 100 + 500 + 2500 = 3125");
    let d = decomposition_of("Phi_3(221)a", 5);
    assert_eq!(d.identity_line(), "dimension 1 + 24 + 100 + 1000 + 2000 = 3125");
    let d = decomposition_of("Phi_2(41)", 3);
    assert_eq!(d.multiplicity(c(3, 27)), 1);
    let pw = perlis_walker(&abelian(3, &[2, 1])).unwrap();
    assert_eq!(pw, Decomposition::from_components([(c(1, 1), 1), (c(1, 3), 4), (c(1, 9), 3)]));
}

#[test]
fn unsupported_closed_forms_fall_back_to_the_oracle() {
    let inst = instantiate("Phi_10(search)", 3).unwrap();
    assert!(matches!(ratrep_core::pairs::closed_form_pairs(&inst), Err(Error::Unsupported(_))));
    let ps = required_pairs(&inst).unwrap();
    assert!(ps.note.is_some());
    assert_eq!(orbit_keys(&ps.pairs), orbit_keys(&generic_search(&inst.group).unwrap()));
    let d = ratrep_core::wedderburn::phi9_decomposition(&inst.group);
    assert!(matches!(d, Err(Error::Unsupported(_))));
}
