mod common;

use std::collections::BTreeSet;

use common::*;
use indexmap::IndexMap;
use jumpnum::candidates;
use jumpnum::contribution::{self, Necessity, Zone};
use jumpnum::fixture;
use jumpnum::lattice::{self, PicClass};
use jumpnum::model;
use jumpnum::surface;
use jumpnum::verdict::{Evidence, Method, Verdict};
use jumpnum::Rational;
use proptest::prelude::*;

#[test]
fn ex45_loads_with_printed_classes() {
    let d = load("ex45");
    let md: Vec<(&str, i64, i64)> = d
        .divisors
        .iter()
        .map(|x| (x.id.as_str(), x.mult, x.discrepancy))
        .collect();
    assert_eq!(
        md,
        vec![
            ("D1", 2, 0),
            ("D2", 1, 0),
            ("E1", 7, 2),
            ("E2", 3, 1),
            ("E3", 6, 2)
        ]
    );
    let lat = &d.lattices["E1"];
    assert_eq!(lat.restriction("D1"), PicClass(vec![3, -1, -1]));
    assert_eq!(lat.restriction("D2"), PicClass(vec![1, -1, -1]));
    assert_eq!(lat.restriction("E2"), PicClass(vec![0, 1, -1]));
    assert_eq!(lattice::canonical_class(lat), PicClass(vec![-3, 1, 1]));
}

#[test]
fn ex45_verdicts() {
    let d = load("ex45");
    assert_eq!(
        candidates::lct(&d).unwrap(),
        (r(3, 7), vec!["E1".to_string()])
    );
    let list = candidates::candidates(&d, &Rational::one()).unwrap();
    assert_eq!(
        list.for_divisor("E1"),
        vec![r(3, 7), r(4, 7), r(5, 7), r(6, 7), r(1, 1)]
    );

    let yes = contribution::contributes_by_effectivity(&d, "E1", &r(3, 7)).unwrap();
    assert_eq!(yes.verdict, Verdict::Contributes);
    let no = contribution::contributes_by_effectivity(&d, "E1", &r(6, 7)).unwrap();
    assert_eq!(no.verdict, Verdict::DoesNotContribute);
    let Evidence::Lattice {
        class,
        floor_restriction,
        ..
    } = &no.evidence
    else {
        panic!()
    };
    assert_eq!(class.to_string(), "-e_2");
    assert_eq!(*floor_restriction, PicClass(vec![-3, 1, 2]));
}

#[test]
fn ex45_contributes_lct_but_not_one_minus_one_over_a() {
    let d = load("ex45");
    let a = d.divisor("E1").unwrap().mult;
    let top = Rational::one() - r(1, a);
    assert_eq!(top, r(6, 7));
    assert!(
        contribution::contributes(&d, &["E1"], &r(3, 7), Default::default())
            .unwrap()
            .contributes()
    );
    assert!(
        !contribution::contributes(&d, &["E1"], &top, Default::default())
            .unwrap()
            .contributes()
    );
}

#[test]
fn ex45_necessary_condition_and_line() {
    let d = load("ex45");
    let nc = contribution::necessary_condition(&d, "E1").unwrap();
    assert_eq!(nc.outcome, Necessity::Passes);
    assert_eq!(nc.class, PicClass(vec![1, 0, -1]));
    let c = contribution::contraction_sufficiency(&d, "E1", "line", false).unwrap();
    assert_eq!(c.pairing, Rational::one());
    assert!(!c.fires);
    assert!(contribution::contraction_sufficiency(&d, "E1", "nope", false).is_err());
}

#[test]
fn ex61_and_d5_share_criterion_input_but_disagree() {
    let d61 = load("ex61");
    let d5 = load("ex62_d5");
    assert_eq!(
        candidates::lct(&d61).unwrap(),
        (r(5, 6), vec!["E2".to_string()])
    );
    assert_eq!(
        candidates::lct(&d5).unwrap(),
        (Rational::one(), vec!["D".to_string()])
    );

    let get = |d, e| match contribution::applicable_criterion(d, e).unwrap() {
        contribution::Applicability::Applies(c) => c,
        other => panic!("{other:?}"),
    };
    let c61 = get(&d61, "E2");
    let c5 = get(&d5, "E3");
    assert_eq!(c61.method, Method::CriterionTwoInfinitelyNear);
    assert_eq!(c61.inputs, c5.inputs);
    assert_eq!(c61.result.zone, Zone::OpenZone);
    assert_eq!(c5.result.zone, Zone::OpenZone);

    let v61 =
        contribution::contributes_by_effectivity(&d61, "E2", &c61.one_minus_one_over_a()).unwrap();
    let v5 =
        contribution::contributes_by_effectivity(&d5, "E3", &c5.one_minus_one_over_a()).unwrap();
    assert_eq!(v61.verdict, Verdict::Contributes);
    assert_eq!(v5.verdict, Verdict::DoesNotContribute);
}

#[test]
fn d5_conic_pairing() {
    let d = load("ex62_d5");
    let strict =
        contribution::contraction_sufficiency(&d, "E3", "conic-through-both-points", true).unwrap();
    let loose = contribution::contraction_sufficiency(&d, "E3", "conic-through-both-points", false)
        .unwrap();
    // K + E° = h - e_2 pairs to 2 - 1 with a conic through both points.
    assert_eq!(strict.class, PicClass(vec![1, 0, -1]));
    assert_eq!(strict.pairing, Rational::one());
    assert!(!strict.fires && !loose.fires);
}

#[test]
fn sec7_verdicts() {
    let d = load("sec7");
    assert_eq!(
        candidates::lct(&d).unwrap(),
        (r(7, 10), vec!["E4".to_string()])
    );
    let list = candidates::candidates(&d, &Rational::one()).unwrap();
    assert_eq!(list.for_divisor("E0"), vec![r(3, 4), Rational::one()]);
    for l in [r(3, 4), Rational::one()] {
        let v = contribution::contributes_by_effectivity(&d, "E0", &l).unwrap();
        assert_eq!(v.verdict, Verdict::DoesNotContribute, "{l}");
    }
    let nc = contribution::necessary_condition(&d, "E0").unwrap();
    assert_eq!(nc.outcome, Necessity::Passes);
    assert_eq!(nc.class, PicClass(vec![1, 0, -1, 0, -1]));
    let set: BTreeSet<Rational> = [r(7, 10), r(9, 10), Rational::one()].into_iter().collect();
    let ext = candidates::skoda_extend(&set, &Rational::from(3)).unwrap();
    let mut want = BTreeSet::new();
    for m in 0..3 {
        for x in &set {
            want.insert(x + &Rational::from(m));
        }
    }
    assert_eq!(ext, want);
}

#[test]
fn surface_fixtures_match_known_lists() {
    let cusp = load("cusp");
    assert_eq!(
        surface::surface_jumping_numbers(&cusp, &Rational::one()).unwrap(),
        vec![r(5, 6), Rational::one()]
    );
    assert_eq!(
        surface::surface_jumping_numbers(&load("x2y5"), &Rational::one()).unwrap(),
        vec![r(7, 10), r(9, 10), Rational::one()]
    );
    assert_eq!(
        surface::surface_jumping_numbers(&load("node"), &Rational::one()).unwrap(),
        vec![Rational::one()]
    );
    assert_eq!(
        surface::surface_jumping_numbers(&load("smooth"), &Rational::from(3)).unwrap(),
        vec![Rational::from(1), Rational::from(2), Rational::from(3)]
    );
    let si = model::self_intersections(&cusp).unwrap();
    assert_eq!(si.values().copied().collect::<Vec<_>>(), vec![-3, -2, -1]);
    let si = model::self_intersections(&load("point_blowup")).unwrap();
    assert_eq!(si["E"], -1);
}

#[test]
fn jumping_numbers_are_skoda_periodic_on_surfaces() {
    for name in ["cusp", "x2y5", "node", "triple"] {
        let d = load(name);
        let small: BTreeSet<Rational> = surface::surface_jumping_numbers(&d, &Rational::one())
            .unwrap()
            .into_iter()
            .collect();
        let big: BTreeSet<Rational> = surface::surface_jumping_numbers(&d, &Rational::from(3))
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(
            big,
            candidates::skoda_extend(&small, &Rational::from(3)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn hand_fixtures_match_generator() {
    for (name, p, q) in [("cusp", 2, 3), ("x2y5", 2, 5)] {
        let mut hand = load(name);
        let gen = fixture::xpyq(p, q).unwrap();
        hand.provenance = gen.provenance.clone();
        for d in &mut hand.divisors {
            d.name.clear();
        }
        let mut gen = gen;
        for d in &mut gen.divisors {
            d.name.clear();
        }
        assert_eq!(hand, gen, "{name}");
    }
}

#[test]
fn xpyq_surface_oracle() {
    for (p, q) in [
        (2, 3),
        (2, 5),
        (2, 7),
        (3, 4),
        (3, 5),
        (3, 7),
        (4, 5),
        (4, 7),
        (5, 6),
        (5, 7),
        (6, 7),
    ] {
        let d = fixture::xpyq(p, q).unwrap();
        let got: BTreeSet<Rational> = surface::surface_jumping_numbers(&d, &Rational::one())
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(got, xpyq_oracle(p, q), "x^{p} = y^{q}");
    }
}

#[test]
fn minimal_classification_matches_jumping_numbers() {
    let mut cases: Vec<(String, jumpnum::ResolutionData)> = all_fixtures()
        .into_iter()
        .map(|(n, d)| (n.to_string(), d))
        .collect();
    for (p, q) in [(2, 3), (3, 5), (4, 7), (5, 7)] {
        cases.push((format!("x{p}y{q}"), fixture::xpyq(p, q).unwrap()));
    }
    for (name, d) in cases {
        if d.ambient_dim != 2 || !d.flags.minimal_resolution {
            continue;
        }
        let jn = surface::surface_jumping_numbers(&d, &Rational::one()).unwrap();
        for rec in surface::minimal_classification(&d).unwrap() {
            let v = surface::surface_contributes(&d, &[&rec.id], &rec.contributed_number).unwrap();
            assert_eq!(v.contributes(), rec.d >= 3, "{name} {}", rec.id);
            if rec.d >= 3 {
                assert!(jn.contains(&rec.contributed_number), "{name} {}", rec.id);
            }
        }
    }
    assert!(surface::minimal_classification(&load("point_blowup")).is_err());
}

#[test]
fn reducible_surface_divisor() {
    let d = load("cusp");
    let err = surface::surface_contributes(&d, &["E1", "E2"], &r(1, 2)).unwrap_err();
    assert!(matches!(err, jumpnum::Error::Precondition(_)));
    // 1/2 is a candidate for E1 + E3 but not a jumping number.
    let v = surface::surface_contributes(&d, &["E1", "E3"], &r(1, 2)).unwrap();
    assert_eq!(v.verdict, Verdict::DoesNotContribute);
    // λ = 1 is a candidate for every component.
    let v = surface::surface_contributes(&d, &["E1", "E3"], &Rational::one()).unwrap();
    assert_eq!(v.method, Method::SurfaceDegree);
    // E1 and E2 do not meet: not a connected tree.
    let v = surface::surface_contributes(&d, &["E1", "E2"], &Rational::one()).unwrap();
    assert_eq!(v.verdict, Verdict::Undecidable);
}

#[test]
fn floor_restriction_routes_agree_on_fixtures() {
    for (name, d) in all_fixtures() {
        for (e, _) in &d.lattices {
            let a = d.divisor(e).unwrap().mult;
            for n in 1..=2 * a {
                let l = r(n, a);
                let frac = lattice::floor_pullback_restriction(&d, e, &l).unwrap();
                let direct = lattice::floor_pullback_restriction_direct(&d, e, &l).unwrap();
                assert_eq!(frac, direct, "{name} {e} {l}");
            }
        }
    }
}

#[test]
fn soundness_chain_on_fixtures() {
    for (name, d) in all_fixtures() {
        for (e, lat) in &d.lattices {
            if !lat.flags.effectivity_as_q_divisor {
                continue;
            }
            let nc = contribution::necessary_condition(&d, e).unwrap();
            let div = d.divisor(e).unwrap();
            for l in candidates::divisor_candidates(div, &Rational::from(2)) {
                let v = contribution::contributes_by_effectivity(&d, e, &l).unwrap();
                if v.contributes() {
                    assert_eq!(nc.outcome, Necessity::Passes, "{name} {e} {l}");
                }
            }
        }
    }
}

#[test]
fn necessary_condition_fails_on_small_degree() {
    for n in 2..=4 {
        for d in 1..=n {
            let comps = vec![Component {
                d,
                b: 1,
                m: 0,
                mu: vec![],
            }];
            let Some(data) = projective_case(n, &comps, 0) else {
                continue;
            };
            let nc = contribution::necessary_condition(&data, "E").unwrap();
            assert_eq!(nc.outcome, Necessity::Fails, "n={n} d={d}");
            assert_eq!(nc.class.is_zero(), d == n);
        }
    }
}

#[test]
fn criterion_agrees_with_effectivity_on_random_projective_cases() {
    for data in random_projective_cases(150, false, 7)
        .into_iter()
        .chain(random_projective_cases(150, true, 11))
    {
        assert!(
            model::validate(&data).is_empty(),
            "{:?}",
            model::validate(&data)
        );
        let a = data.divisor("E").unwrap().mult;
        let top = Rational::one() - r(1, a);
        let rep = match contribution::applicable_criterion(&data, "E").unwrap() {
            contribution::Applicability::Applies(c) => c,
            other => panic!("{other:?}"),
        };
        let eff = contribution::contributes_by_effectivity(&data, "E", &top).unwrap();
        assert_ne!(eff.verdict, Verdict::Undecidable);
        assert_eq!(
            rep.result.zone == Zone::Contributes,
            eff.contributes(),
            "{:?}",
            rep
        );
        let auto = contribution::contributes(&data, &["E"], &top, Default::default()).unwrap();
        assert_eq!(auto.verdict, eff.verdict);
    }
}

#[test]
fn roundtrip_through_report_json() {
    for (name, d) in all_fixtures() {
        let text = jumpnum::report::json(&d).unwrap();
        let back = fixture::parse_str(&text, name).unwrap();
        assert_eq!(back, d, "{name}");
    }
}

#[test]
fn corrupted_multiplicity_is_caught_when_constrained() {
    // Changing a_E of a lattice owner, or of anything its lattice restricts to, breaks π*D|_E = 0.
    for name in ["ex45", "ex61", "ex62_d5", "sec7"] {
        let base = load(name);
        for (e, lat) in &base.lattices {
            for id in lat.restrictions.keys() {
                for delta in [-1, 1] {
                    let mut d = base.clone();
                    let div = d.divisors.iter_mut().find(|x| &x.id == id).unwrap();
                    div.mult += delta;
                    if div.mult < 1 {
                        continue;
                    }
                    assert!(
                        !model::validate(&d).is_empty(),
                        "{name}: {e} lattice, {id} {delta:+}"
                    );
                }
            }
        }
    }
    // Cusp: E3 off by one.
    let mut d = load("cusp");
    d.divisors[2].mult = 7;
    let diags = model::validate(&d);
    assert!(!diags.is_empty());
    assert!(diags.iter().all(|x| x.relation.starts_with("π*C·")));
}

#[test]
fn unloading_matches_enumeration() {
    let d = load("cusp");
    for (e1, e2, e3, c) in [
        (0, 0, 1, 0),
        (1, 0, 0, 0),
        (0, 0, 0, 1),
        (0, 1, 2, 0),
        (2, 0, 0, 1),
        (0, 0, 0, 2),
    ] {
        let mut div = IndexMap::new();
        div.insert("E1".to_string(), e1);
        div.insert("E2".to_string(), e2);
        div.insert("E3".to_string(), e3);
        div.insert("C".to_string(), c);
        let fast = surface::unloading_closure(&d, &div).unwrap();
        let slow = brute_closure(&d, &div, 14).unwrap();
        for (id, v) in &slow {
            assert_eq!(fast.coefficient(id), *v, "{div:?} at {id}");
        }
        assert!(surface::is_antinef(&d, &fast).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unloading_is_minimal_on_x2y5(cs in proptest::collection::vec(0i64..3, 4), c in 0i64..2) {
        let d = load("x2y5");
        let ids = ["E1", "E2", "E3", "E4"];
        let mut div: IndexMap<String, i64> = ids.iter().zip(&cs).map(|(i, c)| (i.to_string(), *c)).collect();
        div.insert("C".into(), c);
        let fast = surface::unloading_closure(&d, &div).unwrap();
        let slow = brute_closure(&d, &div, 16).unwrap();
        for (id, v) in &slow {
            prop_assert_eq!(fast.coefficient(id), *v);
        }
    }

    #[test]
    fn closures_grow_with_lambda(p in 2i64..6, q in 2i64..8, n in 1i64..40) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        let d = fixture::xpyq(p, q).unwrap();
        let lo = r(n, 2 * p * q);
        let hi = r(n + 1, 2 * p * q);
        let a = surface::multiplier_closure(&d, &lo, false).unwrap();
        let b = surface::multiplier_closure(&d, &hi, false).unwrap();
        let below = surface::multiplier_closure(&d, &hi, true).unwrap();
        for div in &d.divisors {
            prop_assert!(a.coefficient(&div.id) <= b.coefficient(&div.id));
            prop_assert!(below.coefficient(&div.id) <= b.coefficient(&div.id));
        }
    }
}
