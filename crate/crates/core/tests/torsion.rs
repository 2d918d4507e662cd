use gentorsion::presentations::{catalog, connected_sum, torus_group};
use gentorsion::torsion::{
    builtin, builtin_certificates, candidate_bases, commuting_powers_certificate,
    expand_commutator, search, transport, verify, verify_with, CertificateError, SearchBounds,
    SearchOutcome, Step, TorsionCertificate, TorsionError, BUILTIN_NAMES,
};
use gentorsion::word_problem::{Budget, WordOracle};
use gentorsion::words::{Letter, Word};
use proptest::prelude::*;

fn product_of_conjugates(base: &Word, conjugators: &[Word]) -> Word {
    conjugators
        .iter()
        .fold(Word::identity(), |acc, g| acc.concat(&base.conjugate(g)))
}

#[test]
fn builtins_verify_and_recheck() {
    for (name, cert) in builtin_certificates() {
        let oracle = WordOracle::new(&cert.presentation, Budget::default());
        let w = verify_with(&cert, &oracle).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(w.recheck(&oracle), "{name}");
        let expected = match name {
            "klein" | "trefoil" => 2,
            _ => 6,
        };
        assert_eq!(w.k(), expected, "{name}");
    }
}

#[test]
fn fivetwo_first_confirms_every_claim() {
    let cert = builtin("fivetwo_first").unwrap();
    let w = verify(&cert, Budget::default()).unwrap();
    for (step, t) in cert.steps.iter().zip(&w.transcript) {
        if let Some(claim) = &step.claim {
            assert_eq!(&t.representative, claim);
            assert!(t.claim_proof.is_some() || t.computed == *claim);
        }
    }
    let claims = cert.steps.iter().filter(|s| s.claim.is_some()).count();
    assert!(claims >= 8);
}

#[test]
fn json_round_trip() {
    for (name, cert) in builtin_certificates() {
        let text = cert.to_json_string();
        let back = TorsionCertificate::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text, "{name}");
        assert_eq!(back.flatten().unwrap(), cert.flatten().unwrap());
    }
}

#[test]
fn schema_violations_are_rejected() {
    let good = builtin("klein").unwrap().to_json_string();
    let bad_op = good.replace("\"mul\"", "\"div\"");
    assert!(matches!(
        TorsionCertificate::from_json_str(&bad_op),
        Err(CertificateError::Json(_))
    ));
    let forward = good.replace("\"left\": 0", "\"left\": 2");
    assert!(TorsionCertificate::from_json_str(&forward).is_err());
    let bad_final = good.replace("\"final\": 2", "\"final\": 9");
    assert!(TorsionCertificate::from_json_str(&bad_final).is_err());
    let bad_word = good.replace("\"base\": \"x\"", "\"base\": \"q\"");
    assert!(TorsionCertificate::from_json_str(&bad_word).is_err());
}

/// Replaces one flattened conjugator `g` by `g·l`, for letters `l` that
/// provably do not commute with the base.
#[test]
fn altered_conjugators_never_verify() {
    for name in BUILTIN_NAMES {
        let cert = builtin(name).unwrap();
        let flat = cert.flatten().unwrap();
        let n = cert.presentation.generator_count();
        let oracle = WordOracle::new(&cert.presentation, Budget::default());
        let moving: Vec<Word> = (0..2 * n as u16)
            .map(|c| Word::letter(Letter::from_code(c)))
            .filter(|l| {
                oracle
                    .equal(&cert.base.conjugate(l), &cert.base)
                    .is_nontrivial()
            })
            .collect();
        assert!(!moving.is_empty(), "{name}");
        for i in 0..flat.len() {
            for l in &moving {
                let mut conj = flat.clone();
                conj[i] = conj[i].concat(l);
                let tampered = TorsionCertificate::from_conjugators(
                    cert.presentation.clone(),
                    cert.base.clone(),
                    &conj,
                );
                let r = verify_with(&tampered, &oracle);
                assert!(r.is_err(), "{name}: conjugator {i} altered verified");
            }
        }
    }
}

/// Exact model of the Klein bottle group as `Z ⋊ Z`: `(m, n)(m', n') =
/// (m + (-1)^n m', n + n')`, with `x = (1, 0)` and `y = (0, 1)`.
fn klein_value(w: &Word) -> (i64, i64) {
    w.letters().iter().fold((0, 0), |(m, n), l| {
        let (dm, dn) = match (l.generator(), l.is_inverse()) {
            (0, false) => (1, 0),
            (0, true) => (-1, 0),
            (1, false) => (0, 1),
            _ => (0, -1),
        };
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        (m + sign * dm, n + dn)
    })
}

#[test]
fn klein_verdicts_match_exact_model() {
    let cert = builtin("klein").unwrap();
    let oracle = WordOracle::new(&cert.presentation, Budget::default());
    for r in cert.presentation.relators() {
        assert_eq!(klein_value(r), (0, 0));
    }
    let words = ["", "x", "y", "X", "Y", "xy", "yy", "Yx", "xyx"];
    for a in words {
        for b in words {
            let conj = [
                cert.presentation.parse_word(a).unwrap(),
                cert.presentation.parse_word(b).unwrap(),
            ];
            let product = product_of_conjugates(&cert.base, &conj);
            let c = TorsionCertificate::from_conjugators(
                cert.presentation.clone(),
                cert.base.clone(),
                &conj,
            );
            let verified = verify_with(&c, &oracle).is_ok();
            assert_eq!(
                verified,
                klein_value(&product) == (0, 0),
                "conjugators {a:?} {b:?}"
            );
        }
    }
}

#[test]
fn dropped_conjugator_never_verifies() {
    for name in BUILTIN_NAMES {
        let cert = builtin(name).unwrap();
        let flat = cert.flatten().unwrap();
        for i in 0..flat.len() {
            let mut conj = flat.clone();
            conj.remove(i);
            let tampered = TorsionCertificate::from_conjugators(
                cert.presentation.clone(),
                cert.base.clone(),
                &conj,
            );
            assert!(
                verify(&tampered, Budget::default()).is_err(),
                "{name} without {i}"
            );
        }
    }
}

#[test]
fn trivial_base_is_refuted() {
    let p = catalog("3_1").unwrap();
    let base = p.parse_word("xxYYY").unwrap();
    let cert = TorsionCertificate::from_conjugators(p, base, &[Word::identity()]);
    assert!(verify(&cert, Budget::default()).unwrap_err().is_refuted());
}

#[test]
fn false_claim_is_refuted() {
    let mut cert = builtin("trefoil").unwrap();
    let wrong = cert.presentation.parse_word("x").unwrap();
    cert.steps[0] = Step {
        claim: Some(wrong),
        ..cert.steps[0].clone()
    };
    assert!(verify(&cert, Budget::default()).unwrap_err().is_refuted());
}

#[test]
fn expansion_identity_for_small_powers() {
    let x = Word::generator(0);
    let y = Word::generator(1);
    for p in 1..=6 {
        for q in 1..=6 {
            let conj = expand_commutator(p, q).unwrap();
            assert_eq!(conj.len() as i64, p * q);
            let target = x.pow(p).commutator(&y.pow(q));
            assert_eq!(
                product_of_conjugates(&x.commutator(&y), &conj),
                target,
                "({p},{q})"
            );
        }
    }
    assert!(matches!(
        expand_commutator(0, 3),
        Err(TorsionError::NonPositivePowers { .. })
    ));
}

#[test]
fn torus_commutators_are_generalized_torsion() {
    for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5), (2, 7)] {
        let pres = torus_group(p, q).unwrap();
        let oracle = WordOracle::new(&pres, Budget::default());
        let cert = commuting_powers_certificate(
            &pres,
            &Word::generator(0),
            &Word::generator(1),
            p,
            q,
            &oracle,
        )
        .unwrap();
        let w = verify_with(&cert, &oracle).unwrap();
        assert_eq!(w.k() as i64, p * q);
    }
}

#[test]
fn commuting_powers_needs_nontrivial_commutator() {
    // In Z^2 the commutator is trivial.
    let pres = gentorsion::Presentation::parse("<x,y | xyXY>").unwrap();
    let oracle = WordOracle::new(&pres, Budget::default());
    let r = commuting_powers_certificate(
        &pres,
        &Word::generator(0),
        &Word::generator(1),
        1,
        1,
        &oracle,
    );
    assert!(r.is_err());
}

#[test]
fn transport_into_connected_sum() {
    let trefoil = builtin("trefoil").unwrap();
    let (sum, inc1, inc2) =
        connected_sum(&catalog("3_1").unwrap(), &catalog("5_2").unwrap()).unwrap();
    let moved = transport(&trefoil, &inc1, &sum).unwrap();
    assert_eq!(verify(&moved, Budget::default()).unwrap().k(), 2);
    // The second factor's map does not preserve the trefoil relator.
    assert!(matches!(
        transport(&trefoil, &inc2, &sum),
        Err(TorsionError::NotRelatorPreserving { .. })
    ));
}

#[test]
fn search_finds_torus_certificate() {
    let pres = catalog("3_1").unwrap();
    let oracle = WordOracle::new(&pres, Budget::default());
    let base = pres.parse_word("[x,y]").unwrap();
    let bounds = SearchBounds {
        max_conj_len: 2,
        ..SearchBounds::default()
    };
    let SearchOutcome::Found { certificate, .. } = search(&pres, &base, bounds, &oracle).unwrap()
    else {
        panic!("no certificate");
    };
    verify_with(&certificate, &oracle).unwrap();
}

#[test]
fn search_rejects_bad_bases() {
    let pres = catalog("5_2").unwrap();
    let oracle = WordOracle::new(&pres, Budget::default());
    let bounds = SearchBounds::default();
    let a = pres.parse_word("a").unwrap();
    assert!(matches!(
        search(&pres, &a, bounds, &oracle),
        Err(TorsionError::NonzeroWeight(1))
    ));
    let trivial = pres.parse_word("bbAAbbaBBBa").unwrap();
    assert!(matches!(
        search(&pres, &trivial, bounds, &oracle),
        Err(TorsionError::TrivialBase)
    ));
}

#[test]
fn free_group_search_finds_nothing() {
    let pres = gentorsion::Presentation::parse("<a,b | >").unwrap();
    let oracle = WordOracle::new(&pres, Budget::default());
    let bounds = SearchBounds {
        max_conj_len: 2,
        max_closure: 5_000,
        max_depth: 4,
    };
    for base in candidate_bases(&pres, &oracle) {
        let r = search(&pres, &base, bounds, &oracle).unwrap();
        assert!(matches!(r, SearchOutcome::NotFound(_)));
    }
}

#[test]
fn candidate_bases_include_the_known_one() {
    let pres = catalog("5_2").unwrap();
    let oracle = WordOracle::new(&pres, Budget::default());
    let bases = candidate_bases(&pres, &oracle);
    assert!(bases.contains(&pres.parse_word("AbaB").unwrap()));
    for b in &bases {
        assert!(oracle.is_trivial(b).is_nontrivial());
    }
}

#[derive(Debug, Clone)]
enum Op {
    Base(Vec<i32>),
    Product(usize, usize),
    Conj(usize, Vec<i32>),
}

fn small_word() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..4)
}

fn dag() -> impl Strategy<Value = Vec<Op>> {
    prop::collection::vec(
        prop_oneof![
            small_word().prop_map(Op::Base),
            (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Product(a, b)),
            (any::<usize>(), small_word()).prop_map(|(a, w)| Op::Conj(a, w)),
        ],
        1..10,
    )
}

proptest! {
    #[test]
    fn flatten_matches_evaluation(ops in dag()) {
        let pres = gentorsion::Presentation::parse("<a,b | >").unwrap();
        let base = pres.parse_word("aB").unwrap();
        let mut steps = Vec::new();
        for (i, op) in ops.iter().enumerate() {
            let step = match op {
                Op::Base(w) => Step::base(Word::from_signed(w)),
                Op::Product(l, r) if i > 0 => Step::product(l % i, r % i),
                Op::Conj(of, w) if i > 0 => Step::conj(of % i, Word::from_signed(w)),
                _ => Step::base(Word::identity()),
            };
            steps.push(step);
        }
        let cert = TorsionCertificate { presentation: pres, base: base.clone(), steps, final_step: ops.len() - 1 };
        let values = cert.evaluate().unwrap();
        for (s, value) in values.iter().enumerate() {
            let flat = cert.flatten_step(s).unwrap();
            prop_assert_eq!(&product_of_conjugates(&base, &flat), value);
        }
    }
}
