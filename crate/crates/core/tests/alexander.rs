use gentorsion::alexander::{
    alexander_polynomial, fox_derivative, fundamental_identity_residue, max_interval_width,
    orderability_from, orderability_report, positive_real_roots, AlexanderError, GroupRingElement,
    LaurentPolynomial, Verdict,
};
use gentorsion::presentations::{catalog, connected_sum, torus_group};
use gentorsion::words::Word;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn poly(s: &str) -> LaurentPolynomial {
    s.parse().unwrap()
}

const KNOTS: [&str; 4] = ["3_1", "4_1", "5_1", "5_2"];

#[test]
fn catalog_knots_are_sane() {
    for name in KNOTS {
        let p = catalog(name).unwrap();
        let d = alexander_polynomial(&p).unwrap();
        assert_eq!(d.eval_one().abs(), BigInt::from(1), "{name}");
        assert!(d.is_symmetric(), "{name}");
        let weights = p.abelianization().weights.clone().unwrap();
        for r in 0..p.relators().len() {
            assert!(
                fundamental_identity_residue(&p, &weights, r).is_zero(),
                "{name} relator {r}"
            );
        }
    }
}

#[test]
fn known_polynomials() {
    let table = [
        ("3_1", "1 - t + t^2"),
        ("4_1", "1 - 3t + t^2"),
        ("5_1", "1 - t + t^2 - t^3 + t^4"),
        ("5_2", "2 - 3t + 2t^2"),
    ];
    for (name, expected) in table {
        assert_eq!(
            alexander_polynomial(&catalog(name).unwrap()).unwrap(),
            poly(expected),
            "{name}"
        );
    }
}

/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`.
fn torus_closed_form(p: i64, q: i64) -> LaurentPolynomial {
    let m1 = |k: i64| &LaurentPolynomial::t_pow(k) - &LaurentPolynomial::one();
    (&m1(p * q) * &m1(1)).div_exact(&(&m1(p) * &m1(q))).unwrap()
}

#[test]
fn torus_polynomials_match_closed_form() {
    for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5), (2, 7), (4, 5)] {
        let d = alexander_polynomial(&torus_group(p, q).unwrap()).unwrap();
        assert_eq!(d, torus_closed_form(p, q), "T({p},{q})");
        assert_eq!(d.span() as i64, (p - 1) * (q - 1));
    }
}

#[test]
fn connected_sum_multiplies_polynomials() {
    let a = catalog("3_1").unwrap();
    let b = catalog("4_1").unwrap();
    let (sum, _, _) = connected_sum(&a, &b).unwrap();
    let expected = &alexander_polynomial(&a).unwrap() * &alexander_polynomial(&b).unwrap();
    assert_eq!(alexander_polynomial(&sum).unwrap(), expected.normalized());
}

#[test]
fn non_knot_groups_are_rejected() {
    let klein = catalog("klein").unwrap();
    assert!(matches!(
        alexander_polynomial(&klein),
        Err(AlexanderError::NotInfiniteCyclic { .. })
    ));
}

#[test]
fn six_crossing_roots() {
    let six_one = positive_real_roots(&poly("2 - 5t + 2t^2")).unwrap();
    assert_eq!(six_one.positive, 2);
    assert!(six_one.intervals.iter().all(|i| i.exact));
    assert_eq!(six_one.intervals[0].lo.to_string(), "1/2");
    assert_eq!(six_one.intervals[1].lo.to_string(), "2");

    let six_two = positive_real_roots(&poly("1 - 3t + 3t^2 - 3t^3 + t^4")).unwrap();
    assert_eq!(six_two.positive, 2);
    assert_eq!(six_two.real, 2);
    for i in &six_two.intervals {
        assert!(i.width() <= max_interval_width());
    }
    assert!(six_two.intervals.iter().any(|i| i.contains(2.15372)));
    assert!(six_two.intervals.iter().any(|i| i.contains(0.464313)));

    let six_three = positive_real_roots(&poly("1 - 3t + 5t^2 - 3t^3 + t^4")).unwrap();
    assert_eq!(six_three.positive, 0);
    assert_eq!(six_three.real, 0);
}

#[test]
fn verdicts() {
    let r = orderability_report(&catalog("4_1").unwrap(), None, None).unwrap();
    assert_eq!(r.verdict, Verdict::BiOrderable);
    assert!(r.criterion.contains("Perron-Rolfsen"));
    let r = orderability_report(&catalog("5_2").unwrap(), None, None).unwrap();
    assert_eq!(r.verdict, Verdict::NotBiOrderable);
    let r = orderability_report(&catalog("3_1").unwrap(), None, None).unwrap();
    assert_eq!(r.verdict, Verdict::NotBiOrderable);
    let r = orderability_from("6_1", &poly("2 - 5t + 2t^2"), Some(false), false).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    let r = orderability_from(
        "6_3",
        &poly("1 - 3t + 5t^2 - 3t^3 + t^4"),
        Some(true),
        false,
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::NotBiOrderable);
    let r = orderability_from("6_2", &poly("1 - 3t + 3t^2 - 3t^3 + t^4"), None, false).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(matches!(
        orderability_from("6_1", &poly("2 - 5t + 2t^2"), None, false),
        Err(AlexanderError::MissingFibredness(_))
    ));
}

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec(
        prop_oneof![Just(1), Just(-1), Just(2), Just(-2), Just(3), Just(-3)],
        0..14,
    )
    .prop_map(|s| Word::from_signed(&s))
}

fn poly_strategy() -> impl Strategy<Value = LaurentPolynomial> {
    (-4i64..4, prop::collection::vec(-5i64..=5, 0..7)).prop_map(|(low, c)| {
        LaurentPolynomial::from_coeffs(low, c.into_iter().map(BigInt::from).collect())
    })
}

proptest! {
    #[test]
    fn fox_product_rule(u in word_strategy(), v in word_strategy(), g in 0usize..3) {
        let lhs = fox_derivative(&u.concat(&v), g);
        let rhs = fox_derivative(&u, g).add(&fox_derivative(&v, g).left_mul(&u));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fox_fundamental_formula(w in word_strategy()) {
        // Σ_j (∂w/∂x_j)(x_j - 1) = w - 1.
        let mut total = GroupRingElement::zero();
        for g in 0..3 {
            let d = fox_derivative(&w, g);
            total = total.add(&right_mul(&d, &Word::generator(g)));
            total = total.add(&negate(&d));
        }
        let mut expected = GroupRingElement::word(w.clone());
        expected.add_term(Word::identity(), BigInt::from(-1));
        prop_assert_eq!(total, expected);
    }

    #[test]
    fn normalization_is_idempotent(p in poly_strategy(), k in -5i64..5, neg in any::<bool>()) {
        let n = p.normalized();
        prop_assert_eq!(n.normalized(), n.clone());
        let mut shifted = &p * &LaurentPolynomial::t_pow(k);
        if neg {
            shifted = -shifted;
        }
        prop_assert_eq!(shifted.normalized(), n);
    }

    #[test]
    fn display_parse_round_trip(p in poly_strategy()) {
        prop_assert_eq!(p.to_string().parse::<LaurentPolynomial>().unwrap(), p);
    }
}

fn negate(e: &GroupRingElement) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    for (w, c) in e.terms() {
        out.add_term(w.clone(), -c);
    }
    out
}

/// `e · g`.
fn right_mul(e: &GroupRingElement, g: &Word) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    for (w, c) in e.terms() {
        out.add_term(w.concat(g), c.clone());
    }
    out
}

/// Untwisted doubles have trivial Alexander polynomial; no presentation is
/// built, only the constant polynomial is checked.
#[test]
fn trivial_polynomial_has_no_roots() {
    let one = LaurentPolynomial::one();
    let r = positive_real_roots(&one).unwrap();
    assert_eq!((r.degree, r.real, r.positive), (0, 0, 0));
    let unknot = gentorsion::Presentation::unknot();
    assert_eq!(alexander_polynomial(&unknot).unwrap(), one);
    let report = orderability_from("double", &one, Some(false), false).unwrap();
    assert_eq!(report.verdict, Verdict::Inconclusive);
}
