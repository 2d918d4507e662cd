use gentorsion::presentations::{catalog, torus_group};
use gentorsion::word_problem::{
    kb_complete, torus_is_trivial, Budget, CompletionLimits, TriState, WordOracle,
};
use gentorsion::words::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng, gens: i32, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    let signed: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.random_range(1..=gens);
            if rng.random_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    Word::from_signed(&signed)
}

/// Random word times a random conjugate of a relator power, so roughly half
/// the samples are trivial.
fn sample(rng: &mut ChaCha8Rng, relator: &Word) -> Word {
    let w = random_word(rng, 2, 12);
    if rng.random_bool(0.5) {
        let g = random_word(rng, 2, 6);
        let k = if rng.random_bool(0.5) { 1 } else { -1 };
        let trivial = relator.pow(k).conjugate(&g);
        let cut = rng.random_range(0..=w.len());
        w.prefix(cut)
            .concat(&trivial)
            .concat(&w.prefix(cut).inverse())
    } else {
        w
    }
}

#[test]
fn torus_solver_agrees_with_rewriting() {
    for (p, q) in [(2, 3), (2, 5)] {
        let pres = torus_group(p, q).unwrap();
        let rws = kb_complete(&pres, CompletionLimits::default());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut trivial = 0;
        for _ in 0..500 {
            let w = sample(&mut rng, &pres.relators()[0]);
            let exact = torus_is_trivial(p, q, &w);
            assert_eq!(
                exact,
                rws.normal_form(&w).is_identity(),
                "T({p},{q}) {}",
                pres.render_word(&w)
            );
            trivial += exact as usize;
        }
        assert!(trivial > 100 && trivial < 400);
    }
}

#[test]
fn spec_examples() {
    let klein = catalog("klein").unwrap();
    let o = WordOracle::new(&klein, Budget::default());
    assert!(o
        .is_trivial(&klein.parse_word("Yxyx").unwrap())
        .is_trivial());
    let k52 = catalog("5_2").unwrap();
    let o = WordOracle::new(&k52, Budget::default());
    assert!(o.is_trivial(&k52.parse_word("a").unwrap()).is_nontrivial());
    assert!(o.is_trivial(&Word::identity()).is_trivial());
    assert!(o
        .is_trivial(&k52.parse_word("AbaB").unwrap())
        .is_nontrivial());
}

#[test]
fn proofs_and_witnesses_replay() {
    for name in ["klein", "3_1", "4_1", "5_2"] {
        let pres = catalog(name).unwrap();
        let o = WordOracle::new(&pres, Budget::default());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let w = sample(&mut rng, &pres.relators()[0]);
            match o.is_trivial(&w) {
                TriState::Trivial(proof) => assert!(o.check_proof(&w, &proof), "{name}"),
                TriState::NonTrivial(wit) => assert!(o.check_witness(&w, &wit), "{name}"),
                TriState::Unknown { .. } => {}
            }
        }
    }
}

#[test]
fn verdicts_are_deterministic_in_seed() {
    let pres = catalog("4_1").unwrap();
    let w = pres.parse_word("[a,b][a,B]").unwrap();
    let a =
        serde_json::to_string(&WordOracle::new(&pres, Budget::default()).is_trivial(&w)).unwrap();
    let b =
        serde_json::to_string(&WordOracle::new(&pres, Budget::default()).is_trivial(&w)).unwrap();
    assert_eq!(a, b);
}
