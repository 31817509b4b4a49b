//! Joint invariants that tie the modules together: recogniser membership is
//! blind to rewrite steps, Boolean operations distribute over membership, and
//! decided equivalence implies pointwise agreement well beyond the decision
//! procedure's internal bound.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wordlogic::colouring::Colouring;
use wordlogic::recogniser::{compile, MembershipOracle, Recogniser};
use wordlogic::rewrite::{verify_chain, witness_chain};
use wordlogic::sample;
use wordlogic::upset::UpSet;
use wordlogic::words::Alphabet;
use wordlogic::formula::{parse_sentence, PredInterp, PredRegistry};

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

#[test]
fn membership_is_invariant_under_rewrite_chains() {
    // Chains are built for a colouring refining the recogniser's; along each
    // chain the recogniser cannot change its mind.
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let alphabet = ab();
    let words = alphabet.words_up_to(6);
    for _ in 0..25 {
        let r = sample::recogniser(&mut rng, &alphabet, 2, 2, 2);
        let q = r.colouring().refine_by(&UpSet::residue(0, 2));
        for _ in 0..40 {
            let w1 = words.choose(&mut rng).unwrap();
            let w2 = words.choose(&mut rng).unwrap();
            if w1.profile(&q) != w2.profile(&q) {
                continue;
            }
            let chain = witness_chain(&q, w1, w2).unwrap();
            verify_chain(&chain, Some(&r))
                .unwrap_or_else(|e| panic!("membership changed on {w1} -> {w2}: {e}"));
        }
    }
}

#[test]
fn boolean_ops_distribute_over_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let alphabet = ab();
    let words = alphabet.words_up_to(8);
    for _ in 0..20 {
        let r1 = sample::recogniser(&mut rng, &alphabet, 2, 3, 4);
        let r2 = sample::recogniser(&mut rng, &alphabet, 2, 3, 4);
        let union = r1.union(&r2);
        let inter = r1.intersection(&r2);
        let comp = r1.complement();
        for w in &words {
            let (m1, m2) = (r1.accepts(w), r2.accepts(w));
            assert_eq!(union.accepts(w), m1 || m2, "{w}");
            assert_eq!(inter.accepts(w), m1 && m2, "{w}");
            assert_eq!(comp.accepts(w), !m1, "{w}");
        }
    }
}

#[test]
fn decided_equivalence_implies_agreement_up_to_12() {
    let reg = {
        let mut reg = PredRegistry::new();
        reg.insert("EV", 1, PredInterp::Unary(UpSet::evens())).unwrap();
        reg.insert("OD", 1, PredInterp::Unary(UpSet::odds())).unwrap();
        reg
    };
    let alphabet = ab();
    let pairs = [
        (
            Recogniser::from_generator(alphabet.clone(), 'a', &UpSet::evens())
                .union(&Recogniser::from_generator(alphabet.clone(), 'a', &UpSet::odds())),
            Recogniser::from_generator(alphabet.clone(), 'a', &UpSet::all()),
        ),
        (
            compile(
                &parse_sentence("(E x1 . a(x1) & EV(x1)) | (E x1 . a(x1) & OD(x1))", &alphabet, &reg)
                    .unwrap(),
                &alphabet,
                &reg,
            )
            .unwrap(),
            compile(&parse_sentence("E x1 . a(x1)", &alphabet, &reg).unwrap(), &alphabet, &reg)
                .unwrap(),
        ),
        (
            Recogniser::constant(alphabet.clone(), true),
            Recogniser::from_generator(alphabet.clone(), 'a', &UpSet::all())
                .union(&Recogniser::from_generator(alphabet.clone(), 'a', &UpSet::all()).complement()),
        ),
    ];
    for (r1, r2) in &pairs {
        assert!(r1.equivalent(r2));
        for w in alphabet.words_up_to(12) {
            assert_eq!(r1.accepts(&w), r2.accepts(&w), "{w}");
        }
    }
}

#[test]
fn double_complement_is_identity_on_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let alphabet = ab();
    for _ in 0..10 {
        let r = sample::recogniser(&mut rng, &alphabet, 3, 3, 4);
        let back = r.complement().complement();
        for w in alphabet.words_up_to(8) {
            assert_eq!(back.accepts(&w), r.accepts(&w));
        }
        assert!(back.equivalent(&r));
        // Intersection with the complement accepts nothing.
        let nothing = r.intersection(&r.complement());
        for w in alphabet.words_up_to(8) {
            assert!(!nothing.accepts(&w));
        }
    }
}

#[test]
fn rewrite_chains_work_over_three_letters() {
    let alphabet = Alphabet::parse("abc").unwrap();
    let words = alphabet.words_up_to(5);
    for q in Colouring::candidates(1, 2) {
        let mut groups: std::collections::BTreeMap<_, Vec<&wordlogic::Word>> =
            std::collections::BTreeMap::new();
        for w in &words {
            groups.entry(w.profile(&q)).or_default().push(w);
        }
        for group in groups.values() {
            for &w1 in group {
                for &w2 in group {
                    let chain = witness_chain(&q, w1, w2)
                        .unwrap_or_else(|e| panic!("{w1} -> {w2} on {q}: {e}"));
                    verify_chain(&chain, None)
                        .unwrap_or_else(|e| panic!("{w1} -> {w2} on {q}: {e}"));
                }
            }
        }
    }
}

#[test]
fn reduction_preserves_the_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let alphabet = ab();
    for _ in 0..20 {
        let r = sample::recogniser(&mut rng, &alphabet, 3, 3, 4);
        let reduced = r.reduced();
        assert!(reduced.colouring().len() <= r.colouring().len());
        assert!(reduced.equivalent(&r));
        for w in alphabet.words_up_to(7) {
            assert_eq!(reduced.accepts(&w), r.accepts(&w), "{w}");
        }
    }
}

#[test]
fn colourings_found_by_search_are_sound_for_compiled_sentences() {
    use wordlogic::equations::{check_all, search_colouring};
    let mut reg = PredRegistry::new();
    reg.insert("EV", 1, PredInterp::Unary(UpSet::evens())).unwrap();
    let alphabet = ab();
    for text in ["E x1 . a(x1) & EV(x1)", "!(E x1 . b(x1))"] {
        let r = compile(&parse_sentence(text, &alphabet, &reg).unwrap(), &alphabet, &reg).unwrap();
        // The compiled recogniser's own colouring always passes.
        assert!(check_all(&r, &alphabet, r.colouring(), 6).passed());
        // And the candidate search finds some passing colouring.
        let candidates = Colouring::candidates(2, 2);
        assert!(search_colouring(&r, &alphabet, &candidates, 6).is_some(), "{text}");
    }
}
