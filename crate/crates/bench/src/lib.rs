//! Shared fixtures for the criterion benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wordlogic::colouring::Colouring;
use wordlogic::recogniser::Recogniser;
use wordlogic::sample;
use wordlogic::upset::UpSet;
use wordlogic::words::{Alphabet, Word};

pub fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

/// A deterministic batch of random set pairs.
pub fn upset_pairs(count: usize) -> Vec<(UpSet, UpSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    (0..count)
        .map(|_| (sample::upset(&mut rng, 6, 8), sample::upset(&mut rng, 6, 8)))
        .collect()
}

/// A deterministic batch of random recognisers over prefixes of {a,b,c}.
pub fn recognisers(count: usize) -> Vec<(Alphabet, Recogniser)> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    (0..count)
        .map(|_| {
            let alphabet = sample::alphabet(&mut rng, 3);
            let r = sample::recogniser(&mut rng, &alphabet, 3, 4, 6);
            (alphabet, r)
        })
        .collect()
}

/// A long profile-equal word pair for the rewrite benchmark: the two halves of
/// an (ab)/(ba)-block word exchanged.
pub fn rewrite_pair(half: usize) -> (Colouring, Word, Word) {
    let q = Colouring::parse("col[up:/10, up:/01]").unwrap();
    let mut left = String::new();
    let mut right = String::new();
    for _ in 0..half {
        left.push_str("ab");
        right.push_str("ba");
    }
    let w1 = Word::parse(&format!("{left}{right}"), &ab()).unwrap();
    let w2 = Word::parse(&format!("{right}{left}"), &ab()).unwrap();
    (q, w1, w2)
}
