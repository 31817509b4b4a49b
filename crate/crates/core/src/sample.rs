//! Random instances for property tests and benchmarks.
//!
//! Everything is driven by a caller-supplied [`Rng`], so seeded generators give
//! reproducible suites.

use rand::Rng;

use std::collections::BTreeSet;

use crate::colouring::Colouring;
use crate::recogniser::Recogniser;
use crate::upset::UpSet;
use crate::words::{all_profiles, Alphabet};

/// A random ultimately periodic set with bounded representation size.
pub fn upset<R: Rng + ?Sized>(rng: &mut R, max_threshold: usize, max_period: usize) -> UpSet {
    let t = rng.gen_range(0..=max_threshold);
    let p = rng.gen_range(1..=max_period);
    let prefix = (0..t).map(|_| rng.gen()).collect();
    let cycle = (0..p).map(|_| rng.gen()).collect();
    UpSet::new(prefix, cycle)
}

/// An alphabet that is a prefix of `a, b, c, …`.
pub fn alphabet<R: Rng + ?Sized>(rng: &mut R, max_letters: usize) -> Alphabet {
    let n = rng.gen_range(1..=max_letters.min(26));
    Alphabet::new((0..n).map(|i| (b'a' + i as u8) as char)).expect("prefix alphabets are valid")
}

/// A random colouring with at most `max_cells` cells: the singletons below a
/// random threshold and the residue classes of a random modulus, distributed
/// over the cells.
pub fn colouring<R: Rng + ?Sized>(
    rng: &mut R,
    max_cells: usize,
    max_threshold: usize,
    max_modulus: usize,
) -> Colouring {
    let cells = rng.gen_range(1..=max_cells);
    let t = rng.gen_range(0..=max_threshold);
    let m = rng.gen_range(1..=max_modulus);
    loop {
        let mut groups: Vec<UpSet> = vec![UpSet::empty(); cells];
        for i in 0..t {
            let g = rng.gen_range(0..cells);
            groups[g] = groups[g].union(&UpSet::finite([i]));
        }
        for r in 0..m {
            let g = rng.gen_range(0..cells);
            groups[g] = groups[g].union(&UpSet::residue_from(t, r, m));
        }
        let nonempty: Vec<UpSet> = groups.into_iter().filter(|g| !g.is_empty()).collect();
        if !nonempty.is_empty() {
            return Colouring::new(nonempty).expect("groups partition ℕ");
        }
    }
}

/// A random recogniser: a random colouring plus a uniformly random accepted
/// set of profiles.
pub fn recogniser<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_cells: usize,
    max_threshold: usize,
    max_modulus: usize,
) -> Recogniser {
    let q = colouring(rng, max_cells, max_threshold, max_modulus);
    let accepted: BTreeSet<_> =
        all_profiles(alphabet, q.len()).filter(|_| rng.gen::<bool>()).collect();
    Recogniser::new(alphabet.clone(), q, accepted)
}
