//! Finitely represented generalized words and the pseudofiniteness checks.
//!
//! A closed expression is a finite union of two kinds of atoms over an
//! ultimately periodic set Q: `hat(Q)` (the clopen of all positions-and-limits
//! determined by Q) and `star(Q)` (only the limit points of Q). A generalized
//! word assigns one closed expression per letter. Whether a finite word can
//! stand in for a generalized word relative to a colouring reduces to a small
//! arithmetic on the atoms:
//!
//! * the content of `hat(Q)` is Q, the content of `star(Q)` is empty;
//! * `hat(P)` meets the clopen of Q iff P ∩ Q ≠ ∅;
//! * `star(R)` meets the clopen of Q iff R ∩ Q is infinite.

use std::fmt;

use thiserror::Error;

use crate::colouring::Colouring;
use crate::upset::{UpSet, UpSetParseError};
use crate::words::{realize_profile, Alphabet, InfeasibleProfile, LetterSet, Profile, Word};

/// One atom of a closed expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClosedAtom {
    /// The clopen determined by a set.
    Hat(UpSet),
    /// The limit points of a set (empty when the set is finite).
    Star(UpSet),
}

/// A finite union of atoms, kept in a small normal form: `star` atoms of finite
/// sets are dropped (they denote the empty set), `hat` atoms of the empty set
/// are dropped, and a `star(R)` is absorbed whenever some `hat(Q)` in the union
/// has R ∖ Q finite.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClosedExpr {
    atoms: Vec<ClosedAtom>,
}

impl ClosedExpr {
    pub fn empty() -> ClosedExpr {
        ClosedExpr { atoms: Vec::new() }
    }

    pub fn new<I: IntoIterator<Item = ClosedAtom>>(atoms: I) -> ClosedExpr {
        let mut kept: Vec<ClosedAtom> = Vec::new();
        for atom in atoms {
            match &atom {
                ClosedAtom::Hat(q) if q.is_empty() => continue,
                ClosedAtom::Star(r) if r.is_finite() => continue,
                _ => kept.push(atom),
            }
        }
        let hats: Vec<UpSet> = kept
            .iter()
            .filter_map(|a| match a {
                ClosedAtom::Hat(q) => Some(q.clone()),
                ClosedAtom::Star(_) => None,
            })
            .collect();
        kept.retain(|atom| match atom {
            ClosedAtom::Hat(_) => true,
            // star(R) ⊆ hat(Q) iff R ∖ Q is finite.
            ClosedAtom::Star(r) => !hats.iter().any(|q| r.almost_included(q)),
        });
        kept.sort();
        kept.dedup();
        ClosedExpr { atoms: kept }
    }

    pub fn hat(q: UpSet) -> ClosedExpr {
        ClosedExpr::new([ClosedAtom::Hat(q)])
    }

    pub fn star(q: UpSet) -> ClosedExpr {
        ClosedExpr::new([ClosedAtom::Star(q)])
    }

    pub fn union(&self, other: &ClosedExpr) -> ClosedExpr {
        ClosedExpr::new(self.atoms.iter().chain(&other.atoms).cloned())
    }

    pub fn atoms(&self) -> &[ClosedAtom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The content: the actual positions contained in the expression. Star
    /// atoms contribute nothing, holding only limit points.
    pub fn content(&self) -> UpSet {
        let mut out = UpSet::empty();
        for atom in &self.atoms {
            if let ClosedAtom::Hat(q) = atom {
                out = out.union(q);
            }
        }
        out
    }

    /// Whether the expression meets the clopen of `q`.
    pub fn meets_clopen(&self, q: &UpSet) -> bool {
        self.atoms.iter().any(|atom| match atom {
            ClosedAtom::Hat(p) => !p.intersection(q).is_empty(),
            ClosedAtom::Star(r) => r.intersection_infinite(q),
        })
    }

    /// The sets mentioned by the atoms.
    pub fn atom_sets(&self) -> impl Iterator<Item = &UpSet> {
        self.atoms.iter().map(|atom| match atom {
            ClosedAtom::Hat(q) | ClosedAtom::Star(q) => q,
        })
    }
}

impl fmt::Display for ClosedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match atom {
                ClosedAtom::Hat(q) => write!(f, "hat({q})")?,
                ClosedAtom::Star(q) => write!(f, "star({q})")?,
            }
        }
        Ok(())
    }
}

/// A generalized word: one closed expression per letter of the alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedWord {
    alphabet: Alphabet,
    components: Vec<ClosedExpr>,
}

#[derive(Debug, Error)]
pub enum GwFileError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Set { line: usize, source: UpSetParseError },
    #[error("no alphabet could be derived (no component lines)")]
    NoComponents,
}

impl GeneralizedWord {
    pub fn new(alphabet: Alphabet, components: Vec<ClosedExpr>) -> GeneralizedWord {
        assert_eq!(alphabet.len(), components.len(), "one closed expression per letter");
        GeneralizedWord { alphabet, components }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn component(&self, letter: char) -> Option<&ClosedExpr> {
        self.alphabet.index_of(letter).map(|i| &self.components[i])
    }

    pub fn components(&self) -> &[ClosedExpr] {
        &self.components
    }

    /// The profile of the generalized word on a colouring: per cell, the
    /// letters whose component meets the cell's clopen.
    pub fn profile(&self, q: &Colouring) -> Profile {
        Profile(
            q.cells()
                .iter()
                .map(|cell| {
                    LetterSet::new(
                        self.alphabet
                            .letters()
                            .iter()
                            .copied()
                            .filter(|&c| {
                                self.component(c)
                                    .expect("component per letter")
                                    .meets_clopen(cell)
                            }),
                    )
                })
                .collect(),
        )
    }

    /// The content criterion: the per-letter contents are pairwise disjoint and
    /// their union is a downset of ℕ. Necessary for pseudofiniteness; see
    /// [`GeneralizedWord::bounded_pseudofinite_check`] for the bounded converse
    /// (which is strictly stronger on some instances).
    pub fn content_criterion(&self) -> bool {
        let contents: Vec<UpSet> = self.components.iter().map(ClosedExpr::content).collect();
        for i in 0..contents.len() {
            for j in i + 1..contents.len() {
                if !contents[i].intersection(&contents[j]).is_empty() {
                    return false;
                }
            }
        }
        let mut union = UpSet::empty();
        for c in &contents {
            union = union.union(c);
        }
        union.is_downset()
    }

    /// Decides exactly whether some finite word has the same profile as the
    /// generalized word on `q`, and constructs the shortest one if so.
    pub fn word_witness(&self, q: &Colouring) -> Result<Word, InfeasibleProfile> {
        realize_profile(q, &self.profile(q))
    }

    /// The candidate colourings used by the bounded check: singleton-prefix
    /// threshold/residue colourings, each refined by every set occurring in the
    /// atoms of the generalized word.
    pub fn candidate_colourings(
        &self,
        modulus_bound: usize,
        threshold_bound: usize,
    ) -> Vec<Colouring> {
        let mut sets: Vec<&UpSet> = self.components.iter().flat_map(ClosedExpr::atom_sets).collect();
        sets.sort();
        sets.dedup();
        Colouring::singleton_candidates(threshold_bound, modulus_bound)
            .into_iter()
            .map(|base| {
                let mut q = base;
                for s in &sets {
                    q = q.refine_by(s);
                }
                q
            })
            .collect()
    }

    /// Runs [`GeneralizedWord::word_witness`] over the candidate family and
    /// returns the first colouring with no witness word. A pass is relative to
    /// the candidate family and bounds.
    pub fn bounded_pseudofinite_check(
        &self,
        modulus_bound: usize,
        threshold_bound: usize,
    ) -> Result<(), Counterexample> {
        for q in self.candidate_colourings(modulus_bound, threshold_bound) {
            if let Err(infeasible) = self.word_witness(&q) {
                return Err(Counterexample { colouring: q, cell: infeasible.cell });
            }
        }
        Ok(())
    }

    /// Serializes to the generalized-word file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (i, &letter) in self.alphabet.letters().iter().enumerate() {
            out.push_str(&format!("{letter} = {}\n", self.components[i]));
        }
        out
    }

    /// Parses the generalized-word file format, one line per letter:
    ///
    /// ```text
    /// a = hat(up:/1) + star(up:/10)
    /// b = 0
    /// ```
    ///
    /// The alphabet is the letters in line order.
    pub fn from_file_str(text: &str) -> Result<GeneralizedWord, GwFileError> {
        let mut letters = Vec::new();
        let mut components = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (head, body) = trimmed.split_once('=').ok_or_else(|| GwFileError::Malformed {
                line,
                msg: "expected `letter = expression`".into(),
            })?;
            let head = head.trim();
            let mut head_chars = head.chars();
            let letter = match (head_chars.next(), head_chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(GwFileError::Malformed {
                        line,
                        msg: format!("`{head}` is not a single letter"),
                    })
                }
            };
            if letters.contains(&letter) {
                return Err(GwFileError::Malformed {
                    line,
                    msg: format!("duplicate component for letter `{letter}`"),
                });
            }
            let body = body.trim();
            let expr = if body == "0" {
                ClosedExpr::empty()
            } else {
                let mut atoms = Vec::new();
                for part in body.split('+') {
                    let part = part.trim();
                    let atom = if let Some(inner) =
                        part.strip_prefix("hat(").and_then(|r| r.strip_suffix(')'))
                    {
                        ClosedAtom::Hat(
                            UpSet::parse(inner.trim())
                                .map_err(|source| GwFileError::Set { line, source })?,
                        )
                    } else if let Some(inner) =
                        part.strip_prefix("star(").and_then(|r| r.strip_suffix(')'))
                    {
                        ClosedAtom::Star(
                            UpSet::parse(inner.trim())
                                .map_err(|source| GwFileError::Set { line, source })?,
                        )
                    } else {
                        return Err(GwFileError::Malformed {
                            line,
                            msg: format!("`{part}` is not `hat(...)` or `star(...)`"),
                        });
                    };
                    atoms.push(atom);
                }
                ClosedExpr::new(atoms)
            };
            letters.push(letter);
            components.push(expr);
        }
        let alphabet = Alphabet::new(letters).map_err(|_| GwFileError::NoComponents)?;
        Ok(GeneralizedWord { alphabet, components })
    }
}

/// A colouring for which no finite word matches the generalized word's profile.
#[derive(Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub colouring: Colouring,
    pub cell: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn parity() -> Colouring {
        Colouring::parse("col[up:/10, up:/01]").unwrap()
    }

    /// (hat(ℕ), star(ℕ)): mostly-a with a limit-tail of b.
    fn a_with_b_tail() -> GeneralizedWord {
        GeneralizedWord::new(
            ab(),
            vec![ClosedExpr::hat(UpSet::all()), ClosedExpr::star(UpSet::all())],
        )
    }

    /// (hat(ℕ), 0): the generalization of an all-a word.
    fn all_a() -> GeneralizedWord {
        GeneralizedWord::new(ab(), vec![ClosedExpr::hat(UpSet::all()), ClosedExpr::empty()])
    }

    /// (star(evens), hat({0})): the discrepancy instance.
    fn discrepancy() -> GeneralizedWord {
        GeneralizedWord::new(
            ab(),
            vec![
                ClosedExpr::star(UpSet::evens()),
                ClosedExpr::hat(UpSet::finite([0])),
            ],
        )
    }

    #[test]
    fn contents() {
        assert_eq!(ClosedExpr::hat(UpSet::evens()).content(), UpSet::evens());
        assert_eq!(ClosedExpr::star(UpSet::all()).content(), UpSet::empty());
        let mixed = ClosedExpr::new([
            ClosedAtom::Hat(UpSet::finite([0])),
            ClosedAtom::Star(UpSet::evens()),
        ]);
        assert_eq!(mixed.content(), UpSet::finite([0]));
    }

    #[test]
    fn normalization() {
        // star of a finite set is the empty set.
        assert!(ClosedExpr::star(UpSet::finite([1, 2, 3])).is_empty());
        // star(R) is absorbed when R ∖ Q is finite for a hat(Q) in the union.
        let absorbed = ClosedExpr::new([
            ClosedAtom::Hat(UpSet::all()),
            ClosedAtom::Star(UpSet::evens()),
        ]);
        assert_eq!(absorbed.atoms().len(), 1);
        // star(evens) is not absorbed by hat(odds).
        let kept = ClosedExpr::new([
            ClosedAtom::Hat(UpSet::odds()),
            ClosedAtom::Star(UpSet::evens()),
        ]);
        assert_eq!(kept.atoms().len(), 2);
    }

    #[test]
    fn meets_clopen_rules() {
        assert!(!ClosedExpr::star(UpSet::evens()).meets_clopen(&UpSet::odds()));
        assert!(ClosedExpr::star(UpSet::all()).meets_clopen(&UpSet::evens()));
        assert!(ClosedExpr::hat(UpSet::finite([0])).meets_clopen(&UpSet::initial_segment(6)));
        // A star atom never meets a finite clopen.
        assert!(!ClosedExpr::star(UpSet::evens()).meets_clopen(&UpSet::finite([2, 4])));
    }

    #[test]
    fn meets_clopen_on_singletons_is_content() {
        let exprs = [
            ClosedExpr::hat(UpSet::evens()),
            ClosedExpr::star(UpSet::evens()),
            ClosedExpr::new([
                ClosedAtom::Hat(UpSet::finite([0, 3])),
                ClosedAtom::Star(UpSet::odds()),
            ]),
        ];
        for e in exprs {
            let content = e.content();
            let bound = content.threshold() + 2 * content.period() + 4;
            for n in 0..bound {
                assert_eq!(e.meets_clopen(&UpSet::finite([n])), content.contains(n), "{e} at {n}");
            }
        }
    }

    #[test]
    fn profiles_of_generalized_words() {
        let g = a_with_b_tail();
        assert_eq!(g.profile(&parity()).to_string(), "{a,b}|{a,b}");
        let g = all_a();
        assert_eq!(g.profile(&parity()).to_string(), "{a}|{a}");
        let empty = GeneralizedWord::new(ab(), vec![ClosedExpr::empty(), ClosedExpr::empty()]);
        assert_eq!(empty.profile(&parity()).to_string(), "{}|{}");
    }

    #[test]
    fn content_criterion_examples() {
        assert!(all_a().content_criterion());
        assert!(a_with_b_tail().content_criterion());
        assert!(discrepancy().content_criterion());
        let overlapping = GeneralizedWord::new(
            ab(),
            vec![
                ClosedExpr::hat(UpSet::evens()),
                ClosedExpr::hat(UpSet::odds().union(&UpSet::finite([0]))),
            ],
        );
        assert!(!overlapping.content_criterion());
    }

    #[test]
    fn word_witnesses() {
        let g = a_with_b_tail();
        let w = g.word_witness(&parity()).unwrap();
        assert_eq!(w.profile(&parity()), g.profile(&parity()));

        let g = all_a();
        for q in Colouring::singleton_candidates(3, 3) {
            let w = g.word_witness(&q).unwrap();
            assert!(w.letters().iter().all(|&c| c == 'a'));
            assert_eq!(w.profile(&q), g.profile(&q));
        }
    }

    #[test]
    fn discrepancy_instance_is_infeasible_for_the_split_colouring() {
        let g = discrepancy();
        // ({0}, evens∖{0}, odds): cell 1 needs an `a` (so length ≥ 3) while
        // cell 2 must stay empty (so length ≤ 1).
        let q = Colouring::new(vec![
            UpSet::finite([0]),
            UpSet::evens().difference(&UpSet::finite([0])),
            UpSet::odds(),
        ])
        .unwrap();
        assert_eq!(g.word_witness(&q), Err(InfeasibleProfile { cell: 1 }));
        // Cross-check by exhausting all short words.
        let target = g.profile(&q);
        for w in ab().words_up_to(4) {
            assert_ne!(w.profile(&q), target, "{w} should not match");
        }
    }

    #[test]
    fn bounded_check_pass_and_counterexample() {
        assert!(a_with_b_tail().bounded_pseudofinite_check(4, 4).is_ok());
        assert!(all_a().bounded_pseudofinite_check(4, 4).is_ok());
        let empty = GeneralizedWord::new(ab(), vec![ClosedExpr::empty(), ClosedExpr::empty()]);
        assert!(empty.bounded_pseudofinite_check(3, 3).is_ok());

        let err = discrepancy().bounded_pseudofinite_check(2, 1).unwrap_err();
        let expected = Colouring::new(vec![
            UpSet::finite([0]),
            UpSet::evens().difference(&UpSet::finite([0])),
            UpSet::odds(),
        ])
        .unwrap();
        assert_eq!(err.colouring, expected);
        assert_eq!(err.cell, 1);
    }

    #[test]
    fn bounded_check_implies_content_criterion() {
        // The candidate family contains every singleton-prefix colouring deep
        // enough to isolate any overlap or downset-gap witness of contents
        // built from small atoms, so a bounded pass forces the criterion.
        // (The converse fails; see the discrepancy instance above.)
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(97);
        let mut passes = 0;
        let mut violations = 0;
        for _ in 0..40 {
            let components: Vec<ClosedExpr> = (0..2)
                .map(|_| {
                    let atoms: Vec<ClosedAtom> = (0..rng.gen_range(0..=2))
                        .map(|_| {
                            let set = crate::sample::upset(&mut rng, 2, 3);
                            if rng.gen() {
                                ClosedAtom::Hat(set)
                            } else {
                                ClosedAtom::Star(set)
                            }
                        })
                        .collect();
                    ClosedExpr::new(atoms)
                })
                .collect();
            let g = GeneralizedWord::new(ab(), components);
            if g.bounded_pseudofinite_check(1, 14).is_ok() {
                passes += 1;
                assert!(g.content_criterion(), "bounded pass without the criterion: {g:?}");
            } else {
                violations += 1;
            }
        }
        // Both branches must actually be exercised.
        assert!(passes > 0 && violations > 0, "{passes} passes, {violations} violations");
    }

    #[test]
    fn file_round_trip() {
        let g = a_with_b_tail();
        let text = g.to_file_string();
        assert_eq!(text, "a = hat(up:/1)\nb = star(up:/1)\n");
        assert_eq!(GeneralizedWord::from_file_str(&text).unwrap(), g);

        let parsed = GeneralizedWord::from_file_str("a = hat(up:/1) + star(up:/10)\nb = 0\n")
            .unwrap();
        assert_eq!(parsed.component('b').unwrap(), &ClosedExpr::empty());
        // hat(ℕ) absorbs star(evens).
        assert_eq!(parsed.component('a').unwrap().atoms().len(), 1);

        let err = GeneralizedWord::from_file_str("a = wobble\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }
}
