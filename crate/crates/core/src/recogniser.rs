//! Canonical recognisers for the algebra: a colouring of ℕ plus an accepted set
//! of profiles.
//!
//! A word belongs to the recognised language iff its profile on the colouring is
//! accepted. The accepted set is stored over all of P(A)^ℓ; unachievable
//! profiles never come up in membership queries, and keeping the full set makes
//! complement a set flip. Achievability filtering happens only where it matters:
//! deciding equivalence and synthesizing from an oracle.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::colouring::Colouring;
use crate::formula::{
    eval_sentence, sentence_to_generators, EvalError, Formula, GenExpr, NormalFormError,
    PredInterp, PredRegistry,
};
use crate::upset::UpSet;
use crate::words::{
    all_profiles, realize_profile, realize_profile_bounded, Alphabet, LetterSet, Profile, Word,
};

/// A total membership predicate on words. Recognisers, compiled formulas and
/// user-supplied closures all implement it.
pub trait MembershipOracle {
    fn accepts(&self, w: &Word) -> bool;
}

/// Wraps a closure as an oracle.
pub struct FnOracle<F: Fn(&Word) -> bool>(pub F);

impl<F: Fn(&Word) -> bool> MembershipOracle for FnOracle<F> {
    fn accepts(&self, w: &Word) -> bool {
        (self.0)(w)
    }
}

impl<T: MembershipOracle + ?Sized> MembershipOracle for &T {
    fn accepts(&self, w: &Word) -> bool {
        (**self).accepts(w)
    }
}

/// A sentence packaged as a total oracle. Construction checks that evaluation
/// cannot fail (all predicates known and bound).
pub struct FormulaOracle {
    formula: Formula,
    registry: PredRegistry,
}

impl FormulaOracle {
    pub fn new(formula: Formula, registry: PredRegistry) -> Result<FormulaOracle, EvalError> {
        check_evaluable(&formula, &registry)?;
        Ok(FormulaOracle { formula, registry })
    }
}

fn check_evaluable(phi: &Formula, registry: &PredRegistry) -> Result<(), EvalError> {
    match phi {
        Formula::Letter(..) => Ok(()),
        Formula::Pred(name, _) => match registry.get(name) {
            None => Err(EvalError::UnknownPredicate(name.clone())),
            Some(def) => match def.interp {
                PredInterp::ExternUnbound => Err(EvalError::UnboundExtern(name.clone())),
                _ => Ok(()),
            },
        },
        Formula::Not(inner) | Formula::Exists(_, inner) => check_evaluable(inner, registry),
        Formula::And(a, b) | Formula::Or(a, b) => {
            check_evaluable(a, registry)?;
            check_evaluable(b, registry)
        }
    }
}

impl MembershipOracle for FormulaOracle {
    fn accepts(&self, w: &Word) -> bool {
        eval_sentence(&self.formula, w, &self.registry)
            .expect("formula oracle was validated at construction")
    }
}

/// Colouring + accepted profiles.
#[derive(Clone, PartialEq, Eq)]
pub struct Recogniser {
    alphabet: Alphabet,
    colouring: Colouring,
    accepted: BTreeSet<Profile>,
}

impl MembershipOracle for Recogniser {
    fn accepts(&self, w: &Word) -> bool {
        self.accepted.contains(&w.profile(&self.colouring))
    }
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("sentence quantifies over {0} variables; only unary blocks compile to a recogniser")]
    NonUnary(usize),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

impl Recogniser {
    pub fn new(
        alphabet: Alphabet,
        colouring: Colouring,
        accepted: BTreeSet<Profile>,
    ) -> Recogniser {
        for p in &accepted {
            assert_eq!(p.len(), colouring.len(), "profile length must match the colouring");
        }
        Recogniser { alphabet, colouring, accepted }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn colouring(&self) -> &Colouring {
        &self.colouring
    }

    pub fn accepted(&self) -> &BTreeSet<Profile> {
        &self.accepted
    }

    /// The language of all words whose profile on `colouring` is exactly
    /// `profile` (an equivalence class of the profile relation).
    pub fn profile_class(alphabet: Alphabet, colouring: Colouring, profile: Profile) -> Recogniser {
        let accepted = [profile].into_iter().collect();
        Recogniser::new(alphabet, colouring, accepted)
    }

    /// The generator language of words with some occurrence of `letter` at a
    /// position in `q`. Degenerate sets collapse to the one-cell colouring.
    pub fn from_generator(alphabet: Alphabet, letter: char, q: &UpSet) -> Recogniser {
        debug_assert!(alphabet.contains(letter));
        if q.is_empty() {
            return Recogniser::new(alphabet, Colouring::trivial(), BTreeSet::new());
        }
        let colouring = if q.is_all() {
            Colouring::trivial()
        } else {
            Colouring::new(vec![q.clone(), q.complement()]).expect("(Q, Qᶜ) partitions ℕ")
        };
        let accepted = all_profiles(&alphabet, colouring.len())
            .filter(|p| p.components()[0].contains(letter))
            .collect();
        Recogniser::new(alphabet, colouring, accepted)
    }

    /// Everything or nothing.
    pub fn constant(alphabet: Alphabet, value: bool) -> Recogniser {
        let accepted = if value {
            all_profiles(&alphabet, 1).collect()
        } else {
            BTreeSet::new()
        };
        Recogniser::new(alphabet, Colouring::trivial(), accepted)
    }

    fn coarsen(profile: &Profile, pairs: &[(usize, usize)], left: bool, len: usize) -> Profile {
        let mut components = vec![LetterSet::empty(); len];
        for (j, &(i1, i2)) in pairs.iter().enumerate() {
            let target = if left { i1 } else { i2 };
            components[target] = components[target].union(&profile.components()[j]);
        }
        Profile(components)
    }

    fn combine(&self, other: &Recogniser, op: impl Fn(bool, bool) -> bool) -> Recogniser {
        assert_eq!(self.alphabet, other.alphabet, "recognisers over different alphabets");
        let refined = self.colouring.refine(&other.colouring);
        let accepted = all_profiles(&self.alphabet, refined.colouring.len())
            .filter(|p| {
                let left = Self::coarsen(p, &refined.pairs, true, self.colouring.len());
                let right = Self::coarsen(p, &refined.pairs, false, other.colouring.len());
                op(self.accepted.contains(&left), other.accepted.contains(&right))
            })
            .collect();
        Recogniser::new(self.alphabet.clone(), refined.colouring, accepted)
    }

    pub fn union(&self, other: &Recogniser) -> Recogniser {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Recogniser) -> Recogniser {
        self.combine(other, |a, b| a && b)
    }

    /// Flips the accepted set within P(A)^ℓ.
    pub fn complement(&self) -> Recogniser {
        let accepted = all_profiles(&self.alphabet, self.colouring.len())
            .filter(|p| !self.accepted.contains(p))
            .collect();
        Recogniser::new(self.alphabet.clone(), self.colouring.clone(), accepted)
    }

    /// A word on which the two recognisers disagree, if any: translate both to
    /// the common refinement and compare on achievable profiles only.
    pub fn separating_word(&self, other: &Recogniser) -> Option<Word> {
        assert_eq!(self.alphabet, other.alphabet, "recognisers over different alphabets");
        let refined = self.colouring.refine(&other.colouring);
        for p in all_profiles(&self.alphabet, refined.colouring.len()) {
            let left = Self::coarsen(&p, &refined.pairs, true, self.colouring.len());
            let right = Self::coarsen(&p, &refined.pairs, false, other.colouring.len());
            if self.accepted.contains(&left) != other.accepted.contains(&right) {
                if let Ok(w) = realize_profile(&refined.colouring, &p) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Language equality.
    pub fn equivalent(&self, other: &Recogniser) -> bool {
        self.separating_word(other).is_none()
    }

    /// Merges colours while the accepted set only depends on the merged
    /// profiles (checked exhaustively over P(A)^ℓ). Sound, not minimal.
    pub fn reduced(&self) -> Recogniser {
        let mut current = self.clone();
        'outer: loop {
            let l = current.colouring.len();
            for i in 0..l {
                for j in i + 1..l {
                    if let Some(merged) = current.try_merge(i, j) {
                        current = merged;
                        continue 'outer;
                    }
                }
            }
            return current;
        }
    }

    fn try_merge(&self, i: usize, j: usize) -> Option<Recogniser> {
        use std::collections::BTreeMap;
        let merge_profile = |p: &Profile| -> Profile {
            let mut components = Vec::with_capacity(p.len() - 1);
            for (idx, c) in p.components().iter().enumerate() {
                if idx == j {
                    continue;
                }
                if idx == i {
                    components.push(c.union(&p.components()[j]));
                } else {
                    components.push(c.clone());
                }
            }
            Profile(components)
        };
        let mut decisions: BTreeMap<Profile, bool> = BTreeMap::new();
        for p in all_profiles(&self.alphabet, self.colouring.len()) {
            let key = merge_profile(&p);
            let value = self.accepted.contains(&p);
            match decisions.get(&key) {
                Some(&prev) if prev != value => return None,
                Some(_) => {}
                None => {
                    decisions.insert(key, value);
                }
            }
        }
        let mut cells = Vec::new();
        for (idx, cell) in self.colouring.cells().iter().enumerate() {
            if idx == j {
                continue;
            }
            if idx == i {
                cells.push(cell.union(&self.colouring.cells()[j]));
            } else {
                cells.push(cell.clone());
            }
        }
        let colouring = Colouring::new(cells).expect("merging cells preserves the partition");
        let accepted = decisions.into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect();
        Some(Recogniser::new(self.alphabet.clone(), colouring, accepted))
    }

    /// Rebuilds a recogniser from a membership oracle over a given colouring:
    /// enumerate the achievable profiles, query the oracle on one canonical
    /// (shortest) representative per profile, and accept the queried-true ones.
    ///
    /// The representative search always runs at least to `len_bound` and is
    /// extended to the colouring's intrinsic sufficient bound, so the profile
    /// enumeration is exact. The result equals the oracle's language exactly
    /// when the oracle cannot distinguish words with the same profile on
    /// `colouring`; otherwise the representative choice decides, and the
    /// result disagrees with the oracle on some words.
    pub fn synthesize(
        oracle: &dyn MembershipOracle,
        alphabet: Alphabet,
        colouring: Colouring,
        len_bound: usize,
    ) -> Recogniser {
        let mut accepted = BTreeSet::new();
        for p in all_profiles(&alphabet, colouring.len()) {
            let bound =
                len_bound.max(colouring.threshold() + colouring.period_lcm() * (1 + p.total_letters()));
            if let Ok(w) = realize_profile_bounded(&colouring, &p, bound) {
                if oracle.accepts(&w) {
                    accepted.insert(p);
                }
            }
        }
        Recogniser::new(alphabet, colouring, accepted)
    }

    /// Serializes to the recogniser file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("alphabet {}\n", self.alphabet));
        out.push_str(&format!("colouring {}\n", self.colouring));
        for p in &self.accepted {
            out.push_str(&format!("accept {p}\n"));
        }
        out
    }

    /// Parses the recogniser file format:
    ///
    /// ```text
    /// alphabet ab
    /// colouring col[up:/10, up:/01]
    /// accept {a}|{b}
    /// ```
    pub fn from_file_str(text: &str) -> Result<Recogniser, RecogniserFileError> {
        let mut alphabet = None;
        let mut colouring: Option<Colouring> = None;
        let mut accepted = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("alphabet ") {
                let a = Alphabet::parse(rest.trim())
                    .map_err(|e| RecogniserFileError { line, msg: e.to_string() })?;
                alphabet = Some(a);
            } else if let Some(rest) = trimmed.strip_prefix("colouring ") {
                let c = Colouring::parse(rest.trim())
                    .map_err(|e| RecogniserFileError { line, msg: e.to_string() })?;
                colouring = Some(c);
            } else if let Some(rest) = trimmed.strip_prefix("accept ") {
                let p = Profile::parse(rest.trim())
                    .map_err(|e| RecogniserFileError { line, msg: e.to_string() })?;
                let Some(c) = &colouring else {
                    return Err(RecogniserFileError {
                        line,
                        msg: "accept line before the colouring declaration".into(),
                    });
                };
                if p.len() != c.len() {
                    return Err(RecogniserFileError {
                        line,
                        msg: format!(
                            "profile has {} components but the colouring has {} cells",
                            p.len(),
                            c.len()
                        ),
                    });
                }
                accepted.insert(p);
            } else {
                return Err(RecogniserFileError {
                    line,
                    msg: format!("unrecognised line `{trimmed}`"),
                });
            }
        }
        let alphabet = alphabet.ok_or(RecogniserFileError {
            line: 0,
            msg: "missing `alphabet` line".into(),
        })?;
        let colouring = colouring.ok_or(RecogniserFileError {
            line: 0,
            msg: "missing `colouring` line".into(),
        })?;
        Ok(Recogniser::new(alphabet, colouring, accepted))
    }
}

#[derive(Debug, Error)]
#[error("recogniser file, line {line}: {msg}")]
pub struct RecogniserFileError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Debug for Recogniser {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Recogniser(alphabet {}, {}, {} accepted)",
            self.alphabet,
            self.colouring,
            self.accepted.len()
        )
    }
}

/// Compiles a sentence (k = 1, uniform unary predicates) into a recogniser.
///
/// The sentence is translated to a Boolean expression over generators, the
/// colouring is the common refinement of every set occurring in a generator,
/// and the accepted set is computed by evaluating the generator expression on
/// each profile: a generator (a, Q) holds on a profile iff `a` belongs to the
/// union of the components of the cells included in Q (finite additivity).
pub fn compile(
    phi: &Formula,
    alphabet: &Alphabet,
    registry: &PredRegistry,
) -> Result<Recogniser, CompileError> {
    let gens = sentence_to_generators(phi, alphabet, registry)?;
    let mut sets = BTreeSet::new();
    for (letters, spec) in gens.atoms() {
        if letters.len() != 1 {
            return Err(CompileError::NonUnary(letters.len()));
        }
        let q = spec.to_upset().expect("unary generator specs reduce to sets");
        sets.insert(q);
    }
    let mut colouring = Colouring::trivial();
    for q in &sets {
        colouring = colouring.refine_by(q);
    }
    // For every generator set, each cell lies inside it or outside it.
    let inclusion: Vec<(UpSet, Vec<bool>)> = sets
        .iter()
        .map(|q| {
            let mask = colouring.cells().iter().map(|cell| cell.difference(q).is_empty()).collect();
            (q.clone(), mask)
        })
        .collect();
    let accepted = all_profiles(alphabet, colouring.len())
        .filter(|p| eval_gen_on_profile(&gens, p, &inclusion))
        .collect();
    Ok(Recogniser::new(alphabet.clone(), colouring, accepted))
}

fn eval_gen_on_profile(
    expr: &GenExpr,
    profile: &Profile,
    inclusion: &[(UpSet, Vec<bool>)],
) -> bool {
    match expr {
        GenExpr::Const(b) => *b,
        GenExpr::Atom { letters, set } => {
            let q = set.to_upset().expect("checked during compilation");
            let mask = &inclusion
                .iter()
                .find(|(s, _)| *s == q)
                .expect("every generator set was collected")
                .1;
            profile
                .components()
                .iter()
                .zip(mask)
                .any(|(component, &inside)| inside && component.contains(letters[0]))
        }
        GenExpr::Not(inner) => !eval_gen_on_profile(inner, profile, inclusion),
        GenExpr::And(a, b) => {
            eval_gen_on_profile(a, profile, inclusion) && eval_gen_on_profile(b, profile, inclusion)
        }
        GenExpr::Or(a, b) => {
            eval_gen_on_profile(a, profile, inclusion) || eval_gen_on_profile(b, profile, inclusion)
        }
    }
}

/// Re-export of the profile achievability decision (see [`crate::words`]).
pub fn achievable(q: &Colouring, profile: &Profile) -> bool {
    crate::words::achievable(q, profile)
}
