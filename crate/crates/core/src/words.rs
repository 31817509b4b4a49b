//! Finite words, contents and colour profiles.
//!
//! The content of a word `w` on a set `Q ⊆ ℕ^k` is the set of letter tuples that
//! `w` carries on position tuples inside `Q`; the profile of `w` on a colouring is
//! the tuple of contents on its cells. Profiles are the whole interface between
//! words and recognisers: two words with the same profile are indistinguishable
//! by every language this crate can express over that colouring.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::colouring::Colouring;
use crate::upset::UpSet;
use crate::window::{window_tuples, TupleSpec, WindowColouring};

/// An ordered, duplicate-free set of letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    letters: Vec<char>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must contain at least one letter")]
    Empty,
    #[error("duplicate letter `{0}` in alphabet")]
    Duplicate(char),
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Result<Alphabet, AlphabetError> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, &c) in letters.iter().enumerate() {
            if letters[..i].contains(&c) {
                return Err(AlphabetError::Duplicate(c));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn parse(text: &str) -> Result<Alphabet, AlphabetError> {
        Alphabet::new(text.chars())
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: char) -> bool {
        self.letters.contains(&c)
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&l| l == c)
    }

    /// All subsets of the alphabet, ordered by characteristic bitmask.
    pub fn letter_subsets(&self) -> Vec<LetterSet> {
        let n = self.letters.len();
        (0..1usize << n)
            .map(|mask| {
                LetterSet(
                    self.letters
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &c)| c)
                        .collect(),
                )
            })
            .collect()
    }

    /// All k-tuples of letters in lexicographic (alphabet-order) order.
    pub fn tuples(&self, k: usize) -> Vec<Vec<char>> {
        let mut out = vec![Vec::new()];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|t| {
                    self.letters.iter().map(move |&c| {
                        let mut t = t.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// All words of length ≤ `max_len`, by length then lexicographically.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for stem in &layer {
                for &c in &self.letters {
                    let mut w = stem.clone();
                    w.push(c);
                    next.push(w);
                }
            }
            out.extend(next.iter().cloned().map(Word::from_letters));
            layer = next;
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A finite word; all letters are expected to come from one fixed alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<char>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(char),
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    /// Wraps letters without validation; used where the alphabet is implicit.
    pub fn from_letters(letters: Vec<char>) -> Word {
        Word { letters }
    }

    /// Parses a plain letter string, validating against the alphabet.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word, WordError> {
        for c in text.chars() {
            if !alphabet.contains(c) {
                return Err(WordError::UnknownLetter(c));
            }
        }
        Ok(Word { letters: text.chars().collect() })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn get(&self, i: usize) -> Option<char> {
        self.letters.get(i).copied()
    }

    pub fn push(&mut self, c: char) {
        self.letters.push(c);
    }

    pub fn set(&mut self, i: usize, c: char) {
        self.letters[i] = c;
    }

    /// Positions carrying the letter `a` (the 1-ary content).
    pub fn positions_of(&self, a: char) -> impl Iterator<Item = usize> + '_ {
        self.letters
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == a)
            .map(|(i, _)| i)
    }

    /// The ā-content: all k-tuples of positions where `self` carries `letters`
    /// coordinatewise.
    pub fn content(&self, letters: &[char]) -> Vec<Vec<usize>> {
        window_tuples(self.len(), letters.len())
            .filter(|t| t.iter().zip(letters).all(|(&i, &a)| self.letters[i] == a))
            .collect()
    }

    /// The ā-content restricted to a tuple spec (`c_ā(w) ∩ Q`).
    pub fn content_in(&self, letters: &[char], q: &TupleSpec) -> Vec<Vec<usize>> {
        self.content(letters).into_iter().filter(|t| q.contains(t)).collect()
    }

    /// The content ⟨w, Q⟩ for a unary set: letters occurring on positions in `Q`.
    pub fn content_on(&self, q: &UpSet) -> LetterSet {
        LetterSet(
            self.letters
                .iter()
                .enumerate()
                .filter(|(i, _)| q.contains(*i))
                .map(|(_, &c)| c)
                .collect(),
        )
    }

    /// The content ⟨w, Q⟩ for a k-ary spec: letter tuples occurring on position
    /// tuples in `Q`.
    pub fn content_on_spec(&self, q: &TupleSpec, k: usize) -> BTreeSet<Vec<char>> {
        window_tuples(self.len(), k)
            .filter(|t| q.contains(t))
            .map(|t| t.iter().map(|&i| self.letters[i]).collect())
            .collect()
    }

    /// The colour profile ⟨w, q⟩: one content per cell.
    pub fn profile(&self, q: &Colouring) -> Profile {
        Profile(q.cells().iter().map(|cell| self.content_on(cell)).collect())
    }

    /// The k-ary profile on a window colouring. The window must be at least |w|.
    pub fn window_profile(
        &self,
        q: &WindowColouring,
    ) -> Result<Vec<BTreeSet<Vec<char>>>, WindowTooSmall> {
        if q.window() < self.len() {
            return Err(WindowTooSmall { window: q.window(), word_len: self.len() });
        }
        let k = q.dimension();
        let mut out = vec![BTreeSet::new(); q.len()];
        for t in window_tuples(self.len(), k) {
            let cell = q.colour_of(&t);
            out[cell].insert(t.iter().map(|&i| self.letters[i]).collect());
        }
        Ok(out)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("window size {window} is smaller than the word length {word_len}")]
pub struct WindowTooSmall {
    pub window: usize,
    pub word_len: usize,
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// A subset of the alphabet, printed `{a,b}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LetterSet(BTreeSet<char>);

impl LetterSet {
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> LetterSet {
        LetterSet(letters.into_iter().collect())
    }

    pub fn empty() -> LetterSet {
        LetterSet(BTreeSet::new())
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }

    pub fn insert(&mut self, c: char) {
        self.0.insert(c);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = char> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &LetterSet) -> LetterSet {
        LetterSet(self.0.union(&other.0).copied().collect())
    }

    /// Parses `{a,b}` (or `{}` for the empty set).
    pub fn parse(text: &str) -> Result<LetterSet, LetterSetParseError> {
        let body = text
            .trim()
            .strip_prefix('{')
            .and_then(|rest| rest.strip_suffix('}'))
            .ok_or_else(|| LetterSetParseError(text.to_string()))?;
        let mut set = BTreeSet::new();
        for part in body.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let mut chars = part.chars();
            let c = chars.next().unwrap();
            if chars.next().is_some() {
                return Err(LetterSetParseError(text.to_string()));
            }
            set.insert(c);
        }
        Ok(LetterSet(set))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("`{0}` is not a letter set of the form {{a,b}}")]
pub struct LetterSetParseError(pub String);

impl fmt::Display for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A colour profile: one letter set per cell of a colouring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(pub Vec<LetterSet>);

impl Profile {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[LetterSet] {
        &self.0
    }

    /// Total number of letters over all components.
    pub fn total_letters(&self) -> usize {
        self.0.iter().map(LetterSet::len).sum()
    }

    /// Parses `{a}|{b}` (components separated by `|`).
    pub fn parse(text: &str) -> Result<Profile, LetterSetParseError> {
        let mut parts = Vec::new();
        for part in text.split('|') {
            parts.push(LetterSet::parse(part)?);
        }
        Ok(Profile(parts))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, set) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{set}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All profiles in P(A)^len, in odometer order over the subset masks.
pub fn all_profiles(alphabet: &Alphabet, len: usize) -> impl Iterator<Item = Profile> {
    let subsets = alphabet.letter_subsets();
    let total = subsets.len().checked_pow(len as u32).expect("profile space too large");
    (0..total).map(move |mut idx| {
        let mut components = vec![LetterSet::empty(); len];
        for slot in components.iter_mut().rev() {
            *slot = subsets[idx % subsets.len()].clone();
            idx /= subsets.len();
        }
        Profile(components)
    })
}

/// Why a profile admits no realizing word: the cell whose constraint is violated.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("no word realizes the profile: cell {cell} is obstructing")]
pub struct InfeasibleProfile {
    pub cell: usize,
}

/// Finds the shortest word whose profile on `q` is exactly `profile`.
///
/// A length N is feasible iff, per cell i: the window Q_i ∩ [0,N) is empty
/// exactly when the required content B_i is empty, and |Q_i ∩ [0,N)| ≥ |B_i|.
/// The search is complete: N is bounded by threshold + lcm·(1 + Σ|B_i|), beyond
/// which infinite cells cannot gain anything new relative to the requirements.
pub fn realize_profile(q: &Colouring, profile: &Profile) -> Result<Word, InfeasibleProfile> {
    let bound = q.threshold() + q.period_lcm() * (1 + profile.total_letters());
    realize_profile_bounded(q, profile, bound)
}

pub(crate) fn realize_profile_bounded(
    q: &Colouring,
    profile: &Profile,
    bound: usize,
) -> Result<Word, InfeasibleProfile> {
    assert_eq!(q.len(), profile.len(), "profile length must match the colouring");
    // Cells with required empty content cap the word length below their minimum.
    let mut cap = bound;
    for (cell, content) in q.cells().iter().zip(profile.components()) {
        if content.is_empty() {
            if let Some(m) = cell.min_element() {
                cap = cap.min(m);
            }
        }
    }
    for n in 0..=cap {
        let feasible = q.cells().iter().zip(profile.components()).all(|(cell, content)| {
            let count = cell.count_below(n);
            (count == 0) == content.is_empty() && count >= content.len()
        });
        if feasible {
            return Ok(build_word(q, profile, n));
        }
    }
    let obstructing = q
        .cells()
        .iter()
        .zip(profile.components())
        .position(|(cell, content)| cell.count_below(cap) < content.len())
        .expect("some cell must fail at the cap when no length is feasible");
    Err(InfeasibleProfile { cell: obstructing })
}

/// Whether some word realizes the profile.
pub fn achievable(q: &Colouring, profile: &Profile) -> bool {
    realize_profile(q, profile).is_ok()
}

fn build_word(q: &Colouring, profile: &Profile, n: usize) -> Word {
    let mut letters = vec!['\0'; n];
    for (cell, content) in q.cells().iter().zip(profile.components()) {
        let positions: Vec<usize> = cell.members_below(n).collect();
        debug_assert!(positions.len() >= content.len());
        let fill = content.iter().next();
        for (slot, p) in positions.iter().enumerate() {
            letters[*p] = match content.iter().nth(slot) {
                Some(c) => c,
                None => fill.expect("nonempty window cell requires nonempty content"),
            };
        }
    }
    let word = Word::from_letters(letters);
    debug_assert_eq!(&word.profile(q), profile);
    word
}
