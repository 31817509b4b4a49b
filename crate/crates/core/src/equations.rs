//! The three equation families, checked on bounded windows.
//!
//! Fix a colouring Q of ℕ and a membership oracle L. The families are
//!
//! * swap: for same-colour j₁ ≠ j₂, w(j₁,j₂ → a,b) ∈ L ⟺ w(j₁,j₂ → b,a) ∈ L
//! * dup: for same-colour pairwise-distinct j̄, w(j̄ → a,a,b) ∈ L ⟺ w(j̄ → a,b,b) ∈ L
//! * append: for j with colour(j) = colour(|w|), w(j → a) ∈ L ⟺ w(j → a)·a ∈ L
//!
//! A language satisfies all families for some finite colouring exactly when it
//! belongs to the algebra; [`check_all`] verifies the condition exhaustively for
//! all words up to a length bound, and [`search_colouring`] scans a finite
//! candidate family for a colouring that passes.
//!
//! The checks iterate over the substitution fixpoints (words already carrying
//! the pattern): for any structure (w, j̄), the left substitution produces a
//! fixpoint with the same pair of substituted words, so the verdict is the same
//! and the enumeration is |A|-fold cheaper.

use std::fmt;

use crate::colouring::Colouring;
use crate::recogniser::MembershipOracle;
use crate::words::{Alphabet, Word};

/// One of the three builtin equation families, instantiated with letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationFamily {
    /// Swapping two same-colour positions carrying (a, b).
    Swap(char, char),
    /// Trading a duplicated letter: (a,a,b) against (a,b,b) on one colour.
    Dup(char, char),
    /// Appending a letter already present on the colour of the new position.
    Append(char),
}

impl EquationFamily {
    fn name(&self) -> &'static str {
        match self {
            EquationFamily::Swap(..) => "swap",
            EquationFamily::Dup(..) => "dup",
            EquationFamily::Append(..) => "append",
        }
    }
}

/// A reproducible violation: the base word, the positions, and the colour the
/// positions share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub family: EquationFamily,
    pub word: Word,
    pub positions: Vec<usize>,
    pub colour: usize,
}

/// Outcome of a bounded check. A pass is relative to the length bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckReport {
    Pass,
    Fail(Violation),
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(self, CheckReport::Pass)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckReport::Pass => write!(f, "PASS"),
            CheckReport::Fail(v) => {
                write!(f, "FAIL fam={}", v.family.name())?;
                match v.family {
                    EquationFamily::Swap(a, b) | EquationFamily::Dup(a, b) => {
                        write!(f, " a={a} b={b}")?
                    }
                    EquationFamily::Append(a) => write!(f, " a={a}")?,
                }
                write!(f, " w={}", v.word)?;
                write!(f, " j=")?;
                for (i, j) in v.positions.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{j}")?;
                }
                Ok(())
            }
        }
    }
}

/// Memoized oracle answers for every word up to a length bound, indexed by a
/// packed (length, digits) key so substitution lookups are O(1).
struct WordTable<'a> {
    letters: Vec<char>,
    base: usize,
    offsets: Vec<usize>,
    pows: Vec<usize>,
    states: Vec<u8>,
    oracle: &'a dyn MembershipOracle,
}

impl<'a> WordTable<'a> {
    /// Covers all words of length ≤ `max_len` + 1 (the append family probes one
    /// letter beyond the scanned words).
    fn new(alphabet: &Alphabet, oracle: &'a dyn MembershipOracle, max_len: usize) -> WordTable<'a> {
        let base = alphabet.len();
        let mut offsets = Vec::with_capacity(max_len + 3);
        let mut total = 0usize;
        let mut layer = 1usize;
        for _ in 0..=max_len + 1 {
            offsets.push(total);
            total = total.checked_add(layer).expect("word table too large");
            layer = layer.checked_mul(base).expect("word table too large");
        }
        offsets.push(total);
        let pows = (0..=max_len + 1)
            .scan(1usize, |acc, _| {
                let v = *acc;
                *acc *= base;
                Some(v)
            })
            .collect();
        WordTable {
            letters: alphabet.letters().to_vec(),
            base,
            offsets,
            pows,
            states: vec![0; total],
            oracle,
        }
    }

    fn member(&mut self, idx: usize, digits: &[u8]) -> bool {
        match self.states[idx] {
            1 => false,
            2 => true,
            _ => {
                let word =
                    Word::from_letters(digits.iter().map(|&d| self.letters[d as usize]).collect());
                let hit = self.oracle.accepts(&word);
                self.states[idx] = if hit { 2 } else { 1 };
                hit
            }
        }
    }

    fn digit(&self, c: char) -> u8 {
        self.letters
            .iter()
            .position(|&l| l == c)
            .expect("equation letters must come from the alphabet") as u8
    }

    fn decode(&self, digits: &[u8]) -> Word {
        Word::from_letters(digits.iter().map(|&d| self.letters[d as usize]).collect())
    }
}

fn run_family(
    table: &mut WordTable<'_>,
    colours: &[usize],
    family: EquationFamily,
    max_len: usize,
) -> Option<Violation> {
    match family {
        EquationFamily::Swap(a, b) if a == b => return None,
        EquationFamily::Dup(a, b) if a == b => return None,
        _ => {}
    }
    let base = table.base;
    let offsets = table.offsets.clone();
    let pows = table.pows.clone();
    // Words of each length in lexicographic order; `idx` tracks the packed key.
    for len in 0..=max_len {
        let mut digits = vec![0u8; len];
        let mut idx = offsets[len];
        'words: loop {
            let hit = match family {
                EquationFamily::Swap(a, b) => {
                    let (da, db) = (table.digit(a), table.digit(b));
                    check_swap(table, colours, &mut digits, idx, da, db, &pows)
                }
                EquationFamily::Dup(a, b) => {
                    let (da, db) = (table.digit(a), table.digit(b));
                    check_dup(table, colours, &mut digits, idx, da, db, &pows)
                }
                EquationFamily::Append(a) => {
                    let da = table.digit(a);
                    check_append(table, colours, &mut digits, idx, da, &offsets, base)
                }
            };
            if let Some(positions) = hit {
                let colour = colours[positions[0]];
                return Some(Violation { family, word: table.decode(&digits), positions, colour });
            }
            // Lexicographic successor within this length.
            let mut slot = len;
            loop {
                if slot == 0 {
                    break 'words;
                }
                slot -= 1;
                digits[slot] += 1;
                if (digits[slot] as usize) < base {
                    break;
                }
                digits[slot] = 0;
            }
            idx += 1;
        }
    }
    None
}

fn check_swap(
    table: &mut WordTable<'_>,
    colours: &[usize],
    digits: &mut [u8],
    idx: usize,
    da: u8,
    db: u8,
    pows: &[usize],
) -> Option<Vec<usize>> {
    let n = digits.len();
    for j1 in 0..n {
        if digits[j1] != da {
            continue;
        }
        for j2 in 0..n {
            if j2 == j1 || digits[j2] != db || colours[j2] != colours[j1] {
                continue;
            }
            let m1 = table.member(idx, digits);
            let delta = (db as isize - da as isize) * pows[n - 1 - j1] as isize
                + (da as isize - db as isize) * pows[n - 1 - j2] as isize;
            let idx2 = (idx as isize + delta) as usize;
            digits[j1] = db;
            digits[j2] = da;
            let m2 = table.member(idx2, digits);
            digits[j1] = da;
            digits[j2] = db;
            if m1 != m2 {
                return Some(vec![j1, j2]);
            }
        }
    }
    None
}

fn check_dup(
    table: &mut WordTable<'_>,
    colours: &[usize],
    digits: &mut [u8],
    idx: usize,
    da: u8,
    db: u8,
    pows: &[usize],
) -> Option<Vec<usize>> {
    let n = digits.len();
    for j1 in 0..n {
        if digits[j1] != da {
            continue;
        }
        for j2 in 0..n {
            if j2 == j1 || digits[j2] != da || colours[j2] != colours[j1] {
                continue;
            }
            for j3 in 0..n {
                if j3 == j1 || j3 == j2 || digits[j3] != db || colours[j3] != colours[j1] {
                    continue;
                }
                let m1 = table.member(idx, digits);
                // (a,a,b) versus (a,b,b): only the letter at j2 flips.
                let delta = (db as isize - da as isize) * pows[n - 1 - j2] as isize;
                let idx2 = (idx as isize + delta) as usize;
                digits[j2] = db;
                let m2 = table.member(idx2, digits);
                digits[j2] = da;
                if m1 != m2 {
                    return Some(vec![j1, j2, j3]);
                }
            }
        }
    }
    None
}

fn check_append(
    table: &mut WordTable<'_>,
    colours: &[usize],
    digits: &mut Vec<u8>,
    idx: usize,
    da: u8,
    offsets: &[usize],
    base: usize,
) -> Option<Vec<usize>> {
    let n = digits.len();
    let end_colour = colours[n];
    for j in 0..n {
        if digits[j] != da || colours[j] != end_colour {
            continue;
        }
        let m1 = table.member(idx, digits);
        let idx2 = offsets[n + 1] + (idx - offsets[n]) * base + da as usize;
        digits.push(da);
        let m2 = table.member(idx2, digits);
        digits.pop();
        if m1 != m2 {
            return Some(vec![j]);
        }
        // One matching position settles the whole word: the substituted pair
        // does not depend on j.
        break;
    }
    None
}

/// Exhaustively checks one family for all words with |w| ≤ `max_len`.
pub fn check_family(
    oracle: &dyn MembershipOracle,
    alphabet: &Alphabet,
    q: &Colouring,
    family: EquationFamily,
    max_len: usize,
) -> CheckReport {
    let mut table = WordTable::new(alphabet, oracle, max_len);
    let colours: Vec<usize> = (0..=max_len).map(|n| q.colour_of(n)).collect();
    match run_family(&mut table, &colours, family, max_len) {
        None => CheckReport::Pass,
        Some(v) => CheckReport::Fail(v),
    }
}

/// Checks all three families for every choice of letters, in a fixed order:
/// swap over letter pairs, then dup, then append. Returns the first violation.
pub fn check_all(
    oracle: &dyn MembershipOracle,
    alphabet: &Alphabet,
    q: &Colouring,
    max_len: usize,
) -> CheckReport {
    let mut table = WordTable::new(alphabet, oracle, max_len);
    let colours: Vec<usize> = (0..=max_len).map(|n| q.colour_of(n)).collect();
    let letters = alphabet.letters().to_vec();
    for &a in &letters {
        for &b in &letters {
            if let Some(v) = run_family(&mut table, &colours, EquationFamily::Swap(a, b), max_len)
            {
                return CheckReport::Fail(v);
            }
        }
    }
    for &a in &letters {
        for &b in &letters {
            if let Some(v) = run_family(&mut table, &colours, EquationFamily::Dup(a, b), max_len) {
                return CheckReport::Fail(v);
            }
        }
    }
    for &a in &letters {
        if let Some(v) = run_family(&mut table, &colours, EquationFamily::Append(a), max_len) {
            return CheckReport::Fail(v);
        }
    }
    CheckReport::Pass
}

/// Scans candidate colourings and returns the first one passing [`check_all`].
/// A pass is evidence relative to `max_len`, not a proof.
pub fn search_colouring(
    oracle: &dyn MembershipOracle,
    alphabet: &Alphabet,
    candidates: &[Colouring],
    max_len: usize,
) -> Option<(Colouring, CheckReport)> {
    for q in candidates {
        let report = check_all(oracle, alphabet, q, max_len);
        if report.passed() {
            return Some((q.clone(), report));
        }
    }
    None
}

/// How a user equation projects a marked structure (w, j̄) to a natural number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// The m-th marked position.
    Coord(usize),
    /// The word length.
    Length,
}

/// One side of a user equation: a map from a marked word (w, j̄) to a word.
pub type MarkedWordMap = Box<dyn Fn(&Word, &[usize]) -> Word>;

/// A user-supplied equation over marked words: two maps `u`, `v` and a list of
/// projections. The check requires `u(w,j̄) ∈ L ⟺ v(w,j̄) ∈ L` whenever all
/// projection values share a colour. The three builtin families are instances;
/// this is the extension point for other shapes.
pub struct UserEquation {
    pub name: String,
    pub arity: usize,
    pub projections: Vec<Projection>,
    pub left: MarkedWordMap,
    pub right: MarkedWordMap,
}

/// A violation of a user equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserViolation {
    pub name: String,
    pub word: Word,
    pub positions: Vec<usize>,
}

/// Exhaustively checks a user equation for all words |w| ≤ `max_len` and all
/// position tuples whose projection values share a colour.
pub fn check_user_equation(
    oracle: &dyn MembershipOracle,
    alphabet: &Alphabet,
    q: &Colouring,
    eq: &UserEquation,
    max_len: usize,
) -> Option<UserViolation> {
    for w in alphabet.words_up_to(max_len) {
        let n = w.len();
        if n == 0 && eq.arity > 0 {
            continue;
        }
        let mut tuple = vec![0usize; eq.arity];
        let mut done = false;
        while !done {
            let projected: Vec<usize> = eq
                .projections
                .iter()
                .map(|p| match p {
                    Projection::Coord(m) => tuple[*m],
                    Projection::Length => n,
                })
                .collect();
            let same_colour = projected
                .windows(2)
                .all(|pair| q.colour_of(pair[0]) == q.colour_of(pair[1]));
            if same_colour {
                let u = (eq.left)(&w, &tuple);
                let v = (eq.right)(&w, &tuple);
                if oracle.accepts(&u) != oracle.accepts(&v) {
                    return Some(UserViolation {
                        name: eq.name.clone(),
                        word: w.clone(),
                        positions: tuple.clone(),
                    });
                }
            }
            let mut slot = eq.arity;
            loop {
                if slot == 0 {
                    done = true;
                    break;
                }
                slot -= 1;
                tuple[slot] += 1;
                if tuple[slot] < n {
                    break;
                }
                tuple[slot] = 0;
            }
        }
    }
    None
}

/// Replays a violation against the oracle: substitutes both sides and confirms
/// the biconditional really fails.
pub fn confirm_violation(oracle: &dyn MembershipOracle, q: &Colouring, v: &Violation) -> bool {
    let same_colour =
        v.positions.iter().all(|&j| j < v.word.len() && q.colour_of(j) == v.colour);
    if !same_colour {
        return false;
    }
    match v.family {
        EquationFamily::Swap(a, b) => {
            let w1 = substitute(&v.word, &v.positions, &[a, b]).expect("witness positions");
            let w2 = substitute(&v.word, &v.positions, &[b, a]).expect("witness positions");
            oracle.accepts(&w1) != oracle.accepts(&w2)
        }
        EquationFamily::Dup(a, b) => {
            let w1 = substitute(&v.word, &v.positions, &[a, a, b]).expect("witness positions");
            let w2 = substitute(&v.word, &v.positions, &[a, b, b]).expect("witness positions");
            oracle.accepts(&w1) != oracle.accepts(&w2)
        }
        EquationFamily::Append(a) => {
            if q.colour_of(v.word.len()) != v.colour {
                return false;
            }
            let w1 = substitute(&v.word, &v.positions, &[a]).expect("witness positions");
            let mut w2 = w1.clone();
            w2.push(a);
            oracle.accepts(&w1) != oracle.accepts(&w2)
        }
    }
}

/// Errors for [`substitute`].
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum SubstituteError {
    #[error("position {0} is out of range")]
    OutOfRange(usize),
    #[error("position {0} is repeated")]
    Repeated(usize),
    #[error("{positions} positions but {letters} letters")]
    ArityMismatch { positions: usize, letters: usize },
}

/// The map w(j̄ → ā): replaces the letter at each position coordinatewise.
/// Positions must be pairwise distinct and in range.
pub fn substitute(
    w: &Word,
    positions: &[usize],
    letters: &[char],
) -> Result<Word, SubstituteError> {
    if positions.len() != letters.len() {
        return Err(SubstituteError::ArityMismatch {
            positions: positions.len(),
            letters: letters.len(),
        });
    }
    for (i, &j) in positions.iter().enumerate() {
        if j >= w.len() {
            return Err(SubstituteError::OutOfRange(j));
        }
        if positions[..i].contains(&j) {
            return Err(SubstituteError::Repeated(j));
        }
    }
    let mut out = w.clone();
    for (&j, &a) in positions.iter().zip(letters) {
        out.set(j, a);
    }
    Ok(out)
}
