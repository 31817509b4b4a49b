//! Rewrite chains: constructive witnesses that profile-equivalent words cannot
//! be separated.
//!
//! Each step is justified by one of the equation families (swap, dup, append);
//! since the families are biconditionals, every step may also be applied
//! backwards. [`witness_chain`] builds a chain between any two words with the
//! same profile on a colouring; [`verify_chain`] replays it, checking every
//! step precondition and profile invariance. A verified chain proves that every
//! language satisfying the families for the colouring treats both endpoints the
//! same way.

use std::fmt;

use thiserror::Error;

use crate::colouring::Colouring;
use crate::recogniser::MembershipOracle;
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Forward => write!(f, "fwd"),
            Direction::Backward => write!(f, "bwd"),
        }
    }
}

/// One equation-justified rewrite.
///
/// * `Swap` needs `a` at `j1` and `b` at `j2` (same colour) and exchanges them.
/// * `Dup` forward needs `(a,a,b)` at three same-colour positions and turns it
///   into `(a,b,b)`; backward is the inverse.
/// * `Append` forward needs `a` at `j` with colour(j) = colour(|w|) and appends
///   `a`; backward removes such a final letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteStep {
    Swap { j1: usize, j2: usize, a: char, b: char },
    Dup { j1: usize, j2: usize, j3: usize, a: char, b: char, dir: Direction },
    Append { j: usize, a: char, dir: Direction },
}

impl RewriteStep {
    /// The inverse step; sound because the equation families are biconditional.
    pub fn inverse(&self) -> RewriteStep {
        match self.clone() {
            RewriteStep::Swap { j1, j2, a, b } => RewriteStep::Swap { j1, j2, a: b, b: a },
            RewriteStep::Dup { j1, j2, j3, a, b, dir } => {
                RewriteStep::Dup { j1, j2, j3, a, b, dir: dir.flip() }
            }
            RewriteStep::Append { j, a, dir } => RewriteStep::Append { j, a, dir: dir.flip() },
        }
    }

    /// Parses the one-line step syntax produced by `Display`.
    pub fn parse(text: &str) -> Result<RewriteStep, StepParseError> {
        let parts: Vec<&str> = text.split_whitespace().collect();
        let err = || StepParseError(text.to_string());
        let pos = |s: &str| s.parse::<usize>().map_err(|_| err());
        let letter = |s: &str| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(err()),
            }
        };
        let dir = |s: &str| match s {
            "fwd" => Ok(Direction::Forward),
            "bwd" => Ok(Direction::Backward),
            _ => Err(err()),
        };
        match parts.as_slice() {
            ["swap", j1, j2, a, b] => Ok(RewriteStep::Swap {
                j1: pos(j1)?,
                j2: pos(j2)?,
                a: letter(a)?,
                b: letter(b)?,
            }),
            ["dup", j1, j2, j3, a, b, d] => Ok(RewriteStep::Dup {
                j1: pos(j1)?,
                j2: pos(j2)?,
                j3: pos(j3)?,
                a: letter(a)?,
                b: letter(b)?,
                dir: dir(d)?,
            }),
            ["append", j, a, d] => {
                Ok(RewriteStep::Append { j: pos(j)?, a: letter(a)?, dir: dir(d)? })
            }
            _ => Err(err()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("`{0}` is not a rewrite step")]
pub struct StepParseError(pub String);

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteStep::Swap { j1, j2, a, b } => write!(f, "swap {j1} {j2} {a} {b}"),
            RewriteStep::Dup { j1, j2, j3, a, b, dir } => {
                write!(f, "dup {j1} {j2} {j3} {a} {b} {dir}")
            }
            RewriteStep::Append { j, a, dir } => write!(f, "append {j} {a} {dir}"),
        }
    }
}

/// Why a step does not apply to a word.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StepError {
    #[error("position {0} is out of range")]
    OutOfRange(usize),
    #[error("positions must be pairwise distinct")]
    NotDistinct,
    #[error("expected `{expected}` at position {position}, found `{found}`")]
    LetterMismatch { position: usize, expected: char, found: char },
    #[error("positions {j1} and {j2} have different colours")]
    ColourMismatch { j1: usize, j2: usize },
    #[error("position {j} and the word end {end} have different colours")]
    EndColourMismatch { j: usize, end: usize },
    #[error("cannot remove the final letter of the empty word")]
    EmptyWord,
}

fn expect_letter(w: &Word, j: usize, expected: char) -> Result<(), StepError> {
    match w.get(j) {
        None => Err(StepError::OutOfRange(j)),
        Some(found) if found != expected => {
            Err(StepError::LetterMismatch { position: j, expected, found })
        }
        Some(_) => Ok(()),
    }
}

fn expect_same_colour(q: &Colouring, j1: usize, j2: usize) -> Result<(), StepError> {
    if q.colour_of(j1) != q.colour_of(j2) {
        return Err(StepError::ColourMismatch { j1, j2 });
    }
    Ok(())
}

/// Applies one step, checking its preconditions against the colouring.
pub fn apply_step(w: &Word, step: &RewriteStep, q: &Colouring) -> Result<Word, StepError> {
    match *step {
        RewriteStep::Swap { j1, j2, a, b } => {
            if j1 == j2 {
                return Err(StepError::NotDistinct);
            }
            expect_letter(w, j1, a)?;
            expect_letter(w, j2, b)?;
            expect_same_colour(q, j1, j2)?;
            let mut out = w.clone();
            out.set(j1, b);
            out.set(j2, a);
            Ok(out)
        }
        RewriteStep::Dup { j1, j2, j3, a, b, dir } => {
            if j1 == j2 || j1 == j3 || j2 == j3 {
                return Err(StepError::NotDistinct);
            }
            let mid = match dir {
                Direction::Forward => a,
                Direction::Backward => b,
            };
            expect_letter(w, j1, a)?;
            expect_letter(w, j2, mid)?;
            expect_letter(w, j3, b)?;
            expect_same_colour(q, j1, j2)?;
            expect_same_colour(q, j1, j3)?;
            let mut out = w.clone();
            out.set(
                j2,
                match dir {
                    Direction::Forward => b,
                    Direction::Backward => a,
                },
            );
            Ok(out)
        }
        RewriteStep::Append { j, a, dir } => match dir {
            Direction::Forward => {
                expect_letter(w, j, a)?;
                if q.colour_of(j) != q.colour_of(w.len()) {
                    return Err(StepError::EndColourMismatch { j, end: w.len() });
                }
                let mut out = w.clone();
                out.push(a);
                Ok(out)
            }
            Direction::Backward => {
                if w.is_empty() {
                    return Err(StepError::EmptyWord);
                }
                let end = w.len() - 1;
                expect_letter(w, end, a)?;
                if j >= end {
                    return Err(StepError::OutOfRange(j));
                }
                expect_letter(w, j, a)?;
                if q.colour_of(j) != q.colour_of(end) {
                    return Err(StepError::EndColourMismatch { j, end });
                }
                Ok(Word::from_letters(w.letters()[..end].to_vec()))
            }
        },
    }
}

/// A verified transformation: replaying `steps` on `source` yields `target`,
/// with the profile on `colouring` invariant throughout.
#[derive(Clone, Debug)]
pub struct RewriteChain {
    pub source: Word,
    pub target: Word,
    pub colouring: Colouring,
    pub steps: Vec<RewriteStep>,
}

/// Profile mismatch between the two endpoints: no chain can exist.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("words have different profiles: colour {cell} differs")]
pub struct ProfileMismatch {
    pub cell: usize,
}

/// Builds a chain from `from` to `to`, which must have equal profiles on `q`.
///
/// Stage 1 appends letters of the longer word, each justified by a same-colour
/// position already carrying that letter (orientation is flipped and the steps
/// inverted when `from` is the longer word). Stage 2 fixes the per-colour
/// letter multisets with dup steps: the lexicographically smallest
/// over-represented letter loses an occurrence to the smallest
/// under-represented one. Stage 3 sorts each colour with swaps.
pub fn witness_chain(q: &Colouring, from: &Word, to: &Word) -> Result<RewriteChain, ProfileMismatch> {
    let pf = from.profile(q);
    let pt = to.profile(q);
    if pf != pt {
        let cell = pf
            .components()
            .iter()
            .zip(pt.components())
            .position(|(x, y)| x != y)
            .expect("unequal profiles differ somewhere");
        return Err(ProfileMismatch { cell });
    }
    if from.len() <= to.len() {
        let steps = chain_core(q, from, to);
        Ok(RewriteChain { source: from.clone(), target: to.clone(), colouring: q.clone(), steps })
    } else {
        let steps = chain_core(q, to, from);
        let inverted = steps.iter().rev().map(RewriteStep::inverse).collect();
        Ok(RewriteChain {
            source: from.clone(),
            target: to.clone(),
            colouring: q.clone(),
            steps: inverted,
        })
    }
}

/// Core construction for |from| ≤ |to| and equal profiles.
fn chain_core(q: &Colouring, from: &Word, to: &Word) -> Vec<RewriteStep> {
    let mut steps = Vec::new();
    let mut cur = from.clone();

    // Stage 1: grow to the target length. The letter to append occurs in the
    // target on the colour of the new position, hence (equal profiles, appends
    // preserve them) also somewhere in `cur` on that colour.
    for n in cur.len()..to.len() {
        let letter = to.get(n).expect("n < |to|");
        let colour = q.colour_of(n);
        let j = (0..cur.len())
            .find(|&j| cur.get(j) == Some(letter) && q.colour_of(j) == colour)
            .expect("profile equality provides a same-colour witness position");
        steps.push(RewriteStep::Append { j, a: letter, dir: Direction::Forward });
        cur.push(letter);
    }

    let n = cur.len();
    // Stage 2: per colour, adjust letter multiplicities with dup steps.
    for colour in 0..q.len() {
        let positions: Vec<usize> = (0..n).filter(|&p| q.colour_of(p) == colour).collect();
        loop {
            let count = |w: &Word, letter: char| {
                positions.iter().filter(|&&p| w.get(p) == Some(letter)).count()
            };
            let mut letters: Vec<char> =
                positions.iter().filter_map(|&p| cur.get(p)).collect();
            letters.sort_unstable();
            letters.dedup();
            let over = letters
                .iter()
                .copied()
                .find(|&c| count(&cur, c) > count(to, c));
            let Some(a) = over else { break };
            let b = letters
                .iter()
                .copied()
                .find(|&c| count(&cur, c) < count(to, c))
                .expect("counts over a colour sum to the same total");
            let a_positions: Vec<usize> =
                positions.iter().copied().filter(|&p| cur.get(p) == Some(a)).collect();
            let j3 = positions
                .iter()
                .copied()
                .find(|&p| cur.get(p) == Some(b))
                .expect("under-represented letters still occur (profiles agree)");
            let (j1, j2) = (a_positions[0], a_positions[1]);
            steps.push(RewriteStep::Dup { j1, j2, j3, a, b, dir: Direction::Forward });
            cur.set(j2, b);
        }
    }

    // Stage 3: per colour, realize the permutation by transpositions.
    for colour in 0..q.len() {
        let positions: Vec<usize> = (0..n).filter(|&p| q.colour_of(p) == colour).collect();
        for (idx, &p) in positions.iter().enumerate() {
            let want = to.get(p).expect("equal lengths");
            if cur.get(p) == Some(want) {
                continue;
            }
            let swap_with = positions[idx + 1..]
                .iter()
                .copied()
                .find(|&p2| cur.get(p2) == Some(want))
                .expect("equal multisets leave a matching later position");
            let a = cur.get(p).expect("p < n");
            steps.push(RewriteStep::Swap { j1: p, j2: swap_with, a, b: want });
            cur.set(p, want);
            cur.set(swap_with, a);
        }
    }

    debug_assert_eq!(&cur, to);
    steps
}

/// First defect found while replaying a chain.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainViolation {
    #[error("step {index} does not apply: {source}")]
    Step { index: usize, source: StepError },
    #[error("profile changed at step {index} (colour {cell})")]
    ProfileChanged { index: usize, cell: usize },
    #[error("replay ends at `{found}`, expected `{expected}`")]
    EndpointMismatch { expected: String, found: String },
    #[error("oracle membership changed at step {index}")]
    MembershipChanged { index: usize },
}

/// Replays the chain, checking step preconditions, profile invariance at every
/// intermediate word, and the endpoint. With an oracle, additionally checks
/// that membership is constant along the chain (which it must be whenever the
/// oracle passed `check_all` for this colouring).
pub fn verify_chain(
    chain: &RewriteChain,
    oracle: Option<&dyn MembershipOracle>,
) -> Result<(), ChainViolation> {
    let q = &chain.colouring;
    let base_profile = chain.source.profile(q);
    let base_member = oracle.map(|o| o.accepts(&chain.source));
    let mut cur = chain.source.clone();
    for (index, step) in chain.steps.iter().enumerate() {
        cur = apply_step(&cur, step, q).map_err(|source| ChainViolation::Step { index, source })?;
        let profile = cur.profile(q);
        if profile != base_profile {
            let cell = profile
                .components()
                .iter()
                .zip(base_profile.components())
                .position(|(x, y)| x != y)
                .expect("unequal profiles differ somewhere");
            return Err(ChainViolation::ProfileChanged { index, cell });
        }
        if let (Some(o), Some(expected)) = (oracle, base_member) {
            if o.accepts(&cur) != expected {
                return Err(ChainViolation::MembershipChanged { index });
            }
        }
    }
    if cur != chain.target {
        return Err(ChainViolation::EndpointMismatch {
            expected: chain.target.to_string(),
            found: cur.to_string(),
        });
    }
    Ok(())
}

/// Upper bound asserted on chain lengths: appends + per-colour multiset
/// distance + a quadratic budget of transpositions. Appended positions copy
/// the longer word, so only the common positions contribute to the distance.
pub fn chain_length_bound(q: &Colouring, from: &Word, to: &Word) -> usize {
    let longer = from.len().max(to.len());
    let shorter = from.len().min(to.len());
    let mut distance = 0;
    for colour in 0..q.len() {
        let mut deltas: std::collections::BTreeMap<char, isize> = std::collections::BTreeMap::new();
        for p in (0..shorter).filter(|&p| q.colour_of(p) == colour) {
            *deltas.entry(from.get(p).expect("p < len")).or_insert(0) += 1;
            *deltas.entry(to.get(p).expect("p < len")).or_insert(0) -= 1;
        }
        distance += deltas.values().map(|d| d.unsigned_abs()).sum::<usize>();
    }
    (longer - shorter) + distance + longer * longer
}
