//! Ultimately periodic subsets of ℕ.
//!
//! An [`UpSet`] stores a finite prefix of membership bits followed by a repeating
//! cycle:
//!
//! ```text
//!     n ∈ S  ⟺  if n < t { prefix[n] } else { cycle[(n - t) mod p] }
//! ```
//!
//! where `t = prefix.len()` and `p = cycle.len() ≥ 1`. Every value is kept in
//! canonical form (primitive cycle, minimal prefix), so structural
//! equality coincides with set equality. The class is closed under all Boolean
//! operations and supports the remainder predicates (finiteness of differences and
//! infiniteness of intersections) exactly, which is what the rest of the crate
//! builds on.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use thiserror::Error;

/// An ultimately periodic subset of ℕ, always in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet {
    prefix: Vec<bool>,
    cycle: Vec<bool>,
}

/// Errors for the `up:<prefix>/<cycle>` literal syntax.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum UpSetParseError {
    #[error("set literal `{0}` does not start with `up:`")]
    MissingTag(String),
    #[error("set literal `{0}` has no `/` between prefix and cycle")]
    MissingSeparator(String),
    #[error("set literal needs at least one cycle bit")]
    EmptyCycle,
    #[error("invalid bit `{0}` in set literal (expected `0` or `1`)")]
    BadBit(char),
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl UpSet {
    /// Builds a set from raw bits and canonicalizes it.
    ///
    /// Panics if `cycle` is empty; a cycle of `[false]` denotes a finite set.
    pub fn new(prefix: Vec<bool>, cycle: Vec<bool>) -> UpSet {
        assert!(!cycle.is_empty(), "UpSet cycle must contain at least one bit");
        Self::canonical(prefix, cycle)
    }

    fn canonical(prefix: Vec<bool>, cycle: Vec<bool>) -> UpSet {
        let mut prefix = prefix;
        let mut cycle = cycle;
        // Shrink the cycle to its primitive root.
        let p = cycle.len();
        for d in 1..=p {
            if p % d == 0 && (0..p).all(|i| cycle[i] == cycle[i % d]) {
                cycle.truncate(d);
                break;
            }
        }
        // Absorb prefix bits that agree with the cycle. Dropping the last prefix
        // bit realigns the cycle by one, hence the right rotation.
        while let Some(&last) = prefix.last() {
            if last == *cycle.last().unwrap() {
                prefix.pop();
                let b = cycle.pop().unwrap();
                cycle.insert(0, b);
            } else {
                break;
            }
        }
        UpSet { prefix, cycle }
    }

    /// The empty set.
    pub fn empty() -> UpSet {
        UpSet { prefix: Vec::new(), cycle: vec![false] }
    }

    /// All of ℕ.
    pub fn all() -> UpSet {
        UpSet { prefix: Vec::new(), cycle: vec![true] }
    }

    /// The even numbers (`up:/10`).
    pub fn evens() -> UpSet {
        UpSet::new(Vec::new(), vec![true, false])
    }

    /// The odd numbers (`up:/01`).
    pub fn odds() -> UpSet {
        UpSet::new(Vec::new(), vec![false, true])
    }

    /// The initial segment {0, …, n−1}.
    pub fn initial_segment(n: usize) -> UpSet {
        UpSet::new(vec![true; n], vec![false])
    }

    /// The residue class {m : m ≡ r (mod modulus)}.
    pub fn residue(r: usize, modulus: usize) -> UpSet {
        assert!(modulus >= 1 && r < modulus);
        let mut cycle = vec![false; modulus];
        cycle[r] = true;
        UpSet::new(Vec::new(), cycle)
    }

    /// The shifted residue class {n ≥ from : n ≡ r (mod modulus)}.
    pub fn residue_from(from: usize, r: usize, modulus: usize) -> UpSet {
        assert!(modulus >= 1 && r < modulus);
        let cycle = (0..modulus).map(|i| (from + i) % modulus == r).collect();
        UpSet::new(vec![false; from], cycle)
    }

    /// A finite set given by its elements.
    pub fn finite<I: IntoIterator<Item = usize>>(elems: I) -> UpSet {
        let elems: Vec<usize> = elems.into_iter().collect();
        match elems.iter().max() {
            None => UpSet::empty(),
            Some(&m) => {
                let mut prefix = vec![false; m + 1];
                for e in elems {
                    prefix[e] = true;
                }
                UpSet::new(prefix, vec![false])
            }
        }
    }

    /// Membership test.
    pub fn contains(&self, n: usize) -> bool {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Length of the canonical prefix.
    pub fn threshold(&self) -> usize {
        self.prefix.len()
    }

    /// Length of the canonical (primitive) cycle.
    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    fn combine(&self, other: &UpSet, op: impl Fn(bool, bool) -> bool) -> UpSet {
        let t = self.prefix.len().max(other.prefix.len());
        let p = lcm(self.cycle.len(), other.cycle.len());
        let prefix = (0..t).map(|n| op(self.contains(n), other.contains(n))).collect();
        let cycle = (t..t + p).map(|n| op(self.contains(n), other.contains(n))).collect();
        UpSet::canonical(prefix, cycle)
    }

    pub fn union(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a != b)
    }

    pub fn complement(&self) -> UpSet {
        let prefix = self.prefix.iter().map(|b| !b).collect();
        let cycle = self.cycle.iter().map(|b| !b).collect();
        UpSet::canonical(prefix, cycle)
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty() && self.cycle == [false]
    }

    pub fn is_all(&self) -> bool {
        self.prefix.is_empty() && self.cycle == [true]
    }

    /// A canonical set is finite exactly when its cycle is all zeros.
    pub fn is_finite(&self) -> bool {
        self.cycle.iter().all(|&b| !b)
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    /// `self ∖ other` is finite.
    pub fn almost_included(&self, other: &UpSet) -> bool {
        self.difference(other).is_finite()
    }

    /// The symmetric difference `self Δ other` is finite.
    pub fn almost_equal(&self, other: &UpSet) -> bool {
        self.symmetric_difference(other).is_finite()
    }

    /// `self ∩ other` is infinite.
    pub fn intersection_infinite(&self, other: &UpSet) -> bool {
        self.intersection(other).is_infinite()
    }

    /// A downset of ℕ is ∅, an initial segment {0,…,n−1}, or ℕ itself.
    pub fn is_downset(&self) -> bool {
        if self.is_all() || self.is_empty() {
            return true;
        }
        self.cycle == [false] && self.prefix.iter().all(|&b| b)
    }

    /// Smallest element, if any.
    pub fn min_element(&self) -> Option<usize> {
        (0..self.prefix.len() + self.cycle.len()).find(|&n| self.contains(n))
    }

    /// Number of elements below `n`.
    pub fn count_below(&self, n: usize) -> usize {
        let t = self.prefix.len();
        let p = self.cycle.len();
        let in_prefix = self.prefix.iter().take(n).filter(|&&b| b).count();
        if n <= t {
            return in_prefix;
        }
        let span = n - t;
        let ones_per_cycle = self.cycle.iter().filter(|&&b| b).count();
        let full = span / p * ones_per_cycle;
        let partial = (0..span % p).filter(|&i| self.cycle[i]).count();
        in_prefix + full + partial
    }

    /// Elements below `n`, ascending.
    pub fn members_below(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..n).filter(move |&m| self.contains(m))
    }

    /// Parses the bit-exact literal syntax `up:<prefix-bits>/<cycle-bits>`,
    /// e.g. `up:/10` for the evens or `up:1110/0` for {0,1,2}.
    pub fn parse(text: &str) -> Result<UpSet, UpSetParseError> {
        let body = text
            .strip_prefix("up:")
            .ok_or_else(|| UpSetParseError::MissingTag(text.to_string()))?;
        let (prefix, cycle) = body
            .split_once('/')
            .ok_or_else(|| UpSetParseError::MissingSeparator(text.to_string()))?;
        let bits = |s: &str| -> Result<Vec<bool>, UpSetParseError> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(UpSetParseError::BadBit(other)),
                })
                .collect()
        };
        let prefix = bits(prefix)?;
        let cycle = bits(cycle)?;
        if cycle.is_empty() {
            return Err(UpSetParseError::EmptyCycle);
        }
        Ok(UpSet::new(prefix, cycle))
    }
}

impl fmt::Display for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "up:")?;
        for &b in &self.prefix {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        write!(f, "/")?;
        for &b in &self.cycle {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl BitOr for &UpSet {
    type Output = UpSet;
    fn bitor(self, rhs: &UpSet) -> UpSet {
        self.union(rhs)
    }
}

impl BitAnd for &UpSet {
    type Output = UpSet;
    fn bitand(self, rhs: &UpSet) -> UpSet {
        self.intersection(rhs)
    }
}

impl Sub for &UpSet {
    type Output = UpSet;
    fn sub(self, rhs: &UpSet) -> UpSet {
        self.difference(rhs)
    }
}

impl Not for &UpSet {
    type Output = UpSet;
    fn not(self) -> UpSet {
        self.complement()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn up(text: &str) -> UpSet {
        UpSet::parse(text).unwrap()
    }

    #[test]
    fn member_reads_prefix_then_cycle() {
        let evens = up("up:/10");
        assert!(evens.contains(4));
        assert!(!evens.contains(3));
        let seg = up("up:1110/0");
        assert!(seg.contains(2));
        assert!(!seg.contains(3));
    }

    #[test]
    fn canonical_form_is_minimal_and_unique() {
        // {0,1,2}: the trailing prefix 0 is absorbed into the cycle.
        assert_eq!(up("up:1110/0"), up("up:111/0"));
        assert_eq!(up("up:1110/0").to_string(), "up:111/0");
        // Non-primitive cycle collapses.
        assert_eq!(up("up:/1010"), up("up:/10"));
        // Prefix that merely restates the cycle disappears.
        assert_eq!(up("up:10/10"), up("up:/10"));
        assert_eq!(up("up:01/10").to_string(), "up:01/10");
    }

    #[test]
    fn boolean_ops_match_examples() {
        let evens = UpSet::evens();
        assert_eq!(evens.complement(), UpSet::odds());
        let mult4 = up("up:/1000");
        assert_eq!(evens.intersection(&mult4), mult4);
        assert_eq!(UpSet::empty().union(&evens), evens);
    }

    #[test]
    fn remainder_predicates() {
        let evens = UpSet::evens();
        let odds = UpSet::odds();
        let mult4 = up("up:/1000");
        assert!(evens.intersection_infinite(&mult4));
        assert!(!evens.intersection_infinite(&odds));
        let evens_and_one = evens.union(&UpSet::finite([1]));
        assert!(evens.almost_equal(&evens_and_one));
        assert!(!odds.almost_included(&evens));
        assert!(UpSet::finite([3, 5]).almost_included(&evens));
    }

    #[test]
    fn downsets() {
        assert!(up("up:1110/0").is_downset());
        assert!(UpSet::empty().is_downset());
        assert!(UpSet::all().is_downset());
        assert!(!UpSet::evens().is_downset());
        assert!(!up("up:0110/0").is_downset());
    }

    #[test]
    fn counting() {
        let evens = UpSet::evens();
        assert_eq!(evens.count_below(7), 4);
        assert_eq!(evens.min_element(), Some(0));
        assert_eq!(UpSet::odds().min_element(), Some(1));
        assert_eq!(UpSet::empty().min_element(), None);
        assert_eq!(UpSet::finite([2, 5]).count_below(6), 2);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(UpSet::parse("col[]"), Err(UpSetParseError::MissingTag("col[]".into())));
        assert_eq!(UpSet::parse("up:10"), Err(UpSetParseError::MissingSeparator("up:10".into())));
        assert_eq!(UpSet::parse("up:10/"), Err(UpSetParseError::EmptyCycle));
        assert_eq!(UpSet::parse("up:1/2"), Err(UpSetParseError::BadBit('2')));
    }

    fn arb_upset() -> impl Strategy<Value = UpSet> {
        (proptest::collection::vec(any::<bool>(), 0..6), proptest::collection::vec(any::<bool>(), 1..7))
            .prop_map(|(p, c)| UpSet::new(p, c))
    }

    proptest! {
        #[test]
        fn canonicalization_preserves_membership(p in proptest::collection::vec(any::<bool>(), 0..8),
                                                 c in proptest::collection::vec(any::<bool>(), 1..8)) {
            let t = p.len();
            let per = c.len();
            let raw = |n: usize| if n < t { p[n] } else { c[(n - t) % per] };
            let set = UpSet::new(p.clone(), c.clone());
            for n in 0..t + 2 * per {
                prop_assert_eq!(set.contains(n), raw(n));
            }
        }

        #[test]
        fn ops_are_pointwise(s1 in arb_upset(), s2 in arb_upset()) {
            let bound = s1.threshold().max(s2.threshold()) + 2 * lcm(s1.period(), s2.period());
            let u = s1.union(&s2);
            let i = s1.intersection(&s2);
            let d = s1.difference(&s2);
            let c = s1.complement();
            for n in 0..bound {
                prop_assert_eq!(u.contains(n), s1.contains(n) || s2.contains(n));
                prop_assert_eq!(i.contains(n), s1.contains(n) && s2.contains(n));
                prop_assert_eq!(d.contains(n), s1.contains(n) && !s2.contains(n));
                prop_assert_eq!(c.contains(n), !s1.contains(n));
            }
        }

        #[test]
        fn finiteness_matches_brute_force(s in arb_upset()) {
            // Any member at or beyond the threshold recurs forever.
            let window = s.threshold() + s.period();
            let has_tail_member = (s.threshold()..window).any(|n| s.contains(n));
            prop_assert_eq!(s.is_finite(), !has_tail_member);
        }

        #[test]
        fn display_round_trips(s in arb_upset()) {
            prop_assert_eq!(UpSet::parse(&s.to_string()).unwrap(), s);
        }
    }
}
