//! Finite colourings of ℕ: partitions into ultimately periodic cells.

use std::fmt;

use thiserror::Error;

use crate::upset::{lcm, UpSet, UpSetParseError};

/// A finite partition of ℕ into nonempty [`UpSet`] cells, in a fixed order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Colouring {
    cells: Vec<UpSet>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColouringError {
    #[error("a colouring needs at least one cell")]
    NoCells,
    #[error("cell {index} is empty")]
    EmptyCell { index: usize },
    #[error("cells {first} and {second} overlap at {witness}")]
    Overlap { first: usize, second: usize, witness: usize },
    #[error("cells do not cover ℕ: {witness} is uncoloured")]
    Gap { witness: usize },
    #[error("colouring literal `{0}` is not of the form `col[...]`")]
    BadLiteral(String),
    #[error(transparent)]
    Set(#[from] UpSetParseError),
}

/// Common refinement of two colourings together with the cell surjections.
///
/// `pairs[j] = (i1, i2)` says refined cell `j` is included in cell `i1` of the
/// first input and cell `i2` of the second.
pub struct Refinement {
    pub colouring: Colouring,
    pub pairs: Vec<(usize, usize)>,
}

impl Colouring {
    /// Validates that `cells` are nonempty, pairwise disjoint and cover ℕ.
    pub fn new(cells: Vec<UpSet>) -> Result<Colouring, ColouringError> {
        if cells.is_empty() {
            return Err(ColouringError::NoCells);
        }
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(ColouringError::EmptyCell { index: i });
            }
        }
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                let both = cells[i].intersection(&cells[j]);
                if let Some(witness) = both.min_element() {
                    return Err(ColouringError::Overlap { first: i, second: j, witness });
                }
            }
        }
        let mut union = UpSet::empty();
        for cell in &cells {
            union = union.union(cell);
        }
        if let Some(witness) = union.complement().min_element() {
            return Err(ColouringError::Gap { witness });
        }
        Ok(Colouring { cells })
    }

    /// The one-cell colouring (ℕ).
    pub fn trivial() -> Colouring {
        Colouring { cells: vec![UpSet::all()] }
    }

    pub fn cells(&self) -> &[UpSet] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// A colouring always has at least one cell.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the unique cell containing `n`.
    pub fn colour_of(&self, n: usize) -> usize {
        self.cells
            .iter()
            .position(|c| c.contains(n))
            .expect("colouring cells cover ℕ")
    }

    /// Common refinement: the nonempty intersections `Q_i ∩ Q'_j` in (i, j) order,
    /// plus the surjections back onto both inputs' cells.
    pub fn refine(&self, other: &Colouring) -> Refinement {
        let mut cells = Vec::new();
        let mut pairs = Vec::new();
        for (i, a) in self.cells.iter().enumerate() {
            for (j, b) in other.cells.iter().enumerate() {
                let cell = a.intersection(b);
                if !cell.is_empty() {
                    cells.push(cell);
                    pairs.push((i, j));
                }
            }
        }
        let colouring = Colouring { cells };
        Refinement { colouring, pairs }
    }

    /// Refines by the two-cell colouring (Q, Qᶜ); a degenerate `q` leaves the
    /// colouring unchanged.
    pub fn refine_by(&self, q: &UpSet) -> Colouring {
        if q.is_empty() || q.is_all() {
            return self.clone();
        }
        let split = Colouring { cells: vec![q.clone(), q.complement()] };
        self.refine(&split).colouring
    }

    /// Max threshold over the cells' canonical representations.
    pub fn threshold(&self) -> usize {
        self.cells.iter().map(UpSet::threshold).max().unwrap_or(0)
    }

    /// Lcm of the cells' canonical periods.
    pub fn period_lcm(&self) -> usize {
        self.cells.iter().map(UpSet::period).fold(1, lcm)
    }

    /// The block-prefix threshold/residue colouring: one cell [0, t) (when t ≥ 1)
    /// plus the m residue classes of {n ≥ t}.
    pub fn threshold_residue(t: usize, m: usize) -> Colouring {
        assert!(m >= 1);
        let mut cells = Vec::new();
        if t >= 1 {
            cells.push(UpSet::initial_segment(t));
        }
        for r in 0..m {
            cells.push(UpSet::residue_from(t, r, m));
        }
        Colouring { cells }
    }

    /// The singleton-prefix threshold/residue colouring: cells {0}, …, {t−1}
    /// plus the m residue classes of {n ≥ t}.
    pub fn singleton_threshold_residue(t: usize, m: usize) -> Colouring {
        assert!(m >= 1);
        let mut cells = Vec::new();
        for i in 0..t {
            cells.push(UpSet::finite([i]));
        }
        for r in 0..m {
            cells.push(UpSet::residue_from(t, r, m));
        }
        Colouring { cells }
    }

    /// Block-prefix candidates for thresholds ≤ `max_threshold` and moduli ≤
    /// `max_modulus`, in (threshold, modulus) lexicographic order.
    pub fn candidates(max_threshold: usize, max_modulus: usize) -> Vec<Colouring> {
        let mut out = Vec::new();
        for t in 0..=max_threshold {
            for m in 1..=max_modulus {
                out.push(Colouring::threshold_residue(t, m));
            }
        }
        out
    }

    /// Singleton-prefix analogue of [`Colouring::candidates`].
    pub fn singleton_candidates(max_threshold: usize, max_modulus: usize) -> Vec<Colouring> {
        let mut out = Vec::new();
        for t in 0..=max_threshold {
            for m in 1..=max_modulus {
                out.push(Colouring::singleton_threshold_residue(t, m));
            }
        }
        out
    }

    /// Parses the literal syntax `col[up:/10, up:/01]` and validates the partition.
    pub fn parse(text: &str) -> Result<Colouring, ColouringError> {
        let trimmed = text.trim();
        let body = trimmed
            .strip_prefix("col[")
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| ColouringError::BadLiteral(text.to_string()))?;
        let mut cells = Vec::new();
        for part in body.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(ColouringError::BadLiteral(text.to_string()));
            }
            cells.push(UpSet::parse(part)?);
        }
        Colouring::new(cells)
    }
}

impl fmt::Display for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "col[")?;
        for (i, cell) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{cell}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
