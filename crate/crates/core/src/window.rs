//! Decidable subsets of ℕ^k and finite-window colourings.
//!
//! A [`TupleSpec`] describes a subset of ℕ^k pointwise: explicit tuple lists,
//! products of [`UpSet`]s, the builtin comparators (diagonal, strict-less,
//! successor) and Boolean combinations of those. The same algebra serves both
//! the cells of a [`WindowColouring`] and the uniform k-ary predicates of the
//! formula registry.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::upset::UpSet;

/// A pointwise-decidable subset of ℕ^k.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TupleSpec {
    /// The empty set.
    Empty,
    /// All of ℕ^k.
    Full,
    /// An explicit finite set of tuples.
    Tuples(BTreeSet<Vec<usize>>),
    /// A product of unary sets, one per coordinate.
    Product(Vec<UpSet>),
    /// All coordinates equal.
    Diagonal,
    /// Coordinates strictly increasing.
    StrictLess,
    /// Each coordinate is the predecessor's successor.
    Successor,
    /// `Reindex(coords, s)` holds at `t` iff `s` holds at `(t[coords[0]], …)`.
    Reindex(Vec<usize>, Box<TupleSpec>),
    Not(Box<TupleSpec>),
    And(Box<TupleSpec>, Box<TupleSpec>),
    Or(Box<TupleSpec>, Box<TupleSpec>),
}

impl TupleSpec {
    pub fn contains(&self, t: &[usize]) -> bool {
        match self {
            TupleSpec::Empty => false,
            TupleSpec::Full => true,
            TupleSpec::Tuples(set) => set.contains(t),
            TupleSpec::Product(qs) => {
                debug_assert_eq!(qs.len(), t.len());
                qs.iter().zip(t).all(|(q, &n)| q.contains(n))
            }
            TupleSpec::Diagonal => t.windows(2).all(|w| w[0] == w[1]),
            TupleSpec::StrictLess => t.windows(2).all(|w| w[0] < w[1]),
            TupleSpec::Successor => t.windows(2).all(|w| w[1] == w[0] + 1),
            TupleSpec::Reindex(coords, inner) => {
                let picked: Vec<usize> = coords.iter().map(|&c| t[c]).collect();
                inner.contains(&picked)
            }
            TupleSpec::Not(s) => !s.contains(t),
            TupleSpec::And(a, b) => a.contains(t) && b.contains(t),
            TupleSpec::Or(a, b) => a.contains(t) || b.contains(t),
        }
    }

    /// Reduces an arity-1 spec to the [`UpSet`] it denotes. Returns `None` when
    /// the spec is not well formed at arity 1 (e.g. a product of width ≠ 1).
    pub fn to_upset(&self) -> Option<UpSet> {
        match self {
            TupleSpec::Empty => Some(UpSet::empty()),
            TupleSpec::Full => Some(UpSet::all()),
            TupleSpec::Tuples(set) => {
                if set.iter().any(|t| t.len() != 1) {
                    return None;
                }
                Some(UpSet::finite(set.iter().map(|t| t[0])))
            }
            TupleSpec::Product(qs) => match qs.as_slice() {
                [q] => Some(q.clone()),
                _ => None,
            },
            // At arity 1 the comparators are vacuously true.
            TupleSpec::Diagonal | TupleSpec::StrictLess | TupleSpec::Successor => {
                Some(UpSet::all())
            }
            TupleSpec::Reindex(coords, inner) => {
                if coords.as_slice() == [0] {
                    inner.to_upset()
                } else {
                    None
                }
            }
            TupleSpec::Not(s) => Some(s.to_upset()?.complement()),
            TupleSpec::And(a, b) => Some(a.to_upset()?.intersection(&b.to_upset()?)),
            TupleSpec::Or(a, b) => Some(a.to_upset()?.union(&b.to_upset()?)),
        }
    }

    pub fn negate(self) -> TupleSpec {
        TupleSpec::Not(Box::new(self))
    }

    pub fn and(self, other: TupleSpec) -> TupleSpec {
        TupleSpec::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: TupleSpec) -> TupleSpec {
        TupleSpec::Or(Box::new(self), Box::new(other))
    }
}

/// A colouring of the finite window {0, …, window−1}^dimension.
///
/// The named cells must be pairwise disjoint on the window; an optional default
/// cell picks up whatever they leave uncovered.
#[derive(Clone, Debug)]
pub struct WindowColouring {
    dimension: usize,
    window: usize,
    cells: Vec<(String, TupleSpec)>,
    default_cell: Option<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindowColouringError {
    #[error("cells `{first}` and `{second}` overlap at {witness:?}")]
    Overlap { first: String, second: String, witness: Vec<usize> },
    #[error("tuple {witness:?} is uncoloured and no default cell is declared")]
    Gap { witness: Vec<usize> },
}

/// All tuples of `{0, …, window−1}^dim` in lexicographic order.
pub fn window_tuples(window: usize, dim: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = window.checked_pow(dim as u32).expect("window too large");
    (0..total).map(move |mut idx| {
        let mut t = vec![0; dim];
        for slot in t.iter_mut().rev() {
            *slot = idx % window;
            idx /= window;
        }
        t
    })
}

impl WindowColouring {
    pub fn new(
        dimension: usize,
        window: usize,
        cells: Vec<(String, TupleSpec)>,
        default_cell: Option<String>,
    ) -> WindowColouring {
        assert!(dimension >= 1);
        WindowColouring { dimension, window, cells, default_cell }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Number of cells, counting the default when present.
    pub fn len(&self) -> usize {
        self.cells.len() + usize::from(self.default_cell.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_name(&self, index: usize) -> &str {
        if index < self.cells.len() {
            &self.cells[index].0
        } else {
            self.default_cell.as_deref().expect("cell index out of range")
        }
    }

    pub fn cell_spec(&self, index: usize) -> Option<&TupleSpec> {
        self.cells.get(index).map(|(_, s)| s)
    }

    /// Checks that the cells partition the window; reports the first offending
    /// tuple in lexicographic order.
    pub fn validate(&self) -> Result<(), WindowColouringError> {
        for t in window_tuples(self.window, self.dimension) {
            let mut hit = None;
            for (name, spec) in &self.cells {
                if spec.contains(&t) {
                    match hit {
                        None => hit = Some(name),
                        Some(first) => {
                            return Err(WindowColouringError::Overlap {
                                first: first.clone(),
                                second: name.clone(),
                                witness: t,
                            })
                        }
                    }
                }
            }
            if hit.is_none() && self.default_cell.is_none() {
                return Err(WindowColouringError::Gap { witness: t });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Index of the cell containing `t` (the default cell has index `cells.len()`).
    /// Assumes a validated colouring.
    pub fn colour_of(&self, t: &[usize]) -> usize {
        self.cells
            .iter()
            .position(|(_, spec)| spec.contains(t))
            .unwrap_or(self.cells.len())
    }
}

/// The three-cell colouring (Δ^<, Δ, Δ^>) of a k=2 window.
pub fn diagonal_split(window: usize) -> WindowColouring {
    WindowColouring::new(
        2,
        window,
        vec![
            ("below".into(), TupleSpec::StrictLess),
            ("diag".into(), TupleSpec::Diagonal),
            ("above".into(), TupleSpec::Reindex(vec![1, 0], Box::new(TupleSpec::StrictLess))),
        ],
        None,
    )
}

impl fmt::Display for TupleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleSpec::Empty => write!(f, "empty"),
            TupleSpec::Full => write!(f, "full"),
            TupleSpec::Tuples(set) => {
                write!(f, "tuples(")?;
                for (i, t) in set.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t:?}")?;
                }
                write!(f, ")")
            }
            TupleSpec::Product(qs) => {
                write!(f, "prod(")?;
                for (i, q) in qs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{q}")?;
                }
                write!(f, ")")
            }
            TupleSpec::Diagonal => write!(f, "diag"),
            TupleSpec::StrictLess => write!(f, "lt"),
            TupleSpec::Successor => write!(f, "succ"),
            TupleSpec::Reindex(coords, inner) => write!(f, "reindex({coords:?}, {inner})"),
            TupleSpec::Not(s) => write!(f, "!({s})"),
            TupleSpec::And(a, b) => write!(f, "({a} & {b})"),
            TupleSpec::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}
