//! A toolkit for the Boolean algebra of languages defined by Boolean combinations of
//! purely existential sentences over letter predicates and uniform numerical predicates.
//!
//! The pieces fit together as follows. [`UpSet`] is the computable carrier for subsets
//! of ℕ (ultimately periodic sets); a [`Colouring`] is a finite partition of ℕ into
//! such cells. A word's [`Profile`] records, per colour, the set of letters occurring
//! on that colour's positions. A [`Recogniser`] is a colouring together with a set of
//! accepted profiles and decides membership for every language in the algebra; it can
//! be compiled from a parsed [`Formula`], combined with Boolean operations, and
//! decided for language equivalence.
//!
//! On top of that sit the three equation families ([`equations`]) whose bounded-window
//! checks characterise the algebra, a constructive rewrite engine ([`rewrite`]) that
//! witnesses why profile-equivalent words cannot be separated, and finitely
//! represented generalized words ([`pseudofinite`]).
//!
//! ```
//! use wordlogic::formula::{parse_sentence, PredInterp, PredRegistry};
//! use wordlogic::recogniser::{compile, MembershipOracle, Recogniser};
//! use wordlogic::{Alphabet, UpSet, Word};
//!
//! let alphabet = Alphabet::parse("ab").unwrap();
//! let mut registry = PredRegistry::new();
//! registry.insert("EV", 1, PredInterp::Unary(UpSet::evens())).unwrap();
//!
//! // "some a on an even position", compiled to a two-colour recogniser.
//! let phi = parse_sentence("E x1 . a(x1) & EV(x1)", &alphabet, &registry).unwrap();
//! let compiled = compile(&phi, &alphabet, &registry).unwrap();
//! assert!(compiled.accepts(&Word::parse("ab", &alphabet).unwrap()));
//! assert!(!compiled.accepts(&Word::parse("ba", &alphabet).unwrap()));
//!
//! // The same language as a generator, decided equivalent.
//! let generator = Recogniser::from_generator(alphabet, 'a', &UpSet::evens());
//! assert!(compiled.equivalent(&generator));
//! ```

pub mod colouring;
pub mod equations;
pub mod formula;
pub mod pseudofinite;
pub mod recogniser;
pub mod rewrite;
pub mod sample;
pub mod upset;
pub mod window;
pub mod words;

pub use colouring::{Colouring, Refinement};
pub use equations::{CheckReport, EquationFamily, Violation};
pub use formula::{Formula, NormalForm, PredRegistry};
pub use pseudofinite::{ClosedAtom, ClosedExpr, GeneralizedWord};
pub use recogniser::{FnOracle, MembershipOracle, Recogniser};
pub use rewrite::{Direction, RewriteChain, RewriteStep};
pub use upset::UpSet;
pub use window::{TupleSpec, WindowColouring};
pub use words::{Alphabet, LetterSet, Profile, Word};
