//! Cayley posets of semigroup acts.
//!
//! A semigroup act `(X, S)` induces the relation `x <= y` iff `x·s = y` for
//! some `s` in `S`. When that relation is a partial order it is the Cayley
//! poset of the act. This crate builds such posets, decides which algebraic
//! class a finite poset belongs to (semigroup, monoid, full, full monoid) by
//! certificate-producing exhaustive search, implements certified
//! constructions (products, blowups, series/parallel compositions, weak
//! orders), and reconstructs finitely generated pointed abelian monoids from
//! truncations of their Cayley posets.
//!
//! Module map:
//!
//! - [`poset`]: finite posets, Hasse diagrams, isomorphism, census enumeration,
//!   series-parallel expressions, JSON and DOT formats.
//! - [`algebra`]: multiplication tables, acts, certificates, Cayley posets.
//! - [`recognizer`]: class membership search, certificate verification,
//!   classification into the inclusion diagram, censuses.
//! - [`constructions`]: certificate-carrying poset constructions.
//! - [`auto_equiv`]: presentations of abelian monoids, truncated Cayley
//!   posets, collision lattices, Smith normal form.

pub mod algebra;
pub mod auto_equiv;
pub mod constructions;
pub mod poset;
pub mod recognizer;

pub use algebra::{Certificate, Kind, OpTable, SemigroupAct};
pub use constructions::CertifiedPoset;
pub use poset::{Endomorphism, Poset, PosetError, SpExpr};
pub use recognizer::{classify, recognize, ClassLabelSet, ClassQuery, SearchConfig, Verdict};
