//! Executable bridges between classical and quantum logic.
//!
//! * [`language`]: formulas of `L(x)`, their grammar and printer.
//! * [`semantics`]: finite classical models, logical and physical preorders,
//!   certain truth and the concrete logic of verifiable formulas.
//! * [`order`]: finite ortho structures, lattice diagnostics and
//!   isomorphism up to equivalence.
//! * [`hilbert`]: projections on `C^n`, their lattice operations and the
//!   Born rule.
//! * [`pragmatics`]: assertive formulas, justification and the quantum
//!   pragmatic fragment.
//! * [`probability`]: mu-contextual probability, mean conditional and
//!   Q-probabilities, and Born-rule model synthesis.
//! * [`random`]: random models, formulas and constraint systems for testing.
//! * [`contextuality`]: observable constraint systems solved under the
//!   classical (global) and generalized (per-law) principles.

#![allow(clippy::needless_range_loop)]

pub mod contextuality;
pub mod hilbert;
pub mod language;
pub mod order;
pub mod pragmatics;
pub mod probability;
pub mod random;
pub mod semantics;
