//! Small growth vectors of Goursat distributions, computed exactly.
//!
//! A geometric class of Goursat germs of corank `r` is encoded by an
//! admissible word of length `r` over `{G, S, T}`: it starts with `GG` and
//! never contains the factor `GT`. Its derived vector (the multiplicities of
//! the dimensions `2..=r+1` in the small growth vector) can be obtained in two
//! independent ways:
//!
//! * [`recurrence`] runs the two-step G/S/T recurrence letter by letter;
//! * [`closed_form`] evaluates explicit formulas built from the A-sequences
//!   of the class parameters.
//!
//! [`analysis`] sweeps whole lengths and cross-checks the two, and [`cli`]
//! wraps everything behind the `goursat` command line tool.

pub mod analysis;
pub mod cli;
pub mod closed_form;
pub mod fibonacci;
pub mod recurrence;
pub mod word;

pub use closed_form::{derived_closed, ASequence, ValueTable};
pub use recurrence::{derive_recurrence, DerivedVector, SmallGrowthVector};
pub use word::{ClassCode, ClassParams, Letter, ParamProfile};
