//! Chiral extensions of chiral polytopes, built and checked through GPR
//! graphs (permutation representations of rotation groups).
//!
//! Modules, bottom up:
//! - [`perm`]: permutations and generator words
//! - [`group`]: Schreier–Sims stabilizer chains and group queries
//! - [`gpr`]: labelled graphs of permutation representations
//! - [`extension`]: the two-copy construction with a matching
//! - [`verify`]: relation and intersection checks, Schläfli type, chirality
//! - [`toroidal`]: the `{4,4}_(b,c)` family and its group structure

pub mod extension;
pub mod gpr;
pub mod group;
pub mod perm;
pub mod toroidal;
pub mod verify;

pub use extension::{extend, ExtendedGpr, ExtensionError};
pub use gpr::{GprError, GprGraph};
pub use group::{
    extends_to_automorphism, induced_block_action, orbit, regular_representation, GroupError,
    PermGroup,
};
pub use perm::{GeneratorWord, Letter, PermError, Permutation, Sign, WordError};
pub use toroidal::{analyze, StructureReport, ToroidalError, ToroidalParams};
pub use verify::{verify_extension, Chirality, VerificationReport};
