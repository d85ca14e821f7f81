//! Outer automorphism groups of one-relator groups with torsion on two generators.

pub mod autdetect;
pub mod classify;
pub mod error;
pub mod maps;
pub mod normalize;
pub mod oracle;
pub mod smallcancel;
pub mod words;

pub use autdetect::{is_relator_auto, AutVerdict};
pub use classify::{classify_out, ClassificationReport, OutClass, Witnesses};
pub use error::{Error, Result};
pub use maps::{compose, GenMap};
pub use normalize::{balance_relator, BalancedPresentation};
pub use words::{CyclicWord, Gen, Letter, Word};
