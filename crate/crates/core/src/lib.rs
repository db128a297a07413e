//! Hierarchical bracketing encodings for dependency trees.
//!
//! Trees are linearized into one bracket label per token. Three rope covers
//! drive the projective encodings (naive, 4-bit and the optimal proper
//! cover) and indexed brackets extend the optimal encoding to arbitrary
//! non-projective trees.

pub mod brackets;
pub mod conllu;
pub mod decoder;
pub mod deptree;
pub mod encoder;
pub mod error;
pub mod metrics;
pub mod pseudoproj;
pub mod ropecover;
pub mod testkit;

pub use brackets::{BracketSymbol, FourBitLabel, Label, Shape, Strength};
pub use decoder::{
    decode_indexed, decode_noncrossing, decode_robust, DecodeStats, Decoded, Diagnostic,
};
pub use deptree::{Arc, DepGraph, TreeViolation};
pub use encoder::{encode, encode_noncrossing, encode_nonprojective, LabelSequence, Scheme};
pub use error::{Error, Result};
pub use ropecover::RopeCover;
