//! Simulation and analysis toolkit for variable-read DNA storage.
//!
//! Messages are stored as index-based outer codewords (one payload per
//! molecule index). The decoder samples molecules one read at a time and
//! stops as soon as exactly one codeword stays consistent with what it has
//! observed. Sequencing errors are filled in by a pluggable adversary
//! selected by name from [`channel::AdversaryRegistry`].

pub mod analysis;
pub mod channel;
pub mod codebook;
pub mod decoder;
pub mod error;
pub mod harness;
pub mod params;
pub mod rng;
pub mod types;

pub use codebook::{Codebook, IndexSet};
pub use decoder::{Decoder, DecoderState, Step};
pub use error::{Error, Result};
pub use params::SimParams;
pub use rng::{derive_trial_rng, TrialRng};
pub use types::{Molecule, OuterCodeword, ReadRecord, Trace, Verdict};
