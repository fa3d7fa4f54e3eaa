//! Deterministic data-preparation core for a two-stage Spanish TTS system.
//!
//! The pipeline runs text normalization and grapheme-to-phoneme conversion
//! ([`frontend`]), log-mel feature extraction ([`dsp`]), CTC scoring and
//! monotonic duration extraction ([`align`]), frame upsampling with
//! positional embeddings ([`upsample`]) and the acoustic loss family
//! ([`losses`]). [`corpus`] wires them into a batch pipeline over a manifest.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod frontend;
pub mod dsp;
pub mod align;
pub mod upsample;
pub mod losses;
pub mod formats;
pub mod corpus;
