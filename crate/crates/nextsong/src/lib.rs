//! Offline benchmark suite for music playlist continuation: given the songs
//! a listener has queued so far, how well can a model rank the song that
//! actually comes next?
//!
//! The crate covers the full experimental loop:
//!
//! - [`corpus`] — parse playlists from JSONL, canonicalize song identities,
//!   filter to a well-supported vocabulary, and carve train/test splits that
//!   never leak unseen songs into the test side.
//! - [`models`] — ranking baselines: playlist-count popularity and
//!   song-to-song cosine collaborative filtering, behind the shared
//!   [`models::PlaylistModel`] trait.
//! - [`rnn`] — a single-layer gated recurrent network trained with sampled
//!   ranking losses, the one model here that can exploit song order.
//! - [`eval`] — teacher-forced evaluation that records the rank of every
//!   true next song, position-wise quartile summaries, recall@K, and CSV
//!   export.
//! - [`experiments`] — packaged studies (does context help? does order
//!   matter?), synthetic corpora with known structure, a seeded random
//!   reference model, and CSV/SVG report emission.
//! - [`store`] — versioned JSON artifacts for corpora, splits, and trained
//!   models, with vocabulary hashes so a model is never evaluated against
//!   data it does not understand.
//!
//! Everything that involves randomness takes an explicit `u64` seed and is
//! bit-for-bit reproducible: the same seeds produce byte-identical artifacts
//! and reports on every run ([`rng`] documents how streams are derived).
//!
//! The `examples/` directory walks each capability end to end; the
//! `nextsong` binary wires the same calls into a small pipeline-oriented
//! command line.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod experiments;
pub mod models;
pub mod rng;
pub mod rnn;
pub mod store;
