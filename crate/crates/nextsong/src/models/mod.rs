//! The model contract shared by every playlist continuer, plus the two
//! context-limited baselines: popularity (ignores context entirely) and
//! song-based collaborative filtering (sees only the current song).

mod item_cf;
mod popularity;

pub use item_cf::{cf_fit, cosine_similarity, ItemCfModel};
pub use popularity::{popularity_fit, PopularityModel};

use crate::corpus::SongId;
use crate::error::{Error, Result};

/// Scores over the full train vocabulary: entry `s` says how strongly the
/// model expects song `s` next, higher = more likely. Always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    values: Vec<f64>,
}

impl ScoreVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite score {} for song {i}",
                values[i]
            )));
        }
        Ok(ScoreVector { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A fitted playlist-continuation model. Implementations are immutable and
/// `score` is a pure read, so one model may serve many evaluation threads.
pub trait PlaylistModel: Send + Sync {
    /// Size of the train vocabulary; every [`ScoreVector`] has this length.
    fn vocab_size(&self) -> usize;

    /// Score every candidate as the continuation of `context` (the playlist
    /// so far, in play order, non-empty, over the train vocabulary).
    fn score(&self, context: &[SongId]) -> Result<ScoreVector>;

    /// Stable model-kind label used in reports and artifacts.
    fn kind(&self) -> &'static str;
}

pub(crate) fn check_context(context: &[SongId], vocab_size: usize) -> Result<()> {
    if context.is_empty() {
        return Err(Error::Domain("score requires a non-empty context".into()));
    }
    if let Some(bad) = context.iter().find(|s| s.index() >= vocab_size) {
        return Err(Error::Domain(format!(
            "context references song {bad} outside the train vocabulary of {vocab_size}"
        )));
    }
    Ok(())
}
