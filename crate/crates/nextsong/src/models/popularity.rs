use serde::{Deserialize, Serialize};

use super::{check_context, PlaylistModel, ScoreVector};
use crate::corpus::{PlaylistCorpus, SongId};
use crate::error::{Error, Result};

/// The no-context baseline: every song is scored by the number of training
/// playlists containing it, whatever the context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopularityModel {
    playlist_count: Vec<u32>,
}

/// Count, for each song, the training playlists containing it. A song
/// repeated within one playlist counts that playlist once.
pub fn popularity_fit(train: &PlaylistCorpus) -> Result<PopularityModel> {
    if train.playlists().is_empty() {
        return Err(Error::Domain(
            "cannot fit a popularity model on a corpus without playlists".into(),
        ));
    }
    Ok(PopularityModel {
        playlist_count: train.playlist_counts(),
    })
}

impl PopularityModel {
    pub fn playlist_count(&self) -> &[u32] {
        &self.playlist_count
    }
}

impl PlaylistModel for PopularityModel {
    fn vocab_size(&self) -> usize {
        self.playlist_count.len()
    }

    fn score(&self, context: &[SongId]) -> Result<ScoreVector> {
        check_context(context, self.vocab_size())?;
        ScoreVector::new(self.playlist_count.iter().map(|&c| c as f64).collect())
    }

    fn kind(&self) -> &'static str {
        "popularity"
    }
}
