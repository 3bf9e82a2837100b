use serde::{Deserialize, Serialize};

use super::{check_context, PlaylistModel, ScoreVector};
use crate::corpus::{PlaylistCorpus, SongId};
use crate::error::{Error, Result};

/// Cosine between two binary membership vectors: co-occurrence count over
/// the geometric mean of the set sizes. Always in `[0, 1]`; a zero vector
/// has no direction, so it is an error.
pub fn cosine_similarity(p_i: &[bool], p_j: &[bool]) -> Result<f64> {
    if p_i.len() != p_j.len() || p_i.is_empty() {
        return Err(Error::Domain(format!(
            "cosine needs equally sized non-empty vectors, got {} and {}",
            p_i.len(),
            p_j.len()
        )));
    }
    let c_i = p_i.iter().filter(|&&b| b).count() as u64;
    let c_j = p_j.iter().filter(|&&b| b).count() as u64;
    if c_i == 0 || c_j == 0 {
        return Err(Error::Domain(
            "cosine similarity of a zero vector is undefined".into(),
        ));
    }
    let both = p_i
        .iter()
        .zip(p_j)
        .filter(|&(&a, &b)| a && b)
        .count() as u64;
    Ok(both as f64 / ((c_i * c_j) as f64).sqrt())
}

/// Song-based collaborative filtering: each song is a binary vector over
/// training playlists, candidates are scored by cosine to the *current*
/// (final context) song only.
///
/// Stored as playlist-membership sets rather than the dense V×V cosine
/// matrix; similarity rows are reconstructed on demand and equal the dense
/// pairwise cosines entry for entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemCfModel {
    /// Distinct playlist indices per song, ascending.
    song_playlists: Vec<Vec<u32>>,
    /// Distinct song ids per playlist, ascending.
    playlist_songs: Vec<Vec<u32>>,
}

/// Build the membership sets for every song and playlist of the train
/// corpus. Deterministic; repeats within a playlist collapse.
pub fn cf_fit(train: &PlaylistCorpus) -> Result<ItemCfModel> {
    if train.playlists().is_empty() {
        return Err(Error::Domain(
            "cannot fit a CF model on a corpus without playlists".into(),
        ));
    }
    let mut song_playlists: Vec<Vec<u32>> = vec![Vec::new(); train.vocab_size()];
    let mut playlist_songs: Vec<Vec<u32>> = Vec::with_capacity(train.playlists().len());
    for (p, playlist) in train.playlists().iter().enumerate() {
        let mut songs: Vec<u32> = playlist.songs.iter().map(|s| s.0).collect();
        songs.sort_unstable();
        songs.dedup();
        for &s in &songs {
            song_playlists[s as usize].push(p as u32);
        }
        playlist_songs.push(songs);
    }
    Ok(ItemCfModel {
        song_playlists,
        playlist_songs,
    })
}

impl ItemCfModel {
    /// Cosine between songs `i` and `j`'s playlist-membership vectors.
    pub fn similarity(&self, i: SongId, j: SongId) -> f64 {
        let (a, b) = (&self.song_playlists[i.index()], &self.song_playlists[j.index()]);
        let mut both = 0u64;
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    both += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        normalized(both, a.len() as u64, b.len() as u64)
    }

    /// Row `s` of the pairwise cosine matrix.
    pub fn similarity_row(&self, s: SongId) -> Vec<f64> {
        let mut co = vec![0u64; self.song_playlists.len()];
        for &p in &self.song_playlists[s.index()] {
            for &t in &self.playlist_songs[p as usize] {
                co[t as usize] += 1;
            }
        }
        let c_s = self.song_playlists[s.index()].len() as u64;
        co.iter()
            .enumerate()
            .map(|(t, &both)| normalized(both, c_s, self.song_playlists[t].len() as u64))
            .collect()
    }
}

fn normalized(both: u64, c_i: u64, c_j: u64) -> f64 {
    if both == 0 {
        0.0
    } else {
        both as f64 / ((c_i * c_j) as f64).sqrt()
    }
}

impl PlaylistModel for ItemCfModel {
    fn vocab_size(&self) -> usize {
        self.song_playlists.len()
    }

    fn score(&self, context: &[SongId]) -> Result<ScoreVector> {
        check_context(context, self.vocab_size())?;
        let last = *context.last().expect("checked non-empty");
        ScoreVector::new(self.similarity_row(last))
    }

    fn kind(&self) -> &'static str {
        "item_cf"
    }
}
