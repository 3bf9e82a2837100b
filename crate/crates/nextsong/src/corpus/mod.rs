//! Playlist corpora: ingestion, canonicalization, filtering, splitting and
//! within-playlist shuffling.
//!
//! A [`PlaylistCorpus`] is the universe models are trained and evaluated on:
//! a dense song vocabulary plus ordered playlists over it. All operations in
//! this module are pure functions of their inputs and seeds; corpora are
//! immutable once built.

mod canonical;
mod filter;
mod parse;
mod shuffle;
mod split;

pub use canonical::canonicalize_song;
pub use filter::filter_corpus;
pub use parse::{parse_corpus, write_jsonl};
pub use shuffle::shuffle_playlists;
pub use split::{holdout_validation, split_corpus};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index into a corpus vocabulary: every integer in `[0, V)` names
/// exactly one song, assigned in first-appearance order during ingestion.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct SongId(pub u32);

impl SongId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for SongId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A vocabulary entry. `artist` and `title` are canonical (see
/// [`canonicalize_song`]) and the `(artist, title)` pair is unique within a
/// corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Song {
    pub id: SongId,
    pub artist: String,
    pub title: String,
}

/// An ordered song sequence. Order is meaningful and preserved by every
/// operation except explicit shuffling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Playlist {
    pub id: String,
    pub songs: Vec<SongId>,
}

impl Playlist {
    pub fn len(&self) -> usize {
        self.songs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.songs.is_empty()
    }
}

/// The four playlist-corpus filter thresholds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// A kept playlist covers at least this many distinct artists.
    pub min_unique_artists: usize,
    /// A kept playlist has at most this many songs per artist.
    pub max_songs_per_artist: usize,
    /// A kept playlist has at least this many songs.
    pub min_length: usize,
    /// A kept song occurs in at least this many playlists.
    pub min_song_playlist_count: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_unique_artists: 3,
            max_songs_per_artist: 2,
            min_length: 5,
            min_song_playlist_count: 10,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_unique_artists < 1
            || self.max_songs_per_artist < 1
            || self.min_length < 1
            || self.min_song_playlist_count < 1
        {
            return Err(Error::Domain(
                "filter thresholds must all be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Aggregate corpus counts, reported alongside experiment results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub playlists: usize,
    pub songs: usize,
    pub artists: usize,
}

/// A dense song vocabulary plus the ordered playlists over it.
///
/// Invariants, enforced at construction: the song table is indexed by
/// `SongId` (entry `i` has id `i`), canonical strings are non-empty, and
/// every id referenced by a playlist exists in the table. Freedom from
/// orphan songs is a post-condition of [`filter_corpus`], not of the type:
/// the test side of a [`SplitCorpus`] deliberately shares the train-side
/// table, so not every table entry occurs in its playlists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaylistCorpus {
    songs: Vec<Song>,
    playlists: Vec<Playlist>,
    provenance: Vec<String>,
}

impl PlaylistCorpus {
    pub fn new(
        songs: Vec<Song>,
        playlists: Vec<Playlist>,
        provenance: Vec<String>,
    ) -> Result<Self> {
        let corpus = PlaylistCorpus {
            songs,
            playlists,
            provenance,
        };
        corpus.validate()?;
        Ok(corpus)
    }

    /// Re-check the construction invariants, e.g. after decoding an artifact.
    pub fn validate(&self) -> Result<()> {
        for (i, song) in self.songs.iter().enumerate() {
            if song.id.index() != i {
                return Err(Error::Domain(format!(
                    "song table entry {i} carries id {}",
                    song.id
                )));
            }
            if song.artist.is_empty() || song.title.is_empty() {
                return Err(Error::Domain(format!(
                    "song {i} has an empty canonical artist or title"
                )));
            }
        }
        let v = self.songs.len();
        for playlist in &self.playlists {
            if playlist.songs.is_empty() {
                return Err(Error::Domain(format!("playlist {:?} is empty", playlist.id)));
            }
            if let Some(bad) = playlist.songs.iter().find(|s| s.index() >= v) {
                return Err(Error::Domain(format!(
                    "playlist {:?} references unknown song id {bad}",
                    playlist.id
                )));
            }
        }
        Ok(())
    }

    pub fn vocab_size(&self) -> usize {
        self.songs.len()
    }

    pub fn songs(&self) -> &[Song] {
        &self.songs
    }

    pub fn song(&self, id: SongId) -> &Song {
        &self.songs[id.index()]
    }

    pub fn playlists(&self) -> &[Playlist] {
        &self.playlists
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Number of distinct playlists containing each song.
    pub fn playlist_counts(&self) -> Vec<u32> {
        playlist_counts_for(&self.playlists, self.songs.len())
    }

    /// SHA-256 over the canonical song table, one `artist\ttitle\n` line
    /// per id in order, hex-encoded. Identifies a vocabulary so artifacts
    /// fitted on one corpus refuse to run against another.
    pub fn vocabulary_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        for song in &self.songs {
            hasher.update(song.artist.as_bytes());
            hasher.update(b"\t");
            hasher.update(song.title.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write;
            write!(hex, "{byte:02x}").expect("writing to a string");
        }
        hex
    }

    pub fn stats(&self) -> CorpusStats {
        let mut artists: std::collections::HashSet<&str> = std::collections::HashSet::new();
        for song in &self.songs {
            artists.insert(song.artist.as_str());
        }
        CorpusStats {
            playlists: self.playlists.len(),
            songs: self.songs.len(),
            artists: artists.len(),
        }
    }
}

pub(crate) fn playlist_counts_for(playlists: &[Playlist], vocab_size: usize) -> Vec<u32> {
    let mut counts = vec![0u32; vocab_size];
    let mut seen = vec![u32::MAX; vocab_size];
    for (i, playlist) in playlists.iter().enumerate() {
        for &song in &playlist.songs {
            // count each playlist once per song
            if seen[song.index()] != i as u32 {
                seen[song.index()] = i as u32;
                counts[song.index()] += 1;
            }
        }
    }
    counts
}

/// Rebuild a dense corpus from a subset of playlists over `source`'s
/// vocabulary. Ids are reassigned in first-appearance order over the
/// playlists as given; unused songs are dropped. Returns the corpus and the
/// old-id-to-new-id map.
pub(crate) fn densify(
    source: &PlaylistCorpus,
    playlists: Vec<Playlist>,
    provenance: Vec<String>,
) -> Result<(PlaylistCorpus, Vec<Option<SongId>>)> {
    let mut remap: Vec<Option<SongId>> = vec![None; source.vocab_size()];
    let mut songs: Vec<Song> = Vec::new();
    let mut remapped = Vec::with_capacity(playlists.len());
    for playlist in playlists {
        let ids = playlist
            .songs
            .iter()
            .map(|&old| {
                *remap[old.index()].get_or_insert_with(|| {
                    let id = SongId(songs.len() as u32);
                    let song = source.song(old);
                    songs.push(Song {
                        id,
                        artist: song.artist.clone(),
                        title: song.title.clone(),
                    });
                    id
                })
            })
            .collect();
        remapped.push(Playlist {
            id: playlist.id,
            songs: ids,
        });
    }
    let corpus = PlaylistCorpus::new(songs, remapped, provenance)?;
    Ok((corpus, remap))
}

/// A train/test partition with vocabulary closure: whole playlists are
/// assigned to one side, and every song occurring in a test playlist also
/// occurs in a train playlist. The test side shares the train side's song
/// table, so ids are comparable across the two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCorpus {
    pub train: PlaylistCorpus,
    pub test: PlaylistCorpus,
    pub seed: u64,
    pub train_fraction: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_rejects_dangling_ids() {
        let songs = vec![Song {
            id: SongId(0),
            artist: "a".into(),
            title: "t".into(),
        }];
        let playlists = vec![Playlist {
            id: "p".into(),
            songs: vec![SongId(0), SongId(1)],
        }];
        assert!(matches!(
            PlaylistCorpus::new(songs, playlists, vec![]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn corpus_rejects_misnumbered_table() {
        let songs = vec![Song {
            id: SongId(3),
            artist: "a".into(),
            title: "t".into(),
        }];
        assert!(PlaylistCorpus::new(songs, vec![], vec![]).is_err());
    }

    #[test]
    fn playlist_counts_dedup_within_playlist() {
        let songs = vec![
            Song {
                id: SongId(0),
                artist: "a".into(),
                title: "x".into(),
            },
            Song {
                id: SongId(1),
                artist: "b".into(),
                title: "y".into(),
            },
        ];
        let playlists = vec![Playlist {
            id: "p".into(),
            songs: vec![SongId(0), SongId(0), SongId(1)],
        }];
        let corpus = PlaylistCorpus::new(songs, playlists, vec![]).unwrap();
        assert_eq!(corpus.playlist_counts(), vec![1, 1]);
    }
}
