use std::collections::HashMap;

use super::{densify, playlist_counts_for, FilterConfig, Playlist, PlaylistCorpus};
use crate::error::{Error, Result};

/// Filter a corpus to the largest subset satisfying all four
/// [`FilterConfig`] rules simultaneously.
///
/// Each pass drops playlists violating the three playlist rules (distinct
/// artists, songs per artist, length) and then removes songs occurring in
/// fewer than `min_song_playlist_count` remaining playlists. Removing a
/// song can shorten a playlist below threshold and dropping a playlist can
/// push a song below threshold, so passes repeat until nothing changes.
/// The result is re-densified (ids reassigned in first-appearance order,
/// unused vocabulary dropped); song and playlist order is otherwise
/// preserved. An empty fixed point is an error.
pub fn filter_corpus(corpus: &PlaylistCorpus, config: &FilterConfig) -> Result<PlaylistCorpus> {
    config.validate()?;

    // canonical artists interned once; rules compare artist indices
    let mut artist_ids: HashMap<&str, u32> = HashMap::new();
    let artist_of: Vec<u32> = corpus
        .songs()
        .iter()
        .map(|song| {
            let next = artist_ids.len() as u32;
            *artist_ids.entry(song.artist.as_str()).or_insert(next)
        })
        .collect();

    let mut playlists: Vec<Playlist> = corpus.playlists().to_vec();
    loop {
        let mut changed = false;

        let before = playlists.len();
        playlists.retain(|p| playlist_passes(p, &artist_of, config));
        changed |= playlists.len() != before;

        let counts = playlist_counts_for(&playlists, corpus.vocab_size());
        for playlist in &mut playlists {
            let before = playlist.songs.len();
            playlist
                .songs
                .retain(|s| counts[s.index()] >= config.min_song_playlist_count as u32);
            changed |= playlist.songs.len() != before;
        }

        if !changed {
            break;
        }
    }

    if playlists.is_empty() {
        return Err(Error::EmptyFilterResult);
    }

    let provenance = {
        let mut lines = corpus.provenance().to_vec();
        lines.push(format!(
            "filtered with min_unique_artists={} max_songs_per_artist={} min_length={} min_song_playlist_count={}: {} of {} playlists kept",
            config.min_unique_artists,
            config.max_songs_per_artist,
            config.min_length,
            config.min_song_playlist_count,
            playlists.len(),
            corpus.playlists().len(),
        ));
        lines
    };
    let (filtered, _) = densify(corpus, playlists, provenance)?;
    debug_assert!(corpus_passes(&filtered, config));
    Ok(filtered)
}

fn playlist_passes(playlist: &Playlist, artist_of: &[u32], config: &FilterConfig) -> bool {
    if playlist.songs.len() < config.min_length {
        return false;
    }
    let mut per_artist: HashMap<u32, usize> = HashMap::new();
    for &song in &playlist.songs {
        *per_artist.entry(artist_of[song.index()]).or_insert(0) += 1;
    }
    per_artist.len() >= config.min_unique_artists
        && per_artist
            .values()
            .all(|&n| n <= config.max_songs_per_artist)
}

/// True when every rule holds and no orphan songs remain; the fixed-point
/// post-condition, used by tests.
pub(crate) fn corpus_passes(corpus: &PlaylistCorpus, config: &FilterConfig) -> bool {
    let mut artist_ids: HashMap<&str, u32> = HashMap::new();
    let artist_of: Vec<u32> = corpus
        .songs()
        .iter()
        .map(|song| {
            let next = artist_ids.len() as u32;
            *artist_ids.entry(song.artist.as_str()).or_insert(next)
        })
        .collect();
    corpus
        .playlists()
        .iter()
        .all(|p| playlist_passes(p, &artist_of, config))
        && corpus
            .playlist_counts()
            .iter()
            .all(|&c| c >= config.min_song_playlist_count as u32)
}
