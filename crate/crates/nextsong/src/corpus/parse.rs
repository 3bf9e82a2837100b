use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::canonical::canonicalize_song;
use super::{Playlist, PlaylistCorpus, Song, SongId};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct RawPlaylist {
    id: String,
    songs: Vec<RawSong>,
}

#[derive(Serialize, Deserialize)]
struct RawSong {
    artist: String,
    title: String,
}

/// Parse a raw playlist corpus from JSON-lines input: one playlist object
/// per line, `{"id": "...", "songs": [{"artist": "...", "title": "..."}]}`.
///
/// Songs are canonicalized and interned: equal canonical `(artist, title)`
/// pairs share one [`SongId`], ids assigned densely in first-appearance
/// order. Songs whose canonical form is empty are skipped (a count lands in
/// the corpus provenance); a playlist left with no usable songs is dropped.
/// A line that is not valid JSON of the expected shape, or a playlist with
/// an empty `songs` array, is a parse error carrying the 1-based line
/// number. Blank lines are ignored.
pub fn parse_corpus<R: BufRead>(input: R) -> Result<PlaylistCorpus> {
    let mut songs: Vec<Song> = Vec::new();
    let mut interned: HashMap<(String, String), SongId> = HashMap::new();
    let mut playlists: Vec<Playlist> = Vec::new();
    let mut skipped_songs = 0usize;
    let mut dropped_playlists = 0usize;

    for (lineno, line) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawPlaylist = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if raw.songs.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("playlist {:?} has an empty songs array", raw.id),
            });
        }
        let mut ids = Vec::with_capacity(raw.songs.len());
        for song in &raw.songs {
            match canonicalize_song(&song.artist, &song.title) {
                Ok(key) => {
                    let id = *interned.entry(key).or_insert_with_key(|key| {
                        let id = SongId(songs.len() as u32);
                        songs.push(Song {
                            id,
                            artist: key.0.clone(),
                            title: key.1.clone(),
                        });
                        id
                    });
                    ids.push(id);
                }
                Err(Error::RejectedSong { .. }) => skipped_songs += 1,
                Err(e) => return Err(e),
            }
        }
        if ids.is_empty() {
            dropped_playlists += 1;
            continue;
        }
        playlists.push(Playlist { id: raw.id, songs: ids });
    }

    let mut provenance = vec![format!(
        "ingested {} playlists over {} songs",
        playlists.len(),
        songs.len()
    )];
    if skipped_songs > 0 || dropped_playlists > 0 {
        provenance.push(format!(
            "skipped {skipped_songs} songs with empty canonical form, dropped {dropped_playlists} playlists left without songs"
        ));
    }
    PlaylistCorpus::new(songs, playlists, provenance)
}

/// Write a corpus back out in the JSON-lines format [`parse_corpus`] reads.
/// For a corpus whose ids are in first-appearance order (which every
/// operation in this crate produces, the inherited-table test side of a
/// split excepted) re-parsing the output reproduces the corpus exactly.
pub fn write_jsonl<W: Write>(corpus: &PlaylistCorpus, mut out: W) -> Result<()> {
    for playlist in corpus.playlists() {
        let raw = RawPlaylist {
            id: playlist.id.clone(),
            songs: playlist
                .songs
                .iter()
                .map(|&id| {
                    let song = corpus.song(id);
                    RawSong {
                        artist: song.artist.clone(),
                        title: song.title.clone(),
                    }
                })
                .collect(),
        };
        serde_json::to_writer(&mut out, &raw)
            .map_err(|e| Error::Artifact(format!("encoding playlist {:?}: {e}", raw.id)))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
