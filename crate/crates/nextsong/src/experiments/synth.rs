use serde::{Deserialize, Serialize};

use crate::corpus::{Playlist, PlaylistCorpus, Song, SongId};
use crate::error::{Error, Result};
use crate::rng::{index_below, shuffle_in_place, stream_id, stream_rng, tags, unit_f64};

/// The two synthetic corpus families: `Markov` playlists follow a hidden
/// successor structure (strong order signal), `Bag` playlists draw songs
/// by popularity only (no order signal).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthKind {
    Markov,
    Bag,
}

impl std::str::FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markov" => Ok(SynthKind::Markov),
            "bag" => Ok(SynthKind::Bag),
            other => Err(Error::Domain(format!(
                "unknown synthetic corpus kind {other:?}, expected markov or bag"
            ))),
        }
    }
}

/// Probability that a markov playlist steps to the current song's designated
/// successor; the remainder of the mass is uniform over the vocabulary.
pub const MARKOV_SUCCESSOR_P: f64 = 0.9;

/// Generate a seeded synthetic corpus of `n_playlists` playlists over up to
/// `n_songs` songs with lengths uniform in `[min_len, max_len]`.
///
/// Markov: a seeded successor permutation (no fixed points) is drawn once;
/// each playlist starts uniformly and steps to the successor with
/// probability 0.9, otherwise to a uniform song. Bag: each playlist samples
/// songs without replacement, weighted by the harmonic popularity 1/(s+1).
///
/// Artists are assigned round-robin (`song s` belongs to `artist s mod
/// n_artists`). Songs never drawn are dropped, so the vocabulary can come
/// out slightly under `n_songs`. Deterministic given the seed.
pub fn generate_synthetic_corpus(
    kind: SynthKind,
    n_songs: usize,
    n_playlists: usize,
    min_len: usize,
    max_len: usize,
    n_artists: usize,
    seed: u64,
) -> Result<PlaylistCorpus> {
    if !(5 <= min_len && min_len <= max_len && max_len <= n_songs) {
        return Err(Error::Generation(format!(
            "need 5 <= min_len <= max_len <= n_songs, got {min_len}..{max_len} over {n_songs}"
        )));
    }
    if n_artists < 3 {
        return Err(Error::Generation(format!(
            "need at least 3 artists, got {n_artists}"
        )));
    }
    if n_playlists == 0 {
        return Err(Error::Generation("need at least 1 playlist".into()));
    }

    let structure = match kind {
        SynthKind::Markov => Some(successor_permutation(n_songs, seed)),
        SynthKind::Bag => None,
    };
    let weights: Vec<f64> = (0..n_songs).map(|s| 1.0 / (s + 1) as f64).collect();

    let playlists: Vec<Playlist> = (0..n_playlists)
        .map(|i| {
            let mut rng = stream_rng(seed, stream_id(tags::SYNTH_PLAYLIST, i as u64));
            let length = min_len + index_below(&mut rng, max_len - min_len + 1);
            let songs = match &structure {
                Some(successor) => {
                    let mut song = index_below(&mut rng, n_songs) as u32;
                    let mut sequence = vec![SongId(song)];
                    for _ in 1..length {
                        song = if unit_f64(&mut rng) < MARKOV_SUCCESSOR_P {
                            successor[song as usize]
                        } else {
                            index_below(&mut rng, n_songs) as u32
                        };
                        sequence.push(SongId(song));
                    }
                    sequence
                }
                None => weighted_without_replacement(&mut rng, &weights, length),
            };
            Playlist {
                id: format!("synth{i}"),
                songs,
            }
        })
        .collect();

    let kind_label = match kind {
        SynthKind::Markov => "markov",
        SynthKind::Bag => "bag",
    };
    let table = PlaylistCorpus::new(
        (0..n_songs)
            .map(|s| Song {
                id: SongId(s as u32),
                artist: format!("artist {}", s % n_artists),
                title: format!("song {s}"),
            })
            .collect(),
        playlists,
        vec![],
    )?;
    let provenance = vec![format!(
        "synthetic {kind_label} corpus: {n_playlists} playlists, {n_songs} songs requested, lengths {min_len}..{max_len}, {n_artists} artists, seed {seed}"
    )];
    // re-densify to drop never-drawn songs
    let (corpus, _) = crate::corpus::densify(&table, table.playlists().to_vec(), provenance)?;
    Ok(corpus)
}

/// Fixed-point-free permutation used as the markov successor structure.
pub(crate) fn successor_permutation(n_songs: usize, seed: u64) -> Vec<u32> {
    let mut successor: Vec<u32> = (0..n_songs as u32).collect();
    let mut rng = stream_rng(seed, stream_id(tags::SYNTH_STRUCTURE, 0));
    shuffle_in_place(&mut rng, &mut successor);
    for s in 0..n_songs {
        if successor[s] == s as u32 {
            let t = (s + 1) % n_songs;
            successor.swap(s, t);
        }
    }
    successor
}

fn weighted_without_replacement(
    rng: &mut rand_chacha::ChaCha8Rng,
    weights: &[f64],
    length: usize,
) -> Vec<SongId> {
    let mut remaining: Vec<f64> = weights.to_vec();
    let mut total: f64 = remaining.iter().sum();
    let mut songs = Vec::with_capacity(length);
    for _ in 0..length {
        let mut u = unit_f64(rng) * total;
        let mut chosen = None;
        for (s, &w) in remaining.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            if u < w {
                chosen = Some(s);
                break;
            }
            u -= w;
        }
        // float roundoff can walk past the last positive weight
        let s = chosen.unwrap_or_else(|| {
            remaining
                .iter()
                .rposition(|&w| w > 0.0)
                .expect("length <= weights.len() leaves a positive weight")
        });
        songs.push(SongId(s as u32));
        total -= remaining[s];
        remaining[s] = 0.0;
    }
    songs
}
