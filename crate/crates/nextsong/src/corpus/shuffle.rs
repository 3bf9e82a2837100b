use super::PlaylistCorpus;
use crate::error::Result;
use crate::rng::{shuffle_in_place, stream_id, stream_rng, tags};

/// Shuffle the song order inside every playlist, independently and
/// reproducibly: playlist `i` is permuted by the generator for stream
/// `(SHUFFLE, i)` of `seed`, so a playlist's permutation does not depend on
/// the other playlists. The song table, playlist ids and playlist order are
/// untouched.
pub fn shuffle_playlists(corpus: &PlaylistCorpus, seed: u64) -> Result<PlaylistCorpus> {
    let playlists = corpus
        .playlists()
        .iter()
        .enumerate()
        .map(|(i, playlist)| {
            let mut shuffled = playlist.clone();
            let mut rng = stream_rng(seed, stream_id(tags::SHUFFLE, i as u64));
            shuffle_in_place(&mut rng, &mut shuffled.songs);
            shuffled
        })
        .collect();
    let mut provenance = corpus.provenance().to_vec();
    provenance.push(format!("shuffled songs within playlists (seed {seed})"));
    PlaylistCorpus::new(corpus.songs().to_vec(), playlists, provenance)
}
