use super::{densify, Playlist, PlaylistCorpus, SplitCorpus};
use crate::error::{Error, Result};
use crate::rng::{shuffle_in_place, stream_id, stream_rng, tags};

/// Randomly partition whole playlists into a train and a test corpus.
///
/// Playlist indices are permuted with the seeded generator; the first
/// `floor(N * train_fraction)` playlists (in permuted order) become the
/// train side, the rest the test side. The train corpus is re-densified
/// over its own songs. The test corpus *shares the train song table*: songs
/// never seen in training are deleted from test playlists, and test
/// playlists left with fewer than two songs are dropped, so every test
/// playlist still has at least one context/target step. Either side ending
/// up empty is an error.
pub fn split_corpus(
    corpus: &PlaylistCorpus,
    train_fraction: f64,
    seed: u64,
) -> Result<SplitCorpus> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Split(format!(
            "train_fraction must lie strictly between 0 and 1, got {train_fraction}"
        )));
    }
    let n = corpus.playlists().len();
    if n < 2 {
        return Err(Error::Split(format!(
            "need at least 2 playlists to split, got {n}"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = stream_rng(seed, stream_id(tags::SPLIT, 0));
    shuffle_in_place(&mut rng, &mut order);

    let n_train = (n as f64 * train_fraction).floor() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::Split(format!(
            "fraction {train_fraction} over {n} playlists leaves one side empty"
        )));
    }

    let pick = |indices: &[usize]| -> Vec<Playlist> {
        indices
            .iter()
            .map(|&i| corpus.playlists()[i].clone())
            .collect()
    };

    let mut train_provenance = corpus.provenance().to_vec();
    train_provenance.push(format!(
        "train side of split (fraction {train_fraction}, seed {seed}): {n_train} of {n} playlists"
    ));
    let (train, remap) = densify(corpus, pick(&order[..n_train]), train_provenance)?;

    let mut dropped = 0usize;
    let mut deleted_songs = 0usize;
    let test_playlists: Vec<Playlist> = pick(&order[n_train..])
        .into_iter()
        .filter_map(|playlist| {
            let songs: Vec<_> = playlist
                .songs
                .iter()
                .filter_map(|&old| remap[old.index()])
                .collect();
            deleted_songs += playlist.songs.len() - songs.len();
            if songs.len() < 2 {
                dropped += 1;
                None
            } else {
                Some(Playlist {
                    id: playlist.id,
                    songs,
                })
            }
        })
        .collect();
    if test_playlists.is_empty() {
        return Err(Error::Split(format!(
            "no test playlist kept at least 2 train-vocabulary songs (fraction {train_fraction}, seed {seed})"
        )));
    }

    let mut test_provenance = corpus.provenance().to_vec();
    test_provenance.push(format!(
        "test side of split (fraction {train_fraction}, seed {seed}): kept {} of {} playlists, deleted {deleted_songs} out-of-vocabulary songs, dropped {dropped} playlists under 2 songs; song table inherited from the train side",
        test_playlists.len(),
        n - n_train,
    ));
    let test = PlaylistCorpus::new(train.songs().to_vec(), test_playlists, test_provenance)?;

    Ok(SplitCorpus {
        train,
        test,
        seed,
        train_fraction,
    })
}

/// Carve a validation set out of a training corpus by whole playlists.
///
/// Playlist indices are permuted with the seeded generator; the first
/// `ceil(N * fraction)` playlists (in permuted order) become the validation
/// corpus, the rest the reduced training corpus. Both sides keep the input
/// song table so model dimensions are unaffected. The reduced training side
/// ending up empty is an error.
pub fn holdout_validation(
    corpus: &PlaylistCorpus,
    fraction: f64,
    seed: u64,
) -> Result<(PlaylistCorpus, PlaylistCorpus)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Split(format!(
            "holdout fraction must lie strictly between 0 and 1, got {fraction}"
        )));
    }
    let n = corpus.playlists().len();
    let n_val = (n as f64 * fraction).ceil() as usize;
    if n_val >= n {
        return Err(Error::Split(format!(
            "holdout of {n_val} playlists leaves no training playlists (corpus has {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = stream_rng(seed, stream_id(tags::HOLDOUT, 0));
    shuffle_in_place(&mut rng, &mut order);

    let build = |indices: &[usize], label: &str| -> Result<PlaylistCorpus> {
        let playlists = indices
            .iter()
            .map(|&i| corpus.playlists()[i].clone())
            .collect();
        let mut provenance = corpus.provenance().to_vec();
        provenance.push(format!(
            "{label} side of holdout (fraction {fraction}, seed {seed}): {} of {n} playlists",
            indices.len()
        ));
        PlaylistCorpus::new(corpus.songs().to_vec(), playlists, provenance)
    };
    let validation = build(&order[..n_val], "validation")?;
    let remaining = build(&order[n_val..], "training")?;
    Ok((remaining, validation))
}
