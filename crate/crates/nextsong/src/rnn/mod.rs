//! Single-layer gated-recurrent-unit sequence model trained with pairwise
//! ranking losses over sampled negatives. The only model here that reads
//! the whole context in order.

mod backward;
mod forward;
mod loss;

pub use backward::{compute_gradients, Gradients};
pub use forward::gru_forward;
pub use loss::{ranking_loss, LossKind};

use ndarray::{Array1, Array2};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{PlaylistCorpus, SongId};
use crate::error::{Error, Result};
use crate::models::{PlaylistModel, ScoreVector};
use crate::rng::{index_below, shuffle_in_place, stream_id, stream_rng, tags, unit_f64};

const ADAGRAD_EPS: f64 = 1e-8;

/// Training hyperparameters. The defaults are tuned for the corpus scales
/// in this crate's experiments, not inherited from anywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnnConfig {
    pub embedding_dim: usize,
    pub hidden_dim: usize,
    pub loss: LossKind,
    pub learning_rate: f64,
    pub epochs_max: usize,
    /// Consecutive epochs without validation improvement tolerated before
    /// training stops.
    pub patience: usize,
    /// Negatives sampled per prediction step, uniform over the vocabulary
    /// excluding the step's target.
    pub n_negatives: usize,
    /// Gradients with a larger global norm are rescaled to this norm.
    pub clip_norm: f64,
    /// A playlist contributes at most this many prediction steps; longer
    /// ones are truncated to their first `bptt_cap + 1` songs.
    pub bptt_cap: usize,
    pub seed: u64,
}

impl Default for RnnConfig {
    fn default() -> Self {
        RnnConfig {
            embedding_dim: 32,
            hidden_dim: 64,
            loss: LossKind::Bpr,
            learning_rate: 0.05,
            epochs_max: 20,
            patience: 2,
            n_negatives: 50,
            clip_norm: 5.0,
            bptt_cap: 50,
            seed: 0,
        }
    }
}

impl RnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.embedding_dim < 1 || self.hidden_dim < 1 || self.n_negatives < 1 {
            return Err(Error::Domain(
                "embedding_dim, hidden_dim and n_negatives must be at least 1".into(),
            ));
        }
        if !(self.learning_rate > 0.0) || !(self.clip_norm > 0.0) {
            return Err(Error::Domain(
                "learning_rate and clip_norm must be positive".into(),
            ));
        }
        if self.bptt_cap < 1 {
            return Err(Error::Domain("bptt_cap must be at least 1".into()));
        }
        Ok(())
    }
}

/// All learned tensors. `V` songs, `d`-dimensional embeddings,
/// `m`-dimensional hidden state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnnParams {
    /// V×d input embedding.
    pub embedding: Array2<f64>,
    /// m×d and m×m update-gate weights plus bias.
    pub w_update: Array2<f64>,
    pub u_update: Array2<f64>,
    pub b_update: Array1<f64>,
    /// Reset gate, same shapes.
    pub w_reset: Array2<f64>,
    pub u_reset: Array2<f64>,
    pub b_reset: Array1<f64>,
    /// Candidate state, same shapes.
    pub w_cand: Array2<f64>,
    pub u_cand: Array2<f64>,
    pub b_cand: Array1<f64>,
    /// V×m output projection plus V bias.
    pub w_out: Array2<f64>,
    pub b_out: Array1<f64>,
}

impl RnnParams {
    pub fn zeros(v: usize, d: usize, m: usize) -> Self {
        RnnParams {
            embedding: Array2::zeros((v, d)),
            w_update: Array2::zeros((m, d)),
            u_update: Array2::zeros((m, m)),
            b_update: Array1::zeros(m),
            w_reset: Array2::zeros((m, d)),
            u_reset: Array2::zeros((m, m)),
            b_reset: Array1::zeros(m),
            w_cand: Array2::zeros((m, d)),
            u_cand: Array2::zeros((m, m)),
            b_cand: Array1::zeros(m),
            w_out: Array2::zeros((v, m)),
            b_out: Array1::zeros(v),
        }
    }

    /// Glorot-uniform initialization: each weight matrix is filled row-major
    /// with draws from `[-limit, limit)`, `limit = sqrt(6 / (rows + cols))`,
    /// in declaration order (embedding, update, reset, candidate, output);
    /// biases stay zero. The fill order is part of the determinism contract.
    pub fn glorot(v: usize, d: usize, m: usize, seed: u64) -> Self {
        let mut rng = stream_rng(seed, stream_id(tags::RNN_INIT, 0));
        let mut params = Self::zeros(v, d, m);
        let matrices: [(&mut Array2<f64>, usize, usize); 8] = [
            (&mut params.embedding, v, d),
            (&mut params.w_update, m, d),
            (&mut params.u_update, m, m),
            (&mut params.w_reset, m, d),
            (&mut params.u_reset, m, m),
            (&mut params.w_cand, m, d),
            (&mut params.u_cand, m, m),
            (&mut params.w_out, v, m),
        ];
        for (matrix, rows, cols) in matrices {
            let limit = (6.0 / (rows + cols) as f64).sqrt();
            for value in matrix.as_slice_mut().expect("freshly allocated") {
                *value = (2.0 * unit_f64(&mut rng) - 1.0) * limit;
            }
        }
        params
    }

    /// `(V, d, m)`
    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.embedding.nrows(),
            self.embedding.ncols(),
            self.u_update.nrows(),
        )
    }

    /// Every tensor as a named flat slice, in declaration order.
    pub fn tensors(&self) -> Vec<(&'static str, &[f64])> {
        vec![
            ("embedding", self.embedding.as_slice().expect("standard layout")),
            ("w_update", self.w_update.as_slice().expect("standard layout")),
            ("u_update", self.u_update.as_slice().expect("standard layout")),
            ("b_update", self.b_update.as_slice().expect("standard layout")),
            ("w_reset", self.w_reset.as_slice().expect("standard layout")),
            ("u_reset", self.u_reset.as_slice().expect("standard layout")),
            ("b_reset", self.b_reset.as_slice().expect("standard layout")),
            ("w_cand", self.w_cand.as_slice().expect("standard layout")),
            ("u_cand", self.u_cand.as_slice().expect("standard layout")),
            ("b_cand", self.b_cand.as_slice().expect("standard layout")),
            ("w_out", self.w_out.as_slice().expect("standard layout")),
            ("b_out", self.b_out.as_slice().expect("standard layout")),
        ]
    }

    /// Mutable variant of [`Self::tensors`].
    pub fn tensors_mut(&mut self) -> Vec<(&'static str, &mut [f64])> {
        vec![
            ("embedding", self.embedding.as_slice_mut().expect("standard layout")),
            ("w_update", self.w_update.as_slice_mut().expect("standard layout")),
            ("u_update", self.u_update.as_slice_mut().expect("standard layout")),
            ("b_update", self.b_update.as_slice_mut().expect("standard layout")),
            ("w_reset", self.w_reset.as_slice_mut().expect("standard layout")),
            ("u_reset", self.u_reset.as_slice_mut().expect("standard layout")),
            ("b_reset", self.b_reset.as_slice_mut().expect("standard layout")),
            ("w_cand", self.w_cand.as_slice_mut().expect("standard layout")),
            ("u_cand", self.u_cand.as_slice_mut().expect("standard layout")),
            ("b_cand", self.b_cand.as_slice_mut().expect("standard layout")),
            ("w_out", self.w_out.as_slice_mut().expect("standard layout")),
            ("b_out", self.b_out.as_slice_mut().expect("standard layout")),
        ]
    }
}

/// A trained network bound to the vocabulary it was fitted on, plus the
/// training trace that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RnnModel {
    pub params: RnnParams,
    pub config: RnnConfig,
    /// Hash of the training vocabulary; artifact loading re-checks it.
    pub vocab_hash: String,
    pub epochs_trained: usize,
    pub train_loss_by_epoch: Vec<f64>,
    pub validation_loss_by_epoch: Vec<f64>,
    pub best_validation_loss: Option<f64>,
}

impl PlaylistModel for RnnModel {
    fn vocab_size(&self) -> usize {
        self.params.dims().0
    }

    fn score(&self, context: &[SongId]) -> Result<ScoreVector> {
        let m = self.params.dims().2;
        let (_, scores) = gru_forward(&self.params, context, &Array1::zeros(m))?;
        let last = scores.nrows() - 1;
        ScoreVector::new(scores.row(last).to_vec())
    }

    fn kind(&self) -> &'static str {
        "rnn"
    }
}

fn truncated(songs: &[SongId], bptt_cap: usize) -> &[SongId] {
    &songs[..songs.len().min(bptt_cap + 1)]
}

/// `n` uniform draws over the vocabulary, redrawing any hit on `target`.
/// Duplicates among the negatives are allowed.
fn sample_negatives(rng: &mut ChaCha8Rng, vocab_size: usize, target: u32, n: usize) -> Vec<u32> {
    debug_assert!(vocab_size >= 2);
    (0..n)
        .map(|_| loop {
            let s = index_below(rng, vocab_size) as u32;
            if s != target {
                break s;
            }
        })
        .collect()
}

struct ValidationSet {
    playlists: Vec<Vec<SongId>>,
    negatives: Vec<Vec<Vec<u32>>>,
}

impl ValidationSet {
    /// Validation playlists are trimmed to songs the model knows (dropping
    /// the playlist if fewer than 2 remain), truncated like training ones,
    /// and get their negatives sampled once up front, so every epoch's
    /// validation loss is computed on exactly the same prediction tasks.
    fn prepare(validation: &PlaylistCorpus, vocab_size: usize, config: &RnnConfig) -> Self {
        let playlists: Vec<Vec<SongId>> = validation
            .playlists()
            .iter()
            .filter_map(|p| {
                let known: Vec<SongId> = p
                    .songs
                    .iter()
                    .copied()
                    .filter(|s| s.index() < vocab_size)
                    .collect();
                (known.len() >= 2).then(|| truncated(&known, config.bptt_cap).to_vec())
            })
            .collect();
        let negatives = playlists
            .iter()
            .enumerate()
            .map(|(i, playlist)| {
                let mut rng =
                    stream_rng(config.seed, stream_id(tags::RNN_VAL_NEGATIVES, i as u64));
                playlist[1..]
                    .iter()
                    .map(|target| sample_negatives(&mut rng, vocab_size, target.0, config.n_negatives))
                    .collect()
            })
            .collect();
        ValidationSet {
            playlists,
            negatives,
        }
    }

    fn loss(&self, params: &RnnParams, kind: LossKind) -> Result<f64> {
        let parts: Vec<Result<(f64, usize)>> = self
            .playlists
            .par_iter()
            .zip(&self.negatives)
            .map(|(playlist, negatives)| loss::playlist_loss(params, playlist, negatives, kind))
            .collect();
        let mut total = 0.0;
        let mut steps = 0usize;
        for part in parts {
            let (loss, n) = part?;
            total += loss * n as f64;
            steps += n;
        }
        Ok(total / steps as f64)
    }
}

/// Train a network on `train`, early-stopping against `validation`.
///
/// Parameters start Glorot-uniform from `config.seed`. Each epoch visits
/// the training playlists in a freshly shuffled order, resets the hidden
/// state at every playlist start, samples `n_negatives` per step, and
/// applies one clipped Adagrad update per playlist. After each epoch the
/// mean validation step loss is measured; training stops at `epochs_max`
/// or once `patience` consecutive epochs fail to improve it, and the
/// best-validation parameters are returned. With an empty validation
/// corpus every epoch counts as an improvement, so training runs all
/// `epochs_max` epochs and returns the final parameters. Fully
/// deterministic given the config.
pub fn rnn_fit(
    train: &PlaylistCorpus,
    validation: &PlaylistCorpus,
    config: &RnnConfig,
) -> Result<RnnModel> {
    config.validate()?;
    let v = train.vocab_size();
    if train.playlists().is_empty() {
        return Err(Error::Domain("cannot fit on an empty train corpus".into()));
    }
    if v < 2 {
        return Err(Error::Domain(
            "training needs a vocabulary of at least 2 songs".into(),
        ));
    }
    if !train.playlists().iter().any(|p| p.len() >= 2) {
        return Err(Error::Domain(
            "no training playlist has 2 or more songs".into(),
        ));
    }

    let (d, m) = (config.embedding_dim, config.hidden_dim);
    let mut params = RnnParams::glorot(v, d, m, config.seed);
    let mut accum = RnnParams::zeros(v, d, m);
    let validation_set = ValidationSet::prepare(validation, v, config);

    let mut best = params.clone();
    let mut best_loss = f64::INFINITY;
    let mut bad_epochs = 0usize;
    let mut train_losses = Vec::new();
    let mut validation_losses = Vec::new();
    let mut epochs_trained = 0usize;

    for epoch in 0..config.epochs_max {
        let mut order: Vec<usize> = (0..train.playlists().len()).collect();
        let mut order_rng = stream_rng(config.seed, stream_id(tags::RNN_ORDER, epoch as u64));
        shuffle_in_place(&mut order_rng, &mut order);
        let mut neg_rng = stream_rng(config.seed, stream_id(tags::RNN_NEGATIVES, epoch as u64));

        let mut loss_sum = 0.0;
        let mut step_sum = 0usize;
        for &pi in &order {
            let playlist = truncated(&train.playlists()[pi].songs, config.bptt_cap);
            if playlist.len() < 2 {
                continue;
            }
            let negatives: Vec<Vec<u32>> = playlist[1..]
                .iter()
                .map(|target| sample_negatives(&mut neg_rng, v, target.0, config.n_negatives))
                .collect();
            let (mut grads, loss) =
                compute_gradients(&params, playlist, &negatives, config.loss)
                    .map_err(|e| at_epoch(e, epoch))?;
            loss_sum += loss * (playlist.len() - 1) as f64;
            step_sum += playlist.len() - 1;

            let norm = grads.global_norm();
            if norm > config.clip_norm {
                grads.scale(config.clip_norm / norm);
            }
            apply_adagrad(&mut params, &grads, &mut accum, config.learning_rate);
        }
        epochs_trained = epoch + 1;
        let train_loss = loss_sum / step_sum as f64;
        if !train_loss.is_finite() {
            return Err(Error::Numeric(format!(
                "training diverged at epoch {}",
                epoch + 1
            )));
        }
        train_losses.push(train_loss);

        if validation_set.playlists.is_empty() {
            best = params.clone();
            continue;
        }
        let val_loss = validation_set
            .loss(&params, config.loss)
            .map_err(|e| at_epoch(e, epoch))?;
        validation_losses.push(val_loss);
        if val_loss < best_loss {
            best_loss = val_loss;
            best = params.clone();
            bad_epochs = 0;
        } else {
            bad_epochs += 1;
            if bad_epochs >= config.patience {
                break;
            }
        }
    }

    Ok(RnnModel {
        params: best,
        config: config.clone(),
        vocab_hash: train.vocabulary_hash(),
        epochs_trained,
        train_loss_by_epoch: train_losses,
        validation_loss_by_epoch: validation_losses,
        best_validation_loss: (best_loss < f64::INFINITY).then_some(best_loss),
    })
}

fn at_epoch(e: Error, epoch: usize) -> Error {
    match e {
        Error::Numeric(msg) => Error::Numeric(format!("epoch {}: {msg}", epoch + 1)),
        other => other,
    }
}

/// Adagrad: per-entry squared-gradient accumulation, step
/// `lr * g / (sqrt(accum) + 1e-8)`. Sparse rows update only their
/// accumulator rows, so untouched songs keep their effective step size.
fn apply_adagrad(params: &mut RnnParams, grads: &Gradients, accum: &mut RnnParams, lr: f64) {
    let dense: [(&mut Array2<f64>, &Array2<f64>, &mut Array2<f64>); 6] = [
        (&mut params.w_update, &grads.w_update, &mut accum.w_update),
        (&mut params.u_update, &grads.u_update, &mut accum.u_update),
        (&mut params.w_reset, &grads.w_reset, &mut accum.w_reset),
        (&mut params.u_reset, &grads.u_reset, &mut accum.u_reset),
        (&mut params.w_cand, &grads.w_cand, &mut accum.w_cand),
        (&mut params.u_cand, &grads.u_cand, &mut accum.u_cand),
    ];
    for (p, g, a) in dense {
        adagrad_slice(
            p.as_slice_mut().expect("standard layout"),
            g.as_slice().expect("standard layout"),
            a.as_slice_mut().expect("standard layout"),
            lr,
        );
    }
    let biases: [(&mut Array1<f64>, &Array1<f64>, &mut Array1<f64>); 3] = [
        (&mut params.b_update, &grads.b_update, &mut accum.b_update),
        (&mut params.b_reset, &grads.b_reset, &mut accum.b_reset),
        (&mut params.b_cand, &grads.b_cand, &mut accum.b_cand),
    ];
    for (p, g, a) in biases {
        adagrad_slice(
            p.as_slice_mut().expect("standard layout"),
            g.as_slice().expect("standard layout"),
            a.as_slice_mut().expect("standard layout"),
            lr,
        );
    }
    for (&s, row) in &grads.embedding_rows {
        adagrad_slice(
            params
                .embedding
                .row_mut(s as usize)
                .into_slice()
                .expect("contiguous row"),
            row.as_slice().expect("standard layout"),
            accum
                .embedding
                .row_mut(s as usize)
                .into_slice()
                .expect("contiguous row"),
            lr,
        );
    }
    for (&s, row) in &grads.out_rows {
        adagrad_slice(
            params
                .w_out
                .row_mut(s as usize)
                .into_slice()
                .expect("contiguous row"),
            row.as_slice().expect("standard layout"),
            accum
                .w_out
                .row_mut(s as usize)
                .into_slice()
                .expect("contiguous row"),
            lr,
        );
    }
    for (&s, &g) in &grads.out_bias {
        let a = &mut accum.b_out[s as usize];
        *a += g * g;
        params.b_out[s as usize] -= lr * g / (a.sqrt() + ADAGRAD_EPS);
    }
}

fn adagrad_slice(params: &mut [f64], grads: &[f64], accum: &mut [f64], lr: f64) {
    for ((p, &g), a) in params.iter_mut().zip(grads).zip(accum) {
        *a += g * g;
        *p -= lr * g / (a.sqrt() + ADAGRAD_EPS);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Playlist, Song};

    /// Corpus where song `s` is always followed by `successor[s]`: the
    /// strongest possible order signal. 200 playlists of 10 songs walking a
    /// fixed successor permutation from rotating starts.
    fn markov_corpus(v: usize, n_playlists: usize) -> (PlaylistCorpus, Vec<u32>) {
        let mut successor: Vec<u32> = (0..v as u32).collect();
        let mut rng = stream_rng(1234, 0);
        shuffle_in_place(&mut rng, &mut successor);
        // a permutation may fix points; rotate any self-successor away
        for s in 0..v {
            if successor[s] == s as u32 {
                let t = (s + 1) % v;
                successor.swap(s, t);
            }
        }
        let songs: Vec<Song> = (0..v)
            .map(|s| Song {
                id: SongId(s as u32),
                artist: format!("artist {s}"),
                title: format!("song {s}"),
            })
            .collect();
        let playlists: Vec<Playlist> = (0..n_playlists)
            .map(|i| {
                let mut song = (i % v) as u32;
                let mut sequence = vec![SongId(song)];
                for _ in 0..9 {
                    song = successor[song as usize];
                    sequence.push(SongId(song));
                }
                Playlist {
                    id: format!("p{i}"),
                    songs: sequence,
                }
            })
            .collect();
        let corpus = PlaylistCorpus::new(songs, playlists, vec![]).unwrap();
        (corpus, successor)
    }

    fn empty_validation(like: &PlaylistCorpus) -> PlaylistCorpus {
        PlaylistCorpus::new(like.songs().to_vec(), vec![], vec![]).unwrap()
    }

    fn small_config(epochs: usize) -> RnnConfig {
        RnnConfig {
            embedding_dim: 16,
            hidden_dim: 16,
            epochs_max: epochs,
            n_negatives: 10,
            seed: 7,
            ..RnnConfig::default()
        }
    }

    #[test]
    fn training_reduces_loss_on_forced_successors() {
        let (corpus, _) = markov_corpus(100, 200);
        let model = rnn_fit(&corpus, &empty_validation(&corpus), &small_config(4)).unwrap();
        assert_eq!(model.epochs_trained, 4);
        let first = model.train_loss_by_epoch[0];
        let last = *model.train_loss_by_epoch.last().unwrap();
        assert!(
            last < first,
            "loss should fall: first {first}, last {last}"
        );
    }

    #[test]
    fn trained_model_tracks_forced_successors() {
        let (corpus, successor) = markov_corpus(100, 200);
        let model = rnn_fit(&corpus, &empty_validation(&corpus), &small_config(8)).unwrap();
        let mut hits = 0;
        for s in 0..100u32 {
            let scores = model.score(&[SongId(s)]).unwrap();
            let argmax = scores
                .values()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            if argmax == successor[s as usize] as usize {
                hits += 1;
            }
        }
        assert!(hits >= 80, "only {hits}/100 forced successors ranked first");
    }

    #[test]
    fn scoring_is_order_sensitive_after_training() {
        let (corpus, successor) = markov_corpus(100, 200);
        let model = rnn_fit(&corpus, &empty_validation(&corpus), &small_config(8)).unwrap();
        let (a, b) = (3u32, successor[3] as u32);
        let ab = model.score(&[SongId(a), SongId(b)]).unwrap();
        let ba = model.score(&[SongId(b), SongId(a)]).unwrap();
        let argmax = |s: &ScoreVector| {
            s.values()
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
                .unwrap()
                .0
        };
        assert_eq!(argmax(&ab), successor[b as usize] as usize);
        assert_eq!(argmax(&ba), successor[a as usize] as usize);
    }

    #[test]
    fn same_seed_same_bits() {
        let (corpus, _) = markov_corpus(40, 60);
        let config = RnnConfig {
            embedding_dim: 8,
            hidden_dim: 8,
            epochs_max: 2,
            n_negatives: 5,
            seed: 42,
            ..RnnConfig::default()
        };
        let a = rnn_fit(&corpus, &empty_validation(&corpus), &config).unwrap();
        let b = rnn_fit(&corpus, &empty_validation(&corpus), &config).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.train_loss_by_epoch, b.train_loss_by_epoch);

        let other = rnn_fit(
            &corpus,
            &empty_validation(&corpus),
            &RnnConfig { seed: 43, ..config },
        )
        .unwrap();
        assert_ne!(a.params, other.params);
    }

    #[test]
    fn zero_epochs_returns_initialized_model() {
        let (corpus, _) = markov_corpus(30, 40);
        let config = RnnConfig {
            embedding_dim: 8,
            hidden_dim: 8,
            epochs_max: 0,
            seed: 5,
            ..RnnConfig::default()
        };
        let model = rnn_fit(&corpus, &empty_validation(&corpus), &config).unwrap();
        assert_eq!(model.epochs_trained, 0);
        assert!(model.best_validation_loss.is_none());
        assert_eq!(model.params, RnnParams::glorot(30, 8, 8, 5));
    }

    #[test]
    fn validation_tracking_returns_best_parameters() {
        let (corpus, _) = markov_corpus(50, 80);
        let (train_side, validation) =
            crate::corpus::holdout_validation(&corpus, 0.2, 9).unwrap();
        let config = RnnConfig {
            embedding_dim: 8,
            hidden_dim: 8,
            epochs_max: 6,
            n_negatives: 5,
            patience: 2,
            seed: 11,
            ..RnnConfig::default()
        };
        let model = rnn_fit(&train_side, &validation, &config).unwrap();
        assert!(model.epochs_trained <= 6);
        assert!(!model.validation_loss_by_epoch.is_empty());
        let best = model.best_validation_loss.unwrap();
        let min = model
            .validation_loss_by_epoch
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, min);
    }

    #[test]
    fn negatives_never_hit_the_target() {
        let mut rng = stream_rng(3, 99);
        for target in [0u32, 1, 7] {
            for _ in 0..50 {
                let negatives = sample_negatives(&mut rng, 8, target, 20);
                assert_eq!(negatives.len(), 20);
                assert!(negatives.iter().all(|&s| s != target && s < 8));
            }
        }
    }

    #[test]
    fn untrained_zero_model_scores_output_bias() {
        let params = RnnParams::zeros(6, 3, 4);
        let model = RnnModel {
            params,
            config: small_config(0),
            vocab_hash: String::new(),
            epochs_trained: 0,
            train_loss_by_epoch: vec![],
            validation_loss_by_epoch: vec![],
            best_validation_loss: None,
        };
        let scores = model.score(&[SongId(2), SongId(4)]).unwrap();
        assert_eq!(scores.values(), &[0.0; 6]);
    }

    #[test]
    fn degenerate_inputs_error() {
        let (corpus, _) = markov_corpus(10, 10);
        let empty = empty_validation(&corpus);
        assert!(rnn_fit(&empty, &empty, &small_config(1)).is_err());

        let bad = RnnConfig {
            learning_rate: 0.0,
            ..RnnConfig::default()
        };
        assert!(rnn_fit(&corpus, &empty, &bad).is_err());
    }

    #[test]
    fn glorot_respects_limits_and_zero_biases() {
        let params = RnnParams::glorot(20, 8, 8, 3);
        let limit_embed = (6.0 / 28.0f64).sqrt();
        assert!(params.embedding.iter().all(|&x| x.abs() <= limit_embed));
        assert!(params.b_update.iter().all(|&x| x == 0.0));
        assert!(params.b_out.iter().all(|&x| x == 0.0));
        // different seeds differ
        assert_ne!(params, RnnParams::glorot(20, 8, 8, 4));
    }
}
