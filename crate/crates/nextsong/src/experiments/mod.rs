//! End-to-end experiment drivers: seeded reference scorers, the
//! context-sensitivity and order-sensitivity studies, synthetic corpus
//! generation, and report emission (CSV + SVG).

mod report;
mod synth;

pub use report::{emit_report, render_svg};
pub use synth::{generate_synthetic_corpus, SynthKind, MARKOV_SUCCESSOR_P};

use serde::{Deserialize, Serialize};

use crate::corpus::{holdout_validation, shuffle_playlists, CorpusStats, SongId, SplitCorpus};
use crate::error::Result;
use crate::eval::{evaluate_model, EvalReport};
use crate::models::{cf_fit, popularity_fit, PlaylistModel, ScoreVector};
use crate::rng::{fnv1a_u32s, stream_rng, unit_f64};
use crate::rnn::{rnn_fit, RnnConfig, RnnModel};

/// Share of training playlists held out for early stopping when an
/// experiment fits a network.
pub const VALIDATION_FRACTION: f64 = 0.1;

/// Recall cutoffs reported by the experiment drivers.
pub const REPORT_RECALL_KS: [u32; 2] = [10, 100];

/// Salt mixed into the experiment seed before it keys the random reference
/// model, whose stream ids are raw context hashes rather than tagged
/// operation streams; the distinct key keeps the two spaces independent.
const RANDOM_MODEL_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// The four train/test ordering treatments of the order study. The numeric
/// value of each condition offsets the experiment seed when its playlists
/// are shuffled, so every treatment draws distinct permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderCondition {
    Original = 0,
    ShuffledTest = 1,
    ShuffledTraining = 2,
    ShuffledTrainingAndTest = 3,
}

impl OrderCondition {
    pub const ALL: [OrderCondition; 4] = [
        OrderCondition::Original,
        OrderCondition::ShuffledTest,
        OrderCondition::ShuffledTraining,
        OrderCondition::ShuffledTrainingAndTest,
    ];

    pub fn label(self) -> &'static str {
        match self {
            OrderCondition::Original => "original",
            OrderCondition::ShuffledTest => "shuffled_test",
            OrderCondition::ShuffledTraining => "shuffled_training",
            OrderCondition::ShuffledTrainingAndTest => "shuffled_training_and_test",
        }
    }

    pub fn seed_offset(self) -> u64 {
        self as u64
    }
}

impl std::fmt::Display for OrderCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Everything one experiment run produces: the per-model evaluation
/// sections plus enough configuration echo to rerun it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// `"context"` or `"order"`.
    pub experiment: String,
    pub seed: u64,
    pub split_seed: u64,
    pub train_fraction: f64,
    pub rnn_config: RnnConfig,
    pub train_stats: CorpusStats,
    pub test_stats: CorpusStats,
    pub sections: Vec<EvalReport>,
}

/// Context-free reference scorer: every query gets fresh uniform scores
/// from a generator keyed by the (salted) seed and streamed by a hash of
/// the query context, so repeated queries score identically no matter the
/// evaluation order or thread count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomModel {
    vocab_size: usize,
    seed: u64,
}

impl RandomModel {
    pub fn new(vocab_size: usize, seed: u64) -> Self {
        RandomModel { vocab_size, seed }
    }
}

impl PlaylistModel for RandomModel {
    fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    fn score(&self, context: &[SongId]) -> Result<ScoreVector> {
        crate::models::check_context(context, self.vocab_size)?;
        let stream = fnv1a_u32s(context.iter().map(|s| s.0));
        let mut rng = stream_rng(self.seed ^ RANDOM_MODEL_SALT, stream);
        ScoreVector::new((0..self.vocab_size).map(|_| unit_f64(&mut rng)).collect())
    }

    fn kind(&self) -> &'static str {
        "random"
    }
}

/// Fit the random reference, popularity, song-cosine and network models on
/// one split and rank every test continuation with each of them.
///
/// The network trains on the training side minus a seeded
/// [`VALIDATION_FRACTION`] holdout used for early stopping; the simpler
/// models use the full training side (they have no stopping decision to
/// make). All four sections share the test corpus, so their per-position
/// record counts are identical and differences in the rank distributions
/// are attributable to the models alone. Deterministic given split, config
/// and seed.
pub fn run_context_experiment(
    split: &SplitCorpus,
    rnn_config: &RnnConfig,
    seed: u64,
) -> Result<ExperimentReport> {
    let (reduced_train, validation) = holdout_validation(&split.train, VALIDATION_FRACTION, seed)?;

    let random = RandomModel::new(split.train.vocab_size(), seed);
    let popularity = popularity_fit(&split.train)?;
    let cf = cf_fit(&split.train)?;
    let rnn = rnn_fit(&reduced_train, &validation, rnn_config)?;

    let models: [&dyn PlaylistModel; 4] = [&random, &popularity, &cf, &rnn];
    let sections = models
        .iter()
        .map(|model| {
            let records = evaluate_model(*model, &split.test)?;
            EvalReport::new(
                model.kind(),
                OrderCondition::Original.label(),
                model.vocab_size(),
                records,
                &REPORT_RECALL_KS,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        experiment: "context".into(),
        seed,
        split_seed: split.seed,
        train_fraction: split.train_fraction,
        rnn_config: rnn_config.clone(),
        train_stats: split.train.stats(),
        test_stats: split.test.stats(),
        sections,
    })
}

/// The two network fits behind [`run_order_experiment`]: one on the
/// original training playlists, one on per-playlist-shuffled copies
/// (shuffle seed `seed + 2`, the offset of the shuffled-training
/// condition). Both hold out the same seeded validation playlists.
pub fn order_experiment_models(
    split: &SplitCorpus,
    rnn_config: &RnnConfig,
    seed: u64,
) -> Result<(RnnModel, RnnModel)> {
    let fit = |train: &crate::corpus::PlaylistCorpus| -> Result<RnnModel> {
        let (reduced, validation) = holdout_validation(train, VALIDATION_FRACTION, seed)?;
        rnn_fit(&reduced, &validation, rnn_config)
    };
    let original = fit(&split.train)?;
    let shuffled_train = shuffle_playlists(
        &split.train,
        seed + OrderCondition::ShuffledTraining.seed_offset(),
    )?;
    let shuffled = fit(&shuffled_train)?;
    Ok((original, shuffled))
}

/// Measure how much the network's ranking quality depends on song order by
/// crossing {original, shuffled} training playlists with {original,
/// shuffled} test playlists.
///
/// Only two fits run: the original-training model serves the `original`
/// and `shuffled_test` sections, the shuffled-training model the other
/// two. Each shuffled corpus draws its permutations from `seed +
/// condition offset`, so the two shuffled test sections scramble
/// playlists differently. Deterministic given split, config and seed.
pub fn run_order_experiment(
    split: &SplitCorpus,
    rnn_config: &RnnConfig,
    seed: u64,
) -> Result<ExperimentReport> {
    let (original_model, shuffled_model) = order_experiment_models(split, rnn_config, seed)?;

    let sections = OrderCondition::ALL
        .iter()
        .map(|&condition| {
            let model = match condition {
                OrderCondition::Original | OrderCondition::ShuffledTest => &original_model,
                _ => &shuffled_model,
            };
            let test = match condition {
                OrderCondition::ShuffledTest | OrderCondition::ShuffledTrainingAndTest => {
                    std::borrow::Cow::Owned(shuffle_playlists(
                        &split.test,
                        seed + condition.seed_offset(),
                    )?)
                }
                _ => std::borrow::Cow::Borrowed(&split.test),
            };
            let records = evaluate_model(model, &test)?;
            EvalReport::new(
                model.kind(),
                condition.label(),
                model.vocab_size(),
                records,
                &REPORT_RECALL_KS,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        experiment: "order".into(),
        seed,
        split_seed: split.seed,
        train_fraction: split.train_fraction,
        rnn_config: rnn_config.clone(),
        train_stats: split.train.stats(),
        test_stats: split.test.stats(),
        sections,
    })
}
