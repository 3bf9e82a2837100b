//! Thin command-line front end over the `nextsong` library: every
//! subcommand is artifact-in/artifact-out plumbing around one library
//! call. Exit codes: 0 success, 1 usage error, 2 data/domain error,
//! 3 numeric error.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use nextsong::corpus::{
    filter_corpus, holdout_validation, parse_corpus, split_corpus, FilterConfig, PlaylistCorpus,
};
use nextsong::error::Result;
use nextsong::eval::{evaluate_model, recall_at_k, write_records_csv, EvalReport};
use nextsong::experiments::{
    emit_report, generate_synthetic_corpus, run_context_experiment, run_order_experiment,
    ExperimentReport, SynthKind, VALIDATION_FRACTION,
};
use nextsong::models::{cf_fit, popularity_fit, PlaylistModel};
use nextsong::rnn::{rnn_fit, LossKind, RnnConfig};
use nextsong::store::{
    load_corpus, load_model, load_split, save_corpus, save_model, save_split, AnyModel,
    ModelArtifact,
};

#[derive(Parser)]
#[command(name = "nextsong", version, about = "Playlist continuation models and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a JSONL playlist dump, filter it, and save a corpus artifact
    Ingest {
        /// One JSON object per line: {"id": "...", "songs": [{"artist", "title"}, ...]}
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Keep playlists with at least this many distinct artists
        #[arg(long = "min-artists", default_value_t = 3)]
        min_artists: usize,
        /// Keep playlists with at most this many songs per artist
        #[arg(long = "max-per-artist", default_value_t = 2)]
        max_per_artist: usize,
        /// Keep playlists with at least this many songs
        #[arg(long = "min-length", default_value_t = 5)]
        min_length: usize,
        /// Keep songs appearing in at least this many playlists
        #[arg(long = "min-song-freq", default_value_t = 10)]
        min_song_freq: usize,
    },
    /// Split a corpus into train/test by whole playlists and save it
    Split {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long = "train-frac", default_value_t = 0.8)]
        train_frac: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Fit a model on the training side of a split and save it
    Train {
        #[arg(long)]
        split: PathBuf,
        #[arg(long, value_enum)]
        model: ModelChoice,
        /// Ranking loss (network only)
        #[arg(long, default_value = "bpr")]
        loss: LossKind,
        /// Embedding width (network only)
        #[arg(long, default_value_t = 32)]
        dim: usize,
        /// Hidden-state width (network only)
        #[arg(long, default_value_t = 64)]
        hidden: usize,
        /// Learning rate (network only)
        #[arg(long, default_value_t = 0.05)]
        lr: f64,
        /// Epoch budget (network only)
        #[arg(long, default_value_t = 20)]
        epochs: usize,
        /// Negatives sampled per prediction step (network only)
        #[arg(long, default_value_t = 50)]
        negatives: usize,
        /// Seed for initialization, epoch order, negatives and the
        /// early-stopping holdout (network only)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Rank every test continuation with a saved model; write records CSV
    Evaluate {
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Destination for the playlist_id,position,rank records
        #[arg(long)]
        csv: PathBuf,
        /// Recall cutoffs to print, comma-separated
        #[arg(long = "recall-k", value_delimiter = ',', default_value = "10,100")]
        recall_k: Vec<u32>,
    },
    /// Run a multi-model study on one split; write summary CSV (and SVG)
    Experiment {
        #[command(subcommand)]
        which: ExperimentCommand,
    },
    /// Generate a seeded synthetic corpus and save it
    Synth {
        #[arg(long, value_enum)]
        kind: SynthChoice,
        #[arg(long, default_value_t = 100)]
        songs: usize,
        #[arg(long, default_value_t = 500)]
        playlists: usize,
        #[arg(long = "min-len", default_value_t = 5)]
        min_len: usize,
        #[arg(long = "max-len", default_value_t = 15)]
        max_len: usize,
        #[arg(long, default_value_t = 20)]
        artists: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Compare random, popularity, song-cosine and network rankings
    Context {
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Cross {original, shuffled} training with {original, shuffled} test
    Order {
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelChoice {
    Pop,
    Cf,
    Rnn,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthChoice {
    Markov,
    Bag,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they are not usage errors
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest {
            input,
            output,
            min_artists,
            max_per_artist,
            min_length,
            min_song_freq,
        } => {
            let raw = parse_corpus(BufReader::new(
                File::open(&input).map_err(|e| nextsong::error::Error::io_at(&input, e))?,
            ))?;
            let config = FilterConfig {
                min_unique_artists: min_artists,
                max_songs_per_artist: max_per_artist,
                min_length,
                min_song_playlist_count: min_song_freq,
            };
            let corpus = filter_corpus(&raw, &config)?;
            save_corpus(&corpus, &output)?;
            print_stats("corpus", &corpus);
            Ok(())
        }
        Command::Split {
            corpus,
            train_frac,
            seed,
            output,
        } => {
            let corpus = load_corpus(corpus)?;
            let split = split_corpus(&corpus, train_frac, seed)?;
            save_split(&split, &output)?;
            print_stats("train", &split.train);
            print_stats("test", &split.test);
            Ok(())
        }
        Command::Train {
            split,
            model,
            loss,
            dim,
            hidden,
            lr,
            epochs,
            negatives,
            seed,
            output,
        } => {
            let split = load_split(split)?;
            let model = match model {
                ModelChoice::Pop => AnyModel::Popularity(popularity_fit(&split.train)?),
                ModelChoice::Cf => AnyModel::ItemCf(cf_fit(&split.train)?),
                ModelChoice::Rnn => {
                    let config = RnnConfig {
                        embedding_dim: dim,
                        hidden_dim: hidden,
                        loss,
                        learning_rate: lr,
                        epochs_max: epochs,
                        n_negatives: negatives,
                        seed,
                        ..RnnConfig::default()
                    };
                    let (train, validation) =
                        holdout_validation(&split.train, VALIDATION_FRACTION, seed)?;
                    let fitted = rnn_fit(&train, &validation, &config)?;
                    println!(
                        "trained {} epochs, best validation loss {}",
                        fitted.epochs_trained,
                        fitted
                            .best_validation_loss
                            .map_or("n/a".into(), |l| format!("{l:.6}"))
                    );
                    AnyModel::Rnn(fitted)
                }
            };
            let artifact = ModelArtifact::bound_to(model, &split.train);
            save_model(&artifact, &output)?;
            println!("saved {} model over {} songs", artifact.model.kind(), artifact.model.vocab_size());
            Ok(())
        }
        Command::Evaluate {
            split,
            model,
            csv,
            recall_k,
        } => {
            let split = load_split(split)?;
            let artifact = load_model(model)?;
            artifact.check_vocabulary(&split.train)?;
            let records = evaluate_model(&artifact.model, &split.test)?;
            write_records_csv(
                &records,
                BufWriter::new(File::create(&csv).map_err(|e| nextsong::error::Error::io_at(&csv, e))?),
            )?;
            let report = EvalReport::new(
                artifact.model.kind(),
                "original",
                artifact.model.vocab_size(),
                records,
                &[],
            )?;
            println!(
                "{}: {} records, overall median rank {:.6}",
                report.model_name,
                report.records.len(),
                report.overall_median()
            );
            for k in recall_k {
                println!("recall@{k} = {:.6}", recall_at_k(&report.records, k)?);
            }
            Ok(())
        }
        Command::Experiment { which } => {
            let (report, csv, svg) = match which {
                ExperimentCommand::Context {
                    split,
                    seed,
                    csv,
                    svg,
                } => {
                    let split = load_split(split)?;
                    (run_context_experiment(&split, &rnn_config_for(seed), seed)?, csv, svg)
                }
                ExperimentCommand::Order {
                    split,
                    seed,
                    csv,
                    svg,
                } => {
                    let split = load_split(split)?;
                    (run_order_experiment(&split, &rnn_config_for(seed), seed)?, csv, svg)
                }
            };
            emit_report(&report, &csv, svg.as_deref())?;
            print_report(&report);
            Ok(())
        }
        Command::Synth {
            kind,
            songs,
            playlists,
            min_len,
            max_len,
            artists,
            seed,
            output,
        } => {
            let kind = match kind {
                SynthChoice::Markov => SynthKind::Markov,
                SynthChoice::Bag => SynthKind::Bag,
            };
            let corpus =
                generate_synthetic_corpus(kind, songs, playlists, min_len, max_len, artists, seed)?;
            save_corpus(&corpus, &output)?;
            print_stats("corpus", &corpus);
            Ok(())
        }
    }
}

fn rnn_config_for(seed: u64) -> RnnConfig {
    RnnConfig {
        seed,
        ..RnnConfig::default()
    }
}

fn print_stats(label: &str, corpus: &PlaylistCorpus) {
    let stats = corpus.stats();
    println!(
        "{label}: {} playlists, {} songs, {} artists",
        stats.playlists, stats.songs, stats.artists
    );
}

fn print_report(report: &ExperimentReport) {
    for section in &report.sections {
        println!(
            "{} / {}: {} records, overall median rank {:.6}",
            section.model_name,
            section.condition,
            section.records.len(),
            section.overall_median()
        );
    }
}
