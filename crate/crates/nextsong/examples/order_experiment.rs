//! The order study: how much does the *sequence* of songs matter?
//!
//! The recurrent model is fitted twice — once on playlists as given, once
//! on per-playlist shuffled copies — and each fit ranks both the original
//! and a shuffled test side. On a corpus whose playlists have no real
//! order (songs drawn by popularity alone), all four train/test
//! combinations should score about the same; any spread would mean the
//! model manufactures order sensitivity that is not in the data.
//!
//! Run with: `cargo run --release --example order_experiment`

use nextsong::corpus::split_corpus;
use nextsong::experiments::{
    emit_report, generate_synthetic_corpus, run_order_experiment, SynthKind,
};
use nextsong::rnn::RnnConfig;
use std::path::Path;

fn main() -> nextsong::error::Result<()> {
    let corpus = generate_synthetic_corpus(SynthKind::Bag, 100, 500, 5, 15, 20, 42)?;
    let split = split_corpus(&corpus, 0.8, 1)?;

    let config = RnnConfig {
        embedding_dim: 16,
        hidden_dim: 32,
        epochs_max: 8,
        n_negatives: 20,
        seed: 4,
        ..RnnConfig::default()
    };
    let report = run_order_experiment(&split, &config, 4)?;

    println!(
        "median rank by condition (vocabulary {}):",
        split.train.vocab_size()
    );
    let mut medians = Vec::new();
    for section in &report.sections {
        let median = section.overall_median();
        medians.push(median);
        println!("  {:28} {:6.1}", section.condition, median);
    }
    let spread = medians.iter().cloned().fold(f64::MIN, f64::max)
        - medians.iter().cloned().fold(f64::MAX, f64::min);
    println!(
        "largest pairwise gap: {spread:.1} ranks ({:.1}% of the vocabulary)",
        100.0 * spread / split.train.vocab_size() as f64
    );

    let out = Path::new("target/example-output");
    std::fs::create_dir_all(out)?;
    emit_report(
        &report,
        out.join("order_summary.csv"),
        Some(&out.join("order_summary.svg")),
    )?;
    println!("wrote {}/order_summary.{{csv,svg}}", out.display());
    Ok(())
}
