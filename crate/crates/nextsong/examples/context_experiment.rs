//! The context study: does seeing more of the playlist help?
//!
//! Four scorers — a seeded random reference, popularity, last-song cosine
//! similarity, and the recurrent network — rank the same test
//! continuations. The summary CSV (and optional SVG boxplot panels) break
//! ranks down by playlist position: a context-sensitive model improves as
//! the position grows, a context-free one cannot.
//!
//! Run with: `cargo run --release --example context_experiment`

use nextsong::corpus::split_corpus;
use nextsong::experiments::{
    emit_report, generate_synthetic_corpus, run_context_experiment, SynthKind,
};
use nextsong::rnn::RnnConfig;
use std::path::Path;

fn main() -> nextsong::error::Result<()> {
    let corpus = generate_synthetic_corpus(SynthKind::Markov, 100, 500, 5, 15, 20, 42)?;
    let split = split_corpus(&corpus, 0.8, 1)?;

    let config = RnnConfig {
        embedding_dim: 16,
        hidden_dim: 32,
        epochs_max: 8,
        n_negatives: 20,
        seed: 9,
        ..RnnConfig::default()
    };
    let report = run_context_experiment(&split, &config, 9)?;

    println!("overall median rank (vocabulary {}):", split.train.vocab_size());
    for section in &report.sections {
        println!("  {:10} {:6.1}", section.model_name, section.overall_median());
    }

    println!("median rank by position (2 = first prediction):");
    for section in &report.sections {
        let row: Vec<String> = section
            .summaries
            .iter()
            .filter(|s| s.position <= 8)
            .map(|s| format!("{:5.0}", s.median))
            .collect();
        println!("  {:10} {}", section.model_name, row.join(" "));
    }

    let out = Path::new("target/example-output");
    std::fs::create_dir_all(out)?;
    emit_report(
        &report,
        out.join("context_summary.csv"),
        Some(&out.join("context_summary.svg")),
    )?;
    println!("wrote {}/context_summary.{{csv,svg}}", out.display());
    Ok(())
}
