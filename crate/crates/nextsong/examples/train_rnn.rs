//! Train the recurrent model and watch it exploit song order.
//!
//! The corpus hides a successor structure (song → successor with
//! probability 0.9), which only an order-aware model can pick up. Training
//! holds out a slice of playlists for early stopping and keeps the
//! best-validation parameters.
//!
//! Run with: `cargo run --release --example train_rnn`

use nextsong::corpus::{holdout_validation, split_corpus};
use nextsong::eval::{evaluate_model, EvalReport};
use nextsong::experiments::{generate_synthetic_corpus, SynthKind};
use nextsong::models::{popularity_fit, PlaylistModel};
use nextsong::rnn::{rnn_fit, RnnConfig};

fn main() -> nextsong::error::Result<()> {
    let corpus = generate_synthetic_corpus(SynthKind::Markov, 100, 500, 5, 15, 20, 42)?;
    let split = split_corpus(&corpus, 0.8, 1)?;
    let (train, validation) = holdout_validation(&split.train, 0.1, 1)?;

    let config = RnnConfig {
        embedding_dim: 16,
        hidden_dim: 32,
        epochs_max: 10,
        n_negatives: 20,
        seed: 5,
        ..RnnConfig::default()
    };
    let model = rnn_fit(&train, &validation, &config)?;

    println!(
        "trained {} epochs (budget {}), best validation loss {:.4}",
        model.epochs_trained,
        config.epochs_max,
        model.best_validation_loss.unwrap()
    );
    for (epoch, (train_loss, val_loss)) in model
        .train_loss_by_epoch
        .iter()
        .zip(&model.validation_loss_by_epoch)
        .enumerate()
    {
        println!("  epoch {:2}: train {train_loss:.4}, validation {val_loss:.4}", epoch + 1);
    }

    // Same seed, same model — training is exactly reproducible.
    let again = rnn_fit(&train, &validation, &config)?;
    assert_eq!(model.params, again.params);
    println!("same config, same parameters: verified");

    // Positionwise medians: the network should sharpen as the context
    // grows, while popularity stays flat.
    let popularity = popularity_fit(&split.train)?;
    for model in [&model as &dyn PlaylistModel, &popularity] {
        let records = evaluate_model(model, &split.test)?;
        let report =
            EvalReport::new(model.kind(), "original", model.vocab_size(), records, &[])?;
        let medians: Vec<String> = report
            .summaries
            .iter()
            .take(6)
            .map(|s| format!("p{}: {:.0}", s.position, s.median))
            .collect();
        println!(
            "{:10} overall median {:5.1} | {}",
            report.model_name,
            report.overall_median(),
            medians.join("  ")
        );
    }
    Ok(())
}
