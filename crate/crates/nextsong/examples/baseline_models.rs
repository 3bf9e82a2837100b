//! Fit the two baseline scorers and rank test continuations with them.
//!
//! Popularity scores every song by how many training playlists contain
//! it — the context is ignored entirely. The cosine model scores by
//! similarity to the most recent song, where similarity compares binary
//! playlist-membership vectors. Evaluation walks each test playlist
//! position by position: the model sees songs before the position and the
//! true next song's rank among all songs is recorded.
//!
//! Run with: `cargo run --example baseline_models`

use nextsong::corpus::split_corpus;
use nextsong::eval::{evaluate_model, EvalReport};
use nextsong::experiments::{generate_synthetic_corpus, SynthKind};
use nextsong::models::{cf_fit, popularity_fit, PlaylistModel};

fn main() -> nextsong::error::Result<()> {
    // A bag corpus: songs are drawn by popularity, so the popularity
    // baseline should do well and last-song similarity should carry less.
    let corpus = generate_synthetic_corpus(SynthKind::Bag, 100, 400, 5, 12, 10, 3)?;
    let split = split_corpus(&corpus, 0.8, 1)?;

    let popularity = popularity_fit(&split.train)?;
    let cosine = cf_fit(&split.train)?;

    // Score one concrete context with both models.
    let context = &split.test.playlists()[0].songs[..2];
    for model in [&popularity as &dyn PlaylistModel, &cosine] {
        let scores = model.score(context)?;
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| {
            scores.values()[b]
                .partial_cmp(&scores.values()[a])
                .unwrap()
                .then(a.cmp(&b))
        });
        let top: Vec<String> = order
            .iter()
            .take(3)
            .map(|&s| split.train.songs()[s].title.clone())
            .collect();
        println!("{} suggests: {}", model.kind(), top.join(", "));
    }

    // Rank every test continuation with each model.
    for model in [&popularity as &dyn PlaylistModel, &cosine] {
        let records = evaluate_model(model, &split.test)?;
        let report = EvalReport::new(
            model.kind(),
            "original",
            model.vocab_size(),
            records,
            &[10],
        )?;
        println!(
            "{}: {} records, overall median rank {:.1} (vocabulary {}), recall@10 {:.3}",
            report.model_name,
            report.records.len(),
            report.overall_median(),
            report.vocab_size,
            report.recall[0].1,
        );
    }
    Ok(())
}
