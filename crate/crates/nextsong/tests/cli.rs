//! End-to-end exercises of the command-line binary: artifact plumbing,
//! output determinism, and the documented exit codes.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nextsong");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 stdout")
}

fn path_str(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().expect("utf-8 path").to_string()
}

#[test]
fn pipeline_runs_end_to_end_and_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| path_str(dir.path(), name);

    let synth_out = run_ok(&[
        "synth", "--kind", "markov", "--songs", "40", "--playlists", "80", "--min-len", "5",
        "--max-len", "8", "--artists", "5", "--seed", "7", "--output", &p("corpus.json"),
    ]);
    assert!(synth_out.contains("80 playlists"), "{synth_out}");

    // the same seed must reproduce the artifact byte for byte
    run_ok(&[
        "synth", "--kind", "markov", "--songs", "40", "--playlists", "80", "--min-len", "5",
        "--max-len", "8", "--artists", "5", "--seed", "7", "--output", &p("corpus2.json"),
    ]);
    assert_eq!(
        std::fs::read(p("corpus.json")).unwrap(),
        std::fs::read(p("corpus2.json")).unwrap()
    );

    run_ok(&[
        "split", "--corpus", &p("corpus.json"), "--seed", "3", "--output", &p("split.json"),
    ]);

    run_ok(&[
        "train", "--split", &p("split.json"), "--model", "pop", "--output", &p("pop.json"),
    ]);
    let rnn_out = run_ok(&[
        "train", "--split", &p("split.json"), "--model", "rnn", "--dim", "8", "--hidden", "8",
        "--epochs", "2", "--negatives", "10", "--seed", "5", "--output", &p("rnn.json"),
    ]);
    assert!(rnn_out.contains("trained 2 epochs"), "{rnn_out}");

    let eval_out = run_ok(&[
        "evaluate", "--split", &p("split.json"), "--model", &p("rnn.json"), "--csv",
        &p("records.csv"), "--recall-k", "3,17",
    ]);
    assert!(eval_out.contains("recall@3 = "), "{eval_out}");
    assert!(eval_out.contains("recall@17 = "), "{eval_out}");

    let records = std::fs::read_to_string(p("records.csv")).unwrap();
    assert!(records.starts_with("playlist_id,position,rank\n"), "{records}");
    assert!(!records.contains('\r'), "line endings must be bare LF");

    // identical invocation, identical bytes
    run_ok(&[
        "evaluate", "--split", &p("split.json"), "--model", &p("rnn.json"), "--csv",
        &p("records2.csv"),
    ]);
    assert_eq!(
        std::fs::read(p("records.csv")).unwrap(),
        std::fs::read(p("records2.csv")).unwrap()
    );
}

#[test]
fn experiments_emit_deterministic_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| path_str(dir.path(), name);

    run_ok(&[
        "synth", "--kind", "bag", "--songs", "30", "--playlists", "60", "--min-len", "5",
        "--max-len", "8", "--artists", "4", "--seed", "2", "--output", &p("corpus.json"),
    ]);
    run_ok(&[
        "split", "--corpus", &p("corpus.json"), "--seed", "1", "--output", &p("split.json"),
    ]);

    let ctx_out = run_ok(&[
        "experiment", "context", "--split", &p("split.json"), "--seed", "9", "--csv",
        &p("ctx.csv"), "--svg", &p("ctx.svg"),
    ]);
    for model in ["random /", "popularity /", "item_cf /", "rnn /"] {
        assert!(ctx_out.contains(model), "{ctx_out}");
    }
    let csv = std::fs::read_to_string(p("ctx.csv")).unwrap();
    assert!(csv.starts_with("model,condition,position,count,q1,median,q3\n"), "{csv}");
    let svg = std::fs::read_to_string(p("ctx.svg")).unwrap();
    assert!(svg.contains("class=\"count\""));

    run_ok(&[
        "experiment", "context", "--split", &p("split.json"), "--seed", "9", "--csv",
        &p("ctx2.csv"),
    ]);
    assert_eq!(
        std::fs::read(p("ctx.csv")).unwrap(),
        std::fs::read(p("ctx2.csv")).unwrap()
    );

    let ord_out = run_ok(&[
        "experiment", "order", "--split", &p("split.json"), "--seed", "9", "--csv",
        &p("ord.csv"),
    ]);
    for condition in [
        "/ original",
        "/ shuffled_test",
        "/ shuffled_training",
        "/ shuffled_training_and_test",
    ] {
        assert!(ord_out.contains(condition), "{ord_out}");
    }
}

#[test]
fn ingest_applies_the_filter_flags() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| path_str(dir.path(), name);

    // 12 rotations over 8 songs, one artist per song: every playlist has 5
    // distinct artists and every song lands in enough playlists
    let mut lines = Vec::new();
    for i in 0..12 {
        let songs: Vec<String> = (0..5)
            .map(|k| {
                let s = (i + k) % 8;
                format!(r#"{{"artist":"Artist {s}","title":"Song {s}"}}"#)
            })
            .collect();
        lines.push(format!(r#"{{"id":"p{i}","songs":[{}]}}"#, songs.join(",")));
    }
    std::fs::write(p("raw.jsonl"), lines.join("\n")).unwrap();

    let out = run_ok(&[
        "ingest", "--input", &p("raw.jsonl"), "--output", &p("corpus.json"),
        "--min-song-freq", "2",
    ]);
    assert!(out.contains("12 playlists, 8 songs, 8 artists"), "{out}");

    // the default threshold of 10 playlists per song empties this corpus
    let strict = run(&[
        "ingest", "--input", &p("raw.jsonl"), "--output", &p("corpus2.json"),
    ]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&strict.stderr).contains("removed every playlist"),
        "{}",
        String::from_utf8_lossy(&strict.stderr)
    );
}

#[test]
fn exit_codes_separate_usage_data_and_numeric_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| path_str(dir.path(), name);

    // usage: missing required flags
    assert_eq!(run(&["evaluate", "--split", "x"]).status.code(), Some(1));
    // usage: unknown subcommand
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    // usage: malformed number
    assert_eq!(
        run(&["split", "--corpus", "x", "--seed", "NaN", "--output", "y"]).status.code(),
        Some(1)
    );
    // help and version are not errors
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));

    // data: nonexistent artifact
    let missing = run(&[
        "split", "--corpus", &p("nope.json"), "--seed", "1", "--output", &p("s.json"),
    ]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&missing.stderr).contains("nope.json"),
        "io errors must name the file"
    );

    // data: artifact of the wrong kind
    run_ok(&[
        "synth", "--kind", "bag", "--songs", "20", "--playlists", "30", "--min-len", "5",
        "--max-len", "6", "--artists", "4", "--seed", "0", "--output", &p("corpus.json"),
    ]);
    let wrong = run(&[
        "split", "--corpus", &p("corpus.json"), "--seed", "1", "--output", &p("split.json"),
    ]);
    assert_eq!(wrong.status.code(), Some(0), "corpus into split is correct");
    let confused = run(&[
        "evaluate", "--split", &p("corpus.json"), "--model", &p("corpus.json"), "--csv",
        &p("r.csv"),
    ]);
    assert_eq!(confused.status.code(), Some(2));

    // data: infeasible generator parameters
    let infeasible = run(&[
        "synth", "--kind", "bag", "--songs", "10", "--playlists", "5", "--min-len", "5",
        "--max-len", "50", "--artists", "4", "--seed", "0", "--output", &p("x.json"),
    ]);
    assert_eq!(infeasible.status.code(), Some(2));

    // numeric: scoring with a model whose outputs overflow must exit 3.
    // The saturating losses and clipped updates keep ordinary training
    // finite, so the overflow artifact is crafted directly.
    let split = nextsong::store::load_split(p("split.json")).unwrap();
    let v = split.train.vocab_size();
    let mut params = nextsong::rnn::RnnParams::zeros(v, 4, 4);
    params.b_update.fill(10.0); // push the update gate towards "replace"
    params.b_cand.fill(10.0); // candidate saturates near 1
    params.w_out.fill(f64::MAX); // dot with a non-zero hidden state overflows
    let model = nextsong::rnn::RnnModel {
        params,
        config: nextsong::rnn::RnnConfig::default(),
        vocab_hash: String::new(),
        epochs_trained: 0,
        train_loss_by_epoch: vec![],
        validation_loss_by_epoch: vec![],
        best_validation_loss: None,
    };
    nextsong::store::save_model(
        &nextsong::store::ModelArtifact::bound_to(
            nextsong::store::AnyModel::Rnn(model),
            &split.train,
        ),
        p("overflow.json"),
    )
    .unwrap();
    let overflow = run(&[
        "evaluate", "--split", &p("split.json"), "--model", &p("overflow.json"), "--csv",
        &p("o.csv"),
    ]);
    assert_eq!(
        overflow.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&overflow.stderr)
    );
}
