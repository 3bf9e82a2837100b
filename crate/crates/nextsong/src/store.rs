//! Versioned JSON artifacts. Corpora, splits and trained models are saved
//! inside a tagged envelope (`format`, `version`, `payload`) so loading the
//! wrong file kind, a future format revision, or a model fitted on a
//! different corpus fails with a clear error instead of garbage results.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write as _};
use std::path::Path;

use crate::corpus::{PlaylistCorpus, SongId, SplitCorpus};
use crate::error::{Error, Result};
use crate::models::{ItemCfModel, PlaylistModel, PopularityModel, ScoreVector};
use crate::rnn::RnnModel;

/// Bumped whenever a payload schema changes incompatibly.
pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    format: String,
    version: u32,
    payload: T,
}

/// Any trained model, tagged by kind so one artifact format covers all of
/// them. Delegates scoring to the wrapped model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum AnyModel {
    Popularity(PopularityModel),
    ItemCf(ItemCfModel),
    Rnn(RnnModel),
}

impl PlaylistModel for AnyModel {
    fn vocab_size(&self) -> usize {
        match self {
            AnyModel::Popularity(m) => m.vocab_size(),
            AnyModel::ItemCf(m) => m.vocab_size(),
            AnyModel::Rnn(m) => m.vocab_size(),
        }
    }

    fn score(&self, context: &[SongId]) -> Result<ScoreVector> {
        match self {
            AnyModel::Popularity(m) => m.score(context),
            AnyModel::ItemCf(m) => m.score(context),
            AnyModel::Rnn(m) => m.score(context),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            AnyModel::Popularity(m) => m.kind(),
            AnyModel::ItemCf(m) => m.kind(),
            AnyModel::Rnn(m) => m.kind(),
        }
    }
}

/// A model plus the hash of the vocabulary it was fitted on. Scoring a
/// corpus with a model fitted on a different song table would silently
/// permute every score, so loading re-checks the hash instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub vocab_hash: String,
    pub model: AnyModel,
}

impl ModelArtifact {
    /// Bind `model` to the vocabulary of the corpus it was fitted on.
    pub fn bound_to(model: AnyModel, train: &PlaylistCorpus) -> Self {
        ModelArtifact {
            vocab_hash: train.vocabulary_hash(),
            model,
        }
    }

    /// Error unless `corpus` carries exactly the vocabulary this model was
    /// fitted on.
    pub fn check_vocabulary(&self, corpus: &PlaylistCorpus) -> Result<()> {
        let found = corpus.vocabulary_hash();
        if self.vocab_hash != found {
            return Err(Error::Artifact(format!(
                "model was fitted on a different vocabulary (model hash {}, corpus hash {found})",
                self.vocab_hash
            )));
        }
        Ok(())
    }
}

pub fn save_corpus(corpus: &PlaylistCorpus, path: impl AsRef<Path>) -> Result<()> {
    save(path, "corpus", corpus)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<PlaylistCorpus> {
    let corpus: PlaylistCorpus = load(path, "corpus")?;
    corpus.validate()?;
    Ok(corpus)
}

pub fn save_split(split: &SplitCorpus, path: impl AsRef<Path>) -> Result<()> {
    save(path, "split", split)
}

pub fn load_split(path: impl AsRef<Path>) -> Result<SplitCorpus> {
    let split: SplitCorpus = load(path, "split")?;
    split.train.validate()?;
    split.test.validate()?;
    if split.train.songs() != split.test.songs() {
        return Err(Error::Artifact(
            "split sides disagree on the song table".into(),
        ));
    }
    Ok(split)
}

pub fn save_model(artifact: &ModelArtifact, path: impl AsRef<Path>) -> Result<()> {
    save(path, "model", artifact)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelArtifact> {
    load(path, "model")
}

fn save<T: Serialize>(path: impl AsRef<Path>, format: &str, payload: &T) -> Result<()> {
    let path = path.as_ref();
    let envelope = Envelope {
        format: format.to_string(),
        version: ARTIFACT_VERSION,
        payload,
    };
    let mut out =
        BufWriter::new(File::create(path).map_err(|e| Error::io_at(path, e))?);
    serde_json::to_writer(&mut out, &envelope)
        .map_err(|e| Error::Artifact(format!("could not encode {format} artifact: {e}")))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn load<T: DeserializeOwned>(path: impl AsRef<Path>, format: &str) -> Result<T> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| Error::io_at(path, e))?);
    // decode the envelope loosely first so a wrong `format` tag is reported
    // as such, not as some payload field mismatch
    let envelope: Envelope<serde_json::Value> = serde_json::from_reader(reader)
        .map_err(|e| Error::Artifact(format!("{} is not an artifact file: {e}", path.display())))?;
    if envelope.format != format {
        return Err(Error::Artifact(format!(
            "{} holds a {} artifact, expected {format}",
            path.display(),
            envelope.format
        )));
    }
    if envelope.version != ARTIFACT_VERSION {
        return Err(Error::Artifact(format!(
            "{} uses artifact version {}, this build reads {ARTIFACT_VERSION}",
            path.display(),
            envelope.version
        )));
    }
    serde_json::from_value(envelope.payload)
        .map_err(|e| Error::Artifact(format!("malformed {format} payload: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::split_corpus;
    use crate::experiments::{generate_synthetic_corpus, SynthKind};
    use crate::models::{cf_fit, popularity_fit};
    use crate::rnn::{rnn_fit, RnnConfig};

    fn corpus() -> PlaylistCorpus {
        generate_synthetic_corpus(SynthKind::Markov, 30, 40, 5, 8, 4, 2).unwrap()
    }

    #[test]
    fn corpus_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.json");
        let original = corpus();
        save_corpus(&original, &path).unwrap();
        assert_eq!(load_corpus(&path).unwrap(), original);
    }

    #[test]
    fn split_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("split.json");
        let split = split_corpus(&corpus(), 0.8, 1).unwrap();
        save_split(&split, &path).unwrap();
        assert_eq!(load_split(&path).unwrap(), split);
    }

    #[test]
    fn all_model_kinds_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let train = corpus();
        let validation = PlaylistCorpus::new(train.songs().to_vec(), vec![], vec![]).unwrap();
        let config = RnnConfig {
            embedding_dim: 4,
            hidden_dim: 4,
            epochs_max: 1,
            n_negatives: 3,
            ..RnnConfig::default()
        };
        let artifacts = [
            AnyModel::Popularity(popularity_fit(&train).unwrap()),
            AnyModel::ItemCf(cf_fit(&train).unwrap()),
            AnyModel::Rnn(rnn_fit(&train, &validation, &config).unwrap()),
        ];
        for (i, model) in artifacts.into_iter().enumerate() {
            let path = dir.path().join(format!("model{i}.json"));
            let artifact = ModelArtifact::bound_to(model, &train);
            save_model(&artifact, &path).unwrap();
            let loaded = load_model(&path).unwrap();
            assert_eq!(loaded, artifact);
            loaded.check_vocabulary(&train).unwrap();
        }
    }

    #[test]
    fn scoring_delegates_through_the_wrapper() {
        let train = corpus();
        let inner = popularity_fit(&train).unwrap();
        let wrapped = AnyModel::Popularity(inner.clone());
        assert_eq!(wrapped.kind(), "popularity");
        assert_eq!(wrapped.vocab_size(), inner.vocab_size());
        let context = [SongId(0), SongId(1)];
        assert_eq!(
            wrapped.score(&context).unwrap().values(),
            inner.score(&context).unwrap().values()
        );
    }

    #[test]
    fn vocabulary_mismatch_is_rejected() {
        let train = corpus();
        let other = generate_synthetic_corpus(SynthKind::Markov, 30, 40, 5, 8, 4, 99).unwrap();
        let artifact =
            ModelArtifact::bound_to(AnyModel::Popularity(popularity_fit(&train).unwrap()), &train);
        artifact.check_vocabulary(&train).unwrap();
        assert!(matches!(
            artifact.check_vocabulary(&other),
            Err(Error::Artifact(_))
        ));
    }

    #[test]
    fn wrong_format_tag_is_named_in_the_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.json");
        save_corpus(&corpus(), &path).unwrap();
        let err = load_split(&path).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("corpus") && message.contains("split"), "{message}");
    }

    #[test]
    fn future_versions_and_junk_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("weird.json");
        std::fs::write(
            &path,
            r#"{"format":"corpus","version":999,"payload":{}}"#,
        )
        .unwrap();
        assert!(matches!(load_corpus(&path), Err(Error::Artifact(_))));

        std::fs::write(&path, "not json at all").unwrap();
        assert!(matches!(load_corpus(&path), Err(Error::Artifact(_))));

        std::fs::write(&path, r#"{"format":"corpus","version":1,"payload":{"songs":[]}}"#)
            .unwrap();
        assert!(matches!(load_corpus(&path), Err(Error::Artifact(_))));
    }

    #[test]
    fn corrupted_split_tables_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("split.json");
        let mut split = split_corpus(&corpus(), 0.8, 1).unwrap();
        // swap the test side for a corpus with its own (different) table
        split.test = generate_synthetic_corpus(SynthKind::Bag, 10, 5, 5, 8, 3, 0).unwrap();
        save_split(&split, &path).unwrap();
        assert!(matches!(load_split(&path), Err(Error::Artifact(_))));
    }
}
