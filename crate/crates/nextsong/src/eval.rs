//! Position-wise rank evaluation: walk each test playlist left to right,
//! ask the model to score all candidates given the true prefix, and record
//! the rank of the song that actually came next.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{PlaylistCorpus, SongId};
use crate::error::{Error, Result};
use crate::models::{PlaylistModel, ScoreVector};

/// One prediction outcome: at `position` (1-based, so always ≥ 2) of the
/// test playlist, the true next song got `rank` among all candidates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRecord {
    pub playlist_id: String,
    pub position: u32,
    pub rank: u32,
}

/// Rank distribution of one playlist position: `count` records summarized
/// by quartiles (lower is better; 1 is a perfect prediction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionSummary {
    pub position: u32,
    pub count: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Everything measured for one (model, condition) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model_name: String,
    pub condition: String,
    pub vocab_size: usize,
    pub records: Vec<RankRecord>,
    pub summaries: Vec<PositionSummary>,
    /// `(K, recall@K)` pairs, ascending in K; empty when not requested.
    pub recall: Vec<(u32, f64)>,
}

impl EvalReport {
    /// Assemble a report: summaries and the recall table are computed here
    /// so they are always consistent with `records`.
    pub fn new(
        model_name: impl Into<String>,
        condition: impl Into<String>,
        vocab_size: usize,
        records: Vec<RankRecord>,
        recall_ks: &[u32],
    ) -> Result<Self> {
        let summaries = summarize_by_position(&records)?;
        let recall = recall_ks
            .iter()
            .map(|&k| Ok((k, recall_at_k(&records, k)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EvalReport {
            model_name: model_name.into(),
            condition: condition.into(),
            vocab_size,
            records,
            summaries,
            recall,
        })
    }

    /// Median rank over all records regardless of position.
    pub fn overall_median(&self) -> f64 {
        let mut ranks: Vec<u32> = self.records.iter().map(|r| r.rank).collect();
        ranks.sort_unstable();
        quantile(&ranks, 0.5)
    }
}

/// 1-based rank of `target` under the total order "score descending, id
/// ascending": 1 plus the number of strictly better scores plus the number
/// of equal scores belonging to smaller ids. Distinct targets always get
/// distinct ranks. Scores are finite by [`ScoreVector`]'s construction.
pub fn rank_of(scores: &ScoreVector, target: SongId) -> u32 {
    let values = scores.values();
    let t = values[target.index()];
    let mut rank = 1u32;
    for (s, &v) in values.iter().enumerate() {
        if v > t || (v == t && s < target.index()) {
            rank += 1;
        }
    }
    rank
}

/// Teacher-forced evaluation: for each test playlist of length L, emit L−1
/// records; the prediction at position k (2 ≤ k ≤ L) scores the *actual*
/// first k−1 songs as context, never the model's own predictions. Playlists
/// are independent, so they fan out across threads; output order is
/// canonical (playlist order, then position).
pub fn evaluate_model(
    model: &(impl PlaylistModel + ?Sized),
    test: &PlaylistCorpus,
) -> Result<Vec<RankRecord>> {
    if test.vocab_size() > model.vocab_size() {
        return Err(Error::Domain(format!(
            "test vocabulary ({} songs) exceeds the model's ({})",
            test.vocab_size(),
            model.vocab_size()
        )));
    }
    let per_playlist: Vec<Result<Vec<RankRecord>>> = test
        .playlists()
        .par_iter()
        .map(|playlist| {
            let mut records = Vec::with_capacity(playlist.len().saturating_sub(1));
            for k in 1..playlist.len() {
                let scores = model.score(&playlist.songs[..k])?;
                records.push(RankRecord {
                    playlist_id: playlist.id.clone(),
                    position: (k + 1) as u32,
                    rank: rank_of(&scores, playlist.songs[k]),
                });
            }
            Ok(records)
        })
        .collect();
    let mut records = Vec::new();
    for r in per_playlist {
        records.extend(r?);
    }
    Ok(records)
}

/// Group records by position and summarize each group's ranks by quartiles,
/// output ascending in position. Quantile q of n sorted ranks interpolates
/// linearly at index (n−1)·q.
pub fn summarize_by_position(records: &[RankRecord]) -> Result<Vec<PositionSummary>> {
    if records.is_empty() {
        return Err(Error::Domain("no records to summarize".into()));
    }
    let mut by_position: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for record in records {
        by_position.entry(record.position).or_default().push(record.rank);
    }
    Ok(by_position
        .into_iter()
        .map(|(position, mut ranks)| {
            ranks.sort_unstable();
            PositionSummary {
                position,
                count: ranks.len(),
                q1: quantile(&ranks, 0.25),
                median: quantile(&ranks, 0.5),
                q3: quantile(&ranks, 0.75),
            }
        })
        .collect())
}

fn quantile(sorted: &[u32], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let (a, b) = (sorted[lo] as f64, sorted[hi] as f64);
    a + (b - a) * (h - lo as f64)
}

/// Fraction of records whose rank is at most K.
pub fn recall_at_k(records: &[RankRecord], k: u32) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::Domain("no records for recall".into()));
    }
    if k == 0 {
        return Err(Error::Domain("recall needs K of at least 1".into()));
    }
    let hits = records.iter().filter(|r| r.rank <= k).count();
    Ok(hits as f64 / records.len() as f64)
}

/// CSV export of raw records: `playlist_id,position,rank`, header row, LF.
pub fn write_records_csv<W: Write>(records: &[RankRecord], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer
        .write_record(["playlist_id", "position", "rank"])
        .map_err(csv_err)?;
    for r in records {
        writer
            .write_record([
                r.playlist_id.as_str(),
                &r.position.to_string(),
                &r.rank.to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}

/// CSV export of per-position summaries for a set of runs:
/// `model,condition,position,count,q1,median,q3`, reals at 6 decimals,
/// header row, LF.
pub fn write_summary_csv<W: Write>(reports: &[EvalReport], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer
        .write_record(["model", "condition", "position", "count", "q1", "median", "q3"])
        .map_err(csv_err)?;
    for report in reports {
        for s in &report.summaries {
            writer
                .write_record([
                    report.model_name.as_str(),
                    report.condition.as_str(),
                    &s.position.to_string(),
                    &s.count.to_string(),
                    &format!("{:.6}", s.q1),
                    &format!("{:.6}", s.median),
                    &format!("{:.6}", s.q3),
                ])
                .map_err(csv_err)?;
        }
    }
    writer.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Artifact(format!("csv write failed: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::models::popularity_fit;

    fn fixture() -> PlaylistCorpus {
        let mk = |s: &str| format!(r#"{{"artist":"artist {s}","title":"song {s}"}}"#);
        let lines: Vec<String> = [
            ("p1", vec!["a", "b", "c", "d", "e"]),
            ("p2", vec!["a", "b", "d", "e", "f"]),
            ("p3", vec!["a", "c", "d", "e", "f"]),
        ]
        .iter()
        .map(|(id, songs)| {
            let songs: Vec<String> = songs.iter().map(|s| mk(s)).collect();
            format!(r#"{{"id":"{id}","songs":[{}]}}"#, songs.join(","))
        })
        .collect();
        parse_corpus(lines.join("\n").as_bytes()).unwrap()
    }

    fn scores(values: &[f64]) -> ScoreVector {
        ScoreVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn rank_extremes() {
        let s = scores(&[0.5, 2.0, 0.1]);
        assert_eq!(rank_of(&s, SongId(1)), 1);

        let mut v = vec![1.0; 7032];
        v[509] = -3.0;
        let s = scores(&v);
        assert_eq!(rank_of(&s, SongId(509)), 7032);
    }

    #[test]
    fn ties_order_by_ascending_id() {
        let s = scores(&[4.0, 4.0, 4.0, 4.0]);
        assert_eq!(rank_of(&s, SongId(0)), 1);
        assert_eq!(rank_of(&s, SongId(3)), 4);
    }

    #[test]
    fn ranks_are_a_bijection_under_ties() {
        // heavy ties: scores drawn from 3 values only
        let values: Vec<f64> = (0..40).map(|i| f64::from((i * 7 + 3) % 3)).collect();
        let s = scores(&values);
        let mut got: Vec<u32> = (0..40).map(|t| rank_of(&s, SongId(t))).collect();
        got.sort_unstable();
        assert_eq!(got, (1..=40).collect::<Vec<u32>>());
    }

    #[test]
    fn popularity_ranks_on_fixture_match_hand_computation() {
        // counts a3 b2 c2 d3 e3 f2; order a,d,e,b,c,f -> ranks 1,4,5,2,3,6
        // by id.  p1 targets b,c,d,e; p2 targets b,d,e,f; p3 c,d,e,f.
        let corpus = fixture();
        let model = popularity_fit(&corpus).unwrap();
        let records = evaluate_model(&model, &corpus).unwrap();
        let got: Vec<(&str, u32, u32)> = records
            .iter()
            .map(|r| (r.playlist_id.as_str(), r.position, r.rank))
            .collect();
        assert_eq!(
            got,
            vec![
                ("p1", 2, 4),
                ("p1", 3, 5),
                ("p1", 4, 2),
                ("p1", 5, 3),
                ("p2", 2, 4),
                ("p2", 3, 2),
                ("p2", 4, 3),
                ("p2", 5, 6),
                ("p3", 2, 5),
                ("p3", 3, 2),
                ("p3", 4, 3),
                ("p3", 5, 6),
            ]
        );
    }

    /// Scores 1.0 for the song that truly follows the context in its source
    /// playlist; a model this good must always rank the target first.
    struct CheatingOracle {
        corpus: PlaylistCorpus,
    }

    impl PlaylistModel for CheatingOracle {
        fn vocab_size(&self) -> usize {
            self.corpus.vocab_size()
        }

        fn score(&self, context: &[SongId]) -> Result<ScoreVector> {
            let mut values = vec![0.0; self.vocab_size()];
            for playlist in self.corpus.playlists() {
                let k = context.len();
                if playlist.len() > k && playlist.songs[..k] == *context {
                    values[playlist.songs[k].index()] = 1.0;
                    break;
                }
            }
            ScoreVector::new(values)
        }

        fn kind(&self) -> &'static str {
            "cheating_oracle"
        }
    }

    #[test]
    fn cheating_oracle_always_ranks_first() {
        // disjoint playlists so every prefix determines its next song
        let mk = |s: usize| format!(r#"{{"artist":"artist {s}","title":"song {s}"}}"#);
        let p1: Vec<String> = (0..5).map(mk).collect();
        let p2: Vec<String> = (5..10).map(mk).collect();
        let input = format!(
            "{{\"id\":\"p1\",\"songs\":[{}]}}\n{{\"id\":\"p2\",\"songs\":[{}]}}",
            p1.join(","),
            p2.join(",")
        );
        let corpus = parse_corpus(input.as_bytes()).unwrap();
        let model = CheatingOracle {
            corpus: corpus.clone(),
        };
        let records = evaluate_model(&model, &corpus).unwrap();
        assert_eq!(records.len(), 8);
        assert!(records.iter().all(|r| r.rank == 1));
    }

    #[test]
    fn record_counts_follow_playlist_lengths() {
        let corpus = fixture();
        let model = popularity_fit(&corpus).unwrap();
        let records = evaluate_model(&model, &corpus).unwrap();
        let expected: usize = corpus.playlists().iter().map(|p| p.len() - 1).sum();
        assert_eq!(records.len(), expected);

        let summaries = summarize_by_position(&records).unwrap();
        let total: usize = summaries.iter().map(|s| s.count).sum();
        assert_eq!(total, expected);
        for s in &summaries {
            let with_position = corpus
                .playlists()
                .iter()
                .filter(|p| p.len() as u32 >= s.position)
                .count();
            assert_eq!(s.count, with_position, "position {}", s.position);
        }
    }

    #[test]
    fn evaluation_is_repeatable() {
        let corpus = fixture();
        let model = popularity_fit(&corpus).unwrap();
        let a = evaluate_model(&model, &corpus).unwrap();
        let b = evaluate_model(&model, &corpus).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn vocabulary_mismatch_is_rejected() {
        let corpus = fixture();
        let input = r#"{"id":"q","songs":[{"artist":"z1","title":"z1"},{"artist":"z2","title":"z2"},{"artist":"z3","title":"z3"},{"artist":"z4","title":"z4"},{"artist":"z5","title":"z5"},{"artist":"z6","title":"z6"},{"artist":"z7","title":"z7"}]}"#;
        let bigger = parse_corpus(input.as_bytes()).unwrap();
        let model = popularity_fit(&corpus).unwrap();
        assert!(evaluate_model(&model, &bigger).is_err());
    }

    fn rec(position: u32, rank: u32) -> RankRecord {
        RankRecord {
            playlist_id: "p".into(),
            position,
            rank,
        }
    }

    #[test]
    fn quartiles_interpolate_linearly() {
        let records: Vec<RankRecord> = [1, 2, 3, 4].iter().map(|&r| rec(2, r)).collect();
        let s = &summarize_by_position(&records).unwrap()[0];
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
        assert_eq!(s.count, 4);

        let records: Vec<RankRecord> = [5, 1, 3, 2, 4].iter().map(|&r| rec(2, r)).collect();
        let s = &summarize_by_position(&records).unwrap()[0];
        assert_eq!((s.q1, s.median, s.q3), (2.0, 3.0, 4.0));
    }

    #[test]
    fn single_record_collapses_quartiles() {
        let s = &summarize_by_position(&[rec(3, 17)]).unwrap()[0];
        assert_eq!((s.q1, s.median, s.q3), (17.0, 17.0, 17.0));
        assert_eq!((s.position, s.count), (3, 1));
    }

    #[test]
    fn recall_examples() {
        let records: Vec<RankRecord> = [1, 5, 100].iter().map(|&r| rec(2, r)).collect();
        assert!((recall_at_k(&records, 10).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(recall_at_k(&records, 1000).unwrap(), 1.0);
        let no_hits: Vec<RankRecord> = [2, 3].iter().map(|&r| rec(2, r)).collect();
        assert_eq!(recall_at_k(&no_hits, 1).unwrap(), 0.0);
        assert!(recall_at_k(&[], 5).is_err());
        assert!(recall_at_k(&records, 0).is_err());
    }

    #[test]
    fn recall_is_monotone_in_k() {
        let records: Vec<RankRecord> = [3, 9, 27, 4, 1, 80].iter().map(|&r| rec(2, r)).collect();
        let mut last = 0.0;
        for k in 1..=81 {
            let r = recall_at_k(&records, k).unwrap();
            assert!(r >= last);
            last = r;
        }
        assert_eq!(last, 1.0);
    }

    #[test]
    fn csv_exports_are_byte_stable() {
        let corpus = fixture();
        let model = popularity_fit(&corpus).unwrap();
        let records = evaluate_model(&model, &corpus).unwrap();
        let report = EvalReport::new("popularity", "original", 6, records, &[1, 10]).unwrap();

        let mut records_csv = Vec::new();
        write_records_csv(&report.records, &mut records_csv).unwrap();
        let text = String::from_utf8(records_csv).unwrap();
        assert!(text.starts_with("playlist_id,position,rank\np1,2,4\np1,3,5\n"));
        assert!(!text.contains('\r'));

        let mut summary_csv = Vec::new();
        write_summary_csv(std::slice::from_ref(&report), &mut summary_csv).unwrap();
        let text = String::from_utf8(summary_csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "model,condition,position,count,q1,median,q3"
        );
        // position 2 ranks: 4,4,5 -> q1 4.0, median 4.0, q3 4.5
        assert_eq!(
            lines.next().unwrap(),
            "popularity,original,2,3,4.000000,4.000000,4.500000"
        );
    }

    #[test]
    fn report_recall_table() {
        let records: Vec<RankRecord> = [1, 5, 100].iter().map(|&r| rec(2, r)).collect();
        let report = EvalReport::new("m", "c", 200, records, &[1, 10, 200]).unwrap();
        assert_eq!(report.recall.len(), 3);
        assert_eq!(report.recall[0], (1, 1.0 / 3.0));
        assert_eq!(report.recall[2], (200, 1.0));
        assert_eq!(report.overall_median(), 5.0);
    }
}
