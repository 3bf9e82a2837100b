use serde::{Deserialize, Serialize};

use super::forward::{forward_states, sigmoid};
use super::RnnParams;
use crate::corpus::SongId;
use crate::error::{Error, Result};

/// The two pairwise ranking objectives. Both compare the target's score
/// against each sampled negative; lower is better, both are non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    /// `mean_j softplus(s_j - s_pos)`, i.e. `-mean_j log sigmoid(s_pos - s_j)`.
    #[default]
    Bpr,
    /// `mean_j sigmoid(s_j - s_pos) + sigmoid(s_j^2)`; the second term
    /// regularizes negative scores towards zero.
    Top1,
}

impl std::fmt::Display for LossKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LossKind::Bpr => "bpr",
            LossKind::Top1 => "top1",
        })
    }
}

impl std::str::FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bpr" => Ok(LossKind::Bpr),
            "top1" => Ok(LossKind::Top1),
            other => Err(Error::Domain(format!(
                "unknown loss kind {other:?}, expected bpr or top1"
            ))),
        }
    }
}

/// `ln(1 + e^x)` without overflow for large `|x|`.
pub(crate) fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Ranking loss of one prediction step: the target's score against the
/// sampled negatives' scores.
pub fn ranking_loss(target_score: f64, negative_scores: &[f64], kind: LossKind) -> f64 {
    assert!(
        !negative_scores.is_empty(),
        "ranking loss needs at least one negative"
    );
    let n = negative_scores.len() as f64;
    match kind {
        LossKind::Bpr => {
            negative_scores
                .iter()
                .map(|&s| softplus(s - target_score))
                .sum::<f64>()
                / n
        }
        LossKind::Top1 => {
            negative_scores
                .iter()
                .map(|&s| sigmoid(s - target_score) + sigmoid(s * s))
                .sum::<f64>()
                / n
        }
    }
}

/// Mean per-step ranking loss of one playlist under fixed negatives:
/// step t (0-based) scores target `playlist[t+1]` against `negatives[t]`
/// after reading `playlist[..=t]`. Returns `(loss, steps)`.
pub(crate) fn playlist_loss(
    params: &RnnParams,
    playlist: &[SongId],
    negatives: &[Vec<u32>],
    kind: LossKind,
) -> Result<(f64, usize)> {
    let steps = playlist.len() - 1;
    debug_assert!(steps >= 1 && negatives.len() == steps);
    let states = forward_states(params, &playlist[..steps], &ndarray::Array1::zeros(params.dims().2))?;
    let mut total = 0.0;
    for (t, state) in states.iter().enumerate() {
        let score = |s: u32| params.w_out.row(s as usize).dot(&state.hidden) + params.b_out[s as usize];
        let target = score(playlist[t + 1].0);
        let negative_scores: Vec<f64> = negatives[t].iter().map(|&s| score(s)).collect();
        total += ranking_loss(target, &negative_scores, kind);
    }
    if !total.is_finite() {
        return Err(Error::Numeric("non-finite playlist loss".into()));
    }
    Ok((total / steps as f64, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bpr_of_tied_scores_is_ln_two() {
        let loss = ranking_loss(1.3, &[1.3], LossKind::Bpr);
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn bpr_saturates_when_target_wins_big() {
        let loss = ranking_loss(20.0, &[0.0], LossKind::Bpr);
        assert!(loss < 1e-8);
        assert!(loss > 0.0);
    }

    #[test]
    fn top1_of_all_zero_scores_is_one() {
        let loss = ranking_loss(0.0, &[0.0, 0.0, 0.0], LossKind::Top1);
        assert_eq!(loss, 1.0);
    }

    #[test]
    fn extreme_scores_stay_finite() {
        for kind in [LossKind::Bpr, LossKind::Top1] {
            for (t, n) in [(-745.0, 745.0), (745.0, -745.0), (1e308, -1e308)] {
                let loss = ranking_loss(t, &[n], kind);
                assert!(loss.is_finite(), "{kind} at ({t},{n}) gave {loss}");
            }
        }
    }

    #[test]
    fn mean_over_negatives() {
        // two negatives, one tied and one far below: mean of ln 2 and ~0
        let loss = ranking_loss(0.0, &[0.0, -40.0], LossKind::Bpr);
        assert!((loss - std::f64::consts::LN_2 / 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn losses_are_non_negative(
            target in -50.0f64..50.0,
            negatives in proptest::collection::vec(-50.0f64..50.0, 1..20)
        ) {
            prop_assert!(ranking_loss(target, &negatives, LossKind::Bpr) >= 0.0);
            prop_assert!(ranking_loss(target, &negatives, LossKind::Top1) >= 0.0);
        }

        #[test]
        fn bpr_decreases_as_target_pulls_ahead(
            negatives in proptest::collection::vec(-5.0f64..5.0, 1..10),
            margin in 0.1f64..10.0
        ) {
            let low = ranking_loss(0.0, &negatives, LossKind::Bpr);
            let high = ranking_loss(margin, &negatives, LossKind::Bpr);
            prop_assert!(high < low);
        }
    }
}
