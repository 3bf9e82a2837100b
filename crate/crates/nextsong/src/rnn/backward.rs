use std::collections::BTreeMap;

use ndarray::{Array1, Array2, ArrayView1};

use super::forward::{forward_states, sigmoid};
use super::loss::{ranking_loss, LossKind};
use super::RnnParams;
use crate::corpus::SongId;
use crate::error::{Error, Result};

/// Gradient of one playlist's mean step loss, shaped like [`RnnParams`]
/// except that the embedding and output layers hold only the rows actually
/// touched (inputs, targets and sampled negatives); absent rows are zero.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub w_update: Array2<f64>,
    pub u_update: Array2<f64>,
    pub b_update: Array1<f64>,
    pub w_reset: Array2<f64>,
    pub u_reset: Array2<f64>,
    pub b_reset: Array1<f64>,
    pub w_cand: Array2<f64>,
    pub u_cand: Array2<f64>,
    pub b_cand: Array1<f64>,
    pub embedding_rows: BTreeMap<u32, Array1<f64>>,
    pub out_rows: BTreeMap<u32, Array1<f64>>,
    pub out_bias: BTreeMap<u32, f64>,
}

impl Gradients {
    pub(crate) fn zeros(d: usize, m: usize) -> Self {
        Gradients {
            w_update: Array2::zeros((m, d)),
            u_update: Array2::zeros((m, m)),
            b_update: Array1::zeros(m),
            w_reset: Array2::zeros((m, d)),
            u_reset: Array2::zeros((m, m)),
            b_reset: Array1::zeros(m),
            w_cand: Array2::zeros((m, d)),
            u_cand: Array2::zeros((m, m)),
            b_cand: Array1::zeros(m),
            embedding_rows: BTreeMap::new(),
            out_rows: BTreeMap::new(),
            out_bias: BTreeMap::new(),
        }
    }

    fn dense_squares(&self) -> f64 {
        [
            &self.w_update,
            &self.u_update,
            &self.w_reset,
            &self.u_reset,
            &self.w_cand,
            &self.u_cand,
        ]
        .iter()
        .map(|a| a.iter().map(|x| x * x).sum::<f64>())
        .sum::<f64>()
            + [&self.b_update, &self.b_reset, &self.b_cand]
                .iter()
                .map(|a| a.iter().map(|x| x * x).sum::<f64>())
                .sum::<f64>()
    }

    /// Euclidean norm over every entry, sparse rows included.
    pub fn global_norm(&self) -> f64 {
        let sparse: f64 = self
            .embedding_rows
            .values()
            .chain(self.out_rows.values())
            .map(|row| row.iter().map(|x| x * x).sum::<f64>())
            .sum::<f64>()
            + self.out_bias.values().map(|x| x * x).sum::<f64>();
        (self.dense_squares() + sparse).sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        for a in [
            &mut self.w_update,
            &mut self.u_update,
            &mut self.w_reset,
            &mut self.u_reset,
            &mut self.w_cand,
            &mut self.u_cand,
        ] {
            a.mapv_inplace(|x| x * factor);
        }
        for a in [&mut self.b_update, &mut self.b_reset, &mut self.b_cand] {
            a.mapv_inplace(|x| x * factor);
        }
        for row in self.embedding_rows.values_mut().chain(self.out_rows.values_mut()) {
            row.mapv_inplace(|x| x * factor);
        }
        for b in self.out_bias.values_mut() {
            *b *= factor;
        }
    }
}

/// `acc += u * v^T`
fn add_outer(acc: &mut Array2<f64>, u: &Array1<f64>, v: ArrayView1<f64>) {
    for (i, &ui) in u.iter().enumerate() {
        if ui != 0.0 {
            acc.row_mut(i).scaled_add(ui, &v);
        }
    }
}

/// Backpropagation through time for the mean per-step ranking loss of one
/// playlist: step t reads `playlist[..=t]` and ranks target
/// `playlist[t+1]` against `negatives[t]`. The caller supplies negatives
/// (and any length truncation) so the gradient is a pure function of its
/// arguments. Returns the gradients and the loss they differentiate.
pub fn compute_gradients(
    params: &RnnParams,
    playlist: &[SongId],
    negatives: &[Vec<u32>],
    kind: LossKind,
) -> Result<(Gradients, f64)> {
    let (v, d, m) = params.dims();
    if playlist.len() < 2 {
        return Err(Error::Domain(
            "gradient step needs a playlist of at least 2 songs".into(),
        ));
    }
    let steps = playlist.len() - 1;
    if negatives.len() != steps || negatives.iter().any(|n| n.is_empty()) {
        return Err(Error::Domain(format!(
            "expected {steps} non-empty negative lists"
        )));
    }
    if playlist.iter().any(|s| s.index() >= v)
        || negatives.iter().flatten().any(|&s| s as usize >= v)
    {
        return Err(Error::Domain("song outside the model vocabulary".into()));
    }

    let inputs = &playlist[..steps];
    let states = forward_states(params, inputs, &Array1::zeros(m))?;

    let mut grads = Gradients::zeros(d, m);
    // direct dLoss/dh_t from the score layer, before recurrent flow
    let mut dh_direct: Vec<Array1<f64>> = vec![Array1::zeros(m); steps];
    let mut total_loss = 0.0;
    let step_weight = 1.0 / steps as f64;

    for (t, state) in states.iter().enumerate() {
        let h = &state.hidden;
        let score = |s: u32| params.w_out.row(s as usize).dot(h) + params.b_out[s as usize];
        let target = playlist[t + 1].0;
        let target_score = score(target);
        let negative_scores: Vec<f64> = negatives[t].iter().map(|&s| score(s)).collect();
        total_loss += ranking_loss(target_score, &negative_scores, kind);

        // d step-loss / d score, averaged over negatives and steps
        let n = negative_scores.len() as f64;
        let mut d_target = 0.0;
        for (&neg, &neg_score) in negatives[t].iter().zip(&negative_scores) {
            let diff = neg_score - target_score;
            let d_neg = match kind {
                LossKind::Bpr => sigmoid(diff),
                LossKind::Top1 => {
                    let s1 = sigmoid(diff);
                    let s2 = sigmoid(neg_score * neg_score);
                    s1 * (1.0 - s1) + 2.0 * neg_score * s2 * (1.0 - s2)
                }
            } / n * step_weight;
            d_target -= match kind {
                LossKind::Bpr => sigmoid(diff),
                LossKind::Top1 => {
                    let s1 = sigmoid(diff);
                    s1 * (1.0 - s1)
                }
            } / n * step_weight;

            accumulate_output(&mut grads, params, neg, d_neg, h, &mut dh_direct[t]);
        }
        accumulate_output(&mut grads, params, target, d_target, h, &mut dh_direct[t]);
    }

    // backward through the recurrence
    let h0 = Array1::zeros(m);
    let mut dh = Array1::zeros(m);
    for t in (0..steps).rev() {
        dh += &dh_direct[t];
        let state = &states[t];
        let h_prev = if t == 0 { &h0 } else { &states[t - 1].hidden };
        let x = params.embedding.row(inputs[t].index());

        let dz = &dh * &(&state.candidate - h_prev);
        let dc = &dh * &state.update;
        let mut dh_prev = &dh * &state.update.mapv(|z| 1.0 - z);

        let da_c = dc * state.candidate.mapv(|c| 1.0 - c * c);
        add_outer(&mut grads.w_cand, &da_c, x);
        add_outer(&mut grads.u_cand, &da_c, state.reset_h.view());
        grads.b_cand += &da_c;

        let d_reset_h = params.u_cand.t().dot(&da_c);
        let dr = &d_reset_h * h_prev;
        dh_prev += &(&d_reset_h * &state.reset);

        let da_z = dz * state.update.mapv(|z| z * (1.0 - z));
        let da_r = dr * state.reset.mapv(|r| r * (1.0 - r));
        add_outer(&mut grads.w_update, &da_z, x);
        add_outer(&mut grads.u_update, &da_z, h_prev.view());
        grads.b_update += &da_z;
        add_outer(&mut grads.w_reset, &da_r, x);
        add_outer(&mut grads.u_reset, &da_r, h_prev.view());
        grads.b_reset += &da_r;
        dh_prev += &params.u_update.t().dot(&da_z);
        dh_prev += &params.u_reset.t().dot(&da_r);

        let dx = params.w_update.t().dot(&da_z)
            + params.w_reset.t().dot(&da_r)
            + params.w_cand.t().dot(&da_c);
        grads
            .embedding_rows
            .entry(inputs[t].0)
            .and_modify(|row| *row += &dx)
            .or_insert(dx);

        dh = dh_prev;
    }

    let loss = total_loss / steps as f64;
    if !loss.is_finite() || !grads.global_norm().is_finite() {
        return Err(Error::Numeric("non-finite gradient".into()));
    }
    Ok((grads, loss))
}

fn accumulate_output(
    grads: &mut Gradients,
    params: &RnnParams,
    song: u32,
    d_score: f64,
    h: &Array1<f64>,
    dh: &mut Array1<f64>,
) {
    let m = h.len();
    grads
        .out_rows
        .entry(song)
        .or_insert_with(|| Array1::zeros(m))
        .scaled_add(d_score, h);
    *grads.out_bias.entry(song).or_insert(0.0) += d_score;
    dh.scaled_add(d_score, &params.w_out.row(song as usize));
}
