use ndarray::{Array1, Array2, ArrayView1};

use super::RnnParams;
use crate::corpus::SongId;
use crate::error::{Error, Result};

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Everything one recurrence step produces that the backward pass reads.
/// `reset_h` is `reset ⊙ h_prev`, the candidate gate's recurrent input.
pub(crate) struct StepState {
    pub update: Array1<f64>,
    pub reset: Array1<f64>,
    pub reset_h: Array1<f64>,
    pub candidate: Array1<f64>,
    pub hidden: Array1<f64>,
}

/// Run the recurrence over `inputs` starting from `h0`, keeping per-step
/// gate activations. Fails with the 1-based step index if a hidden state
/// goes non-finite.
pub(crate) fn forward_states(
    params: &RnnParams,
    inputs: &[SongId],
    h0: &Array1<f64>,
) -> Result<Vec<StepState>> {
    let mut states: Vec<StepState> = Vec::with_capacity(inputs.len());
    for (t, &song) in inputs.iter().enumerate() {
        let x = params.embedding.row(song.index());
        let h_prev = states.last().map_or(h0, |s| &s.hidden);

        let update = gate(&params.w_update, &params.u_update, &params.b_update, x, h_prev);
        let reset = gate(&params.w_reset, &params.u_reset, &params.b_reset, x, h_prev);
        let reset_h = &reset * h_prev;
        let candidate = (params.w_cand.dot(&x) + params.u_cand.dot(&reset_h) + &params.b_cand)
            .mapv(f64::tanh);
        let hidden =
            update.mapv(|z| 1.0 - z) * h_prev + &update * &candidate;
        if hidden.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite hidden state at step {}",
                t + 1
            )));
        }
        states.push(StepState {
            update,
            reset,
            reset_h,
            candidate,
            hidden,
        });
    }
    Ok(states)
}

fn gate(
    w: &Array2<f64>,
    u: &Array2<f64>,
    b: &Array1<f64>,
    x: ArrayView1<f64>,
    h_prev: &Array1<f64>,
) -> Array1<f64> {
    (w.dot(&x) + u.dot(h_prev) + b).mapv(sigmoid)
}

/// Full forward pass: the gated-recurrent-unit recurrence
///
/// ```text
/// z_t = sigmoid(W_z x_t + U_z h_prev + b_z)        update gate
/// r_t = sigmoid(W_r x_t + U_r h_prev + b_r)        reset gate
/// c_t = tanh(W_c x_t + U_c (r_t * h_prev) + b_c)   candidate state
/// h_t = (1 - z_t) * h_prev + z_t * c_t
/// ```
///
/// with `x_t` the embedding row of the t-th song, followed by the score
/// rows `W_o h_t + b_o`. Returns all hidden states and the T×V score
/// matrix. Non-finite values fail with the offending step index.
pub fn gru_forward(
    params: &RnnParams,
    sequence: &[SongId],
    h0: &Array1<f64>,
) -> Result<(Vec<Array1<f64>>, Array2<f64>)> {
    if sequence.is_empty() {
        return Err(Error::Domain("forward pass needs at least one song".into()));
    }
    let (v, _, m) = params.dims();
    if let Some(bad) = sequence.iter().find(|s| s.index() >= v) {
        return Err(Error::Domain(format!(
            "song {bad} outside the model vocabulary of {v}"
        )));
    }
    if h0.len() != m {
        return Err(Error::Domain(format!(
            "h0 has {} entries, hidden size is {m}",
            h0.len()
        )));
    }

    let states = forward_states(params, sequence, h0)?;
    let mut scores = Array2::zeros((sequence.len(), v));
    for (t, state) in states.iter().enumerate() {
        let row = params.w_out.dot(&state.hidden) + &params.b_out;
        if row.iter().any(|s| !s.is_finite()) {
            return Err(Error::Numeric(format!("non-finite score at step {}", t + 1)));
        }
        scores.row_mut(t).assign(&row);
    }
    Ok((states.into_iter().map(|s| s.hidden).collect(), scores))
}
