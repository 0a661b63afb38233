//! Iterated linear prediction of missing negative phase-encode lines in
//! frequency-weighted k-space.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kspace::{AcquisitionMask, ComplexGrid};

/// `r(l) = (1/(N-l))·Σ x(i)·x(i+l)` for `l = 0..=max_lag`.
pub fn unbiased_autocorr(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = x.len();
    if max_lag >= n {
        return Err(Error::param(format!(
            "lag {max_lag} needs more than {n} samples"
        )));
    }
    Ok((0..=max_lag)
        .map(|l| {
            let s: f64 = x[..n - l].iter().zip(&x[l..]).map(|(a, b)| a * b).sum();
            s / (n - l) as f64
        })
        .collect())
}

/// Prediction-error filter for one quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraturePredictor {
    /// `b(1..=L)`: `x(i) + Σ b(l)·x(i-l)` is the prediction error.
    pub coeffs: Vec<f64>,
    pub reflection: Vec<f64>,
    pub residual_power: f64,
}

impl QuadraturePredictor {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Filter that always predicts zero.
    pub fn silent(order: usize) -> Self {
        Self {
            coeffs: vec![0.0; order],
            reflection: vec![0.0; order],
            residual_power: 0.0,
        }
    }
}

/// Levinson–Durbin solution of the order-`order` Yule–Walker system.
///
/// Fails when `r(0) <= 0` or the recursion meets a non-positive error
/// power (the sequence is not a valid autocorrelation).
pub fn levinson(r: &[f64], order: usize) -> Result<QuadraturePredictor> {
    if order == 0 {
        return Err(Error::param("prediction order must be at least 1"));
    }
    if r.len() < order + 1 {
        return Err(Error::param(format!(
            "order {order} needs {} autocorrelation lags, got {}",
            order + 1,
            r.len()
        )));
    }
    if !(r[0] > 0.0) {
        return Err(Error::Degenerate(format!(
            "zero-power autocorrelation r(0) = {}",
            r[0]
        )));
    }
    let mut a: Vec<f64> = Vec::with_capacity(order);
    let mut reflection = Vec::with_capacity(order);
    let mut power = r[0];
    for m in 1..=order {
        let acc = r[m] + (1..m).map(|l| a[l - 1] * r[m - l]).sum::<f64>();
        let k = -acc / power;
        let prev = a.clone();
        for l in 1..m {
            a[l - 1] = prev[l - 1] + k * prev[m - l - 1];
        }
        a.push(k);
        reflection.push(k);
        power *= 1.0 - k * k;
        if !(power > 0.0) {
            return Err(Error::Numerical(format!(
                "non-positive prediction error power at order {m}"
            )));
        }
    }
    Ok(QuadraturePredictor {
        coeffs: a,
        reflection,
        residual_power: power,
    })
}

/// Highest-order stable Levinson fit up to `order`, or `None` if order 1
/// already fails.
fn levinson_stable(r: &[f64], order: usize) -> Option<QuadraturePredictor> {
    (1..=order).rev().find_map(|l| levinson(r, l).ok())
}

/// `x̂ = -Σ b(l)·x(last-l+1)`.
pub fn predict_next(x: &[f64], state: &QuadraturePredictor) -> Result<f64> {
    let l = state.order();
    if x.len() < l {
        return Err(Error::param(format!(
            "order-{l} prediction needs {l} samples, got {}",
            x.len()
        )));
    }
    let last = x.len() - 1;
    Ok(-state
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, b)| b * x[last - i])
        .sum::<f64>())
}

/// Predictors for the real and imaginary parts of one complex sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorState {
    pub order: usize,
    pub coeffs_re: Vec<f64>,
    pub coeffs_im: Vec<f64>,
    pub residual_power: f64,
}

impl PredictorState {
    /// Fit order-`order` predictors to both quadratures of `seq`.
    /// A silent quadrature predicts zero; an unstable fit falls back to the
    /// highest stable order, zero-padded.
    pub fn fit(seq: &[Complex64], order: usize) -> Result<Self> {
        let fit_part = |part: Vec<f64>| -> Result<QuadraturePredictor> {
            let r = unbiased_autocorr(&part, order)?;
            if r[0] == 0.0 {
                return Ok(QuadraturePredictor::silent(order));
            }
            let mut q = levinson_stable(&r, order).ok_or_else(|| {
                Error::Numerical("no stable predictor for a non-silent sequence".into())
            })?;
            q.coeffs.resize(order, 0.0);
            Ok(q)
        };
        let re = fit_part(seq.iter().map(|z| z.re).collect())?;
        let im = fit_part(seq.iter().map(|z| z.im).collect())?;
        Ok(Self {
            order,
            residual_power: re.residual_power + im.residual_power,
            coeffs_re: re.coeffs,
            coeffs_im: im.coeffs,
        })
    }

    fn half(coeffs: &[f64]) -> QuadraturePredictor {
        QuadraturePredictor {
            coeffs: coeffs.to_vec(),
            reflection: Vec::new(),
            residual_power: 0.0,
        }
    }

    pub fn predict(&self, seq: &[Complex64]) -> Result<Complex64> {
        let re: Vec<f64> = seq.iter().map(|z| z.re).collect();
        let im: Vec<f64> = seq.iter().map(|z| z.im).collect();
        Ok(Complex64::new(
            predict_next(&re, &Self::half(&self.coeffs_re))?,
            predict_next(&im, &Self::half(&self.coeffs_im))?,
        ))
    }
}

/// Order used when `lines` fractional negative lines are available.
pub fn order_schedule(lines: usize) -> usize {
    lines.div_ceil(2).max(1)
}

/// How the predictor evolves over the extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpMode {
    /// Refit with a growing order before every step.
    Iterated,
    /// One predictor fitted on the acquired lines, reused for every step.
    Fixed,
}

/// Column sequence from `k_max` down to `-q`.
fn column_sequence(grid: &ComplexGrid, col: usize, q: usize) -> Vec<Complex64> {
    let stop = grid.center_k() - q;
    (stop..grid.ny()).rev().map(|r| grid.at(r, col)).collect()
}

fn extrapolate_column(
    seq: &mut Vec<Complex64>,
    q: usize,
    steps: usize,
    mode: LpMode,
) -> Result<()> {
    if seq.iter().all(|z| z.norm_sqr() == 0.0) {
        seq.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), steps));
        return Ok(());
    }
    let fixed = match mode {
        LpMode::Fixed => Some(PredictorState::fit(
            seq,
            order_schedule(q).min(seq.len() - 1),
        )?),
        LpMode::Iterated => None,
    };
    for r in 1..=steps {
        let state = match &fixed {
            Some(s) => s.clone(),
            None => PredictorState::fit(seq, order_schedule(q + r - 1).min(seq.len() - 1))?,
        };
        let next = state.predict(seq)?;
        seq.push(next);
    }
    Ok(())
}

/// Predict `steps` lines below `k = -q` in every column of the weighted
/// partial k-space. Acquired lines are left untouched.
pub fn extrapolate(
    weighted: &ComplexGrid,
    mask: &AcquisitionMask,
    steps: usize,
    mode: LpMode,
) -> Result<ComplexGrid> {
    mask.check_grid(weighted)?;
    let q = mask.q();
    let room = weighted.center_k() - q;
    if steps > room {
        return Err(Error::param(format!(
            "{steps} steps exceed the {room} missing phase-encode lines"
        )));
    }
    if steps == 0 {
        return Ok(weighted.clone());
    }
    let columns: Vec<Vec<Complex64>> = (0..weighted.nx())
        .into_par_iter()
        .map(|c| {
            let mut seq = column_sequence(weighted, c, q);
            extrapolate_column(&mut seq, q, steps, mode)?;
            Ok(seq)
        })
        .collect::<Result<_>>()?;
    let mut out = weighted.clone();
    let base = columns[0].len() - steps;
    for (c, seq) in columns.iter().enumerate() {
        for r in 1..=steps {
            *out.at_mut(weighted.center_k() - q - r, c) = seq[base + r - 1];
        }
    }
    Ok(out)
}

/// Growing-order iterated extrapolation.
pub fn iterated_extrapolate(
    weighted: &ComplexGrid,
    mask: &AcquisitionMask,
    steps: usize,
) -> Result<ComplexGrid> {
    extrapolate(weighted, mask, steps, LpMode::Iterated)
}
