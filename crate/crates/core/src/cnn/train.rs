//! Per-sample SGD with a held-out probability trace.

use rand::seq::SliceRandom;

use super::{backward, cross_entropy, forward, make_dataset_with, CnnConfig, CnnParams, LabeledSignal};
use crate::error::{Error, Result};
use crate::noise::trial_rng;
use crate::scalar::Real;

const STREAM_TRAIN: u64 = 1;
const STREAM_HELD_OUT: u64 = 2;
const STREAM_INIT: u64 = 3;
const STREAM_SHUFFLE: u64 = 4;

/// Mean probability of the correct class on the held-out batch, per pattern,
/// after `iteration` SGD steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub probability: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct TrainOutcome<T: Real> {
    pub params: CnnParams<T>,
    pub trace: Vec<TraceRow>,
    /// First evaluated iteration from which both patterns stay above the
    /// threshold until the end of training.
    pub first_sustained: Option<usize>,
    pub threshold: f64,
}

impl<T: Real> TrainOutcome<T> {
    pub fn final_probability(&self) -> [f64; 2] {
        self.trace.last().map_or([0.0; 2], |r| r.probability)
    }
}

/// Mean correct-class probability for each pattern; `NaN` for a pattern absent from `batch`.
pub fn evaluate<T: Real>(params: &CnnParams<T>, batch: &[LabeledSignal<T>]) -> Result<[f64; 2]> {
    let mut sum = [0.0; 2];
    let mut count = [0usize; 2];
    for s in batch {
        let p = forward(&s.x, params)?.probabilities[s.class].to_f64_lossy();
        sum[s.class] += p;
        count[s.class] += 1;
    }
    Ok([sum[0] / count[0] as f64, sum[1] / count[1] as f64])
}

pub fn first_sustained(trace: &[TraceRow], threshold: f64) -> Option<usize> {
    let mut first = None;
    for row in trace.iter().rev() {
        if row.probability.iter().all(|&p| p > threshold) {
            first = Some(row.iteration);
        } else {
            break;
        }
    }
    first
}

pub fn train<T: Real>(config: &CnnConfig, seed: u64) -> Result<TrainOutcome<T>> {
    config.validate()?;
    let train_set: Vec<LabeledSignal<T>> = make_dataset_with(
        config.realizations_per_epoch,
        config.input_len,
        &config.data,
        &mut trial_rng(seed, STREAM_TRAIN),
    )?;
    let held_out: Vec<LabeledSignal<T>> =
        make_dataset_with(config.eval_size, config.input_len, &config.data, &mut trial_rng(seed, STREAM_HELD_OUT))?;
    let mut params = CnnParams::random(
        config.mode,
        config.channels,
        config.filter_len,
        T::lit(config.init_scale),
        &mut trial_rng(seed, STREAM_INIT),
    );
    let lr = T::lit(config.learning_rate);
    let mut shuffle_rng = trial_rng(seed, STREAM_SHUFFLE);
    let mut order: Vec<usize> = (0..train_set.len()).collect();

    let mut trace = vec![TraceRow {
        iteration: 0,
        probability: evaluate(&params, &held_out)?,
    }];
    let mut iteration = 0;
    for _ in 0..config.epochs {
        order.shuffle(&mut shuffle_rng);
        for &i in &order {
            let sample = &train_set[i];
            let (grad, pass) = backward(sample, &params)?;
            iteration += 1;
            if !cross_entropy(&pass, &sample.t).is_finite() {
                return Err(Error::DivergenceDetected(iteration));
            }
            params.descend(&grad, lr);
            if iteration % config.eval_every == 0 || iteration == config.iterations() {
                trace.push(TraceRow {
                    iteration,
                    probability: evaluate(&params, &held_out)?,
                });
            }
        }
    }
    if params.validate().is_err() {
        return Err(Error::DivergenceDetected(iteration));
    }
    let threshold = 0.9;
    Ok(TrainOutcome {
        first_sustained: first_sustained(&trace, threshold),
        params,
        trace,
        threshold,
    })
}
