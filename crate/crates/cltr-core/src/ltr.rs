//! Listwise ranker training with inverse-propensity weighting.
//!
//! The scorer is either a linear model or a small feedforward net with a
//! scalar output. The training loss is softmax cross-entropy over each
//! result list, weighted per position: by clipped inverse propensities
//! (IPS mode), by raw clicks (the biased baseline), or by the uniform
//! distribution over relevant documents (the full-information skyline).

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::PreparedDataset;
use crate::error::{Error, Result};
use crate::exec;
use crate::numeric::mix_seed_u64;
use crate::propensity::{ips_weights, session_propensity, ClippingPolicy, RelevanceEstimate, RelevanceSource};
use crate::types::{ClickLog, ClickModelParams, FeatureVector, QueryList};

/// Numerically stable softmax.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

fn log_sum_exp(scores: &[f64]) -> f64 {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Elu,
    Relu,
    Tanh,
}

impl Activation {
    fn apply(&self, z: f64) -> f64 {
        match self {
            Activation::Elu => {
                if z > 0.0 {
                    z
                } else {
                    z.exp() - 1.0
                }
            }
            Activation::Relu => z.max(0.0),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the activated value.
    fn deriv_from_output(&self, a: f64) -> f64 {
        match self {
            Activation::Elu => {
                if a > 0.0 {
                    1.0
                } else {
                    a + 1.0
                }
            }
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - a * a,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Architecture {
    Linear {
        dim: usize,
    },
    Feedforward {
        dim: usize,
        hidden: Vec<usize>,
        activation: Activation,
        dropout: f64,
    },
}

impl Architecture {
    pub fn input_dim(&self) -> usize {
        match self {
            Architecture::Linear { dim } => *dim,
            Architecture::Feedforward { dim, .. } => *dim,
        }
    }

    fn layer_sizes(&self) -> Vec<(usize, usize)> {
        match self {
            Architecture::Linear { dim } => vec![(*dim, 1)],
            Architecture::Feedforward { dim, hidden, .. } => {
                let mut sizes = Vec::new();
                let mut prev = *dim;
                for &h in hidden {
                    sizes.push((prev, h));
                    prev = h;
                }
                sizes.push((prev, 1));
                sizes
            }
        }
    }

    fn dropout(&self) -> f64 {
        match self {
            Architecture::Linear { .. } => 0.0,
            Architecture::Feedforward { dropout, .. } => *dropout,
        }
    }

    fn activation(&self) -> Activation {
        match self {
            Architecture::Linear { .. } => Activation::Elu,
            Architecture::Feedforward { activation, .. } => *activation,
        }
    }
}

/// One dense layer, weights stored row-major (out x in).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub w: Vec<f64>,
    pub b: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
}

impl Layer {
    fn affine(&self, x: &[f64]) -> Vec<f64> {
        let mut out = self.b.clone();
        for r in 0..self.rows {
            let row = &self.w[r * self.cols..(r + 1) * self.cols];
            let mut acc = 0.0;
            for (wi, xi) in row.iter().zip(x.iter()) {
                acc += wi * xi;
            }
            out[r] += acc;
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub steps: usize,
    pub seed: u64,
}

/// Parametric scoring function f(x) -> one finite real per document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ranker {
    pub arch: Architecture,
    pub layers: Vec<Layer>,
    #[serde(default)]
    pub meta: TrainMeta,
}

/// Per-layer gradient accumulator, same shapes as the ranker's layers.
#[derive(Clone, Debug)]
pub struct GradBuffer {
    pub layers: Vec<(Vec<f64>, Vec<f64>)>,
}

impl GradBuffer {
    fn add(&mut self, other: &GradBuffer) {
        for (a, b) in self.layers.iter_mut().zip(other.layers.iter()) {
            for (x, y) in a.0.iter_mut().zip(b.0.iter()) {
                *x += y;
            }
            for (x, y) in a.1.iter_mut().zip(b.1.iter()) {
                *x += y;
            }
        }
    }

    fn norm(&self) -> f64 {
        let mut acc = 0.0;
        for (w, b) in &self.layers {
            acc += w.iter().map(|v| v * v).sum::<f64>();
            acc += b.iter().map(|v| v * v).sum::<f64>();
        }
        acc.sqrt()
    }
}

/// Cached forward pass for one document, used by backprop.
struct DocTape {
    /// Input to each layer.
    layer_inputs: Vec<Vec<f64>>,
    /// Post-activation (pre-dropout) outputs of hidden layers.
    hidden_acts: Vec<Vec<f64>>,
    /// Inverted-dropout masks (0 or 1/(1-p)) for hidden layers, when sampled.
    masks: Vec<Option<Vec<f64>>>,
}

impl Ranker {
    /// Random initialization (He-style), deterministic in the seed.
    pub fn new(arch: Architecture, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = arch
            .layer_sizes()
            .iter()
            .map(|&(cols, rows)| {
                let std = (2.0 / cols as f64).sqrt();
                let w = (0..rows * cols)
                    .map(|_| {
                        let g: f64 = rng.sample(rand_distr::StandardNormal);
                        g * std
                    })
                    .collect();
                Layer {
                    w,
                    b: vec![0.0; rows],
                    rows,
                    cols,
                }
            })
            .collect();
        Ranker {
            arch,
            layers,
            meta: TrainMeta { steps: 0, seed },
        }
    }

    /// All-zero weights.
    pub fn zeros(arch: Architecture) -> Self {
        let layers = arch
            .layer_sizes()
            .iter()
            .map(|&(cols, rows)| Layer {
                w: vec![0.0; rows * cols],
                b: vec![0.0; rows],
                rows,
                cols,
            })
            .collect();
        Ranker {
            arch,
            layers,
            meta: TrainMeta::default(),
        }
    }

    /// Linear ranker from explicit weights.
    pub fn linear(weights: Vec<f64>, bias: f64) -> Self {
        let dim = weights.len();
        Ranker {
            arch: Architecture::Linear { dim },
            layers: vec![Layer {
                w: weights,
                b: vec![bias],
                rows: 1,
                cols: dim,
            }],
            meta: TrainMeta::default(),
        }
    }

    /// Deterministic inference score (dropout disabled).
    pub fn score(&self, features: &FeatureVector) -> Result<f64> {
        if features.dim() != self.arch.input_dim() {
            return Err(Error::DimMismatch {
                expected: self.arch.input_dim(),
                got: features.dim(),
            });
        }
        let (score, _) = self.forward(features.values(), None);
        Ok(score)
    }

    /// One finite score per document, in list order.
    pub fn score_list(&self, list: &QueryList) -> Result<Vec<f64>> {
        list.docs.iter().map(|d| self.score(&d.features)).collect()
    }

    fn forward(&self, x: &[f64], mut dropout_rng: Option<&mut ChaCha8Rng>) -> (f64, DocTape) {
        let n_layers = self.layers.len();
        let n_hidden = n_layers - 1;
        // dropout applies to the outputs of the last two hidden layers
        let dropout_from = n_hidden.saturating_sub(2);
        let rate = self.arch.dropout();
        let act = self.arch.activation();

        let mut cur = x.to_vec();
        let mut tape = DocTape {
            layer_inputs: Vec::with_capacity(n_layers),
            hidden_acts: Vec::with_capacity(n_hidden),
            masks: Vec::with_capacity(n_hidden),
        };
        for (i, layer) in self.layers.iter().enumerate() {
            tape.layer_inputs.push(cur.clone());
            let z = layer.affine(&cur);
            if i + 1 == n_layers {
                cur = z;
            } else {
                let a: Vec<f64> = z.iter().map(|&v| act.apply(v)).collect();
                tape.hidden_acts.push(a.clone());
                let mask = match dropout_rng.as_deref_mut() {
                    Some(rng) if rate > 0.0 && i >= dropout_from => {
                        let keep = 1.0 - rate;
                        Some(
                            a.iter()
                                .map(|_| {
                                    if rng.random::<f64>() < keep {
                                        1.0 / keep
                                    } else {
                                        0.0
                                    }
                                })
                                .collect::<Vec<f64>>(),
                        )
                    }
                    _ => None,
                };
                cur = match &mask {
                    Some(m) => a.iter().zip(m.iter()).map(|(v, m)| v * m).collect(),
                    None => a,
                };
                tape.masks.push(mask);
            }
        }
        (cur[0], tape)
    }

    /// Fresh zero gradient buffer matching this ranker's shapes.
    pub fn zero_grad(&self) -> GradBuffer {
        GradBuffer {
            layers: self
                .layers
                .iter()
                .map(|l| (vec![0.0; l.w.len()], vec![0.0; l.b.len()]))
                .collect(),
        }
    }

    fn backward(&self, tape: &DocTape, d_score: f64, grads: &mut GradBuffer) {
        let act = self.arch.activation();
        let n_layers = self.layers.len();
        let mut delta = vec![d_score];
        for i in (0..n_layers).rev() {
            let layer = &self.layers[i];
            let input = &tape.layer_inputs[i];
            let (gw, gb) = &mut grads.layers[i];
            for r in 0..layer.rows {
                gb[r] += delta[r];
                let row = &mut gw[r * layer.cols..(r + 1) * layer.cols];
                for (g, xi) in row.iter_mut().zip(input.iter()) {
                    *g += delta[r] * xi;
                }
            }
            if i > 0 {
                let mut d_in = vec![0.0; layer.cols];
                for r in 0..layer.rows {
                    let row = &layer.w[r * layer.cols..(r + 1) * layer.cols];
                    for (di, wi) in d_in.iter_mut().zip(row.iter()) {
                        *di += delta[r] * wi;
                    }
                }
                if let Some(mask) = &tape.masks[i - 1] {
                    for (di, m) in d_in.iter_mut().zip(mask.iter()) {
                        *di *= m;
                    }
                }
                for (di, &a) in d_in.iter_mut().zip(tape.hidden_acts[i - 1].iter()) {
                    *di *= act.deriv_from_output(a);
                }
                delta = d_in;
            }
        }
    }

    /// Forward all docs of a list (optionally with dropout), then backprop
    /// `grad_scores` into `grads`. Used by the trainers.
    pub fn forward_backward(
        &self,
        list: &QueryList,
        dropout_rng: Option<&mut ChaCha8Rng>,
        grad_of_scores: impl FnOnce(&[f64]) -> Result<(f64, Vec<f64>)>,
        grads: &mut GradBuffer,
    ) -> Result<f64> {
        let mut rng = dropout_rng;
        let mut scores = Vec::with_capacity(list.len());
        let mut tapes = Vec::with_capacity(list.len());
        for d in &list.docs {
            if d.features.dim() != self.arch.input_dim() {
                return Err(Error::DimMismatch {
                    expected: self.arch.input_dim(),
                    got: d.features.dim(),
                });
            }
            let (s, tape) = self.forward(d.features.values(), rng.as_deref_mut());
            scores.push(s);
            tapes.push(tape);
        }
        let (loss, grad_scores) = grad_of_scores(&scores)?;
        for (tape, &g) in tapes.iter().zip(grad_scores.iter()) {
            self.backward(tape, g, grads);
        }
        Ok(loss)
    }

    /// Inference forward + backprop without dropout, accumulating into `grads`.
    pub fn accumulate_grad(
        &self,
        list: &QueryList,
        grad_scores: &[f64],
        grads: &mut GradBuffer,
    ) -> Result<()> {
        assert_eq!(grad_scores.len(), list.len());
        for (d, &g) in list.docs.iter().zip(grad_scores.iter()) {
            let (_, tape) = self.forward(d.features.values(), None);
            self.backward(&tape, g, grads);
        }
        Ok(())
    }

    /// w -= scale * g
    pub fn apply_grad(&mut self, grads: &GradBuffer, scale: f64) {
        for (layer, (gw, gb)) in self.layers.iter_mut().zip(grads.layers.iter()) {
            for (w, g) in layer.w.iter_mut().zip(gw.iter()) {
                *w -= scale * g;
            }
            for (b, g) in layer.b.iter_mut().zip(gb.iter()) {
                *b -= scale * g;
            }
        }
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let f = std::fs::File::create(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(f), self)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let f = std::fs::File::open(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(serde_json::from_reader(std::io::BufReader::new(f))?)
    }
}

fn check_finite(scores: &[f64]) -> Result<()> {
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Diverged("non-finite score".into()));
    }
    Ok(())
}

/// IPS-weighted listwise softmax cross-entropy and its gradient:
/// loss = sum_j w_j * (-log softmax(s)_j), grad = (sum_j w_j) p - w.
pub fn ips_listwise_loss(
    scores: &[f64],
    clicks: &[u8],
    weights: &[f64],
) -> Result<(f64, Vec<f64>)> {
    assert_eq!(scores.len(), clicks.len());
    assert_eq!(scores.len(), weights.len());
    check_finite(scores)?;
    let lse = log_sum_exp(scores);
    let p = softmax(scores);
    let w_sum: f64 = weights.iter().sum();
    let mut loss = 0.0;
    for (&w, &s) in weights.iter().zip(scores.iter()) {
        if w != 0.0 {
            loss += w * (lse - s);
        }
    }
    let grad: Vec<f64> = p
        .iter()
        .zip(weights.iter())
        .map(|(&pj, &wj)| w_sum * pj - wj)
        .collect();
    Ok((loss, grad))
}

/// Full-information softmax cross-entropy against the uniform distribution
/// over relevant documents.
pub fn full_info_loss(scores: &[f64], relevance: &[u8]) -> Result<(f64, Vec<f64>)> {
    assert_eq!(scores.len(), relevance.len());
    check_finite(scores)?;
    let n_rel: f64 = relevance.iter().map(|&r| r as f64).sum();
    if n_rel == 0.0 {
        return Err(Error::NoRelevantDoc);
    }
    let lse = log_sum_exp(scores);
    let p = softmax(scores);
    let mut loss = 0.0;
    let mut grad = Vec::with_capacity(scores.len());
    for ((&r, &s), &pj) in relevance.iter().zip(scores.iter()).zip(p.iter()) {
        let q = r as f64 / n_rel;
        if q > 0.0 {
            loss += q * (lse - s);
        }
        grad.push(pj - q);
    }
    Ok((loss, grad))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainMode {
    /// IPS-weighted clicks.
    Ips,
    /// Raw clicks, no correction (the biased baseline).
    NoIps,
    /// True relevance labels (the skyline).
    FullInfo,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainConfig {
    pub mode: TrainMode,
    pub arch: Architecture,
    pub learning_rate: f64,
    /// Sessions (or queries in full-info mode) per SGD step.
    pub batch: usize,
    /// Maximum number of SGD steps.
    pub steps: usize,
    /// Stop once this many clicks have been consumed (IPS / NoIps modes).
    #[serde(default)]
    pub click_budget: Option<u64>,
    pub clip: ClippingPolicy,
    pub seed: u64,
    /// Evaluate test nDCG@10 every this many steps.
    pub eval_every: usize,
    #[serde(default)]
    pub grad_norm_cap: Option<f64>,
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0 || self.batch == 0 || self.steps == 0 || self.eval_every == 0
        {
            return Err(Error::InvalidParam(
                "learning_rate, batch, steps, eval_every must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Propensity model used by the IPS trainer.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropensitySpec {
    pub params: ClickModelParams,
    /// Relevance estimate for the CCM plug-in; oracle labels when absent.
    #[serde(default)]
    pub relevance_estimate: Option<RelevanceEstimate>,
}

impl PropensitySpec {
    pub fn oracle(params: ClickModelParams) -> Self {
        PropensitySpec {
            params,
            relevance_estimate: None,
        }
    }

    fn source(&self) -> RelevanceSource<'_> {
        match &self.relevance_estimate {
            Some(e) => RelevanceSource::Estimate(e),
            None => RelevanceSource::Oracle,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub clicks_consumed: u64,
    pub ndcg_at_10: f64,
}

#[derive(Clone, Debug)]
pub struct TrainOutput {
    pub ranker: Ranker,
    /// Test nDCG@10 at the evaluation cadence.
    pub curve: Vec<CurvePoint>,
    pub final_ndcg: f64,
    /// Mean training loss per step, for divergence checks.
    pub loss_trace: Vec<f64>,
}

pub fn write_curve_csv(curve: &[CurvePoint], path: &std::path::Path) -> Result<()> {
    use std::io::Write;
    let mut f = std::fs::File::create(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    writeln!(f, "clicks_consumed,ndcg_at_10").map_err(|e| Error::io("curve", e))?;
    for p in curve {
        writeln!(f, "{},{}", p.clicks_consumed, p.ndcg_at_10)
            .map_err(|e| Error::io("curve", e))?;
    }
    Ok(())
}

/// Train a ranker by SGD. In `Ips`/`NoIps` modes the unit of sampling is a
/// logged session; in `FullInfo` it is a training query. Deterministic for
/// a fixed config, including under parallel batch evaluation.
pub fn train(
    dataset: &PreparedDataset,
    log: Option<&ClickLog>,
    propensity: Option<&PropensitySpec>,
    config: &TrainConfig,
) -> Result<TrainOutput> {
    use rand::seq::SliceRandom;

    config.validate()?;
    let by_query: HashMap<&str, &QueryList> = dataset
        .train
        .iter()
        .map(|q| (q.query_id.as_str(), q))
        .collect();

    let full_info = matches!(config.mode, TrainMode::FullInfo);
    let log = match (full_info, log) {
        (true, _) => None,
        (false, Some(l)) => Some(l),
        (false, None) => {
            return Err(Error::InvalidInput(
                "ips/no_ips training requires a click log".into(),
            ))
        }
    };
    if matches!(config.mode, TrainMode::Ips) && propensity.is_none() {
        return Err(Error::InvalidInput(
            "ips training requires a propensity spec".into(),
        ));
    }

    let n_items = match log {
        Some(l) => l.len(),
        None => dataset.train.len(),
    };
    if n_items == 0 {
        return Err(Error::InvalidInput("nothing to train on".into()));
    }

    let mut ranker = Ranker::new(config.arch.clone(), config.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed_u64(config.seed, &[0xA11CE]));
    let mut order: Vec<usize> = (0..n_items).collect();
    order.shuffle(&mut rng);
    let mut cursor = 0usize;

    let mut clicks_consumed: u64 = 0;
    let mut curve = Vec::new();
    let mut loss_trace = Vec::with_capacity(config.steps);

    let eval = |ranker: &Ranker, clicks: u64, curve: &mut Vec<CurvePoint>| -> Result<()> {
        let ndcg = crate::eval::mean_ndcg_at_k(ranker, &dataset.test, 10)?;
        curve.push(CurvePoint {
            clicks_consumed: clicks,
            ndcg_at_10: ndcg,
        });
        Ok(())
    };

    for step in 0..config.steps {
        // pick the batch sequentially so the sampling stream is stable
        let mut batch_idx = Vec::with_capacity(config.batch);
        for _ in 0..config.batch {
            if cursor >= order.len() {
                cursor = 0;
                order.shuffle(&mut rng);
            }
            batch_idx.push(order[cursor]);
            cursor += 1;
        }

        // per-item gradients in parallel, reduced in index order
        let results: Vec<Result<(f64, GradBuffer, u64)>> =
            exec::map_indexed(batch_idx.len(), |slot| {
                let idx = batch_idx[slot];
                let mut grads = ranker.zero_grad();
                let mut dropout_rng = ChaCha8Rng::seed_from_u64(mix_seed_u64(
                    config.seed,
                    &[step as u64, slot as u64],
                ));
                match config.mode {
                    TrainMode::FullInfo => {
                        let list = &dataset.train[idx];
                        let rel: Vec<u8> = list.docs.iter().map(|d| d.relevance).collect();
                        let loss = ranker.forward_backward(
                            list,
                            Some(&mut dropout_rng),
                            |scores| full_info_loss(scores, &rel),
                            &mut grads,
                        )?;
                        Ok((loss, grads, 1))
                    }
                    TrainMode::Ips | TrainMode::NoIps => {
                        let session = &log.unwrap().sessions()[idx];
                        let list = *by_query
                            .get(session.query_id.as_str())
                            .ok_or_else(|| Error::UnknownQuery(session.query_id.clone()))?;
                        let n = session.clicks.len().min(list.len());
                        let clicks = &session.clicks[..n];
                        let weights: Vec<f64> = match config.mode {
                            TrainMode::NoIps => {
                                clicks.iter().map(|&c| c as f64).collect()
                            }
                            TrainMode::Ips => {
                                let spec = propensity.unwrap();
                                let prop = session_propensity(
                                    &spec.params,
                                    list,
                                    clicks,
                                    spec.source(),
                                )?;
                                ips_weights(&prop, clicks, &config.clip)
                            }
                            TrainMode::FullInfo => unreachable!(),
                        };
                        let loss = ranker.forward_backward(
                            list,
                            Some(&mut dropout_rng),
                            |scores| ips_listwise_loss(&scores[..n], clicks, &weights),
                            &mut grads,
                        )?;
                        Ok((loss, grads, session.click_count()))
                    }
                }
            });

        let mut total = ranker.zero_grad();
        let mut loss_sum = 0.0;
        for r in results {
            let (loss, grads, clicks) = r?;
            loss_sum += loss;
            total.add(&grads);
            clicks_consumed += clicks;
        }
        let mean_loss = loss_sum / config.batch as f64;
        if !mean_loss.is_finite() {
            return Err(Error::Diverged(format!(
                "non-finite loss {mean_loss} at step {step}"
            )));
        }
        loss_trace.push(mean_loss);

        let mut scale = config.learning_rate / config.batch as f64;
        if let Some(cap) = config.grad_norm_cap {
            let norm = total.norm() / config.batch as f64;
            if norm > cap {
                scale *= cap / norm;
            }
        }
        ranker.apply_grad(&total, scale);
        ranker.meta.steps += 1;

        let budget_hit = config
            .click_budget
            .map(|b| clicks_consumed >= b)
            .unwrap_or(false);
        if (step + 1) % config.eval_every == 0 || step + 1 == config.steps || budget_hit {
            eval(&ranker, clicks_consumed, &mut curve)?;
        }
        if budget_hit {
            break;
        }
    }
    if curve.is_empty() {
        eval(&ranker, clicks_consumed, &mut curve)?;
    }
    ranker.meta.seed = config.seed;

    let final_ndcg = curve.last().map(|p| p.ndcg_at_10).unwrap_or(0.0);
    Ok(TrainOutput {
        ranker,
        curve,
        final_ndcg,
        loss_trace,
    })
}
