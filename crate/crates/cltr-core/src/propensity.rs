//! Examination propensities and inverse-propensity weights.
//!
//! PBM examination is a per-rank constant. For the cascade models the
//! examination probability at rank j is the product over earlier ranks of
//! the continuation probability implied by the click at that rank:
//!
//! - DCM:  prod_{i<j} (1 - c_i (1 - lambda_i))
//! - DBN:  prod_{i<j} gamma (1 - c_i s_i)
//! - CCM:  prod_{i<j} (alpha1 - c_i (alpha1 - alpha2 (1 - R_i) - alpha3 R_i))
//!
//! Rank 1 is always examined, so every cascade propensity vector starts
//! at exactly 1.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltr::{softmax, Architecture, Ranker};
use crate::types::{ClickLog, ClickModelParams, PropensityVector, QueryList};

/// Cap on inverse-propensity weights, bounding their variance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClippingPolicy {
    pub max_weight: f64,
}

impl Default for ClippingPolicy {
    fn default() -> Self {
        ClippingPolicy { max_weight: 100.0 }
    }
}

impl ClippingPolicy {
    pub fn new(max_weight: f64) -> Result<Self> {
        if !(max_weight >= 1.0) {
            return Err(Error::InvalidParam(format!(
                "max_weight={max_weight} must be >= 1"
            )));
        }
        Ok(ClippingPolicy { max_weight })
    }

    /// Smallest propensity that survives clipping unchanged.
    pub fn floor(&self) -> f64 {
        1.0 / self.max_weight
    }
}

/// Estimated relevance probabilities keyed by (query_id, doc_id).
/// Positions missing from the map fall back to 0.5.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RelevanceEstimate {
    pub probs: HashMap<String, HashMap<String, f64>>,
}

impl RelevanceEstimate {
    pub fn get(&self, query_id: &str, doc_id: &str) -> f64 {
        self.probs
            .get(query_id)
            .and_then(|m| m.get(doc_id))
            .copied()
            .unwrap_or(0.5)
    }

    pub fn insert(&mut self, query_id: &str, doc_id: &str, p: f64) {
        self.probs
            .entry(query_id.to_string())
            .or_default()
            .insert(doc_id.to_string(), p.clamp(0.0, 1.0));
    }
}

/// Where the CCM relevance probabilities R_i come from.
#[derive(Clone, Copy, Debug)]
pub enum RelevanceSource<'a> {
    /// True binary labels (simulation studies).
    Oracle,
    /// A learned estimate.
    Estimate(&'a RelevanceEstimate),
}

/// PBM examination: the per-rank parameter itself, independent of clicks.
pub fn pbm_propensity(theta: &[f64], list_length: usize) -> PropensityVector {
    assert!(
        theta.len() >= list_length,
        "theta has {} entries, list needs {list_length}",
        theta.len()
    );
    PropensityVector::raw(theta[..list_length].to_vec())
}

/// DCM examination given the session's clicks.
pub fn dcm_propensity(lambda: &[f64], clicks: &[u8]) -> PropensityVector {
    assert!(lambda.len() >= clicks.len());
    let mut values = Vec::with_capacity(clicks.len());
    let mut prod = 1.0;
    for (i, &c) in clicks.iter().enumerate() {
        values.push(prod);
        prod *= 1.0 - (c as f64) * (1.0 - lambda[i]);
    }
    PropensityVector::raw(values)
}

/// DBN examination given per-position satisfaction values and clicks.
pub fn dbn_propensity(gamma: f64, satisfaction: &[f64], clicks: &[u8]) -> PropensityVector {
    assert!(satisfaction.len() >= clicks.len());
    let mut values = Vec::with_capacity(clicks.len());
    let mut prod = 1.0;
    for (i, &c) in clicks.iter().enumerate() {
        values.push(prod);
        prod *= gamma * (1.0 - (c as f64) * satisfaction[i]);
    }
    PropensityVector::raw(values)
}

/// CCM examination given per-position relevance probabilities and clicks.
pub fn ccm_propensity(
    alpha1: f64,
    alpha2: f64,
    alpha3: f64,
    rel: &[f64],
    clicks: &[u8],
) -> PropensityVector {
    assert!(rel.len() >= clicks.len());
    let mut values = Vec::with_capacity(clicks.len());
    let mut prod = 1.0;
    for (i, &c) in clicks.iter().enumerate() {
        values.push(prod);
        prod *= alpha1 - (c as f64) * (alpha1 - alpha2 * (1.0 - rel[i]) - alpha3 * rel[i]);
    }
    PropensityVector::raw(values)
}

/// Session-conditional propensities for any model, resolving per-document
/// quantities (DBN satisfaction, CCM relevance) from the query list.
pub fn session_propensity(
    params: &ClickModelParams,
    list: &QueryList,
    clicks: &[u8],
    relevance: RelevanceSource<'_>,
) -> Result<PropensityVector> {
    let n = clicks.len();
    if n > list.len() {
        return Err(Error::InvalidInput(format!(
            "session has {n} positions but list {} has {}",
            list.query_id,
            list.len()
        )));
    }
    match params {
        ClickModelParams::Pbm { theta } => {
            if theta.len() < n {
                return Err(Error::InvalidParam(format!(
                    "theta covers {} positions, session needs {n}",
                    theta.len()
                )));
            }
            Ok(pbm_propensity(theta, n))
        }
        ClickModelParams::Dcm { lambda } => {
            if lambda.len() < n {
                return Err(Error::InvalidParam(format!(
                    "lambda covers {} positions, session needs {n}",
                    lambda.len()
                )));
            }
            Ok(dcm_propensity(lambda, clicks))
        }
        ClickModelParams::Dbn {
            gamma,
            satisfaction,
        } => {
            let mut s = Vec::with_capacity(n);
            for d in &list.docs[..n] {
                match satisfaction.get(&d.doc_id) {
                    Some(&v) => s.push(v),
                    None => {
                        return Err(Error::InvalidParam(format!(
                            "no satisfaction value for doc {}",
                            d.doc_id
                        )))
                    }
                }
            }
            Ok(dbn_propensity(*gamma, &s, clicks))
        }
        ClickModelParams::Ccm {
            alpha1,
            alpha2,
            alpha3,
        } => {
            let rel: Vec<f64> = match relevance {
                RelevanceSource::Oracle => {
                    list.docs[..n].iter().map(|d| d.relevance as f64).collect()
                }
                RelevanceSource::Estimate(est) => list.docs[..n]
                    .iter()
                    .map(|d| est.get(&list.query_id, &d.doc_id))
                    .collect(),
            };
            Ok(ccm_propensity(*alpha1, *alpha2, *alpha3, &rel, clicks))
        }
    }
}

/// Inverse-propensity weights: min(1/p, max_weight) at clicked positions,
/// zero elsewhere. A zero propensity maps to the cap.
pub fn ips_weights(prop: &PropensityVector, clicks: &[u8], policy: &ClippingPolicy) -> Vec<f64> {
    assert_eq!(prop.len(), clicks.len());
    prop.values
        .iter()
        .zip(clicks.iter())
        .map(|(&p, &c)| {
            if c == 0 {
                0.0
            } else if p <= 0.0 {
                policy.max_weight
            } else {
                (1.0 / p).min(policy.max_weight)
            }
        })
        .collect()
}

/// DCM continuation estimate from a click log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DcmLambdaEstimate {
    pub lambda: Vec<f64>,
    /// Number of sessions with a click at each position.
    pub support: Vec<usize>,
    /// Positions whose estimate was carried forward for lack of support.
    pub defaulted: Vec<bool>,
}

/// Maximum-likelihood continuation estimate for DCM:
/// lambda_j = #(sessions where rank j is clicked and is not the last click)
///          / #(sessions where rank j is clicked).
///
/// The estimator assumes the last click ends the session, which undercounts
/// continuations that produce no further click, so it is biased low.
/// Zero-support positions carry the last supported estimate forward and are
/// flagged.
pub fn mle_dcm_lambda(log: &ClickLog, k: usize) -> Result<DcmLambdaEstimate> {
    if log.is_empty() {
        return Err(Error::InvalidInput("empty click log".into()));
    }
    let mut clicked = vec![0usize; k];
    let mut continued = vec![0usize; k];
    for s in log.sessions() {
        let last = s.clicks.iter().rposition(|&c| c == 1);
        let Some(last) = last else { continue };
        for (j, &c) in s.clicks.iter().enumerate().take(k) {
            if c == 1 {
                clicked[j] += 1;
                if j < last {
                    continued[j] += 1;
                }
            }
        }
    }
    let mut lambda = vec![0.0; k];
    let mut defaulted = vec![false; k];
    let mut carry = 0.5;
    for j in 0..k {
        if clicked[j] > 0 {
            lambda[j] = continued[j] as f64 / clicked[j] as f64;
            carry = lambda[j];
        } else {
            lambda[j] = carry;
            defaulted[j] = true;
        }
    }
    Ok(DcmLambdaEstimate {
        lambda,
        support: clicked,
        defaulted,
    })
}

/// Configuration for the dual propensity/relevance estimator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DlaConfig {
    pub k: usize,
    pub steps: usize,
    pub batch: usize,
    pub lr_ranker: f64,
    pub lr_propensity: f64,
    pub clip: ClippingPolicy,
    pub seed: u64,
}

impl Default for DlaConfig {
    fn default() -> Self {
        DlaConfig {
            k: 20,
            steps: 3000,
            batch: 64,
            lr_ranker: 0.05,
            lr_propensity: 0.05,
            clip: ClippingPolicy::default(),
            seed: 1,
        }
    }
}

/// PBM propensity estimate, normalized so theta[0] = 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PbmThetaEstimate {
    pub theta: Vec<f64>,
    /// Number of sessions with a click at each position.
    pub support: Vec<usize>,
    /// Positions with no clicked session; their estimate carries no signal.
    pub unidentifiable: Vec<bool>,
}

/// Jointly estimate per-rank examination and a relevance ranker from clicks
/// under the PBM assumption, by alternating two listwise softmax
/// cross-entropy objectives where each side is weighted by the inverse of
/// the other's current estimate.
///
/// This is a deliberately small per-rank-parameter variant of the dual
/// learning approach: examination is a softmax over k position logits, the
/// relevance model is a linear scorer, and both are updated on every batch.
pub fn estimate_pbm_dla(
    log: &ClickLog,
    dataset: &[QueryList],
    config: &DlaConfig,
) -> Result<PbmThetaEstimate> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    if log.is_empty() {
        return Err(Error::InvalidInput("empty click log".into()));
    }
    let by_query: HashMap<&str, &QueryList> =
        dataset.iter().map(|q| (q.query_id.as_str(), q)).collect();
    let dim = dataset
        .first()
        .and_then(|q| q.docs.first())
        .map(|d| d.features.dim())
        .ok_or_else(|| Error::InvalidInput("empty dataset".into()))?;

    let mut ranker = Ranker::zeros(Architecture::Linear { dim });
    let mut logits = vec![0.0f64; config.k];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..log.len()).collect();
    order.shuffle(&mut rng);
    let mut cursor = 0usize;

    for step in 0..config.steps {
        let p_pos = softmax(&logits);
        let mut grad_logits = vec![0.0f64; config.k];
        let mut grad_ranker = ranker.zero_grad();
        let mut used = 0usize;

        for _ in 0..config.batch {
            if cursor >= order.len() {
                cursor = 0;
                order.shuffle(&mut rng);
            }
            let session = &log.sessions()[order[cursor]];
            cursor += 1;
            let Some(list) = by_query.get(session.query_id.as_str()) else {
                return Err(Error::UnknownQuery(session.query_id.clone()));
            };
            let n = session.clicks.len().min(list.len()).min(config.k);
            if n == 0 {
                continue;
            }
            let scores = ranker.score_list(list)?;
            let p_rel = softmax(&scores[..n]);
            let p_rel_max = p_rel.iter().cloned().fold(f64::MIN, f64::max);

            // ranker side: clicks weighted by inverse examination estimate
            let mut w = vec![0.0f64; n];
            // propensity side: clicks weighted by inverse relevance estimate
            let mut v = vec![0.0f64; n];
            for j in 0..n {
                if session.clicks[j] == 1 {
                    w[j] = (p_pos[0] / p_pos[j]).min(config.clip.max_weight);
                    v[j] = (p_rel_max / p_rel[j]).min(config.clip.max_weight);
                }
            }
            let w_sum: f64 = w.iter().sum();
            let v_sum: f64 = v.iter().sum();
            if w_sum == 0.0 {
                continue;
            }
            used += 1;

            let grad_scores: Vec<f64> =
                (0..n).map(|j| w_sum * p_rel[j] - w[j]).collect();
            ranker.accumulate_grad(list, &grad_scores, &mut grad_ranker)?;
            for (j, g) in grad_logits.iter_mut().enumerate() {
                let vj = if j < n { v[j] } else { 0.0 };
                *g += v_sum * p_pos[j] - vj;
            }
        }

        if used == 0 {
            continue;
        }
        let scale_r = config.lr_ranker / used as f64;
        ranker.apply_grad(&grad_ranker, scale_r);
        let scale_p = config.lr_propensity / used as f64;
        for (l, g) in logits.iter_mut().zip(grad_logits.iter()) {
            *l -= scale_p * g;
        }
        if logits.iter().any(|l| !l.is_finite()) {
            return Err(Error::Diverged(format!(
                "non-finite position logits at step {step}"
            )));
        }
    }

    let p_pos = softmax(&logits);
    let theta: Vec<f64> = p_pos.iter().map(|&p| p / p_pos[0]).collect();

    let mut support = vec![0usize; config.k];
    for s in log.sessions() {
        for (j, &c) in s.clicks.iter().enumerate().take(config.k) {
            if c == 1 {
                support[j] += 1;
            }
        }
    }
    let unidentifiable: Vec<bool> = support.iter().map(|&s| s == 0).collect();
    Ok(PbmThetaEstimate {
        theta,
        support,
        unidentifiable,
    })
}
