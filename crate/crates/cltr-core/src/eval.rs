//! Ranking metrics, significance testing, and click log-likelihood
//! based method selection.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::ltr::{softmax, Ranker};
use crate::numeric::student_t_two_sided;
use crate::propensity::{ccm_propensity, dbn_propensity, dcm_propensity, pbm_propensity};
use crate::types::{ClickLog, ClickModelParams, QueryList};

/// Probability floor applied before taking logs, keeping clipped or zero
/// propensities from producing -inf terms.
pub const LL_PROB_FLOOR: f64 = 1e-6;

/// nDCG@k with binary gains and 1/log2(rank+1) discounts. Ties in score
/// keep their input order. Errors if nothing is relevant.
pub fn ndcg_at_k(scores: &[f64], relevance: &[f64], k: usize) -> Result<f64> {
    assert_eq!(scores.len(), relevance.len());
    if !relevance.iter().any(|&r| r > 0.0) {
        return Err(Error::NoRelevantDoc);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let dcg: f64 = order
        .iter()
        .take(k)
        .enumerate()
        .map(|(rank, &i)| relevance[i] / ((rank + 2) as f64).log2())
        .sum();
    let mut ideal: Vec<f64> = relevance.to_vec();
    ideal.sort_by(|a, b| b.total_cmp(a));
    let idcg: f64 = ideal
        .iter()
        .take(k)
        .enumerate()
        .map(|(rank, r)| r / ((rank + 2) as f64).log2())
        .sum();
    Ok(dcg / idcg)
}

/// nDCG@k of a ranker on one list, breaking score ties by ascending doc_id.
pub fn ndcg_for_list(ranker: &Ranker, list: &QueryList, k: usize) -> Result<f64> {
    let scores = ranker.score_list(list)?;
    let mut order: Vec<usize> = (0..list.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| list.docs[a].doc_id.cmp(&list.docs[b].doc_id))
    });
    let reordered_scores: Vec<f64> = (0..order.len()).map(|r| -(r as f64)).collect();
    let reordered_rel: Vec<f64> = order.iter().map(|&i| list.docs[i].relevance as f64).collect();
    ndcg_at_k(&reordered_scores, &reordered_rel, k)
}

/// Mean nDCG@k over a set of queries, in parallel with an ordered reduce.
pub fn mean_ndcg_at_k(ranker: &Ranker, queries: &[QueryList], k: usize) -> Result<f64> {
    if queries.is_empty() {
        return Err(Error::InvalidInput("no queries to evaluate".into()));
    }
    let per: Vec<Result<f64>> =
        exec::map_indexed(queries.len(), |i| ndcg_for_list(ranker, &queries[i], k));
    let mut total = 0.0;
    for v in per {
        total += v?;
    }
    Ok(total / queries.len() as f64)
}

/// Per-query evaluation of one trained ranker.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: String,
    pub repeat: usize,
    pub per_query: Vec<(String, f64)>,
    pub mean: f64,
}

impl EvalReport {
    pub fn compute(
        ranker: &Ranker,
        queries: &[QueryList],
        k: usize,
        method: &str,
        repeat: usize,
    ) -> Result<Self> {
        let per: Vec<Result<f64>> =
            exec::map_indexed(queries.len(), |i| ndcg_for_list(ranker, &queries[i], k));
        let mut per_query = Vec::with_capacity(queries.len());
        let mut total = 0.0;
        for (q, v) in queries.iter().zip(per) {
            let v = v?;
            total += v;
            per_query.push((q.query_id.clone(), v));
        }
        let mean = total / queries.len().max(1) as f64;
        Ok(EvalReport {
            method: method.to_string(),
            repeat,
            per_query,
            mean,
        })
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "query_id,ndcg10").map_err(|e| Error::io("report", e))?;
        for (q, v) in &self.per_query {
            writeln!(w, "{q},{v}").map_err(|e| Error::io("report", e))?;
        }
        Ok(())
    }
}

/// Paired two-sided t-test result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub p: f64,
}

/// Paired two-sided t-test over per-repeat means. Zero variance of the
/// differences yields p = 0 when the means differ and p = 1 otherwise.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidInput(
            "paired_t_test needs two equal-length samples of size >= 2".into(),
        ));
    }
    let n = a.len() as f64;
    let diffs: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
    if var == 0.0 {
        return Ok(if mean != 0.0 {
            TTest {
                t: f64::INFINITY * mean.signum(),
                p: 0.0,
            }
        } else {
            TTest { t: 0.0, p: 1.0 }
        });
    }
    let t = mean / (var.sqrt() / n.sqrt());
    let p = student_t_two_sided(t, n - 1.0);
    Ok(TTest { t, p })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizerKind {
    Softmax,
    Sigmoid,
    ExpMinMax,
}

impl std::str::FromStr for NormalizerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "softmax" => Ok(NormalizerKind::Softmax),
            "sigmoid" => Ok(NormalizerKind::Sigmoid),
            "exp-minmax" | "exp_minmax" => Ok(NormalizerKind::ExpMinMax),
            other => Err(Error::InvalidParam(format!("unknown normalizer {other}"))),
        }
    }
}

/// Map ranker scores to relevance probabilities in (0, 1].
///
/// The exponential min-max variant scales scores to [0, 1] and maps them
/// through exp(z - 1), giving range [1/e, 1]; a constant list maps to
/// all 0.5. This exact formula is a reconstruction: the procedure it
/// implements is described only by name in its source, so the formula is
/// pinned here by its required properties (monotone, bounded away from 0,
/// max at 1).
pub fn normalize_scores(scores: &[f64], kind: NormalizerKind) -> Vec<f64> {
    let clamp = |v: f64| v.clamp(1e-12, 1.0);
    match kind {
        NormalizerKind::Softmax => softmax(scores).into_iter().map(clamp).collect(),
        NormalizerKind::Sigmoid => scores
            .iter()
            .map(|&s| clamp(1.0 / (1.0 + (-s).exp())))
            .collect(),
        NormalizerKind::ExpMinMax => {
            let min = scores.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if max - min <= 0.0 {
                return vec![0.5; scores.len()];
            }
            scores
                .iter()
                .map(|&s| clamp(((s - min) / (max - min) - 1.0).exp()))
                .collect()
        }
    }
}

/// Session-conditional examination probabilities for the likelihood,
/// with the ranker-derived relevance probabilities plugged in as the CCM
/// relevance input.
fn examination_for_ll(
    params: &ClickModelParams,
    list: &QueryList,
    clicks: &[u8],
    rel_probs: &[f64],
) -> Result<Vec<f64>> {
    let n = clicks.len();
    Ok(match params {
        ClickModelParams::Pbm { theta } => {
            if theta.len() < n {
                return Err(Error::InvalidParam(format!(
                    "theta covers {} positions, session needs {n}",
                    theta.len()
                )));
            }
            pbm_propensity(theta, n).values
        }
        ClickModelParams::Dcm { lambda } => {
            if lambda.len() < n {
                return Err(Error::InvalidParam(format!(
                    "lambda covers {} positions, session needs {n}",
                    lambda.len()
                )));
            }
            dcm_propensity(lambda, clicks).values
        }
        ClickModelParams::Dbn {
            gamma,
            satisfaction,
        } => {
            let mut s = Vec::with_capacity(n);
            for d in &list.docs[..n] {
                s.push(*satisfaction.get(&d.doc_id).ok_or_else(|| {
                    Error::InvalidParam(format!("no satisfaction value for doc {}", d.doc_id))
                })?);
            }
            dbn_propensity(*gamma, &s, clicks).values
        }
        ClickModelParams::Ccm {
            alpha1,
            alpha2,
            alpha3,
        } => ccm_propensity(*alpha1, *alpha2, *alpha3, &rel_probs[..n], clicks).values,
    })
}

/// Total click log-likelihood of a log under one click model, with
/// relevance probabilities taken from the ranker's normalized scores:
/// P(C_j = 1 | c_<j) = P(E_j = 1 | c_<j) * rel_j, probabilities floored
/// at 1e-6 before the log.
pub fn click_log_likelihood(
    log: &ClickLog,
    queries: &[QueryList],
    ranker: &Ranker,
    params: &ClickModelParams,
    normalizer: NormalizerKind,
) -> Result<f64> {
    let by_query: HashMap<&str, usize> = queries
        .iter()
        .enumerate()
        .map(|(i, q)| (q.query_id.as_str(), i))
        .collect();
    let rel_probs: Vec<Result<Vec<f64>>> = exec::map_indexed(queries.len(), |i| {
        let scores = ranker.score_list(&queries[i])?;
        Ok(normalize_scores(&scores, normalizer))
    });
    let mut rels = Vec::with_capacity(queries.len());
    for r in rel_probs {
        rels.push(r?);
    }

    let terms: Vec<Result<f64>> = exec::map_indexed(log.len(), |i| {
        let session = &log.sessions()[i];
        let &qi = by_query
            .get(session.query_id.as_str())
            .ok_or_else(|| Error::UnknownQuery(session.query_id.clone()))?;
        let list = &queries[qi];
        let n = session.clicks.len().min(list.len());
        let clicks = &session.clicks[..n];
        let exam = examination_for_ll(params, list, clicks, &rels[qi])?;
        let mut ll = 0.0;
        for j in 0..n {
            let p_click = (exam[j] * rels[qi][j]).clamp(0.0, 1.0);
            let p = if clicks[j] == 1 { p_click } else { 1.0 - p_click };
            ll += p.max(LL_PROB_FLOOR).ln();
        }
        Ok(ll)
    });
    let mut total = 0.0;
    for t in terms {
        total += t?;
    }
    Ok(total)
}

/// Outcome of likelihood-based model selection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub chosen: String,
    pub ll: BTreeMap<String, f64>,
}

/// Pick the candidate click model with the highest click log-likelihood.
/// Exact ties break toward a PBM candidate.
pub fn select_method(
    log: &ClickLog,
    queries: &[QueryList],
    ranker: &Ranker,
    candidates: &[(ClickModelParams, String)],
    normalizer: NormalizerKind,
) -> Result<Selection> {
    if candidates.len() < 2 {
        return Err(Error::InvalidInput("need at least two candidates".into()));
    }
    let mut ll = BTreeMap::new();
    let mut scored: Vec<(f64, bool, usize, &str)> = Vec::new();
    for (i, (params, label)) in candidates.iter().enumerate() {
        let v = click_log_likelihood(log, queries, ranker, params, normalizer)?;
        ll.insert(label.clone(), v);
        scored.push((
            v,
            matches!(params, ClickModelParams::Pbm { .. }),
            i,
            label.as_str(),
        ));
    }
    let best = scored
        .iter()
        .cloned()
        .fold(None::<(f64, bool, usize, &str)>, |acc, cur| match acc {
            None => Some(cur),
            Some(prev) => {
                if cur.0 > prev.0 || (cur.0 == prev.0 && cur.1 && !prev.1) {
                    Some(cur)
                } else {
                    Some(prev)
                }
            }
        })
        .unwrap();
    Ok(Selection {
        chosen: best.3.to_string(),
        ll,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clicksim::{dcm_lambda_schedule, pbm_theta_schedule, simulate_log, SimulatorConfig};
    use crate::types::{Document, FeatureVector, NoiseSpec, Session};

    #[test]
    fn ndcg_perfect_ordering_is_one() {
        let scores = [3.0, 2.0, 1.0];
        let rel = [1.0, 1.0, 0.0];
        assert!((ndcg_at_k(&scores, &rel, 10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ndcg_single_relevant_second_of_two() {
        let scores = [2.0, 1.0];
        let rel = [0.0, 1.0];
        let expected = 1.0 / 3f64.log2();
        let got = ndcg_at_k(&scores, &rel, 10).unwrap();
        assert!((got - expected).abs() < 1e-9);
        assert!((got - 0.63093).abs() < 1e-5);
    }

    #[test]
    fn ndcg_errors_without_relevant() {
        assert!(matches!(
            ndcg_at_k(&[1.0, 2.0], &[0.0, 0.0], 10),
            Err(Error::NoRelevantDoc)
        ));
    }

    /// Brute-force reference: explicitly sort, take k, sum gains/discounts.
    fn ndcg_brute_force(scores: &[f64], rel: &[f64], k: usize) -> f64 {
        let mut pairs: Vec<(f64, f64)> =
            scores.iter().cloned().zip(rel.iter().cloned()).collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut dcg = 0.0;
        for (rank, (_, r)) in pairs.iter().take(k).enumerate() {
            dcg += r / ((rank + 2) as f64).log2();
        }
        let mut sorted_rel: Vec<f64> = rel.to_vec();
        sorted_rel.sort_by(|a, b| b.total_cmp(a));
        let mut idcg = 0.0;
        for (rank, r) in sorted_rel.iter().take(k).enumerate() {
            idcg += r / ((rank + 2) as f64).log2();
        }
        dcg / idcg
    }

    #[test]
    fn ndcg_matches_brute_force_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(55);
        for _ in 0..100 {
            let n = 10;
            let scores: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let mut rel: Vec<f64> = (0..n).map(|_| rng.random_range(0..2) as f64).collect();
            rel[rng.random_range(0..n)] = 1.0;
            let a = ndcg_at_k(&scores, &rel, 10).unwrap();
            let b = ndcg_brute_force(&scores, &rel, 10);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ndcg_invariant_under_monotone_transform() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(56);
        for _ in 0..50 {
            let n = 8;
            let scores: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let mut rel: Vec<f64> = (0..n).map(|_| rng.random_range(0..2) as f64).collect();
            rel[0] = 1.0;
            let transformed: Vec<f64> = scores.iter().map(|&s| (3.0 * s + 1.0).exp()).collect();
            let a = ndcg_at_k(&scores, &rel, 5).unwrap();
            let b = ndcg_at_k(&transformed, &rel, 5).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn t_test_identical_samples() {
        let a = [0.5, 0.6, 0.7];
        let t = paired_t_test(&a, &a).unwrap();
        assert_eq!(t.p, 1.0);
    }

    #[test]
    fn t_test_constant_difference_zero_variance() {
        let a = [0.5, 0.6, 0.7];
        let b = [0.4, 0.5, 0.6];
        let t = paired_t_test(&a, &b).unwrap();
        assert_eq!(t.p, 0.0);
    }

    #[test]
    fn t_test_reference_value() {
        // differences 1..5 against zero: t = 3*sqrt(5)/sqrt(2.5) = 4.2426,
        // p = 1 - 3/2 sqrt(9/11) + 1/2 (9/11)^1.5 = 0.013236 at df=4
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [0.0; 5];
        let t = paired_t_test(&a, &b).unwrap();
        assert!((t.t - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((t.p - 0.0132355996).abs() < 1e-8, "p={}", t.p);
    }

    #[test]
    fn t_test_is_symmetric() {
        let a = [0.71, 0.69, 0.74, 0.7];
        let b = [0.65, 0.7, 0.69, 0.66];
        let pab = paired_t_test(&a, &b).unwrap();
        let pba = paired_t_test(&b, &a).unwrap();
        assert!((pab.p - pba.p).abs() < 1e-14);
        assert!((pab.t + pba.t).abs() < 1e-14);
    }

    #[test]
    fn sigmoid_of_zero() {
        let p = normalize_scores(&[0.0], NormalizerKind::Sigmoid);
        assert!((p[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn softmax_symmetric_pair() {
        let p = normalize_scores(&[0.0, 0.0], NormalizerKind::Softmax);
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!((p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exp_minmax_reference_values() {
        let p = normalize_scores(&[2.0, 1.0, 0.0], NormalizerKind::ExpMinMax);
        assert!((p[0] - 1.0).abs() < 1e-15);
        assert!((p[1] - (-0.5f64).exp()).abs() < 1e-12);
        assert!((p[2] - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn exp_minmax_constant_list_is_half() {
        let p = normalize_scores(&[3.3, 3.3, 3.3], NormalizerKind::ExpMinMax);
        assert_eq!(p, vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn normalizers_stay_in_unit_interval_and_preserve_order() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(58);
        for kind in [
            NormalizerKind::Softmax,
            NormalizerKind::Sigmoid,
            NormalizerKind::ExpMinMax,
        ] {
            for _ in 0..50 {
                let n = rng.random_range(1..12);
                let scores: Vec<f64> =
                    (0..n).map(|_| rng.random_range(-700.0..700.0)).collect();
                let p = normalize_scores(&scores, kind);
                for &v in &p {
                    assert!(v > 0.0 && v <= 1.0, "{kind:?}: {v}");
                }
                if kind == NormalizerKind::ExpMinMax {
                    for i in 0..n {
                        for j in 0..n {
                            if scores[i] < scores[j] {
                                assert!(p[i] <= p[j]);
                            }
                        }
                    }
                }
            }
        }
    }

    fn rel_feature_list(rels: &[u8]) -> QueryList {
        // feature = relevance, so a unit linear ranker scores r exactly
        QueryList {
            query_id: "q0".into(),
            docs: rels
                .iter()
                .enumerate()
                .map(|(i, &r)| Document {
                    doc_id: format!("d{i:03}"),
                    features: FeatureVector::new(vec![r as f64]).unwrap(),
                    relevance: r,
                })
                .collect(),
        }
    }

    #[test]
    fn ll_of_empty_log_is_zero() {
        let list = rel_feature_list(&[1, 0]);
        let ranker = Ranker::linear(vec![1.0], 0.0);
        let log = ClickLog::new(vec![]);
        let ll = click_log_likelihood(
            &log,
            std::slice::from_ref(&list),
            &ranker,
            &ClickModelParams::Pbm {
                theta: vec![1.0, 1.0],
            },
            NormalizerKind::Sigmoid,
        )
        .unwrap();
        assert_eq!(ll, 0.0);
    }

    #[test]
    fn ll_all_half_probabilities() {
        // theta = 1 everywhere and sigmoid(0) = 0.5 give click probability
        // 0.5 at every one of the 20 positions
        let rels = vec![0u8; 20];
        let list = rel_feature_list(&rels);
        let ranker = Ranker::zeros(crate::ltr::Architecture::Linear { dim: 1 });
        let log = ClickLog::new(vec![Session {
            query_id: "q0".into(),
            clicks: {
                let mut c = vec![0u8; 20];
                c[3] = 1;
                c[11] = 1;
                c
            },
            generator: None,
            seed_info: None,
        }]);
        let ll = click_log_likelihood(
            &log,
            std::slice::from_ref(&list),
            &ranker,
            &ClickModelParams::Pbm {
                theta: vec![1.0; 20],
            },
            NormalizerKind::Sigmoid,
        )
        .unwrap();
        assert!((ll - 20.0 * 0.5f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn ll_additive_over_partitions() {
        let list = rel_feature_list(&[1, 0, 1, 0, 0]);
        let config = SimulatorConfig {
            params: ClickModelParams::Dcm {
                lambda: dcm_lambda_schedule(0.6, 1.0, 5),
            },
            noise: NoiseSpec::default(),
            keep_empty_sessions: false,
            seed: 3,
            target_clicks: 200,
            generator_tag: "dcm".into(),
            attempt_cap: 100_000,
        };
        let log = simulate_log(std::slice::from_ref(&list), &config).unwrap();
        let ranker = Ranker::linear(vec![1.0], 0.0);
        let params = ClickModelParams::Dcm {
            lambda: dcm_lambda_schedule(0.6, 1.0, 5),
        };
        let whole = click_log_likelihood(
            &log,
            std::slice::from_ref(&list),
            &ranker,
            &params,
            NormalizerKind::ExpMinMax,
        )
        .unwrap();
        let mid = log.len() / 2;
        let first = ClickLog::new(log.sessions()[..mid].to_vec());
        let second = ClickLog::new(log.sessions()[mid..].to_vec());
        let sum = click_log_likelihood(
            &first,
            std::slice::from_ref(&list),
            &ranker,
            &params,
            NormalizerKind::ExpMinMax,
        )
        .unwrap()
            + click_log_likelihood(
                &second,
                std::slice::from_ref(&list),
                &ranker,
                &params,
                NormalizerKind::ExpMinMax,
            )
            .unwrap();
        assert!((whole - sum).abs() < 1e-9);
    }

    #[test]
    fn ll_prefers_matching_model_on_dcm_log() {
        // DCM-simulated clicks, oracle parameters on both sides, oracle
        // relevance as the score input
        let list = rel_feature_list(&[0, 1, 0, 0, 1, 0, 0, 0, 1, 0]);
        let k = 10;
        let config = SimulatorConfig {
            params: ClickModelParams::Dcm {
                lambda: dcm_lambda_schedule(0.6, 1.0, k),
            },
            noise: NoiseSpec::default(),
            keep_empty_sessions: false,
            seed: 11,
            target_clicks: 10_000,
            generator_tag: "dcm_0.6_1.0".into(),
            attempt_cap: 1_000_000,
        };
        let log = simulate_log(std::slice::from_ref(&list), &config).unwrap();
        let ranker = Ranker::linear(vec![1.0], 0.0);
        let ll_dcm = click_log_likelihood(
            &log,
            std::slice::from_ref(&list),
            &ranker,
            &ClickModelParams::Dcm {
                lambda: dcm_lambda_schedule(0.6, 1.0, k),
            },
            NormalizerKind::ExpMinMax,
        )
        .unwrap();
        let ll_pbm = click_log_likelihood(
            &log,
            std::slice::from_ref(&list),
            &ranker,
            &ClickModelParams::Pbm {
                theta: pbm_theta_schedule(1.0, k),
            },
            NormalizerKind::ExpMinMax,
        )
        .unwrap();
        assert!(ll_dcm > ll_pbm, "dcm {ll_dcm} vs pbm {ll_pbm}");
    }

    #[test]
    fn selection_tie_breaks_toward_pbm() {
        let list = rel_feature_list(&[1, 0]);
        let ranker = Ranker::linear(vec![1.0], 0.0);
        let log = ClickLog::new(vec![Session {
            query_id: "q0".into(),
            clicks: vec![1, 0],
            generator: None,
            seed_info: None,
        }]);
        // identical parameters under both labels: equal likelihoods
        let candidates = vec![
            (
                ClickModelParams::Dcm {
                    lambda: vec![1.0, 1.0],
                },
                "CM".to_string(),
            ),
            (
                ClickModelParams::Pbm {
                    theta: vec![1.0, 1.0],
                },
                "PBM".to_string(),
            ),
        ];
        let sel = select_method(
            &log,
            std::slice::from_ref(&list),
            &ranker,
            &candidates,
            NormalizerKind::ExpMinMax,
        )
        .unwrap();
        assert_eq!(sel.chosen, "PBM");
        assert_eq!(sel.ll.len(), 2);
    }
}
