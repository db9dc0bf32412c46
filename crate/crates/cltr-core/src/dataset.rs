//! Dataset ingestion and preparation.
//!
//! Two sources: SVMLight/LETOR text files (labels binarized at a
//! threshold) and a synthetic generator whose relevance is a noisy
//! monotone function of a known linear score. Preparation ranks every
//! query with a weak initial scorer, truncates to the top k, and drops
//! queries without a relevant document in that window.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltr::Ranker;
use crate::numeric::{mix_seed_u64, normal_quantile};
use crate::types::{Document, FeatureVector, QueryList};

/// Unprepared query lists with a common feature dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawDataset {
    pub queries: Vec<QueryList>,
    pub feature_dim: usize,
}

/// Filtering and truncation statistics recorded by [`prepare`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub k: usize,
    pub train_queries_in: usize,
    pub train_queries_kept: usize,
    pub train_removed_no_relevant_in_top_k: usize,
    pub test_queries_in: usize,
    pub test_queries_kept: usize,
    pub test_removed_no_relevant_in_top_k: usize,
    pub feature_dim: usize,
}

/// Train/test query lists, each ordered by the initial ranker and
/// truncated to the top k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreparedDataset {
    pub train: Vec<QueryList>,
    pub test: Vec<QueryList>,
    pub feature_dim: usize,
    pub provenance: Provenance,
}

/// Parse one SVMLight/LETOR file. Labels at or above `relevance_threshold`
/// become r=1, the rest r=0. Feature indices are 1-based; absent indices
/// are dense-filled with zero. When `expected_dim` is given, any index
/// beyond it is an error; otherwise the file's maximum index sets the dim.
pub fn load_letor(
    path: &Path,
    relevance_threshold: u32,
    expected_dim: Option<usize>,
) -> Result<RawDataset> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_letor(BufReader::new(f), relevance_threshold, expected_dim)
}

pub fn parse_letor<R: BufRead>(
    reader: R,
    relevance_threshold: u32,
    expected_dim: Option<usize>,
) -> Result<RawDataset> {
    struct PendingDoc {
        qid: String,
        doc_id: String,
        pairs: Vec<(usize, f64)>,
        relevance: u8,
    }

    let mut docs: Vec<PendingDoc> = Vec::new();
    let mut max_index = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::io("<letor>", e))?;
        let (body, comment) = match line.split_once('#') {
            Some((b, c)) => (b, Some(c.trim().to_string())),
            None => (line.as_str(), None),
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let label: u32 = tokens
            .next()
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                line: lineno,
                message: "label must be a non-negative integer".into(),
            })?;
        let qid_tok = tokens.next().ok_or(Error::Parse {
            line: lineno,
            message: "missing qid token".into(),
        })?;
        let qid = qid_tok
            .strip_prefix("qid:")
            .ok_or(Error::Parse {
                line: lineno,
                message: format!("expected qid:<id>, got {qid_tok}"),
            })?
            .to_string();
        let mut pairs = Vec::new();
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or(Error::Parse {
                line: lineno,
                message: format!("expected <index>:<value>, got {tok}"),
            })?;
            let idx: usize = idx.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad feature index {idx}"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    message: "feature indices are 1-based".into(),
                });
            }
            let val: f64 = val.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad feature value {val}"),
            })?;
            if let Some(dim) = expected_dim {
                if idx > dim {
                    return Err(Error::DimMismatch {
                        expected: dim,
                        got: idx,
                    });
                }
            }
            max_index = max_index.max(idx);
            pairs.push((idx, val));
        }
        let doc_id = comment
            .filter(|c| !c.is_empty())
            .unwrap_or_else(|| format!("line{lineno:07}"));
        docs.push(PendingDoc {
            qid,
            doc_id,
            pairs,
            relevance: u8::from(label >= relevance_threshold),
        });
    }

    let dim = expected_dim.unwrap_or(max_index);
    let mut queries: Vec<QueryList> = Vec::new();
    let mut index_of: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for d in docs {
        let mut values = vec![0.0; dim];
        for (idx, val) in d.pairs {
            values[idx - 1] = val;
        }
        let doc = Document {
            doc_id: d.doc_id,
            features: FeatureVector::new(values)?,
            relevance: d.relevance,
        };
        match index_of.get(&d.qid) {
            Some(&i) => queries[i].docs.push(doc),
            None => {
                index_of.insert(d.qid.clone(), queries.len());
                queries.push(QueryList {
                    query_id: d.qid,
                    docs: vec![doc],
                });
            }
        }
    }
    Ok(RawDataset {
        queries,
        feature_dim: dim,
    })
}

/// Generate a synthetic dataset.
///
/// Recipe: a hidden unit vector w is drawn once from the seed; every
/// document gets features x ~ N(0, I) and a latent score s = w.x; the
/// label is r = 1 iff s + e > tau with e ~ N(0, sigma^2) and tau chosen
/// so that P(r = 1) is exactly `relevant_fraction`. Relevance is therefore
/// a noisy monotone function of the known linear score, and the marginal
/// relevant rate is binomial with the requested fraction.
pub fn generate_synthetic(
    n_queries: usize,
    docs_per_query: usize,
    feature_dim: usize,
    relevant_fraction: f64,
    seed: u64,
) -> Result<RawDataset> {
    if n_queries == 0 || docs_per_query == 0 || feature_dim == 0 {
        return Err(Error::InvalidParam("all counts must be positive".into()));
    }
    if !(relevant_fraction > 0.0 && relevant_fraction < 1.0) {
        return Err(Error::InvalidParam(format!(
            "relevant_fraction={relevant_fraction} must be in (0,1)"
        )));
    }
    let mut w_rng = ChaCha8Rng::seed_from_u64(mix_seed_u64(seed, &[0x57A7]));
    let mut w: Vec<f64> = (0..feature_dim)
        .map(|_| w_rng.sample::<f64, _>(StandardNormal))
        .collect();
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in &mut w {
        *v /= norm;
    }
    // s ~ N(0, 1); label noise makes relevance imperfectly predictable
    let noise_sd: f64 = 0.6;
    let total_sd = (1.0 + noise_sd * noise_sd).sqrt();
    let tau = normal_quantile(1.0 - relevant_fraction) * total_sd;

    let queries = crate::exec::map_indexed(n_queries, |qi| {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed_u64(seed, &[1, qi as u64]));
        let docs = (0..docs_per_query)
            .map(|di| {
                let values: Vec<f64> = (0..feature_dim)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let s: f64 = values.iter().zip(w.iter()).map(|(x, w)| x * w).sum();
                let e: f64 = rng.sample::<f64, _>(StandardNormal);
                let relevance = u8::from(s + e * noise_sd > tau);
                Document {
                    doc_id: format!("q{qi:05}_d{di:04}"),
                    features: FeatureVector::new(values).expect("finite by construction"),
                    relevance,
                }
            })
            .collect();
        QueryList {
            query_id: format!("q{qi:05}"),
            docs,
        }
    });
    Ok(RawDataset {
        queries,
        feature_dim,
    })
}

/// Train the weak initial scorer: ridge least squares of binary relevance
/// on features, fitted over `n_queries_sample` randomly chosen queries.
pub fn train_initial_ranker(
    raw: &RawDataset,
    n_queries_sample: usize,
    seed: u64,
) -> Result<Ranker> {
    use rand::seq::SliceRandom;

    if n_queries_sample == 0 || raw.queries.is_empty() {
        return Err(Error::EmptySample);
    }
    if n_queries_sample > raw.queries.len() {
        return Err(Error::InvalidParam(format!(
            "sample {n_queries_sample} exceeds {} available queries",
            raw.queries.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed_u64(seed, &[0x1717]));
    let mut idx: Vec<usize> = (0..raw.queries.len()).collect();
    idx.shuffle(&mut rng);
    idx.truncate(n_queries_sample);
    idx.sort_unstable();

    let d = raw.feature_dim + 1; // bias column
    let mut xtx = vec![0.0f64; d * d];
    let mut xty = vec![0.0f64; d];
    let mut n_docs = 0usize;
    for &qi in &idx {
        for doc in &raw.queries[qi].docs {
            let x = doc.features.values();
            if x.len() != raw.feature_dim {
                return Err(Error::DimMismatch {
                    expected: raw.feature_dim,
                    got: x.len(),
                });
            }
            let y = doc.relevance as f64;
            for a in 0..d {
                let xa = if a < raw.feature_dim { x[a] } else { 1.0 };
                xty[a] += xa * y;
                for b in a..d {
                    let xb = if b < raw.feature_dim { x[b] } else { 1.0 };
                    xtx[a * d + b] += xa * xb;
                }
            }
            n_docs += 1;
        }
    }
    if n_docs == 0 {
        return Err(Error::EmptySample);
    }
    // mirror the upper triangle and add the ridge
    let ridge = 1e-2 * n_docs as f64 / d as f64;
    for a in 0..d {
        xtx[a * d + a] += ridge;
        for b in 0..a {
            xtx[a * d + b] = xtx[b * d + a];
        }
    }
    let sol = solve_symmetric(&mut xtx, &mut xty, d)?;
    let (weights, bias) = sol.split_at(raw.feature_dim);
    Ok(Ranker::linear(weights.to_vec(), bias[0]))
}

/// Gaussian elimination with partial pivoting; solves in place.
fn solve_symmetric(a: &mut [f64], b: &mut [f64], n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if a[pivot * n + col].abs() < 1e-12 {
            return Err(Error::InvalidInput("singular normal equations".into()));
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                a[row * n + j] -= factor * a[col * n + j];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for j in row + 1..n {
            acc -= a[row * n + j] * x[j];
        }
        x[row] = acc / a[row * n + row];
    }
    Ok(x)
}

fn rank_and_truncate(list: &QueryList, initial: &Ranker, k: usize) -> Result<QueryList> {
    let scores = initial.score_list(list)?;
    let mut order: Vec<usize> = (0..list.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| list.docs[a].doc_id.cmp(&list.docs[b].doc_id))
    });
    order.truncate(k);
    Ok(QueryList {
        query_id: list.query_id.clone(),
        docs: order.into_iter().map(|i| list.docs[i].clone()).collect(),
    })
}

/// Rank every query with the initial scorer (ties by ascending doc_id),
/// keep the top k, and drop queries without a relevant document there.
pub fn prepare(
    train: &RawDataset,
    test: &RawDataset,
    initial: &Ranker,
    k: usize,
) -> Result<PreparedDataset> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be >= 1".into()));
    }
    let process = |queries: &[QueryList]| -> Result<(Vec<QueryList>, usize)> {
        let ranked: Vec<Result<QueryList>> = crate::exec::map_indexed(queries.len(), |i| {
            rank_and_truncate(&queries[i], initial, k)
        });
        let mut kept = Vec::new();
        let mut removed = 0usize;
        for r in ranked {
            let q = r?;
            if q.has_relevant() {
                kept.push(q);
            } else {
                removed += 1;
            }
        }
        Ok((kept, removed))
    };
    let (train_kept, train_removed) = process(&train.queries)?;
    let (test_kept, test_removed) = process(&test.queries)?;
    let provenance = Provenance {
        k,
        train_queries_in: train.queries.len(),
        train_queries_kept: train_kept.len(),
        train_removed_no_relevant_in_top_k: train_removed,
        test_queries_in: test.queries.len(),
        test_queries_kept: test_kept.len(),
        test_removed_no_relevant_in_top_k: test_removed,
        feature_dim: train.feature_dim,
    };
    Ok(PreparedDataset {
        train: train_kept,
        test: test_kept,
        feature_dim: train.feature_dim,
        provenance,
    })
}

impl PreparedDataset {
    /// Write one QueryList per line.
    pub fn write_split_jsonl<W: Write>(queries: &[QueryList], mut w: W) -> Result<()> {
        for q in queries {
            serde_json::to_writer(&mut w, q)?;
            w.write_all(b"\n").map_err(|e| Error::io("<writer>", e))?;
        }
        Ok(())
    }

    pub fn read_split_jsonl<R: BufRead>(r: R) -> Result<Vec<QueryList>> {
        let mut out = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<reader>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let q: QueryList = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            out.push(q);
        }
        Ok(out)
    }

    /// Save as train.jsonl / test.jsonl / provenance.json under `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        let train = std::fs::File::create(dir.join("train.jsonl"))
            .map_err(|e| Error::io("train.jsonl", e))?;
        Self::write_split_jsonl(&self.train, std::io::BufWriter::new(train))?;
        let test = std::fs::File::create(dir.join("test.jsonl"))
            .map_err(|e| Error::io("test.jsonl", e))?;
        Self::write_split_jsonl(&self.test, std::io::BufWriter::new(test))?;
        let prov = std::fs::File::create(dir.join("provenance.json"))
            .map_err(|e| Error::io("provenance.json", e))?;
        serde_json::to_writer_pretty(prov, &self.provenance)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let open = |name: &str| -> Result<std::io::BufReader<std::fs::File>> {
            let p = dir.join(name);
            Ok(BufReader::new(std::fs::File::open(&p).map_err(|e| {
                Error::io(p.display().to_string(), e)
            })?))
        };
        let train = Self::read_split_jsonl(open("train.jsonl")?)?;
        let test = Self::read_split_jsonl(open("test.jsonl")?)?;
        let provenance: Provenance = serde_json::from_reader(open("provenance.json")?)?;
        let feature_dim = provenance.feature_dim;
        Ok(PreparedDataset {
            train,
            test,
            feature_dim,
            provenance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letor_binarization_threshold() {
        let data = "3 qid:1 1:0.5\n2 qid:1 1:0.3\n";
        let raw = parse_letor(std::io::Cursor::new(data), 3, None).unwrap();
        assert_eq!(raw.queries.len(), 1);
        assert_eq!(raw.queries[0].docs[0].relevance, 1);
        assert_eq!(raw.queries[0].docs[1].relevance, 0);
    }

    #[test]
    fn letor_two_queries_consistent_dims() {
        let data = "\
1 qid:1 1:0.5 3:1.0 # a
0 qid:1 2:0.25 # b
2 qid:1 1:0.1 # c
0 qid:2 3:0.75 # d
1 qid:2 1:0.2 # e
4 qid:2 2:0.9 # f
";
        let raw = parse_letor(std::io::Cursor::new(data), 3, None).unwrap();
        assert_eq!(raw.queries.len(), 2);
        assert_eq!(raw.feature_dim, 3);
        for q in &raw.queries {
            assert_eq!(q.docs.len(), 3);
            for d in &q.docs {
                assert_eq!(d.features.dim(), 3);
            }
        }
        // dense fill: doc b has only feature 2 set
        assert_eq!(raw.queries[0].docs[1].features.values(), &[0.0, 0.25, 0.0]);
        assert_eq!(raw.queries[0].docs[1].doc_id, "b");
        // only label 4 crosses the threshold
        assert_eq!(raw.queries[1].docs[2].relevance, 1);
        assert_eq!(raw.queries[1].docs[1].relevance, 0);
    }

    #[test]
    fn letor_malformed_line_reports_number() {
        let data = "1 qid:1 1:0.5\nnot-a-label qid:1 1:0.5\n";
        let err = parse_letor(std::io::Cursor::new(data), 3, None).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn letor_index_beyond_expected_dim_errors() {
        let data = "1 qid:1 5:0.5\n";
        let err = parse_letor(std::io::Cursor::new(data), 3, Some(4)).unwrap_err();
        assert!(matches!(err, Error::DimMismatch { expected: 4, got: 5 }));
    }

    #[test]
    fn synthetic_is_deterministic() {
        let a = generate_synthetic(5, 10, 4, 0.3, 99).unwrap();
        let b = generate_synthetic(5, 10, 4, 0.3, 99).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(5, 10, 4, 0.3, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn synthetic_relevant_count_within_binomial_3_sigma() {
        // 1000 docs at fraction 0.2: sd = sqrt(1000 * 0.2 * 0.8) = 12.65
        let raw = generate_synthetic(100, 10, 6, 0.2, 7).unwrap();
        let relevant: usize = raw
            .queries
            .iter()
            .flat_map(|q| q.docs.iter())
            .filter(|d| d.relevance == 1)
            .count();
        let sigma = (1000.0f64 * 0.2 * 0.8).sqrt();
        assert!(
            (relevant as f64 - 200.0).abs() <= 3.0 * sigma,
            "relevant={relevant}"
        );
    }

    #[test]
    fn synthetic_feature_dim() {
        let raw = generate_synthetic(3, 4, 10, 0.5, 1).unwrap();
        for q in &raw.queries {
            for d in &q.docs {
                assert_eq!(d.features.dim(), 10);
            }
        }
    }

    #[test]
    fn initial_ranker_beats_random_shuffles() {
        use rand::seq::SliceRandom;
        let raw = generate_synthetic(80, 15, 8, 0.25, 42).unwrap();
        let ranker = train_initial_ranker(&raw, 50, 3).unwrap();
        // held-out queries: the generator draws docs iid, so any split works
        let test = &raw.queries[50..];
        let mut model_ndcg = 0.0;
        let mut n = 0usize;
        for q in test {
            if !q.has_relevant() {
                continue;
            }
            let scores = ranker.score_list(q).unwrap();
            let rel = q.relevance();
            model_ndcg += crate::eval::ndcg_at_k(&scores, &rel, 10).unwrap();
            n += 1;
        }
        model_ndcg /= n as f64;

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut shuffle_mean = 0.0;
        for _ in 0..20 {
            let mut total = 0.0;
            for q in test {
                if !q.has_relevant() {
                    continue;
                }
                let mut scores: Vec<f64> = (0..q.len()).map(|i| i as f64).collect();
                scores.shuffle(&mut rng);
                let rel = q.relevance();
                total += crate::eval::ndcg_at_k(&scores, &rel, 10).unwrap();
            }
            shuffle_mean += total / n as f64;
        }
        shuffle_mean /= 20.0;
        assert!(
            model_ndcg > shuffle_mean,
            "model {model_ndcg} vs shuffle {shuffle_mean}"
        );
    }

    #[test]
    fn full_sample_at_least_as_good_as_small_sample_mean() {
        let raw = generate_synthetic(120, 12, 8, 0.25, 5).unwrap();
        let eval_split = generate_synthetic(60, 12, 8, 0.25, 6).unwrap();
        let mean_ndcg = |ranker: &Ranker| {
            let mut total = 0.0;
            let mut n = 0;
            for q in &eval_split.queries {
                if !q.has_relevant() {
                    continue;
                }
                let scores = ranker.score_list(q).unwrap();
                total += crate::eval::ndcg_at_k(&scores, &q.relevance(), 10).unwrap();
                n += 1;
            }
            total / n as f64
        };
        let full = train_initial_ranker(&raw, raw.queries.len(), 1).unwrap();
        let full_ndcg = mean_ndcg(&full);
        let mut small_mean = 0.0;
        for seed in 0..5 {
            let r = train_initial_ranker(&raw, 50, seed).unwrap();
            small_mean += mean_ndcg(&r);
        }
        small_mean /= 5.0;
        assert!(
            full_ndcg >= small_mean - 1e-9,
            "full {full_ndcg} vs small mean {small_mean}"
        );
    }

    #[test]
    fn single_query_sample_trains() {
        let raw = generate_synthetic(3, 10, 4, 0.4, 2).unwrap();
        assert!(train_initial_ranker(&raw, 1, 0).is_ok());
    }

    #[test]
    fn empty_sample_errors() {
        let raw = generate_synthetic(3, 10, 4, 0.4, 2).unwrap();
        assert!(matches!(
            train_initial_ranker(&raw, 0, 0),
            Err(Error::EmptySample)
        ));
    }

    fn tiny_raw(rel_pattern: &[&[u8]]) -> RawDataset {
        let queries = rel_pattern
            .iter()
            .enumerate()
            .map(|(qi, rels)| QueryList {
                query_id: format!("q{qi}"),
                docs: rels
                    .iter()
                    .enumerate()
                    .map(|(di, &r)| Document {
                        doc_id: format!("d{di:03}"),
                        features: FeatureVector::new(vec![di as f64]).unwrap(),
                        relevance: r,
                    })
                    .collect(),
            })
            .collect();
        RawDataset {
            queries,
            feature_dim: 1,
        }
    }

    #[test]
    fn prepare_removes_queries_without_relevant_docs() {
        let raw = tiny_raw(&[&[0, 0, 0], &[1, 0, 0]]);
        // scorer prefers higher doc index (feature value)
        let initial = Ranker::linear(vec![1.0], 0.0);
        let prepared = prepare(&raw, &raw, &initial, 3).unwrap();
        assert_eq!(prepared.train.len(), 1);
        assert_eq!(prepared.provenance.train_removed_no_relevant_in_top_k, 1);
    }

    #[test]
    fn prepare_removes_relevant_beyond_k() {
        // 25 docs; the only relevant one scores lowest, so it lands at
        // initial rank 25 and a k=20 window drops the query
        let rels: Vec<u8> = (0..25).map(|i| u8::from(i == 0)).collect();
        let raw = tiny_raw(&[&rels]);
        let initial = Ranker::linear(vec![1.0], 0.0);
        let prepared = prepare(&raw, &raw, &initial, 20).unwrap();
        assert!(prepared.train.is_empty());
        // with k = 25 it survives at the last rank
        let prepared = prepare(&raw, &raw, &initial, 25).unwrap();
        assert_eq!(prepared.train.len(), 1);
        assert_eq!(prepared.train[0].docs.last().unwrap().relevance, 1);
    }

    #[test]
    fn prepare_keeps_short_lists_without_padding() {
        let raw = tiny_raw(&[&[1, 0]]);
        let initial = Ranker::linear(vec![1.0], 0.0);
        let prepared = prepare(&raw, &raw, &initial, 20).unwrap();
        assert_eq!(prepared.train[0].len(), 2);
    }

    #[test]
    fn prepare_sorts_descending_with_doc_id_ties() {
        let raw = tiny_raw(&[&[0, 1, 0, 1]]);
        let initial = Ranker::linear(vec![1.0], 0.0);
        let prepared = prepare(&raw, &raw, &initial, 3).unwrap();
        let ids: Vec<&str> = prepared.train[0]
            .docs
            .iter()
            .map(|d| d.doc_id.as_str())
            .collect();
        assert_eq!(ids, vec!["d003", "d002", "d001"]);
        // zero-weight scorer: all ties, doc_id ascending
        let flat = Ranker::linear(vec![0.0], 0.0);
        let prepared = prepare(&raw, &raw, &flat, 3).unwrap();
        let ids: Vec<&str> = prepared.train[0]
            .docs
            .iter()
            .map(|d| d.doc_id.as_str())
            .collect();
        assert_eq!(ids, vec!["d000", "d001", "d002"]);
    }

    #[test]
    fn prepare_is_idempotent() {
        let raw = generate_synthetic(30, 25, 6, 0.25, 11).unwrap();
        let initial = train_initial_ranker(&raw, 10, 0).unwrap();
        let once = prepare(&raw, &raw, &initial, 20).unwrap();
        let again_raw = RawDataset {
            queries: once.train.clone(),
            feature_dim: once.feature_dim,
        };
        let twice = prepare(&again_raw, &again_raw, &initial, 20).unwrap();
        assert_eq!(once.train, twice.train);
    }

    #[test]
    fn prepared_invariants_hold() {
        let raw = generate_synthetic(40, 30, 6, 0.2, 13).unwrap();
        let initial = train_initial_ranker(&raw, 20, 0).unwrap();
        let prepared = prepare(&raw, &raw, &initial, 20).unwrap();
        for q in prepared.train.iter().chain(prepared.test.iter()) {
            assert!(q.len() <= 20);
            assert!(q.has_relevant());
            let scores = initial.score_list(q).unwrap();
            for w in scores.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn dataset_dir_round_trip() {
        let raw = generate_synthetic(10, 8, 4, 0.3, 3).unwrap();
        let initial = train_initial_ranker(&raw, 5, 0).unwrap();
        let prepared = prepare(&raw, &raw, &initial, 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        prepared.save(dir.path()).unwrap();
        let back = PreparedDataset::load(dir.path()).unwrap();
        assert_eq!(prepared, back);
    }
}
