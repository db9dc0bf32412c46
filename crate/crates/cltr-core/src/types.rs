//! Domain types shared by all modules.
//!
//! Everything here is an immutable value after construction and safe to
//! share across worker threads without synchronization.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense numeric representation of a query-document pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    /// All values must be finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite feature value {v}"
            )));
        }
        Ok(FeatureVector(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// One result in a ranked list: identifier, features, binary relevance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub features: FeatureVector,
    /// Binary relevance label (0 or 1).
    pub relevance: u8,
}

/// An ordered result list for one query. After dataset preparation the
/// order is the initial ranker's, descending, truncated to the top k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryList {
    pub query_id: String,
    pub docs: Vec<Document>,
}

impl QueryList {
    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Relevance labels in list order as floats.
    pub fn relevance(&self) -> Vec<f64> {
        self.docs.iter().map(|d| d.relevance as f64).collect()
    }

    pub fn has_relevant(&self) -> bool {
        self.docs.iter().any(|d| d.relevance > 0)
    }
}

/// One impression: which query was shown and which positions were clicked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Session {
    #[serde(rename = "qid")]
    pub query_id: String,
    /// Click bitmap aligned with the query's prepared list.
    pub clicks: Vec<u8>,
    /// Tag naming the click model that produced this session.
    #[serde(rename = "gen", skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<String>,
    /// RNG stream index used to generate the session, for exact replay.
    #[serde(rename = "seed", skip_serializing_if = "Option::is_none", default)]
    pub seed_info: Option<u64>,
}

impl Session {
    pub fn click_count(&self) -> u64 {
        self.clicks.iter().map(|&c| c as u64).sum()
    }
}

/// A set of sessions plus a query index for fast per-query access.
#[derive(Clone, Debug, PartialEq)]
pub struct ClickLog {
    sessions: Vec<Session>,
    index: HashMap<String, Vec<usize>>,
}

impl ClickLog {
    pub fn new(sessions: Vec<Session>) -> Self {
        let mut index: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, s) in sessions.iter().enumerate() {
            index.entry(s.query_id.clone()).or_default().push(i);
        }
        ClickLog { sessions, index }
    }

    pub fn sessions(&self) -> &[Session] {
        &self.sessions
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    /// Session positions for one query (N_q = returned length).
    pub fn sessions_for(&self, query_id: &str) -> &[usize] {
        self.index.get(query_id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn query_count(&self, query_id: &str) -> usize {
        self.sessions_for(query_id).len()
    }

    pub fn total_clicks(&self) -> u64 {
        self.sessions.iter().map(Session::click_count).sum()
    }

    /// One session per line: {"qid": ..., "clicks": [...], "gen": ..., "seed": ...}
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for s in &self.sessions {
            serde_json::to_writer(&mut w, s)?;
            w.write_all(b"\n")
                .map_err(|e| Error::io("<writer>", e))?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut sessions = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<reader>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let s: Session = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            sessions.push(s);
        }
        Ok(ClickLog::new(sessions))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        self.write_jsonl(std::io::BufWriter::new(f))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::read_jsonl(BufReader::new(f))
    }
}

/// Parameter set of one of the four supported click models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ClickModelParams {
    /// Position-based model: per-rank examination probabilities.
    Pbm { theta: Vec<f64> },
    /// Dependent click model: per-rank continuation probability after a click.
    Dcm { lambda: Vec<f64> },
    /// Dynamic Bayesian network: perseverance gamma plus per-document
    /// satisfaction probabilities.
    Dbn {
        gamma: f64,
        satisfaction: HashMap<String, f64>,
    },
    /// Click chain model: continuation without a click (alpha1) and after a
    /// click on a non-relevant/relevant document (alpha2/alpha3).
    Ccm { alpha1: f64, alpha2: f64, alpha3: f64 },
}

impl ClickModelParams {
    pub fn model_name(&self) -> &'static str {
        match self {
            ClickModelParams::Pbm { .. } => "pbm",
            ClickModelParams::Dcm { .. } => "dcm",
            ClickModelParams::Dbn { .. } => "dbn",
            ClickModelParams::Ccm { .. } => "ccm",
        }
    }

    /// Check the stated probability ranges.
    pub fn validate(&self) -> Result<()> {
        let check_unit = |name: &str, v: f64, open_low: bool| -> Result<()> {
            let ok = if open_low {
                v > 0.0 && v <= 1.0
            } else {
                (0.0..=1.0).contains(&v)
            };
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParam(format!("{name}={v} out of range")))
            }
        };
        match self {
            ClickModelParams::Pbm { theta } => {
                if theta.is_empty() {
                    return Err(Error::InvalidParam("empty theta".into()));
                }
                for (j, &t) in theta.iter().enumerate() {
                    check_unit(&format!("theta[{j}]"), t, true)?;
                }
            }
            ClickModelParams::Dcm { lambda } => {
                if lambda.is_empty() {
                    return Err(Error::InvalidParam("empty lambda".into()));
                }
                for (j, &l) in lambda.iter().enumerate() {
                    check_unit(&format!("lambda[{j}]"), l, false)?;
                }
            }
            ClickModelParams::Dbn {
                gamma,
                satisfaction,
            } => {
                check_unit("gamma", *gamma, true)?;
                for (d, &s) in satisfaction {
                    check_unit(&format!("satisfaction[{d}]"), s, false)?;
                }
            }
            ClickModelParams::Ccm {
                alpha1,
                alpha2,
                alpha3,
            } => {
                check_unit("alpha1", *alpha1, false)?;
                check_unit("alpha2", *alpha2, false)?;
                check_unit("alpha3", *alpha3, false)?;
            }
        }
        Ok(())
    }
}

/// Per-position examination probabilities for one session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropensityVector {
    pub values: Vec<f64>,
    /// Marks positions where the clipping floor was applied.
    pub clipped: Vec<bool>,
}

impl PropensityVector {
    /// Wrap raw model outputs (all in [0, 1], none clipped yet).
    pub fn raw(values: Vec<f64>) -> Self {
        let n = values.len();
        PropensityVector {
            values,
            clipped: vec![false; n],
        }
    }

    /// Floor every value at `floor`, flagging the positions where it applied.
    /// Used to keep zero propensities usable as weight denominators.
    pub fn clip_floor(&self, floor: f64) -> Self {
        let mut out = self.clone();
        for (v, flag) in out.values.iter_mut().zip(out.clipped.iter_mut()) {
            if *v < floor {
                *v = floor;
                *flag = true;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Click noise: probabilities of a click given examination, by relevance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// P(click | examined, non-relevant). The protocol value is 0.05.
    pub p_click_given_examined_nonrelevant: f64,
    /// P(click | examined, relevant). Perfect attraction by default.
    pub p_click_given_examined_relevant: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            p_click_given_examined_nonrelevant: 0.05,
            p_click_given_examined_relevant: 1.0,
        }
    }
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        NoiseSpec {
            p_click_given_examined_nonrelevant: 0.0,
            p_click_given_examined_relevant: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p_click_given_examined_nonrelevant", self.p_click_given_examined_nonrelevant),
            ("p_click_given_examined_relevant", self.p_click_given_examined_relevant),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParam(format!("{name}={v} out of range")));
            }
        }
        Ok(())
    }

    /// P(click | examined) for a document with the given binary relevance.
    pub fn click_prob(&self, relevance: u8) -> f64 {
        if relevance > 0 {
            self.p_click_given_examined_relevant
        } else {
            self.p_click_given_examined_nonrelevant
        }
    }
}

/// One invariant violation found by [`validate_dataset`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub query_id: String,
    pub message: String,
}

/// Report produced by [`validate_dataset`]; empty `violations` means valid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub queries_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check per-query invariants: unique doc ids, consistent feature
/// dimension, finite values, binary relevance.
pub fn validate_dataset(queries: &[QueryList]) -> ValidationReport {
    let mut report = ValidationReport {
        queries_checked: queries.len(),
        violations: Vec::new(),
    };
    let expected_dim = queries
        .first()
        .and_then(|q| q.docs.first())
        .map(|d| d.features.dim());
    for q in queries {
        let mut seen = HashSet::new();
        for d in &q.docs {
            if !seen.insert(d.doc_id.as_str()) {
                report.violations.push(Violation {
                    query_id: q.query_id.clone(),
                    message: format!("duplicate doc_id {}", d.doc_id),
                });
            }
            if let Some(dim) = expected_dim {
                if d.features.dim() != dim {
                    report.violations.push(Violation {
                        query_id: q.query_id.clone(),
                        message: format!(
                            "feature dim {} != dataset dim {dim} for doc {}",
                            d.features.dim(),
                            d.doc_id
                        ),
                    });
                }
            }
            if d.features.values().iter().any(|v| !v.is_finite()) {
                report.violations.push(Violation {
                    query_id: q.query_id.clone(),
                    message: format!("non-finite feature in doc {}", d.doc_id),
                });
            }
            if d.relevance > 1 {
                report.violations.push(Violation {
                    query_id: q.query_id.clone(),
                    message: format!("non-binary relevance {} for doc {}", d.relevance, d.doc_id),
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, rel: u8) -> Document {
        Document {
            doc_id: id.to_string(),
            features: FeatureVector::new(vec![0.1, 0.2]).unwrap(),
            relevance: rel,
        }
    }

    #[test]
    fn feature_vector_rejects_non_finite() {
        assert!(FeatureVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(FeatureVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(FeatureVector::new(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn validate_reports_duplicate_doc_id() {
        let q = QueryList {
            query_id: "q1".into(),
            docs: vec![doc("a", 1), doc("a", 0)],
        };
        let report = validate_dataset(&[q]);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].query_id, "q1");
        assert!(report.violations[0].message.contains("duplicate"));
    }

    #[test]
    fn validate_empty_dataset() {
        let report = validate_dataset(&[]);
        assert!(report.is_valid());
        assert_eq!(report.queries_checked, 0);
    }

    #[test]
    fn validate_well_formed_dataset() {
        let qs = vec![
            QueryList {
                query_id: "q1".into(),
                docs: vec![doc("a", 1), doc("b", 0)],
            },
            QueryList {
                query_id: "q2".into(),
                docs: vec![doc("c", 0), doc("d", 1)],
            },
        ];
        let report = validate_dataset(&qs);
        assert!(report.is_valid());
        assert_eq!(report.queries_checked, 2);
    }

    #[test]
    fn params_validation_ranges() {
        assert!(ClickModelParams::Pbm { theta: vec![1.0, 0.5] }.validate().is_ok());
        assert!(ClickModelParams::Pbm { theta: vec![0.0] }.validate().is_err());
        assert!(ClickModelParams::Dcm { lambda: vec![0.0, 1.0] }.validate().is_ok());
        assert!(ClickModelParams::Dcm { lambda: vec![1.1] }.validate().is_err());
        assert!(ClickModelParams::Dbn {
            gamma: 0.9,
            satisfaction: HashMap::from([("d1".into(), 0.5)]),
        }
        .validate()
        .is_ok());
        assert!(ClickModelParams::Dbn {
            gamma: 0.0,
            satisfaction: HashMap::new(),
        }
        .validate()
        .is_err());
        assert!(ClickModelParams::Ccm {
            alpha1: 0.9,
            alpha2: 0.2,
            alpha3: 0.8
        }
        .validate()
        .is_ok());
        assert!(ClickModelParams::Ccm {
            alpha1: 1.2,
            alpha2: 0.2,
            alpha3: 0.8
        }
        .validate()
        .is_err());
    }

    #[test]
    fn session_jsonl_shape() {
        let s = Session {
            query_id: "q7".into(),
            clicks: vec![0, 1, 0],
            generator: Some("dcm_0.6_0.5".into()),
            seed_info: Some(42),
        };
        let line = serde_json::to_string(&s).unwrap();
        assert_eq!(
            line,
            r#"{"qid":"q7","clicks":[0,1,0],"gen":"dcm_0.6_0.5","seed":42}"#
        );
        let back: Session = serde_json::from_str(&line).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn click_log_index_and_counts() {
        let log = ClickLog::new(vec![
            Session {
                query_id: "a".into(),
                clicks: vec![1],
                generator: None,
                seed_info: None,
            },
            Session {
                query_id: "b".into(),
                clicks: vec![0, 1],
                generator: None,
                seed_info: None,
            },
            Session {
                query_id: "a".into(),
                clicks: vec![1],
                generator: None,
                seed_info: None,
            },
        ]);
        assert_eq!(log.query_count("a"), 2);
        assert_eq!(log.query_count("b"), 1);
        assert_eq!(log.query_count("zzz"), 0);
        assert_eq!(log.total_clicks(), 3);
        let total_indexed: usize = ["a", "b"].iter().map(|q| log.sessions_for(q).len()).sum();
        assert_eq!(total_indexed, log.len());
    }

    #[test]
    fn propensity_clip_floor_flags() {
        let p = PropensityVector::raw(vec![1.0, 0.5, 0.0]);
        let c = p.clip_floor(0.01);
        assert_eq!(c.values, vec![1.0, 0.5, 0.01]);
        assert_eq!(c.clipped, vec![false, false, true]);
    }
}
