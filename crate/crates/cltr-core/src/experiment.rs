//! End-to-end experiment orchestration: simulate clicks under a grid of
//! click models, debias with a grid of correction methods, train, and
//! evaluate, over several seeded repeats.
//!
//! Cells are written one file each and can be recomputed independently:
//! every cell's seed is derived from the spec seed plus the cell's
//! coordinates, so a rerun reproduces it byte for byte.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clicksim::{dcm_lambda_schedule, pbm_theta_schedule, simulate_log, SimulatorConfig};
use crate::dataset::{generate_synthetic, load_letor, prepare, train_initial_ranker, PreparedDataset};
use crate::error::{Error, Result};
use crate::eval::paired_t_test;
use crate::exec;
use crate::ltr::{train, Architecture, CurvePoint, PropensitySpec, TrainConfig, TrainMode};
use crate::numeric::mix_seed;
use crate::propensity::{estimate_pbm_dla, mle_dcm_lambda, ClippingPolicy, DlaConfig};
use crate::types::{ClickLog, ClickModelParams, NoiseSpec};

/// Simulation settings named like the experiment grid labels:
/// `dcm_<beta>_<eta>` or `pbm_<eta>`.
#[derive(Clone, Debug, PartialEq)]
pub enum SimKind {
    Pbm { eta: f64 },
    Dcm { beta: f64, eta: f64 },
}

impl SimKind {
    pub fn parse(name: &str) -> Result<SimKind> {
        let parts: Vec<&str> = name.split('_').collect();
        let bad = || Error::InvalidParam(format!("unknown simulation name {name}"));
        match parts.as_slice() {
            ["pbm", eta] => Ok(SimKind::Pbm {
                eta: eta.parse().map_err(|_| bad())?,
            }),
            ["dcm", beta, eta] => Ok(SimKind::Dcm {
                beta: beta.parse().map_err(|_| bad())?,
                eta: eta.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }

    pub fn oracle_params(&self, k: usize) -> ClickModelParams {
        match self {
            SimKind::Pbm { eta } => ClickModelParams::Pbm {
                theta: pbm_theta_schedule(*eta, k),
            },
            SimKind::Dcm { beta, eta } => ClickModelParams::Dcm {
                lambda: dcm_lambda_schedule(*beta, *eta, k),
            },
        }
    }
}

/// Correction methods of the comparison grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    NoIps,
    PbmIpsOracle,
    PbmIpsDla,
    CmIpsOracle,
    CmIpsMle,
}

impl Method {
    pub fn parse(name: &str) -> Result<Method> {
        match name {
            "no-ips" => Ok(Method::NoIps),
            "pbm-ips-oracle" => Ok(Method::PbmIpsOracle),
            "pbm-ips-dla" => Ok(Method::PbmIpsDla),
            "cm-ips-oracle" => Ok(Method::CmIpsOracle),
            "cm-ips-mle" => Ok(Method::CmIpsMle),
            other => Err(Error::InvalidParam(format!("unknown method {other}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Method::NoIps => "no-ips",
            Method::PbmIpsOracle => "pbm-ips-oracle",
            Method::PbmIpsDla => "pbm-ips-dla",
            Method::CmIpsOracle => "cm-ips-oracle",
            Method::CmIpsMle => "cm-ips-mle",
        }
    }
}

pub const FULL_INFO_LABEL: &str = "full-info";
pub const FULL_INFO_SIM: &str = "full_info";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DatasetSpec {
    Synthetic {
        train_queries: usize,
        test_queries: usize,
        docs_per_query: usize,
        feature_dim: usize,
        relevant_fraction: f64,
        init_sample: usize,
    },
    Letor {
        train_path: PathBuf,
        test_path: PathBuf,
        relevance_threshold: u32,
        init_sample: usize,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainSettings {
    pub arch: Architecture,
    pub learning_rate: f64,
    pub batch: usize,
    pub max_steps: usize,
    pub full_info_steps: usize,
    pub eval_every: usize,
    #[serde(default)]
    pub grad_norm_cap: Option<f64>,
}

impl Default for TrainSettings {
    fn default() -> Self {
        TrainSettings {
            arch: Architecture::Linear { dim: 0 }, // dim resolved at run time
            learning_rate: 0.15,
            batch: 32,
            max_steps: 50_000,
            full_info_steps: 2_000,
            eval_every: 1_000,
            grad_norm_cap: None,
        }
    }
}

fn default_repeats() -> usize {
    15
}

fn default_click_budget() -> u64 {
    200_000
}

fn default_k() -> usize {
    20
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub dataset: DatasetSpec,
    /// Simulation names, e.g. ["dcm_0.6_0.5", "pbm_1.0"].
    pub sims: Vec<String>,
    /// Correction method names, e.g. ["no-ips", "pbm-ips-oracle"].
    pub methods: Vec<String>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_click_budget")]
    pub click_budget: u64,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    pub seed: u64,
    #[serde(default)]
    pub train: Option<TrainSettings>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::InvalidParam("repeats must be >= 1".into()));
        }
        if self.sims.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParam("sims and methods must be nonempty".into()));
        }
        for s in &self.sims {
            SimKind::parse(s)?;
        }
        for m in &self.methods {
            Method::parse(m)?;
        }
        Ok(())
    }
}

/// One (simulation, method, repeat) outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub sim: String,
    pub method: String,
    pub repeat: usize,
    pub ndcg10: Option<f64>,
    pub curve: Vec<CurvePoint>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultMatrix {
    pub cells: Vec<CellResult>,
}

impl ResultMatrix {
    pub fn get(&self, sim: &str, method: &str, repeat: usize) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.sim == sim && c.method == method && c.repeat == repeat)
    }

    /// Final nDCG@10 values over repeats for one (sim, method), in repeat order.
    pub fn series(&self, sim: &str, method: &str) -> Vec<f64> {
        let mut cells: Vec<&CellResult> = self
            .cells
            .iter()
            .filter(|c| c.sim == sim && c.method == method && c.ndcg10.is_some())
            .collect();
        cells.sort_by_key(|c| c.repeat);
        cells.iter().map(|c| c.ndcg10.unwrap()).collect()
    }

    pub fn has_errors(&self) -> bool {
        self.cells.iter().any(|c| c.error.is_some())
    }
}

fn cell_file_name(sim: &str, method: &str, repeat: usize) -> String {
    format!("{sim}__{method}__rep{repeat}.json")
}

fn build_dataset(spec: &ExperimentSpec) -> Result<PreparedDataset> {
    let seed = mix_seed(spec.seed, &["dataset"]);
    match &spec.dataset {
        DatasetSpec::Synthetic {
            train_queries,
            test_queries,
            docs_per_query,
            feature_dim,
            relevant_fraction,
            init_sample,
        } => {
            let train_raw = generate_synthetic(
                *train_queries,
                *docs_per_query,
                *feature_dim,
                *relevant_fraction,
                mix_seed(seed, &["train"]),
            )?;
            let test_raw = generate_synthetic(
                *test_queries,
                *docs_per_query,
                *feature_dim,
                *relevant_fraction,
                mix_seed(seed, &["test"]),
            )?;
            let initial =
                train_initial_ranker(&train_raw, *init_sample, mix_seed(seed, &["init"]))?;
            prepare(&train_raw, &test_raw, &initial, spec.k)
        }
        DatasetSpec::Letor {
            train_path,
            test_path,
            relevance_threshold,
            init_sample,
        } => {
            let train_raw = load_letor(train_path, *relevance_threshold, None)?;
            let test_raw = load_letor(test_path, *relevance_threshold, Some(train_raw.feature_dim))?;
            let initial =
                train_initial_ranker(&train_raw, *init_sample, mix_seed(seed, &["init"]))?;
            prepare(&train_raw, &test_raw, &initial, spec.k)
        }
    }
}

fn resolved_train_settings(spec: &ExperimentSpec, feature_dim: usize) -> TrainSettings {
    let mut settings = spec.train.clone().unwrap_or_default();
    let dim_ok = settings.arch.input_dim() == feature_dim;
    if !dim_ok {
        settings.arch = match settings.arch {
            Architecture::Linear { .. } => Architecture::Linear { dim: feature_dim },
            Architecture::Feedforward {
                hidden,
                activation,
                dropout,
                ..
            } => Architecture::Feedforward {
                dim: feature_dim,
                hidden,
                activation,
                dropout,
            },
        };
    }
    settings
}

fn train_config_for(
    spec: &ExperimentSpec,
    settings: &TrainSettings,
    mode: TrainMode,
    seed: u64,
) -> TrainConfig {
    TrainConfig {
        mode,
        arch: settings.arch.clone(),
        learning_rate: settings.learning_rate,
        batch: settings.batch,
        steps: match mode {
            TrainMode::FullInfo => settings.full_info_steps,
            _ => settings.max_steps,
        },
        click_budget: match mode {
            TrainMode::FullInfo => None,
            _ => Some(spec.click_budget),
        },
        clip: ClippingPolicy::default(),
        seed,
        eval_every: settings.eval_every,
        grad_norm_cap: settings.grad_norm_cap,
    }
}

fn simulate_for_cell(
    spec: &ExperimentSpec,
    dataset: &PreparedDataset,
    sim_name: &str,
    kind: &SimKind,
    repeat: usize,
) -> Result<ClickLog> {
    let config = SimulatorConfig {
        params: kind.oracle_params(spec.k),
        noise: spec.noise.unwrap_or_default(),
        keep_empty_sessions: false,
        seed: mix_seed(spec.seed, &[sim_name, "log", &repeat.to_string()]),
        target_clicks: spec.click_budget,
        generator_tag: sim_name.to_string(),
        attempt_cap: 50_000_000,
    };
    simulate_log(&dataset.train, &config)
}

fn propensity_for_method(
    spec: &ExperimentSpec,
    dataset: &PreparedDataset,
    log: &ClickLog,
    sim_name: &str,
    kind: &SimKind,
    method: Method,
    repeat: usize,
) -> Result<Option<PropensitySpec>> {
    let k = spec.k;
    match method {
        Method::NoIps => Ok(None),
        Method::PbmIpsOracle => {
            let eta = match kind {
                SimKind::Pbm { eta } => *eta,
                SimKind::Dcm { eta, .. } => *eta,
            };
            Ok(Some(PropensitySpec::oracle(ClickModelParams::Pbm {
                theta: pbm_theta_schedule(eta, k),
            })))
        }
        Method::PbmIpsDla => {
            let config = DlaConfig {
                k,
                seed: mix_seed(spec.seed, &[sim_name, "dla", &repeat.to_string()]),
                ..DlaConfig::default()
            };
            let est = estimate_pbm_dla(log, &dataset.train, &config)?;
            Ok(Some(PropensitySpec::oracle(ClickModelParams::Pbm {
                theta: est.theta,
            })))
        }
        Method::CmIpsOracle => match kind {
            SimKind::Dcm { .. } => Ok(Some(PropensitySpec::oracle(kind.oracle_params(k)))),
            SimKind::Pbm { .. } => Err(Error::InvalidParam(
                "cm-ips-oracle is undefined for pbm simulations; use cm-ips-mle".into(),
            )),
        },
        Method::CmIpsMle => {
            let est = mle_dcm_lambda(log, k)?;
            Ok(Some(PropensitySpec::oracle(ClickModelParams::Dcm {
                lambda: est.lambda,
            })))
        }
    }
}

fn run_cell(
    spec: &ExperimentSpec,
    dataset: &PreparedDataset,
    settings: &TrainSettings,
    log: &ClickLog,
    sim_name: &str,
    kind: &SimKind,
    method: Method,
    repeat: usize,
) -> CellResult {
    let seed = mix_seed(spec.seed, &[sim_name, method.label(), "train", &repeat.to_string()]);
    let outcome = propensity_for_method(spec, dataset, log, sim_name, kind, method, repeat)
        .and_then(|prop| {
            let mode = match method {
                Method::NoIps => TrainMode::NoIps,
                _ => TrainMode::Ips,
            };
            let config = train_config_for(spec, settings, mode, seed);
            train(dataset, Some(log), prop.as_ref(), &config)
        });
    match outcome {
        Ok(out) => CellResult {
            sim: sim_name.to_string(),
            method: method.label().to_string(),
            repeat,
            ndcg10: Some(out.final_ndcg),
            curve: out.curve,
            error: None,
        },
        Err(e) => CellResult {
            sim: sim_name.to_string(),
            method: method.label().to_string(),
            repeat,
            ndcg10: None,
            curve: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

fn run_skyline(
    spec: &ExperimentSpec,
    dataset: &PreparedDataset,
    settings: &TrainSettings,
    repeat: usize,
) -> CellResult {
    let seed = mix_seed(spec.seed, &[FULL_INFO_SIM, "train", &repeat.to_string()]);
    let config = train_config_for(spec, settings, TrainMode::FullInfo, seed);
    match train(dataset, None, None, &config) {
        Ok(out) => CellResult {
            sim: FULL_INFO_SIM.to_string(),
            method: FULL_INFO_LABEL.to_string(),
            repeat,
            ndcg10: Some(out.final_ndcg),
            curve: out.curve,
            error: None,
        },
        Err(e) => CellResult {
            sim: FULL_INFO_SIM.to_string(),
            method: FULL_INFO_LABEL.to_string(),
            repeat,
            ndcg10: None,
            curve: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

fn load_cell(path: &Path) -> Option<CellResult> {
    let data = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&data).ok()
}

fn store_cell(dir: &Path, cell: &CellResult) -> Result<PathBuf> {
    let path = dir.join(cell_file_name(&cell.sim, &cell.method, cell.repeat));
    let body = serde_json::to_string_pretty(cell)?;
    std::fs::write(&path, body).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(path)
}

/// Run (or resume) the whole experiment grid. Existing cell files are
/// reused; missing ones are recomputed from their derived seeds. Stage
/// failures are recorded in the affected cell and do not stop the run.
pub fn run_experiment(spec: &ExperimentSpec, out_dir: &Path) -> Result<ResultMatrix> {
    spec.validate()?;
    let cells_dir = out_dir.join("cells");
    std::fs::create_dir_all(&cells_dir)
        .map_err(|e| Error::io(cells_dir.display().to_string(), e))?;

    let dataset = build_dataset(spec)?;
    if dataset.train.is_empty() || dataset.test.is_empty() {
        return Err(Error::InvalidInput(
            "dataset preparation left no usable queries".into(),
        ));
    }
    let settings = resolved_train_settings(spec, dataset.feature_dim);

    let sims: Vec<(String, SimKind)> = spec
        .sims
        .iter()
        .map(|s| Ok((s.clone(), SimKind::parse(s)?)))
        .collect::<Result<_>>()?;
    let methods: Vec<Method> = spec
        .methods
        .iter()
        .map(|m| Method::parse(m))
        .collect::<Result<_>>()?;

    enum Task {
        Skyline { repeat: usize },
        SimGroup { sim_idx: usize, repeat: usize },
    }
    let mut tasks = Vec::new();
    for repeat in 0..spec.repeats {
        tasks.push(Task::Skyline { repeat });
        for sim_idx in 0..sims.len() {
            tasks.push(Task::SimGroup { sim_idx, repeat });
        }
    }

    let results: Vec<Result<Vec<CellResult>>> = exec::map_indexed(tasks.len(), |ti| {
        match &tasks[ti] {
            Task::Skyline { repeat } => {
                let path = cells_dir.join(cell_file_name(FULL_INFO_SIM, FULL_INFO_LABEL, *repeat));
                let cell = match load_cell(&path) {
                    Some(cell) => cell,
                    None => {
                        let cell = run_skyline(spec, &dataset, &settings, *repeat);
                        store_cell(&cells_dir, &cell)?;
                        cell
                    }
                };
                Ok(vec![cell])
            }
            Task::SimGroup { sim_idx, repeat } => {
                let (sim_name, kind) = &sims[*sim_idx];
                let mut out = Vec::with_capacity(methods.len());
                let mut missing = Vec::new();
                for &m in &methods {
                    let path = cells_dir.join(cell_file_name(sim_name, m.label(), *repeat));
                    match load_cell(&path) {
                        Some(cell) => out.push(cell),
                        None => missing.push(m),
                    }
                }
                if !missing.is_empty() {
                    let log = simulate_for_cell(spec, &dataset, sim_name, kind, *repeat)?;
                    for m in missing {
                        let cell =
                            run_cell(spec, &dataset, &settings, &log, sim_name, kind, m, *repeat);
                        store_cell(&cells_dir, &cell)?;
                        out.push(cell);
                    }
                }
                Ok(out)
            }
        }
    });

    let mut matrix = ResultMatrix::default();
    for r in results {
        matrix.cells.extend(r?);
    }
    matrix.cells.sort_by(|a, b| {
        (&a.sim, &a.method, a.repeat).cmp(&(&b.sim, &b.method, b.repeat))
    });

    write_manifest(spec, out_dir, &matrix)?;
    Ok(matrix)
}

/// Load a previously written matrix from its cell files.
pub fn load_matrix(out_dir: &Path) -> Result<ResultMatrix> {
    let cells_dir = out_dir.join("cells");
    let mut matrix = ResultMatrix::default();
    let entries = std::fs::read_dir(&cells_dir)
        .map_err(|e| Error::io(cells_dir.display().to_string(), e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io("cells", e))?;
        if entry.path().extension().map(|e| e == "json").unwrap_or(false) {
            if let Some(cell) = load_cell(&entry.path()) {
                matrix.cells.push(cell);
            }
        }
    }
    if matrix.cells.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no cell files under {}",
            cells_dir.display()
        )));
    }
    matrix.cells.sort_by(|a, b| {
        (&a.sim, &a.method, a.repeat).cmp(&(&b.sim, &b.method, b.repeat))
    });
    Ok(matrix)
}

fn sha256_hex(path: &Path) -> Result<String> {
    let data = std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut h = Sha256::new();
    h.update(&data);
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub files: BTreeMap<String, String>,
}

fn write_manifest(spec: &ExperimentSpec, out_dir: &Path, matrix: &ResultMatrix) -> Result<()> {
    let spec_path = out_dir.join("spec_echo.json");
    std::fs::write(&spec_path, serde_json::to_string_pretty(spec)?)
        .map_err(|e| Error::io(spec_path.display().to_string(), e))?;

    let mut files = BTreeMap::new();
    let rel = |p: &Path| -> String {
        p.strip_prefix(out_dir)
            .unwrap_or(p)
            .to_string_lossy()
            .into_owned()
    };
    files.insert(rel(&spec_path), sha256_hex(&spec_path)?);
    for cell in &matrix.cells {
        let path = out_dir
            .join("cells")
            .join(cell_file_name(&cell.sim, &cell.method, cell.repeat));
        files.insert(rel(&path), sha256_hex(&path)?);
    }
    let manifest = Manifest { files };
    let path = out_dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

/// Check that every manifest entry exists with a matching hash.
pub fn verify_manifest(out_dir: &Path) -> Result<Vec<String>> {
    let path = out_dir.join("manifest.json");
    let data = std::fs::read_to_string(&path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let manifest: Manifest = serde_json::from_str(&data)?;
    let mut problems = Vec::new();
    for (file, hash) in &manifest.files {
        let p = out_dir.join(file);
        if !p.exists() {
            problems.push(format!("missing {file}"));
            continue;
        }
        if &sha256_hex(&p)? != hash {
            problems.push(format!("hash mismatch for {file}"));
        }
    }
    Ok(problems)
}

/// Per-(sim, method) mean/std summary plus pairwise significance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub means: BTreeMap<String, BTreeMap<String, MethodStats>>,
    pub p_values: BTreeMap<String, BTreeMap<String, f64>>,
    pub errors: Vec<String>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MethodStats {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

/// Long-format CSV (`sim,method,repeat,ndcg10`) plus a JSON summary with
/// means, standard deviations, and pairwise paired-t p-values.
pub fn emit_results(matrix: &ResultMatrix, csv_path: &Path, summary_path: &Path) -> Result<()> {
    if matrix.cells.is_empty() {
        return Err(Error::InvalidInput("empty result matrix".into()));
    }
    let mut csv = String::from("sim,method,repeat,ndcg10\n");
    for cell in &matrix.cells {
        if let Some(v) = cell.ndcg10 {
            csv.push_str(&format!("{},{},{},{v}\n", cell.sim, cell.method, cell.repeat));
        }
    }
    std::fs::write(csv_path, csv).map_err(|e| Error::io(csv_path.display().to_string(), e))?;

    let mut sims: Vec<String> = matrix.cells.iter().map(|c| c.sim.clone()).collect();
    sims.sort();
    sims.dedup();
    let mut means: BTreeMap<String, BTreeMap<String, MethodStats>> = BTreeMap::new();
    let mut p_values: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    let mut errors = Vec::new();
    for cell in &matrix.cells {
        if let Some(e) = &cell.error {
            errors.push(format!("{}/{}/rep{}: {e}", cell.sim, cell.method, cell.repeat));
        }
    }
    for sim in &sims {
        let mut methods: Vec<String> = matrix
            .cells
            .iter()
            .filter(|c| &c.sim == sim)
            .map(|c| c.method.clone())
            .collect();
        methods.sort();
        methods.dedup();
        let mut sim_means = BTreeMap::new();
        let mut sim_ps = BTreeMap::new();
        for m in &methods {
            let series = matrix.series(sim, m);
            if series.is_empty() {
                continue;
            }
            let n = series.len();
            let mean = series.iter().sum::<f64>() / n as f64;
            let var = if n > 1 {
                series.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
            } else {
                0.0
            };
            sim_means.insert(m.clone(), MethodStats {
                mean,
                std: var.sqrt(),
                n,
            });
        }
        for (i, a) in methods.iter().enumerate() {
            for b in methods.iter().skip(i + 1) {
                let sa = matrix.series(sim, a);
                let sb = matrix.series(sim, b);
                if sa.len() == sb.len() && sa.len() >= 2 {
                    let t = paired_t_test(&sa, &sb)?;
                    sim_ps.insert(format!("{a}|{b}"), t.p);
                    sim_ps.insert(format!("{b}|{a}"), t.p);
                }
            }
        }
        means.insert(sim.clone(), sim_means);
        p_values.insert(sim.clone(), sim_ps);
    }
    let summary = Summary {
        means,
        p_values,
        errors,
    };
    std::fs::write(summary_path, serde_json::to_string_pretty(&summary)?)
        .map_err(|e| Error::io(summary_path.display().to_string(), e))?;
    Ok(())
}
