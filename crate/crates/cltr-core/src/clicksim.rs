//! Click simulation under PBM, DCM, DBN, and CCM.
//!
//! Every model follows the examination hypothesis: a click happens iff the
//! position is examined and attracts the user, where attraction equals
//! relevance up to click noise. PBM examines each rank independently;
//! the cascade models walk the list top-down and decide after every
//! position whether to continue, based on the click outcome there.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::types::{ClickLog, ClickModelParams, NoiseSpec, QueryList, Session};

/// Reciprocal examination schedule: theta_j = (1/j)^eta for ranks 1..=k.
pub fn pbm_theta_schedule(eta: f64, k: usize) -> Vec<f64> {
    assert!(eta >= 0.0 && k >= 1);
    (1..=k).map(|j| (1.0 / j as f64).powf(eta)).collect()
}

/// Continuation schedule for DCM: lambda_j = beta * (1/j)^eta.
pub fn dcm_lambda_schedule(beta: f64, eta: f64, k: usize) -> Vec<f64> {
    assert!((0.0..=1.0).contains(&beta) && eta >= 0.0 && k >= 1);
    (1..=k).map(|j| beta * (1.0 / j as f64).powf(eta)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulatorConfig {
    pub params: ClickModelParams,
    pub noise: NoiseSpec,
    /// Keep sessions without any click (dropped by default, matching the
    /// training-set filtering rule).
    #[serde(default)]
    pub keep_empty_sessions: bool,
    pub seed: u64,
    /// Stop once the retained sessions hold at least this many clicks.
    pub target_clicks: u64,
    /// Tag recorded on every generated session.
    pub generator_tag: String,
    /// Give up after this many attempted sessions.
    #[serde(default = "default_attempt_cap")]
    pub attempt_cap: u64,
}

fn default_attempt_cap() -> u64 {
    20_000_000
}

impl SimulatorConfig {
    pub fn new(params: ClickModelParams, seed: u64, target_clicks: u64, tag: &str) -> Self {
        SimulatorConfig {
            params,
            noise: NoiseSpec::default(),
            keep_empty_sessions: false,
            seed,
            target_clicks,
            generator_tag: tag.to_string(),
            attempt_cap: default_attempt_cap(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_clicks == 0 {
            return Err(Error::InvalidParam("target_clicks must be > 0".into()));
        }
        self.params.validate()?;
        self.noise.validate()
    }
}

/// Click bitmap plus the latent examination trace, which the simulator can
/// observe even though a real log cannot.
#[derive(Clone, Debug, PartialEq)]
pub struct SessionTrace {
    pub clicks: Vec<u8>,
    pub examined: Vec<u8>,
}

/// Continuation probability after observing the click at one position.
/// These single-step factors are exactly the terms of the closed-form
/// session propensities.
fn continuation_prob(
    params: &ClickModelParams,
    list: &QueryList,
    position: usize,
    clicked: bool,
) -> Result<f64> {
    Ok(match params {
        ClickModelParams::Pbm { .. } => 1.0, // unused: PBM has no cascade state
        ClickModelParams::Dcm { lambda } => {
            if clicked {
                *lambda.get(position).ok_or_else(|| {
                    Error::InvalidParam(format!("lambda shorter than list at {position}"))
                })?
            } else {
                1.0
            }
        }
        ClickModelParams::Dbn {
            gamma,
            satisfaction,
        } => {
            let doc = &list.docs[position];
            let s = *satisfaction.get(&doc.doc_id).ok_or_else(|| {
                Error::InvalidParam(format!("no satisfaction value for doc {}", doc.doc_id))
            })?;
            if clicked {
                gamma * (1.0 - s)
            } else {
                *gamma
            }
        }
        ClickModelParams::Ccm {
            alpha1,
            alpha2,
            alpha3,
        } => {
            if clicked {
                let r = list.docs[position].relevance as f64;
                alpha2 * (1.0 - r) + alpha3 * r
            } else {
                *alpha1
            }
        }
    })
}

/// Simulate one session, returning both clicks and the examination trace.
pub fn simulate_session_trace(
    list: &QueryList,
    config: &SimulatorConfig,
    rng: &mut ChaCha8Rng,
) -> Result<SessionTrace> {
    let n = list.len();
    let mut clicks = vec![0u8; n];
    let mut examined = vec![0u8; n];
    match &config.params {
        ClickModelParams::Pbm { theta } => {
            if theta.len() < n {
                return Err(Error::InvalidParam(format!(
                    "theta covers {} positions, list needs {n}",
                    theta.len()
                )));
            }
            for j in 0..n {
                if rng.random::<f64>() < theta[j] {
                    examined[j] = 1;
                    let p = config.noise.click_prob(list.docs[j].relevance);
                    if rng.random::<f64>() < p {
                        clicks[j] = 1;
                    }
                }
            }
        }
        params => {
            let mut active = true;
            for j in 0..n {
                if !active {
                    break;
                }
                examined[j] = 1;
                let p = config.noise.click_prob(list.docs[j].relevance);
                let clicked = rng.random::<f64>() < p;
                if clicked {
                    clicks[j] = 1;
                }
                let cont = continuation_prob(params, list, j, clicked)?;
                active = rng.random::<f64>() < cont;
            }
        }
    }
    Ok(SessionTrace { clicks, examined })
}

/// Simulate one session and package it with its query id.
pub fn simulate_session(
    list: &QueryList,
    config: &SimulatorConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Session> {
    let trace = simulate_session_trace(list, config, rng)?;
    Ok(Session {
        query_id: list.query_id.clone(),
        clicks: trace.clicks,
        generator: Some(config.generator_tag.clone()),
        seed_info: None,
    })
}

/// Sample whether rank `clicks.len()` (0-based: the position right after
/// the prefix) is examined in a cascade model, with the click prefix held
/// fixed. Used to Monte-Carlo-check the closed-form propensities.
pub fn sample_examination_after_prefix(
    params: &ClickModelParams,
    list: &QueryList,
    clicks_prefix: &[u8],
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    for (i, &c) in clicks_prefix.iter().enumerate() {
        let cont = continuation_prob(params, list, i, c == 1)?;
        if rng.random::<f64>() >= cont {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Simulate a click log over a prepared dataset. Queries are sampled
/// uniformly with replacement; attempt i draws from an independent RNG
/// stream with id i, so the result is the same for any chunking or thread
/// count. Sessions without clicks are discarded unless configured
/// otherwise, and generation stops once the retained sessions carry
/// `target_clicks` clicks.
pub fn simulate_log(queries: &[QueryList], config: &SimulatorConfig) -> Result<ClickLog> {
    config.validate()?;
    if queries.is_empty() {
        return Err(Error::InvalidInput("empty dataset".into()));
    }
    const CHUNK: u64 = 4096;

    let mut sessions: Vec<Session> = Vec::new();
    let mut clicks_so_far: u64 = 0;
    let mut next_attempt: u64 = 0;
    while clicks_so_far < config.target_clicks {
        if next_attempt >= config.attempt_cap {
            return Err(Error::TargetUnreachable(format!(
                "{clicks_so_far}/{} clicks after {next_attempt} attempts",
                config.target_clicks
            )));
        }
        let chunk = CHUNK.min(config.attempt_cap - next_attempt);
        let batch: Vec<Result<Session>> = exec::map_indexed(chunk as usize, |off| {
            let attempt = next_attempt + off as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(attempt);
            let qi = rng.random_range(0..queries.len());
            let mut session = simulate_session(&queries[qi], config, &mut rng)?;
            session.seed_info = Some(attempt);
            Ok(session)
        });
        next_attempt += chunk;
        for s in batch {
            let s = s?;
            let c = s.click_count();
            if c == 0 && !config.keep_empty_sessions {
                continue;
            }
            clicks_so_far += c;
            sessions.push(s);
            if clicks_so_far >= config.target_clicks {
                break;
            }
        }
    }
    Ok(ClickLog::new(sessions))
}
