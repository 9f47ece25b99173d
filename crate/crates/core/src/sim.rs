//! Single-shot decoding protocol simulation.
//!
//! A trial runs T rounds of error correction against an accumulating
//! residual X-error. Every round adds fresh iid data flips (probability p)
//! to the residual and decodes its Z-syndrome, applying the correction
//! immediately. In rounds 1..T-1 each syndrome bit is flipped independently
//! with probability q; the final round reads the syndrome perfectly, so
//! T = 1 is the noiseless-measurement setting. The trial succeeds iff the
//! final residual is a product of X stabilizers (zero syndrome *and*
//! row-space membership, re-checked independently of the decoder's
//! adjacency structures).
//!
//! Trials draw from per-trial counter-based ChaCha streams, so results are
//! byte-reproducible for a fixed seed regardless of thread scheduling.

use crate::css::CssCode;
use crate::decode::{bp_decode, ca_decode, DecodeOutcome, TannerGraph};
use crate::gf2::{bit_flip, words_for};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    /// Cellular-automaton strict-majority flip decoder.
    Ca,
    /// Belief propagation with the channel prior.
    Bp,
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<DecoderKind> {
        match s {
            "ca" => Ok(DecoderKind::Ca),
            "bp" => Ok(DecoderKind::Bp),
            other => Err(Error::Parse(format!("unknown decoder {other:?} (expected ca or bp)"))),
        }
    }
}

impl std::fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecoderKind::Ca => write!(f, "ca"),
            DecoderKind::Bp => write!(f, "bp"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimConfig {
    /// Descriptor of the code under test (carried into reports).
    pub code: String,
    pub decoder: DecoderKind,
    /// Total rounds; the last reads its syndrome noiselessly.
    pub rounds: usize,
    /// Per-round, per-qubit flip probability.
    pub p: f64,
    /// Per-round, per-check syndrome flip probability.
    pub q: f64,
    pub trials: usize,
    pub seed: u64,
    /// Iteration cap handed to the decoder (sweeps for CA, rounds for BP).
    pub max_decoder_iters: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..0.5).contains(&v) {
                return Err(Error::Invalid(format!(
                    "{name} = {v} outside the supported range [0, 0.5)"
                )));
            }
        }
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be positive".into()));
        }
        if self.rounds == 0 {
            return Err(Error::Invalid("the protocol needs at least one round".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimResult {
    #[serde(flatten)]
    pub config: SimConfig,
    pub n: usize,
    pub k: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Mean decoder iterations per decode call.
    pub mean_rounds: f64,
    /// Failure probability of k bare qubits under one round of the same
    /// channel: 1 - (1-p)^k.
    pub unencoded_failure_rate: f64,
}

/// 95% Wald interval for a binomial proportion, clipped to [0, 1].
pub fn wald_ci(failures: usize, trials: usize) -> (f64, f64) {
    let p = failures as f64 / trials as f64;
    let half = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

/// Flip each of n bits independently with probability p, via geometric gap
/// sampling (fast in the sparse regime the protocol operates in).
fn sample_flips(rng: &mut ChaCha8Rng, n: usize, p: f64, out: &mut [u64]) {
    if p <= 0.0 {
        return;
    }
    let log1mp = (1.0 - p).ln();
    let mut pos = 0usize;
    loop {
        let u: f64 = rng.random();
        let gap = (u.ln() / log1mp).floor();
        if !(gap >= 0.0) || gap >= (n - pos) as f64 {
            return;
        }
        pos += gap as usize;
        bit_flip(out, pos);
        pos += 1;
        if pos >= n {
            return;
        }
    }
}

/// Run the single-shot protocol. Decoding acts on the Z-check matrix
/// (X-error sector); the trial succeeds when the final residual is an X
/// stabilizer product.
pub fn run_single_shot(code: &CssCode, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let graph = TannerGraph::from_matrix(&code.hz);
    let bp_prior = cfg.p.clamp(1e-9, 0.4999);
    let nwords = words_for(code.n);
    let mwords = words_for(code.hz.rows);

    let totals = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let mut resid = vec![0u64; nwords];
            let mut iters = 0usize;
            let mut calls = 0usize;
            let decode = |syndrome: &[u64], iters: &mut usize, calls: &mut usize| {
                let out: DecodeOutcome = match cfg.decoder {
                    DecoderKind::Ca => ca_decode(&graph, syndrome, cfg.max_decoder_iters),
                    DecoderKind::Bp => {
                        bp_decode(&graph, syndrome, bp_prior, cfg.max_decoder_iters)
                    }
                };
                *iters += out.iterations;
                *calls += 1;
                out.correction
            };
            for t in 1..=cfg.rounds {
                sample_flips(&mut rng, code.n, cfg.p, &mut resid);
                let mut syndrome = graph.syndrome(&resid);
                if t < cfg.rounds {
                    let mut noise = vec![0u64; mwords];
                    sample_flips(&mut rng, code.hz.rows, cfg.q, &mut noise);
                    for (s, z) in syndrome.iter_mut().zip(&noise) {
                        *s ^= z;
                    }
                }
                let corr = decode(&syndrome, &mut iters, &mut calls);
                for (r, c) in resid.iter_mut().zip(&corr) {
                    *r ^= c;
                }
            }
            let ok = code.x_error_is_stabilizer(&resid);
            (usize::from(!ok), iters, calls)
        })
        .reduce(
            || (0usize, 0usize, 0usize),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
        );

    let (failures, iter_total, call_total) = totals;
    let (ci_lo, ci_hi) = wald_ci(failures, cfg.trials);
    Ok(SimResult {
        config: cfg.clone(),
        n: code.n,
        k: code.k,
        failures,
        failure_rate: failures as f64 / cfg.trials as f64,
        ci_lo,
        ci_hi,
        mean_rounds: iter_total as f64 / call_total.max(1) as f64,
        unencoded_failure_rate: 1.0 - (1.0 - cfg.p).powi(code.k as i32),
    })
}

pub const CSV_HEADER: &str = "code,n,k,decoder,T,p,q,trials,failures,rate,ci_lo,ci_hi,mean_rounds,seed";

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_csv(w: &mut impl Write, results: &[SimResult]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in results {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.config.code),
            r.n,
            r.k,
            r.config.decoder,
            r.config.rounds,
            r.config.p,
            r.config.q,
            r.config.trials,
            r.failures,
            r.failure_rate,
            r.ci_lo,
            r.ci_hi,
            r.mean_rounds,
            r.config.seed,
        )?;
    }
    Ok(())
}

pub fn write_json(w: &mut impl Write, results: &[SimResult]) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, results)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    writeln!(w)?;
    Ok(())
}
