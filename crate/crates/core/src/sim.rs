//! Random Gaussian codebooks over the wiretap channel with ML decoding at
//! both receivers.
//!
//! Each trial draws (by default) a fresh codebook of `M = round(2^{nR})`
//! i.i.d. `N(0, P)` codewords, a uniform message, and independent noises for
//! Bob and Eve. Besides the two decoding errors it counts how many other
//! codewords fall inside the sphere of squared radius `n sigma2_sq (1+delta)`
//! around Eve's observation.
//!
//! Trial `i` draws everything from ChaCha stream `i` of the master seed, and
//! outcomes are reduced in trial order, so results do not depend on threading.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::WiretapChannel;
use crate::error::{check_domain, Error, Result};
use crate::math::{abs, exp2, round, sqrt};

/// Upper limit on the number of codewords.
pub const MAX_MESSAGES: usize = 1 << 26;

/// Stream index reserved for the shared codebook in fixed-codebook mode.
const SHARED_CODEBOOK_STREAM: u64 = u64::MAX;

/// Deviation, in standard deviations of the chi-square mean, beyond which a
/// trial's Eve noise power is flagged.
pub const NOISE_OUTLIER_SIGMAS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    pub n: usize,
    /// Bits per channel use.
    pub rate: f64,
    pub channel: WiretapChannel,
    pub trials: u64,
    pub seed: u64,
    /// Slack on the squared confusion radius.
    pub delta: f64,
    pub fresh_codebook_per_trial: bool,
}

impl SimConfig {
    /// Configuration with the default slack (0.05) and a fresh codebook per trial.
    pub fn new(n: usize, rate: f64, channel: WiretapChannel, trials: u64, seed: u64) -> Self {
        Self {
            n,
            rate,
            channel,
            trials,
            seed,
            delta: 0.05,
            fresh_codebook_per_trial: true,
        }
    }

    /// `round(2^{nR})`, checked against [`MAX_MESSAGES`].
    pub fn messages(&self) -> Result<usize> {
        messages_for(self.n, self.rate)
    }

    pub fn validate(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::Config("block length n must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        check_domain("delta", self.delta, "[0, inf)", self.delta >= 0.0)?;
        self.messages()
    }
}

pub fn messages_for(n: usize, rate: f64) -> Result<usize> {
    check_domain("rate", rate, "[0, inf)", rate >= 0.0 && rate.is_finite())?;
    let m = round(exp2(n as f64 * rate));
    if !(m <= MAX_MESSAGES as f64) {
        return Err(Error::Config(format!(
            "2^(nR) = 2^{} messages exceeds the limit of 2^26",
            n as f64 * rate
        )));
    }
    Ok((m as usize).max(1))
}

/// `messages x n` matrix of codewords, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    n: usize,
    messages: usize,
    data: Vec<f64>,
}

impl Codebook {
    /// Draws `messages` codewords of length `n` with i.i.d. `N(0, power)` entries.
    pub fn generate<R: Rng + ?Sized>(
        n: usize,
        messages: usize,
        power: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut cb = Self {
            n,
            messages: 0,
            data: Vec::new(),
        };
        cb.regenerate(messages, power, rng)?;
        Ok(cb)
    }

    /// Refills in place, reusing the allocation.
    pub fn regenerate<R: Rng + ?Sized>(
        &mut self,
        messages: usize,
        power: f64,
        rng: &mut R,
    ) -> Result<()> {
        if messages == 0 || messages > MAX_MESSAGES {
            return Err(Error::Config(format!(
                "codebook size {messages} outside [1, 2^26]"
            )));
        }
        check_domain("power", power, "[0, inf)", power >= 0.0)?;
        let std = sqrt(power);
        self.messages = messages;
        self.data.clear();
        self.data.reserve(messages * self.n);
        for _ in 0..messages * self.n {
            let g: f64 = StandardNormal.sample(rng);
            self.data.push(std * g);
        }
        Ok(())
    }

    /// Builds a codebook from explicit rows.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.is_empty() || data.len() % n != 0 {
            return Err(Error::Config(format!(
                "{} entries do not form rows of length {n}",
                data.len()
            )));
        }
        Ok(Self {
            n,
            messages: data.len() / n,
            data,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn codeword(&self, index: usize) -> &[f64] {
        &self.data[index * self.n..(index + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }
}

/// Squared distance, abandoning once it exceeds `limit`.
#[inline]
fn distance_sq_bounded(a: &[f64], b: &[f64], limit: f64) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
        if acc > limit {
            break;
        }
    }
    acc
}

/// Minimum-distance (ML) decoding; ties go to the smallest index.
pub fn ml_decode(codebook: &Codebook, y: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (k, row) in codebook.rows().enumerate() {
        let d = distance_sq_bounded(row, y, best_d);
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    best
}

/// Number of codewords other than `sent` within squared distance
/// `n sigma2_sq (1 + delta)` of `z`.
pub fn confusion_count(
    codebook: &Codebook,
    z: &[f64],
    sent: usize,
    sigma2_sq: f64,
    delta: f64,
) -> u64 {
    let radius_sq = codebook.n() as f64 * sigma2_sq * (1.0 + delta);
    codebook
        .rows()
        .enumerate()
        .filter(|&(k, row)| k != sent && distance_sq_bounded(row, z, radius_sq) <= radius_sq)
        .count() as u64
}

/// What happened in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub message: usize,
    pub bob_decoded: usize,
    pub eve_decoded: usize,
    pub confusion: u64,
    /// Eve's per-symbol noise power `(1/n) sum N2_i^2` sat more than
    /// [`NOISE_OUTLIER_SIGMAS`] chi-square standard deviations from `sigma2_sq`.
    pub eve_noise_outlier: bool,
}

impl TrialOutcome {
    pub fn bob_error(&self) -> bool {
        self.bob_decoded != self.message
    }

    pub fn eve_error(&self) -> bool {
        self.eve_decoded != self.message
    }
}

/// RNG for trial `index`: stream `index` of the master seed.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The codebook shared by all trials when `fresh_codebook_per_trial` is off.
pub fn shared_codebook(cfg: &SimConfig) -> Result<Codebook> {
    let m = cfg.validate()?;
    let mut rng = trial_rng(cfg.seed, SHARED_CODEBOOK_STREAM);
    Codebook::generate(cfg.n, m, cfg.channel.power(), &mut rng)
}

/// Runs trial `index`. `scratch` holds the fresh codebook when one is drawn;
/// `shared` is used otherwise.
///
/// Draw order on the trial stream: message, codebook (if fresh), Bob's noise,
/// Eve's noise.
pub fn run_trial(
    cfg: &SimConfig,
    messages: usize,
    index: u64,
    shared: Option<&Codebook>,
    scratch: &mut Codebook,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(cfg.seed, index);
    let message = rng.random_range(0..messages);
    let codebook = match shared {
        Some(cb) if !cfg.fresh_codebook_per_trial => cb,
        _ => {
            scratch.regenerate(messages, cfg.channel.power(), &mut rng)?;
            &*scratch
        }
    };
    let n = cfg.n;
    let x = codebook.codeword(message);
    let (s1, s2) = (sqrt(cfg.channel.sigma1_sq()), sqrt(cfg.channel.sigma2_sq()));
    let y: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let e: f64 = StandardNormal.sample(&mut rng);
            xi + s1 * e
        })
        .collect();
    let mut noise_energy = 0.0;
    let z: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let g: f64 = StandardNormal.sample(&mut rng);
            let e = s2 * g;
            noise_energy += e * e;
            xi + e
        })
        .collect();

    let var2 = cfg.channel.sigma2_sq();
    let noise_std = var2 * sqrt(2.0 / n as f64);
    Ok(TrialOutcome {
        message,
        bob_decoded: ml_decode(codebook, &y),
        eve_decoded: ml_decode(codebook, &z),
        confusion: confusion_count(codebook, &z, message, var2, cfg.delta),
        eve_noise_outlier: abs(noise_energy / n as f64 - var2) > NOISE_OUTLIER_SIGMAS * noise_std,
    })
}

/// Empirical proportion with a 95% normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Proportion {
    pub mean: f64,
    pub half_width: f64,
}

impl Proportion {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let t = trials as f64;
        let mean = successes as f64 / t;
        Self {
            mean,
            half_width: 1.96 * sqrt(mean * (1.0 - mean) / t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimResult {
    pub trials: u64,
    pub messages: usize,
    pub pe_bob: Proportion,
    pub pe_eve: Proportion,
    /// Mean of the confusion count `N`.
    pub confusion_mean: f64,
    /// Sample variance of `N`.
    pub confusion_var: f64,
    /// `(M - 1) 2^{-n C2}`.
    pub predicted_confusion: f64,
    /// `2^{n (R - C2)}`.
    pub sphere_estimate: f64,
    pub noise_outliers: u64,
}

impl SimResult {
    /// Coefficient of variation of the confusion count.
    pub fn confusion_cv(&self) -> f64 {
        if self.confusion_mean > 0.0 {
            sqrt(self.confusion_var) / self.confusion_mean
        } else {
            0.0
        }
    }

    /// `log2(mean N + 1) / n`, the empirical confusion exponent.
    pub fn confusion_rate(&self, n: usize) -> f64 {
        libm::log2(self.confusion_mean + 1.0) / n as f64
    }
}

/// Reduces trial outcomes (in trial order) to a [`SimResult`].
pub fn summarize(cfg: &SimConfig, messages: usize, outcomes: &[TrialOutcome]) -> SimResult {
    let trials = outcomes.len() as u64;
    let bob = outcomes.iter().filter(|o| o.bob_error()).count() as u64;
    let eve = outcomes.iter().filter(|o| o.eve_error()).count() as u64;
    let sum: u128 = outcomes.iter().map(|o| o.confusion as u128).sum();
    let sum_sq: u128 = outcomes.iter().map(|o| (o.confusion as u128).pow(2)).sum();
    let t = trials as u128;
    let confusion_var = if trials > 1 {
        // Exact integer numerator: T sum_sq - sum^2 >= 0.
        (t * sum_sq - sum * sum) as f64 / (trials as f64 * (trials - 1) as f64)
    } else {
        0.0
    };
    let c2 = cfg.channel.capacities().c2;
    let nf = cfg.n as f64;
    SimResult {
        trials,
        messages,
        pe_bob: Proportion::from_counts(bob, trials),
        pe_eve: Proportion::from_counts(eve, trials),
        confusion_mean: sum as f64 / trials as f64,
        confusion_var,
        predicted_confusion: (messages as f64 - 1.0) * exp2(-nf * c2),
        sphere_estimate: exp2(nf * (cfg.rate - c2)),
        noise_outliers: outcomes.iter().filter(|o| o.eve_noise_outlier).count() as u64,
    }
}

/// Runs every trial and returns per-trial outcomes in trial order.
pub fn run_outcomes(cfg: &SimConfig) -> Result<Vec<TrialOutcome>> {
    let messages = cfg.validate()?;
    let shared = if cfg.fresh_codebook_per_trial {
        None
    } else {
        Some(shared_codebook(cfg)?)
    };
    collect_outcomes(cfg, messages, shared.as_ref())
}

#[cfg(not(feature = "parallel"))]
fn collect_outcomes(
    cfg: &SimConfig,
    messages: usize,
    shared: Option<&Codebook>,
) -> Result<Vec<TrialOutcome>> {
    let mut scratch = Codebook {
        n: cfg.n,
        messages: 0,
        data: Vec::new(),
    };
    (0..cfg.trials)
        .map(|i| run_trial(cfg, messages, i, shared, &mut scratch))
        .collect()
}

#[cfg(feature = "parallel")]
fn collect_outcomes(
    cfg: &SimConfig,
    messages: usize,
    shared: Option<&Codebook>,
) -> Result<Vec<TrialOutcome>> {
    use rayon::prelude::*;
    (0..cfg.trials)
        .into_par_iter()
        .map_init(
            || Codebook {
                n: cfg.n,
                messages: 0,
                data: Vec::new(),
            },
            |scratch, i| run_trial(cfg, messages, i, shared, scratch),
        )
        .collect()
}

/// Runs the configured trials and aggregates them.
pub fn run_trials(cfg: &SimConfig) -> Result<SimResult> {
    let messages = cfg.validate()?;
    let outcomes = run_outcomes(cfg)?;
    Ok(summarize(cfg, messages, &outcomes))
}
