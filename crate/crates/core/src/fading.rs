//! Fading wiretap channel with full CSI.
//!
//! Bob and Eve see power gains `q = |h|^2` and `r = |g|^2`, independent
//! exponentials (Rayleigh amplitudes) with unit noise. Alice transmits only
//! when `q > r` and adapts power to `(q, r)`. Two policies are solved:
//! the secrecy-capacity allocation, and water-filling on `q` restricted to
//! `q > r` for the main-channel capacity.
//!
//! Lagrangians use natural logs, so multipliers are in nats per unit power;
//! capacities are reported in bits.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{check_domain, Error, Result};
use crate::math::{abs, exp_m1, ln, ln_1p, sqrt, LOG2_E};
use crate::quadrature::GaussLegendre;

/// Quadrature and Monte Carlo controls.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegrationConfig {
    /// Gauss–Legendre nodes per axis.
    pub nodes: usize,
    /// Probability mass cut from the upper tail of each gain.
    pub tail_mass: f64,
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            nodes: 128,
            tail_mass: 1e-8,
            mc_samples: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FadingConfig {
    /// Mean of Bob's power gain `q`.
    pub mean_q: f64,
    /// Mean of Eve's power gain `r`.
    pub mean_r: f64,
    /// Average power budget.
    pub power: f64,
    pub integration: IntegrationConfig,
    /// Relative tolerance on the average-power constraint.
    pub tol_lambda: f64,
}

impl Default for FadingConfig {
    fn default() -> Self {
        Self {
            mean_q: 1.0,
            mean_r: 1.0,
            power: 1.0,
            integration: IntegrationConfig::default(),
            tol_lambda: 1e-6,
        }
    }
}

impl FadingConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |name, v: f64| check_domain(name, v, "(0, inf)", v > 0.0 && v.is_finite());
        pos("mean_q", self.mean_q)?;
        pos("mean_r", self.mean_r)?;
        pos("tol_lambda", self.tol_lambda)?;
        check_domain(
            "power",
            self.power,
            "[0, inf)",
            self.power >= 0.0 && self.power.is_finite(),
        )?;
        check_domain(
            "tail_mass",
            self.integration.tail_mass,
            "(0, 1)",
            self.integration.tail_mass > 0.0 && self.integration.tail_mass < 1.0,
        )?;
        if self.integration.nodes == 0 {
            return Err(Error::Config("integration.nodes must be positive".into()));
        }
        Ok(())
    }

    /// `P(q > r) = mean_q / (mean_q + mean_r)` for independent exponentials.
    pub fn transmit_probability(&self) -> f64 {
        self.mean_q / (self.mean_q + self.mean_r)
    }
}

/// Power allocation policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Policy {
    /// Maximizes `ln(1+qP) - ln(1+rP)`: the secrecy-capacity allocation.
    Secrecy,
    /// Water-filling on `q`, transmitting only when `q > r`.
    Main,
}

impl Policy {
    pub fn as_str(&self) -> &'static str {
        match self {
            Policy::Secrecy => "secrecy",
            Policy::Main => "main",
        }
    }

    pub fn power(&self, q: f64, r: f64, lambda: f64) -> f64 {
        match self {
            Policy::Secrecy => secrecy_power(q, r, lambda),
            Policy::Main => waterfill_power(q, r, lambda),
        }
    }

    /// Rate in bits collected at gains `(q, r)` with power `p`.
    fn rate(&self, q: f64, r: f64, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        match self {
            Policy::Secrecy => (ln_1p(q * p) - ln_1p(r * p)) * LOG2_E,
            Policy::Main => ln_1p(q * p) * LOG2_E,
        }
    }
}

/// Secrecy-capacity power at gains `(q, r)` and multiplier `lambda`:
/// `0.5 [sqrt((1/r-1/q)^2 + (4/λ)(1/r-1/q)) - (1/r+1/q)]^+` when `q > r`.
///
/// This is the positive root of the first-order condition of
/// `ln(1+qP) - ln(1+rP) - λP`.
pub fn power_alloc_secrecy(q: f64, r: f64, lambda: f64) -> Result<f64> {
    check_domain("lambda", lambda, "(0, inf)", lambda > 0.0)?;
    check_domain("q", q, "[0, inf)", q >= 0.0)?;
    check_domain("r", r, "[0, inf)", r >= 0.0)?;
    Ok(secrecy_power(q, r, lambda))
}

fn secrecy_power(q: f64, r: f64, lambda: f64) -> f64 {
    if q <= r || lambda.is_infinite() {
        return 0.0;
    }
    // With d = 1/r - 1/q the root rearranges to 2 / (λ (1 + sqrt(1 + 4/(λ d)))) - 1/q,
    // which stays finite as r -> 0 and avoids cancellation.
    let d = 1.0 / r - 1.0 / q;
    let p = 2.0 / (lambda * (1.0 + sqrt(1.0 + 4.0 / (lambda * d)))) - 1.0 / q;
    p.max(0.0)
}

/// Water-filling power `(1/λ - 1/q)^+` when `q > r`, else 0.
pub fn power_alloc_waterfill(q: f64, r: f64, lambda: f64) -> Result<f64> {
    check_domain("lambda", lambda, "(0, inf)", lambda > 0.0)?;
    Ok(waterfill_power(q, r, lambda))
}

fn waterfill_power(q: f64, r: f64, lambda: f64) -> f64 {
    if q <= r || q <= 0.0 {
        return 0.0;
    }
    (1.0 / lambda - 1.0 / q).max(0.0)
}

/// Gauss–Legendre rule over the region where a policy transmits, after the
/// inverse-CDF map of each gain.
///
/// Both policies are zero outside a region known in closed form: secrecy
/// needs `r < q - λ` (the first-order condition at `P = 0`), water-filling
/// needs `r < q` and `q > λ`. Integrating only over that region keeps the
/// integrand smooth, so the rule converges at its full order instead of
/// stalling on the jump along `q = r`.
struct GainGrid {
    /// Legendre nodes and weights on `[-1, 1]`.
    rule: GaussLegendre,
    mean_q: f64,
    mean_r: f64,
    /// Upper CDF level kept for `q`.
    top: f64,
}

impl GainGrid {
    fn new(cfg: &FadingConfig) -> Self {
        Self {
            rule: GaussLegendre::new(cfg.integration.nodes),
            mean_q: cfg.mean_q,
            mean_r: cfg.mean_r,
            top: 1.0 - cfg.integration.tail_mass,
        }
    }

    /// `E[f(q, r)]` over the transmit region of `policy` at multiplier `lambda`.
    fn expect<F: Fn(f64, f64) -> f64>(&self, policy: Policy, lambda: f64, f: F) -> f64 {
        if !lambda.is_finite() {
            return 0.0;
        }
        let cdf_q = -exp_m1(-lambda / self.mean_q);
        if cdf_q >= self.top {
            return 0.0;
        }
        let mut total = 0.0;
        for (u, wu) in self.rule.mapped(cdf_q, self.top) {
            let q = -self.mean_q * ln_1p(-u);
            let r_max = match policy {
                Policy::Secrecy => q - lambda,
                Policy::Main => q,
            };
            if r_max <= 0.0 {
                continue;
            }
            let cdf_r = -exp_m1(-r_max / self.mean_r);
            let mut row = 0.0;
            for (v, wv) in self.rule.mapped(0.0, cdf_r) {
                let r = -self.mean_r * ln_1p(-v);
                row += wv * f(q, r);
            }
            total += wu * row;
        }
        total
    }

    fn average_power(&self, policy: Policy, lambda: f64) -> f64 {
        self.expect(policy, lambda, |q, r| policy.power(q, r, lambda))
    }

    fn capacity(&self, policy: Policy, lambda: f64) -> f64 {
        self.expect(policy, lambda, |q, r| {
            policy.rate(q, r, policy.power(q, r, lambda))
        })
    }
}

const LAMBDA_FLOOR: f64 = 1e-300;
const LAMBDA_CEIL: f64 = 1e300;

/// Bisection (in `ln λ`) for the multiplier whose average power meets the budget.
fn solve_lambda(grid: &GainGrid, policy: Policy, cfg: &FadingConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.power == 0.0 {
        return Ok(f64::INFINITY);
    }
    let target = cfg.power;
    let excess = |lambda: f64| grid.average_power(policy, lambda) - target;

    // Expected power decreases in λ: find lo with excess > 0 and hi with excess < 0.
    let (mut lo, mut hi) = (1.0, 1.0);
    while excess(lo) <= 0.0 {
        lo *= 0.5;
        if lo < LAMBDA_FLOOR {
            return Err(Error::Numeric(format!(
                "cannot bracket lambda: average power stays below {target} on [{LAMBDA_FLOOR:e}, 1]"
            )));
        }
    }
    while excess(hi) >= 0.0 {
        hi *= 2.0;
        if hi > LAMBDA_CEIL {
            return Err(Error::Numeric(format!(
                "cannot bracket lambda: average power stays above {target} on [1, {LAMBDA_CEIL:e}]"
            )));
        }
    }
    for _ in 0..400 {
        let mid = sqrt(lo * hi);
        let e = excess(mid);
        if abs(e) <= cfg.tol_lambda * target * 0.5 {
            return Ok(mid);
        }
        if e > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if ln(hi / lo) < 1e-15 {
            break;
        }
    }
    let mid = sqrt(lo * hi);
    let rel = abs(excess(mid)) / target;
    if rel <= cfg.tol_lambda {
        Ok(mid)
    } else {
        Err(Error::Numeric(format!(
            "lambda bisection stalled in [{lo:e}, {hi:e}] with relative power error {rel:e}"
        )))
    }
}

/// Multiplier `λ*` meeting `E[P*(q,r)] = P` for the secrecy allocation.
pub fn solve_lambda_secrecy(cfg: &FadingConfig) -> Result<f64> {
    solve_lambda(&GainGrid::new(cfg), Policy::Secrecy, cfg)
}

/// Multiplier `λ'` meeting the budget for water-filling on `q > r`.
pub fn solve_lambda_main(cfg: &FadingConfig) -> Result<f64> {
    solve_lambda(&GainGrid::new(cfg), Policy::Main, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FadingCapacityResult {
    pub policy: Policy,
    /// Bits per channel use.
    pub capacity: f64,
    pub lambda: f64,
    pub avg_power_used: f64,
    /// `P(q > r)`.
    pub transmit_probability: f64,
}

fn capacity_with(cfg: &FadingConfig, policy: Policy) -> Result<FadingCapacityResult> {
    let grid = GainGrid::new(cfg);
    let lambda = solve_lambda(&grid, policy, cfg)?;
    Ok(FadingCapacityResult {
        policy,
        capacity: grid.capacity(policy, lambda),
        lambda,
        avg_power_used: grid.average_power(policy, lambda),
        transmit_probability: cfg.transmit_probability(),
    })
}

/// Secrecy capacity `E[(log2(1+qP*) - log2(1+rP*)) 1{q>r}]` with the
/// optimal allocation.
pub fn fading_secrecy_capacity(cfg: &FadingConfig) -> Result<FadingCapacityResult> {
    capacity_with(cfg, Policy::Secrecy)
}

/// Main-channel capacity `E[log2(1+qP(q)) 1{q>r}]` with water-filling on
/// `q` conditioned on `q > r`.
pub fn fading_main_capacity(cfg: &FadingConfig) -> Result<FadingCapacityResult> {
    capacity_with(cfg, Policy::Main)
}

/// Mean and 95% normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanEstimate {
    pub mean: f64,
    pub half_width: f64,
}

/// Seeded Monte Carlo estimates of the quantities the quadrature computes,
/// at a fixed multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FadingMonteCarlo {
    pub capacity: MeanEstimate,
    pub avg_power: MeanEstimate,
    pub transmit_probability: MeanEstimate,
    pub samples: u64,
}

/// Samples drawn per chunk; each chunk owns one ChaCha stream.
pub const MC_CHUNK: u64 = 1 << 16;

// Running sums of one chunk.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct ChunkSums {
    count: u64,
    rate: f64,
    rate_sq: f64,
    power: f64,
    power_sq: f64,
    transmit: u64,
}

impl ChunkSums {
    fn merge(self, o: Self) -> Self {
        Self {
            count: self.count + o.count,
            rate: self.rate + o.rate,
            rate_sq: self.rate_sq + o.rate_sq,
            power: self.power + o.power,
            power_sq: self.power_sq + o.power_sq,
            transmit: self.transmit + o.transmit,
        }
    }
}

// Sums over chunk `index` of the sample stream for `cfg.integration.seed`.
fn monte_carlo_chunk(cfg: &FadingConfig, policy: Policy, lambda: f64, index: u64) -> ChunkSums {
    let total = cfg.integration.mc_samples;
    let start = index * MC_CHUNK;
    let len = total.saturating_sub(start).min(MC_CHUNK);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.integration.seed);
    rng.set_stream(index);
    let mut s = ChunkSums::default();
    for _ in 0..len {
        let q: f64 = cfg.mean_q * <Exp1 as Distribution<f64>>::sample(&Exp1, &mut rng);
        let r: f64 = cfg.mean_r * <Exp1 as Distribution<f64>>::sample(&Exp1, &mut rng);
        let p = policy.power(q, r, lambda);
        let c = policy.rate(q, r, p);
        s.count += 1;
        s.rate += c;
        s.rate_sq += c * c;
        s.power += p;
        s.power_sq += p * p;
        s.transmit += u64::from(q > r);
    }
    s
}

fn finish(s: ChunkSums) -> FadingMonteCarlo {
    let n = s.count.max(1) as f64;
    let est = |sum: f64, sum_sq: f64| {
        let mean = sum / n;
        let var = if s.count > 1 {
            ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        MeanEstimate {
            mean,
            half_width: 1.96 * sqrt(var / n),
        }
    };
    let t = s.transmit as f64;
    FadingMonteCarlo {
        capacity: est(s.rate, s.rate_sq),
        avg_power: est(s.power, s.power_sq),
        transmit_probability: est(t, t),
        samples: s.count,
    }
}

/// Monte Carlo cross-check of a policy at multiplier `lambda`.
///
/// Chunk `i` draws from ChaCha stream `i` of the configured seed and chunk
/// sums are combined in index order, so the result does not depend on how
/// chunks are scheduled.
pub fn fading_monte_carlo(
    cfg: &FadingConfig,
    policy: Policy,
    lambda: f64,
) -> Result<FadingMonteCarlo> {
    cfg.validate()?;
    if cfg.integration.mc_samples == 0 {
        return Err(Error::Config("mc_samples must be positive".into()));
    }
    let chunks = cfg.integration.mc_samples.div_ceil(MC_CHUNK);
    let sums = chunk_sums(cfg, policy, lambda, chunks);
    Ok(finish(
        sums.into_iter()
            .fold(ChunkSums::default(), ChunkSums::merge),
    ))
}

#[cfg(not(feature = "parallel"))]
fn chunk_sums(cfg: &FadingConfig, policy: Policy, lambda: f64, chunks: u64) -> Vec<ChunkSums> {
    (0..chunks)
        .map(|i| monte_carlo_chunk(cfg, policy, lambda, i))
        .collect()
}

#[cfg(feature = "parallel")]
fn chunk_sums(cfg: &FadingConfig, policy: Policy, lambda: f64, chunks: u64) -> Vec<ChunkSums> {
    use rayon::prelude::*;
    (0..chunks)
        .into_par_iter()
        .map(|i| monte_carlo_chunk(cfg, policy, lambda, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ternary search on the pointwise Lagrangian, the oracle for the closed form.
    fn lagrangian_argmax(q: f64, r: f64, lambda: f64) -> f64 {
        let f = |p: f64| (q * p).ln_1p() - (r * p).ln_1p() - lambda * p;
        let (mut a, mut b) = (0.0, 1.0);
        while f(b) > f(b * 0.5) || b < 1.0 / lambda {
            b *= 2.0;
        }
        for _ in 0..300 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if f(m1) < f(m2) {
                a = m1;
            } else {
                b = m2;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn allocation_matches_oracle() {
        let p = power_alloc_secrecy(2.0, 1.0, 0.1).unwrap();
        assert!((p - lagrangian_argmax(2.0, 1.0, 0.1)).abs() < 1e-6);
        assert!(p > 0.0);
        // Printed-form check: 0.5 [sqrt(d^2 + 4d/λ) - (1/r + 1/q)].
        let d = 1.0 - 0.5;
        let direct = 0.5 * ((d * d + 4.0 * d / 0.1f64).sqrt() - 1.5);
        assert!((p - direct).abs() < 1e-12);
    }

    #[test]
    fn allocation_edges() {
        assert_eq!(power_alloc_secrecy(1.0, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(power_alloc_secrecy(0.5, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(power_alloc_secrecy(5.0, 0.1, 1e12).unwrap(), 0.0);
        assert!(power_alloc_secrecy(2.0, 1.0, 0.0).is_err());
        assert!(power_alloc_secrecy(2.0, 1.0, -1.0).is_err());
        // r -> 0 reduces to water-filling.
        let p = power_alloc_secrecy(2.0, 0.0, 0.25).unwrap();
        assert!((p - (4.0 - 0.5)).abs() < 1e-12);
        assert_eq!(power_alloc_waterfill(2.0, 1.0, 0.25).unwrap(), 3.5);
        assert_eq!(power_alloc_waterfill(1.0, 2.0, 0.25).unwrap(), 0.0);
        assert_eq!(power_alloc_waterfill(0.2, 0.1, 0.25).unwrap(), 0.0);
    }

    fn quick_cfg(power: f64) -> FadingConfig {
        FadingConfig {
            power,
            integration: IntegrationConfig {
                nodes: 64,
                mc_samples: 200_000,
                seed: 7,
                ..IntegrationConfig::default()
            },
            ..FadingConfig::default()
        }
    }

    #[test]
    fn zero_power() {
        let res = fading_secrecy_capacity(&quick_cfg(0.0)).unwrap();
        assert_eq!(res.capacity, 0.0);
        assert!(res.lambda.is_infinite());
        assert_eq!(fading_main_capacity(&quick_cfg(0.0)).unwrap().capacity, 0.0);
    }

    #[test]
    fn lambda_meets_budget() {
        for policy in [Policy::Secrecy, Policy::Main] {
            let cfg = quick_cfg(1.0);
            let res = capacity_with(&cfg, policy).unwrap();
            assert!((res.avg_power_used - 1.0).abs() <= cfg.tol_lambda);
        }
        assert!(
            solve_lambda_secrecy(&quick_cfg(1e-6)).unwrap()
                > solve_lambda_secrecy(&quick_cfg(1.0)).unwrap()
        );
    }

    #[test]
    fn capacity_ordering_and_monotonicity() {
        let s1 = fading_secrecy_capacity(&quick_cfg(1.0)).unwrap().capacity;
        let s2 = fading_secrecy_capacity(&quick_cfg(2.0)).unwrap().capacity;
        let m1 = fading_main_capacity(&quick_cfg(1.0)).unwrap().capacity;
        assert!(s2 > s1 && s1 > 0.0);
        assert!(m1 >= s1);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let cfg = quick_cfg(1.0);
        let a = fading_monte_carlo(&cfg, Policy::Secrecy, 0.3).unwrap();
        let b = fading_monte_carlo(&cfg, Policy::Secrecy, 0.3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 200_000);
        let other = FadingConfig {
            integration: IntegrationConfig {
                seed: 8,
                ..cfg.integration
            },
            ..cfg
        };
        assert_ne!(a, fading_monte_carlo(&other, Policy::Secrecy, 0.3).unwrap());
    }

    #[test]
    fn invalid_config() {
        let mut cfg = quick_cfg(1.0);
        cfg.mean_q = 0.0;
        assert!(fading_secrecy_capacity(&cfg).is_err());
        let mut cfg = quick_cfg(-1.0);
        cfg.power = -1.0;
        assert!(fading_main_capacity(&cfg).is_err());
    }
}
