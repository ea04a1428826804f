//! Finite-blocklength machinery: the Gaussian tail function and its inverse,
//! Eve's channel dispersion, the normal-approximation rate threshold that
//! keeps Eve's error above a floor, and the joint minimum-blocklength solver.

use alloc::format;

use crate::channel::WiretapChannel;
use crate::error::{check_domain, check_probability_open, Error, Result};
use crate::error_exponents::random_coding_exponent;
use crate::math::{abs, erfc, exp, ln, log2, sqrt, LOG2_E, PI};

/// Gaussian upper-tail probability `Q(x) = P[N(0,1) > x]`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x * core::f64::consts::FRAC_1_SQRT_2)
}

fn std_normal_pdf(x: f64) -> f64 {
    exp(-0.5 * x * x) / sqrt(2.0 * PI)
}

/// Inverse of [`q_function`] on `(0, 1)`.
///
/// Wichura's AS241 rational approximation followed by one Newton step on `Q`.
pub fn q_inverse(p: f64) -> Result<f64> {
    check_probability_open("p", p)?;
    let mut x = -normal_quantile(p);
    let density = std_normal_pdf(x);
    if density > 0.0 {
        x += (q_function(x) - p) / density;
    }
    Ok(x)
}

/// Standard normal quantile (AS241, PPND16).
fn normal_quantile(p: f64) -> f64 {
    let q = p - 0.5;
    if abs(q) <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&A, r) / poly(&B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = sqrt(-ln(tail));
    let val = if r <= 5.0 {
        r -= 1.6;
        poly(&C, r) / poly(&D, r)
    } else {
        r -= 5.0;
        poly(&E, r) / poly(&F, r)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

fn poly(coeffs: &[f64; 8], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

const A: [f64; 8] = [
    3.387_132_872_796_366_608,
    133.141_667_891_784_377_45,
    1_971.590_950_306_551_442_7,
    13_731.693_765_509_461_125,
    45_921.953_931_549_871_457,
    67_265.770_927_008_700_853,
    33_430.575_583_588_128_105,
    2_509.080_928_730_122_672_7,
];
const B: [f64; 8] = [
    1.0,
    42.313_330_701_600_911_252,
    687.187_007_492_057_908_3,
    5_394.196_021_424_751_107_7,
    21_213.794_301_586_595_867,
    39_307.895_800_092_710_61,
    28_729.085_735_721_942_674,
    5_226.495_278_852_854_561,
];
const C: [f64; 8] = [
    1.423_437_110_749_683_577_34,
    4.630_337_846_156_545_295_9,
    5.769_497_221_460_691_405_5,
    3.647_848_324_763_204_605_04,
    1.270_458_252_452_368_382_58,
    0.241_780_725_177_450_611_77,
    0.022_723_844_989_269_184_583_3,
    7.745_450_142_783_414_076_4e-4,
];
const D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_821_87,
    1.676_384_830_183_803_849_4,
    0.689_767_334_985_100_004_55,
    0.148_103_976_427_480_074_59,
    0.015_198_666_563_616_457_196_6,
    5.475_938_084_995_344_946e-4,
    1.050_750_071_644_416_843_24e-9,
];
const E: [f64; 8] = [
    6.657_904_643_501_103_777_2,
    5.463_784_911_164_114_369_9,
    1.784_826_539_917_291_335_8,
    0.296_560_571_828_504_891_23,
    0.026_532_189_526_576_123_093,
    0.001_242_660_947_388_078_438_6,
    2.711_555_568_743_487_578_15e-5,
    2.010_334_399_292_288_132_65e-7,
];
const F: [f64; 8] = [
    1.0,
    0.599_832_206_555_887_937_69,
    0.136_929_880_922_735_805_31,
    0.014_875_361_290_850_614_852_5,
    7.868_691_311_456_132_591e-4,
    1.846_318_317_510_054_681_8e-5,
    1.421_511_758_316_445_888_7e-7,
    2.044_263_103_389_939_785_64e-15,
];

/// Which form of the Gaussian dispersion to use for Eve's channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DispersionVariant {
    /// `(S/2) (S+2)/(S+1)^2 log2(e)`.
    #[default]
    Paper,
    /// `(S/2) (S+2)/(S+1)^2 (log2 e)^2`, in bits squared.
    SquaredLog,
}

/// Channel dispersion of Eve's AWGN channel at `S2 = P / sigma2_sq`.
pub fn dispersion_eve(ch: &WiretapChannel, variant: DispersionVariant) -> f64 {
    dispersion(ch.snr_eve(), variant)
}

pub fn dispersion(snr: f64, variant: DispersionVariant) -> f64 {
    let rational = 0.5 * snr * (snr + 2.0) / ((snr + 1.0) * (snr + 1.0));
    match variant {
        DispersionVariant::Paper => rational * LOG2_E,
        DispersionVariant::SquaredLog => rational * LOG2_E * LOG2_E,
    }
}

/// Smallest rate (bits per channel use) at which Eve's error stays above
/// `beta2` at blocklength `n`:
/// `C2 - sqrt(V/n) Q^{-1}(beta2) + log2(n) / (2n)`.
pub fn min_rate_for_eve_error(
    ch: &WiretapChannel,
    n: u64,
    beta2: f64,
    variant: DispersionVariant,
) -> Result<f64> {
    check_domain("n", n as f64, "[1, inf)", n >= 1)?;
    check_probability_open("beta2", beta2)?;
    let nf = n as f64;
    let c2 = ch.capacities().c2;
    let v = dispersion_eve(ch, variant);
    Ok(c2 - sqrt(v / nf) * q_inverse(beta2)? + log2(nf) / (2.0 * nf))
}

/// Blocklength, rate and the two error targets: Bob's error must stay below
/// `beta1` and Eve's above `beta2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlocklengthQuery {
    pub n: u64,
    pub rate: f64,
    pub beta1: f64,
    pub beta2: f64,
}

/// Outcome of checking both criteria at one blocklength.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlocklengthCheck {
    pub n: u64,
    /// Eve-side threshold from [`min_rate_for_eve_error`].
    pub rate_threshold: f64,
    /// Bob-side random-coding bound `exp(-n E_r(R))`.
    pub bob_error_bound: f64,
    pub eve_ok: bool,
    pub bob_ok: bool,
}

impl BlocklengthCheck {
    pub fn satisfied(&self) -> bool {
        self.eve_ok && self.bob_ok
    }
}

impl BlocklengthQuery {
    pub fn new(n: u64, rate: f64, beta1: f64, beta2: f64) -> Result<Self> {
        check_domain("n", n as f64, "[1, inf)", n >= 1)?;
        check_domain("rate", rate, "finite", rate.is_finite())?;
        check_probability_open("beta1", beta1)?;
        check_probability_open("beta2", beta2)?;
        Ok(Self {
            n,
            rate,
            beta1,
            beta2,
        })
    }

    pub fn check(
        &self,
        ch: &WiretapChannel,
        variant: DispersionVariant,
    ) -> Result<BlocklengthCheck> {
        let exponent = random_coding_exponent(ch.snr_bob(), self.rate)?.exponent_nats;
        let threshold = min_rate_for_eve_error(ch, self.n, self.beta2, variant)?;
        Ok(evaluate(self.n, self.rate, self.beta1, threshold, exponent))
    }
}

fn evaluate(n: u64, rate: f64, beta1: f64, threshold: f64, exponent: f64) -> BlocklengthCheck {
    let bob_error_bound = exp(-(n as f64) * exponent);
    BlocklengthCheck {
        n,
        rate_threshold: threshold,
        bob_error_bound,
        eve_ok: rate >= threshold,
        bob_ok: bob_error_bound <= beta1,
    }
}

/// Largest blocklength the doubling phase will try.
pub const MAX_BLOCKLENGTH: u64 = 1 << 48;

/// Smallest `n` meeting both the Eve threshold and Bob's random-coding
/// criterion, by doubling and then bisecting on `n`.
///
/// The returned check is at `n*`; the check at `n* - 1` fails one criterion.
pub fn min_blocklength(
    ch: &WiretapChannel,
    rate: f64,
    beta1: f64,
    beta2: f64,
    variant: DispersionVariant,
) -> Result<BlocklengthCheck> {
    check_probability_open("beta1", beta1)?;
    check_probability_open("beta2", beta2)?;
    let c1 = ch.capacities().c1;
    if !(rate > 0.0) {
        return Err(Error::Infeasible(format!("rate {rate} must be positive")));
    }
    if rate >= c1 {
        return Err(Error::Infeasible(format!(
            "rate {rate} is not below the main-channel capacity {c1}"
        )));
    }
    let exponent = random_coding_exponent(ch.snr_bob(), rate)?.exponent_nats;
    if !(exponent > 0.0) {
        return Err(Error::Infeasible(format!(
            "random-coding exponent vanishes at rate {rate}"
        )));
    }
    let at = |n: u64| -> Result<BlocklengthCheck> {
        let threshold = min_rate_for_eve_error(ch, n, beta2, variant)?;
        Ok(evaluate(n, rate, beta1, threshold, exponent))
    };

    let mut lo = 0u64;
    let mut hi = 1u64;
    let mut best = at(hi)?;
    while !best.satisfied() {
        lo = hi;
        hi = hi
            .checked_mul(2)
            .filter(|&h| h <= MAX_BLOCKLENGTH)
            .ok_or_else(|| {
                Error::Infeasible(format!(
                    "no blocklength up to {MAX_BLOCKLENGTH} meets beta1 = {beta1}, beta2 = {beta2}"
                ))
            })?;
        best = at(hi)?;
    }
    // Invariant: `lo` fails (or is 0), `hi` passes.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let probe = at(mid)?;
        if probe.satisfied() {
            hi = mid;
            best = probe;
        } else {
            lo = mid;
        }
    }
    Ok(best)
}
