//! Gallager's `E0` for the AWGN channel with Gaussian input, the
//! random-coding bound for Bob and Arimoto's strong-converse bound for Eve.
//!
//! All exponents are in nats; rates enter in bits and are converted here.
//! `snr` is the ratio of input power to noise variance.

use crate::channel::WiretapChannel;
use crate::error::{check_domain, Result};
use crate::math::{exp, exp_m1, ln, ln_1p, sqrt, LN_2, LOG2_E, PI};
use crate::optimize::golden_section_max;
use crate::quadrature::{integrate_real_line, Tolerance};

/// Golden-section bracket width for every `rho` optimization.
pub const RHO_TOL: f64 = 1e-9;

/// Lower end of the open `rho` interval searched by the strong-converse bound.
pub const RHO_MIN_ARIMOTO: f64 = -1.0 + 1e-6;

fn check_args(snr: f64, rho: f64) -> Result<()> {
    check_domain("snr", snr, "[0, inf)", snr >= 0.0 && snr.is_finite())?;
    check_domain("rho", rho, "(-1, 1]", rho > -1.0 && rho <= 1.0)
}

/// `E0(rho) = (rho/2) ln(1 + snr/(1+rho))` for a Gaussian input.
pub fn e0_gaussian_closed(snr: f64, rho: f64) -> Result<f64> {
    check_args(snr, rho)?;
    Ok(e0(snr, rho))
}

#[inline]
fn e0(snr: f64, rho: f64) -> f64 {
    0.5 * rho * ln_1p(snr / (1.0 + rho))
}

/// `E0(rho)` by direct numerical integration of
/// `-ln ∫ (∫ p(x) p(y|x)^{1/(1+rho)} dx)^{1+rho} dy`.
///
/// Noise has unit variance and the input is `N(0, snr)`. With
/// `a = 1/(1+rho)`, the constant `(2π)^{-a/2}` is pulled out of the inner
/// integral so that only `(2π)^{-1/2}` survives the outer power.
pub fn e0_quadrature(snr: f64, rho: f64) -> Result<f64> {
    check_args(snr, rho)?;
    let a = 1.0 / (1.0 + rho);
    let power = 1.0 + rho;
    let inner_tol = Tolerance {
        abs: 0.0,
        rel: 1e-13,
        max_subintervals: 4000,
    };
    let outer_tol = Tolerance {
        abs: 1e-300,
        rel: 1e-12,
        max_subintervals: 4000,
    };

    let mut failure = None;
    let mut inner = |y: f64| -> f64 {
        if snr == 0.0 {
            return exp(-0.5 * a * y * y);
        }
        let prior = |x: f64| exp(-0.5 * x * x / snr) / sqrt(2.0 * PI * snr);
        let kernel = |x: f64| prior(x) * exp(-0.5 * a * (y - x) * (y - x));
        // The integrand is a product of two bumps centred at 0 and y whose
        // mass sits at the precision-weighted midpoint. Fence that point in
        // so the first Kronrod pass on a long interval cannot step over it.
        let width = sqrt(snr / (1.0 + a * snr));
        let mode = y * a * snr / (1.0 + a * snr);
        let mut points = [0.0; 9];
        points[0] = 0.0;
        points[1] = y;
        points[2] = mode;
        for (i, k) in [1.0, 4.0, 16.0].iter().enumerate() {
            points[3 + 2 * i] = mode - k * width;
            points[4 + 2 * i] = mode + k * width;
        }
        points.sort_by(f64::total_cmp);
        let mut len = 1;
        for i in 1..points.len() {
            if points[i] > points[len - 1] {
                points[len] = points[i];
                len += 1;
            }
        }
        let scale = sqrt(snr).min(1.0 / sqrt(a));
        match integrate_real_line(kernel, &points[..len], scale, inner_tol) {
            Ok(e) => e.value.max(0.0),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let outer = integrate_real_line(
        |y| {
            let j = inner(y);
            if j == 0.0 {
                0.0
            } else {
                exp(power * ln(j))
            }
        },
        &[0.0],
        sqrt(1.0 + snr),
        outer_tol,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(-ln(outer.value / sqrt(2.0 * PI)))
}

/// Optimized exponent for one bound.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentResult {
    pub rho_star: f64,
    /// `E0(rho*) - rho* R` in nats.
    pub exponent_nats: f64,
    /// The finite-`n` bound, when one was evaluated.
    pub bound_value: Option<f64>,
}

/// Gallager random-coding exponent `max_{0<=rho<=1} E0(rho) - rho R`.
pub fn random_coding_exponent(snr: f64, rate_bits: f64) -> Result<ExponentResult> {
    check_domain("snr", snr, "[0, inf)", snr >= 0.0 && snr.is_finite())?;
    check_domain("rate", rate_bits, "[0, inf)", rate_bits >= 0.0)?;
    let r = rate_bits * LN_2;
    let best = golden_section_max(|rho| e0(snr, rho) - rho * r, 0.0, 1.0, RHO_TOL);
    Ok(ExponentResult {
        rho_star: best.arg,
        exponent_nats: best.value.max(0.0),
        bound_value: None,
    })
}

/// Arimoto strong-converse exponent `sup_{-1<rho<=0} E0(rho) - rho R`.
pub fn strong_converse_exponent(snr: f64, rate_bits: f64) -> Result<ExponentResult> {
    check_domain("snr", snr, "[0, inf)", snr >= 0.0 && snr.is_finite())?;
    check_domain("rate", rate_bits, "finite", rate_bits.is_finite())?;
    let r = rate_bits * LN_2;
    let best = golden_section_max(|rho| e0(snr, rho) - rho * r, RHO_MIN_ARIMOTO, 0.0, RHO_TOL);
    Ok(ExponentResult {
        rho_star: best.arg,
        exponent_nats: best.value.max(0.0),
        bound_value: None,
    })
}

/// Bob's error probability and equivocation upper bounds at blocklength `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BobBounds {
    /// `exp(-n E_r(R))`, at most 1.
    pub pe_upper: f64,
    /// `(1 + 1/rho) exp(-n (E0(rho) - rho R))` in bits, at most `nR`.
    pub equiv_upper: f64,
    pub error_exponent: ExponentResult,
    /// Minimizer of the equivocation bound.
    pub equiv_rho: f64,
}

/// Random-coding bounds on Bob's block error and on `H(W | Y^n)`.
///
/// The equivocation prefactor depends on `rho`, so that bound is minimized
/// separately over `rho` in `(0, 1]`.
pub fn bob_bounds(ch: &WiretapChannel, n: u64, rate_bits: f64) -> Result<BobBounds> {
    check_domain("n", n as f64, "[1, inf)", n >= 1)?;
    let snr = ch.snr_bob();
    let nf = n as f64;
    let total_bits = nf * rate_bits.max(0.0);
    let mut error_exponent = random_coding_exponent(snr, rate_bits.max(0.0))?;
    if !(error_exponent.exponent_nats > 0.0) || error_exponent.rho_star == 0.0 {
        error_exponent.bound_value = Some(1.0);
        return Ok(BobBounds {
            pe_upper: 1.0,
            equiv_upper: total_bits,
            error_exponent,
            equiv_rho: 0.0,
        });
    }
    let pe_upper = exp(-nf * error_exponent.exponent_nats).min(1.0);
    error_exponent.bound_value = Some(pe_upper);

    let r = rate_bits * LN_2;
    // Maximize the negated log of the bound: -ln(1 + 1/rho) + n (E0 - rho R).
    let best = golden_section_max(
        |rho| -ln_1p(1.0 / rho) + nf * (e0(snr, rho) - rho * r),
        1e-12,
        1.0,
        RHO_TOL,
    );
    let equiv_nats = exp(-best.value);
    Ok(BobBounds {
        pe_upper,
        equiv_upper: (equiv_nats * LOG2_E).clamp(0.0, total_bits),
        error_exponent,
        equiv_rho: best.arg,
    })
}

/// Arimoto lower bound on Eve's error: `1 - exp(-n E_A(R))`, clamped to `[0, 1]`.
pub fn eve_error_lower(ch: &WiretapChannel, n: u64, rate_bits: f64) -> Result<f64> {
    Ok(eve_error_lower_detail(ch, n, rate_bits)?
        .bound_value
        .unwrap_or(0.0))
}

/// [`eve_error_lower`] together with the optimizing `rho`.
pub fn eve_error_lower_detail(
    ch: &WiretapChannel,
    n: u64,
    rate_bits: f64,
) -> Result<ExponentResult> {
    check_domain("n", n as f64, "[1, inf)", n >= 1)?;
    let mut res = strong_converse_exponent(ch.snr_eve(), rate_bits)?;
    let bound = -exp_m1(-(n as f64) * res.exponent_nats);
    res.bound_value = Some(bound.clamp(0.0, 1.0));
    Ok(res)
}

/// Probability that Eve decodes correctly is at most `exp(-n E_A(R))`; this
/// returns that complement without the cancellation in `1 - (1 - p)`.
pub fn eve_success_upper(ch: &WiretapChannel, n: u64, rate_bits: f64) -> Result<f64> {
    check_domain("n", n as f64, "[1, inf)", n >= 1)?;
    let res = strong_converse_exponent(ch.snr_eve(), rate_bits)?;
    Ok(exp(-(n as f64) * res.exponent_nats).min(1.0))
}

/// One point of the error-probability-versus-SNR sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundCurvePoint {
    pub snr_db: f64,
    pub n: u64,
    pub pe_bob_upper: f64,
    pub pe_eve_lower: f64,
}

/// Gallager upper bound for Bob and Arimoto lower bound for Eve over a
/// power sweep (in dB) at fixed noise variances and rate.
///
/// Rows come out sorted by `(n, snr_db)`.
pub fn bound_curves(
    sigma1_sq: f64,
    sigma2_sq: f64,
    rate_bits: f64,
    ns: &[u64],
    snr_db: &[f64],
) -> Result<alloc::vec::Vec<BoundCurvePoint>> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    let mut snrs = snr_db.to_vec();
    snrs.sort_by(f64::total_cmp);
    let mut out = alloc::vec::Vec::with_capacity(ns.len() * snrs.len());
    for &n in &ns {
        for &db in &snrs {
            let ch = WiretapChannel::with_power_db(sigma1_sq, sigma2_sq, db)?;
            out.push(BoundCurvePoint {
                snr_db: db,
                n,
                pe_bob_upper: bob_bounds(&ch, n, rate_bits)?.pe_upper,
                pe_eve_lower: eve_error_lower(&ch, n, rate_bits)?,
            });
        }
    }
    Ok(out)
}
