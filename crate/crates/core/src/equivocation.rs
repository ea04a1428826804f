//! Bounds on the equivocation `H(W | Z^n)` seen by Eve: Fano's upper bound,
//! the `R - C2` floor and the piecewise-linear entropy/MAP-error envelope.
//!
//! Entropies are in bits.

use crate::channel::WiretapChannel;
use crate::error::{check_domain, Result};
use crate::error_exponents::{eve_error_lower_detail, eve_success_upper};
use crate::math::{floor, ln_1p, log2, LOG2_E};

/// `-p log2 p - (1-p) log2 (1-p)` with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_domain("p", p, "[0, 1]", (0.0..=1.0).contains(&p))?;
    let term = |x: f64| if x > 0.0 { -x * log2(x) } else { 0.0 };
    Ok(term(p) + term(1.0 - p))
}

/// Fano upper bound `H(pe) + pe n R` on the equivocation, in bits.
pub fn fano_upper(pe: f64, n: u64, rate_bits: f64) -> Result<f64> {
    Ok(binary_entropy(pe)? + pe * n as f64 * rate_bits)
}

/// `max(0, R - C2)`, a per-symbol floor on `H(W|Z^n)/n` valid for any codebook.
pub fn trivial_eve_lower(ch: &WiretapChannel, rate_bits: f64) -> f64 {
    (rate_bits - ch.capacities().c2).max(0.0)
}

/// Lower envelope of conditional entropy against MAP error probability `pi`
/// for `messages` equiprobable messages.
///
/// Linear interpolation through the vertices `(1 - 1/k, log2 k)`,
/// `k = 1..=M`. `messages` may be any real `>= 1` (e.g. `2^{nR}`).
pub fn phi_star(pi: f64, messages: f64) -> Result<f64> {
    check_domain("messages", messages, "[1, inf)", messages >= 1.0)?;
    check_domain("pi", pi, "[0, 1 - 1/M]", (0.0..=1.0).contains(&pi))?;
    phi_star_from_success(1.0 - pi, log2(messages))
}

/// [`phi_star`] parameterized by the MAP success probability `1 - pi` and
/// `log2 M`, for error probabilities too close to 1 to represent directly.
pub fn phi_star_from_success(success: f64, log2_messages: f64) -> Result<f64> {
    check_domain(
        "log2_messages",
        log2_messages,
        "[0, inf)",
        log2_messages >= 0.0,
    )?;
    check_domain(
        "success",
        success,
        "(0, 1]",
        success > 0.0 && success <= 1.0,
    )?;
    let min_success = libm::exp2(-log2_messages);
    // Rounding slack relative to the smallest admissible success probability.
    if success < min_success * (1.0 - 1e-12) {
        return Err(crate::error::Error::Domain {
            name: "pi",
            value: 1.0 - success,
            domain: "[0, 1 - 1/M]",
        });
    }
    let inv = 1.0 / success;
    // Past 2^52 the vertices are denser than f64 spacing; the envelope
    // coincides with log2(1/success) to within 1/k.
    if inv >= 4_503_599_627_370_496.0 {
        return Ok((-log2(success)).min(log2_messages));
    }
    let k = floor(inv).max(1.0);
    // Distance past vertex k in pi, i.e. (1 - success) - (1 - 1/k), formed
    // without the cancellation of subtracting two numbers near 1.
    let offset = (1.0 / k - success).max(0.0);
    let slope = ln_1p(1.0 / k) * LOG2_E / (1.0 / k - 1.0 / (k + 1.0));
    Ok((log2(k) + offset * slope).min(log2_messages))
}

/// Equivocation bounds for Eve at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivocationBounds {
    /// Fano upper bound at the supplied error probability, bits.
    pub fano_upper: f64,
    /// `max(0, R - C2)`, bits per channel use.
    pub trivial_lower_rate: f64,
    /// Envelope at the supplied error probability, bits.
    pub phi_star_lower: f64,
}

/// [`EquivocationBounds`] plus the envelope evaluated at Arimoto's lower
/// bound on Eve's error.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivocationReport {
    pub bounds: EquivocationBounds,
    pub arimoto_pe_lower: f64,
    /// Envelope at the Arimoto bound, bits. The envelope is non-decreasing,
    /// so this lower-bounds `H(W|Z^n)` for every code of this rate.
    pub phi_star_at_arimoto: f64,
}

pub fn eve_equivocation_report(
    ch: &WiretapChannel,
    n: u64,
    rate_bits: f64,
    pe_eve: f64,
) -> Result<EquivocationReport> {
    check_domain("n", n as f64, "[1, inf)", n >= 1)?;
    check_domain("rate", rate_bits, "[0, inf)", rate_bits >= 0.0)?;
    let log2_m = n as f64 * rate_bits;
    let bounds = EquivocationBounds {
        fano_upper: fano_upper(pe_eve, n, rate_bits)?,
        trivial_lower_rate: trivial_eve_lower(ch, rate_bits),
        phi_star_lower: phi_star_from_success(1.0 - pe_eve, log2_m)?,
    };
    let arimoto = eve_error_lower_detail(ch, n, rate_bits)?
        .bound_value
        .unwrap_or(0.0);
    // The success bound exp(-n E_A) never drops below 1/M in exact
    // arithmetic; clamp for rounding.
    let success = eve_success_upper(ch, n, rate_bits)?.max(libm::exp2(-log2_m));
    Ok(EquivocationReport {
        bounds,
        arimoto_pe_lower: arimoto,
        phi_star_at_arimoto: phi_star_from_success(success, log2_m)?,
    })
}
