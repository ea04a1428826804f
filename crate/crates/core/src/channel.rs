//! Gaussian wiretap channel: capacities, secrecy capacity and rate regimes.
//!
//! Alice sends `X` with average power `P`; Bob sees `Y = X + N1` and Eve sees
//! `Z = X + N2` with independent Gaussian noises of variance `sigma1_sq` and
//! `sigma2_sq`. All rates are in bits per channel use.

use crate::error::{check_domain, Error, Result};
use crate::math::{awgn_capacity_bits, exp2, sqrt};

/// Noise variances of Bob and Eve together with the transmit power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WiretapChannel {
    sigma1_sq: f64,
    sigma2_sq: f64,
    power: f64,
}

impl WiretapChannel {
    pub fn new(sigma1_sq: f64, sigma2_sq: f64, power: f64) -> Result<Self> {
        check_domain(
            "sigma1_sq",
            sigma1_sq,
            "(0, inf)",
            sigma1_sq > 0.0 && sigma1_sq.is_finite(),
        )?;
        check_domain(
            "sigma2_sq",
            sigma2_sq,
            "(0, inf)",
            sigma2_sq > 0.0 && sigma2_sq.is_finite(),
        )?;
        check_domain(
            "power",
            power,
            "[0, inf)",
            power >= 0.0 && power.is_finite(),
        )?;
        Ok(Self {
            sigma1_sq,
            sigma2_sq,
            power,
        })
    }

    /// Same channel with power given in dB (`10 log10 P`).
    pub fn with_power_db(sigma1_sq: f64, sigma2_sq: f64, power_db: f64) -> Result<Self> {
        Self::new(sigma1_sq, sigma2_sq, db_to_linear(power_db))
    }

    pub fn sigma1_sq(&self) -> f64 {
        self.sigma1_sq
    }

    pub fn sigma2_sq(&self) -> f64 {
        self.sigma2_sq
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Copy of the channel with a different power budget.
    pub fn with_power(&self, power: f64) -> Result<Self> {
        Self::new(self.sigma1_sq, self.sigma2_sq, power)
    }

    pub fn snr_bob(&self) -> f64 {
        self.power / self.sigma1_sq
    }

    /// `S2 = P / sigma2_sq`.
    pub fn snr_eve(&self) -> f64 {
        self.power / self.sigma2_sq
    }

    /// True when Eve's channel is strictly noisier than Bob's.
    pub fn is_degraded(&self) -> bool {
        self.sigma1_sq < self.sigma2_sq
    }

    pub fn capacities(&self) -> CapacitySummary {
        capacities(self)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Main-channel, eavesdropper and secrecy capacities in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CapacitySummary {
    pub c1: f64,
    pub c2: f64,
    pub cs: f64,
    pub snr_bob: f64,
    pub snr_eve: f64,
}

pub fn capacities(ch: &WiretapChannel) -> CapacitySummary {
    let snr_bob = ch.snr_bob();
    let snr_eve = ch.snr_eve();
    let c1 = awgn_capacity_bits(snr_bob);
    let c2 = awgn_capacity_bits(snr_eve);
    CapacitySummary {
        c1,
        c2,
        cs: (c1 - c2).max(0.0),
        snr_bob,
        snr_eve,
    }
}

/// Where a rate falls relative to the two capacities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum Regime {
    /// `R >= C1`: Bob cannot decode reliably.
    Unreliable,
    /// `C2 < R < C1`: full power gives reliability at Bob and strong-converse
    /// confusion at Eve.
    SecureFullPower,
    /// `0 < R <= C2`: a reduced power puts `R` strictly between the two
    /// capacities.
    SecureReducedPower,
    /// `0 < R < C1` on a channel where Eve is not noisier than Bob; no power
    /// level separates the capacities.
    NoSecrecy,
    /// `R <= 0`.
    Degenerate,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Unreliable => "UNRELIABLE",
            Regime::SecureFullPower => "SECURE_FULL_POWER",
            Regime::SecureReducedPower => "SECURE_REDUCED_POWER",
            Regime::NoSecrecy => "NO_SECRECY",
            Regime::Degenerate => "DEGENERATE",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateAssessment {
    pub regime: Regime,
    /// Power to transmit with. Equals the budget except in
    /// [`Regime::SecureReducedPower`].
    pub adjusted_power: f64,
    /// Open interval of admissible reduced powers, when the regime has one.
    pub feasible_power: Option<(f64, f64)>,
}

/// Smallest power at which a Gaussian channel with the given noise variance
/// supports `rate` bits: `sigma_sq (2^{2R} - 1)`.
fn power_for_rate(sigma_sq: f64, rate: f64) -> f64 {
    sigma_sq * (exp2(2.0 * rate) - 1.0)
}

/// Classifies `rate` and picks the transmit power.
///
/// In the reduced-power regime any power in
/// `(sigma1_sq (2^{2R}-1), min(P, sigma2_sq (2^{2R}-1)))` works; the
/// geometric midpoint of that interval is returned.
pub fn assess_rate(ch: &WiretapChannel, rate: f64) -> RateAssessment {
    let caps = ch.capacities();
    let full = |regime| RateAssessment {
        regime,
        adjusted_power: ch.power(),
        feasible_power: None,
    };
    if rate.is_nan() || rate <= 0.0 {
        return full(Regime::Degenerate);
    }
    if rate >= caps.c1 {
        return full(Regime::Unreliable);
    }
    if rate > caps.c2 {
        return full(Regime::SecureFullPower);
    }
    let lo = power_for_rate(ch.sigma1_sq(), rate);
    let hi = power_for_rate(ch.sigma2_sq(), rate).min(ch.power());
    if !ch.is_degraded() || lo >= hi {
        return full(Regime::NoSecrecy);
    }
    RateAssessment {
        regime: Regime::SecureReducedPower,
        adjusted_power: sqrt(lo * hi),
        feasible_power: Some((lo, hi)),
    }
}

/// Like [`assess_rate`] but with a caller-chosen reduced power.
///
/// The override is only consulted in the reduced-power regime and must lie
/// strictly inside the feasible interval.
pub fn assess_rate_with_power(
    ch: &WiretapChannel,
    rate: f64,
    power_override: f64,
) -> Result<RateAssessment> {
    let mut assessment = assess_rate(ch, rate);
    if let Some((lo, hi)) = assessment.feasible_power {
        if !(power_override > lo && power_override < hi) {
            return Err(Error::Domain {
                name: "adjusted_power",
                value: power_override,
                domain: "feasible reduced-power interval",
            });
        }
        assessment.adjusted_power = power_override;
    }
    Ok(assessment)
}

/// A (rate, equivocation rate) pair in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OperatingPoint {
    pub rate: f64,
    pub equivocation_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WynerPoints {
    /// `(C1, C1 - C2)`: every message secure from Eve in the error-probability sense.
    pub probability_of_error_view: OperatingPoint,
    /// `(C1 - C2, C1 - C2)`: the classical equivocation operating point.
    pub equivocation_view: OperatingPoint,
}

pub fn wyner_operating_points(ch: &WiretapChannel) -> WynerPoints {
    let caps = ch.capacities();
    if !ch.is_degraded() {
        let zero = OperatingPoint {
            rate: 0.0,
            equivocation_rate: 0.0,
        };
        return WynerPoints {
            probability_of_error_view: zero,
            equivocation_view: zero,
        };
    }
    WynerPoints {
        probability_of_error_view: OperatingPoint {
            rate: caps.c1,
            equivocation_rate: caps.cs,
        },
        equivocation_view: OperatingPoint {
            rate: caps.cs,
            equivocation_rate: caps.cs,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_channel() -> WiretapChannel {
        WiretapChannel::new(0.1, 1.5, 100.0).unwrap()
    }

    // 40-digit reference values of 0.5 log2(1 + P / sigma^2).
    const C1_REF: f64 = 4.983_613_129_417_996_762;
    const C2_REF: f64 = 3.040_186_708_232_010_023;

    #[test]
    fn reference_capacities() {
        let caps = reference_channel().capacities();
        assert!((caps.c1 - C1_REF).abs() < 1e-12);
        assert!((caps.c2 - C2_REF).abs() < 1e-12);
        assert!((caps.cs - (C1_REF - C2_REF)).abs() < 1e-12);
        assert!((caps.snr_eve - 100.0 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn zero_power_and_symmetric_channels() {
        let caps = WiretapChannel::new(0.1, 1.5, 0.0).unwrap().capacities();
        assert_eq!((caps.c1, caps.c2, caps.cs), (0.0, 0.0, 0.0));
        let caps = WiretapChannel::new(1.0, 1.0, 3.0).unwrap().capacities();
        assert!((caps.c1 - 1.0).abs() < 1e-15);
        assert!((caps.c2 - 1.0).abs() < 1e-15);
        assert_eq!(caps.cs, 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WiretapChannel::new(0.0, 1.0, 1.0).is_err());
        assert!(WiretapChannel::new(1.0, -1.0, 1.0).is_err());
        assert!(WiretapChannel::new(1.0, 1.0, -0.1).is_err());
        assert!(WiretapChannel::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn power_db() {
        let ch = WiretapChannel::with_power_db(0.1, 1.5, 20.0).unwrap();
        assert!((ch.power() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn regimes() {
        let ch = reference_channel();
        assert_eq!(assess_rate(&ch, 4.0).regime, Regime::SecureFullPower);
        assert_eq!(assess_rate(&ch, 0.0).regime, Regime::Degenerate);
        assert_eq!(assess_rate(&ch, -1.0).regime, Regime::Degenerate);
        assert_eq!(assess_rate(&ch, 5.0).regime, Regime::Unreliable);
        assert_eq!(assess_rate(&ch, C1_REF).regime, Regime::Unreliable);

        let a = assess_rate(&ch, 1.0);
        assert_eq!(a.regime, Regime::SecureReducedPower);
        let (lo, hi) = a.feasible_power.unwrap();
        assert!((lo - 0.3).abs() < 1e-12 && (hi - 4.5).abs() < 1e-12);
        assert!((a.adjusted_power - 1.35f64.sqrt()).abs() < 1e-12);
        assert!((a.adjusted_power - 1.1619).abs() < 1e-4);
    }

    #[test]
    fn regime_boundary_at_c2() {
        let ch = reference_channel();
        let c2 = ch.capacities().c2;
        assert_eq!(assess_rate(&ch, c2).regime, Regime::SecureReducedPower);
        assert_eq!(assess_rate(&ch, c2 + 1e-9).regime, Regime::SecureFullPower);
        assert_eq!(
            assess_rate(&ch, c2 - 1e-9).regime,
            Regime::SecureReducedPower
        );
        // At R = C2 the upper end of the interval is the full budget.
        let a = assess_rate(&ch, c2);
        assert!(a.adjusted_power < ch.power());
    }

    #[test]
    fn non_degraded_has_no_secrecy() {
        let ch = WiretapChannel::new(2.0, 1.0, 10.0).unwrap();
        assert_eq!(assess_rate(&ch, 0.5).regime, Regime::NoSecrecy);
        assert_eq!(assess_rate(&ch, 10.0).regime, Regime::Unreliable);
        assert_eq!(ch.capacities().cs, 0.0);
    }

    #[test]
    fn power_override() {
        let ch = reference_channel();
        let a = assess_rate_with_power(&ch, 1.0, 2.0).unwrap();
        assert_eq!(a.adjusted_power, 2.0);
        assert!(assess_rate_with_power(&ch, 1.0, 0.3).is_err());
        assert!(assess_rate_with_power(&ch, 1.0, 5.0).is_err());
        // Ignored outside the reduced-power regime.
        let a = assess_rate_with_power(&ch, 4.0, 7.0).unwrap();
        assert_eq!(a.adjusted_power, 100.0);
    }

    #[test]
    fn wyner_points() {
        let w = wyner_operating_points(&reference_channel());
        assert!((w.probability_of_error_view.rate - C1_REF).abs() < 1e-12);
        let cs = C1_REF - C2_REF;
        assert!((w.probability_of_error_view.equivocation_rate - cs).abs() < 1e-12);
        assert!((w.equivocation_view.rate - cs).abs() < 1e-12);
        assert!((w.equivocation_view.equivocation_rate - cs).abs() < 1e-12);

        let w = wyner_operating_points(&WiretapChannel::new(0.1, 1.5, 0.0).unwrap());
        assert_eq!(w.probability_of_error_view.rate, 0.0);
        assert_eq!(w.equivocation_view.equivocation_rate, 0.0);

        let w = wyner_operating_points(&WiretapChannel::new(1.0, 4.0, 3.0).unwrap());
        let c2 = 0.5 * 1.75f64.log2();
        assert!((w.probability_of_error_view.rate - 1.0).abs() < 1e-12);
        assert!((w.probability_of_error_view.equivocation_rate - (1.0 - c2)).abs() < 1e-12);
        assert!((w.equivocation_view.rate - (1.0 - c2)).abs() < 1e-12);

        let w = wyner_operating_points(&WiretapChannel::new(2.0, 1.0, 3.0).unwrap());
        assert_eq!(w.probability_of_error_view.rate, 0.0);
        assert_eq!(w.equivocation_view.rate, 0.0);
    }
}
