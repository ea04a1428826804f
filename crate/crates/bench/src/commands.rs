//! One function per subcommand, each producing a [`Table`].

use wiretap_core::channel::{assess_rate_with_power, WiretapChannel};
use wiretap_core::equivocation::eve_equivocation_report;
use wiretap_core::error_exponents::{bob_bounds, bound_curves, eve_error_lower};
use wiretap_core::fading::{
    fading_main_capacity, fading_monte_carlo, fading_secrecy_capacity, IntegrationConfig, Policy,
};
use wiretap_core::finite_blocklength::{
    dispersion_eve, min_blocklength, BlocklengthQuery, DispersionVariant,
};
use wiretap_core::sim::{run_trials, SimConfig};
use wiretap_core::{assess_rate, FadingConfig};

use crate::args::{
    BlocklengthArgs, CapacityArgs, ChannelArgs, Dispersion, EquivocationArgs, FadingArgs, Fig2Args,
    PolicyArg, RegimeArgs, SimulateArgs,
};
use crate::output::{Cell, Table};
use crate::AppError;

fn channel(a: &ChannelArgs) -> Result<WiretapChannel, AppError> {
    let power = a
        .power
        .linear()
        .ok_or_else(|| AppError::Usage("one of --power or --power-db is required".into()))?;
    Ok(WiretapChannel::new(a.sigma1_sq, a.sigma2_sq, power)?)
}

pub fn capacity(a: &CapacityArgs) -> Result<Table, AppError> {
    let ch = channel(&a.channel)?;
    let c = ch.capacities();
    let mut t = Table::new(&[
        "sigma1_sq",
        "sigma2_sq",
        "power",
        "snr_bob",
        "snr_eve",
        "c1",
        "c2",
        "cs",
    ]);
    t.push(vec![
        ch.sigma1_sq().into(),
        ch.sigma2_sq().into(),
        ch.power().into(),
        c.snr_bob.into(),
        c.snr_eve.into(),
        c.c1.into(),
        c.c2.into(),
        c.cs.into(),
    ]);
    Ok(t)
}

pub fn regime(a: &RegimeArgs) -> Result<Table, AppError> {
    let ch = channel(&a.channel)?;
    let c = ch.capacities();
    let r = match a.adjusted_power {
        Some(p) => assess_rate_with_power(&ch, a.rate, p)?,
        None => assess_rate(&ch, a.rate),
    };
    let mut t = Table::new(&[
        "sigma1_sq",
        "sigma2_sq",
        "power",
        "rate",
        "c1",
        "c2",
        "regime",
        "adjusted_power",
        "feasible_power_lo",
        "feasible_power_hi",
    ]);
    t.push(vec![
        ch.sigma1_sq().into(),
        ch.sigma2_sq().into(),
        ch.power().into(),
        a.rate.into(),
        c.c1.into(),
        c.c2.into(),
        r.regime.as_str().into(),
        r.adjusted_power.into(),
        r.feasible_power.map(|p| p.0).into(),
        r.feasible_power.map(|p| p.1).into(),
    ]);
    Ok(t)
}

/// Parses `START:STOP:STEP` (inclusive of STOP) or a comma-separated list.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, AppError> {
    let bad = || AppError::Usage(format!("invalid --snr-db-range `{spec}`"));
    let spec = spec.trim();
    let values = if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        if stop < start {
            Vec::new()
        } else {
            // Index-based so that accumulated rounding cannot drop STOP.
            let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
            (0..count).map(|i| start + i as f64 * step).collect()
        }
    } else {
        spec.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(AppError::Usage(format!("--snr-db-range `{spec}` is empty")));
    }
    Ok(values)
}

pub fn fig2(a: &Fig2Args) -> Result<Table, AppError> {
    let snrs = parse_range(&a.snr_db_range)?;
    if a.n_list.is_empty() {
        return Err(AppError::Usage("--n-list is empty".into()));
    }
    let points = bound_curves(a.sigma1_sq, a.sigma2_sq, a.rate, &a.n_list, &snrs)?;
    let mut t = Table::new(&["snr_db", "n", "pe_bob_upper", "pe_eve_lower"]);
    for p in points {
        t.push(vec![
            p.snr_db.into(),
            p.n.into(),
            p.pe_bob_upper.into(),
            p.pe_eve_lower.into(),
        ]);
    }
    Ok(t)
}

pub fn blocklength(a: &BlocklengthArgs) -> Result<Table, AppError> {
    let ch = channel(&a.channel)?;
    let variant = match a.dispersion {
        Dispersion::Paper => DispersionVariant::Paper,
        Dispersion::SquaredLog => DispersionVariant::SquaredLog,
    };
    let check = match a.n {
        Some(n) => BlocklengthQuery::new(n, a.rate, a.beta1, a.beta2)?.check(&ch, variant)?,
        None => min_blocklength(&ch, a.rate, a.beta1, a.beta2, variant)?,
    };
    let c = ch.capacities();
    let mut t = Table::new(&[
        "rate",
        "beta1",
        "beta2",
        "c1",
        "c2",
        "dispersion",
        "n",
        "searched",
        "rate_threshold",
        "bob_error_bound",
        "eve_ok",
        "bob_ok",
    ]);
    t.push(vec![
        a.rate.into(),
        a.beta1.into(),
        a.beta2.into(),
        c.c1.into(),
        c.c2.into(),
        dispersion_eve(&ch, variant).into(),
        check.n.into(),
        a.n.is_none().into(),
        check.rate_threshold.into(),
        check.bob_error_bound.into(),
        check.eve_ok.into(),
        check.bob_ok.into(),
    ]);
    Ok(t)
}

pub fn equivocation(a: &EquivocationArgs) -> Result<Table, AppError> {
    let ch = channel(&a.channel)?;
    let pe_eve = match a.pe_eve {
        Some(p) => p,
        None => eve_error_lower(&ch, a.n, a.rate)?,
    };
    let rep = eve_equivocation_report(&ch, a.n, a.rate, pe_eve)?;
    let bob = bob_bounds(&ch, a.n, a.rate)?;
    let mut t = Table::new(&[
        "n",
        "rate",
        "c2",
        "pe_eve",
        "fano_upper",
        "trivial_lower_rate",
        "trivial_lower",
        "phi_star_lower",
        "arimoto_pe_lower",
        "phi_star_at_arimoto",
        "pe_bob_upper",
        "bob_equiv_upper",
    ]);
    t.push(vec![
        a.n.into(),
        a.rate.into(),
        ch.capacities().c2.into(),
        pe_eve.into(),
        rep.bounds.fano_upper.into(),
        rep.bounds.trivial_lower_rate.into(),
        (rep.bounds.trivial_lower_rate * a.n as f64).into(),
        rep.bounds.phi_star_lower.into(),
        rep.arimoto_pe_lower.into(),
        rep.phi_star_at_arimoto.into(),
        bob.pe_upper.into(),
        bob.equiv_upper.into(),
    ]);
    Ok(t)
}

pub fn simulate(a: &SimulateArgs) -> Result<Table, AppError> {
    let ch = channel(&a.channel)?;
    let mut cfg = SimConfig::new(a.n, a.rate, ch, a.trials, a.seed);
    cfg.delta = a.delta;
    cfg.fresh_codebook_per_trial = !a.shared_codebook;
    let r = run_trials(&cfg)?;
    let n = a.n as u64;
    let pe_bob_bound = bob_bounds(&ch, n, a.rate)?.pe_upper;
    let pe_eve_bound = eve_error_lower(&ch, n, a.rate)?;
    let mut t = Table::new(&[
        "n",
        "rate",
        "messages",
        "trials",
        "seed",
        "pe_bob",
        "pe_bob_ci",
        "pe_bob_bound",
        "pe_eve",
        "pe_eve_ci",
        "pe_eve_bound",
        "confusion_mean",
        "confusion_var",
        "confusion_cv",
        "confusion_rate",
        "predicted_confusion",
        "sphere_estimate",
        "noise_outliers",
    ]);
    t.push(vec![
        a.n.into(),
        a.rate.into(),
        r.messages.into(),
        r.trials.into(),
        a.seed.into(),
        r.pe_bob.mean.into(),
        r.pe_bob.half_width.into(),
        pe_bob_bound.into(),
        r.pe_eve.mean.into(),
        r.pe_eve.half_width.into(),
        pe_eve_bound.into(),
        r.confusion_mean.into(),
        r.confusion_var.into(),
        r.confusion_cv().into(),
        r.confusion_rate(a.n).into(),
        r.predicted_confusion.into(),
        r.sphere_estimate.into(),
        r.noise_outliers.into(),
    ]);
    Ok(t)
}

pub fn fading(a: &FadingArgs) -> Result<Table, AppError> {
    let power = match (a.power.power, a.power.power_db) {
        (Some(p), _) => p,
        (None, Some(db)) => wiretap_core::channel::db_to_linear(db),
        (None, None) => 1.0,
    };
    let cfg = FadingConfig {
        mean_q: a.mean_q,
        mean_r: a.mean_r,
        power,
        integration: IntegrationConfig {
            nodes: a.nodes,
            tail_mass: a.tail_mass,
            mc_samples: a.mc_samples,
            seed: a.seed,
        },
        tol_lambda: a.tol_lambda,
    };
    cfg.validate()?;
    let policies: &[Policy] = match a.policy {
        PolicyArg::Both => &[Policy::Secrecy, Policy::Main],
        PolicyArg::Secrecy => &[Policy::Secrecy],
        PolicyArg::Main => &[Policy::Main],
    };
    let mut t = Table::new(&[
        "policy",
        "mean_q",
        "mean_r",
        "power",
        "capacity",
        "capacity_mc",
        "capacity_mc_ci",
        "lambda",
        "avg_power",
        "avg_power_mc",
        "avg_power_mc_ci",
        "transmit_probability",
        "transmit_probability_mc",
        "transmit_probability_mc_ci",
    ]);
    for &policy in policies {
        let quad = match policy {
            Policy::Secrecy => fading_secrecy_capacity(&cfg)?,
            Policy::Main => fading_main_capacity(&cfg)?,
        };
        let mc = if a.mc_samples > 0 && quad.lambda.is_finite() {
            Some(fading_monte_carlo(&cfg, policy, quad.lambda)?)
        } else {
            None
        };
        let pick = |f: fn(&wiretap_core::fading::FadingMonteCarlo) -> (f64, f64)| {
            mc.as_ref()
                .map(f)
                .map_or((Cell::Empty, Cell::Empty), |(m, h)| (m.into(), h.into()))
        };
        let (cap, cap_ci) = pick(|m| (m.capacity.mean, m.capacity.half_width));
        let (pow, pow_ci) = pick(|m| (m.avg_power.mean, m.avg_power.half_width));
        let (tp, tp_ci) = pick(|m| {
            (
                m.transmit_probability.mean,
                m.transmit_probability.half_width,
            )
        });
        t.push(vec![
            policy.as_str().into(),
            cfg.mean_q.into(),
            cfg.mean_r.into(),
            cfg.power.into(),
            quad.capacity.into(),
            cap,
            cap_ci,
            quad.lambda.into(),
            quad.avg_power_used.into(),
            pow,
            pow_ci,
            quad.transmit_probability.into(),
            tp,
            tp_ci,
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("0:0.3:0.1").unwrap().len(), 4);
        assert_eq!(parse_range("-10:-10:1").unwrap(), vec![-10.0]);
        assert_eq!(parse_range("20, 5").unwrap(), vec![20.0, 5.0]);
        assert!(parse_range("").is_err());
        assert!(parse_range("5:0:1").is_err());
        assert!(parse_range("0:5:0").is_err());
        assert!(parse_range("a,b").is_err());
    }
}
