//! Mean carrier number, smoothed counting function, level-spacing
//! statistics and conductance peaks of a disk spectrum.
//!
//! Per species, at zero temperature
//!
//! ```text
//! n(μ) = sgn(μ) · #{q : E_q < |μ|}
//! ```
//!
//! (a level exactly at `|μ|` is not counted), and at temperature `T`
//!
//! ```text
//! n(μ) = sgn(μ) Σ_q [ f(E_q - |μ|) - f(E_q + |μ|) ],   f(x) = 1 / (1 + e^{βx})
//! ```
//!
//! Both are evaluated on `|μ|` and multiplied by `sgn(μ)`, so they are odd in
//! `μ` exactly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Exp};

use crate::error::{Error, Result};
use crate::spectrum::{DotConfig, SpectrumTable};

/// Boltzmann constant in meV/K.
pub const K_B_MEV_PER_K: f64 = 8.617333262e-2;
/// Required table extent beyond `|μ|`, in units of `k_B·T`.
pub const TAIL_BOUND_KT: f64 = 20.0;
/// `β·(E - |μ|)` beyond which Fermi factors are dropped (`e^{-36} < 1e-15`).
const FERMI_CUTOFF: f64 = 36.0;

/// One row of a charge curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargeSample {
    pub mu_mev: f64,
    pub n_single: f64,
    pub n_total: f64,
    pub weyl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeCurve {
    pub temperature_k: f64,
    pub samples: Vec<ChargeSample>,
}

/// How level positions are mapped before taking spacings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Unfolding {
    /// `x_q = λ_q² / 4`, the leading Weyl term; unit mean density.
    #[default]
    Weyl,
    /// Raw `λ_q`, scaled only by the global mean spacing.
    GlobalMean,
}

impl std::str::FromStr for Unfolding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weyl" => Ok(Unfolding::Weyl),
            "global-mean" | "global_mean" | "none" => Ok(Unfolding::GlobalMean),
            other => Err(Error::InvalidArgument(format!(
                "unknown unfolding '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingStats {
    pub unfolding: Unfolding,
    pub spacings: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation over mean; `0` for a single spacing.
    pub cv: f64,
    /// Kolmogorov–Smirnov distance to the exponential with the same mean.
    pub ks_to_exponential: f64,
    /// Set when the sample has a single spacing.
    pub degenerate: bool,
}

/// A conductance peak: an exact level position at `T = 0`, a local maximum
/// of `dn/dμ` (per species) otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConductancePeak {
    pub mu_mev: f64,
    pub height: Option<f64>,
}

fn check_mu(mu_mev: f64, table: &SpectrumTable, margin: f64) -> Result<()> {
    if !mu_mev.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "μ must be finite, got {mu_mev}"
        )));
    }
    let limit = table.certified_energy_mev();
    if mu_mev.abs() + margin > limit {
        return Err(Error::OutOfRange(format!(
            "|μ| = {} meV (+{margin} meV tail) exceeds the table's certified range {limit} meV",
            mu_mev.abs()
        )));
    }
    Ok(())
}

fn beta(temperature_k: f64) -> Result<f64> {
    if !(temperature_k.is_finite() && temperature_k > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive, got {temperature_k}"
        )));
    }
    Ok(1.0 / (K_B_MEV_PER_K * temperature_k))
}

/// Zero-temperature mean number per species.
pub fn mean_number_t0(mu_mev: f64, table: &SpectrumTable, config: &DotConfig) -> Result<i64> {
    table.check_config(config)?;
    check_mu(mu_mev, table, 0.0)?;
    Ok(count_below(mu_mev, table))
}

fn count_below(mu_mev: f64, table: &SpectrumTable) -> i64 {
    let a = mu_mev.abs();
    let count = table.levels.partition_point(|l| l.energy_mev < a) as i64;
    if mu_mev < 0.0 {
        -count
    } else if mu_mev > 0.0 {
        count
    } else {
        0
    }
}

/// `1 / (1 + e^{t})` without overflow.
fn fermi(t: f64) -> f64 {
    if t > 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

/// `-d/dt fermi(t)`, i.e. `1 / (4 cosh²(t/2))`.
fn fermi_slope(t: f64) -> f64 {
    let c = (0.5 * t).cosh();
    0.25 / (c * c)
}

/// Finite-temperature mean number per species.
///
/// The table must reach `20·k_B·T` beyond `|μ|`.
pub fn mean_number_t(
    mu_mev: f64,
    temperature_k: f64,
    table: &SpectrumTable,
    config: &DotConfig,
) -> Result<f64> {
    table.check_config(config)?;
    let beta = beta(temperature_k)?;
    check_mu(mu_mev, table, TAIL_BOUND_KT / beta)?;
    Ok(finite_t(mu_mev, beta, table))
}

fn finite_t(mu_mev: f64, beta: f64, table: &SpectrumTable) -> f64 {
    if mu_mev == 0.0 {
        return 0.0;
    }
    let a = mu_mev.abs();
    let mut sum = 0.0;
    for level in &table.levels {
        let below = beta * (level.energy_mev - a);
        if below > FERMI_CUTOFF {
            break;
        }
        sum += fermi(below) - fermi(beta * (level.energy_mev + a));
    }
    mu_mev.signum() * sum
}

/// `dn/dμ` per species at temperature `T`; even in `μ`.
fn finite_t_slope(mu_mev: f64, beta: f64, table: &SpectrumTable) -> f64 {
    let a = mu_mev.abs();
    let reach = FERMI_CUTOFF / beta;
    let first = table.levels.partition_point(|l| l.energy_mev < a - reach);
    let mut sum = 0.0;
    for level in &table.levels[first..] {
        let below = beta * (level.energy_mev - a);
        if below > FERMI_CUTOFF {
            break;
        }
        sum += fermi_slope(below) + fermi_slope(beta * (level.energy_mev + a));
    }
    beta * sum
}

/// Leading Weyl term `(μ/ε₀)²/4` per species.
pub fn smoothed_count(mu_mev: f64, config: &DotConfig) -> f64 {
    let z = mu_mev / config.energy_scale_mev();
    0.25 * z * z
}

/// Evaluates the mean number and the Weyl term on an ordered `μ` grid.
/// `temperature_k = 0` selects the zero-temperature staircase.
pub fn charge_curve(
    mu_grid: &[f64],
    temperature_k: f64,
    table: &SpectrumTable,
    config: &DotConfig,
) -> Result<ChargeCurve> {
    table.check_config(config)?;
    if !(temperature_k.is_finite() && temperature_k >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "temperature must be non-negative, got {temperature_k}"
        )));
    }
    if mu_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidArgument("μ grid must be ordered".into()));
    }
    let degeneracy = f64::from(config.degeneracy);
    let samples = if temperature_k == 0.0 {
        mu_grid
            .par_iter()
            .map(|&mu| {
                check_mu(mu, table, 0.0)?;
                Ok(count_below(mu, table) as f64)
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        let beta = beta(temperature_k)?;
        mu_grid
            .par_iter()
            .map(|&mu| {
                check_mu(mu, table, TAIL_BOUND_KT / beta)?;
                Ok(finite_t(mu, beta, table))
            })
            .collect::<Result<Vec<_>>>()?
    };
    let samples = mu_grid
        .iter()
        .zip(samples)
        .map(|(&mu_mev, n)| ChargeSample {
            mu_mev,
            n_single: n,
            n_total: degeneracy * n,
            weyl: smoothed_count(mu_mev, config),
        })
        .collect();
    Ok(ChargeCurve {
        temperature_k,
        samples,
    })
}

/// Spacing statistics of the first `level_count + 1` levels with Weyl
/// unfolding.
pub fn spacing_statistics(table: &SpectrumTable, level_count: usize) -> Result<SpacingStats> {
    spacing_statistics_with(table, level_count, Unfolding::Weyl)
}

pub fn spacing_statistics_with(
    table: &SpectrumTable,
    level_count: usize,
    unfolding: Unfolding,
) -> Result<SpacingStats> {
    if level_count == 0 {
        return Err(Error::InvalidArgument(
            "level_count must be at least 1".into(),
        ));
    }
    if table.len() < level_count + 1 {
        return Err(Error::InsufficientLevels {
            needed: level_count + 1,
            available: table.len(),
        });
    }
    let position = |lambda: f64| match unfolding {
        Unfolding::Weyl => 0.25 * lambda * lambda,
        Unfolding::GlobalMean => lambda,
    };
    let spacings: Vec<f64> = table.levels[..=level_count]
        .windows(2)
        .map(|w| position(w[1].lambda) - position(w[0].lambda))
        .collect();
    if let Some(s) = spacings.iter().find(|s| !(**s > 0.0)) {
        return Err(Error::NumericDegeneracy(format!(
            "non-positive spacing {s}"
        )));
    }

    let n = spacings.len() as f64;
    let mean = spacings.iter().sum::<f64>() / n;
    let var = spacings.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    let degenerate = spacings.len() == 1;
    let cv = if degenerate { 0.0 } else { var.sqrt() / mean };

    let exp = Exp::new(1.0 / mean).map_err(|e| Error::NumericDegeneracy(e.to_string()))?;
    let mut sorted = spacings.clone();
    sorted.sort_by(f64::total_cmp);
    let ks_to_exponential = sorted
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let f = exp.cdf(s);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max);

    Ok(SpacingStats {
        unfolding,
        spacings,
        mean,
        cv,
        ks_to_exponential,
        degenerate,
    })
}

/// Conductance peaks over the whole certified range of the table.
pub fn conductance_peaks(
    table: &SpectrumTable,
    config: &DotConfig,
    temperature_k: f64,
) -> Result<Vec<ConductancePeak>> {
    let limit = table.certified_energy_mev();
    conductance_peaks_in(table, config, temperature_k, -limit, limit)
}

/// Conductance peaks with `μ ∈ [mu_min, mu_max]`.
///
/// At `T = 0` these are the level energies `±E_q`. At `T > 0`, `dn/dμ` is
/// sampled with step `k_B·T/8` and its local maxima are returned; the window
/// is clipped so that the tail bound holds.
pub fn conductance_peaks_in(
    table: &SpectrumTable,
    config: &DotConfig,
    temperature_k: f64,
    mu_min: f64,
    mu_max: f64,
) -> Result<Vec<ConductancePeak>> {
    table.check_config(config)?;
    if !(mu_min.is_finite() && mu_max.is_finite() && mu_min <= mu_max) {
        return Err(Error::InvalidArgument(format!(
            "invalid μ window [{mu_min}, {mu_max}]"
        )));
    }
    if temperature_k == 0.0 {
        let limit = table.certified_energy_mev();
        let mut peaks: Vec<ConductancePeak> = table
            .energies_mev()
            .filter(|&e| e <= limit)
            .flat_map(|e| [-e, e])
            .filter(|&mu| mu >= mu_min && mu <= mu_max)
            .map(|mu_mev| ConductancePeak {
                mu_mev,
                height: None,
            })
            .collect();
        peaks.sort_by(|a, b| a.mu_mev.total_cmp(&b.mu_mev));
        return Ok(peaks);
    }
    let beta = beta(temperature_k)?;
    let kt = 1.0 / beta;
    let reach = table.certified_energy_mev() - TAIL_BOUND_KT * kt;
    let lo = mu_min.max(-reach);
    let hi = mu_max.min(reach);
    if lo > hi {
        return Ok(Vec::new());
    }
    let step = kt / 8.0;
    let points = ((hi - lo) / step).floor() as usize + 1;
    let slope: Vec<(f64, f64)> = (0..points)
        .into_par_iter()
        .map(|i| {
            let mu = lo + step * i as f64;
            (mu, finite_t_slope(mu, beta, table))
        })
        .collect();
    Ok(slope
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| ConductancePeak {
            mu_mev: w[1].0,
            height: Some(w[1].1),
        })
        .collect())
}
