//! Spectrum of a graphene disk with infinite-mass (Berry–Mondragon)
//! confinement.
//!
//! In channel `n ≥ 1` the positive levels are `E = ε₀·λ` with `λ` a zero of
//! `J_{n-1}(λ) ∓ J_n(λ)` and `ε₀ = ħc·v_F/R`. The spectrum is symmetric under
//! `E → -E`; only positive levels are stored. There are no zero modes.
//!
//! Completeness below `z_max` follows from the lower bounds on the first
//! zero of each channel: `λ⁻_{n-1,1} > n` and `λ⁺_{n-1,1} > j_{n-1,1} > n-1`.
//! Channels with `n - 1 ≥ z_max` therefore contribute nothing.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{eval_j, Order, Sign};
use crate::error::{Error, Result};
use crate::zeros::OrderPair;

/// ħc in meV·nm.
pub const HBAR_C_MEV_NM: f64 = 1.973269804e5;
/// Fermi velocity of graphene in units of c.
pub const DEFAULT_FERMI_VELOCITY: f64 = 1.0 / 300.0;
/// Valley × spin multiplicity.
pub const DEFAULT_DEGENERACY: u32 = 4;
/// Largest accepted `z_max`.
pub const Z_MAX_CAP: f64 = 1e4;
/// Root tolerance used for spectrum zeroes.
pub const SPECTRUM_TOL: f64 = 1e-12;
/// Minimal admissible distance between two levels, in units of `ε₀`.
pub const MIN_LEVEL_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DotConfig {
    pub radius_nm: f64,
    pub fermi_velocity_over_c: f64,
    pub hbar_c_mev_nm: f64,
    pub degeneracy: u32,
}

impl Default for DotConfig {
    fn default() -> Self {
        DotConfig {
            radius_nm: 100.0,
            fermi_velocity_over_c: DEFAULT_FERMI_VELOCITY,
            hbar_c_mev_nm: HBAR_C_MEV_NM,
            degeneracy: DEFAULT_DEGENERACY,
        }
    }
}

impl DotConfig {
    pub fn new(radius_nm: f64, fermi_velocity_over_c: f64) -> Result<Self> {
        let config = DotConfig {
            radius_nm,
            fermi_velocity_over_c,
            ..DotConfig::default()
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_degeneracy(self, degeneracy: u32) -> Result<Self> {
        let config = DotConfig { degeneracy, ..self };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("radius_nm", self.radius_nm)?;
        positive("fermi_velocity_over_c", self.fermi_velocity_over_c)?;
        positive("hbar_c_mev_nm", self.hbar_c_mev_nm)?;
        if self.degeneracy == 0 {
            return Err(Error::InvalidArgument(
                "degeneracy must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// `ε₀ = ħc·v_F/R` in meV.
    pub fn energy_scale_mev(&self) -> f64 {
        self.hbar_c_mev_nm * self.fermi_velocity_over_c / self.radius_nm
    }
}

/// One positive level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub lambda: f64,
    /// Channel label `n ≥ 1`: `λ` is a zero of `J_{n-1} ∓ J_n`.
    pub channel_n: u32,
    pub family: Sign,
    pub radial_k: u32,
    pub energy_mev: f64,
    /// 1-based position in the ordered spectrum.
    pub global_index_q: u32,
}

/// All positive levels with `λ ≤ z_max`, ordered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub z_max: f64,
    pub complete_below: f64,
    pub energy_scale_mev: f64,
    pub levels: Vec<LevelRecord>,
}

impl SpectrumTable {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|l| l.lambda)
    }

    pub fn energies_mev(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|l| l.energy_mev)
    }

    /// Highest energy up to which the table is complete.
    pub fn certified_energy_mev(&self) -> f64 {
        self.energy_scale_mev * self.complete_below
    }

    /// Number of levels with `λ < z`.
    pub fn count_below(&self, z: f64) -> usize {
        self.levels.partition_point(|l| l.lambda < z)
    }

    pub(crate) fn check_config(&self, config: &DotConfig) -> Result<()> {
        config.validate()?;
        let scale = config.energy_scale_mev();
        if ((scale - self.energy_scale_mev) / self.energy_scale_mev).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "table was built with ε₀ = {} meV but the configuration gives {scale} meV",
                self.energy_scale_mev
            )));
        }
        Ok(())
    }
}

/// Normalization of the eigenmode belonging to one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenmodeNorm {
    /// Index `m` of the radial pair `(J_m, J_{m+1})`; `m = n - 1`.
    pub channel_n: u32,
    pub energy_mev: f64,
    /// `a_m⁻² = (4π²R/|ℰ|)·J_m(|ℰ|R)·J_{m+1}(|ℰ|R)` in nm², `|ℰ| = λ/R`.
    pub a_n_inverse_sq: f64,
}

/// Enumerates every positive level with `λ ≤ z_max`.
pub fn build_spectrum(config: &DotConfig, z_max: f64) -> Result<SpectrumTable> {
    config.validate()?;
    if !(z_max.is_finite() && z_max > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "z_max must be positive, got {z_max}"
        )));
    }
    if z_max > Z_MAX_CAP {
        return Err(Error::InvalidArgument(format!(
            "z_max must not exceed {Z_MAX_CAP}, got {z_max}"
        )));
    }

    // channels n with n - 1 < z_max
    let last_channel = z_max.ceil() as u32;
    let per_channel: Vec<Vec<LevelRecord>> = (1..=last_channel)
        .into_par_iter()
        .map(|n| channel_levels(n, z_max))
        .collect::<Result<_>>()?;

    let mut levels: Vec<LevelRecord> = per_channel.into_iter().flatten().collect();
    levels.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    if let Some(w) = levels
        .windows(2)
        .find(|w| w[1].lambda - w[0].lambda <= MIN_LEVEL_GAP)
    {
        return Err(Error::NumericDegeneracy(format!(
            "levels ({}, {:?}, {}) and ({}, {:?}, {}) coincide within {MIN_LEVEL_GAP}",
            w[0].channel_n, w[0].family, w[0].radial_k, w[1].channel_n, w[1].family, w[1].radial_k
        )));
    }
    let scale = config.energy_scale_mev();
    for (q, level) in levels.iter_mut().enumerate() {
        level.global_index_q = q as u32 + 1;
        level.energy_mev = scale * level.lambda;
    }
    Ok(SpectrumTable {
        z_max,
        complete_below: z_max,
        energy_scale_mev: scale,
        levels,
    })
}

fn channel_levels(n: u32, z_max: f64) -> Result<Vec<LevelRecord>> {
    let nu = f64::from(n);
    if nu - 1.0 >= z_max {
        return Ok(Vec::new());
    }
    let mut pair = OrderPair::new(Order::new(nu)?, SPECTRUM_TOL)?;
    let mut out = Vec::new();
    for family in [Sign::Minus, Sign::Plus] {
        for r in pair.cross_up_to(family, z_max)? {
            out.push(LevelRecord {
                lambda: r.value,
                channel_n: n,
                family,
                radial_k: r.k as u32,
                energy_mev: 0.0,
                global_index_q: 0,
            });
        }
    }
    Ok(out)
}

/// `λ⁻_{0,1}`, the smallest positive eigenvalue in units of `ε₀`.
pub fn lowest_eigenvalue() -> Result<f64> {
    OrderPair::new(Order::new(1.0)?, SPECTRUM_TOL)?.cross_value(Sign::Minus, 1)
}

/// Gap `Δ = 2·ε₀·λ⁻_{0,1}` in meV.
pub fn gap(config: &DotConfig) -> Result<f64> {
    config.validate()?;
    Ok(2.0 * config.energy_scale_mev() * lowest_eigenvalue()?)
}

/// Normalization constant of the eigenmode of `level`.
///
/// Fails with `NumericDegeneracy` when either radial factor is below `1e-13`
/// at the level, which would indicate a channel-labelling mismatch.
pub fn eigenmode_norm(config: &DotConfig, level: &LevelRecord) -> Result<EigenmodeNorm> {
    config.validate()?;
    if !(level.lambda > 0.0) || level.channel_n == 0 {
        return Err(Error::InvalidArgument(format!(
            "not a spectrum level: {level:?}"
        )));
    }
    let m = level.channel_n - 1;
    let lambda = level.lambda;
    let first = eval_j(f64::from(m), lambda).value;
    let second = eval_j(f64::from(m + 1), lambda).value;
    if first.abs() < 1e-13 || second.abs() < 1e-13 {
        return Err(Error::NumericDegeneracy(format!(
            "radial factors J_{m}({lambda}) = {first:e}, J_{}({lambda}) = {second:e}",
            m + 1
        )));
    }
    let r = config.radius_nm;
    let energy_mev = config.energy_scale_mev() * lambda;
    Ok(EigenmodeNorm {
        channel_n: m,
        energy_mev,
        a_n_inverse_sq: 4.0 * PI * PI * r * r / lambda * first * second,
    })
}
