//! Density estimation, equations of state and force assembly for the
//! unified theta-scheme
//!
//! ```text
//! a_i = -F(rho_i) sum_j m_j grad W(x_i - x_j) - theta sum_j m_j F(rho_j) grad W(x_i - x_j)
//! ```
//!
//! with `F = P / rho^2` for theta = 1 (classical, momentum conserving) and
//! `F = (dP/drho) / rho` for theta = 0 (non-conservative variant).
//!
//! The Lagrangian density relation `rho = rho_0 / J` is never evaluated:
//! no deformation gradient is tracked, densities always come from kernel
//! sums or their time derivative.

mod auxiliary;
mod eos;
mod forces;
mod neighbors;
mod state;

#[cfg(test)]
mod tests_forces;

use serde::{Deserialize, Serialize};

pub use auxiliary::{ExternalPotential, InteractionKernel};
pub use eos::EosSpec;
pub use forces::{auxiliary_forces, SphContext};
pub use neighbors::{Candidates, NeighborSearch, Neighborhood};
pub use state::ParticleState;

use crate::error::{Error, Result};
use crate::kernels::Dimension;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Theta {
    /// `F = (dP/drho) / rho`; does not conserve momentum.
    Zero,
    /// `F = P / rho^2`; the classical pairwise-antisymmetric scheme.
    One,
}

impl TryFrom<u8> for Theta {
    type Error = Error;

    fn try_from(t: u8) -> Result<Self> {
        match t {
            0 => Ok(Theta::Zero),
            1 => Ok(Theta::One),
            _ => Err(Error::config(format!("theta must be 0 or 1, got {t}"))),
        }
    }
}

impl From<Theta> for u8 {
    fn from(t: Theta) -> u8 {
        match t {
            Theta::Zero => 0,
            Theta::One => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityMode {
    /// Re-estimate densities by kernel summation after every drift, plus
    /// the integrated mass flux when one is configured.
    #[default]
    Summation,
    /// Integrate `d rho / dt` alongside the positions.
    Continuity,
}

/// Smoothing length used for the pair (i, j) when lengths vary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSmoothing {
    /// `h_i`: particle i gathers with its own smoothing length.
    #[default]
    Gather,
    /// `(h_i + h_j) / 2`.
    Average,
}

impl PairSmoothing {
    #[inline]
    pub fn pair_h(self, hi: f64, hj: f64) -> f64 {
        match self {
            PairSmoothing::Gather => hi,
            PairSmoothing::Average => 0.5 * (hi + hj),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SoundSpeed {
    /// `c = sqrt(dP/drho)` at each particle's density.
    #[default]
    FromEos,
    Constant { c: f64 },
}

/// Monaghan-type artificial viscosity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViscosityParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub sound_speed: SoundSpeed,
}

/// Pairwise density diffusion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassFluxParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for MassFluxParams {
    fn default() -> Self {
        MassFluxParams { alpha: 0.5, beta: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceConfig {
    pub theta: Theta,
    #[serde(default)]
    pub viscosity: Option<ViscosityParams>,
    #[serde(default)]
    pub mass_flux: Option<MassFluxParams>,
    #[serde(default)]
    pub external_potential: Option<ExternalPotential>,
    /// Linear friction coefficient `nu >= 0`, force `-nu v`.
    #[serde(default)]
    pub friction: Option<f64>,
    #[serde(default)]
    pub interaction_kernel: Option<InteractionKernel>,
    #[serde(default)]
    pub density_mode: DensityMode,
    #[serde(default)]
    pub pair_smoothing: PairSmoothing,
}

impl ForceConfig {
    pub fn conservative(theta: Theta) -> Self {
        ForceConfig {
            theta,
            viscosity: None,
            mass_flux: None,
            external_potential: None,
            friction: None,
            interaction_kernel: None,
            density_mode: DensityMode::Summation,
            pair_smoothing: PairSmoothing::Gather,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(v) = &self.viscosity {
            if !(v.alpha >= 0.0) || !(v.beta >= 0.0) {
                return Err(Error::config("viscosity parameters must be non-negative"));
            }
            if let SoundSpeed::Constant { c } = v.sound_speed {
                if !(c > 0.0) {
                    return Err(Error::config("constant sound speed must be positive"));
                }
            }
        }
        if let Some(f) = &self.mass_flux {
            if !(f.alpha >= 0.0) || !(f.beta >= 0.0) {
                return Err(Error::config("mass-flux parameters must be non-negative"));
            }
        }
        if let Some(nu) = self.friction {
            if !(nu >= 0.0) {
                return Err(Error::config("friction coefficient must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn has_auxiliary(&self) -> bool {
        self.external_potential.is_some()
            || self.friction.is_some()
            || self.interaction_kernel.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SmoothingMode {
    FixedGlobal { h: f64 },
    /// `h = eta N^(-1/d)` for every particle.
    ScaledByN { eta: f64 },
    /// `h_i = eta m_i / rho_i`; a length only in one dimension.
    AdaptiveMassDensity { eta: f64 },
}

impl SmoothingMode {
    pub fn validate(&self, dim: Dimension) -> Result<()> {
        let value = match *self {
            SmoothingMode::FixedGlobal { h } => h,
            SmoothingMode::ScaledByN { eta } => eta,
            SmoothingMode::AdaptiveMassDensity { eta } => {
                if dim != Dimension::One {
                    return Err(Error::config(
                        "adaptive h = eta m / rho is only dimensionally valid in 1D",
                    ));
                }
                eta
            }
        };
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::config("smoothing parameter must be positive"));
        }
        Ok(())
    }

    /// Whether the lengths depend on the current densities.
    pub fn is_adaptive(&self) -> bool {
        matches!(self, SmoothingMode::AdaptiveMassDensity { .. })
    }
}

/// New smoothing lengths for `state` under `mode`; a single pass using the
/// current densities, no fixed-point iteration.
pub fn update_smoothing_lengths(state: &ParticleState, mode: SmoothingMode) -> Result<Vec<f64>> {
    mode.validate(state.dim)?;
    let n = state.len();
    Ok(match mode {
        SmoothingMode::FixedGlobal { h } => vec![h; n],
        SmoothingMode::ScaledByN { eta } => {
            let h = eta * (n as f64).powf(-1.0 / state.dim.as_f64());
            vec![h; n]
        }
        SmoothingMode::AdaptiveMassDensity { eta } => {
            state.check_densities()?;
            state
                .masses
                .iter()
                .zip(&state.densities)
                .map(|(&m, &rho)| eta * m / rho)
                .collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Vec2;

    fn line(n: usize) -> ParticleState {
        ParticleState::new(
            Dimension::One,
            (0..n).map(|i| Vec2::new(i as f64, 0.0)).collect(),
            vec![Vec2::ZERO; n],
            vec![0.01; n],
            vec![1.0; n],
        )
        .unwrap()
    }

    #[test]
    fn scaled_by_n_droplet_value() {
        let n = 7232;
        let state = ParticleState::new(
            Dimension::Two,
            vec![Vec2::ZERO; n],
            vec![Vec2::ZERO; n],
            vec![1.0; n],
            vec![1.0; n],
        )
        .unwrap();
        let h = update_smoothing_lengths(&state, SmoothingMode::ScaledByN { eta: 1.5 }).unwrap();
        assert!((h[0] - 0.017638).abs() < 1e-6, "{}", h[0]);
    }

    #[test]
    fn adaptive_mass_density() {
        let mut state = line(3);
        state.densities = vec![1.0; 3];
        let h = update_smoothing_lengths(&state, SmoothingMode::AdaptiveMassDensity { eta: 1.2 })
            .unwrap();
        for hi in h {
            assert!((hi - 0.012).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_global_ignores_state() {
        let mut state = line(4);
        state.densities = vec![3.0, 1.0, 9.0, 2.0];
        let h = update_smoothing_lengths(&state, SmoothingMode::FixedGlobal { h: 0.3 }).unwrap();
        assert_eq!(h, vec![0.3; 4]);
    }

    #[test]
    fn adaptive_rejected_in_2d() {
        let state = ParticleState::new(
            Dimension::Two,
            vec![Vec2::ZERO],
            vec![Vec2::ZERO],
            vec![1.0],
            vec![1.0],
        )
        .unwrap();
        let err = update_smoothing_lengths(&state, SmoothingMode::AdaptiveMassDensity { eta: 1.2 });
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn theta_parsing() {
        assert_eq!(Theta::try_from(1).unwrap(), Theta::One);
        assert!(Theta::try_from(2).is_err());
    }
}
