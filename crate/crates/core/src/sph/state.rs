use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::Dimension;
use crate::vector::Vec2;

/// An N-particle system: the discrete measure `sum_i m_i delta_{x_i}` plus
/// the kinematic and smoothing data carried by each particle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub dim: Dimension,
    pub positions: Vec<Vec2>,
    pub velocities: Vec<Vec2>,
    pub masses: Vec<f64>,
    pub smoothing_lengths: Vec<f64>,
    /// Estimated densities; zero until the first density estimate.
    pub densities: Vec<f64>,
}

impl ParticleState {
    /// Builds a state with unset (zero) densities.
    pub fn new(
        dim: Dimension,
        positions: Vec<Vec2>,
        velocities: Vec<Vec2>,
        masses: Vec<f64>,
        smoothing_lengths: Vec<f64>,
    ) -> Result<Self> {
        let n = positions.len();
        let state = ParticleState {
            dim,
            positions,
            velocities,
            masses,
            smoothing_lengths,
            densities: vec![0.0; n],
        };
        state.validate()?;
        Ok(state)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::domain("particle system must hold at least one particle"));
        }
        if self.velocities.len() != n
            || self.masses.len() != n
            || self.smoothing_lengths.len() != n
            || self.densities.len() != n
        {
            return Err(Error::domain("particle arrays differ in length"));
        }
        for i in 0..n {
            if !(self.masses[i] > 0.0) || !self.masses[i].is_finite() {
                return Err(Error::Numeric {
                    index: i,
                    message: format!("mass must be positive, got {}", self.masses[i]),
                });
            }
            if !(self.smoothing_lengths[i] > 0.0) || !self.smoothing_lengths[i].is_finite() {
                return Err(Error::Numeric {
                    index: i,
                    message: format!(
                        "smoothing length must be positive, got {}",
                        self.smoothing_lengths[i]
                    ),
                });
            }
            if self.dim == Dimension::One
                && (self.positions[i].y != 0.0 || self.velocities[i].y != 0.0)
            {
                return Err(Error::domain(format!(
                    "particle {i} has a y component in a 1D system"
                )));
            }
        }
        Ok(())
    }

    /// Fails with the offending index if any density is not strictly positive.
    pub fn check_densities(&self) -> Result<()> {
        for (i, &rho) in self.densities.iter().enumerate() {
            if !(rho > 0.0) || !rho.is_finite() {
                return Err(Error::Numeric {
                    index: i,
                    message: format!("density must be positive and finite, got {rho}"),
                });
            }
        }
        Ok(())
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn momentum(&self) -> Vec2 {
        self.masses
            .iter()
            .zip(&self.velocities)
            .fold(Vec2::ZERO, |acc, (&m, &v)| acc + v.scale(m))
    }

    pub fn kinetic_energy(&self) -> f64 {
        self.masses
            .iter()
            .zip(&self.velocities)
            .map(|(&m, v)| 0.5 * m * v.norm_squared())
            .sum()
    }

    pub fn max_smoothing_length(&self) -> f64 {
        self.smoothing_lengths.iter().copied().fold(0.0, f64::max)
    }
}
