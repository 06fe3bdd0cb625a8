//! External fields and non-local interaction kernels.

use serde::{Deserialize, Serialize};

use crate::vector::Vec2;

/// Scalar potential `u(x)` contributing `-grad u` to each particle's
/// acceleration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExternalPotential {
    /// `u(x) = g . x`, i.e. uniform gravity `-g`.
    Uniform { g: Vec2 },
    /// `u(x) = k |x - center|^2 / 2`.
    Harmonic { k: f64, center: Vec2 },
}

impl ExternalPotential {
    pub fn value(&self, x: Vec2) -> f64 {
        match *self {
            ExternalPotential::Uniform { g } => g.dot(x),
            ExternalPotential::Harmonic { k, center } => 0.5 * k * (x - center).norm_squared(),
        }
    }

    pub fn gradient(&self, x: Vec2) -> Vec2 {
        match *self {
            ExternalPotential::Uniform { g } => g,
            ExternalPotential::Harmonic { k, center } => (x - center).scale(k),
        }
    }
}

/// Pairwise vector kernel `K(x - y)`, possibly anisotropic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InteractionKernel {
    /// `K(z) = -k z`; odd, attractive.
    Spring { k: f64 },
    /// `K(z) = s z exp(-|z|^2 / w^2)`; odd, short-range repulsion for s > 0.
    GaussianRepulsion { strength: f64, width: f64 },
    /// `K(z) = (a z_x, b z_y)`; odd and anisotropic.
    Anisotropic { a: f64, b: f64 },
}

impl InteractionKernel {
    #[inline]
    pub fn eval(&self, z: Vec2) -> Vec2 {
        match *self {
            InteractionKernel::Spring { k } => z.scale(-k),
            InteractionKernel::GaussianRepulsion { strength, width } => {
                z.scale(strength * (-z.norm_squared() / (width * width)).exp())
            }
            InteractionKernel::Anisotropic { a, b } => Vec2::new(a * z.x, b * z.y),
        }
    }
}
