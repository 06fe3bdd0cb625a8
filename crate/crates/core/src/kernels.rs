//! Smoothing kernels `W_h` and their gradients in one and two dimensions.
//!
//! Every family is written as `W_h(z) = sigma_d / h^d * w(|z| / h)` where
//! `w` is a dimensionless shape with compact support `q < c`. Evaluation
//! always goes through the unit-width kernel, `W_h(z) = W_1(z / h) / h^d`,
//! so the scaling identity holds bit for bit.
//!
//! | family                | shape `w(q)`                               | c |
//! |-----------------------|--------------------------------------------|---|
//! | Wendland C2, d = 1    | `(1 - q/2)^3 (1.5 q + 1)`                  | 2 |
//! | Wendland C2, d = 2    | `(1 - q/2)^4 (2 q + 1)`                    | 2 |
//! | cubic spline (M4)     | `1 - 1.5 q^2 + 0.75 q^3`, `0.25 (2 - q)^3` | 2 |
//! | truncated Gaussian    | `exp(-q^2)`, renormalized on `q < 3`       | 3 |

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vec2;

/// erf(3), needed to renormalize the 1D Gaussian truncated at 3h.
const ERF_3: f64 = 0.999_977_909_503_001_4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelFamily {
    #[serde(rename = "wendland-c2")]
    WendlandC2,
    #[serde(rename = "cubic-spline")]
    CubicSpline,
    #[serde(rename = "gaussian")]
    TruncatedGaussian,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 3] = [
        KernelFamily::WendlandC2,
        KernelFamily::CubicSpline,
        KernelFamily::TruncatedGaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::WendlandC2 => "wendland-c2",
            KernelFamily::CubicSpline => "cubic-spline",
            KernelFamily::TruncatedGaussian => "gaussian",
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wendland-c2" | "wendland" => Ok(KernelFamily::WendlandC2),
            "cubic-spline" | "cubic" => Ok(KernelFamily::CubicSpline),
            "gaussian" => Ok(KernelFamily::TruncatedGaussian),
            other => Err(Error::config(format!("unknown kernel family `{other}`"))),
        }
    }
}

/// Spatial dimension of a particle system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dimension {
    One,
    Two,
}

impl Dimension {
    #[inline]
    pub fn get(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.get() as f64
    }
}

impl TryFrom<u8> for Dimension {
    type Error = Error;

    fn try_from(d: u8) -> Result<Self> {
        match d {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            _ => Err(Error::config(format!("dimension must be 1 or 2, got {d}"))),
        }
    }
}

impl From<Dimension> for u8 {
    fn from(d: Dimension) -> u8 {
        d.get() as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub dim: Dimension,
}

impl KernelSpec {
    pub const fn new(family: KernelFamily, dim: Dimension) -> Self {
        KernelSpec { family, dim }
    }

    /// Support radius in units of h.
    #[inline]
    pub fn support_factor(&self) -> f64 {
        match self.family {
            KernelFamily::WendlandC2 | KernelFamily::CubicSpline => 2.0,
            KernelFamily::TruncatedGaussian => 3.0,
        }
    }

    #[inline]
    pub fn support_radius(&self, h: f64) -> f64 {
        self.support_factor() * h
    }

    /// Normalization constant `sigma_d`.
    pub fn sigma(&self) -> f64 {
        match (self.family, self.dim) {
            (KernelFamily::WendlandC2, Dimension::One) => 5.0 / 8.0,
            (KernelFamily::WendlandC2, Dimension::Two) => 7.0 / (4.0 * PI),
            (KernelFamily::CubicSpline, Dimension::One) => 2.0 / 3.0,
            (KernelFamily::CubicSpline, Dimension::Two) => 10.0 / (7.0 * PI),
            (KernelFamily::TruncatedGaussian, Dimension::One) => 1.0 / (PI.sqrt() * ERF_3),
            (KernelFamily::TruncatedGaussian, Dimension::Two) => {
                1.0 / (PI * (1.0 - (-9.0f64).exp()))
            }
        }
    }

    #[inline]
    fn h_pow_d(&self, h: f64) -> f64 {
        match self.dim {
            Dimension::One => h,
            Dimension::Two => h * h,
        }
    }

    /// Dimensionless shape `w(q)` for `q` inside the support.
    #[inline]
    fn shape(&self, q: f64) -> f64 {
        match (self.family, self.dim) {
            (KernelFamily::WendlandC2, Dimension::One) => {
                let t = 1.0 - 0.5 * q;
                t * t * t * (1.5 * q + 1.0)
            }
            (KernelFamily::WendlandC2, Dimension::Two) => {
                let t = 1.0 - 0.5 * q;
                let t2 = t * t;
                t2 * t2 * (2.0 * q + 1.0)
            }
            (KernelFamily::CubicSpline, _) => {
                if q < 1.0 {
                    1.0 - 1.5 * q * q + 0.75 * q * q * q
                } else {
                    let t = 2.0 - q;
                    0.25 * t * t * t
                }
            }
            (KernelFamily::TruncatedGaussian, _) => (-q * q).exp(),
        }
    }

    /// `w'(q) / q`, finite at q = 0 for every family.
    #[inline]
    fn slope_over_q(&self, q: f64) -> f64 {
        match (self.family, self.dim) {
            (KernelFamily::WendlandC2, Dimension::One) => {
                let t = 1.0 - 0.5 * q;
                -3.0 * t * t
            }
            (KernelFamily::WendlandC2, Dimension::Two) => {
                let t = 1.0 - 0.5 * q;
                -5.0 * t * t * t
            }
            (KernelFamily::CubicSpline, _) => {
                if q < 1.0 {
                    -3.0 + 2.25 * q
                } else {
                    let t = 2.0 - q;
                    -0.75 * t * t / q
                }
            }
            (KernelFamily::TruncatedGaussian, _) => -2.0 * (-q * q).exp(),
        }
    }

    /// `W_1(y)` for the unit smoothing length.
    #[inline]
    fn unit_value(&self, y: Vec2) -> f64 {
        let q = y.norm();
        if q < self.support_factor() {
            self.sigma() * self.shape(q)
        } else {
            0.0
        }
    }

    #[inline]
    fn unit_gradient(&self, y: Vec2) -> Vec2 {
        let q = y.norm();
        if q < self.support_factor() {
            y.scale(self.sigma() * self.slope_over_q(q))
        } else {
            Vec2::ZERO
        }
    }

    /// `W_h(z)` without argument validation; the force loops call this.
    #[inline]
    pub fn w(&self, z: Vec2, h: f64) -> f64 {
        debug_assert!(h > 0.0);
        self.unit_value(z.div(h)) / self.h_pow_d(h)
    }

    /// `grad W_h(z)` without argument validation.
    #[inline]
    pub fn grad_w(&self, z: Vec2, h: f64) -> Vec2 {
        debug_assert!(h > 0.0);
        self.unit_gradient(z.div(h)).div(self.h_pow_d(h) * h)
    }

    /// `W_h(0)`, the self-contribution to a density sum.
    #[inline]
    pub fn w0(&self, h: f64) -> f64 {
        self.w(Vec2::ZERO, h)
    }

    fn check(&self, z: Vec2, h: f64) -> Result<()> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::domain(format!("smoothing length must be positive, got {h}")));
        }
        if self.dim == Dimension::One && z.y != 0.0 {
            return Err(Error::domain("1D kernel evaluated at a displacement with y != 0"));
        }
        if !z.is_finite() {
            return Err(Error::domain("non-finite displacement"));
        }
        Ok(())
    }

    pub fn value(&self, z: Vec2, h: f64) -> Result<f64> {
        self.check(z, h)?;
        Ok(self.w(z, h))
    }

    pub fn gradient(&self, z: Vec2, h: f64) -> Result<Vec2> {
        self.check(z, h)?;
        Ok(self.grad_w(z, h))
    }
}
