//! Barotropic equations of state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EosSpec {
    /// `P = K rho^gamma`, gamma > 1.
    Polytropic { k: f64, gamma: f64 },
    /// `P = B ((rho / rho0)^gamma - 1)`, negative below the reference density.
    Tait { b: f64, rho0: f64, gamma: f64 },
}

impl EosSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EosSpec::Polytropic { k, gamma } => {
                if !(k > 0.0) || !(gamma > 1.0) {
                    return Err(Error::config(format!(
                        "polytropic EOS needs K > 0 and gamma > 1 (K={k}, gamma={gamma})"
                    )));
                }
            }
            EosSpec::Tait { b, rho0, gamma } => {
                if !(b > 0.0) || !(rho0 > 0.0) || !(gamma >= 1.0) {
                    return Err(Error::config(format!(
                        "Tait EOS needs B > 0, rho0 > 0, gamma >= 1 (B={b}, rho0={rho0}, gamma={gamma})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Tait stiffness giving reference sound speed `c0`: `B = rho0 c0^2 / gamma`.
    pub fn tait_with_sound_speed(c0: f64, rho0: f64, gamma: f64) -> EosSpec {
        EosSpec::Tait {
            b: rho0 * c0 * c0 / gamma,
            rho0,
            gamma,
        }
    }

    /// Polytrope whose sound speed equals `c` at density `rho`.
    pub fn polytropic_with_sound_speed(c: f64, rho: f64, gamma: f64) -> EosSpec {
        EosSpec::Polytropic {
            k: c * c / (gamma * rho.powf(gamma - 1.0)),
            gamma,
        }
    }

    #[inline]
    pub fn p(&self, rho: f64) -> f64 {
        match *self {
            EosSpec::Polytropic { k, gamma } => k * rho.powf(gamma),
            EosSpec::Tait { b, rho0, gamma } => b * ((rho / rho0).powf(gamma) - 1.0),
        }
    }

    #[inline]
    pub fn dp_drho(&self, rho: f64) -> f64 {
        match *self {
            EosSpec::Polytropic { k, gamma } => k * gamma * rho.powf(gamma - 1.0),
            EosSpec::Tait { b, rho0, gamma } => b * gamma / rho0 * (rho / rho0).powf(gamma - 1.0),
        }
    }

    #[inline]
    pub fn c(&self, rho: f64) -> f64 {
        self.dp_drho(rho).sqrt()
    }

    fn check_density(rho: f64) -> Result<()> {
        if rho > 0.0 && rho.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!("density must be positive, got {rho}")))
        }
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        Self::check_density(rho)?;
        Ok(self.p(rho))
    }

    pub fn dpressure_ddensity(&self, rho: f64) -> Result<f64> {
        Self::check_density(rho)?;
        Ok(self.dp_drho(rho))
    }

    pub fn sound_speed(&self, rho: f64) -> Result<f64> {
        Self::check_density(rho)?;
        Ok(self.c(rho))
    }

    /// Specific internal energy `e(rho) = K rho^(gamma-1) / (gamma-1)`, the
    /// antiderivative of `P / rho^2` that vanishes as rho -> 0.
    pub fn internal_energy(&self, rho: f64) -> Result<f64> {
        Self::check_density(rho)?;
        match *self {
            EosSpec::Polytropic { k, gamma } => {
                if !(gamma > 1.0) {
                    return Err(Error::domain("internal energy requires gamma > 1"));
                }
                Ok(k * rho.powf(gamma - 1.0) / (gamma - 1.0))
            }
            EosSpec::Tait { .. } => Err(Error::Unsupported(
                "internal energy is only defined for the polytropic EOS".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_polytrope() {
        let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
        assert_eq!(eos.pressure(1.0).unwrap(), 1.0);
        assert_eq!(eos.dpressure_ddensity(3.0).unwrap(), 6.0);
        assert_eq!(eos.internal_energy(1.0).unwrap(), 1.0);
    }

    #[test]
    fn tait_reference_density() {
        let eos = EosSpec::Tait { b: 123.0, rho0: 2.5, gamma: 7.0 };
        assert_eq!(eos.pressure(2.5).unwrap(), 0.0);
        let expected = 123.0 * 7.0 / 2.5;
        assert!((eos.dpressure_ddensity(2.5).unwrap() - expected).abs() < 1e-12 * expected);
        assert!(eos.pressure(2.0).unwrap() < 0.0);
    }

    #[test]
    fn polytrope_pressure_by_logarithms() {
        let eos = EosSpec::Polytropic { k: 2.0, gamma: 1.4 };
        let p = eos.pressure(0.125).unwrap();
        let via_logs = (2.0f64.ln() + 1.4 * 0.125f64.ln()).exp();
        assert!((p - via_logs).abs() <= 1e-14 * via_logs);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let rho: f64 = rng.gen_range(0.1..5.0);
            let eos = if rng.gen_bool(0.5) {
                EosSpec::Polytropic { k: rng.gen_range(0.1..3.0), gamma: rng.gen_range(1.1..7.0) }
            } else {
                EosSpec::Tait {
                    b: rng.gen_range(1.0..1e5),
                    rho0: rng.gen_range(0.5..2.0),
                    gamma: rng.gen_range(1.0..7.0),
                }
            };
            let step = 1e-4 * rho;
            let fd = (eos.p(rho + step) - eos.p(rho - step)) / (2.0 * step);
            let exact = eos.dp_drho(rho);
            // Tait pressures near -B lose digits to cancellation.
            let roundoff = 10.0 * f64::EPSILON * eos.p(rho).abs().max(exact * rho) / step;
            assert!((fd - exact).abs() <= 1e-6 * exact.abs() + roundoff, "{eos:?} at {rho}: {fd} vs {exact}");
        }
    }

    #[test]
    fn energy_derivative_is_pressure_over_rho_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for gamma in [1.4, 2.0, 7.0] {
            let eos = EosSpec::Polytropic { k: 0.7, gamma };
            for _ in 0..50 {
                let rho: f64 = rng.gen_range(0.05..4.0);
                let step = 1e-5 * rho;
                let fd = (eos.internal_energy(rho + step).unwrap()
                    - eos.internal_energy(rho - step).unwrap())
                    / (2.0 * step);
                let target = eos.p(rho) / (rho * rho);
                assert!((fd - target).abs() <= 1e-6 * target);
            }
        }
    }

    #[test]
    fn energy_vanishes_at_zero_density() {
        let eos = EosSpec::Polytropic { k: 1.0, gamma: 1.4 };
        assert!(eos.internal_energy(1e-300).unwrap() < 1e-100);
    }

    #[test]
    fn tait_energy_unsupported() {
        let eos = EosSpec::Tait { b: 1.0, rho0: 1.0, gamma: 7.0 };
        assert!(matches!(eos.internal_energy(1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rejects_nonpositive_density() {
        let eos = EosSpec::Polytropic { k: 1.0, gamma: 2.0 };
        assert!(matches!(eos.pressure(0.0), Err(Error::Domain(_))));
        assert!(matches!(eos.dpressure_ddensity(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn validation() {
        assert!(EosSpec::Polytropic { k: 1.0, gamma: 1.0 }.validate().is_err());
        assert!(EosSpec::Tait { b: 0.0, rho0: 1.0, gamma: 7.0 }.validate().is_err());
        assert!(EosSpec::tait_with_sound_speed(1400.0, 1.0, 7.0).validate().is_ok());
        let poly = EosSpec::polytropic_with_sound_speed(1.0, 1.0, 1.4);
        assert!((poly.c(1.0) - 1.0).abs() < 1e-15);
    }
}
