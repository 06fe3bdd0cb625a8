//! Exact solution of the isentropic (barotropic `P = K rho^gamma`) Riemann
//! problem for the 1D Euler equations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    pub rho: f64,
    pub u: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytrope {
    pub k: f64,
    pub gamma: f64,
}

impl Polytrope {
    pub fn p(&self, rho: f64) -> f64 {
        self.k * rho.powf(self.gamma)
    }

    pub fn c(&self, rho: f64) -> f64 {
        (self.gamma * self.k * rho.powf(self.gamma - 1.0)).sqrt()
    }

    /// Velocity change across a wave joining `state` to density `rho`, and
    /// its derivative in `rho`.
    fn wave(&self, rho: f64, state: FluidState) -> (f64, f64) {
        let g = self.gamma;
        if rho <= state.rho {
            let f = 2.0 / (g - 1.0) * (self.c(rho) - self.c(state.rho));
            (f, self.c(rho) / rho)
        } else {
            let dp = self.p(rho) - self.p(state.rho);
            let dr = rho - state.rho;
            let q = dp * dr / (rho * state.rho);
            let f = q.sqrt();
            let dq = (g * self.p(rho) / rho * dr + dp) / (rho * state.rho) - q / rho;
            (f, dq / (2.0 * f))
        }
    }
}

/// Left wave, contact-free star region and right wave.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiemannSolution {
    pub eos: Polytrope,
    pub left: FluidState,
    pub right: FluidState,
    pub star: FluidState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wave {
    Shock,
    Rarefaction,
}

impl RiemannSolution {
    /// Star state by safeguarded Newton iteration on the star density, to a
    /// relative tolerance of `1e-12`.
    pub fn solve(eos: Polytrope, left: FluidState, right: FluidState) -> Result<Self> {
        if !(eos.k > 0.0) || !(eos.gamma > 1.0) {
            return Err(Error::domain("polytrope needs K > 0 and gamma > 1"));
        }
        if !(left.rho > 0.0) || !(right.rho > 0.0) {
            return Err(Error::domain("vacuum input state"));
        }
        let du = right.u - left.u;
        let critical = 2.0 / (eos.gamma - 1.0) * (eos.c(left.rho) + eos.c(right.rho));
        if du >= critical {
            return Err(Error::domain("states generate vacuum"));
        }
        let residual = |rho: f64| {
            let (fl, dl) = eos.wave(rho, left);
            let (fr, dr) = eos.wave(rho, right);
            (fl + fr + du, dl + dr)
        };

        // The residual increases monotonically in rho from its vacuum value
        // `du - critical < 0`; bracket the root and bisect whenever Newton
        // leaves the bracket.
        let mut lo = 0.0;
        let mut hi = left.rho.max(right.rho);
        while residual(hi).0 < 0.0 {
            lo = hi;
            hi *= 2.0;
        }
        let mut rho = 0.5 * (left.rho + right.rho);
        if !(rho > lo && rho < hi) {
            rho = 0.5 * (lo + hi);
        }
        for _ in 0..200 {
            let (f, df) = residual(rho);
            if f < 0.0 {
                lo = rho;
            } else {
                hi = rho;
            }
            let mut next = rho - f / df;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - rho).abs() <= 1e-12 * rho;
            rho = next;
            if done {
                break;
            }
        }
        let (fl, _) = eos.wave(rho, left);
        let (fr, _) = eos.wave(rho, right);
        let u = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
        Ok(RiemannSolution {
            eos,
            left,
            right,
            star: FluidState { rho, u },
        })
    }

    pub fn left_wave(&self) -> Wave {
        if self.star.rho > self.left.rho {
            Wave::Shock
        } else {
            Wave::Rarefaction
        }
    }

    pub fn right_wave(&self) -> Wave {
        if self.star.rho > self.right.rho {
            Wave::Shock
        } else {
            Wave::Rarefaction
        }
    }

    /// Shock speed from mass conservation across the jump.
    fn shock_speed(&self, outer: FluidState) -> f64 {
        let star = self.star;
        (star.rho * star.u - outer.rho * outer.u) / (star.rho - outer.rho)
    }

    /// Left shock speed, if the left wave is a shock.
    pub fn left_shock_speed(&self) -> Option<f64> {
        (self.left_wave() == Wave::Shock).then(|| self.shock_speed(self.left))
    }

    pub fn right_shock_speed(&self) -> Option<f64> {
        (self.right_wave() == Wave::Shock).then(|| self.shock_speed(self.right))
    }

    /// State at similarity coordinate `xi = (x - x0) / t`.
    pub fn sample(&self, xi: f64) -> FluidState {
        let (eos, g) = (self.eos, self.eos.gamma);
        let star = self.star;
        if xi <= star.u {
            let l = self.left;
            match self.left_wave() {
                Wave::Shock => {
                    if xi < self.shock_speed(l) {
                        l
                    } else {
                        star
                    }
                }
                Wave::Rarefaction => {
                    let (cl, cs) = (eos.c(l.rho), eos.c(star.rho));
                    if xi <= l.u - cl {
                        l
                    } else if xi >= star.u - cs {
                        star
                    } else {
                        let c = 2.0 / (g + 1.0) * cl + (g - 1.0) / (g + 1.0) * (l.u - xi);
                        FluidState {
                            rho: l.rho * (c / cl).powf(2.0 / (g - 1.0)),
                            u: xi + c,
                        }
                    }
                }
            }
        } else {
            let r = self.right;
            match self.right_wave() {
                Wave::Shock => {
                    if xi > self.shock_speed(r) {
                        r
                    } else {
                        star
                    }
                }
                Wave::Rarefaction => {
                    let (cr, cs) = (eos.c(r.rho), eos.c(star.rho));
                    if xi >= r.u + cr {
                        r
                    } else if xi <= star.u + cs {
                        star
                    } else {
                        let c = 2.0 / (g + 1.0) * cr - (g - 1.0) / (g + 1.0) * (r.u - xi);
                        FluidState {
                            rho: r.rho * (c / cr).powf(2.0 / (g - 1.0)),
                            u: xi - c,
                        }
                    }
                }
            }
        }
    }
}

/// Density and velocity at `(x, t)` for a jump at `x0`.
pub fn riemann_reference(
    x: f64,
    t: f64,
    x0: f64,
    left: FluidState,
    right: FluidState,
    eos: Polytrope,
) -> Result<FluidState> {
    if !(t >= 0.0) {
        return Err(Error::domain("time must be non-negative"));
    }
    let solution = RiemannSolution::solve(eos, left, right)?;
    Ok(if t == 0.0 {
        if x < x0 {
            left
        } else {
            right
        }
    } else {
        solution.sample((x - x0) / t)
    })
}
