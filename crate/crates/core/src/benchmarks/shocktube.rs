//! Barotropic shock tube: equal-mass particles on `[0, 1]` with an 8:1
//! density jump, free ends, adaptive `h_i = eta m_i / rho_i`.

use serde::{Deserialize, Serialize};

use super::riemann::{FluidState, Polytrope, RiemannSolution};
use crate::error::{Error, Result};
use crate::init::InitSpec;
use crate::integrator::{simulate, InitialDensity, SimulationConfig, SnapshotSeries};
use crate::kernels::{Dimension, KernelFamily, KernelSpec};
use crate::sph::{
    DensityMode, EosSpec, ForceConfig, MassFluxParams, NeighborSearch, PairSmoothing, ParticleState,
    SmoothingMode, SoundSpeed, Theta, ViscosityParams,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShockTubeConfig {
    pub n: usize,
    pub rho_left: f64,
    pub rho_right: f64,
    pub x_jump: f64,
    pub domain: [f64; 2],
    pub gamma: f64,
    /// Polytropic constant; `None` picks `K` so the left sound speed is 1.
    pub k: Option<f64>,
    pub kernel: KernelFamily,
    pub theta: Theta,
    pub eta: f64,
    pub t_final: f64,
    pub samples: usize,
    /// Courant number against the initial minimum `h` and left sound speed.
    pub courant: f64,
    pub viscosity: Option<ViscosityParams>,
    pub mass_flux: Option<MassFluxParams>,
    pub density_mode: DensityMode,
    /// Continuity mode: start from the piecewise-constant profile instead
    /// of the summation estimate.
    pub initial_density: InitialDensity,
    pub pair_smoothing: PairSmoothing,
    pub search: NeighborSearch,
}

impl Default for ShockTubeConfig {
    fn default() -> Self {
        ShockTubeConfig {
            n: 450,
            rho_left: 1.0,
            rho_right: 0.125,
            x_jump: 0.5,
            domain: [0.0, 1.0],
            gamma: 1.4,
            k: None,
            kernel: KernelFamily::CubicSpline,
            theta: Theta::One,
            eta: 1.2,
            t_final: 0.2,
            samples: 10,
            courant: 0.2,
            viscosity: Some(ViscosityParams {
                alpha: 1.0,
                beta: 2.0,
                sound_speed: SoundSpeed::FromEos,
            }),
            mass_flux: Some(MassFluxParams { alpha: 0.1, beta: 0.0 }),
            density_mode: DensityMode::Continuity,
            initial_density: InitialDensity::Summation,
            pair_smoothing: PairSmoothing::Average,
            search: NeighborSearch::CellGrid,
        }
    }
}

impl ShockTubeConfig {
    pub fn polytrope(&self) -> Polytrope {
        let k = self
            .k
            .unwrap_or_else(|| 1.0 / (self.gamma * self.rho_left.powf(self.gamma - 1.0)));
        Polytrope { k, gamma: self.gamma }
    }

    pub fn init_spec(&self) -> InitSpec {
        InitSpec::Segment1D {
            n: self.n,
            rho_left: self.rho_left,
            rho_right: self.rho_right,
            x_jump: self.x_jump,
            domain: self.domain,
        }
    }

    /// Initial particles with `h_i = eta m_i / rho_0(x_i)`.
    pub fn initial_state(&self) -> Result<ParticleState> {
        let mut state = self.init_spec().build()?;
        for h in &mut state.smoothing_lengths {
            *h *= self.eta;
        }
        Ok(state)
    }

    /// Time step dividing the snapshot interval, at most
    /// `courant * h_min / c_max`.
    pub fn dt(&self) -> Result<f64> {
        if !(self.t_final > 0.0) || self.samples == 0 || !(self.courant > 0.0) {
            return Err(Error::config("shock tube needs t_final, samples and courant > 0"));
        }
        let eos = self.polytrope();
        let state = self.initial_state()?;
        let h_min = state.smoothing_lengths.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let c_max = eos.c(self.rho_left).max(eos.c(self.rho_right));
        let interval = self.t_final / self.samples as f64;
        let steps = (interval * c_max / (self.courant * h_min)).ceil().max(1.0);
        Ok(interval / steps)
    }

    pub fn simulation_config(&self) -> Result<SimulationConfig> {
        let eos = self.polytrope();
        let mut force = ForceConfig::conservative(self.theta);
        force.viscosity = self.viscosity;
        force.density_mode = self.density_mode;
        force.pair_smoothing = self.pair_smoothing;
        force.mass_flux = self.mass_flux;
        Ok(SimulationConfig {
            dt: self.dt()?,
            t_final: self.t_final,
            snapshot_times: SimulationConfig::uniform_grid(self.t_final, self.samples),
            force,
            kernel: KernelSpec::new(self.kernel, Dimension::One),
            eos: EosSpec::Polytropic { k: eos.k, gamma: eos.gamma },
            h_mode: SmoothingMode::AdaptiveMassDensity { eta: self.eta },
            search: self.search,
            initial_density: self.initial_density,
        })
    }

    pub fn reference(&self) -> Result<RiemannSolution> {
        RiemannSolution::solve(
            self.polytrope(),
            FluidState { rho: self.rho_left, u: 0.0 },
            FluidState { rho: self.rho_right, u: 0.0 },
        )
    }
}

pub fn run_shocktube(config: &ShockTubeConfig) -> Result<SnapshotSeries> {
    simulate(&config.simulation_config()?, config.initial_state()?)
}

/// `sum_i (m_i / rho_i) |rho_i - rho_ref(x_i, t)|` over particles with
/// `x_i` in `window`: the particle-volume quadrature of the L1 density
/// error.
pub fn l1_density_error(
    state: &ParticleState,
    time: f64,
    config: &ShockTubeConfig,
    window: [f64; 2],
) -> Result<f64> {
    state.check_densities()?;
    let reference = config.reference()?;
    Ok(state
        .positions
        .iter()
        .zip(&state.masses)
        .zip(&state.densities)
        .filter(|((x, _), _)| x.x >= window[0] && x.x <= window[1])
        .map(|((x, &m), &rho)| {
            let exact = if time > 0.0 {
                reference.sample((x.x - config.x_jump) / time).rho
            } else if x.x < config.x_jump {
                config.rho_left
            } else {
                config.rho_right
            };
            m / rho * (rho - exact).abs()
        })
        .sum())
}
