use rayon::prelude::*;

use super::{
    EosSpec, ForceConfig, MassFluxParams, Neighborhood, NeighborSearch, PairSmoothing,
    ParticleState, SoundSpeed, Theta, ViscosityParams,
};
use crate::error::Result;
use crate::kernels::KernelSpec;
use crate::vector::Vec2;

/// Softening of the viscous `mu_ij` denominator, in units of h^2.
const VISCOSITY_EPS: f64 = 0.01;

/// Kernel, pair-smoothing rule and neighbor strategy shared by all
/// per-particle sums.
///
/// Each output entry `i` is a sequential sum over `i`'s candidates in
/// ascending index order, so results do not depend on the thread count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphContext {
    pub kernel: KernelSpec,
    pub pairing: PairSmoothing,
    pub search: NeighborSearch,
}

fn per_particle<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

impl SphContext {
    pub fn new(kernel: KernelSpec) -> Self {
        SphContext {
            kernel,
            pairing: PairSmoothing::Gather,
            search: NeighborSearch::CellGrid,
        }
    }

    pub fn with_search(mut self, search: NeighborSearch) -> Self {
        self.search = search;
        self
    }

    pub fn with_pairing(mut self, pairing: PairSmoothing) -> Self {
        self.pairing = pairing;
        self
    }

    pub fn neighborhood(&self, state: &ParticleState) -> Neighborhood {
        let radius = self.kernel.support_radius(state.max_smoothing_length());
        Neighborhood::build(&state.positions, radius, self.search)
    }

    /// `rho_i = sum_j m_j W_h(x_i - x_j)`, self term included.
    pub fn estimate_density(&self, state: &ParticleState) -> Vec<f64> {
        self.estimate_density_with(state, &self.neighborhood(state))
    }

    pub fn estimate_density_with(&self, state: &ParticleState, nb: &Neighborhood) -> Vec<f64> {
        let (x, m, h) = (&state.positions, &state.masses, &state.smoothing_lengths);
        per_particle(state.len(), |i| {
            let mut rho = 0.0;
            for j in nb.candidates(i) {
                let hij = self.pairing.pair_h(h[i], h[j]);
                rho += m[j] * self.kernel.w(x[i] - x[j], hij);
            }
            rho
        })
    }

    pub fn theta_acceleration(
        &self,
        state: &ParticleState,
        eos: &EosSpec,
        theta: Theta,
    ) -> Result<Vec<Vec2>> {
        self.theta_acceleration_with(state, eos, theta, &self.neighborhood(state))
    }

    pub fn theta_acceleration_with(
        &self,
        state: &ParticleState,
        eos: &EosSpec,
        theta: Theta,
        nb: &Neighborhood,
    ) -> Result<Vec<Vec2>> {
        state.check_densities()?;
        let f: Vec<f64> = state
            .densities
            .iter()
            .map(|&rho| match theta {
                Theta::One => eos.p(rho) / (rho * rho),
                Theta::Zero => eos.dp_drho(rho) / rho,
            })
            .collect();
        let (x, m, h) = (&state.positions, &state.masses, &state.smoothing_lengths);
        Ok(per_particle(state.len(), |i| {
            let mut sum = Vec2::ZERO;
            match theta {
                Theta::One => {
                    for j in nb.candidates(i) {
                        if j == i {
                            continue;
                        }
                        let g = self.kernel.grad_w(x[i] - x[j], self.pairing.pair_h(h[i], h[j]));
                        sum += g.scale(m[j] * (f[i] + f[j]));
                    }
                    -sum
                }
                Theta::Zero => {
                    for j in nb.candidates(i) {
                        if j == i {
                            continue;
                        }
                        let g = self.kernel.grad_w(x[i] - x[j], self.pairing.pair_h(h[i], h[j]));
                        sum += g.scale(m[j]);
                    }
                    -sum.scale(f[i])
                }
            }
        }))
    }

    fn sound_speeds(state: &ParticleState, eos: &EosSpec, sound: SoundSpeed) -> Vec<f64> {
        match sound {
            SoundSpeed::FromEos => state.densities.iter().map(|&rho| eos.c(rho)).collect(),
            SoundSpeed::Constant { c } => vec![c; state.len()],
        }
    }

    /// Monaghan viscosity: for approaching pairs (`v_ij . x_ij < 0`)
    ///
    /// ```text
    /// mu_ij = h v_ij . x_ij / (|x_ij|^2 + 0.01 h^2)
    /// Pi_ij = (-alpha cbar_ij mu_ij + beta mu_ij^2) / rhobar_ij
    /// a_i   = -sum_j m_j Pi_ij grad W_ij
    /// ```
    pub fn artificial_viscosity_acceleration(
        &self,
        state: &ParticleState,
        eos: &EosSpec,
        params: &ViscosityParams,
    ) -> Result<Vec<Vec2>> {
        self.artificial_viscosity_acceleration_with(state, eos, params, &self.neighborhood(state))
    }

    pub fn artificial_viscosity_acceleration_with(
        &self,
        state: &ParticleState,
        eos: &EosSpec,
        params: &ViscosityParams,
        nb: &Neighborhood,
    ) -> Result<Vec<Vec2>> {
        state.check_densities()?;
        let c = Self::sound_speeds(state, eos, params.sound_speed);
        let (x, v, m, h, rho) = (
            &state.positions,
            &state.velocities,
            &state.masses,
            &state.smoothing_lengths,
            &state.densities,
        );
        let (alpha, beta) = (params.alpha, params.beta);
        Ok(per_particle(state.len(), |i| {
            let mut sum = Vec2::ZERO;
            for j in nb.candidates(i) {
                if j == i {
                    continue;
                }
                let xij = x[i] - x[j];
                let vr = (v[i] - v[j]).dot(xij);
                if vr >= 0.0 {
                    continue;
                }
                let hij = self.pairing.pair_h(h[i], h[j]);
                let mu = hij * vr / (xij.norm_squared() + VISCOSITY_EPS * hij * hij);
                let cbar = 0.5 * (c[i] + c[j]);
                let rhobar = 0.5 * (rho[i] + rho[j]);
                let pi = (-alpha * cbar * mu + beta * mu * mu) / rhobar;
                sum += self.kernel.grad_w(xij, hij).scale(m[j] * pi);
            }
            -sum
        }))
    }

    /// Density diffusion
    ///
    /// ```text
    /// D_i = -sum_j (m_j / rho_j) v_sig (rho_i - rho_j) |grad W_ij|
    /// v_sig = alpha cbar_ij + beta |v_ij . x_ij| / |x_ij|
    /// ```
    ///
    /// The pair terms are antisymmetric after weighting by `m_i / rho_i`, so
    /// `sum_i (m_i / rho_i) D_i = 0`.
    pub fn mass_flux_correction(
        &self,
        state: &ParticleState,
        eos: &EosSpec,
        params: &MassFluxParams,
    ) -> Result<Vec<f64>> {
        self.mass_flux_correction_with(state, eos, params, &self.neighborhood(state))
    }

    pub fn mass_flux_correction_with(
        &self,
        state: &ParticleState,
        eos: &EosSpec,
        params: &MassFluxParams,
        nb: &Neighborhood,
    ) -> Result<Vec<f64>> {
        state.check_densities()?;
        let c = Self::sound_speeds(state, eos, SoundSpeed::FromEos);
        let (x, v, m, h, rho) = (
            &state.positions,
            &state.velocities,
            &state.masses,
            &state.smoothing_lengths,
            &state.densities,
        );
        Ok(per_particle(state.len(), |i| {
            let mut sum = 0.0;
            for j in nb.candidates(i) {
                if j == i {
                    continue;
                }
                let xij = x[i] - x[j];
                let grad = self.kernel.grad_w(xij, self.pairing.pair_h(h[i], h[j]));
                let r = xij.norm();
                let radial = if r > 0.0 { (v[i] - v[j]).dot(xij).abs() / r } else { 0.0 };
                let vsig = params.alpha * 0.5 * (c[i] + c[j]) + params.beta * radial;
                sum += m[j] / rho[j] * vsig * (rho[i] - rho[j]) * grad.norm();
            }
            -sum
        }))
    }

    /// `d rho_i / dt = sum_j m_j (v_i - v_j) . grad W(x_i - x_j)`.
    pub fn continuity_density_rate(&self, state: &ParticleState) -> Result<Vec<f64>> {
        self.continuity_density_rate_with(state, &self.neighborhood(state))
    }

    pub fn continuity_density_rate_with(
        &self,
        state: &ParticleState,
        nb: &Neighborhood,
    ) -> Result<Vec<f64>> {
        let (x, v, m, h) = (
            &state.positions,
            &state.velocities,
            &state.masses,
            &state.smoothing_lengths,
        );
        Ok(per_particle(state.len(), |i| {
            let mut sum = 0.0;
            for j in nb.candidates(i) {
                if j == i {
                    continue;
                }
                let g = self.kernel.grad_w(x[i] - x[j], self.pairing.pair_h(h[i], h[j]));
                sum += m[j] * (v[i] - v[j]).dot(g);
            }
            sum
        }))
    }

    /// Hydrodynamic plus viscous plus auxiliary accelerations.
    pub fn total_acceleration_with(
        &self,
        state: &ParticleState,
        eos: &EosSpec,
        force: &ForceConfig,
        nb: &Neighborhood,
    ) -> Result<Vec<Vec2>> {
        let mut acc = self.theta_acceleration_with(state, eos, force.theta, nb)?;
        if let Some(params) = &force.viscosity {
            let visc = self.artificial_viscosity_acceleration_with(state, eos, params, nb)?;
            for (a, b) in acc.iter_mut().zip(visc) {
                *a += b;
            }
        }
        if force.has_auxiliary() {
            for (a, b) in acc.iter_mut().zip(auxiliary_forces(state, force)) {
                *a += b;
            }
        }
        Ok(acc)
    }

    /// Density rate for continuity mode, including the mass-flux term when
    /// configured.
    pub fn total_density_rate_with(
        &self,
        state: &ParticleState,
        eos: &EosSpec,
        force: &ForceConfig,
        nb: &Neighborhood,
    ) -> Result<Vec<f64>> {
        let mut rate = self.continuity_density_rate_with(state, nb)?;
        if let Some(params) = &force.mass_flux {
            let flux = self.mass_flux_correction_with(state, eos, params, nb)?;
            for (r, f) in rate.iter_mut().zip(flux) {
                *r += f;
            }
        }
        Ok(rate)
    }
}

/// `-grad u(x_i) - nu v_i + sum_{j != i} m_j K(x_i - x_j)`.
///
/// The interaction kernel is non-local, so its sum runs over every particle.
pub fn auxiliary_forces(state: &ParticleState, config: &ForceConfig) -> Vec<Vec2> {
    let (x, v, m) = (&state.positions, &state.velocities, &state.masses);
    per_particle(state.len(), |i| {
        let mut a = Vec2::ZERO;
        if let Some(u) = &config.external_potential {
            a -= u.gradient(x[i]);
        }
        if let Some(nu) = config.friction {
            a -= v[i].scale(nu);
        }
        if let Some(k) = &config.interaction_kernel {
            let mut s = Vec2::ZERO;
            for j in 0..state.len() {
                if j != i {
                    s += k.eval(x[i] - x[j]).scale(m[j]);
                }
            }
            a += s;
        }
        a
    })
}
