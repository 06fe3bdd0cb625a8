//! Initial particle systems built by partitioning the domain into cells and
//! giving each particle the mass of its cell, `m_i = rho_0(x_i) V_i`. The
//! stored densities are the prescribed `rho_0(x_i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::Dimension;
use crate::sph::ParticleState;
use crate::vector::Vec2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VelocityField {
    #[default]
    Rest,
    /// `v = (-a x, a y)`: incompressible strain stretching along y.
    Shear { amplitude: f64 },
}

impl VelocityField {
    pub fn at(&self, x: Vec2) -> Vec2 {
        match *self {
            VelocityField::Rest => Vec2::ZERO,
            VelocityField::Shear { amplitude } => Vec2::new(-amplitude * x.x, amplitude * x.y),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitSpec {
    /// Square lattice clipped to a disc centered at the origin.
    ///
    /// The lattice has `sites_per_diameter` sites across the bounding
    /// square of side `2 radius`, at cell centers, so the spacing is
    /// `2 radius / sites_per_diameter`.
    LatticeDisc {
        sites_per_diameter: u32,
        radius: f64,
        rho0: f64,
        #[serde(default)]
        velocity: VelocityField,
    },
    /// Equal-mass particles on `[a, b]` with a density jump at `x_jump`.
    Segment1D {
        n: usize,
        rho_left: f64,
        rho_right: f64,
        x_jump: f64,
        domain: [f64; 2],
    },
}

impl InitSpec {
    pub fn build(&self) -> Result<ParticleState> {
        match self {
            InitSpec::LatticeDisc { .. } => lattice_disc(self),
            InitSpec::Segment1D { .. } => segment_partition_equal_mass(self),
        }
    }
}

/// Lattice-disc particles. Membership `|x| <= radius` is decided in
/// integers: site offsets are `(2i + 1 - l) radius / l`, so the test is
/// `a^2 + b^2 <= l^2` with no rounding.
pub fn lattice_disc(spec: &InitSpec) -> Result<ParticleState> {
    let InitSpec::LatticeDisc {
        sites_per_diameter: l,
        radius,
        rho0,
        velocity,
    } = *spec
    else {
        return Err(Error::Init("expected a lattice-disc spec".into()));
    };
    if l < 1 {
        return Err(Error::Init("lattice needs at least one site per diameter".into()));
    }
    if !(radius > 0.0) || !(rho0 > 0.0) {
        return Err(Error::Init("radius and density must be positive".into()));
    }
    let l = l as i64;
    let spacing = 2.0 * radius / l as f64;
    let coord = |i: i64| -> (i64, f64) {
        let a = 2 * i + 1 - l;
        (a, a as f64 * radius / l as f64)
    };

    let mut positions = Vec::new();
    for i in 0..l {
        let (a, x) = coord(i);
        for j in 0..l {
            let (b, y) = coord(j);
            if a * a + b * b <= l * l {
                positions.push(Vec2::new(x, y));
            }
        }
    }
    if positions.is_empty() {
        return Err(Error::Init("no lattice site falls inside the disc".into()));
    }
    let n = positions.len();
    let velocities = positions.iter().map(|&x| velocity.at(x)).collect();
    let mut state = ParticleState::new(
        Dimension::Two,
        positions,
        velocities,
        vec![rho0 * spacing * spacing; n],
        vec![spacing; n],
    )?;
    state.densities = vec![rho0; n];
    Ok(state)
}

/// Equal-mass 1D partition. Each particle sits at the center, in mass
/// coordinate, of a cell holding mass `M / n`; the cell width is `m / rho`
/// on either side of the jump.
pub fn segment_partition_equal_mass(spec: &InitSpec) -> Result<ParticleState> {
    let InitSpec::Segment1D {
        n,
        rho_left,
        rho_right,
        x_jump,
        domain: [a, b],
    } = *spec
    else {
        return Err(Error::Init("expected a 1D segment spec".into()));
    };
    if n < 2 {
        return Err(Error::Init("segment needs at least two particles".into()));
    }
    if !(rho_left > 0.0) || !(rho_right > 0.0) {
        return Err(Error::Init("densities must be positive".into()));
    }
    if !(a < x_jump && x_jump < b) {
        return Err(Error::Init("jump must lie strictly inside the domain".into()));
    }
    let mass_left = rho_left * (x_jump - a);
    let total = mass_left + rho_right * (b - x_jump);
    let m = total / n as f64;

    let mut positions = Vec::with_capacity(n);
    let mut widths = Vec::with_capacity(n);
    let mut densities = Vec::with_capacity(n);
    for k in 0..n {
        let s = (k as f64 + 0.5) * m;
        let (x, rho) = if s <= mass_left {
            (a + s / rho_left, rho_left)
        } else {
            (x_jump + (s - mass_left) / rho_right, rho_right)
        };
        positions.push(Vec2::new(x, 0.0));
        widths.push(m / rho);
        densities.push(rho);
    }
    let left = positions.iter().filter(|p| p.x < x_jump).count();
    if left == 0 || left == n {
        return Err(Error::Init(format!(
            "{n} particles cannot resolve both sides of the jump"
        )));
    }
    let mut state =
        ParticleState::new(Dimension::One, positions, vec![Vec2::ZERO; n], vec![m; n], widths)?;
    state.densities = densities;
    Ok(state)
}

/// Copy of `state` with masses scaled to unit total. Only measure exports
/// use this; the dynamics keep physical masses.
pub fn normalize_total_mass(state: &ParticleState) -> Result<ParticleState> {
    let total = state.total_mass();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::domain("total mass must be positive"));
    }
    let mut out = state.clone();
    for m in &mut out.masses {
        *m /= total;
    }
    Ok(out)
}
