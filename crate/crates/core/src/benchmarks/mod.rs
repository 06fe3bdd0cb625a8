//! The droplet and shock-tube experiments with their reference solutions.

mod droplet;
mod riemann;
mod shocktube;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use droplet::{
    droplet_reference, droplet_reference_with, run_droplet, AxisSample, DropletConfig, DropletRun,
};
pub use riemann::{riemann_reference, FluidState, Polytrope, RiemannSolution, Wave};
pub use shocktube::{l1_density_error, run_shocktube, ShockTubeConfig};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Droplet,
    Shocktube,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Droplet => "droplet",
            Experiment::Shocktube => "shocktube",
        }
    }

    pub fn dimension(self) -> u8 {
        match self {
            Experiment::Droplet => 2,
            Experiment::Shocktube => 1,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "droplet" => Ok(Experiment::Droplet),
            "shocktube" | "shock-tube" => Ok(Experiment::Shocktube),
            _ => Err(Error::config(format!("unknown experiment '{s}'"))),
        }
    }
}
