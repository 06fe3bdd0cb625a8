use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::benchmarks::{DropletConfig, Experiment, ShockTubeConfig};
use crate::error::{Error, Result};
use crate::kernels::KernelFamily;
use crate::sph::{DensityMode, Theta};

/// One experiment at several resolutions. For the droplet a level is the
/// lattice size `l` (sites per diameter), for the shock tube the particle
/// count `N`.
///
/// ```toml
/// experiment = "shocktube"
/// levels = [18, 45, 90]
/// out = "runs/shocktube"
///
/// [shocktube]
/// t_final = 0.2
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentManifest {
    pub experiment: Experiment,
    #[serde(default)]
    pub levels: Vec<usize>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub droplet: DropletConfig,
    #[serde(default)]
    pub shocktube: ShockTubeConfig,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentManifest {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentManifest {
            experiment,
            levels: Vec::new(),
            out: default_out(),
            droplet: DropletConfig::default(),
            shocktube: ShockTubeConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn set_theta(&mut self, theta: Theta) {
        self.droplet.theta = theta;
        self.shocktube.theta = theta;
    }

    pub fn set_density_mode(&mut self, mode: DensityMode) {
        self.droplet.density_mode = mode;
        self.shocktube.density_mode = mode;
    }

    pub fn set_kernel(&mut self, kernel: KernelFamily) {
        self.droplet.kernel = kernel;
        self.shocktube.kernel = kernel;
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::config("no resolutions given"));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("resolutions must be strictly increasing"));
        }
        if self.levels[0] == 0 {
            return Err(Error::config("resolutions must be positive"));
        }
        if self.experiment == Experiment::Droplet {
            if let Some(&l) = self.levels.iter().find(|&&l| u32::try_from(l).is_err()) {
                return Err(Error::config(format!("lattice size {l} out of range")));
            }
        }
        Ok(())
    }

    /// Base name of the files for resolution `level`.
    pub fn stem(&self, level: usize) -> String {
        format!("{}-{level:05}", self.experiment.name())
    }
}
