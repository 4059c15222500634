//! Run configuration, read from TOML.
//!
//! ```toml
//! scales = [0.125, 0.25]
//! pipelines = ["direct", "composed", "diagnostics"]
//! output = "out"
//!
//! [hamiltonian]
//! kind = "radial"
//! profile = "ring_well"      # or radii / values / tail_slope
//! dim = 2
//!
//! [potential]
//! kind = "sine_product"
//!
//! [grid]
//! points = 32
//!
//! [pgrid]
//! radius = 1.0
//! samples = 21
//!
//! [solver]
//! window = 2.0
//! initial = "cos_sin"
//!
//! [diagnostics]
//! level_tolerance = 0.02
//! p = [0.0, 0.0]
//! lambdas = [0.1, 0.05, 0.025]
//! ```

use std::path::{Path, PathBuf};

use effham::effective::PGrid;
use effham::hamlib::{catalog, HamiltonianSpec, PotentialKind, PotentialSpec, RadialProfile};
use effham::hjsolver::SolverConfig;
use effham::TorusGrid;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_err, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianConfig {
    /// `φ(|p|)` from a catalog name or explicit knots.
    Radial {
        dim: usize,
        #[serde(default)]
        profile: Option<String>,
        #[serde(default)]
        radii: Option<Vec<f64>>,
        #[serde(default)]
        values: Option<Vec<f64>>,
        #[serde(default)]
        tail_slope: Option<f64>,
        /// Accept the relaxed valley ordering when decomposing.
        #[serde(default)]
        relaxed: bool,
    },
    DoubleWell {
        offset: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    SineProduct,
    SineSquares,
    AsymSine,
    Triangle { c0: f64, apex: f64 },
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Direct,
    Composed,
    Duality,
    Diagnostics,
    Discount,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PGridConfig {
    pub radius: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    pub level_tolerance: f64,
    /// Value band defining the minimum set in the flat-part check.
    pub flat_tolerance: f64,
    /// One-sided slack in the large-scale limit comparison.
    pub eps_num: f64,
    pub discount_tolerance: f64,
    /// Momentum for discounted runs; the origin when absent.
    pub p: Option<Vec<f64>>,
    pub lambdas: Vec<f64>,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            level_tolerance: effham::diagnose::DEFAULT_TOLERANCE,
            flat_tolerance: 1e-3,
            eps_num: 2e-2,
            discount_tolerance: 5e-2,
            p: None,
            lambdas: vec![0.1, 0.05, 0.025],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub hamiltonian: HamiltonianConfig,
    pub potential: PotentialConfig,
    #[serde(default = "default_scales")]
    pub scales: Vec<f64>,
    pub grid: GridConfig,
    pub pgrid: PGridConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_pipelines")]
    pub pipelines: Vec<Pipeline>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
}

fn default_scales() -> Vec<f64> {
    vec![0.0]
}

fn default_pipelines() -> Vec<Pipeline> {
    vec![Pipeline::Direct]
}

/// A parsed config together with the SHA-256 of its source text.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub hash: String,
}

impl LoadedConfig {
    pub fn from_str(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        let hash = Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        Ok(Self { config, hash })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_str(&text)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        self.hamiltonian()?;
        if self.scales.is_empty() {
            return Err(CliError::Config("scales must not be empty".into()));
        }
        for &s in &self.scales {
            self.potential(s)?;
        }
        self.torus()?;
        self.p_grid()?;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match &self.hamiltonian {
            HamiltonianConfig::Radial { dim, .. } => *dim,
            HamiltonianConfig::DoubleWell { offset } => offset.len(),
        }
    }

    pub fn profile(&self) -> Result<Option<RadialProfile>> {
        let HamiltonianConfig::Radial { profile, radii, values, tail_slope, .. } = &self.hamiltonian else {
            return Ok(None);
        };
        match (profile, radii, values, tail_slope) {
            (Some(name), None, None, None) => catalog::profile(name).map(Some).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown profile '{name}', expected one of {}",
                    catalog::PROFILE_NAMES.join(", ")
                ))
            }),
            (None, Some(r), Some(v), Some(t)) => Ok(Some(RadialProfile::new(r.clone(), v.clone(), *t)?)),
            _ => Err(CliError::Config(
                "a radial Hamiltonian needs either `profile` or all of `radii`, `values`, `tail_slope`".into(),
            )),
        }
    }

    pub fn relaxed(&self) -> bool {
        matches!(self.hamiltonian, HamiltonianConfig::Radial { relaxed: true, .. })
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianSpec> {
        match &self.hamiltonian {
            HamiltonianConfig::Radial { dim, .. } => {
                let profile = self.profile()?.expect("radial");
                Ok(HamiltonianSpec::radial(profile, *dim)?)
            }
            HamiltonianConfig::DoubleWell { offset } => Ok(HamiltonianSpec::double_well(offset.clone())?),
        }
    }

    pub fn potential(&self, scale: f64) -> Result<PotentialSpec> {
        let dim = self.dim();
        let spec = match &self.potential {
            PotentialConfig::SineProduct => PotentialSpec::new(PotentialKind::SineProduct, scale, dim)?,
            PotentialConfig::SineSquares => PotentialSpec::new(PotentialKind::SineSquares, scale, dim)?,
            PotentialConfig::AsymSine => PotentialSpec::new(PotentialKind::AsymSine, scale, dim)?,
            PotentialConfig::Triangle { c0, apex } => PotentialSpec::triangle(*c0, *apex, scale)?,
            PotentialConfig::Zero => PotentialSpec::zero(dim),
        };
        if spec.dim != dim {
            return Err(CliError::Config(format!(
                "potential is {}-dimensional but the Hamiltonian is {dim}-dimensional",
                spec.dim
            )));
        }
        Ok(spec)
    }

    pub fn torus(&self) -> Result<TorusGrid> {
        Ok(TorusGrid::new(self.dim(), self.grid.points)?)
    }

    pub fn p_grid(&self) -> Result<PGrid> {
        Ok(PGrid::new(self.dim(), self.pgrid.radius, self.pgrid.samples)?)
    }

    pub fn has(&self, pipeline: Pipeline) -> bool {
        self.pipelines.contains(&pipeline)
    }
}
