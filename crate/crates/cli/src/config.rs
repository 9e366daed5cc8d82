//! TOML run configuration.
//!
//! ```toml
//! system = "burgers"
//! seed = 0
//! output_dir = "runs/shock"        # optional
//!
//! [grid]
//! x_min = -1.0
//! x_max = 1.0
//! cells = 1024
//!
//! [data]
//! kind = "riemann"
//! left = [0.8]
//! right = [-0.4]
//!
//! [solve]
//! epsilon = 0.01
//! t_end = 0.3
//!
//! [study]
//! name = "vanishing-viscosity"
//! epsilons = [0.04, 0.02, 0.01]
//! t_star = 0.3
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use temple_core::estimates::{
    BvOptions, ContinuityOptions, ConvergenceOptions, DecayOptions, InitialData, PropagationOptions, StabilityOptions,
    TransversalOptions,
};
use temple_core::system::{self, SystemSpec};
use temple_core::viscous::SolveConfig;
use temple_core::{GridField, LabError, Result};

pub const MIN_CELLS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    /// Number of nodes, end points included.
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Bundled name or path to a system file.
    pub system: String,
    pub grid: GridSpec,
    #[serde(default)]
    pub data: Option<InitialData>,
    pub solve: SolveConfig,
    #[serde(default)]
    pub study: Option<StudySpec>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> usize {
    100
}
fn default_theta_count() -> usize {
    8
}
fn default_half() -> f64 {
    0.5
}
fn default_delta() -> f64 {
    1e-4
}
fn default_factor() -> f64 {
    5.0
}
fn default_transversal_records() -> usize {
    200
}
fn default_order() -> f64 {
    0.8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StudySpec {
    /// Hypothesis suite on a lattice of sample states.
    Hypotheses {
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Bv {
        epsilons: Vec<f64>,
        #[serde(default)]
        options: BvOptions,
    },
    Stability {
        other: InitialData,
        #[serde(default = "default_theta_count")]
        theta_count: usize,
        #[serde(default)]
        options: StabilityOptions,
    },
    HomotopyIdentity {
        other: InitialData,
        #[serde(default = "default_half")]
        theta: f64,
        #[serde(default = "default_delta")]
        delta: f64,
        #[serde(default = "default_factor")]
        factor: f64,
    },
    Continuity {
        epsilons: Vec<f64>,
        time_pairs: Vec<(f64, f64)>,
        #[serde(default)]
        options: ContinuityOptions,
    },
    Propagation {
        other: InitialData,
        /// Interval outside which the two data agree.
        support: (f64, f64),
        #[serde(default)]
        options: PropagationOptions,
    },
    Transversal {
        /// One-based (slower, faster) families.
        families: (usize, usize),
        #[serde(default = "default_transversal_records")]
        records: usize,
        /// Kernel constants; measured from the run when absent.
        #[serde(default)]
        c: Option<f64>,
        #[serde(default)]
        c1: Option<f64>,
        #[serde(default)]
        options: TransversalOptions,
    },
    VanishingViscosity {
        epsilons: Vec<f64>,
        t_star: f64,
        #[serde(default)]
        options: ConvergenceOptions,
    },
    Residual {
        cells: Vec<usize>,
        t1: f64,
        #[serde(default = "default_order")]
        min_order: f64,
    },
    Decay {
        tangent: InitialData,
        #[serde(default)]
        options: DecayOptions,
    },
}

impl StudySpec {
    pub fn name(&self) -> &'static str {
        match self {
            StudySpec::Hypotheses { .. } => "hypotheses",
            StudySpec::Bv { .. } => "bv",
            StudySpec::Stability { .. } => "stability",
            StudySpec::HomotopyIdentity { .. } => "homotopy-identity",
            StudySpec::Continuity { .. } => "continuity",
            StudySpec::Propagation { .. } => "propagation",
            StudySpec::Transversal { .. } => "transversal",
            StudySpec::VanishingViscosity { .. } => "vanishing-viscosity",
            StudySpec::Residual { .. } => "residual",
            StudySpec::Decay { .. } => "decay",
        }
    }
}

fn toml_error(src: &str, e: toml::de::Error) -> LabError {
    let (line, column) = e
        .span()
        .map(|s| {
            let before = &src[..s.start.min(src.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.rfind('\n').map_or(before.len(), |p| before.len() - p - 1) + 1;
            (line, col)
        })
        .unwrap_or((0, 0));
    LabError::Parse {
        message: e.message().to_string(),
        line,
        column,
    }
}

impl RunConfig {
    /// Parses and validates a config. Relative system paths are taken
    /// relative to `base_dir`.
    pub fn parse(src: &str, base_dir: Option<&Path>) -> Result<RunConfig> {
        let mut cfg: RunConfig = toml::from_str(src).map_err(|e| toml_error(src, e))?;
        if system::bundled(&cfg.system).is_none() {
            let path = Path::new(&cfg.system);
            let path = match base_dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path.to_path_buf(),
            };
            if !path.exists() {
                return Err(LabError::Config(format!(
                    "system '{}' is neither bundled nor an existing file",
                    cfg.system
                )));
            }
            cfg.system = path.to_string_lossy().into_owned();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let src = std::fs::read_to_string(path).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
        RunConfig::parse(&src, path.parent())
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.cells < MIN_CELLS {
            return Err(LabError::Config(format!(
                "grid needs at least {MIN_CELLS} cells, got {}",
                self.grid.cells
            )));
        }
        if !self.grid.x_min.is_finite() || !self.grid.x_max.is_finite() || self.grid.x_min >= self.grid.x_max {
            return Err(LabError::Config("grid needs finite x_min < x_max".into()));
        }
        self.solve.validate()
    }

    pub fn system(&self) -> Result<SystemSpec> {
        system::resolve(&self.system)
    }

    pub fn data(&self) -> Result<&InitialData> {
        self.data
            .as_ref()
            .ok_or_else(|| LabError::Config("the run needs a [data] table".into()))
    }

    pub fn sample(&self, sys: &SystemSpec, data: &InitialData) -> Result<GridField> {
        data.sample(sys, self.grid.x_min, self.grid.x_max, self.grid.cells)
    }

    /// Samples a perturbation field: wave data are taken relative to their
    /// base state, piecewise data as given.
    pub fn sample_tangent(&self, sys: &SystemSpec, data: &InitialData) -> Result<GridField> {
        let f = self.sample(sys, data)?;
        let InitialData::Waves { base, .. } = data else {
            return Ok(f);
        };
        let base = base.clone().unwrap_or_else(|| sys.domain.from_unit(&vec![0.5; sys.n]));
        let mut f = f;
        for j in 0..f.len() {
            for (v, b) in f.at_mut(j).iter_mut().zip(&base) {
                *v -= b;
            }
        }
        Ok(f)
    }

    /// Label used for the default output directory.
    pub fn label(&self) -> String {
        let sys = Path::new(&self.system)
            .file_stem()
            .map_or_else(|| self.system.clone(), |s| s.to_string_lossy().into_owned());
        match &self.study {
            Some(s) => format!("{}-{sys}", s.name()),
            None => format!("solve-{sys}"),
        }
    }
}
