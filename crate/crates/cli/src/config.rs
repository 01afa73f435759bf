//! Run configuration: a TOML file with `geometry`, `params`, `data`,
//! `discretization` and `study` sections, every key optional.

use std::path::{Path, PathBuf};

use bwkb::data::{random_data, ProblemData, RandomDataOptions};
use bwkb::geometry::SlabGeometry;
use bwkb::grids::Discretization;
use bwkb::params::PhysicalParams;
use bwkb::verify::{StudyPreset, REMAINDER_EPS};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometrySection,
    pub params: ParamsSection,
    pub data: DataSection,
    pub discretization: DiscretizationSection,
    pub study: StudySection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    /// Period `L` in `x`.
    pub period: f64,
    /// Top fluid strip thickness `a`.
    pub fluid_top: f64,
    /// Porous strip thickness `b`.
    pub porous: f64,
    /// Bottom fluid strip thickness `c`.
    pub fluid_bottom: f64,
}

impl Default for GeometrySection {
    fn default() -> Self {
        let g = StudyPreset::default().geometry;
        GeometrySection {
            period: g.period,
            fluid_top: g.fluid_top,
            porous: g.porous,
            fluid_bottom: g.fluid_bottom,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsSection {
    pub kappa: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        let p = StudyPreset::default().params;
        ParamsSection {
            kappa: p.kappa,
            mu: p.mu,
            alpha: p.alpha,
            beta: p.beta,
        }
    }
}

/// Source of the problem data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataKind {
    /// Smooth random exponential-polynomial data from `seed`.
    #[default]
    Random,
    /// Data generated from stream-function manufactured fields (ε-dependent;
    /// `solve` only).
    Manufactured,
    /// All data zero.
    Zero,
    /// Explicit Fourier coefficients from the JSON file at `path`.
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub kind: DataKind,
    pub seed: u64,
    /// Largest |k| carrying data (random and manufactured kinds).
    pub active_modes: usize,
    pub terms: usize,
    pub amplitude: f64,
    pub path: Option<PathBuf>,
}

impl Default for DataSection {
    fn default() -> Self {
        let o = RandomDataOptions::default();
        DataSection {
            kind: DataKind::Random,
            seed: StudyPreset::default().seed,
            active_modes: o.active_modes,
            terms: o.terms,
            amplitude: o.amplitude,
            path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscretizationSection {
    /// Fourier modes `-n_modes..=n_modes`.
    pub n_modes: usize,
    /// Chebyshev points per strip.
    pub n_points: usize,
    /// Porous point count factor `c` in `c·√A + 8` with `A = (b/2)√(κ/ε)`.
    pub layer_factor: f64,
}

impl Default for DiscretizationSection {
    fn default() -> Self {
        let d = StudyPreset::default().discretization;
        DiscretizationSection {
            n_modes: d.modes.n_max,
            n_points: d.n_points,
            layer_factor: d.layer_factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudySection {
    /// Strictly decreasing ε values of the convergence and energy studies.
    pub eps_list: Vec<f64>,
    /// ε of `solve` and `mms`.
    pub eps: f64,
    /// Truncation orders of `converge`.
    pub orders: Vec<usize>,
    /// Expansion order of `expand`.
    pub order: usize,
    /// Point-count factor of the grid-refinement check in `converge` (0 disables it).
    pub refine: f64,
}

impl Default for StudySection {
    fn default() -> Self {
        StudySection {
            eps_list: REMAINDER_EPS.to_vec(),
            eps: 0.1,
            orders: vec![2, 3, 4],
            order: 4,
            refine: 0.0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| CliError::ConfigParse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut cfg = cfg;
        if let Some(p) = &cfg.data.path {
            if p.is_relative() {
                cfg.data.path = Some(base.join(p));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.geometry()?;
        self.params()?;
        let d = &self.discretization;
        if d.n_modes == 0 || d.n_points < 8 || d.layer_factor.is_nan() || d.layer_factor <= 0.0 {
            return Err(CliError::Config(
                "discretization needs n_modes ≥ 1, n_points ≥ 8 and a positive layer_factor".into(),
            ));
        }
        if self.data.kind == DataKind::File {
            let p = self
                .data
                .path
                .as_ref()
                .ok_or_else(|| CliError::Config("data kind \"file\" needs a path".into()))?;
            if !p.exists() {
                return Err(CliError::Config(format!(
                    "data file {} does not exist",
                    p.display()
                )));
            }
        }
        Ok(())
    }

    pub fn geometry(&self) -> CliResult<SlabGeometry> {
        let g = &self.geometry;
        Ok(SlabGeometry::new(
            g.period,
            g.fluid_top,
            g.porous,
            g.fluid_bottom,
        )?)
    }

    pub fn params(&self) -> CliResult<PhysicalParams> {
        let p = &self.params;
        let params = PhysicalParams {
            kappa: p.kappa,
            mu: p.mu,
            alpha: p.alpha,
            beta: p.beta,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn discretization(&self) -> Discretization {
        let d = &self.discretization;
        Discretization {
            layer_factor: d.layer_factor,
            ..Discretization::new(d.n_modes, d.n_points)
        }
    }

    /// ε-independent problem data; manufactured data are rejected here.
    pub fn fixed_data(&self) -> CliResult<ProblemData> {
        let modes = self.discretization().modes;
        let data = match self.data.kind {
            DataKind::Random => random_data(
                self.data.seed,
                modes,
                RandomDataOptions {
                    active_modes: self.data.active_modes,
                    terms: self.data.terms,
                    amplitude: self.data.amplitude,
                },
            ),
            DataKind::Zero => ProblemData::zero(modes),
            DataKind::File => {
                let path = self.data.path.as_ref().expect("validated");
                let text =
                    std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
                        path: path.clone(),
                        source,
                    })?;
                let data: ProblemData =
                    serde_json::from_str(&text).map_err(|e| CliError::ConfigParse {
                        path: path.clone(),
                        message: e.to_string(),
                    })?;
                if data.modes != modes {
                    return Err(CliError::Config(format!(
                        "data file {} holds modes up to {} but n_modes is {}",
                        path.display(),
                        data.modes.n_max,
                        modes.n_max
                    )));
                }
                data
            }
            DataKind::Manufactured => {
                return Err(CliError::Config(
                    "manufactured data depend on ε and are only accepted by `solve` and `mms`"
                        .into(),
                ))
            }
        };
        data.validate()?;
        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_data_resolve_relative_to_the_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig::default();
        let data = random_data(3, cfg.discretization().modes, RandomDataOptions::default());
        std::fs::write(
            dir.path().join("data.json"),
            serde_json::to_string(&data).unwrap(),
        )
        .unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "[data]\nkind = \"file\"\npath = \"data.json\"\n").unwrap();
        let loaded = RunConfig::load(&path).unwrap();
        assert_eq!(loaded.fixed_data().unwrap(), data);
    }

    #[test]
    fn file_data_with_other_modes_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let data = ProblemData::zero(bwkb::fourier::ModeSet::new(2));
        std::fs::write(
            dir.path().join("data.json"),
            serde_json::to_string(&data).unwrap(),
        )
        .unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "[data]\nkind = \"file\"\npath = \"data.json\"\n").unwrap();
        let err = RunConfig::load(&path).unwrap().fixed_data().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn empty_config_is_the_default() {
        assert_eq!(
            toml::from_str::<RunConfig>("").unwrap(),
            RunConfig::default()
        );
    }
}
