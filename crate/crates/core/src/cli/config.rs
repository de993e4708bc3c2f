//! JSON run configuration.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::dynamics::TwoQubitAmplitudes;
use crate::geometry::{Preset, QubitSpec, RegisterState, SystemGeometry};
use crate::oracle::{KQuadratureSpec, ThermalWeight};
use crate::rates::{uniform_grid, MaterialParams, ONE_EXCITATION, TWO_EXCITATION};

use super::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_geometry")]
    pub geometry: GeometryConfig,
    #[serde(default = "default_temperatures")]
    pub temperature_ratios: Vec<f64>,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default)]
    pub time_grid: TimeGrid,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub material: Option<MaterialParams>,
}

fn default_geometry() -> GeometryConfig {
    GeometryConfig::Preset(Preset::Paper45.name().to_string())
}

fn default_temperatures() -> Vec<f64> {
    vec![0.01, 0.05, 0.1]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from(".")
}

/// A preset name, or an explicit list of qubits.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GeometryConfig {
    Preset(String),
    Qubits { qubits: Vec<QubitSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// `√p|+,-> + √(1-p)|-,+>`
    OneExcitation { p: f64 },
    /// `√p|+,+> + √(1-p)|-,->`
    TwoExcitation { p: f64 },
    /// Amplitudes `[re, im]` in the order `++, +-, -+, --`.
    Custom { amplitudes: [[f64; 2]; 4] },
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::OneExcitation { p: 0.5 }
    }
}

impl InitialState {
    pub fn name(&self) -> &'static str {
        match self {
            InitialState::OneExcitation { .. } => "one_excitation",
            InitialState::TwoExcitation { .. } => "two_excitation",
            InitialState::Custom { .. } => "custom",
        }
    }

    /// The coherence `(m, s)` and weight `p` of a one- or two-excitation state.
    pub fn sector(&self) -> Option<((RegisterState, RegisterState), f64)> {
        match *self {
            InitialState::OneExcitation { p } => Some((ONE_EXCITATION, p)),
            InitialState::TwoExcitation { p } => Some((TWO_EXCITATION, p)),
            InitialState::Custom { .. } => None,
        }
    }

    pub fn amplitudes(&self) -> crate::Result<TwoQubitAmplitudes> {
        match *self {
            InitialState::OneExcitation { p } => TwoQubitAmplitudes::one_excitation(p),
            InitialState::TwoExcitation { p } => TwoQubitAmplitudes::two_excitation(p),
            InitialState::Custom { amplitudes } => TwoQubitAmplitudes::new(amplitudes.map(|[re, im]| Complex64::new(re, im))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_n_points")]
    pub n_points: usize,
}

fn default_t_max() -> f64 {
    40.0
}

fn default_n_points() -> usize {
    4001
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { t_max: default_t_max(), n_points: default_n_points() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ThermalWeightName {
    #[default]
    Classical,
    FullCoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_k_max")]
    pub k_max: f64,
    #[serde(default = "default_panels")]
    pub panels: usize,
    #[serde(default = "default_nodes")]
    pub nodes_per_panel: usize,
    #[serde(default)]
    pub thermal_weight: ThermalWeightName,
    /// `T/T_B` for the full-coth weight; defaults to the first of
    /// `temperature_ratios`.
    #[serde(default)]
    pub temperature_ratio: Option<f64>,
}

fn default_k_max() -> f64 {
    40.0
}

fn default_panels() -> usize {
    400
}

fn default_nodes() -> usize {
    16
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            k_max: default_k_max(),
            panels: default_panels(),
            nodes_per_panel: default_nodes(),
            thermal_weight: ThermalWeightName::Classical,
            temperature_ratio: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Angle,
    CenterDistance,
    Temperature,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Angle => "angle",
            SweepParameter::CenterDistance => "center_distance",
            SweepParameter::Temperature => "temperature",
        }
    }
}

/// Sweep over one parameter of the rotated-pair layout, or over `T/T_B`.
///
/// Values come from `values`, or from `start`, `stop`, `steps` (inclusive,
/// evenly spaced).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub stop: Option<f64>,
    #[serde(default)]
    pub steps: Option<usize>,
    /// Angle between the qubit axes in degrees, when not swept.
    #[serde(default = "default_angle")]
    pub angle: f64,
    #[serde(default = "default_center_distance")]
    pub center_distance: f64,
    #[serde(default = "default_axis_length")]
    pub axis_length: f64,
}

fn default_angle() -> f64 {
    45.0
}

fn default_center_distance() -> f64 {
    20.0
}

fn default_axis_length() -> f64 {
    10.0
}

impl SweepConfig {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let values = match (&self.values, self.start, self.stop, self.steps) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(start), Some(stop), Some(steps)) => {
                if steps < 2 {
                    return Err(CliError::Config("sweep needs at least 2 steps".into()));
                }
                let last = (steps - 1) as f64;
                (0..steps).map(|i| start + (stop - start) * i as f64 / last).collect()
            }
            _ => return Err(CliError::Config("sweep needs either `values` or all of `start`, `stop`, `steps`".into())),
        };
        if values.is_empty() {
            return Err(CliError::Config("sweep has no values".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("sweep values must be finite".into()));
        }
        Ok(values)
    }
}

/// A parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub geometry: SystemGeometry,
    pub geometry_name: String,
    pub times: Vec<f64>,
    pub temperature_ratios: Vec<f64>,
    pub state: InitialState,
    pub amplitudes: TwoQubitAmplitudes,
    pub output_dir: PathBuf,
    pub material: MaterialParams,
    pub oracle: OracleConfig,
    pub sweep: Option<SweepConfig>,
}

impl Resolved {
    /// Radial quadrature spec for the oracle, with the full-coth inverse
    /// temperature taken from the material scales.
    pub fn oracle_spec(&self) -> Result<KQuadratureSpec, CliError> {
        let thermal_weight = match self.oracle.thermal_weight {
            ThermalWeightName::Classical => ThermalWeight::Classical,
            ThermalWeightName::FullCoth => {
                let ratio = self.oracle_temperature_ratio();
                if ratio.is_nan() || ratio <= 0.0 {
                    return Err(CliError::Config(format!("full_coth needs a positive temperature ratio, got {ratio}")));
                }
                let scales = crate::rates::temperature_scales(&self.material).map_err(config_error)?;
                ThermalWeight::FullCoth { inverse_temperature: scales.inverse_temperature(ratio) }
            }
        };
        Ok(KQuadratureSpec {
            k_max: self.oracle.k_max,
            panels: self.oracle.panels,
            nodes_per_panel: self.oracle.nodes_per_panel,
            thermal_weight,
        })
    }

    pub fn oracle_temperature_ratio(&self) -> f64 {
        self.oracle.temperature_ratio.unwrap_or(self.temperature_ratios[0])
    }
}

fn config_error(e: crate::Error) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let (geometry, geometry_name) = match &self.geometry {
            GeometryConfig::Preset(name) => {
                let preset: Preset = name.parse().map_err(config_error)?;
                (preset.geometry(), preset.name().to_string())
            }
            GeometryConfig::Qubits { qubits } => {
                let g = SystemGeometry::new(qubits.clone()).map_err(config_error)?;
                g.require_two_qubits().map_err(config_error)?;
                (g, "custom".to_string())
            }
        };
        for w in geometry.warnings() {
            log::warn!("{w}");
        }
        let TimeGrid { t_max, n_points } = self.time_grid;
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(CliError::Config(format!("time_grid.t_max must be positive, got {t_max}")));
        }
        if n_points < 2 {
            return Err(CliError::Config(format!("time_grid.n_points must be at least 2, got {n_points}")));
        }
        let times = uniform_grid(t_max, n_points).map_err(config_error)?;
        if self.temperature_ratios.is_empty() {
            return Err(CliError::Config("temperature_ratios must not be empty".into()));
        }
        if let Some(r) = self.temperature_ratios.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
            return Err(CliError::Config(format!("temperature ratios must be non-negative, got {r}")));
        }
        let amplitudes = self.initial_state.amplitudes().map_err(config_error)?;
        let material = self.material.unwrap_or_default();
        crate::rates::temperature_scales(&material).map_err(config_error)?;
        let o = &self.oracle;
        if !(o.k_max > 0.0 && o.k_max.is_finite()) || o.panels == 0 || o.nodes_per_panel == 0 {
            return Err(CliError::Config("oracle needs k_max > 0 and at least one panel and node".into()));
        }
        if let Some(sweep) = &self.sweep {
            sweep.grid()?;
        }
        Ok(Resolved {
            geometry,
            geometry_name,
            times,
            temperature_ratios: self.temperature_ratios.clone(),
            state: self.initial_state,
            amplitudes,
            output_dir: self.output_dir.clone(),
            material,
            oracle: self.oracle,
            sweep: self.sweep.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let r = RunConfig::from_json("{}").unwrap().resolve().unwrap();
        assert_eq!(r.geometry_name, "paper45");
        assert_eq!(r.times.len(), 4001);
        assert_eq!(r.times[4000], 40.0);
        assert_eq!(r.temperature_ratios, vec![0.01, 0.05, 0.1]);
        assert_eq!(r.state, InitialState::OneExcitation { p: 0.5 });
    }

    #[test]
    fn explicit_qubits() {
        let text = r#"{
            "geometry": {"qubits": [
                {"center": [0, 0, 0], "axis": [0, 10, 0]},
                {"center": [20, 0, 0], "axis": [-10, 0, 0], "bohr_radius_plus": 1.2}
            ]},
            "initial_state": {"kind": "custom", "amplitudes": [[0.6, 0], [0, 0], [0, 0], [0, 0.8]]}
        }"#;
        let r = RunConfig::from_json(text).unwrap().resolve().unwrap();
        assert_eq!(r.geometry_name, "custom");
        assert_eq!(r.state.name(), "custom");
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            r#"{"geometry": "hexagonal"}"#,
            r#"{"time_grid": {"t_max": -1}}"#,
            r#"{"time_grid": {"n_points": 1}}"#,
            r#"{"initial_state": {"kind": "one_excitation", "p": 1.5}}"#,
            r#"{"initial_state": {"kind": "custom", "amplitudes": [[1, 0], [1, 0], [0, 0], [0, 0]]}}"#,
            r#"{"temperature_ratios": [-0.1]}"#,
            r#"{"tempreature_ratios": [0.1]}"#,
            r#"{"sweep": {"parameter": "angle"}}"#,
            r#"{"geometry": {"qubits": [{"center": [0, 0, 0], "axis": [0, 0, 0]}, {"center": [1, 0, 0], "axis": [1, 0, 0]}]}}"#,
        ];
        for text in bad {
            let result = RunConfig::from_json(text).and_then(|c| c.resolve());
            assert!(matches!(result, Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn sweep_ranges() {
        let c: SweepConfig = serde_json::from_str(r#"{"parameter": "angle", "start": 0, "stop": 90, "steps": 91}"#).unwrap();
        let g = c.grid().unwrap();
        assert_eq!(g.len(), 91);
        assert_eq!(g[45], 45.0);
        assert_eq!(g[90], 90.0);
    }
}
