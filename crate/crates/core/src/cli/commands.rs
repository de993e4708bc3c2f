use std::path::{Path, PathBuf};

use crate::dynamics::{find_extrema, find_extrema_above, wootters_concurrence, Extremum, PhaseMode, TwoQubitSystem};
use crate::geometry::{Preset, PseudoSpin, RegisterState, SystemGeometry};
use crate::oracle::{ModeSumOracle, RateComparison, ThermalWeight};
use crate::rates::{gamma_identical, gamma_zero, RateCurve, ONE_EXCITATION, TWO_EXCITATION};

use super::config::{Resolved, SweepParameter};
use super::csv::{format_number, CsvDataset};
use super::CliError;

const TIME: &str = "st_over_aB";
/// Largest sup-norm relative residual accepted by `oracle-check`.
pub const ORACLE_RESIDUAL_THRESHOLD: f64 = 1e-3;
/// Largest extremum time shift accepted by `oracle-check`.
pub const ORACLE_EXTREMUM_SHIFT: f64 = 0.1;
/// Peaks smaller than this fraction of the largest rate are treated as
/// quadrature noise when matching oracle extrema.
pub const ORACLE_PEAK_THRESHOLD: f64 = 1e-6;

/// Command-line switches shared by all commands.
#[derive(Debug, Clone, Default)]
pub struct Options {
    /// Overrides the config's `output_dir`.
    pub out: Option<PathBuf>,
    /// Adds `γ11, γ22, γ12` columns to the rate table.
    pub components: bool,
    /// Reports a failing full-coth oracle check without failing the command.
    pub informational: bool,
}

fn output_dir(cfg: &Resolved, opts: &Options) -> Result<PathBuf, CliError> {
    let dir = opts.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn spin_label(m: PseudoSpin) -> char {
    match m {
        PseudoSpin::Up => 'p',
        PseudoSpin::Down => 'm',
    }
}

fn state_label(m: RegisterState) -> String {
    [spin_label(m.m1), spin_label(m.m2)].iter().collect()
}

/// The coherences tracked for the configured state, with column names.
fn tracked_pairs(cfg: &Resolved) -> Vec<((RegisterState, RegisterState), String)> {
    match cfg.state.sector() {
        Some((pair, _)) => vec![(pair, "rate_over_GammaT".to_string())],
        None => {
            let b = RegisterState::BASIS;
            let mut out = Vec::new();
            for i in 0..4 {
                for j in i + 1..4 {
                    out.push(((b[i], b[j]), format!("rate_{}_{}_over_GammaT", state_label(b[i]), state_label(b[j]))));
                }
            }
            out
        }
    }
}

fn write(dir: &Path, name: &str, table: &CsvDataset, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let path = dir.join(name);
    table.write(&path)?;
    written.push(path);
    Ok(())
}

fn rate_values(sys: &TwoQubitSystem, times: &[f64], pair: (RegisterState, RegisterState)) -> Result<RateCurve, CliError> {
    Ok(sys.rate_curve(times, pair.0, pair.1)?)
}

fn extrema_table(extrema: &[(usize, Extremum)], with_pair: bool) -> Result<CsvDataset, CliError> {
    let mut t = CsvDataset::new(TIME, extrema.iter().map(|(_, e)| e.time).collect());
    t.push_column("rate_over_GammaT", extrema.iter().map(|(_, e)| e.value).collect())?;
    t.push_column("sign", extrema.iter().map(|(_, e)| f64::from(e.sign)).collect())?;
    if with_pair {
        t.push_column("pair_index", extrema.iter().map(|(i, _)| *i as f64).collect())?;
    }
    Ok(t)
}

/// Writes `rate_<state>_<geometry>.csv` and `extrema_<state>_<geometry>.csv`.
pub fn cmd_rate(cfg: &Resolved, opts: &Options) -> Result<Vec<PathBuf>, CliError> {
    let sys = TwoQubitSystem::new(cfg.geometry.clone())?;
    let pairs = tracked_pairs(cfg);
    let mut table = CsvDataset::new(TIME, cfg.times.clone());
    let mut extrema = Vec::new();
    for (index, (pair, name)) in pairs.iter().enumerate() {
        let curve = rate_values(&sys, &cfg.times, *pair)?;
        extrema.extend(find_extrema(&curve).into_iter().map(|e| (index, e)));
        table.push_column(name.clone(), curve.values().to_vec())?;
    }
    if opts.components {
        for (b, b2) in [(0, 0), (1, 1), (0, 1)] {
            let values = cfg.times.iter().map(|&t| sys.rates().inter_bit(t, b, b2)).collect();
            table.push_column(format!("gamma{}{}_over_GammaT", b + 1, b2 + 1), values)?;
        }
    }
    let dir = output_dir(cfg, opts)?;
    let stem = format!("{}_{}", cfg.state.name(), cfg.geometry_name);
    let mut written = Vec::new();
    write(&dir, &format!("rate_{stem}.csv"), &table, &mut written)?;
    write(&dir, &format!("extrema_{stem}.csv"), &extrema_table(&extrema, pairs.len() > 1)?, &mut written)?;
    Ok(written)
}

fn temperature_column(ratio: f64) -> String {
    format!("C_T{}", format_number(ratio))
}

fn check_concurrence(values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|c| !(**c >= 0.0 && **c <= 1.0 + 1e-12)) {
        Some(c) => Err(CliError::Invariant(format!("concurrence {c} outside [0, 1]"))),
        None => Ok(()),
    }
}

fn concurrence_values(sys: &TwoQubitSystem, cfg: &Resolved, temperature_ratio: f64) -> Result<Vec<f64>, CliError> {
    let values = match cfg.state.sector() {
        Some((pair, p)) => sys.concurrence_curve(&cfg.times, pair, p, temperature_ratio)?.values,
        None => cfg
            .times
            .iter()
            .map(|&t| {
                let rho = sys.evolve_density_matrix(t, &cfg.amplitudes, temperature_ratio, PhaseMode::Zero)?;
                Ok(wootters_concurrence(&rho))
            })
            .collect::<Result<Vec<_>, crate::Error>>()?,
    };
    check_concurrence(&values)?;
    Ok(values)
}

/// Writes `concurrence_<state>_<geometry>.csv`, one column per temperature.
pub fn cmd_concurrence(cfg: &Resolved, opts: &Options) -> Result<Vec<PathBuf>, CliError> {
    let sys = TwoQubitSystem::new(cfg.geometry.clone())?;
    if cfg.state.sector().is_none() {
        log::warn!("custom initial state: concurrence evaluated with zero phases and is approximate");
    }
    let mut table = CsvDataset::new(TIME, cfg.times.clone());
    for &ratio in &cfg.temperature_ratios {
        table.push_column(temperature_column(ratio), concurrence_values(&sys, cfg, ratio)?)?;
    }
    let dir = output_dir(cfg, opts)?;
    let mut written = Vec::new();
    write(&dir, &format!("concurrence_{}_{}.csv", cfg.state.name(), cfg.geometry_name), &table, &mut written)?;
    Ok(written)
}

fn preset_rates(times: &[f64], preset: Preset, pairs: &[(&str, (RegisterState, RegisterState))]) -> Result<CsvDataset, CliError> {
    let sys = TwoQubitSystem::new(preset.geometry())?;
    let mut table = CsvDataset::new(TIME, times.to_vec());
    for (name, pair) in pairs {
        table.push_column(*name, rate_values(&sys, times, *pair)?.values().to_vec())?;
    }
    Ok(table)
}

/// Writes the datasets `fig2.csv` ... `fig6.csv`.
///
/// Figures use the config's time grid and temperature ratios; layouts are
/// always the named presets. `fig5.csv` uses the one-excitation weight `p`
/// of the configured state, or `p = 1/2` otherwise.
pub fn cmd_figures(cfg: &Resolved, opts: &Options) -> Result<Vec<PathBuf>, CliError> {
    let times = &cfg.times;
    let one = [("rate_one_excitation", ONE_EXCITATION)];

    let mut fig2 = CsvDataset::new(TIME, times.clone());
    fig2.push_column("gamma_l0", times.iter().map(|&t| gamma_zero(t)).collect())?;
    for l in [10.0, 20.0] {
        fig2.push_column(format!("gamma_l{l}"), times.iter().map(|&t| gamma_identical(t, l)).collect())?;
    }
    let fig3 = preset_rates(times, Preset::Paper45, &one)?;
    let fig4a = preset_rates(times, Preset::Collinear, &one)?;
    let fig4b = preset_rates(times, Preset::Perpendicular, &one)?;
    let fig6 = preset_rates(times, Preset::Paper45, &[("rate_two_excitation", TWO_EXCITATION), one[0]])?;

    let p = match cfg.state {
        super::InitialState::OneExcitation { p } => p,
        _ => 0.5,
    };
    let sys = TwoQubitSystem::new(Preset::Paper45.geometry())?;
    let mut fig5 = CsvDataset::new(TIME, times.clone());
    for &ratio in &cfg.temperature_ratios {
        let values = sys.concurrence_curve(times, ONE_EXCITATION, p, ratio)?.values;
        check_concurrence(&values)?;
        fig5.push_column(temperature_column(ratio), values)?;
    }

    let dir = output_dir(cfg, opts)?;
    let mut written = Vec::new();
    for (name, table) in [("fig2", fig2), ("fig3", fig3), ("fig4a", fig4a), ("fig4b", fig4b), ("fig5", fig5), ("fig6", fig6)] {
        write(&dir, &format!("{name}.csv"), &table, &mut written)?;
    }
    Ok(written)
}

/// Outcome of `oracle-check`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheckReport {
    pub sup_relative_residual: f64,
    /// Largest time shift between matched extrema, `∞` if the counts differ.
    pub max_extremum_shift: f64,
    pub normalization: f64,
    pub full_coth: bool,
    pub files: Vec<PathBuf>,
}

impl OracleCheckReport {
    pub fn passed(&self) -> bool {
        self.sup_relative_residual < ORACLE_RESIDUAL_THRESHOLD && self.max_extremum_shift < ORACLE_EXTREMUM_SHIFT
    }

    pub fn regime_warning(&self) -> Option<&'static str> {
        (self.full_coth && !self.passed()).then_some(
            "full_coth weight compared against the high-temperature closed forms; \
             a residual above threshold is expected at low temperature",
        )
    }

    pub fn summary(&self) -> String {
        format!(
            "{} oracle-check: sup relative residual {:.3e} (threshold {:e}), max extremum shift {:.3e}, K = {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.sup_relative_residual,
            ORACLE_RESIDUAL_THRESHOLD,
            self.max_extremum_shift,
            format_number(self.normalization),
        )
    }

    /// `0` on pass, or on a full-coth failure under `--informational`;
    /// `3` otherwise.
    pub fn exit_code(&self, informational: bool) -> u8 {
        if self.passed() || (self.full_coth && informational) {
            0
        } else {
            3
        }
    }
}

fn max_shift(a: &[Extremum], b: &[Extremum]) -> f64 {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.sign != y.sign) {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x.time - y.time).abs()).fold(0.0, f64::max)
}

/// Compares the calibrated mode-sum rate with the closed form and writes
/// `oracle_residual_<state>_<geometry>.csv`.
pub fn cmd_oracle_check(cfg: &Resolved, opts: &Options) -> Result<OracleCheckReport, CliError> {
    let Some((pair, _)) = cfg.state.sector() else {
        return Err(CliError::Config("oracle-check needs a one_excitation or two_excitation state".into()));
    };
    let spec = cfg.oracle_spec()?;
    let oracle = ModeSumOracle::new(spec)?;
    oracle.check_convergence(&cfg.times, &cfg.geometry, pair.0, pair.1)?;
    let cmp = RateComparison::new(&oracle, &cfg.times, &cfg.geometry, pair.0, pair.1)?;
    let closed = find_extrema_above(&RateCurve::new(cfg.times.clone(), cmp.closed_form.clone())?, ORACLE_PEAK_THRESHOLD);
    let sampled = find_extrema_above(&RateCurve::new(cfg.times.clone(), cmp.oracle.clone())?, ORACLE_PEAK_THRESHOLD);

    let mut table = CsvDataset::new(TIME, cfg.times.clone());
    table.push_column("closed_form_over_GammaT", cmp.closed_form.clone())?;
    table.push_column("oracle_over_GammaT", cmp.oracle.clone())?;
    table.push_column("residual_over_GammaT", cmp.residuals())?;
    let dir = output_dir(cfg, opts)?;
    let mut files = Vec::new();
    write(&dir, &format!("oracle_residual_{}_{}.csv", cfg.state.name(), cfg.geometry_name), &table, &mut files)?;
    Ok(OracleCheckReport {
        sup_relative_residual: cmp.sup_relative_residual(),
        max_extremum_shift: max_shift(&closed, &sampled),
        normalization: oracle.normalization(),
        full_coth: matches!(spec.thermal_weight, ThermalWeight::FullCoth { .. }),
        files,
    })
}

/// Writes `sweep_<parameter>.csv` of plateau concurrences.
///
/// Angle and center-distance sweeps use the rotated-pair layout with one
/// column per temperature ratio; the first column is the swept value.
/// Temperature sweeps use the configured geometry.
pub fn cmd_sweep(cfg: &Resolved, opts: &Options) -> Result<Vec<PathBuf>, CliError> {
    let Some(sweep) = &cfg.sweep else {
        return Err(CliError::Config("sweep command needs a `sweep` section".into()));
    };
    let Some((pair, p)) = cfg.state.sector() else {
        return Err(CliError::Config("sweep needs a one_excitation or two_excitation state".into()));
    };
    let values = sweep.grid()?;
    let table = match sweep.parameter {
        SweepParameter::Temperature => {
            if let Some(v) = values.iter().find(|v| **v < 0.0) {
                return Err(CliError::Config(format!("temperature ratios must be non-negative, got {v}")));
            }
            let sys = TwoQubitSystem::new(cfg.geometry.clone())?;
            let plateaus = values.iter().map(|&r| sys.plateau_concurrence(pair, p, r)).collect::<Result<Vec<_>, _>>()?;
            check_concurrence(&plateaus)?;
            let mut t = CsvDataset::new("T_over_TB", values);
            t.push_column("plateau_concurrence", plateaus)?;
            t
        }
        parameter => {
            let layouts = values
                .iter()
                .map(|&v| match parameter {
                    SweepParameter::Angle => SystemGeometry::rotated_pair(sweep.center_distance, sweep.axis_length, v),
                    _ => SystemGeometry::rotated_pair(v, sweep.axis_length, sweep.angle),
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(e.to_string()))?;
            let systems = layouts.into_iter().map(TwoQubitSystem::new).collect::<Result<Vec<_>, _>>()?;
            let first = match parameter {
                SweepParameter::Angle => "angle_deg",
                _ => "center_distance_over_aB",
            };
            let mut t = CsvDataset::new(first, values);
            for &ratio in &cfg.temperature_ratios {
                let plateaus = systems.iter().map(|s| s.plateau_concurrence(pair, p, ratio)).collect::<Result<Vec<_>, _>>()?;
                check_concurrence(&plateaus)?;
                t.push_column(temperature_column(ratio), plateaus)?;
            }
            t
        }
    };
    let dir = output_dir(cfg, opts)?;
    let mut written = Vec::new();
    write(&dir, &format!("sweep_{}.csv", sweep.parameter.name()), &table, &mut written)?;
    Ok(written)
}
