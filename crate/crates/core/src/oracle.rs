//! Brute-force phonon mode sums, independent of the closed-form kernels.
//!
//! The dephasing exponent of `<m|ρ|s>` is a sum over phonon modes of
//! `|δ_k|² (1 - cos ωt) coth(β_k/2)`, with `δ_k` built from the
//! spin-boson couplings of the four donors. Averaging over phonon
//! directions turns `exp(ik·(x_i - x_j))` into `sinc(k l_ij)`, which leaves a
//! single radial integral:
//!
//! ```text
//! E(t) = K Σ_ij c_i c_j ∫₀^k_max dk F(k a_i) F(k a_j) sinc(k l_ij) (1 - cos kt) k w(k)
//! ```
//!
//! with `F(x) = [1 + (x/2)²]^-2` and `w(k) = 1/k` in the classical
//! (high-temperature) limit. The overall constant `K` is fixed once by
//! matching the single-site rate to `γ(t; 0)` at its peak.

use crate::dynamics::PhaseModel;
use crate::error::{Error, Result};
use crate::geometry::{DonorSite, RegisterState, SystemGeometry};
use crate::numerics::composite_gauss_legendre;
use crate::rates::{gamma_zero, RateModel};

/// Thermal occupation weight of each phonon mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalWeight {
    /// `coth(β_k/2) → 2/β_k`: rates linear in temperature.
    Classical,
    /// Full `coth(β_k/2)` with `β_k = inverse_temperature · k a_B`, scaled by
    /// `inverse_temperature / 2` so that it tends to the classical weight.
    FullCoth { inverse_temperature: f64 },
}

impl ThermalWeight {
    /// `k · w(k)`, normalized so the classical value is 1.
    fn k_weight(self, k: f64) -> f64 {
        match self {
            ThermalWeight::Classical => 1.0,
            ThermalWeight::FullCoth { inverse_temperature } => {
                let x = 0.5 * inverse_temperature * k;
                if x < 1e-8 {
                    1.0 + x * x / 3.0
                } else {
                    x / x.tanh()
                }
            }
        }
    }
}

/// Radial discretization of the phonon mode sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KQuadratureSpec {
    /// Upper cutoff, units `1/a_B`.
    pub k_max: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub thermal_weight: ThermalWeight,
}

impl Default for KQuadratureSpec {
    fn default() -> Self {
        Self { k_max: 40.0, panels: 400, nodes_per_panel: 16, thermal_weight: ThermalWeight::Classical }
    }
}

impl KQuadratureSpec {
    fn validate(&self) -> Result<()> {
        if !(self.k_max > 0.0 && self.k_max.is_finite()) {
            return Err(Error::Domain(format!("k_max must be positive, got {}", self.k_max)));
        }
        if self.panels == 0 || self.nodes_per_panel == 0 {
            return Err(Error::Domain("panel and node counts must be at least 1".into()));
        }
        if let ThermalWeight::FullCoth { inverse_temperature } = self.thermal_weight {
            if !(inverse_temperature > 0.0 && inverse_temperature.is_finite()) {
                return Err(Error::Domain(format!("inverse temperature must be positive, got {inverse_temperature}")));
            }
        }
        Ok(())
    }

    pub fn with_panels(self, panels: usize) -> Self {
        Self { panels, ..self }
    }

    pub fn with_thermal_weight(self, thermal_weight: ThermalWeight) -> Self {
        Self { thermal_weight, ..self }
    }
}

/// One ordered donor pair in the mode sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingTerm {
    pub first: DonorSite,
    pub second: DonorSite,
    /// Product of the two site weights.
    pub weight: f64,
    pub separation: f64,
    pub radii: (f64, f64),
}

// Site weights for δ = α_m - α_s: (m_b - s_b)·2μ.
fn difference_weight(m: RegisterState, s: RegisterState, site: DonorSite) -> f64 {
    (m.spin(site.qubit).value() - s.spin(site.qubit).value()) * 2.0 * site.spin.value()
}

// Site weights for ᾱ = α_m + α_s - 2α_{-,-}: (m_b + s_b + 1)·2μ.
fn sum_weight(m: RegisterState, s: RegisterState, site: DonorSite) -> f64 {
    (m.spin(site.qubit).value() + s.spin(site.qubit).value() + 1.0) * 2.0 * site.spin.value()
}

fn pair_terms(geometry: &SystemGeometry, left: impl Fn(DonorSite) -> f64, right: impl Fn(DonorSite) -> f64) -> Vec<CouplingTerm> {
    let sites: Vec<DonorSite> = geometry.sites().collect();
    let mut out = Vec::new();
    for &first in &sites {
        for &second in &sites {
            let weight = left(first) * right(second);
            if weight == 0.0 {
                continue;
            }
            out.push(CouplingTerm {
                first,
                second,
                weight,
                separation: (geometry.site_position(first) - geometry.site_position(second)).norm(),
                radii: (geometry.site_radius(first), geometry.site_radius(second)),
            });
        }
    }
    out
}

/// Terms of `|δ_{m,s,k}|²` over ordered donor pairs, zero weights dropped.
pub fn coupling_terms(geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<Vec<CouplingTerm>> {
    geometry.require_two_qubits()?;
    Ok(pair_terms(geometry, |i| difference_weight(m, s, i), |j| difference_weight(m, s, j)))
}

/// Terms of `ᾱ_{m,s,k} δ*_{m,s,k}` over ordered donor pairs.
pub fn phase_terms(geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<Vec<CouplingTerm>> {
    geometry.require_two_qubits()?;
    Ok(pair_terms(geometry, |i| sum_weight(m, s, i), |j| difference_weight(m, s, j)))
}

fn form_factor(x: f64) -> f64 {
    let q = 1.0 + 0.25 * x * x;
    1.0 / (q * q)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Time dependence of a mode-sum integrand.
#[derive(Debug, Clone, Copy)]
enum TimeFactor {
    /// `1 - cos kt`
    Exponent,
    /// `k sin kt`
    Rate,
    /// `k sin kt` without thermal weight
    Phase,
}

/// Radial quadrature grid with the spectral weights folded in.
#[derive(Debug, Clone)]
struct Spectrum {
    k: Vec<f64>,
    weight: Vec<f64>,
}

impl Spectrum {
    fn evaluate(&self, t: f64, factor: TimeFactor) -> f64 {
        match factor {
            TimeFactor::Exponent => self.k.iter().zip(&self.weight).map(|(k, w)| w * (1.0 - (k * t).cos())).sum(),
            TimeFactor::Rate | TimeFactor::Phase => self.k.iter().zip(&self.weight).map(|(k, w)| w * k * (k * t).sin()).sum(),
        }
    }
}

#[derive(Debug, Clone)]
struct Grid {
    k: Vec<f64>,
    w: Vec<f64>,
    thermal: ThermalWeight,
}

impl Grid {
    fn new(spec: &KQuadratureSpec) -> Self {
        let (k, w) = composite_gauss_legendre(0.0, spec.k_max, spec.panels, spec.nodes_per_panel);
        Self { k, w, thermal: spec.thermal_weight }
    }

    fn spectrum(&self, terms: &[CouplingTerm], thermal: bool) -> Spectrum {
        let weight = self
            .k
            .iter()
            .zip(&self.w)
            .map(|(&k, &w)| {
                let s: f64 = terms
                    .iter()
                    .map(|c| c.weight * form_factor(k * c.radii.0) * form_factor(k * c.radii.1) * sinc(k * c.separation))
                    .sum();
                let tw = if thermal { self.thermal.k_weight(k) } else { 1.0 };
                w * s * tw
            })
            .collect();
        Spectrum { k: self.k.clone(), weight }
    }
}

/// Calibrated mode-sum oracle for one quadrature spec.
#[derive(Debug, Clone)]
pub struct ModeSumOracle {
    spec: KQuadratureSpec,
    grid: Grid,
    normalization: f64,
}

/// Peak time of `γ(t; 0)`: the root of `x³ - 3x/4 - 3/8`.
fn gamma_zero_peak() -> f64 {
    let mut x: f64 = 1.0;
    for _ in 0..50 {
        let f = x * x * x - 0.75 * x - 0.375;
        let df = 3.0 * x * x - 0.75;
        let step = f / df;
        x -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    x
}

/// Global constant `K` of the mode sum under `spec`.
///
/// `K` makes the single-site (`l = 0`, unit radii) classical rate equal
/// `γ(t; 0)` at its peak. The thermal weight of `spec` is ignored.
pub fn calibrate_normalization(spec: &KQuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let classical = spec.with_thermal_weight(ThermalWeight::Classical);
    let grid = Grid::new(&classical);
    let peak = gamma_zero_peak();
    let single = [CouplingTerm {
        first: DonorSite { qubit: 0, spin: crate::geometry::PseudoSpin::Up },
        second: DonorSite { qubit: 0, spin: crate::geometry::PseudoSpin::Up },
        weight: 1.0,
        separation: 0.0,
        radii: (1.0, 1.0),
    }];
    let raw = grid.spectrum(&single, true).evaluate(peak, TimeFactor::Rate);
    let k = gamma_zero(peak) / raw;
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::NotConverged(format!("normalization is not finite and positive ({k})")));
    }
    Ok(k)
}

/// Largest absolute and relative change seen in a convergence check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub panel_doubling_change: f64,
    pub cutoff_extension_change: f64,
    pub scale: f64,
}

impl ConvergenceReport {
    pub fn is_converged(&self) -> bool {
        self.panel_doubling_change / self.scale < PANEL_TOLERANCE
            && self.cutoff_extension_change / self.scale < CUTOFF_TOLERANCE
    }
}

/// Largest relative change allowed when the panel count is doubled.
pub const PANEL_TOLERANCE: f64 = 1e-8;
/// Largest relative change allowed when `k_max` is extended by half.
///
/// The rate integrand carries an extra factor `k`, so its tail beyond
/// `k_max = 40` is of order `1e-8` rather than the `1e-10` of the exponent.
pub const CUTOFF_TOLERANCE: f64 = 1e-6;

impl ModeSumOracle {
    pub fn new(spec: KQuadratureSpec) -> Result<Self> {
        let normalization = calibrate_normalization(&spec)?;
        Ok(Self { grid: Grid::new(&spec), spec, normalization })
    }

    pub fn spec(&self) -> &KQuadratureSpec {
        &self.spec
    }

    /// The calibrated constant `K`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    fn curve(&self, times: &[f64], terms: &[CouplingTerm], factor: TimeFactor) -> Vec<f64> {
        let thermal = !matches!(factor, TimeFactor::Phase);
        let spectrum = self.grid.spectrum(terms, thermal);
        times.iter().map(|&t| self.normalization * spectrum.evaluate(t, factor)).collect()
    }

    /// Dephasing exponent in units of `Γ_T a_B/s` (classical weight).
    pub fn exponent_modesum(&self, t: f64, geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<f64> {
        Ok(self.curve(&[t], &coupling_terms(geometry, m, s)?, TimeFactor::Exponent)[0])
    }

    /// Time derivative of [`Self::exponent_modesum`], units `Γ_T`.
    pub fn rate_modesum(&self, t: f64, geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<f64> {
        Ok(self.curve(&[t], &coupling_terms(geometry, m, s)?, TimeFactor::Rate)[0])
    }

    /// `Δ_{m,s}(t)` divided by `ħω_B / (2 k_B T_B)`.
    pub fn phase_modesum(&self, t: f64, geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<f64> {
        Ok(self.curve(&[t], &phase_terms(geometry, m, s)?, TimeFactor::Phase)[0])
    }

    pub fn exponent_curve(&self, times: &[f64], geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<Vec<f64>> {
        Ok(self.curve(times, &coupling_terms(geometry, m, s)?, TimeFactor::Exponent))
    }

    pub fn rate_curve(&self, times: &[f64], geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<Vec<f64>> {
        Ok(self.curve(times, &coupling_terms(geometry, m, s)?, TimeFactor::Rate))
    }

    pub fn phase_curve(&self, times: &[f64], geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<Vec<f64>> {
        Ok(self.curve(times, &phase_terms(geometry, m, s)?, TimeFactor::Phase))
    }

    /// Rate of a single donor pair with radii `a`, `a2` at distance `l`.
    pub fn kernel_rate(&self, t: f64, a: f64, a2: f64, l: f64) -> f64 {
        let term = [CouplingTerm {
            first: DonorSite { qubit: 0, spin: crate::geometry::PseudoSpin::Up },
            second: DonorSite { qubit: 0, spin: crate::geometry::PseudoSpin::Up },
            weight: 1.0,
            separation: l,
            radii: (a, a2),
        }];
        self.curve(&[t], &term, TimeFactor::Rate)[0]
    }

    /// Re-evaluates the rate curve with doubled panels and with the cutoff
    /// extended by half (same panel width). Fails with
    /// [`Error::NotConverged`] when the changes, relative to the curve's
    /// largest magnitude, exceed [`PANEL_TOLERANCE`] or [`CUTOFF_TOLERANCE`].
    pub fn check_convergence(&self, times: &[f64], geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<ConvergenceReport> {
        let terms = coupling_terms(geometry, m, s)?;
        let base = self.curve(times, &terms, TimeFactor::Rate);
        let with = |spec: KQuadratureSpec| -> Vec<f64> {
            let other = ModeSumOracle { grid: Grid::new(&spec), spec, normalization: self.normalization };
            other.curve(times, &terms, TimeFactor::Rate)
        };
        let doubled = with(self.spec.with_panels(2 * self.spec.panels));
        let extended_panels = self.spec.panels + self.spec.panels.div_ceil(2);
        let extended = with(KQuadratureSpec { k_max: 1.5 * self.spec.k_max, panels: extended_panels, ..self.spec });
        let max_diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let scale = base.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let report = ConvergenceReport {
            panel_doubling_change: max_diff(&base, &doubled),
            cutoff_extension_change: max_diff(&base, &extended),
            scale: if scale > 0.0 { scale } else { 1.0 },
        };
        if !report.is_converged() {
            return Err(Error::NotConverged(format!(
                "k_max = {}, {} panels x {} nodes: relative change {:.3e} on panel doubling, {:.3e} on cutoff extension",
                self.spec.k_max,
                self.spec.panels,
                self.spec.nodes_per_panel,
                report.panel_doubling_change / report.scale,
                report.cutoff_extension_change / report.scale,
            )));
        }
        Ok(report)
    }
}

/// Oracle-computed phases `Δ_{m,s}(t)` for one layout, in radians.
pub struct OraclePhases<'a> {
    pub oracle: &'a ModeSumOracle,
    pub geometry: &'a SystemGeometry,
    /// `ħω_B / (2 k_B T_B)` of the host material.
    pub phase_scale: f64,
}

impl PhaseModel for OraclePhases<'_> {
    fn phase(&self, t: f64, m: RegisterState, s: RegisterState) -> Result<f64> {
        Ok(self.phase_scale * self.oracle.phase_modesum(t, self.geometry, m, s)?)
    }
}

/// Closed-form vs oracle rate on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RateComparison {
    pub times: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub oracle: Vec<f64>,
}

impl RateComparison {
    pub fn new(oracle: &ModeSumOracle, times: &[f64], geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<Self> {
        let model = RateModel::new(geometry);
        let closed_form = times.iter().map(|&t| model.decoherence_rate(t, m, s)).collect::<Result<Vec<_>>>()?;
        Ok(Self { times: times.to_vec(), closed_form, oracle: oracle.rate_curve(times, geometry, m, s)? })
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.oracle.iter().zip(&self.closed_form).map(|(o, c)| o - c).collect()
    }

    /// `max |oracle - closed| / max |closed|`.
    pub fn sup_relative_residual(&self) -> f64 {
        let scale = self.closed_form.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = self.residuals().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Preset;
    use crate::rates::{gamma_identical, uniform_grid, ONE_EXCITATION};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn oracle() -> ModeSumOracle {
        ModeSumOracle::new(KQuadratureSpec::default()).unwrap()
    }

    #[test]
    fn normalization_is_two_over_pi() {
        // ∫₀^∞ k sin(kx) F(k)² dk = (π/2) γ(x; 0)
        assert_relative_eq!(oracle().normalization(), 2.0 / std::f64::consts::PI, max_relative = 1e-8);
    }

    #[test]
    fn normalization_stable_under_refinement() {
        let a = calibrate_normalization(&KQuadratureSpec::default()).unwrap();
        let b = calibrate_normalization(&KQuadratureSpec::default().with_panels(800)).unwrap();
        assert!(((a - b) / a).abs() < 1e-6);
    }

    #[test]
    fn calibrated_single_site_matches_closed_form() {
        let o = oracle();
        for t in uniform_grid(20.0, 201).unwrap() {
            assert_abs_diff_eq!(o.kernel_rate(t, 1.0, 1.0, 0.0), gamma_zero(t), epsilon = 1e-7);
            assert_abs_diff_eq!(o.kernel_rate(t, 1.0, 1.0, 10.0), gamma_identical(t, 10.0), epsilon = 1e-8);
        }
    }

    #[test]
    fn mixed_radii_kernel_matches_general_formula() {
        let o = oracle();
        for t in [0.5, 3.0, 6.0, 9.0] {
            let closed = crate::rates::gamma_general(t, 0.8, 1.3, 6.0).unwrap();
            assert_abs_diff_eq!(o.kernel_rate(t, 0.8, 1.3, 6.0), closed, epsilon = 1e-9);
        }
    }

    #[test]
    fn zero_time_and_diagonal() {
        let o = oracle();
        let g = Preset::Paper45.geometry();
        let (m, s) = ONE_EXCITATION;
        assert_eq!(o.exponent_modesum(0.0, &g, m, s).unwrap(), 0.0);
        assert_eq!(o.rate_modesum(0.0, &g, m, s).unwrap(), 0.0);
        assert_eq!(o.phase_modesum(0.0, &g, m, s).unwrap(), 0.0);
        assert_eq!(o.phase_modesum(3.0, &g, m, m).unwrap(), 0.0);
    }

    #[test]
    fn exponent_symmetric_and_phase_antisymmetric() {
        let o = oracle();
        let g = Preset::Paper45.geometry();
        let (m, s) = ONE_EXCITATION;
        assert_relative_eq!(o.exponent_modesum(7.0, &g, m, s).unwrap(), o.exponent_modesum(7.0, &g, s, m).unwrap(), max_relative = 1e-14);
        assert_relative_eq!(o.phase_modesum(7.0, &g, m, s).unwrap(), -o.phase_modesum(7.0, &g, s, m).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn distant_pairs_are_suppressed() {
        let o = oracle();
        let near = o.kernel_rate(1.0, 1.0, 1.0, 0.0);
        let far = o.kernel_rate(1.0, 1.0, 1.0, 100.0);
        assert!(far.abs() < 1e-3 * near.abs());
    }

    #[test]
    fn coarse_cutoff_does_not_converge() {
        let spec = KQuadratureSpec { k_max: 1.0, panels: 10, ..KQuadratureSpec::default() };
        let o = ModeSumOracle::new(spec).unwrap();
        let g = Preset::Paper45.geometry();
        let (m, s) = ONE_EXCITATION;
        let times = uniform_grid(40.0, 81).unwrap();
        assert!(matches!(o.check_convergence(&times, &g, m, s), Err(Error::NotConverged(_))));
        assert!(oracle().check_convergence(&times, &g, m, s).is_ok());
    }

    #[test]
    fn full_coth_dominates_classical() {
        let g = Preset::Paper45.geometry();
        let (m, s) = ONE_EXCITATION;
        let classical = oracle();
        let full = ModeSumOracle::new(
            KQuadratureSpec::default().with_thermal_weight(ThermalWeight::FullCoth { inverse_temperature: 5.0 }),
        )
        .unwrap();
        let times = uniform_grid(40.0, 81).unwrap();
        let a = classical.exponent_curve(&times, &g, m, s).unwrap();
        let b = full.exponent_curve(&times, &g, m, s).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(y >= x);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ModeSumOracle::new(KQuadratureSpec { k_max: 0.0, ..Default::default() }).is_err());
        assert!(ModeSumOracle::new(KQuadratureSpec { panels: 0, ..Default::default() }).is_err());
        let bad = KQuadratureSpec::default().with_thermal_weight(ThermalWeight::FullCoth { inverse_temperature: -1.0 });
        assert!(ModeSumOracle::new(bad).is_err());
    }
}
