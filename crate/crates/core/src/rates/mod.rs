//! Decoherence-rate hierarchy: inter-donor `γ(t; a, a', l)`, inter-bit
//! `γ_{b,b'}(t)` and state-pair `Γ_{m,s}(t)`, with their time integrals.
//!
//! Times are dimensionless (`st/a_B`), rates are in units of `Γ_T`, and the
//! integrated exponent is in units of `Γ_T a_B / s`.

pub mod kernel;
mod units;

use log::warn;

use crate::error::{domain, Error, Result};
use crate::geometry::{PseudoSpin, RegisterState, SystemGeometry};
use crate::numerics;

pub use kernel::{DonorPairKernel, LENGTH_EPSILON, RADIUS_EPSILON};
pub use units::{temperature_scales, MaterialParams, TemperatureScales};

/// `γ(t; a, a', l) / Γ_T`.
///
/// Near-equal radii (`|a - a'| < RADIUS_EPSILON`) use the identical-donor
/// form at the mean radius. For `l < LENGTH_EPSILON` the exact zero-distance
/// limit of the same profile is used.
pub fn gamma_general(t: f64, a: f64, a2: f64, l: f64) -> Result<f64> {
    check_radius(a)?;
    check_radius(a2)?;
    check_nonnegative("time", t)?;
    check_nonnegative("distance", l)?;
    Ok(DonorPairKernel::new(a, a2).rate(t, l))
}

/// `γ(t; l) / Γ_T` for identical donors with Bohr radius `a_B`.
pub fn gamma_identical(t: f64, l: f64) -> f64 {
    if l < LENGTH_EPSILON {
        return gamma_zero(t);
    }
    let poly = |u: f64| (((u / 6.0 + 0.5) * u + 0.625) * u + 0.3125) * (-2.0 * u).exp();
    (poly((l - t).abs()) - poly(l + t)) / l
}

/// `γ(t; 0) / Γ_T = [2x³/3 + x² + x/2] e^{-2x}` with `x = st/a_B`.
pub fn gamma_zero(t: f64) -> f64 {
    (((2.0 / 3.0) * t + 1.0) * t + 0.5) * t * (-2.0 * t).exp()
}

fn check_radius(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("Bohr radius must be positive and finite, got {a}")))
    }
}

fn check_nonnegative(what: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{what} must be non-negative and finite, got {v}")))
    }
}

/// One signed inter-donor contribution to an inter-bit rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTerm {
    /// `4 m s`, i.e. ±1.
    pub weight: f64,
    pub distance: f64,
    pub kernel: DonorPairKernel,
}

impl KernelTerm {
    fn rate(&self, t: f64) -> f64 {
        self.weight * self.kernel.rate(t, self.distance)
    }

    fn integral(&self, t: f64) -> f64 {
        self.weight * self.kernel.integral(t, self.distance)
    }

    fn integral_limit(&self) -> f64 {
        self.weight * self.kernel.integral_limit(self.distance)
    }
}

/// Precomputed closed-form rates for a fixed qubit layout.
#[derive(Debug, Clone)]
pub struct RateModel {
    n: usize,
    // terms[b * n + b'] holds the four (m, s) contributions to γ_{b,b'}
    terms: Vec<[KernelTerm; 4]>,
}

impl RateModel {
    pub fn new(geometry: &SystemGeometry) -> Self {
        let n = geometry.len();
        let mut terms = Vec::with_capacity(n * n);
        let mut mixed_zero = false;
        for b in 0..n {
            for b2 in 0..n {
                let mut four = [KernelTerm { weight: 0.0, distance: 0.0, kernel: DonorPairKernel::identical(1.0) }; 4];
                let pairs = PseudoSpin::BOTH.iter().flat_map(|&m| PseudoSpin::BOTH.iter().map(move |&s| (m, s)));
                for (slot, (m, s)) in four.iter_mut().zip(pairs) {
                    let a = geometry.qubit(b).bohr_radius(m);
                    let a2 = geometry.qubit(b2).bohr_radius(s);
                    let distance = geometry.inter_donor_distance(b, m, b2, s);
                    if distance < LENGTH_EPSILON && (a - a2).abs() >= RADIUS_EPSILON {
                        mixed_zero = true;
                    }
                    *slot = KernelTerm { weight: 4.0 * m.value() * s.value(), distance, kernel: DonorPairKernel::new(a, a2) };
                }
                terms.push(four);
            }
        }
        if mixed_zero {
            warn!("coincident donor sites with different Bohr radii; using the zero-distance limit of the mixed-radius kernel");
        }
        Self { n, terms }
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    fn pair(&self, b: usize, b2: usize) -> &[KernelTerm; 4] {
        assert!(b < self.n && b2 < self.n, "qubit index out of range");
        &self.terms[b * self.n + b2]
    }

    /// `γ_{b,b'}(t) / Γ_T`.
    pub fn inter_bit(&self, t: f64, b: usize, b2: usize) -> f64 {
        self.pair(b, b2).iter().map(|k| k.rate(t)).sum()
    }

    fn inter_bit_integral(&self, t: f64, b: usize, b2: usize) -> f64 {
        self.pair(b, b2).iter().map(|k| k.integral(t)).sum()
    }

    fn inter_bit_integral_limit(&self, b: usize, b2: usize) -> f64 {
        self.pair(b, b2).iter().map(|k| k.integral_limit()).sum()
    }

    fn state_weights(&self, m: RegisterState, s: RegisterState) -> Result<[f64; 2]> {
        if self.n != 2 {
            return Err(Error::Geometry(format!("state rates need two qubits, got {}", self.n)));
        }
        Ok([m.m1.value() - s.m1.value(), m.m2.value() - s.m2.value()])
    }

    fn weighted_sum(&self, m: RegisterState, s: RegisterState, f: impl Fn(usize, usize) -> f64) -> Result<f64> {
        let w = self.state_weights(m, s)?;
        let mut total = 0.0;
        for b in 0..2 {
            for b2 in 0..2 {
                if w[b] != 0.0 && w[b2] != 0.0 {
                    total += w[b] * w[b2] * f(b, b2);
                }
            }
        }
        Ok(total)
    }

    /// `Γ_{m,s}(t) / Γ_T`.
    pub fn decoherence_rate(&self, t: f64, m: RegisterState, s: RegisterState) -> Result<f64> {
        self.weighted_sum(m, s, |b, b2| self.inter_bit(t, b, b2))
    }

    /// `∫₀ᵗ Γ_{m,s}(t') dt'` in units of `Γ_T a_B / s`.
    pub fn integrated_exponent(&self, t: f64, m: RegisterState, s: RegisterState) -> Result<f64> {
        check_nonnegative("time", t)?;
        self.weighted_sum(m, s, |b, b2| self.inter_bit_integral(t, b, b2))
    }

    /// `lim_{t→∞} ∫₀ᵗ Γ_{m,s}`.
    pub fn exponent_limit(&self, m: RegisterState, s: RegisterState) -> Result<f64> {
        self.weighted_sum(m, s, |b, b2| self.inter_bit_integral_limit(b, b2))
    }

    /// Distinct non-zero inter-donor distances, i.e. the times `st/a_B`
    /// where the kernels have kinks.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .terms
            .iter()
            .flatten()
            .map(|k| k.distance)
            .filter(|&l| l >= LENGTH_EPSILON)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        out
    }

    /// Adaptive-quadrature cross-check of [`RateModel::integrated_exponent`].
    pub fn integrated_exponent_quadrature(&self, t: f64, m: RegisterState, s: RegisterState, abs_tol: f64) -> Result<f64> {
        check_nonnegative("time", t)?;
        self.state_weights(m, s)?;
        let q = numerics::integrate(
            |x| self.decoherence_rate(x, m, s).expect("two-qubit model"),
            0.0,
            t,
            &self.breakpoints(),
            abs_tol,
        )?;
        Ok(q.value)
    }
}

/// `γ_{b,b'}(t) / Γ_T` for qubit indices `b`, `b'` (zero-based).
pub fn gamma_inter_bit(t: f64, geometry: &SystemGeometry, b: usize, b2: usize) -> f64 {
    RateModel::new(geometry).inter_bit(t, b, b2)
}

/// `Γ_{m,s}(t) / Γ_T`.
pub fn decoherence_rate(t: f64, geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<f64> {
    RateModel::new(geometry).decoherence_rate(t, m, s)
}

/// `∫₀ᵗ Γ_{m,s}` in units of `Γ_T a_B / s`, from exact antiderivatives.
pub fn integrated_exponent(t: f64, geometry: &SystemGeometry, m: RegisterState, s: RegisterState) -> Result<f64> {
    RateModel::new(geometry).integrated_exponent(t, m, s)
}

/// Sampled rate curve on an ascending time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl RateCurve {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(domain(format!("{} times but {} values", times.len(), values.len())));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("curve times must be strictly increasing"));
        }
        Ok(Self { times, values })
    }

    pub fn sample(times: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(times.to_vec(), times.iter().map(|&t| f(t)).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `n` equally spaced times from 0 to `t_max` inclusive.
pub fn uniform_grid(t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(domain(format!("t_max must be positive, got {t_max}")));
    }
    if n < 2 {
        return Err(domain(format!("a time grid needs at least two points, got {n}")));
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|i| t_max * i as f64 / last).collect())
}

/// The one-excitation pair `(|+,->, |-,+>)`.
pub const ONE_EXCITATION: (RegisterState, RegisterState) = (RegisterState::BASIS[1], RegisterState::BASIS[2]);
/// The two-excitation pair `(|+,+>, |-,->)`.
pub const TWO_EXCITATION: (RegisterState, RegisterState) = (RegisterState::BASIS[0], RegisterState::BASIS[3]);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Preset;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn gamma_vanishes_at_zero_time() {
        assert_eq!(gamma_general(0.0, 0.7, 1.3, 4.0).unwrap(), 0.0);
        assert_eq!(gamma_identical(0.0, 10.0), 0.0);
        assert_eq!(gamma_zero(0.0), 0.0);
    }

    #[test]
    fn gamma_zero_at_unit_time() {
        assert_abs_diff_eq!(gamma_zero(1.0), 13.0 / 6.0 * (-2.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(gamma_zero(1.0), 0.293226, epsilon = 1e-6);
    }

    #[test]
    fn kernel_zero_distance_matches_printed_limit() {
        let k = DonorPairKernel::identical(1.0);
        for t in [0.0, 0.3, 1.0, 2.5, 7.0] {
            assert_abs_diff_eq!(k.rate(t, 0.0), gamma_zero(t), epsilon = 1e-15);
            assert_abs_diff_eq!(k.rate(t, 10.0), gamma_identical(t, 10.0), epsilon = 1e-15);
        }
    }

    #[test]
    fn small_distance_approaches_zero_limit() {
        for t in [0.2, 1.0, 3.0] {
            assert_abs_diff_eq!(gamma_identical(t, 1e-6), gamma_zero(t), epsilon = 1e-8);
        }
    }

    #[test]
    fn near_identical_radii_dispatch() {
        let a = 1.0;
        for t in [5.0, 10.0, 12.0] {
            let got = gamma_general(t, a, a * (1.0 + 1e-5), 10.0).unwrap();
            let mean = a * (1.0 + 5e-6);
            assert_eq!(got, gamma_general(t, mean, mean, 10.0).unwrap());
        }
        // at st = l the rate is G(0)/l with G(0) = 5/(16 a): first order in the
        // radius shift, 5e-6 relative here
        let got = gamma_general(10.0, a, a * (1.0 + 1e-5), 10.0).unwrap();
        assert_relative_eq!(got, gamma_identical(10.0, 10.0), max_relative = 1e-5);
    }

    #[test]
    fn general_rejects_bad_radii() {
        assert!(gamma_general(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(gamma_general(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(gamma_general(-1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn peaks_follow_travel_time() {
        let grid = uniform_grid(40.0, 40001).unwrap();
        let argmax = |f: &dyn Fn(f64) -> f64| {
            grid.iter().copied().max_by(|a, b| f(*a).total_cmp(&f(*b))).unwrap()
        };
        let t0 = argmax(&gamma_zero);
        assert!((0.5..=2.0).contains(&t0), "{t0}");
        let t10 = argmax(&|t| gamma_identical(t, 10.0));
        assert!((9.0..=11.0).contains(&t10), "{t10}");
    }

    #[test]
    fn inter_bit_same_qubit_expansion() {
        let g = Preset::Paper45.geometry();
        let model = RateModel::new(&g);
        for t in [0.5, 1.0, 9.0, 10.0, 13.0] {
            let want = 2.0 * (gamma_zero(t) - gamma_identical(t, 10.0));
            assert_abs_diff_eq!(model.inter_bit(t, 0, 0), want, epsilon = 1e-14);
            assert_abs_diff_eq!(model.inter_bit(t, 1, 1), want, epsilon = 1e-14);
        }
        assert_eq!(model.inter_bit(0.0, 0, 1), 0.0);
    }

    #[test]
    fn perpendicular_inter_bit_vanishes() {
        let model = RateModel::new(&Preset::Perpendicular.geometry());
        for t in uniform_grid(40.0, 801).unwrap() {
            assert_abs_diff_eq!(model.inter_bit(t, 0, 1), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn state_rate_expansions() {
        let model = RateModel::new(&Preset::Paper45.geometry());
        let (a, b) = ONE_EXCITATION;
        let (c, d) = TWO_EXCITATION;
        for t in [1.0, 10.0, 17.0, 24.0] {
            let g11 = model.inter_bit(t, 0, 0);
            let g22 = model.inter_bit(t, 1, 1);
            let g12 = model.inter_bit(t, 0, 1);
            assert_abs_diff_eq!(model.decoherence_rate(t, a, b).unwrap(), g11 + g22 - 2.0 * g12, epsilon = 1e-14);
            assert_abs_diff_eq!(model.decoherence_rate(t, c, d).unwrap(), g11 + g22 + 2.0 * g12, epsilon = 1e-14);
            assert_eq!(model.decoherence_rate(t, a, a).unwrap(), 0.0);
        }
    }

    #[test]
    fn integrated_exponent_cross_check() {
        let model = RateModel::new(&Preset::Paper45.geometry());
        let (m, s) = ONE_EXCITATION;
        for t in [0.0, 0.7, 10.0, 16.53, 30.0, 40.0] {
            let closed = model.integrated_exponent(t, m, s).unwrap();
            let quad = model.integrated_exponent_quadrature(t, m, s, 1e-12).unwrap();
            assert_abs_diff_eq!(closed, quad, epsilon = 1e-10);
        }
        let limit = model.exponent_limit(m, s).unwrap();
        assert!(limit > 0.0 && limit.is_finite());
        assert_abs_diff_eq!(model.integrated_exponent(80.0, m, s).unwrap(), limit, epsilon = 1e-12);
    }

    #[test]
    fn three_qubit_layouts_have_inter_bit_rates_only() {
        let q = |x: f64| crate::geometry::QubitSpec::new(crate::geometry::Vec3::new(x, 0.0, 0.0), crate::geometry::Vec3::new(0.0, 10.0, 0.0)).unwrap();
        let g = SystemGeometry::new(vec![q(0.0), q(30.0), q(60.0)]).unwrap();
        let model = RateModel::new(&g);
        assert_abs_diff_eq!(model.inter_bit(3.0, 0, 2), model.inter_bit(3.0, 2, 0), epsilon = 1e-15);
        let (m, s) = ONE_EXCITATION;
        assert!(model.decoherence_rate(1.0, m, s).is_err());
    }

    #[test]
    fn grid_and_curve_validation() {
        assert!(uniform_grid(0.0, 10).is_err());
        assert!(uniform_grid(1.0, 1).is_err());
        let g = uniform_grid(40.0, 4001).unwrap();
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 40.0);
        assert_eq!(g[100], 1.0);
        assert!(RateCurve::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(RateCurve::new(vec![0.0, 1.0], vec![1.0]).is_err());
    }
}
