//! Pure-dephasing evolution of the two-qubit density matrix and its
//! concurrence.
//!
//! Diagonal populations are invariant. Each coherence `<m|ρ|s>` decays as
//! `exp[-2π (T/T_B) E_{m,s}(t)]`, where `E_{m,s}` is the integrated exponent
//! from [`crate::rates`] in units of `Γ_T a_B/s` and `2π` converts `Γ_T` to
//! `ω_B` units.

use std::f64::consts::PI;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::geometry::{RegisterState, SystemGeometry};
use crate::rates::{RateCurve, RateModel, ONE_EXCITATION, TWO_EXCITATION};

const NORM_TOLERANCE: f64 = 1e-12;
const HERMITIAN_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are treated as zero.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Amplitudes `ψ_{m1,m2}` in the order of [`RegisterState::BASIS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitAmplitudes([Complex64; 4]);

impl TwoQubitAmplitudes {
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        if amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonPhysical("amplitudes must be finite".into()));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NonPhysical(format!("amplitudes have squared norm {norm}, expected 1")));
        }
        Ok(Self(amplitudes))
    }

    /// `√p |+,-> + √(1-p) |-,+>`.
    pub fn one_excitation(p: f64) -> Result<Self> {
        check_probability(p)?;
        let mut a = [Complex64::new(0.0, 0.0); 4];
        a[ONE_EXCITATION.0.index()] = Complex64::new(p.sqrt(), 0.0);
        a[ONE_EXCITATION.1.index()] = Complex64::new((1.0 - p).sqrt(), 0.0);
        Ok(Self(a))
    }

    /// `√p |+,+> + √(1-p) |-,->`.
    pub fn two_excitation(p: f64) -> Result<Self> {
        check_probability(p)?;
        let mut a = [Complex64::new(0.0, 0.0); 4];
        a[TWO_EXCITATION.0.index()] = Complex64::new(p.sqrt(), 0.0);
        a[TWO_EXCITATION.1.index()] = Complex64::new((1.0 - p).sqrt(), 0.0);
        Ok(Self(a))
    }

    pub fn amplitude(&self, state: RegisterState) -> Complex64 {
        self.0[state.index()]
    }

    pub fn as_array(&self) -> &[Complex64; 4] {
        &self.0
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(domain(format!("probability must lie in [0, 1], got {p}")))
    }
}

fn check_temperature(ratio: f64) -> Result<()> {
    if ratio >= 0.0 && ratio.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("temperature ratio T/T_B must be non-negative, got {ratio}")))
    }
}

/// Hermitian, unit-trace, positive semidefinite 4×4 matrix in the basis
/// `|+,+>, |+,->, |-,+>, |-,->`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    matrix: Matrix4<Complex64>,
}

impl DensityMatrix4 {
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let deviation = (matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if deviation.is_nan() || deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NonPhysical(format!("matrix is not Hermitian (deviation {deviation:e})")));
        }
        let trace = matrix.trace();
        if !((trace.re - 1.0).abs() <= TRACE_TOLERANCE && trace.im.abs() <= TRACE_TOLERANCE) {
            return Err(Error::NonPhysical(format!("trace is {trace}, expected 1")));
        }
        let rho = Self { matrix };
        let min = rho.min_eigenvalue();
        if min < -PSD_TOLERANCE {
            return Err(Error::NonPhysical(format!("matrix has negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    /// `|ψ><ψ|`.
    pub fn pure(psi: &TwoQubitAmplitudes) -> Self {
        let a = psi.as_array();
        Self { matrix: Matrix4::from_fn(|i, j| a[i] * a[j].conj()) }
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn element(&self, m: RegisterState, s: RegisterState) -> Complex64 {
        self.matrix[(m.index(), s.index())]
    }

    fn eigen(&self) -> SymmetricEigen<Complex64, nalgebra::U4> {
        // symmetrize so rounding in the lower triangle cannot leak in
        let h = (self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h)
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut v: [f64; 4] = self.eigen().eigenvalues.into();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Wootters concurrence `max(0, λ1 - λ2 - λ3 - λ4)`.
///
/// The `λ_i` are computed as the singular values of `τ = Wᵀ (σy⊗σy) W`
/// with `ρ = W W†`, which equal the square roots of the eigenvalues of
/// `ρ (σy⊗σy) ρ* (σy⊗σy)` without squaring the rounding error.
pub fn wootters_concurrence(rho: &DensityMatrix4) -> f64 {
    let eig = rho.eigen();
    let mut w = eig.eigenvectors;
    for (j, &mu) in eig.eigenvalues.iter().enumerate() {
        let scale = if mu > 0.0 { mu.sqrt() } else { 0.0 };
        for i in 0..4 {
            w[(i, j)] *= Complex64::new(scale, 0.0);
        }
    }
    let tau = w.transpose() * spin_flip() * w;
    let mut lambda: [f64; 4] = tau.singular_values().into();
    lambda.sort_by(|a, b| b.total_cmp(a));
    (lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0)
}

/// Validates a raw matrix and returns its Wootters concurrence.
pub fn wootters_concurrence_of(matrix: Matrix4<Complex64>) -> Result<f64> {
    DensityMatrix4::new(matrix).map(|rho| wootters_concurrence(&rho))
}

fn spin_flip() -> Matrix4<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut y = Matrix4::zeros();
    y[(0, 3)] = -one;
    y[(1, 2)] = one;
    y[(2, 1)] = one;
    y[(3, 0)] = -one;
    y
}

/// Source of the coherent phases `Δ_{m,s}(t)` (radians).
///
/// Implementations must be antisymmetric: `Δ_{s,m} = -Δ_{m,s}`.
pub trait PhaseModel {
    fn phase(&self, t: f64, m: RegisterState, s: RegisterState) -> Result<f64>;
}

/// How coherent phases enter [`TwoQubitSystem::evolve_density_matrix`].
#[derive(Clone, Copy)]
pub enum PhaseMode<'a> {
    /// No bias rotation and `Δ = 0`; exact for every modulus-only quantity.
    Zero,
    /// Bias rotation `exp(-i Σ_b (m_b - s_b) ω_b t)` plus `exp(iΔ)` from the model.
    Physical(&'a dyn PhaseModel),
}

/// Interior extremum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub time: f64,
    pub value: f64,
    /// Sign of `value`: `+1`, `-1`, or `0`.
    pub sign: i8,
    pub is_maximum: bool,
}

/// Every interior local extremum by three-point comparison, refined by the
/// vertex of the parabola through the three samples.
pub fn local_extrema(curve: &RateCurve) -> Vec<Extremum> {
    let (t, v) = (curve.times(), curve.values());
    let mut out = Vec::new();
    if t.len() < 3 {
        return out;
    }
    for i in 1..t.len() - 1 {
        let is_max = v[i] > v[i - 1] && v[i] >= v[i + 1];
        let is_min = v[i] < v[i - 1] && v[i] <= v[i + 1];
        if !(is_max || is_min) {
            continue;
        }
        let (time, value) = parabolic_vertex((t[i - 1], v[i - 1]), (t[i], v[i]), (t[i + 1], v[i + 1]));
        let sign = if value > 0.0 {
            1
        } else if value < 0.0 {
            -1
        } else {
            0
        };
        out.push(Extremum { time, value, sign, is_maximum: is_max });
    }
    out
}

/// Rate peaks: positive maxima and negative minima whose magnitude exceeds
/// `1e-9` of the curve's largest magnitude.
///
/// Same-signed extrema between two peaks of equal sign (e.g. the shallow
/// negative maximum separating two negative dips) are not peaks and are
/// dropped. A flat curve yields no peaks.
pub fn find_extrema(curve: &RateCurve) -> Vec<Extremum> {
    find_extrema_above(curve, 1e-9)
}

/// [`find_extrema`] with peaks below `relative_threshold` times the largest
/// magnitude discarded, for curves carrying quadrature noise.
pub fn find_extrema_above(curve: &RateCurve, relative_threshold: f64) -> Vec<Extremum> {
    let scale = curve.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    local_extrema(curve)
        .into_iter()
        .filter(|e| e.value.abs() > relative_threshold * scale && (e.is_maximum == (e.sign > 0)))
        .collect()
}

fn parabolic_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> (f64, f64) {
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if curvature == 0.0 || !curvature.is_finite() {
        return (x1, y1);
    }
    // p(x) = y1 + b (x - x1) + c (x - x1)^2, with b the slope at x1
    let b = d01 + curvature * (x1 - x0);
    let dx = (-b / (2.0 * curvature)).clamp(x0 - x1, x2 - x1);
    (x1 + dx, y1 + b * dx + curvature * dx * dx)
}

/// Concurrence samples on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Two qubits with their precomputed rate model.
#[derive(Debug, Clone)]
pub struct TwoQubitSystem {
    geometry: SystemGeometry,
    rates: RateModel,
}

impl TwoQubitSystem {
    pub fn new(geometry: SystemGeometry) -> Result<Self> {
        geometry.require_two_qubits()?;
        let rates = RateModel::new(&geometry);
        Ok(Self { geometry, rates })
    }

    pub fn geometry(&self) -> &SystemGeometry {
        &self.geometry
    }

    pub fn rates(&self) -> &RateModel {
        &self.rates
    }

    /// `exp[-2π (T/T_B) E_{m,s}(t)]`; `1` on the diagonal.
    pub fn coherence_factor(&self, t: f64, m: RegisterState, s: RegisterState, temperature_ratio: f64) -> Result<f64> {
        check_temperature(temperature_ratio)?;
        if m == s {
            return Ok(1.0);
        }
        let exponent = self.rates.integrated_exponent(t, m, s)?;
        Ok((-2.0 * PI * temperature_ratio * exponent).exp())
    }

    /// `|<m|ρ_S(t)|s>| = |ψ_m ψ_s*| exp[-2π (T/T_B) E_{m,s}(t)]`.
    pub fn offdiagonal_magnitude(
        &self,
        t: f64,
        m: RegisterState,
        s: RegisterState,
        psi: &TwoQubitAmplitudes,
        temperature_ratio: f64,
    ) -> Result<f64> {
        let weight = psi.amplitude(m).norm() * psi.amplitude(s).norm();
        Ok(weight * self.coherence_factor(t, m, s, temperature_ratio)?)
    }

    fn sector_concurrence(&self, t: f64, pair: (RegisterState, RegisterState), p: f64, temperature_ratio: f64) -> Result<f64> {
        check_probability(p)?;
        let amplitude = 2.0 * (p * (1.0 - p)).sqrt();
        Ok(amplitude * self.coherence_factor(t, pair.0, pair.1, temperature_ratio)?)
    }

    /// `C(t) = 2√(p(1-p)) exp[-2π (T/T_B) E₁(t)]` for `√p|+,-> + √(1-p)|-,+>`.
    pub fn concurrence_one_excitation(&self, t: f64, p: f64, temperature_ratio: f64) -> Result<f64> {
        self.sector_concurrence(t, ONE_EXCITATION, p, temperature_ratio)
    }

    /// Same as [`Self::concurrence_one_excitation`] for `√p|+,+> + √(1-p)|-,->`.
    pub fn concurrence_two_excitation(&self, t: f64, p: f64, temperature_ratio: f64) -> Result<f64> {
        self.sector_concurrence(t, TWO_EXCITATION, p, temperature_ratio)
    }

    /// Large-time concurrence of a one- or two-excitation state.
    pub fn plateau_concurrence(&self, pair: (RegisterState, RegisterState), p: f64, temperature_ratio: f64) -> Result<f64> {
        check_probability(p)?;
        check_temperature(temperature_ratio)?;
        let limit = self.rates.exponent_limit(pair.0, pair.1)?;
        Ok(2.0 * (p * (1.0 - p)).sqrt() * (-2.0 * PI * temperature_ratio * limit).exp())
    }

    /// Time beyond which every kernel has decayed: `(l_max + 10 a_B)/s`.
    pub fn plateau_horizon(&self) -> f64 {
        self.geometry.max_inter_donor_distance() + 10.0
    }

    /// `ρ_S(t)` for the initial pure state `psi`.
    pub fn evolve_density_matrix(
        &self,
        t: f64,
        psi: &TwoQubitAmplitudes,
        temperature_ratio: f64,
        phases: PhaseMode<'_>,
    ) -> Result<DensityMatrix4> {
        check_temperature(temperature_ratio)?;
        if t.is_nan() || t < 0.0 {
            return Err(domain(format!("time must be non-negative, got {t}")));
        }
        let mut matrix = DensityMatrix4::pure(psi).matrix;
        for (i, &m) in RegisterState::BASIS.iter().enumerate() {
            for (j, &s) in RegisterState::BASIS.iter().enumerate().skip(i + 1) {
                if matrix[(i, j)] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut z = matrix[(i, j)] * self.coherence_factor(t, m, s, temperature_ratio)?;
                if let PhaseMode::Physical(model) = phases {
                    let bias: f64 = (0..2)
                        .map(|b| (m.spin(b).value() - s.spin(b).value()) * self.geometry.qubit(b).bias_frequency())
                        .sum();
                    let phase = -bias * t + model.phase(t, m, s)?;
                    z *= Complex64::from_polar(1.0, phase);
                }
                matrix[(i, j)] = z;
                matrix[(j, i)] = z.conj();
            }
        }
        DensityMatrix4::new(matrix)
    }

    pub fn rate_curve(&self, times: &[f64], m: RegisterState, s: RegisterState) -> Result<RateCurve> {
        let values = times.iter().map(|&t| self.rates.decoherence_rate(t, m, s)).collect::<Result<Vec<_>>>()?;
        RateCurve::new(times.to_vec(), values)
    }

    pub fn concurrence_curve(&self, times: &[f64], pair: (RegisterState, RegisterState), p: f64, temperature_ratio: f64) -> Result<ConcurrenceCurve> {
        let values = times
            .iter()
            .map(|&t| self.sector_concurrence(t, pair, p, temperature_ratio))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConcurrenceCurve { times: times.to_vec(), values })
    }
}

/// `Δ ≡ 0`. Under [`PhaseMode::Physical`] only the bias rotation remains.
pub struct NoPhase;

impl PhaseModel for NoPhase {
    fn phase(&self, _t: f64, _m: RegisterState, _s: RegisterState) -> Result<f64> {
        Ok(0.0)
    }
}
