//! Closed-form inter-donor kernels.
//!
//! For a donor pair with Bohr radii `a`, `a'` at distance `l`, the
//! inter-donor rate is
//!
//! ```text
//! γ(t; a, a', l) = (1/l) [G(|l - st|) - G(l + st)]
//! ```
//!
//! where `G(u)` is a sum of (polynomial in `u`) · `exp(-2u/a)` terms. All
//! time integrals therefore follow from exact antiderivatives. The `l → 0`
//! limit is `-2 G'(st)`.

/// Radii closer than this are treated as identical.
pub const RADIUS_EPSILON: f64 = 1e-4;
/// Distances below this use the zero-distance limit.
pub const LENGTH_EPSILON: f64 = 1e-9;

/// `p(u) · exp(-decay · u)`, with `p` of degree at most three.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyExp {
    /// Ascending coefficients `p(u) = c0 + c1 u + c2 u² + c3 u³`.
    pub coeffs: [f64; 4],
    pub decay: f64,
}

impl PolyExp {
    pub const ZERO: PolyExp = PolyExp { coeffs: [0.0; 4], decay: 1.0 };

    fn poly(coeffs: &[f64; 4], u: f64) -> f64 {
        ((coeffs[3] * u + coeffs[2]) * u + coeffs[1]) * u + coeffs[0]
    }

    fn poly_derivative(coeffs: &[f64; 4]) -> [f64; 4] {
        [coeffs[1], 2.0 * coeffs[2], 3.0 * coeffs[3], 0.0]
    }

    pub fn value(&self, u: f64) -> f64 {
        Self::poly(&self.coeffs, u) * (-self.decay * u).exp()
    }

    pub fn derivative(&self) -> PolyExp {
        let dp = Self::poly_derivative(&self.coeffs);
        let mut coeffs = [0.0; 4];
        for k in 0..4 {
            coeffs[k] = dp[k] - self.decay * self.coeffs[k];
        }
        PolyExp { coeffs, decay: self.decay }
    }

    /// The antiderivative that vanishes at `u → ∞`:
    /// `-exp(-c u) Σ_k p^(k)(u) / c^(k+1)`.
    pub fn primitive(&self, u: f64) -> f64 {
        let mut p = self.coeffs;
        let mut scale = 1.0 / self.decay;
        let mut sum = 0.0;
        for _ in 0..4 {
            sum += Self::poly(&p, u) * scale;
            p = Self::poly_derivative(&p);
            scale /= self.decay;
        }
        -sum * (-self.decay * u).exp()
    }
}

/// The profile `G(u)` of one donor pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DonorPairKernel {
    terms: [PolyExp; 2],
    /// `G'` term by term, with coefficients formed analytically so that
    /// `G'(0) = 0` holds exactly.
    slopes: [PolyExp; 2],
}

impl DonorPairKernel {
    /// Kernel for radii `a`, `a'` (units of `a_B`, both positive).
    ///
    /// Radii closer than [`RADIUS_EPSILON`] use the identical-donor profile
    /// at their mean radius.
    pub fn new(a: f64, a2: f64) -> Self {
        debug_assert!(a > 0.0 && a2 > 0.0);
        if (a - a2).abs() < RADIUS_EPSILON {
            Self::identical(0.5 * (a + a2))
        } else {
            let diff = a * a - a2 * a2;
            let slope0 = 4.0 * a * a * a2 * a2 / (diff * diff * diff);
            let slope = |r: f64, pre: f64, c0: f64| PolyExp { coeffs: [c0, -2.0 * pre / r, 0.0, 0.0], decay: 2.0 / r };
            let (t1, t2) = (Self::mixed_term(a, a2), Self::mixed_term(a2, a));
            Self { terms: [t1, t2], slopes: [slope(a, t1.coeffs[1], slope0), slope(a2, t2.coeffs[1], -slope0)] }
        }
    }

    /// Identical radii `a`: `(1/a)[u³/6a³ + u²/2a² + 5u/8a + 5/16] exp(-2u/a)`.
    pub fn identical(a: f64) -> Self {
        let inv = 1.0 / a;
        let term = PolyExp {
            coeffs: [
                5.0 / 16.0 * inv,
                5.0 / 8.0 * inv * inv,
                0.5 * inv * inv * inv,
                inv * inv * inv * inv / 6.0,
            ],
            decay: 2.0 * inv,
        };
        // (1/a²)[P'(v) - 2P(v)] e^{-2v} with v = u/a
        let slope = PolyExp {
            coeffs: [0.0, -0.25 * inv.powi(3), -0.5 * inv.powi(4), -inv.powi(5) / 3.0],
            decay: 2.0 * inv,
        };
        Self { terms: [term, PolyExp::ZERO], slopes: [slope, PolyExp::ZERO] }
    }

    /// `(a/(a² - a'²))² [u + (a/2)(a² - 5a'²)/(a² - a'²)] exp(-2u/a)`
    fn mixed_term(a: f64, a2: f64) -> PolyExp {
        let diff = a * a - a2 * a2;
        let pre = (a / diff).powi(2);
        PolyExp {
            coeffs: [pre * 0.5 * a * (a * a - 5.0 * a2 * a2) / diff, pre, 0.0, 0.0],
            decay: 2.0 / a,
        }
    }

    pub fn profile(&self, u: f64) -> f64 {
        self.terms[0].value(u) + self.terms[1].value(u)
    }

    pub fn profile_derivative(&self, u: f64) -> f64 {
        self.slopes[0].value(u) + self.slopes[1].value(u)
    }

    fn primitive(&self, u: f64) -> f64 {
        self.terms[0].primitive(u) + self.terms[1].primitive(u)
    }

    /// `γ(t; a, a', l) / Γ_T` at dimensionless time `x = st/a_B`.
    pub fn rate(&self, x: f64, l: f64) -> f64 {
        if l < LENGTH_EPSILON {
            -2.0 * self.profile_derivative(x)
        } else {
            (self.profile((l - x).abs()) - self.profile(l + x)) / l
        }
    }

    /// `∫₀ˣ γ(x'; a, a', l) dx' / Γ_T`.
    pub fn integral(&self, x: f64, l: f64) -> f64 {
        if l < LENGTH_EPSILON {
            return -2.0 * (self.profile(x) - self.profile(0.0));
        }
        let q0 = self.primitive(0.0);
        let ql = self.primitive(l);
        let forward = if x <= l {
            ql - self.primitive(l - x)
        } else {
            (ql - q0) + (self.primitive(x - l) - q0)
        };
        let backward = self.primitive(l + x) - ql;
        (forward - backward) / l
    }

    /// `lim_{x→∞} ∫₀ˣ γ dx' / Γ_T`.
    pub fn integral_limit(&self, l: f64) -> f64 {
        if l < LENGTH_EPSILON {
            2.0 * self.profile(0.0)
        } else {
            2.0 * (self.primitive(l) - self.primitive(0.0)) / l
        }
    }
}
