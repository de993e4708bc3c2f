//! Donor-site layout of a qubit register.
//!
//! Every length is measured in units of the mean Bohr radius `a_B`, so the
//! mean Bohr radius itself is fixed at 1. Qubits are indexed from zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cartesian vector in units of `a_B`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        // hypot keeps the result exact for axis-aligned vectors
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self * rhs.x, self * rhs.y, self * rhs.z)
    }
}

/// Pseudo-spin label of a donor site within its qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PseudoSpin {
    /// `m = -1/2`
    Down,
    /// `m = +1/2`
    Up,
}

impl PseudoSpin {
    pub const BOTH: [PseudoSpin; 2] = [PseudoSpin::Up, PseudoSpin::Down];

    /// The scalar value `±1/2`.
    pub fn value(self) -> f64 {
        match self {
            PseudoSpin::Up => 0.5,
            PseudoSpin::Down => -0.5,
        }
    }

    pub fn from_value(m: f64) -> Result<Self> {
        if m == 0.5 {
            Ok(PseudoSpin::Up)
        } else if m == -0.5 {
            Ok(PseudoSpin::Down)
        } else {
            Err(Error::Domain(format!("pseudo-spin must be +1/2 or -1/2, got {m}")))
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            PseudoSpin::Up => PseudoSpin::Down,
            PseudoSpin::Down => PseudoSpin::Up,
        }
    }
}

impl fmt::Display for PseudoSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PseudoSpin::Up => "+",
            PseudoSpin::Down => "-",
        })
    }
}

/// Register state `|m1, m2>` of two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegisterState {
    pub m1: PseudoSpin,
    pub m2: PseudoSpin,
}

impl RegisterState {
    pub const fn new(m1: PseudoSpin, m2: PseudoSpin) -> Self {
        Self { m1, m2 }
    }

    /// The four register states in the standard basis order
    /// `|+,+>, |+,->, |-,+>, |-,->`.
    pub const BASIS: [RegisterState; 4] = [
        RegisterState::new(PseudoSpin::Up, PseudoSpin::Up),
        RegisterState::new(PseudoSpin::Up, PseudoSpin::Down),
        RegisterState::new(PseudoSpin::Down, PseudoSpin::Up),
        RegisterState::new(PseudoSpin::Down, PseudoSpin::Down),
    ];

    /// Position of this state in [`RegisterState::BASIS`].
    pub fn index(self) -> usize {
        match (self.m1, self.m2) {
            (PseudoSpin::Up, PseudoSpin::Up) => 0,
            (PseudoSpin::Up, PseudoSpin::Down) => 1,
            (PseudoSpin::Down, PseudoSpin::Up) => 2,
            (PseudoSpin::Down, PseudoSpin::Down) => 3,
        }
    }

    pub fn spin(self, qubit: usize) -> PseudoSpin {
        match qubit {
            0 => self.m1,
            1 => self.m2,
            _ => panic!("register has two qubits, got index {qubit}"),
        }
    }
}

impl fmt::Display for RegisterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.m1, self.m2)
    }
}

/// One charge qubit: two donor sites at `center ± axis/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QubitSpecRaw", into = "QubitSpecRaw")]
pub struct QubitSpec {
    center: Vec3,
    axis: Vec3,
    bohr_radius_minus: f64,
    bohr_radius_plus: f64,
    bias_frequency: f64,
}

#[derive(Serialize, Deserialize)]
struct QubitSpecRaw {
    center: Vec3,
    axis: Vec3,
    #[serde(default = "unit")]
    bohr_radius_minus: f64,
    #[serde(default = "unit")]
    bohr_radius_plus: f64,
    #[serde(default)]
    bias_frequency: f64,
}

fn unit() -> f64 {
    1.0
}

impl TryFrom<QubitSpecRaw> for QubitSpec {
    type Error = Error;
    fn try_from(raw: QubitSpecRaw) -> Result<Self> {
        QubitSpec::with_radii(raw.center, raw.axis, raw.bohr_radius_minus, raw.bohr_radius_plus)
            .and_then(|q| q.with_bias_frequency(raw.bias_frequency))
    }
}

impl From<QubitSpec> for QubitSpecRaw {
    fn from(q: QubitSpec) -> Self {
        QubitSpecRaw {
            center: q.center,
            axis: q.axis,
            bohr_radius_minus: q.bohr_radius_minus,
            bohr_radius_plus: q.bohr_radius_plus,
            bias_frequency: q.bias_frequency,
        }
    }
}

impl QubitSpec {
    /// Qubit with both Bohr radii equal to `a_B`.
    pub fn new(center: Vec3, axis: Vec3) -> Result<Self> {
        Self::with_radii(center, axis, 1.0, 1.0)
    }

    pub fn with_radii(center: Vec3, axis: Vec3, radius_minus: f64, radius_plus: f64) -> Result<Self> {
        if !center.is_finite() || !axis.is_finite() {
            return Err(Error::Geometry("qubit vectors must be finite".into()));
        }
        if axis.norm() <= 0.0 {
            return Err(Error::Geometry("qubit axis must have non-zero length".into()));
        }
        for r in [radius_minus, radius_plus] {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Geometry(format!("Bohr radius must be positive, got {r}")));
            }
        }
        Ok(Self {
            center,
            axis,
            bohr_radius_minus: radius_minus,
            bohr_radius_plus: radius_plus,
            bias_frequency: 0.0,
        })
    }

    /// Sets the bias frequency `ω_b` (units `s/a_B`).
    pub fn with_bias_frequency(mut self, omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::Geometry("bias frequency must be finite".into()));
        }
        self.bias_frequency = omega;
        Ok(self)
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    /// Full inter-site vector, pointing from the `-1/2` site to the `+1/2` site.
    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    pub fn bias_frequency(&self) -> f64 {
        self.bias_frequency
    }

    pub fn bohr_radius(&self, m: PseudoSpin) -> f64 {
        match m {
            PseudoSpin::Up => self.bohr_radius_plus,
            PseudoSpin::Down => self.bohr_radius_minus,
        }
    }

    /// Position of the donor site labelled `m`.
    pub fn donor_position(&self, m: PseudoSpin) -> Vec3 {
        self.center + m.value() * self.axis
    }
}

/// A donor site, addressed by its qubit and pseudo-spin label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DonorSite {
    pub qubit: usize,
    pub spin: PseudoSpin,
}

impl fmt::Display for DonorSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}{}", self.qubit + 1, self.spin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SitePairDistance {
    pub first: DonorSite,
    pub second: DonorSite,
    pub length: f64,
}

/// Named layouts used throughout the figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `|r1 - r2| = 20`, `|d| = 10`, 45° between the qubit axes.
    Paper45,
    /// Both axes along the line joining the centers.
    Collinear,
    /// Axes at 90°, second axis along the center line.
    Perpendicular,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Paper45, Preset::Collinear, Preset::Perpendicular];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Paper45 => "paper45",
            Preset::Collinear => "collinear",
            Preset::Perpendicular => "perpendicular",
        }
    }

    pub fn geometry(self) -> SystemGeometry {
        let r1 = Vec3::ZERO;
        let r2 = Vec3::new(20.0, 0.0, 0.0);
        let (d1, d2) = match self {
            Preset::Paper45 => {
                let c = 10.0 * std::f64::consts::FRAC_1_SQRT_2;
                (Vec3::new(0.0, 10.0, 0.0), Vec3::new(-c, c, 0.0))
            }
            Preset::Collinear => (Vec3::new(10.0, 0.0, 0.0), Vec3::new(10.0, 0.0, 0.0)),
            Preset::Perpendicular => (Vec3::new(0.0, 10.0, 0.0), Vec3::new(-10.0, 0.0, 0.0)),
        };
        SystemGeometry::two_qubits(
            QubitSpec::new(r1, d1).expect("preset axes are non-zero"),
            QubitSpec::new(r2, d2).expect("preset axes are non-zero"),
        )
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn preset(name: &str) -> Result<SystemGeometry> {
    name.parse::<Preset>().map(Preset::geometry)
}

/// Ordered list of qubits. Dynamics require exactly two.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemGeometry {
    qubits: Vec<QubitSpec>,
}

impl SystemGeometry {
    pub fn new(qubits: Vec<QubitSpec>) -> Result<Self> {
        if qubits.len() < 2 {
            return Err(Error::Geometry(format!(
                "a register needs at least two qubits, got {}",
                qubits.len()
            )));
        }
        Ok(Self { qubits })
    }

    pub fn two_qubits(first: QubitSpec, second: QubitSpec) -> Self {
        Self { qubits: vec![first, second] }
    }

    /// Two qubits with equal axis length `axis_length`, centers a distance
    /// `center_distance` apart along x, the first axis along y and the second
    /// rotated by `angle_deg` from the first (in the xy plane).
    ///
    /// `angle_deg = 45` reproduces [`Preset::Paper45`] and `angle_deg = 90`
    /// reproduces [`Preset::Perpendicular`] for `center_distance = 20`,
    /// `axis_length = 10`.
    pub fn rotated_pair(center_distance: f64, axis_length: f64, angle_deg: f64) -> Result<Self> {
        let phi = (90.0 + angle_deg).to_radians();
        let (sin, cos) = phi.sin_cos();
        let d2 = Vec3::new(axis_length * snap(cos), axis_length * snap(sin), 0.0);
        Ok(Self::two_qubits(
            QubitSpec::new(Vec3::ZERO, Vec3::new(0.0, axis_length, 0.0))?,
            QubitSpec::new(Vec3::new(center_distance, 0.0, 0.0), d2)?,
        ))
    }

    pub fn qubits(&self) -> &[QubitSpec] {
        &self.qubits
    }

    pub fn qubit(&self, b: usize) -> &QubitSpec {
        &self.qubits[b]
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn require_two_qubits(&self) -> Result<()> {
        if self.qubits.len() == 2 {
            Ok(())
        } else {
            Err(Error::Geometry(format!(
                "dynamics are defined for two qubits, got {}",
                self.qubits.len()
            )))
        }
    }

    pub fn site_position(&self, site: DonorSite) -> Vec3 {
        self.qubits[site.qubit].donor_position(site.spin)
    }

    pub fn site_radius(&self, site: DonorSite) -> f64 {
        self.qubits[site.qubit].bohr_radius(site.spin)
    }

    /// All donor sites, qubit-major, `+1/2` before `-1/2`.
    pub fn sites(&self) -> impl Iterator<Item = DonorSite> + '_ {
        (0..self.qubits.len())
            .flat_map(|qubit| PseudoSpin::BOTH.into_iter().map(move |spin| DonorSite { qubit, spin }))
    }

    /// `|(r_b + m d_b) - (r_b' + s d_b')|`.
    pub fn inter_donor_distance(&self, b: usize, m: PseudoSpin, b2: usize, s: PseudoSpin) -> f64 {
        (self.qubits[b].donor_position(m) - self.qubits[b2].donor_position(s)).norm()
    }

    /// Every unordered pair of distinct donor sites with its separation,
    /// sorted by ascending length (ties keep site order).
    pub fn distance_table(&self) -> Vec<SitePairDistance> {
        let sites: Vec<DonorSite> = self.sites().collect();
        let mut table = Vec::with_capacity(sites.len() * (sites.len() - 1) / 2);
        for (i, &first) in sites.iter().enumerate() {
            for &second in &sites[i + 1..] {
                let length = (self.site_position(first) - self.site_position(second)).norm();
                table.push(SitePairDistance { first, second, length });
            }
        }
        table.sort_by(|a, b| a.length.total_cmp(&b.length));
        table
    }

    pub fn max_inter_donor_distance(&self) -> f64 {
        self.distance_table().last().map_or(0.0, |p| p.length)
    }

    /// Human-readable warnings for layouts that stretch the model's
    /// assumption of well-separated qubits.
    pub fn warnings(&self) -> Vec<String> {
        let max_axis = self.qubits.iter().map(|q| q.axis.norm()).fold(0.0, f64::max);
        let mut out = Vec::new();
        for i in 0..self.qubits.len() {
            for j in i + 1..self.qubits.len() {
                let sep = (self.qubits[i].center - self.qubits[j].center).norm();
                if sep < 3.0 * max_axis {
                    out.push(format!(
                        "qubits {} and {} are {sep:.3} a_B apart, less than 3x the largest axis ({max_axis:.3} a_B)",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        out
    }

    /// Mean Bohr radius over all donor sites.
    pub fn mean_bohr_radius(&self) -> f64 {
        let (sum, n) = self
            .sites()
            .fold((0.0, 0usize), |(s, n), site| (s + self.site_radius(site), n + 1));
        sum / n as f64
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}
