//! Closed-form physics of Landau and free-space Laguerre–Gauss modes.
//!
//! A mode is carried by its real radial profile and its quantum numbers;
//! the azimuthal factor e^{iℓφ} and the longitudinal carrier are never
//! sampled.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{laguerre_unchecked, mode_norm_constant};
use crate::units::{BeamContext, ParticleSpec, Species};

/// Radial index n and orbital angular momentum ℓ. The spin projection is
/// carried by [`ParticleSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n: u32,
    pub ell: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, ell: i32) -> Self {
        Self { n, ell }
    }

    /// 2n + |ℓ| + 1, the prefactor shared by the free-space and magnetic laws.
    pub fn free_prefactor(&self) -> u32 {
        2 * self.n + self.ell.unsigned_abs() + 1
    }
}

/// Integer multiplying b in the Landau spectrum and b/(2k) in the Gouy rate.
///
/// electron: 2n + 1 + |ℓ| + ℓ + 2s_z, positron: 2n + 1 + |ℓ| − ℓ − 2s_z.
pub fn q_factor(qn: QuantumNumbers, particle: ParticleSpec) -> u32 {
    let base = 2 * qn.n as i64 + 1 + qn.ell.unsigned_abs() as i64;
    let orbital_spin = qn.ell as i64 + particle.spin.twice() as i64;
    let q = base - particle.charge_sign() as i64 * orbital_spin;
    debug_assert!(q >= 0 && q % 2 == 0, "q = {q}");
    q as u32
}

/// Relativistic Landau energy √(1 + p_z² + q·b) in units of m.
pub fn landau_energy(qn: QuantumNumbers, particle: ParticleSpec, p_z: f64, b: f64) -> Result<f64> {
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::Domain(format!("b must be >= 0, got {b}")));
    }
    let radicand = 1.0 + p_z * p_z + q_factor(qn, particle) as f64 * b;
    assert!(radicand >= 0.0, "negative radicand {radicand}");
    Ok(radicand.sqrt())
}

/// Eigenvalue of the transverse operator: q·b.
pub fn transverse_eigenvalue(qn: QuantumNumbers, particle: ParticleSpec, b: f64) -> f64 {
    q_factor(qn, particle) as f64 * b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PzComparison {
    /// √(k² − λ)
    pub exact: f64,
    /// k − λ/(2k)
    pub approx: f64,
    pub rel_gap: f64,
}

pub fn paraxial_pz(k: f64, lambda: f64) -> Result<PzComparison> {
    let k2 = k * k;
    if !(lambda < k2) {
        return Err(Error::Paraxiality {
            lambda,
            k_squared: k2,
        });
    }
    let exact = (k2 - lambda).sqrt();
    let approx = k - lambda / (2.0 * k);
    Ok(PzComparison {
        exact,
        approx,
        rel_gap: (exact - approx).abs() / exact,
    })
}

fn lg_profile(qn: QuantumNumbers, width: f64, r: f64) -> f64 {
    let m = qn.ell.unsigned_abs();
    let s = r / width;
    let x = 2.0 * s * s;
    let radial_power = if m == 0 {
        1.0
    } else {
        (std::f64::consts::SQRT_2 * s).powi(m as i32)
    };
    mode_norm_constant(qn.n, qn.ell) / width
        * radial_power
        * laguerre_unchecked(qn.n, m, x)
        * (-s * s).exp()
}

/// Real radial amplitude of the normalized Landau mode with magnetic width `w_m`.
pub fn eval_landau_radial(qn: QuantumNumbers, w_m: f64, r: f64) -> f64 {
    lg_profile(qn, w_m, r)
}

/// Wavefront curvature radius; flat at the waist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curvature {
    Flat,
    Radius(f64),
}

impl Curvature {
    /// 1/R, zero for a flat wavefront.
    pub fn inverse(&self) -> f64 {
        match *self {
            Curvature::Flat => 0.0,
            Curvature::Radius(r) => 1.0 / r,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match *self {
            Curvature::Flat => None,
            Curvature::Radius(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeBeamGeometry {
    pub w0: f64,
    pub z_r: f64,
    pub w_z: f64,
    pub curvature: Curvature,
    /// arctan(z/z_R), without the (2n+|ℓ|+1) prefactor.
    pub gouy_angle: f64,
}

pub fn free_beam_geometry(w0: f64, k: f64, z: f64) -> FreeBeamGeometry {
    let z_r = 0.5 * k * w0 * w0;
    let t = z / z_r;
    let curvature = if z == 0.0 {
        Curvature::Flat
    } else {
        Curvature::Radius(z + z_r * z_r / z)
    };
    FreeBeamGeometry {
        w0,
        z_r,
        w_z: w0 * (1.0 + t * t).sqrt(),
        curvature,
        gouy_angle: t.atan(),
    }
}

/// Complex radial amplitude of the free Laguerre–Gauss beam at (r, z).
pub fn eval_free_lg(qn: QuantumNumbers, w0: f64, k: f64, r: f64, z: f64) -> Complex64 {
    let g = free_beam_geometry(w0, k, z);
    let amplitude = lg_profile(qn, g.w_z, r);
    let phase = 0.5 * k * r * r * g.curvature.inverse() - qn.free_prefactor() as f64 * g.gouy_angle;
    Complex64::from_polar(amplitude, phase)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GouyLawKind {
    LinearMagnetic,
    ArctanFree,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GouyLaw {
    pub q_factor: u32,
    /// dζ/dz (at z = 0 for the arctan law).
    pub rate: f64,
    pub law: GouyLawKind,
    /// Rayleigh length; only meaningful for the arctan law.
    pub z_r: f64,
}

impl GouyLaw {
    pub fn phase_at(&self, z: f64) -> f64 {
        match self.law {
            GouyLawKind::LinearMagnetic => self.rate * z,
            GouyLawKind::ArctanFree => self.q_factor as f64 * (z / self.z_r).atan(),
        }
    }
}

/// ζ = q·b/(2k)·z.
pub fn gouy_law_magnetic(qn: QuantumNumbers, ctx: &BeamContext) -> GouyLaw {
    let q = q_factor(qn, ctx.particle);
    let rate = q as f64 * ctx.b / (2.0 * ctx.k);
    let via_width = 2.0 * q as f64 / (ctx.k * ctx.w_m * ctx.w_m);
    debug_assert!((rate - via_width).abs() <= 8.0 * f64::EPSILON * rate);
    GouyLaw {
        q_factor: q,
        rate,
        law: GouyLawKind::LinearMagnetic,
        z_r: f64::INFINITY,
    }
}

/// ζ = (2n+|ℓ|+1)·arctan(z/z_R).
pub fn gouy_law_free(qn: QuantumNumbers, w0: f64, k: f64) -> GouyLaw {
    let q = qn.free_prefactor();
    let z_r = 0.5 * k * w0 * w0;
    GouyLaw {
        q_factor: q,
        rate: q as f64 / z_r,
        law: GouyLawKind::ArctanFree,
        z_r,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Physicality {
    Physical,
    UnphysicalRotation,
}

/// Lorentz-force rotation sense: ℓ ≥ 0 for electrons, ℓ ≤ 0 for positrons.
pub fn physicality_check(qn: QuantumNumbers, particle: ParticleSpec) -> Physicality {
    let wrong_way = match particle.species {
        Species::Electron => qn.ell < 0,
        Species::Positron => qn.ell > 0,
    };
    if wrong_way {
        Physicality::UnphysicalRotation
    } else {
        Physicality::Physical
    }
}

/// Side-by-side Gouy prefactors of the magnetic and matched free beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correspondence {
    pub magnetic_prefactor: u32,
    pub free_prefactor: u32,
    /// Magnetic rate restricted to the (2n+|ℓ|+1) part: (2n+|ℓ|+1)·2/(k w_m²).
    pub shared_rate: f64,
    /// Initial slope of the matched free beam, (2n+|ℓ|+1)/z_R with w0 = w_m.
    pub free_initial_slope: f64,
    /// Remaining ∓(ℓ + 2s_z)·b/(2k) term of the magnetic rate.
    pub residual_rate: f64,
}

pub fn correspondence(qn: QuantumNumbers, ctx: &BeamContext) -> Correspondence {
    let magnetic = gouy_law_magnetic(qn, ctx);
    let free = gouy_law_free(qn, ctx.w_m, ctx.k);
    let shared_rate = qn.free_prefactor() as f64 * 2.0 / (ctx.k * ctx.w_m * ctx.w_m);
    Correspondence {
        magnetic_prefactor: magnetic.q_factor,
        free_prefactor: free.q_factor,
        shared_rate,
        free_initial_slope: free.rate,
        residual_rate: magnetic.rate - shared_rate,
    }
}

/// Carrier convention of a sampled field: the FW eigenfunction Φ = e^{ikz}Ψ
/// or the paraxial envelope Ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    Fw,
    Paraxial,
}

impl Carrier {
    pub fn as_str(&self) -> &'static str {
        match self {
            Carrier::Fw => "fw",
            Carrier::Paraxial => "paraxial",
        }
    }

    /// Phase factor taking a field from `self` to `target` at position z.
    pub fn conversion_factor(&self, target: Carrier, k: f64, z: f64) -> Complex64 {
        match (self, target) {
            (Carrier::Paraxial, Carrier::Fw) => Complex64::from_polar(1.0, k * z),
            (Carrier::Fw, Carrier::Paraxial) => Complex64::from_polar(1.0, -k * z),
            _ => Complex64::new(1.0, 0.0),
        }
    }
}

impl std::str::FromStr for Carrier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fw" => Ok(Carrier::Fw),
            "paraxial" => Ok(Carrier::Paraxial),
            other => Err(Error::Parse(format!("unknown carrier `{other}`"))),
        }
    }
}
