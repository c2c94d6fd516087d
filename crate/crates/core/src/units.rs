//! Unit convention and particle/field configuration.
//!
//! Everything is dimensionless with ħ = c = m = 1: lengths are in units of
//! the reduced Compton wavelength, momenta in units of mc, and the magnetic
//! field enters only through `b = |e|B/m²` (the field in units of the
//! critical field).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Species {
    Electron,
    Positron,
}

impl Species {
    /// Sign of the charge: −1 for the electron, +1 for the positron.
    pub fn charge_sign(self) -> i32 {
        match self {
            Species::Electron => -1,
            Species::Positron => 1,
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::Electron => f.write_str("electron"),
            Species::Positron => f.write_str("positron"),
        }
    }
}

impl std::str::FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "electron" => Ok(Species::Electron),
            "positron" => Ok(Species::Positron),
            other => Err(Error::Domain(format!("unknown species `{other}`"))),
        }
    }
}

/// Spin projection s_z, stored as the exact integer 2·s_z ∈ {−1, +1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin(i8);

impl Spin {
    pub const UP: Spin = Spin(1);
    pub const DOWN: Spin = Spin(-1);

    /// Accepts exactly ±0.5.
    pub fn from_f64(s_z: f64) -> Result<Spin> {
        if s_z == 0.5 {
            Ok(Spin::UP)
        } else if s_z == -0.5 {
            Ok(Spin::DOWN)
        } else {
            Err(Error::Domain(format!(
                "s_z must be +1/2 or -1/2, got {s_z}"
            )))
        }
    }

    /// 2·s_z as an exact integer.
    pub fn twice(self) -> i32 {
        self.0 as i32
    }

    pub fn value(self) -> f64 {
        0.5 * self.0 as f64
    }

    pub fn flipped(self) -> Spin {
        Spin(-self.0)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 > 0 {
            f.write_str("+1/2")
        } else {
            f.write_str("-1/2")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParticleSpec {
    pub species: Species,
    pub spin: Spin,
}

impl ParticleSpec {
    pub fn new(species: Species, spin: Spin) -> Self {
        Self { species, spin }
    }

    pub fn electron(spin: Spin) -> Self {
        Self::new(Species::Electron, spin)
    }

    pub fn positron(spin: Spin) -> Self {
        Self::new(Species::Positron, spin)
    }

    pub fn charge_sign(&self) -> i32 {
        self.species.charge_sign()
    }
}

/// Particle plus field and beam parameters, with the derived magnetic width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamContext {
    pub particle: ParticleSpec,
    /// |e|B/m², field in units of the critical field.
    pub b: f64,
    /// Wavenumber P/m.
    pub k: f64,
    /// Magnetic width 2/√b.
    pub w_m: f64,
}

impl BeamContext {
    pub fn new(particle: ParticleSpec, b: f64, k: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::Domain(format!(
                "field strength b must be > 0, got {b}"
            )));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Domain(format!("wavenumber k must be > 0, got {k}")));
        }
        Ok(Self {
            particle,
            b,
            k,
            w_m: 2.0 / b.sqrt(),
        })
    }

    /// λ/k², the paraxiality metric for a transverse eigenvalue λ.
    pub fn paraxiality(&self, lambda: f64) -> f64 {
        lambda / (self.k * self.k)
    }

    /// Exact and first-order longitudinal momenta for a transverse eigenvalue λ.
    pub fn longitudinal_momentum(&self, lambda: f64) -> Result<crate::modes::PzComparison> {
        crate::modes::paraxial_pz(self.k, lambda)
    }
}

pub fn make_context(species: Species, s_z: f64, b: f64, k: f64) -> Result<BeamContext> {
    let spin = Spin::from_f64(s_z)?;
    BeamContext::new(ParticleSpec::new(species, spin), b, k)
}

/// Bridge from SI field values to the dimensionless `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiConversion {
    pub electron_mass_kg: f64,
    pub speed_of_light: f64,
    pub elementary_charge: f64,
    pub hbar: f64,
}

impl SiConversion {
    /// CODATA 2018 values.
    pub const CODATA_2018: SiConversion = SiConversion {
        electron_mass_kg: 9.109_383_701_5e-31,
        speed_of_light: 299_792_458.0,
        elementary_charge: 1.602_176_634e-19,
        hbar: 1.054_571_817e-34,
    };

    pub fn electron_mass_ev(&self) -> f64 {
        self.electron_mass_kg * self.speed_of_light * self.speed_of_light / self.elementary_charge
    }

    /// Critical (Schwinger) field m²c²/(eħ) in tesla.
    pub fn critical_field_tesla(&self) -> f64 {
        let mc = self.electron_mass_kg * self.speed_of_light;
        mc * mc / (self.elementary_charge * self.hbar)
    }

    pub fn to_natural(&self, b_tesla: f64) -> Result<f64> {
        if !(b_tesla.is_finite() && b_tesla >= 0.0) {
            return Err(Error::Domain(format!(
                "B must be finite and >= 0, got {b_tesla} T"
            )));
        }
        Ok(b_tesla / self.critical_field_tesla())
    }
}

impl Default for SiConversion {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

pub fn si_to_natural(b_tesla: f64) -> Result<f64> {
    SiConversion::CODATA_2018.to_natural(b_tesla)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn magnetic_width_examples() {
        let ctx = make_context(Species::Electron, -0.5, 0.01, 1.0).unwrap();
        assert_eq!(ctx.w_m, 20.0);
        assert_eq!(ctx.particle.charge_sign(), -1);
        let ctx = make_context(Species::Electron, -0.5, 4.0, 1.0).unwrap();
        assert_eq!(ctx.w_m, 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            make_context(Species::Positron, 0.5, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(make_context(Species::Positron, 0.5, 0.1, -1.0).is_err());
        assert!(make_context(Species::Positron, 0.5, f64::NAN, 1.0).is_err());
        assert!(make_context(Species::Electron, 1.0, 0.1, 1.0).is_err());
        assert!(make_context(Species::Electron, 0.0, 0.1, 1.0).is_err());
    }

    #[test]
    fn positron_charge_is_positive() {
        let ctx = make_context(Species::Positron, 0.5, 0.01, 1.0).unwrap();
        assert_eq!(ctx.particle.charge_sign(), 1);
        assert_eq!(ctx.particle.spin.twice(), 1);
    }

    #[test]
    fn width_identity() {
        for &b in &[1e-6, 0.01, 0.3, 1.0, 4.0, 17.5] {
            let ctx = make_context(Species::Electron, 0.5, b, 1.0).unwrap();
            let rel = (ctx.w_m * ctx.w_m * b - 4.0).abs() / 4.0;
            assert!(rel < 4.0 * f64::EPSILON, "b = {b}: {rel}");
        }
    }

    #[test]
    fn si_bridge() {
        let conv = SiConversion::CODATA_2018;
        let bc = conv.critical_field_tesla();
        assert_eq!(conv.to_natural(bc).unwrap(), 1.0);
        assert_eq!(si_to_natural(0.0).unwrap(), 0.0);
        assert!(si_to_natural(-1.0).is_err());
        assert!((conv.electron_mass_ev() - 510_998.95).abs() < 0.01);
    }
}
