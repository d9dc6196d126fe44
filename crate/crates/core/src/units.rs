//! Natural-unit conventions.
//!
//! Energies are in eV, lengths in Å, times in fs. Wave numbers are stored as
//! multiples of a reference wave number `k_unit` (in m⁻¹). The physics itself
//! is fixed by `k_e = sqrt(2 m_e · 1 eV) / ħ`; when `k_unit == k_e` a wave
//! number `k` carries exactly `k²` eV of kinetic energy.
//!
//! Three systems are provided:
//!
//! * [`UnitSystem::nominal`]: `k_unit = k_e = 5.12289e9 m⁻¹`.
//! * [`UnitSystem::codata`]: `k_unit = k_e` from CODATA 2018 constants
//!   (`≈ 5.123167e9 m⁻¹`).
//! * [`UnitSystem::tabulated`]: CODATA physics with wave numbers reported in
//!   units of `5.12e9 m⁻¹`. This is the convention under which the published
//!   double-barrier resonance and lifetime tables are reproduced digit for
//!   digit.

use crate::error::{domain, Error, Result};
#[allow(unused_imports)]
use crate::math::Float;

/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Electron rest mass, kg (CODATA 2018).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// One ångström in metres.
pub const ANGSTROM: f64 = 1e-10;
/// One femtosecond in seconds.
pub const FEMTOSECOND: f64 = 1e-15;

/// Reference wave number quoted alongside the tables, m⁻¹.
pub const NOMINAL_K_E: f64 = 5.122_89e9;
/// Axis unit of the tabulated resonance data, m⁻¹.
pub const TABULATED_K_UNIT: f64 = 5.12e9;

/// `sqrt(2 m_e · 1 eV) / ħ` from CODATA constants, m⁻¹.
pub fn codata_k_e() -> f64 {
    (2.0 * ELECTRON_MASS * ELEMENTARY_CHARGE).sqrt() / HBAR
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    k_unit: f64,
    k_e: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::nominal()
    }
}

impl UnitSystem {
    /// Build a unit system from the wave-number unit and the physical
    /// `k_e`, both in m⁻¹.
    pub fn new(k_unit: f64, k_e: f64) -> Result<Self> {
        if !(k_unit.is_finite() && k_unit > 0.0) {
            return Err(domain("wave-number unit", "positive and finite", k_unit));
        }
        if !(k_e.is_finite() && k_e > 0.0) {
            return Err(domain("k_e", "positive and finite", k_e));
        }
        Ok(Self { k_unit, k_e })
    }

    pub fn nominal() -> Self {
        Self {
            k_unit: NOMINAL_K_E,
            k_e: NOMINAL_K_E,
        }
    }

    pub fn codata() -> Self {
        let k_e = codata_k_e();
        Self { k_unit: k_e, k_e }
    }

    pub fn tabulated() -> Self {
        Self {
            k_unit: TABULATED_K_UNIT,
            k_e: codata_k_e(),
        }
    }

    /// Wave-number unit in m⁻¹.
    pub fn k_unit(&self) -> f64 {
        self.k_unit
    }

    /// Physical `k_e` in m⁻¹.
    pub fn k_e(&self) -> f64 {
        self.k_e
    }

    /// Kinetic energy (eV) of a particle with `k = 1`.
    pub fn unit_energy(&self) -> f64 {
        let r = self.k_unit / self.k_e;
        r * r
    }

    /// Kinetic energy in eV for wave number `k`.
    pub fn energy(&self, k: f64) -> f64 {
        self.unit_energy() * k * k
    }

    /// `k = sqrt(2 m E) / ħ` expressed in the wave-number unit.
    pub fn wavenumber_from_energy(&self, energy: f64) -> Result<f64> {
        if !(energy.is_finite() && energy > 0.0) {
            return Err(domain("energy", "positive", energy));
        }
        Ok((energy / self.unit_energy()).sqrt())
    }

    /// Dimensionless product `k · (1 Å)` for `k = 1`.
    pub fn length_scale(&self) -> f64 {
        self.k_unit * ANGSTROM
    }

    /// Convert a length in Å into the dimensionless length used with wave
    /// numbers in this system.
    pub fn reduced_length(&self, angstrom: f64) -> f64 {
        angstrom * self.length_scale()
    }

    /// Squared decay constant `2m(A − E)/ħ²` in units of `k_unit²`. Negative
    /// above the barrier.
    pub fn decay_constant_sq(&self, k: f64, height: f64) -> f64 {
        height / self.unit_energy() - k * k
    }

    /// Decay constant `β = sqrt(2m(A − E))/ħ` in the wave-number unit.
    pub fn decay_constant(&self, k: f64, height: f64) -> Result<f64> {
        let energy = self.energy(k);
        if energy >= height {
            return Err(Error::UnsupportedRegime { energy, height });
        }
        Ok(self.decay_constant_sq(k, height).sqrt())
    }

    /// Largest wave number with energy below `height`.
    pub fn tunneling_ceiling(&self, height: f64) -> f64 {
        (height / self.unit_energy()).sqrt()
    }

    /// `m / ħ` in s·m⁻² implied by `k_e` (the mass is `ħ² k_e² / 2 eV`).
    pub fn mass_over_hbar(&self) -> f64 {
        HBAR * self.k_e * self.k_e / (2.0 * ELEMENTARY_CHARGE)
    }

    /// Converts `(1/k) · dθ/dk`, with `k` in the wave-number unit, into fs.
    pub fn time_scale(&self) -> f64 {
        self.mass_over_hbar() / (self.k_unit * self.k_unit) / FEMTOSECOND
    }

    /// Group velocity `ħk/m` in Å/fs.
    pub fn velocity(&self, k: f64) -> f64 {
        k * self.k_unit / self.mass_over_hbar() * FEMTOSECOND / ANGSTROM
    }

    /// `ħ` in eV·s.
    pub fn hbar_ev_s(&self) -> f64 {
        HBAR / ELEMENTARY_CHARGE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nominal_k_e_six_figures() {
        let u = UnitSystem::nominal();
        assert!((u.k_e() / 5.12289e9 - 1.0).abs() < 5e-7);
        assert_eq!(u.unit_energy(), 1.0);
    }

    #[test]
    fn codata_k_e_value() {
        assert!((codata_k_e() / 5.123_167e9 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn wavenumber_examples() {
        let u = UnitSystem::nominal();
        assert!((u.wavenumber_from_energy(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((u.wavenumber_from_energy(4.0).unwrap() - 2.0).abs() < 1e-15);
        // 0.742007² eV
        assert!((u.wavenumber_from_energy(0.550_574).unwrap() - 0.742_007).abs() < 1e-6);
    }

    #[test]
    fn non_positive_energy_rejected() {
        let u = UnitSystem::nominal();
        assert!(matches!(u.wavenumber_from_energy(0.0), Err(Error::Domain { .. })));
        assert!(matches!(u.wavenumber_from_energy(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn mass_is_electron_mass_for_codata() {
        let u = UnitSystem::codata();
        let m = u.mass_over_hbar() * HBAR;
        assert!((m / ELECTRON_MASS - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regime_rejected_at_and_above_height() {
        let u = UnitSystem::nominal();
        assert!(u.decay_constant(2.0, 4.0).is_err());
        assert!(u.decay_constant(2.5, 4.0).is_err());
        assert!((u.decay_constant(1.0, 5.0).unwrap() - 2.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn energy_round_trip(e in 1e-9f64..=100.0) {
            for u in [UnitSystem::nominal(), UnitSystem::codata(), UnitSystem::tabulated()] {
                let k = u.wavenumber_from_energy(e).unwrap();
                prop_assert!((u.energy(k) / e - 1.0).abs() < 1e-12);
            }
        }
    }
}
