//! Named reference configurations. Every other module and test takes its
//! literature parameters from here.

use crate::interference::OpticalCavity;
use crate::potential::DoubleBarrier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `A = 10.36 eV`, `l = 1.2 Å`, `d = 7 Å`.
    Fig4bSymmetric,
    /// `A₁ = 10.6 eV`, `l₁ = 1.5 Å`, `A₂ = 8.7 eV`, `l₂ = 1.0 Å`, `d = 7 Å`.
    Fig6bAsymmetric,
    /// `A₁ = 9.6 eV`, `l₁ = 1.2 Å`, `A₂ = 25.8 eV`, `l₂ = 0.8 Å`, `d = 7 Å`.
    Fig7bStanding,
    /// The symmetric barrier used for the full `P(k, x)` map.
    StandingSymmetric,
    /// `𝓡 = 0.8`, `d₀ = 2 cm`; wave numbers in `10⁶ m⁻¹`, lengths in m.
    FpOptical,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig4bSymmetric,
        Preset::Fig6bAsymmetric,
        Preset::Fig7bStanding,
        Preset::StandingSymmetric,
        Preset::FpOptical,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig4bSymmetric => "fig4b-symmetric",
            Preset::Fig6bAsymmetric => "fig6b-asymmetric",
            Preset::Fig7bStanding => "fig7b-standing",
            Preset::StandingSymmetric => "standing-symmetric",
            Preset::FpOptical => "fp-optical",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// `(A₁, l₁, A₂, l₂, d)` in eV and Å.
    pub fn parts(&self) -> Option<(f64, f64, f64, f64, f64)> {
        match self {
            Preset::Fig4bSymmetric | Preset::StandingSymmetric => Some((10.36, 1.2, 10.36, 1.2, 7.0)),
            Preset::Fig6bAsymmetric => Some((10.6, 1.5, 8.7, 1.0, 7.0)),
            Preset::Fig7bStanding => Some((9.6, 1.2, 25.8, 0.8, 7.0)),
            Preset::FpOptical => None,
        }
    }

    pub fn double_barrier(&self) -> Option<DoubleBarrier> {
        self.parts().map(|(a1, l1, a2, l2, d)| {
            DoubleBarrier::from_parts(a1, l1, a2, l2, d).expect("preset parameters are valid")
        })
    }

    pub fn cavity(&self) -> Option<OpticalCavity> {
        match self {
            Preset::FpOptical => Some(OpticalCavity::new(0.8, 0.02).expect("preset parameters are valid")),
            _ => None,
        }
    }

    /// Wave-number scale of the optical preset, m⁻¹.
    pub const OPTICAL_K_UNIT: f64 = 1e6;

    /// Positions at which standing-wave slices are reported (Å, or m for
    /// the optical cavity).
    pub fn standing_positions(&self) -> &'static [f64] {
        match self {
            Preset::Fig7bStanding => &[3.25, 4.6],
            Preset::FpOptical => &[0.00503, 0.01],
            Preset::StandingSymmetric => &[3.25, 4.6],
            _ => &[],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()), Some(p));
        }
        assert_eq!(Preset::from_name("nope"), None);
    }

    #[test]
    fn each_preset_is_a_barrier_or_a_cavity() {
        for p in Preset::ALL {
            assert!(p.double_barrier().is_some() ^ p.cavity().is_some());
        }
        assert!(Preset::Fig4bSymmetric.double_barrier().unwrap().is_symmetric());
        assert!(!Preset::Fig6bAsymmetric.double_barrier().unwrap().is_symmetric());
    }
}
