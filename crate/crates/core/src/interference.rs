//! Optical Fabry–Pérot formulas and the multi-beam reconstruction of the
//! double-barrier amplitudes.
//!
//! A single barrier at the origin is written as `T = |T| e^{iφ_t}` and
//! `R = |R| e^{iφ_r}` with `φ_t = −kl − φ`, `φ_r = −π/2 − φ` and
//! `φ = atan(K tanh βl)`. Summing the waves bounced between two such
//! barriers gives a geometric series with ratio
//! `q = R₁R₂ e^{i(φ_r1 + φ_r2 + 2kd)} = R₁R₂ e^{2iΦ}`.

use crate::error::{domain, Result};
#[allow(unused_imports)]
use crate::math::Float;
use crate::potential::{Barrier, BarrierFactors, DoubleBarrier};
use crate::units::UnitSystem;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use num_complex::Complex64;

/// An ideal lossless two-mirror cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalCavity {
    reflectivity: f64,
    separation: f64,
}

impl OpticalCavity {
    /// Mirror reflectivity `𝓡 ∈ [0, 1)` and plate separation `d₀ > 0` (any
    /// length unit, matched by the wave number passed later).
    pub fn new(reflectivity: f64, separation: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&reflectivity) {
            return Err(domain("mirror reflectivity", "in [0, 1)", reflectivity));
        }
        if !(separation.is_finite() && separation > 0.0) {
            return Err(domain("plate separation", "positive", separation));
        }
        Ok(Self {
            reflectivity,
            separation,
        })
    }

    pub fn reflectivity(&self) -> f64 {
        self.reflectivity
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }
}

/// `π√𝓡 / (1 − 𝓡)`.
pub fn finesse(reflectivity: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&reflectivity) {
        return Err(domain("mirror reflectivity", "in [0, 1)", reflectivity));
    }
    Ok(PI * reflectivity.sqrt() / (1.0 - reflectivity))
}

pub fn fp_finesse(cav: &OpticalCavity) -> f64 {
    PI * cav.reflectivity.sqrt() / (1.0 - cav.reflectivity)
}

/// `1 / (1 + (2𝓕/π)² sin²(k d₀))`.
pub fn fp_transmission(k: f64, cav: &OpticalCavity) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(domain("wave number", "positive", k));
    }
    let c = 2.0 * fp_finesse(cav) / PI * (k * cav.separation).sin();
    Ok(1.0 / (1.0 + c * c))
}

/// Magnitudes and phases of one barrier's transmission and reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePhaseDecomposition {
    pub transmission: f64,
    pub reflection: f64,
    pub phase_t: f64,
    pub phase_r: f64,
    /// `atan(K tanh βl)`.
    pub phase_aux: f64,
}

impl AmplitudePhaseDecomposition {
    pub fn transmission_amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.transmission, self.phase_t)
    }

    pub fn reflection_amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.reflection, self.phase_r)
    }
}

fn decompose_factors(k: f64, lambda: f64, f: &BarrierFactors) -> AmplitudePhaseDecomposition {
    let norm = f.forward().norm();
    let phase_aux = f.skew.atan2(f.cosh);
    AmplitudePhaseDecomposition {
        transmission: 1.0 / norm,
        reflection: f.reflect / norm,
        phase_t: -k * lambda - phase_aux,
        phase_r: -FRAC_PI_2 - phase_aux,
        phase_aux,
    }
}

/// Polar form of a single barrier placed at the origin.
pub fn decompose(units: &UnitSystem, k: f64, barrier: &Barrier) -> Result<AmplitudePhaseDecomposition> {
    let f = BarrierFactors::tunneling(units, k, barrier)?;
    Ok(decompose_factors(k, units.reduced_length(barrier.length()), &f))
}

fn decompose_pair(
    units: &UnitSystem,
    k: f64,
    db: &DoubleBarrier,
) -> Result<(AmplitudePhaseDecomposition, AmplitudePhaseDecomposition)> {
    db.check_regime(units, k)?;
    Ok((decompose(units, k, &db.first)?, decompose(units, k, &db.second)?))
}

/// How many partial waves to add.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terms {
    /// The geometric-series limit.
    Closed,
    /// The first `n` partial waves, `n ≥ 1`.
    Series(usize),
}

/// The first `n` transmitted partial waves `t₁ … tₙ`, without the
/// `e^{−ik(d+l₁+l₂)}` factor. `t₁ = T₁T₂ e^{i(φ_t1+φ_t2) + ik(d+l₁+l₂)}`.
pub fn partial_waves(units: &UnitSystem, k: f64, db: &DoubleBarrier, n: usize) -> Result<Vec<Complex64>> {
    let (p1, p2) = decompose_pair(units, k, db)?;
    let span = k * units.reduced_length(db.total_length());
    let first = Complex64::from_polar(p1.transmission * p2.transmission, p1.phase_t + p2.phase_t + span);
    let ratio = round_trip(units, k, db, &p1, &p2);
    let mut out = Vec::with_capacity(n);
    let mut t = first;
    for _ in 0..n {
        out.push(t);
        t *= ratio;
    }
    Ok(out)
}

fn round_trip(
    units: &UnitSystem,
    k: f64,
    db: &DoubleBarrier,
    p1: &AmplitudePhaseDecomposition,
    p2: &AmplitudePhaseDecomposition,
) -> Complex64 {
    let kd = k * units.reduced_length(db.gap());
    Complex64::from_polar(p1.reflection * p2.reflection, p1.phase_r + p2.phase_r + 2.0 * kd)
}

/// `T_db` from the partial-wave sum, with the phase factor
/// `e^{−ik(d+l₁+l₂)}` applied in both modes.
pub fn transmission_by_interference(units: &UnitSystem, k: f64, db: &DoubleBarrier, terms: Terms) -> Result<Complex64> {
    let (p1, p2) = decompose_pair(units, k, db)?;
    let ratio = round_trip(units, k, db, &p1, &p2);
    // t₁ e^{−ikL} = T₁T₂ e^{i(φ_t1+φ_t2)}
    let first = Complex64::from_polar(p1.transmission * p2.transmission, p1.phase_t + p2.phase_t);
    let sum = match terms {
        Terms::Closed => first / (1.0 - ratio),
        Terms::Series(n) => {
            if n == 0 {
                return Err(domain("partial-wave count", "at least 1", 0.0));
            }
            let mut acc = Complex64::new(0.0, 0.0);
            let mut t = first;
            for _ in 0..n {
                acc += t;
                t *= ratio;
            }
            acc
        }
    };
    Ok(sum)
}

/// `R_db` from the reflected partial waves.
///
/// The first wave is reflected at barrier 1; the rest cross barrier 1,
/// bounce inside the well and cross back. Reflection off barrier 2 at
/// `a₂` carries `e^{2ika₂}`; reflection off the inner face of barrier 1
/// carries `e^{−2ikl₁}`. Transmission is the same in both directions.
pub fn reflection_by_interference(units: &UnitSystem, k: f64, db: &DoubleBarrier) -> Result<Complex64> {
    let (p1, p2) = decompose_pair(units, k, db)?;
    let l1 = units.reduced_length(db.first.length());
    let a2 = l1 + units.reduced_length(db.gap());
    let r1 = p1.reflection_amplitude();
    let t1 = p1.transmission_amplitude();
    let r2 = p2.reflection_amplitude() * Complex64::from_polar(1.0, 2.0 * k * a2);
    let r1_inner = r1 * Complex64::from_polar(1.0, -2.0 * k * l1);
    let ratio = r2 * r1_inner;
    Ok(r1 + t1 * t1 * r2 / (1.0 - ratio))
}

/// `Φ(k) = kd − ½(φ₁ + φ₂ + π)`; resonances sit at `Φ = mπ`.
pub fn resonance_phase(units: &UnitSystem, k: f64, db: &DoubleBarrier) -> Result<f64> {
    let (p1, p2) = decompose_pair(units, k, db)?;
    Ok(phase_from(units, k, db, &p1, &p2))
}

fn phase_from(
    units: &UnitSystem,
    k: f64,
    db: &DoubleBarrier,
    p1: &AmplitudePhaseDecomposition,
    p2: &AmplitudePhaseDecomposition,
) -> f64 {
    k * units.reduced_length(db.gap()) - 0.5 * (p1.phase_aux + p2.phase_aux + PI)
}

/// `round(Φ/π)`.
pub fn mode_index(phase: f64) -> i64 {
    (phase / PI).round() as i64
}

/// `π√(R₁R₂)/(1 − R₁R₂)` with `Rᵢ = Mᵢ sinh(βᵢlᵢ)/√(1 + Mᵢ² sinh²(βᵢlᵢ))`.
pub fn analytic_finesse(units: &UnitSystem, k: f64, db: &DoubleBarrier) -> Result<f64> {
    db.check_regime(units, k)?;
    let x1 = BarrierFactors::tunneling(units, k, &db.first)?.reflect;
    let x2 = BarrierFactors::tunneling(units, k, &db.second)?.reflect;
    let (q1, q2) = (1.0 + x1 * x1, 1.0 + x2 * x2);
    // 1 − R₁R₂ = (√(q₁q₂) − x₁x₂)/√(q₁q₂), and √(q₁q₂) − x₁x₂ = (q₁q₂ − x₁²x₂²)/(√(q₁q₂) + x₁x₂)
    let root = (q1 * q2).sqrt();
    let gap = (q1 + q2 - 1.0) / (root + x1 * x2);
    Ok(PI * (x1 * x2).sqrt() * root.sqrt() / gap)
}

/// `(T₁T₂/(1 − R₁R₂))²` and `(T₁T₂/(1 + R₁R₂))²` at `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionBounds {
    pub maximum: f64,
    pub minimum: f64,
}

pub fn transmission_extrema(units: &UnitSystem, k: f64, db: &DoubleBarrier) -> Result<TransmissionBounds> {
    let (p1, p2) = decompose_pair(units, k, db)?;
    let tt = p1.transmission * p2.transmission;
    let rr = p1.reflection * p2.reflection;
    let up = tt / (1.0 - rr);
    let down = tt / (1.0 + rr);
    Ok(TransmissionBounds {
        maximum: up * up,
        minimum: down * down,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{double_barrier_solution, single_barrier_solution};

    fn asym() -> DoubleBarrier {
        DoubleBarrier::from_parts(10.6, 1.5, 8.7, 1.0, 7.0).unwrap()
    }

    #[test]
    fn optical_finesse_values() {
        assert!((finesse(0.8).unwrap() - 14.0496).abs() < 1e-4);
        assert_eq!(finesse(0.0).unwrap(), 0.0);
        assert!((finesse(0.25).unwrap() - PI * 0.5 / 0.75).abs() < 1e-15);
        assert!(finesse(1.0).is_err());
        assert!(OpticalCavity::new(1.0, 1.0).is_err());
    }

    #[test]
    fn fp_transmission_cases() {
        let cav = OpticalCavity::new(0.8, 0.02).unwrap();
        let k_res = 3.0 * PI / 0.02;
        assert!((fp_transmission(k_res, &cav).unwrap() - 1.0).abs() < 1e-12);
        let k_anti = 0.5 * PI / 0.02;
        let f = fp_finesse(&cav);
        let expect = 1.0 / (1.0 + (2.0 * f / PI).powi(2));
        assert!((fp_transmission(k_anti, &cav).unwrap() - expect).abs() < 1e-14);
        let open = OpticalCavity::new(0.0, 0.02).unwrap();
        assert_eq!(fp_transmission(123.4, &open).unwrap(), 1.0);
    }

    #[test]
    fn decomposition_of_empty_barrier() {
        let u = UnitSystem::tabulated();
        let p = decompose(&u, 0.9, &Barrier::new(5.0, 0.0).unwrap()).unwrap();
        assert_eq!(p.transmission, 1.0);
        assert_eq!(p.reflection, 0.0);
        assert_eq!(p.phase_t, 0.0);
        assert_eq!(p.phase_r, -FRAC_PI_2);
    }

    #[test]
    fn decomposition_matches_single_barrier() {
        let u = UnitSystem::nominal();
        let b = Barrier::new(10.36, 1.2).unwrap();
        let p = decompose(&u, 1.0, &b).unwrap();
        let s = single_barrier_solution(&u, 1.0, &b).unwrap();
        assert!((p.transmission_amplitude() - s.transmission).norm() < 1e-12);
        assert!((p.reflection_amplitude() - s.reflection).norm() < 1e-12);
        assert!((p.transmission.powi(2) + p.reflection.powi(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_partial_wave() {
        let u = UnitSystem::tabulated();
        let db = asym();
        let k = 1.1;
        let t = partial_waves(&u, k, &db, 3).unwrap();
        let p1 = decompose(&u, k, &db.first).unwrap();
        let p2 = decompose(&u, k, &db.second).unwrap();
        let expect = Complex64::from_polar(
            p1.transmission * p2.transmission,
            p1.phase_t + p2.phase_t + k * u.reduced_length(9.5),
        );
        assert!((t[0] - expect).norm() < 1e-15);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn closed_mode_matches_closed_form() {
        let u = UnitSystem::tabulated();
        for db in [asym(), DoubleBarrier::symmetric(10.36, 1.2, 7.0).unwrap()] {
            for &k in &[0.2, 0.7354, 1.4, 2.5, 2.9] {
                let a = transmission_by_interference(&u, k, &db, Terms::Closed).unwrap();
                let s = double_barrier_solution(&u, k, &db).unwrap();
                assert!((a - s.transmission).norm() < 1e-12, "T at k = {k}");
                let r = reflection_by_interference(&u, k, &db).unwrap();
                assert!((r - s.reflection).norm() < 1e-12, "R at k = {k}");
            }
        }
    }

    #[test]
    fn series_tail_bound() {
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::symmetric(10.36, 1.2, 7.0).unwrap();
        let k = 0.742_007;
        let closed = transmission_by_interference(&u, k, &db, Terms::Closed).unwrap();
        let series = transmission_by_interference(&u, k, &db, Terms::Series(50)).unwrap();
        let p = decompose(&u, k, &db.first).unwrap();
        let rr = p.reflection * p.reflection;
        let bound = p.transmission.powi(2) * rr.powi(50) / (1.0 - rr);
        assert!((closed - series).norm() <= bound * (1.0 + 1e-9));
        assert!(transmission_by_interference(&u, k, &db, Terms::Series(0)).is_err());
    }

    #[test]
    fn phase_identity() {
        let u = UnitSystem::tabulated();
        let db = asym();
        for &k in &[0.1, 1.0, 2.9] {
            let p1 = decompose(&u, k, &db.first).unwrap();
            let p2 = decompose(&u, k, &db.second).unwrap();
            let lhs = p1.phase_t + p2.phase_t - (p1.phase_r + p2.phase_r)
                + k * u.reduced_length(db.first.length() + db.second.length());
            assert!((lhs - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_vanishes_without_barriers() {
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::symmetric(10.36, 0.0, 7.0).unwrap();
        assert!(reflection_by_interference(&u, 1.0, &db).unwrap().norm() < 1e-15);
    }

    #[test]
    fn resonance_phase_properties() {
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::symmetric(10.36, 1.2, 7.0).unwrap();
        let phi = resonance_phase(&u, 0.742_014, &db).unwrap();
        assert!((phi - PI * mode_index(phi) as f64).abs() < 1e-3);
        let near_zero = resonance_phase(&u, 1e-6, &db).unwrap();
        assert!((near_zero + PI).abs() < 1e-3);
        let wide = DoubleBarrier::symmetric(10.36, 1.2, 14.0).unwrap();
        let k = 1.3;
        let diff = resonance_phase(&u, k, &wide).unwrap() - resonance_phase(&u, k, &db).unwrap();
        assert!((diff - k * u.reduced_length(7.0)).abs() < 1e-12);
    }

    #[test]
    fn analytic_finesse_direct_form() {
        let u = UnitSystem::tabulated();
        let db = asym();
        let k = 1.2;
        let p1 = decompose(&u, k, &db.first).unwrap();
        let p2 = decompose(&u, k, &db.second).unwrap();
        let rr = p1.reflection * p2.reflection;
        let direct = PI * rr.sqrt() / (1.0 - rr);
        assert!((analytic_finesse(&u, k, &db).unwrap() / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extrema_bracket_the_rate() {
        let u = UnitSystem::tabulated();
        let db = asym();
        for i in 1..50 {
            let k = 0.06 * i as f64;
            let b = transmission_extrema(&u, k, &db).unwrap();
            let t = double_barrier_solution(&u, k, &db).unwrap().transmission_rate();
            assert!(b.minimum <= t * (1.0 + 1e-12) && t <= b.maximum * (1.0 + 1e-12));
        }
    }
}
