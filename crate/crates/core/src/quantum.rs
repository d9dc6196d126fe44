//! Closed-form stationary scattering through square barriers.
//!
//! The incident wave `e^{ikx}` has unit amplitude. For the double barrier
//! the wave function is
//!
//! ```text
//! x < a₁        e^{ikx} + R e^{-ikx}
//! a₁ < x < b₁   c₁ e^{β₁x} + d₁ e^{-β₁x}
//! b₁ < x < a₂   α e^{ikx} + γ e^{-ikx}
//! a₂ < x < b₂   c₂ e^{β₂x} + d₂ e^{-β₂x}
//! x > b₂        T e^{ikx}
//! ```
//!
//! with `a₁ = 0`. Positions inside these exponents are reduced lengths (see
//! [`UnitSystem::reduced_length`]).

use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::Float;
use crate::potential::{check_wavenumber, Barrier, BarrierFactors, DoubleBarrier, Kinematics};
use crate::units::UnitSystem;
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitudes inside a double barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorAmplitudes {
    pub c1: Complex64,
    pub d1: Complex64,
    pub alpha: Complex64,
    pub gamma: Complex64,
    pub c2: Complex64,
    pub d2: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringSolution {
    pub k: f64,
    pub transmission: Complex64,
    pub reflection: Complex64,
    pub interior: Option<InteriorAmplitudes>,
}

impl ScatteringSolution {
    /// `|T|²`.
    pub fn transmission_rate(&self) -> f64 {
        self.transmission.norm_sqr()
    }

    /// `|R|²`.
    pub fn reflection_rate(&self) -> f64 {
        self.reflection.norm_sqr()
    }
}

/// Residuals of the flux identities of a solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxReport {
    /// `|T|² + |R|² − 1`.
    pub unitarity: f64,
    /// `|T|² − (|α|² − |γ|²)`, double barriers only.
    pub interior: Option<f64>,
}

impl FluxReport {
    pub fn max_residual(&self) -> f64 {
        self.unitarity.abs().max(self.interior.map_or(0.0, f64::abs))
    }
}

pub fn verify_flux_conservation(sol: &ScatteringSolution) -> FluxReport {
    let t2 = sol.transmission_rate();
    FluxReport {
        unitarity: t2 + sol.reflection_rate() - 1.0,
        interior: sol.interior.map(|a| t2 - (a.alpha.norm_sqr() - a.gamma.norm_sqr())),
    }
}

/// Transmission and reflection of a single barrier occupying `[0, l]`.
pub fn single_barrier_solution(units: &UnitSystem, k: f64, barrier: &Barrier) -> Result<ScatteringSolution> {
    let f = BarrierFactors::tunneling(units, k, barrier)?;
    let lambda = units.reduced_length(barrier.length());
    let c = f.forward();
    Ok(ScatteringSolution {
        k,
        transmission: Complex64::from_polar(1.0, -k * lambda) / c,
        reflection: -I * f.reflect / c,
        interior: None,
    })
}

/// Transmission rate over a square well of depth `depth` (eV) and width
/// `width` (Å): `1 / (1 + ¼(k/β − β/k)² sin²(βL))` with
/// `β = sqrt(2m(A + E))/ħ`.
pub fn well_transmission_rate(units: &UnitSystem, k: f64, depth: f64, width: f64) -> Result<f64> {
    check_wavenumber(k)?;
    if !(depth.is_finite() && depth > 0.0) {
        return Err(crate::error::domain("well depth", "positive", depth));
    }
    if !(width.is_finite() && width >= 0.0) {
        return Err(crate::error::domain("well width", "non-negative", width));
    }
    let beta = (depth / units.unit_energy() + k * k).sqrt();
    let mismatch = k / beta - beta / k;
    let s = (beta * units.reduced_length(width)).sin();
    Ok(1.0 / (1.0 + 0.25 * mismatch * mismatch * s * s))
}

/// The denominator `F[k; β₁, β₂; d; l₁, l₂]`.
fn denominator(first: &BarrierFactors, second: &BarrierFactors, kd: f64) -> Complex64 {
    let ahead = Complex64::from_polar(1.0, kd);
    ahead * (first.reflect * second.reflect) + ahead.conj() * first.forward() * second.forward()
}

/// Full closed-form solution of the double barrier, including every
/// interior amplitude.
pub fn double_barrier_solution(units: &UnitSystem, k: f64, db: &DoubleBarrier) -> Result<ScatteringSolution> {
    db.check_regime(units, k)?;
    let f1 = BarrierFactors::tunneling(units, k, &db.first)?;
    let f2 = BarrierFactors::tunneling(units, k, &db.second)?;
    let beta1 = units.decay_constant(k, db.first.height())?;
    let beta2 = units.decay_constant(k, db.second.height())?;

    let l1 = units.reduced_length(db.first.length());
    let gap = units.reduced_length(db.gap());
    let total = units.reduced_length(db.total_length());
    let kd = k * gap;

    let inv_f = denominator(&f1, &f2, kd).inv();
    let ahead = Complex64::from_polar(1.0, kd);
    let behind = ahead.conj();
    let c2_fwd = f2.forward();

    let transmission = Complex64::from_polar(1.0, -k * total) * inv_f;
    let reflection = -I * inv_f * (behind * c2_fwd * f1.reflect + ahead * f1.forward().conj() * f2.reflect);

    let alpha = Complex64::from_polar(1.0, -k * (gap + l1)) * c2_fwd * inv_f;
    let gamma = -I * Complex64::from_polar(1.0, k * (gap + l1)) * f2.reflect * inv_f;

    let ik2 = I * (k / beta2);
    let e2 = (beta2 * total).exp();
    let c2 = 0.5 / e2 * (1.0 + ik2) * inv_f;
    let d2 = 0.5 * e2 * (1.0 - ik2) * inv_f;

    let ik1 = I * (k / beta1);
    let e1 = (beta1 * l1).exp();
    let c1 = 0.5 / e1 * ((1.0 + ik1) * behind * c2_fwd - I * (1.0 - ik1) * ahead * f2.reflect) * inv_f;
    let d1 = 0.5 * e1 * ((1.0 - ik1) * behind * c2_fwd - I * (1.0 + ik1) * ahead * f2.reflect) * inv_f;

    let interior = InteriorAmplitudes {
        c1,
        d1,
        alpha,
        gamma,
        c2,
        d2,
    };
    let finite = [c1, d1, c2, d2].iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite {
        return Err(Error::Overflow {
            exponent: beta2 * total,
            limit: crate::potential::OVERFLOW_GUARD,
        });
    }

    Ok(ScatteringSolution {
        k,
        transmission,
        reflection,
        interior: Some(interior),
    })
}

/// `|T_db|²` continued analytically past the barrier tops (`β → iq`).
///
/// Agrees with [`double_barrier_solution`] in the tunneling regime and stays
/// finite at `E = Aᵢ`. Used where a half-maximum crossing lies above the
/// lower barrier.
pub fn transmission_rate_continued(units: &UnitSystem, k: f64, db: &DoubleBarrier) -> Result<f64> {
    let f1 = BarrierFactors::continued(units, k, &db.first)?;
    let f2 = BarrierFactors::continued(units, k, &db.second)?;
    let kd = k * units.reduced_length(db.gap());
    Ok(1.0 / denominator(&f1, &f2, kd).norm_sqr())
}

/// Wave function and its derivative (with respect to the reduced
/// coordinate) at position `x` (Å) for the double barrier.
pub fn double_barrier_wavefunction(
    units: &UnitSystem,
    k: f64,
    db: &DoubleBarrier,
    x: f64,
) -> Result<(Complex64, Complex64)> {
    let sol = double_barrier_solution(units, k, db)?;
    let amps = sol.interior.expect("double barrier carries interior amplitudes");
    let [_, b1, a2, b2] = db.interfaces();
    let xr = units.reduced_length(x);
    let plane = |fwd: Complex64, back: Complex64| {
        let e = Complex64::from_polar(1.0, k * xr);
        let psi = fwd * e + back * e.conj();
        let dpsi = I * k * (fwd * e - back * e.conj());
        (psi, dpsi)
    };
    let evanescent = |beta: f64, c: Complex64, d: Complex64| {
        let e = (beta * xr).exp();
        let psi = c * e + d / e;
        let dpsi = beta * (c * e - d / e);
        (psi, dpsi)
    };
    Ok(if x <= 0.0 {
        plane(Complex64::new(1.0, 0.0), sol.reflection)
    } else if x <= b1 {
        let kin = Kinematics::new(units, k, db.first.height())?;
        evanescent(kin.beta, amps.c1, amps.d1)
    } else if x <= a2 {
        plane(amps.alpha, amps.gamma)
    } else if x <= b2 {
        let kin = Kinematics::new(units, k, db.second.height())?;
        evanescent(kin.beta, amps.c2, amps.d2)
    } else {
        plane(sol.transmission, Complex64::new(0.0, 0.0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table_symmetric() -> DoubleBarrier {
        DoubleBarrier::symmetric(10.36, 1.2, 7.0).unwrap()
    }

    #[test]
    fn empty_barrier_is_transparent() {
        let u = UnitSystem::nominal();
        let s = single_barrier_solution(&u, 0.8, &Barrier::new(3.0, 0.0).unwrap()).unwrap();
        assert!((s.transmission - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(s.reflection.norm() < 1e-15);
    }

    #[test]
    fn single_barrier_rate_formula() {
        let u = UnitSystem::nominal();
        let b = Barrier::new(10.36, 1.2).unwrap();
        let k = 0.742_007;
        let s = single_barrier_solution(&u, k, &b).unwrap();
        let kin = Kinematics::new(&u, k, 10.36).unwrap();
        let ms = kin.m * (kin.beta * u.reduced_length(1.2)).sinh();
        assert!((s.transmission_rate() - 1.0 / (1.0 + ms * ms)).abs() < 1e-14);
    }

    #[test]
    fn single_barrier_outside_regime() {
        let u = UnitSystem::nominal();
        let b = Barrier::new(1.0, 1.0).unwrap();
        assert!(matches!(
            single_barrier_solution(&u, 1.0, &b),
            Err(Error::UnsupportedRegime { .. })
        ));
    }

    #[test]
    fn well_resonance_and_quarter_wave() {
        use core::f64::consts::PI;
        let u = UnitSystem::nominal();
        let (k, depth) = (1.0, 3.0);
        let beta = (depth + k * k).sqrt();
        let full = PI / (beta * u.length_scale());
        assert!((well_transmission_rate(&u, k, depth, full).unwrap() - 1.0).abs() < 1e-14);
        let quarter = full / 2.0;
        let expect = 1.0 / (1.0 + 0.25 * (k / beta - beta / k).powi(2));
        assert!((well_transmission_rate(&u, k, depth, quarter).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn merged_barrier_degeneration() {
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::symmetric(10.36, 1.2, 0.0).unwrap();
        let merged = Barrier::new(10.36, 2.4).unwrap();
        for &k in &[0.2, 0.9, 1.7, 3.1] {
            let t2 = double_barrier_solution(&u, k, &db).unwrap().transmission;
            let t1 = single_barrier_solution(&u, k, &merged).unwrap().transmission;
            assert!((t2 - t1).norm() / t1.norm() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn interior_flux_at_resonance() {
        let u = UnitSystem::tabulated();
        let sol = double_barrier_solution(&u, 0.742_014, &table_symmetric()).unwrap();
        assert!(sol.transmission_rate() > 0.9999);
        let report = verify_flux_conservation(&sol);
        assert!(report.max_residual() < 1e-12, "{report:?}");
    }

    #[test]
    fn continuity_at_interfaces() {
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::from_parts(10.6, 1.5, 8.7, 1.0, 7.0).unwrap();
        for &k in &[0.3, 0.7354, 1.9, 2.9] {
            for x in db.interfaces() {
                let eps = 1e-9;
                let (pl, dl) = double_barrier_wavefunction(&u, k, &db, x - eps).unwrap();
                let (pr, dr) = double_barrier_wavefunction(&u, k, &db, x + eps).unwrap();
                let scale = pl.norm().max(1.0);
                assert!((pl - pr).norm() < 1e-8 * scale, "psi jump at x = {x}, k = {k}");
                assert!((dl - dr).norm() < 1e-8 * scale * 10.0, "psi' jump at x = {x}, k = {k}");
            }
        }
    }

    #[test]
    fn continuity_exact_at_interfaces() {
        // evaluate each side's expansion exactly at the interface
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::from_parts(10.6, 1.5, 8.7, 1.0, 7.0).unwrap();
        let k = 1.3;
        let sol = double_barrier_solution(&u, k, &db).unwrap();
        let a = sol.interior.unwrap();
        let b1 = Kinematics::new(&u, k, 10.6).unwrap().beta;
        let b2 = Kinematics::new(&u, k, 8.7).unwrap().beta;
        let xs = db.interfaces().map(|x| u.reduced_length(x));
        let pw = |f: Complex64, g: Complex64, x: f64| {
            let e = Complex64::from_polar(1.0, k * x);
            (f * e + g * e.conj(), I * k * (f * e - g * e.conj()))
        };
        let ev = |b: f64, c: Complex64, d: Complex64, x: f64| {
            let e = (b * x).exp();
            (c * e + d / e, b * (c * e - d / e))
        };
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let pairs = [
            (pw(one, sol.reflection, xs[0]), ev(b1, a.c1, a.d1, xs[0])),
            (ev(b1, a.c1, a.d1, xs[1]), pw(a.alpha, a.gamma, xs[1])),
            (pw(a.alpha, a.gamma, xs[2]), ev(b2, a.c2, a.d2, xs[2])),
            (ev(b2, a.c2, a.d2, xs[3]), pw(sol.transmission, zero, xs[3])),
        ];
        for ((p0, d0), (p1, d1)) in pairs {
            assert!((p0 - p1).norm() < 1e-10 * p0.norm().max(1.0));
            assert!((d0 - d1).norm() < 1e-10 * d0.norm().max(1.0));
        }
    }

    #[test]
    fn continued_rate_agrees_below_barrier() {
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::from_parts(10.6, 1.5, 8.7, 1.0, 7.0).unwrap();
        for &k in &[0.1, 0.73, 1.5, 2.9] {
            let a = double_barrier_solution(&u, k, &db).unwrap().transmission_rate();
            let b = transmission_rate_continued(&u, k, &db).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        // finite exactly at the lower barrier top
        let top = db.tunneling_ceiling(&u);
        let t = transmission_rate_continued(&u, top, &db).unwrap();
        assert!(t.is_finite() && t > 0.0 && t <= 1.0);
    }

    fn config() -> impl Strategy<Value = (DoubleBarrier, f64)> {
        (
            0.5f64..20.0,
            0.0f64..3.0,
            0.5f64..20.0,
            0.0f64..3.0,
            0.0f64..15.0,
            0.01f64..0.995,
        )
            .prop_map(|(a1, l1, a2, l2, d, frac)| {
                let db = DoubleBarrier::from_parts(a1, l1, a2, l2, d).unwrap();
                let k = frac * db.tunneling_ceiling(&UnitSystem::tabulated());
                (db, k)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn flux_is_conserved((db, k) in config()) {
            let sol = double_barrier_solution(&UnitSystem::tabulated(), k, &db).unwrap();
            let r = verify_flux_conservation(&sol);
            prop_assert!(r.unitarity.abs() < 1e-12, "{:?}", r);
            prop_assert!(r.interior.unwrap().abs() < 1e-12, "{:?}", r);
        }

        #[test]
        fn swap_symmetry((db, k) in config()) {
            let u = UnitSystem::tabulated();
            let a = double_barrier_solution(&u, k, &db).unwrap().transmission_rate();
            let b = double_barrier_solution(&u, k, &db.swapped()).unwrap().transmission_rate();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
