//! Stationary-phase tunneling times and resonance lifetimes.
//!
//! The phase of interest is the transmitted phase with free propagation
//! over the whole structure removed, `θ = arg(T e^{ikL})` with
//! `L = d + l₁ + l₂`; for a single barrier `θ_sb = −atan(K tanh βl)`. The
//! phase time is `τ = (m/ħk) dθ/dk`, reported in fs.

use crate::error::{Error, Result};
use crate::math::wrap_pi;
#[allow(unused_imports)]
use crate::math::Float;
use crate::potential::{Barrier, BarrierFactors, DoubleBarrier, Kinematics, OVERFLOW_GUARD};
use crate::quantum::double_barrier_solution;
use crate::resonance::ResonanceRecord;
use crate::units::UnitSystem;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use num_complex::Complex64;

/// Default finite-difference half step in the wave-number unit.
pub const DEFAULT_DK: f64 = 1e-6;
/// Tagging threshold on `|T|²` for [`Regime::NearResonance`].
pub const NEAR_RESONANCE_RATE: f64 = 0.1;
/// Bisection depth available to the unwrapper.
const MAX_REFINE_DEPTH: u32 = 40;

/// `θ_sb = −atan(K tanh βl)`.
pub fn single_barrier_phase(units: &UnitSystem, k: f64, barrier: &Barrier) -> Result<f64> {
    let f = BarrierFactors::tunneling(units, k, barrier)?;
    Ok(-f.skew.atan2(f.cosh))
}

/// `τ_sb = (m/ħk)·[M² sinh 2βl + K kl] / (β[1 + M² sinh² βl])`.
pub fn single_barrier_phase_time(units: &UnitSystem, k: f64, barrier: &Barrier) -> Result<f64> {
    let kin = Kinematics::new(units, k, barrier.height())?;
    let lambda = units.reduced_length(barrier.length());
    let z = kin.beta * lambda;
    if z > OVERFLOW_GUARD {
        return Err(Error::Overflow {
            exponent: z,
            limit: OVERFLOW_GUARD,
        });
    }
    let m2 = kin.m * kin.m;
    let sh = z.sinh();
    let num = m2 * (2.0 * z).sinh() + kin.kappa * k * lambda;
    let den = kin.beta * (1.0 + m2 * sh * sh);
    Ok(units.time_scale() / k * num / den)
}

/// `D[k, β, l, d]` and `S[k, β, l, d] = |F|²` of a symmetric double barrier,
/// with `∂θ/∂k = D/S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDerivativeParts {
    pub d: f64,
    pub s: f64,
}

pub fn phase_derivative_parts(
    units: &UnitSystem,
    k: f64,
    height: f64,
    length: f64,
    gap: f64,
) -> Result<PhaseDerivativeParts> {
    let kin = Kinematics::new(units, k, height)?;
    let l = units.reduced_length(length);
    let d = units.reduced_length(gap);
    let beta = kin.beta;
    let z = 2.0 * beta * l;
    if z > 2.0 * OVERFLOW_GUARD {
        return Err(Error::Overflow {
            exponent: z / 2.0,
            limit: OVERFLOW_GUARD,
        });
    }
    let (m, kk) = (kin.m, kin.kappa);
    let m2 = m * m;
    let ch = z.cosh();
    let ch_m1 = 2.0 * (0.5 * z).sinh().powi(2);
    let sh = z.sinh();
    let q = 1.0 + 0.5 * m2 * ch_m1;
    let (s2, c2) = (2.0 * k * d).sin_cos();

    let dd = d * (m2 * ch - kk * kk)
        + 2.0 / beta * (m2 * sh + kk * k * l) * q
        + 2.0 * m2 / beta
            * (ch_m1 * ((1.0 - 0.5 * m2) * sh - 0.5 * kk * k * l) * c2 + (kk * ch * ch_m1 + 0.5 * sh * k * l) * s2);

    let n = 1.0 + ch_m1 - 0.5 * m2 * ch_m1;
    let delta = n.atan2(kk * sh);
    let s = 1.0 + m2 * ch_m1 * q * (1.0 + (2.0 * k * d + delta).sin());
    Ok(PhaseDerivativeParts { d: dd, s })
}

/// `τ_dbs = (m/ħ)·(D/k)·T_dbs`.
pub fn symmetric_double_phase_time(units: &UnitSystem, k: f64, height: f64, length: f64, gap: f64) -> Result<f64> {
    let p = phase_derivative_parts(units, k, height, length, gap)?;
    Ok(units.time_scale() / k * p.d / p.s)
}

/// `arg(T_db e^{ik(d+l₁+l₂)})` in `(−π, π]`.
pub fn transmitted_phase(units: &UnitSystem, k: f64, db: &DoubleBarrier) -> Result<f64> {
    let sol = double_barrier_solution(units, k, db)?;
    let span = k * units.reduced_length(db.total_length());
    Ok((sol.transmission * Complex64::from_polar(1.0, span)).arg())
}

fn centered(units: &UnitSystem, k: f64, db: &DoubleBarrier, h: f64) -> Result<f64> {
    let jump = wrap_pi(transmitted_phase(units, k + h, db)? - transmitted_phase(units, k - h, db)?);
    if jump.abs() > FRAC_PI_2 {
        return Err(Error::PhaseDiscontinuity {
            k,
            suggested_dk: h / 10.0,
        });
    }
    Ok(jump / (2.0 * h))
}

/// Phase time from a centered difference of [`transmitted_phase`] with half
/// step `dk`, Richardson-extrapolated against half step `dk/2`.
pub fn asymmetric_phase_time(units: &UnitSystem, k: f64, db: &DoubleBarrier, dk: f64) -> Result<f64> {
    if !(dk > 0.0 && dk < k) {
        return Err(crate::error::domain("finite-difference step", "in (0, k)", dk));
    }
    let coarse = centered(units, k, db, dk)?;
    let fine = centered(units, k, db, 0.5 * dk)?;
    Ok(units.time_scale() / k * (4.0 * fine - coarse) / 3.0)
}

/// Closed form for identical barriers, finite differences otherwise.
pub fn double_phase_time(units: &UnitSystem, k: f64, db: &DoubleBarrier, dk: f64) -> Result<f64> {
    if db.is_symmetric() {
        symmetric_double_phase_time(units, k, db.first.height(), db.first.length(), db.gap())
    } else {
        asymmetric_phase_time(units, k, db, dk)
    }
}

/// Unwrap `phase` sampled along increasing `ks`. Where two neighbours differ
/// by more than `π/2` the interval is bisected until every step is below
/// that, so genuine 2π wraps are removed and fast variation is followed.
pub fn unwrap_phase<F>(mut phase: F, ks: &[f64]) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = Vec::with_capacity(ks.len());
    let Some(&first) = ks.first() else {
        return Ok(out);
    };
    let mut prev_k = first;
    let mut prev = phase(first)?;
    out.push(prev);
    for &k in &ks[1..] {
        prev = follow(&mut phase, prev_k, prev, k, 0)?;
        prev_k = k;
        out.push(prev);
    }
    Ok(out)
}

fn follow<F>(phase: &mut F, k0: f64, unwrapped0: f64, k1: f64, depth: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let raw = phase(k1)?;
    let step = wrap_pi(raw - unwrapped0);
    if step.abs() <= FRAC_PI_2 {
        return Ok(unwrapped0 + step);
    }
    if depth >= MAX_REFINE_DEPTH {
        return Err(Error::PhaseDiscontinuity {
            k: k1,
            suggested_dk: (k1 - k0).abs(),
        });
    }
    let mid = 0.5 * (k0 + k1);
    let at_mid = follow(phase, k0, unwrapped0, mid, depth + 1)?;
    follow(phase, mid, at_mid, k1, depth + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    DeepTunneling,
    NearResonance,
}

/// Phase and phase time over a wave-number grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTimeProfile {
    pub k: Vec<f64>,
    pub theta: Vec<f64>,
    pub tau: Vec<f64>,
    pub transmission: Vec<f64>,
    pub regime: Vec<Regime>,
}

pub fn phase_time_profile(units: &UnitSystem, db: &DoubleBarrier, ks: &[f64], dk: f64) -> Result<PhaseTimeProfile> {
    let theta = unwrap_phase(|k| transmitted_phase(units, k, db), ks)?;
    let mut tau = Vec::with_capacity(ks.len());
    let mut transmission = Vec::with_capacity(ks.len());
    let mut regime = Vec::with_capacity(ks.len());
    for &k in ks {
        let t = double_barrier_solution(units, k, db)?.transmission_rate();
        tau.push(double_phase_time(units, k, db, dk.min(0.5 * k))?);
        transmission.push(t);
        regime.push(if t >= NEAR_RESONANCE_RATE {
            Regime::NearResonance
        } else {
            Regime::DeepTunneling
        });
    }
    Ok(PhaseTimeProfile {
        k: ks.to_vec(),
        theta,
        tau,
        transmission,
        regime,
    })
}

/// `2/(vβ)`, the common thick-barrier limit, in fs.
pub fn hartman_limit(units: &UnitSystem, k: f64, height: f64) -> Result<f64> {
    let beta = Kinematics::new(units, k, height)?.beta;
    Ok(units.time_scale() / k * 2.0 / beta)
}

/// `(l/v)(2 + A/E)` in fs. The `βl → 0` limit of [`single_barrier_phase_time`]
/// is half of this (it equals the limit for a barrier of length `2l`).
pub fn thin_single_barrier_time(units: &UnitSystem, k: f64, barrier: &Barrier) -> Result<f64> {
    Kinematics::new(units, k, barrier.height())?;
    let l_over_v = units.time_scale() / k * units.reduced_length(barrier.length());
    Ok(l_over_v * (2.0 + barrier.height() / units.energy(k)))
}

/// `{d + 2l + 2lM[β/k + M kl sin 2kd]}/v` in fs.
pub fn thin_double_barrier_time(units: &UnitSystem, k: f64, height: f64, length: f64, gap: f64) -> Result<f64> {
    let kin = Kinematics::new(units, k, height)?;
    let l = units.reduced_length(length);
    let d = units.reduced_length(gap);
    let eff = d + 2.0 * l + 2.0 * l * kin.m * (kin.beta / k + kin.m * k * l * (2.0 * k * d).sin());
    Ok(units.time_scale() / k * eff)
}

/// Lifetime estimates attached to one resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeRecord {
    pub k_res: f64,
    pub fwhm: Option<f64>,
    /// `ħ² k δk / m` with `δk` the FWHM, eV.
    pub delta_e: Option<f64>,
    /// `ħ/δE`, fs. Tables conventionally list `2τ_uc`.
    pub tau_uc: Option<f64>,
    /// Phase time at `k_res`, fs.
    pub tau_db: Option<f64>,
    /// `τ_db − τ_sb(l₁) − τ_sb(l₂)`, fs.
    pub tau_corrected: Option<f64>,
}

impl LifetimeRecord {
    pub fn two_tau_uc(&self) -> Option<f64> {
        self.tau_uc.map(|t| 2.0 * t)
    }
}

/// `δE` (eV) and `τ_uc = ħ/δE` (fs) for a peak of width `fwhm` at `k`.
pub fn uncertainty_lifetime(units: &UnitSystem, k: f64, fwhm: f64) -> Result<(f64, f64)> {
    if !(fwhm > 0.0) {
        return Err(Error::ZeroWidth("half-maximum width"));
    }
    let delta_e = 2.0 * units.unit_energy() * k * fwhm;
    Ok((delta_e, units.time_scale() / (k * fwhm)))
}

pub fn lifetime_from_uncertainty(units: &UnitSystem, rec: &ResonanceRecord) -> Result<LifetimeRecord> {
    let w = rec.fwhm.ok_or(Error::ZeroWidth("half-maximum width"))?;
    let (delta_e, tau) = uncertainty_lifetime(units, rec.k_res, w)?;
    Ok(LifetimeRecord {
        k_res: rec.k_res,
        fwhm: Some(w),
        delta_e: Some(delta_e),
        tau_uc: Some(tau),
        tau_db: None,
        tau_corrected: None,
    })
}

/// One row per resonance: uncertainty lifetime (when a width is known),
/// phase time at resonance and the single-barrier-corrected phase time.
pub fn lifetime_report(
    units: &UnitSystem,
    db: &DoubleBarrier,
    records: &[ResonanceRecord],
    dk: f64,
) -> Result<Vec<LifetimeRecord>> {
    let mut out = Vec::with_capacity(records.len());
    for rec in records {
        let mut row = match lifetime_from_uncertainty(units, rec) {
            Ok(r) => r,
            Err(Error::ZeroWidth(_)) => LifetimeRecord {
                k_res: rec.k_res,
                fwhm: None,
                delta_e: None,
                tau_uc: None,
                tau_db: None,
                tau_corrected: None,
            },
            Err(e) => return Err(e),
        };
        let k = rec.k_res;
        let tau = double_phase_time(units, k, db, dk)?;
        let singles =
            single_barrier_phase_time(units, k, &db.first)? + single_barrier_phase_time(units, k, &db.second)?;
        row.tau_db = Some(tau);
        row.tau_corrected = Some(tau - singles);
        out.push(row);
    }
    Ok(out)
}
