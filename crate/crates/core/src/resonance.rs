//! Resonance location, half-maximum widths, finesse and standing waves.
//!
//! Symmetric barriers are handled through the angle
//! `δ(k) = atan2(N, K sinh 2βl)` with `N = cosh 2βl − (M²/2)(cosh 2βl − 1)`,
//! for which `|F|² = 1 + M²(cosh 2βl − 1)·Q·[1 + sin(2kd + δ)]` and
//! `Q = 1 + (M²/2)(cosh 2βl − 1)`. Peaks sit at `2kd + δ = 2Nπ + 3π/2`.
//!
//! For general barriers a resonance is a root of `Φ(k) = mπ`
//! ([`interference::resonance_phase`]). At such a root
//! `|T|² = (T₁T₂/(1 − R₁R₂))²` exactly; the true maximum of `|T|²` drifts
//! away from it as the barriers become transparent.

use crate::error::{domain, Error, Result, Side};
use crate::interference::{self, analytic_finesse, mode_index, resonance_phase, OpticalCavity};
use crate::math::wrap_pi;
#[allow(unused_imports)]
use crate::math::Float;
use crate::potential::{DoubleBarrier, Kinematics, OVERFLOW_GUARD};
use crate::quantum::{double_barrier_solution, transmission_rate_continued};
use crate::rootfind::brent;
use crate::units::UnitSystem;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Default root tolerance in the wave-number unit.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Largest scan step in the wave-number unit.
pub const MAX_SCAN_STEP: f64 = 0.005;
/// Smallest wave number probed when a range starts at zero.
const K_FLOOR: f64 = 1e-6;

/// Angles and magnitudes of a symmetric double barrier at one `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricAngles {
    pub k: f64,
    pub m: f64,
    pub kappa: f64,
    /// `K sinh 2βl`.
    pub skew: f64,
    /// `cosh 2βl − (M²/2)(cosh 2βl − 1)`.
    pub n: f64,
    /// `1 + (M²/2)(cosh 2βl − 1)`.
    pub q: f64,
    /// `M²(cosh 2βl − 1)`.
    pub strength: f64,
    pub delta: f64,
}

impl SymmetricAngles {
    /// `((K sinh 2βl)² + N² − Q²)/Q²`.
    pub fn identity_residual(&self) -> f64 {
        (self.skew * self.skew + self.n * self.n - self.q * self.q) / (self.q * self.q)
    }
}

pub fn symmetric_angles(units: &UnitSystem, k: f64, height: f64, length: f64) -> Result<SymmetricAngles> {
    let kin = Kinematics::new(units, k, height)?;
    let z = 2.0 * kin.beta * units.reduced_length(length);
    if z > 2.0 * OVERFLOW_GUARD {
        return Err(Error::Overflow {
            exponent: z / 2.0,
            limit: OVERFLOW_GUARD,
        });
    }
    let ch_m1 = 2.0 * (0.5 * z).sinh().powi(2);
    let half = 0.5 * kin.m * kin.m * ch_m1;
    let skew = kin.kappa * z.sinh();
    let n = 1.0 + ch_m1 - half;
    Ok(SymmetricAngles {
        k,
        m: kin.m,
        kappa: kin.kappa,
        skew,
        n,
        q: 1.0 + half,
        strength: 2.0 * half,
        delta: n.atan2(skew),
    })
}

/// `|T_dbs|²` through the `sin(2kd + δ)` form.
pub fn symmetric_transmission_rate(units: &UnitSystem, k: f64, height: f64, length: f64, gap: f64) -> Result<f64> {
    let a = symmetric_angles(units, k, height, length)?;
    let psi = 2.0 * k * units.reduced_length(gap) + a.delta;
    Ok(1.0 / (1.0 + a.strength * a.q * (1.0 + psi.sin())))
}

/// One resonance and whatever has been measured about it so far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceRecord {
    pub k_res: f64,
    pub mode_index: i64,
    pub t_peak: f64,
    pub k_half_left: Option<f64>,
    pub k_half_right: Option<f64>,
    pub fwhm: Option<f64>,
    /// Distance to the previous resonance, or to `k = 0` for the first.
    pub spacing: Option<f64>,
    pub free_spectral: Option<f64>,
    pub finesse_numeric: Option<f64>,
    pub finesse_analytic: Option<f64>,
    /// Side on which the half maximum was not reached.
    pub overlap: Option<Side>,
}

impl ResonanceRecord {
    pub fn new(k_res: f64, mode_index: i64, t_peak: f64) -> Self {
        Self {
            k_res,
            mode_index,
            t_peak,
            k_half_left: None,
            k_half_right: None,
            fwhm: None,
            spacing: None,
            free_spectral: None,
            finesse_numeric: None,
            finesse_analytic: None,
            overlap: None,
        }
    }
}

fn scan_step(units: &UnitSystem, db: &DoubleBarrier) -> f64 {
    let d = units.reduced_length(db.gap());
    if d > 0.0 {
        (PI / (8.0 * d)).min(MAX_SCAN_STEP)
    } else {
        MAX_SCAN_STEP
    }
}

/// Resonances of `db` with `k_res ∈ (k_min, k_max]`, sorted by `k`.
///
/// `symmetric` selects the `2kd + δ` root system and requires identical
/// barriers; otherwise roots of `Φ(k) = mπ` are returned. `k_max` must stay
/// below the tunneling ceiling. An empty range gives an empty list.
pub fn find_resonances(
    units: &UnitSystem,
    db: &DoubleBarrier,
    k_range: (f64, f64),
    symmetric: bool,
    tol: f64,
) -> Result<Vec<ResonanceRecord>> {
    let (k_min, k_max) = k_range;
    if !(tol > 0.0) {
        return Err(domain("root tolerance", "positive", tol));
    }
    if !(k_min.is_finite() && k_max.is_finite()) || k_min < 0.0 {
        return Err(domain("wave-number range start", "finite and non-negative", k_min));
    }
    if k_max <= k_min {
        return Ok(Vec::new());
    }
    db.check_regime(units, k_max)?;
    if symmetric && !db.is_symmetric() {
        return Err(domain("symmetric path", "identical barriers", 0.0));
    }
    let lo = k_min.max(K_FLOOR.min(0.5 * k_max));
    let step = scan_step(units, db);
    let mut out = if symmetric {
        symmetric_roots(units, db, lo, k_max, step, tol)?
    } else {
        phase_roots(units, db, lo, k_max, step, tol, 0.0)?
    };
    out.retain(|r| r.k_res > k_min && r.k_res <= k_max);
    out.sort_by(|a, b| a.k_res.total_cmp(&b.k_res));
    out.dedup_by(|a, b| (a.k_res - b.k_res).abs() < 10.0 * tol);
    Ok(out)
}

fn grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=n).map(move |i| {
        if i == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        }
    })
}

fn phase_roots(
    units: &UnitSystem,
    db: &DoubleBarrier,
    lo: f64,
    hi: f64,
    step: f64,
    tol: f64,
    shift: f64,
) -> Result<Vec<ResonanceRecord>> {
    let phi = |k: f64| resonance_phase(units, k, db).map(|p| p - shift);
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in grid(lo, hi, step) {
        let p = phi(k)?;
        if let Some((k0, p0)) = prev {
            let (a, b) = if p0 <= p { (p0, p) } else { (p, p0) };
            let first = (a / PI).ceil() as i64;
            let last = (b / PI).floor() as i64;
            for m in first..=last {
                let target = m as f64 * PI;
                if target == p0 && k0 != lo {
                    continue;
                }
                let root = brent(|x| phi(x).map_or(f64::NAN, |v| v - target), k0, k, tol)?;
                let t_peak = double_barrier_solution(units, root, db)?.transmission_rate();
                out.push(ResonanceRecord::new(root, m, t_peak));
            }
        }
        prev = Some((k, p));
    }
    Ok(out)
}

/// Anti-resonances `Φ(k) = mπ + π/2` in `(k_min, k_max]`. The records carry
/// `|T|²` at the minimum in `t_peak` and `m` in `mode_index`.
pub fn find_antiresonances(
    units: &UnitSystem,
    db: &DoubleBarrier,
    k_range: (f64, f64),
    tol: f64,
) -> Result<Vec<ResonanceRecord>> {
    let (k_min, k_max) = k_range;
    if k_max <= k_min {
        return Ok(Vec::new());
    }
    db.check_regime(units, k_max)?;
    let lo = k_min.max(K_FLOOR.min(0.5 * k_max));
    let mut out = phase_roots(units, db, lo, k_max, scan_step(units, db), tol, 0.5 * PI)?;
    out.retain(|r| r.k_res > k_min);
    Ok(out)
}

fn symmetric_psi(units: &UnitSystem, db: &DoubleBarrier, k: f64) -> Result<f64> {
    let a = symmetric_angles(units, k, db.first.height(), db.first.length())?;
    Ok(2.0 * k * units.reduced_length(db.gap()) + a.delta)
}

fn symmetric_roots(
    units: &UnitSystem,
    db: &DoubleBarrier,
    lo: f64,
    hi: f64,
    step: f64,
    tol: f64,
) -> Result<Vec<ResonanceRecord>> {
    let offset = 1.5 * PI;
    let mut out = Vec::new();
    // unwrapped ψ(k) − 3π/2
    let mut prev: Option<(f64, f64)> = None;
    let mut pending: Vec<(f64, f64)> = grid(lo, hi, step).map(|k| (k, f64::NAN)).collect();
    pending.reverse();
    while let Some((k, _)) = pending.pop() {
        let raw = symmetric_psi(units, db, k)? - offset;
        let value = match prev {
            None => raw,
            Some((_, p)) => p + wrap_pi(raw - p),
        };
        if let Some((k0, p0)) = prev {
            if (value - p0).abs() > 0.5 * PI && k - k0 > 1e-9 {
                pending.push((k, f64::NAN));
                pending.push((0.5 * (k0 + k), f64::NAN));
                continue;
            }
            let (a, b) = if p0 <= value { (p0, value) } else { (value, p0) };
            let first = (a / (2.0 * PI)).ceil() as i64;
            let last = (b / (2.0 * PI)).floor() as i64;
            for n in first..=last {
                let target = 2.0 * PI * n as f64;
                if target == p0 && k0 != lo {
                    continue;
                }
                let g = |x: f64| symmetric_psi(units, db, x).map_or(f64::NAN, |v| wrap_pi(v - offset - target));
                let root = brent(g, k0, k, tol)?;
                let t_peak = symmetric_transmission_rate(units, root, db.first.height(), db.first.length(), db.gap())?;
                let m = mode_index(resonance_phase(units, root, db)?);
                out.push(ResonanceRecord::new(root, m, t_peak));
            }
        }
        prev = Some((k, value));
    }
    Ok(out)
}

/// Which transmission level defines the half maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfMaxLevel {
    /// Half of each record's own peak.
    PerPeak,
    /// Half of the lowest peak among the records being characterised.
    LowestPeak,
    Fixed(f64),
}

impl HalfMaxLevel {
    pub fn resolve(&self, records: &[ResonanceRecord], rec: &ResonanceRecord) -> f64 {
        match *self {
            HalfMaxLevel::PerPeak => 0.5 * rec.t_peak,
            HalfMaxLevel::LowestPeak => 0.5 * records.iter().map(|r| r.t_peak).fold(rec.t_peak, f64::min),
            HalfMaxLevel::Fixed(v) => v,
        }
    }
}

/// Settings for [`fwhm`] and [`characterize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthOptions {
    pub level: HalfMaxLevel,
    /// Follow `|T|²` above the lower barrier top when a crossing lies there.
    pub continuation: bool,
    pub tol: f64,
}

impl Default for WidthOptions {
    fn default() -> Self {
        Self {
            level: HalfMaxLevel::LowestPeak,
            continuation: true,
            tol: DEFAULT_TOLERANCE,
        }
    }
}

fn rate(units: &UnitSystem, db: &DoubleBarrier, k: f64, continuation: bool) -> Result<f64> {
    if continuation {
        transmission_rate_continued(units, k, db)
    } else if db.is_symmetric() {
        symmetric_transmission_rate(units, k, db.first.height(), db.first.length(), db.gap())
    } else {
        Ok(double_barrier_solution(units, k, db)?.transmission_rate())
    }
}

/// Walk away from `k_res` until `|T|²` drops below `level`, never passing
/// `bound`, then refine the crossing.
fn crossing(
    units: &UnitSystem,
    db: &DoubleBarrier,
    k_res: f64,
    bound: f64,
    level: f64,
    opts: &WidthOptions,
    side: Side,
) -> Result<f64> {
    let dir = if side == Side::Left { -1.0 } else { 1.0 };
    let reach = (bound - k_res).abs();
    let cap = reach / 256.0;
    let overlap = Error::Overlap { k_res, side };
    if !(cap > 0.0) {
        return Err(overlap);
    }
    let f = |k: f64| rate(units, db, k, opts.continuation).map(|t| t - level);
    let mut h = (1e-6 * k_res).min(cap);
    let mut inner = k_res;
    loop {
        let travelled = (inner - k_res).abs() + h;
        let outer = if travelled >= reach {
            bound
        } else {
            k_res + dir * travelled
        };
        let value = f(outer)?;
        if value < 0.0 {
            return brent(
                |x| f(x).unwrap_or(f64::NAN),
                inner.min(outer),
                inner.max(outer),
                opts.tol,
            );
        }
        if outer == bound {
            return Err(overlap);
        }
        inner = outer;
        h = (2.0 * h).min(cap);
    }
}

/// Half-maximum crossings of `rec` at transmission `level`.
///
/// `left_bound` and `right_bound` are the neighbouring resonances (or the
/// ends of the admissible window). Without continuation the right bound is
/// clipped below the tunneling ceiling.
pub fn fwhm(
    units: &UnitSystem,
    db: &DoubleBarrier,
    rec: &ResonanceRecord,
    level: f64,
    bounds: (f64, f64),
    opts: &WidthOptions,
) -> Result<ResonanceRecord> {
    let (mut left_bound, mut right_bound) = bounds;
    left_bound = left_bound.max(K_FLOOR.min(0.5 * rec.k_res));
    if !opts.continuation {
        right_bound = right_bound.min(db.tunneling_ceiling(units) * (1.0 - 1e-12));
    }
    let left = crossing(units, db, rec.k_res, left_bound, level, opts, Side::Left)?;
    let right = crossing(units, db, rec.k_res, right_bound, level, opts, Side::Right)?;
    let width = right - left;
    if !(width > 0.0) {
        return Err(Error::ZeroWidth("half-maximum width"));
    }
    Ok(ResonanceRecord {
        k_half_left: Some(left),
        k_half_right: Some(right),
        fwhm: Some(width),
        ..*rec
    })
}

/// Mean resonance spacing, the first spacing measured from `k = 0`.
pub fn free_spectral_distance(records: &[ResonanceRecord]) -> Result<f64> {
    let last = records.last().ok_or(Error::Empty("resonance list"))?;
    Ok(last.k_res / records.len() as f64)
}

/// Fill `spacing`, `free_spectral` and both finesse columns. The analytic
/// finesse is evaluated at `k_res`.
pub fn numeric_finesse(units: &UnitSystem, db: &DoubleBarrier, records: &mut [ResonanceRecord]) -> Result<()> {
    let free = free_spectral_distance(records)?;
    let mut previous = 0.0;
    for rec in records.iter_mut() {
        rec.spacing = Some(rec.k_res - previous);
        previous = rec.k_res;
        rec.free_spectral = Some(free);
        rec.finesse_analytic = Some(analytic_finesse(units, rec.k_res, db)?);
        if let Some(w) = rec.fwhm {
            if !(w > 0.0) {
                return Err(Error::ZeroWidth("half-maximum width"));
            }
            rec.finesse_numeric = Some(free / w);
        }
    }
    Ok(())
}

/// Find resonances, measure widths and finesse. Records whose half maximum
/// runs into a neighbour keep `fwhm = None` and carry the overlap side.
pub fn characterize(
    units: &UnitSystem,
    db: &DoubleBarrier,
    k_range: (f64, f64),
    symmetric: bool,
    opts: &WidthOptions,
) -> Result<Vec<ResonanceRecord>> {
    let found = find_resonances(units, db, k_range, symmetric, opts.tol)?;
    if found.is_empty() {
        return Ok(found);
    }
    let mut out = Vec::with_capacity(found.len());
    for (i, rec) in found.iter().enumerate() {
        let left = if i == 0 { 0.0 } else { found[i - 1].k_res };
        let right = match found.get(i + 1) {
            Some(next) => next.k_res,
            None => rec.k_res + (rec.k_res - left),
        };
        let level = opts.level.resolve(&found, rec);
        match fwhm(units, db, rec, level, (left, right), opts) {
            Ok(r) => out.push(r),
            Err(Error::Overlap { side, .. }) => out.push(ResonanceRecord {
                overlap: Some(side),
                ..*rec
            }),
            Err(e) => return Err(e),
        }
    }
    numeric_finesse(units, db, &mut out)?;
    Ok(out)
}

/// Relative intensity `I(k, x)` inside an optical cavity; `x` is measured
/// from the left mirror in the cavity's length unit.
pub fn fp_standing_wave(k: f64, x: f64, cav: &OpticalCavity) -> Result<f64> {
    let d0 = cav.separation();
    if !(x >= 0.0 && x <= d0) {
        return Err(domain("position", "inside the cavity", x));
    }
    let r = cav.reflectivity();
    let pre = (1.0 + r - 2.0 * r.sqrt() * (2.0 * k * (d0 - x)).cos()) / (1.0 - r);
    Ok(pre * interference::fp_transmission(k, cav)?)
}

fn check_in_well(db: &DoubleBarrier, x: f64) -> Result<()> {
    let [_, b1, a2, _] = db.interfaces();
    if !(x >= b1 && x <= a2) {
        return Err(domain("position", "between the barriers", x));
    }
    Ok(())
}

/// `|α e^{ikx} + γ e^{−ikx}|²` for `b₁ ≤ x ≤ a₂` (Å).
pub fn well_standing_wave(units: &UnitSystem, k: f64, x: f64, db: &DoubleBarrier) -> Result<f64> {
    check_in_well(db, x)?;
    let sol = double_barrier_solution(units, k, db)?;
    let a = sol.interior.expect("double barrier carries interior amplitudes");
    let e = num_complex::Complex64::from_polar(1.0, k * units.reduced_length(x));
    Ok((a.alpha * e + a.gamma * e.conj()).norm_sqr())
}

/// The same probability as a prefactor times `|T_db|²`:
/// `{1 + M₂²(cosh 2β₂l₂ − 1) + M₂[sinh 2β₂l₂ sin 2k(a₂−x) − K₂(cosh 2β₂l₂ − 1) cos 2k(a₂−x)]}·|T|²`.
pub fn well_standing_wave_closed(units: &UnitSystem, k: f64, x: f64, db: &DoubleBarrier) -> Result<f64> {
    check_in_well(db, x)?;
    let t = double_barrier_solution(units, k, db)?.transmission_rate();
    let kin = Kinematics::new(units, k, db.second.height())?;
    let z = 2.0 * kin.beta * units.reduced_length(db.second.length());
    let ch_m1 = 2.0 * (0.5 * z).sinh().powi(2);
    let u = 2.0 * k * units.reduced_length(db.interfaces()[2] - x);
    let pre = 1.0 + kin.m * kin.m * ch_m1 + kin.m * (z.sinh() * u.sin() - kin.kappa * ch_m1 * u.cos());
    Ok(pre * t)
}

/// A sampled standing-wave spectrum, row-major in `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandingWaveField {
    pub k: Vec<f64>,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    /// Admissible `x` interval.
    pub region: (f64, f64),
}

impl StandingWaveField {
    pub fn value(&self, ik: usize, ix: usize) -> f64 {
        self.values[ik * self.x.len() + ix]
    }
}

fn sample_field<F>(k: &[f64], x: &[f64], region: (f64, f64), mut f: F) -> Result<StandingWaveField>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let mut values = Vec::with_capacity(k.len() * x.len());
    for &kk in k {
        for &xx in x {
            values.push(f(kk, xx)?);
        }
    }
    Ok(StandingWaveField {
        k: k.to_vec(),
        x: x.to_vec(),
        values,
        region,
    })
}

pub fn fp_standing_wave_field(k: &[f64], x: &[f64], cav: &OpticalCavity) -> Result<StandingWaveField> {
    sample_field(k, x, (0.0, cav.separation()), |kk, xx| fp_standing_wave(kk, xx, cav))
}

pub fn well_standing_wave_field(
    units: &UnitSystem,
    k: &[f64],
    x: &[f64],
    db: &DoubleBarrier,
) -> Result<StandingWaveField> {
    let [_, b1, a2, _] = db.interfaces();
    sample_field(k, x, (b1, a2), |kk, xx| well_standing_wave(units, kk, xx, db))
}
