//! Square barrier geometry and per-barrier kinematics.

use crate::error::{domain, Error, Result};
#[allow(unused_imports)]
use crate::math::Float;
use crate::math::{sinc, sinhc};
use crate::units::UnitSystem;
use num_complex::Complex64;

/// Hyperbolic arguments above this are refused.
pub const OVERFLOW_GUARD: f64 = 300.0;

/// A square barrier of height `height` (eV) and length `length` (Å).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barrier {
    height: f64,
    length: f64,
}

impl Barrier {
    pub fn new(height: f64, length: f64) -> Result<Self> {
        if !(height.is_finite() && height > 0.0) {
            return Err(domain("barrier height", "positive", height));
        }
        if !(length.is_finite() && length >= 0.0) {
            return Err(domain("barrier length", "non-negative", length));
        }
        Ok(Self { height, length })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Two square barriers separated by a free gap. The first barrier starts at
/// the origin, so `a₁ = 0`, `b₁ = l₁`, `a₂ = l₁ + d`, `b₂ = a₂ + l₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleBarrier {
    pub first: Barrier,
    pub second: Barrier,
    gap: f64,
}

impl DoubleBarrier {
    pub fn new(first: Barrier, second: Barrier, gap: f64) -> Result<Self> {
        if !(gap.is_finite() && gap >= 0.0) {
            return Err(domain("barrier gap", "non-negative", gap));
        }
        Ok(Self { first, second, gap })
    }

    /// Identical barriers of height `height` and length `length`.
    pub fn symmetric(height: f64, length: f64, gap: f64) -> Result<Self> {
        let b = Barrier::new(height, length)?;
        Self::new(b, b, gap)
    }

    /// Heights and lengths given as `(A₁, l₁, A₂, l₂, d)`.
    pub fn from_parts(a1: f64, l1: f64, a2: f64, l2: f64, d: f64) -> Result<Self> {
        Self::new(Barrier::new(a1, l1)?, Barrier::new(a2, l2)?, d)
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn is_symmetric(&self) -> bool {
        self.first == self.second
    }

    /// The mirror image: barriers exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            first: self.second,
            second: self.first,
            gap: self.gap,
        }
    }

    /// Interface positions `[a₁, b₁, a₂, b₂]` in Å.
    pub fn interfaces(&self) -> [f64; 4] {
        let b1 = self.first.length;
        let a2 = b1 + self.gap;
        [0.0, b1, a2, a2 + self.second.length]
    }

    /// `d + l₁ + l₂` in Å.
    pub fn total_length(&self) -> f64 {
        self.gap + self.first.length + self.second.length
    }

    pub fn min_height(&self) -> f64 {
        self.first.height.min(self.second.height)
    }

    /// Upper end of the tunneling window in the wave-number unit.
    pub fn tunneling_ceiling(&self, units: &UnitSystem) -> f64 {
        units.tunneling_ceiling(self.min_height())
    }

    /// Fail unless `0 < E(k) < min(A₁, A₂)`.
    pub fn check_regime(&self, units: &UnitSystem, k: f64) -> Result<()> {
        check_wavenumber(k)?;
        let energy = units.energy(k);
        let height = self.min_height();
        if energy >= height {
            return Err(Error::UnsupportedRegime { energy, height });
        }
        Ok(())
    }
}

pub(crate) fn check_wavenumber(k: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(domain("wave number", "positive", k));
    }
    Ok(())
}

/// Wave number, energy and decay quantities of one barrier.
///
/// `M = ½(β/k + k/β)` and `K = ½(β/k − k/β)`, so `M² − K² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub k: f64,
    pub energy: f64,
    pub beta: f64,
    pub m: f64,
    pub kappa: f64,
}

impl Kinematics {
    pub fn new(units: &UnitSystem, k: f64, height: f64) -> Result<Self> {
        check_wavenumber(k)?;
        let beta = units.decay_constant(k, height)?;
        let m = 0.5 * (beta / k + k / beta);
        Ok(Self {
            k,
            energy: units.energy(k),
            beta,
            m,
            // M − K = k/β holds to rounding in M
            kappa: m - k / beta,
        })
    }

    /// `M² − K² − 1`, zero up to rounding.
    pub fn identity_residual(&self) -> f64 {
        (self.m - self.kappa) * (self.m + self.kappa) - 1.0
    }
}

/// Hyperbolic building blocks of one barrier at wave number `k`.
///
/// Everything is written through `β²`, `cosh(βl)` and `sinh(βl)/(βl)`, which
/// are even in `β`, so the same factors continue analytically to energies
/// above the barrier (`β → iq`) without a branch choice.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BarrierFactors {
    /// `M sinh(βl)`.
    pub reflect: f64,
    /// `K sinh(βl)`.
    pub skew: f64,
    /// `cosh(βl)`.
    pub cosh: f64,
}

impl BarrierFactors {
    /// Factors in the tunneling regime; the overflow guard applies.
    pub fn tunneling(units: &UnitSystem, k: f64, barrier: &Barrier) -> Result<Self> {
        check_wavenumber(k)?;
        let beta = units.decay_constant(k, barrier.height)?;
        let exponent = beta * units.reduced_length(barrier.length);
        if exponent > OVERFLOW_GUARD {
            return Err(Error::Overflow {
                exponent,
                limit: OVERFLOW_GUARD,
            });
        }
        Ok(Self::from_beta_sq(units, k, barrier, beta * beta))
    }

    /// Factors for any energy away from the barrier top.
    pub fn continued(units: &UnitSystem, k: f64, barrier: &Barrier) -> Result<Self> {
        check_wavenumber(k)?;
        let beta_sq = units.decay_constant_sq(k, barrier.height);
        let lambda = units.reduced_length(barrier.length);
        if beta_sq > 0.0 && beta_sq.sqrt() * lambda > OVERFLOW_GUARD {
            return Err(Error::Overflow {
                exponent: beta_sq.sqrt() * lambda,
                limit: OVERFLOW_GUARD,
            });
        }
        Ok(Self::from_beta_sq(units, k, barrier, beta_sq))
    }

    fn from_beta_sq(units: &UnitSystem, k: f64, barrier: &Barrier, beta_sq: f64) -> Self {
        let lambda = units.reduced_length(barrier.length);
        let (cosh, shape) = if beta_sq >= 0.0 {
            let z = beta_sq.sqrt() * lambda;
            (z.cosh(), sinhc(z))
        } else {
            let z = (-beta_sq).sqrt() * lambda;
            (z.cos(), sinc(z))
        };
        // β sinh(βl) = β² l S and sinh(βl)/β = l S with S = sinh(βl)/(βl).
        let beta_sinh = beta_sq * lambda * shape;
        let sinh_over_beta = lambda * shape;
        Self {
            reflect: 0.5 * (beta_sinh / k + k * sinh_over_beta),
            skew: 0.5 * (beta_sinh / k - k * sinh_over_beta),
            cosh,
        }
    }

    /// `cosh(βl) + iK sinh(βl)`.
    pub fn forward(&self) -> Complex64 {
        Complex64::new(self.cosh, self.skew)
    }
}
