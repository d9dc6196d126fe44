//! Transfer-matrix solver for piecewise-constant potentials.
//!
//! Shares nothing with the closed forms except [`UnitSystem`]. Each segment
//! acts on `(ψ, ψ')` with a real 2×2 matrix of unit determinant; both leads
//! sit at zero potential.

use crate::error::{domain, Error, Result};
#[allow(unused_imports)]
use crate::math::Float;
use crate::potential::{check_wavenumber, Barrier, DoubleBarrier, OVERFLOW_GUARD};
use crate::quantum::{double_barrier_solution, ScatteringSolution};
use crate::units::UnitSystem;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Energies closer than this to a segment height are refused, eV.
pub const DEGENERACY_WINDOW: f64 = 1e-12;
/// Largest tolerated relative determinant drift.
pub const DRIFT_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Å, positive.
    pub width: f64,
    /// eV.
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    segments: Vec<Segment>,
}

impl PotentialGrid {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Empty("potential grid"));
        }
        for s in &segments {
            if !(s.width.is_finite() && s.width > 0.0) {
                return Err(domain("segment width", "positive", s.width));
            }
            if !s.height.is_finite() {
                return Err(domain("segment height", "finite", s.height));
            }
        }
        Ok(Self { segments })
    }

    /// Exact one-segment grid.
    pub fn from_barrier(barrier: &Barrier) -> Result<Self> {
        Self::new(alloc::vec![Segment {
            width: barrier.length(),
            height: barrier.height(),
        }])
    }

    /// Exact grid: barrier, gap, barrier. Zero-width pieces are dropped.
    pub fn from_double_barrier(db: &DoubleBarrier) -> Result<Self> {
        let pieces = [
            Segment {
                width: db.first.length(),
                height: db.first.height(),
            },
            Segment {
                width: db.gap(),
                height: 0.0,
            },
            Segment {
                width: db.second.length(),
                height: db.second.height(),
            },
        ];
        Self::new(pieces.into_iter().filter(|s| s.width > 0.0).collect())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total extent in Å.
    pub fn extent(&self) -> f64 {
        self.segments.iter().map(|s| s.width).sum()
    }

    /// Every segment cut into `n` equal pieces.
    pub fn subdivide(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("subdivision count", "at least 1", 0.0));
        }
        let segments = self
            .segments
            .iter()
            .flat_map(|s| {
                (0..n).map(move |_| Segment {
                    width: s.width / n as f64,
                    height: s.height,
                })
            })
            .collect();
        Self::new(segments)
    }

    /// Segment `index` cut at fraction `at ∈ (0, 1)` of its width.
    pub fn split(&self, index: usize, at: f64) -> Result<Self> {
        let s = *self
            .segments
            .get(index)
            .ok_or(domain("segment index", "within the grid", index as f64))?;
        if !(at > 0.0 && at < 1.0) {
            return Err(domain("split fraction", "in (0, 1)", at));
        }
        let mut segments = self.segments.clone();
        segments.splice(
            index..=index,
            [
                Segment {
                    width: s.width * at,
                    height: s.height,
                },
                Segment {
                    width: s.width * (1.0 - at),
                    height: s.height,
                },
            ],
        );
        Self::new(segments)
    }
}

type Mat = [[f64; 2]; 2];

fn mul(a: &Mat, b: &Mat) -> Mat {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn segment_matrix(units: &UnitSystem, k: f64, seg: &Segment) -> Result<Mat> {
    let energy = units.energy(k);
    if (energy - seg.height).abs() <= DEGENERACY_WINDOW {
        return Err(Error::DegenerateEnergy {
            energy,
            height: seg.height,
        });
    }
    let w = units.reduced_length(seg.width);
    let local_sq = k * k - seg.height / units.unit_energy();
    Ok(if local_sq > 0.0 {
        let q = local_sq.sqrt();
        let (s, c) = (q * w).sin_cos();
        [[c, s / q], [-q * s, c]]
    } else {
        let kappa = (-local_sq).sqrt();
        let z = kappa * w;
        if z > OVERFLOW_GUARD {
            return Err(Error::Overflow {
                exponent: z,
                limit: OVERFLOW_GUARD,
            });
        }
        let (s, c) = (z.sinh(), z.cosh());
        [[c, s / kappa], [kappa * s, c]]
    })
}

/// Scattering amplitudes of `grid` for an electron incident from the left.
///
/// The grid starts at `x = 0`; `T` multiplies `e^{ikx}` to the right of the
/// grid and `R` multiplies `e^{−ikx}` to its left, as in the closed forms.
pub fn transfer_matrix_solve(units: &UnitSystem, k: f64, grid: &PotentialGrid) -> Result<ScatteringSolution> {
    check_wavenumber(k)?;
    let mut m: Mat = [[1.0, 0.0], [0.0, 1.0]];
    for seg in grid.segments() {
        m = mul(&segment_matrix(units, k, seg)?, &m);
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = (m[0][0] * m[1][1]).abs() + (m[0][1] * m[1][0]).abs();
    let drift = (det - 1.0).abs() / scale.max(1.0);
    if !(drift <= DRIFT_LIMIT) {
        return Err(Error::DeterminantDrift { drift });
    }

    let ik = Complex64::new(0.0, k);
    let k2 = k * k;
    let a = ik * m[0][0] - m[1][0];
    let b = -k2 * m[0][1] - ik * m[1][1];
    let reflection = -(a + b) / (a - b);
    let u = m[0][0] * (1.0 + reflection) + ik * m[0][1] * (1.0 - reflection);
    let extent = units.reduced_length(grid.extent());
    Ok(ScatteringSolution {
        k,
        transmission: u * Complex64::from_polar(1.0, -k * extent),
        reflection,
        interior: None,
    })
}

/// Largest disagreement between the oracle and the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualReport {
    pub samples: usize,
    pub max_transmission: f64,
    pub max_reflection: f64,
    /// Largest `||T|² + |R|² − 1|` of the oracle.
    pub max_unitarity: f64,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.max_transmission.max(self.max_reflection)
    }

    pub fn merge(&mut self, other: &ResidualReport) {
        self.samples += other.samples;
        self.max_transmission = self.max_transmission.max(other.max_transmission);
        self.max_reflection = self.max_reflection.max(other.max_reflection);
        self.max_unitarity = self.max_unitarity.max(other.max_unitarity);
    }
}

pub fn validate_against_closed_form(
    units: &UnitSystem,
    db: &DoubleBarrier,
    k_samples: &[f64],
) -> Result<ResidualReport> {
    let grid = PotentialGrid::from_double_barrier(db)?;
    let mut report = ResidualReport::default();
    for &k in k_samples {
        let o = transfer_matrix_solve(units, k, &grid)?;
        let c = double_barrier_solution(units, k, db)?;
        report.samples += 1;
        report.max_transmission = report.max_transmission.max((o.transmission - c.transmission).norm());
        report.max_reflection = report.max_reflection.max((o.reflection - c.reflection).norm());
        report.max_unitarity = report
            .max_unitarity
            .max((o.transmission_rate() + o.reflection_rate() - 1.0).abs());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::single_barrier_solution;

    #[test]
    fn free_segment_is_transparent() {
        let u = UnitSystem::tabulated();
        let grid = PotentialGrid::new(alloc::vec![Segment {
            width: 3.7,
            height: 0.0
        }])
        .unwrap();
        let s = transfer_matrix_solve(&u, 0.8, &grid).unwrap();
        assert!((s.transmission - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(s.reflection.norm() < 1e-14);
    }

    #[test]
    fn single_barrier_matches_closed_form() {
        let u = UnitSystem::tabulated();
        let b = Barrier::new(10.36, 1.2).unwrap();
        let grid = PotentialGrid::from_barrier(&b).unwrap();
        for &k in &[0.1, 0.742, 1.5, 3.0] {
            let o = transfer_matrix_solve(&u, k, &grid).unwrap();
            let c = single_barrier_solution(&u, k, &b).unwrap();
            assert!((o.transmission_rate() - c.transmission_rate()).abs() < 1e-12);
            assert!((o.transmission - c.transmission).norm() < 1e-12);
            assert!((o.reflection - c.reflection).norm() < 1e-12);
        }
    }

    #[test]
    fn double_barrier_matches_closed_form() {
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::symmetric(10.36, 1.2, 7.0).unwrap();
        let r = validate_against_closed_form(&u, &db, &[1.0, 0.742_014, 2.5]).unwrap();
        assert!(r.max_residual() < 1e-10, "{r:?}");
        assert!(r.max_unitarity < 1e-10);
    }

    #[test]
    fn well_rate_from_oracle() {
        let u = UnitSystem::tabulated();
        let grid = PotentialGrid::new(alloc::vec![Segment {
            width: 4.0,
            height: -3.0
        }])
        .unwrap();
        let k = 0.9;
        let o = transfer_matrix_solve(&u, k, &grid).unwrap();
        let w = crate::quantum::well_transmission_rate(&u, k, 3.0, 4.0).unwrap();
        assert!((o.transmission_rate() - w).abs() < 1e-12);
    }

    #[test]
    fn degenerate_energy_rejected() {
        let u = UnitSystem::nominal();
        let grid = PotentialGrid::new(alloc::vec![Segment {
            width: 1.0,
            height: 4.0
        }])
        .unwrap();
        assert!(matches!(
            transfer_matrix_solve(&u, 2.0, &grid),
            Err(Error::DegenerateEnergy { .. })
        ));
    }

    #[test]
    fn overflow_rejected() {
        let u = UnitSystem::nominal();
        let grid = PotentialGrid::new(alloc::vec![Segment {
            width: 500.0,
            height: 100.0
        }])
        .unwrap();
        assert!(matches!(
            transfer_matrix_solve(&u, 1.0, &grid),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn grid_construction() {
        assert!(PotentialGrid::new(alloc::vec![]).is_err());
        assert!(PotentialGrid::new(alloc::vec![Segment {
            width: 0.0,
            height: 1.0
        }])
        .is_err());
        let db = DoubleBarrier::from_parts(10.6, 1.5, 8.7, 0.0, 7.0).unwrap();
        let g = PotentialGrid::from_double_barrier(&db).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.extent(), 8.5);
        let fine = g.subdivide(4).unwrap();
        assert_eq!(fine.len(), 8);
        assert!((fine.extent() - 8.5).abs() < 1e-14);
        let cut = g.split(1, 0.3).unwrap();
        assert_eq!(cut.len(), 3);
        assert!(g.split(5, 0.5).is_err());
        assert!(g.split(0, 1.0).is_err());
    }

    #[test]
    fn splitting_is_invisible() {
        let u = UnitSystem::tabulated();
        let db = DoubleBarrier::from_parts(10.6, 1.5, 8.7, 1.0, 7.0).unwrap();
        let g = PotentialGrid::from_double_barrier(&db).unwrap();
        let k = 1.7;
        let base = transfer_matrix_solve(&u, k, &g).unwrap();
        for idx in 0..3 {
            let s = transfer_matrix_solve(&u, k, &g.split(idx, 0.37).unwrap()).unwrap();
            assert!((s.transmission - base.transmission).norm() < 1e-12);
            assert!((s.reflection - base.reflection).norm() < 1e-12);
        }
    }
}
