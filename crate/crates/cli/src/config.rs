use std::path::PathBuf;

use dbtunnel_core::interference::OpticalCavity;
use dbtunnel_core::phase_time::DEFAULT_DK;
use dbtunnel_core::presets::Preset;
use dbtunnel_core::resonance::DEFAULT_TOLERANCE;
use dbtunnel_core::{DoubleBarrier, UnitSystem};

use crate::args::{CommonArgs, Format, GeometryArgs, Units};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, Document};

/// Fraction of the tunneling ceiling used as the default upper k.
pub const CEILING_FRACTION: f64 = 0.999;
pub const UNITS_LINE: &str = "k in k_unit; energy in eV; length in angstrom; time in fs";
/// Default upper k for an optical cavity, in units of 10⁶ m⁻¹.
pub const CAVITY_K_MAX: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Barrier(DoubleBarrier),
    Cavity(OpticalCavity),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub geometry: Geometry,
    pub preset: Option<Preset>,
    pub units: UnitSystem,
    pub units_name: &'static str,
    pub k_min: f64,
    pub k_max: f64,
    pub points: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerance: f64,
    pub dk: f64,
}

pub fn unit_system(units: Units) -> (UnitSystem, &'static str) {
    match units {
        Units::Tabulated => (UnitSystem::tabulated(), "tabulated"),
        Units::Nominal => (UnitSystem::nominal(), "nominal"),
        Units::Codata => (UnitSystem::codata(), "codata"),
    }
}

/// `None` when no geometry flag was given.
pub fn geometry(args: &GeometryArgs) -> CliResult<Option<(Geometry, Option<Preset>)>> {
    if let Some(name) = &args.preset {
        let preset = Preset::from_name(name).ok_or_else(|| {
            let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
            CliError::usage(format!("unknown preset `{name}`; expected one of {}", names.join(", ")))
        })?;
        let g = match (preset.double_barrier(), preset.cavity()) {
            (Some(db), _) => Geometry::Barrier(db),
            (None, Some(cav)) => Geometry::Cavity(cav),
            (None, None) => unreachable!("every preset is a barrier or a cavity"),
        };
        return Ok(Some((g, Some(preset))));
    }
    if let (Some(a1), Some(l1), Some(a2), Some(l2), Some(d)) = (args.a1, args.l1, args.a2, args.l2, args.d) {
        let db = DoubleBarrier::from_parts(a1, l1, a2, l2, d).map_err(|e| CliError::usage(e.to_string()))?;
        return Ok(Some((Geometry::Barrier(db), None)));
    }
    if let (Some(r), Some(d0)) = (args.reflectivity, args.separation) {
        let cav = OpticalCavity::new(r, d0).map_err(|e| CliError::usage(e.to_string()))?;
        return Ok(Some((Geometry::Cavity(cav), None)));
    }
    Ok(None)
}

impl RunConfig {
    pub fn resolve(command: &'static str, args: &CommonArgs) -> CliResult<Self> {
        let (geometry, preset) = geometry(&args.geometry)?.ok_or_else(|| {
            CliError::usage(
                "a geometry is required: --preset NAME, --a1 --l1 --a2 --l2 --d, or --reflectivity --separation",
            )
        })?;
        Self::with_geometry(command, args, geometry, preset)
    }

    pub fn with_geometry(
        command: &'static str,
        args: &CommonArgs,
        geometry: Geometry,
        preset: Option<Preset>,
    ) -> CliResult<Self> {
        let (units, units_name) = unit_system(args.units);
        let k_min = args.k_min.unwrap_or(0.0);
        if !(k_min.is_finite() && k_min >= 0.0) {
            return Err(CliError::usage(format!(
                "--k-min must be finite and non-negative, got {k_min}"
            )));
        }
        let k_max = match (args.k_max, geometry) {
            (Some(k), _) => k,
            (None, Geometry::Barrier(db)) => CEILING_FRACTION * db.tunneling_ceiling(&units),
            (None, Geometry::Cavity(_)) => CAVITY_K_MAX,
        };
        if !k_max.is_finite() {
            return Err(CliError::usage(format!("--k-max must be finite, got {k_max}")));
        }
        if let Geometry::Barrier(db) = geometry {
            let ceiling = db.tunneling_ceiling(&units);
            if k_max > k_min && k_max >= ceiling {
                return Err(CliError::usage(format!(
                    "--k-max {} must lie below the tunneling ceiling {} (E < min(A1, A2))",
                    format_float(k_max),
                    format_float(ceiling)
                )));
            }
        }
        let tolerance = args.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(CliError::usage(format!(
                "--tolerance must be positive, got {tolerance}"
            )));
        }
        let dk = args.dk.unwrap_or(DEFAULT_DK);
        if !(dk > 0.0 && dk.is_finite()) {
            return Err(CliError::usage(format!("--dk must be positive, got {dk}")));
        }
        Ok(Self {
            command,
            geometry,
            preset,
            units,
            units_name,
            k_min,
            k_max,
            points: args.points,
            format: args.format,
            out: args.out.clone(),
            tolerance,
            dk,
        })
    }

    pub fn barrier(&self) -> CliResult<DoubleBarrier> {
        match self.geometry {
            Geometry::Barrier(db) => Ok(db),
            Geometry::Cavity(_) => Err(CliError::usage(format!(
                "`{}` requires a double barrier, not an optical cavity",
                self.command
            ))),
        }
    }

    /// `points` wave numbers evenly spaced on `(k_min, k_max]`; empty when
    /// the interval is empty.
    pub fn k_grid(&self) -> Vec<f64> {
        if self.k_max <= self.k_min || self.points == 0 {
            return Vec::new();
        }
        let n = self.points as f64;
        (1..=self.points)
            .map(|i| {
                if i == self.points {
                    self.k_max
                } else {
                    self.k_min + (self.k_max - self.k_min) * i as f64 / n
                }
            })
            .collect()
    }

    /// Header lines shared by every output: command, geometry and units.
    pub fn header(&self) -> Document {
        let mut doc = Document::default();
        doc.meta("command", self.command);
        doc.meta("preset", self.preset.map_or("custom", |p| p.name()));
        match self.geometry {
            Geometry::Barrier(db) => {
                doc.meta("geometry", "double barrier, first barrier starts at x = 0");
                doc.meta_num("A1_eV", db.first.height());
                doc.meta_num("l1_angstrom", db.first.length());
                doc.meta_num("A2_eV", db.second.height());
                doc.meta_num("l2_angstrom", db.second.length());
                doc.meta_num("d_angstrom", db.gap());
                doc.meta("unit_system", self.units_name);
                doc.meta_num("k_unit_per_m", self.units.k_unit());
                doc.meta_num("k_e_per_m", self.units.k_e());
                doc.meta("units", UNITS_LINE);
                doc.meta_num("tunneling_ceiling_k", db.tunneling_ceiling(&self.units));
            }
            Geometry::Cavity(cav) => {
                doc.meta("geometry", "optical cavity, left mirror at x = 0");
                doc.meta_num("reflectivity", cav.reflectivity());
                doc.meta_num("separation_m", cav.separation());
                doc.meta("unit_system", self.units_name);
                doc.meta_num("k_unit_per_m", Preset::OPTICAL_K_UNIT);
                doc.meta_num("k_e_per_m", self.units.k_e());
                doc.meta(
                    "units",
                    "optical k in k_unit; cavity length and x in m; matter waves use eV, angstrom, fs",
                );
            }
        }
        doc.meta_num("k_min", self.k_min);
        doc.meta_num("k_max", self.k_max);
        doc.meta("points", self.points.to_string());
        doc
    }
}
