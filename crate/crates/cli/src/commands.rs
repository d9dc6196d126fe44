use std::fs::File;
use std::io::{self, BufWriter};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dbtunnel_core::interference::{fp_transmission, reflection_by_interference, transmission_by_interference, Terms};
use dbtunnel_core::oracle::{transfer_matrix_solve, PotentialGrid};
use dbtunnel_core::phase_time::{
    asymmetric_phase_time, hartman_limit, lifetime_report, phase_time_profile, single_barrier_phase_time,
    symmetric_double_phase_time, transmitted_phase, Regime,
};
use dbtunnel_core::presets::Preset;
use dbtunnel_core::quantum::{double_barrier_solution, verify_flux_conservation};
use dbtunnel_core::resonance::{characterize, fp_standing_wave, well_standing_wave, WidthOptions};
use dbtunnel_core::{Barrier, DoubleBarrier, Kinematics, UnitSystem};

use crate::args::{CommonArgs, StandingArgs, ValidateArgs};
use crate::config::{geometry, Geometry, RunConfig, UNITS_LINE};
use crate::error::{CliError, CliResult};
use crate::output::{format_float, Cell, Document, Section};

/// `βl` at which the thick-barrier saturation is checked.
pub const SATURATION_BETA_L: f64 = 20.0;

fn emit(cfg: &RunConfig, doc: &Document) -> CliResult<()> {
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            doc.write_to(cfg.format, &mut w)
        }
        None => doc.write_to(cfg.format, &mut io::stdout().lock()),
    }
}

pub fn spectrum(args: &CommonArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve("spectrum", args)?;
    emit(&cfg, &spectrum_document(&cfg)?)
}

pub fn spectrum_document(cfg: &RunConfig) -> CliResult<Document> {
    let mut doc = cfg.header();
    let ks = cfg.k_grid();
    let section = match cfg.geometry {
        Geometry::Barrier(db) => {
            doc.meta("theta", "arg(T e^{ik(d+l1+l2)}) in (-pi, pi]");
            let mut s = Section::new("spectrum", &["k", "T", "R", "theta"]);
            for &k in &ks {
                let sol = double_barrier_solution(&cfg.units, k, &db)?;
                let theta = transmitted_phase(&cfg.units, k, &db)?;
                s.push(vec![
                    k.into(),
                    sol.transmission_rate().into(),
                    sol.reflection_rate().into(),
                    theta.into(),
                ]);
            }
            s
        }
        Geometry::Cavity(cav) => {
            let mut s = Section::new("spectrum", &["k", "T", "R"]);
            for &k in &ks {
                let t = fp_transmission(k * Preset::OPTICAL_K_UNIT, &cav)?;
                s.push(vec![k.into(), t.into(), (1.0 - t).into()]);
            }
            s
        }
    };
    doc.sections.push(section);
    Ok(doc)
}

pub fn resonances(args: &CommonArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve("resonances", args)?;
    emit(&cfg, &resonances_document(&cfg)?)
}

fn width_options(cfg: &RunConfig) -> WidthOptions {
    WidthOptions {
        tol: cfg.tolerance,
        ..WidthOptions::default()
    }
}

pub fn resonances_document(cfg: &RunConfig) -> CliResult<Document> {
    let db = cfg.barrier()?;
    let mut doc = cfg.header();
    doc.meta_num("tolerance", cfg.tolerance);
    doc.meta(
        "root_system",
        if db.is_symmetric() {
            "symmetric 2kd + delta"
        } else {
            "phase kd - (phi1 + phi2 + pi)/2 = m pi"
        },
    );
    doc.meta(
        "half_maximum",
        "half of the lowest peak, continued above the barrier top",
    );
    doc.meta(
        "free_spectral",
        "k of the last resonance divided by the resonance count",
    );
    doc.meta("finesse_analytic", "pi sqrt(R1 R2)/(1 - R1 R2) evaluated at k_res");
    let records = characterize(
        &cfg.units,
        &db,
        (cfg.k_min, cfg.k_max),
        db.is_symmetric(),
        &width_options(cfg),
    )?;
    let mut s = Section::new(
        "resonances",
        &[
            "m",
            "k_res",
            "T_peak",
            "k_half_left",
            "k_half_right",
            "fwhm",
            "spacing",
            "free_spectral",
            "finesse_numeric",
            "finesse_analytic",
            "overlap",
        ],
    );
    for r in &records {
        s.push(vec![
            r.mode_index.into(),
            r.k_res.into(),
            r.t_peak.into(),
            r.k_half_left.into(),
            r.k_half_right.into(),
            r.fwhm.into(),
            r.spacing.into(),
            r.free_spectral.into(),
            r.finesse_numeric.into(),
            r.finesse_analytic.into(),
            r.overlap.map_or(Cell::Missing, |side| Cell::Text(side.to_string())),
        ]);
    }
    doc.sections.push(s);
    Ok(doc)
}

pub fn standing_wave(args: &StandingArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve("standing-wave", &args.common)?;
    let xs = positions(&cfg, args)?;
    emit(&cfg, &standing_wave_document(&cfg, &xs)?)
}

fn region(cfg: &RunConfig) -> (f64, f64) {
    match cfg.geometry {
        Geometry::Barrier(db) => {
            let [_, b1, a2, _] = db.interfaces();
            (b1, a2)
        }
        Geometry::Cavity(cav) => (0.0, cav.separation()),
    }
}

/// Explicit `--x` values, else an `--x-min/--x-max` grid, else the preset's
/// reference positions, else a grid over the whole well or cavity.
pub fn positions(cfg: &RunConfig, args: &StandingArgs) -> CliResult<Vec<f64>> {
    let (lo, hi) = region(cfg);
    let xs = if !args.x.is_empty() {
        args.x.clone()
    } else if args.x_min.is_none()
        && args.x_max.is_none()
        && cfg.preset.is_some_and(|p| !p.standing_positions().is_empty())
    {
        cfg.preset.map(|p| p.standing_positions().to_vec()).unwrap_or_default()
    } else {
        let a = args.x_min.unwrap_or(lo);
        let b = args.x_max.unwrap_or(hi);
        let n = args.x_points;
        if n == 0 || b < a {
            Vec::new()
        } else if n == 1 {
            vec![a]
        } else {
            (0..n)
                .map(|i| {
                    if i + 1 == n {
                        b
                    } else {
                        a + (b - a) * i as f64 / (n - 1) as f64
                    }
                })
                .collect()
        }
    };
    if let Some(&bad) = xs.iter().find(|&&x| !(x >= lo && x <= hi)) {
        return Err(CliError::usage(format!(
            "position {} lies outside [{}, {}]",
            format_float(bad),
            format_float(lo),
            format_float(hi)
        )));
    }
    Ok(xs)
}

pub fn standing_wave_document(cfg: &RunConfig, xs: &[f64]) -> CliResult<Document> {
    let mut doc = cfg.header();
    let (lo, hi) = region(cfg);
    doc.meta("x_region", format!("[{}, {}]", format_float(lo), format_float(hi)));
    let ks = cfg.k_grid();
    let section = match cfg.geometry {
        Geometry::Barrier(db) => {
            doc.meta(
                "P",
                "|alpha e^{ikx} + gamma e^{-ikx}|^2 inside the well, unit incident amplitude",
            );
            let mut s = Section::new("standing_wave", &["k", "x", "P"]);
            for &k in &ks {
                for &x in xs {
                    s.push(vec![
                        k.into(),
                        x.into(),
                        well_standing_wave(&cfg.units, k, x, &db)?.into(),
                    ]);
                }
            }
            s
        }
        Geometry::Cavity(cav) => {
            doc.meta("I", "intensity relative to the incident beam");
            let mut s = Section::new("standing_wave", &["k", "x", "I"]);
            for &k in &ks {
                for &x in xs {
                    s.push(vec![
                        k.into(),
                        x.into(),
                        fp_standing_wave(k * Preset::OPTICAL_K_UNIT, x, &cav)?.into(),
                    ]);
                }
            }
            s
        }
    };
    doc.sections.push(section);
    Ok(doc)
}

pub fn phase_time(args: &CommonArgs) -> CliResult<()> {
    let cfg = RunConfig::resolve("phase-time", args)?;
    emit(&cfg, &phase_time_document(&cfg)?)
}

pub fn phase_time_document(cfg: &RunConfig) -> CliResult<Document> {
    let db = cfg.barrier()?;
    let u = &cfg.units;
    let mut doc = cfg.header();
    doc.meta_num("dk", cfg.dk);
    doc.meta_num("tolerance", cfg.tolerance);
    doc.meta("theta", "unwrapped arg(T e^{ik(d+l1+l2)})");
    doc.meta("tau", "(m/hbar k) dtheta/dk in fs");

    let ks = cfg.k_grid();
    let profile = phase_time_profile(u, &db, &ks, cfg.dk)?;
    let mut s = Section::new("profile", &["k", "theta", "tau_fs", "T", "regime"]);
    for i in 0..ks.len() {
        let regime = match profile.regime[i] {
            Regime::DeepTunneling => "deep-tunneling",
            Regime::NearResonance => "near-resonance",
        };
        s.push(vec![
            profile.k[i].into(),
            profile.theta[i].into(),
            profile.tau[i].into(),
            profile.transmission[i].into(),
            regime.into(),
        ]);
    }
    doc.sections.push(s);

    let records = characterize(u, &db, (cfg.k_min, cfg.k_max), db.is_symmetric(), &width_options(cfg))?;
    let rows = lifetime_report(u, &db, &records, cfg.dk)?;
    let mut s = Section::new(
        "lifetimes",
        &[
            "k_res",
            "fwhm",
            "delta_e_eV",
            "tau_uc_fs",
            "two_tau_uc_fs",
            "tau_db_fs",
            "tau_corrected_fs",
        ],
    );
    for r in &rows {
        s.push(vec![
            r.k_res.into(),
            r.fwhm.into(),
            r.delta_e.into(),
            r.tau_uc.into(),
            r.two_tau_uc().into(),
            r.tau_db.into(),
            r.tau_corrected.into(),
        ]);
    }
    doc.sections.push(s);
    doc.sections.push(limit_checks(u, &db, cfg.dk)?);
    Ok(doc)
}

/// Thick-barrier saturation and the closed-form vs numeric cross-check,
/// evaluated at half the tunneling ceiling on the first barrier's height.
fn limit_checks(u: &UnitSystem, db: &DoubleBarrier, dk: f64) -> CliResult<Section> {
    let height = db.first.height();
    let k = 0.5 * db.tunneling_ceiling(u);
    let beta = Kinematics::new(u, k, height)?.beta;
    let thick = SATURATION_BETA_L / (beta * u.length_scale());
    let limit = hartman_limit(u, k, height)?;
    let mut s = Section::new("limits", &["check", "k", "value_fs", "reference_fs", "rel_diff"]);
    let mut row = |name: &str, value: f64, reference: f64| {
        s.push(vec![
            name.into(),
            k.into(),
            value.into(),
            reference.into(),
            ((value - reference) / reference).abs().into(),
        ]);
    };
    let sb = single_barrier_phase_time(u, k, &Barrier::new(height, thick)?)?;
    row("tau_sb at beta*l = 20 vs 2/(v beta)", sb, limit);
    let dbs = symmetric_double_phase_time(u, k, height, thick, db.gap())?;
    row("tau_dbs at beta*l = 20 vs 2/(v beta)", dbs, limit);
    let sym = DoubleBarrier::symmetric(height, db.first.length(), db.gap())?;
    let closed = symmetric_double_phase_time(u, k, height, db.first.length(), db.gap())?;
    let numeric = asymmetric_phase_time(u, k, &sym, dk.min(0.5 * k))?;
    row(
        "tau_dbs numeric vs closed form on the mirrored first barrier",
        numeric,
        closed,
    );
    Ok(s)
}

/// Running maxima of the validation residuals.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Residuals {
    pub samples: usize,
    pub transmission: f64,
    pub reflection: f64,
    pub flux: f64,
    pub swap: f64,
}

impl Residuals {
    pub fn add(&mut self, u: &UnitSystem, db: &DoubleBarrier, grid: &PotentialGrid, k: f64) -> CliResult<()> {
        let closed = double_barrier_solution(u, k, db)?;
        let oracle = transfer_matrix_solve(u, k, grid)?;
        let t_fp = transmission_by_interference(u, k, db, Terms::Closed)?.norm_sqr();
        let r_fp = reflection_by_interference(u, k, db)?.norm_sqr();
        let ts = [closed.transmission_rate(), t_fp, oracle.transmission_rate()];
        let rs = [closed.reflection_rate(), r_fp, oracle.reflection_rate()];
        let spread = |v: [f64; 3]| (v[0] - v[1]).abs().max((v[0] - v[2]).abs()).max((v[1] - v[2]).abs());
        let swapped = double_barrier_solution(u, k, &db.swapped())?;
        self.samples += 1;
        self.transmission = self.transmission.max(spread(ts));
        self.reflection = self.reflection.max(spread(rs));
        self.flux = self.flux.max(verify_flux_conservation(&closed).max_residual());
        self.swap = self
            .swap
            .max((swapped.transmission_rate() - closed.transmission_rate()).abs());
        Ok(())
    }
}

/// A random valid configuration and a wave number inside its tunneling
/// window.
pub fn random_case(u: &UnitSystem, rng: &mut ChaCha8Rng) -> CliResult<(DoubleBarrier, f64)> {
    let db = DoubleBarrier::from_parts(
        rng.gen_range(1.0..30.0),
        rng.gen_range(0.05..3.0),
        rng.gen_range(1.0..30.0),
        rng.gen_range(0.05..3.0),
        rng.gen_range(0.0..15.0),
    )?;
    let k = rng.gen_range(0.01..0.99) * db.tunneling_ceiling(u);
    Ok((db, k))
}

pub fn validate(args: &ValidateArgs) -> CliResult<()> {
    let common = &args.common;
    let configs = match geometry(&common.geometry)? {
        Some((g, p)) => vec![RunConfig::with_geometry("validate", common, g, p)?],
        None => [Preset::Fig4bSymmetric, Preset::Fig6bAsymmetric]
            .into_iter()
            .map(|p| {
                let db = p.double_barrier().expect("barrier preset");
                RunConfig::with_geometry("validate", common, Geometry::Barrier(db), Some(p))
            })
            .collect::<CliResult<_>>()?,
    };
    let (doc, passed) = validate_document(&configs, args.random, args.seed)?;
    emit(&configs[0], &doc)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "a residual exceeded {}",
            format_float(configs[0].tolerance)
        )))
    }
}

/// The residual table and whether every check stayed within tolerance.
pub fn validate_document(configs: &[RunConfig], random: usize, seed: u64) -> CliResult<(Document, bool)> {
    let first = &configs[0];
    let threshold = first.tolerance;
    let mut doc = if configs.len() == 1 {
        first.header()
    } else {
        let mut d = Document::default();
        d.meta("command", first.command);
        let names: Vec<&str> = configs.iter().filter_map(|c| c.preset.map(|p| p.name())).collect();
        d.meta("preset", names.join(" "));
        d.meta("unit_system", first.units_name);
        d.meta_num("k_unit_per_m", first.units.k_unit());
        d.meta_num("k_e_per_m", first.units.k_e());
        d.meta("units", UNITS_LINE);
        d.meta(
            "k_range",
            "(k_min, k_max] per preset, k_max defaults below the tunneling ceiling",
        );
        d.meta("points", first.points.to_string());
        d
    };
    doc.meta_num("threshold", threshold);
    doc.meta("random_configs", random.to_string());
    doc.meta("seed", seed.to_string());
    doc.meta(
        "T,R",
        "max pairwise spread among closed form, interference sum and transfer matrix",
    );

    let mut grid_res = Residuals::default();
    for cfg in configs {
        let db = cfg.barrier()?;
        let grid = PotentialGrid::from_double_barrier(&db)?;
        for k in cfg.k_grid() {
            grid_res.add(&cfg.units, &db, &grid, k)?;
        }
    }
    let mut random_res = Residuals::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = first.units;
    for _ in 0..random {
        let (db, k) = random_case(&u, &mut rng)?;
        let grid = PotentialGrid::from_double_barrier(&db)?;
        random_res.add(&u, &db, &grid, k)?;
    }

    let mut passed = true;
    let mut s = Section::new(
        "checks",
        &["check", "source", "samples", "max_residual", "threshold", "status"],
    );
    for (source, r) in [("grid", grid_res), ("random", random_res)] {
        for (name, value) in [
            ("transmission rate", r.transmission),
            ("reflection rate", r.reflection),
            ("flux conservation", r.flux),
            ("left-right swap", r.swap),
        ] {
            let ok = value <= threshold;
            passed &= ok;
            s.push(vec![
                name.into(),
                source.into(),
                (r.samples as i64).into(),
                value.into(),
                threshold.into(),
                if ok { "pass" } else { "FAIL" }.into(),
            ]);
        }
    }
    doc.sections.push(s);
    Ok((doc, passed))
}
