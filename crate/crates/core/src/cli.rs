//! `landau-paraxial` command line.
//!
//! Exit codes: 0 success, 2 numerical acceptance failure, 3 physics guard
//! (wall contact, paraxiality, vanished overlap), 64 usage or config error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::gouy::{extract_gouy, extract_gouy_free};
use crate::grid::{make_radial_grid, norm, sample_mode, write_field_dump, ComplexRadialField};
use crate::modes::{
    eval_free_lg, eval_landau_radial, physicality_check, transverse_eigenvalue, Carrier,
    Physicality,
};
use crate::propagator::{propagate, PropagationParams, PropagationRecord};
use crate::spectrum::spectrum_report;
use crate::validate::{run_suite, summary_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ACCEPTANCE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Spectrum rows must match q·b to this relative error.
pub const SPECTRUM_TOLERANCE: f64 = 1e-5;
/// Magnetic Gouy slope tolerance (relative).
pub const GOUY_SLOPE_TOLERANCE: f64 = 1e-3;
/// Free-space ζ(z) tolerance in radians.
pub const GOUY_FREE_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Parser)]
#[command(
    name = "landau-paraxial",
    version,
    about = "Landau modes, paraxial propagation and Gouy phases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for `validate`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Numeric vs analytic transverse eigenvalues and relativistic energies.
    Spectrum(Common),
    /// Sample one analytic mode and dump it.
    Mode(Common),
    /// Crank–Nicolson propagation of the configured mode.
    Propagate(Common),
    /// Propagate, then extract and fit the Gouy phase.
    Gouy(Common),
    /// Run the acceptance suite.
    Validate(Common),
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::WallContact { .. } | Error::Paraxiality { .. } | Error::Extraction { .. } => {
            EXIT_GUARD
        }
        Error::Numeric(_) | Error::Fit(_) => EXIT_ACCEPTANCE,
        Error::Domain(_)
        | Error::Usage(_)
        | Error::Config { .. }
        | Error::Lookup(_)
        | Error::Parse(_)
        | Error::Io(_) => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (common, config_required) = match &cli.command {
        Command::Validate(c) => (c, false),
        Command::Spectrum(c) | Command::Mode(c) | Command::Propagate(c) | Command::Gouy(c) => {
            (c, true)
        }
    };
    let result = load_config(common, config_required).and_then(|(cfg, out)| match &cli.command {
        Command::Spectrum(_) => cmd_spectrum(&cfg, &out),
        Command::Mode(_) => cmd_mode(&cfg, &out),
        Command::Propagate(_) => cmd_propagate(&cfg, &out),
        Command::Gouy(_) => cmd_gouy(&cfg, &out),
        Command::Validate(c) => cmd_validate(&cfg, &out, c.jobs as usize),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load_config(common: &Common, required: bool) -> Result<(RunConfig, PathBuf)> {
    let cfg = match &common.config {
        Some(path) => RunConfig::load(path).map_err(|e| match e {
            Error::Io(io) => Error::Usage(format!("cannot read config {}: {io}", path.display())),
            other => other,
        })?,
        None if required => return Err(Error::Usage("--config <path> is required".into())),
        None => RunConfig::default(),
    };
    let out = common.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
    Ok((cfg, out))
}

fn create_file(dir: &Path, name: &str) -> Result<std::io::BufWriter<fs::File>> {
    fs::create_dir_all(dir)?;
    Ok(std::io::BufWriter::new(fs::File::create(dir.join(name))?))
}

/// The configured mode at z = 0 in the paraxial carrier.
fn initial_field(cfg: &RunConfig) -> Result<ComplexRadialField> {
    let qn = cfg.quantum_numbers();
    let grid = make_radial_grid(cfg.r_max()?, cfg.n_points)?;
    match cfg.context()? {
        Some(ctx) => sample_mode(
            |r| eval_landau_radial(qn, ctx.w_m, r),
            qn.ell,
            grid,
            Carrier::Paraxial,
        ),
        None => {
            let w0 = cfg.width()?;
            sample_mode(
                |r| eval_free_lg(qn, w0, cfg.k, r, 0.0),
                qn.ell,
                grid,
                Carrier::Paraxial,
            )
        }
    }
}

pub fn cmd_spectrum(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let ctx = cfg
        .context()?
        .ok_or_else(|| Error::Usage("spectrum needs b > 0".into()))?;
    let grid = make_radial_grid(cfg.r_max()?, cfg.n_points)?;
    let report = spectrum_report(&ctx, cfg.ell, cfg.spectrum_levels, &grid, cfg.pz)?;
    let mut f = create_file(out, "spectrum.csv")?;
    report.write_csv(&mut f)?;
    f.flush()?;
    for row in &report.rows {
        println!(
            "n={} lambda={:.10e} analytic={:.10e} rel_err={:.3e}",
            row.n, row.numeric_lambda, row.analytic_lambda, row.rel_err
        );
    }
    println!(
        "spacing strictly decreasing: {}",
        report.spacings_strictly_decreasing
    );
    let worst = report.max_rel_err();
    if worst < SPECTRUM_TOLERANCE {
        Ok(EXIT_OK)
    } else {
        println!("max rel_err {worst:.3e} exceeds {SPECTRUM_TOLERANCE:e}");
        Ok(EXIT_ACCEPTANCE)
    }
}

pub fn cmd_mode(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let field = initial_field(cfg)?;
    let physical = physicality_check(cfg.quantum_numbers(), cfg.particle_spec());
    let dumped = field.with_carrier(cfg.mode, cfg.k, 0.0);
    let mut f = create_file(out, "mode.dump")?;
    write_field_dump(&dumped, None, &mut f)?;
    f.flush()?;
    println!("norm = {:.12}", norm(&field));
    match physical {
        Physicality::Physical => println!("physicality: physical"),
        Physicality::UnphysicalRotation => {
            println!("physicality: unphysical");
            eprintln!(
                "warning: unphysical rotation direction for {} with ell = {}",
                cfg.particle, cfg.ell
            );
        }
    }
    Ok(EXIT_OK)
}

fn run_propagation(cfg: &RunConfig) -> Result<PropagationRecord> {
    // the sampled mode carries an O(h²) quadrature norm defect
    let field = initial_field(cfg)?.normalized()?;
    let params = match cfg.context()? {
        Some(ctx) => {
            let lambda = transverse_eigenvalue(cfg.quantum_numbers(), ctx.particle, ctx.b);
            ctx.longitudinal_momentum(lambda)?;
            PropagationParams::magnetic(ctx, cfg.ell, cfg.z_max, cfg.n_steps, cfg.snapshot_stride)
        }
        None => {
            PropagationParams::free(cfg.k, cfg.ell, cfg.z_max, cfg.n_steps, cfg.snapshot_stride)
        }
    };
    let record = propagate(&field, &params).inspect_err(|e| {
        if let Error::WallContact { z, .. } = e {
            eprintln!("beam reached the wall at z = {z}");
        }
    })?;
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    Ok(record)
}

pub fn cmd_propagate(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let record = run_propagation(cfg)?;
    let mut f = create_file(out, "record.csv")?;
    record.write_csv(&mut f)?;
    f.flush()?;
    for (i, (z, snap)) in record.snapshots.iter().enumerate() {
        let mut f = create_file(out, &format!("snapshot_{i:04}.dump"))?;
        write_field_dump(&snap.with_carrier(cfg.mode, cfg.k, *z), Some(*z), &mut f)?;
        f.flush()?;
    }
    let last = record.len() - 1;
    println!(
        "z = {} norm drift = {:.3e} final |overlap| = {:.12}",
        record.z[last],
        record.max_norm_drift(),
        record.overlap[last].norm() / record.overlap[0].re
    );
    Ok(EXIT_OK)
}

pub fn cmd_gouy(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let record = run_propagation(cfg)?;
    let (fit, passed) = if cfg.is_free() {
        let fit = extract_gouy_free(&record, cfg.quantum_numbers(), cfg.width()?, cfg.k)?;
        println!("max |zeta - analytic| = {:.3e} rad", fit.max_abs_deviation);
        let ok = fit.max_abs_deviation < GOUY_FREE_TOLERANCE;
        (fit, ok)
    } else {
        let fit = extract_gouy(&record, cfg.n)?;
        let rel = fit.rel_slope_error.unwrap_or(f64::INFINITY);
        println!(
            "slope = {:.10e} analytic = {:.10e} rel_err = {rel:.3e}",
            fit.fitted_slope.unwrap_or(f64::NAN),
            fit.analytic_rate
        );
        (fit, rel < GOUY_SLOPE_TOLERANCE)
    };
    let mut f = create_file(out, "gouy.csv")?;
    fit.write_csv(&mut f)?;
    f.flush()?;
    Ok(if passed { EXIT_OK } else { EXIT_ACCEPTANCE })
}

pub fn cmd_validate(cfg: &RunConfig, out: &Path, jobs: usize) -> Result<i32> {
    let outcomes = run_suite(cfg, jobs);
    for o in &outcomes {
        for file in &o.files {
            fs::create_dir_all(out)?;
            fs::write(out.join(&file.name), &file.bytes)?;
        }
    }
    fs::create_dir_all(out)?;
    fs::write(out.join("validate_summary.csv"), summary_csv(&outcomes))?;
    for o in &outcomes {
        println!("{}  ({:.2} s)", o.summary_line(), o.elapsed.as_secs_f64());
    }
    let all = outcomes.iter().all(|o| o.passed());
    Ok(if all { EXIT_OK } else { EXIT_ACCEPTANCE })
}
