//! Propagates Landau eigenmodes with Crank–Nicolson and fits the linear
//! Gouy phase q·b/(2k)·z from the overlap with the initial field.
//!
//! cargo run --release --example magnetic_gouy

use landau_paraxial::gouy::extract_gouy;
use landau_paraxial::grid::{make_radial_grid, sample_mode};
use landau_paraxial::modes::{eval_landau_radial, Carrier, QuantumNumbers};
use landau_paraxial::propagator::{propagate, PropagationParams};
use landau_paraxial::units::{make_context, Species};

fn main() -> landau_paraxial::Result<()> {
    let cases = [
        (Species::Electron, 0, 1, -0.5),
        (Species::Electron, 1, 0, 0.5),
        (Species::Positron, 0, -1, 0.5),
        (Species::Electron, 0, 0, -0.5),
    ];
    for (species, n, ell, sz) in cases {
        let ctx = make_context(species, sz, 0.01, 1.0)?;
        let qn = QuantumNumbers::new(n, ell);
        let grid = make_radial_grid(8.0 * ctx.w_m, 2048)?;
        let u0 = sample_mode(
            |r| eval_landau_radial(qn, ctx.w_m, r),
            ell,
            grid,
            Carrier::Paraxial,
        )?
        .normalized()?;

        let record = propagate(
            &u0,
            &PropagationParams::magnetic(ctx, ell, 100.0, 2000, 500),
        )?;
        let fit = extract_gouy(&record, n)?;
        println!(
            "{species} n={n} ell={ell:>2} sz={sz:+}: slope={:.8e} analytic={:.8e} norm drift={:.1e} min|overlap|={:.10}",
            fit.fitted_slope.unwrap_or(f64::NAN),
            fit.analytic_rate,
            record.max_norm_drift(),
            record.min_normalized_overlap()
        );
    }
    Ok(())
}
