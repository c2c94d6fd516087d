//! Lowest transverse eigenvalues of the discretized operator against q·b,
//! plus the relativistic energies and their shrinking spacings.
//!
//! cargo run --release --example landau_spectrum

use landau_paraxial::grid::make_radial_grid;
use landau_paraxial::spectrum::spectrum_report;
use landau_paraxial::units::{make_context, Species};

fn main() -> landau_paraxial::Result<()> {
    let ctx = make_context(Species::Electron, -0.5, 0.01, 1.0)?;
    let grid = make_radial_grid(8.0 * ctx.w_m, 4096)?;

    for ell in 0..=2 {
        let report = spectrum_report(&ctx, ell, 5, &grid, 0.0)?;
        println!("ell = {ell}");
        for row in &report.rows {
            println!(
                "  n={}  numeric={:.10e}  q*b={:.4e}  rel_err={:.2e}  E={:.12}  dE={:.8e}",
                row.n,
                row.numeric_lambda,
                row.analytic_lambda,
                row.rel_err,
                row.energy,
                row.spacing
            );
        }
        println!(
            "  spacings strictly decreasing: {}",
            report.spacings_strictly_decreasing
        );
    }

    // the CSV the CLI writes
    let report = spectrum_report(&ctx, 0, 5, &grid, 0.0)?;
    report.write_csv(&mut std::io::stdout().lock())?;
    Ok(())
}
