//! With w0 = w_m the free LG mode at its waist and the Landau mode coincide,
//! and the free Gouy slope at z -> 0 equals the (2n+|l|+1) part of the
//! magnetic rate. The rest, -/+(l + 2 s_z)·b/(2k), is printed.
//!
//! cargo run --release --example correspondence

use landau_paraxial::modes::{correspondence, eval_free_lg, eval_landau_radial, QuantumNumbers};
use landau_paraxial::units::{make_context, Species};

fn main() -> landau_paraxial::Result<()> {
    for (species, sz) in [
        (Species::Electron, -0.5),
        (Species::Electron, 0.5),
        (Species::Positron, 0.5),
    ] {
        let ctx = make_context(species, sz, 0.01, 1.0)?;
        for (n, ell) in [(0, 0), (0, 1), (1, -1), (2, 2)] {
            let qn = QuantumNumbers::new(n, ell);
            let worst = (1..200)
                .map(|i| i as f64 * 0.5)
                .map(|r| {
                    (eval_free_lg(qn, ctx.w_m, ctx.k, r, 0.0) - eval_landau_radial(qn, ctx.w_m, r))
                        .norm()
                })
                .fold(0.0_f64, f64::max);
            let c = correspondence(qn, &ctx);
            println!(
                "{species} sz={sz:+} n={n} ell={ell:>2}: q_mag={} q_free={} shared={:.6e} free slope={:.6e} residual={:+.3e} max|diff|={worst:.1e}",
                c.magnetic_prefactor, c.free_prefactor, c.shared_rate, c.free_initial_slope, c.residual_rate
            );
        }
    }
    Ok(())
}
