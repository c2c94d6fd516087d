//! Samples a Landau mode on the staggered grid, checks its quadrature norm,
//! applies the transverse operator and flags the rotation sense.
//!
//! cargo run --release --example landau_mode

use landau_paraxial::grid::{
    apply_transverse_operator, make_radial_grid, norm, overlap, sample_mode,
    TransverseOperatorParams,
};
use landau_paraxial::modes::{
    eval_landau_radial, physicality_check, transverse_eigenvalue, Carrier, QuantumNumbers,
};
use landau_paraxial::units::{make_context, Species};

fn main() -> landau_paraxial::Result<()> {
    let ctx = make_context(Species::Electron, -0.5, 0.01, 1.0)?;

    for (n, ell) in [(0, 0), (0, 1), (2, 3), (1, -2)] {
        let qn = QuantumNumbers::new(n, ell);
        let grid = make_radial_grid(8.0 * ctx.w_m, 2048)?;
        let u = sample_mode(
            |r| eval_landau_radial(qn, ctx.w_m, r),
            ell,
            grid,
            Carrier::Paraxial,
        )?
        .normalized()?;

        let tu = apply_transverse_operator(&u, &TransverseOperatorParams::from_context(&ctx, ell))?;
        // Rayleigh quotient <u|T|u>
        let rayleigh = overlap(&u, &tu)?.re;
        let lambda = transverse_eigenvalue(qn, ctx.particle, ctx.b);
        println!(
            "n={n} ell={ell:>2}  raw norm={:.10}  <T>={rayleigh:.8e}  q*b={lambda:.4e}  {:?}",
            norm(&sample_mode(
                |r| eval_landau_radial(qn, ctx.w_m, r),
                ell,
                grid,
                Carrier::Paraxial
            )?),
            physicality_check(qn, ctx.particle)
        );
    }
    Ok(())
}
