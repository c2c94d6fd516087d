//! How good is p_z ≈ k − λ/(2k)? Sweeps λ/k², then converts laboratory
//! fields to the dimensionless b and reports w_m and the Gouy rate.
//!
//! cargo run --release --example paraxiality

use landau_paraxial::modes::{gouy_law_magnetic, paraxial_pz, QuantumNumbers};
use landau_paraxial::units::{make_context, SiConversion, Species};

fn main() -> landau_paraxial::Result<()> {
    println!("lambda/k^2   exact p_z      approx p_z     rel_gap     (x^2/8)");
    for x in [1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.5] {
        let c = paraxial_pz(1.0, x)?;
        println!(
            "{x:<10}   {:.12}  {:.12}  {:.3e}   {:.3e}",
            c.exact,
            c.approx,
            c.rel_gap,
            x * x / 8.0
        );
    }
    match paraxial_pz(1.0, 1.5) {
        Err(e) => println!("lambda > k^2: {e}"),
        Ok(c) => println!("unexpected: {c:?}"),
    }

    let si = SiConversion::CODATA_2018;
    println!(
        "\ncritical field {:.6e} T, electron mass {:.6e} eV",
        si.critical_field_tesla(),
        si.electron_mass_ev()
    );
    // a 300 keV electron: k = p/(mc)
    let gamma = 1.0 + 300e3 / si.electron_mass_ev();
    let k = (gamma * gamma - 1.0).sqrt();
    for tesla in [1.0, 10.0, 1e3] {
        let b = si.to_natural(tesla)?;
        let ctx = make_context(Species::Electron, -0.5, b, k)?;
        let law = gouy_law_magnetic(QuantumNumbers::new(0, 1), &ctx);
        println!(
            "B = {tesla:>6} T: b = {b:.4e}, w_m = {:.4e} (reduced Compton wavelengths), lambda/k^2 = {:.3e}, gouy rate = {:.4e}",
            ctx.w_m,
            ctx.paraxiality(2.0 * b),
            law.rate
        );
    }
    Ok(())
}
