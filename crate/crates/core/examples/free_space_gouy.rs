//! A free Gaussian beam (b = 0) diffracts; its on-axis phase follows
//! arctan(z/z_R), its width the Rayleigh law and its wavefront
//! R = z + z_R²/z.
//!
//! cargo run --release --example free_space_gouy

use landau_paraxial::gouy::extract_gouy_free;
use landau_paraxial::grid::{make_radial_grid, radial_phase_curvature, sample_mode};
use landau_paraxial::modes::{eval_free_lg, free_beam_geometry, Carrier, QuantumNumbers};
use landau_paraxial::propagator::{propagate, PropagationParams};

fn main() -> landau_paraxial::Result<()> {
    let (w0, k) = (20.0, 1.0);
    let qn = QuantumNumbers::new(0, 0);
    let z_r = 0.5 * k * w0 * w0;

    let grid = make_radial_grid(24.0 * w0, 4096)?;
    let u0 = sample_mode(
        |r| eval_free_lg(qn, w0, k, r, 0.0),
        0,
        grid,
        Carrier::Paraxial,
    )?
    .normalized()?;
    let record = propagate(&u0, &PropagationParams::free(k, 0, 2.0 * z_r, 4000, 1000))?;
    let fit = extract_gouy_free(&record, qn, w0, k)?;

    println!("z        zeta        arctan(z/zR)   <r^2>        w^2/2");
    for i in (0..record.len()).step_by(400) {
        let z = record.z[i];
        let w = free_beam_geometry(w0, k, z).w_z;
        println!(
            "{z:6.1}  {:.8}  {:.8}     {:.6}  {:.6}",
            fit.zeta[i],
            fit.zeta_analytic[i],
            record.r2_moment[i],
            0.5 * w * w
        );
    }
    println!("max |zeta - arctan| = {:.2e} rad", fit.max_abs_deviation);

    for (z, snap) in &record.snapshots[1..] {
        let fitted = radial_phase_curvature(snap, k)?;
        let analytic = free_beam_geometry(w0, k, *z).curvature;
        println!(
            "z = {z:5.1}: R fit = {:?}, analytic = {:?}",
            fitted.radius(),
            analytic.radius()
        );
    }
    Ok(())
}
