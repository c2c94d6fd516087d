//! Crank–Nicolson integration of the paraxial equation i ∂_z Ψ = T Ψ/(2k)
//! at fixed azimuthal index.
//!
//! The step works on v = √r·u, where T is the symmetric tridiagonal matrix
//! from [`build_transverse_matrix`]; the Cayley form
//! (I + i·dz·T/(4k)) v' = (I − i·dz·T/(4k)) v is unitary for real symmetric T.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{fmt_sci, ComplexRadialField, TransverseOperatorParams};
use crate::modes::Carrier;
use crate::spectrum::{build_transverse_matrix, TridiagonalSym};
use crate::units::BeamContext;

/// Boundary-to-peak amplitude ratio that triggers a warning.
pub const WALL_WARN_RATIO: f64 = 1e-8;
/// Boundary-to-peak amplitude ratio that aborts a run.
pub const WALL_ERROR_RATIO: f64 = 1e-4;
/// Allowed deviation of the initial norm from 1.
pub const INITIAL_NORM_TOLERANCE: f64 = 1e-8;

/// Record CSV header.
pub const RECORD_CSV_HEADER: &str = "z,norm,re_overlap,im_overlap,r2_moment";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationParams {
    /// Field and particle. `None` propagates in free space (b = 0).
    pub ctx: Option<BeamContext>,
    pub k: f64,
    pub ell: i32,
    pub z_max: f64,
    pub n_steps: usize,
    pub snapshot_stride: usize,
}

impl PropagationParams {
    pub fn magnetic(
        ctx: BeamContext,
        ell: i32,
        z_max: f64,
        n_steps: usize,
        snapshot_stride: usize,
    ) -> Self {
        Self {
            ctx: Some(ctx),
            k: ctx.k,
            ell,
            z_max,
            n_steps,
            snapshot_stride,
        }
    }

    pub fn free(k: f64, ell: i32, z_max: f64, n_steps: usize, snapshot_stride: usize) -> Self {
        Self {
            ctx: None,
            k,
            ell,
            z_max,
            n_steps,
            snapshot_stride,
        }
    }

    pub fn operator(&self) -> TransverseOperatorParams {
        match &self.ctx {
            Some(ctx) => TransverseOperatorParams::from_context(ctx, self.ell),
            None => TransverseOperatorParams::free(self.ell),
        }
    }

    pub fn dz(&self) -> f64 {
        self.z_max / self.n_steps as f64
    }

    fn validate(&self) -> Result<()> {
        if !(self.z_max.is_finite() && self.z_max > 0.0) {
            return Err(Error::Domain(format!(
                "z_max must be > 0, got {}",
                self.z_max
            )));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::Domain(format!("k must be > 0, got {}", self.k)));
        }
        if self.n_steps == 0 {
            return Err(Error::Domain("n_steps must be >= 1".into()));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Domain("snapshot_stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// Pre-factored Crank–Nicolson stepper for one grid, operator and dz.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    matrix: TridiagonalSym,
    /// dz/(4k)
    alpha: f64,
    /// Thomas-algorithm forward-sweep multipliers of (I + iαT).
    c_prime: Vec<Complex64>,
    denom: Vec<Complex64>,
}

impl CrankNicolson {
    pub fn new(
        field: &ComplexRadialField,
        op: &TransverseOperatorParams,
        k: f64,
        dz: f64,
    ) -> Result<Self> {
        if !(dz.is_finite() && dz > 0.0) {
            return Err(Error::Domain(format!("dz must be > 0, got {dz}")));
        }
        if field.ell() != op.ell {
            return Err(Error::Usage(format!(
                "field has ell = {}, operator has ell = {}",
                field.ell(),
                op.ell
            )));
        }
        let matrix = build_transverse_matrix(field.grid(), op);
        let alpha = dz / (4.0 * k);
        let n = matrix.len();
        let i_alpha = Complex64::new(0.0, alpha);
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut denom = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let diag = Complex64::new(1.0, 0.0) + i_alpha * matrix.diag[j];
            let lower = if j > 0 {
                i_alpha * matrix.offdiag[j - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let d = if j > 0 {
                diag - lower * c_prime[j - 1]
            } else {
                diag
            };
            if d.norm() == 0.0 || !d.re.is_finite() || !d.im.is_finite() {
                return Err(Error::Numeric(format!(
                    "singular Crank-Nicolson pivot at node {j}"
                )));
            }
            denom[j] = d;
            if j + 1 < n {
                c_prime[j] = i_alpha * matrix.offdiag[j] / d;
            }
        }
        Ok(Self {
            matrix,
            alpha,
            c_prime,
            denom,
        })
    }

    /// Advances v = √r·u in place by one step.
    pub fn step_scaled(&self, v: &mut [Complex64]) {
        let n = v.len();
        let i_alpha = Complex64::new(0.0, self.alpha);
        let m = &self.matrix;
        // rhs = (I − iαT) v, reusing a single buffer
        let mut rhs = Vec::with_capacity(n);
        for j in 0..n {
            let mut tv = m.diag[j] * v[j];
            if j > 0 {
                tv += m.offdiag[j - 1] * v[j - 1];
            }
            if j + 1 < n {
                tv += m.offdiag[j] * v[j + 1];
            }
            rhs.push(v[j] - i_alpha * tv);
        }
        // forward sweep
        for j in 0..n {
            let lower = if j > 0 {
                i_alpha * m.offdiag[j - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let prev = if j > 0 {
                rhs[j - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            rhs[j] = (rhs[j] - lower * prev) / self.denom[j];
        }
        // back substitution
        v[n - 1] = rhs[n - 1];
        for j in (0..n - 1).rev() {
            v[j] = rhs[j] - self.c_prime[j] * v[j + 1];
        }
    }

    pub fn step(&self, field: &ComplexRadialField) -> ComplexRadialField {
        let grid = *field.grid();
        let mut v: Vec<Complex64> = field
            .values
            .iter()
            .enumerate()
            .map(|(j, u)| u * grid.node(j).sqrt())
            .collect();
        self.step_scaled(&mut v);
        let mut out = field.clone();
        for (j, (dst, src)) in out.values.iter_mut().zip(v).enumerate() {
            *dst = src / grid.node(j).sqrt();
        }
        out
    }
}

/// One Crank–Nicolson step of length dz.
pub fn cn_step(
    field: &ComplexRadialField,
    params: &PropagationParams,
    dz: f64,
) -> Result<ComplexRadialField> {
    if field.carrier != Carrier::Paraxial {
        return Err(Error::Usage(
            "propagation requires the paraxial carrier".into(),
        ));
    }
    let stepper = CrankNicolson::new(field, &params.operator(), params.k, dz)?;
    Ok(stepper.step(field))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationRecord {
    pub z: Vec<f64>,
    pub norm: Vec<f64>,
    /// ⟨u(0)|u(z)⟩.
    pub overlap: Vec<Complex64>,
    pub r2_moment: Vec<f64>,
    /// u at the innermost node, the near-axis phase reference.
    pub axis_value: Vec<Complex64>,
    pub snapshots: Vec<(f64, ComplexRadialField)>,
    pub params: PropagationParams,
    pub warnings: Vec<String>,
}

impl PropagationRecord {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn max_norm_drift(&self) -> f64 {
        let n0 = self.norm[0];
        self.norm.iter().fold(0.0, |m, n| m.max((n - n0).abs()))
    }

    /// Smallest |⟨u(0)|u(z)⟩| / ⟨u(0)|u(0)⟩.
    pub fn min_normalized_overlap(&self) -> f64 {
        let n0 = self.overlap[0].re;
        self.overlap
            .iter()
            .fold(f64::INFINITY, |m, o| m.min(o.norm() / n0))
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{}", crate::GENERATED_BY)?;
        writeln!(out, "{RECORD_CSV_HEADER}")?;
        for i in 0..self.z.len() {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_sci(self.z[i]),
                fmt_sci(self.norm[i]),
                fmt_sci(self.overlap[i].re),
                fmt_sci(self.overlap[i].im),
                fmt_sci(self.r2_moment[i])
            )?;
        }
        Ok(())
    }
}

struct Diagnostics {
    norm: f64,
    overlap: Complex64,
    r2: f64,
    boundary_ratio: f64,
}

/// Diagnostics from the scaled vector v = √r·u, where |u|² 2π r h = 2π h |v|².
fn diagnose(v: &[Complex64], v0: &[Complex64], h: f64) -> Diagnostics {
    let mut norm2 = 0.0;
    let mut overlap = Complex64::new(0.0, 0.0);
    let mut r2 = 0.0;
    let mut peak = 0.0_f64;
    for (j, (x, x0)) in v.iter().zip(v0).enumerate() {
        let r = (j as f64 + 0.5) * h;
        let w = x.norm_sqr();
        norm2 += w;
        overlap += x0.conj() * x;
        r2 += w * r * r;
        peak = peak.max(x.norm() / r.sqrt());
    }
    let n = v.len();
    let edge = v[n - 1].norm() / ((n as f64 - 0.5) * h).sqrt();
    let scale = 2.0 * PI * h;
    Diagnostics {
        norm: (scale * norm2).sqrt(),
        overlap: overlap * scale,
        r2: scale * r2,
        boundary_ratio: if peak > 0.0 { edge / peak } else { 0.0 },
    }
}

/// Runs `n_steps` Crank–Nicolson steps from a unit-norm paraxial field.
pub fn propagate(
    initial: &ComplexRadialField,
    params: &PropagationParams,
) -> Result<PropagationRecord> {
    params.validate()?;
    if initial.carrier != Carrier::Paraxial {
        return Err(Error::Usage(
            "propagation requires the paraxial carrier".into(),
        ));
    }
    if initial.ell() != params.ell {
        return Err(Error::Usage(format!(
            "field has ell = {}, parameters have ell = {}",
            initial.ell(),
            params.ell
        )));
    }
    let n0 = crate::grid::norm(initial);
    if !((n0 - 1.0).abs() <= INITIAL_NORM_TOLERANCE) {
        return Err(Error::Domain(format!(
            "initial field must have unit norm, got {n0:.3e}"
        )));
    }
    let grid = *initial.grid();
    let h = grid.spacing();
    let dz = params.dz();
    let stepper = CrankNicolson::new(initial, &params.operator(), params.k, dz)?;
    let sqrt_r: Vec<f64> = grid.nodes().map(f64::sqrt).collect();
    let v0: Vec<Complex64> = initial
        .values
        .iter()
        .zip(&sqrt_r)
        .map(|(u, s)| u * s)
        .collect();
    let mut v = v0.clone();

    let capacity = params.n_steps + 1;
    let mut record = PropagationRecord {
        z: Vec::with_capacity(capacity),
        norm: Vec::with_capacity(capacity),
        overlap: Vec::with_capacity(capacity),
        r2_moment: Vec::with_capacity(capacity),
        axis_value: Vec::with_capacity(capacity),
        snapshots: Vec::new(),
        params: *params,
        warnings: Vec::new(),
    };
    let mut warned = false;
    let unscale = |v: &[Complex64]| -> ComplexRadialField {
        let values = v.iter().zip(&sqrt_r).map(|(x, s)| x / s).collect();
        ComplexRadialField::new(grid, params.ell, values, Carrier::Paraxial)
            .expect("grid-sized buffer")
    };

    for step in 0..=params.n_steps {
        if step > 0 {
            stepper.step_scaled(&mut v);
        }
        let z = step as f64 * dz;
        let d = diagnose(&v, &v0, h);
        if d.boundary_ratio > WALL_ERROR_RATIO {
            return Err(Error::WallContact {
                z,
                ratio: d.boundary_ratio,
                limit: WALL_ERROR_RATIO,
            });
        }
        if !warned && d.boundary_ratio > WALL_WARN_RATIO {
            warned = true;
            record.warnings.push(format!(
                "boundary amplitude {:.3e} of peak at z = {z} exceeds {WALL_WARN_RATIO:.0e}; enlarge r_max",
                d.boundary_ratio
            ));
        }
        record.z.push(z);
        record.norm.push(d.norm);
        record.overlap.push(d.overlap);
        record.r2_moment.push(d.r2);
        record.axis_value.push(v[0] / sqrt_r[0]);
        if step % params.snapshot_stride == 0 || step == params.n_steps {
            record.snapshots.push((z, unscale(&v)));
        }
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_radial_grid, norm, overlap, sample_mode};
    use crate::modes::{eval_free_lg, eval_landau_radial, QuantumNumbers};
    use crate::units::{make_context, Species};

    fn landau(ctx: &BeamContext, qn: QuantumNumbers, n_points: usize) -> ComplexRadialField {
        let g = make_radial_grid(8.0 * ctx.w_m, n_points).unwrap();
        sample_mode(
            |r| eval_landau_radial(qn, ctx.w_m, r),
            qn.ell,
            g,
            Carrier::Paraxial,
        )
        .unwrap()
    }

    #[test]
    fn free_step_preserves_norm() {
        let g = make_radial_grid(160.0, 1024).unwrap();
        let f = sample_mode(
            |r| 3.0 * (-(r / 20.0).powi(2)).exp(),
            0,
            g,
            Carrier::Paraxial,
        )
        .unwrap();
        let params = PropagationParams::free(1.0, 0, 1.0, 1, 1);
        let before = norm(&f);
        let after = norm(&cn_step(&f, &params, 0.5).unwrap());
        assert!(((after - before) / before).abs() < 1e-13);
    }

    #[test]
    fn eigenmode_step_is_pure_phase() {
        let ctx = make_context(Species::Electron, -0.5, 0.01, 1.0).unwrap();
        let f = landau(&ctx, QuantumNumbers::new(0, 1), 2048);
        let params = PropagationParams::magnetic(ctx, 1, 1.0, 1, 1);
        let g = cn_step(&f, &params, 0.05).unwrap();
        let o = overlap(&f, &g).unwrap() / overlap(&f, &f).unwrap();
        assert!((o.arg() + 0.02 * 0.05 / 2.0).abs() < 1e-8, "{}", o.arg());
        assert!((o.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn step_doubling_is_third_order_locally() {
        let g = make_radial_grid(160.0, 512).unwrap();
        let f = sample_mode(
            |r| eval_free_lg(QuantumNumbers::new(0, 0), 10.0, 1.0, r, 0.0),
            0,
            g,
            Carrier::Paraxial,
        )
        .unwrap();
        let params = PropagationParams::free(1.0, 0, 1.0, 1, 1);
        let gap = |dz: f64| {
            let full = cn_step(&f, &params, dz).unwrap();
            let half =
                cn_step(&cn_step(&f, &params, dz / 2.0).unwrap(), &params, dz / 2.0).unwrap();
            let d = full
                .combine(Complex64::new(1.0, 0.0), &half, Complex64::new(-1.0, 0.0))
                .unwrap();
            norm(&d)
        };
        let ratio = gap(2.0) / gap(1.0);
        assert!((7.0..9.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn rejects_fw_carrier_and_bad_input() {
        let ctx = make_context(Species::Electron, -0.5, 0.01, 1.0).unwrap();
        let f = landau(&ctx, QuantumNumbers::new(0, 0), 256);
        let params = PropagationParams::magnetic(ctx, 0, 10.0, 10, 5);
        let fw = f.with_carrier(Carrier::Fw, 1.0, 0.0);
        assert!(matches!(cn_step(&fw, &params, 0.1), Err(Error::Usage(_))));
        assert!(matches!(propagate(&fw, &params), Err(Error::Usage(_))));
        let zero = ComplexRadialField::zeros(*f.grid(), 0, Carrier::Paraxial);
        assert!(matches!(propagate(&zero, &params), Err(Error::Domain(_))));
        let bad = PropagationParams {
            n_steps: 0,
            ..params
        };
        assert!(propagate(&f, &bad).is_err());
    }

    #[test]
    fn landau_mode_is_stationary() {
        let ctx = make_context(Species::Electron, -0.5, 0.01, 1.0).unwrap();
        let f = landau(&ctx, QuantumNumbers::new(0, 1), 2048);
        let f = f.scaled(Complex64::new(1.0 / norm(&f), 0.0));
        let params = PropagationParams::magnetic(ctx, 1, 100.0, 2000, 500);
        let rec = propagate(&f, &params).unwrap();
        assert_eq!(rec.len(), 2001);
        assert!((rec.overlap[0].re - rec.norm[0].powi(2)).abs() < 1e-15);
        assert!(rec.min_normalized_overlap() >= 1.0 - 1e-6);
        assert!(rec.max_norm_drift() < 1e-10);
        let phase = rec.overlap[2000].arg();
        assert!((phase + 1.0).abs() < 1e-4, "{phase}");
        assert_eq!(rec.snapshots.len(), 5);
        assert!(rec.warnings.is_empty());
    }

    #[test]
    fn free_gaussian_spreads_per_rayleigh_law() {
        let (w0, k) = (20.0, 1.0);
        let g = make_radial_grid(24.0 * w0, 4096).unwrap();
        let f = sample_mode(
            |r| eval_free_lg(QuantumNumbers::new(0, 0), w0, k, r, 0.0),
            0,
            g,
            Carrier::Paraxial,
        )
        .unwrap();
        let f = f.scaled(Complex64::new(1.0 / norm(&f), 0.0));
        let rec = propagate(&f, &PropagationParams::free(k, 0, 400.0, 2000, 1000)).unwrap();
        let z_r = 200.0;
        for (z, m) in rec.z.iter().zip(&rec.r2_moment) {
            let want = 0.5 * w0 * w0 * (1.0 + (z / z_r).powi(2));
            assert!(((m - want) / want).abs() < 1e-4, "z={z}: {m} vs {want}");
        }
    }

    #[test]
    fn wall_contact_aborts() {
        let (w0, k) = (20.0, 1.0);
        let g = make_radial_grid(3.2 * w0, 512).unwrap();
        let f = sample_mode(
            |r| eval_free_lg(QuantumNumbers::new(0, 0), w0, k, r, 0.0),
            0,
            g,
            Carrier::Paraxial,
        )
        .unwrap();
        let f = f.scaled(Complex64::new(1.0 / norm(&f), 0.0));
        match propagate(&f, &PropagationParams::free(k, 0, 400.0, 400, 400)) {
            Err(Error::WallContact { z, .. }) => assert!(z > 0.0 && z < 400.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn record_csv_layout() {
        let ctx = make_context(Species::Electron, -0.5, 0.01, 1.0).unwrap();
        let f = landau(&ctx, QuantumNumbers::new(0, 0), 128);
        let f = f.scaled(Complex64::new(1.0 / norm(&f), 0.0));
        let rec = propagate(&f, &PropagationParams::magnetic(ctx, 0, 1.0, 4, 2)).unwrap();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], RECORD_CSV_HEADER);
        assert_eq!(lines.len(), 2 + 5);
        assert!(lines[2].starts_with("0.0000000000000000e0,"));
    }
}
