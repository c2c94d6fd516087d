//! Staggered radial grid, sampled complex fields and the discrete transverse
//! operator.
//!
//! Nodes sit at r_j = (j + 1/2)·h for j = 0..N−1, so the axis is never a
//! node. The radial Laplacian is discretized in flux form,
//!
//! (1/r)(r u′)′ ≈ [r_{j+½}(u_{j+1} − u_j) − r_{j−½}(u_j − u_{j−1})] / (r_j h²),
//!
//! with r_{½} = 0 closing the axis and u_N = 0 at the wall. The resulting
//! operator is self-adjoint in the weighted product Σ conj(a_j) b_j 2π r_j h.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gouy::unwrap_phase;
use crate::modes::{Carrier, Curvature};
use crate::units::{BeamContext, Spin};

/// Minimum number of radial nodes.
pub const MIN_POINTS: usize = 16;
/// Relative amplitude below which nodes are excluded from the curvature fit.
pub const CURVATURE_AMPLITUDE_CUTOFF: f64 = 1e-3;
/// Minimum number of usable nodes for the curvature fit.
pub const CURVATURE_MIN_NODES: usize = 8;
/// |1/R| below which the wavefront is reported flat.
pub const FLAT_INVERSE_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    n_points: usize,
    r_max: f64,
    h: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::Domain(format!("r_max must be > 0, got {r_max}")));
        }
        if n_points < MIN_POINTS {
            return Err(Error::Domain(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        Ok(Self {
            n_points,
            r_max,
            h: r_max / n_points as f64,
        })
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// r_j = (j + 1/2)·h, zero-based.
    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.h
    }

    /// Cell face r_{j+½} = (j + 1)·h between nodes j and j+1.
    #[inline]
    pub(crate) fn face(&self, j: usize) -> f64 {
        (j as f64 + 1.0) * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.node(j))
    }

    /// Quadrature weight 2π r_j h.
    #[inline]
    pub fn weight(&self, j: usize) -> f64 {
        2.0 * PI * self.node(j) * self.h
    }
}

pub fn make_radial_grid(r_max: f64, n_points: usize) -> Result<RadialGrid> {
    RadialGrid::new(r_max, n_points)
}

/// Complex samples u(r_j) of a field with fixed azimuthal index ℓ.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRadialField {
    grid: RadialGrid,
    ell: i32,
    pub values: Vec<Complex64>,
    pub carrier: Carrier,
}

impl ComplexRadialField {
    pub fn new(
        grid: RadialGrid,
        ell: i32,
        values: Vec<Complex64>,
        carrier: Carrier,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Usage(format!(
                "field has {} samples, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            ell,
            values,
            carrier,
        })
    }

    pub fn zeros(grid: RadialGrid, ell: i32, carrier: Carrier) -> Self {
        Self {
            grid,
            ell,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            carrier,
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn ell(&self) -> i32 {
        self.ell
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// The field rescaled to unit discrete norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = norm(self);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Numeric(format!(
                "cannot normalize a field of norm {n}"
            )));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Re-expresses the field in another carrier convention at position z.
    pub fn with_carrier(&self, target: Carrier, k: f64, z: f64) -> Self {
        let mut out = self.scaled(self.carrier.conversion_factor(target, k, z));
        out.carrier = target;
        out
    }

    pub fn max_amplitude(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// |u| at the outermost node relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.max_amplitude();
        if peak == 0.0 {
            return 0.0;
        }
        self.values[self.values.len() - 1].norm() / peak
    }

    /// Linear combination α·self + β·other on the same grid and ℓ.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        check_compatible(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Self {
            values,
            ..self.clone()
        })
    }
}

fn check_compatible(a: &ComplexRadialField, b: &ComplexRadialField) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::Usage("fields live on different grids".into()));
    }
    if a.carrier != b.carrier {
        return Err(Error::Usage(
            "fields use different carrier conventions".into(),
        ));
    }
    Ok(())
}

/// Samples a radial profile on the grid nodes.
pub fn sample_mode<F, T>(
    profile: F,
    ell: i32,
    grid: RadialGrid,
    carrier: Carrier,
) -> Result<ComplexRadialField>
where
    F: Fn(f64) -> T,
    T: Into<Complex64>,
{
    let mut values = Vec::with_capacity(grid.len());
    for (j, r) in grid.nodes().enumerate() {
        let v: Complex64 = profile(r).into();
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite sample at node {j} (r = {r})"
            )));
        }
        values.push(v);
    }
    ComplexRadialField::new(grid, ell, values, carrier)
}

/// Σ conj(a_j)·b_j·2π r_j h; exactly zero for different ℓ.
pub fn overlap(a: &ComplexRadialField, b: &ComplexRadialField) -> Result<Complex64> {
    check_compatible(a, b)?;
    if a.ell != b.ell {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let grid = a.grid;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, (x, y)) in a.values.iter().zip(&b.values).enumerate() {
        acc += x.conj() * y * grid.weight(j);
    }
    Ok(acc)
}

pub fn norm(field: &ComplexRadialField) -> f64 {
    let grid = field.grid;
    field
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v.norm_sqr() * grid.weight(j))
        .sum::<f64>()
        .sqrt()
}

/// ⟨r²⟩ = Σ |u_j|² r_j² 2π r_j h.
pub fn second_moment(field: &ComplexRadialField) -> f64 {
    let grid = field.grid;
    field
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let r = grid.node(j);
            v.norm_sqr() * r * r * grid.weight(j)
        })
        .sum()
}

/// Parameters of the transverse operator
/// T = −∇²_{r,ℓ} − s·b·ℓ + b²r²/4 − 2·s·s_z·b, where s is the charge sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseOperatorParams {
    pub ell: i32,
    pub b: f64,
    pub spin: Spin,
    pub charge_sign: i32,
}

impl TransverseOperatorParams {
    pub fn from_context(ctx: &BeamContext, ell: i32) -> Self {
        Self {
            ell,
            b: ctx.b,
            spin: ctx.particle.spin,
            charge_sign: ctx.particle.charge_sign(),
        }
    }

    /// Field-free operator (b = 0): the spin and orbital terms vanish.
    pub fn free(ell: i32) -> Self {
        Self {
            ell,
            b: 0.0,
            spin: Spin::DOWN,
            charge_sign: -1,
        }
    }

    /// Constant part −s·b·ℓ − 2·s·s_z·b.
    pub fn constant_shift(&self) -> f64 {
        let s = self.charge_sign as f64;
        -s * self.b * self.ell as f64 - s * self.spin.twice() as f64 * self.b
    }

    /// Diagonal potential at radius r, including the centrifugal ℓ²/r².
    pub fn potential(&self, r: f64) -> f64 {
        let l = self.ell as f64;
        l * l / (r * r) + 0.25 * self.b * self.b * r * r + self.constant_shift()
    }
}

/// T·u on the staggered grid.
pub fn apply_transverse_operator(
    field: &ComplexRadialField,
    params: &TransverseOperatorParams,
) -> Result<ComplexRadialField> {
    if field.ell != params.ell {
        return Err(Error::Usage(format!(
            "field has ell = {}, operator has ell = {}",
            field.ell, params.ell
        )));
    }
    let grid = field.grid;
    let n = grid.len();
    let h2 = grid.spacing() * grid.spacing();
    let u = &field.values;
    let zero = Complex64::new(0.0, 0.0);
    let values = (0..n)
        .map(|j| {
            let r = grid.node(j);
            let up = if j + 1 < n { u[j + 1] } else { zero };
            let outer = grid.face(j) * (up - u[j]);
            let inner = if j == 0 {
                zero
            } else {
                grid.face(j - 1) * (u[j] - u[j - 1])
            };
            -(outer - inner) / (r * h2) + u[j] * params.potential(r)
        })
        .collect();
    Ok(ComplexRadialField {
        values,
        ..field.clone()
    })
}

/// Estimates the wavefront radius from a least-squares fit of the unwrapped
/// radial phase to c₀ + k r²/(2R), weighted by |u|².
pub fn radial_phase_curvature(field: &ComplexRadialField, k: f64) -> Result<Curvature> {
    let peak = field.max_amplitude();
    let cutoff = CURVATURE_AMPLITUDE_CUTOFF * peak;
    let usable: Vec<usize> = (0..field.values.len())
        .filter(|&j| peak > 0.0 && field.values[j].norm() > cutoff)
        .collect();
    if usable.len() < CURVATURE_MIN_NODES {
        return Err(Error::Fit(format!(
            "only {} nodes above the amplitude cutoff, need {CURVATURE_MIN_NODES}",
            usable.len()
        )));
    }
    let raw: Vec<f64> = usable.iter().map(|&j| field.values[j].arg()).collect();
    let phase = unwrap_phase(&raw);

    // weighted normal equations for phase ≈ c0 + c1·x with x = r²
    let (mut sw, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&j, &y) in usable.iter().zip(&phase) {
        let r = field.grid.node(j);
        let x = r * r;
        let w = field.values[j].norm_sqr();
        sw += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * y;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    if !(det.abs() > 0.0) {
        return Err(Error::Fit("degenerate radial abscissa".into()));
    }
    let c1 = (sw * sxy - sx * sy) / det;
    let inverse_radius = 2.0 * c1 / k;
    if inverse_radius.abs() < FLAT_INVERSE_RADIUS {
        Ok(Curvature::Flat)
    } else {
        Ok(Curvature::Radius(1.0 / inverse_radius))
    }
}

pub(crate) fn fmt_sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the plain-text field dump. `z` is appended to the header for
/// propagation snapshots.
pub fn write_field_dump<W: Write>(
    field: &ComplexRadialField,
    z: Option<f64>,
    out: &mut W,
) -> Result<()> {
    writeln!(out, "{}", crate::GENERATED_BY)?;
    write!(
        out,
        "# radial-field ell={} carrier={} n={} rmax={}",
        field.ell,
        field.carrier.as_str(),
        field.grid.len(),
        fmt_sci(field.grid.r_max())
    )?;
    if let Some(z) = z {
        write!(out, " z={}", fmt_sci(z))?;
    }
    writeln!(out)?;
    for (j, v) in field.values.iter().enumerate() {
        writeln!(
            out,
            "{},{},{}",
            fmt_sci(field.grid.node(j)),
            fmt_sci(v.re),
            fmt_sci(v.im)
        )?;
    }
    Ok(())
}

/// Parses a field dump written by [`write_field_dump`].
pub fn read_field_dump<R: BufRead>(input: R) -> Result<(ComplexRadialField, Option<f64>)> {
    let mut header = None;
    let mut values = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# radial-field") {
            header = Some(parse_dump_header(rest)?);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(Error::Parse(format!(
                "line {}: expected r,re,im",
                lineno + 1
            )));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        values.push(Complex64::new(num(cols[1])?, num(cols[2])?));
    }
    let (ell, carrier, n, r_max, z) =
        header.ok_or_else(|| Error::Parse("missing `# radial-field` header".into()))?;
    if values.len() != n {
        return Err(Error::Parse(format!(
            "header declares {n} nodes, found {}",
            values.len()
        )));
    }
    let grid = RadialGrid::new(r_max, n)?;
    Ok((ComplexRadialField::new(grid, ell, values, carrier)?, z))
}

type DumpHeader = (i32, Carrier, usize, f64, Option<f64>);

fn parse_dump_header(rest: &str) -> Result<DumpHeader> {
    let (mut ell, mut carrier, mut n, mut r_max, mut z) = (None, None, None, None, None);
    for token in rest.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("malformed header token `{token}`")))?;
        let bad = |e: &dyn std::fmt::Display| Error::Parse(format!("header `{key}`: {e}"));
        match key {
            "ell" => ell = Some(value.parse::<i32>().map_err(|e| bad(&e))?),
            "carrier" => carrier = Some(value.parse::<Carrier>()?),
            "n" => n = Some(value.parse::<usize>().map_err(|e| bad(&e))?),
            "rmax" => r_max = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
            "z" => z = Some(value.parse::<f64>().map_err(|e| bad(&e))?),
            other => return Err(Error::Parse(format!("unknown header key `{other}`"))),
        }
    }
    let missing = |k: &str| Error::Parse(format!("header missing `{k}`"));
    Ok((
        ell.ok_or_else(|| missing("ell"))?,
        carrier.ok_or_else(|| missing("carrier"))?,
        n.ok_or_else(|| missing("n"))?,
        r_max.ok_or_else(|| missing("rmax"))?,
        z,
    ))
}
