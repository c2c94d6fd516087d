//! Symmetric tridiagonal form of the transverse operator and its low-lying
//! spectrum by Sturm-sequence bisection.

use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::{fmt_sci, RadialGrid, TransverseOperatorParams};
use crate::modes::{landau_energy, transverse_eigenvalue, QuantumNumbers};
use crate::units::BeamContext;

/// Largest number of levels a report covers.
pub const MAX_REPORT_LEVELS: usize = 12;

/// Report CSV header.
pub const SPECTRUM_CSV_HEADER: &str = "n,numeric_lambda,analytic_lambda,rel_err,E_rel,spacing";

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSym {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalSym {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::Usage(format!(
                "tridiagonal needs N diagonal and N-1 off-diagonal entries, got {} and {}",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (negative LDLᵀ pivots).
    pub fn count_below(&self, x: f64) -> usize {
        let max_e2 = self.offdiag.iter().fold(0.0_f64, |m, e| m.max(e * e));
        let pivmin = f64::MIN_POSITIVE * max_e2.max(1.0);
        let mut count = 0;
        let mut pivot = 0.0;
        for i in 0..self.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                let e = self.offdiag[i - 1];
                e * e / pivot
            };
            pivot = self.diag[i] - x - coupling;
            if pivot.abs() <= pivmin {
                pivot = -pivmin;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// Matrix of T acting on v = √r·u.
///
/// diagonal 2/h² + ℓ²/r_j² + b²r_j²/4 − s·b·ℓ − 2·s·s_z·b,
/// off-diagonal −r_{j+½}/(h²·√(r_j r_{j+1})); the outer wall is Dirichlet and
/// the axis face carries zero flux.
pub fn build_transverse_matrix(
    grid: &RadialGrid,
    params: &TransverseOperatorParams,
) -> TridiagonalSym {
    let n = grid.len();
    let h2 = grid.spacing() * grid.spacing();
    let diag = (0..n)
        .map(|j| 2.0 / h2 + params.potential(grid.node(j)))
        .collect();
    let offdiag = (0..n - 1)
        .map(|j| -grid.face(j) / (h2 * (grid.node(j) * grid.node(j + 1)).sqrt()))
        .collect();
    TridiagonalSym { diag, offdiag }
}

/// The `count` smallest eigenvalues in ascending order.
pub fn lowest_eigenvalues(matrix: &TridiagonalSym, count: usize) -> Result<Vec<f64>> {
    if count == 0 || count > matrix.len() {
        return Err(Error::Domain(format!(
            "eigenvalue count must be in 1..={}, got {count}",
            matrix.len()
        )));
    }
    if matrix
        .diag
        .iter()
        .chain(&matrix.offdiag)
        .any(|x| !x.is_finite())
    {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    let (lo, hi) = matrix.gershgorin_bounds();
    Ok((0..count)
        .map(|index| bisect(matrix, index, lo, hi))
        .collect())
}

/// Eigenvalue with zero-based `index` by bisection on the Sturm count.
fn bisect(matrix: &TridiagonalSym, index: usize, mut lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        let tol = 1e-12 * mid.abs().max(1.0);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return mid;
        }
        if matrix.count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub n: u32,
    pub numeric_lambda: f64,
    pub analytic_lambda: f64,
    /// |numeric − analytic|/analytic, or |numeric − analytic|/b when the
    /// analytic value is zero.
    pub rel_err: f64,
    pub energy: f64,
    /// E_{n+1} − E_n.
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub rows: Vec<SpectrumRow>,
    pub grid: RadialGrid,
    pub ell: i32,
    pub b: f64,
    pub p_z: f64,
    pub spacings_strictly_decreasing: bool,
}

impl SpectrumReport {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.rel_err))
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{}", crate::GENERATED_BY)?;
        writeln!(out, "{SPECTRUM_CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                row.n,
                fmt_sci(row.numeric_lambda),
                fmt_sci(row.analytic_lambda),
                fmt_sci(row.rel_err),
                fmt_sci(row.energy),
                fmt_sci(row.spacing)
            )?;
        }
        writeln!(
            out,
            "# spacing_strictly_decreasing={}",
            self.spacings_strictly_decreasing
        )?;
        Ok(())
    }
}

/// Numeric vs analytic transverse eigenvalues for n = 0..n_levels−1 at fixed
/// ℓ, with the relativistic energies and their spacings.
pub fn spectrum_report(
    ctx: &BeamContext,
    ell: i32,
    n_levels: usize,
    grid: &RadialGrid,
    p_z: f64,
) -> Result<SpectrumReport> {
    if n_levels == 0 || n_levels > MAX_REPORT_LEVELS {
        return Err(Error::Domain(format!(
            "n_levels must be in 1..={MAX_REPORT_LEVELS}, got {n_levels}"
        )));
    }
    let params = TransverseOperatorParams::from_context(ctx, ell);
    let matrix = build_transverse_matrix(grid, &params);
    let mut numeric = lowest_eigenvalues(&matrix, n_levels)?;
    numeric.sort_by(f64::total_cmp);

    let energy = |n: u32| landau_energy(QuantumNumbers::new(n, ell), ctx.particle, p_z, ctx.b);
    let energies = (0..=n_levels as u32)
        .map(energy)
        .collect::<Result<Vec<_>>>()?;

    let rows: Vec<SpectrumRow> = numeric
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let n = i as u32;
            let analytic = transverse_eigenvalue(QuantumNumbers::new(n, ell), ctx.particle, ctx.b);
            let denom = if analytic == 0.0 {
                ctx.b
            } else {
                analytic.abs()
            };
            SpectrumRow {
                n,
                numeric_lambda: lambda,
                analytic_lambda: analytic,
                rel_err: (lambda - analytic).abs() / denom,
                energy: energies[i],
                spacing: energies[i + 1] - energies[i],
            }
        })
        .collect();
    let spacings_strictly_decreasing = rows.windows(2).all(|w| w[1].spacing < w[0].spacing);
    Ok(SpectrumReport {
        rows,
        grid: *grid,
        ell,
        b: ctx.b,
        p_z,
        spacings_strictly_decreasing,
    })
}
