//! Gouy-phase extraction from propagation records.
//!
//! In a magnetic field ζ(z) is minus the unwrapped phase of ⟨u(0)|u(z)⟩,
//! which is the Gouy phase exactly for eigenmodes. A diffracting free beam is
//! not an eigenmode and its overlap phase follows arctan(z/2z_R), so the
//! free-space extraction reads the phase at the innermost node instead.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::fmt_sci;
use crate::modes::{gouy_law_free, gouy_law_magnetic, GouyLaw, QuantumNumbers};
use crate::propagator::PropagationRecord;

/// Overlap or axis modulus (relative to z = 0) below which extraction fails.
pub const MIN_MODULUS: f64 = 1e-6;
/// Minimum number of record samples for a fit.
pub const MIN_SAMPLES: usize = 10;

/// Removes 2π jumps so that successive differences lie in (−π, π].
///
/// Assumes the true phase changes by less than π between samples; a faster
/// phase aliases silently.
pub fn unwrap_phase(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut offset = 0.0;
    for (i, &x) in raw.iter().enumerate() {
        if i > 0 {
            let d = x - raw[i - 1];
            let jumps = ((d + PI) / TAU).floor();
            // keep d − 2π·jumps in [−π, π)
            offset -= TAU * jumps;
        }
        out.push(x + offset);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub rms: f64,
}

/// Least squares through the origin: slope = Σφz / Σz².
pub fn fit_linear(z: &[f64], phi: &[f64]) -> Result<LinearFit> {
    if z.len() != phi.len() {
        return Err(Error::Fit(format!(
            "{} abscissae but {} ordinates",
            z.len(),
            phi.len()
        )));
    }
    if z.len() < 2 {
        return Err(Error::Fit("need at least two samples".into()));
    }
    if z.iter().all(|&x| x == z[0]) {
        return Err(Error::Fit("degenerate abscissa: all z equal".into()));
    }
    let szz: f64 = z.iter().map(|x| x * x).sum();
    let szp: f64 = z.iter().zip(phi).map(|(x, p)| x * p).sum();
    let slope = szp / szz;
    let ss: f64 = z
        .iter()
        .zip(phi)
        .map(|(x, p)| (p - slope * x).powi(2))
        .sum();
    Ok(LinearFit {
        slope,
        rms: (ss / z.len() as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GouyModel {
    Linear,
    Arctan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GouyFit {
    pub z: Vec<f64>,
    pub zeta: Vec<f64>,
    pub zeta_analytic: Vec<f64>,
    pub model: GouyModel,
    /// Fitted dζ/dz (linear model only).
    pub fitted_slope: Option<f64>,
    /// RMS of ζ − model: the linear fit for the linear model, the analytic
    /// curve for the arctan model.
    pub rms_residual: f64,
    pub max_abs_deviation: f64,
    pub analytic_rate: f64,
    /// |slope − rate|/rate, or |slope − rate| when the rate is zero.
    pub rel_slope_error: Option<f64>,
}

impl GouyFit {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{}", crate::GENERATED_BY)?;
        writeln!(out, "z,zeta_num,zeta_analytic,residual")?;
        for i in 0..self.z.len() {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_sci(self.z[i]),
                fmt_sci(self.zeta[i]),
                fmt_sci(self.zeta_analytic[i]),
                fmt_sci(self.zeta[i] - self.zeta_analytic[i])
            )?;
        }
        let slope = self.fitted_slope.unwrap_or(f64::NAN);
        let rel = self.rel_slope_error.unwrap_or(self.max_abs_deviation);
        writeln!(
            out,
            "# slope={} analytic={} rel_err={} rms={}",
            fmt_sci(slope),
            fmt_sci(self.analytic_rate),
            fmt_sci(rel),
            fmt_sci(self.rms_residual)
        )?;
        Ok(())
    }
}

/// ζ(z) = −unwrap(arg s(z) − arg s(0)) for a complex series s.
fn zero_referenced_phase(
    record: &PropagationRecord,
    series: &[num_complex::Complex64],
) -> Result<Vec<f64>> {
    if record.len() < MIN_SAMPLES {
        return Err(Error::Fit(format!(
            "record has {} samples, need at least {MIN_SAMPLES}",
            record.len()
        )));
    }
    let reference = series[0].norm();
    for (z, s) in record.z.iter().zip(series) {
        let modulus = if reference > 0.0 {
            s.norm() / reference
        } else {
            0.0
        };
        if !(modulus >= MIN_MODULUS) {
            return Err(Error::Extraction { z: *z, modulus });
        }
    }
    let raw: Vec<f64> = series.iter().map(|s| s.arg()).collect();
    let unwrapped = unwrap_phase(&raw);
    Ok(unwrapped.iter().map(|p| -(p - unwrapped[0])).collect())
}

fn compare(
    record: &PropagationRecord,
    zeta: Vec<f64>,
    law: &GouyLaw,
    model: GouyModel,
) -> Result<GouyFit> {
    let analytic: Vec<f64> = record.z.iter().map(|&z| law.phase_at(z)).collect();
    let max_abs_deviation = zeta
        .iter()
        .zip(&analytic)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    let (fitted_slope, rms_residual, rel_slope_error) = match model {
        GouyModel::Linear => {
            let fit = fit_linear(&record.z, &zeta)?;
            let err = (fit.slope - law.rate).abs();
            let rel = if law.rate == 0.0 {
                err
            } else {
                err / law.rate.abs()
            };
            (Some(fit.slope), fit.rms, Some(rel))
        }
        GouyModel::Arctan => {
            let ss: f64 = zeta
                .iter()
                .zip(&analytic)
                .map(|(a, b)| (a - b).powi(2))
                .sum();
            (None, (ss / zeta.len() as f64).sqrt(), None)
        }
    };
    Ok(GouyFit {
        z: record.z.clone(),
        zeta,
        zeta_analytic: analytic,
        model,
        fitted_slope,
        rms_residual,
        max_abs_deviation,
        analytic_rate: law.rate,
        rel_slope_error,
    })
}

/// Linear Gouy fit of a magnetic-field record against q·b/(2k).
pub fn extract_gouy(record: &PropagationRecord, n: u32) -> Result<GouyFit> {
    let ctx = record.params.ctx.ok_or_else(|| {
        Error::Usage("linear Gouy extraction needs a magnetic-field record".into())
    })?;
    let qn = QuantumNumbers::new(n, record.params.ell);
    let law = gouy_law_magnetic(qn, &ctx);
    let zeta = zero_referenced_phase(record, &record.overlap)?;
    compare(record, zeta, &law, GouyModel::Linear)
}

/// Comparison of a free-space record with (2n+|ℓ|+1)·arctan(z/z_R).
pub fn extract_gouy_free(
    record: &PropagationRecord,
    qn: QuantumNumbers,
    w0: f64,
    k: f64,
) -> Result<GouyFit> {
    if record.params.ctx.is_some() {
        return Err(Error::Usage(
            "arctan Gouy extraction needs a free-space (b = 0) record".into(),
        ));
    }
    if qn.ell != record.params.ell {
        return Err(Error::Usage(format!(
            "quantum numbers have ell = {}, record has ell = {}",
            qn.ell, record.params.ell
        )));
    }
    let law = gouy_law_free(qn, w0, k);
    let zeta = zero_referenced_phase(record, &record.axis_value)?;
    compare(record, zeta, &law, GouyModel::Arctan)
}
