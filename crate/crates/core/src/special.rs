//! Generalized Laguerre polynomials and the Laguerre–Gauss normalization.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// L_n^α(x) by the three-term upward recurrence.
///
/// L_k = ((2k − 1 + α − x)·L_{k−1} − (k − 1 + α)·L_{k−2}) / k
pub fn laguerre(n: i64, alpha: i64, x: f64) -> Result<f64> {
    if n < 0 || alpha < 0 {
        return Err(Error::Domain(format!(
            "laguerre requires n >= 0 and alpha >= 0, got n = {n}, alpha = {alpha}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "laguerre argument must be finite, got {x}"
        )));
    }
    Ok(laguerre_unchecked(n as u32, alpha as u32, x))
}

/// Double-double value hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd(s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        let lo = s.1 + self.1 + o.1;
        two_sum(s.0, lo)
    }

    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        two_sum(p, e + self.0 * o.1 + self.1 * o.0)
    }

    #[inline]
    fn scale(self, c: f64) -> Dd {
        self.mul(Dd(c, 0.0))
    }

    #[inline]
    fn div(self, c: f64) -> Dd {
        let q = self.0 / c;
        let r = self.add(Dd(q, 0.0).scale(-c));
        two_sum(q, r.0 / c)
    }
}

/// Runs the recurrence in double-double arithmetic so that the cancellation
/// near the roots does not eat the significant digits.
pub(crate) fn laguerre_unchecked(n: u32, alpha: u32, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = Dd(1.0, 0.0);
    if n == 0 {
        return 1.0;
    }
    let mut cur = two_sum(1.0 + a, -x);
    for k in 2..=n {
        let kf = k as f64;
        let coef = two_sum(2.0 * kf - 1.0 + a, -x);
        let next = coef.mul(cur).add(prev.scale(-(kf - 1.0 + a))).div(kf);
        prev = cur;
        cur = next;
    }
    cur.0 + cur.1
}

/// C_{nℓ} = √(2·n!/(π·(n+|ℓ|)!)).
///
/// (n+|ℓ|)!/n! is formed as a running product; once that product nears the
/// f64 range the ratio is taken from summed logarithms instead.
pub fn mode_norm_constant(n: u32, ell: i32) -> f64 {
    let m = ell.unsigned_abs();
    let mut prod = 1.0_f64;
    for j in (n + 1)..=(n + m) {
        prod *= j as f64;
        if prod > 1e280 {
            let ln_prod: f64 = ((n + 1)..=(n + m)).map(|j| (j as f64).ln()).sum();
            return (0.5 * ((2.0 / PI).ln() - ln_prod)).exp();
        }
    }
    (2.0 / (PI * prod)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit finite sum Σ_k (−1)^k C(n+α, n−k) x^k / k! at x = num/2,
    /// evaluated exactly as the integer 2ⁿ·n!·L and rounded once.
    fn laguerre_sum_half_integer(n: u32, alpha: u32, num: i128) -> f64 {
        fn binom(n: u32, k: u32) -> i128 {
            let mut r: i128 = 1;
            for i in 0..k {
                r = r * (n - i) as i128 / (i + 1) as i128;
            }
            r
        }
        let fact = |m: u32| (1..=m as i128).product::<i128>();
        let mut total: i128 = 0;
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            // x^k/k! · 2ⁿ·n! = num^k · 2^(n−k) · n!/k!
            let term =
                binom(n + alpha, n - k) * num.pow(k) * (1i128 << (n - k)) * (fact(n) / fact(k));
            total += sign * term;
        }
        total as f64 / ((1i128 << n) * fact(n)) as f64
    }

    #[test]
    fn low_order_values() {
        for &a in &[0, 1, 5] {
            assert_eq!(laguerre(0, a, 3.7).unwrap(), 1.0);
        }
        assert_eq!(laguerre(1, 2, 1.0).unwrap(), 2.0);
        assert!((laguerre(2, 0, 2.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn negative_indices_rejected() {
        assert!(laguerre(-1, 0, 1.0).is_err());
        assert!(laguerre(2, -3, 1.0).is_err());
        assert!(laguerre(2, 0, f64::INFINITY).is_err());
    }

    #[test]
    fn recurrence_matches_finite_sum() {
        for n in 0..=10u32 {
            for alpha in 0..=5u32 {
                for num in 0..=100i128 {
                    let x = num as f64 / 2.0;
                    let got = laguerre(n as i64, alpha as i64, x).unwrap();
                    let want = laguerre_sum_half_integer(n, alpha, num);
                    assert!(
                        (got - want).abs() <= 1e-12 * want.abs(),
                        "n={n} a={alpha} x={x}: {got} vs {want}"
                    );
                }
            }
        }
    }

    /// Gauss–Laguerre-free check: composite Simpson on [0, 120].
    fn orthogonality_integral(n: u32, m: u32, alpha: u32) -> f64 {
        let steps = 120_000;
        let upper = 120.0;
        let h = upper / steps as f64;
        let f = |x: f64| {
            x.powi(alpha as i32)
                * (-x).exp()
                * laguerre_unchecked(n, alpha, x)
                * laguerre_unchecked(m, alpha, x)
        };
        let mut s = f(0.0) + f(upper);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn orthogonality_by_quadrature() {
        for alpha in 0..=4 {
            for n in 0..=6 {
                for m in 0..n {
                    let v = orthogonality_integral(n, m, alpha);
                    let scale = (orthogonality_integral(n, n, alpha)
                        * orthogonality_integral(m, m, alpha))
                    .sqrt();
                    assert!(
                        v.abs() < 1e-10 * scale,
                        "n={n} m={m} a={alpha}: {v} / {scale}"
                    );
                }
            }
        }
    }

    #[test]
    fn norm_constant_examples() {
        assert!((mode_norm_constant(0, 0) - (2.0 / PI).sqrt()).abs() < 1e-16);
        assert!((mode_norm_constant(1, 2) - 0.325_735_007_935_279_95).abs() < 1e-15);
        for ell in 0..30 {
            assert_eq!(mode_norm_constant(3, ell), mode_norm_constant(3, -ell));
        }
    }

    #[test]
    fn norm_constant_matches_rational_oracle() {
        // n!/(n+|ℓ|)! with exact u128 factorials
        fn fact(n: u32) -> u128 {
            (1..=n as u128).product()
        }
        for n in 0..=20u32 {
            for m in 0..=(20 - n) {
                let ratio = fact(n) as f64 / fact(n + m) as f64;
                let want = (2.0 * ratio / PI).sqrt();
                let got = mode_norm_constant(n, m as i32);
                assert!(
                    ((got - want) / want).abs() < 1e-14,
                    "n={n} l={m}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn norm_constant_positive_and_decreasing_in_ell() {
        for n in 0..8 {
            let mut last = f64::INFINITY;
            for ell in 0..200 {
                let c = mode_norm_constant(n, ell);
                assert!(c > 0.0 && c <= last, "n={n} l={ell}");
                // C_{0,0} = C_{0,1} since (0+1)!/0! = 1; strict from there on
                if n > 0 || ell > 1 {
                    assert!(c < last, "n={n} l={ell}");
                }
                last = c;
            }
        }
    }

    #[test]
    fn norm_constant_survives_huge_factorials() {
        let c = mode_norm_constant(150, 150);
        assert!(c.is_finite() && c > 0.0);
        // ratio via summed logs
        let want =
            (0.5 * ((2.0 / PI).ln() - (151..=300).map(|j| (j as f64).ln()).sum::<f64>())).exp();
        assert!(((c - want) / want).abs() < 1e-12);
    }
}
