//! Root isolation for the denominators of a system: exact where a rational
//! root can be certified, a numeric disc otherwise.

use num::{BigInt, BigRational, ToPrimitive, Zero};
use num_complex::Complex64;

use super::PointLocation;
use crate::error::{Error, Result};
use crate::expr::Polynomial;

fn coefficients(f: &Polynomial) -> Vec<BigRational> {
    let d = f.degree_in(0).unwrap_or(0) as usize;
    let mut c = vec![BigRational::zero(); d + 1];
    for (m, v) in f.terms() {
        c[m.0[0] as usize] = v.clone();
    }
    c
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Simultaneous Aberth–Ehrlich iteration for all roots.
fn aberth(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n].norm();
    let bound = 1.0 + c[..n].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                bound,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * s);
            z[k] -= w;
            worst = worst.max(w.norm() / (1.0 + z[k].norm()));
        }
        if worst < 1e-15 {
            return Ok(z);
        }
    }
    Err(Error::Numeric("root iteration did not converge".into()))
}

/// Best rational approximation with denominator at most `qmax`.
fn rational_guess(x: f64, qmax: i64) -> Option<BigRational> {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > qmax {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-13 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 != 0).then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

pub(super) fn isolate(f: &Polynomial) -> Result<Vec<PointLocation>> {
    let c = coefficients(f);
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![PointLocation::Exact(-&c[0] / &c[1])]);
    }
    let cf: Vec<Complex64> = c
        .iter()
        .map(|a| Complex64::new(a.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    if cf.iter().any(|a| !a.re.is_finite()) {
        return Err(Error::Numeric(
            "coefficients overflow double precision".into(),
        ));
    }
    let mut out = Vec::new();
    for z in aberth(&cf)? {
        if z.im.abs() < 1e-8 * (1.0 + z.re.abs()) {
            if let Some(r) = rational_guess(z.re, 1_000_000) {
                let exact = PointLocation::Exact(r.clone());
                if f.evaluate(std::slice::from_ref(&r)).is_zero() && !out.contains(&exact) {
                    out.push(exact);
                    continue;
                }
            }
        }
        let (p, dp) = horner(&cf, z);
        let radius = (n as f64 * p.norm() / dp.norm()).max(1e-14 * (1.0 + z.norm()));
        if !radius.is_finite() || dp.norm() == 0.0 {
            return Err(Error::Numeric("could not bracket a root".into()));
        }
        out.push(PointLocation::Numeric { center: z, radius });
    }
    Ok(out)
}
