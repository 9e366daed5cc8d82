//! Small least-squares fits used by the studies.

use crate::report::Fit;

/// Least-squares line `y = a + b x`; returns `(a, b, rms residual)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let rms = (x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum::<f64>() / n as f64).sqrt();
    Some((a, b, rms))
}

/// Power law `y = C x^p` fitted in log-log coordinates. Points with
/// non-positive coordinates are skipped. The residual is the rms of the
/// log misfit.
pub fn power_fit(x: &[f64], y: &[f64]) -> Option<Fit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .unzip();
    let (a, b, rms) = linear_fit(&lx, &ly)?;
    Some(Fit {
        model: "C * x^p".into(),
        exponent: b,
        constant: a.exp(),
        residual: rms,
    })
}

/// Non-negative least squares `y ~ a x1 + b x2` with `a, b >= 0`.
///
/// Returns `(a, b, relative residual)` where the residual is
/// `|y - fit|_2 / |y|_2` (zero when `y` vanishes).
pub fn nnls2(x1: &[f64], x2: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
    let (s11, s22, s12) = (dot(x1, x1), dot(x2, x2), dot(x1, x2));
    let (s1y, s2y) = (dot(x1, y), dot(x2, y));
    let yy = dot(y, y);
    let residual = |a: f64, b: f64| {
        let r: f64 = (0..y.len()).map(|k| (y[k] - a * x1[k] - b * x2[k]).powi(2)).sum();
        if yy > 0.0 {
            (r / yy).sqrt()
        } else {
            0.0
        }
    };
    let mut candidates = vec![(0.0, 0.0)];
    let det = s11 * s22 - s12 * s12;
    if det > 1e-14 * s11 * s22 {
        let a = (s22 * s1y - s12 * s2y) / det;
        let b = (s11 * s2y - s12 * s1y) / det;
        if a >= 0.0 && b >= 0.0 {
            candidates.push((a, b));
        }
    }
    if s11 > 0.0 {
        candidates.push(((s1y / s11).max(0.0), 0.0));
    }
    if s22 > 0.0 {
        candidates.push((0.0, (s2y / s22).max(0.0)));
    }
    candidates
        .into_iter()
        .map(|(a, b)| (a, b, residual(a, b)))
        .min_by(|p, q| p.2.total_cmp(&q.2))
        .expect("at least the zero candidate")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let x = [0.1, 0.2, 0.4, 0.8];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.5)).collect();
        let f = power_fit(&x, &y).unwrap();
        assert!((f.exponent + 0.5).abs() < 1e-12 && (f.constant - 3.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn nnls_clamps_negative_coefficients() {
        let x1 = [1.0, 2.0, 3.0];
        let x2 = [1.0, 1.0, 1.0];
        let (a, b, r) = nnls2(&x1, &x2, &[2.0, 4.0, 6.0]);
        assert!((a - 2.0).abs() < 1e-12 && b.abs() < 1e-12 && r < 1e-12);
        // the unconstrained fit would need a negative intercept
        let (a, b, _) = nnls2(&x1, &x2, &[0.0, 2.0, 4.0]);
        assert!(a >= 0.0 && b >= 0.0);
    }
}
