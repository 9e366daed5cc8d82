use serde::Serialize;

use crate::error::{LabError, Result};

use super::flux::ScalarFlux;

/// Relative tolerance under which a chord is treated as lying on the flux.
const FLAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Contact,
}

/// One elementary wave of a scalar profile. Shocks and contacts have equal
/// left and right speeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarWave {
    #[serde(rename = "type")]
    pub kind: WaveKind,
    pub speed_left: f64,
    pub speed_right: f64,
    pub z_left: f64,
    pub z_right: f64,
}

/// Self-similar entropy solution `z(xi)` of a scalar Riemann problem with
/// data `0 | sigma`.
///
/// Stored as a monotone list of knots `(xi, z)`; `z` is linear between
/// knots with distinct `xi` and jumps where two knots share a speed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarProfile {
    pub sigma: f64,
    pub knots: Vec<(f64, f64)>,
    pub waves: Vec<ScalarWave>,
    /// Envelope vertices `(omega, F)` in order of increasing `|omega|`.
    pub envelope: Vec<(f64, f64)>,
    /// Largest violation of the Oleinik chord condition on the table.
    pub entropy_violation: f64,
    /// Speed carried by a trivial wave.
    pub rest_speed: f64,
}

impl ScalarProfile {
    pub fn is_trivial(&self) -> bool {
        self.sigma == 0.0
    }

    /// `z(xi)`, right-continuous at shocks.
    pub fn eval(&self, xi: f64) -> f64 {
        let k = &self.knots;
        if k.is_empty() {
            return 0.0;
        }
        let idx = k.partition_point(|p| p.0 <= xi);
        if idx == 0 {
            return k[0].1;
        }
        if idx == k.len() {
            return k[k.len() - 1].1;
        }
        let (x0, z0) = k[idx - 1];
        let (x1, z1) = k[idx];
        z0 + (z1 - z0) * (xi - x0) / (x1 - x0)
    }

    /// Slowest and fastest speed at which `z` changes.
    pub fn speed_range(&self) -> (f64, f64) {
        match (self.knots.first(), self.knots.last()) {
            (Some(a), Some(b)) if !self.is_trivial() => (a.0, b.0),
            _ => (self.rest_speed, self.rest_speed),
        }
    }

    /// Piecewise-linear envelope through its vertices.
    pub fn envelope_at(&self, omega: f64) -> f64 {
        let e = &self.envelope;
        if e.len() < 2 {
            return 0.0;
        }
        let key = omega.abs();
        let idx = e.partition_point(|p| p.0.abs() <= key).clamp(1, e.len() - 1);
        let (a, fa) = e[idx - 1];
        let (b, fb) = e[idx];
        fa + (fb - fa) * (omega - a) / (b - a)
    }
}

/// Indices of the lower convex hull of points sorted by strictly increasing
/// `x` (monotone chain). Collinear interior points are dropped.
pub fn lower_envelope(points: &[(f64, f64)]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        while hull.len() >= 2 {
            let a = points[hull[hull.len() - 2]];
            let b = points[hull[hull.len() - 1]];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

/// Entropy solution of `z_t + F(z)_x = 0`, `z(0, x) = 0` for `x < 0` and
/// `sigma = F.sigma_max` for `x > 0`.
///
/// For `sigma > 0` this walks the lower convex envelope of `F` over
/// `[0, sigma]`; for `sigma < 0` the upper concave envelope over
/// `[sigma, 0]`, obtained as the lower envelope of `-F(-z)`. Edges between
/// neighbouring nodes form rarefactions, longer edges shocks, and longer
/// edges along which `F` is linear contacts.
pub fn scalar_riemann(flux: &ScalarFlux) -> Result<ScalarProfile> {
    let sigma = flux.sigma_max;
    let rest_speed = flux.speeds[0];
    if flux.is_trivial() {
        return Ok(ScalarProfile {
            sigma,
            knots: Vec::new(),
            waves: Vec::new(),
            envelope: vec![(0.0, 0.0)],
            entropy_violation: 0.0,
            rest_speed,
        });
    }
    let sign = sigma.signum();
    let nodes = flux.nodes();
    let pts: Vec<(f64, f64)> = (0..nodes)
        .map(|k| (sign * flux.omega(k), sign * flux.values[k]))
        .collect();
    if pts.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(LabError::DegenerateFlux("flux nodes are not strictly ordered".into()));
    }
    let hull = lower_envelope(&pts);
    let scale = flux.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(sigma.abs());
    let mut knots: Vec<(f64, f64)> = Vec::new();
    let mut waves: Vec<ScalarWave> = Vec::new();
    let mut violation: f64 = 0.0;
    for e in hull.windows(2) {
        let (a, b) = (e[0], e[1]);
        let (za, zb) = (flux.omega(a), flux.omega(b));
        let chord = (flux.values[b] - flux.values[a]) / (zb - za);
        if b == a + 1 {
            knots.push((flux.speeds[a], za));
            knots.push((flux.speeds[b], zb));
            match waves.last_mut() {
                Some(w) if w.kind == WaveKind::Rarefaction && w.z_right == za => {
                    w.speed_right = flux.speeds[b];
                    w.z_right = zb;
                }
                _ => waves.push(ScalarWave {
                    kind: WaveKind::Rarefaction,
                    speed_left: flux.speeds[a],
                    speed_right: flux.speeds[b],
                    z_left: za,
                    z_right: zb,
                }),
            }
            continue;
        }
        let mut off_chord: f64 = 0.0;
        for k in a + 1..b {
            let on_chord = flux.values[a] + chord * (flux.omega(k) - za);
            let gap = sign * (on_chord - flux.values[k]);
            violation = violation.max(gap);
            off_chord = off_chord.max(gap.abs());
        }
        knots.push((chord, za));
        knots.push((chord, zb));
        waves.push(ScalarWave {
            kind: if off_chord <= FLAT_TOL * scale {
                WaveKind::Contact
            } else {
                WaveKind::Shock
            },
            speed_left: chord,
            speed_right: chord,
            z_left: za,
            z_right: zb,
        });
    }
    // the table speeds and chord slopes may disagree by rounding at
    // tangency points; the profile must stay monotone in xi
    for k in 1..knots.len() {
        if knots[k].0 < knots[k - 1].0 {
            knots[k].0 = knots[k - 1].0;
        }
    }
    knots.dedup();
    let envelope = hull.iter().map(|&k| (flux.omega(k), flux.values[k])).collect();
    Ok(ScalarProfile {
        sigma,
        knots,
        waves,
        envelope,
        entropy_violation: violation,
        rest_speed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_parabola_keeps_all_points() {
        let pts: Vec<(f64, f64)> = (0..10).map(|k| (k as f64, (k * k) as f64)).collect();
        assert_eq!(lower_envelope(&pts).len(), 10);
    }

    #[test]
    fn hull_of_concave_keeps_endpoints() {
        let pts: Vec<(f64, f64)> = (0..10).map(|k| (k as f64, -((k * k) as f64))).collect();
        assert_eq!(lower_envelope(&pts), vec![0, 9]);
    }

    #[test]
    fn hull_drops_collinear_points() {
        let pts: Vec<(f64, f64)> = (0..5).map(|k| (k as f64, 2.0 * k as f64)).collect();
        assert_eq!(lower_envelope(&pts), vec![0, 4]);
    }
}
