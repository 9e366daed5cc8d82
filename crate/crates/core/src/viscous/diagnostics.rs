use crate::grid::GridField;
use crate::report::EstimateReport;

use super::decompose::{central_gradient, second_difference};

/// `sum_j |u_{j+1} - u_j|` with Euclidean norms.
pub fn total_variation(u: &GridField) -> f64 {
    (1..u.len())
        .map(|j| {
            u.at(j)
                .iter()
                .zip(u.at(j - 1))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .sum()
}

/// Standard field diagnostics measured against the left end state.
pub fn diagnostics(u: &GridField) -> EstimateReport {
    let star = u.at(0).to_vec();
    diagnostics_about(u, &star)
}

/// TV, `|u_x|_1`, `|u_xx|_1`, `|u_x|_inf` and `|u - u_star|_inf`.
pub fn diagnostics_about(u: &GridField, u_star: &[f64]) -> EstimateReport {
    let mut r = EstimateReport::new("diagnostics");
    let ux = central_gradient(u);
    let uxx = second_difference(u);
    let dev = (0..u.len())
        .map(|j| {
            u.at(j)
                .iter()
                .zip(u_star)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    r.scalar("t", u.t)
        .scalar("tv", total_variation(u))
        .scalar("ux_l1", ux.l1_norm())
        .scalar("uxx_l1", uxx.l1_norm())
        .scalar("ux_linf", ux.sup_norm())
        .scalar("deviation_linf", dev);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_step() {
        let c = GridField::from_fn(0.0, 1.0, 11, 2, |_| vec![1.0, 2.0]).unwrap();
        let d = diagnostics(&c);
        for k in ["tv", "ux_l1", "uxx_l1", "ux_linf", "deviation_linf"] {
            assert_eq!(d.get(k), Some(0.0));
        }
        let s = GridField::from_fn(0.0, 1.0, 11, 1, |x| vec![if x < 0.5 { 0.0 } else { -0.7 }]).unwrap();
        assert_eq!(total_variation(&s), 0.7);
    }
}
