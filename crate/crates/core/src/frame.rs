//! Shared eigenstructure of `A(u)` and `B(u)`.
//!
//! `A` is diagonalised numerically; `B` is never diagonalised on its own.
//! Its eigenvalues are read off in the frame of `A` as `mu_i = l_i B r_i`,
//! which keeps the eigenvectors shared even under roundoff. Whether the
//! two matrices really commute is checked separately.

use nalgebra::{DMatrix, DVector};

use crate::error::{LabError, Result};
use crate::report::{EstimateReport, Relation};
use crate::system::{DomainBox, SystemSpec};

/// Spectral data at one state.
///
/// `right` holds the unit eigenvectors `r_i` as columns, `left` holds the
/// dual vectors `l_i` as rows, so `left * right = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFrame {
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub right: DMatrix<f64>,
    pub left: DMatrix<f64>,
}

impl EigenFrame {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn r(&self, i: usize) -> DVector<f64> {
        self.right.column(i).into_owned()
    }

    pub fn l(&self, i: usize) -> DVector<f64> {
        self.left.row(i).transpose()
    }

    /// Coordinates `l_i . v` of a vector in this frame.
    pub fn project(&self, v: &[f64]) -> DVector<f64> {
        &self.left * DVector::from_column_slice(v)
    }

    /// Flips eigenvector signs so that `r_i . reference.r_i >= 0`.
    pub fn align_with(mut self, reference: &EigenFrame) -> Self {
        for i in 0..self.n() {
            if self.right.column(i).dot(&reference.right.column(i)) < 0.0 {
                self.right.column_mut(i).neg_mut();
                self.left.row_mut(i).neg_mut();
            }
        }
        self
    }

    /// `sum_i lambda_i r_i l_i`.
    pub fn reconstruct_drift(&self) -> DMatrix<f64> {
        &self.right * DMatrix::from_diagonal(&DVector::from_column_slice(&self.lambda)) * &self.left
    }

    /// `sum_i mu_i r_i l_i`.
    pub fn reconstruct_viscosity(&self) -> DMatrix<f64> {
        &self.right * DMatrix::from_diagonal(&DVector::from_column_slice(&self.mu)) * &self.left
    }
}

/// Unit vector with the largest-magnitude component made positive.
fn normalize_signed(mut v: DVector<f64>) -> DVector<f64> {
    let norm = v.norm();
    if norm > 0.0 {
        v /= norm;
    }
    let mut k = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[k].abs() {
            k = i;
        }
    }
    if v[k] < 0.0 {
        v.neg_mut();
    }
    v
}

/// Real eigenvalues in increasing order with unit right eigenvectors.
fn real_eigen(a: &DMatrix<f64>, gap_min: f64, state: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    let (lambda, vectors): (Vec<f64>, Vec<DVector<f64>>) = match n {
        1 => (vec![a[(0, 0)]], vec![DVector::from_element(1, 1.0)]),
        2 => {
            let (p, q, r, s) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
            let half = 0.5 * (p - s);
            let disc = half * half + q * r;
            if disc < 0.0 {
                return Err(LabError::NonReal { state: state.to_vec() });
            }
            let root = disc.sqrt();
            let mean = 0.5 * (p + s);
            let lams = vec![mean - root, mean + root];
            let vecs = lams
                .iter()
                .map(|&lam| {
                    let v1 = DVector::from_vec(vec![q, lam - p]);
                    let v2 = DVector::from_vec(vec![lam - s, r]);
                    if v1.norm() >= v2.norm() {
                        v1
                    } else {
                        v2
                    }
                })
                .collect();
            (lams, vecs)
        }
        _ => {
            let scale = 1.0 + a.norm();
            let eig = a.clone().complex_eigenvalues();
            if eig.iter().any(|z| z.im.abs() > 1e-10 * scale) {
                return Err(LabError::NonReal { state: state.to_vec() });
            }
            let mut lams: Vec<f64> = eig.iter().map(|z| z.re).collect();
            lams.sort_by(|x, y| x.total_cmp(y));
            let vecs = lams
                .iter()
                .map(|&lam| {
                    let shifted = a - DMatrix::identity(n, n) * lam;
                    let svd = shifted.svd(false, true);
                    let v_t = svd.v_t.expect("requested v_t");
                    let k = svd
                        .singular_values
                        .iter()
                        .enumerate()
                        .min_by(|x, y| x.1.total_cmp(y.1))
                        .map(|(k, _)| k)
                        .unwrap();
                    v_t.row(k).transpose()
                })
                .collect();
            (lams, vecs)
        }
    };
    let gap = lambda.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if n > 1 && !(gap >= gap_min) {
        return Err(LabError::DegenerateSpectrum {
            state: state.to_vec(),
            gap,
            gap_min,
        });
    }
    let cols: Vec<DVector<f64>> = vectors.into_iter().map(normalize_signed).collect();
    Ok((lambda, DMatrix::from_columns(&cols)))
}

fn assemble(sys: &SystemSpec, u: &[f64], lambda: Vec<f64>, right: DMatrix<f64>) -> Result<EigenFrame> {
    let left = right
        .clone()
        .try_inverse()
        .ok_or_else(|| LabError::DegenerateSpectrum {
            state: u.to_vec(),
            gap: 0.0,
            gap_min: sys.tol.gap_min,
        })?;
    let b = sys.viscosity(u);
    let mu: Vec<f64> = (0..sys.n)
        .map(|i| (left.row(i) * &b * right.column(i))[(0, 0)])
        .collect();
    if let Some(&m) = mu.iter().find(|m| !(**m >= sys.c0 * (1.0 - 1e-12))) {
        return Err(LabError::ViscosityBound {
            state: u.to_vec(),
            mu: m,
            c0: sys.c0,
        });
    }
    Ok(EigenFrame {
        u: u.to_vec(),
        lambda,
        mu,
        right,
        left,
    })
}

/// Frame from a numerical eigendecomposition of `A`, without the
/// commutation check.
pub fn frame_numeric(sys: &SystemSpec, u: &[f64]) -> Result<EigenFrame> {
    sys.check_in_domain(u)?;
    let a = sys.drift(u);
    let (lambda, right) = real_eigen(&a, sys.tol.gap_min, u)?;
    assemble(sys, u, lambda, right)
}

/// Frame used inside solvers: for constant-frame systems the eigenvectors
/// are taken from the basis directly, otherwise as [`frame_numeric`].
pub fn frame_fast(sys: &SystemSpec, u: &[f64]) -> Result<EigenFrame> {
    if let Some(cf) = &sys.constant_frame {
        sys.check_in_domain(u)?;
        let w = cf.to_characteristic(u);
        let lambda: Vec<f64> = w.iter().zip(&cf.laws).map(|(x, l)| (l.speed)(*x)).collect();
        if lambda.windows(2).all(|p| p[1] - p[0] >= sys.tol.gap_min) {
            let mut right = cf.basis.clone();
            let mut left = cf.inverse.clone();
            for i in 0..sys.n {
                let col = cf.basis.column(i);
                let scale = col.norm();
                let k = col.iamax();
                let signed = if col[k] < 0.0 { -scale } else { scale };
                right.column_mut(i).unscale_mut(signed);
                left.row_mut(i).scale_mut(signed);
            }
            let mu: Vec<f64> = w.iter().zip(&cf.laws).map(|(x, l)| (l.viscosity)(*x)).collect();
            if let Some(&m) = mu.iter().find(|m| !(**m >= sys.c0 * (1.0 - 1e-12))) {
                return Err(LabError::ViscosityBound {
                    state: u.to_vec(),
                    mu: m,
                    c0: sys.c0,
                });
            }
            return Ok(EigenFrame {
                u: u.to_vec(),
                lambda,
                mu,
                right,
                left,
            });
        }
    }
    frame_numeric(sys, u)
}

/// Frobenius norm of `AB - BA`.
pub fn commutator_norm(sys: &SystemSpec, u: &[f64]) -> f64 {
    let a = sys.drift(u);
    let b = sys.viscosity(u);
    (&a * &b - &b * &a).norm()
}

/// Checked frame: numerical diagonalisation plus the commutation test.
pub fn compute_frame(sys: &SystemSpec, u: &[f64]) -> Result<EigenFrame> {
    let frame = frame_numeric(sys, u)?;
    let residual = commutator_norm(sys, u);
    if !(residual <= sys.tol.commutation_tol) {
        return Err(LabError::CommutationViolation {
            state: u.to_vec(),
            residual,
            tol: sys.tol.commutation_tol,
        });
    }
    Ok(frame)
}

/// Central difference `(g(u + h z) - g(u - h z)) / 2h` of a tensor-valued map.
pub fn directional_derivative<G>(domain: &DomainBox, g: G, u: &[f64], zeta: &[f64], step: f64) -> Result<Vec<f64>>
where
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let plus: Vec<f64> = u.iter().zip(zeta).map(|(a, b)| a + step * b).collect();
    let minus: Vec<f64> = u.iter().zip(zeta).map(|(a, b)| a - step * b).collect();
    if !domain.contains(&plus) {
        return Err(LabError::OutOfDomain { state: plus });
    }
    if !domain.contains(&minus) {
        return Err(LabError::OutOfDomain { state: minus });
    }
    let gp = g(&plus)?;
    let gm = g(&minus)?;
    Ok(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * step)).collect())
}

/// `max_i |r_i . grad r_i|` at one state, with frames aligned to the base.
pub fn temple_residual_at(sys: &SystemSpec, u: &[f64], step: f64) -> Result<f64> {
    let base = frame_numeric(sys, u)?;
    let mut worst: f64 = 0.0;
    for i in 0..sys.n {
        let ri = base.r(i);
        let d = directional_derivative(
            &sys.domain,
            |v: &[f64]| {
                let f = frame_numeric(sys, v)?.align_with(&base);
                Ok(f.r(i).as_slice().to_vec())
            },
            u,
            ri.as_slice(),
            step,
        )?;
        worst = worst.max(d.iter().map(|x| x * x).sum::<f64>().sqrt());
    }
    Ok(worst)
}

/// Straight-characteristic-field test over a set of states.
pub fn check_temple(sys: &SystemSpec, samples: &[Vec<f64>]) -> Result<EstimateReport> {
    check_temple_with_step(sys, samples, sys.tol.fd_step)
}

pub fn check_temple_with_step(sys: &SystemSpec, samples: &[Vec<f64>], step: f64) -> Result<EstimateReport> {
    let mut worst: f64 = 0.0;
    for u in samples {
        sys.check_in_domain(u)?;
        worst = worst.max(temple_residual_at(sys, u, step)?);
    }
    let mut report = EstimateReport::new(format!("temple:{}", sys.name));
    report.scalar("samples", samples.len() as f64);
    report.scalar("step", step);
    report.check("max_temple_residual", worst, Relation::Le, sys.tol.temple_tol);
    Ok(report)
}

/// Central finite-difference Jacobian of the flux.
pub fn flux_jacobian_fd(sys: &SystemSpec, u: &[f64], step: f64) -> Option<DMatrix<f64>> {
    sys.flux(u)?;
    let n = sys.n;
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut up = u.to_vec();
        let mut um = u.to_vec();
        up[j] += step;
        um[j] -= step;
        let d = (sys.flux(&up)? - sys.flux(&um)?) / (2.0 * step);
        jac.set_column(j, &d);
    }
    Some(jac)
}

/// States shrunk towards the box centre so that finite-difference stencils
/// of half-width `margin` stay admissible.
pub fn interior_samples(domain: &DomainBox, count: usize, margin: f64) -> Vec<Vec<f64>> {
    let shrunk = DomainBox {
        lower: domain.lower.iter().map(|a| a + margin).collect(),
        upper: domain.upper.iter().map(|b| b - margin).collect(),
    };
    shrunk.lattice_at_least(count)
}

/// Full hypothesis suite: strict hyperbolicity, positivity of the viscosity
/// spectrum, commutation, frame invariants, flux consistency and the
/// straight-field property, evaluated on `samples`.
pub fn verify_system(sys: &SystemSpec, samples: &[Vec<f64>]) -> EstimateReport {
    let mut report = EstimateReport::new(format!("hypotheses:{}", sys.name));
    let tol = sys.tol;
    let mut min_gap = f64::INFINITY;
    let mut min_mu_margin = f64::INFINITY;
    let mut max_comm: f64 = 0.0;
    let mut max_norm_err: f64 = 0.0;
    let mut max_dual_err: f64 = 0.0;
    let mut max_eig_res: f64 = 0.0;
    let mut max_roundtrip: f64 = 0.0;
    let mut max_jac: f64 = 0.0;
    let mut max_temple: f64 = 0.0;
    let mut failures = 0usize;
    for u in samples {
        let frame = match frame_numeric(sys, u) {
            Ok(f) => f,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let a = sys.drift(u);
        let b = sys.viscosity(u);
        min_gap = min_gap.min(
            frame
                .lambda
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min),
        );
        min_mu_margin = min_mu_margin.min(frame.mu.iter().fold(f64::INFINITY, |m, x| m.min(*x)) - sys.c0);
        max_comm = max_comm.max(commutator_norm(sys, u));
        for i in 0..sys.n {
            let r = frame.r(i);
            max_norm_err = max_norm_err.max((r.norm() - 1.0).abs());
            for j in 0..sys.n {
                let target = if i == j { 1.0 } else { 0.0 };
                max_dual_err = max_dual_err.max((frame.l(i).dot(&frame.r(j)) - target).abs());
            }
            max_eig_res = max_eig_res
                .max((&a * &r - &r * frame.lambda[i]).norm())
                .max((&b * &r - &r * frame.mu[i]).norm());
        }
        max_roundtrip = max_roundtrip
            .max((frame.reconstruct_drift() - &a).norm())
            .max((frame.reconstruct_viscosity() - &b).norm());
        if let Some(j) = flux_jacobian_fd(sys, u, tol.fd_step) {
            max_jac = max_jac.max((j - &a).abs().max());
        }
        match temple_residual_at(sys, u, tol.fd_step) {
            Ok(t) => max_temple = max_temple.max(t),
            Err(_) => failures += 1,
        }
    }
    report.scalar("samples", samples.len() as f64);
    report.check("frame_failures", failures as f64, Relation::Le, 0.0);
    if sys.n > 1 {
        report.check("min_eigenvalue_gap", min_gap, Relation::Ge, tol.gap_min);
    }
    report.check("min_mu_minus_c0", min_mu_margin, Relation::Ge, 0.0);
    report.check("max_commutator", max_comm, Relation::Le, tol.commutation_tol);
    report.check("max_normalization_error", max_norm_err, Relation::Le, tol.frame_tol);
    report.check("max_duality_error", max_dual_err, Relation::Le, tol.frame_tol);
    report.check("max_eigen_residual", max_eig_res, Relation::Le, tol.frame_tol);
    report.check(
        "max_reconstruction_error",
        max_roundtrip,
        Relation::Le,
        10.0 * tol.frame_tol,
    );
    if sys.has_flux() {
        report.check("max_flux_jacobian_error", max_jac, Relation::Le, tol.jacobian_tol);
    }
    report.check("max_temple_residual", max_temple, Relation::Le, tol.temple_tol);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{self, MatrixFn};
    use std::sync::Arc;

    fn diag_system() -> SystemSpec {
        let a: MatrixFn = Arc::new(|_: &[f64]| DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]));
        let b: MatrixFn = Arc::new(|_: &[f64]| DMatrix::identity(2, 2));
        SystemSpec::new(
            "diag",
            2,
            a,
            b,
            None,
            DomainBox::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap(),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn diagonal_case() {
        let f = compute_frame(&diag_system(), &[0.3, -0.2]).unwrap();
        assert_eq!(f.lambda, vec![1.0, 2.0]);
        assert_eq!(f.mu, vec![1.0, 1.0]);
        assert_eq!(f.right, DMatrix::identity(2, 2));
        assert_eq!(f.left, DMatrix::identity(2, 2));
    }

    #[test]
    fn conjugated_frame_matches_basis() {
        let sys = system::rotated2();
        let basis = system::rotated2_basis();
        let u = [0.1, 0.25];
        let f = compute_frame(&sys, &u).unwrap();
        for i in 0..2 {
            let col = basis.column(i).into_owned();
            let expect = &col / col.norm();
            assert!((f.r(i) - &expect).norm() < 1e-12, "{} vs {}", f.r(i), expect);
        }
        // rows of R^-1 rescaled so that l_i . r_i = 1
        let inv = basis.clone().try_inverse().unwrap();
        for i in 0..2 {
            let scale = basis.column(i).norm();
            let expect = inv.row(i).transpose() * scale;
            assert!((f.l(i) - expect).norm() < 1e-12);
        }
        let w = sys.constant_frame.as_ref().unwrap().to_characteristic(&u);
        assert!((f.lambda[0] - w[0]).abs() < 1e-12);
        assert!((f.lambda[1] - (2.0 + w[1])).abs() < 1e-12);
        let fast = frame_fast(&sys, &u).unwrap();
        assert!((fast.right - &f.right).norm() < 1e-12);
    }

    #[test]
    fn three_by_three_numeric_frame() {
        let sys = system::rotated3();
        let u = [0.1, -0.2, 0.05];
        let f = compute_frame(&sys, &u).unwrap();
        let fast = frame_fast(&sys, &u).unwrap();
        assert!((f.right.clone() - &fast.right).norm() < 1e-10);
        for i in 0..3 {
            assert!((f.lambda[i] - fast.lambda[i]).abs() < 1e-12);
            assert!((f.mu[i] - fast.mu[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn errors_are_classified() {
        let rot: MatrixFn = Arc::new(|_: &[f64]| DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let id: MatrixFn = Arc::new(|_: &[f64]| DMatrix::identity(2, 2));
        let bx = DomainBox::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let s = SystemSpec::new("rot", 2, rot, id.clone(), None, bx.clone(), 1.0).unwrap();
        assert!(matches!(compute_frame(&s, &[0.0, 0.0]), Err(LabError::NonReal { .. })));

        let s = SystemSpec::new("deg", 2, id.clone(), id.clone(), None, bx.clone(), 1.0).unwrap();
        assert!(matches!(
            compute_frame(&s, &[0.0, 0.0]),
            Err(LabError::DegenerateSpectrum { .. })
        ));

        let a: MatrixFn = Arc::new(|_: &[f64]| DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]));
        let b: MatrixFn = Arc::new(|_: &[f64]| DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.0, 2.0]));
        let s = SystemSpec::new("nc", 2, a, b, None, bx, 1.0).unwrap();
        assert!(matches!(
            compute_frame(&s, &[0.0, 0.0]),
            Err(LabError::CommutationViolation { .. })
        ));
    }

    #[test]
    fn directional_derivative_examples() {
        let bx = DomainBox::new(vec![-2.0, -2.0], vec![2.0, 2.0]).unwrap();
        let constant = |_: &[f64]| Ok(vec![3.0, -1.0]);
        let d = directional_derivative(&bx, constant, &[0.1, 0.2], &[1.0, 1.0], 1e-5).unwrap();
        assert_eq!(d, vec![0.0, 0.0]);
        let ident = |u: &[f64]| Ok(u.to_vec());
        let d = directional_derivative(&bx, ident, &[0.1, 0.2], &[0.5, -0.25], 1e-3).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-12 && (d[1] + 0.25).abs() < 1e-12);
        let sq = |u: &[f64]| Ok(vec![u[0] * u[0] + u[1] * u[1]]);
        let d = directional_derivative(&bx, sq, &[1.0, 0.0], &[0.0, 1.0], 1e-4).unwrap();
        assert!(d[0].abs() < 1e-7);
        let far = directional_derivative(&bx, sq, &[1.99, 0.0], &[1.0, 0.0], 0.1);
        assert!(matches!(far, Err(LabError::OutOfDomain { .. })));
    }

    #[test]
    fn constant_fields_are_temple() {
        let sys = diag_system();
        let r = check_temple(&sys, &interior_samples(&sys.domain, 16, 0.01)).unwrap();
        assert!(r.pass);
        assert_eq!(r.find_check("max_temple_residual").unwrap().value, 0.0);
    }

    #[test]
    fn chromatography_is_temple_and_psystem_is_not() {
        let sys = system::chromatography();
        let samples = interior_samples(&sys.domain, 25, 0.01);
        let r = check_temple(&sys, &samples).unwrap();
        assert!(r.pass, "{r}");
        assert!(r.find_check("max_temple_residual").unwrap().value <= 1e-6);

        let p = system::psystem();
        let r = check_temple(&p, &interior_samples(&p.domain, 25, 0.01)).unwrap();
        assert!(!r.pass);
        assert!(r.find_check("max_temple_residual").unwrap().value > 1e-2);
    }

    #[test]
    fn temple_residual_converges_quadratically() {
        // differences of successive residuals shrink by ~4 per halving
        let p = system::psystem();
        let u = [1.0, 0.2];
        let h = 1e-2;
        let r1 = temple_residual_at(&p, &u, h).unwrap();
        let r2 = temple_residual_at(&p, &u, h / 2.0).unwrap();
        let r3 = temple_residual_at(&p, &u, h / 4.0).unwrap();
        let ratio = (r1 - r2) / (r2 - r3);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn sign_convention_is_locally_stable() {
        for sys in system::bundled_systems() {
            for u in interior_samples(&sys.domain, 20, 1e-3) {
                let v: Vec<f64> = u.iter().map(|x| x + 5e-7).collect();
                let a = frame_numeric(&sys, &u).unwrap();
                let b = frame_numeric(&sys, &v).unwrap();
                assert!((a.right - b.right).abs().max() < 1e-4, "{}", sys.name);
            }
        }
    }
}
