//! Hyperbolic-parabolic systems `u_t + A(u) u_x = eps (B(u) u_x)_x`.
//!
//! A [`SystemSpec`] bundles the drift matrix `A`, the viscosity matrix `B`,
//! an optional flux `f` with `Df = A`, an admissible box and the numerical
//! tolerances used when its eigenstructure is checked. Systems of the
//! constant-frame family additionally carry their decoupled scalar laws,
//! which is what makes exact semigroup references available for them.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::error::{LabError, Result};
use crate::expr::Expr;

pub type MatrixFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Axis-aligned box standing in for the admissible set.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl DomainBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(LabError::Config(
                "domain bounds must have equal, positive length".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(a, b)| !(a < b)) {
            return Err(LabError::Config("domain lower bound must be below upper bound".into()));
        }
        Ok(DomainBox { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.len() == self.lower.len()
            && u.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (a, b))| *x >= *a && *x <= *b)
    }

    /// Deterministic cell-centred lattice with `per_axis^n` points.
    pub fn lattice(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let n = self.dim();
        let total = per_axis.pow(n as u32);
        (0..total)
            .map(|mut idx| {
                (0..n)
                    .map(|d| {
                        let k = idx % per_axis;
                        idx /= per_axis;
                        let s = (k as f64 + 0.5) / per_axis as f64;
                        self.lower[d] + s * (self.upper[d] - self.lower[d])
                    })
                    .collect()
            })
            .collect()
    }

    /// Lattice with at least `count` points.
    pub fn lattice_at_least(&self, count: usize) -> Vec<Vec<f64>> {
        let n = self.dim() as u32;
        let mut per_axis = 1usize;
        while per_axis.pow(n) < count {
            per_axis += 1;
        }
        self.lattice(per_axis)
    }

    /// Maps a point of the unit cube into the box.
    pub fn from_unit(&self, s: &[f64]) -> Vec<f64> {
        s.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(t, (a, b))| a + t * (b - a))
            .collect()
    }
}

/// Numerical tolerances attached to a system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub frame_tol: f64,
    pub commutation_tol: f64,
    pub temple_tol: f64,
    pub gap_min: f64,
    pub jacobian_tol: f64,
    pub coeff_tol: f64,
    /// Step for first-order directional derivatives.
    pub fd_step: f64,
    /// Step for nested (second-order) directional derivatives.
    pub nested_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            frame_tol: 1e-10,
            commutation_tol: 1e-10,
            temple_tol: 1e-6,
            gap_min: 1e-6,
            jacobian_tol: 1e-6,
            coeff_tol: 1e-8,
            fd_step: 1e-5,
            nested_step: 1e-3,
        }
    }
}

/// One decoupled scalar law `w_t + F(w)_x = eps (mu(w) w_x)_x`.
#[derive(Clone)]
pub struct ScalarLaw {
    pub speed: ScalarFn,
    pub viscosity: ScalarFn,
    pub flux: ScalarFn,
}

impl ScalarLaw {
    pub fn new(
        speed: impl Fn(f64) -> f64 + Send + Sync + 'static,
        viscosity: impl Fn(f64) -> f64 + Send + Sync + 'static,
        flux: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalarLaw {
            speed: Arc::new(speed),
            viscosity: Arc::new(viscosity),
            flux: Arc::new(flux),
        }
    }
}

/// Constant eigenframe `A = R diag(lambda_i(w_i)) R^-1` with `w = R^-1 u`.
#[derive(Clone)]
pub struct ConstantFrame {
    pub basis: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    pub laws: Vec<ScalarLaw>,
}

impl ConstantFrame {
    pub fn to_characteristic(&self, u: &[f64]) -> Vec<f64> {
        (&self.inverse * DVector::from_column_slice(u)).as_slice().to_vec()
    }

    pub fn to_state(&self, w: &[f64]) -> Vec<f64> {
        (&self.basis * DVector::from_column_slice(w)).as_slice().to_vec()
    }

    /// 2-norm condition number of the basis.
    pub fn condition_number(&self) -> f64 {
        let sv = self.basis.clone().svd(false, false).singular_values;
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// A hyperbolic-parabolic system together with its admissible box.
#[derive(Clone)]
pub struct SystemSpec {
    pub name: String,
    pub n: usize,
    drift: MatrixFn,
    viscosity: MatrixFn,
    flux: Option<VectorFn>,
    pub domain: DomainBox,
    pub c0: f64,
    pub tol: Tolerances,
    pub constant_frame: Option<ConstantFrame>,
    /// Bundled negative controls are expected to fail the Temple check.
    pub negative_control: bool,
}

impl fmt::Debug for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemSpec")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("domain", &self.domain)
            .field("c0", &self.c0)
            .field("has_flux", &self.flux.is_some())
            .field("constant_frame", &self.constant_frame.is_some())
            .finish()
    }
}

impl SystemSpec {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        drift: MatrixFn,
        viscosity: MatrixFn,
        flux: Option<VectorFn>,
        domain: DomainBox,
        c0: f64,
    ) -> Result<Self> {
        if n == 0 || domain.dim() != n {
            return Err(LabError::Config(format!(
                "dimension {n} does not match domain of dimension {}",
                domain.dim()
            )));
        }
        if !(c0 > 0.0) {
            return Err(LabError::Config("c0 must be positive".into()));
        }
        Ok(SystemSpec {
            name: name.into(),
            n,
            drift,
            viscosity,
            flux,
            domain,
            c0,
            tol: Tolerances::default(),
            constant_frame: None,
            negative_control: false,
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn drift(&self, u: &[f64]) -> DMatrix<f64> {
        (self.drift)(u)
    }

    pub fn viscosity(&self, u: &[f64]) -> DMatrix<f64> {
        (self.viscosity)(u)
    }

    pub fn flux(&self, u: &[f64]) -> Option<DVector<f64>> {
        self.flux.as_ref().map(|f| f(u))
    }

    pub fn has_flux(&self) -> bool {
        self.flux.is_some()
    }

    pub fn check_in_domain(&self, u: &[f64]) -> Result<()> {
        if self.domain.contains(u) {
            Ok(())
        } else {
            Err(LabError::OutOfDomain { state: u.to_vec() })
        }
    }

    /// Builds `A = R diag(lambda_i(w_i)) R^-1`, `B = R diag(mu_i(w_i)) R^-1`
    /// and `f(u) = R (F_i(w_i))`.
    pub fn constant_frame(
        name: impl Into<String>,
        basis: DMatrix<f64>,
        laws: Vec<ScalarLaw>,
        domain: DomainBox,
        c0: f64,
    ) -> Result<Self> {
        let n = basis.nrows();
        if basis.ncols() != n || laws.len() != n {
            return Err(LabError::Config("basis must be square with one law per family".into()));
        }
        let inverse = basis
            .clone()
            .try_inverse()
            .ok_or_else(|| LabError::Config("constant frame basis is singular".into()))?;
        let frame = ConstantFrame {
            basis: basis.clone(),
            inverse: inverse.clone(),
            laws,
        };
        let diag_map = |frame: ConstantFrame, pick: fn(&ScalarLaw) -> &ScalarFn| -> MatrixFn {
            Arc::new(move |u: &[f64]| {
                let w = &frame.inverse * DVector::from_column_slice(u);
                let d = DVector::from_iterator(w.len(), w.iter().zip(&frame.laws).map(|(wi, law)| pick(law)(*wi)));
                &frame.basis * DMatrix::from_diagonal(&d) * &frame.inverse
            })
        };
        let drift = diag_map(frame.clone(), |l| &l.speed);
        let viscosity = diag_map(frame.clone(), |l| &l.viscosity);
        let ff = frame.clone();
        let flux: VectorFn = Arc::new(move |u: &[f64]| {
            let w = &ff.inverse * DVector::from_column_slice(u);
            let g = DVector::from_iterator(w.len(), w.iter().zip(&ff.laws).map(|(wi, law)| (law.flux)(*wi)));
            &ff.basis * g
        });
        let mut sys = SystemSpec::new(name, n, drift, viscosity, Some(flux), domain, c0)?;
        sys.constant_frame = Some(frame);
        Ok(sys)
    }
}

fn law(
    speed: impl Fn(f64) -> f64 + Send + Sync + 'static,
    viscosity: impl Fn(f64) -> f64 + Send + Sync + 'static,
    flux: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> ScalarLaw {
    ScalarLaw::new(speed, viscosity, flux)
}

/// Names of the bundled systems, in listing order.
pub const BUNDLED_NAMES: &[&str] = &[
    "burgers",
    "heat",
    "advection",
    "rotated2",
    "rotated3",
    "chromatography",
    "psystem",
];

/// Scalar Burgers-type law with `mu(u) = 1 + u^2/4`.
pub fn burgers() -> SystemSpec {
    SystemSpec::constant_frame(
        "burgers",
        DMatrix::identity(1, 1),
        vec![law(|w| w, |w| 1.0 + 0.25 * w * w, |w| 0.5 * w * w)],
        DomainBox::new(vec![-2.0], vec![2.0]).unwrap(),
        1.0,
    )
    .unwrap()
}

/// Heat equation `u_t = eps u_xx`.
pub fn heat() -> SystemSpec {
    SystemSpec::constant_frame(
        "heat",
        DMatrix::identity(1, 1),
        vec![law(|_| 0.0, |_| 1.0, |_| 0.0)],
        DomainBox::new(vec![-10.0], vec![10.0]).unwrap(),
        1.0,
    )
    .unwrap()
}

/// Linear advection-diffusion with unit speed and unit viscosity.
pub fn advection() -> SystemSpec {
    SystemSpec::constant_frame(
        "advection",
        DMatrix::identity(1, 1),
        vec![law(|_| 1.0, |_| 1.0, |w| w)],
        DomainBox::new(vec![-10.0], vec![10.0]).unwrap(),
        1.0,
    )
    .unwrap()
}

/// Basis of the bundled 2x2 constant-frame system.
pub fn rotated2_basis() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.5, -0.5, 1.0])
}

/// 2x2 constant-frame system with `Lambda = diag(w1, 2 + w2)`.
///
/// On the box `|u_i| <= 0.4` the characteristic variables satisfy
/// `|w_i| <= 0.48`, so the speed gap stays above one.
pub fn rotated2() -> SystemSpec {
    SystemSpec::constant_frame(
        "rotated2",
        rotated2_basis(),
        vec![
            law(|w| w, |w| 1.0 + 0.25 * w * w, |w| 0.5 * w * w),
            law(|w| 2.0 + w, |w| 1.0 + 0.25 * w * w, |w| 2.0 * w + 0.5 * w * w),
        ],
        DomainBox::new(vec![-0.4, -0.4], vec![0.4, 0.4]).unwrap(),
        1.0,
    )
    .unwrap()
}

pub fn rotated3_basis() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.2, -0.3, 1.0, 0.3, 0.2, -0.3, 1.0])
}

/// 3x3 constant-frame system with speeds `w1 - 2`, `w2`, `2 + w3`.
pub fn rotated3() -> SystemSpec {
    SystemSpec::constant_frame(
        "rotated3",
        rotated3_basis(),
        vec![
            law(|w| w - 2.0, |w| 1.0 + 0.25 * w * w, |w| 0.5 * w * w - 2.0 * w),
            law(|w| w, |w| 1.5 + 0.5 * w, |w| 0.5 * w * w),
            law(|w| 2.0 + w, |w| 1.0 + w * w, |w| 2.0 * w + 0.5 * w * w),
        ],
        DomainBox::new(vec![-0.3; 3], vec![0.3; 3]).unwrap(),
        1.0,
    )
    .unwrap()
}

/// Langmuir coefficients of the chromatography system.
pub const LANGMUIR_K: [f64; 2] = [1.0, 2.0];

/// Two-component Langmuir chromatography `f_i = k_i u_i / (1 + u1 + u2)`
/// with the commuting viscosity `B = A/2 + (1 + (u1 + u2)/4) I`.
pub fn chromatography() -> SystemSpec {
    let k = LANGMUIR_K;
    let drift: MatrixFn = Arc::new(move |u: &[f64]| langmuir_jacobian(k, u));
    let viscosity: MatrixFn = Arc::new(move |u: &[f64]| {
        let a = langmuir_jacobian(k, u);
        let c = 1.0 + 0.25 * (u[0] + u[1]);
        a * 0.5 + DMatrix::identity(2, 2) * c
    });
    let flux: VectorFn = Arc::new(move |u: &[f64]| {
        let d = 1.0 + u[0] + u[1];
        DVector::from_vec(vec![k[0] * u[0] / d, k[1] * u[1] / d])
    });
    SystemSpec::new(
        "chromatography",
        2,
        drift,
        viscosity,
        Some(flux),
        DomainBox::new(vec![0.05, 0.05], vec![1.0, 1.0]).unwrap(),
        1.0,
    )
    .unwrap()
}

fn langmuir_jacobian(k: [f64; 2], u: &[f64]) -> DMatrix<f64> {
    let d = 1.0 + u[0] + u[1];
    let d2 = d * d;
    DMatrix::from_fn(2, 2, |i, j| {
        let diag = if i == j { k[i] / d } else { 0.0 };
        diag - k[i] * u[i] / d2
    })
}

/// p-system `v_t - w_x = 0`, `w_t + p(v)_x = 0` with `p(v) = v^-2`.
///
/// Both fields are genuinely nonlinear, so it fails the Temple check.
pub fn psystem() -> SystemSpec {
    let drift: MatrixFn = Arc::new(|u: &[f64]| {
        let dp = -2.0 / (u[0] * u[0] * u[0]);
        DMatrix::from_row_slice(2, 2, &[0.0, -1.0, dp, 0.0])
    });
    let viscosity: MatrixFn = Arc::new(|_: &[f64]| DMatrix::identity(2, 2));
    let flux: VectorFn = Arc::new(|u: &[f64]| DVector::from_vec(vec![-u[1], 1.0 / (u[0] * u[0])]));
    let mut sys = SystemSpec::new(
        "psystem",
        2,
        drift,
        viscosity,
        Some(flux),
        DomainBox::new(vec![0.5, -1.0], vec![2.0, 1.0]).unwrap(),
        1.0,
    )
    .unwrap();
    sys.negative_control = true;
    sys
}

pub fn bundled_systems() -> Vec<SystemSpec> {
    BUNDLED_NAMES.iter().map(|n| bundled(n).unwrap()).collect()
}

pub fn bundled(name: &str) -> Option<SystemSpec> {
    Some(match name {
        "burgers" => burgers(),
        "heat" => heat(),
        "advection" => advection(),
        "rotated2" => rotated2(),
        "rotated3" => rotated3(),
        "chromatography" => chromatography(),
        "psystem" => psystem(),
        _ => return None,
    })
}

/// Resolves a bundled name or a path to a custom system file.
pub fn resolve(name_or_path: &str) -> Result<SystemSpec> {
    if let Some(sys) = bundled(name_or_path) {
        return Ok(sys);
    }
    let path = Path::new(name_or_path);
    if path.exists() {
        return load_custom(path);
    }
    Err(LabError::Config(format!(
        "unknown system '{name_or_path}' (bundled: {})",
        BUNDLED_NAMES.join(", ")
    )))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomFile {
    name: String,
    dimension: usize,
    drift: Vec<Vec<toml::Spanned<String>>>,
    viscosity: Vec<Vec<toml::Spanned<String>>>,
    #[serde(default)]
    flux: Option<Vec<toml::Spanned<String>>>,
    domain: CustomDomain,
    c0: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |p| before.len() - p - 1) + 1;
    (line, col)
}

fn compile(src: &str, item: &toml::Spanned<String>, dim: usize) -> Result<Expr> {
    Expr::parse(item.get_ref(), dim).map_err(|e| {
        // The span starts at the opening quote.
        let (line, col) = line_col(src, item.span().start + 1);
        LabError::Parse {
            message: e.message,
            line,
            column: col + e.column - 1,
        }
    })
}

fn compile_matrix(src: &str, rows: &[Vec<toml::Spanned<String>>], n: usize, what: &str) -> Result<Vec<Expr>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(LabError::Config(format!("{what} must be a {n}x{n} array")));
    }
    rows.iter().flatten().map(|item| compile(src, item, n)).collect()
}

/// Parses a custom system from TOML source text.
///
/// ```toml
/// name = "diag"
/// dimension = 2
/// drift = [["u1", "0"], ["0", "2 + u2"]]
/// viscosity = [["1", "0"], ["0", "1"]]
/// flux = ["u1^2/2", "2*u2 + u2^2/2"]   # optional, must satisfy Df = drift
/// c0 = 1.0
/// [domain]
/// lower = [-0.4, -0.4]
/// upper = [0.4, 0.4]
/// ```
pub fn parse_custom(src: &str) -> Result<SystemSpec> {
    let file: CustomFile = toml::from_str(src).map_err(|e| {
        let (line, column) = e.span().map(|s| line_col(src, s.start)).unwrap_or((0, 0));
        LabError::Parse {
            message: e.message().to_string(),
            line,
            column,
        }
    })?;
    let n = file.dimension;
    if n == 0 {
        return Err(LabError::Config("dimension must be positive".into()));
    }
    let a = Arc::new(compile_matrix(src, &file.drift, n, "drift")?);
    let b = Arc::new(compile_matrix(src, &file.viscosity, n, "viscosity")?);
    let flux = match &file.flux {
        Some(items) => {
            if items.len() != n {
                return Err(LabError::Config(format!("flux must have {n} entries")));
            }
            let exprs: Vec<Expr> = items.iter().map(|i| compile(src, i, n)).collect::<Result<_>>()?;
            let exprs = Arc::new(exprs);
            Some(Arc::new(move |u: &[f64]| DVector::from_iterator(n, exprs.iter().map(|e| e.eval(u)))) as VectorFn)
        }
        None => None,
    };
    let drift: MatrixFn = Arc::new(move |u: &[f64]| DMatrix::from_row_iterator(n, n, a.iter().map(|e| e.eval(u))));
    let viscosity: MatrixFn = Arc::new(move |u: &[f64]| DMatrix::from_row_iterator(n, n, b.iter().map(|e| e.eval(u))));
    let domain = DomainBox::new(file.domain.lower, file.domain.upper)?;
    SystemSpec::new(file.name, n, drift, viscosity, flux, domain, file.c0)
}

pub fn load_custom(path: &Path) -> Result<SystemSpec> {
    let src = std::fs::read_to_string(path)?;
    parse_custom(&src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_covers_box_interior() {
        let b = DomainBox::new(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        let pts = b.lattice_at_least(100);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|p| b.contains(p)));
        assert!(pts.iter().all(|p| p[0] > 0.0 && p[0] < 1.0));
    }

    #[test]
    fn constant_frame_round_trip() {
        let sys = rotated2();
        let cf = sys.constant_frame.as_ref().unwrap();
        let u = [0.1, -0.2];
        let w = cf.to_characteristic(&u);
        let back = cf.to_state(&w);
        assert!((back[0] - u[0]).abs() < 1e-15 && (back[1] - u[1]).abs() < 1e-15);
    }

    #[test]
    fn rotated2_gap_on_unit_w_box() {
        // w in [-0.5, 0.5]^2 gives lambda_2 - lambda_1 = 2 + w2 - w1 >= 1.
        let sys = rotated2();
        let cf = sys.constant_frame.as_ref().unwrap();
        for i in 0..=10 {
            for j in 0..=10 {
                let w = [-0.5 + 0.1 * i as f64, -0.5 + 0.1 * j as f64];
                let gap = (cf.laws[1].speed)(w[1]) - (cf.laws[0].speed)(w[0]);
                assert!(gap >= 1.0 - 1e-12);
            }
        }
        // and the u-box maps into that w-box
        for u in sys.domain.lattice(9) {
            let w = cf.to_characteristic(&u);
            assert!(w.iter().all(|x| x.abs() <= 0.5));
        }
    }

    #[test]
    fn rotated3_box_maps_into_half_box() {
        let sys = rotated3();
        let cf = sys.constant_frame.as_ref().unwrap();
        for corner in 0..8 {
            let u: Vec<f64> = (0..3).map(|d| if corner >> d & 1 == 1 { 0.3 } else { -0.3 }).collect();
            let w = cf.to_characteristic(&u);
            assert!(w.iter().all(|x| x.abs() <= 0.5), "{w:?}");
        }
    }

    #[test]
    fn custom_system_parses() {
        let src = r#"
name = "diag"
dimension = 2
drift = [["u1", "0"], ["0", "2 + u2"]]
viscosity = [["1 + u1^2/4", "0"], ["0", "1"]]
flux = ["u1^2/2", "2*u2 + u2^2/2"]
c0 = 1.0
[domain]
lower = [-0.4, -0.4]
upper = [0.4, 0.4]
"#;
        let sys = parse_custom(src).unwrap();
        assert_eq!(sys.n, 2);
        let a = sys.drift(&[0.2, 0.1]);
        assert_eq!(a[(1, 1)], 2.1);
        assert_eq!(sys.viscosity(&[0.2, 0.0])[(0, 0)], 1.01);
        assert!(sys.has_flux());
    }

    #[test]
    fn custom_system_reports_line_and_column() {
        let src = "name = \"bad\"\ndimension = 1\ndrift = [[\"u1 + * 2\"]]\nviscosity = [[\"1\"]]\nc0 = 1.0\n[domain]\nlower = [0.0]\nupper = [1.0]\n";
        match parse_custom(src).unwrap_err() {
            LabError::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                // drift = [[" is 11 characters, '*' is the 6th expression char
                assert_eq!(column, 11 + 6);
            }
            e => panic!("unexpected {e:?}"),
        }
        let err = parse_custom("name = \ndimension = 1").unwrap_err();
        assert!(matches!(err, LabError::Parse { line: 1, .. }), "{err:?}");
    }
}
