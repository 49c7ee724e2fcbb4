//! Normal-mode analysis of the order-4 Dirichlet scheme on a half line.
//!
//! Laplace transforming the error equation in time gives, in the interior,
//! the recurrence `r xi_j = h^2 (D2 xi)_j` with
//! `r = h^2 (s^2 + alpha s) / (beta^2 s + gamma^2)`. Its solutions are built
//! from the roots of the characteristic quartic; the boundary closure plus
//! the penalty terms give a 4x4 system for the mode amplitudes.

use nalgebra::{Complex, Matrix4, Vector4};
use thiserror::Error;

use crate::sbp::{constant_coefficient_theta, SbpError, SbpOperatorSet, SecondDerivOp, Variant};

pub type C64 = Complex<f64>;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum NormalModeError {
    #[error(transparent)]
    Sbp(#[from] SbpError),
    #[error("the analysis covers the order-4 operator only, got order {0}")]
    UnsupportedOrder(usize),
    #[error("beta^2 s + gamma^2 vanishes")]
    SingularDenominator,
    #[error("closed-form root {kappa} has no matching companion root (distance {distance:e})")]
    RootMismatch { kappa: C64, distance: f64 },
    #[error("the boundary system is singular")]
    SingularSystem,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceParams {
    pub s: C64,
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl LaplaceParams {
    pub fn new(s: C64, h: f64, alpha: f64, beta: f64, gamma: f64) -> Self {
        LaplaceParams { s, h, alpha, beta, gamma }
    }

    /// `beta^2 s + gamma^2`.
    pub fn stiffness(&self) -> C64 {
        self.s * self.beta * self.beta + self.gamma * self.gamma
    }

    /// `s^2 + alpha s`.
    pub fn inertia(&self) -> C64 {
        self.s * self.s + self.s * self.alpha
    }

    pub fn r(&self) -> Result<C64, NormalModeError> {
        let k = self.stiffness();
        if k.norm() == 0.0 {
            return Err(NormalModeError::SingularDenominator);
        }
        Ok(self.inertia() * self.h * self.h / k)
    }
}

/// `kappa^4 - 16 kappa^3 + (30 + 12 r) kappa^2 - 16 kappa + 1`.
pub fn quartic(r: C64, k: C64) -> C64 {
    (((k - 16.0) * k + (r * 12.0 + 30.0)) * k - 16.0) * k + 1.0
}

fn quartic_derivative(r: C64, k: C64) -> C64 {
    ((k * 4.0 - 48.0) * k + (r * 24.0 + 60.0)) * k - 16.0
}

/// The two roots given in closed form:
/// `kappa1 = q + 4 - sqrt(8q - 3r + 24)`, `kappa2 = -q + 4 - sqrt(-8q - 3r + 24)`
/// with `q = sqrt(9 - 3r)`. Each expression is one member of a reciprocal
/// pair `(kappa, 1/kappa)`; the sign of the outer root is taken so that
/// `|kappa| <= 1`, which the principal branch alone does not guarantee once
/// `|r|` is large.
pub fn closed_form_roots(r: C64) -> (C64, C64) {
    let q = (C64::new(9.0, 0.0) - r * 3.0).sqrt();
    let inner = |q: C64| {
        let root = (q * 8.0 - r * 3.0 + 24.0).sqrt();
        let minus = q + 4.0 - root;
        let plus = q + 4.0 + root;
        if minus.norm() <= plus.norm() {
            minus
        } else {
            plus
        }
    };
    (inner(q), inner(-q))
}

/// All four roots as companion-matrix eigenvalues, polished by Newton steps.
pub fn companion_roots(r: C64) -> [C64; 4] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    // monic coefficients a0..a3
    let a = [one, C64::new(-16.0, 0.0), r * 12.0 + 30.0, C64::new(-16.0, 0.0)];
    let mut m = Matrix4::from_element(z);
    for i in 1..4 {
        m[(i, i - 1)] = one;
    }
    for i in 0..4 {
        m[(i, 3)] = -a[i];
    }
    let start: [C64; 4] = match m.try_schur(f64::EPSILON, 5000).and_then(|t| t.eigenvalues()) {
        Some(eig) => [eig[0], eig[1], eig[2], eig[3]],
        None => aberth(r),
    };
    let mut out = [z; 4];
    for (o, e) in out.iter_mut().zip(start.iter()) {
        let mut k = *e;
        for _ in 0..3 {
            let d = quartic_derivative(r, k);
            if d.norm() < 1e-8 {
                break;
            }
            let step = quartic(r, k) / d;
            if !step.is_finite() {
                break;
            }
            k -= step;
        }
        *o = k;
    }
    out
}

/// Simultaneous Aberth iteration, used when the Schur iteration stalls.
fn aberth(r: C64) -> [C64; 4] {
    let mut k: [C64; 4] = std::array::from_fn(|i| C64::from_polar(8.0, 0.4 + i as f64 * 1.57));
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..4 {
            let ratio = quartic(r, k[i]) / quartic_derivative(r, k[i]);
            let repel: C64 = (0..4).filter(|&j| j != i).map(|j| (k[i] - k[j]).inv()).sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repel);
            if step.is_finite() {
                k[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    k
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Roots {
    pub all: [C64; 4],
    /// The closed-form pair `(kappa1, kappa2)`.
    pub kappa1: C64,
    pub kappa2: C64,
    /// Largest `|p(kappa)|` over the closed-form pair.
    pub residual: f64,
}

/// Roots of the characteristic quartic, with the closed-form pair checked
/// against the companion roots.
pub fn characteristic_roots(params: &LaplaceParams) -> Result<Roots, NormalModeError> {
    let r = params.r()?;
    let all = companion_roots(r);
    let (kappa1, kappa2) = closed_form_roots(r);
    let residual = quartic(r, kappa1).norm().max(quartic(r, kappa2).norm());
    for kappa in [kappa1, kappa2] {
        let distance = all.iter().map(|k| (k - kappa).norm()).fold(f64::INFINITY, f64::min);
        // a double root is only resolved to about sqrt(eps) by the eigensolver
        if distance > 1e-6 * kappa.norm().max(1.0) {
            return Err(NormalModeError::RootMismatch { kappa, distance });
        }
    }
    Ok(Roots { all, kappa1, kappa2, residual })
}

/// Roots with modulus below one.
pub fn admissible(roots: &[C64; 4]) -> Vec<C64> {
    roots.iter().copied().filter(|k| k.norm() < 1.0).collect()
}

/// Boundary block of the order-4 operator at unit spacing with unit
/// coefficient: rows 0..4 of `M`, the boundary derivative `d` and the norm
/// weights.
#[derive(Clone, Debug, PartialEq)]
struct Closure {
    m: Vec<Vec<f64>>,
    d: Vec<f64>,
    omega: Vec<f64>,
}

fn closure() -> Result<Closure, NormalModeError> {
    let n = 20;
    let set = SbpOperatorSet::new(4, n, 1.0)?;
    let a = SecondDerivOp::new(&set, &vec![1.0; n], Variant::Standard)?.a().to_dense();
    Ok(Closure {
        m: a[..4].iter().map(|r| r[..8].to_vec()).collect(),
        d: set.d_left().to_dense(8),
        omega: (0..4).map(|i| set.norm_weight(i)).collect(),
    })
}

/// The 4x4 system for `(xi_0, xi_1, sigma_1, sigma_2)` where
/// `xi_j = sigma_1 kappa_1^(j-2) + sigma_2 kappa_2^(j-2)` for `j >= 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySystem {
    pub matrix: Matrix4<C64>,
    pub params: LaplaceParams,
    pub tau1: f64,
    pub tau3: f64,
    pub kappa1: C64,
    pub kappa2: C64,
}

impl BoundarySystem {
    pub fn det(&self) -> C64 {
        self.matrix.determinant()
    }

    /// `|det A| / ||A||_F^4`.
    pub fn normalized_det(&self) -> f64 {
        let norm = self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        self.det().norm() / norm.powi(4)
    }

    pub fn solve(&self, rhs: &Vector4<C64>) -> Result<Vector4<C64>, NormalModeError> {
        self.matrix.lu().solve(rhs).ok_or(NormalModeError::SingularSystem)
    }

    /// Grid function `xi_0 .. xi_{len-1}` from a solution vector.
    pub fn reconstruct(&self, sigma: &Vector4<C64>, len: usize) -> Vec<C64> {
        (0..len)
            .map(|j| match j {
                0 => sigma[0],
                1 => sigma[1],
                _ => sigma[2] * self.kappa1.powi(j as i32 - 2) + sigma[3] * self.kappa2.powi(j as i32 - 2),
            })
            .collect()
    }

    /// Rows 0..4 of the transformed scheme applied to a grid function,
    /// multiplied by `h^2`.
    pub fn apply_rows(&self, xi: &[C64]) -> Result<[C64; 4], NormalModeError> {
        let cl = closure()?;
        let p = &self.params;
        let h2 = p.h * p.h;
        let dxi: C64 = cl.d.iter().zip(xi).map(|(d, x)| x * *d).sum();
        let mut out = [C64::new(0.0, 0.0); 4];
        for (j, o) in out.iter_mut().enumerate() {
            let mxi: C64 = cl.m[j].iter().zip(xi).map(|(m, x)| x * *m).sum();
            let mut bracket = mxi + xi[0] * cl.d[j];
            if j == 0 {
                bracket += dxi;
            }
            *o = p.inertia() * h2 * xi[j] + p.stiffness() * bracket / cl.omega[j];
            if j == 0 {
                *o += (p.s * self.tau1 + self.tau3) * xi[0] / cl.omega[0];
            }
        }
        Ok(out)
    }
}

/// Assembles the boundary system from the first four rows of the scheme
/// with the Dirichlet penalty and transpose terms at the left end.
pub fn build_boundary_system(
    params: &LaplaceParams,
    tau1: f64,
    tau3: f64,
    order: usize,
) -> Result<BoundarySystem, NormalModeError> {
    if order != 4 {
        return Err(NormalModeError::UnsupportedOrder(order));
    }
    let roots = characteristic_roots(params)?;
    let mut sys = BoundarySystem {
        matrix: Matrix4::zeros(),
        params: *params,
        tau1,
        tau3,
        kappa1: roots.kappa1,
        kappa2: roots.kappa2,
    };
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let basis = [
        [one, z, z, z],
        [z, one, z, z],
        [z, z, one, z],
        [z, z, z, one],
    ];
    for (col, b) in basis.iter().enumerate() {
        let xi = sys.reconstruct(&Vector4::new(b[0], b[1], b[2], b[3]), 8);
        let rows = sys.apply_rows(&xi)?;
        for (row, v) in rows.iter().enumerate() {
            sys.matrix[(row, col)] = *v;
        }
    }
    Ok(sys)
}

/// The sharp constant-coefficient borrowing constant of the order-4 operator,
/// which locates the stability limit of the penalties.
pub fn sharp_theta() -> Result<f64, NormalModeError> {
    Ok(constant_coefficient_theta(4, 41)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub tau3: f64,
    pub tau1: f64,
    pub det_norm: f64,
    pub singular: bool,
}

/// Normalized-determinant threshold below which `A(0)` counts as singular.
pub const SINGULAR: f64 = 1e-10;

/// `A(0)` at each `(tau3, tau1)` pair.
pub fn determinant_condition_scan(
    alpha: f64,
    beta: f64,
    gamma: f64,
    points: &[(f64, f64)],
) -> Result<Vec<ScanPoint>, NormalModeError> {
    let params = LaplaceParams::new(C64::new(0.0, 0.0), 1.0, alpha, beta, gamma);
    points
        .iter()
        .map(|&(tau3, tau1)| {
            let det_norm = build_boundary_system(&params, tau1, tau3, 4)?.normalized_det();
            Ok(ScanPoint { tau3, tau1, det_norm, singular: det_norm < SINGULAR })
        })
        .collect()
}

/// Scan at the penalty limits `gamma^2 / theta`, `beta^2 / theta` scaled by
/// each factor.
pub fn limit_scan(alpha: f64, beta: f64, gamma: f64, factors: &[f64]) -> Result<Vec<ScanPoint>, NormalModeError> {
    let theta = sharp_theta()?;
    let pts: Vec<(f64, f64)> =
        factors.iter().map(|f| (f * gamma * gamma / theta, f * beta * beta / theta)).collect();
    determinant_condition_scan(alpha, beta, gamma, &pts)
}

/// The `tau3` at which `det A(0)` vanishes. The determinant is affine in
/// `tau3`, so two evaluations locate the zero.
pub fn critical_tau3(alpha: f64, beta: f64, gamma: f64) -> Result<f64, NormalModeError> {
    let params = LaplaceParams::new(C64::new(0.0, 0.0), 1.0, alpha, beta, gamma);
    let d0 = build_boundary_system(&params, 0.0, 0.0, 4)?.det();
    let d1 = build_boundary_system(&params, 0.0, 1.0, 4)?.det();
    Ok((-d0 / (d1 - d0)).re)
}

/// `h / (1 - |kappa2|^2)`, bounded in `h` when `1 - |kappa2|^2 >= c h`.
pub fn gap_product(params: &LaplaceParams) -> Result<f64, NormalModeError> {
    let k2 = characteristic_roots(params)?.kappa2;
    Ok(params.h / (1.0 - k2.norm_sqr()))
}
