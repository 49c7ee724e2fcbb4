//! Self-checks of an operator set: the summation-by-parts identities,
//! polynomial exactness, the structure of `A^(b)` and the borrowing bound.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{family, SbpError, SbpOperatorSet, SecondDerivOp, Variant};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn below(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Check { name, residual, tolerance, passed: residual <= tolerance }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub order: usize,
    pub n: usize,
    pub theta: f64,
    pub m: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Number of random vector pairs per identity check.
pub const PAIRS: usize = 50;

/// Runs every check on the unit-interval operator set with `n` points.
pub fn verify_order(order: usize, n: usize, seed: u64) -> Result<VerifyReport, SbpError> {
    let set = SbpOperatorSet::new(order, n, 1.0 / (n - 1) as f64)?;
    verify_set(&set, seed)
}

/// Runs every check on a given operator set, taken to live on `[0, 1]`.
pub fn verify_set(set: &SbpOperatorSet, seed: u64) -> Result<VerifyReport, SbpError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = set.order();
    let n = set.n();
    let mut checks = vec![d1_identity(set, &mut rng)?];
    for variant in [Variant::Standard, Variant::FullyCompatible] {
        checks.push(d2_identity(set, variant, &mut rng)?);
    }
    checks.extend(d1_exactness(set)?);
    checks.push(d2_exactness(set)?);
    checks.extend(a_structure(set, &mut rng)?);
    if order <= 4 {
        checks.push(remainder_psd(set, &mut rng)?);
    }
    checks.push(inverse_inequality(set, Variant::Standard, &mut rng)?);
    if order <= 4 {
        checks.push(inverse_inequality(set, Variant::FullyCompatible, &mut rng)?);
    }
    Ok(VerifyReport { order, n, theta: set.theta(), m: set.m(), checks })
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn h_inner(set: &SbpOperatorSet, u: &[f64], v: &[f64]) -> f64 {
    (0..set.n()).map(|i| set.norm_weight(i) * u[i] * v[i]).sum()
}

fn nodes(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn d1_identity(set: &SbpOperatorSet, rng: &mut ChaCha8Rng) -> Result<Check, SbpError> {
    let n = set.n();
    let (mut du, mut dv) = (vec![0.0; n], vec![0.0; n]);
    let mut worst = 0.0f64;
    for _ in 0..PAIRS {
        let u = random_vec(rng, n, -1.0, 1.0);
        let v = random_vec(rng, n, -1.0, 1.0);
        set.apply_d1(&u, &mut du)?;
        set.apply_d1(&v, &mut dv)?;
        let r = h_inner(set, &u, &dv) + h_inner(set, &du, &v) - (u[n - 1] * v[n - 1] - u[0] * v[0]);
        worst = worst.max(r.abs() / (norm(&u) * norm(&v)));
    }
    Ok(Check::below("first-derivative SBP identity", worst, 1e-12))
}

fn d2_identity(set: &SbpOperatorSet, variant: Variant, rng: &mut ChaCha8Rng) -> Result<Check, SbpError> {
    let n = set.n();
    let mut worst = 0.0f64;
    let (mut d2v, mut av) = (vec![0.0; n], vec![0.0; n]);
    for _ in 0..PAIRS {
        let b = random_vec(rng, n, 0.1, 2.0);
        let u = random_vec(rng, n, -1.0, 1.0);
        let v = random_vec(rng, n, -1.0, 1.0);
        let op = SecondDerivOp::new(set, &b, variant)?;
        op.apply(&v, &mut d2v)?;
        op.a().apply(&v, &mut av);
        let (l, r) = op.boundary_rows();
        let lhs = h_inner(set, &u, &d2v);
        let uav = dot(&u, &av);
        let rhs = -uav - b[0] * u[0] * l.dot(&v) + b[n - 1] * u[n - 1] * r.dot(&v);
        let scale = norm(&u) * norm(&v) * (norm(&av) / norm(&v) + 1.0);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    let name = match variant {
        Variant::Standard => "second-derivative SBP identity",
        Variant::FullyCompatible => "second-derivative SBP identity (fully compatible)",
    };
    Ok(Check::below(name, worst, 1e-12))
}

fn monomial(c: usize, x: f64) -> f64 {
    x.powi(c as i32)
}

fn dmonomial(c: usize, x: f64) -> f64 {
    if c == 0 {
        0.0
    } else {
        c as f64 * x.powi(c as i32 - 1)
    }
}

fn d1_exactness(set: &SbpOperatorSet) -> Result<[Check; 3], SbpError> {
    let n = set.n();
    let p = set.order() / 2;
    let k = set.closure_width();
    let x = nodes(n);
    let mut dv = vec![0.0; n];
    let (mut interior, mut boundary, mut ends) = (0.0f64, 0.0f64, 0.0f64);
    for c in 0..=2 * p {
        let v: Vec<f64> = x.iter().map(|&t| monomial(c, t)).collect();
        set.apply_d1(&v, &mut dv)?;
        for i in 0..n {
            let e = (dv[i] - dmonomial(c, x[i])).abs();
            if i < k || i >= n - k {
                if c <= p {
                    boundary = boundary.max(e);
                }
            } else {
                interior = interior.max(e);
            }
        }
        if c <= p + 1 {
            ends = ends.max((set.d_left().dot(&v) - dmonomial(c, 0.0)).abs());
            ends = ends.max((set.d_right().dot(&v) - dmonomial(c, 1.0)).abs());
        }
    }
    Ok([
        Check::below("first derivative interior exact to degree 2p", interior, 1e-8),
        Check::below("first derivative closure exact to degree p", boundary, 1e-8),
        Check::below("boundary derivative exact to degree p+1", ends, 1e-8),
    ])
}

fn d2_exactness(set: &SbpOperatorSet) -> Result<Check, SbpError> {
    let n = set.n();
    let p = set.order() / 2;
    let closure = family(set.order())?.block();
    let x = nodes(n);
    let mut out = vec![0.0; n];
    let mut worst = 0.0f64;
    // b = x^a, v = x^c: (b v')' = c (a + c - 1) x^(a + c - 2)
    for a in 0..=2 * p + 1 {
        for c in 0..=2 * p + 1 - a {
            let b: Vec<f64> = x.iter().map(|&t| monomial(a, t)).collect();
            let v: Vec<f64> = x.iter().map(|&t| monomial(c, t)).collect();
            SecondDerivOp::new(set, &b, Variant::Standard)?.apply(&v, &mut out)?;
            for i in 0..n {
                if (i < closure || i >= n - closure) && a + c > p + 1 {
                    continue;
                }
                let exact =
                    if a + c < 2 || c == 0 { 0.0 } else { (c * (a + c - 1)) as f64 * x[i].powi((a + c) as i32 - 2) };
                worst = worst.max((out[i] - exact).abs());
            }
        }
    }
    Ok(Check::below("second derivative polynomial exactness", worst, 1e-6))
}

fn eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let m = DMatrix::from_fn(a.len(), a.len(), |i, j| a[i][j]);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().cloned().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

fn a_structure(set: &SbpOperatorSet, rng: &mut ChaCha8Rng) -> Result<[Check; 3], SbpError> {
    let n = set.n();
    let b = random_vec(rng, n, 0.05, 3.0);
    let a = SecondDerivOp::new(set, &b, Variant::Standard)?.a().to_dense();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let asym = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).fold(0.0f64, |m, (i, j)| m.max((a[i][j] - a[j][i]).abs()));
    let ev = eigenvalues(&a);
    let top = ev[n - 1].abs();
    Ok([
        Check::below("A(b) symmetric", asym / scale, 1e-14),
        Check::below("A(b) positive semidefinite with a null constant", ev[0].abs() / top, 1e-12),
        // reported as the reciprocal so that a second zero eigenvalue fails
        Check::below("A(b) has exactly one zero eigenvalue", top / ev[1].max(f64::MIN_POSITIVE) * 1e-8, 1.0),
    ])
}

fn remainder_psd(set: &SbpOperatorSet, rng: &mut ChaCha8Rng) -> Result<Check, SbpError> {
    let n = set.n();
    let d1 = set.dense_d1();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let b = random_vec(rng, n, 0.0, 2.0);
        let a = SecondDerivOp::new(set, &b, Variant::Standard)?.a().to_dense();
        let r: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| a[i][j] - (0..n).map(|k| d1[k][i] * set.norm_weight(k) * b[k] * d1[k][j]).sum::<f64>())
                    .collect()
            })
            .collect();
        let ev = eigenvalues(&r);
        worst = worst.max(-ev[0] / ev[n - 1].abs());
    }
    Ok(Check::below("A(b) minus D1'HBD1 positive semidefinite", worst.max(0.0), 1e-10))
}

fn inverse_inequality(set: &SbpOperatorSet, variant: Variant, rng: &mut ChaCha8Rng) -> Result<Check, SbpError> {
    let n = set.n();
    let h = set.h();
    let mut av = vec![0.0; n];
    let mut worst = 0.0f64;
    for _ in 0..PAIRS {
        let b = random_vec(rng, n, 0.05, 2.0);
        let v = random_vec(rng, n, -1.0, 1.0);
        let op = SecondDerivOp::new(set, &b, variant)?;
        op.a().apply(&v, &mut av);
        let vav = dot(&v, &av);
        let (l, r) = op.boundary_rows();
        let bound = match variant {
            Variant::Standard => {
                let (bl, br) = op.borrowing_minima();
                h * set.theta() * (bl * l.dot(&v).powi(2) + br * r.dot(&v).powi(2))
            }
            Variant::FullyCompatible => {
                h * set.omega1() * (b[0] * l.dot(&v).powi(2) + b[n - 1] * r.dot(&v).powi(2))
            }
        };
        worst = worst.max((bound - vav) / (vav.abs() + bound.abs() + 1.0));
    }
    let name = match variant {
        Variant::Standard => "borrowing inequality",
        Variant::FullyCompatible => "borrowing inequality (fully compatible)",
    };
    Ok(Check::below(name, worst.max(0.0), 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_orders_pass() {
        for order in [2, 4, 6] {
            let report = verify_order(order, 41, 1).unwrap();
            for c in &report.checks {
                assert!(c.passed, "order {order}: {c:?}");
            }
        }
    }

    #[test]
    fn perturbed_coefficient_is_detected() {
        let set = SbpOperatorSet::new(4, 41, 0.025).unwrap().with_perturbed_d1(1, 2, 1e-6);
        let report = verify_set(&set, 1).unwrap();
        let identity = report.checks.iter().find(|c| c.name == "first-derivative SBP identity").unwrap();
        assert!(!identity.passed, "{identity:?}");
        assert!(!report.passed());
    }
}
