use super::*;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDERS: [usize; 3] = [2, 4, 6];

fn unit_set(order: usize, n: usize) -> SbpOperatorSet {
    SbpOperatorSet::new(order, n, 1.0 / (n - 1) as f64).unwrap()
}

fn nodes(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn h_inner(set: &SbpOperatorSet, u: &[f64], v: &[f64]) -> f64 {
    (0..set.n()).map(|i| set.norm_weight(i) * u[i] * v[i]).sum()
}

fn mat(d: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(d.len(), d.len(), |i, j| d[i][j])
}

fn sorted_eigenvalues(d: &[Vec<f64>]) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(mat(d)).eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

#[test]
fn order2_coefficients() {
    let n = 9;
    let set = unit_set(2, n);
    let h = set.h();
    assert_eq!(set.d1_row(0).coeffs, vec![-1.0 / h, 1.0 / h]);
    assert_eq!(set.d1_row(4).coeffs, vec![-0.5 / h, 0.0, 0.5 / h]);
    assert_eq!(set.norm_weight(0), 0.5 * h);
    assert_eq!(set.norm_weight(4), h);
    assert_eq!(set.norm_weight(n - 1), 0.5 * h);
    let op = SecondDerivOp::new(&set, &vec![1.0; n], Variant::Standard).unwrap();
    let d = op.dense();
    for i in 1..n - 1 {
        for j in 0..n {
            let expected = match j as isize - i as isize {
                0 => -2.0,
                -1 | 1 => 1.0,
                _ => 0.0,
            };
            assert!((d[i][j] * h * h - expected).abs() < 1e-12, "row {i} col {j}");
        }
    }
}

#[test]
fn order4_constant_coefficient_block() {
    // the classical constant-coefficient fourth-order boundary closure
    let expected = [
        [2.0, -5.0, 4.0, -1.0, 0.0, 0.0],
        [1.0, -2.0, 1.0, 0.0, 0.0, 0.0],
        [-4.0 / 43.0, 59.0 / 43.0, -110.0 / 43.0, 59.0 / 43.0, -4.0 / 43.0, 0.0],
        [-1.0 / 49.0, 0.0, 59.0 / 49.0, -118.0 / 49.0, 64.0 / 49.0, -4.0 / 49.0],
    ];
    let n = 20;
    let set = SbpOperatorSet::new(4, n, 1.0).unwrap();
    let d = SecondDerivOp::new(&set, &vec![1.0; n], Variant::Standard).unwrap().dense();
    for (i, row) in expected.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            assert!((d[i][j] - e).abs() < 1e-13, "({i},{j}) {} vs {e}", d[i][j]);
        }
        assert!(d[i][6..].iter().all(|x| x.abs() < 1e-13));
    }
    let interior = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
    for i in 4..n - 4 {
        for (k, e) in interior.iter().enumerate() {
            assert!((d[i][i + k - 2] - e).abs() < 1e-13);
        }
    }
}

#[test]
fn rejects_bad_input() {
    assert_eq!(SbpOperatorSet::new(8, 40, 0.1).unwrap_err(), SbpError::UnsupportedOrder(8));
    assert!(matches!(
        SbpOperatorSet::new(4, 10, 0.1),
        Err(SbpError::TooFewPoints { order: 4, n: 10, min: 16 })
    ));
    assert!(matches!(SbpOperatorSet::new(2, 10, 0.0), Err(SbpError::BadSpacing(_))));
    let set = unit_set(2, 10);
    let mut b = vec![1.0; 10];
    b[3] = -0.5;
    assert!(matches!(
        SecondDerivOp::new(&set, &b, Variant::Standard),
        Err(SbpError::NegativeCoefficient { index: 3, .. })
    ));
    assert!(matches!(
        SecondDerivOp::new(&set, &[1.0; 9], Variant::Standard),
        Err(SbpError::LengthMismatch { expected: 10, got: 9 })
    ));
    let mut out = vec![0.0; 10];
    assert!(set.apply_d1(&[0.0; 11], &mut out).is_err());
}

#[test]
fn minimum_points() {
    assert_eq!(min_points(2).unwrap(), 4);
    assert_eq!(min_points(4).unwrap(), 16);
    assert_eq!(min_points(6).unwrap(), 18);
    for order in ORDERS {
        let n = min_points(order).unwrap();
        assert!(SbpOperatorSet::new(order, n, 0.1).is_ok());
        assert!(SbpOperatorSet::new(order, n - 1, 0.1).is_err());
    }
}

#[test]
fn borrowing_order4() {
    let (theta, m) = compute_borrowing(4).unwrap();
    assert_eq!(m, 4);
    assert!((theta - 0.2505765857).abs() < 1e-6, "theta = {theta}");
}

#[test]
fn borrowing_matches_pseudo_inverse_formula() {
    // largest theta with S - theta d d^T >= 0 equals 1 / (d^T S^+ d)
    for order in ORDERS {
        let fam = family(order).unwrap();
        let (s, d) = borrowing_window(fam, fam.m);
        let k = s.len() - 1;
        let sr = DMatrix::from_fn(k, k, |i, j| s[i][j]);
        let dr = DVector::from_fn(k, |i, _| d[i]);
        let x = sr.lu().solve(&dr).unwrap();
        let closed = 1.0 / dr.dot(&x);
        let (theta, _) = compute_borrowing(order).unwrap();
        assert!((theta - closed).abs() < 1e-9, "order {order}: {theta} vs {closed}");
    }
}

#[test]
fn borrowing_known_values() {
    assert!((compute_borrowing(2).unwrap().0 - 4.0 / 11.0).abs() < 1e-9);
    assert_eq!(compute_borrowing(2).unwrap().1, 2);
    assert_eq!(compute_borrowing(6).unwrap().1, 6);
    assert!(compute_borrowing(3).is_err());
}

#[test]
fn constant_coefficient_theta_is_resolution_independent() {
    let a = constant_coefficient_theta(4, 41).unwrap();
    let b = constant_coefficient_theta(4, 81).unwrap();
    assert!((a - b).abs() < 1e-7);
    assert!((a - 0.2508560249).abs() < 1e-8, "{a}");
    for order in ORDERS {
        let sharp = constant_coefficient_theta(order, 61).unwrap();
        assert!(sharp >= compute_borrowing(order).unwrap().0 - 1e-10);
    }
}

#[test]
fn theta_invariant_under_coefficient_scaling() {
    // the borrowed remainder with b = c stays PSD at exactly the same theta
    let n = 41;
    for order in ORDERS {
        let set = unit_set(order, n);
        for c in [0.01, 1.0, 37.0] {
            let op = SecondDerivOp::new(&set, &vec![c; n], Variant::Standard).unwrap();
            let ev = sorted_eigenvalues(&op.dense_a_tilde(&set));
            let scale = ev.last().unwrap().abs();
            assert!(ev[0] > -1e-11 * scale, "order {order} c {c}: {}", ev[0]);
        }
    }
}

#[test]
fn d1_sbp_identity_on_coordinates() {
    for order in ORDERS {
        let n = 41;
        let set = unit_set(order, n);
        let x = nodes(n);
        let mut dx = vec![0.0; n];
        set.apply_d1(&x, &mut dx).unwrap();
        let lhs = 2.0 * h_inner(&set, &x, &dx);
        assert!((lhs - 1.0).abs() < 1e-13, "order {order}: {lhs}");
    }
}

#[test]
fn operators_annihilate_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for order in ORDERS {
        let n = 30;
        let set = unit_set(order, n);
        let ones = vec![1.0; n];
        let mut out = vec![0.0; n];
        set.apply_d1(&ones, &mut out).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-11));
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
        for variant in [Variant::Standard, Variant::FullyCompatible] {
            let op = SecondDerivOp::new(&set, &b, variant).unwrap();
            op.apply(&ones, &mut out).unwrap();
            assert!(out.iter().all(|v| v.abs() < 1e-9), "order {order}");
            op.a().apply(&ones, &mut out);
            assert!(out.iter().all(|v| v.abs() < 1e-10));
        }
    }
}

fn poly(c: usize, x: f64) -> f64 {
    x.powi(c as i32)
}

fn dpoly(c: usize, x: f64) -> f64 {
    if c == 0 {
        0.0
    } else {
        c as f64 * x.powi(c as i32 - 1)
    }
}

#[test]
fn d1_polynomial_exactness() {
    for order in ORDERS {
        let p = order / 2;
        let n = 40;
        let set = unit_set(order, n);
        let x = nodes(n);
        let k = set.closure_width();
        for c in 0..=order {
            let v: Vec<f64> = x.iter().map(|&t| poly(c, t)).collect();
            let mut dv = vec![0.0; n];
            set.apply_d1(&v, &mut dv).unwrap();
            for i in 0..n {
                let boundary = i < k || i >= n - k;
                if boundary && c > p {
                    continue;
                }
                let e = dpoly(c, x[i]);
                assert!((dv[i] - e).abs() < 1e-9, "order {order} degree {c} row {i}");
            }
        }
        for c in 0..=p + 1 {
            let v: Vec<f64> = x.iter().map(|&t| poly(c, t)).collect();
            assert!((set.d_left().dot(&v) - dpoly(c, 0.0)).abs() < 1e-9);
            assert!((set.d_right().dot(&v) - dpoly(c, 1.0)).abs() < 1e-9);
        }
        let v: Vec<f64> = x.iter().map(|&t| poly(p + 2, t)).collect();
        assert!((set.d_left().dot(&v) - dpoly(p + 2, 0.0)).abs() > 1e-6);
    }
}

#[test]
fn sixth_order_d1_cubic() {
    let n = 50;
    let set = SbpOperatorSet::new(6, n, 1.0 / 49.0).unwrap();
    let x = nodes(n);
    let v: Vec<f64> = x.iter().map(|t| t * t * t).collect();
    let mut dv = vec![0.0; n];
    set.apply_d1(&v, &mut dv).unwrap();
    for i in 6..n - 6 {
        assert!((dv[i] - 3.0 * x[i] * x[i]).abs() < 1e-10);
    }
}

#[test]
fn d2_polynomial_exactness() {
    // b = x^a and v = x^c give (b v')' exactly when a + c is small enough
    for order in ORDERS {
        let p = order / 2;
        let n = 41;
        let set = unit_set(order, n);
        let x = nodes(n);
        let closure = family(order).unwrap().block();
        for a in 0..=2 * p + 1 {
            for c in 0..=2 * p + 1 - a {
                let b: Vec<f64> = x.iter().map(|&t| poly(a, t)).collect();
                let v: Vec<f64> = x.iter().map(|&t| poly(c, t)).collect();
                let op = SecondDerivOp::new(&set, &b, Variant::Standard).unwrap();
                let mut out = vec![0.0; n];
                op.apply(&v, &mut out).unwrap();
                let exact = |t: f64| {
                    if a + c < 2 || c == 0 {
                        0.0
                    } else {
                        (c * (a + c - 1)) as f64 * t.powi((a + c) as i32 - 2)
                    }
                };
                for i in 0..n {
                    let boundary = i < closure || i >= n - closure;
                    if boundary && a + c > p + 1 {
                        continue;
                    }
                    assert!(
                        (out[i] - exact(x[i])).abs() < 1e-7,
                        "order {order} a {a} c {c} row {i}: {} vs {}",
                        out[i],
                        exact(x[i])
                    );
                }
            }
        }
    }
}

#[test]
fn a_spectrum_has_single_zero_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 41;
    for order in ORDERS {
        let set = unit_set(order, n);
        let coefficient_sets = [vec![1.0; n], (0..n).map(|_| rng.gen_range(0.05..3.0)).collect()];
        for b in coefficient_sets {
            let op = SecondDerivOp::new(&set, &b, Variant::Standard).unwrap();
            let a = op.a().to_dense();
            for i in 0..n {
                for j in 0..n {
                    assert!((a[i][j] - a[j][i]).abs() < 1e-12);
                }
            }
            let ev = sorted_eigenvalues(&a);
            let norm = ev.last().unwrap().abs();
            assert!(ev[0].abs() < 1e-12 * norm, "order {order}: {}", ev[0]);
            assert!(ev[1] > 1e-8 * norm, "order {order}: {}", ev[1]);
        }
    }
}

#[test]
fn compatible_remainder_is_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 30;
    for order in [2, 4] {
        let set = unit_set(order, n);
        let d1 = set.dense_d1();
        for _ in 0..5 {
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
            let op = SecondDerivOp::new(&set, &b, Variant::Standard).unwrap();
            let a = op.a().to_dense();
            let r: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            a[i][j]
                                - (0..n).map(|k| d1[k][i] * set.norm_weight(k) * b[k] * d1[k][j]).sum::<f64>()
                        })
                        .collect()
                })
                .collect();
            let ev = sorted_eigenvalues(&r);
            assert!(ev[0] > -1e-10 * ev.last().unwrap().abs(), "order {order}: {}", ev[0]);
        }
    }
}

#[test]
fn dense_oracle_matches_matrix_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for order in ORDERS {
        let n = min_points(order).unwrap().max(11);
        let set = unit_set(order, n);
        let v = random_vec(&mut rng, n);
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let d1 = set.dense_d1();
        let mut out = vec![0.0; n];
        set.apply_d1(&v, &mut out).unwrap();
        for i in 0..n {
            let dense: f64 = (0..n).map(|j| d1[i][j] * v[j]).sum();
            assert!((dense - out[i]).abs() < 1e-13 * vnorm * (n * n) as f64);
        }
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
        for variant in [Variant::Standard, Variant::FullyCompatible] {
            let op = SecondDerivOp::new(&set, &b, variant).unwrap();
            let d2 = op.dense();
            op.apply(&v, &mut out).unwrap();
            let scale = vnorm * (n * n) as f64;
            for i in 0..n {
                let dense: f64 = (0..n).map(|j| d2[i][j] * v[j]).sum();
                assert!((dense - out[i]).abs() < 1e-13 * scale);
            }
        }
    }
}

#[test]
fn fully_compatible_uses_d1_rows() {
    let set = unit_set(4, 20);
    let (l, r) = set.boundary_rows(Variant::FullyCompatible);
    assert_eq!(l, set.d1_row(0));
    assert_eq!(r, set.d1_row(19));
    let (l, _) = set.boundary_rows(Variant::Standard);
    assert_eq!(l, set.d_left());
}

fn d2_identity_residual(set: &SbpOperatorSet, b: &[f64], u: &[f64], v: &[f64], variant: Variant) -> (f64, f64) {
    let n = set.n();
    let op = SecondDerivOp::new(set, b, variant).unwrap();
    let mut d2v = vec![0.0; n];
    op.apply(v, &mut d2v).unwrap();
    let mut av = vec![0.0; n];
    op.a().apply(v, &mut av);
    let (l, r) = set.boundary_rows(variant);
    let lhs = h_inner(set, u, &d2v);
    let uav: f64 = u.iter().zip(&av).map(|(a, b)| a * b).sum();
    let rhs = -uav - b[0] * u[0] * l.dot(v) + b[n - 1] * u[n - 1] * r.dot(v);
    let scale = uav.abs() + lhs.abs() + 1.0;
    (lhs - rhs, scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d1_sbp_identity(order_idx in 0usize..3, extra in 0usize..30, seed in any::<u64>()) {
        let order = ORDERS[order_idx];
        let n = min_points(order).unwrap() + extra;
        let set = unit_set(order, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_vec(&mut rng, n);
        let v = random_vec(&mut rng, n);
        let (mut du, mut dv) = (vec![0.0; n], vec![0.0; n]);
        set.apply_d1(&u, &mut du).unwrap();
        set.apply_d1(&v, &mut dv).unwrap();
        let res = h_inner(&set, &u, &dv) + h_inner(&set, &du, &v) - (u[n - 1] * v[n - 1] - u[0] * v[0]);
        let scale = u.iter().map(|x| x * x).sum::<f64>().sqrt() * v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(res.abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn d2_sbp_identity(order_idx in 0usize..3, extra in 0usize..30, seed in any::<u64>(), fc in any::<bool>()) {
        let order = ORDERS[order_idx];
        let n = min_points(order).unwrap() + extra;
        let set = unit_set(order, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..2.0)).collect();
        let u = random_vec(&mut rng, n);
        let v = random_vec(&mut rng, n);
        let variant = if fc { Variant::FullyCompatible } else { Variant::Standard };
        let (res, scale) = d2_identity_residual(&set, &b, &u, &v, variant);
        prop_assert!(res.abs() <= 1e-12 * scale, "residual {res} scale {scale}");
    }

    #[test]
    fn inverse_inequality(order_idx in 0usize..3, extra in 0usize..20, seed in any::<u64>()) {
        let order = ORDERS[order_idx];
        let n = min_points(order).unwrap() + extra;
        let set = unit_set(order, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let v = random_vec(&mut rng, n);
        let op = SecondDerivOp::new(&set, &b, Variant::Standard).unwrap();
        let mut av = vec![0.0; n];
        op.a().apply(&v, &mut av);
        let vav: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum();
        let (bl, br) = op.borrowing_minima();
        let bound = set.h() * set.theta()
            * (bl * set.d_left().dot(&v).powi(2) + br * set.d_right().dot(&v).powi(2));
        prop_assert!(vav >= bound - 1e-10 * vav.abs().max(1.0), "{vav} < {bound}");
        if order != 6 {
            let fc = set.h() * set.omega1()
                * (b[0] * set.dhat_left().dot(&v).powi(2) + b[n - 1] * set.dhat_right().dot(&v).powi(2));
            prop_assert!(vav >= fc - 1e-10 * vav.abs().max(1.0), "{vav} < {fc}");
        }
    }

    #[test]
    fn a_tilde_is_psd(order_idx in 0usize..3, seed in any::<u64>()) {
        let order = ORDERS[order_idx];
        let n = min_points(order).unwrap() + 7;
        let set = unit_set(order, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let op = SecondDerivOp::new(&set, &b, Variant::Standard).unwrap();
        let ev = sorted_eigenvalues(&op.dense_a_tilde(&set));
        prop_assert!(ev[0] >= -1e-10 * ev.last().unwrap().abs().max(1.0));
    }
}
