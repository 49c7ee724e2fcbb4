use super::*;
use crate::model::{BoundaryCondition, Grid1D, Grid2D, MaterialFields};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn e(s: &str) -> Expr {
    Expr::parse(s).unwrap()
}

fn fields(alpha: &str, beta: &str, gamma: &str) -> MaterialFields {
    MaterialFields { alpha: e(alpha), beta: e(beta), gamma: e(gamma) }
}

fn problem(grid: Grid, f: MaterialFields, kind: BcKind, variant: Variant, safety: f64) -> Problem {
    Problem {
        grid,
        fields: f,
        bc: BoundaryCondition::homogeneous(kind),
        forcing: None,
        initial_value: e("0"),
        initial_rate: e("0"),
        final_time: 1.0,
        variant,
        penalty_safety: safety,
    }
}

fn line(a: f64, b: f64, n: usize) -> Grid {
    Grid::One(Grid1D::new(a, b, n).unwrap())
}

fn square(n: usize) -> Grid {
    Grid::Two(Grid2D::new(Grid1D::new(0.0, 1.0, n).unwrap(), Grid1D::new(0.0, 1.0, n).unwrap()))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Max difference between the matrix-free and dense right-hand sides,
/// relative to the size of the dense terms.
fn oracle_gap(sd: &Semidiscretization, rng: &mut ChaCha8Rng) -> f64 {
    let n = sd.len();
    let (kv, kw) = sd.dense_operator().unwrap();
    let v = random_vec(rng, n);
    let w = random_vec(rng, n);
    let f = random_vec(rng, n);
    let state = State { v: v.clone(), w: w.clone(), t: 0.3 };
    let got = sd.rhs_apply(&state, &f).unwrap();
    let a = matvec(&kv, &v);
    let b = matvec(&kw, &w);
    let scale = max_abs(&a).max(max_abs(&b)).max(1.0);
    let mut gap: f64 = 0.0;
    for k in 0..n {
        gap = gap.max((got[k] - (f[k] + a[k] + b[k])).abs());
    }
    gap / scale
}

#[test]
fn zero_state_returns_forcing() {
    for grid in [line(0.0, 1.0, 21), square(9)] {
        let mut p = problem(grid, fields("1", "0.1", "0.2"), BcKind::Dirichlet, Variant::Standard, 2.0);
        p.forcing = Some(e("sin(3*x)*exp(-t) + y*t"));
        let sd = Semidiscretization::assemble(&p, 2).unwrap();
        let n = sd.len();
        let zero = vec![0.0; n];
        let mut g = vec![0.0; n];
        sd.rhs(0.7, &zero, &zero, &mut g).unwrap();
        let pts = sd.grid().points();
        for (k, &(x, y)) in pts.iter().enumerate() {
            let f = (3.0 * x).sin() * (-0.7f64).exp() + y * 0.7;
            assert!((g[k] - f).abs() < 1e-14, "{k}: {} vs {f}", g[k]);
        }
    }
}

#[test]
fn separable_and_general_forcing_agree() {
    let grid = line(0.0, 1.0, 17);
    let mut p = problem(grid, fields("0", "0", "1"), BcKind::Neumann, Variant::Standard, 2.0);
    p.forcing = Some(e("exp(-2*t)*cos(x) + t^2*x"));
    let sd = Semidiscretization::assemble(&p, 4).unwrap();
    assert!(matches!(sd.forcing, Forcing::Separable { .. }));
    let general = Forcing::General { expr: p.forcing.clone().unwrap(), points: sd.grid().points() };
    let (mut a, mut b) = (vec![0.0; 17], vec![0.0; 17]);
    sd.forcing(0.4, &mut a).unwrap();
    general.write(0.4, &mut b).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-15);
    }
}

#[test]
fn shape_mismatch_is_reported() {
    let p = problem(line(0.0, 1.0, 11), fields("1", "0.1", "0.1"), BcKind::Neumann, Variant::Standard, 2.0);
    let sd = Semidiscretization::assemble(&p, 2).unwrap();
    let state = State { v: vec![0.0; 10], w: vec![0.0; 11], t: 0.0 };
    assert_eq!(sd.rhs_apply(&state, &[0.0; 11]), Err(DiscError::Shape { expected: 11, got: 10 }));
}

#[test]
fn penalty_for_constant_coefficients() {
    let p = problem(line(0.0, 1.0, 41), fields("1", "0.1", "0.1"), BcKind::Dirichlet, Variant::Standard, 1.0);
    let pen = compute_penalties(&p, 4).unwrap();
    let lp = pen.x[0];
    let sharp = crate::sbp::constant_coefficient_theta(4, 41).unwrap();
    assert!((lp.tau3 - 0.01 / sharp).abs() < 1e-12);
    assert!((lp.tau3 - 0.039864).abs() < 1e-6, "{}", lp.tau3);
    assert_eq!(lp.tau1, lp.tau3);
    assert_eq!(lp.tau2, lp.tau4);
    assert!(pen.y.is_empty());
}

#[test]
fn penalty_for_variable_coefficients_uses_worst_case_theta() {
    let p = problem(line(0.0, 1.0, 41), fields("1", "0.1", "0.1+0.01*x"), BcKind::Dirichlet, Variant::Standard, 1.0);
    let lp = compute_penalties(&p, 4).unwrap().x[0];
    assert!((lp.tau3 - 0.01 / 0.2505765857).abs() < 1e-9, "{}", lp.tau3);
}

#[test]
fn penalties_skip_vanishing_beta() {
    let p = problem(line(0.0, 1.0, 21), fields("1", "0", "0.1"), BcKind::Dirichlet, Variant::Standard, 2.0);
    let sd = Semidiscretization::assemble(&p, 4).unwrap();
    assert!(!sd.has_viscous_term());
    assert_eq!(sd.penalties().x[0].tau1, 0.0);
}

#[test]
fn fully_compatible_penalty_uses_boundary_weight() {
    let p = problem(
        line(0.0, 1.0, 81),
        fields("1", "8*(x-0.0125)^2", "0.1"),
        BcKind::Dirichlet,
        Variant::FullyCompatible,
        2.0,
    );
    let sd = Semidiscretization::assemble(&p, 4).unwrap();
    let b1 = 8.0f64 * 0.0125 * 0.0125;
    let expected = 2.0 * b1 * b1 / sd.sbp_x().omega1();
    assert!((sd.penalties().x[0].tau1 - expected).abs() < 1e-15);
    assert_eq!(sd.regime(), BetaRegime::ZeroNearBoundary);
}

#[test]
fn standard_variant_rejects_beta_vanishing_near_boundary() {
    let p = problem(
        line(0.0, 1.0, 81),
        fields("1", "8*(x-0.0125)^2", "0.1"),
        BcKind::Dirichlet,
        Variant::Standard,
        2.0,
    );
    let err = Semidiscretization::assemble(&p, 4).unwrap_err();
    assert!(matches!(err, DiscError::NeedsFullyCompatible { direction: 'x', line: 0, side: Side::Left }), "{err:?}");
}

#[test]
fn order_six_has_no_fully_compatible_variant() {
    let p = problem(line(0.0, 1.0, 41), fields("1", "0.1", "0.1"), BcKind::Dirichlet, Variant::FullyCompatible, 2.0);
    assert_eq!(Semidiscretization::assemble(&p, 6).unwrap_err(), DiscError::IncompatibleOperator(6));
}

#[test]
fn dense_oracle_one_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (order, n) in [(2, 11), (4, 16), (4, 23), (6, 18)] {
        for kind in [BcKind::Dirichlet, BcKind::Neumann] {
            for variant in [Variant::Standard, Variant::FullyCompatible] {
                if order == 6 && variant == Variant::FullyCompatible {
                    continue;
                }
                let f = fields("exp(-x)", "0.2+0.1*sin(2*3.14159*x)", "0.15+0.1*cos(5*x)");
                let p = problem(line(0.0, 1.0, n), f, kind, variant, 2.0);
                let sd = Semidiscretization::assemble(&p, order).unwrap();
                let gap = oracle_gap(&sd, &mut rng);
                assert!(gap < 1e-12, "order {order} n {n} {kind:?} {variant:?}: {gap:e}");
            }
        }
    }
}

#[test]
fn dense_oracle_two_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in [BcKind::Dirichlet, BcKind::Neumann] {
        for variant in [Variant::Standard, Variant::FullyCompatible] {
            let f = fields("1+x*y", "0.2+0.1*sin(x+2*y)", "0.3+0.1*x*y");
            let grid = Grid::Two(Grid2D::new(Grid1D::new(0.0, 1.0, 7).unwrap(), Grid1D::new(-1.0, 0.5, 9).unwrap()));
            let p = problem(grid, f, kind, variant, 2.0);
            let sd = Semidiscretization::assemble(&p, 2).unwrap();
            let gap = oracle_gap(&sd, &mut rng);
            assert!(gap < 1e-12, "{kind:?} {variant:?}: {gap:e}");
        }
    }
}

#[test]
fn exact_for_decaying_cosine() {
    let u = e("exp(-t)*cos(2*3.141592653589793*x)");
    for kind in [BcKind::Dirichlet, BcKind::Neumann] {
        let mut p = problem(line(0.1, 1.1, 81), fields("1", "0.1", "0.1"), kind, Variant::Standard, 2.0);
        p.bc = BoundaryCondition { kind, data: Some(u.clone()) };
        let sd = Semidiscretization::assemble(&p, 4).unwrap();
        let pts = sd.grid().points();
        let v: Vec<f64> = pts.iter().map(|&(x, y)| u.eval(x, y, 0.0).unwrap()).collect();
        let w: Vec<f64> = v.iter().map(|x| -x).collect();
        let mut g = vec![0.0; v.len()];
        sd.rhs(0.0, &v, &w, &mut g).unwrap();
        let res = g.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(res < 1e-12, "{kind:?}: {res:e}");
    }
}

#[test]
fn constants_are_neumann_steady_states() {
    for (grid, order) in [(line(0.0, 2.0, 31), 6), (square(21), 4)] {
        let p = problem(grid, fields("0", "0.1+0.05*x", "0.3+0.1*sin(y)"), BcKind::Neumann, Variant::Standard, 2.0);
        let sd = Semidiscretization::assemble(&p, order).unwrap();
        let n = sd.len();
        let state = State { v: vec![2.5; n], w: vec![0.0; n], t: 0.0 };
        let g = sd.rhs_apply(&state, &vec![0.0; n]).unwrap();
        assert!(max_abs(&g) < 1e-11, "{}", max_abs(&g));
    }
}

#[test]
fn two_dimensional_operator_reduces_to_one_dimensional() {
    let f = fields("1+x", "0.1+0.05*x^2", "0.2+0.1*sin(3*x)");
    let p1 = problem(line(0.0, 1.0, 25), f.clone(), BcKind::Neumann, Variant::Standard, 2.0);
    let p2 = problem(square(25), f, BcKind::Neumann, Variant::Standard, 2.0);
    let sd1 = Semidiscretization::assemble(&p1, 4).unwrap();
    let sd2 = Semidiscretization::assemble(&p2, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v = random_vec(&mut rng, 25);
    let w = random_vec(&mut rng, 25);
    let g1 = sd1.rhs_apply(&State { v: v.clone(), w: w.clone(), t: 0.0 }, &[0.0; 25]).unwrap();
    let rep = |a: &[f64]| a.iter().flat_map(|x| std::iter::repeat(*x).take(25)).collect::<Vec<_>>();
    let g2 = sd2.rhs_apply(&State { v: rep(&v), w: rep(&w), t: 0.0 }, &[0.0; 625]).unwrap();
    for i in 0..25 {
        for j in 0..25 {
            let d = (g2[i * 25 + j] - g1[i]).abs();
            assert!(d < 1e-13 * max_abs(&g1).max(1.0), "({i},{j}): {d:e}");
        }
    }
}

#[test]
fn dirichlet_penalty_sign_on_small_grid() {
    let p = problem(line(0.0, 1.0, 6), fields("0", "0", "1"), BcKind::Dirichlet, Variant::Standard, 2.0);
    let sd = Semidiscretization::assemble(&p, 2).unwrap();
    let set = sd.sbp_x();
    let (h, eps) = (set.h(), 1e-3);
    let tau3 = sd.penalties().x[0].tau3;
    let mut v = vec![0.0; 6];
    v[0] = eps;
    let g = sd.rhs_apply(&State { v: v.clone(), w: vec![0.0; 6], t: 0.0 }, &[0.0; 6]).unwrap();
    let d0 = set.d_left().coeffs[0];
    let a00 = SecondDerivOp::new(set, &[1.0; 6], Variant::Standard).unwrap().a().to_dense()[0][0];
    let h11 = set.norm_weight(0);
    // -A v, then the boundary term and its transpose, then the penalty
    let expected = (-a00 * eps - d0 * eps - d0 * eps - tau3 / h * eps) / h11;
    assert!((g[0] - expected).abs() < 1e-12, "{} vs {expected}", g[0]);
    let no_penalty = (-a00 - 2.0 * d0) * eps / h11;
    assert!(g[0] - no_penalty < 0.0);
    assert!(((g[0] - no_penalty) + tau3 / (h * h11) * eps).abs() < 1e-12);
}

#[test]
fn energy_of_zero_state_vanishes() {
    let p = problem(square(9), fields("1", "0.1", "0.2"), BcKind::Dirichlet, Variant::Standard, 2.0);
    let sd = Semidiscretization::assemble(&p, 2).unwrap();
    assert_eq!(sd.energy(&[0.0; 81], &[0.0; 81]), 0.0);
}

#[test]
fn dirichlet_energy_nonnegative_for_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (grid, order) in [(line(0.0, 1.0, 41), 4), (line(0.0, 1.0, 41), 6), (line(0.0, 1.0, 21), 2), (square(17), 4)] {
        let f = fields("1", "0.1", "0.1+0.05*sin(7*x)");
        let p = problem(grid, f, BcKind::Dirichlet, Variant::Standard, 1.0);
        let sd = Semidiscretization::assemble(&p, order).unwrap();
        let n = sd.len();
        for _ in 0..50 {
            let v = random_vec(&mut rng, n);
            let zero = vec![0.0; n];
            let en = sd.energy(&v, &zero);
            assert!(en >= -1e-12 * max_abs(&v).powi(2), "order {order}: {en:e}");
        }
    }
}

/// `E` is quadratic, so a central difference along the flow direction
/// `(w, G)` gives its exact time derivative.
fn energy_rate(sd: &Semidiscretization, v: &[f64], w: &[f64]) -> f64 {
    let n = v.len();
    let g = sd.rhs_apply(&State { v: v.to_vec(), w: w.to_vec(), t: 0.0 }, &vec![0.0; n]).unwrap();
    let step = |s: f64| {
        let vv: Vec<f64> = v.iter().zip(w).map(|(a, b)| a + s * b).collect();
        let ww: Vec<f64> = w.iter().zip(&g).map(|(a, b)| a + s * b).collect();
        sd.energy(&vv, &ww)
    };
    (step(1.0) - step(-1.0)) / 2.0
}

#[test]
fn neumann_energy_rate_equals_dissipation() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (grid, order) in [(line(0.0, 1.0, 31), 4), (line(0.0, 1.0, 31), 6), (square(15), 2)] {
        let f = fields("exp(-x)", "0.2+0.1*sin(6*x)", "0.15+0.1*cos(5*x)");
        let p = problem(grid, f, BcKind::Neumann, Variant::Standard, 2.0);
        let sd = Semidiscretization::assemble(&p, order).unwrap();
        let n = sd.len();
        let v = random_vec(&mut rng, n);
        let w = random_vec(&mut rng, n);
        let rate = energy_rate(&sd, &v, &w);
        let diss = sd.dissipation(&w);
        assert!(diss > 0.0);
        assert!((rate + diss).abs() < 1e-10 * diss.max(1.0), "{rate} vs {}", -diss);
    }
}

#[test]
fn dirichlet_energy_does_not_grow() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (kind, variant, beta) in [
        (BcKind::Dirichlet, Variant::Standard, "0.1+0.05*x"),
        (BcKind::Dirichlet, Variant::FullyCompatible, "8*(x-0.0125)^2"),
        (BcKind::Dirichlet, Variant::Standard, "0"),
    ] {
        let p = problem(line(0.0, 1.0, 81), fields("0", beta, "0.1"), kind, variant, 1.0);
        let sd = Semidiscretization::assemble(&p, 4).unwrap();
        for _ in 0..20 {
            let v = random_vec(&mut rng, 81);
            let w = random_vec(&mut rng, 81);
            let rate = energy_rate(&sd, &v, &w);
            assert!(rate <= 1e-9, "{beta}: {rate:e}");
        }
    }
}

#[test]
fn energy_rate_report() {
    let rep = energy_rate_bound_check(&[3.0, 2.0, 2.0 + 1e-12, 1.0], 1e-10);
    assert!(rep.monotone);
    assert_eq!(rep.worst_step, Some(1));
    let rep = energy_rate_bound_check(&[1.0, 1.5], 1e-10);
    assert!(!rep.monotone);
    assert_eq!(energy_rate_bound_check(&[1.0], 0.0).max_increase, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matrix_free_matches_dense(
        seed in any::<u64>(),
        a in 0.0f64..2.0,
        b0 in 0.05f64..0.5,
        b1 in -0.04f64..0.04,
        c0 in 0.05f64..0.5,
        c1 in -0.04f64..0.04,
        k in 1.0f64..6.0,
        neumann in any::<bool>(),
        compatible in any::<bool>(),
        two_d in any::<bool>(),
    ) {
        let f = fields(
            &format!("{a}*exp(-x)"),
            &format!("{b0}+{b1}*sin({k}*x+y)"),
            &format!("{c0}+{c1}*cos({k}*x-y)"),
        );
        let kind = if neumann { BcKind::Neumann } else { BcKind::Dirichlet };
        let variant = if compatible { Variant::FullyCompatible } else { Variant::Standard };
        let (grid, order) = if two_d { (square(7), 2) } else { (line(0.0, 1.0, 16), 4) };
        let sd = Semidiscretization::assemble(&problem(grid, f, kind, variant, 2.0), order).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(oracle_gap(&sd, &mut rng) < 1e-12);
    }
}
