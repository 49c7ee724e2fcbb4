use dvw_core::disc::energy_rate_bound_check;
use dvw_core::mms::{run_convergence, ManufacturedCase};
use dvw_core::timeint::{rk4_advance, DtRule, TimeConfig};
use dvw_core::{BcKind, BoundaryCondition, Expr, Grid, Grid1D, Grid2D, MaterialFields, Problem, Semidiscretization, State, Variant};

fn e(s: &str) -> Expr {
    Expr::parse(s).unwrap()
}

fn fields(alpha: &str, beta: &str, gamma: &str) -> MaterialFields {
    MaterialFields { alpha: e(alpha), beta: e(beta), gamma: e(gamma) }
}

#[test]
fn manufactured_study_converges_at_design_order() {
    let case = ManufacturedCase {
        exact: e("exp(-t)*sin(2*pi*x)"),
        fields: fields("1 + x", "0.1 + 0.05*x", "1 + 0.5*sin(pi*x)"),
        x_range: (0.0, 1.0),
        y_range: None,
        bc: BcKind::Dirichlet,
        final_time: 0.2,
        order: 4,
        penalty_safety: 2.0,
        variant: Variant::Standard,
        resolutions: vec![21, 41, 81],
        time_rule: Some(DtRule::Viscous(0.05)),
    };
    let report = run_convergence(&case).unwrap();
    assert!(report.rows.windows(2).all(|w| w[1].l2_error < w[0].l2_error));
    assert!(report.fitted_rate.unwrap() > 3.5, "{report}");
}

#[test]
fn square_run_dissipates_energy() {
    let axis = Grid1D::new(0.0, 1.0, 21).unwrap();
    let problem = Problem {
        grid: Grid::Two(Grid2D::new(axis.clone(), axis)),
        fields: fields("0.5", "0.1 + 0.05*x*y", "1 + 0.3*y"),
        bc: BoundaryCondition::homogeneous(BcKind::Neumann),
        forcing: None,
        initial_value: e("exp(-40*((x-0.4)^2 + (y-0.6)^2))"),
        initial_rate: e("0"),
        final_time: 0.2,
        variant: Variant::Standard,
        penalty_safety: 2.0,
    };
    let sd = Semidiscretization::assemble(&problem, 4).unwrap();
    let (v, w) = problem.initial_state().unwrap();
    let mut cfg = TimeConfig::new(DtRule::default_for(&sd), problem.final_time);
    cfg.record_energy = true;
    let tr = rk4_advance(&sd, State { v, w, t: 0.0 }, &cfg).unwrap();
    let energies: Vec<f64> = tr.energy.iter().map(|p| p.1).collect();
    assert!(energy_rate_bound_check(&energies, 1e-12).monotone);
    assert!(energies.last().unwrap() < energies.first().unwrap());
}
