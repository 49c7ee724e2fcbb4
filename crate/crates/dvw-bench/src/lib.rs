//! Benchmark fixtures shared by the criterion targets.

use dvw_core::{BcKind, BoundaryCondition, Expr, Grid, Grid1D, Grid2D, MaterialFields, Problem, Semidiscretization, State, Variant};

fn e(s: &str) -> Expr {
    Expr::parse(s).expect("fixture expression")
}

/// Variable-coefficient Dirichlet problem on `[0, 1]` with `n` points.
pub fn line_problem(n: usize) -> Problem {
    Problem {
        grid: Grid::One(Grid1D::new(0.0, 1.0, n).expect("grid")),
        fields: MaterialFields {
            alpha: e("1"),
            beta: e("0.1 + 0.05*sin(2*pi*x)"),
            gamma: e("1 + 0.5*x"),
        },
        bc: BoundaryCondition::homogeneous(BcKind::Dirichlet),
        forcing: None,
        initial_value: e("sin(pi*x)"),
        initial_rate: e("0"),
        final_time: 1.0,
        variant: Variant::Standard,
        penalty_safety: 2.0,
    }
}

/// Ricker-type Neumann problem on the unit square with `n x n` points.
pub fn square_problem(n: usize) -> Problem {
    let axis = Grid1D::new(0.0, 1.0, n).expect("grid");
    Problem {
        grid: Grid::Two(Grid2D::new(axis.clone(), axis)),
        fields: MaterialFields { alpha: e("0.5"), beta: e("0.05"), gamma: e("1 + 0.2*y") },
        bc: BoundaryCondition::homogeneous(BcKind::Neumann),
        forcing: None,
        initial_value: e("exp(-100*((x-0.5)^2 + (y-0.5)^2))"),
        initial_rate: e("0"),
        final_time: 1.0,
        variant: Variant::Standard,
        penalty_safety: 2.0,
    }
}

pub fn setup(problem: &Problem, order: usize) -> (Semidiscretization, State) {
    let sd = Semidiscretization::assemble(problem, order).expect("assemble");
    let (v, w) = problem.initial_state().expect("initial data");
    (sd, State { v, w, t: 0.0 })
}
