//! Manufactured solutions, discrete error norms and convergence studies.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::disc::{DiscError, Semidiscretization, State};
use crate::expr::{EvalError, Expr, Var};
use crate::model::{BcKind, BoundaryCondition, Grid, Grid1D, Grid2D, MaterialFields, ModelError, Problem};
use crate::sbp::Variant;
use crate::timeint::{rk4_advance, DtRule, TimeConfig, TimeError};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum MmsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Disc(#[from] DiscError),
    #[error(transparent)]
    Time(#[from] TimeError),
    #[error("evaluating the exact solution: {0}")]
    Eval(#[from] EvalError),
    #[error("a convergence study needs at least 3 resolutions, got {0}")]
    TooFewResolutions(usize),
    #[error("resolutions must be strictly increasing")]
    NotIncreasing,
    #[error("grid with {n} points does not nest in the {reference}-point reference grid")]
    NotNested { n: usize, reference: usize },
    #[error("reference grid ({reference} points) must have at least twice the intervals of the finest grid ({finest})")]
    ReferenceTooCoarse { reference: usize, finest: usize },
    #[error("expected vectors of length {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("at n = {n}: {source}")]
    AtResolution { n: usize, source: Box<MmsError> },
}

/// A manufactured-solution experiment. `resolutions` are points per
/// direction; 2D grids are `n x n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ManufacturedCase {
    pub exact: Expr,
    pub fields: MaterialFields,
    pub x_range: (f64, f64),
    pub y_range: Option<(f64, f64)>,
    pub bc: BcKind,
    pub final_time: f64,
    pub order: usize,
    pub penalty_safety: f64,
    pub variant: Variant,
    pub resolutions: Vec<usize>,
    /// `None` picks the default rule for the problem.
    pub time_rule: Option<DtRule>,
}

/// `div(k grad u)` in one or two dimensions.
fn divergence(k: &Expr, u: &Expr, two_d: bool) -> Expr {
    let axes: &[Var] = if two_d { &[Var::X, Var::Y] } else { &[Var::X] };
    axes.iter().fold(Expr::num(0.0), |acc, &ax| Expr::add(acc, Expr::mul(k.clone(), u.diff(ax)).diff(ax)))
}

/// `f = u_tt + alpha u_t - div(beta^2 grad u_t) - div(gamma^2 grad u)`.
pub fn synthesize_forcing(case: &ManufacturedCase) -> Expr {
    forcing_for(&case.exact, &case.fields, case.y_range.is_some())
}

pub fn forcing_for(u: &Expr, fields: &MaterialFields, two_d: bool) -> Expr {
    let ut = u.diff(Var::T);
    let utt = ut.diff(Var::T);
    let b2 = Expr::pow(fields.beta.clone(), 2);
    let c2 = Expr::pow(fields.gamma.clone(), 2);
    let f = Expr::add(utt, Expr::mul(fields.alpha.clone(), ut.clone()));
    let f = Expr::sub(f, divergence(&b2, &ut, two_d));
    Expr::sub(f, divergence(&c2, u, two_d))
}

/// `sqrt(h^d sum (u_j - v_j)^2)`.
pub fn l2_error(v: &[f64], u: &[f64], h: f64, d: u32) -> Result<f64, MmsError> {
    weighted_l2(v, u, h.powi(d as i32))
}

fn weighted_l2(v: &[f64], u: &[f64], vol: f64) -> Result<f64, MmsError> {
    if v.len() != u.len() {
        return Err(MmsError::Shape { expected: u.len(), got: v.len() });
    }
    Ok((vol * v.iter().zip(u).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()).sqrt())
}

pub fn max_error(v: &[f64], u: &[f64]) -> f64 {
    v.iter().zip(u).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub l2_error: f64,
    pub max_error: f64,
    /// Rate against the previous row.
    pub rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log e` against `log h`; `None` when the
    /// errors are at roundoff level.
    pub fitted_rate: Option<f64>,
    pub exact: bool,
}

/// Errors below this are treated as roundoff.
pub const ROUNDOFF: f64 = 1e-13;

impl ConvergenceReport {
    pub fn from_rows(mut rows: Vec<ConvergenceRow>) -> Self {
        for k in 1..rows.len() {
            let (a, b) = (&rows[k - 1], &rows[k]);
            rows[k].rate = Some((a.l2_error / b.l2_error).ln() / (a.h / b.h).ln());
        }
        let exact = rows.iter().all(|r| r.l2_error < ROUNDOFF);
        let fitted_rate = if exact { None } else { fit_rate(&rows) };
        ConvergenceReport { rows, fitted_rate, exact }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,h,l2_error,max_error,rate\n");
        for r in &self.rows {
            let rate = r.rate.map(|x| format!("{x:.6}")).unwrap_or_default();
            s.push_str(&format!("{},{:e},{:e},{:e},{}\n", r.n, r.h, r.l2_error, r.max_error, rate));
        }
        s
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>12}  {:>12}  {:>12}  {:>6}", "n", "h", "l2 error", "max error", "rate")?;
        for r in &self.rows {
            let rate = r.rate.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
            writeln!(f, "{:>6}  {:>12.4e}  {:>12.4e}  {:>12.4e}  {:>6}", r.n, r.h, r.l2_error, r.max_error, rate)?;
        }
        match (self.exact, self.fitted_rate) {
            (true, _) => write!(f, "errors at roundoff level"),
            (false, Some(p)) => write!(f, "fitted rate {p:.3}"),
            (false, None) => write!(f, "fitted rate unavailable"),
        }
    }
}

fn fit_rate(rows: &[ConvergenceRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h.ln(), r.l2_error.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn check_resolutions(res: &[usize]) -> Result<(), MmsError> {
    if res.len() < 3 {
        return Err(MmsError::TooFewResolutions(res.len()));
    }
    if res.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MmsError::NotIncreasing);
    }
    Ok(())
}

/// The same problem on a grid with `n` points per direction.
pub fn with_resolution(problem: &Problem, n: usize) -> Result<Problem, MmsError> {
    let grid = match &problem.grid {
        Grid::One(g) => Grid::One(Grid1D::new(g.x_min, g.x_max, n)?),
        Grid::Two(g) => {
            Grid::Two(Grid2D::new(Grid1D::new(g.x.x_min, g.x.x_max, n)?, Grid1D::new(g.y.x_min, g.y.x_max, n)?))
        }
    };
    Ok(Problem { grid, ..problem.clone() })
}

impl ManufacturedCase {
    /// Problem on `n` points per direction, with the exact solution as
    /// boundary data and initial state.
    pub fn problem(&self, n: usize) -> Result<Problem, MmsError> {
        let (a, b) = self.x_range;
        let gx = Grid1D::new(a, b, n)?;
        let grid = match self.y_range {
            None => Grid::One(gx),
            Some((c, d)) => Grid::Two(Grid2D::new(gx, Grid1D::new(c, d, n)?)),
        };
        let ut = self.exact.diff(Var::T);
        Ok(Problem {
            grid,
            fields: self.fields.clone(),
            bc: BoundaryCondition { kind: self.bc, data: Some(self.exact.clone()) },
            forcing: Some(synthesize_forcing(self)),
            initial_value: self.exact.clone(),
            initial_rate: ut,
            final_time: self.final_time,
            variant: self.variant,
            penalty_safety: self.penalty_safety,
        })
    }

    /// Solves on `n` points and measures the error at the final time.
    pub fn run(&self, n: usize) -> Result<ConvergenceRow, MmsError> {
        let problem = self.problem(n)?;
        let sd = Semidiscretization::assemble(&problem, self.order)?;
        let (v, w) = problem.initial_state()?;
        let rule = self.time_rule.unwrap_or_else(|| DtRule::default_for(&sd));
        let tr = rk4_advance(&sd, State { v, w, t: 0.0 }, &TimeConfig::new(rule, self.final_time))?;
        let t = tr.final_state.t;
        let exact: Vec<f64> =
            problem.grid.points().iter().map(|&(x, y)| self.exact.eval(x, y, t)).collect::<Result<_, _>>()?;
        Ok(ConvergenceRow {
            n,
            h: problem.grid.axes().0.h,
            l2_error: weighted_l2(&tr.final_state.v, &exact, problem.grid.cell_volume())?,
            max_error: max_error(&tr.final_state.v, &exact),
            rate: None,
        })
    }
}

pub fn run_convergence(case: &ManufacturedCase) -> Result<ConvergenceReport, MmsError> {
    check_resolutions(&case.resolutions)?;
    let rows = case
        .resolutions
        .par_iter()
        .map(|&n| case.run(n).map_err(|e| MmsError::AtResolution { n, source: Box::new(e) }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConvergenceReport::from_rows(rows))
}

/// A study without an exact solution: errors are measured against a
/// reference run restricted by injection to each coarse grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfConvergenceStudy {
    pub problem: Problem,
    pub order: usize,
    pub time: TimeConfig,
    pub resolutions: Vec<usize>,
    pub reference: usize,
}

fn stride(n: usize, reference: usize) -> Result<usize, MmsError> {
    if n >= 2 && (reference - 1) % (n - 1) == 0 {
        Ok((reference - 1) / (n - 1))
    } else {
        Err(MmsError::NotNested { n, reference })
    }
}

fn solve_final(problem: &Problem, order: usize, time: &TimeConfig) -> Result<Vec<f64>, MmsError> {
    let sd = Semidiscretization::assemble(problem, order)?;
    let (v, w) = problem.initial_state()?;
    let cfg = TimeConfig { snapshot_times: Vec::new(), record_energy: false, ..time.clone() };
    Ok(rk4_advance(&sd, State { v, w, t: 0.0 }, &cfg)?.final_state.v)
}

/// Injects a reference solution onto the grid with `n` points per direction.
pub fn restrict(reference: &[f64], grid: &Grid, n_ref: usize) -> Result<Vec<f64>, MmsError> {
    let (gx, _) = grid.axes();
    let s = stride(gx.n, n_ref)?;
    Ok(match grid {
        Grid::One(g) => (0..g.n).map(|i| reference[i * s]).collect(),
        Grid::Two(g) => {
            let sy = stride(g.y.n, n_ref)?;
            (0..g.x.n).flat_map(|i| (0..g.y.n).map(move |j| reference[i * s * n_ref + j * sy])).collect()
        }
    })
}

pub fn run_self_convergence(study: &SelfConvergenceStudy) -> Result<ConvergenceReport, MmsError> {
    check_resolutions(&study.resolutions)?;
    let finest = *study.resolutions.last().expect("checked non-empty");
    if study.reference < 2 * (finest - 1) + 1 {
        return Err(MmsError::ReferenceTooCoarse { reference: study.reference, finest });
    }
    for &n in &study.resolutions {
        stride(n, study.reference)?;
    }
    let mut all: Vec<usize> = study.resolutions.clone();
    all.push(study.reference);
    let solutions = all
        .par_iter()
        .map(|&n| {
            with_resolution(&study.problem, n)
                .and_then(|p| solve_final(&p, study.order, &study.time).map(|v| (p, v)))
                .map_err(|e| MmsError::AtResolution { n, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (reference, coarse) = solutions.split_last().expect("reference run present");
    let rows = coarse
        .iter()
        .map(|(p, v)| {
            let r = restrict(&reference.1, &p.grid, study.reference)?;
            Ok(ConvergenceRow {
                n: p.grid.axes().0.n,
                h: p.grid.axes().0.h,
                l2_error: weighted_l2(v, &r, p.grid.cell_volume())?,
                max_error: max_error(v, &r),
                rate: None,
            })
        })
        .collect::<Result<Vec<_>, MmsError>>()?;
    Ok(ConvergenceReport::from_rows(rows))
}
