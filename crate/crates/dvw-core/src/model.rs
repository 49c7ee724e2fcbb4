//! Grids, material fields, boundary conditions and problem instances.

use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::sbp::Variant;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ModelError {
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("empty interval [{0}, {1}]")]
    EmptyInterval(f64, f64),
    #[error("gamma must be positive: gamma = {value} at node {node} (x = {x}, y = {y})")]
    NonPositiveGamma { node: usize, x: f64, y: f64, value: f64 },
    #[error("{field} must be nonnegative: {field} = {value} at node {node} (x = {x}, y = {y})")]
    Negative { field: &'static str, node: usize, x: f64, y: f64, value: f64 },
    #[error("non-finite {field} at node {node}")]
    NonFinite { field: &'static str, node: usize },
    #[error("evaluating {field}: {source}")]
    Eval { field: &'static str, source: EvalError },
    #[error("final time must be positive, got {0}")]
    FinalTime(f64),
    #[error("penalty safety factor must be at least 1, got {0}")]
    Safety(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::TooFewPoints(n));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(ModelError::EmptyInterval(x_min, x_max));
        }
        Ok(Grid1D { x_min, x_max, n, h: (x_max - x_min) / (n - 1) as f64 })
    }

    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.n {
            self.x_max
        } else {
            self.x_min + j as f64 * self.h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }
}

/// Tensor-product grid with x-major ordering `k = i * n_y + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Grid2D { x, y }
    }

    pub fn len(&self) -> usize {
        self.x.n * self.y.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.y.n + j
    }

    pub fn split(&self, k: usize) -> (usize, usize) {
        (k / self.y.n, k % self.y.n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    One(Grid1D),
    Two(Grid2D),
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::One(g) => g.n,
            Grid::Two(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match self {
            Grid::One(_) => 1,
            Grid::Two(_) => 2,
        }
    }

    /// Coordinates of every node in grid order (`y = 0` in 1D).
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self {
            Grid::One(g) => g.nodes().into_iter().map(|x| (x, 0.0)).collect(),
            Grid::Two(g) => {
                let (xs, ys) = (g.x.nodes(), g.y.nodes());
                xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
            }
        }
    }

    /// The x-direction grid and, in 2D, the y-direction grid.
    pub fn axes(&self) -> (&Grid1D, Option<&Grid1D>) {
        match self {
            Grid::One(g) => (g, None),
            Grid::Two(g) => (&g.x, Some(&g.y)),
        }
    }

    /// `h^d` for the discrete l2 norm.
    pub fn cell_volume(&self) -> f64 {
        match self {
            Grid::One(g) => g.h,
            Grid::Two(g) => g.x.h * g.y.h,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaterialFields {
    pub alpha: Expr,
    pub beta: Expr,
    pub gamma: Expr,
}

/// Material fields sampled in grid order.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFields {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl SampledFields {
    pub fn beta_squared(&self) -> Vec<f64> {
        self.beta.iter().map(|b| b * b).collect()
    }

    pub fn gamma_squared(&self) -> Vec<f64> {
        self.gamma.iter().map(|g| g * g).collect()
    }

    pub fn beta_vanishes(&self) -> bool {
        self.beta.iter().all(|b| *b == 0.0)
    }
}

fn sample(field: &'static str, e: &Expr, pts: &[(f64, f64)]) -> Result<Vec<f64>, ModelError> {
    pts.iter()
        .enumerate()
        .map(|(node, &(x, y))| {
            let v = e.eval(x, y, 0.0).map_err(|source| ModelError::Eval { field, source })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(ModelError::NonFinite { field, node })
            }
        })
        .collect()
}

pub fn sample_fields(fields: &MaterialFields, grid: &Grid) -> Result<SampledFields, ModelError> {
    let pts = grid.points();
    let alpha = sample("alpha", &fields.alpha, &pts)?;
    let beta = sample("beta", &fields.beta, &pts)?;
    let gamma = sample("gamma", &fields.gamma, &pts)?;
    for (node, &(x, y)) in pts.iter().enumerate() {
        if !(gamma[node] > 0.0) {
            return Err(ModelError::NonPositiveGamma { node, x, y, value: gamma[node] });
        }
        for (field, v) in [("alpha", alpha[node]), ("beta", beta[node])] {
            if v < 0.0 {
                return Err(ModelError::Negative { field, node, x, y, value: v });
            }
        }
    }
    Ok(SampledFields { alpha, beta, gamma })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

impl Side {
    fn join(a: Option<Side>, b: Side) -> Side {
        match a {
            None => b,
            Some(s) if s == b => s,
            Some(_) => Side::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaRegime {
    PositiveEverywhere,
    ZeroOnBoundary(Side),
    ZeroNearBoundary,
}

impl BetaRegime {
    pub fn required_variant(self) -> Variant {
        match self {
            BetaRegime::ZeroNearBoundary => Variant::FullyCompatible,
            _ => Variant::Standard,
        }
    }
}

/// Classifies one grid line of `beta` samples; `m` is the borrowing width.
pub fn classify_beta(beta: &[f64], m: usize) -> BetaRegime {
    let n = beta.len();
    let m = m.min(n);
    let mut zero_ends = None;
    for (side, end, window) in [
        (Side::Left, beta[0], &beta[..m]),
        (Side::Right, beta[n - 1], &beta[n - m..]),
    ] {
        if end > 0.0 {
            if window.iter().any(|b| *b == 0.0) {
                return BetaRegime::ZeroNearBoundary;
            }
        } else {
            zero_ends = Some(Side::join(zero_ends, side));
        }
    }
    match zero_ends {
        Some(side) => BetaRegime::ZeroOnBoundary(side),
        None => BetaRegime::PositiveEverywhere,
    }
}

/// Classifies every grid line in both directions and returns the most
/// restrictive regime.
pub fn classify_beta_grid(grid: &Grid, beta: &[f64], m: usize) -> BetaRegime {
    let mut regimes = Vec::new();
    match grid {
        Grid::One(_) => regimes.push(classify_beta(beta, m)),
        Grid::Two(g) => {
            let (nx, ny) = (g.x.n, g.y.n);
            for j in 0..ny {
                let line: Vec<f64> = (0..nx).map(|i| beta[i * ny + j]).collect();
                regimes.push(classify_beta(&line, m));
            }
            for i in 0..nx {
                regimes.push(classify_beta(&beta[i * ny..(i + 1) * ny], m));
            }
        }
    }
    let mut side = None;
    for r in regimes {
        match r {
            BetaRegime::ZeroNearBoundary => return r,
            BetaRegime::ZeroOnBoundary(s) => side = Some(Side::join(side, s)),
            BetaRegime::PositiveEverywhere => {}
        }
    }
    side.map_or(BetaRegime::PositiveEverywhere, BetaRegime::ZeroOnBoundary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

/// Boundary condition. `data` is a function `g(x, y, t)` whose boundary
/// values (Dirichlet) or normal-direction derivatives (Neumann) are imposed;
/// `None` means homogeneous data.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCondition {
    pub kind: BcKind,
    pub data: Option<Expr>,
}

impl BoundaryCondition {
    pub fn homogeneous(kind: BcKind) -> Self {
        BoundaryCondition { kind, data: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub grid: Grid,
    pub fields: MaterialFields,
    pub bc: BoundaryCondition,
    pub forcing: Option<Expr>,
    pub initial_value: Expr,
    pub initial_rate: Expr,
    pub final_time: f64,
    pub variant: Variant,
    pub penalty_safety: f64,
}

impl Problem {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.final_time > 0.0) {
            return Err(ModelError::FinalTime(self.final_time));
        }
        if !(self.penalty_safety >= 1.0) {
            return Err(ModelError::Safety(self.penalty_safety));
        }
        Ok(())
    }

    /// Initial value and rate sampled on the grid at `t = 0`.
    pub fn initial_state(&self) -> Result<(Vec<f64>, Vec<f64>), ModelError> {
        let pts = self.grid.points();
        Ok((sample("initial value", &self.initial_value, &pts)?, sample("initial rate", &self.initial_rate, &pts)?))
    }
}
