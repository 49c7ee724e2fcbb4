//! SBP-SAT semidiscretization in one and two space dimensions.
//!
//! The ODE system is `v_tt = G(v, v_t, t)` with
//! `G = f - alpha v_t + D^(beta^2) v_t + D^(gamma^2) v - F`, where `F` holds the
//! boundary terms. Two-dimensional operators are applied line by line.

use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{EvalError, Expr, Var};
use crate::model::{
    classify_beta_grid, sample_fields, BcKind, BetaRegime, Grid, ModelError, Problem, SampledFields, Side,
};
use crate::sbp::{constant_coefficient_theta, SbpError, SbpOperatorSet, SecondDerivOp, SparseRow, Variant};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DiscError {
    #[error(transparent)]
    Sbp(#[from] SbpError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(
        "beta vanishes next to the {side:?} boundary of {direction}-line {line} but not on it; \
         use the fully compatible variant"
    )]
    NeedsFullyCompatible { direction: char, line: usize, side: Side },
    #[error("the order-{0} operator is not compatible; the fully compatible variant is unavailable")]
    IncompatibleOperator(usize),
    #[error("expected vectors of length {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("evaluating {what}: {source}")]
    Eval { what: &'static str, source: EvalError },
}

/// Penalty parameters of one grid line: `tau1`, `tau2` act on `v_t` at the
/// left and right ends, `tau3`, `tau4` on `v`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LinePenalty {
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
    pub tau4: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PenaltySet {
    pub safety: f64,
    pub variant: Variant,
    /// One entry per x-line (indexed by the y node).
    pub x: Vec<LinePenalty>,
    /// One entry per y-line (indexed by the x node); empty in 1D.
    pub y: Vec<LinePenalty>,
}

/// Penalties for one line from the squared coefficients `b = beta^2` and
/// `c = gamma^2`. A coefficient that is constant along the line borrows with
/// the sharp constant-coefficient `theta`; any other uses the bound valid for
/// all coefficients.
pub fn line_penalty(
    set: &SbpOperatorSet,
    b: &[f64],
    c: &[f64],
    safety: f64,
    variant: Variant,
) -> Result<LinePenalty, Side> {
    let n = c.len();
    let m = set.m().min(n);
    let sharp = constant_coefficient_theta(set.order(), n).unwrap_or(set.theta());
    let theta = |v: &[f64]| if v.iter().all(|x| *x == v[0]) { sharp } else { set.theta() };
    let lmin = |v: &[f64]| v[..m].iter().cloned().fold(f64::INFINITY, f64::min);
    let rmin = |v: &[f64]| v[n - m..].iter().cloned().fold(f64::INFINITY, f64::min);
    let borrowed = |end: f64, min: f64, th: f64| end * end / (th * min);
    let (tc, tb) = (theta(c), theta(b));
    let tau3 = safety * borrowed(c[0], lmin(c), tc);
    let tau4 = safety * borrowed(c[n - 1], rmin(c), tc);
    let (tau1, tau2) = match variant {
        Variant::FullyCompatible => (safety * b[0] / set.omega1(), safety * b[n - 1] / set.omega1()),
        Variant::Standard => {
            let mut t = [0.0; 2];
            for (k, (side, end, min)) in
                [(Side::Left, b[0], lmin(b)), (Side::Right, b[n - 1], rmin(b))].into_iter().enumerate()
            {
                if end > 0.0 {
                    if min == 0.0 {
                        return Err(side);
                    }
                    t[k] = safety * borrowed(end, min, tb);
                }
            }
            (t[0], t[1])
        }
    };
    Ok(LinePenalty { tau1, tau2, tau3, tau4 })
}

#[derive(Clone, Debug)]
enum Forcing {
    Zero,
    Separable { temporal: Vec<Expr>, spatial: Vec<Vec<f64>> },
    General { expr: Expr, points: Vec<(f64, f64)> },
}

impl Forcing {
    fn new(expr: Option<&Expr>, grid: &Grid) -> Result<Self, DiscError> {
        let Some(expr) = expr else { return Ok(Forcing::Zero) };
        let points = grid.points();
        let eval = |e: &Expr, x: f64, y: f64, t: f64| {
            e.eval(x, y, t).map_err(|source| DiscError::Eval { what: "forcing", source })
        };
        match expr.separate_time() {
            Some(parts) => {
                let mut temporal = Vec::with_capacity(parts.len());
                let mut spatial = Vec::with_capacity(parts.len());
                for (tp, sp) in parts {
                    spatial.push(points.iter().map(|&(x, y)| eval(&sp, x, y, 0.0)).collect::<Result<_, _>>()?);
                    temporal.push(tp);
                }
                Ok(Forcing::Separable { temporal, spatial })
            }
            None => Ok(Forcing::General { expr: expr.clone(), points }),
        }
    }

    fn write(&self, t: f64, out: &mut [f64]) -> Result<(), DiscError> {
        let err = |source| DiscError::Eval { what: "forcing", source };
        match self {
            Forcing::Zero => out.iter_mut().for_each(|o| *o = 0.0),
            Forcing::Separable { temporal, spatial } => {
                out.iter_mut().for_each(|o| *o = 0.0);
                for (tp, sp) in temporal.iter().zip(spatial) {
                    let s = tp.eval(0.0, 0.0, t).map_err(err)?;
                    out.iter_mut().zip(sp).for_each(|(o, v)| *o += s * v);
                }
            }
            Forcing::General { expr, points } => {
                for (o, &(x, y)) in out.iter_mut().zip(points) {
                    *o = expr.eval(x, y, t).map_err(err)?;
                }
            }
        }
        Ok(())
    }
}

/// Boundary data expressions for one direction: the imposed quantity and
/// its time derivative.
#[derive(Clone, Debug)]
struct DirectionData {
    value: Expr,
    rate: Expr,
}

/// All lines of one coordinate direction.
#[derive(Clone, Debug)]
struct Direction {
    n: usize,
    lines: usize,
    /// Lines are stored contiguously (1D, or y-lines in 2D).
    line_major: bool,
    set: SbpOperatorSet,
    inv_norm: Vec<f64>,
    start: Vec<usize>,
    offset: Vec<usize>,
    gamma: Vec<f64>,
    beta: Option<Vec<f64>>,
    gamma_rows: (SparseRow, SparseRow),
    beta_rows: (SparseRow, SparseRow),
    gamma_ends: Vec<[f64; 2]>,
    beta_ends: Vec<[f64; 2]>,
    penalties: Vec<LinePenalty>,
    /// Coordinates of the two end nodes of each line.
    ends: Vec<[(f64, f64); 2]>,
    b_lines: Vec<Vec<f64>>,
    c_lines: Vec<Vec<f64>>,
    data: Option<DirectionData>,
}

/// Per-line boundary scalars for one right-hand-side evaluation.
#[derive(Clone, Copy, Debug, Default)]
struct EndTerms {
    first: f64,
    last: f64,
    gamma_left: f64,
    gamma_right: f64,
    beta_left: f64,
    beta_right: f64,
}

impl Direction {
    fn node(&self, line: usize, i: usize) -> usize {
        if self.line_major {
            line * self.n + i
        } else {
            i * self.lines + line
        }
    }

    fn nnz(&self) -> usize {
        self.offset[self.n]
    }

    fn coeff(&self, vals: &[f64], line: usize, e: usize) -> f64 {
        if self.line_major {
            vals[line * self.nnz() + e]
        } else {
            vals[e * self.lines + line]
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        axis: char,
        set: SbpOperatorSet,
        line_major: bool,
        b_lines: Vec<Vec<f64>>,
        c_lines: Vec<Vec<f64>>,
        skip_beta: bool,
        safety: f64,
        variant: Variant,
        ends: Vec<[(f64, f64); 2]>,
    ) -> Result<Direction, DiscError> {
        let n = set.n();
        let lines = c_lines.len();
        let inv_norm = (0..n).map(|i| 1.0 / set.norm_weight(i)).collect();
        let mut start = Vec::with_capacity(n);
        let mut offset = vec![0];
        let mut gamma = Vec::new();
        let mut beta = if skip_beta { None } else { Some(Vec::new()) };
        let mut gamma_ops = Vec::with_capacity(lines);
        let mut beta_ops = Vec::with_capacity(lines);
        let mut penalties = Vec::with_capacity(lines);
        for (line, (b, c)) in b_lines.iter().zip(&c_lines).enumerate() {
            let gop = SecondDerivOp::new(&set, c, Variant::Standard)?;
            if line == 0 {
                for i in 0..n {
                    let (s, r) = gop.a().row(i);
                    start.push(s);
                    offset.push(offset[i] + r.len());
                }
            }
            gamma_ops.push(gop);
            if !skip_beta {
                beta_ops.push(SecondDerivOp::new(&set, b, variant)?);
            }
            let p = line_penalty(&set, b, c, safety, variant).map_err(|side| {
                DiscError::NeedsFullyCompatible { direction: axis, line, side }
            })?;
            penalties.push(if skip_beta { LinePenalty { tau1: 0.0, tau2: 0.0, ..p } } else { p });
        }
        let nnz = offset[n];
        let pack = |ops: &[SecondDerivOp]| {
            let mut vals = vec![0.0; nnz * lines];
            for (line, op) in ops.iter().enumerate() {
                for i in 0..n {
                    let (s, r) = op.a().row(i);
                    debug_assert_eq!((s, r.len()), (start[i], offset[i + 1] - offset[i]));
                    for (k, v) in r.iter().enumerate() {
                        let e = offset[i] + k;
                        let idx = if line_major { line * nnz + e } else { e * lines + line };
                        vals[idx] = *v;
                    }
                }
            }
            vals
        };
        gamma.extend(pack(&gamma_ops));
        if let Some(bv) = beta.as_mut() {
            bv.extend(pack(&beta_ops));
        }
        let gamma_ends = c_lines.iter().map(|c| [c[0], c[n - 1]]).collect();
        let beta_ends = b_lines.iter().map(|b| [b[0], b[n - 1]]).collect();
        let gamma_rows = (set.d_left().clone(), set.d_right().clone());
        let (bl, br) = set.boundary_rows(variant);
        let beta_rows = (bl.clone(), br.clone());
        Ok(Direction {
            n,
            lines,
            line_major,
            set,
            inv_norm,
            start,
            offset,
            gamma,
            beta,
            gamma_rows,
            beta_rows,
            gamma_ends,
            beta_ends,
            penalties,
            ends,
            b_lines,
            c_lines,
            data: None,
        })
    }

    fn line_dot(&self, row: &SparseRow, v: &[f64], line: usize) -> f64 {
        row.coeffs.iter().enumerate().map(|(k, c)| c * v[self.node(line, row.start + k)]).sum()
    }

    fn end_terms(&self, kind: BcKind, t: f64, v: &[f64], w: &[f64]) -> Result<Vec<EndTerms>, DiscError> {
        let h = self.set.h();
        let last = self.n - 1;
        let err = |source| DiscError::Eval { what: "boundary data", source };
        (0..self.lines)
            .map(|line| {
                // imposed value and rate at each end
                let mut g = [[0.0; 2]; 2];
                if let Some(d) = &self.data {
                    for (k, &(x, y)) in self.ends[line].iter().enumerate() {
                        g[0][k] = d.value.eval(x, y, t).map_err(err)?;
                        g[1][k] = d.rate.eval(x, y, t).map_err(err)?;
                    }
                }
                let [c1, cn] = self.gamma_ends[line];
                let [b1, bn] = self.beta_ends[line];
                let with_beta = self.beta.is_some();
                let mut e = EndTerms::default();
                match kind {
                    BcKind::Neumann => {
                        e.first = -c1 * g[0][0];
                        e.last = cn * g[0][1];
                        if with_beta {
                            e.first -= b1 * g[1][0];
                            e.last += bn * g[1][1];
                        }
                    }
                    BcKind::Dirichlet => {
                        let p = self.penalties[line];
                        let (dl, dr) = &self.gamma_rows;
                        let el = v[self.node(line, 0)] - g[0][0];
                        let er = v[self.node(line, last)] - g[0][1];
                        e.first = -c1 * self.line_dot(dl, v, line) - p.tau3 / h * el;
                        e.last = cn * self.line_dot(dr, v, line) - p.tau4 / h * er;
                        e.gamma_left = -c1 * el;
                        e.gamma_right = cn * er;
                        if with_beta {
                            let (dl, dr) = &self.beta_rows;
                            let el = w[self.node(line, 0)] - g[1][0];
                            let er = w[self.node(line, last)] - g[1][1];
                            e.first += -b1 * self.line_dot(dl, w, line) - p.tau1 / h * el;
                            e.last += bn * self.line_dot(dr, w, line) - p.tau2 / h * er;
                            e.beta_left = -b1 * el;
                            e.beta_right = bn * er;
                        }
                    }
                }
                Ok(e)
            })
            .collect()
    }

    fn boundary_row_term(&self, i: usize, e: &EndTerms, kind: BcKind) -> f64 {
        let mut acc = 0.0;
        if i == 0 {
            acc += e.first;
        }
        if i == self.n - 1 {
            acc += e.last;
        }
        if kind == BcKind::Dirichlet {
            acc += row_coeff(&self.gamma_rows.0, i) * e.gamma_left + row_coeff(&self.gamma_rows.1, i) * e.gamma_right;
            if self.beta.is_some() {
                acc += row_coeff(&self.beta_rows.0, i) * e.beta_left + row_coeff(&self.beta_rows.1, i) * e.beta_right;
            }
        }
        acc
    }

    /// Adds this direction's contribution for one contiguous line.
    fn apply_line(&self, line: usize, v: &[f64], w: &[f64], e: &EndTerms, kind: BcKind, out: &mut [f64]) {
        let nnz = self.nnz();
        let gv = &self.gamma[line * nnz..(line + 1) * nnz];
        let bv = self.beta.as_ref().map(|b| &b[line * nnz..(line + 1) * nnz]);
        for i in 0..self.n {
            let (o0, o1, s) = (self.offset[i], self.offset[i + 1], self.start[i]);
            let width = o1 - o0;
            let mut acc: f64 = -gv[o0..o1].iter().zip(&v[s..s + width]).map(|(a, b)| a * b).sum::<f64>();
            if let Some(bv) = bv {
                acc -= bv[o0..o1].iter().zip(&w[s..s + width]).map(|(a, b)| a * b).sum::<f64>();
            }
            if i < self.closure() || i >= self.n - self.closure() {
                acc += self.boundary_row_term(i, e, kind);
            }
            out[i] += self.inv_norm[i] * acc;
        }
    }

    /// Adds this direction's contribution to output row `i` of an
    /// entry-major direction (all lines at once).
    fn apply_row(&self, i: usize, v: &[f64], w: &[f64], ends: &[EndTerms], kind: BcKind, out: &mut [f64]) {
        let l = self.lines;
        let mut acc = vec![0.0; l];
        for e in self.offset[i]..self.offset[i + 1] {
            let col = self.start[i] + e - self.offset[i];
            let g = &self.gamma[e * l..(e + 1) * l];
            let vr = &v[col * l..(col + 1) * l];
            for ((a, c), x) in acc.iter_mut().zip(g).zip(vr) {
                *a -= c * x;
            }
            if let Some(b) = &self.beta {
                let b = &b[e * l..(e + 1) * l];
                let wr = &w[col * l..(col + 1) * l];
                for ((a, c), x) in acc.iter_mut().zip(b).zip(wr) {
                    *a -= c * x;
                }
            }
        }
        if i < self.closure() || i >= self.n - self.closure() {
            for (a, t) in acc.iter_mut().zip(ends) {
                *a += self.boundary_row_term(i, t, kind);
            }
        }
        let s = self.inv_norm[i];
        for (o, a) in out.iter_mut().zip(&acc) {
            *o += s * a;
        }
    }

    /// Rows that can receive boundary terms.
    fn closure(&self) -> usize {
        let len = |r: &SparseRow| r.coeffs.len();
        len(&self.gamma_rows.0).max(len(&self.beta_rows.0)).max(1)
    }

    /// `sum_lines weight * E_line(v)` where `E_line` is the line's part of
    /// the potential energy.
    fn potential_energy(&self, kind: BcKind, v: &[f64], weight: &dyn Fn(usize) -> f64) -> f64 {
        let h = self.set.h();
        let last = self.n - 1;
        (0..self.lines)
            .map(|line| {
                let mut e = 0.0;
                for i in 0..self.n {
                    let vi = v[self.node(line, i)];
                    let mut av = 0.0;
                    for k in self.offset[i]..self.offset[i + 1] {
                        let col = self.start[i] + k - self.offset[i];
                        av += self.coeff(&self.gamma, line, k) * v[self.node(line, col)];
                    }
                    e += 0.5 * vi * av;
                }
                if kind == BcKind::Dirichlet {
                    let p = self.penalties[line];
                    let [c1, cn] = self.gamma_ends[line];
                    let (v1, vn) = (v[self.node(line, 0)], v[self.node(line, last)]);
                    e += c1 * v1 * self.line_dot(&self.gamma_rows.0, v, line) + p.tau3 / (2.0 * h) * v1 * v1;
                    e += -cn * vn * self.line_dot(&self.gamma_rows.1, v, line) + p.tau4 / (2.0 * h) * vn * vn;
                }
                weight(line) * e
            })
            .sum()
    }

    /// `sum_lines weight * w^T A^(beta^2) w`.
    fn viscous_dissipation(&self, w: &[f64], weight: &dyn Fn(usize) -> f64) -> f64 {
        let Some(b) = &self.beta else { return 0.0 };
        (0..self.lines)
            .map(|line| {
                let mut e = 0.0;
                for i in 0..self.n {
                    let mut aw = 0.0;
                    for k in self.offset[i]..self.offset[i + 1] {
                        let col = self.start[i] + k - self.offset[i];
                        aw += self.coeff(b, line, k) * w[self.node(line, col)];
                    }
                    e += w[self.node(line, i)] * aw;
                }
                weight(line) * e
            })
            .sum()
    }
}

fn row_coeff(row: &SparseRow, i: usize) -> f64 {
    if i >= row.start && i < row.start + row.coeffs.len() {
        row.coeffs[i - row.start]
    } else {
        0.0
    }
}

#[derive(Clone, Debug)]
pub struct State {
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub t: f64,
}

/// Assembled spatial operator.
#[derive(Clone, Debug)]
pub struct Semidiscretization {
    grid: Grid,
    order: usize,
    kind: BcKind,
    variant: Variant,
    regime: BetaRegime,
    fields: SampledFields,
    alpha: Vec<f64>,
    norm: Vec<f64>,
    x: Direction,
    y: Option<Direction>,
    forcing: Forcing,
    safety: f64,
}

impl Semidiscretization {
    pub fn assemble(problem: &Problem, order: usize) -> Result<Self, DiscError> {
        problem.validate()?;
        let grid = problem.grid.clone();
        let fields = sample_fields(&problem.fields, &grid)?;
        let (gx, gy) = grid.axes();
        let set_x = SbpOperatorSet::new(order, gx.n, gx.h)?;
        let set_y = gy.map(|g| SbpOperatorSet::new(order, g.n, g.h)).transpose()?;
        let variant = problem.variant;
        if variant == Variant::FullyCompatible && order == 6 {
            return Err(DiscError::IncompatibleOperator(order));
        }
        let regime = classify_beta_grid(&grid, &fields.beta, set_x.m());
        let skip_beta = fields.beta_vanishes();
        let b = fields.beta_squared();
        let c = fields.gamma_squared();
        let safety = problem.penalty_safety;
        let (x, y) = match &grid {
            Grid::One(g) => {
                let ends = vec![[(g.x_min, 0.0), (g.x_max, 0.0)]];
                (Direction::build('x', set_x, true, vec![b], vec![c], skip_beta, safety, variant, ends)?, None)
            }
            Grid::Two(g) => {
                let (nx, ny) = (g.x.n, g.y.n);
                let xl = |v: &[f64], j: usize| (0..nx).map(|i| v[i * ny + j]).collect::<Vec<_>>();
                let yl = |v: &[f64], i: usize| v[i * ny..(i + 1) * ny].to_vec();
                let ys = g.y.nodes();
                let xs = g.x.nodes();
                let xe = ys.iter().map(|&y| [(g.x.x_min, y), (g.x.x_max, y)]).collect();
                let ye = xs.iter().map(|&x| [(x, g.y.x_min), (x, g.y.x_max)]).collect();
                let dx = Direction::build(
                    'x',
                    set_x,
                    false,
                    (0..ny).map(|j| xl(&b, j)).collect(),
                    (0..ny).map(|j| xl(&c, j)).collect(),
                    skip_beta,
                    safety,
                    variant,
                    xe,
                )?;
                let dy = Direction::build(
                    'y',
                    set_y.expect("2D grid has a y axis"),
                    true,
                    (0..nx).map(|i| yl(&b, i)).collect(),
                    (0..nx).map(|i| yl(&c, i)).collect(),
                    skip_beta,
                    safety,
                    variant,
                    ye,
                )?;
                (dx, Some(dy))
            }
        };
        let mut sd = Semidiscretization {
            alpha: fields.alpha.clone(),
            norm: Vec::new(),
            forcing: Forcing::new(problem.forcing.as_ref(), &grid)?,
            grid,
            order,
            kind: problem.bc.kind,
            variant,
            regime,
            fields,
            x,
            y,
            safety,
        };
        sd.norm = (0..sd.len()).map(|k| sd.norm_weight(k)).collect();
        if let Some(g) = &problem.bc.data {
            sd.set_boundary_data(g);
        }
        Ok(sd)
    }

    fn set_boundary_data(&mut self, g: &Expr) {
        let kind = self.kind;
        let make = |axis: Var| {
            let value = match kind {
                BcKind::Dirichlet => g.clone(),
                BcKind::Neumann => g.diff(axis),
            };
            let rate = value.diff(Var::T);
            DirectionData { value, rate }
        };
        self.x.data = Some(make(Var::X));
        if let Some(y) = self.y.as_mut() {
            y.data = Some(make(Var::Y));
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bc_kind(&self) -> BcKind {
        self.kind
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn regime(&self) -> BetaRegime {
        self.regime
    }

    pub fn fields(&self) -> &SampledFields {
        &self.fields
    }

    pub fn has_viscous_term(&self) -> bool {
        self.x.beta.is_some()
    }

    pub fn penalties(&self) -> PenaltySet {
        PenaltySet {
            safety: self.safety,
            variant: self.variant,
            x: self.x.penalties.clone(),
            y: self.y.as_ref().map(|d| d.penalties.clone()).unwrap_or_default(),
        }
    }

    pub fn sbp_x(&self) -> &SbpOperatorSet {
        &self.x.set
    }

    pub fn sbp_y(&self) -> Option<&SbpOperatorSet> {
        self.y.as_ref().map(|d| &d.set)
    }

    /// Diagonal of the norm `H_x (x) H_y` in grid order.
    pub fn norm(&self) -> &[f64] {
        &self.norm
    }

    fn norm_weight(&self, k: usize) -> f64 {
        match &self.y {
            None => self.x.set.norm_weight(k),
            Some(y) => {
                let (i, j) = (k / y.n, k % y.n);
                self.x.set.norm_weight(i) * y.set.norm_weight(j)
            }
        }
    }

    fn check(&self, len: usize) -> Result<(), DiscError> {
        if len == self.len() {
            Ok(())
        } else {
            Err(DiscError::Shape { expected: self.len(), got: len })
        }
    }

    /// Samples the forcing at time `t`.
    pub fn forcing(&self, t: f64, out: &mut [f64]) -> Result<(), DiscError> {
        self.check(out.len())?;
        self.forcing.write(t, out)
    }

    /// `out = G(v, w, t)` with the problem's own forcing.
    pub fn rhs(&self, t: f64, v: &[f64], w: &[f64], out: &mut [f64]) -> Result<(), DiscError> {
        self.check(out.len())?;
        self.forcing.write(t, out)?;
        self.add_spatial(t, v, w, out)
    }

    /// `out = G(v, w, t)` with an externally sampled forcing `f`.
    pub fn rhs_with_forcing(&self, t: f64, v: &[f64], w: &[f64], f: &[f64], out: &mut [f64]) -> Result<(), DiscError> {
        self.check(f.len())?;
        self.check(out.len())?;
        out.copy_from_slice(f);
        self.add_spatial(t, v, w, out)
    }

    pub fn rhs_apply(&self, state: &State, f: &[f64]) -> Result<Vec<f64>, DiscError> {
        let mut out = vec![0.0; self.len()];
        self.rhs_with_forcing(state.t, &state.v, &state.w, f, &mut out)?;
        Ok(out)
    }

    fn add_spatial(&self, t: f64, v: &[f64], w: &[f64], out: &mut [f64]) -> Result<(), DiscError> {
        self.check(v.len())?;
        self.check(w.len())?;
        for ((o, a), x) in out.iter_mut().zip(&self.alpha).zip(w) {
            *o -= a * x;
        }
        let kind = self.kind;
        let ex = self.x.end_terms(kind, t, v, w)?;
        match &self.y {
            None => self.x.apply_line(0, v, w, &ex[0], kind, out),
            Some(y) => {
                let ey = y.end_terms(kind, t, v, w)?;
                let ny = y.n;
                out.par_chunks_mut(ny).enumerate().for_each(|(i, chunk)| {
                    self.x.apply_row(i, v, w, &ex, kind, chunk);
                    let s = i * ny..(i + 1) * ny;
                    y.apply_line(i, &v[s.clone()], &w[s], &ey[i], kind, chunk);
                });
            }
        }
        Ok(())
    }

    /// Discrete energy of a state: kinetic part in the `H` norm plus the
    /// potential part from `A^(gamma^2)` and, for Dirichlet conditions, the
    /// boundary and penalty terms.
    pub fn energy(&self, v: &[f64], w: &[f64]) -> f64 {
        let kinetic: f64 = 0.5 * self.norm.iter().zip(w).map(|(h, x)| h * x * x).sum::<f64>();
        kinetic + self.potential(v)
    }

    fn potential(&self, v: &[f64]) -> f64 {
        match &self.y {
            None => self.x.potential_energy(self.kind, v, &|_| 1.0),
            Some(y) => {
                let xs = &self.x.set;
                self.x.potential_energy(self.kind, v, &|j| y.set.norm_weight(j))
                    + y.potential_energy(self.kind, v, &|i| xs.norm_weight(i))
            }
        }
    }

    /// `||w||^2_{H Lambda_alpha} + ||w||^2_{A^(beta^2)}`: the energy decay
    /// rate of the Neumann problem without forcing.
    pub fn dissipation(&self, w: &[f64]) -> f64 {
        let damping: f64 = self.norm.iter().zip(&self.alpha).zip(w).map(|((h, a), x)| h * a * x * x).sum();
        let viscous = match &self.y {
            None => self.x.viscous_dissipation(w, &|_| 1.0),
            Some(y) => {
                let xs = &self.x.set;
                self.x.viscous_dissipation(w, &|j| y.set.norm_weight(j))
                    + y.viscous_dissipation(w, &|i| xs.norm_weight(i))
            }
        };
        damping + viscous
    }

    /// Dense matrices `K_v`, `K_w` with `G = f + K_v v + K_w w` for
    /// homogeneous boundary data, assembled from dense one-dimensional
    /// operators and Kronecker sums. Intended for small grids.
    pub fn dense_operator(&self) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>), DiscError> {
        let n = self.len();
        let mut kv = vec![vec![0.0; n]; n];
        let mut kw = vec![vec![0.0; n]; n];
        for k in 0..n {
            kw[k][k] -= self.alpha[k];
        }
        for dir in std::iter::once(&self.x).chain(self.y.as_ref()) {
            let (dv, dw) = dense_line_operators(dir, self.kind, self.variant)?;
            for line in 0..dir.lines {
                for i in 0..dir.n {
                    for j in 0..dir.n {
                        let (r, c) = (dir.node(line, i), dir.node(line, j));
                        kv[r][c] += dv[line][i][j];
                        kw[r][c] += dw[line][i][j];
                    }
                }
            }
        }
        Ok((kv, kw))
    }
}

type Dense = Vec<Vec<f64>>;

/// Dense `K_v`, `K_w` of each line, written directly from the SAT formulas.
fn dense_line_operators(dir: &Direction, kind: BcKind, variant: Variant) -> Result<(Vec<Dense>, Vec<Dense>), DiscError> {
    let set = &dir.set;
    let n = dir.n;
    let h = set.h();
    let mut out_v = Vec::with_capacity(dir.lines);
    let mut out_w = Vec::with_capacity(dir.lines);
    for line in 0..dir.lines {
        let c = &dir.c_lines[line];
        let b = &dir.b_lines[line];
        let p = dir.penalties[line];
        let mut kv = SecondDerivOp::new(set, c, Variant::Standard)?.dense();
        let mut kw = if dir.beta.is_some() {
            SecondDerivOp::new(set, b, variant)?.dense()
        } else {
            vec![vec![0.0; n]; n]
        };
        let std_rows = (set.d_left().to_dense(n), set.d_right().to_dense(n));
        let (bl, br) = set.boundary_rows(variant);
        let var_rows = (bl.to_dense(n), br.to_dense(n));
        let subtract = |k: &mut Dense, coef: (f64, f64), rows: &(Vec<f64>, Vec<f64>), tau: (f64, f64)| {
            // boundary matrix B = -c1 e1 d1^T + cn en dn^T
            let mut bm = vec![vec![0.0; n]; n];
            for j in 0..n {
                bm[0][j] -= coef.0 * rows.0[j];
                bm[n - 1][j] += coef.1 * rows.1[j];
            }
            let mut f = vec![vec![0.0; n]; n];
            match kind {
                BcKind::Neumann => f = bm,
                BcKind::Dirichlet => {
                    for i in 0..n {
                        for j in 0..n {
                            f[i][j] = -bm[j][i];
                        }
                    }
                    f[0][0] += tau.0 / h;
                    f[n - 1][n - 1] += tau.1 / h;
                }
            }
            for i in 0..n {
                let hinv = 1.0 / set.norm_weight(i);
                for j in 0..n {
                    k[i][j] -= hinv * f[i][j];
                }
            }
        };
        subtract(&mut kv, (c[0], c[n - 1]), &std_rows, (p.tau3, p.tau4));
        if dir.beta.is_some() {
            subtract(&mut kw, (b[0], b[n - 1]), &var_rows, (p.tau1, p.tau2));
        }
        out_v.push(kv);
        out_w.push(kw);
    }
    Ok((out_v, out_w))
}

/// Penalty set for a problem without assembling the operators.
pub fn compute_penalties(problem: &Problem, order: usize) -> Result<PenaltySet, DiscError> {
    Ok(Semidiscretization::assemble(problem, order)?.penalties())
}

/// Maximum violation of `E(t_{k+1}) <= E(t_k) + tol` along an energy series.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub max_increase: f64,
    pub worst_step: Option<usize>,
    pub monotone: bool,
}

pub fn energy_rate_bound_check(energies: &[f64], tol: f64) -> EnergyReport {
    let mut max_increase = f64::NEG_INFINITY;
    let mut worst_step = None;
    for (k, w) in energies.windows(2).enumerate() {
        let inc = w[1] - w[0];
        if inc > max_increase {
            max_increase = inc;
            worst_step = Some(k);
        }
    }
    if worst_step.is_none() {
        max_increase = 0.0;
    }
    EnergyReport { max_increase, worst_step, monotone: max_increase <= tol }
}

#[cfg(test)]
mod tests;
