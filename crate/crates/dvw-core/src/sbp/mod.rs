//! Diagonal-norm summation-by-parts operators of interior order 2, 4 and 6.
//!
//! The variable-coefficient second derivative is built from local matrices:
//! `M(b) = sum_j b_j P_j`, with boundary-modified `P_j` for the first few
//! nodes and a translated interior matrix elsewhere. Each local matrix is
//! symmetric positive semidefinite with zero row sums, so `A(b) = M(b)/h` is
//! symmetric positive semidefinite for every `b >= 0`.

mod tables;
pub mod verify;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SbpError {
    #[error("unsupported accuracy order {0} (expected 2, 4 or 6)")]
    UnsupportedOrder(usize),
    #[error("order {order} needs at least {min} grid points, got {n}")]
    TooFewPoints { order: usize, n: usize, min: usize },
    #[error("grid spacing must be positive and finite, got {0}")]
    BadSpacing(f64),
    #[error("coefficient sample {index} is negative ({value})")]
    NegativeCoefficient { index: usize, value: f64 },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("borrowing bisection did not bracket: {0}")]
    Bisection(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Standard,
    FullyCompatible,
}

/// Static description of one operator family at unit spacing.
pub(crate) struct Family {
    pub weights: &'static [f64],
    pub d1_rows: &'static [&'static [f64]],
    pub d1_interior: &'static [f64],
    pub boundary_derivative: &'static [f64],
    pub interior_local: &'static [&'static [f64]],
    pub boundary_local: Vec<Vec<Vec<f64>>>,
    pub m: usize,
}

impl Family {
    fn half_width(&self) -> usize {
        (self.interior_local.len() - 1) / 2
    }

    fn block(&self) -> usize {
        self.boundary_local[0].len()
    }

    fn closures(&self) -> usize {
        self.boundary_local.len()
    }

    fn min_points(&self) -> usize {
        (2 * self.block()).max(2 * self.weights.len() + 1)
    }
}

const W2: [f64; 1] = [0.5];
const W4: [f64; 4] = [17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0];
const W6: [f64; 6] = [
    13649.0 / 43200.0,
    12013.0 / 8640.0,
    2711.0 / 4320.0,
    5359.0 / 4320.0,
    7877.0 / 8640.0,
    43801.0 / 43200.0,
];

const D1_2: [&[f64]; 1] = [&[-1.0, 1.0]];
const D1_4: [&[f64]; 4] = [
    &[-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0],
    &[-1.0 / 2.0, 0.0, 1.0 / 2.0],
    &[4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0],
    &[3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0],
];
const D1_6: [&[f64]; 6] = [
    &[
        -21600.0 / 13649.0,
        104009.0 / 54596.0,
        30443.0 / 81894.0,
        -33311.0 / 27298.0,
        16863.0 / 27298.0,
        -15025.0 / 163788.0,
    ],
    &[-104009.0 / 240260.0, 0.0, -311.0 / 72078.0, 20229.0 / 24026.0, -24337.0 / 48052.0, 36661.0 / 360390.0],
    &[-30443.0 / 162660.0, 311.0 / 32532.0, 0.0, -11155.0 / 16266.0, 41287.0 / 32532.0, -21999.0 / 54220.0],
    &[
        33311.0 / 107180.0,
        -20229.0 / 21436.0,
        485.0 / 1398.0,
        0.0,
        4147.0 / 21436.0,
        25427.0 / 321540.0,
        72.0 / 5359.0,
    ],
    &[
        -16863.0 / 78770.0,
        24337.0 / 31508.0,
        -41287.0 / 47262.0,
        -4147.0 / 15754.0,
        0.0,
        342523.0 / 472620.0,
        -1296.0 / 7877.0,
        144.0 / 7877.0,
    ],
    &[
        15025.0 / 525612.0,
        -36661.0 / 262806.0,
        21999.0 / 87602.0,
        -25427.0 / 262806.0,
        -342523.0 / 525612.0,
        0.0,
        32400.0 / 43801.0,
        -6480.0 / 43801.0,
        720.0 / 43801.0,
    ],
];

const C2: [f64; 3] = [-0.5, 0.0, 0.5];
const C4: [f64; 5] = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
const C6: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];

const BD2: [f64; 3] = [-3.0 / 2.0, 2.0, -1.0 / 2.0];
const BD4: [f64; 4] = [-11.0 / 6.0, 3.0, -3.0 / 2.0, 1.0 / 3.0];
const BD6: [f64; 5] = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0];

fn rows<const N: usize>(m: &'static [[f64; N]]) -> Vec<&'static [f64]> {
    m.iter().map(|r| r.as_slice()).collect()
}

fn blocks<const N: usize>(b: &[[[f64; N]; N]]) -> Vec<Vec<Vec<f64>>> {
    b.iter().map(|m| m.iter().map(|r| r.to_vec()).collect()).collect()
}

fn leak_rows<const N: usize>(m: &'static [[f64; N]]) -> &'static [&'static [f64]] {
    Box::leak(rows(m).into_boxed_slice())
}

pub(crate) fn family(order: usize) -> Result<&'static Family, SbpError> {
    static F2: OnceLock<Family> = OnceLock::new();
    static F4: OnceLock<Family> = OnceLock::new();
    static F6: OnceLock<Family> = OnceLock::new();
    match order {
        2 => Ok(F2.get_or_init(|| Family {
            weights: &W2,
            d1_rows: &D1_2,
            d1_interior: &C2,
            boundary_derivative: &BD2,
            interior_local: leak_rows(&tables::LOCAL2),
            boundary_local: blocks(&tables::BOUNDARY2),
            m: 2,
        })),
        4 => Ok(F4.get_or_init(|| Family {
            weights: &W4,
            d1_rows: &D1_4,
            d1_interior: &C4,
            boundary_derivative: &BD4,
            interior_local: leak_rows(&tables::LOCAL4),
            boundary_local: blocks(&tables::BOUNDARY4),
            m: 4,
        })),
        6 => Ok(F6.get_or_init(|| Family {
            weights: &W6,
            d1_rows: &D1_6,
            d1_interior: &C6,
            boundary_derivative: &BD6,
            interior_local: leak_rows(&tables::LOCAL6),
            boundary_local: blocks(&tables::BOUNDARY6),
            m: 6,
        })),
        other => Err(SbpError::UnsupportedOrder(other)),
    }
}

/// Smallest admissible grid for an order.
pub fn min_points(order: usize) -> Result<usize, SbpError> {
    Ok(family(order)?.min_points())
}

/// A row vector with a contiguous run of nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRow {
    pub start: usize,
    pub coeffs: Vec<f64>,
}

impl SparseRow {
    pub fn dot(&self, v: &[f64]) -> f64 {
        self.coeffs.iter().zip(&v[self.start..]).map(|(c, x)| c * x).sum()
    }

    /// Strided variant: entry `k` of the row pairs with `v[offset + k * stride]`.
    pub fn dot_strided(&self, v: &[f64], offset: usize, stride: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * v[offset + (self.start + k) * stride])
            .sum()
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        out[self.start..self.start + self.coeffs.len()].copy_from_slice(&self.coeffs);
        out
    }
}

/// Row-compressed matrix whose rows are contiguous column ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix {
    n: usize,
    start: Vec<usize>,
    offset: Vec<usize>,
    values: Vec<f64>,
}

impl BandMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> (usize, &[f64]) {
        (self.start[i], &self.values[self.offset[i]..self.offset[i + 1]])
    }

    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let (s, r) = self.row(i);
            *o = r.iter().zip(&v[s..s + r.len()]).map(|(a, b)| a * b).sum();
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            let (s, r) = self.row(i);
            row[s..s + r.len()].copy_from_slice(r);
        }
        d
    }

    fn scale(&mut self, s: f64) {
        self.values.iter_mut().for_each(|v| *v *= s);
    }
}

/// Placement of one local matrix `P_j` in the global index space.
struct Placement<'a> {
    offset: usize,
    size: usize,
    reflect: bool,
    entries: LocalRef<'a>,
}

enum LocalRef<'a> {
    Boundary(&'a [Vec<f64>]),
    Interior(&'a [&'static [f64]]),
}

impl Placement<'_> {
    fn get(&self, r: usize, c: usize) -> f64 {
        let (r, c) = if self.reflect { (self.size - 1 - r, self.size - 1 - c) } else { (r, c) };
        match &self.entries {
            LocalRef::Boundary(m) => m[r][c],
            LocalRef::Interior(m) => m[r][c],
        }
    }
}

fn placement(fam: &Family, n: usize, j: usize) -> Placement<'_> {
    let nb = fam.closures();
    let bw = fam.block();
    let s = fam.half_width();
    if j < nb {
        Placement { offset: 0, size: bw, reflect: false, entries: LocalRef::Boundary(&fam.boundary_local[j]) }
    } else if j >= n - nb {
        let k = n - 1 - j;
        Placement { offset: n - bw, size: bw, reflect: true, entries: LocalRef::Boundary(&fam.boundary_local[k]) }
    } else {
        Placement { offset: j - s, size: 2 * s + 1, reflect: false, entries: LocalRef::Interior(fam.interior_local) }
    }
}

/// Unit-spacing `M(b) = sum_j b_j P_j`.
pub(crate) fn assemble_local_sum(fam: &Family, b: &[f64]) -> BandMatrix {
    let n = b.len();
    let mut lo = vec![usize::MAX; n];
    let mut hi = vec![0usize; n];
    let mut places = Vec::with_capacity(n);
    for j in 0..n {
        let p = placement(fam, n, j);
        for r in 0..p.size {
            for c in 0..p.size {
                if p.get(r, c) != 0.0 {
                    let (gr, gc) = (p.offset + r, p.offset + c);
                    lo[gr] = lo[gr].min(gc);
                    hi[gr] = hi[gr].max(gc);
                }
            }
        }
        places.push(p);
    }
    let mut offset = Vec::with_capacity(n + 1);
    offset.push(0);
    for i in 0..n {
        if lo[i] == usize::MAX {
            lo[i] = i;
            hi[i] = i;
        }
        offset.push(offset[i] + hi[i] - lo[i] + 1);
    }
    let mut values = vec![0.0; offset[n]];
    for (j, p) in places.iter().enumerate() {
        if b[j] == 0.0 {
            continue;
        }
        for r in 0..p.size {
            let gr = p.offset + r;
            for c in 0..p.size {
                let v = p.get(r, c);
                if v != 0.0 {
                    let gc = p.offset + c;
                    values[offset[gr] + gc - lo[gr]] += b[j] * v;
                }
            }
        }
    }
    BandMatrix { n, start: lo, offset, values }
}

/// One-dimensional operator set on a uniform grid.
#[derive(Clone, Debug)]
pub struct SbpOperatorSet {
    order: usize,
    n: usize,
    h: f64,
    omega: Vec<f64>,
    d1: Vec<SparseRow>,
    d_left: SparseRow,
    d_right: SparseRow,
    theta: f64,
    m: usize,
}

impl SbpOperatorSet {
    pub fn new(order: usize, n: usize, h: f64) -> Result<Self, SbpError> {
        let fam = family(order)?;
        let min = fam.min_points();
        if n < min {
            return Err(SbpError::TooFewPoints { order, n, min });
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(SbpError::BadSpacing(h));
        }
        let k = fam.weights.len();
        let mut omega = vec![1.0; n];
        omega[..k].copy_from_slice(fam.weights);
        for (i, w) in fam.weights.iter().enumerate() {
            omega[n - 1 - i] = *w;
        }
        let s = fam.d1_interior.len() / 2;
        let mut d1 = Vec::with_capacity(n);
        for row in fam.d1_rows {
            d1.push(SparseRow { start: 0, coeffs: row.iter().map(|c| c / h).collect() });
        }
        for i in k..n - k {
            d1.push(SparseRow { start: i - s, coeffs: fam.d1_interior.iter().map(|c| c / h).collect() });
        }
        for row in fam.d1_rows.iter().rev() {
            let coeffs: Vec<f64> = row.iter().rev().map(|c| -c / h).collect();
            d1.push(SparseRow { start: n - coeffs.len(), coeffs });
        }
        let bd = fam.boundary_derivative;
        let d_left = SparseRow { start: 0, coeffs: bd.iter().map(|c| c / h).collect() };
        let d_right = SparseRow { start: n - bd.len(), coeffs: bd.iter().rev().map(|c| -c / h).collect() };
        let theta = borrowing_theta(order)?;
        Ok(SbpOperatorSet { order, n, h, omega, d1, d_left, d_right, theta, m: fam.m })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Norm weights `omega_i` (the norm is `h * omega_i`).
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn omega1(&self) -> f64 {
        self.omega[0]
    }

    pub fn norm_weight(&self, i: usize) -> f64 {
        self.h * self.omega[i]
    }

    pub fn d1_row(&self, i: usize) -> &SparseRow {
        &self.d1[i]
    }

    pub fn d_left(&self) -> &SparseRow {
        &self.d_left
    }

    pub fn d_right(&self) -> &SparseRow {
        &self.d_right
    }

    pub fn dhat_left(&self) -> &SparseRow {
        &self.d1[0]
    }

    pub fn dhat_right(&self) -> &SparseRow {
        &self.d1[self.n - 1]
    }

    /// Boundary derivative rows for a variant.
    pub fn boundary_rows(&self, variant: Variant) -> (&SparseRow, &SparseRow) {
        match variant {
            Variant::Standard => (&self.d_left, &self.d_right),
            Variant::FullyCompatible => (self.dhat_left(), self.dhat_right()),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of boundary-closure rows of the first-derivative operator.
    pub fn closure_width(&self) -> usize {
        family(self.order).map(|f| f.weights.len()).unwrap_or(0)
    }

    pub fn apply_d1(&self, v: &[f64], out: &mut [f64]) -> Result<(), SbpError> {
        check_len(self.n, v.len())?;
        check_len(self.n, out.len())?;
        for (o, row) in out.iter_mut().zip(&self.d1) {
            *o = row.dot(v);
        }
        Ok(())
    }

    pub fn dense_d1(&self) -> Vec<Vec<f64>> {
        self.d1.iter().map(|r| r.to_dense(self.n)).collect()
    }

    /// Copy with one first-derivative coefficient shifted by `delta / h`,
    /// for checking that the verification suite notices corrupted tables.
    #[doc(hidden)]
    pub fn with_perturbed_d1(&self, row: usize, k: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.d1[row].coeffs[k] += delta / self.h;
        out
    }
}

fn check_len(expected: usize, got: usize) -> Result<(), SbpError> {
    if expected == got {
        Ok(())
    } else {
        Err(SbpError::LengthMismatch { expected, got })
    }
}

/// Second-derivative operator `D2^(b)` for fixed coefficient samples.
#[derive(Clone, Debug)]
pub struct SecondDerivOp {
    n: usize,
    variant: Variant,
    a: BandMatrix,
    inv_norm: Vec<f64>,
    b_first: f64,
    b_last: f64,
    left: SparseRow,
    right: SparseRow,
    b_left_min: f64,
    b_right_min: f64,
}

impl SecondDerivOp {
    pub fn new(set: &SbpOperatorSet, b: &[f64], variant: Variant) -> Result<Self, SbpError> {
        check_len(set.n, b.len())?;
        if let Some((index, &value)) = b.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(SbpError::NegativeCoefficient { index, value });
        }
        let fam = family(set.order)?;
        let mut a = assemble_local_sum(fam, b);
        a.scale(1.0 / set.h);
        let (l, r) = set.boundary_rows(variant);
        let n = set.n;
        let m = set.m.min(n);
        let b_left_min = b[..m].iter().cloned().fold(f64::INFINITY, f64::min);
        let b_right_min = b[n - m..].iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(SecondDerivOp {
            n,
            variant,
            a,
            inv_norm: (0..n).map(|i| 1.0 / set.norm_weight(i)).collect(),
            b_first: b[0],
            b_last: b[n - 1],
            left: l.clone(),
            right: r.clone(),
            b_left_min,
            b_right_min,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The symmetric positive semidefinite matrix `A^(b)`.
    pub fn a(&self) -> &BandMatrix {
        &self.a
    }

    pub fn boundary_rows(&self) -> (&SparseRow, &SparseRow) {
        (&self.left, &self.right)
    }

    pub fn boundary_coefficients(&self) -> (f64, f64) {
        (self.b_first, self.b_last)
    }

    /// Minima of `b` over the borrowing windows at each end.
    pub fn borrowing_minima(&self) -> (f64, f64) {
        (self.b_left_min, self.b_right_min)
    }

    /// `out = D2^(b) v`.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) -> Result<(), SbpError> {
        check_len(self.n, v.len())?;
        check_len(self.n, out.len())?;
        self.a.apply(v, out);
        let n = self.n;
        out[0] += self.b_first * self.left.dot(v);
        out[n - 1] -= self.b_last * self.right.dot(v);
        for (o, w) in out.iter_mut().zip(&self.inv_norm) {
            *o *= -w;
        }
        Ok(())
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut d = self.a.to_dense();
        let l = self.left.to_dense(n);
        let r = self.right.to_dense(n);
        for c in 0..n {
            d[0][c] += self.b_first * l[c];
            d[n - 1][c] -= self.b_last * r[c];
        }
        for (row, w) in d.iter_mut().zip(&self.inv_norm) {
            row.iter_mut().for_each(|x| *x *= -w);
        }
        d
    }

    /// Dense `A~ = A - h theta (b_lmin d_l d_l^T + b_rmin d_r d_r^T)`.
    pub fn dense_a_tilde(&self, set: &SbpOperatorSet) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut d = self.a.to_dense();
        let (l, r) = (set.d_left().to_dense(n), set.d_right().to_dense(n));
        let c = set.h() * set.theta();
        for i in 0..n {
            for j in 0..n {
                d[i][j] -= c * (self.b_left_min * l[i] * l[j] + self.b_right_min * r[i] * r[j]);
            }
        }
        d
    }
}

/// Sum of the first `m` local matrices at unit spacing, restricted to its support.
fn borrowing_window(fam: &Family, m: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = 2 * fam.min_points();
    let mut b = vec![0.0; n];
    b[..m].iter_mut().for_each(|v| *v = 1.0);
    let dense = assemble_local_sum(fam, &b).to_dense();
    let width = (0..n).filter(|&i| dense[i].iter().any(|v| *v != 0.0)).max().unwrap_or(0) + 1;
    let width = width.max(fam.boundary_derivative.len());
    let s: Vec<Vec<f64>> = dense[..width].iter().map(|r| r[..width].to_vec()).collect();
    let mut d = vec![0.0; width];
    d[..fam.boundary_derivative.len()].copy_from_slice(fam.boundary_derivative);
    (s, d)
}

/// True when `S - theta d d^T` is positive semidefinite on a window whose only
/// null direction is the constant vector.
fn borrowing_holds(s: &[Vec<f64>], d: &[f64], theta: f64) -> bool {
    // constants are in the null space of both terms, so drop the last coordinate
    let k = s.len() - 1;
    DMatrix::from_fn(k, k, |i, j| s[i][j] - theta * d[i] * d[j]).cholesky().is_some()
}

fn bisect_theta(s: &[Vec<f64>], d: &[f64]) -> Result<f64, SbpError> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    if !borrowing_holds(s, d, 1e-12) {
        return Err(SbpError::Bisection("remainder is not positive definite at theta = 0".into()));
    }
    while borrowing_holds(s, d, hi) {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(SbpError::Bisection("no upper bracket below 1e6".into()));
        }
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if borrowing_holds(s, d, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest `theta` with `sum_{j<m} P_j - theta d d^T` positive semidefinite.
///
/// Because `M(b) >= b_min * sum_{j<m} P_j` near a boundary whenever
/// `b_j >= b_min` on the first `m` nodes, this value is valid for every
/// coefficient. It is independent of `n`, `h` and any scaling of `b`.
pub fn compute_borrowing(order: usize) -> Result<(f64, usize), SbpError> {
    let fam = family(order)?;
    Ok((borrowing_theta(order)?, fam.m))
}

fn borrowing_theta(order: usize) -> Result<f64, SbpError> {
    static CACHE: OnceLock<[Option<f64>; 3]> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut out = [None; 3];
        for (slot, ord) in out.iter_mut().zip([2usize, 4, 6]) {
            let fam = family(ord).expect("built-in family");
            let (s, d) = borrowing_window(fam, fam.m);
            *slot = bisect_theta(&s, &d).ok();
        }
        out
    });
    let idx = match order {
        2 => 0,
        4 => 1,
        6 => 2,
        other => return Err(SbpError::UnsupportedOrder(other)),
    };
    cache[idx].ok_or_else(|| SbpError::Bisection(format!("order {order}")))
}

/// Largest `theta` keeping `A(1) - h theta (d_l d_l^T + d_r d_r^T)` positive
/// semidefinite on an `n`-point grid: the sharp constant-coefficient value.
pub fn constant_coefficient_theta(order: usize, n: usize) -> Result<f64, SbpError> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("theta cache").get(&(order, n)) {
        return Ok(*v);
    }
    let v = sharp_theta(order, n)?;
    cache.lock().expect("theta cache").insert((order, n), v);
    Ok(v)
}

fn sharp_theta(order: usize, n: usize) -> Result<f64, SbpError> {
    let set = SbpOperatorSet::new(order, n, 1.0)?;
    let op = SecondDerivOp::new(&set, &vec![1.0; n], Variant::Standard)?;
    let a = op.a().to_dense();
    let l = set.d_left().to_dense(n);
    let r = set.d_right().to_dense(n);
    let k = n - 1;
    let test = |theta: f64| {
        DMatrix::from_fn(k, k, |i, j| a[i][j] - theta * (l[i] * l[j] + r[i] * r[j]))
            .cholesky()
            .is_some()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if !test(1e-12) || test(hi) {
        return Err(SbpError::Bisection(format!("constant-coefficient theta, order {order}, n {n}")));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if test(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests;
