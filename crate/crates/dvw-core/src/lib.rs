//! SBP-SAT finite difference discretizations of the diffusive viscous wave
//! equation `u_tt + alpha u_t - div(beta^2 grad u)_t - div(gamma^2 grad u) = f`.

pub mod disc;
pub mod expr;
pub mod mms;
pub mod model;
pub mod normal_mode;
pub mod sbp;
pub mod timeint;

pub use expr::{EvalError, Expr, ParseError, Var};
pub use disc::{DiscError, Semidiscretization, State};
pub use model::{BcKind, BoundaryCondition, Grid, Grid1D, Grid2D, MaterialFields, Problem};
pub use sbp::{SbpError, SbpOperatorSet, SecondDerivOp, Variant};
