//! Classical fourth-order Runge-Kutta integration of `v_tt = G(v, v_t, t)`
//! written as a first-order system in `(v, v_t)`.

use thiserror::Error;

use crate::disc::{DiscError, Semidiscretization, State};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TimeError {
    #[error(transparent)]
    Disc(#[from] DiscError),
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("final time must be positive and finite, got {0}")]
    BadFinalTime(f64),
    #[error("snapshot time {0} lies outside [0, T]")]
    SnapshotOutOfRange(f64),
    #[error("solution blew up at step {step} (t = {t})")]
    BlowUp { step: usize, t: f64 },
    #[error("state has length {got}, system has {expected} unknowns")]
    Shape { expected: usize, got: usize },
}

/// Anything that can be written as `v_tt = G(v, v_t, t)`.
pub trait SecondOrderSystem {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn accel(&self, t: f64, v: &[f64], w: &[f64], out: &mut [f64]) -> Result<(), DiscError>;

    fn energy(&self, v: &[f64], w: &[f64]) -> f64;
}

impl SecondOrderSystem for Semidiscretization {
    fn len(&self) -> usize {
        Semidiscretization::len(self)
    }

    fn accel(&self, t: f64, v: &[f64], w: &[f64], out: &mut [f64]) -> Result<(), DiscError> {
        self.rhs(t, v, w, out)
    }

    fn energy(&self, v: &[f64], w: &[f64]) -> f64 {
        Semidiscretization::energy(self, v, w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DtRule {
    /// `dt = c h^2`.
    Viscous(f64),
    /// `dt = c h / gamma_max`.
    Hyperbolic(f64),
    Explicit(f64),
}

impl DtRule {
    pub const DEFAULT_VISCOUS: DtRule = DtRule::Viscous(0.1);
    pub const DEFAULT_HYPERBOLIC: DtRule = DtRule::Hyperbolic(0.1);

    /// The viscous rule when the problem has a viscous term, otherwise the
    /// hyperbolic one, both with default constants.
    pub fn default_for(sd: &Semidiscretization) -> DtRule {
        if sd.has_viscous_term() {
            DtRule::DEFAULT_VISCOUS
        } else {
            DtRule::DEFAULT_HYPERBOLIC
        }
    }

    /// Nominal step before rounding to a whole number of steps.
    pub fn nominal(self, h: f64, gamma_max: f64) -> f64 {
        match self {
            DtRule::Viscous(c) => c * h * h,
            DtRule::Hyperbolic(c) => c * h / gamma_max,
            DtRule::Explicit(dt) => dt,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeConfig {
    pub rule: DtRule,
    pub final_time: f64,
    pub snapshot_times: Vec<f64>,
    pub record_energy: bool,
}

impl TimeConfig {
    pub fn new(rule: DtRule, final_time: f64) -> Self {
        TimeConfig { rule, final_time, snapshot_times: Vec::new(), record_energy: false }
    }

    /// Step size and count: the nominal step is reduced so that it divides
    /// the final time exactly.
    pub fn resolve(&self, h: f64, gamma_max: f64) -> Result<(f64, usize), TimeError> {
        let t = self.final_time;
        if !(t > 0.0 && t.is_finite()) {
            return Err(TimeError::BadFinalTime(t));
        }
        let dt = self.rule.nominal(h, gamma_max);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(TimeError::BadStep(dt));
        }
        let steps = ((t / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Ok((t / steps as f64, steps))
    }

    pub fn resolve_for(&self, sd: &Semidiscretization) -> Result<(f64, usize), TimeError> {
        let (gx, gy) = sd.grid().axes();
        let h = gy.map_or(gx.h, |g| g.h.min(gx.h));
        let gamma_max = sd.fields().gamma.iter().cloned().fold(0.0, f64::max);
        self.resolve(h, gamma_max)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub final_state: State,
    pub snapshots: Vec<State>,
    /// `(t, E)` after every step, starting at `t = 0`, when requested.
    pub energy: Vec<(f64, f64)>,
    pub dt: f64,
    pub steps: usize,
}

/// Threshold on `max |v|` that aborts a run as unstable.
pub const BLOW_UP: f64 = 1e12;

/// Integrates from `state` over `steps` steps of size `dt`.
pub fn rk4_steps<S: SecondOrderSystem + ?Sized>(
    sys: &S,
    state: State,
    dt: f64,
    steps: usize,
    snapshot_times: &[f64],
    record_energy: bool,
) -> Result<Trajectory, TimeError> {
    let n = sys.len();
    for got in [state.v.len(), state.w.len()] {
        if got != n {
            return Err(TimeError::Shape { expected: n, got });
        }
    }
    let t_end = state.t + dt * steps as f64;
    let mut snap_steps = Vec::with_capacity(snapshot_times.len());
    for &ts in snapshot_times {
        if !(ts >= state.t - 1e-12 && ts <= t_end + 1e-12) {
            return Err(TimeError::SnapshotOutOfRange(ts));
        }
        snap_steps.push(((ts - state.t) / dt).round() as usize);
    }
    let mut snapshots: Vec<Option<State>> = vec![None; snapshot_times.len()];
    let t0 = state.t;
    let State { mut v, mut w, .. } = state;
    let mut energy = Vec::new();
    let take = |k: usize, v: &[f64], w: &[f64], snaps: &mut Vec<Option<State>>| {
        for (slot, &s) in snaps.iter_mut().zip(&snap_steps) {
            if s == k {
                *slot = Some(State { v: v.to_vec(), w: w.to_vec(), t: t0 + k as f64 * dt });
            }
        }
    };
    if record_energy {
        energy.push((t0, sys.energy(&v, &w)));
    }
    take(0, &v, &w, &mut snapshots);

    let mut a = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut vs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        sys.accel(t, &v, &w, &mut a[0])?;
        for i in 0..n {
            vs[i] = v[i] + 0.5 * dt * w[i];
            ws[i] = w[i] + 0.5 * dt * a[0][i];
        }
        sys.accel(t + 0.5 * dt, &vs, &ws, &mut a[1])?;
        for i in 0..n {
            vs[i] = v[i] + 0.5 * dt * w[i] + 0.25 * dt * dt * a[0][i];
            ws[i] = w[i] + 0.5 * dt * a[1][i];
        }
        sys.accel(t + 0.5 * dt, &vs, &ws, &mut a[2])?;
        for i in 0..n {
            vs[i] = v[i] + dt * w[i] + 0.5 * dt * dt * a[1][i];
            ws[i] = w[i] + dt * a[2][i];
        }
        sys.accel(t + dt, &vs, &ws, &mut a[3])?;
        let mut vmax: f64 = 0.0;
        for i in 0..n {
            // stage velocities are w, w + dt/2 a0, w + dt/2 a1, w + dt a2
            v[i] += dt * w[i] + dt * dt / 6.0 * (a[0][i] + a[1][i] + a[2][i]);
            w[i] += dt / 6.0 * (a[0][i] + 2.0 * a[1][i] + 2.0 * a[2][i] + a[3][i]);
            vmax = vmax.max(v[i].abs());
            if !v[i].is_finite() {
                vmax = f64::INFINITY;
            }
        }
        let t_next = t0 + (k + 1) as f64 * dt;
        if !(vmax <= BLOW_UP) {
            return Err(TimeError::BlowUp { step: k + 1, t: t_next });
        }
        if record_energy {
            energy.push((t_next, sys.energy(&v, &w)));
        }
        take(k + 1, &v, &w, &mut snapshots);
    }
    Ok(Trajectory {
        final_state: State { v, w, t: t_end },
        snapshots: snapshots.into_iter().map(|s| s.expect("snapshot step within range")).collect(),
        energy,
        dt,
        steps,
    })
}

/// Integrates a semidiscretization from `state` to the configured final time.
pub fn rk4_advance(sd: &Semidiscretization, state: State, cfg: &TimeConfig) -> Result<Trajectory, TimeError> {
    let (dt, steps) = cfg.resolve_for(sd)?;
    let state = State { t: 0.0, ..state };
    rk4_steps(sd, state, dt, steps, &cfg.snapshot_times, cfg.record_energy)
}
