//! Subcommand bodies. Each writes its CSV artifacts and returns the text it
//! prints, so the binary and the tests share one code path.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dvw_core::disc::energy_rate_bound_check;
use dvw_core::mms::{run_convergence, run_self_convergence, ConvergenceReport, MmsError};
use dvw_core::normal_mode::{
    characteristic_roots, critical_tau3, gap_product, limit_scan, LaplaceParams, NormalModeError,
};
use dvw_core::sbp::verify::{verify_order, VerifyReport};
use dvw_core::timeint::{rk4_advance, DtRule, TimeConfig, TimeError};
use dvw_core::{DiscError, Semidiscretization, State};
use thiserror::Error;

use crate::config::{ConfigError, ConvergencePlan, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
    #[error("unstable run: {0}")]
    Unstable(String),
    #[error("{0}")]
    Runtime(String),
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Runtime(_) | CliError::Io { .. } => 1,
            CliError::Verification(_) => 2,
            CliError::Unstable(_) => 3,
        }
    }
}

impl From<TimeError> for CliError {
    fn from(e: TimeError) -> Self {
        match e {
            TimeError::BlowUp { .. } => CliError::Unstable(e.to_string()),
            e => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<DiscError> for CliError {
    fn from(e: DiscError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<NormalModeError> for CliError {
    fn from(e: NormalModeError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn blew_up(e: &MmsError) -> bool {
    match e {
        MmsError::Time(TimeError::BlowUp { .. }) => true,
        MmsError::AtResolution { source, .. } => blew_up(source),
        _ => false,
    }
}

impl From<MmsError> for CliError {
    fn from(e: MmsError) -> Self {
        if blew_up(&e) {
            CliError::Unstable(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

/// Result of a subcommand: the report text and the files written.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub report: String,
    pub files: Vec<PathBuf>,
}

fn write_csv(dir: &Path, name: &str, header: &str, body: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    let path = dir.join(name);
    let text = format!("# config: {header}\n{body}");
    fs::write(&path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

fn output_dir(cfg: &RunConfig, override_dir: Option<&Path>) -> PathBuf {
    override_dir.map(Path::to_path_buf).unwrap_or_else(|| cfg.output().dir)
}

pub const DEFAULT_ORDERS: [usize; 3] = [2, 4, 6];
pub const VERIFY_POINTS: usize = 41;

pub fn verify_ops(orders: &[usize], n: usize) -> Result<(Vec<VerifyReport>, Outcome), CliError> {
    let mut reports = Vec::new();
    let mut out = String::new();
    for &order in orders {
        let report = verify_order(order, n, 0x5eed + order as u64).map_err(|e| CliError::Usage(e.to_string()))?;
        writeln!(out, "order {order}: theta = {:.7}, m = {}", report.theta, report.m).unwrap();
        for c in &report.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            writeln!(out, "  {status}  {:<52} residual {:.3e} (tolerance {:.0e})", c.name, c.residual, c.tolerance)
                .unwrap();
        }
        reports.push(report);
    }
    let failed: usize = reports.iter().map(|r| r.checks.iter().filter(|c| !c.passed).count()).sum();
    if failed > 0 {
        return Err(CliError::Verification(format!("{out}{failed} check(s) failed")));
    }
    writeln!(out, "all checks passed").unwrap();
    Ok((reports, Outcome { report: out, files: Vec::new() }))
}

fn time_label(t: f64) -> String {
    let s = format!("{t}");
    s.replace('.', "p")
}

pub fn solve(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<Outcome, CliError> {
    let plan = cfg.solve_plan()?;
    let sd = Semidiscretization::assemble(&plan.problem, plan.order)?;
    let rule = plan.rule.unwrap_or_else(|| DtRule::default_for(&sd));
    let header = cfg.resolved(Some(rule)).to_line();
    let tcfg = TimeConfig {
        rule,
        final_time: plan.problem.final_time,
        snapshot_times: plan.snapshots.clone(),
        record_energy: plan.record_energy,
    };
    let (v, w) = plan.problem.initial_state().map_err(|e| CliError::Runtime(e.to_string()))?;
    let tr = rk4_advance(&sd, State { v, w, t: 0.0 }, &tcfg)?;
    let dir = output_dir(cfg, out_dir);
    let prefix = cfg.output().prefix;
    let points = plan.problem.grid.points();
    let two_d = plan.problem.grid.dim() == 2;
    let mut outcome = Outcome::default();
    writeln!(outcome.report, "dt = {:.6e}, steps = {}", tr.dt, tr.steps).unwrap();
    for snap in &tr.snapshots {
        let mut body = String::from(if two_d { "x,y,v\n" } else { "x,v\n" });
        for ((x, y), v) in points.iter().zip(&snap.v) {
            if two_d {
                writeln!(body, "{x},{y},{v:e}").unwrap();
            } else {
                writeln!(body, "{x},{v:e}").unwrap();
            }
        }
        let path = write_csv(&dir, &format!("{prefix}_t{}.csv", time_label(snap.t)), &header, &body)?;
        writeln!(outcome.report, "snapshot t = {} -> {}", snap.t, path.display()).unwrap();
        outcome.files.push(path);
    }
    if plan.record_energy {
        let mut body = String::from("t,energy\n");
        for (t, e) in &tr.energy {
            writeln!(body, "{t},{e:e}").unwrap();
        }
        let path = write_csv(&dir, &format!("{prefix}_energy.csv"), &header, &body)?;
        let energies: Vec<f64> = tr.energy.iter().map(|p| p.1).collect();
        let check = energy_rate_bound_check(&energies, 1e-10);
        writeln!(
            outcome.report,
            "energy {:.6e} -> {:.6e}, largest step increase {:.3e} ({}) -> {}",
            energies.first().copied().unwrap_or(0.0),
            energies.last().copied().unwrap_or(0.0),
            check.max_increase,
            if check.monotone { "non-increasing" } else { "increasing" },
            path.display()
        )
        .unwrap();
        outcome.files.push(path);
    }
    Ok(outcome)
}

pub fn convergence(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<(ConvergenceReport, Outcome), CliError> {
    let plan = cfg.convergence_plan()?;
    let (report, rule) = match &plan {
        ConvergencePlan::Manufactured(case) => {
            let rule = match case.time_rule {
                Some(r) => r,
                None => DtRule::default_for(&Semidiscretization::assemble(&case.problem(case.resolutions[0])?, case.order)?),
            };
            (run_convergence(case)?, rule)
        }
        ConvergencePlan::SelfConvergence(study) => (run_self_convergence(study)?, study.time.rule),
    };
    let header = cfg.resolved(Some(rule)).to_line();
    let dir = output_dir(cfg, out_dir);
    let path = write_csv(&dir, &format!("{}_convergence.csv", cfg.output().prefix), &header, &report.to_csv())?;
    let text = format!("{report}\n-> {}\n", path.display());
    Ok((report, Outcome { report: text, files: vec![path] }))
}

pub fn normal_mode(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<Outcome, CliError> {
    let plan = cfg.normal_mode_plan()?;
    if plan.order != 4 {
        return Err(CliError::Config(ConfigError::Invalid {
            section: "discretization",
            key: "order",
            message: format!("normal-mode analysis covers order 4 only, got {}", plan.order),
        }));
    }
    let header = cfg.resolved(None).to_line();
    let dir = output_dir(cfg, out_dir);
    let prefix = cfg.output().prefix;
    let mut outcome = Outcome::default();

    let mut roots = String::from("s_re,s_im,h,kappa1_re,kappa1_im,kappa2_re,kappa2_im,h_over_gap\n");
    for s in &plan.s {
        for &h in &plan.h {
            let p = LaplaceParams::new(*s, h, plan.alpha, plan.beta, plan.gamma);
            let r = characteristic_roots(&p)?;
            let gap = if s.norm() > 0.0 { gap_product(&p)? } else { f64::INFINITY };
            writeln!(
                roots,
                "{},{},{h},{:.16e},{:.16e},{:.16e},{:.16e},{gap:e}",
                s.re, s.im, r.kappa1.re, r.kappa1.im, r.kappa2.re, r.kappa2.im
            )
            .unwrap();
        }
    }
    let path = write_csv(&dir, &format!("{prefix}_roots.csv"), &header, &roots)?;
    writeln!(outcome.report, "root table ({} rows) -> {}", plan.s.len() * plan.h.len(), path.display()).unwrap();
    outcome.files.push(path);

    let scan = limit_scan(plan.alpha, plan.beta, plan.gamma, &plan.scan)?;
    let mut body = String::from("tau3,tau1,det_norm,singular\n");
    for (f, pt) in plan.scan.iter().zip(&scan) {
        writeln!(body, "{:.16e},{:.16e},{:e},{}", pt.tau3, pt.tau1, pt.det_norm, pt.singular).unwrap();
        writeln!(
            outcome.report,
            "penalties at {f} x limit: normalized det {:.3e} -> {}",
            pt.det_norm,
            if pt.singular { "singular" } else { "nonsingular" }
        )
        .unwrap();
    }
    let path = write_csv(&dir, &format!("{prefix}_scan.csv"), &header, &body)?;
    writeln!(outcome.report, "determinant scan -> {}", path.display()).unwrap();
    writeln!(outcome.report, "critical tau3 = {:.10e}", critical_tau3(plan.alpha, plan.beta, plan.gamma)?).unwrap();
    outcome.files.push(path);
    Ok(outcome)
}

/// Applies the thread-count override, if set.
pub fn configure_threads(var: Option<String>) -> Result<Option<usize>, CliError> {
    let Some(raw) = var else { return Ok(None) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage(format!("DVW_THREADS must be an integer >= 1, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    Ok(Some(n))
}
