//! Run configuration files.
//!
//! A config is a TOML document with the sections `[domain]`, `[materials]`,
//! `[bc]`, `[time]`, `[discretization]`, `[study]` and `[output]`. Every key
//! is optional at the parsing stage; each subcommand then checks for the keys
//! it needs, so a missing key is reported by section and name. Unknown keys
//! are rejected while parsing.

use std::path::PathBuf;

use dvw_core::mms::{ManufacturedCase, SelfConvergenceStudy};
use dvw_core::normal_mode::C64;
use dvw_core::timeint::{DtRule, TimeConfig};
use dvw_core::{BcKind, BoundaryCondition, Expr, Grid, Grid1D, Grid2D, MaterialFields, Problem, Variant};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("missing key `[{section}] {key}`")]
    Missing { section: &'static str, key: &'static str },
    #[error("bad value for `[{section}] {key}`: {message}")]
    Invalid { section: &'static str, key: &'static str, message: String },
}

fn invalid(section: &'static str, key: &'static str, message: impl ToString) -> ConfigError {
    ConfigError::Invalid { section, key, message: message.to_string() }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub materials: Option<MaterialsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bc: Option<BcSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discretization: Option<DiscretizationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study: Option<StudySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<[f64; 2]>,
    /// Present for two-dimensional runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<[f64; 2]>,
    /// Points per direction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcSection {
    /// `dirichlet` or `neumann`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_time: Option<f64>,
    /// `viscous`, `hyperbolic` or `explicit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_rule: Option<String>,
    /// `c_visc`, `c_hyp` or the step itself, depending on the rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_energy: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_rate: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// `standard` or `fully_compatible`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty_safety: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudySection {
    /// `manufactured` or `self` for convergence runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolutions: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<usize>,
    /// Laplace variables for the root table, such as `"1+0.5i"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<f64>>,
    /// Multipliers of the penalty limits in the determinant scan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
}

pub const DEFAULT_ORDER: usize = 4;
pub const DEFAULT_SAFETY: f64 = 2.0;
pub const DEFAULT_SCAN: [f64; 3] = [1.0, 1.01, 2.0];

impl RunConfig {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(src)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let src = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&src)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Single-line rendering used in CSV headers.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    fn materials(&self) -> Result<&MaterialsSection, ConfigError> {
        self.materials.as_ref().ok_or(ConfigError::Missing { section: "materials", key: "alpha" })
    }

    pub fn output(&self) -> Output {
        let o = self.output.clone().unwrap_or_default();
        Output { dir: PathBuf::from(o.dir.unwrap_or_else(|| ".".into())), prefix: o.prefix.unwrap_or_else(|| "dvw".into()) }
    }

    /// Fills every defaulted key with its value, leaving data keys alone.
    pub fn resolved(&self, rule: Option<DtRule>) -> RunConfig {
        let mut out = self.clone();
        let d = out.discretization.get_or_insert_with(Default::default);
        d.order.get_or_insert(DEFAULT_ORDER);
        d.variant.get_or_insert_with(|| "standard".into());
        d.penalty_safety.get_or_insert(DEFAULT_SAFETY);
        if let Some(rule) = rule {
            let t = out.time.get_or_insert_with(Default::default);
            let (name, factor) = match rule {
                DtRule::Viscous(c) => ("viscous", c),
                DtRule::Hyperbolic(c) => ("hyperbolic", c),
                DtRule::Explicit(dt) => ("explicit", dt),
            };
            t.dt_rule = Some(name.into());
            t.dt_factor = Some(factor);
        }
        let o = out.output();
        out.output = Some(OutputSection { dir: Some(o.dir.display().to_string()), prefix: Some(o.prefix) });
        out
    }

    pub fn fields(&self) -> Result<MaterialFields, ConfigError> {
        let m = self.materials()?;
        Ok(MaterialFields {
            alpha: expr("materials", "alpha", m.alpha.as_deref())?,
            beta: expr("materials", "beta", m.beta.as_deref())?,
            gamma: expr("materials", "gamma", m.gamma.as_deref())?,
        })
    }

    pub fn order(&self) -> usize {
        self.discretization.as_ref().and_then(|d| d.order).unwrap_or(DEFAULT_ORDER)
    }

    pub fn variant(&self) -> Result<Variant, ConfigError> {
        match self.discretization.as_ref().and_then(|d| d.variant.as_deref()) {
            None | Some("standard") => Ok(Variant::Standard),
            Some("fully_compatible") => Ok(Variant::FullyCompatible),
            Some(other) => Err(invalid("discretization", "variant", format!("expected standard or fully_compatible, got {other}"))),
        }
    }

    pub fn penalty_safety(&self) -> f64 {
        self.discretization.as_ref().and_then(|d| d.penalty_safety).unwrap_or(DEFAULT_SAFETY)
    }

    pub fn bc_kind(&self) -> Result<BcKind, ConfigError> {
        let kind = self.bc.as_ref().and_then(|b| b.kind.as_deref()).ok_or(ConfigError::Missing { section: "bc", key: "kind" })?;
        match kind {
            "dirichlet" => Ok(BcKind::Dirichlet),
            "neumann" => Ok(BcKind::Neumann),
            other => Err(invalid("bc", "kind", format!("expected dirichlet or neumann, got {other}"))),
        }
    }

    fn time(&self) -> Result<&TimeSection, ConfigError> {
        self.time.as_ref().ok_or(ConfigError::Missing { section: "time", key: "final_time" })
    }

    pub fn final_time(&self) -> Result<f64, ConfigError> {
        let t = self.time()?.final_time.ok_or(ConfigError::Missing { section: "time", key: "final_time" })?;
        if t > 0.0 {
            Ok(t)
        } else {
            Err(invalid("time", "final_time", "must be positive"))
        }
    }

    /// `None` when the rule is left to the solver default.
    pub fn dt_rule(&self) -> Result<Option<DtRule>, ConfigError> {
        let t = self.time()?;
        let factor = t.dt_factor;
        let rule = match t.dt_rule.as_deref() {
            None => {
                return match factor {
                    None => Ok(None),
                    Some(_) => Err(ConfigError::Missing { section: "time", key: "dt_rule" }),
                }
            }
            Some("viscous") => DtRule::Viscous(factor.unwrap_or(0.1)),
            Some("hyperbolic") => DtRule::Hyperbolic(factor.unwrap_or(0.1)),
            Some("explicit") => DtRule::Explicit(factor.ok_or(ConfigError::Missing { section: "time", key: "dt_factor" })?),
            Some(other) => return Err(invalid("time", "dt_rule", format!("expected viscous, hyperbolic or explicit, got {other}"))),
        };
        match rule {
            DtRule::Viscous(c) | DtRule::Hyperbolic(c) | DtRule::Explicit(c) if !(c > 0.0 && c.is_finite()) => {
                Err(invalid("time", "dt_factor", "must be positive"))
            }
            r => Ok(Some(r)),
        }
    }

    fn axes(&self, n: usize) -> Result<Grid, ConfigError> {
        let d = self.domain.clone().unwrap_or_default();
        let x = d.x.ok_or(ConfigError::Missing { section: "domain", key: "x" })?;
        let gx = Grid1D::new(x[0], x[1], n).map_err(|e| invalid("domain", "x", e))?;
        Ok(match d.y {
            None => Grid::One(gx),
            Some(y) => Grid::Two(Grid2D::new(gx, Grid1D::new(y[0], y[1], n).map_err(|e| invalid("domain", "y", e))?)),
        })
    }

    /// Problem at the configured `[domain] n`.
    pub fn problem(&self) -> Result<Problem, ConfigError> {
        let n = self.domain.as_ref().and_then(|d| d.n).ok_or(ConfigError::Missing { section: "domain", key: "n" })?;
        self.problem_at(n)
    }

    pub fn problem_at(&self, n: usize) -> Result<Problem, ConfigError> {
        let fields = self.fields()?;
        let t = self.time()?;
        let bc = BoundaryCondition {
            kind: self.bc_kind()?,
            data: self.bc.as_ref().and_then(|b| b.data.as_deref()).map(|s| expr("bc", "data", Some(s))).transpose()?,
        };
        let forcing = self.materials()?.forcing.as_deref().map(|s| expr("materials", "forcing", Some(s))).transpose()?;
        Ok(Problem {
            grid: self.axes(n)?,
            fields,
            bc,
            forcing,
            initial_value: expr("time", "initial_value", Some(t.initial_value.as_deref().unwrap_or("0")))?,
            initial_rate: expr("time", "initial_rate", Some(t.initial_rate.as_deref().unwrap_or("0")))?,
            final_time: self.final_time()?,
            variant: self.variant()?,
            penalty_safety: self.penalty_safety(),
        })
    }

    pub fn solve_plan(&self) -> Result<SolvePlan, ConfigError> {
        let problem = self.problem()?;
        let t = self.time()?;
        let snapshots = t.snapshots.clone().unwrap_or_default();
        for &s in &snapshots {
            if !(0.0..=problem.final_time).contains(&s) {
                return Err(invalid("time", "snapshots", format!("{s} lies outside [0, final_time]")));
            }
        }
        Ok(SolvePlan {
            problem,
            order: self.order(),
            rule: self.dt_rule()?,
            snapshots,
            record_energy: t.record_energy.unwrap_or(true),
        })
    }

    fn study(&self) -> Result<&StudySection, ConfigError> {
        self.study.as_ref().ok_or(ConfigError::Missing { section: "study", key: "kind" })
    }

    fn resolutions(&self) -> Result<Vec<usize>, ConfigError> {
        let r = self.study()?.resolutions.clone().ok_or(ConfigError::Missing { section: "study", key: "resolutions" })?;
        if r.len() < 3 {
            return Err(invalid("study", "resolutions", format!("need at least 3 resolutions, got {}", r.len())));
        }
        Ok(r)
    }

    pub fn convergence_plan(&self) -> Result<ConvergencePlan, ConfigError> {
        let study = self.study()?;
        match study.kind.as_deref() {
            Some("manufactured") => {
                let d = self.domain.clone().unwrap_or_default();
                Ok(ConvergencePlan::Manufactured(ManufacturedCase {
                    exact: expr("study", "exact", study.exact.as_deref())?,
                    fields: self.fields()?,
                    x_range: d.x.map(|x| (x[0], x[1])).ok_or(ConfigError::Missing { section: "domain", key: "x" })?,
                    y_range: d.y.map(|y| (y[0], y[1])),
                    bc: self.bc_kind()?,
                    final_time: self.final_time()?,
                    order: self.order(),
                    penalty_safety: self.penalty_safety(),
                    variant: self.variant()?,
                    resolutions: self.resolutions()?,
                    time_rule: self.dt_rule()?,
                }))
            }
            Some("self") => {
                let resolutions = self.resolutions()?;
                let reference = study.reference.ok_or(ConfigError::Missing { section: "study", key: "reference" })?;
                let problem = self.problem_at(resolutions[0])?;
                let rule = self.dt_rule()?.ok_or(ConfigError::Missing { section: "time", key: "dt_rule" })?;
                if !matches!(rule, DtRule::Explicit(_)) {
                    return Err(invalid("time", "dt_rule", "self-convergence needs an explicit step shared by all grids"));
                }
                let time = TimeConfig::new(rule, problem.final_time);
                Ok(ConvergencePlan::SelfConvergence(SelfConvergenceStudy {
                    problem,
                    order: self.order(),
                    time,
                    resolutions,
                    reference,
                }))
            }
            Some(other) => Err(invalid("study", "kind", format!("expected manufactured or self, got {other}"))),
            None => Err(ConfigError::Missing { section: "study", key: "kind" }),
        }
    }

    pub fn normal_mode_plan(&self) -> Result<NormalModePlan, ConfigError> {
        let fields = self.fields()?;
        let constant = |key: &'static str, e: &Expr| {
            e.as_num().ok_or_else(|| invalid("materials", key, "normal-mode analysis needs a constant"))
        };
        let study = self.study.clone().unwrap_or_default();
        let s = study
            .s
            .unwrap_or_default()
            .iter()
            .map(|v| parse_complex(v).map_err(|m| invalid("study", "s", m)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NormalModePlan {
            alpha: constant("alpha", &fields.alpha)?,
            beta: constant("beta", &fields.beta)?,
            gamma: constant("gamma", &fields.gamma)?,
            s,
            h: study.h.unwrap_or_default(),
            scan: study.scan.unwrap_or_else(|| DEFAULT_SCAN.to_vec()),
            order: self.order(),
        })
    }
}

fn expr(section: &'static str, key: &'static str, src: Option<&str>) -> Result<Expr, ConfigError> {
    let src = src.ok_or(ConfigError::Missing { section, key })?;
    Expr::parse(src).map_err(|e| invalid(section, key, e))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`, with optional spaces.
pub fn parse_complex(src: &str) -> Result<C64, String> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("malformed complex number `{src}`");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign or the leading sign
    let split = body
        .char_indices()
        .filter(|&(k, c)| (c == '+' || c == '-') && k > 0 && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .last();
    let im_part = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => t.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, im_part(&body[k..])?))
        }
        None => Ok(C64::new(0.0, im_part(body)?)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub dir: PathBuf,
    pub prefix: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolvePlan {
    pub problem: Problem,
    pub order: usize,
    pub rule: Option<DtRule>,
    pub snapshots: Vec<f64>,
    pub record_energy: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConvergencePlan {
    Manufactured(ManufacturedCase),
    SelfConvergence(SelfConvergenceStudy),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalModePlan {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub s: Vec<C64>,
    pub h: Vec<f64>,
    pub scan: Vec<f64>,
    pub order: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE: &str = r#"
[domain]
x = [0.0, 1.0]
n = 41

[materials]
alpha = "1"
beta = "0.1"
gamma = "0.1"

[bc]
kind = "dirichlet"

[time]
final_time = 0.5
"#;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::parse(&CASE.replace("gamma =", "gama =")).unwrap_err();
        assert!(err.to_string().contains("gama"), "{err}");
        let err = RunConfig::parse("[solver]\norder = 4\n").unwrap_err();
        assert!(err.to_string().contains("solver"), "{err}");
    }

    #[test]
    fn missing_gamma_names_the_key() {
        let cfg = RunConfig::parse(&CASE.replace("gamma = \"0.1\"", "")).unwrap();
        let err = cfg.solve_plan().unwrap_err();
        assert_eq!(err.to_string(), "missing key `[materials] gamma`");
    }

    #[test]
    fn defaults_fill_in() {
        let plan = RunConfig::parse(CASE).unwrap().solve_plan().unwrap();
        assert_eq!(plan.order, 4);
        assert_eq!(plan.problem.penalty_safety, 2.0);
        assert_eq!(plan.problem.variant, Variant::Standard);
        assert_eq!(plan.rule, None);
        assert!(plan.record_energy);
    }

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("1").unwrap(), C64::new(1.0, 0.0));
        assert_eq!(parse_complex("1+0.5i").unwrap(), C64::new(1.0, 0.5));
        assert_eq!(parse_complex(" -2 - 3i ").unwrap(), C64::new(-2.0, -3.0));
        assert_eq!(parse_complex("2.5i").unwrap(), C64::new(0.0, 2.5));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), C64::new(1e-3, 20.0));
        for bad in ["", "1+", "1+2j", "a+bi", "1++2i", "i1"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn too_few_resolutions() {
        let src = format!("{CASE}\n[study]\nkind = \"manufactured\"\nexact = \"cos(x)\"\nresolutions = [11, 21]\n");
        let err = RunConfig::parse(&src).unwrap().convergence_plan().unwrap_err();
        assert!(err.to_string().contains("at least 3"), "{err}");
    }
}
