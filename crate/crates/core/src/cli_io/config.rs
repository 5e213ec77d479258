//! Run configuration in line-based `key = value` form with `#` comments.

use std::collections::HashMap;

use crate::disk_spectral::GridSpec;
use crate::dynamics::{timestep_limit, InitialCondition, RunSetup, StepParams, TaylorPolicy};
use crate::elliptic::SolverParams;
use crate::error::{Error, Result};
use crate::geometry::DEFAULT_DET_TOLERANCE;

const KEYS: &[&str] = &[
    "grid.K",
    "grid.M",
    "d0",
    "gravity_sign",
    "initial_condition",
    "omega",
    "mode",
    "amplitude",
    "dt",
    "t_end",
    "output_interval",
    "projection",
    "solver.tol",
    "solver.max_iter",
    "det_tolerance",
    "taylor_policy",
    "seed",
];

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub n_modes: usize,
    pub n_radial: usize,
    pub d0: f64,
    pub gravity_sign: f64,
    pub initial_condition: InitialCondition,
    pub dt: f64,
    pub t_end: f64,
    pub output_interval: f64,
    pub projection: bool,
    pub solver: SolverParams,
    pub det_tolerance: f64,
    pub taylor_policy: TaylorPolicy,
    pub seed: u64,
    /// Accepted settings that predict a failure, e.g. ω² ≥ 1/2 with σ = −1.
    pub flags: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            n_modes: 32,
            n_radial: 48,
            d0: 0.5,
            gravity_sign: -1.0,
            initial_condition: InitialCondition::Static,
            dt: 1e-3,
            t_end: 0.5,
            output_interval: 0.1,
            projection: true,
            solver: SolverParams::default(),
            det_tolerance: DEFAULT_DET_TOLERANCE,
            taylor_policy: TaylorPolicy::Warn,
            seed: 0,
            flags: Vec::new(),
        }
    }
}

fn err(line: Option<usize>, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

struct Entries {
    values: HashMap<String, (usize, String)>,
}

impl Entries {
    fn line(&self, key: &str) -> Option<usize> {
        self.values.get(key).map(|(l, _)| *l)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some((line, raw)) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| err(Some(*line), format!("cannot parse value '{raw}' for {key}"))),
        }
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        match self.values.get(key) {
            None => Ok(None),
            Some((line, raw)) => match raw.to_ascii_lowercase().as_str() {
                "true" | "yes" | "on" | "1" => Ok(Some(true)),
                "false" | "no" | "off" | "0" => Ok(Some(false)),
                _ => Err(err(Some(*line), format!("expected a boolean for {key}, got '{raw}'"))),
            },
        }
    }
}

/// Parses and validates a configuration. `initial_condition` is required;
/// every other key falls back to its default.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut values = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(Some(line), format!("expected 'key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(Some(line), format!("unknown key '{key}'")));
        }
        if value.is_empty() {
            return Err(err(Some(line), format!("missing value for {key}")));
        }
        if values.insert(key.to_string(), (line, value.to_string())).is_some() {
            return Err(err(Some(line), format!("duplicate key '{key}'")));
        }
    }
    let e = Entries { values };
    let mut c = Config::default();

    if let Some(k) = e.get::<usize>("grid.K")? {
        c.n_modes = k;
    }
    if c.n_modes < 16 || c.n_modes % 2 != 0 {
        return Err(err(e.line("grid.K"), "K must be even ≥ 16"));
    }
    if let Some(m) = e.get::<usize>("grid.M")? {
        c.n_radial = m;
    }
    if c.n_radial < 8 {
        return Err(err(e.line("grid.M"), "M must be ≥ 8"));
    }
    if let Some(d0) = e.get::<f64>("d0")? {
        c.d0 = d0;
    }
    if !(c.d0 > 0.0 && c.d0 < 1.0) {
        return Err(err(e.line("d0"), "d0 must lie in (0, 1)"));
    }
    if let Some(s) = e.get::<f64>("gravity_sign")? {
        c.gravity_sign = s;
    }
    if c.gravity_sign != 1.0 && c.gravity_sign != -1.0 {
        return Err(err(e.line("gravity_sign"), "gravity_sign must be 1 or -1"));
    }

    let ic_line = e.line("initial_condition");
    let ic: String = e
        .get("initial_condition")?
        .ok_or_else(|| err(None, "missing required key 'initial_condition'"))?;
    let omega = e.get::<f64>("omega")?;
    if let Some(w) = omega {
        if !w.is_finite() {
            return Err(err(e.line("omega"), "omega must be finite"));
        }
    }
    let omega = omega.unwrap_or(0.5);
    c.initial_condition = match ic.as_str() {
        "static" => InitialCondition::Static,
        "rotation" => InitialCondition::Rotation { omega },
        "perturbed" => {
            let mode = e.get::<u32>("mode")?.unwrap_or(3);
            if mode < 2 || mode as usize >= c.n_modes / 2 {
                return Err(err(e.line("mode"), format!("mode must lie in [2, K/2), got {mode}")));
            }
            let amplitude = e.get::<f64>("amplitude")?.unwrap_or(1e-3);
            if !(amplitude.abs() <= 0.1) {
                return Err(err(e.line("amplitude"), "amplitude must satisfy |amplitude| ≤ 0.1"));
            }
            InitialCondition::Perturbed { omega, mode, amplitude }
        }
        other => {
            return Err(err(
                ic_line,
                format!("initial_condition must be static, rotation or perturbed, got '{other}'"),
            ))
        }
    };
    if c.gravity_sign == -1.0 && !matches!(c.initial_condition, InitialCondition::Static) && omega * omega >= 0.5 {
        c.flags.push(format!(
            "omega^2 = {:.4} >= 1/2 predicts c0 = 1/2 - omega^2 <= 0 (Taylor sign fails)",
            omega * omega
        ));
    }

    if let Some(dt) = e.get::<f64>("dt")? {
        c.dt = dt;
    }
    let limit = timestep_limit(&GridSpec::new(c.n_modes, c.n_radial)?, 0.5);
    if !(c.dt > 0.0 && c.dt <= limit) {
        return Err(err(e.line("dt"), format!("dt must lie in (0, {limit:.4e}]")));
    }
    if let Some(t) = e.get::<f64>("t_end")? {
        c.t_end = t;
    }
    if !(c.t_end >= 0.0 && c.t_end.is_finite()) {
        return Err(err(e.line("t_end"), "t_end must be ≥ 0"));
    }
    if let Some(t) = e.get::<f64>("output_interval")? {
        c.output_interval = t;
    }
    if !(c.output_interval > 0.0 && c.output_interval.is_finite()) {
        return Err(err(e.line("output_interval"), "output_interval must be > 0"));
    }
    if let Some(p) = e.bool("projection")? {
        c.projection = p;
    }
    if let Some(t) = e.get::<f64>("solver.tol")? {
        c.solver.tol = t;
    }
    if !(c.solver.tol > 0.0 && c.solver.tol <= 1e-2) {
        return Err(err(e.line("solver.tol"), "solver.tol must lie in (0, 1e-2]"));
    }
    if let Some(n) = e.get::<usize>("solver.max_iter")? {
        c.solver.max_iter = n;
    }
    if c.solver.max_iter == 0 {
        return Err(err(e.line("solver.max_iter"), "solver.max_iter must be ≥ 1"));
    }
    if let Some(t) = e.get::<f64>("det_tolerance")? {
        c.det_tolerance = t;
    }
    if !(c.det_tolerance > 0.0 && c.det_tolerance < 1.0) {
        return Err(err(e.line("det_tolerance"), "det_tolerance must lie in (0, 1)"));
    }
    if let Some(p) = e.get::<String>("taylor_policy")? {
        c.taylor_policy = match p.as_str() {
            "warn" => TaylorPolicy::Warn,
            "abort" => TaylorPolicy::Abort,
            _ => return Err(err(e.line("taylor_policy"), "taylor_policy must be warn or abort")),
        };
    }
    if let Some(s) = e.get::<u64>("seed")? {
        c.seed = s;
    }
    Ok(c)
}

impl Config {
    pub fn step_params(&self) -> StepParams {
        StepParams {
            dt: self.dt,
            gravity_sign: self.gravity_sign,
            project_divergence: self.projection,
            det_tolerance: self.det_tolerance,
            taylor_policy: self.taylor_policy,
            solver: self.solver,
            ..StepParams::default()
        }
    }

    /// Builds the grid, initial state and step parameters.
    pub fn to_setup(&self) -> Result<RunSetup> {
        let grid = GridSpec::new(self.n_modes, self.n_radial)?;
        Ok(RunSetup {
            initial: self.initial_condition.build(&grid)?,
            params: self.step_params(),
            t_end: self.t_end,
            output_interval: self.output_interval,
            d0: self.d0,
        })
    }

    /// One-line `key=value` echo for record headers.
    pub fn echo(&self) -> String {
        let ic = match self.initial_condition {
            InitialCondition::Static => "static".to_string(),
            InitialCondition::Rotation { omega } => format!("rotation omega={omega}"),
            InitialCondition::Perturbed { omega, mode, amplitude } => {
                format!("perturbed omega={omega} mode={mode} amplitude={amplitude}")
            }
        };
        format!(
            "K={} M={} d0={} gravity_sign={} initial_condition={} dt={} t_end={} output_interval={} \
             projection={} solver.tol={} solver.max_iter={} det_tolerance={} taylor_policy={} seed={}",
            self.n_modes,
            self.n_radial,
            self.d0,
            self.gravity_sign,
            ic,
            self.dt,
            self.t_end,
            self.output_interval,
            self.projection,
            self.solver.tol,
            self.solver.max_iter,
            self.det_tolerance,
            match self.taylor_policy {
                TaylorPolicy::Warn => "warn",
                TaylorPolicy::Abort => "abort",
            },
            self.seed
        )
    }
}
