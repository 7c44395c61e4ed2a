//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment; there are no sections.
//! Every key has a default, so an empty file is a valid configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use fracslice_core::clifford::Algebra;
use fracslice_core::frac_rl::FracSliceConfig;
use fracslice_core::realfrac::{FdPolicy, FracOrder, QuadratureSpec, WeightFunction};
use fracslice_core::slice_fn::{AxialBox, SliceGrid};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("unknown format '{s}' (csv or json)"))),
        }
    }
}

/// Weight family as written in the file. `exp` without explicit deltas is
/// the normalized ODE solution with `y(lo) = 0`, `y'(lo) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    Affine { slope: f64, intercept: f64 },
    Exp { deltas: Option<(f64, f64)> },
}

impl WeightSpec {
    fn build(&self, lambda: f64, lo: f64, hi: f64) -> Result<WeightFunction, CliError> {
        let w = match *self {
            WeightSpec::Affine { slope, intercept } => WeightFunction::affine(slope, intercept, lo, hi),
            WeightSpec::Exp { deltas: None } => WeightFunction::ode_normalized(lambda, lo, hi),
            WeightSpec::Exp { deltas: Some((d1, d2)) } => WeightFunction::exp_ode(d1, d2, lambda, lo, hi),
        };
        Ok(w?)
    }

    fn family(&self) -> &'static str {
        match self {
            WeightSpec::Affine { .. } => "affine",
            WeightSpec::Exp { .. } => "exp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub g: WeightSpec,
    pub h: WeightSpec,
    /// Cross point for the Riemann-Liouville scenarios.
    pub cross: (f64, f64),
    /// Cross point for the Caputo scenarios; the exchange identity needs it
    /// strictly inside the box.
    pub caputo_cross: (f64, f64),
    pub quad_order: usize,
    pub fd_step: f64,
    pub grid: (usize, usize),
    pub slices: usize,
    pub points: usize,
    pub caputo_points: usize,
    pub trials: usize,
    pub seed: u64,
    /// Size of the negative-control perturbation added to the test families;
    /// 0 runs the positive controls.
    pub perturb: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 3,
            a: 0.0,
            b: 1.0,
            c: 1.0,
            alpha: 0.6,
            beta: 0.7,
            lambda: 0.0,
            g: WeightSpec::Affine { slope: 1.0, intercept: 0.0 },
            h: WeightSpec::Affine { slope: 1.0, intercept: 0.0 },
            cross: (0.0, 0.0),
            caputo_cross: (0.4, 0.3),
            quad_order: 32,
            fd_step: 1e-3,
            grid: (4, 4),
            slices: 4,
            points: 50,
            caputo_points: 20,
            trials: 8,
            seed: 1,
            perturb: 0.0,
            tolerances: BTreeMap::new(),
            out: None,
            format: Format::Csv,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    v.parse::<f64>().map_err(|_| CliError::Config(format!("{key}: '{v}' is not a number")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize, CliError> {
    v.parse::<usize>().map_err(|_| CliError::Config(format!("{key}: '{v}' is not a non-negative integer")))
}

fn parse_pair(key: &str, v: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => Ok((parse_f64(key, x)?, parse_f64(key, y)?)),
        _ => Err(CliError::Config(format!("{key}: expected 'x, y', got '{v}'"))),
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("line {}: {}", lineno + 1, e.message())))?;
        }
        Ok(())
    }

    /// Sets one key. `tolerance.NAME` overrides the tolerance of scenario `NAME`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if let Some(name) = key.strip_prefix("tolerance.") {
            if !crate::scenarios::REGISTRY.iter().any(|s| s.name == name) {
                return Err(CliError::Config(format!("tolerance for unknown scenario '{name}'")));
            }
            self.tolerances.insert(name.to_string(), parse_f64(key, value)?);
            return Ok(());
        }
        match key {
            "n" => self.n = parse_usize(key, value)?,
            "a" => self.a = parse_f64(key, value)?,
            "b" => self.b = parse_f64(key, value)?,
            "c" => self.c = parse_f64(key, value)?,
            "alpha" => self.alpha = parse_f64(key, value)?,
            "beta" => self.beta = parse_f64(key, value)?,
            "lambda" => self.lambda = parse_f64(key, value)?,
            "g" | "h" => {
                let spec = match value {
                    "affine" => WeightSpec::Affine { slope: 1.0, intercept: 0.0 },
                    "exp" => WeightSpec::Exp { deltas: None },
                    _ => return Err(CliError::Config(format!("{key}: unknown family '{value}' (affine or exp)"))),
                };
                *self.weight_mut(key) = spec;
            }
            "g.slope" | "g.intercept" | "h.slope" | "h.intercept" => {
                let x = parse_f64(key, value)?;
                let (w, field) = key.split_once('.').unwrap();
                match self.weight_mut(w) {
                    WeightSpec::Affine { slope, intercept } => *if field == "slope" { slope } else { intercept } = x,
                    WeightSpec::Exp { .. } => return Err(CliError::Config(format!("{key} needs {w} = affine"))),
                }
            }
            "g.deltas" | "h.deltas" => {
                let d = parse_pair(key, value)?;
                let w = &key[..1];
                match self.weight_mut(w) {
                    WeightSpec::Exp { deltas } => *deltas = Some(d),
                    WeightSpec::Affine { .. } => return Err(CliError::Config(format!("{key} needs {w} = exp"))),
                }
            }
            "cross" => self.cross = parse_pair(key, value)?,
            "caputo_cross" => self.caputo_cross = parse_pair(key, value)?,
            "quad_order" => self.quad_order = parse_usize(key, value)?,
            "fd_step" => self.fd_step = parse_f64(key, value)?,
            "grid" => {
                let (u, v) = parse_pair(key, value)?;
                if u.fract() != 0.0 || v.fract() != 0.0 || u < 1.0 || v < 1.0 {
                    return Err(CliError::Config(format!("grid: expected two positive integers, got '{value}'")));
                }
                self.grid = (u as usize, v as usize);
            }
            "slices" => self.slices = parse_usize(key, value)?,
            "points" => self.points = parse_usize(key, value)?,
            "caputo_points" => self.caputo_points = parse_usize(key, value)?,
            "trials" => self.trials = parse_usize(key, value)?,
            "seed" => self.seed = value.parse().map_err(|_| CliError::Config(format!("seed: '{value}' is not a u64")))?,
            "perturb" => self.perturb = parse_f64(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            _ => return Err(CliError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    fn weight_mut(&mut self, which: &str) -> &mut WeightSpec {
        if which == "g" {
            &mut self.g
        } else {
            &mut self.h
        }
    }

    pub fn tolerance(&self, scenario: &str, default: f64) -> f64 {
        self.tolerances.get(scenario).copied().unwrap_or(default)
    }

    /// The effective settings as sorted `key = value` pairs, output settings
    /// excluded.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("n", self.n.to_string());
        put("a", self.a.to_string());
        put("b", self.b.to_string());
        put("c", self.c.to_string());
        put("alpha", self.alpha.to_string());
        put("beta", self.beta.to_string());
        put("lambda", self.lambda.to_string());
        for (name, w) in [("g", &self.g), ("h", &self.h)] {
            put(name, w.family().to_string());
            match w {
                WeightSpec::Affine { slope, intercept } => {
                    put(&format!("{name}.slope"), slope.to_string());
                    put(&format!("{name}.intercept"), intercept.to_string());
                }
                WeightSpec::Exp { deltas: Some((d1, d2)) } => put(&format!("{name}.deltas"), format!("{d1}, {d2}")),
                WeightSpec::Exp { deltas: None } => {}
            }
        }
        put("cross", format!("{}, {}", self.cross.0, self.cross.1));
        put("caputo_cross", format!("{}, {}", self.caputo_cross.0, self.caputo_cross.1));
        put("quad_order", self.quad_order.to_string());
        put("fd_step", self.fd_step.to_string());
        put("grid", format!("{}, {}", self.grid.0, self.grid.1));
        put("slices", self.slices.to_string());
        put("points", self.points.to_string());
        put("caputo_points", self.caputo_points.to_string());
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        put("perturb", self.perturb.to_string());
        for (k, v) in &self.tolerances {
            put(&format!("tolerance.{k}"), v.to_string());
        }
        m
    }

    /// Checks every setting against the library's invariants and builds the
    /// shared objects. Nothing is computed before this succeeds.
    pub fn validate(&self) -> Result<Setup, CliError> {
        let alg = Algebra::new(self.n)?;
        let domain = AxialBox::new(self.a, self.b, self.c)?;
        let alpha = FracOrder::new(self.alpha)?;
        let beta = FracOrder::new(self.beta)?;
        let quad = QuadratureSpec { fd: FdPolicy { h0: self.fd_step, ..FdPolicy::default() }, ..QuadratureSpec::default() }
            .with_order(self.quad_order);
        quad.validate()?;
        let g = self.g.build(self.lambda, self.a, self.b)?;
        let h = self.h.build(self.lambda, 0.0, self.c)?;
        let rl = FracSliceConfig::new(domain, alpha, beta, self.lambda, g, h, self.cross, quad)?;
        let (r, s) = self.caputo_cross;
        if !(self.a < r && r < self.b && 0.0 < s && s < self.c) {
            return Err(CliError::Config(format!("caputo_cross ({r}, {s}) must lie strictly inside the box")));
        }
        let caputo = rl.with_cross(self.caputo_cross)?;
        for (key, value) in [("slices", self.slices), ("points", self.points), ("caputo_points", self.caputo_points), ("trials", self.trials)] {
            if value == 0 {
                return Err(CliError::Config(format!("{key} must be positive")));
            }
        }
        if !self.perturb.is_finite() {
            return Err(CliError::Config("perturb must be finite".into()));
        }
        for (name, tol) in &self.tolerances {
            if !(*tol > 0.0) {
                return Err(CliError::Config(format!("tolerance.{name} must be positive")));
            }
        }
        Ok(Setup { run: self.clone(), alg, domain, rl, caputo, grid: SliceGrid::new(self.grid.0, self.grid.1) })
    }
}

/// A validated configuration with the library objects built from it.
#[derive(Debug, Clone)]
pub struct Setup {
    pub run: RunConfig,
    pub alg: Algebra,
    pub domain: AxialBox,
    /// Configuration at `cross`.
    pub rl: FracSliceConfig,
    /// The same configuration at `caputo_cross`.
    pub caputo: FracSliceConfig,
    pub grid: SliceGrid,
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.echo() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_pairs() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# header\nalpha = 0.25  # trailing\n\ncross = 0.5, 0.1\ng = exp\ntolerance.fracprop1 = 1e-4\n").unwrap();
        assert_eq!(cfg.alpha, 0.25);
        assert_eq!(cfg.cross, (0.5, 0.1));
        assert_eq!(cfg.g, WeightSpec::Exp { deltas: None });
        assert_eq!(cfg.tolerance("fracprop1", 1e-3), 1e-4);
        assert_eq!(cfg.tolerance("fracprop2", 1e-3), 1e-3);
    }

    #[test]
    fn rejects_bad_input() {
        let mut cfg = RunConfig::default();
        assert!(cfg.apply_text("alpha 0.5").is_err());
        assert!(cfg.apply_text("colour = red").is_err());
        assert!(cfg.apply_text("tolerance.nope = 1").is_err());
        assert!(cfg.apply_text("g.deltas = 1, 2").is_err());
        let cfg = RunConfig { alpha: 1.5, ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        // affine weights only solve the ODE for lambda = 0
        let cfg = RunConfig { lambda: 0.4, ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig { lambda: 0.4, g: WeightSpec::Exp { deltas: None }, h: WeightSpec::Exp { deltas: None }, ..RunConfig::default() };
        assert!(cfg.validate().is_ok());
        let cfg = RunConfig { caputo_cross: (0.0, 0.3), ..RunConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn echo_roundtrips() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("g = exp\ng.deltas = -1.25, 1.25\nlambda = 0.4\nh = exp\ntolerance.morera = 1e-7").unwrap();
        let mut back = RunConfig::default();
        back.apply_text(&cfg.to_string()).unwrap();
        assert_eq!(back, cfg);
    }
}
