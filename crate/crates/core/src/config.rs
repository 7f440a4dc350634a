//! Run configuration: one TOML document plus `key=value` overrides.
//!
//! Unknown keys are rejected at every level. Named presets (`alpha`, `beta`,
//! `theta` with `amp` and `variant`) expand into explicit Pauli terms by
//! [`RunConfig::resolved`]; the resolved form is what gets echoed into
//! outputs and reproduces the run when fed back in.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{parse_angle, BoundaryLabel, ModelParams, PauliTerm, PerturbationSpec, ThetaVariant};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Text(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Angle::Radians(r) => Ok(*r),
            Angle::Text(s) => parse_angle(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub gamma_in: f64,
    pub gamma_ex: f64,
    pub gamma_in_p: f64,
    pub gamma_ex_p: f64,
    pub terms: Vec<PauliTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        let r = ModelParams::reference();
        Self {
            gamma_in: r.gamma_in,
            gamma_ex: r.gamma_ex,
            gamma_in_p: r.gamma_in_p,
            gamma_ex_p: r.gamma_ex_p,
            terms: Vec::new(),
            alpha: None,
            beta: None,
            theta: None,
            amp: None,
            variant: None,
        }
    }
}

impl ModelConfig {
    /// Explicit terms followed by the alpha, beta and theta presets.
    pub fn perturbation(&self) -> Result<PerturbationSpec> {
        let mut p = PerturbationSpec::from_terms(self.terms.clone());
        if let Some(a) = self.alpha {
            p = p.plus(&PerturbationSpec::alpha(a));
        }
        if let Some(b) = self.beta {
            p = p.plus(&PerturbationSpec::beta(b));
        }
        match &self.theta {
            Some(t) => {
                let variant: ThetaVariant = self.variant.as_deref().unwrap_or("zz0").parse()?;
                let amp = self.amp.unwrap_or(0.8);
                p = p.plus(&PerturbationSpec::theta_mix(amp, t.radians()?, variant));
            }
            None if self.amp.is_some() => {
                return Err(Error::Config("model.amp is only meaningful together with model.theta".into()))
            }
            None => {}
        }
        Ok(p)
    }

    pub fn params(&self) -> Result<ModelParams> {
        for (name, v) in [
            ("gamma_in", self.gamma_in),
            ("gamma_ex", self.gamma_ex),
            ("gamma_in_p", self.gamma_in_p),
            ("gamma_ex_p", self.gamma_ex_p),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("model.{name} must be finite")));
            }
        }
        Ok(ModelParams::new(self.gamma_in, self.gamma_ex, self.gamma_in_p, self.gamma_ex_p)
            .with_perturbation(self.perturbation()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RibbonSolver {
    Plain,
    Certified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub nx: usize,
    pub ny: usize,
    pub bcs: Vec<BoundaryLabel>,
    /// Unit cells across a ribbon.
    pub ribbon_cells: usize,
    /// Momenta along a ribbon's periodic axis.
    pub k_samples: usize,
    /// Bloch grid is `grid x grid`.
    pub grid: usize,
    pub strip: usize,
    pub edge_threshold: f64,
    pub ribbon_solver: RibbonSolver,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            nx: 20,
            ny: 20,
            bcs: BoundaryLabel::ALL.to_vec(),
            ribbon_cells: 40,
            k_samples: 64,
            grid: 64,
            strip: 2,
            edge_threshold: 0.5,
            ribbon_solver: RibbonSolver::Plain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    Alpha,
    Theta,
    Size,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub kind: ScanKind,
    /// Explicit sample values; angles in radians for theta scans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Square lattice sizes for size scans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    /// Linear size of the open lattice in theta scans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obc_cells: Option<usize>,
    /// Amplitude of the interpolating potential in theta scans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amp: Option<f64>,
    /// `zz0` or `zzz` in theta scans.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

impl ScanConfig {
    /// Sample values: `values` when given, else `steps` points from `start`
    /// to `stop` inclusive.
    pub fn samples(&self) -> Result<Vec<f64>> {
        if let Some(v) = &self.values {
            return Ok(v.clone());
        }
        match (self.start, self.stop, self.steps) {
            (Some(a), Some(b), Some(n)) if n >= 2 => {
                Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
            }
            (Some(a), _, Some(1)) => Ok(vec![a]),
            _ => Err(Error::Config("scan needs `values` or `start`, `stop` and `steps`".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    pub symmetries: Vec<String>,
    pub symmetry_grid: usize,
    pub winding_pairs: usize,
    pub winding_samples: usize,
    pub seed: u64,
    pub gbz_kx: Vec<f64>,
    pub gbz_cells: usize,
    pub skin_cells: usize,
    pub skin_k_samples: usize,
    /// Subset of `symmetry`, `winding`, `gbz`, `skin`.
    pub run: Vec<String>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            symmetries: ["P", "T", "RMx", "RMy", "C4", "S", "RMxS", "RMyS", "RMxC4", "RMyC4"]
                .map(String::from)
                .to_vec(),
            symmetry_grid: 32,
            winding_pairs: 20,
            winding_samples: 512,
            seed: 7,
            gbz_kx: vec![0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI],
            gbz_cells: 200,
            skin_cells: 40,
            skin_k_samples: 16,
            run: ["symmetry", "winding", "gbz", "skin"].map(String::from).to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Presence {
    Present,
    Absent,
}

/// Optional pass/fail expectations; every field that is set becomes one
/// assertion in the summary.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AssertConfig {
    /// Upper bounds on `max |Im E|` keyed by boundary label.
    #[serde(skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub max_abs_im: std::collections::BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub all_real: Vec<BoundaryLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pbc_cross: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transition_in: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_min_near: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone_decrease: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub preserved: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub broken: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_winding_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_winding_nonzero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skin_x: Option<Presence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skin_y: Option<Presence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gbz_min_fraction: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: String,
    pub formats: Vec<Format>,
    /// Worker threads; 0 means the available parallelism.
    pub workers: usize,
    pub tag: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: "out".into(),
            formats: vec![Format::Csv, Format::Json],
            workers: 0,
            tag: "run".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub reality: f64,
    pub symmetry: f64,
    pub gbz: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            reality: 1e-8,
            symmetry: 1e-10,
            gbz: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub lattice: LatticeConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    pub check: CheckConfig,
    #[serde(rename = "assert")]
    pub assertions: AssertConfig,
    pub output: OutputConfig,
    pub tolerances: Tolerances,
}

impl RunConfig {
    /// Parses TOML text after applying `overrides` (`dotted.key=value`).
    /// Override values are read as TOML literals, falling back to strings.
    pub fn from_toml_with(text: &str, overrides: &[String]) -> Result<Self> {
        let mut doc: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let cfg: RunConfig = toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_toml_with(text, &[])
    }

    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::from_toml_with(&text, overrides)
    }

    pub fn validate(&self) -> Result<()> {
        self.model.params()?;
        let l = &self.lattice;
        if l.nx == 0 || l.ny == 0 || l.grid == 0 || l.k_samples == 0 {
            return Err(Error::Config("lattice sizes, grid and k_samples must be positive".into()));
        }
        if l.ribbon_cells < 2 {
            return Err(Error::Config("lattice.ribbon_cells must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&l.edge_threshold) {
            return Err(Error::Config("lattice.edge_threshold must lie in [0, 1]".into()));
        }
        for key in self.assertions.max_abs_im.keys() {
            key.parse::<BoundaryLabel>()?;
        }
        for name in self.check.symmetries.iter().chain(&self.assertions.preserved).chain(&self.assertions.broken) {
            crate::symmetry::SymmetryOp::by_name(name)?;
        }
        for r in &self.check.run {
            if !["symmetry", "winding", "gbz", "skin"].contains(&r.as_str()) {
                return Err(Error::Config(format!("unknown check `{r}`")));
            }
        }
        if let Some(s) = &self.scan {
            if let Some(v) = &s.variant {
                v.parse::<ThetaVariant>()?;
            }
            s.samples().or_else(|e| if s.kind == ScanKind::Size { Ok(vec![]) } else { Err(e) })?;
        }
        Ok(())
    }

    /// Presets folded into explicit terms; everything else unchanged.
    pub fn resolved(&self) -> Result<Self> {
        let mut out = self.clone();
        out.model.terms = self.model.perturbation()?.terms;
        out.model.alpha = None;
        out.model.beta = None;
        out.model.theta = None;
        out.model.amp = None;
        out.model.variant = None;
        Ok(out)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}

fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
    let value = parse_literal(raw.trim());
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("bad override key `{key}`")));
    }
    let mut table = doc;
    for p in &parts[..parts.len() - 1] {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override `{key}`: `{p}` is not a table")))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn parse_literal(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or(toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_expand() {
        let c = RunConfig::from_toml_with("", &["model.alpha=0.4".into()]).unwrap();
        let t = &c.resolved().unwrap().model.terms;
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].mu(), t[0].nu(), t[0].coeff()), (0, 3, 0.4));
        let c = RunConfig::from_toml_with("", &["model.beta=0.8".into()]).unwrap();
        let t = &c.resolved().unwrap().model.terms;
        assert_eq!((t[0].mu(), t[0].nu(), t[0].coeff()), (3, 0, 0.8));
        let c = RunConfig::from_toml("[model]\ngamma_in=0.2\ngamma_ex=0.4\ngamma_in_p=0.1\ngamma_ex_p=0.2\ntheta=\"0.35pi\"\namp=0.8\nvariant=\"zz0\"\n").unwrap();
        let expect = PerturbationSpec::theta_mix(0.8, 0.35 * std::f64::consts::PI, ThetaVariant::Zz0);
        assert_eq!(c.resolved().unwrap().model.terms, expect.terms);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(RunConfig::from_toml("[model]\ngama_in = 1\n"), Err(Error::Config(_))));
        assert!(RunConfig::from_toml("[lattice]\nnx = 4\nfoo = 1\n").is_err());
        assert!(RunConfig::from_toml_with("", &["output.colour=1".into()]).is_err());
        assert!(RunConfig::from_toml("[model]\nalpha = \"x\"\n").is_err());
    }

    #[test]
    fn resolved_config_round_trips() {
        let c = RunConfig::from_toml_with(
            "",
            &["model.theta=0.25pi".into(), "model.variant=zzz".into(), "lattice.bcs=[\"PBC\",\"xyOBC\"]".into()],
        )
        .unwrap()
        .resolved()
        .unwrap();
        let again = RunConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.resolved().unwrap(), c);
    }

    #[test]
    fn overrides_parse_literals() {
        let c = RunConfig::from_toml_with("", &["lattice.nx=7".into(), "output.dir=somewhere".into()]).unwrap();
        assert_eq!(c.lattice.nx, 7);
        assert_eq!(c.output.dir, "somewhere");
        assert!(RunConfig::from_toml_with("", &["novalue".into()]).is_err());
        assert!(RunConfig::from_toml_with("", &["lattice.nx=0".into()]).is_err());
    }
}
