//! `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::Result as LibResult;
use crate::football::Method;
use crate::singular_gmt::Surface;
use crate::warped_geometry::WarpedMetric;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Profile,
    VariationCheck,
    Mass,
    BishopBound,
    FootballAlpha,
    Epsilon0,
    Monotonicity,
    CutoffBudget,
    CylinderGrowth,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Profile,
        Command::VariationCheck,
        Command::Mass,
        Command::BishopBound,
        Command::FootballAlpha,
        Command::Epsilon0,
        Command::Monotonicity,
        Command::CutoffBudget,
        Command::CylinderGrowth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Profile => "profile",
            Command::VariationCheck => "variation-check",
            Command::Mass => "mass",
            Command::BishopBound => "bishop-bound",
            Command::FootballAlpha => "football-alpha",
            Command::Epsilon0 => "epsilon0",
            Command::Monotonicity => "monotonicity",
            Command::CutoffBudget => "cutoff-budget",
            Command::CylinderGrowth => "cylinder-growth",
        }
    }

    /// Format used when none is requested.
    pub fn default_format(self) -> Format {
        match self {
            Command::BishopBound | Command::Epsilon0 | Command::CutoffBudget => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
            format!("unknown command `{s}`; valid commands: {}", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Sphere { radius: f64 },
    Football { cone_factor: f64, scale: f64 },
    Cylinder { radius: f64, length: f64 },
    Tabulated { t_max: f64, samples: Vec<f64> },
}

impl ModelSpec {
    pub fn build(&self, n: usize) -> LibResult<WarpedMetric> {
        match self {
            ModelSpec::Sphere { radius } => WarpedMetric::round_sphere(n, *radius),
            ModelSpec::Football { cone_factor, scale } => WarpedMetric::football(n, *cone_factor, *scale),
            ModelSpec::Cylinder { radius, length } => WarpedMetric::cylinder(n, *radius, *length),
            ModelSpec::Tabulated { t_max, samples } => WarpedMetric::tabulated(n, *t_max, samples.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl EpsGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        (0..self.count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

impl FromStr for EpsGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || format!("eps grid `{s}` must look like lo:hi:count");
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let count: usize = parts[2].parse().map_err(|_| bad())?;
        if !(lo > 0.0 && hi <= 1.0 && lo <= hi) || count == 0 || (count > 1 && lo == hi) {
            return Err(format!("eps grid needs 0 < lo < hi <= 1 and count >= 1, got `{s}`"));
        }
        Ok(EpsGrid { lo, hi, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseSpec {
    Sphere,
    Circle,
    Cone,
}

impl FromStr for CaseSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sphere" => Ok(CaseSpec::Sphere),
            "circle" => Ok(CaseSpec::Circle),
            "cone" => Ok(CaseSpec::Cone),
            _ => Err(format!("unknown case `{s}` (expected sphere, circle or cone)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Dimension; commands fill in their own default when unset.
    pub n: Option<usize>,
    pub model: ModelSpec,
    pub grid: usize,
    pub ric0: f64,
    pub t: Option<f64>,
    pub h: Option<f64>,
    pub halvings: usize,
    pub eps_grid: EpsGrid,
    pub method: Method,
    pub tol: f64,
    pub case: CaseSpec,
    pub lambda: Option<f64>,
    pub rho_count: usize,
    pub cone_angle: f64,
    pub sphere_dim: usize,
    pub radii: Vec<f64>,
    pub delta: f64,
    pub c0: f64,
    pub c: f64,
    pub h_bubble: f64,
    pub lengths: Vec<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    /// Settings as given, for output headers.
    pub params: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| self.command.default_format())
    }

    pub fn surface(&self) -> Surface {
        match self.case {
            CaseSpec::Sphere => Surface::UnitSphereInSpace { m: self.sphere_dim },
            CaseSpec::Circle => Surface::UnitCircleInPlane,
            CaseSpec::Cone => Surface::ConeOverCircle { angle: self.cone_angle },
        }
    }
}

pub const KEYS: [&str; 30] = [
    "command", "model", "n", "radius", "cone_factor", "scale", "length", "t_max", "samples", "grid",
    "ric0", "t", "h", "halvings", "eps_grid", "method", "tol", "case", "lambda", "rho_count",
    "cone_angle", "sphere_dim", "radii", "delta", "c0", "c", "h_bubble", "lengths", "output",
    "format",
];

/// A `key = value` pair and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    /// 1-based line in the config text; `None` for command-line settings.
    pub line: Option<usize>,
}

fn err(line: Option<usize>, message: impl Into<String>) -> CliError {
    CliError::Config {
        line,
        message: message.into(),
    }
}

/// Split config text into entries, rejecting unknown and repeated keys.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = Some(i + 1);
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(line, format!("unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(err(line, format!("key `{key}` has no value")));
        }
        if let Some(first) = seen.insert(key.to_string(), i + 1) {
            return Err(err(line, format!("key `{key}` repeats line {first}")));
        }
        out.push(Entry {
            key: key.into(),
            value: value.into(),
            line,
        });
    }
    Ok(out)
}

/// Parse and validate a full configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    build(parse_entries(text)?)
}

/// Config text plus command-line settings, which win over the file.
pub fn load(command: &str, text: &str, overrides: &[(String, String)]) -> Result<RunConfig, CliError> {
    let mut entries = parse_entries(text)?;
    if let Some(e) = entries.iter().find(|e| e.key == "command") {
        if e.value != command {
            return Err(err(
                e.line,
                format!("config is for `{}` but `{command}` was requested", e.value),
            ));
        }
    }
    entries.retain(|e| e.key != "command");
    entries.insert(
        0,
        Entry {
            key: "command".into(),
            value: command.into(),
            line: None,
        },
    );
    for (key, value) in overrides {
        if !KEYS.contains(&key.as_str()) {
            return Err(err(None, format!("unknown key `{key}`")));
        }
        entries.retain(|e| &e.key != key);
        entries.push(Entry {
            key: key.clone(),
            value: value.clone(),
            line: None,
        });
    }
    build(entries)
}

fn parse_value<T: FromStr>(e: &Entry, what: &str) -> Result<T, CliError> {
    e.value
        .parse()
        .map_err(|_| err(e.line, format!("`{}` = `{}` is not {what}", e.key, e.value)))
}

fn parse_list(e: &Entry) -> Result<Vec<f64>, CliError> {
    let v: Result<Vec<f64>, CliError> = e
        .value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| err(e.line, format!("`{}` holds a malformed number `{}`", e.key, s.trim())))
        })
        .collect();
    let v = v?;
    if v.is_empty() {
        return Err(err(e.line, format!("`{}` is empty", e.key)));
    }
    Ok(v)
}

fn positive(e: &Entry) -> Result<f64, CliError> {
    let v: f64 = parse_value(e, "a number")?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(err(e.line, format!("`{}` must be positive, got {v}", e.key)));
    }
    Ok(v)
}

fn nonnegative(e: &Entry) -> Result<f64, CliError> {
    let v: f64 = parse_value(e, "a number")?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(err(e.line, format!("`{}` must be nonnegative, got {v}", e.key)));
    }
    Ok(v)
}

fn at_least(e: &Entry, min: usize) -> Result<usize, CliError> {
    let v: usize = parse_value(e, "a nonnegative integer")?;
    if v < min {
        return Err(err(e.line, format!("`{}` = {v} is below minimum {min}", e.key)));
    }
    Ok(v)
}

fn build(entries: Vec<Entry>) -> Result<RunConfig, CliError> {
    let get = |k: &str| entries.iter().find(|e| e.key == k);
    let command_entry = get("command").ok_or_else(|| err(None, "missing required key `command`"))?;
    let command: Command = command_entry
        .value
        .parse()
        .map_err(|m: String| err(command_entry.line, m))?;

    let mut cfg = RunConfig {
        command,
        n: None,
        model: ModelSpec::Sphere { radius: 1.0 },
        grid: 1024,
        ric0: 2.0,
        t: None,
        h: None,
        halvings: 3,
        eps_grid: EpsGrid {
            lo: 0.05,
            hi: 1.0,
            count: 20,
        },
        method: Method::Oracle,
        tol: 5e-4,
        case: CaseSpec::Sphere,
        lambda: None,
        rho_count: 64,
        cone_angle: 0.5,
        sphere_dim: 2,
        radii: Vec::new(),
        delta: 0.05,
        c0: 1.0,
        c: 1.0,
        h_bubble: 0.0,
        lengths: vec![10.0, 100.0, 1000.0],
        output: None,
        format: None,
        params: BTreeMap::new(),
    };

    for e in &entries {
        match e.key.as_str() {
            "n" => cfg.n = Some(at_least(e, 3)?),
            "grid" => cfg.grid = at_least(e, 16)?,
            "ric0" => cfg.ric0 = positive(e)?,
            "t" => cfg.t = Some(positive(e)?),
            "h" => cfg.h = Some(positive(e)?),
            "halvings" => cfg.halvings = at_least(e, 1)?,
            "eps_grid" => cfg.eps_grid = e.value.parse().map_err(|m: String| err(e.line, m))?,
            "method" => {
                cfg.method = e
                    .value
                    .parse()
                    .map_err(|_| err(e.line, format!("unknown method `{}` (expected oracle or as-written)", e.value)))?
            }
            "tol" => cfg.tol = positive(e)?,
            "case" => cfg.case = e.value.parse().map_err(|m: String| err(e.line, m))?,
            "lambda" => {
                let v: f64 = parse_value(e, "a number")?;
                if !v.is_finite() {
                    return Err(err(e.line, "`lambda` must be finite"));
                }
                cfg.lambda = Some(v);
            }
            "rho_count" => cfg.rho_count = at_least(e, 2)?,
            "cone_angle" => cfg.cone_angle = positive(e)?,
            "sphere_dim" => cfg.sphere_dim = at_least(e, 1)?,
            "radii" => cfg.radii = parse_list(e)?,
            "delta" => cfg.delta = positive(e)?,
            "c0" => cfg.c0 = nonnegative(e)?,
            "c" => cfg.c = nonnegative(e)?,
            "h_bubble" => {
                let v: f64 = parse_value(e, "a number")?;
                if !v.is_finite() {
                    return Err(err(e.line, "`h_bubble` must be finite"));
                }
                cfg.h_bubble = v;
            }
            "lengths" => cfg.lengths = parse_list(e)?,
            "output" => cfg.output = Some(PathBuf::from(&e.value)),
            "format" => cfg.format = Some(e.value.parse().map_err(|m: String| err(e.line, m))?),
            _ => {}
        }
        if e.key != "command" && e.key != "output" {
            cfg.params.insert(e.key.clone(), e.value.clone());
        }
    }

    cfg.model = model(&get)?;
    Ok(cfg)
}

fn model<'a>(get: &impl Fn(&str) -> Option<&'a Entry>) -> Result<ModelSpec, CliError> {
    let num = |k: &str, default: f64| -> Result<f64, CliError> {
        get(k).map_or(Ok(default), positive)
    };
    let kind = get("model");
    let name = kind.map_or("sphere", |e| e.value.as_str());
    Ok(match name {
        "sphere" => ModelSpec::Sphere {
            radius: num("radius", 1.0)?,
        },
        "football" => {
            let cone_factor = num("cone_factor", 0.5)?;
            if cone_factor > 1.0 {
                return Err(err(
                    get("cone_factor").and_then(|e| e.line),
                    format!("`cone_factor` must lie in (0, 1], got {cone_factor}"),
                ));
            }
            ModelSpec::Football {
                cone_factor,
                scale: num("scale", 1.0)?,
            }
        }
        "cylinder" => ModelSpec::Cylinder {
            radius: num("radius", 1.0)?,
            length: num("length", 10.0)?,
        },
        "tabulated" => {
            let samples = get("samples")
                .ok_or_else(|| err(kind.and_then(|e| e.line), "missing required key `samples` for model = tabulated"))?;
            let t_max = get("t_max")
                .ok_or_else(|| err(kind.and_then(|e| e.line), "missing required key `t_max` for model = tabulated"))?;
            ModelSpec::Tabulated {
                t_max: positive(t_max)?,
                samples: parse_list(samples)?,
            }
        }
        other => {
            return Err(err(
                kind.and_then(|e| e.line),
                format!("unknown model `{other}` (expected sphere, football, cylinder or tabulated)"),
            ))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_bishop_config() {
        let c = parse_config("command = bishop-bound\nn = 3\nric0 = 2").unwrap();
        assert_eq!(c.command, Command::BishopBound);
        assert_eq!(c.n, Some(3));
        assert_eq!(c.ric0, 2.0);
        assert_eq!(c.format(), Format::Json);
    }

    #[test]
    fn dimension_below_three() {
        let e = parse_config("command = bishop-bound\nn = 2").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 2") && msg.contains("minimum 3"), "{msg}");
    }

    #[test]
    fn unknown_command_lists_valid_ones() {
        let msg = parse_config("command = flya").unwrap_err().to_string();
        assert!(msg.contains("flya") && msg.contains("bishop-bound") && msg.contains("line 1"));
    }

    #[test]
    fn unknown_key_is_named() {
        let msg = parse_config("command = mass\n# note\nricci = 2").unwrap_err().to_string();
        assert!(msg.contains("line 3") && msg.contains("`ricci`"), "{msg}");
    }

    #[test]
    fn malformed_number_has_line() {
        let msg = parse_config("command = mass\n\nric0 = two").unwrap_err().to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn missing_command() {
        let msg = parse_config("n = 3").unwrap_err().to_string();
        assert!(msg.contains("command"));
    }

    #[test]
    fn tabulated_needs_samples() {
        let msg = parse_config("command = profile\nmodel = tabulated\nt_max = 3")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("samples"));
    }

    #[test]
    fn comments_and_lists() {
        let c = parse_config(
            "command = cutoff-budget # budgets\nradii = 0.01, 0.02\nn = 9\neps_grid = 0.1:0.5:5",
        )
        .unwrap();
        assert_eq!(c.radii, vec![0.01, 0.02]);
        assert_eq!(c.eps_grid.values().len(), 5);
        assert_eq!(c.params.get("n").map(String::as_str), Some("9"));
    }

    #[test]
    fn overrides_win() {
        let c = load("bishop-bound", "n = 3\nric0 = 2", &[("ric0".into(), "8".into())]).unwrap();
        assert_eq!(c.ric0, 8.0);
        assert!(load("mass", "command = bishop-bound", &[]).is_err());
    }
}
