//! Sweep configuration files.
//!
//! A file holds one `[family]` and one `[sweep]` section of `key = value`
//! lines. `#` starts a comment.
//!
//! ```text
//! [family]
//! name = coherent
//! M = 1
//!
//! [sweep]
//! values = 0, 0.1
//! models = bvn
//! ```

use std::fmt;
use std::path::PathBuf;

use qfi_core::{DerivativeMode, Model};

use crate::families::FamilySpec;

/// Where a token sits in the source, 1-based. Line 0 means "not from a file".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub span: Span,
    pub message: String,
}

impl ConfigError {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Self { span, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.span.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(f, "{}:{}: {}", self.span.line, self.span.col, self.message)
        }
    }
}

/// One `key = value` line.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub key_span: Span,
    pub value_span: Span,
}

impl Entry {
    pub fn error(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::new(self.value_span, message)
    }

    pub fn number(&self) -> Result<f64, ConfigError> {
        let v: f64 = self.value.parse().map_err(|_| self.error(format!("`{}` is not a number", self.value)))?;
        if !v.is_finite() {
            return Err(self.error("value must be finite"));
        }
        Ok(v)
    }

    pub fn integer(&self) -> Result<usize, ConfigError> {
        self.value
            .parse()
            .map_err(|_| self.error(format!("`{}` is not a non-negative integer", self.value)))
    }

    pub fn boolean(&self) -> Result<bool, ConfigError> {
        match self.value.as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(self.error(format!("`{other}` is not a boolean"))),
        }
    }

    /// Comma-separated items with the span of each.
    pub fn items(&self) -> Vec<(String, Span)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for part in self.value.split(',') {
            let lead = part.len() - part.trim_start().len();
            let item = part.trim();
            if !item.is_empty() {
                let col = self.value_span.col + offset + lead;
                out.push((item.to_string(), Span { line: self.value_span.line, col }));
            }
            offset += part.len() + 1;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Range { start: f64, stop: f64, count: usize },
    Values(Vec<f64>),
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { start, stop, count } => {
                if *count == 1 {
                    return vec![*start];
                }
                let step = (stop - start) / (*count - 1) as f64;
                (0..*count).map(|i| if i + 1 == *count { *stop } else { start + step * i as f64 }).collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family_name: String,
    pub family_entries: Vec<Entry>,
    /// `None` sweeps θ; otherwise the named family parameter at fixed θ.
    pub param: Option<String>,
    pub theta: f64,
    pub grid: Grid,
    pub models: Vec<Model>,
    pub derivative: DerivativeMode,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl SweepConfig {
    /// The family for one grid value, with a swept parameter substituted.
    pub fn family_spec(&self, grid_value: f64) -> Result<FamilySpec, ConfigError> {
        match &self.param {
            None => FamilySpec::from_entries(&self.family_name, &self.family_entries),
            Some(p) => {
                let mut entries = self.family_entries.clone();
                entries.retain(|e| e.key != *p);
                entries.push(Entry {
                    key: p.clone(),
                    value: grid_value.to_string(),
                    key_span: Span::default(),
                    value_span: Span::default(),
                });
                FamilySpec::from_entries(&self.family_name, &entries)
            }
        }
    }

    /// `(θ, grid value)` for every row, in grid order.
    pub fn rows(&self) -> Vec<(f64, f64)> {
        self.grid
            .points()
            .into_iter()
            .map(|g| if self.param.is_some() { (self.theta, g) } else { (g, g) })
            .collect()
    }
}

struct Section {
    header: Span,
    entries: Vec<Entry>,
}

const SWEEP_KEYS: &[&str] =
    &["param", "theta", "start", "stop", "count", "values", "models", "derivative", "step", "output", "format"];

pub fn parse(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut family: Option<Section> = None;
    let mut sweep: Option<Section> = None;
    let mut current: Option<&'static str> = None;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = body.len() - body.trim_start().len() + 1;
        let span = Span { line, col };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::new(span, "unterminated section header"))?
                .trim();
            let slot = match name {
                "family" => &mut family,
                "sweep" => &mut sweep,
                other => return Err(ConfigError::new(span, format!("unknown section `[{other}]`"))),
            };
            if slot.is_some() {
                return Err(ConfigError::new(span, format!("duplicate section `[{name}]`")));
            }
            *slot = Some(Section { header: span, entries: Vec::new() });
            current = Some(if name == "family" { "family" } else { "sweep" });
            continue;
        }
        let section = match current {
            Some("family") => family.as_mut().unwrap(),
            Some(_) => sweep.as_mut().unwrap(),
            None => return Err(ConfigError::new(span, "key outside of a section")),
        };
        let eq = body.find('=').ok_or_else(|| ConfigError::new(span, "expected `key = value`"))?;
        let key = body[..eq].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ConfigError::new(span, format!("invalid key `{key}`")));
        }
        let after = &body[eq + 1..];
        let value = after.trim();
        let value_col = eq + 2 + (after.len() - after.trim_start().len());
        if value.is_empty() {
            return Err(ConfigError::new(Span { line, col: value_col }, format!("missing value for `{key}`")));
        }
        if section.entries.iter().any(|e| e.key == key) {
            return Err(ConfigError::new(span, format!("duplicate key `{key}`")));
        }
        if current == Some("sweep") && !SWEEP_KEYS.contains(&key) {
            return Err(ConfigError::new(span, format!("unknown sweep key `{key}`")));
        }
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
            key_span: span,
            value_span: Span { line, col: value_col },
        });
    }

    let eof = Span { line: last_line, col: 1 };
    let family = family.ok_or_else(|| ConfigError::new(eof, "missing `[family]` section"))?;
    let sweep = sweep.ok_or_else(|| ConfigError::new(eof, "missing `[sweep]` section"))?;

    let name_entry = family
        .entries
        .iter()
        .find(|e| e.key == "name")
        .ok_or_else(|| ConfigError::new(family.header, "`[family]` needs a `name`"))?;
    let family_name = name_entry.value.clone();
    let family_entries: Vec<Entry> = family.entries.iter().filter(|e| e.key != "name").cloned().collect();
    let sweepable = FamilySpec::sweepable(&family_name)
        .ok_or_else(|| name_entry.error(format!("unknown family `{family_name}`")))?;

    let get = |k: &str| sweep.entries.iter().find(|e| e.key == k);

    let param = match get("param") {
        None => None,
        Some(e) if e.value == "theta" => None,
        Some(e) => {
            if !sweepable.contains(&e.value.as_str()) {
                return Err(e.error(format!("`{}` cannot be swept for family `{family_name}`", e.value)));
            }
            Some(e.value.clone())
        }
    };
    let theta = match get("theta") {
        Some(e) if param.is_none() => return Err(ConfigError::new(e.key_span, "`theta` is fixed only when sweeping a family parameter")),
        Some(e) => e.number()?,
        None => 0.0,
    };

    let (grid, grid_entry) = match (get("values"), get("start"), get("stop"), get("count")) {
        (Some(v), None, None, None) => {
            let mut vals = Vec::new();
            for (item, span) in v.items() {
                let x: f64 = item.parse().map_err(|_| ConfigError::new(span, format!("`{item}` is not a number")))?;
                if !x.is_finite() {
                    return Err(ConfigError::new(span, "value must be finite"));
                }
                vals.push(x);
            }
            if vals.is_empty() {
                return Err(v.error("grid needs at least one value"));
            }
            (Grid::Values(vals), v)
        }
        (None, Some(s), Some(t), Some(c)) => {
            let count = c.integer()?;
            if count == 0 {
                return Err(c.error("count must be at least 1"));
            }
            (Grid::Range { start: s.number()?, stop: t.number()?, count }, s)
        }
        (Some(v), ..) => return Err(ConfigError::new(v.key_span, "give either `values` or `start`/`stop`/`count`")),
        _ => return Err(ConfigError::new(sweep.header, "grid needs `values` or all of `start`, `stop`, `count`")),
    };

    let models = match get("models") {
        None => Model::ALL.to_vec(),
        Some(e) => {
            let mut out: Vec<Model> = Vec::new();
            for (item, span) in e.items() {
                let m = Model::parse(&item).ok_or_else(|| ConfigError::new(span, format!("unknown model `{item}`")))?;
                if !out.contains(&m) {
                    out.push(m);
                }
            }
            if out.is_empty() {
                return Err(e.error("model list is empty"));
            }
            out
        }
    };

    let step = get("step").map(|e| e.number()).transpose()?;
    if let (Some(s), Some(e)) = (step, get("step")) {
        if s <= 0.0 {
            return Err(e.error("step must be positive"));
        }
    }
    let derivative = match get("derivative").map(|e| (e, e.value.as_str())) {
        None | Some((_, "analytic")) => {
            if let Some(e) = get("step") {
                return Err(ConfigError::new(e.key_span, "`step` needs a difference derivative"));
            }
            DerivativeMode::Analytic
        }
        Some((_, "central")) => DerivativeMode::CentralDifference { step, richardson: false },
        Some((_, "richardson")) => DerivativeMode::CentralDifference { step, richardson: true },
        Some((e, other)) => return Err(e.error(format!("unknown derivative mode `{other}`"))),
    };

    let output = get("output").map(|e| PathBuf::from(&e.value));
    let format = match get("format") {
        Some(e) => Format::parse(&e.value).ok_or_else(|| e.error(format!("unknown format `{}`", e.value)))?,
        None => match &output {
            Some(p) if p.extension().is_some_and(|x| x == "json") => Format::Json,
            _ => Format::Csv,
        },
    };

    let cfg = SweepConfig { family_name, family_entries, param, theta, grid, models, derivative, output, format };

    // every grid value must give a valid family with θ in its domain
    for (theta, g) in cfg.rows() {
        let spec = cfg
            .family_spec(g)
            .map_err(|e| if e.span.line == 0 { grid_entry.error(e.message) } else { e })?;
        if !spec.domain().contains(theta) {
            let what = if cfg.param.is_some() { "theta" } else { "grid value" };
            return Err(grid_entry.error(format!("{what} {theta} lies outside the domain of `{}`", cfg.family_name)));
        }
    }
    Ok(cfg)
}
