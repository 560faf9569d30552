use crate::bounds::{BoundSelection, T0};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Moduli {
    List(Vec<u64>),
    /// `m^6` for `m >= 2` with `m^6 <= max`.
    SixthPowers { max: u64 },
}

impl Moduli {
    pub fn values(&self) -> Vec<u64> {
        match self {
            Moduli::List(v) => v.clone(),
            Moduli::SixthPowers { max } => (2u64..)
                .map(|m| m.saturating_pow(6))
                .take_while(|q| q <= max)
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl TGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let k = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.max;
                }
                let s = i as f64 / k;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * s,
                    Spacing::Log => self.min * (self.max / self.min).powf(s),
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CharFilter {
    All,
    Primitive,
    Principal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub moduli: Moduli,
    pub t_grid: TGrid,
    pub chars: CharFilter,
    pub bounds: BoundSelection,
    /// Also run the dyadic replay on nonprincipal cells with `|t| >= 200`.
    pub replay: bool,
    pub eps: f64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            moduli: Moduli::List(vec![64, 729]),
            t_grid: TGrid {
                min: 200.0,
                max: 5000.0,
                count: 25,
                spacing: Spacing::Linear,
            },
            chars: CharFilter::Primitive,
            bounds: BoundSelection::default(),
            replay: false,
            eps: 1e-6,
            threads: None,
            out: None,
            json: None,
        }
    }
}

/// Recognized keys, shared by config files and command-line overrides.
pub const KEYS: &[&str] = &[
    "moduli",
    "sixth_powers_max",
    "t_min",
    "t_max",
    "t_count",
    "t_spacing",
    "chars",
    "bounds",
    "replay",
    "eps",
    "threads",
    "out",
    "json",
];

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| usage(format!("bad value for {key}: {v:?}")))
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim().to_string();
        if !KEYS.contains(&k.as_str()) {
            return Err(usage(format!("line {}: unknown key {k:?}", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_key_values(&text)
}

fn parse_bounds(v: &str) -> Result<BoundSelection> {
    let mut sel = BoundSelection {
        theorem: false,
        corollary: false,
        convexity: false,
        partial: false,
        principal: false,
        rademacher: false,
    };
    for name in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match name {
            "theorem" => sel.theorem = true,
            "corollary" => sel.corollary = true,
            "convexity" => sel.convexity = true,
            "partial" => sel.partial = true,
            "principal" => sel.principal = true,
            "rademacher" => sel.rademacher = true,
            "all" => {
                sel = BoundSelection {
                    rademacher: true,
                    ..BoundSelection::default()
                }
            }
            _ => return Err(usage(format!("unknown bound family {name:?}"))),
        }
    }
    Ok(sel)
}

impl SweepConfig {
    /// Builds a config from defaults overlaid with `map`. Later sources
    /// should be merged into `map` by the caller so they win.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut c = SweepConfig::default();
        for (k, v) in map {
            match k.as_str() {
                "moduli" => {
                    let list = v
                        .split(',')
                        .map(|s| parse::<u64>(k, s))
                        .collect::<Result<Vec<_>>>()?;
                    c.moduli = Moduli::List(list);
                }
                "sixth_powers_max" => c.moduli = Moduli::SixthPowers { max: parse(k, v)? },
                "t_min" => c.t_grid.min = parse(k, v)?,
                "t_max" => c.t_grid.max = parse(k, v)?,
                "t_count" => c.t_grid.count = parse(k, v)?,
                "t_spacing" => {
                    c.t_grid.spacing = match v.as_str() {
                        "linear" => Spacing::Linear,
                        "log" => Spacing::Log,
                        _ => return Err(usage(format!("t_spacing must be linear or log, got {v:?}"))),
                    }
                }
                "chars" => {
                    c.chars = match v.as_str() {
                        "all" => CharFilter::All,
                        "primitive" => CharFilter::Primitive,
                        "principal" => CharFilter::Principal,
                        _ => {
                            return Err(usage(format!(
                                "chars must be all, primitive or principal, got {v:?}"
                            )))
                        }
                    }
                }
                "bounds" => c.bounds = parse_bounds(v)?,
                "replay" => c.replay = parse(k, v)?,
                "eps" => c.eps = parse(k, v)?,
                "threads" => c.threads = Some(parse(k, v)?),
                "out" => c.out = Some(PathBuf::from(v)),
                "json" => c.json = Some(PathBuf::from(v)),
                _ => return Err(usage(format!("unknown key {k:?}"))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.t_grid;
        if g.count == 0 {
            return Err(usage("t_count must be at least 1"));
        }
        if !(g.min.is_finite() && g.max.is_finite()) || g.min > g.max {
            return Err(usage(format!("need t_min <= t_max, got [{}, {}]", g.min, g.max)));
        }
        if g.spacing == Spacing::Log && !(g.min > 0.0) {
            return Err(usage("log spacing needs t_min > 0"));
        }
        let low = self.t_grid.points().iter().any(|t| t.abs() < T0);
        if (self.bounds.theorem || self.bounds.corollary) && low {
            return Err(usage(format!(
                "t_min = {} is below 200 with the theorem or corollary bound selected",
                g.min
            )));
        }
        if self.replay && low {
            return Err(usage("replay needs t_min >= 200"));
        }
        let qs = self.moduli.values();
        if qs.is_empty() || qs.contains(&0) {
            return Err(usage("moduli must be a nonempty list of positive integers"));
        }
        if !(self.eps >= crate::lfunc::MIN_EPS) {
            return Err(usage(format!("eps must be at least 1e-12, got {}", self.eps)));
        }
        if self.threads == Some(0) {
            return Err(usage("threads must be positive"));
        }
        Ok(())
    }
}
