//! Run configuration: flags override a `key = value` file, which overrides defaults.

use std::collections::BTreeMap;
use std::fmt;

pub const DEFAULT_DEGREE: usize = 6;
pub const DEFAULT_LEVEL: usize = 1;
pub const DEFAULT_LOOP_WINDOW: i64 = 3;
pub const MAX_DEGREE_ENV: &str = "SUPERYANG_MAX_DEGREE";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Dot,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "dot" => Ok(OutputFormat::Dot),
            "text" => Ok(OutputFormat::Text),
            _ => Err(ConfigError(format!("unknown output format {:?}", s))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Optional settings from one source.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partial {
    pub word: Option<String>,
    pub affine: Option<bool>,
    pub node: Option<usize>,
    pub degree: Option<usize>,
    pub level: Option<usize>,
    pub loop_window: Option<i64>,
    pub out: Option<OutputFormat>,
    pub seed: Option<u64>,
}

impl Partial {
    /// Fields set in `self` win.
    pub fn over(self, lower: Partial) -> Partial {
        Partial {
            word: self.word.or(lower.word),
            affine: self.affine.or(lower.affine),
            node: self.node.or(lower.node),
            degree: self.degree.or(lower.degree),
            level: self.level.or(lower.level),
            loop_window: self.loop_window.or(lower.loop_window),
            out: self.out.or(lower.out),
            seed: self.seed.or(lower.seed),
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError(format!("bad value {:?} for {}", v, key)))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError(format!("bad value {:?} for {}", v, key))),
    }
}

/// Parses `key = value` lines; `#` starts a comment.
///
/// Keys: `word`, `affine`, `node`, `degree`, `level`, `loop_window`, `out`, `seed`.
pub fn parse_config(text: &str) -> Result<Partial, ConfigError> {
    let mut seen = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("line {}: expected key = value", no + 1)))?;
        let key = k.trim().replace('-', "_");
        if seen.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(ConfigError(format!("line {}: duplicate key {}", no + 1, key)));
        }
    }
    let mut p = Partial::default();
    for (k, v) in &seen {
        match k.as_str() {
            "word" => p.word = Some(v.clone()),
            "affine" => p.affine = Some(parse_bool(k, v)?),
            "node" => p.node = Some(parse_value(k, v)?),
            "degree" => p.degree = Some(parse_value(k, v)?),
            "level" => p.level = Some(parse_value(k, v)?),
            "loop_window" => p.loop_window = Some(parse_value(k, v)?),
            "out" => p.out = Some(v.parse()?),
            "seed" => p.seed = Some(parse_value(k, v)?),
            _ => return Err(ConfigError(format!("unknown key {}", k))),
        }
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub word: String,
    pub m: usize,
    pub n: usize,
    pub affine: bool,
    pub node: Option<usize>,
    pub degree: usize,
    pub level: usize,
    pub loop_window: i64,
    pub out: OutputFormat,
    pub seed: u64,
}

impl RunConfig {
    /// Fills defaults and validates; `max_degree` is the environment cap.
    pub fn resolve(p: Partial, max_degree: Option<usize>) -> Result<RunConfig, ConfigError> {
        let word = p.word.ok_or_else(|| ConfigError("missing --word".into()))?;
        if word.len() < 2 || !word.chars().all(|c| c == '0' || c == '1') {
            return Err(ConfigError(format!("parity word {:?} must be at least two 0/1 letters", word)));
        }
        let n = word.chars().filter(|&c| c == '1').count();
        let cfg = RunConfig {
            m: word.len() - n,
            n,
            word,
            affine: p.affine.unwrap_or(false),
            node: p.node,
            degree: p.degree.unwrap_or(DEFAULT_DEGREE),
            level: p.level.unwrap_or(DEFAULT_LEVEL),
            loop_window: p.loop_window.unwrap_or(DEFAULT_LOOP_WINDOW),
            out: p.out.unwrap_or(OutputFormat::Text),
            seed: p.seed.unwrap_or(0),
        };
        if cfg.degree == 0 || cfg.level == 0 || cfg.loop_window <= 0 {
            return Err(ConfigError("bounds must be positive".into()));
        }
        if let Some(cap) = max_degree {
            if cfg.degree > cap {
                return Err(ConfigError(format!("degree {} exceeds {}={}", cfg.degree, MAX_DEGREE_ENV, cap)));
            }
        }
        Ok(cfg)
    }
}

/// Reads the degree cap from the environment.
pub fn max_degree_from_env() -> Result<Option<usize>, ConfigError> {
    match std::env::var(MAX_DEGREE_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| ConfigError(format!("{} must be a nonnegative integer", MAX_DEGREE_ENV))),
        Err(_) => Ok(None),
    }
}
