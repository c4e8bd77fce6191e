//! Run configuration: `key = value` files, flag overrides and angle
//! expressions written as multiples of π.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::params::{InitialState, SystemParams};

pub const DEFAULT_T_MAX: f64 = 15.0;
pub const MAX_T_MAX: f64 = 50.0;
pub const DEFAULT_SAMPLES: usize = 3000;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub source: Option<String>,
    pub line: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        ConfigError {
            source: None,
            line: None,
            field: Some(field.to_string()),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.source, self.line) {
            (Some(s), Some(l)) => write!(f, "{s}:{l}: ")?,
            (Some(s), None) => write!(f, "{s}: ")?,
            (None, Some(l)) => write!(f, "line {l}: ")?,
            (None, None) => {}
        }
        if let Some(field) = &self.field {
            write!(f, "field '{field}': ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parse an angle such as `pi/2`, `3pi/2`, `1/3 pi`, `-0.25 pi` or `0.7`
/// (plain radians).
pub fn parse_angle(expr: &str) -> Result<f64, String> {
    let cleaned: String = expr
        .trim()
        .to_lowercase()
        .replace('π', "pi")
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*')
        .collect();
    if cleaned.is_empty() {
        return Err("empty angle".into());
    }
    let Some(pos) = cleaned.find("pi") else {
        return parse_ratio(&cleaned).map(|(n, d)| n / d);
    };
    let (prefix, rest) = cleaned.split_at(pos);
    let suffix = &rest[2..];
    let (num, den) = match prefix {
        "" | "+" => (1.0, 1.0),
        "-" => (-1.0, 1.0),
        p => parse_ratio(p)?,
    };
    let den2 = match suffix {
        "" => 1.0,
        s => {
            let d = s
                .strip_prefix('/')
                .ok_or_else(|| format!("unexpected '{s}' after pi in '{expr}'"))?;
            parse_number(d)?
        }
    };
    let den = den * den2;
    if den == 0.0 {
        return Err(format!("division by zero in '{expr}'"));
    }
    Ok(PI * num / den)
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("'{s}' is not a finite number"))
}

fn parse_ratio(s: &str) -> Result<(f64, f64), String> {
    match s.split_once('/') {
        Some((a, b)) => {
            let d = parse_number(b)?;
            if d == 0.0 {
                return Err(format!("division by zero in '{s}'"));
            }
            Ok((parse_number(a)?, d))
        }
        None => Ok((parse_number(s)?, 1.0)),
    }
}

/// One `key = value` line of a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub const KEYS: [&str; 9] = [
    "delta", "chi", "kappa", "gamma", "theta", "phi", "t_max", "samples", "out",
];

pub fn parse_config_text(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(ConfigError {
                source: None,
                line: Some(line),
                field: None,
                message: format!("expected 'key = value', got '{content}'"),
            });
        };
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError {
                source: None,
                line: Some(line),
                field: Some(key.clone()),
                message: format!("unknown key (expected one of {})", KEYS.join(", ")),
            });
        }
        if out.iter().any(|e: &Entry| e.key == key) {
            return Err(ConfigError {
                source: None,
                line: Some(line),
                field: Some(key),
                message: "duplicate key".into(),
            });
        }
        out.push(Entry {
            line,
            key,
            value: v.trim().to_string(),
        });
    }
    Ok(out)
}

/// Values that may come from a file or from flags; flags win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub delta: Option<f64>,
    pub chi: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma: Option<f64>,
    pub theta: Option<String>,
    pub phi: Option<String>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub init: InitialState,
    /// Angle expressions as given, echoed into CSV metadata.
    pub theta_expr: String,
    pub phi_expr: String,
    pub t_max: f64,
    pub samples: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, ConfigError> {
        let mut merged = Overrides::default();
        let mut lines: Vec<(&'static str, usize)> = Vec::new();
        let source = file.map(|p| p.display().to_string());
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
                source: source.clone(),
                line: None,
                field: None,
                message: format!("cannot read config: {e}"),
            })?;
            let entries = parse_config_text(&text).map_err(|mut e| {
                e.source = source.clone();
                e
            })?;
            for e in entries {
                let key = KEYS.iter().find(|k| **k == e.key).copied().unwrap_or("?");
                lines.push((key, e.line));
                apply_entry(&mut merged, &e).map_err(|mut err| {
                    err.source = source.clone();
                    err.line = Some(e.line);
                    err
                })?;
            }
        }
        let located = |field: &str, message: String| {
            let line = lines.iter().find(|(k, _)| *k == field).map(|(_, l)| *l);
            ConfigError {
                source: line.and(source.clone()),
                line,
                field: Some(field.to_string()),
                message,
            }
        };
        macro_rules! take {
            ($name:ident) => {
                if flags.$name.is_some() {
                    merged.$name = flags.$name.clone();
                }
            };
        }
        take!(delta);
        take!(chi);
        take!(kappa);
        take!(gamma);
        take!(theta);
        take!(phi);
        take!(t_max);
        take!(samples);
        take!(out);

        let theta_expr = merged.theta.unwrap_or_else(|| "pi/4".into());
        let phi_expr = merged.phi.unwrap_or_else(|| "0".into());
        let theta = parse_angle(&theta_expr).map_err(|m| located("theta", m))?;
        let phi = parse_angle(&phi_expr).map_err(|m| located("phi", m))?;
        let t_max = merged.t_max.unwrap_or(DEFAULT_T_MAX);
        if !(t_max > 0.0 && t_max <= MAX_T_MAX) {
            return Err(located(
                "t_max",
                format!("must lie in (0, {MAX_T_MAX}], got {t_max}"),
            ));
        }
        let samples = merged.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(located(
                "samples",
                format!("must be at least 2, got {samples}"),
            ));
        }
        let params = SystemParams::scaled(
            merged.delta.unwrap_or(0.0),
            merged.chi.unwrap_or(0.0),
            merged.kappa.unwrap_or(0.0),
            merged.gamma.unwrap_or(0.0),
        )
        .map_err(|e| {
            let field = ["delta", "chi", "kappa", "gamma"]
                .into_iter()
                .find(|f| e.to_string().contains(f))
                .unwrap_or("params");
            located(field, e.to_string())
        })?;
        Ok(RunConfig {
            params,
            init: InitialState::new(theta, phi),
            theta_expr,
            phi_expr,
            t_max,
            samples,
            out: merged.out,
        })
    }
}

fn apply_entry(o: &mut Overrides, e: &Entry) -> Result<(), ConfigError> {
    let num = |v: &str| parse_number(v).map_err(|m| ConfigError::field(&e.key, m));
    match e.key.as_str() {
        "delta" => o.delta = Some(num(&e.value)?),
        "chi" => o.chi = Some(num(&e.value)?),
        "kappa" => o.kappa = Some(num(&e.value)?),
        "gamma" => o.gamma = Some(num(&e.value)?),
        "theta" => o.theta = Some(e.value.clone()),
        "phi" => o.phi = Some(e.value.clone()),
        "t_max" => o.t_max = Some(num(&e.value)?),
        "samples" => {
            o.samples = Some(e.value.parse().map_err(|_| {
                ConfigError::field("samples", format!("'{}' is not a count", e.value))
            })?)
        }
        "out" => o.out = Some(PathBuf::from(&e.value)),
        _ => unreachable!("keys are checked while parsing"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn angle_forms() {
        assert_eq!(parse_angle("pi/2").unwrap(), FRAC_PI_2);
        assert_eq!(parse_angle("3pi/2").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse_angle("3/2 pi").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse_angle("1/3 pi").unwrap(), PI / 3.0);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("π/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("0.7").unwrap(), 0.7);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn config_lines() {
        let e = parse_config_text("# c\ndelta = 10\n\ntheta = 1/3 pi  # comment\n").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[1].line, 4);
        assert_eq!(e[1].value, "1/3 pi");
        let err = parse_config_text("delta = 1\nbogus = 2\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert_eq!(err.field.as_deref(), Some("bogus"));
        assert!(parse_config_text("delta 1").is_err());
        assert!(parse_config_text("chi = 1\nchi = 2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "delta = 10\nchi = 0.4\nsamples = 11\n").unwrap();
        let flags = Overrides {
            chi: Some(0.0),
            ..Overrides::default()
        };
        let cfg = RunConfig::resolve(Some(&path), &flags).unwrap();
        assert_eq!(cfg.params.delta, 10.0);
        assert_eq!(cfg.params.chi, 0.0);
        assert_eq!(cfg.samples, 11);
        assert_eq!(cfg.t_max, DEFAULT_T_MAX);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cfg");
        std::fs::write(&path, "delta = 1\nkappa = -2\n").unwrap();
        let err = RunConfig::resolve(Some(&path), &Overrides::default()).unwrap_err();
        assert_eq!(err.line, Some(2));
        assert_eq!(err.field.as_deref(), Some("kappa"));
        std::fs::write(&path, "t_max = 80\n").unwrap();
        let err = RunConfig::resolve(Some(&path), &Overrides::default()).unwrap_err();
        assert_eq!(err.field.as_deref(), Some("t_max"));
        assert!(err.to_string().contains(":1:"));
        std::fs::write(&path, "theta = 1/0 pi\n").unwrap();
        assert!(RunConfig::resolve(Some(&path), &Overrides::default()).is_err());
    }
}
