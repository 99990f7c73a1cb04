//! Run configuration: `key = value` files overlaid by command-line flags.

use std::fs;
use std::path::Path;

use fullgroup::circle_maps::{default_alphas, default_beta, RotationSystem};
use fullgroup::number_field::CircleNumber;
use fullgroup::synthesis::SynthesisParams;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(CliError::Usage(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub alphas: Option<Vec<CircleNumber>>,
    pub beta: Option<CircleNumber>,
    pub circles: Option<usize>,
    pub component: usize,
    pub k_max: Option<u64>,
    pub k_cap: Option<u64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub eps: Option<Vec<CircleNumber>>,
    pub delta: Option<Vec<CircleNumber>>,
}

pub fn parse_number(text: &str) -> Result<CircleNumber, CliError> {
    text.trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("bad number `{}`: {e}", text.trim())))
}

/// Comma-separated numbers; `sqrt(...)` arguments never contain commas.
pub fn parse_list(text: &str) -> Result<Vec<CircleNumber>, CliError> {
    let items: Vec<&str> = text.split(',').filter(|s| !s.trim().is_empty()).collect();
    if items.is_empty() {
        return Err(CliError::Usage("empty list".into()));
    }
    items.into_iter().map(parse_number).collect()
}

fn parse_int<T: std::str::FromStr>(key: &str, text: &str) -> Result<T, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad value `{}` for {key}", text.trim())))
}

impl RunConfig {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            let value = value.trim();
            match key.trim() {
                "alpha" | "alphas" => cfg.alphas = Some(parse_list(value)?),
                "beta" => cfg.beta = Some(parse_number(value)?),
                "circles" => cfg.circles = Some(parse_int("circles", value)?),
                "component" => cfg.component = parse_int("component", value)?,
                "kmax" => cfg.k_max = Some(parse_int("kmax", value)?),
                "kmax_cap" => cfg.k_cap = Some(parse_int("kmax_cap", value)?),
                "format" => cfg.format = Some(value.parse()?),
                "seed" => cfg.seed = Some(parse_int("seed", value)?),
                "eps" => cfg.eps = Some(parse_list(value)?),
                "delta" => cfg.delta = Some(parse_list(value)?),
                other => {
                    return Err(CliError::Usage(format!(
                        "config line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    /// Explicit alphas win; otherwise the default amounts for `circles`.
    pub fn system(&self) -> Result<RotationSystem, CliError> {
        let beta = self.beta.clone().unwrap_or_else(default_beta);
        let alphas = match (&self.alphas, self.circles) {
            (Some(a), Some(n)) if a.len() != n => {
                return Err(CliError::Usage(format!(
                    "{} alpha(s) given for {n} circle(s)",
                    a.len()
                )))
            }
            (Some(a), _) => a.clone(),
            (None, n) => default_alphas(n.unwrap_or(1).max(1), &beta),
        };
        let system = RotationSystem::new(alphas, beta)?;
        if self.component >= system.circles() {
            return Err(CliError::Usage(format!(
                "component {} out of range for {} circle(s)",
                self.component,
                system.circles()
            )));
        }
        Ok(system)
    }

    pub fn params(&self) -> SynthesisParams {
        let d = SynthesisParams::default();
        let k_cap = self.k_cap.unwrap_or(d.k_cap);
        SynthesisParams {
            k_max: self.k_max.unwrap_or(d.k_max).min(k_cap),
            k_cap,
        }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text() {
        let cfg = RunConfig::from_text("# demo\nalpha = sqrt(2) - 1, sqrt(3) - 1\nbeta = sqrt(5) - 2\ncomponent = 1\nkmax = 500 # small\nformat = csv\n").unwrap();
        assert_eq!(cfg.alphas.as_ref().unwrap().len(), 2);
        assert_eq!(cfg.component, 1);
        assert_eq!(cfg.k_max, Some(500));
        assert_eq!(cfg.format, Some(Format::Csv));
        assert_eq!(cfg.system().unwrap().circles(), 2);
        assert!(RunConfig::from_text("nonsense").is_err());
        assert!(RunConfig::from_text("color = red").is_err());
    }

    #[test]
    fn default_system() {
        let cfg = RunConfig {
            circles: Some(4),
            ..Default::default()
        };
        assert_eq!(cfg.system().unwrap().circles(), 4);
        let bad = RunConfig {
            alphas: Some(vec![parse_number("1/2").unwrap()]),
            ..Default::default()
        };
        assert!(bad.system().is_err());
    }
}
