//! `key = value` configuration files for `verify`.

use std::fs;
use std::path::Path;

use gegenfun::Complex;

/// Values read from a config file; anything unset keeps its default.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileConfig {
    pub order: Option<usize>,
    pub working_order: Option<usize>,
    pub tol: Option<f64>,
    pub x: Option<Vec<Complex>>,
    pub u: Option<Vec<Complex>>,
    pub format: Option<String>,
}

pub fn load(path: &Path) -> Result<FileConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<FileConfig, String> {
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| format!("line {}: invalid {what} `{value}`", lineno + 1);
        match key {
            "order" => cfg.order = Some(value.parse().map_err(|_| bad("order"))?),
            "working_order" => cfg.working_order = Some(value.parse().map_err(|_| bad("working_order"))?),
            "tol" => cfg.tol = Some(value.parse().map_err(|_| bad("tol"))?),
            "x" => cfg.x = Some(parse_list(value).map_err(|_| bad("x"))?),
            "u" => cfg.u = Some(parse_list(value).map_err(|_| bad("u"))?),
            "format" => cfg.format = Some(value.to_string()),
            other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
        }
    }
    Ok(cfg)
}

/// Comma-separated complex numbers such as `1.5, 0.7+0.2i`.
pub fn parse_list(value: &str) -> Result<Vec<Complex>, String> {
    value
        .split(',')
        .map(|v| parse_complex(v.trim()))
        .collect()
}

pub fn parse_complex(value: &str) -> Result<Complex, String> {
    value.parse::<Complex>().map_err(|_| format!("`{value}` is not a number"))
}
