use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};

/// Settings of one preset run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: String,
    /// Strictly increasing horizons; `None` uses the preset's defaults.
    pub t_list: Option<Vec<usize>>,
    pub seed: u64,
    pub eta_multiplier: f64,
    pub output_dir: Option<PathBuf>,
    /// `None` uses the preset's default dimension.
    pub dims: Option<usize>,
    /// Named tolerance overrides, set with `tol.<name> = value`.
    pub tolerances: BTreeMap<String, f64>,
}

impl ExperimentConfig {
    pub fn new(preset: &str) -> Self {
        ExperimentConfig {
            preset: preset.to_string(),
            t_list: None,
            seed: 0,
            eta_multiplier: 1.0,
            output_dir: None,
            dims: None,
            tolerances: BTreeMap::new(),
        }
    }

    /// Sets one key. Keys are `preset`, `T`, `seed`, `eta_mult`, `out`,
    /// `dims` and `tol.<name>`.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |what: &str| Error::Config(format!("invalid {what} for `{key}`: {value:?}"));
        match key {
            "preset" => self.preset = value.to_string(),
            "T" | "t" | "t_list" => self.t_list = Some(parse_t_list(value)?),
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "eta_mult" | "eta-mult" | "eta_multiplier" => {
                let v: f64 = value.parse().map_err(|_| bad("number"))?;
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::Config(format!(
                        "eta multiplier must be positive, got {v}"
                    )));
                }
                self.eta_multiplier = v;
            }
            "out" | "output" => self.output_dir = Some(PathBuf::from(value)),
            "dims" => {
                let d: usize = value.parse().map_err(|_| bad("dimension"))?;
                if d == 0 {
                    return Err(Error::Config("dims must be positive".into()));
                }
                self.dims = Some(d);
            }
            k if k.starts_with("tol.") => {
                let v: f64 = value.parse().map_err(|_| bad("tolerance"))?;
                if !v.is_finite() {
                    return Err(bad("tolerance"));
                }
                self.tolerances.insert(k["tol.".len()..].to_string(), v);
            }
            _ => return Err(Error::Config(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Applies every entry of a `key = value` file.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (k, v) in parse_kv(text)? {
            self.apply(&k, &v)?;
        }
        Ok(())
    }

    /// Tolerance `name`, unless overridden.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// Parses flat `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected `key = value`, got {raw:?}",
                n + 1
            ))
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", n + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Parses `64,128,256`; the list must be strictly increasing and positive.
pub fn parse_t_list(s: &str) -> Result<Vec<usize>> {
    let list = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("invalid horizon {:?} in T list", p.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    validate_t_list(&list)?;
    Ok(list)
}

pub fn validate_t_list(list: &[usize]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::Config("T list is empty".into()));
    }
    if list[0] == 0 {
        return Err(Error::Config("horizons must be positive".into()));
    }
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "T list must be strictly increasing, got {list:?}"
        )));
    }
    Ok(())
}
