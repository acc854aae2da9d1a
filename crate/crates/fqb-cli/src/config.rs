//! Run configuration: flag/file layering and angle parsing.
//!
//! Every setting can come from a TOML config file (`--config run.toml`) or
//! from a flag; flags always win. Angles are accepted as raw radians or as
//! literal fractions of pi (`pi`, `pi/4`, `3pi/8`).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Deserializer, Serialize};

use fqb_core::{Boundary, ChargerParams, CouplingRange, LogBase};

/// Parses an angle given in radians or as an integer fraction of pi.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    if let Some(idx) = lower.find("pi") {
        let numerator = &t[..idx];
        let rest = &t[idx + 2..];
        let num: f64 = if numerator.is_empty() {
            1.0
        } else {
            numerator
                .parse::<i64>()
                .map_err(|_| format!("invalid angle `{s}`: `{numerator}` is not an integer"))?
                as f64
        };
        let den: f64 = if rest.is_empty() {
            1.0
        } else {
            let body = rest
                .strip_prefix('/')
                .ok_or_else(|| format!("invalid angle `{s}`: expected `/` after pi"))?;
            let d = body
                .parse::<i64>()
                .map_err(|_| format!("invalid angle `{s}`: `{body}` is not an integer"))?;
            if d == 0 {
                return Err(format!("invalid angle `{s}`: zero denominator"));
            }
            d as f64
        };
        Ok(num * std::f64::consts::PI / den)
    } else {
        t.parse::<f64>()
            .map_err(|_| format!("invalid angle `{s}` (use radians or forms like pi/4, 3pi/8)"))
    }
}

/// An angle value; deserializes from a TOML float or a `pi/4`-style string,
/// serializes as radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Angle(pub f64);

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct AngleVisitor;
        impl serde::de::Visitor<'_> for AngleVisitor {
            type Value = Angle;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number of radians or a pi-fraction string")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle(v))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Angle, E> {
                parse_angle(v).map(Angle).map_err(serde::de::Error::custom)
            }
        }
        d.deserialize_any(AngleVisitor)
    }
}

fn de_boundary<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Boundary>, D::Error> {
    let s = Option::<String>::deserialize(d)?;
    s.map(|s| Boundary::from_str(&s).map_err(serde::de::Error::custom))
        .transpose()
}

fn de_range<'de, D: Deserializer<'de>>(d: D) -> Result<Option<CouplingRange>, D::Error> {
    let s = Option::<String>::deserialize(d)?;
    s.map(|s| CouplingRange::from_str(&s).map_err(serde::de::Error::custom))
        .transpose()
}

fn de_log_base<'de, D: Deserializer<'de>>(d: D) -> Result<Option<LogBase>, D::Error> {
    let s = Option::<String>::deserialize(d)?;
    s.map(|s| LogBase::from_str(&s).map_err(serde::de::Error::custom))
        .transpose()
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(
    v: &Option<T>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// The layered run configuration. A missing field falls back to the config
/// file and then to the built-in default; physical requirements (site count,
/// intervals) are checked per command in [`RunConfig::charger_params`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_sites: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau0: Option<Angle>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau1: Option<Angle>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        deserialize_with = "de_boundary",
        serialize_with = "ser_display",
        default
    )]
    pub boundary: Option<Boundary>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        deserialize_with = "de_range",
        serialize_with = "ser_display",
        default
    )]
    pub range: Option<CouplingRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antipodal_halving: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kicks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        deserialize_with = "de_log_base",
        serialize_with = "ser_display",
        default
    )]
    pub log_base: Option<LogBase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
    }

    /// Overlays `self` (flag values) on top of `file` values.
    pub fn layered_over(self, file: RunConfig) -> RunConfig {
        RunConfig {
            n_sites: self.n_sites.or(file.n_sites),
            coupling: self.coupling.or(file.coupling),
            hx: self.hx.or(file.hx),
            hz: self.hz.or(file.hz),
            omega: self.omega.or(file.omega),
            tau0: self.tau0.or(file.tau0),
            tau1: self.tau1.or(file.tau1),
            boundary: self.boundary.or(file.boundary),
            range: self.range.or(file.range),
            antipodal_halving: self.antipodal_halving.or(file.antipodal_halving),
            kicks: self.kicks.or(file.kicks),
            workers: self.workers.or(file.workers),
            log_base: self.log_base.or(file.log_base),
            out: self.out.or(file.out),
            plot: self.plot.or(file.plot),
        }
    }

    /// Resolves the physical parameters. `require_intervals` is set by the
    /// commands that evolve a fixed protocol; sweeps that scan the intervals
    /// leave them optional.
    pub fn charger_params(&self, require_intervals: bool) -> anyhow::Result<ChargerParams> {
        let n_sites = match self.n_sites {
            Some(n) => n,
            None => bail!("missing required flag --n-sites"),
        };
        let (tau0, tau1) = if require_intervals {
            let t0 = self
                .tau0
                .ok_or_else(|| anyhow::anyhow!("missing required flag --tau0"))?;
            let t1 = self
                .tau1
                .ok_or_else(|| anyhow::anyhow!("missing required flag --tau1"))?;
            (t0.0, t1.0)
        } else {
            (
                self.tau0.map_or(0.0, |a| a.0),
                self.tau1.map_or(0.0, |a| a.0),
            )
        };
        let params = ChargerParams {
            n_sites,
            coupling: self.coupling.unwrap_or(1.0),
            h_x: self.hx.unwrap_or(0.0),
            h_z: self.hz.unwrap_or(1.0),
            omega: self.omega.unwrap_or(1.0),
            tau0,
            tau1,
            boundary: self.boundary.unwrap_or(Boundary::Periodic),
            range: self.range.unwrap_or(CouplingRange::LongRange),
            antipodal_halving: self.antipodal_halving.unwrap_or(false),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn kicks(&self) -> usize {
        self.kicks.unwrap_or(fqb_core::DEFAULT_N_MAX)
    }

    /// Worker count: flag/file first, then the FQB_WORKERS environment
    /// variable, then the library default (0).
    pub fn workers(&self) -> usize {
        if let Some(w) = self.workers {
            return w;
        }
        std::env::var("FQB_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    }

    pub fn log_base(&self) -> LogBase {
        self.log_base.unwrap_or(LogBase::Natural)
    }
}

/// Parses a comma-separated list of 1-based site indices into 0-based ones.
pub fn parse_site_list(s: &str) -> anyhow::Result<Vec<usize>> {
    let mut sites = Vec::new();
    for part in s.split(',') {
        let site: usize = part
            .trim()
            .parse()
            .with_context(|| format!("invalid site index `{part}` in --subsystem"))?;
        if site == 0 {
            bail!("site indices are 1-based; got 0 in --subsystem");
        }
        sites.push(site - 1);
    }
    Ok(sites)
}

/// Parses a comma-separated list of values with a per-item parser.
pub fn parse_list<T, E: fmt::Display>(
    s: &str,
    what: &str,
    parse: impl Fn(&str) -> Result<T, E>,
) -> anyhow::Result<Vec<T>> {
    s.split(',')
        .map(|part| parse(part.trim()).map_err(|e| anyhow::anyhow!("invalid {what} `{part}`: {e}")))
        .collect()
}
