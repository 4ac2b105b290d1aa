use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{PowerLogParams, YoungFunction};
use crate::error::{Error, Result};

/// Serialized form of a Young function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum YoungSpec {
    Powerlog {
        p: f64,
        #[serde(default)]
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p0: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha0: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t0: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        log_offset: Option<f64>,
    },
    Tabulated {
        knots: Vec<[f64; 2]>,
        #[serde(default = "finite_default")]
        finite: bool,
    },
}

fn finite_default() -> bool {
    true
}

/// Log-spaced abscissae used when a computed function is written out.
const EXPORT_DECADES: (i32, i32) = (-8, 8);
const EXPORT_PER_DECADE: i32 = 25;

impl YoungSpec {
    pub fn build(&self) -> Result<YoungFunction> {
        match self {
            YoungSpec::Powerlog { p, alpha, p0, alpha0, t0, log_offset } => YoungFunction::powerlog(PowerLogParams {
                p: *p,
                alpha: *alpha,
                p0: p0.unwrap_or(*p),
                alpha0: alpha0.unwrap_or(0.0),
                t0: t0.unwrap_or(1.0),
                log_offset: *log_offset,
            }),
            YoungSpec::Tabulated { knots, finite } => YoungFunction::tabulated(knots, *finite),
        }
    }

    /// Serializable description of `a`. Closed forms are kept; anything else
    /// is written as density samples on a log grid.
    pub fn of(a: &YoungFunction) -> YoungSpec {
        if let Some(pl) = a.as_powerlog() {
            return YoungSpec::Powerlog {
                p: pl.p,
                alpha: pl.alpha,
                p0: Some(pl.p0),
                alpha0: Some(pl.alpha0),
                t0: Some(pl.t0),
                log_offset: pl.log_offset,
            };
        }
        let mut knots = vec![[0.0, a.density(0.0).max(0.0)]];
        let mut last = knots[0][1];
        for k in EXPORT_DECADES.0 * EXPORT_PER_DECADE..=EXPORT_DECADES.1 * EXPORT_PER_DECADE {
            let t = 10f64.powf(k as f64 / EXPORT_PER_DECADE as f64);
            let d = a.density(t);
            if !d.is_finite() {
                return YoungSpec::Tabulated { knots, finite: false };
            }
            // guard against rounding in differenced densities
            last = last.max(d);
            knots.push([t, last]);
        }
        YoungSpec::Tabulated { knots, finite: a.is_finite() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

impl FromStr for YoungSpec {
    type Err = Error;

    /// Accepts JSON, `powerlog:p=2,alpha=1,p0=2,alpha0=0`, `power:3`, or
    /// `tabulated:t:a;t:a;...` (append `;inf` for a density blowing up past
    /// the last knot).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        let (form, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("missing form in '{s}'")))?;
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{v}' in '{s}'")));
        match form.trim() {
            "power" => Ok(YoungSpec::Powerlog {
                p: num(rest)?,
                alpha: 0.0,
                p0: None,
                alpha0: None,
                t0: None,
                log_offset: None,
            }),
            "powerlog" => {
                let (mut p, mut alpha, mut p0, mut alpha0, mut t0, mut off) = (None, 0.0, None, None, None, None);
                for kv in rest.split(',').filter(|x| !x.trim().is_empty()) {
                    let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got '{kv}'")))?;
                    let v = num(v)?;
                    match k.trim() {
                        "p" => p = Some(v),
                        "alpha" => alpha = v,
                        "p0" => p0 = Some(v),
                        "alpha0" => alpha0 = Some(v),
                        "t0" => t0 = Some(v),
                        "log_offset" => off = Some(v),
                        other => return Err(Error::Parse(format!("unknown powerlog key '{other}'"))),
                    }
                }
                let p = p.ok_or_else(|| Error::Parse("powerlog needs p".into()))?;
                Ok(YoungSpec::Powerlog { p, alpha, p0, alpha0, t0, log_offset: off })
            }
            "tabulated" => {
                let mut knots = Vec::new();
                let mut finite = true;
                for item in rest.split(';').map(str::trim).filter(|x| !x.is_empty()) {
                    if item == "inf" {
                        finite = false;
                        continue;
                    }
                    let (t, a) = item.split_once(':').ok_or_else(|| Error::Parse(format!("bad knot '{item}'")))?;
                    knots.push([num(t)?, num(a)?]);
                }
                Ok(YoungSpec::Tabulated { knots, finite })
            }
            other => Err(Error::Parse(format!("unknown Young function form '{other}'"))),
        }
    }
}

impl FromStr for YoungFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<YoungSpec>()?.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let spec: YoungSpec = r#"{"form":"powerlog","p":2,"alpha":1,"p0":2,"alpha0":0}"#.parse().unwrap();
        let back: YoungSpec = serde_json::from_str(&spec.to_json()).unwrap();
        assert_eq!(spec, back);
        let tab: YoungSpec = r#"{"form":"tabulated","knots":[[0,0],[1,0],[1,1]]}"#.parse().unwrap();
        assert_eq!(tab.build().unwrap().eval(2.5), 1.5);
    }

    #[test]
    fn compact_strings() {
        let a: YoungFunction = "powerlog:p=2".parse().unwrap();
        assert_eq!(a.as_power(), Some(2.0));
        let b: YoungFunction = "tabulated:0:0;1:1;inf".parse().unwrap();
        assert!(!b.is_finite());
        assert!("cubic:3".parse::<YoungSpec>().is_err());
    }
}
