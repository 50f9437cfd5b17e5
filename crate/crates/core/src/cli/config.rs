//! Metric configuration files.
//!
//! A config is TOML restricted to flat `key = value` pairs plus an optional
//! `[params]` table:
//!
//! ```toml
//! coords = ["x", "y"]
//! g11 = "exp((beta+2)*x)"
//! g12 = "0"
//! g22 = "exp(beta*x)"
//! box = ["0", "0", "1", "2"]   # x0, x1, y0, y1
//! [params]
//! beta = "3"
//! ```

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Deserialize;

use crate::expr::number::parse_rational;
use crate::expr::{Box2, GaussRational, ParseContext, ZeroPolicy};
use crate::geometry::{Metric2D, Signature};
use crate::mobility::Domain;
use crate::oracle::AnsatzSpec;

/// Environment variable holding the default float precision in bits.
pub const PRECISION_ENV: &str = "LIOUVILLE_PRECISION";
pub const DEFAULT_PRECISION: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("malformed config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid value for `{0}`: {1}")]
    Value(&'static str, String),
    #[error("metric: {0}")]
    Metric(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn rational(&self, key: &'static str) -> Result<BigRational, ConfigError> {
        match self {
            Number::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Number::Text(s) => {
                parse_rational(s.trim()).ok_or_else(|| ConfigError::Value(key, s.clone()))
            }
        }
    }
}

/// Parsed config file, before validation.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    pub coords: Option<[String; 2]>,
    pub g11: String,
    #[serde(default)]
    pub g12: Option<String>,
    pub g22: String,
    pub orientation: Option<i64>,
    pub signature: Option<Signature>,
    #[serde(rename = "box")]
    pub bx: Option<[Number; 4]>,
    pub mode: Option<String>,
    pub precision: Option<usize>,
    pub samples: Option<usize>,
    pub max_draws: Option<usize>,
    pub max_denominator: Option<u64>,
    pub seed: Option<u64>,
    pub eps: Option<i64>,
    pub ansatz_x: Option<[i32; 2]>,
    pub ansatz_y: Option<[i32; 2]>,
    pub ansatz_degree: Option<i32>,
    pub ansatz_max: Option<usize>,
    #[serde(default)]
    pub params: BTreeMap<String, Number>,
}

/// A validated config.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub raw: MetricConfig,
    pub metric: Metric2D,
    pub domain: Domain,
}

fn default_precision() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_PRECISION)
}

impl MetricConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: &str) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_string(), e))?;
        MetricConfig::from_toml(&text)
    }

    pub fn params(&self) -> Result<Vec<(String, GaussRational)>, ConfigError> {
        self.params
            .iter()
            .map(|(k, v)| Ok((k.clone(), GaussRational::real(v.rational("params")?))))
            .collect()
    }

    pub fn policy(&self) -> Result<ZeroPolicy, ConfigError> {
        let mut p = match self.mode.as_deref().unwrap_or("exact") {
            "exact" => ZeroPolicy::default(),
            "float" => ZeroPolicy::float(self.precision.unwrap_or_else(default_precision)),
            other => return Err(ConfigError::Value("mode", other.to_string())),
        };
        if let Some(s) = self.samples {
            if s == 0 {
                return Err(ConfigError::Value("samples", "0".into()));
            }
            p.samples = s;
        }
        if let Some(d) = self.max_draws {
            p.max_draws = d.max(p.samples);
        }
        if let Some(d) = self.max_denominator {
            if d == 0 {
                return Err(ConfigError::Value("max_denominator", "0".into()));
            }
            p.max_denominator = d;
        }
        if let Some(s) = self.seed {
            p.seed = s;
        }
        if let Some(e) = self.eps {
            p.eps_log2 = e;
        }
        Ok(p)
    }

    pub fn sample_box(&self) -> Result<Box2, ConfigError> {
        let Some(b) = &self.bx else {
            return Ok(Box2::default());
        };
        let v: Vec<BigRational> = b
            .iter()
            .map(|n| n.rational("box"))
            .collect::<Result<_, _>>()?;
        let bx = Box2::new((v[0].clone(), v[1].clone()), (v[2].clone(), v[3].clone()));
        if !bx.is_valid() {
            return Err(ConfigError::Value(
                "box",
                "need x0 <= x1, y0 <= y1 and one open interval".into(),
            ));
        }
        Ok(bx)
    }

    /// Ansatz from the config, falling back to monomials of degree up to
    /// `n + 2` in each coordinate.
    pub fn ansatz(&self, n: usize) -> AnsatzSpec {
        let d = n as i32 + 2;
        let mut s = AnsatzSpec::box_range((0, d), (0, d));
        if let Some([a, b]) = self.ansatz_x {
            s.x_range = (a, b);
        }
        if let Some([a, b]) = self.ansatz_y {
            s.y_range = (a, b);
        }
        s.total_degree = self.ansatz_degree;
        if let Some(m) = self.ansatz_max {
            s.max_basis = m;
        }
        s
    }

    pub fn load(self) -> Result<Loaded, ConfigError> {
        let coords = self
            .coords
            .clone()
            .unwrap_or_else(|| ["x".into(), "y".into()]);
        if coords[0] == coords[1] {
            return Err(ConfigError::Value(
                "coords",
                "coordinate names must differ".into(),
            ));
        }
        let params = self.params()?;
        let names: Vec<&str> = params.iter().map(|(n, _)| n.as_str()).collect();
        let ctx = ParseContext::new(&coords[0], &coords[1], &names);
        let g12 = self.g12.clone().unwrap_or_else(|| "0".into());
        let mut metric = Metric2D::parse(&self.g11, &g12, &self.g22, &ctx)
            .map_err(|e| ConfigError::Metric(e.to_string()))?
            .with_params(params);
        match self.orientation.unwrap_or(1) {
            1 => {}
            -1 => metric = metric.with_orientation(-1),
            o => return Err(ConfigError::Value("orientation", o.to_string())),
        }
        if let Some(s) = self.signature {
            metric = metric.with_signature(s);
        }
        let domain = Domain {
            bx: self.sample_box()?,
            policy: self.policy()?,
        };
        Ok(Loaded {
            raw: self,
            metric,
            domain,
        })
    }
}
