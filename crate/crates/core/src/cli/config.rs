//! Session configuration, read from TOML and echoed into every report.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::MixedCtx;
use crate::engine_rt::FrobeniusBasis;
use crate::engine_vt::KummerOptions;
use crate::error::{Error, Result};
use crate::gf::GfCtx;
use crate::laurent::{Mode, ValConfig};
use crate::values::{Lambda, Rat, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeName {
    VT,
    RT,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Characteristic {
    Equal,
    Mixed,
}

/// A rational written as an integer or as text such as `"3/2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatText {
    Int(i64),
    Text(String),
}

impl RatText {
    fn parse(&self) -> Option<Rat> {
        match self {
            RatText::Int(n) => Some(Rat::from_integer(*n as i128)),
            RatText::Text(s) => crate::values::parse_rat(s),
        }
    }
}

/// Basis monomial exponents by index and the Frobenius map on indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDesc {
    pub exponents: Vec<i64>,
    #[serde(default)]
    pub frob: BTreeMap<String, u32>,
}

fn default_p() -> u32 {
    2
}
fn default_r() -> u32 {
    1
}
fn default_d() -> RatText {
    RatText::Int(2)
}
fn default_n() -> u32 {
    8
}
fn default_mode() -> ModeName {
    ModeName::VT
}
fn default_char() -> Characteristic {
    Characteristic::Equal
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    #[serde(default = "default_p")]
    pub p: u32,
    #[serde(default = "default_r")]
    pub r: u32,
    /// `lambda^2`.
    #[serde(rename = "D", default = "default_d")]
    pub d: RatText,
    /// Relative precision in `p`-adic digits (mixed characteristic).
    #[serde(rename = "N", default = "default_n")]
    pub n: u32,
    /// Exponent denominator bound (mixed characteristic).
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default = "default_mode")]
    pub mode: ModeName,
    #[serde(default = "default_char")]
    pub characteristic: Characteristic,
    /// `vx` as `"(a, b)"`, meaning `a + b lambda`; VT only, default `"(0, 1)"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vx: Option<String>,
    /// Defining polynomial of `F_q`, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_polynomial: Option<Vec<u32>>,
    /// RT basis; the full monomial basis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisDesc>,
    #[serde(default = "default_true")]
    pub rule_d: bool,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            p: 2,
            r: 1,
            d: default_d(),
            n: 8,
            m: None,
            mode: ModeName::VT,
            characteristic: Characteristic::Equal,
            vx: None,
            residue_polynomial: None,
            basis: None,
            rule_d: true,
        }
    }
}

impl SessionConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigMismatch(format!("config: {}", e.message())))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::ConfigMismatch(format!("config: {e}")))
    }
}

/// A validated configuration with its contexts. Read-only once built.
#[derive(Clone, Debug)]
pub struct Session {
    pub config: SessionConfig,
    pub gf: Arc<GfCtx>,
    pub val: ValConfig,
    pub mixed: Option<Arc<MixedCtx>>,
    pub basis: FrobeniusBasis,
}

impl Session {
    pub fn new(config: SessionConfig) -> Result<Self> {
        let bad = |s: String| Err(Error::ConfigMismatch(s));
        let gf = match &config.residue_polynomial {
            Some(m) => {
                let gf = GfCtx::with_modulus(config.p, m.clone())?;
                if gf.r() != config.r {
                    return bad(format!("residue_polynomial has degree {} but r = {}", gf.r(), config.r));
                }
                gf
            }
            None => GfCtx::new(config.p, config.r)?,
        };
        let Some(d) = config.d.parse() else {
            return bad(format!("D = {:?} is not a rational", config.d));
        };
        let lambda = Lambda::new(d)?;
        let val = match config.mode {
            ModeName::VT => {
                let vx = match &config.vx {
                    Some(s) => Value::parse_with(s, lambda).map_err(|_| Error::ConfigMismatch(format!("vx = {s:?} is not \"(a, b)\"")))?,
                    None => Value::with_lambda(Rat::from_integer(0), Rat::from_integer(1), lambda),
                };
                ValConfig::vt(vx)?
            }
            ModeName::RT => {
                if config.vx.is_some() {
                    return bad("vx is set but x is residue-transcendental (vx = 0)".into());
                }
                ValConfig::rt(lambda)
            }
        };
        let mixed = match config.characteristic {
            Characteristic::Mixed => Some(MixedCtx::new(gf.clone(), config.n, config.m)?),
            Characteristic::Equal => {
                if config.m.is_some() {
                    return bad("M applies to mixed characteristic only".into());
                }
                None
            }
        };
        let basis = match &config.basis {
            None => FrobeniusBasis::monomial(config.p),
            Some(_) if val.mode != Mode::RT => return bad("a basis applies to RT mode only".into()),
            Some(b) => {
                let mut frob = BTreeMap::new();
                for (j, k) in &b.frob {
                    let j: u32 = j.parse().map_err(|_| Error::BasisViolation(format!("frob key {j:?} is not an index")))?;
                    frob.insert(j, *k);
                }
                FrobeniusBasis::listed(config.p, b.exponents.clone(), frob)?
            }
        };
        Ok(Session { config, gf, val, mixed, basis })
    }

    pub fn kummer_options(&self) -> KummerOptions {
        KummerOptions { rule_d: self.config.rule_d }
    }

    /// The configuration as recorded in reports, with the effective
    /// residue polynomial and `M` filled in.
    pub fn to_json(&self) -> serde_json::Value {
        let mut c = self.config.clone();
        c.residue_polynomial = Some(self.gf.modulus().to_vec());
        if let Some(m) = &self.mixed {
            c.m = Some(m.m);
        }
        serde_json::to_value(c).expect("config serializes")
    }
}
