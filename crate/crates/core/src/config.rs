//! Configuration: every swappable constant of the estimate chain, carried as
//! an exact decimal (rational) value with a free-text provenance note per
//! block. Defaults are compiled in; a TOML file can override any subset.
//! Unknown keys are rejected.

use crate::coverage::CoverageParams;
use crate::explicit_formula::GoldstonParams;
use crate::numerics::{decimal_to_rational, Brak, ExtReal, RoundingDir};
use crate::oracle::OracleParams;
use crate::verifier::VerifierParams;
use crate::zerofree::ZeroFreeParams;
use crate::zeros::ZerosParams;
use crate::{Error, Result};
use rug::Rational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact decimal constant.
///
/// Stored as the original decimal string plus its exact rational value, so it
/// can be rounded in either direction at any working precision without ever
/// committing to a binary approximation at parse time.
#[derive(Debug, Clone)]
pub struct DecConst {
    raw: String,
    rat: Rational,
}

impl DecConst {
    pub fn new(s: &str) -> Result<Self> {
        Ok(DecConst {
            raw: s.to_string(),
            rat: decimal_to_rational(s)?,
        })
    }

    /// Compiled-in literal; panics on malformed input.
    pub fn lit(s: &str) -> Self {
        Self::new(s).expect("valid decimal literal")
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn rational(&self) -> &Rational {
        &self.rat
    }

    pub fn to_f64(&self) -> f64 {
        self.rat.to_f64()
    }

    pub(crate) fn brak(&self, prec: u32) -> Brak {
        Brak::from_rational(&self.rat, prec)
    }

    pub fn ext(&self, prec: u32, dir: RoundingDir) -> ExtReal {
        ExtReal::from_rational(&self.rat, prec, dir).expect("rational fits the float range")
    }
}

impl PartialEq for DecConst {
    fn eq(&self, other: &Self) -> bool {
        self.rat == other.rat
    }
}

impl Serialize for DecConst {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.raw)
    }
}

impl<'de> Deserialize<'de> for DecConst {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        DecConst::new(&s).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Full configuration tree. Every field has a compiled-in default, so a
/// config file only needs the blocks it wants to change.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub schema_version: u32,
    /// Working significand precision in bits for all certified evaluation.
    pub precision_bits: u32,
    pub zerofree: ZeroFreeParams,
    pub zeros: ZerosParams,
    pub goldston: GoldstonParams,
    pub verifier: VerifierParams,
    pub coverage: CoverageParams,
    pub oracle: OracleParams,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            schema_version: 1,
            precision_bits: crate::numerics::DEFAULT_PRECISION,
            zerofree: ZeroFreeParams::default(),
            zeros: ZerosParams::default(),
            goldston: GoldstonParams::default(),
            verifier: VerifierParams::default(),
            coverage: CoverageParams::default(),
            oracle: OracleParams::default(),
        }
    }
}

impl Config {
    pub fn load_toml(text: &str) -> Result<Config> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load_file(path: &std::path::Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::load_toml(&text)
    }

    /// Checks every constant against its admissible range.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            return Err(Error::Config(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        if self.precision_bits < 64 || self.precision_bits > 65536 {
            return Err(Error::Config(
                "precision_bits must be in [64, 65536]".into(),
            ));
        }
        self.zerofree.validate()?;
        self.zeros.validate()?;
        self.goldston.validate()?;
        self.verifier.validate()?;
        self.coverage.validate()?;
        self.oracle.validate()
    }
}
