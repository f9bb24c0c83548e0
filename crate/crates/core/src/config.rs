//! Run configuration shared by the CLI and the verification suites.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fedosov::{ConnectionInput, BUILTIN_CONNECTIONS};
use crate::policy::TruncationPolicy;
use crate::whitney::{SubsetModel, CATALOGUE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Invalid(format!("unknown format {:?}", s))),
        }
    }
}

/// Fully resolved configuration. Embedded verbatim in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub dim: usize,
    pub jet_order: u32,
    pub fedosov_order: u32,
    pub hbar_order: i32,
    pub hbar_min: i32,
    pub connection: String,
    pub subset: String,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: "verify".into(),
            dim: 1,
            jet_order: 4,
            fedosov_order: 8,
            hbar_order: 3,
            hbar_min: 0,
            connection: "flat".into(),
            subset: "point".into(),
            seed: 0,
            trials: 20,
            format: Format::Json,
        }
    }
}

/// Partial configuration as read from a JSON file or from flags.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub dim: Option<usize>,
    pub jet_order: Option<u32>,
    pub fedosov_order: Option<u32>,
    pub hbar_order: Option<i32>,
    pub hbar_min: Option<i32>,
    pub connection: Option<String>,
    pub subset: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub format: Option<Format>,
}

impl ConfigOverrides {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("config file: {}", e)))
    }

    pub fn apply(&self, c: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = &self.$f { c.$f = v.clone(); } )* };
        }
        set!(dim, jet_order, fedosov_order, hbar_order, hbar_min, connection, subset, seed, trials, format);
    }
}

impl RunConfig {
    /// Defaults, then the config file, then flags.
    pub fn resolve(command: &str, file: Option<&ConfigOverrides>, flags: &ConfigOverrides) -> Result<Self> {
        let mut c = RunConfig { command: command.into(), ..Default::default() };
        if let Some(f) = file {
            f.apply(&mut c);
        }
        flags.apply(&mut c);
        c.validate()?;
        Ok(c)
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy {
            hbar_min: self.hbar_min,
            ..TruncationPolicy::new(self.dim, self.jet_order, self.fedosov_order, self.hbar_order)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.policy().validate()?;
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be positive".into()));
        }
        self.connection_input()?;
        self.subset_model()?;
        Ok(())
    }

    /// Built-in name or path to a JSON file.
    pub fn connection_input(&self) -> Result<ConnectionInput> {
        let c = if BUILTIN_CONNECTIONS.contains(&self.connection.as_str()) {
            ConnectionInput::builtin(&self.connection, self.dim)?
        } else {
            ConnectionInput::from_json(&read(&self.connection)?)?
        };
        if c.n() != self.dim {
            return Err(Error::DimensionMismatch { left: 2 * self.dim, right: c.dim() });
        }
        Ok(c)
    }

    /// Catalogue name or path to a JSON file.
    pub fn subset_model(&self) -> Result<SubsetModel> {
        let x = if CATALOGUE.contains(&self.subset.as_str()) {
            SubsetModel::catalogue(&self.subset, self.dim)?
        } else {
            SubsetModel::from_json(&read(&self.subset)?)?
        };
        if x.dim != 2 * self.dim {
            return Err(Error::DimensionMismatch { left: 2 * self.dim, right: x.dim });
        }
        Ok(x)
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {}", path, e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file = ConfigOverrides::from_json(r#"{"seed": 5, "trials": 3, "subset": "cross"}"#).unwrap();
        let flags = ConfigOverrides { seed: Some(9), ..Default::default() };
        let c = RunConfig::resolve("verify", Some(&file), &flags).unwrap();
        assert_eq!((c.seed, c.trials, c.subset.as_str()), (9, 3, "cross"));
        assert!(ConfigOverrides::from_json(r#"{"sede": 5}"#).is_err());
    }

    #[test]
    fn validation() {
        let bad = ConfigOverrides { subset: Some("plane-in-r4".into()), ..Default::default() };
        assert!(RunConfig::resolve("verify", None, &bad).is_err());
        let bad = ConfigOverrides { dim: Some(5), ..Default::default() };
        assert!(RunConfig::resolve("verify", None, &bad).is_err());
        let bad = ConfigOverrides { connection: Some("/nonexistent.json".into()), ..Default::default() };
        assert!(RunConfig::resolve("verify", None, &bad).is_err());
    }
}
