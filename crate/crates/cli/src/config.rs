use crate::CliError;
use pgk_core::phigamma::ceil_log;
use serde::Deserialize;
use std::path::Path;

/// Default parameters, optionally read from a TOML key-value file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Defaults {
    pub p: u64,
    pub a: u32,
    pub n: i64,
    pub l: Option<u32>,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults { p: 5, a: 8, n: 64, l: None }
    }
}

impl Defaults {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let env = std::env::var_os("PGK_CONFIG");
        let path = path.map(Path::to_path_buf).or_else(|| env.map(Into::into));
        match path {
            None => Ok(Defaults::default()),
            Some(p) => {
                let text = std::fs::read_to_string(&p)?;
                toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))
            }
        }
    }

    /// Unit precision `L = a + ⌈log_p N⌉` unless overridden.
    pub fn unit_precision(&self, p: u64) -> u32 {
        self.l.unwrap_or(self.a + ceil_log(p, self.n.max(1)))
    }
}
