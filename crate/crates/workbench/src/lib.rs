//! Tooling around `spg-core`: graph generators with known clique bounds, an
//! exhaustive minimum-partition oracle for tiny graphs, benchmark sweeps and
//! config loading for the `spg` command line tool.

pub mod bench;
pub mod error;
pub mod generators;
pub mod oracle;

pub use error::{Result, WbError};

use spg_core::PracticalConfig;

/// Reads a practical-mode config from TOML `key = value` text.
///
/// ```toml
/// escalation_threshold = 200
/// z0_exponent = 2
/// engine = "auto"
/// ```
pub fn parse_config(text: &str) -> Result<PracticalConfig> {
    let config: PracticalConfig = toml::from_str(text)?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_keys() {
        let c = parse_config("escalation_threshold = 50\npairs_l = 1\nengine = \"exact\"\n").unwrap();
        assert_eq!(c.escalation_threshold, Some(50));
        assert_eq!(c.pairs_l, 1);
        assert_eq!(c.z0_exponent, PracticalConfig::default().z0_exponent);
        assert_eq!(parse_config("").unwrap(), PracticalConfig::default());
        assert!(parse_config("pairs_l = 0").is_err());
        assert!(parse_config("unknown_key = 1").is_err());
        assert!(parse_config("engine = \"fast\"").is_err());
    }
}
