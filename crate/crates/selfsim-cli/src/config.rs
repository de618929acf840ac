//! Plain-text key = value configuration with one `[section]` per command.
//! Resolution order everywhere: built-in default, then the config file's
//! section, then an explicit command-line flag.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Default)]
pub struct Ini {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Ini {
    pub fn parse(text: &str) -> Result<Ini, CliError> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| {
                    CliError::Validation(format!("config line {}: unterminated section", lineno + 1))
                })?;
                current = name.trim().to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("config line {}: expected key = value", lineno + 1))
            })?;
            sections
                .entry(current.clone())
                .or_default()
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Ini { sections })
    }

    pub fn load(path: Option<&PathBuf>) -> Result<Ini, CliError> {
        match path {
            None => Ok(Ini::default()),
            Some(p) => Ini::parse(&std::fs::read_to_string(p)?),
        }
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section).and_then(|s| s.get(key)).map(String::as_str)
    }

    pub fn f64(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        self.get(section, key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    CliError::Validation(format!("config [{section}] {key}: not a number: {v}"))
                })
            })
            .transpose()
    }

    pub fn usize(&self, section: &str, key: &str) -> Result<Option<usize>, CliError> {
        self.get(section, key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    CliError::Validation(format!("config [{section}] {key}: not an integer: {v}"))
                })
            })
            .transpose()
    }

    pub fn f64_list(&self, section: &str, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        CliError::Validation(format!(
                            "config [{section}] {key}: bad list entry: {s}"
                        ))
                    })
                })
                .collect::<Result<Vec<f64>, CliError>>()
                .map(Some),
        }
    }
}

/// Flags shared by every subcommand, already merged with the config file.
#[derive(Debug, Clone)]
pub struct Common {
    pub p: f64,
    pub out: PathBuf,
    pub tol_beta: f64,
    pub eta_max: f64,
    pub seed: u64,
}

impl Common {
    pub fn resolve(cli: &crate::CommonFlags, ini: &Ini, section: &str) -> Result<Common, CliError> {
        let p = match cli.p {
            Some(v) => v,
            None => ini.f64(section, "p")?.unwrap_or(0.5),
        };
        let out = match &cli.out {
            Some(v) => v.clone(),
            None => PathBuf::from(ini.get(section, "out").unwrap_or("out")),
        };
        let tol_beta = match cli.tol_beta {
            Some(v) => v,
            None => ini.f64(section, "tol_beta")?.unwrap_or(1e-12),
        };
        let eta_max = match cli.eta_max {
            Some(v) => v,
            None => ini.f64(section, "eta_max")?.unwrap_or(12.0),
        };
        let seed = match cli.seed {
            Some(v) => v,
            None => ini
                .get(section, "seed")
                .map(|v| {
                    v.parse::<u64>().map_err(|_| {
                        CliError::Validation(format!("config [{section}] seed: not an integer"))
                    })
                })
                .transpose()?
                .unwrap_or(42),
        };
        if !(tol_beta > 0.0) || !(eta_max > 0.0) {
            return Err(CliError::Validation(
                "tol_beta and eta_max must be positive".into(),
            ));
        }
        Ok(Common { p, out, tol_beta, eta_max, seed })
    }

    /// Hash of the fully resolved configuration: common fields plus every
    /// command-specific key, in canonical order. Identical runs hash alike.
    pub fn config_hash(&self, section: &str, extra: &[(&str, String)]) -> String {
        let mut canon = String::new();
        let _ = writeln!(canon, "command = {section}");
        let _ = writeln!(canon, "eta_max = {:e}", self.eta_max);
        let _ = writeln!(canon, "p = {:e}", self.p);
        let _ = writeln!(canon, "seed = {}", self.seed);
        let _ = writeln!(canon, "tol_beta = {:e}", self.tol_beta);
        let mut rest: Vec<&(&str, String)> = extra.iter().collect();
        rest.sort_by_key(|(k, _)| *k);
        for (k, v) in rest {
            let _ = writeln!(canon, "{k} = {v}");
        }
        let digest = Sha256::digest(canon.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        hex
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_comments_and_whitespace() {
        let ini = Ini::parse(
            "# header\n[homoclinic]\nalpha = 0.1\n beta=0.0\n; note\n[periodic]\np_grid = 0.1, 0.5\n",
        )
        .unwrap();
        assert_eq!(ini.get("homoclinic", "alpha"), Some("0.1"));
        assert_eq!(ini.get("homoclinic", "beta"), Some("0.0"));
        assert_eq!(ini.f64_list("periodic", "p_grid").unwrap(), Some(vec![0.1, 0.5]));
        assert_eq!(ini.get("missing", "key"), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(Ini::parse("[broken\n").is_err());
        assert!(Ini::parse("[s]\nno_equals_sign\n").is_err());
        assert!(Ini::parse("[s]\nx = abc\n").unwrap().f64("s", "x").is_err());
    }

    #[test]
    fn hash_ignores_extra_order_but_not_values() {
        let c = Common {
            p: 0.5,
            out: PathBuf::from("out"),
            tol_beta: 1e-12,
            eta_max: 12.0,
            seed: 42,
        };
        let a = c.config_hash("x", &[("k1", "1".into()), ("k2", "2".into())]);
        let b = c.config_hash("x", &[("k2", "2".into()), ("k1", "1".into())]);
        let d = c.config_hash("x", &[("k1", "9".into()), ("k2", "2".into())]);
        assert_eq!(a, b);
        assert_ne!(a, d);
    }
}
