//! Plain-text `key = value` configuration files and flag/file/default
//! precedence.
//!
//! Keys are the long option names of the subcommand being run (with `-` or
//! `_` interchangeably); `#` starts a comment.  Command-line flags always
//! win over file entries, which win over built-in defaults.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::fail::{CliResult, Failure};

#[derive(Debug, Default)]
pub struct FileConfig {
    map: HashMap<String, String>,
}

fn canonical(key: &str) -> String {
    key.trim().replace('_', "-").to_ascii_lowercase()
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::invalid(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::invalid(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            map.insert(canonical(key), value.trim().to_string());
        }
        Ok(Self { map })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(&canonical(key)).map(String::as_str)
    }

    fn parsed<T>(&self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(text) => text.parse::<T>().map(Some).map_err(|e| {
                Failure::invalid(format!("config key `{key}`: cannot parse `{text}`: {e}"))
            }),
        }
    }

    /// Flag value if given, else config-file value, else the default.
    pub fn resolve<T>(&self, key: &str, flag: Option<T>, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.parsed(key)?.unwrap_or(default)),
        }
    }

    /// Flag value if given, else config-file value, else `None`.
    pub fn resolve_opt<T>(&self, key: &str, flag: Option<T>) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.parsed(key),
        }
    }

    /// Flag value if given, else config-file value, else an invalid-input
    /// failure naming the missing option.
    pub fn resolve_required<T>(&self, key: &str, flag: Option<T>) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.resolve_opt(key, flag)?
            .ok_or_else(|| Failure::invalid(format!("missing required option --{key}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> std::path::PathBuf {
        let path = std::env::temp_dir().join(format!(
            "hjbwave-config-test-{}-{:?}.conf",
            std::process::id(),
            std::thread::current().id()
        ));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn parses_comments_and_aliases() {
        let path = write_temp("# model\nomega = 2.5\nv_left=3 # inline\n\nxi-max = 50\n");
        let cfg = FileConfig::load(Some(&path)).unwrap();
        assert_eq!(cfg.resolve("omega", None, 1.0).unwrap(), 2.5);
        assert_eq!(cfg.resolve("v-left", None, 0.0).unwrap(), 3.0);
        assert_eq!(cfg.resolve("xi-max", None, 200.0).unwrap(), 50.0);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn flags_override_file_entries() {
        let path = write_temp("omega = 2.5\n");
        let cfg = FileConfig::load(Some(&path)).unwrap();
        assert_eq!(cfg.resolve("omega", Some(9.0), 1.0).unwrap(), 9.0);
        assert_eq!(cfg.resolve("alpha", None, 0.25).unwrap(), 0.25);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn rejects_malformed_lines() {
        let path = write_temp("omega 2.5\n");
        let err = FileConfig::load(Some(&path)).unwrap_err();
        assert_eq!(err.code, 2);
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn missing_required_key_is_invalid_input() {
        let cfg = FileConfig::default();
        let err = cfg.resolve_required::<f64>("v-left", None).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("--v-left"));
    }
}
