//! Flat `key = value` settings files and flag/file precedence.
//!
//! A settings file mirrors the long command-line flags: one `key = value`
//! pair per line, `#` comments, blank lines ignored. Keys use the flag
//! spelling without the leading dashes (`tol-degeneracy`, `omega-z-start`).
//! Values are the same strings one would pass on the command line.
//!
//! Precedence is strict: a flag given on the command line always overrides
//! the file, and the file overrides the built-in default. Every key in the
//! file must be consumed by the invoked subcommand or by a global option;
//! leftovers are reported as unknown keys and the run is rejected, so typos
//! cannot silently fall back to defaults.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::CliError;

/// Parses the flat `key = value` format into an ordered map.
///
/// Rules, chosen so that a file round-trips unambiguously:
///
/// * blank lines and lines whose first non-space character is `#` are
///   skipped;
/// * every other line must contain `=`; the key is the part before the
///   first `=`, trimmed, and must be non-empty ASCII alphanumerics plus
///   `-`/`_`/`.`;
/// * the value is everything after the first `=`, trimmed (values may
///   contain further `=` characters, e.g. paths);
/// * a key may appear at most once — duplicates are an error rather than a
///   silent last-one-wins.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "settings line {lineno}: expected `key = value`, got `{line}`"
            ));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(format!("settings line {lineno}: empty key"));
        }
        if !key
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.')
        {
            return Err(format!("settings line {lineno}: invalid key `{key}`"));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(format!("settings line {lineno}: duplicate key `{key}`"));
        }
    }
    Ok(map)
}

/// Settings-file contents with consumption tracking.
///
/// Each `take_*` call removes the key from the map; [`Settings::finish`]
/// then rejects anything left over. When the corresponding command-line
/// flag was given it wins, but the file key is still consumed so it is not
/// misreported as unknown.
#[derive(Debug, Default)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    /// Builds the settings map from optional file contents.
    pub fn from_text(config_text: Option<&str>) -> Result<Self, CliError> {
        let map = match config_text {
            None => BTreeMap::new(),
            Some(text) => parse_config(text).map_err(CliError::Validation)?,
        };
        Ok(Self { map })
    }

    fn take_parsed<T>(&mut self, key: &str, flag: Option<T>, what: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
    {
        if flag.is_some() {
            self.map.remove(key);
            return Ok(flag);
        }
        match self.map.remove(key) {
            None => Ok(None),
            Some(s) => s.parse::<T>().map(Some).map_err(|_| {
                CliError::Validation(format!(
                    "settings key `{key}`: expected {what}, got `{s}`"
                ))
            }),
        }
    }

    /// Resolves a real-valued option; non-finite values are rejected.
    pub fn take_f64(&mut self, key: &str, flag: Option<f64>) -> Result<Option<f64>, CliError> {
        let v: Option<f64> = self.take_parsed(key, flag, "a number")?;
        if let Some(x) = v {
            if !x.is_finite() {
                return Err(CliError::Validation(format!(
                    "option `{key}` must be finite, got {x}"
                )));
            }
        }
        Ok(v)
    }

    /// Resolves an unsigned integer option.
    pub fn take_u64(&mut self, key: &str, flag: Option<u64>) -> Result<Option<u64>, CliError> {
        self.take_parsed(key, flag, "an unsigned integer")
    }

    /// Resolves a count-like option.
    pub fn take_usize(&mut self, key: &str, flag: Option<usize>) -> Result<Option<usize>, CliError> {
        self.take_parsed(key, flag, "an unsigned integer")
    }

    /// Resolves a free-form string option (paths, format names, ...).
    pub fn take_string(&mut self, key: &str, flag: Option<String>) -> Result<Option<String>, CliError> {
        if flag.is_some() {
            self.map.remove(key);
            return Ok(flag);
        }
        Ok(self.map.remove(key))
    }

    /// Rejects any keys that no option consumed.
    pub fn finish(self) -> Result<(), CliError> {
        match self.map.into_keys().next() {
            None => Ok(()),
            Some(key) => Err(CliError::Validation(format!(
                "unknown settings key `{key}` for this command"
            ))),
        }
    }
}
