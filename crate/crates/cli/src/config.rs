//! Resolution of subcommand configuration: defaults, then an optional JSON
//! file, then command-line flags.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

/// Overlays `file` (if any) and then `flags` onto the defaults of `C`.
///
/// Both overlays must be JSON objects whose keys name fields of `C`; unknown
/// keys are usage errors so that typos in config files do not pass silently.
/// Nested objects are merged key by key.
pub fn resolve<C, F>(file: Option<&Path>, section: Option<&str>, flags: &F) -> Result<C, CliError>
where
    C: Serialize + DeserializeOwned + Default,
    F: Serialize,
{
    let mut base = serde_json::to_value(C::default()).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        // A config file may hold one section per subcommand.
        if let (Some(name), Value::Object(map)) = (section, &v) {
            if let Some(inner) = map.get(name) {
                v = inner.clone();
            }
        }
        overlay(&mut base, v, "")?;
    }
    let flags = serde_json::to_value(flags).map_err(|e| CliError::Usage(e.to_string()))?;
    overlay(&mut base, flags, "")?;
    serde_json::from_value(base).map_err(|e| CliError::Usage(format!("invalid configuration: {e}")))
}

fn overlay(base: &mut Value, top: Value, prefix: &str) -> Result<(), CliError> {
    let Value::Object(top) = top else {
        return Err(CliError::Usage(format!("configuration{prefix} must be a JSON object")));
    };
    let base = base.as_object_mut().expect("defaults serialize to an object");
    merge_map(base, top, prefix)
}

fn merge_map(base: &mut Map<String, Value>, top: Map<String, Value>, prefix: &str) -> Result<(), CliError> {
    for (k, v) in top {
        if v.is_null() {
            continue;
        }
        let path = format!("{prefix}.{k}");
        match base.get_mut(&k) {
            None => return Err(CliError::Usage(format!("unknown configuration key '{}'", &path[1..]))),
            Some(Value::Object(inner)) if v.is_object() => {
                let Value::Object(v) = v else { unreachable!() };
                merge_map(inner, v, &path)?;
            }
            Some(slot) => *slot = v,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    struct Inner {
        a: f64,
    }

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    struct Conf {
        p: f64,
        gamma: Option<f64>,
        inner: Inner,
    }

    impl Default for Conf {
        fn default() -> Self {
            Self { p: 6.0, gamma: None, inner: Inner { a: 1.0 } }
        }
    }

    #[derive(Serialize)]
    struct Flags {
        p: Option<f64>,
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"p": 8, "gamma": 0.1, "inner": {"a": 3}}"#).unwrap();
        let c: Conf = resolve(Some(&path), None, &Flags { p: Some(10.0) }).unwrap();
        assert_eq!(c, Conf { p: 10.0, gamma: Some(0.1), inner: Inner { a: 3.0 } });
        let c: Conf = resolve(Some(&path), None, &Flags { p: None }).unwrap();
        assert_eq!(c.p, 8.0);
    }

    #[test]
    fn sections_and_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"quotient": {"p": 12}}"#).unwrap();
        let c: Conf = resolve(Some(&path), Some("quotient"), &Flags { p: None }).unwrap();
        assert_eq!(c.p, 12.0);
        std::fs::write(&path, r#"{"pp": 12}"#).unwrap();
        let e = resolve::<Conf, _>(Some(&path), None, &Flags { p: None }).unwrap_err();
        assert!(matches!(e, CliError::Usage(m) if m.contains("pp")));
    }
}
