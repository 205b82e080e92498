//! JSON config files. A file holds the same keys as the flags of the command
//! it is used with, plus an optional `command` entry; flags win over the file.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::UsageError;

pub fn load(path: &Path) -> Result<Map<String, Value>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(UsageError(format!(
            "config {} must hold a JSON object",
            path.display()
        ))),
        Err(e) => Err(UsageError(format!(
            "invalid config {}: {e}",
            path.display()
        ))),
    }
}

/// Fills every unset field of `flags` from `file`. Unknown keys in the file are
/// rejected by the target type.
pub fn merge<T>(
    flags: &T,
    file: Option<&Map<String, Value>>,
    command: &str,
) -> Result<T, UsageError>
where
    T: Serialize + DeserializeOwned,
{
    let Some(file) = file else {
        return Ok(
            serde_json::from_value(serde_json::to_value(flags).expect("flags serialize"))
                .expect("flags round-trip"),
        );
    };
    let mut file = file.clone();
    if let Some(declared) = file.remove("command") {
        if declared.as_str() != Some(command) {
            return Err(UsageError(format!(
                "config is for command {declared}, but `{command}` was invoked"
            )));
        }
    }
    let Value::Object(mut merged) = serde_json::to_value(flags).expect("flags serialize") else {
        unreachable!("argument structs serialize to objects")
    };
    for (key, value) in file {
        match merged.get(&key) {
            None => {
                return Err(UsageError(format!(
                    "unknown key `{key}` in config for `{command}`"
                )))
            }
            Some(Value::Null) | Some(Value::Bool(false)) => {
                merged.insert(key, value);
            }
            Some(_) => {}
        }
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| UsageError(format!("invalid config for `{command}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Default, Serialize, Deserialize, PartialEq)]
    #[serde(deny_unknown_fields)]
    struct Args {
        x: Option<f64>,
        y: Option<f64>,
        flag: bool,
    }

    fn obj(v: Value) -> Map<String, Value> {
        match v {
            Value::Object(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn flags_override_file() {
        let flags = Args {
            x: Some(1.0),
            ..Default::default()
        };
        let file = obj(serde_json::json!({"x": 5.0, "y": 2.0, "flag": true}));
        let out = merge(&flags, Some(&file), "t").unwrap();
        assert_eq!(
            out,
            Args {
                x: Some(1.0),
                y: Some(2.0),
                flag: true
            }
        );
    }

    #[test]
    fn unknown_keys_and_wrong_command_are_rejected() {
        let flags = Args::default();
        let file = obj(serde_json::json!({"z": 1}));
        assert!(merge(&flags, Some(&file), "t").is_err());
        let file = obj(serde_json::json!({"command": "other"}));
        assert!(merge(&flags, Some(&file), "t").is_err());
        let file = obj(serde_json::json!({"command": "t", "x": "text"}));
        assert!(merge(&flags, Some(&file), "t").is_err());
    }
}
