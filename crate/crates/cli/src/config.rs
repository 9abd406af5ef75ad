//! `key=value` configuration files. Each key names a long flag of the
//! subcommand; flags given on the command line take precedence.

use std::ffi::OsString;
use std::fs;

/// Loads `--config <path>` (if present) and appends every key whose flag is
/// not already on the command line. `true`/`false` values toggle switches.
pub fn merge_config_file(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        return Ok(args);
    };
    let path = args
        .get(pos + 1)
        .ok_or("--config needs a file path")?
        .clone();
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;

    let mut merged: Vec<OsString> = args[..pos].to_vec();
    merged.extend_from_slice(&args[pos + 2..]);
    let present = |key: &str, args: &[OsString]| {
        let flag = format!("--{key}");
        let prefix = format!("--{key}=");
        args.iter().any(|a| {
            let a = a.to_string_lossy();
            a == flag || a.starts_with(&prefix)
        })
    };

    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", n + 1))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(format!("config line {}: empty key", n + 1));
        }
        if present(key, &merged) {
            continue;
        }
        match value {
            "true" => extra.push(OsString::from(format!("--{key}"))),
            "false" => {}
            _ => {
                extra.push(OsString::from(format!("--{key}")));
                extra.push(OsString::from(value));
            }
        }
    }
    merged.extend(extra);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("spin-otto-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.cfg");
        fs::write(&path, "# cycle\nB1 = 4\nB2=3\nsorted=true\nquiet=false\npair=1/2,1\npair=1,1\n").unwrap();
        let args = os(&["x", "sweep", "--config", path.to_str().unwrap(), "--B1", "5"]);
        let merged = merge_config_file(args).unwrap();
        assert_eq!(
            merged,
            os(&["x", "sweep", "--B1", "5", "--B2", "3", "--sorted", "--pair", "1/2,1", "--pair", "1,1"])
        );
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn missing_file() {
        assert!(merge_config_file(os(&["x", "cycle", "--config", "/nonexistent/x"])).is_err());
        assert!(merge_config_file(os(&["x", "cycle", "--config"])).is_err());
    }
}
