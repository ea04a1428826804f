//! TOML config files: a `[<command>]` table of flag values merged into the
//! argument list ahead of parsing, so every flag can come from a file and the
//! command line always wins.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use crate::args::{COMMANDS, EXCLUSIVE};
use crate::AppError;

/// Returns `argv` with the config file's values for the chosen subcommand
/// spliced in after the subcommand name.
pub fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, AppError> {
    let Some(cmd_pos) = argv
        .iter()
        .position(|a| a.to_str().is_some_and(|s| COMMANDS.contains(&s)))
    else {
        return Ok(argv);
    };
    let rest: Vec<String> = argv[cmd_pos + 1..]
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let Some(path) = config_path(&rest) else {
        return Ok(argv);
    };
    let command = argv[cmd_pos].to_string_lossy().into_owned();
    let extra = config_tokens(&path, &command, &rest)?;
    let mut out = argv[..=cmd_pos].to_vec();
    out.extend(extra.into_iter().map(OsString::from));
    out.extend_from_slice(&argv[cmd_pos + 1..]);
    Ok(out)
}

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn given_flags(args: &[String]) -> Vec<String> {
    args.iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_owned())
        .collect()
}

fn config_tokens(path: &Path, command: &str, cli_args: &[String]) -> Result<Vec<String>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let doc: toml::Table = text
        .parse()
        .map_err(|e| AppError::Usage(format!("invalid config {}: {e}", path.display())))?;
    let Some(section) = doc.get(command) else {
        return Ok(Vec::new());
    };
    let section = section
        .as_table()
        .ok_or_else(|| AppError::Usage(format!("config entry [{command}] must be a table")))?;
    let given = given_flags(cli_args);
    let is_given = |flag: &str| given.iter().any(|g| g == flag);
    let mut tokens = Vec::new();
    for (key, value) in section {
        let flag = key.replace('_', "-");
        if matches!(flag.as_str(), "config" | "out") {
            return Err(AppError::Usage(format!(
                "config key `{key}` is only accepted on the command line"
            )));
        }
        let partner_given = EXCLUSIVE
            .iter()
            .any(|&(a, b)| (flag == a && is_given(b)) || (flag == b && is_given(a)));
        if is_given(&flag) || partner_given {
            continue;
        }
        match value {
            toml::Value::Boolean(true) => tokens.push(format!("--{flag}")),
            toml::Value::Boolean(false) => {}
            other => {
                tokens.push(format!("--{flag}"));
                tokens.push(scalar(key, other)?);
            }
        }
    }
    Ok(tokens)
}

fn scalar(key: &str, v: &toml::Value) -> Result<String, AppError> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        // Display gives the shortest string that parses back to the same f64.
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Array(items) => items
            .iter()
            .map(|x| scalar(key, x))
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        _ => {
            return Err(AppError::Usage(format!(
                "config key `{key}` has an unsupported value type"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn flags_override_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            f,
            "[capacity]\nsigma1-sq = 0.1\nsigma2_sq = 1.5\npower-db = 20.0\n[other]\nx = 1"
        )
        .unwrap();
        let path = f.path().to_str().unwrap();
        let argv = os(&[
            "wb",
            "capacity",
            "--config",
            path,
            "--power",
            "3",
            "--sigma2-sq=2",
        ]);
        let merged: Vec<String> = merge_config(argv)
            .unwrap()
            .into_iter()
            .map(|s| s.into_string().unwrap())
            .collect();
        assert_eq!(
            merged,
            [
                "wb",
                "capacity",
                "--sigma1-sq",
                "0.1",
                "--config",
                path,
                "--power",
                "3",
                "--sigma2-sq=2"
            ]
        );
    }

    #[test]
    fn missing_file_is_usage_error() {
        let argv = os(&["wb", "capacity", "--config", "/nonexistent/x.toml"]);
        assert!(matches!(merge_config(argv), Err(AppError::Usage(_))));
    }
}
