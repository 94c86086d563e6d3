//! Turning `--config` files into command-line flags.
//!
//! Flags from the file are spliced in front of the user's flags, so with
//! `args_override_self` the command line takes precedence.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::{PcfError, Result};

const SUBCOMMANDS: &[&str] = &[
    "simulate",
    "crossing-curve",
    "estimate-alpha-c",
    "tree-pmf",
    "tree-analytic",
    "oracle-check",
    "star-bound",
];

/// Rewrite `argv` with the contents of any `--config FILE` expanded.
pub(super) fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)?;
    let (command, pairs) = if text.trim_start().starts_with('{') {
        parse_json(&text, &path)?
    } else {
        parse_key_values(&text, &path)?
    };
    let mut rest = argv.into_iter();
    let prog = rest.next().unwrap_or_else(|| "pcf".into());
    let mut rest: Vec<OsString> = rest.collect();
    let sub = match rest.first().and_then(|a| a.to_str()) {
        Some(s) if SUBCOMMANDS.contains(&s) => rest.remove(0),
        _ => match command {
            Some(c) => c.into(),
            None => {
                return Err(PcfError::Parse {
                    path: Some(path),
                    line: 0,
                    message: "no subcommand on the command line or in the file".into(),
                })
            }
        },
    };
    let mut out = vec![prog, sub];
    for (k, v) in pairs {
        out.push(format!("--{k}").into());
        if let Some(v) = v {
            out.push(v.into());
        }
    }
    out.extend(rest);
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

type Pairs = Vec<(String, Option<String>)>;

/// `key = value` lines; `#` starts a comment; a bare `key` or `key = true`
/// sets a switch.
fn parse_key_values(text: &str, path: &Path) -> Result<(Option<String>, Pairs)> {
    let mut command = None;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim().trim_matches('"').to_string())),
            None => (line, None),
        };
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(PcfError::Parse {
                path: Some(path.to_path_buf()),
                line: i + 1,
                message: format!("bad key in {raw:?}"),
            });
        }
        let key = key.replace('_', "-");
        if key == "command" {
            command = value;
            continue;
        }
        if key == "config" {
            continue;
        }
        match value.as_deref() {
            Some("true") | None => pairs.push((key, None)),
            Some("false") => {}
            Some(_) => pairs.push((key, value)),
        }
    }
    Ok((command, pairs))
}

/// A run manifest (`{"manifest": {"config": {...}}}` or the manifest itself)
/// or a plain object of flag values.
fn parse_json(text: &str, path: &Path) -> Result<(Option<String>, Pairs)> {
    let v: Value = serde_json::from_str(text).map_err(|e| PcfError::Parse {
        path: Some(path.to_path_buf()),
        line: e.line(),
        message: e.to_string(),
    })?;
    let obj = v
        .get("manifest")
        .and_then(|m| m.get("config"))
        .or_else(|| v.get("config"))
        .unwrap_or(&v);
    let Value::Object(map) = obj else {
        return Err(PcfError::Parse {
            path: Some(path.to_path_buf()),
            line: 1,
            message: "expected a JSON object".into(),
        });
    };
    let mut command = None;
    let mut pairs = Vec::new();
    for (k, val) in map {
        let key = k.replace('_', "-");
        let value = match val {
            Value::Null | Value::Bool(false) => continue,
            Value::Bool(true) => None,
            Value::String(s) => Some(s.clone()),
            Value::Number(n) => Some(n.to_string()),
            Value::Array(items) => Some(
                items
                    .iter()
                    .map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_string))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            Value::Object(_) => {
                return Err(PcfError::Parse {
                    path: Some(path.to_path_buf()),
                    line: 1,
                    message: format!("nested object for key {k:?}"),
                })
            }
        };
        if key == "command" {
            command = value;
        } else if key != "config" {
            pairs.push((key, value));
        }
    }
    Ok((command, pairs))
}
