//! `key = value` configuration files, merged underneath command-line flags.

use std::path::Path;

use crate::error::{Error, Result};

/// Parsed `key = value` pairs in file order.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Validation(format!("config line {}: expected key = value, got {raw:?}", lineno + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::Validation(format!("config line {}: empty key", lineno + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Builds the argument vector for clap: the subcommand, then the file's
/// settings, then the user's flags, so that flags given later win.
pub fn merge_args(argv: &[String]) -> Result<Vec<String>> {
    let prog = argv.first().cloned().unwrap_or_else(|| "spin-discord".into());
    let mut rest = Vec::new();
    let mut config = None;
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            let p = it.next().ok_or_else(|| Error::Validation("--config needs a path".into()))?;
            config = Some(p.clone());
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a.clone());
        }
    }
    let Some(path) = config else {
        let mut out = vec![prog];
        out.extend(rest);
        return Ok(out);
    };
    let pairs = load_config(Path::new(&path))?;

    let mut file_command = None;
    let mut file_args = Vec::new();
    for (k, v) in pairs {
        match (k.as_str(), v.as_str()) {
            ("command", _) => file_command = Some(v),
            (_, "true") => file_args.push(format!("--{k}")),
            (_, "false") => {}
            _ => {
                file_args.push(format!("--{k}"));
                file_args.push(v.split(',').map(str::trim).collect::<Vec<_>>().join(","));
            }
        }
    }
    let (command, user) = match rest.first() {
        Some(first) if !first.starts_with('-') => (first.clone(), rest[1..].to_vec()),
        _ => match file_command {
            Some(c) => (c, rest),
            None => return Err(Error::Validation("no command given on the command line or in the config file".into())),
        },
    };
    let mut out = vec![prog, command];
    out.extend(file_args);
    out.extend(user);
    Ok(out)
}
