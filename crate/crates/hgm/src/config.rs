//! `key=value` configuration files.
//!
//! Keys are the long flag names (`tie-policy`, `x0`, `K`, ...; underscores
//! are accepted for dashes). A key only takes effect when the flag is absent
//! from the command line. `key=true` switches on a boolean flag and
//! `key=false` leaves it off.

use std::fs;
use std::path::Path;

/// Parses the file contents. Blank lines and lines starting with `#` are
/// ignored.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "line {}: expected key=value, found {line:?}",
                lineno + 1
            ));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(format!("line {}: bad key {key:?}", lineno + 1));
        }
        if key == "config" {
            return Err(format!("line {}: config files do not nest", lineno + 1));
        }
        out.push((key, value.trim().to_owned()));
    }
    Ok(out)
}

fn flag_name(arg: &str) -> Option<&str> {
    let name = arg.strip_prefix("--")?;
    Some(name.split_once('=').map_or(name, |(k, _)| k))
}

/// Expands `--config FILE` (or `--config=FILE`) into ordinary flags placed
/// right after the subcommand name. `args[0]` is the program name.
pub fn expand_args(args: Vec<String>) -> Result<Vec<String>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        if arg == "--config" {
            path = Some(it.next().ok_or("--config needs a file name")?);
        } else if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(p.to_owned());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text =
        fs::read_to_string(Path::new(&path)).map_err(|e| format!("cannot read {path}: {e}"))?;
    let pairs = parse(&text).map_err(|e| format!("{path}: {e}"))?;

    let given: Vec<String> = rest
        .iter()
        .filter_map(|a| flag_name(a))
        .map(|k| k.replace('_', "-"))
        .collect();
    let mut extra = Vec::new();
    for (key, value) in pairs {
        if given.contains(&key) {
            continue;
        }
        match value.as_str() {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            _ => {
                extra.push(format!("--{key}"));
                extra.push(value);
            }
        }
    }
    let at = rest
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map_or(rest.len(), |i| i + 2);
    rest.splice(at..at, extra);
    Ok(rest)
}
