use std::path::Path;

use anyhow::{bail, Context, Result};
use diffcyc::enumerate::{parse_address, Registry};
use diffcyc::notation::strip_table_artifacts;
use diffcyc::series::SeriesSpec;
use diffcyc::CyclicComplex;

/// Raised for malformed complexes, specs and addresses; mapped to exit code 3.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn looks_like_address(s: &str) -> bool {
    let s = s.trim();
    match s.split_once(':') {
        Some((a, b)) => {
            !a.is_empty()
                && !b.is_empty()
                && a.bytes().all(|c| c.is_ascii_digit())
                && b.bytes().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}

/// Parses `{...}`, or a bare cycle list `(..),(..)` which is wrapped in braces.
fn parse_complex(text: &str, origin: &str) -> Result<CyclicComplex> {
    let cleaned = strip_table_artifacts(text);
    let trimmed = cleaned.trim();
    let parsed = if trimmed.starts_with('(') {
        format!("{{{trimmed}}}")
            .parse::<CyclicComplex>()
            .map_err(|e| match e {
                diffcyc::Error::Parse { pos, msg } => diffcyc::Error::Parse {
                    pos: pos.saturating_sub(1),
                    msg,
                },
                other => other,
            })
    } else {
        trimmed.parse::<CyclicComplex>()
    };
    parsed.map_err(|e| InputError(format!("{origin}: {e}")).into())
}

/// Resolves `-i` (inline text, `n:index` or a file) or `--n/--index` to a complex.
pub fn load_complex(
    input: Option<&str>,
    n: Option<u32>,
    index: Option<usize>,
    registry: &Registry,
) -> Result<CyclicComplex> {
    match (input, n, index) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            bail!(InputError(
                "give either --input or --n/--index, not both".into()
            ))
        }
        (Some(s), None, None) if looks_like_address(s) => {
            let (n, i) = parse_address(s).map_err(|e| InputError(e.to_string()))?;
            Ok(registry.get(n, i)?)
        }
        (Some(s), None, None) => {
            let path = Path::new(s);
            if !s.trim_start().starts_with(['{', '(']) && path.is_file() {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                parse_complex(&text, &path.display().to_string())
            } else {
                parse_complex(s, "input")
            }
        }
        (None, Some(n), Some(i)) => Ok(registry.get(n, i)?),
        (None, Some(_), None) | (None, None, Some(_)) => {
            bail!(InputError(
                "a registry address needs both --n and --index".into()
            ))
        }
        (None, None, None) => bail!(InputError("no input: pass --input or --n/--index".into())),
    }
}

/// A series spec as inline JSON or a path to a JSON file.
pub fn load_spec(spec: &str) -> Result<SeriesSpec> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
    };
    SeriesSpec::from_json(&text).map_err(|e| InputError(e.to_string()).into())
}

/// Comma separated vertex list, e.g. `0,2,4`.
pub fn parse_vertex_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| InputError(format!("bad vertex {t:?} in {s:?}")).into())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn address_detection() {
        assert!(looks_like_address("10:3"));
        assert!(!looks_like_address("(1:1:1:2)"));
        assert!(!looks_like_address("1:1:1:2"));
        assert!(!looks_like_address(":3"));
    }

    #[test]
    fn vertex_lists() {
        assert_eq!(parse_vertex_list("0, 2,4").unwrap(), vec![0, 2, 4]);
        assert!(parse_vertex_list("0,x").is_err());
    }
}
