//! `key = value` configuration files.
//!
//! ```text
//! # Fermat quartic surface
//! n = 3
//! field = "fp:1048583"
//! F = ["X0^4 + X1^4 + X2^4 + X3^4"]
//! G = []
//! ```
//!
//! `n` and `field` are required, `F` and `G` default to empty lists. A list may
//! span several lines as long as its brackets balance.

use std::path::Path;

use ocijac_core::{Configuration, Field, FieldSpec, Polynomial};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Raw configuration, not yet bound to a field implementation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    pub n: usize,
    pub field: FieldSpec,
    pub f: Vec<String>,
    pub g: Vec<String>,
}

impl ConfigFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut n = None;
        let mut field = None;
        let mut f = None;
        let mut g = None;
        for (line_no, entry) in logical_lines(text)? {
            let bad = |msg: String| CliError::Config(format!("line {line_no}: {msg}"));
            let (key, value) = entry.split_once('=').ok_or_else(|| bad(format!("expected `key = value`, got {entry:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let slot_taken = match key {
                "n" => n.replace(value.parse::<usize>().map_err(|_| bad(format!("n = {value:?} is not a non-negative integer")))?).is_some(),
                "field" => {
                    let spec: FieldSpec = unquote(value).parse().map_err(|e| bad(format!("{e}")))?;
                    field.replace(spec).is_some()
                }
                "F" => f.replace(parse_list(value).map_err(bad)?).is_some(),
                "G" => g.replace(parse_list(value).map_err(bad)?).is_some(),
                other => return Err(bad(format!("unknown key {other:?}"))),
            };
            if slot_taken {
                return Err(bad(format!("duplicate key {key:?}")));
            }
        }
        Ok(ConfigFile {
            n: n.ok_or_else(|| CliError::Config("missing key \"n\"".into()))?,
            field: field.ok_or_else(|| CliError::Config("missing key \"field\"".into()))?,
            f: f.unwrap_or_default(),
            g: g.unwrap_or_default(),
        })
    }

    /// Validated configuration over `field`, which must match [`ConfigFile::field`].
    pub fn bind<F: Field>(&self, field: F) -> Result<Configuration<F>, CliError> {
        assert_eq!(field.spec(), self.field);
        let nvars = self.n + 1;
        let polys = |family: char, texts: &[String]| -> Result<Vec<Polynomial<F>>, CliError> {
            texts
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    Polynomial::parse(t, nvars, field.clone()).map_err(|e| CliError::Config(format!("{family}[{i}]: {e}")))
                })
                .collect()
        };
        let f = polys('F', &self.f)?;
        let g = polys('G', &self.g)?;
        Ok(Configuration::new(field.clone(), self.n, f, g)?)
    }

    /// Normalized text: one key per line, polynomials re-printed over the configured field.
    pub fn canonical<F: Field>(&self, cfg: &Configuration<F>) -> String {
        let list = |ps: &[Polynomial<F>]| {
            let items: Vec<String> = ps.iter().map(|p| format!("{:?}", p.to_string())).collect();
            format!("[{}]", items.join(", "))
        };
        format!("n = {}\nfield = \"{}\"\nF = {}\nG = {}\n", self.n, self.field, list(cfg.f()), list(cfg.g()))
    }

    /// Hex SHA-256 of [`ConfigFile::canonical`].
    pub fn digest<F: Field>(&self, cfg: &Configuration<F>) -> String {
        hex::encode(Sha256::digest(self.canonical(cfg).as_bytes()))
    }
}

/// Strips comments and blank lines and joins continuation lines of open lists.
fn logical_lines(text: &str) -> Result<Vec<(usize, String)>, CliError> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim().to_string();
        if line.is_empty() {
            continue;
        }
        let (start, mut acc) = pending.take().unwrap_or((i + 1, String::new()));
        if !acc.is_empty() {
            acc.push(' ');
        }
        acc.push_str(&line);
        if bracket_depth(&acc) > 0 {
            pending = Some((start, acc));
        } else {
            out.push((start, acc));
        }
    }
    if let Some((start, _)) = pending {
        return Err(CliError::Config(format!("line {start}: unterminated list")));
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

fn bracket_depth(s: &str) -> i64 {
    let mut in_str = false;
    let mut depth = 0;
    for c in s.chars() {
        match c {
            '"' => in_str = !in_str,
            '[' if !in_str => depth += 1,
            ']' if !in_str => depth -= 1,
            _ => {}
        }
    }
    depth
}

fn unquote(s: &str) -> &str {
    s.strip_prefix('"').and_then(|t| t.strip_suffix('"')).unwrap_or(s)
}

/// `["a", "b"]`, trailing comma allowed.
fn parse_list(value: &str) -> Result<Vec<String>, String> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| format!("expected a bracketed list, got {value:?}"))?;
    let mut items = Vec::new();
    let mut rest = inner.trim_start();
    while !rest.is_empty() {
        let body = rest.strip_prefix('"').ok_or_else(|| format!("expected a quoted string at {rest:?}"))?;
        let end = body.find('"').ok_or("unterminated string")?;
        items.push(body[..end].to_string());
        rest = body[end + 1..].trim_start();
        match rest.strip_prefix(',') {
            Some(after) => rest = after.trim_start(),
            None if rest.is_empty() => {}
            None => return Err(format!("expected ',' or ']' at {rest:?}")),
        }
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ocijac_core::PrimeField;

    const K3_PLANE: &str = "# quartic with a hyperplane\nn = 3\nfield = \"fp:1048583\"\nF = [\"X0^4 + X1^4 + X2^4 + X3^4\"]  # Fermat\nG = [\"X0 + X1 + X2 + X3\"]\n";

    #[test]
    fn parses_fermat_with_hyperplane() {
        let file = ConfigFile::parse(K3_PLANE).unwrap();
        let cfg = file.bind(PrimeField::default()).unwrap();
        assert_eq!((cfg.n(), cfg.r(), cfg.s()), (3, 1, 1));
        assert_eq!((cfg.d(), cfg.e()), (&[4][..], &[1][..]));
    }

    #[test]
    fn multiline_lists_and_defaults() {
        let file = ConfigFile::parse("n = 2\nfield = q\nF = [\n  \"X0^3 + X1^3 + X2^3\",\n]\n").unwrap();
        assert_eq!(file.f.len(), 1);
        assert!(file.g.is_empty());
        assert_eq!(file.field, FieldSpec::Rationals);
    }

    #[test]
    fn reports_errors() {
        let inhom = ConfigFile::parse("n = 2\nfield = \"q\"\nF = [\"X0^2+X1\"]\n").unwrap();
        let err = inhom.bind(ocijac_core::Rationals).unwrap_err();
        assert!(err.to_string().contains("inhomogeneous F[0]"), "{err}");
        let err = ConfigFile::parse("n = 2\nfield = \"fp:10\"\nF = [\"X0\"]\n").unwrap_err();
        assert!(err.to_string().contains("not prime"), "{err}");
        assert!(ConfigFile::parse("field = \"q\"\n").unwrap_err().to_string().contains("missing key \"n\""));
        assert!(ConfigFile::parse("n = 2\nn = 3\nfield = q\n").is_err());
        assert!(ConfigFile::parse("n = 2\nfield = q\nF = [\"X0\"\n").is_err());
        assert!(ConfigFile::parse("n = 2\nfield = q\nH = []\n").is_err());
        let empty = ConfigFile::parse("n = 2\nfield = q\n").unwrap();
        assert!(empty.bind(ocijac_core::Rationals).unwrap_err().to_string().contains("r + s"));
    }

    #[test]
    fn digest_ignores_formatting() {
        let a = ConfigFile::parse(K3_PLANE).unwrap();
        let b = ConfigFile::parse("n=3\nfield=fp:1048583\nF=[\"X3^4+X2^4+X1^4+X0^4\"]\nG=[\"X3+X2+X1+X0\"]").unwrap();
        let f = PrimeField::default();
        assert_eq!(a.digest(&a.bind(f).unwrap()), b.digest(&b.bind(f).unwrap()));
        assert_eq!(a.digest(&a.bind(f).unwrap()).len(), 64);
    }
}
