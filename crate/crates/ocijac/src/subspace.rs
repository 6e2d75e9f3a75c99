//! Subspace files: one vector of `B_1(0)` per line, as whitespace- or
//! comma-separated integers in standard-monomial coordinates. `#` starts a comment.
//! An optional header line `# b1dim=<N>` is checked against `dim B_1(0)`.

use std::path::Path;

use ocijac_core::koszul::SubspaceSpec;
use ocijac_core::{Field, JacobianRing};

use crate::error::CliError;

/// The declared `dim B_1(0)` from a `# b1dim=<N>` header, if any.
pub fn declared_b1dim(text: &str) -> Result<Option<usize>, CliError> {
    for raw in text.lines() {
        let Some(comment) = raw.trim_start().strip_prefix('#') else { continue };
        if let Some(value) = comment.trim().strip_prefix("b1dim") {
            let value = value.trim_start().strip_prefix('=').unwrap_or(value).trim();
            return value.parse().map(Some).map_err(|_| CliError::Subspace(format!("bad header b1dim={value:?}")));
        }
    }
    Ok(None)
}

pub fn parse_vectors(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| CliError::Subspace(format!("line {}: {t:?} is not an integer", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(row);
    }
    Ok(out)
}

pub fn read_subspace<F: Field>(ring: &JacobianRing<F>, path: &Path) -> Result<SubspaceSpec<F>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if let Some(declared) = declared_b1dim(&text)? {
        let actual = ring.dim(ocijac_core::GradedIndex::new(1, 0));
        if declared != actual {
            return Err(CliError::Subspace(format!("header says b1dim={declared} but dim B_1(0) = {actual}")));
        }
    }
    let f = ring.field();
    let vectors = parse_vectors(&text)?.into_iter().map(|v| v.into_iter().map(|x| f.from_i64(x)).collect()).collect();
    Ok(SubspaceSpec::explicit(ring, vectors)?)
}
