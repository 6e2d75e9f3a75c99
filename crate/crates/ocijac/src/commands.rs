use std::fmt::Write as _;

use ocijac_core::duality::{check_duality, eta_kernel, pairing_matrix, trace_piece, PairingReport, TraceStatus, Verdict};
use ocijac_core::family::{nabla_kernel, nl_bound, sigma_component_codim, FamilyInput, NablaClaim};
use ocijac_core::hodge::{hodge_table, HodgeMode};
use ocijac_core::koszul::{check_exactness, random_subspace, SubspaceSource, SubspaceSpec};
use ocijac_core::{Field, GradedIndex, JacobianRing};
use serde_json::{json, Value};

use crate::cli::Command;
use crate::config::ConfigFile;
use crate::error::CliError;
use crate::subspace::read_subspace;

/// Pairing matrices with more entries than this are summarized, not printed.
pub const MATRIX_PRINT_LIMIT: usize = 4096;

/// What a subcommand produced, before rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub text: String,
    /// A claimed property failed numerically.
    pub failed: bool,
    /// The smoothness diagnostic failed.
    pub singular: bool,
}

impl Outcome {
    fn new(result: Value, text: String) -> Self {
        Outcome { result, text, failed: false, singular: false }
    }
}

fn index(idx: GradedIndex) -> Value {
    json!([idx.q, idx.l])
}

/// Runs a subcommand that needs a configuration, over the field named in it.
pub fn execute<F: Field>(cmd: &Command, file: &ConfigFile, field: F) -> Result<(Outcome, String), CliError> {
    let cfg = file.bind(field)?;
    let digest = file.digest(&cfg);
    let ring = JacobianRing::new(cfg);
    let outcome = match cmd {
        Command::Dim { q, ell, .. } => dim(&ring, GradedIndex::new(*q, *ell)),
        Command::Hodge { ell, full, .. } => hodge(&ring, *ell, *full)?,
        Command::Trace { .. } => trace(&ring, false)?,
        Command::Smoothcheck { .. } => trace(&ring, true)?,
        Command::Pairing { p, ell, check, .. } => pairing(&ring, *p, *ell, *check)?,
        Command::Eta { .. } => eta(&ring)?,
        Command::Koszul { p, ell, q, codim, seed, subspace, .. } => {
            let v = match (codim, seed, subspace) {
                (Some(c), Some(s), None) => random_subspace(&ring, *c, *s)?,
                (None, None, Some(path)) => read_subspace(&ring, path)?,
                _ => unreachable!("clap enforces exactly one subspace source"),
            };
            koszul(&ring, &v, *p, *ell, *q)?
        }
        Command::Nabla { p, q, subspace, c_s, .. } => {
            let w = match subspace {
                Some(path) => read_subspace(&ring, path)?,
                None => SubspaceSpec::full(&ring),
            };
            nabla(&ring, FamilyInput { w, c_s: *c_s }, *p, *q)?
        }
        Command::Nlbound { .. } | Command::Sigma { .. } => unreachable!("handled without a configuration"),
    };
    Ok((outcome, digest))
}

/// Subcommands that take only numbers.
pub fn execute_numeric(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Nlbound { n, r, s, d, e, c_s, .. } => {
            let b = nl_bound(*n, *r, *s, d, e, *c_s)?;
            let text = format!(
                "codim S_NL >= {}{}\n",
                b.value,
                if b.vacuous { " (vacuous)" } else { "" }
            );
            Ok(Outcome::new(
                json!({"n": n, "r": r, "s": s, "d": d, "e": e, "c_s": c_s, "value": b.value, "vacuous": b.vacuous}),
                text,
            ))
        }
        Command::Sigma { d, .. } => {
            let c = sigma_component_codim(*d)?;
            Ok(Outcome::new(
                json!({"d": d, "codim": c.codim, "sigma_codim": c.sigma_codim}),
                format!("codim = {}\nsigma_codim = {}\n", c.codim, c.sigma_codim),
            ))
        }
        _ => unreachable!("configuration-backed subcommand"),
    }
}

fn dim<F: Field>(ring: &JacobianRing<F>, idx: GradedIndex) -> Outcome {
    let piece = ring.piece(idx);
    let r = ring.config().r();
    let monomials: Vec<String> = piece.standard_monomials().map(|t| t.display(r).to_string()).collect();
    let mut text = format!("dim B_{}({}) = {} (ambient {}, ideal rank {})\n", idx.q, idx.l, piece.dim(), piece.ambient_dim(), piece.ideal_rank());
    for m in &monomials {
        let _ = writeln!(text, "  {m}");
    }
    Outcome::new(
        json!({
            "index": index(idx),
            "dim": piece.dim(),
            "ambient_dim": piece.ambient_dim(),
            "ideal_rank": piece.ideal_rank(),
            "standard_monomials": monomials,
        }),
        text,
    )
}

fn hodge<F: Field>(ring: &JacobianRing<F>, ell: i64, full: bool) -> Result<Outcome, CliError> {
    let table = hodge_table(ring, ell)?;
    let mode = if full { HodgeMode::Full } else { HodgeMode::Prim };
    let value = |e: &ocijac_core::hodge::HodgeEntry| if mode == HodgeMode::Full { e.full } else { e.prim };
    let mut text = format!("m = {}, ell = {}, {}\n", table.m, table.l, if full { "full" } else { "primitive" });
    let entries: Vec<Value> = table
        .entries
        .iter()
        .map(|e| {
            let _ = writeln!(text, "h^{{{},{}}} = {}", e.p, e.q, value(e));
            json!({"p": e.p, "q": e.q, "value": value(e), "prim": e.prim, "full": e.full})
        })
        .collect();
    Ok(Outcome::new(
        json!({"m": table.m, "ell": table.l, "mode": if full { "full" } else { "prim" }, "entries": entries}),
        text,
    ))
}

fn trace<F: Field>(ring: &JacobianRing<F>, smoothcheck: bool) -> Result<Outcome, CliError> {
    let tp = trace_piece(ring);
    let piece = ring.piece(tp.idx);
    let generator = (tp.dim == 1).then(|| piece.standard_monomials().next().expect("one monomial").display(ring.config().r()).to_string());
    let text = format!(
        "socle B_{}({}): dim {}, status {}{}\n",
        tp.idx.q,
        tp.idx.l,
        tp.dim,
        tp.status,
        generator.as_deref().map(|g| format!(", tau = coefficient of {g}")).unwrap_or_default()
    );
    let mut result = json!({
        "socle_index": index(tp.idx),
        "dim": tp.dim,
        "status": tp.status.to_string(),
        "generator": generator,
    });
    let mut singular = tp.status == TraceStatus::Failed;
    let mut text = text;
    if smoothcheck {
        let symmetric = hodge_symmetric(ring);
        if let Some(sym) = symmetric {
            let _ = writeln!(text, "hodge symmetry: {}", if sym { "holds" } else { "FAILED" });
            singular |= !sym;
        }
        result["hodge_symmetric"] = json!(symmetric);
        result["smooth"] = json!(tp.diagnostic_ok() && symmetric != Some(false));
    }
    let mut out = Outcome::new(result, text);
    out.singular = singular;
    Ok(out)
}

/// `h^{p,q} = h^{q,p}` for the primitive table at twist 0. Only meaningful when `s = 0`.
fn hodge_symmetric<F: Field>(ring: &JacobianRing<F>) -> Option<bool> {
    if ring.config().s() != 0 {
        return None;
    }
    let table = hodge_table(ring, 0).ok()?;
    let prim: Vec<usize> = table.entries.iter().map(|e| e.prim).collect();
    Some(prim.iter().eq(prim.iter().rev()))
}

fn pairing_json<F: Field>(ring: &JacobianRing<F>, rep: &PairingReport<F>) -> Value {
    let f = ring.field();
    let matrix = (rep.left_dim * rep.right_dim <= MATRIX_PRINT_LIMIT).then(|| {
        (0..rep.matrix.nrows())
            .map(|i| (0..rep.matrix.ncols()).map(|j| f.render(&rep.matrix.get(i, j))).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    });
    json!({
        "p": rep.p,
        "ell": rep.l,
        "left": index(rep.left),
        "right": index(rep.right),
        "left_dim": rep.left_dim,
        "right_dim": rep.right_dim,
        "rank": rep.rank,
        "cases": rep.hypotheses.cases.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "applicable_case": rep.applicable_case.to_string(),
        "injectivity_claim": rep.hypotheses.injectivity_claim,
        "boundary": rep.hypotheses.boundary,
        "perfect": rep.is_perfect(),
        "verdict": rep.verdict.map(|v| v.to_string()),
        "matrix": matrix,
    })
}

fn pairing<F: Field>(ring: &JacobianRing<F>, p: i64, ell: i64, check: bool) -> Result<Outcome, CliError> {
    let rep = if check { check_duality(ring, p, ell)? } else { pairing_matrix(ring, p, ell)? };
    let mut text = format!(
        "h_{}({}): B_{}({}) x B_{}({}) -> k, {} x {}, rank {}, case {}\n",
        p, ell, rep.left.q, rep.left.l, rep.right.q, rep.right.l, rep.left_dim, rep.right_dim, rep.rank, rep.applicable_case
    );
    if rep.hypotheses.boundary {
        text.push_str("note: boundary value of ell for case ii\n");
    }
    if let Some(v) = rep.verdict {
        let _ = writeln!(text, "verdict: {v}");
    }
    let mut out = Outcome::new(pairing_json(ring, &rep), text);
    out.failed = rep.verdict == Some(Verdict::Failed);
    Ok(out)
}

fn eta<F: Field>(ring: &JacobianRing<F>) -> Result<Outcome, CliError> {
    let rep = eta_kernel(ring)?;
    let verdict = if rep.holds() { "holds" } else { "FAILED" };
    let text = format!(
        "eta: B_0 of dim {} -> dual of B_m of dim {}, rank {}, kernel {} (expected {}), surjective {}\nverdict: {verdict}\n",
        rep.source_dim, rep.target_dim, rep.rank, rep.kernel_dim, rep.expected, rep.surjective
    );
    let mut out = Outcome::new(
        json!({
            "source_dim": rep.source_dim,
            "target_dim": rep.target_dim,
            "rank": rep.rank,
            "kernel_dim": rep.kernel_dim,
            "expected": rep.expected,
            "surjective": rep.surjective,
            "verdict": verdict,
        }),
        text,
    );
    out.failed = !rep.holds();
    Ok(out)
}

fn source_json(source: SubspaceSource) -> Value {
    match source {
        SubspaceSource::Full => json!({"kind": "full"}),
        SubspaceSource::Explicit => json!({"kind": "explicit"}),
        SubspaceSource::Random { codim, seed } => json!({"kind": "random", "codim": codim, "seed": seed}),
    }
}

fn koszul<F: Field>(ring: &JacobianRing<F>, v: &SubspaceSpec<F>, p: i64, ell: i64, q: i64) -> Result<Outcome, CliError> {
    let rep = check_exactness(ring, v, p, ell, q)?;
    let verdict = if !rep.consistent() {
        "FAILED"
    } else if rep.cases.is_empty() {
        "no_claim"
    } else {
        "exact"
    };
    let cases: Vec<String> = rep.cases.iter().map(ToString::to_string).collect();
    let text = format!(
        "dims {:?}, ranks ({}, {}), middle homology {}, d∘d = 0: {}, cases [{}]{}\nverdict: {verdict}\n",
        rep.dims,
        rep.rank_in,
        rep.rank_out,
        rep.middle_homology,
        rep.dd_zero,
        cases.join(", "),
        if rep.boundary { " (boundary)" } else { "" }
    );
    let mut out = Outcome::new(
        json!({
            "p": p,
            "ell": ell,
            "q": q,
            "subspace": source_json(v.source),
            "codim": rep.codim,
            "dims": rep.dims,
            "rank_in": rep.rank_in,
            "rank_out": rep.rank_out,
            "middle_homology": rep.middle_homology,
            "dd_zero": rep.dd_zero,
            "cases": cases,
            "boundary": rep.boundary,
            "verdict": verdict,
        }),
        text,
    );
    out.failed = !rep.consistent();
    Ok(out)
}

fn nabla<F: Field>(ring: &JacobianRing<F>, input: FamilyInput<F>, p: i64, q: i64) -> Result<Outcome, CliError> {
    let rep = nabla_kernel(ring, &input, p, q)?;
    let claim = match rep.claim {
        NablaClaim::Vanishing => "vanishing",
        NablaClaim::Trivial => "trivial",
        NablaClaim::None => "none",
    };
    let verdict = match (rep.asserted(), rep.holds()) {
        (None, _) => "no_claim",
        (Some(_), true) => "holds",
        (Some(_), false) => "FAILED",
    };
    let text = format!(
        "kernel on B_{}({}) of dim {}: {} (trivial forms {}), claim {claim}, degree condition {}{}\nverdict: {verdict}\n",
        rep.source.q,
        rep.source.l,
        rep.source_dim,
        rep.kernel_dim,
        rep.trivial_expected,
        rep.condition_holds,
        if rep.ring_level_only { ", ring-level statement only" } else { "" }
    );
    let mut out = Outcome::new(
        json!({
            "p": p,
            "q": q,
            "source": index(rep.source),
            "source_dim": rep.source_dim,
            "kernel_dim": rep.kernel_dim,
            "trivial_expected": rep.trivial_expected,
            "claim": claim,
            "condition_holds": rep.condition_holds,
            "ring_level_only": rep.ring_level_only,
            "subspace": source_json(input.w.source),
            "codim": input.w.codim,
            "c_s": input.c_s,
            "verdict": verdict,
        }),
        text,
    );
    out.failed = !rep.holds();
    Ok(out)
}
