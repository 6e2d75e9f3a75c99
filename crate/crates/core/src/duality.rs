//! Trace functional on the socle piece, the pairings
//! `h_p(l): B_p(d - n - 1 + l) x B_{m-p}(d + e - n - 1 - l) -> k`
//! and the kernel of the map `eta` built from `h_m(0)`.
//!
//! The trace is normalized as the coefficient of the unique standard monomial
//! of the socle piece. Verdicts only depend on ranks, so the scalar is irrelevant.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::binomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Configuration, GradedIndex};
use crate::linalg::{echelon, ExactMatrix};
use crate::quotient::{column_coordinate, JacobianRing};

/// `(m, 2(d - n - 1) + e)`.
pub fn socle_index<F: Field>(cfg: &Configuration<F>) -> GradedIndex {
    GradedIndex::new(cfg.m(), 2 * (cfg.d_sum() - cfg.n() as i64 - 1) + cfg.e_sum())
}

/// Outcome of the one-dimensionality check on the socle piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStatus {
    /// One-dimensional; the trace is the coefficient of its standard monomial.
    Ok,
    /// `r > n`: every pairing is the zero map by convention.
    ZeroMap,
    /// The piece vanishes (possible only when `d < n + 1`); the trace is zero.
    Vanishing,
    /// `m = 0` and the piece is not one-dimensional: no coefficient functional is canonical.
    NotApplicable,
    /// `m >= 1` and the piece has the wrong dimension: the configuration is not smooth
    /// and transversal (or the degree data make the piece vanish although `d >= n + 1`).
    Failed,
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceStatus::Ok => "ok",
            TraceStatus::ZeroMap => "zero_map",
            TraceStatus::Vanishing => "vanishing",
            TraceStatus::NotApplicable => "not_applicable",
            TraceStatus::Failed => "FAILED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracePiece<F: Field> {
    pub idx: GradedIndex,
    pub dim: usize,
    pub status: TraceStatus,
    /// The trace on the standard monomials; `[1]` when `dim = 1`, empty otherwise.
    pub functional: Vec<F::Elem>,
}

impl<F: Field> TracePiece<F> {
    /// False exactly when the status is [`TraceStatus::Failed`].
    pub fn diagnostic_ok(&self) -> bool {
        self.status != TraceStatus::Failed
    }

    pub fn zero_map(&self) -> bool {
        matches!(self.status, TraceStatus::ZeroMap | TraceStatus::Vanishing)
    }

    fn require(&self) -> Result<()> {
        match self.status {
            TraceStatus::Failed => Err(Error::SmoothnessDiagnostic(format!(
                "trace piece {} has dimension {}, expected 1",
                self.idx, self.dim
            ))),
            TraceStatus::NotApplicable => Err(Error::Precondition(format!(
                "trace piece {} has dimension {} with n = r; no canonical trace",
                self.idx, self.dim
            ))),
            _ => Ok(()),
        }
    }
}

pub fn trace_piece<F: Field>(ring: &JacobianRing<F>) -> TracePiece<F> {
    let cfg = ring.config();
    let idx = socle_index(cfg);
    let dim = ring.dim(idx);
    let large_degree = cfg.d_sum() > cfg.n() as i64;
    let status = if cfg.r() > cfg.n() {
        TraceStatus::ZeroMap
    } else if dim == 1 {
        TraceStatus::Ok
    } else if cfg.m() == 0 {
        TraceStatus::NotApplicable
    } else if dim == 0 && !large_degree {
        TraceStatus::Vanishing
    } else {
        TraceStatus::Failed
    };
    let functional = if dim == 1 { vec![ring.field().one()] } else { Vec::new() };
    TracePiece { idx, dim, status, functional }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairingCase {
    I,
    II,
    III,
    InjectivityOnly,
    None,
}

impl fmt::Display for PairingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairingCase::I => "i",
            PairingCase::II => "ii",
            PairingCase::III => "iii",
            PairingCase::InjectivityOnly => "injectivity_only",
            PairingCase::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Perfect,
    Injective,
    NoClaim,
    Failed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Perfect => "perfect",
            Verdict::Injective => "injective",
            Verdict::NoClaim => "no_claim",
            Verdict::Failed => "FAILED",
        })
    }
}

/// Which hypotheses apply to `h_p(l)`. A pairing can satisfy several.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingHypotheses {
    pub cases: Vec<PairingCase>,
    pub injectivity_claim: bool,
    /// `l = e_max` under case (ii) only; the inequality there is non-strict.
    pub boundary: bool,
}

impl PairingHypotheses {
    /// The case reported: the first isomorphism case, else the injectivity claim, else none.
    pub fn primary(&self) -> PairingCase {
        match self.cases.first() {
            Some(c) => *c,
            None if self.injectivity_claim => PairingCase::InjectivityOnly,
            None => PairingCase::None,
        }
    }
}

/// Evaluates the isomorphism cases (i)-(iii) and the injectivity claim for `p = m`.
/// Nothing is claimed for `p` outside `0..=m` or when `r > n`.
pub fn pairing_hypotheses(n: i64, r: i64, s: i64, e_max: i64, p: i64, l: i64) -> PairingHypotheses {
    let m = n - r;
    let mut cases = Vec::new();
    let mut injectivity_claim = false;
    let mut boundary = false;
    if r <= n && (0..=m).contains(&p) {
        let case_i = s >= 1 && p < m && l < e_max;
        let case_ii = s >= 1 && 0 <= l && l <= e_max && r + s <= n;
        let case_iii = s == 0 && l == 0 && (m >= 1 || p == 0);
        if case_i {
            cases.push(PairingCase::I);
        }
        if case_ii {
            cases.push(PairingCase::II);
            boundary = l == e_max && !case_i;
        }
        if case_iii {
            cases.push(PairingCase::III);
        }
        injectivity_claim = p == m && s >= 1 && l < e_max;
    }
    PairingHypotheses { cases, injectivity_claim, boundary }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingReport<F: Field> {
    pub p: i64,
    pub l: i64,
    pub left: GradedIndex,
    pub right: GradedIndex,
    pub left_dim: usize,
    pub right_dim: usize,
    pub matrix: ExactMatrix<F>,
    pub rank: usize,
    pub hypotheses: PairingHypotheses,
    pub applicable_case: PairingCase,
    /// `None` until [`check_duality`] evaluates it.
    pub verdict: Option<Verdict>,
}

impl<F: Field> PairingReport<F> {
    pub fn is_perfect(&self) -> bool {
        self.rank == self.left_dim && self.rank == self.right_dim
    }

    pub fn is_injective(&self) -> bool {
        self.rank == self.left_dim
    }
}

/// `tau(e_c)` for every ambient column `c` of the socle piece.
pub(crate) fn ambient_trace<F: Field>(ring: &JacobianRing<F>) -> Result<Vec<F::Elem>> {
    let tp = trace_piece(ring);
    tp.require()?;
    let socle = ring.piece(tp.idx);
    Ok((0..socle.ambient_dim()).map(|c| column_coordinate(&socle, c, 0)).collect())
}

/// Matrix of `tau(a_i b_j)` over the standard bases of the two factors.
pub fn pairing_matrix<F: Field>(ring: &JacobianRing<F>, p: i64, l: i64) -> Result<PairingReport<F>> {
    let cfg = ring.config();
    let field = ring.field().clone();
    let (n, d, e) = (cfg.n() as i64, cfg.d_sum(), cfg.e_sum());
    let left = GradedIndex::new(p, d - n - 1 + l);
    let right = GradedIndex::new(cfg.m() - p, d + e - n - 1 - l);
    let (pl, pr) = (ring.piece(left), ring.piece(right));
    let hypotheses = pairing_hypotheses(n, cfg.r() as i64, cfg.s() as i64, cfg.e_max(), p, l);
    let applicable_case = hypotheses.primary();
    let tp = trace_piece(ring);
    tp.require()?;
    let matrix = if tp.zero_map() {
        ExactMatrix::zeros(field, pl.dim(), pr.dim())
    } else {
        let tau = ambient_trace(ring)?;
        let socle = ring.piece(socle_index(cfg));
        let rows: Vec<Vec<F::Elem>> = pl
            .standard_monomials()
            .map(|a| {
                pr.standard_monomials()
                    .map(|b| {
                        let col = socle.ambient.column(&a.mul(b)).expect("product lies in the socle piece");
                        tau[col].clone()
                    })
                    .collect()
            })
            .collect();
        ExactMatrix::from_dense(field, pr.dim(), &rows).expect("rows have right_dim entries")
    };
    let rank = echelon(&matrix).rank;
    Ok(PairingReport {
        p,
        l,
        left,
        right,
        left_dim: pl.dim(),
        right_dim: pr.dim(),
        matrix,
        rank,
        hypotheses,
        applicable_case,
        verdict: None,
    })
}

/// Pairing report with its verdict: a claimed property that fails numerically is `Failed`.
pub fn check_duality<F: Field>(ring: &JacobianRing<F>, p: i64, l: i64) -> Result<PairingReport<F>> {
    let mut report = pairing_matrix(ring, p, l)?;
    let h = &report.hypotheses;
    let verdict = if !h.cases.is_empty() {
        if report.is_perfect() {
            Verdict::Perfect
        } else {
            Verdict::Failed
        }
    } else if h.injectivity_claim {
        if report.is_injective() {
            Verdict::Injective
        } else {
            Verdict::Failed
        }
    } else {
        Verdict::NoClaim
    };
    report.verdict = Some(verdict);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaReport {
    /// `dim B_0(d + e - n - 1)`.
    pub source_dim: usize,
    /// `dim B_m(d - n - 1)`.
    pub target_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// `C(s - 1, m)`, zero when `s <= 1`.
    pub expected: usize,
    pub surjective: bool,
}

impl EtaReport {
    pub fn holds(&self) -> bool {
        self.surjective && self.kernel_dim == self.expected
    }
}

/// Kernel of the dual of `h_m(0)` on `B_0(d + e - n - 1)`, with the surjectivity check.
pub fn eta_kernel<F: Field>(ring: &JacobianRing<F>) -> Result<EtaReport> {
    let cfg = ring.config();
    let m = cfg.m();
    if m < 1 {
        return Err(Error::Precondition(format!("need n - r >= 1, got {m}")));
    }
    let report = pairing_matrix(ring, m, 0)?;
    let s = cfg.s() as i64;
    let expected = if s >= 2 { binomial(s - 1, m) as usize } else { 0 };
    Ok(EtaReport {
        source_dim: report.right_dim,
        target_dim: report.left_dim,
        rank: report.rank,
        kernel_dim: report.right_dim - report.rank,
        expected,
        surjective: report.rank == report.left_dim,
    })
}
