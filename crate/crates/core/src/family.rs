//! Kernels of `x -> (w x)_{w in W}` on `B_q(d + e - n - 1)` for a tangent
//! subspace `W` of `B_1(0)`, and the codimension bounds for the locus of
//! nontrivial classes.

use alloc::format;
use alloc::vec::Vec;

use crate::binomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedIndex;
use crate::hodge::hodge_piece;
use crate::koszul::SubspaceSpec;
use crate::linalg::{echelon, ExactMatrix};
use crate::quotient::JacobianRing;

/// `W` in `B_1(0)` coordinates plus the defect `c_S` (zero for universal families).
/// The codimension `c` entering the degree condition is the codimension of `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInput<F: Field> {
    pub w: SubspaceSpec<F>,
    pub c_s: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NablaClaim {
    /// `1 <= p <= m - 1`: kernel vanishes.
    Vanishing,
    /// `(p, q) = (m, 0)`: kernel is exactly the trivial forms.
    Trivial,
    /// The `(0, m)` edge; nothing is claimed.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NablaKernelReport {
    pub p: i64,
    pub q: i64,
    pub source: GradedIndex,
    pub source_dim: usize,
    pub kernel_dim: usize,
    pub trivial_expected: usize,
    pub claim: NablaClaim,
    pub condition_holds: bool,
    /// Curves: the comparison with tangent directions is only a ring-level statement.
    pub ring_level_only: bool,
}

impl NablaKernelReport {
    /// Value the kernel must take when the degree condition holds, if any.
    pub fn asserted(&self) -> Option<usize> {
        match (self.claim, self.condition_holds) {
            (NablaClaim::Vanishing, true) => Some(0),
            (NablaClaim::Trivial, true) => Some(self.trivial_expected),
            _ => None,
        }
    }

    pub fn holds(&self) -> bool {
        self.asserted().is_none_or(|v| v == self.kernel_dim)
    }
}

pub fn nabla_kernel<F: Field>(ring: &JacobianRing<F>, input: &FamilyInput<F>, p: i64, q: i64) -> Result<NablaKernelReport> {
    let cfg = ring.config();
    let m = cfg.m();
    if m < 1 {
        return Err(Error::Precondition(format!("need m = n - r >= 1, got {m}")));
    }
    if p + q != m || !(0..=m).contains(&p) {
        return Err(Error::Precondition(format!("need p + q = {m} with 0 <= p <= {m}, got ({p}, {q})")));
    }
    if input.c_s < 0 {
        return Err(Error::Precondition(format!("c_S = {} is negative", input.c_s)));
    }
    let source = hodge_piece(cfg, q, 0);
    let source_dim = ring.dim(source);
    let target_dim = ring.dim(hodge_piece(cfg, q + 1, 0));
    let blocks: Vec<Vec<Vec<F::Elem>>> = input.w.elements().iter().map(|w| ring.multiplication_rows(source, w)).collect();
    let rows: Vec<Vec<F::Elem>> = (0..source_dim)
        .map(|i| blocks.iter().flat_map(|b| b[i].iter().cloned()).collect())
        .collect();
    let stacked = ExactMatrix::from_dense(ring.field().clone(), target_dim * blocks.len(), &rows).expect("uniform widths");
    let kernel_dim = source_dim - echelon(&stacked).rank;

    let (n, d, delta) = (cfg.n() as i64, cfg.d_sum(), cfg.delta_min());
    let threshold = n + 1 + input.c_s + input.w.codim as i64;
    let s = cfg.s() as i64;
    let (claim, condition_holds, trivial_expected) = if p == m && q == 0 {
        let expected = if s >= 2 { binomial(s - 1, m) as usize } else { 0 };
        (NablaClaim::Trivial, delta * (m - 1) + d >= threshold, expected)
    } else if (1..m).contains(&p) {
        (NablaClaim::Vanishing, delta * (p - 1) + d >= threshold, 0)
    } else {
        (NablaClaim::None, false, 0)
    };
    Ok(NablaKernelReport {
        p,
        q,
        source,
        source_dim,
        kernel_dim,
        trivial_expected,
        claim,
        condition_holds,
        ring_level_only: m == 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NlBound {
    pub value: i64,
    /// The bound says nothing when `value <= 0`.
    pub vacuous: bool,
}

/// `delta_min (n - r - 1) + sum d_i - c_S - n`, unclipped.
pub fn nl_bound(n: i64, r: usize, s: usize, d: &[u32], e: &[u32], c_s: i64) -> Result<NlBound> {
    if d.len() != r || e.len() != s {
        return Err(Error::InvalidConfig(format!(
            "degree lists have lengths ({}, {}) but r = {r}, s = {s}",
            d.len(),
            e.len()
        )));
    }
    if r + s == 0 {
        return Err(Error::InvalidConfig("r + s = 0".into()));
    }
    if d.iter().chain(e).any(|&x| x == 0) {
        return Err(Error::InvalidConfig("degrees must be positive".into()));
    }
    let delta = d.iter().chain(e).map(|&x| x as i64).min().expect("nonempty");
    let value = delta * (n - r as i64 - 1) + d.iter().map(|&x| x as i64).sum::<i64>() - c_s - n;
    Ok(NlBound { value, vacuous: value <= 0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaCodim {
    /// `C(d+2, 2) - 1 - C(d+1, 2) + 1`.
    pub codim: i64,
    /// `codim - 3`, the codimension of the component inside the parameter space.
    pub sigma_codim: i64,
}

pub fn sigma_component_codim(d: i64) -> Result<SigmaCodim> {
    if d < 2 {
        return Err(Error::Precondition(format!("d = {d}, need d >= 2")));
    }
    let codim = binomial(d + 2, 2) as i64 - 1 - binomial(d + 1, 2) as i64 + 1;
    assert_eq!(codim, d + 1);
    Ok(SigmaCodim { codim, sigma_codim: codim - 3 })
}
