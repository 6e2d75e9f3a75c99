//! The bigraded algebra `A = P[mu_1..mu_r, lambda_1..lambda_s]`, its pieces
//! `A_q(l)` and the degreewise pieces of the Jacobian ideal `J(F, G)`.
//!
//! A term `X^m * mu^a * lambda^b` lies in `A_q(l)` when `|a| + |b| = q` and
//! `deg(X^m) = a.d + b.e + l`. Pieces with `q < 0` are zero.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::binomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{ExactMatrix, SparseVec};
use crate::poly::{monomials_of_degree, Monomial, Polynomial};

/// The bigrading `(q, l)`. Negative values are legal and index zero spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedIndex {
    pub q: i64,
    pub l: i64,
}

impl GradedIndex {
    pub const fn new(q: i64, l: i64) -> Self {
        GradedIndex { q, l }
    }
}

impl core::ops::Add for GradedIndex {
    type Output = GradedIndex;
    fn add(self, rhs: GradedIndex) -> GradedIndex {
        GradedIndex::new(self.q + rhs.q, self.l + rhs.l)
    }
}

impl fmt::Display for GradedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.l)
    }
}

/// Validated input data `(n, F_1..F_r, G_1..G_s)` with its derived degree invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration<F: Field> {
    field: F,
    n: usize,
    f: Vec<Polynomial<F>>,
    g: Vec<Polynomial<F>>,
    d: Vec<u32>,
    e: Vec<u32>,
}

impl<F: Field> Configuration<F> {
    /// Checks `n >= 2`, `r + s >= 1`, and that every polynomial is nonzero,
    /// homogeneous of positive degree in `n + 1` variables. Degrees are inferred.
    pub fn new(field: F, n: usize, f: Vec<Polynomial<F>>, g: Vec<Polynomial<F>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!("n = {n}, need n >= 2")));
        }
        if f.is_empty() && g.is_empty() {
            return Err(Error::InvalidConfig("r + s = 0, need at least one polynomial".into()));
        }
        let degrees = |family: char, polys: &[Polynomial<F>]| -> Result<Vec<u32>> {
            polys
                .iter()
                .enumerate()
                .map(|(index, p)| {
                    if p.field().spec() != field.spec() {
                        return Err(Error::FieldMismatch { left: field.spec(), right: p.field().spec() });
                    }
                    if p.nvars() != n + 1 {
                        return Err(Error::NvarsMismatch { left: n + 1, right: p.nvars() });
                    }
                    if p.is_zero() {
                        return Err(Error::ZeroPolynomial { family, index });
                    }
                    match p.homogeneous_degree() {
                        None => Err(Error::Inhomogeneous { family, index }),
                        Some(0) => Err(Error::ConstantPolynomial { family, index }),
                        Some(deg) => Ok(deg),
                    }
                })
                .collect()
        };
        let d = degrees('F', &f)?;
        let e = degrees('G', &g)?;
        Ok(Configuration { field, n, f, g, d, e })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn nvars(&self) -> usize {
        self.n + 1
    }
    pub fn r(&self) -> usize {
        self.f.len()
    }
    pub fn s(&self) -> usize {
        self.g.len()
    }
    pub fn f(&self) -> &[Polynomial<F>] {
        &self.f
    }
    pub fn g(&self) -> &[Polynomial<F>] {
        &self.g
    }
    pub fn d(&self) -> &[u32] {
        &self.d
    }
    pub fn e(&self) -> &[u32] {
        &self.e
    }
    /// Sum of the `d_i`.
    pub fn d_sum(&self) -> i64 {
        self.d.iter().map(|&x| x as i64).sum()
    }
    /// Sum of the `e_j`.
    pub fn e_sum(&self) -> i64 {
        self.e.iter().map(|&x| x as i64).sum()
    }
    /// Minimum over all `d_i` and `e_j`.
    pub fn delta_min(&self) -> i64 {
        self.d.iter().chain(&self.e).map(|&x| x as i64).min().expect("r + s >= 1")
    }
    /// Largest `d_i`, 0 when `r = 0`.
    pub fn d_max(&self) -> i64 {
        self.d.iter().map(|&x| x as i64).max().unwrap_or(0)
    }
    /// Largest `e_j`, 0 when `s = 0`.
    pub fn e_max(&self) -> i64 {
        self.e.iter().map(|&x| x as i64).max().unwrap_or(0)
    }
    /// Dimension `m = n - r` of the complete intersection (negative when `r > n`).
    pub fn m(&self) -> i64 {
        self.n as i64 - self.r() as i64
    }

    /// True exactly for the three K3 complete-intersection types with `s = 0`.
    pub fn is_k3(&self) -> bool {
        if !self.g.is_empty() {
            return false;
        }
        let mut d = self.d.clone();
        d.sort_unstable();
        matches!((self.n, d.as_slice()), (3, [4]) | (4, [2, 3]) | (5, [2, 2, 2]))
    }

    /// Polynomial degree shift `a.d + b.e` of a multi-exponent `(a, b)`.
    pub fn weight(&self, mults: &[u32]) -> i64 {
        self.d
            .iter()
            .chain(&self.e)
            .zip(mults)
            .map(|(&deg, &k)| deg as i64 * k as i64)
            .sum()
    }
}

/// A basis term `X^monomial * mu^a * lambda^b`; `mults` is `(a_1..a_r, b_1..b_s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BigradedTerm {
    pub mults: Vec<u32>,
    pub monomial: Monomial,
}

impl BigradedTerm {
    pub fn q(&self) -> i64 {
        self.mults.iter().map(|&k| k as i64).sum()
    }

    pub fn mul(&self, other: &BigradedTerm) -> BigradedTerm {
        BigradedTerm {
            mults: self.mults.iter().zip(&other.mults).map(|(a, b)| a + b).collect(),
            monomial: self.monomial.mul(&other.monomial),
        }
    }

    /// Bigrading of this term in a configuration.
    pub fn index<F: Field>(&self, cfg: &Configuration<F>) -> GradedIndex {
        GradedIndex::new(self.q(), self.monomial.degree() as i64 - cfg.weight(&self.mults))
    }

    /// Renders with `mu<i>`/`lambda<j>` names, `r` telling where the lambdas start.
    pub fn display(&self, r: usize) -> TermDisplay<'_> {
        TermDisplay { term: self, r }
    }
}

pub struct TermDisplay<'a> {
    term: &'a BigradedTerm,
    r: usize,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.term.monomial)?;
        for (i, &k) in self.term.mults.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if i < self.r {
                write!(f, "*mu{}", i + 1)?;
            } else {
                write!(f, "*lambda{}", i - self.r + 1)?;
            }
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// Multi-exponents of total size `q` in `parts` slots, lexicographically descending.
pub fn compositions(q: i64, parts: usize) -> Vec<Vec<u32>> {
    if q < 0 {
        return Vec::new();
    }
    if parts == 0 {
        return if q == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            fill(prefix, remaining - k, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(parts), q as u32, parts, &mut out);
    out
}

/// Ordered basis of `A_q(l)`: multi-exponents lexicographically descending, then
/// monomials in descending grevlex. Empty when `q < 0`.
pub fn basis_a<F: Field>(cfg: &Configuration<F>, idx: GradedIndex) -> Vec<BigradedTerm> {
    let mut out = Vec::new();
    for mults in compositions(idx.q, cfg.r() + cfg.s()) {
        let deg = cfg.weight(&mults) + idx.l;
        for monomial in monomials_of_degree(cfg.nvars(), deg) {
            out.push(BigradedTerm { mults: mults.clone(), monomial });
        }
    }
    out
}

/// `dim A_q(l)` by stars and bars, without enumerating.
pub fn dim_a<F: Field>(cfg: &Configuration<F>, idx: GradedIndex) -> usize {
    let n = cfg.n() as i64;
    compositions(idx.q, cfg.r() + cfg.s())
        .iter()
        .map(|mults| {
            let deg = cfg.weight(mults) + idx.l;
            if deg < 0 {
                0
            } else {
                binomial(n + deg, n) as usize
            }
        })
        .sum()
}

/// Ordered basis of `A_q(l)` with a reverse lookup.
#[derive(Debug, Clone)]
pub struct AmbientPiece {
    pub idx: GradedIndex,
    pub terms: Vec<BigradedTerm>,
    index: BTreeMap<BigradedTerm, usize>,
}

impl AmbientPiece {
    pub fn new<F: Field>(cfg: &Configuration<F>, idx: GradedIndex) -> Self {
        let terms = basis_a(cfg, idx);
        let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        AmbientPiece { idx, terms, index }
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn column(&self, t: &BigradedTerm) -> Option<usize> {
        self.index.get(t).copied()
    }
}

/// A homogeneous element of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement<F: Field> {
    pub idx: GradedIndex,
    pub terms: Vec<(BigradedTerm, F::Elem)>,
}

impl<F: Field> GradedElement<F> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `t * self` as a term list.
    pub fn times_term<'a>(&'a self, t: &'a BigradedTerm) -> impl Iterator<Item = (BigradedTerm, &'a F::Elem)> + 'a {
        self.terms.iter().map(move |(u, c)| (t.mul(u), c))
    }

    /// Coordinates of `t * self` in `target`, as a sparse row.
    fn row_in(&self, field: &F, t: &BigradedTerm, target: &AmbientPiece) -> SparseVec<F::Elem> {
        let mut row: SparseVec<F::Elem> = self
            .times_term(t)
            .map(|(u, c)| {
                let col = target.column(&u).expect("product lands in the target piece");
                (col, c.clone())
            })
            .collect();
        row.sort_by_key(|(c, _)| *c);
        let _ = field;
        row
    }
}

/// The three generator families of the Jacobian ideal:
/// `Theta_k = sum_i dF_i/dX_k mu_i + sum_j dG_j/dX_k lambda_j` in `A_1(-1)`,
/// `F_i` in `A_0(d_i)` and `G_j lambda_j` in `A_1(0)`.
#[derive(Debug, Clone)]
pub struct JacobianGenerators<F: Field> {
    pub theta: Vec<GradedElement<F>>,
    pub f_gens: Vec<GradedElement<F>>,
    pub glambda_gens: Vec<GradedElement<F>>,
}

fn unit_mults(len: usize, slot: Option<usize>) -> Vec<u32> {
    let mut v = vec![0; len];
    if let Some(i) = slot {
        v[i] = 1;
    }
    v
}

fn poly_terms<F: Field>(p: &Polynomial<F>, mults: &[u32]) -> Vec<(BigradedTerm, F::Elem)> {
    p.terms()
        .rev()
        .map(|(m, c)| (BigradedTerm { mults: mults.to_vec(), monomial: m.clone() }, c.clone()))
        .collect()
}

pub fn jacobian_generators<F: Field>(cfg: &Configuration<F>) -> JacobianGenerators<F> {
    let (r, s) = (cfg.r(), cfg.s());
    let slots = r + s;
    let mut theta = Vec::with_capacity(cfg.nvars());
    for k in 0..cfg.nvars() {
        let mut acc: BTreeMap<BigradedTerm, F::Elem> = BTreeMap::new();
        let families = cfg.f().iter().chain(cfg.g()).enumerate();
        for (slot, p) in families {
            let dp = p.partial_derivative(k).expect("k <= n");
            for (t, c) in poly_terms(&dp, &unit_mults(slots, Some(slot))) {
                acc.insert(t, c);
            }
        }
        theta.push(GradedElement { idx: GradedIndex::new(1, -1), terms: acc.into_iter().collect() });
    }
    let f_gens = cfg
        .f()
        .iter()
        .zip(cfg.d())
        .map(|(p, &d)| GradedElement { idx: GradedIndex::new(0, d as i64), terms: poly_terms(p, &unit_mults(slots, None)) })
        .collect();
    let glambda_gens = cfg
        .g()
        .iter()
        .enumerate()
        .map(|(j, p)| GradedElement { idx: GradedIndex::new(1, 0), terms: poly_terms(p, &unit_mults(slots, Some(r + j))) })
        .collect();
    let gens = JacobianGenerators { theta, f_gens, glambda_gens };
    assert!(euler_identity_holds(cfg, &gens), "Euler identity failed for the Jacobian generators");
    gens
}

/// Checks `sum_k X_k Theta_k = sum_i d_i F_i mu_i + sum_j e_j G_j lambda_j` exactly.
pub fn euler_identity_holds<F: Field>(cfg: &Configuration<F>, gens: &JacobianGenerators<F>) -> bool {
    let field = cfg.field();
    let slots = cfg.r() + cfg.s();
    let add = |acc: &mut BTreeMap<BigradedTerm, F::Elem>, t: BigradedTerm, c: F::Elem| {
        let v = acc.remove(&t).unwrap_or_else(|| field.zero());
        let v = field.add(&v, &c);
        if !field.is_zero(&v) {
            acc.insert(t, v);
        }
    };
    let mut lhs = BTreeMap::new();
    for (k, th) in gens.theta.iter().enumerate() {
        let xk = BigradedTerm { mults: vec![0; slots], monomial: Monomial::var(cfg.nvars(), k) };
        for (t, c) in th.times_term(&xk) {
            add(&mut lhs, t, c.clone());
        }
    }
    let mut rhs = BTreeMap::new();
    let families = cfg.f().iter().zip(cfg.d()).chain(cfg.g().iter().zip(cfg.e()));
    for (slot, (p, &deg)) in families.enumerate() {
        let weight = field.from_i64(deg as i64);
        for (t, c) in poly_terms(p, &unit_mults(slots, Some(slot))) {
            add(&mut rhs, t, field.mul(&c, &weight));
        }
    }
    lhs == rhs
}

/// Spanning rows of `J(F, G) ∩ A_q(l)` in the basis of `target`: all products
/// `A_{q-1}(l+1) * Theta_k`, then `A_q(l-d_i) * F_i`, then `A_{q-1}(l) * G_j lambda_j`.
pub fn ideal_piece_rows<F: Field>(
    cfg: &Configuration<F>,
    gens: &JacobianGenerators<F>,
    target: &AmbientPiece,
) -> Vec<SparseVec<F::Elem>> {
    let field = cfg.field();
    let idx = target.idx;
    let mut rows = Vec::new();
    let mut products = |gen: &GradedElement<F>, factor_idx: GradedIndex| {
        if gen.is_zero() {
            // Zero generators still contribute (zero) rows so row counts stay predictable.
            rows.extend(core::iter::repeat_n(Vec::new(), dim_a(cfg, factor_idx)));
            return;
        }
        for t in basis_a(cfg, factor_idx) {
            rows.push(gen.row_in(field, &t, target));
        }
    };
    for th in &gens.theta {
        products(th, GradedIndex::new(idx.q - 1, idx.l + 1));
    }
    for (fg, &d) in gens.f_gens.iter().zip(cfg.d()) {
        products(fg, GradedIndex::new(idx.q, idx.l - d as i64));
    }
    for gl in &gens.glambda_gens {
        products(gl, GradedIndex::new(idx.q - 1, idx.l));
    }
    rows
}

/// The matrix whose rows span `J(F, G) ∩ A_q(l)`, columns in [`basis_a`] order.
pub fn ideal_piece_span<F: Field>(cfg: &Configuration<F>, idx: GradedIndex) -> ExactMatrix<F> {
    let gens = jacobian_generators(cfg);
    let target = AmbientPiece::new(cfg, idx);
    let rows = ideal_piece_rows(cfg, &gens, &target);
    ExactMatrix::from_rows(cfg.field().clone(), target.dim(), rows).expect("rows are in range")
}
