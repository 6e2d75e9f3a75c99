//! Koszul complexes `B_p(l) ⊗ ∧^{q+1} V -> B_{p+1}(l) ⊗ ∧^q V -> B_{p+2}(l) ⊗ ∧^{q-1} V`
//! for subspaces `V` of `B_1(0)`, and the exactness conditions (i)-(iii).
//!
//! The differential is `b ⊗ v_0 ∧ .. ∧ v_q -> sum_i (-1)^i (v_i b) ⊗ v_0 ∧ .. v_i^ .. ∧ v_q`.
//! Tensor coordinates are wedge-major: index `w * dim B + j` for wedge tuple
//! number `w` (increasing tuples in lexicographic order) and standard monomial `j`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::GradedIndex;
use crate::linalg::{echelon, ExactMatrix, SparseVec};
use crate::quotient::{BElement, JacobianRing};

pub const B1: GradedIndex = GradedIndex::new(1, 0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceSource {
    Full,
    Explicit,
    Random { codim: usize, seed: u64 },
}

/// A subspace of `B_1(0)` given by independent coordinate vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSpec<F: Field> {
    pub source: SubspaceSource,
    pub basis: Vec<Vec<F::Elem>>,
    /// `dim B_1(0)`.
    pub ambient_dim: usize,
    pub codim: usize,
}

impl<F: Field> SubspaceSpec<F> {
    /// The standard basis of `B_1(0)`.
    pub fn full(ring: &JacobianRing<F>) -> Self {
        let f = ring.field();
        let dim = ring.dim(B1);
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        SubspaceSpec { source: SubspaceSource::Full, basis, ambient_dim: dim, codim: 0 }
    }

    pub fn explicit(ring: &JacobianRing<F>, vectors: Vec<Vec<F::Elem>>) -> Result<Self> {
        let f = ring.field();
        let dim = ring.dim(B1);
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            if !v.iter().all(|x| f.is_valid(x)) {
                return Err(Error::InvalidConfig("subspace coordinate outside the field".into()));
            }
        }
        if independent_rank(f, &vectors, dim) != vectors.len() {
            return Err(Error::LinearlyDependent);
        }
        let codim = dim - vectors.len();
        Ok(SubspaceSpec { source: SubspaceSource::Explicit, basis: vectors, ambient_dim: dim, codim })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The basis vectors as elements of `B_1(0)`.
    pub fn elements(&self) -> Vec<BElement<F>> {
        self.basis.iter().map(|v| BElement { idx: B1, coords: v.clone() }).collect()
    }
}

fn independent_rank<F: Field>(f: &F, vectors: &[Vec<F::Elem>], dim: usize) -> usize {
    let m = ExactMatrix::from_dense(f.clone(), dim, vectors).expect("lengths checked");
    echelon(&m).rank
}

/// `dim B_1(0) - c` independent vectors drawn from a seeded generator; `c = 0` gives the standard basis.
pub fn random_subspace<F: Field>(ring: &JacobianRing<F>, c: usize, seed: u64) -> Result<SubspaceSpec<F>> {
    let f = ring.field();
    let dim = ring.dim(B1);
    if c > dim {
        return Err(Error::Precondition(format!("codimension {c} exceeds dim B_1(0) = {dim}")));
    }
    if c == 0 {
        let mut full = SubspaceSpec::full(ring);
        full.source = SubspaceSource::Random { codim: 0, seed };
        return Ok(full);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = dim - c;
    loop {
        let basis: Vec<Vec<F::Elem>> = (0..k).map(|_| (0..dim).map(|_| f.sample(&mut rng)).collect()).collect();
        if independent_rank(f, &basis, dim) == k {
            return Ok(SubspaceSpec { source: SubspaceSource::Random { codim: c, seed }, basis, ambient_dim: dim, codim: c });
        }
    }
}

/// Increasing `k`-tuples from `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, k: i64) -> Vec<Vec<usize>> {
    if k < 0 || k as usize > n {
        return Vec::new();
    }
    let k = k as usize;
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Size of `B_p(l) ⊗ ∧^k V`.
pub fn term_dim<F: Field>(ring: &JacobianRing<F>, v: &SubspaceSpec<F>, p: i64, l: i64, k: i64) -> usize {
    let wedges = binomial(v.dim() as i64, k) as usize;
    if wedges == 0 {
        return 0;
    }
    wedges * ring.dim(GradedIndex::new(p, l))
}

/// Matrix of `B_p(l) ⊗ ∧^{q+1} V -> B_{p+1}(l) ⊗ ∧^q V`; rows index the target, columns the source.
pub fn koszul_differential<F: Field>(ring: &JacobianRing<F>, v: &SubspaceSpec<F>, p: i64, l: i64, q: i64) -> ExactMatrix<F> {
    let f = ring.field();
    let (src_idx, tgt_idx) = (GradedIndex::new(p, l), GradedIndex::new(p + 1, l));
    let nsrc = term_dim(ring, v, p, l, q + 1);
    let ntgt = term_dim(ring, v, p + 1, l, q);
    if nsrc == 0 || ntgt == 0 {
        return ExactMatrix::zeros(f.clone(), ntgt, nsrc);
    }
    let (ds, dt) = (ring.dim(src_idx), ring.dim(tgt_idx));
    let src_wedges = wedge_basis(v.dim(), q + 1);
    let tgt_index: BTreeMap<Vec<usize>, usize> = wedge_basis(v.dim(), q).into_iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mult: Vec<Vec<Vec<F::Elem>>> = v.elements().iter().map(|e| ring.multiplication_rows(src_idx, e)).collect();
    // Images of source basis vectors, later transposed into target rows.
    let mut images: Vec<SparseVec<F::Elem>> = Vec::with_capacity(nsrc);
    for wedge in &src_wedges {
        for b in 0..ds {
            let mut img = Vec::new();
            for (i, &vi) in wedge.iter().enumerate() {
                let mut rest = wedge.clone();
                rest.remove(i);
                let offset = tgt_index[&rest] * dt;
                for (j, x) in mult[vi][b].iter().enumerate() {
                    if !f.is_zero(x) {
                        img.push((offset + j, if i % 2 == 0 { x.clone() } else { f.neg(x) }));
                    }
                }
            }
            images.push(img);
        }
    }
    ExactMatrix::from_rows(f.clone(), ntgt, images).expect("columns in range").transpose()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KoszulCase {
    I,
    II,
    III,
}

impl fmt::Display for KoszulCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KoszulCase::I => "i",
            KoszulCase::II => "ii",
            KoszulCase::III => "iii",
        })
    }
}

/// Degree data entering the exactness conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KoszulNumerics {
    pub n: i64,
    pub r: i64,
    pub s: i64,
    pub d_sum: i64,
    pub delta_min: i64,
    pub d_max: i64,
    pub e_max: i64,
}

/// Cases that apply, plus whether (iii) holds with `l` on its lower end `d - n - 1`.
pub fn koszul_conditions(k: &KoszulNumerics, p: i64, l: i64, q: i64, c: i64) -> (Vec<KoszulCase>, bool) {
    let mut cases = Vec::new();
    if p < 0 {
        return (cases, false);
    }
    let delta = k.delta_min;
    if q == 0 && delta * p + l >= c {
        cases.push(KoszulCase::I);
    }
    if q == 1 && delta * p + l >= 1 + c && delta * (p + 1) + l >= k.d_max + c {
        cases.push(KoszulCase::II);
    }
    let low = k.d_sum - k.n - 1;
    let case_iii = q >= 0
        && delta * (k.r + p) + l >= k.d_sum + q + c
        && k.d_sum + k.e_max - k.n - 1 > l
        && l >= low
        && (k.r + k.s <= k.n + 2 || p <= k.n - k.r - q.div_euclid(2));
    if case_iii {
        cases.push(KoszulCase::III);
    }
    (cases, case_iii && l == low)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulReport {
    pub p: i64,
    pub l: i64,
    pub q: i64,
    pub codim: usize,
    /// Dimensions of the three terms, left to right.
    pub dims: [usize; 3],
    pub rank_in: usize,
    pub rank_out: usize,
    pub middle_homology: usize,
    pub dd_zero: bool,
    pub cases: Vec<KoszulCase>,
    /// Case (iii) applies with `l = d - n - 1` exactly.
    pub boundary: bool,
}

impl KoszulReport {
    pub fn condition_case(&self) -> Option<KoszulCase> {
        self.cases.first().copied()
    }

    /// False only when a case applies and the homology is nonzero, or `d∘d ≠ 0`.
    pub fn consistent(&self) -> bool {
        self.dd_zero && (self.cases.is_empty() || self.middle_homology == 0)
    }
}

pub fn numerics<F: Field>(ring: &JacobianRing<F>) -> KoszulNumerics {
    let cfg = ring.config();
    KoszulNumerics {
        n: cfg.n() as i64,
        r: cfg.r() as i64,
        s: cfg.s() as i64,
        d_sum: cfg.d_sum(),
        delta_min: cfg.delta_min(),
        d_max: cfg.d_max(),
        e_max: cfg.e_max(),
    }
}

/// Homology at `B_{p+1}(l) ⊗ ∧^q V` and the applicable conditions.
pub fn check_exactness<F: Field>(ring: &JacobianRing<F>, v: &SubspaceSpec<F>, p: i64, l: i64, q: i64) -> Result<KoszulReport> {
    if ring.config().s() == 0 {
        return Err(Error::Precondition("exactness is only claimed for s >= 1".into()));
    }
    if q < 0 {
        return Err(Error::Precondition(format!("q = {q} is negative")));
    }
    let d_in = koszul_differential(ring, v, p, l, q);
    let d_out = koszul_differential(ring, v, p + 1, l, q - 1);
    let dd_zero = d_out.mul(&d_in).expect("composable").is_zero();
    let rank_in = echelon(&d_in).rank;
    let rank_out = echelon(&d_out).rank;
    let dims = [d_in.ncols(), d_in.nrows(), d_out.nrows()];
    let (cases, boundary) = koszul_conditions(&numerics(ring), p, l, q, v.codim as i64);
    Ok(KoszulReport {
        p,
        l,
        q,
        codim: v.codim,
        dims,
        rank_in,
        rank_out,
        middle_homology: dims[1] - rank_in - rank_out,
        dd_zero,
        cases,
        boundary,
    })
}
