//! The Jacobian ring `B = A / J` one piece at a time.
//!
//! A [`QuotientPiece`] stores the reduced row-echelon form of the ideal span
//! inside `A_q(l)`. Its standard monomials (the non-pivot columns) form the
//! basis of `B_q(l)`, and because the rows are fully reduced, the normal form
//! of a single ambient column is read off directly from its pivot row.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{ideal_piece_rows, jacobian_generators, AmbientPiece, BigradedTerm, Configuration, GradedIndex, JacobianGenerators};
use crate::linalg::{sparse_get, ExactMatrix, SparseVec};

/// Standard-monomial basis of `B_q(l)` together with the data needed to reduce into it.
#[derive(Debug, Clone)]
pub struct QuotientPiece<F: Field> {
    pub idx: GradedIndex,
    pub ambient: AmbientPiece,
    field: F,
    rref: Vec<SparseVec<F::Elem>>,
    pivot_row: Vec<Option<usize>>,
    standard: Vec<usize>,
    std_pos: Vec<Option<usize>>,
}

impl<F: Field> QuotientPiece<F> {
    fn build(cfg: &Configuration<F>, gens: &JacobianGenerators<F>, idx: GradedIndex) -> Self {
        let field = cfg.field().clone();
        let ambient = AmbientPiece::new(cfg, idx);
        let ncols = ambient.dim();
        let rows = if ncols == 0 { Vec::new() } else { ideal_piece_rows(cfg, gens, &ambient) };
        let rref = field.echelonize(rows, ncols);
        let mut pivot_row = vec![None; ncols];
        for (i, row) in rref.iter().enumerate() {
            pivot_row[row[0].0] = Some(i);
        }
        let standard: Vec<usize> = (0..ncols).filter(|&c| pivot_row[c].is_none()).collect();
        let mut std_pos = vec![None; ncols];
        for (i, &c) in standard.iter().enumerate() {
            std_pos[c] = Some(i);
        }
        QuotientPiece { idx, ambient, field, rref, pivot_row, standard, std_pos }
    }

    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn ideal_rank(&self) -> usize {
        self.rref.len()
    }

    /// Ambient column indices of the standard monomials.
    pub fn standard_columns(&self) -> &[usize] {
        &self.standard
    }

    pub fn standard_monomials(&self) -> impl Iterator<Item = &BigradedTerm> + '_ {
        self.standard.iter().map(|&c| &self.ambient.terms[c])
    }

    /// Reduced rows spanning `J ∩ A_q(l)`.
    pub fn ideal_rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rref
    }

    /// Adds `coeff` times the normal form of ambient column `col` to `acc`.
    pub fn accumulate_column(&self, acc: &mut [F::Elem], col: usize, coeff: &F::Elem) {
        let f = &self.field;
        if let Some(pos) = self.std_pos[col] {
            acc[pos] = f.add(&acc[pos], coeff);
        } else if let Some(r) = self.pivot_row[col] {
            // column = pivot, so e_col = row - (rest of row); the rest sits on standard columns.
            let minus = f.neg(coeff);
            for (c, v) in &self.rref[r][1..] {
                let pos = self.std_pos[*c].expect("reduced rows vanish on other pivots");
                acc[pos] = f.mul_add(&acc[pos], &minus, v);
            }
        }
    }

    /// Normal form of one ambient basis term.
    pub fn column_normal_form(&self, col: usize) -> Vec<F::Elem> {
        let mut acc = vec![self.field.zero(); self.dim()];
        self.accumulate_column(&mut acc, col, &self.field.one());
        acc
    }

    /// Normal form of a sparse ambient vector.
    pub fn reduce_sparse(&self, v: &[(usize, F::Elem)]) -> Vec<F::Elem> {
        let mut acc = vec![self.field.zero(); self.dim()];
        for (c, x) in v {
            self.accumulate_column(&mut acc, *c, x);
        }
        acc
    }

    /// Normal form of a dense ambient vector, as an element of `B_q(l)`.
    pub fn normal_form(&self, v: &[F::Elem]) -> Result<BElement<F>> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: v.len() });
        }
        let mut acc = vec![self.field.zero(); self.dim()];
        for (c, x) in v.iter().enumerate() {
            if !self.field.is_zero(x) {
                self.accumulate_column(&mut acc, c, x);
            }
        }
        Ok(BElement { idx: self.idx, coords: acc })
    }

    /// Ambient representative supported on the standard monomials.
    pub fn lift(&self, x: &BElement<F>) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.ambient_dim()];
        for (&c, a) in self.standard.iter().zip(&x.coords) {
            v[c] = a.clone();
        }
        v
    }

    /// The `i`-th standard monomial as an element of `B`.
    pub fn basis_element(&self, i: usize) -> BElement<F> {
        let mut coords = vec![self.field.zero(); self.dim()];
        coords[i] = self.field.one();
        BElement { idx: self.idx, coords }
    }

    /// Whether the dense ambient vector lies in the ideal.
    pub fn in_ideal(&self, v: &[F::Elem]) -> Result<bool> {
        Ok(self.normal_form(v)?.is_zero(&self.field))
    }
}

/// An element of `B_q(l)` in standard-monomial coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BElement<F: Field> {
    pub idx: GradedIndex,
    pub coords: Vec<F::Elem>,
}

impl<F: Field> BElement<F> {
    pub fn is_zero(&self, field: &F) -> bool {
        self.coords.iter().all(|x| field.is_zero(x))
    }
}

/// Jacobian ring of a configuration with a per-session memo of computed pieces.
///
/// The memo uses interior mutability and is not `Sync`; share a ring within
/// one thread, or build one ring per thread.
#[derive(Debug)]
pub struct JacobianRing<F: Field> {
    cfg: Configuration<F>,
    gens: JacobianGenerators<F>,
    memo: RefCell<BTreeMap<GradedIndex, Rc<QuotientPiece<F>>>>,
}

impl<F: Field> JacobianRing<F> {
    pub fn new(cfg: Configuration<F>) -> Self {
        let gens = jacobian_generators(&cfg);
        JacobianRing { cfg, gens, memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn config(&self) -> &Configuration<F> {
        &self.cfg
    }

    pub fn field(&self) -> &F {
        self.cfg.field()
    }

    pub fn generators(&self) -> &JacobianGenerators<F> {
        &self.gens
    }

    pub fn piece(&self, idx: GradedIndex) -> Rc<QuotientPiece<F>> {
        if let Some(p) = self.memo.borrow().get(&idx) {
            return p.clone();
        }
        let p = Rc::new(QuotientPiece::build(&self.cfg, &self.gens, idx));
        self.memo.borrow_mut().insert(idx, p.clone());
        p
    }

    pub fn dim(&self, idx: GradedIndex) -> usize {
        self.piece(idx).dim()
    }

    pub fn normal_form(&self, idx: GradedIndex, v: &[F::Elem]) -> Result<BElement<F>> {
        self.piece(idx).normal_form(v)
    }

    /// Product in `B`, computed on standard-monomial representatives.
    pub fn multiply(&self, x: &BElement<F>, y: &BElement<F>) -> Result<BElement<F>> {
        let f = self.field();
        let (px, py) = (self.piece(x.idx), self.piece(y.idx));
        for (p, e) in [(&px, x), (&py, y)] {
            if e.coords.len() != p.dim() {
                return Err(Error::DimensionMismatch { expected: p.dim(), found: e.coords.len() });
            }
        }
        let target = self.piece(x.idx + y.idx);
        let mut acc = vec![f.zero(); target.dim()];
        for (tx, a) in px.standard_monomials().zip(&x.coords) {
            if f.is_zero(a) {
                continue;
            }
            for (ty, b) in py.standard_monomials().zip(&y.coords) {
                if f.is_zero(b) {
                    continue;
                }
                let col = target.ambient.column(&tx.mul(ty)).expect("product lies in the target piece");
                target.accumulate_column(&mut acc, col, &f.mul(a, b));
            }
        }
        Ok(BElement { idx: target.idx, coords: acc })
    }

    /// Multiplication by `factor` from `B_src` into `B_{src + factor.idx}`.
    /// Row `i` holds the image of the `i`-th standard monomial of the source.
    pub fn multiplication_rows(&self, src: GradedIndex, factor: &BElement<F>) -> Vec<Vec<F::Elem>> {
        let f = self.field();
        let (ps, pf) = (self.piece(src), self.piece(factor.idx));
        let target = self.piece(src + factor.idx);
        let support: Vec<(&BigradedTerm, &F::Elem)> =
            pf.standard_monomials().zip(&factor.coords).filter(|(_, c)| !f.is_zero(c)).collect();
        ps.standard_monomials()
            .map(|t| {
                let mut acc = vec![f.zero(); target.dim()];
                for (u, c) in &support {
                    let col = target.ambient.column(&t.mul(u)).expect("product lies in the target piece");
                    target.accumulate_column(&mut acc, col, c);
                }
                acc
            })
            .collect()
    }

    /// Matrix of multiplication by `factor`, rows indexed by the source basis.
    pub fn multiplication_matrix(&self, src: GradedIndex, factor: &BElement<F>) -> ExactMatrix<F> {
        let ncols = self.dim(src + factor.idx);
        let rows = self.multiplication_rows(src, factor);
        ExactMatrix::from_dense(self.field().clone(), ncols, &rows).expect("rows have target length")
    }
}

/// Standard-monomial basis of `B_q(l)` (one-shot; prefer [`JacobianRing::piece`]).
pub fn basis_b<F: Field>(cfg: &Configuration<F>, idx: GradedIndex) -> QuotientPiece<F> {
    QuotientPiece::build(cfg, &jacobian_generators(cfg), idx)
}

/// Value of the coordinate `pos` after reducing ambient column `col` (zero if it vanishes).
pub(crate) fn column_coordinate<F: Field>(piece: &QuotientPiece<F>, col: usize, pos: usize) -> F::Elem {
    let f = &piece.field;
    if piece.std_pos[col] == Some(pos) {
        return f.one();
    }
    match piece.pivot_row[col] {
        Some(r) => sparse_get(&piece.rref[r], piece.standard[pos]).map(|v| f.neg(v)).unwrap_or_else(|| f.zero()),
        None => f.zero(),
    }
}
