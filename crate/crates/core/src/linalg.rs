//! Exact sparse linear algebra over a [`Field`].
//!
//! Rows are stored sparse (sorted `(column, value)` pairs, no zeros). Elimination
//! keeps a dense accumulator and stores each new pivot row either sparse or, once
//! it is more than half full, dense from its pivot onward.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::Field;

/// Sorted `(column, nonzero value)` pairs.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Sparse matrix over an exact field. Invariants: no stored zeros, every row
/// sorted by column, all indices in range.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> ExactMatrix<F> {
    /// The zero matrix.
    pub fn zeros(field: F, nrows: usize, ncols: usize) -> Self {
        ExactMatrix { field, nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Builds a matrix from possibly unsorted rows; duplicates are summed and zeros dropped.
    pub fn from_rows(field: F, ncols: usize, rows: Vec<SparseVec<F::Elem>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(rows.len());
        for row in rows {
            clean.push(normalize_sparse(&field, row, ncols)?);
        }
        Ok(ExactMatrix { field, nrows: clean.len(), ncols, rows: clean })
    }

    pub fn from_dense(field: F, ncols: usize, rows: &[Vec<F::Elem>]) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch { expected: ncols, found: row.len() });
            }
            out.push(dense_to_sparse(&field, row));
        }
        Ok(ExactMatrix { field, nrows: out.len(), ncols, rows: out })
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let rows = (0..n).map(|i| vec![(i, one.clone())]).collect();
        ExactMatrix { field, nrows: n, ncols: n, rows }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }
    pub fn into_rows(self) -> Vec<SparseVec<F::Elem>> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &SparseVec<F::Elem> {
        &self.rows[i]
    }

    /// Appends a row given in sparse form.
    pub fn push_row(&mut self, row: SparseVec<F::Elem>) -> Result<()> {
        let row = normalize_sparse(&self.field, row, self.ncols)?;
        self.rows.push(row);
        self.nrows += 1;
        Ok(())
    }

    /// Entry `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> F::Elem {
        sparse_get(&self.rows[i], j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// All stored entries as `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![self.field.zero(); self.ncols];
                for (j, v) in row {
                    d[*j] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                cols[*j].push((i, v.clone()));
            }
        }
        ExactMatrix { field: self.field.clone(), nrows: self.ncols, ncols: self.nrows, rows: cols }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &ExactMatrix<F>) -> Result<ExactMatrix<F>> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: other.nrows });
        }
        let f = &self.field;
        let mut acc = vec![f.zero(); other.ncols];
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            for (k, a) in row {
                for (j, b) in &other.rows[*k] {
                    acc[*j] = f.mul_add(&acc[*j], a, b);
                }
            }
            rows.push(drain_dense(f, &mut acc, 0));
        }
        Ok(ExactMatrix { field: f.clone(), nrows: self.nrows, ncols: other.ncols, rows })
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: v.len() });
        }
        let f = &self.field;
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(f.zero(), |s, (j, a)| f.mul_add(&s, a, &v[*j])))
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(mut self, other: ExactMatrix<F>) -> Result<ExactMatrix<F>> {
        if self.ncols != other.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: other.ncols });
        }
        self.nrows += other.nrows;
        self.rows.extend(other.rows);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.field.echelonize(self.rows.clone(), self.ncols).len()
    }
}

/// Reduced row-echelon data of a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EchelonResult<E> {
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
    pub reduced_rows: Vec<SparseVec<E>>,
}

impl<E: Clone> EchelonResult<E> {
    /// `pivot_row[c]` = index of the reduced row whose pivot is `c`.
    pub fn pivot_rows(&self, ncols: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; ncols];
        for (i, &c) in self.pivot_columns.iter().enumerate() {
            out[c] = Some(i);
        }
        out
    }
}

/// Reduced row-echelon form. The result is canonical for the row space, so the
/// pivot set and rows do not depend on row order.
pub fn echelon<F: Field>(m: &ExactMatrix<F>) -> EchelonResult<F::Elem> {
    let reduced_rows = m.field.echelonize(m.rows.clone(), m.ncols);
    let pivot_columns: Vec<usize> = reduced_rows.iter().map(|r| r[0].0).collect();
    EchelonResult { rank: pivot_columns.len(), pivot_columns, reduced_rows }
}

/// Basis of the right null space, one vector per non-pivot column.
pub fn kernel_basis<F: Field>(m: &ExactMatrix<F>) -> Vec<Vec<F::Elem>> {
    let f = &m.field;
    let ech = echelon(m);
    let pivot_row = ech.pivot_rows(m.ncols);
    (0..m.ncols)
        .filter(|c| pivot_row[*c].is_none())
        .map(|free| {
            let mut v = vec![f.zero(); m.ncols];
            v[free] = f.one();
            for (row, &pc) in ech.reduced_rows.iter().zip(&ech.pivot_columns) {
                if let Some(x) = sparse_get(row, free) {
                    v[pc] = f.neg(x);
                }
            }
            v
        })
        .collect()
}

/// Outcome of [`reduce_against`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction<E> {
    /// `target` minus a combination of the span, zero on every pivot column.
    pub residue: Vec<E>,
    /// Coefficients expressing `target` in the span, present iff the residue is zero.
    pub coefficients: Option<Vec<E>>,
}

/// Normal form of `target` modulo `span(span)`.
pub fn reduce_against<F: Field>(field: &F, span: &[Vec<F::Elem>], target: &[F::Elem]) -> Result<Reduction<F::Elem>> {
    let len = target.len();
    for v in span {
        if v.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: v.len() });
        }
    }
    let rows: Vec<_> = span.iter().map(|v| dense_to_sparse(field, v)).collect();
    let reduced = field.echelonize(rows, len);
    let mut residue = target.to_vec();
    for row in &reduced {
        let c = row[0].0;
        if field.is_zero(&residue[c]) {
            continue;
        }
        let factor = field.neg(&residue[c]);
        for (j, v) in row {
            residue[*j] = field.mul_add(&residue[*j], &factor, v);
        }
    }
    if residue.iter().any(|x| !field.is_zero(x)) {
        return Ok(Reduction { residue, coefficients: None });
    }
    // Solve sum_i c_i span_i = target: columns are the span vectors, augmented by target.
    let k = span.len();
    let system: Vec<SparseVec<F::Elem>> = (0..len)
        .map(|coord| {
            let mut row: SparseVec<F::Elem> = span
                .iter()
                .enumerate()
                .filter(|(_, v)| !field.is_zero(&v[coord]))
                .map(|(i, v)| (i, v[coord].clone()))
                .collect();
            if !field.is_zero(&target[coord]) {
                row.push((k, target[coord].clone()));
            }
            row
        })
        .collect();
    let solved = field.echelonize(system, k + 1);
    let mut coefficients = vec![field.zero(); k];
    for row in &solved {
        let pc = row[0].0;
        debug_assert!(pc < k, "consistent system has no pivot in the augmented column");
        if let Some(x) = sparse_get(row, k) {
            coefficients[pc] = x.clone();
        }
    }
    Ok(Reduction { residue, coefficients: Some(coefficients) })
}

pub(crate) fn sparse_get<E>(row: &[(usize, E)], col: usize) -> Option<&E> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

pub(crate) fn dense_to_sparse<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

fn normalize_sparse<F: Field>(field: &F, mut row: SparseVec<F::Elem>, ncols: usize) -> Result<SparseVec<F::Elem>> {
    if let Some((c, _)) = row.iter().find(|(c, _)| *c >= ncols) {
        return Err(Error::IndexOutOfRange { index: *c, bound: ncols });
    }
    if row.windows(2).all(|w| w[0].0 < w[1].0) {
        row.retain(|(_, v)| !field.is_zero(v));
        return Ok(row);
    }
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = field.add(lv, &v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    Ok(out)
}

/// Moves the nonzero entries of `acc[from..]` into a sparse row, leaving zeros behind.
fn drain_dense<F: Field>(field: &F, acc: &mut [F::Elem], from: usize) -> SparseVec<F::Elem> {
    let mut out = Vec::new();
    for (j, slot) in acc.iter_mut().enumerate().skip(from) {
        if !field.is_zero(slot) {
            out.push((j, core::mem::replace(slot, field.zero())));
        }
    }
    out
}

enum StoredRow<E> {
    Sparse(SparseVec<E>),
    /// Values for columns `start..`.
    Dense { start: usize, vals: Vec<E> },
}

impl<E: Clone> StoredRow<E> {
    fn pack<F: Field<Elem = E>>(field: &F, entries: SparseVec<E>, ncols: usize) -> Self {
        let start = entries[0].0;
        if 2 * entries.len() > ncols - start {
            let mut vals = vec![field.zero(); ncols - start];
            for (j, v) in entries {
                vals[j - start] = v;
            }
            StoredRow::Dense { start, vals }
        } else {
            StoredRow::Sparse(entries)
        }
    }

    /// `acc += factor * self`.
    fn axpy<F: Field<Elem = E>>(&self, field: &F, acc: &mut [E], factor: &E) {
        match self {
            StoredRow::Sparse(entries) => {
                for (j, v) in entries {
                    acc[*j] = field.mul_add(&acc[*j], factor, v);
                }
            }
            StoredRow::Dense { start, vals } => {
                for (slot, v) in acc[*start..].iter_mut().zip(vals) {
                    if !field.is_zero(v) {
                        *slot = field.mul_add(slot, factor, v);
                    }
                }
            }
        }
    }

    fn load<F: Field<Elem = E>>(&self, field: &F, acc: &mut [E]) {
        match self {
            StoredRow::Sparse(entries) => {
                for (j, v) in entries {
                    acc[*j] = v.clone();
                }
            }
            StoredRow::Dense { start, vals } => {
                for (slot, v) in acc[*start..].iter_mut().zip(vals) {
                    if !field.is_zero(v) {
                        *slot = v.clone();
                    }
                }
            }
        }
    }
}

/// Sorts rows by leading column, sparsest first. A row whose leading column
/// has no pivot yet then enters the echelon basis without any reduction.
fn elimination_order<T>(mut rows: Vec<SparseVec<T>>) -> Vec<SparseVec<T>> {
    rows.sort_by_cached_key(|r| (r.iter().map(|(c, _)| *c).min().unwrap_or(usize::MAX), r.len()));
    rows
}

/// Generic incremental Gauss-Jordan elimination. Forward pass builds a row
/// echelon basis one input row at a time; a backward pass then clears every
/// pivot column above its pivot.
pub(crate) fn gauss_jordan<F: Field>(field: &F, rows: Vec<SparseVec<F::Elem>>, ncols: usize) -> Vec<SparseVec<F::Elem>> {
    let rows = elimination_order(rows);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut stored: Vec<(usize, StoredRow<F::Elem>)> = Vec::new();
    let mut acc = vec![field.zero(); ncols];

    for row in rows {
        if stored.len() == ncols {
            break;
        }
        let Some(first) = row.iter().map(|(c, _)| *c).min() else { continue };
        for (j, v) in row {
            acc[j] = field.add(&acc[j], &v);
        }
        let mut lead = None;
        for c in first..ncols {
            if field.is_zero(&acc[c]) {
                continue;
            }
            match pivot_of_col[c] {
                Some(i) => {
                    let factor = field.neg(&acc[c]);
                    stored[i].1.axpy(field, &mut acc, &factor);
                    debug_assert!(field.is_zero(&acc[c]));
                }
                None => {
                    lead = Some(c);
                    break;
                }
            }
        }
        let Some(lead) = lead else { continue };
        let inv = field.inv(&acc[lead]);
        let mut entries = drain_dense(field, &mut acc, lead);
        for (_, v) in entries.iter_mut() {
            *v = field.mul(v, &inv);
        }
        pivot_of_col[lead] = Some(stored.len());
        stored.push((lead, StoredRow::pack(field, entries, ncols)));
    }

    if stored.len() == ncols {
        return (0..ncols).map(|c| vec![(c, field.one())]).collect();
    }
    // Backward pass, highest pivot first: each row only needs rows already reduced.
    let mut order: Vec<usize> = (0..stored.len()).collect();
    order.sort_by_key(|&i| core::cmp::Reverse(stored[i].0));
    let mut reduced: Vec<Option<SparseVec<F::Elem>>> = (0..stored.len()).map(|_| None).collect();
    let mut reduced_packed: Vec<Option<StoredRow<F::Elem>>> = (0..stored.len()).map(|_| None).collect();
    for i in order {
        let lead = stored[i].0;
        stored[i].1.load(field, &mut acc);
        for c in lead + 1..ncols {
            if field.is_zero(&acc[c]) {
                continue;
            }
            if let Some(j) = pivot_of_col[c] {
                let factor = field.neg(&acc[c]);
                reduced_packed[j].as_ref().expect("later pivots reduced first").axpy(field, &mut acc, &factor);
            }
        }
        let entries = drain_dense(field, &mut acc, lead);
        reduced_packed[i] = Some(StoredRow::pack(field, entries.clone(), ncols));
        reduced[i] = Some(entries);
    }
    let mut out: Vec<SparseVec<F::Elem>> = reduced.into_iter().map(|r| r.expect("all rows reduced")).collect();
    out.sort_by_key(|r| r[0].0);
    out
}

enum PrimeRow {
    Sparse(Vec<(usize, u64)>),
    Dense { start: usize, vals: Vec<u64> },
}

impl PrimeRow {
    fn pack(entries: Vec<(usize, u64)>, ncols: usize) -> Self {
        let start = entries[0].0;
        if 2 * entries.len() > ncols - start {
            let mut vals = vec![0; ncols - start];
            for (j, v) in entries {
                vals[j - start] = v;
            }
            PrimeRow::Dense { start, vals }
        } else {
            PrimeRow::Sparse(entries)
        }
    }

    /// `acc += factor * self` without reduction.
    fn axpy_lazy(&self, acc: &mut [u64], factor: u64) {
        match self {
            PrimeRow::Sparse(entries) => {
                for &(j, v) in entries {
                    acc[j] += factor * v;
                }
            }
            PrimeRow::Dense { start, vals } => {
                for (slot, &v) in acc[*start..].iter_mut().zip(vals) {
                    *slot += factor * v;
                }
            }
        }
    }

    fn to_sparse(&self) -> Vec<(usize, u64)> {
        match self {
            PrimeRow::Sparse(e) => e.clone(),
            PrimeRow::Dense { start, vals } => {
                vals.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| (start + i, *v)).collect()
            }
        }
    }
}

/// Dense accumulator over `F_p` (`p < 2^32`) that postpones reductions until
/// another product could overflow a `u64`.
struct LazyAcc {
    p: u64,
    vals: Vec<u64>,
    budget: u64,
    pending: u64,
}

impl LazyAcc {
    fn new(p: u64, ncols: usize) -> Self {
        let sq = (p - 1) * (p - 1);
        LazyAcc { p, vals: vec![0; ncols], budget: (u64::MAX - p) / sq.max(1), pending: 0 }
    }

    fn read(&mut self, c: usize) -> u64 {
        let v = self.vals[c] % self.p;
        self.vals[c] = v;
        v
    }

    fn axpy(&mut self, row: &PrimeRow, factor: u64, from: usize) {
        if self.pending == self.budget {
            for v in self.vals[from..].iter_mut() {
                *v %= self.p;
            }
            self.pending = 0;
        }
        row.axpy_lazy(&mut self.vals, factor);
        self.pending += 1;
    }

    /// Reduced entries from `from` on, scaled by `scale`; the accumulator is left zeroed.
    fn drain(&mut self, from: usize, scale: u64) -> Vec<(usize, u64)> {
        let p = self.p;
        let mut out = Vec::new();
        for (j, slot) in self.vals.iter_mut().enumerate().skip(from) {
            let v = *slot % p;
            *slot = 0;
            if v != 0 {
                out.push((j, v * scale % p));
            }
        }
        self.pending = 0;
        out
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

/// Gauss-Jordan elimination over `F_p` for `p < 2^32`, same output contract as
/// [`gauss_jordan`] but with machine-word arithmetic and lazy reduction.
pub(crate) fn gauss_jordan_word(p: u64, rows: Vec<SparseVec<u64>>, ncols: usize) -> Vec<SparseVec<u64>> {
    assert!(p < 1 << 32);
    let rows = elimination_order(rows);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut stored: Vec<(usize, PrimeRow)> = Vec::new();
    let mut acc = LazyAcc::new(p, ncols);

    for row in rows {
        if stored.len() == ncols {
            break;
        }
        let Some(first) = row.iter().map(|(c, _)| *c).min() else { continue };
        for (j, v) in row {
            acc.vals[j] += v;
        }
        let mut lead = None;
        for c in first..ncols {
            let v = acc.read(c);
            if v == 0 {
                continue;
            }
            match pivot_of_col[c] {
                Some(i) => acc.axpy(&stored[i].1, p - v, c),
                None => {
                    lead = Some((c, v));
                    break;
                }
            }
        }
        let Some((lead, v)) = lead else {
            acc.drain(first, 1);
            continue;
        };
        let entries = acc.drain(lead, inv_mod(v, p));
        pivot_of_col[lead] = Some(stored.len());
        stored.push((lead, PrimeRow::pack(entries, ncols)));
    }

    if stored.len() == ncols {
        return (0..ncols).map(|c| vec![(c, 1)]).collect();
    }
    let mut order: Vec<usize> = (0..stored.len()).collect();
    order.sort_by_key(|&i| core::cmp::Reverse(stored[i].0));
    let mut reduced: Vec<Option<PrimeRow>> = (0..stored.len()).map(|_| None).collect();
    for i in order {
        let lead = stored[i].0;
        stored[i].1.axpy_lazy(&mut acc.vals, 1);
        acc.pending = 1;
        for c in lead + 1..ncols {
            let Some(j) = pivot_of_col[c] else { continue };
            let v = acc.read(c);
            if v != 0 {
                acc.axpy(reduced[j].as_ref().expect("later pivots reduced first"), p - v, c);
            }
        }
        reduced[i] = Some(PrimeRow::pack(acc.drain(lead, 1), ncols));
    }
    let mut out: Vec<SparseVec<u64>> = reduced.into_iter().map(|r| r.expect("all rows reduced").to_sparse()).collect();
    out.sort_by_key(|r| r[0].0);
    out
}

/// Makes an integer row primitive with a positive leading entry.
fn make_primitive(row: &mut [(usize, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `acc = (p/g) * acc - (a/g) * pivot_row` on columns `from..`, with `a = acc[col]`,
/// `p` the pivot row's leading entry and `g = gcd(a, p)`.
fn fraction_free_step(acc: &mut [BigInt], from: usize, col: usize, pivot_row: &[(usize, BigInt)]) {
    let p = &pivot_row.iter().find(|(c, _)| *c == col).expect("pivot entry present").1;
    let a = acc[col].clone();
    let g = a.gcd(p);
    let scale = p / &g;
    let factor = &a / &g;
    if !scale.is_one() {
        for v in acc[from..].iter_mut() {
            if !v.is_zero() {
                *v *= &scale;
            }
        }
    }
    for (j, v) in pivot_row {
        acc[*j] -= &factor * v;
    }
}

fn drain_integer(acc: &mut [BigInt], from: usize) -> Vec<(usize, BigInt)> {
    let mut out = Vec::new();
    for (j, slot) in acc.iter_mut().enumerate().skip(from) {
        if !slot.is_zero() {
            out.push((j, core::mem::take(slot)));
        }
    }
    out
}

/// Reduced row-echelon form over the rationals by fraction-free elimination:
/// rows are cleared of denominators and kept primitive, and rationals only
/// appear when the final rows are divided by their pivots.
pub(crate) fn fraction_free_rref(rows: Vec<SparseVec<BigRational>>, ncols: usize) -> Vec<SparseVec<BigRational>> {
    let rows = elimination_order(rows);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut stored: Vec<(usize, Vec<(usize, BigInt)>)> = Vec::new();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); ncols];

    for row in rows {
        if stored.len() == ncols {
            break;
        }
        let row: Vec<_> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let Some(first) = row.iter().map(|(c, _)| *c).min() else { continue };
        let denom = row.iter().fold(BigInt::one(), |l, (_, v)| l.lcm(v.denom()));
        for (j, v) in &row {
            acc[*j] += (v * BigRational::from_integer(denom.clone())).to_integer();
        }
        let mut lead = None;
        for c in first..ncols {
            if acc[c].is_zero() {
                continue;
            }
            match pivot_of_col[c] {
                Some(i) => fraction_free_step(&mut acc, c, c, &stored[i].1),
                None => {
                    lead = Some(c);
                    break;
                }
            }
        }
        let Some(lead) = lead else { continue };
        let mut entries = drain_integer(&mut acc, lead);
        make_primitive(&mut entries);
        pivot_of_col[lead] = Some(stored.len());
        stored.push((lead, entries));
    }

    if stored.len() == ncols {
        return (0..ncols).map(|c| vec![(c, BigRational::one())]).collect();
    }
    let mut order: Vec<usize> = (0..stored.len()).collect();
    order.sort_by_key(|&i| core::cmp::Reverse(stored[i].0));
    let mut reduced: Vec<Option<Vec<(usize, BigInt)>>> = (0..stored.len()).map(|_| None).collect();
    for i in order {
        let lead = stored[i].0;
        for (j, v) in &stored[i].1 {
            acc[*j] = v.clone();
        }
        for c in lead + 1..ncols {
            if acc[c].is_zero() {
                continue;
            }
            if let Some(j) = pivot_of_col[c] {
                fraction_free_step(&mut acc, lead, c, reduced[j].as_ref().expect("later pivots reduced first"));
            }
        }
        let mut entries = drain_integer(&mut acc, lead);
        make_primitive(&mut entries);
        reduced[i] = Some(entries);
    }

    let mut out: Vec<SparseVec<BigRational>> = reduced
        .into_iter()
        .map(|r| {
            let r = r.expect("all rows reduced");
            let lead = r[0].1.clone();
            r.into_iter().map(|(j, v)| (j, BigRational::new(v, lead.clone()))).collect()
        })
        .collect();
    out.sort_by_key(|r: &SparseVec<BigRational>| r[0].0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn q(v: i64) -> BigRational {
        Rationals.from_i64(v)
    }

    fn random_dense(f: &PrimeField, rng: &mut ChaCha8Rng, r: usize, c: usize) -> Vec<Vec<u64>> {
        (0..r).map(|_| (0..c).map(|_| f.sample(rng)).collect()).collect()
    }

    /// Determinant by cofactor expansion; independent of the elimination code.
    fn det_by_minors(f: &PrimeField, m: &[Vec<u64>]) -> u64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut total = 0;
        for j in 0..n {
            let minor: Vec<Vec<u64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
                .collect();
            let term = f.mul(&m[0][j], &det_by_minors(f, &minor));
            total = if j % 2 == 0 { f.add(&total, &term) } else { f.sub(&total, &term) };
        }
        total
    }

    /// Rank as the largest nonvanishing minor size.
    fn rank_by_minors(f: &PrimeField, m: &[Vec<u64>]) -> usize {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![Vec::new()];
            }
            if n < k {
                return Vec::new();
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let (r, c) = (m.len(), m[0].len());
        for k in (1..=r.min(c)).rev() {
            for rows in subsets(r, k) {
                for cols in subsets(c, k) {
                    let sub: Vec<Vec<u64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                    if det_by_minors(f, &sub) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn product(f: &PrimeField, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        a.iter()
            .map(|row| {
                (0..b[0].len())
                    .map(|j| row.iter().zip(b).fold(0, |s, (x, brow)| f.mul_add(&s, x, &brow[j])))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identity_echelon() {
        let m = ExactMatrix::identity(Rationals, 2);
        let e = echelon(&m);
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivot_columns, vec![0, 1]);
        assert!(kernel_basis(&ExactMatrix::identity(Rationals, 3)).is_empty());
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = ExactMatrix::zeros(Rationals, 3, 5);
        let e = echelon(&m);
        assert_eq!(e.rank, 0);
        assert!(e.pivot_columns.is_empty());
        assert_eq!(kernel_basis(&m).len(), 5);
        let empty = ExactMatrix::zeros(fp(), 0, 0);
        assert_eq!(echelon(&empty).rank, 0);
    }

    #[test]
    fn one_by_two_kernel() {
        let m = ExactMatrix::from_dense(Rationals, 2, &[vec![q(1), q(1)]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![q(-1), q(1)]);
    }

    #[test]
    fn minors_oracle_agrees_on_small_planted_rank() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let k = trial % 5 + 1;
            let a = random_dense(&f, &mut rng, 5, k);
            let b = random_dense(&f, &mut rng, k, 5);
            let m = product(&f, &a, &b);
            let oracle = rank_by_minors(&f, &m);
            let mat = ExactMatrix::from_dense(f, 5, &m).unwrap();
            assert_eq!(mat.rank(), oracle);
            assert_eq!(oracle, k, "random factors are full rank with overwhelming probability");
        }
    }

    #[test]
    fn planted_rank_fifty_by_fifty() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let a = random_dense(&f, &mut rng, 50, 30);
        let b = random_dense(&f, &mut rng, 30, 50);
        let m = ExactMatrix::from_dense(f, 50, &product(&f, &a, &b)).unwrap();
        let e = echelon(&m);
        assert_eq!(e.rank, 30);
        let kernel = kernel_basis(&m);
        assert_eq!(kernel.len(), 20);
        for v in &kernel {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn echelon_rows_are_reduced() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_dense(&f, &mut rng, 12, 7);
        let b = random_dense(&f, &mut rng, 7, 15);
        let m = ExactMatrix::from_dense(f, 15, &product(&f, &a, &b)).unwrap();
        let e = echelon(&m);
        assert!(e.pivot_columns.windows(2).all(|w| w[0] < w[1]));
        for (i, row) in e.reduced_rows.iter().enumerate() {
            assert_eq!(row[0], (e.pivot_columns[i], 1));
            for (k, &pc) in e.pivot_columns.iter().enumerate() {
                if k != i {
                    assert!(sparse_get(row, pc).is_none());
                }
            }
        }
        assert_eq!(e, echelon(&m));
    }

    #[test]
    fn rational_fraction_free_matches_prime_field_on_small_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = fp();
        for _ in 0..30 {
            let r = rng.gen_range(1..8);
            let c = rng.gen_range(1..8);
            let ints: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let mq = ExactMatrix::from_dense(Rationals, c, &ints.iter().map(|row| row.iter().map(|v| q(*v)).collect()).collect::<Vec<_>>()).unwrap();
            let mp = ExactMatrix::from_dense(f, c, &ints.iter().map(|row| row.iter().map(|v| f.from_i64(*v)).collect()).collect::<Vec<_>>()).unwrap();
            let eq = echelon(&mq);
            let ep = echelon(&mp);
            assert!(ep.rank <= eq.rank);
            // RREF over Q reduces mod p to the RREF over F_p when no pivot is lost.
            if ep.rank == eq.rank {
                assert_eq!(eq.pivot_columns, ep.pivot_columns);
            }
            for v in kernel_basis(&mq) {
                assert!(mq.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn rational_rref_with_fractions() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let m = ExactMatrix::from_dense(
            Rationals,
            3,
            &[vec![half.clone(), q(1), q(0)], vec![q(1), q(2), q(3)], vec![q(2), q(4), q(0)]],
        )
        .unwrap();
        let e = echelon(&m);
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivot_columns, vec![0, 2]);
        assert_eq!(e.reduced_rows[0], vec![(0, q(1)), (1, q(2))]);
        assert_eq!(e.reduced_rows[1], vec![(2, q(1))]);
    }

    #[test]
    fn reduce_against_trivial_cases() {
        let span = vec![vec![q(1), q(0)], vec![q(0), q(0)]];
        let r = reduce_against(&Rationals, &span, &[q(1), q(0)]).unwrap();
        assert!(r.residue.iter().all(|x| x.is_zero()));
        assert_eq!(r.coefficients, Some(vec![q(1), q(0)]));

        let r = reduce_against(&Rationals, &span[..1], &[q(0), q(1)]).unwrap();
        assert_eq!(r.residue, vec![q(0), q(1)]);
        assert!(r.coefficients.is_none());

        assert_eq!(
            reduce_against(&Rationals, &span, &[q(1)]),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn reduce_against_recovers_combination() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let span = random_dense(&f, &mut rng, 10, 25);
        let coeffs: Vec<u64> = (0..10).map(|_| f.sample(&mut rng)).collect();
        let target: Vec<u64> = (0..25)
            .map(|j| span.iter().zip(&coeffs).fold(0, |s, (v, c)| f.mul_add(&s, c, &v[j])))
            .collect();
        let r = reduce_against(&f, &span, &target).unwrap();
        assert!(r.residue.iter().all(|x| *x == 0));
        let got = r.coefficients.unwrap();
        let rebuilt: Vec<u64> = (0..25)
            .map(|j| span.iter().zip(&got).fold(0, |s, (v, c)| f.mul_add(&s, c, &v[j])))
            .collect();
        assert_eq!(rebuilt, target);
        // Independent random vectors: the combination is unique.
        assert_eq!(got, coeffs);
    }

    #[test]
    fn matrix_product_and_transpose() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_dense(&f, &mut rng, 4, 6);
        let b = random_dense(&f, &mut rng, 6, 3);
        let ma = ExactMatrix::from_dense(f, 6, &a).unwrap();
        let mb = ExactMatrix::from_dense(f, 3, &b).unwrap();
        assert_eq!(ma.mul(&mb).unwrap().to_dense(), product(&f, &a, &b));
        assert_eq!(ma.transpose().transpose(), ma);
        assert!(ma.mul(&ma).is_err());
    }

    #[test]
    fn from_rows_normalizes() {
        let f = PrimeField::new(7).unwrap();
        let m = ExactMatrix::from_rows(f, 4, vec![vec![(3, 2), (1, 5), (3, 5), (0, 0)]]).unwrap();
        assert_eq!(m.row(0), &vec![(1, 5)]);
        assert!(ExactMatrix::from_rows(f, 2, vec![vec![(2, 1)]]).is_err());
    }

    #[test]
    fn word_elimination_matches_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for p in [2u64, 3, 7, 1048583, 2097169, 4294967291] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..20 {
                let (r, c) = (rng.gen_range(1..25), rng.gen_range(1..25));
                let density = rng.gen_range(0.05..1.0);
                let rows: Vec<SparseVec<u64>> = (0..r)
                    .map(|_| {
                        let mut row = Vec::new();
                        for j in 0..c {
                            if rng.gen_bool(density) {
                                let v = f.sample(&mut rng);
                                if v != 0 {
                                    row.push((j, v));
                                }
                            }
                        }
                        row
                    })
                    .collect();
                let generic = gauss_jordan(&f, rows.clone(), c);
                assert_eq!(gauss_jordan_word(p, rows, c), generic, "p = {p}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
            (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
            })
        }

        proptest! {
            #[test]
            fn rank_is_transpose_invariant(m in small_matrix()) {
                let f = fp();
                let c = m[0].len();
                let mat = ExactMatrix::from_dense(f, c, &m.iter().map(|r| r.iter().map(|v| f.from_i64(*v)).collect()).collect::<Vec<_>>()).unwrap();
                prop_assert_eq!(mat.rank(), mat.transpose().rank());
            }

            #[test]
            fn prime_rank_never_exceeds_rational_rank(m in small_matrix()) {
                let f = PrimeField::new(3).unwrap();
                let c = m[0].len();
                let mp = ExactMatrix::from_dense(f, c, &m.iter().map(|r| r.iter().map(|v| f.from_i64(*v)).collect()).collect::<Vec<_>>()).unwrap();
                let mq = ExactMatrix::from_dense(Rationals, c, &m.iter().map(|r| r.iter().map(|v| q(*v)).collect()).collect::<Vec<_>>()).unwrap();
                prop_assert!(mp.rank() <= mq.rank());
            }

            #[test]
            fn kernel_vectors_are_annihilated(m in small_matrix()) {
                let c = m[0].len();
                let mq = ExactMatrix::from_dense(Rationals, c, &m.iter().map(|r| r.iter().map(|v| q(*v)).collect()).collect::<Vec<_>>()).unwrap();
                let k = kernel_basis(&mq);
                prop_assert_eq!(k.len() + mq.rank(), c);
                for v in k {
                    prop_assert!(mq.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
                }
            }
        }
    }
}
