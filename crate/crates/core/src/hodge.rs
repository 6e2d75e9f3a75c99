//! Log-Hodge numbers of `U = X \ Z` as dimensions of Jacobian-ring pieces:
//! `h^{p,q}(l)_prim = dim B_q(d + e - n - 1 + l)` with `p + q = m = n - r`.

use alloc::format;
use alloc::vec::Vec;

use crate::binomial;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Configuration, GradedIndex};
use crate::quotient::JacobianRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HodgeMode {
    /// Primitive part.
    Prim,
    /// Adds the hyperplane class in the middle degree when `s = l = 0`.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeEntry {
    pub p: i64,
    pub q: i64,
    pub l: i64,
    pub prim: usize,
    pub full: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeTable {
    pub m: i64,
    pub l: i64,
    /// Ordered by `q` ascending, so `p` runs from `m` down to 0.
    pub entries: Vec<HodgeEntry>,
}

/// Index of the piece computing `H^q(X, Omega^{m-q}(log Z)(l))_prim`.
pub fn hodge_piece<F: Field>(cfg: &Configuration<F>, q: i64, l: i64) -> GradedIndex {
    GradedIndex::new(q, cfg.d_sum() + cfg.e_sum() - cfg.n() as i64 - 1 + l)
}

fn check_hodge_pre<F: Field>(cfg: &Configuration<F>, l: i64) -> Result<()> {
    if cfg.r() > cfg.n() - 1 {
        return Err(Error::Precondition(format!("need n >= r + 1, got n = {}, r = {}", cfg.n(), cfg.r())));
    }
    if l < 0 {
        return Err(Error::Precondition(format!("twist l = {l} is negative")));
    }
    Ok(())
}

fn correction<F: Field>(cfg: &Configuration<F>, p: i64, q: i64, l: i64) -> usize {
    usize::from(cfg.s() == 0 && l == 0 && p == q)
}

pub fn hodge_number<F: Field>(ring: &JacobianRing<F>, p: i64, q: i64, l: i64, mode: HodgeMode) -> Result<usize> {
    let cfg = ring.config();
    check_hodge_pre(cfg, l)?;
    let m = cfg.m();
    if p + q != m {
        return Err(Error::Precondition(format!("p + q = {} but m = {m}", p + q)));
    }
    if !(0..=m).contains(&q) {
        return Err(Error::Precondition(format!("q = {q} outside 0..={m}")));
    }
    let prim = ring.dim(hodge_piece(cfg, q, l));
    Ok(match mode {
        HodgeMode::Prim => prim,
        HodgeMode::Full => prim + correction(cfg, p, q, l),
    })
}

pub fn hodge_table<F: Field>(ring: &JacobianRing<F>, l: i64) -> Result<HodgeTable> {
    let cfg = ring.config();
    check_hodge_pre(cfg, l)?;
    let m = cfg.m();
    let entries = (0..=m)
        .map(|q| {
            let p = m - q;
            let prim = ring.dim(hodge_piece(cfg, q, l));
            HodgeEntry { p, q, l, prim, full: prim + correction(cfg, p, q, l) }
        })
        .collect();
    Ok(HodgeTable { m, l, entries })
}

/// Dimension of the span of the trivial logarithmic `q`-forms: `C(s-1, q)`, zero for `s <= 1`.
pub fn trivial_dim<F: Field>(cfg: &Configuration<F>, q: i64) -> Result<usize> {
    if q <= 0 {
        return Err(Error::Precondition(format!("q = {q}, need q >= 1")));
    }
    let s = cfg.s() as i64;
    Ok(if s >= 2 { binomial(s - 1, q) as usize } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::graded::tests::cfg;

    fn fermat(n: usize, d: u32) -> alloc::string::String {
        (0..=n).map(|i| format!("X{i}^{d}")).collect::<Vec<_>>().join(" + ")
    }

    #[test]
    fn plane_curve_genus() {
        for d in 3..=6u32 {
            let ring = JacobianRing::new(cfg(Rationals, 2, &[&fermat(2, d)], &[]));
            let g = hodge_number(&ring, 1, 0, 0, HodgeMode::Prim).unwrap();
            assert_eq!(g as u128, binomial(d as i64 - 1, 2));
            assert_eq!(hodge_number(&ring, 0, 1, 0, HodgeMode::Prim).unwrap(), g);
        }
    }

    #[test]
    fn k3_diamond() {
        let ring = JacobianRing::new(cfg(Rationals, 3, &[&fermat(3, 4)], &[]));
        let t = hodge_table(&ring, 0).unwrap();
        let rows: Vec<_> = t.entries.iter().map(|e| (e.p, e.q, e.prim, e.full)).collect();
        assert_eq!(rows, [(2, 0, 1, 1), (1, 1, 19, 20), (0, 2, 1, 1)]);
        assert_eq!(hodge_number(&ring, 1, 1, 0, HodgeMode::Full).unwrap(), 20);
    }

    #[test]
    fn quintic_threefold() {
        let ring = JacobianRing::new(cfg(PrimeField::default(), 4, &[&fermat(4, 5)], &[]));
        assert_eq!(hodge_number(&ring, 2, 1, 0, HodgeMode::Prim).unwrap(), 101);
    }

    #[test]
    fn elliptic_curve_cases() {
        let ring = JacobianRing::new(cfg(Rationals, 2, &[&fermat(2, 3)], &[]));
        let t = hodge_table(&ring, 0).unwrap();
        let rows: Vec<_> = t.entries.iter().map(|e| (e.p, e.q, e.prim, e.full)).collect();
        assert_eq!(rows, [(1, 0, 1, 1), (0, 1, 1, 1)]);

        let ring = JacobianRing::new(cfg(Rationals, 2, &[&fermat(2, 3)], &["X0 + X1 + X2"]));
        assert_eq!(hodge_number(&ring, 1, 0, 0, HodgeMode::Prim).unwrap(), 3);
        let t = hodge_table(&ring, 0).unwrap();
        let last = &t.entries[1];
        assert_eq!((last.p, last.q), (0, 1));
        assert_eq!(last.prim, ring.dim(GradedIndex::new(1, 4 - 3)));
        assert!(t.entries.iter().all(|e| e.prim == e.full));
    }

    #[test]
    fn twisted_full_equals_prim() {
        let ring = JacobianRing::new(cfg(Rationals, 3, &[&fermat(3, 4)], &[]));
        for (p, q) in [(2, 0), (1, 1), (0, 2)] {
            assert_eq!(
                hodge_number(&ring, p, q, 1, HodgeMode::Full).unwrap(),
                hodge_number(&ring, p, q, 1, HodgeMode::Prim).unwrap()
            );
        }
    }

    #[test]
    fn hodge_symmetry_s0() {
        for (n, d) in [(2usize, 4u32), (2, 5), (3, 3), (3, 4), (4, 3)] {
            let ring = JacobianRing::new(cfg(PrimeField::default(), n, &[&fermat(n, d)], &[]));
            let t = hodge_table(&ring, 0).unwrap();
            let m = t.m as usize;
            for i in 0..=m {
                assert_eq!(t.entries[i].prim, t.entries[m - i].prim, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn preconditions() {
        let ring = JacobianRing::new(cfg(Rationals, 2, &[&fermat(2, 3)], &[]));
        assert!(matches!(hodge_number(&ring, 1, 1, 0, HodgeMode::Prim), Err(Error::Precondition(_))));
        assert!(matches!(hodge_number(&ring, 2, -1, 0, HodgeMode::Prim), Err(Error::Precondition(_))));
        assert!(matches!(hodge_number(&ring, 1, 0, -1, HodgeMode::Prim), Err(Error::Precondition(_))));
        let points = JacobianRing::new(cfg(Rationals, 2, &["X0", "X1"], &[]));
        assert!(matches!(hodge_table(&points, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn trivial_dims() {
        let c = |s: usize| {
            let g: Vec<&str> = ["X0", "X1", "X2", "X0 + X1"][..s].to_vec();
            cfg(Rationals, 2, &["X0^3 + X1^3 + X2^3"], &g)
        };
        assert_eq!(trivial_dim(&c(3), 1).unwrap(), 2);
        assert_eq!(trivial_dim(&c(4), 2).unwrap(), 3);
        assert_eq!(trivial_dim(&c(0), 1).unwrap(), 0);
        assert_eq!(trivial_dim(&c(1), 2).unwrap(), 0);
        assert!(trivial_dim(&c(2), 0).is_err());
    }

    #[test]
    fn trivial_forms_fit_in_top_piece() {
        let ring = JacobianRing::new(cfg(Rationals, 2, &["X0^3 + X1^3 + X2^3"], &["X0", "X1", "X2"]));
        let cfg = ring.config();
        let top = ring.dim(hodge_piece(cfg, 0, 0));
        assert!(trivial_dim(cfg, cfg.m()).unwrap() <= top);
    }
}
