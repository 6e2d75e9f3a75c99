//! Degreewise exact computations in the generalized Jacobian ring
//! `B = A / J(F, G)` of an open complete intersection `U = X \ Z`, where
//! `X = {F_1 = .. = F_r = 0}` in `P^n` and `Z` is cut out on `X` by `G_1 .. G_s`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact: coefficients
//! live either in the rationals or in a prime field `F_p`, selected at runtime
//! through [`FieldSpec`] and statically through the [`Field`] trait.
//!
//! Module map:
//! - [`linalg`]: sparse exact matrices, echelon forms, kernels, span reduction.
//! - [`poly`]: homogeneous polynomials in `X0..Xn`, parser and printer.
//! - [`graded`]: the bigraded ambient algebra `A` and the Jacobian ideal pieces.
//! - [`quotient`]: standard-monomial bases of `B_q(l)`, normal forms, products.
//! - [`hodge`]: log-Hodge numbers read off from quotient dimensions.
//! - [`duality`]: trace functional, the pairings `h_p(l)` and the `eta` kernel.
//! - [`koszul`]: Koszul complexes of subspaces `V` of `B_1(0)` and their homology.
//! - [`family`]: kernels of multiplication by tangent directions and codimension bounds.
//! - [`sample`]: seeded random configurations for experiments and tests.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod duality;
pub mod error;
pub mod family;
pub mod field;
pub mod graded;
pub mod hodge;
pub mod koszul;
pub mod linalg;
pub mod poly;
pub mod quotient;
pub mod sample;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use graded::{Configuration, GradedIndex};
pub use linalg::ExactMatrix;
pub use poly::{Monomial, Polynomial};
pub use quotient::{BElement, JacobianRing, QuotientPiece};

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
