//! Seeded random configurations. Dense random coefficients give smooth,
//! transversal configurations with high probability; callers that need
//! smoothness should still screen with the trace diagnostic.

use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::Result;
use crate::field::Field;
use crate::graded::{dim_a, Configuration, GradedIndex};
use crate::poly::{monomials_of_degree, Monomial, Polynomial};

/// Homogeneous polynomial of degree `d` with every coefficient drawn by [`Field::sample`].
pub fn random_polynomial<F: Field, R: RngCore + ?Sized>(field: &F, nvars: usize, d: u32, rng: &mut R) -> Polynomial<F> {
    let mut p = Polynomial::zero(field.clone(), nvars);
    for m in monomials_of_degree(nvars, d as i64) {
        p.add_term(m, field.sample(rng));
    }
    if p.is_zero() {
        let mut e = alloc::vec![0; nvars];
        e[0] = d;
        p.add_term(Monomial::new(e), field.one());
    }
    p
}

/// Configuration in `P^n` with random `F_i` of degrees `d` and `G_j` of degrees `e`.
pub fn random_configuration<F: Field, R: RngCore + ?Sized>(field: &F, n: usize, d: &[u32], e: &[u32], rng: &mut R) -> Result<Configuration<F>> {
    let polys = |degs: &[u32], rng: &mut R| -> Vec<Polynomial<F>> { degs.iter().map(|&k| random_polynomial(field, n + 1, k, rng)).collect() };
    let f = polys(d, rng);
    let g = polys(e, rng);
    Configuration::new(field.clone(), n, f, g)
}

/// Shape limits for [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceFamily {
    pub max_n: usize,
    pub max_d: u32,
    pub max_e: u32,
    pub max_r: usize,
    pub max_s: usize,
    /// Cap on the ambient dimension of the socle piece `A_m(2(d - n - 1) + e)`.
    pub max_socle_ambient: usize,
}

impl Default for InstanceFamily {
    fn default() -> Self {
        InstanceFamily { max_n: 4, max_d: 4, max_e: 2, max_r: 3, max_s: 3, max_socle_ambient: 2500 }
    }
}

impl InstanceFamily {
    /// Degree data `(n, d, e)` with `n - r >= 1` and `sum d >= n + 1`, so the
    /// socle piece sits in nonnegative degree and should be a line.
    pub fn shape<R: RngCore + ?Sized>(&self, rng: &mut R) -> (usize, Vec<u32>, Vec<u32>) {
        loop {
            let n = rng.gen_range(2..=self.max_n);
            let r = rng.gen_range(0..=self.max_r.min(n - 1));
            let s = rng.gen_range(usize::from(r == 0)..=self.max_s);
            let d: Vec<u32> = (0..r).map(|_| rng.gen_range(1..=self.max_d)).collect();
            let e: Vec<u32> = (0..s).map(|_| rng.gen_range(1..=self.max_e)).collect();
            if d.iter().sum::<u32>() as usize > n {
                return (n, d, e);
            }
        }
    }
}

/// Random configuration from `family` whose socle piece respects the ambient cap.
pub fn random_instance<F: Field, R: RngCore + ?Sized>(field: &F, family: &InstanceFamily, rng: &mut R) -> Configuration<F> {
    loop {
        let (n, d, e) = family.shape(rng);
        let cfg = random_configuration(field, n, &d, &e, rng).expect("random data is homogeneous and nonzero");
        let m = cfg.m();
        let top = 2 * (cfg.d_sum() - n as i64 - 1) + cfg.e_sum();
        if dim_a(&cfg, GradedIndex::new(m, top)) <= family.max_socle_ambient {
            return cfg;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_well_formed() {
        let f = PrimeField::default();
        let a = random_configuration(&f, 3, &[2, 3], &[1], &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = random_configuration(&f, 3, &[2, 3], &[1], &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.d(), a.e()), (&[2, 3][..], &[1][..]));
        let q = random_polynomial(&Rationals, 3, 4, &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(q.homogeneous_degree(), Some(4));
    }

    #[test]
    fn instances_respect_family() {
        let fam = InstanceFamily::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let cfg = random_instance(&PrimeField::default(), &fam, &mut rng);
            assert!(cfg.n() <= fam.max_n && cfg.m() >= 1 && cfg.d_sum() > cfg.n() as i64);
            assert!(cfg.d().iter().all(|&x| x <= fam.max_d) && cfg.e().iter().all(|&x| x <= fam.max_e));
        }
    }
}
