use ocijac_core::duality::{check_duality, eta_kernel, socle_index, trace_piece, PairingCase, TraceStatus, Verdict};
use ocijac_core::family::{nabla_kernel, FamilyInput, NablaClaim};
use ocijac_core::graded::{dim_a, GradedIndex};
use ocijac_core::hodge::{hodge_number, HodgeMode};
use ocijac_core::koszul::{check_exactness, koszul_conditions, numerics, random_subspace, term_dim, SubspaceSpec, B1};
use ocijac_core::linalg::ExactMatrix;
use ocijac_core::sample::{random_configuration, random_instance, InstanceFamily};
use ocijac_core::{binomial, Configuration, Field, JacobianRing, Polynomial, PrimeField, Rationals};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_family() -> InstanceFamily {
    InstanceFamily { max_socle_ambient: 700, ..InstanceFamily::default() }
}

/// The same integer configuration over another field.
fn reembed<F: Field, G: Field>(cfg: &Configuration<F>, field: G) -> Configuration<G> {
    let conv = |ps: &[Polynomial<F>]| -> Vec<Polynomial<G>> {
        ps.iter().map(|p| Polynomial::parse(&p.to_string(), cfg.nvars(), field.clone()).unwrap()).collect()
    };
    Configuration::new(field.clone(), cfg.n(), conv(cfg.f()), conv(cfg.g())).unwrap()
}

#[test]
fn random_instances_have_line_socles_and_honest_pairings() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..8 {
        let cfg = random_instance(&f, &small_family(), &mut rng);
        let ring = JacobianRing::new(cfg);
        let tp = trace_piece(&ring);
        assert_eq!((tp.status, tp.dim), (TraceStatus::Ok, 1), "{:?}", ring.config());
        let cfg = ring.config();
        for p in 0..=cfg.m() {
            for l in 0..=cfg.e_max() {
                let left = GradedIndex::new(p, cfg.d_sum() - cfg.n() as i64 - 1 + l);
                let right = socle_index(cfg) + GradedIndex::new(-p, -left.l);
                if dim_a(cfg, left).max(dim_a(cfg, right)) > 700 {
                    continue;
                }
                let rep = check_duality(&ring, p, l).unwrap();
                assert_ne!(rep.verdict, Some(Verdict::Failed), "p={p} l={l} {:?}", ring.config());
                if matches!(rep.applicable_case, PairingCase::I | PairingCase::II | PairingCase::III) {
                    assert_eq!(rep.left_dim, rep.right_dim);
                    assert_eq!(rep.rank, rep.left_dim);
                }
            }
        }
    }
}

#[test]
fn eta_kernel_counts_trivial_forms() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut done = 0;
    while done < 5 {
        let n = rng.gen_range(2..=3usize);
        let d = vec![rng.gen_range(n as u32..=4)];
        let s = rng.gen_range(2..=3usize);
        let e: Vec<u32> = (0..s).map(|_| rng.gen_range(1..=2)).collect();
        let cfg = random_configuration(&f, n, &d, &e, &mut rng).unwrap();
        if dim_a(&cfg, socle_index(&cfg)) > 1500 {
            continue;
        }
        let ring = JacobianRing::new(cfg);
        let rep = eta_kernel(&ring).unwrap();
        assert_eq!(rep.expected, binomial(s as i64 - 1, n as i64 - 1) as usize);
        assert!(rep.holds(), "{rep:?}");
        done += 1;
    }
}

#[test]
fn koszul_draws_are_exact_where_claimed() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let fam = InstanceFamily { max_n: 3, max_socle_ambient: 600, ..InstanceFamily::default() };
    let (mut applied, mut nontrivial) = (0, 0);
    while applied < 20 {
        let ring = JacobianRing::new(random_instance(&f, &fam, &mut rng));
        let b1 = ring.dim(B1);
        if ring.config().s() == 0 || b1 > 30 {
            continue;
        }
        let k = numerics(&ring);
        for _ in 0..6 {
            let c = rng.gen_range(0..=b1.min(2));
            let (p, l, q) = (rng.gen_range(0..3), rng.gen_range(0..4), rng.gen_range(0..3));
            let (cases, _) = koszul_conditions(&k, p, l, q, c as i64);
            if cases.is_empty() {
                continue;
            }
            let v = random_subspace(&ring, c, rng.gen()).unwrap();
            if (0..3).any(|i| term_dim(&ring, &v, p + i, l, q + 1 - i) > 400) {
                continue;
            }
            let rep = check_exactness(&ring, &v, p, l, q).unwrap();
            assert!(rep.dd_zero && rep.consistent(), "{rep:?}");
            assert!(rep.rank_in + rep.rank_out <= rep.dims[1]);
            applied += 1;
            nontrivial += usize::from(rep.dims[0] > 0 && rep.dims[1] > 0);
        }
    }
    assert!(nontrivial > 0);
}

#[test]
fn koszul_homology_ignores_basis_of_v() {
    let ring = JacobianRing::new(
        Configuration::new(
            Rationals,
            2,
            vec![Polynomial::parse("X0^3 + X1^3 + X2^3", 3, Rationals).unwrap()],
            vec![Polynomial::parse("X0 + 2*X1 + 3*X2", 3, Rationals).unwrap()],
        )
        .unwrap(),
    );
    let v = random_subspace(&ring, 1, 5).unwrap();
    let dim = ring.dim(B1);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // Triangular change of basis with unit diagonal.
    let mixed: Vec<Vec<_>> = (0..v.dim())
        .map(|i| {
            let mut row = v.basis[i].clone();
            for j in 0..i {
                let t = Rationals.sample(&mut rng);
                for k in 0..dim {
                    row[k] = Rationals.mul_add(&row[k], &t, &v.basis[j][k]);
                }
            }
            row
        })
        .collect();
    let w = SubspaceSpec::explicit(&ring, mixed).unwrap();
    for (p, l, q) in [(0, 0, 1), (0, 1, 0), (1, 0, 1), (0, 2, 1)] {
        let a = check_exactness(&ring, &v, p, l, q).unwrap();
        let b = check_exactness(&ring, &w, p, l, q).unwrap();
        assert_eq!(a.middle_homology, b.middle_homology);
    }
}

#[test]
fn two_primes_agree_and_bound_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (mut compared, mut exact) = (0, 0);
    while compared < 25 {
        let n = rng.gen_range(2..=3usize);
        let d = vec![rng.gen_range(2..=4u32)];
        let e: Vec<u32> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(1..=2)).collect();
        let cfg_q = random_configuration(&Rationals, n, &d, &e, &mut rng).unwrap();
        let idx = GradedIndex::new(rng.gen_range(0..=2), rng.gen_range(-1..=4));
        let amb = dim_a(&cfg_q, idx);
        if amb > 600 {
            continue;
        }
        let ring_a = JacobianRing::new(reembed(&cfg_q, PrimeField::new(1_048_583).unwrap()));
        let ring_b = JacobianRing::new(reembed(&cfg_q, PrimeField::new(2_097_169).unwrap()));
        let dp = ring_a.dim(idx);
        assert_eq!(dp, ring_b.dim(idx), "{idx}");
        if amb <= 120 && exact < 8 {
            assert!(dp >= JacobianRing::new(cfg_q.clone()).dim(idx));
            exact += 1;
        }
        compared += 1;
    }
    assert!(exact > 0);
}

#[test]
fn nabla_matches_trivial_count_when_degrees_allow() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut checked = 0;
    while checked < 4 {
        let n = rng.gen_range(2..=3usize);
        let d = vec![rng.gen_range(3..=4u32)];
        let e: Vec<u32> = (0..rng.gen_range(2..=3)).map(|_| 1).collect();
        let cfg = random_configuration(&f, n, &d, &e, &mut rng).unwrap();
        if dim_a(&cfg, socle_index(&cfg)) > 1200 {
            continue;
        }
        let ring = JacobianRing::new(cfg);
        let m = ring.config().m();
        let rep = nabla_kernel(&ring, &FamilyInput { w: SubspaceSpec::full(&ring), c_s: 0 }, m, 0).unwrap();
        assert_eq!(rep.claim, NablaClaim::Trivial);
        assert!(rep.kernel_dim >= rep.trivial_expected);
        if rep.condition_holds {
            assert_eq!(rep.kernel_dim, rep.trivial_expected, "{:?}", ring.config());
            checked += 1;
        }
    }
}

#[test]
fn hodge_symmetry_on_random_hypersurfaces() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for (n, d) in [(2usize, 5u32), (3, 3), (3, 4), (4, 3)] {
        let ring = JacobianRing::new(random_configuration(&f, n, &[d], &[], &mut rng).unwrap());
        let m = ring.config().m();
        for p in 0..=m {
            let a = hodge_number(&ring, p, m - p, 0, HodgeMode::Prim).unwrap();
            let b = hodge_number(&ring, m - p, p, 0, HodgeMode::Prim).unwrap();
            assert_eq!(a, b, "n={n} d={d} p={p}");
        }
    }
}

#[test]
fn low_degree_pieces_are_free() {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        let cfg = random_configuration(&f, 3, &[3, 4], &[1], &mut rng).unwrap();
        let ring = JacobianRing::new(cfg);
        for l in 0..3 {
            assert_eq!(ring.dim(GradedIndex::new(0, l)), binomial(3 + l, 3) as usize);
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn elliptic_line() -> JacobianRing<PrimeField> {
        let f = PrimeField::default();
        let cfg = Configuration::new(
            f,
            2,
            vec![Polynomial::parse("X0^3 + X1^3 + X2^3", 3, f).unwrap()],
            vec![Polynomial::parse("X0 + 2*X1 + 3*X2", 3, f).unwrap()],
        )
        .unwrap();
        JacobianRing::new(cfg)
    }

    /// Product of two ambient vectors, term by term.
    fn ambient_product(ring: &JacobianRing<PrimeField>, a: (GradedIndex, &[u64]), b: (GradedIndex, &[u64])) -> Vec<u64> {
        let f = ring.field();
        let (pa, pb, pt) = (ring.piece(a.0), ring.piece(b.0), ring.piece(a.0 + b.0));
        let mut out = vec![0; pt.ambient_dim()];
        for (ta, x) in pa.ambient.terms.iter().zip(a.1) {
            for (tb, y) in pb.ambient.terms.iter().zip(b.1) {
                let c = pt.ambient.column(&ta.mul(tb)).unwrap();
                out[c] = f.mul_add(&out[c], x, y);
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn products_ignore_ideal_perturbations(seed in any::<u64>(), qa in 0i64..=1, la in 0i64..=2) {
            let ring = elliptic_line();
            let f = *ring.field();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (ia, ib) = (GradedIndex::new(qa, la), GradedIndex::new(1, 1));
            let (pa, pb) = (ring.piece(ia), ring.piece(ib));
            let a: Vec<u64> = (0..pa.ambient_dim()).map(|_| f.sample(&mut rng)).collect();
            let b: Vec<u64> = (0..pb.ambient_dim()).map(|_| f.sample(&mut rng)).collect();
            let mut a2 = a.clone();
            let rows = pa.ideal_rows();
            prop_assume!(!rows.is_empty());
            let row = &rows[rng.gen_range(0..rows.len())];
            let t = f.sample(&mut rng);
            for (j, v) in row {
                a2[*j] = f.mul_add(&a2[*j], &t, v);
            }
            let target = ia + ib;
            let x = ring.normal_form(target, &ambient_product(&ring, (ia, &a), (ib, &b))).unwrap();
            let y = ring.normal_form(target, &ambient_product(&ring, (ia, &a2), (ib, &b))).unwrap();
            prop_assert_eq!(x, y);
        }

        #[test]
        fn echelon_is_deterministic(entries in proptest::collection::vec(-4i64..=4, 24)) {
            let f = PrimeField::default();
            let rows: Vec<Vec<u64>> = entries.chunks(6).map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
            let m = ExactMatrix::from_dense(f, 6, &rows).unwrap();
            prop_assert_eq!(ocijac_core::linalg::echelon(&m), ocijac_core::linalg::echelon(&m.clone()));
        }
    }
}
