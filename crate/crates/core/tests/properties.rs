mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use qr_core::corpus;
use qr_core::linalg::{q, qf, to_q};
use qr_core::localization::{kostant_partition, Multiplicities, Polarization};
use qr_core::quasipoly::{self, FitDomain, FitOptions, Polynomial, QuasiPolynomial, RayDomain};
use qr_core::reduction::{kawasaki_point_sum, OrbifoldPoint, ReducedLevelData};
use qr_core::{LatticeBox, RationalPolytope, RootSystem, WeightLattice};

fn a2() -> RootSystem {
    let lattice = WeightLattice::new(vec![vec![qf(2, 3), qf(1, 3)], vec![qf(1, 3), qf(2, 3)]]).unwrap();
    RootSystem::build(&[vec![2, -1], vec![-1, 2]], &lattice).unwrap()
}

fn b2() -> RootSystem {
    RootSystem::build(&[vec![1, -1], vec![0, 1]], &WeightLattice::standard(2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifted_action_is_an_action(x in -20i64..20, y in -20i64..20, i in 0usize..8, j in 0usize..8, use_b2: bool) {
        let rs = if use_b2 { b2() } else { a2() };
        let w = rs.weyl_group();
        let (a, b) = (&w[i % w.len()], &w[j % w.len()]);
        let mu = [x, y];
        let composed = rs.shifted_action(a, &rs.shifted_action(b, &mu));
        let basis = [[1, 0], [0, 1]];
        let product = w.iter().find(|c| basis.iter().all(|e| c.apply(e) == a.apply(&b.apply(e)))).unwrap();
        prop_assert_eq!(composed, rs.shifted_action(product, &mu));
        prop_assert_eq!(product.sign(), a.sign() * b.sign());
    }

    #[test]
    fn partition_dp_matches_enumeration(
        raw in prop::collection::vec((-3i64..=3, -3i64..=3), 1..=4),
        v in (1i64..=4, -4i64..=4),
        t in (-10i64..=10, -10i64..=10),
    ) {
        let v = [v.0, v.1];
        let gens: Vec<Vec<i64>> = raw
            .into_iter()
            .filter(|g| g.0 * v[0] + g.1 * v[1] != 0)
            .map(|g| if g.0 * v[0] + g.1 * v[1] > 0 { vec![g.0, g.1] } else { vec![-g.0, -g.1] })
            .collect();
        let target = [t.0, t.1];
        prop_assert_eq!(kostant_partition(&gens, &target, &v), common::naive_partitions(&gens, &target, &v));
    }

    #[test]
    fn vertex_and_halfspace_descriptions_agree(pts in prop::collection::vec((-6i64..=6, -6i64..=6), 1..8)) {
        let points: Vec<_> = pts.iter().map(|p| to_q(&[p.0, p.1])).collect();
        let v = RationalPolytope::from_points(&points).unwrap();
        let h = RationalPolytope::from_halfspaces(v.affine_hull(), v.halfspaces()).unwrap();
        prop_assert!(v.same_set(&h));
        prop_assert_eq!(v.vertices(), h.vertices());
        for p in &points {
            prop_assert!(h.contains(p));
        }
    }

    #[test]
    fn kawasaki_sum_is_periodic(n in 1i64..7, c in 0i64..7, k in 1i64..30, l in -30i64..30) {
        let group: Vec<_> = (0..n).map(|j| vec![qf(j, n)]).collect();
        let phase = (0..n).map(|j| qf(j * c, n)).collect();
        let data = ReducedLevelData::new(vec![qf(1, 2)], group, vec![OrbifoldPoint { gl_phase: phase }]).unwrap();
        let e = data.exponent();
        let base = kawasaki_point_sum(&data, k, &[l]);
        prop_assert_eq!(kawasaki_point_sum(&data, k + e, &[l]), base);
        prop_assert_eq!(kawasaki_point_sum(&data, k, &[l + e]), base);
        prop_assert_eq!(base, ((k * c - l).rem_euclid(n) == 0) as u64);
    }

    #[test]
    fn quasi_polynomial_equality_is_an_equivalence(
        slope in -5i64..5,
        offsets in prop::collection::vec(-5i64..5, 1..4),
        shift in 1usize..4,
    ) {
        let n = offsets.len() as i64;
        let make = |rot: usize| {
            let mut polys = BTreeMap::new();
            for r in 0..n {
                let mut p = Polynomial::constant(1, q(offsets[(r as usize + rot) % offsets.len()]));
                p.add_term(vec![1], q(slope));
                polys.insert(vec![r], p);
            }
            QuasiPolynomial::from_residues(1, n, polys)
        };
        let domain = RayDomain { step: 1 };
        let a = make(0);
        let b = QuasiPolynomial::from_document(&a.to_document()).unwrap();
        let c = make(shift);
        prop_assert!(quasipoly::equals(&a, &a, &domain));
        prop_assert!(quasipoly::equals(&a, &b, &domain) && quasipoly::equals(&b, &a, &domain));
        let same = (0..n as usize).all(|r| offsets[r] == offsets[(r + shift) % offsets.len()]);
        prop_assert_eq!(quasipoly::equals(&a, &c, &domain), same);
        prop_assert_eq!(quasipoly::equals(&c, &a, &domain), same);
    }

    #[test]
    fn fitting_recovers_ray_quasi_polynomials(slope in -4i64..4, offsets in prop::collection::vec(-4i64..4, 1..4)) {
        let n = offsets.len() as i64;
        let f = |k: i64| slope * k + offsets[(k % n) as usize];
        let domain = RayDomain { step: 1 };
        let opts = FitOptions { degree_bound: 2, period_bound: 4, horizon: 30 };
        let qp = quasipoly::fit(&mut |x: &[i64]| BigInt::from(f(x[0])), &domain, &opts).unwrap();
        prop_assert!(qp.modulus() <= n);
        for k in 1..=60 {
            prop_assert_eq!(quasipoly::eval_int(&qp, &[k]), BigInt::from(f(k)));
        }
        prop_assert!(domain.contains(&[qp.modulus()]));
    }

    #[test]
    fn random_polarizations_agree(seed in 0u64..10_000, k in 0i64..5) {
        for name in ["cp2", "p1xp1-weight2", "p1xp1-su2-diagonal"] {
            let m = corpus::by_name(name).unwrap();
            let rs = m.root_system().unwrap();
            let mut a = Multiplicities::with_seed(&m, &rs, seed).unwrap();
            let fixed = Polarization::new(vec![q(1); m.rank()].into_iter().enumerate().map(|(i, x)| x + qf(i as i64, 7)).collect());
            let mut b = Multiplicities::new(&m, &rs, fixed).unwrap();
            let bx = common::moment_box(&m, k, 2);
            prop_assert_eq!(a.index_character(k, &bx), b.index_character(k, &bx));
            prop_assert_eq!(a.m_character(k, &bx), b.m_character(k, &bx));
        }
    }
}

#[test]
fn empty_box_has_no_points() {
    assert!(LatticeBox { lo: vec![1], hi: vec![0] }.points().is_empty());
}
