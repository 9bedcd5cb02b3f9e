use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shl::coeff::Algebra;
use shl::homotopy::{check_cert, reverse};
use shl::json as codec;
use shl::mult::mu_tensor;
use shl::poly::{Monomial, Poly};
use shl::polyfun::{random_family, tower};
use shl::snf::{kernel, solve, Solution};
use shl::sset::{cube_pair, interval_pair, product, std_simplex, SimplicialPair};
use shl::suite::random_chain;
use shl::tensor::TensorAlgebra;
use shl::Integers;

fn small_int(rng: &mut ChaCha8Rng) -> BigInt {
    use rand::Rng;
    BigInt::from(rng.gen_range(-3i64..=3))
}

fn zpoly(nvars: usize) -> impl Strategy<Value = Poly<BigInt>> {
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), -5i64..=5), 0..5).prop_map(move |terms| {
        Poly::from_terms(&Integers, nvars, terms.into_iter().map(|(e, c)| (Monomial(e), BigInt::from(c))))
    })
}

fn matrix() -> impl Strategy<Value = (Vec<Vec<BigInt>>, usize)> {
    (1usize..4, 1usize..4).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop::collection::vec(-4i64..=4, cols), rows)
            .prop_map(move |a| (a.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(), cols))
    })
}

fn pairs() -> [SimplicialPair; 3] {
    [interval_pair(), cube_pair(2), SimplicialPair::absolute(Arc::new(std_simplex(2)))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polynomials_form_a_commutative_ring(p in zpoly(2), q in zpoly(2), r in zpoly(2)) {
        let z = &Integers;
        prop_assert_eq!(p.mul(z, &q), q.mul(z, &p));
        prop_assert_eq!(p.mul(z, &q.add(z, &r)), p.mul(z, &q).add(z, &p.mul(z, &r)));
        prop_assert_eq!(p.mul(z, &q).mul(z, &r), p.mul(z, &q.mul(z, &r)));
        prop_assert!(p.sub(z, &p).is_zero());
    }

    #[test]
    fn subdivision_keeps_euler_characteristic_and_identities(n in 0usize..3, k in 0usize..3) {
        let t = tower(&SimplicialPair::absolute(Arc::new(std_simplex(n))));
        let set = t.level(k).set().clone();
        prop_assert!(set.check().is_ok());
        prop_assert_eq!(set.euler(), 1);
    }

    #[test]
    fn products_of_simplices_are_contractible(p in 0usize..4, q in 0usize..4) {
        let x = product(&Arc::new(std_simplex(p)), &Arc::new(std_simplex(q))).set;
        prop_assert!(x.check().is_ok());
        prop_assert_eq!(x.euler(), 1);
        prop_assert_eq!(x.counts()[0], (p + 1) * (q + 1));
    }

    #[test]
    fn transition_is_a_ring_map(seed: u64, which in 0usize..3, r in 0usize..2, deg in 0u32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Algebra::poly1();
        let ctx = tower(&pairs()[which]).ctx(r);
        let f = random_family(&b, &ctx, deg, false, &mut rng, |g| b.random_elem(g, 3, 2));
        let g = random_family(&b, &ctx, deg, false, &mut rng, |g| b.random_elem(g, 3, 2));
        let fg = f.mul(&b, &g).unwrap();
        prop_assert!(fg.validate(&b).is_ok());
        prop_assert_eq!(fg.transition(&b), f.transition(&b).mul(&b, &g.transition(&b)).unwrap());
        prop_assert_eq!(f.add(&b, &g).unwrap().transition(&b), f.transition(&b).add(&b, &g.transition(&b)).unwrap());
    }

    #[test]
    fn mu_lands_in_the_relative_kernel(seed: u64, r in 0usize..2, s in 0usize..2, deg in 0u32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Algebra::poly1();
        let f = random_family(&b, &tower(&interval_pair()).ctx(r), deg, true, &mut rng, |g| b.random_elem(g, 3, 2));
        let g = random_family(&Integers, &tower(&interval_pair()).ctx(s), deg, true, &mut rng, small_int);
        let m = mu_tensor(&b, &[(f, g)]).unwrap();
        prop_assert_eq!(m.ctx.r(), r + s);
        prop_assert!(m.validate(&b).is_ok());
        prop_assert!(m.kernel_test().is_ok());
    }

    #[test]
    fn families_survive_json(seed: u64, which in 0usize..3, r in 0usize..2, deg in 0u32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Algebra::poly1();
        let ctx = tower(&pairs()[which]).ctx(r);
        let f = random_family(&b, &ctx, deg, false, &mut rng, |g| b.random_elem(g, 3, 2));
        let text = serde_json::to_string(&codec::encode_family(&b, &f)).unwrap();
        let (_, back) = codec::decode_family(&codec::from_str(&text).unwrap()).unwrap();
        prop_assert!(back.eq_by_labels(&f));
    }

    #[test]
    fn sets_survive_json(n in 0usize..3, k in 0usize..2) {
        let set = tower(&cube_pair(n)).level(k).set().clone();
        let doc = codec::set_to_doc(&set);
        let back = codec::set_from_doc(doc.clone()).unwrap();
        prop_assert_eq!(serde_json::to_value(codec::set_to_doc(&back)).unwrap(), serde_json::to_value(doc).unwrap());
    }

    #[test]
    fn certificates_survive_json_and_reversal(seed: u64, links in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Algebra::poly1();
        let chain = random_chain(&mut rng, links, 1, 2).unwrap();
        prop_assert!(check_cert(&b, &chain).unwrap().ok);
        let doc = codec::encode_cert(&b, &chain, None).unwrap();
        let (_, back) = codec::decode_cert(&codec::from_str(&serde_json::to_string(&doc).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(&back, &chain);
        let rev = reverse(&b, &chain).unwrap();
        prop_assert!(check_cert(&b, &rev).unwrap().ok);
        prop_assert_eq!(&rev.start().unwrap().images, &chain.end().unwrap().images);
        prop_assert_eq!(&rev.end().unwrap().images, &chain.start().unwrap().images);
        prop_assert_eq!(reverse(&b, &rev).unwrap(), chain);
    }

    #[test]
    fn integer_systems_are_solved_or_refuted((a, cols) in matrix(), b in prop::collection::vec(-6i64..=6, 3)) {
        let b: Vec<BigInt> = b.into_iter().cycle().take(a.len()).map(BigInt::from).collect();
        match solve(&a, cols, &b) {
            Solution::Solved(x) => {
                for (row, bi) in a.iter().zip(&b) {
                    let lhs: BigInt = row.iter().zip(&x).map(|(p, q)| p * q).sum();
                    prop_assert_eq!(&lhs, bi);
                }
            }
            Solution::Infeasible(cert) => prop_assert!(cert.verify(&a, cols, &b)),
        }
        for v in kernel(&a, cols) {
            prop_assert!(v.iter().any(|c| *c != BigInt::from(0)));
            for row in &a {
                let s: BigInt = row.iter().zip(&v).map(|(p, q)| p * q).sum();
                prop_assert_eq!(s, BigInt::from(0));
            }
        }
    }

    #[test]
    fn projection_onto_j_is_idempotent(seed: u64, level in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = TensorAlgebra::new(Algebra::poly1());
        let x = t.random_elem(level, &mut rng, 4, 2);
        let p = t.proj_j(level, &x).unwrap();
        prop_assert!(t.in_j(level, &p).unwrap());
        prop_assert!(t.eta(level, &p).unwrap().is_zero());
    }
}
