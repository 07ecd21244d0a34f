use proptest::prelude::*;

use projic::cocycle::{check_cocycle, cocycle_degree, var_names};
use projic::json::{poly_from_json, poly_to_json};
use projic::lattice::{exact_divide, ideal_membership};
use projic::matrix::RingMatrix;
use projic::oracle::{all_matrices, enumerate_points, DEFAULT_CAP};
use projic::parse::{parse_poly, parse_ring};
use projic::picard::{classify_line_bundle, twisting_cocycle, LineBundle};
use projic::poly::{
    homogeneous_components, is_homogeneous_of_degree, is_unit_poly, laurent_unit_decompose, monic_divide,
    unit_inverse, verify_scaling_identity,
};
use projic::projmod::{minor_ideal_rank_one_check, rank_one_split, verify_split, FreenessResult};
use projic::projspace::{
    apply_homogeneous_map, find_nonvanishing_certificate, normalize_point, pgl_act, quadric_violation, veronese_map,
};
use projic::{Elem, LaurentPoly, Ring};

fn rings() -> Vec<Ring> {
    vec![
        Ring::integers(),
        Ring::zmod(4).unwrap(),
        Ring::zmod(12).unwrap(),
        Ring::f4(),
        parse_ring("Z/9[t]/(t^2)").unwrap(),
        parse_ring("Z[x]/(x^2+5)").unwrap(),
    ]
}

fn elem(ring: &Ring, seed: &[i64]) -> Elem {
    match ring.base() {
        None => ring.from_i64(seed[0]),
        Some(base) => {
            let cs: Vec<Elem> = seed.iter().map(|&s| base.from_i64(s)).collect();
            ring.from_coeffs(&cs).unwrap()
        }
    }
}

fn poly(ring: &Ring, coeffs: &[[i64; 2]], low: i64) -> LaurentPoly {
    LaurentPoly::from_terms(ring, &["X"], coeffs.iter().enumerate().map(|(k, c)| (vec![low + k as i64], elem(ring, c))))
}

fn coeff_seeds(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<[i64; 2]>> {
    prop::collection::vec([-20i64..20, -20i64..20], len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(r in 0usize..6, a in [-50i64..50, -50i64..50], b in [-50i64..50, -50i64..50], c in [-50i64..50, -50i64..50]) {
        let ring = &rings()[r];
        let (a, b, c) = (elem(ring, &a), elem(ring, &b), elem(ring, &c));
        prop_assert_eq!(ring.mul(&a, &ring.add(&b, &c)), ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)));
        prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
        prop_assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
        prop_assert!(ring.is_zero(&ring.add(&a, &ring.neg(&a))));
        if let Some(inv) = ring.try_invert(&a) {
            prop_assert!(ring.is_one(&ring.mul(&a, &inv)));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(r in 0usize..6, p in coeff_seeds(1..5), q in coeff_seeds(1..5), x in [-9i64..9, -9i64..9]) {
        let ring = &rings()[r];
        let (p, q) = (poly(ring, &p, 0), poly(ring, &q, 0));
        let x = [elem(ring, &x)];
        let pq = (&p * &q).eval(&x).unwrap();
        prop_assert_eq!(pq, ring.mul(&p.eval(&x).unwrap(), &q.eval(&x).unwrap()));
        let sum = (&p + &q).eval(&x).unwrap();
        prop_assert_eq!(sum, ring.add(&p.eval(&x).unwrap(), &q.eval(&x).unwrap()));
    }

    #[test]
    fn monic_division_identity(r in 0usize..6, f in coeff_seeds(1..7), g in coeff_seeds(0..4)) {
        let ring = &rings()[r];
        let f = poly(ring, &f, 0);
        let g = &poly(ring, &g, 0) + &LaurentPoly::from_terms(ring, &["X"], [(vec![g.len() as i64], ring.one())]);
        let (q, rem) = monic_divide(&f, &g).unwrap();
        prop_assert_eq!(&(&q * &g) + &rem, f);
        prop_assert!(rem.degree().unwrap_or(-1) < g.degree().unwrap());
    }

    #[test]
    fn unit_inverses_multiply_to_one(nil in prop::collection::vec(0i64..2, 0..5), shift in -3i64..3, u in prop::sample::select(vec![1i64, 3, 5, 7])) {
        let ring = Ring::zmod(8).unwrap();
        // u X^shift plus nilpotent noise at other degrees
        let mut p = LaurentPoly::from_terms(&ring, &["X"], [(vec![shift], ring.from_i64(u))]);
        for (k, c) in nil.iter().enumerate() {
            let e = if k as i64 >= shift { k as i64 + 1 } else { k as i64 };
            p = &p + &LaurentPoly::from_terms(&ring, &["X"], [(vec![e - 2], ring.from_i64(4 * c + 2 * (k as i64 % 2)))]);
        }
        let inv = unit_inverse(&p).expect("unit");
        prop_assert!((&p * &inv).is_one());
        let dec = laurent_unit_decompose(&p).unwrap();
        prop_assert!(dec.verify(&p));
        if p.is_polynomial() {
            prop_assert_eq!(is_unit_poly(&p).unwrap().is_some(), shift == 0);
        }
    }

    #[test]
    fn homogeneous_parts_recombine(terms in prop::collection::vec(([0i64..4, 0i64..4, 0i64..4], -9i64..9), 0..8), lambda in -5i64..5) {
        let ring = Ring::integers();
        let names = var_names(2);
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        let p = LaurentPoly::from_terms(&ring, &vars, terms.iter().map(|(e, c)| (e.to_vec(), ring.from_i64(*c))));
        let comps = homogeneous_components(&p).unwrap();
        let sum = comps.values().fold(p.zero_like(), |acc, c| &acc + c);
        prop_assert_eq!(sum, p.clone());
        for (d, c) in &comps {
            prop_assert!(is_homogeneous_of_degree(c, *d));
            prop_assert!(verify_scaling_identity(c, *d));
            let x = [ring.from_i64(2), ring.from_i64(-1), ring.from_i64(3)];
            let scaled: Vec<Elem> = x.iter().map(|v| ring.mul(v, &ring.from_i64(lambda))).collect();
            let lhs = c.eval(&scaled).unwrap();
            let rhs = ring.mul(&ring.pow(&ring.from_i64(lambda), *d as u64), &c.eval(&x).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn text_and_json_round_trip(r in 0usize..6, p in coeff_seeds(0..6), low in -3i64..3) {
        let ring = &rings()[r];
        let p = poly(ring, &p, low);
        let text = p.to_string();
        prop_assert_eq!(parse_poly(ring, &text, Some(p.vars())).unwrap(), p.clone());
        prop_assert_eq!(poly_from_json(&poly_to_json(&p), None, None).unwrap(), p);
    }

    #[test]
    fn twisting_degrees_add(n in 1usize..4, d1 in -4i64..4, d2 in -4i64..4) {
        let ring = Ring::zmod(4).unwrap();
        let a = twisting_cocycle(n, d1, &ring).unwrap();
        let b = twisting_cocycle(n, d2, &ring).unwrap();
        let t = a.tensor(&b).unwrap();
        prop_assert!(check_cocycle(&t).ok);
        prop_assert_eq!(cocycle_degree(&t).unwrap(), d1 + d2);
        let mut bundle = LineBundle::new(t.dual());
        prop_assert_eq!(classify_line_bundle(&mut bundle).unwrap().0, -(d1 + d2));
    }

    #[test]
    fn coboundary_twists_keep_the_degree(n in 1usize..4, d in -3i64..3, seeds in prop::collection::vec((0usize..4, 1i64..3), 4)) {
        let ring = Ring::zmod(4).unwrap();
        let c = twisting_cocycle(n, d, &ring).unwrap();
        let names = var_names(n);
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        // r_i = 1 + 2 (X_k / X_i)^e with k != i
        let r: Vec<LaurentPoly> = (0..=n)
            .map(|i| {
                let (k, e) = seeds[i];
                let k = if k % (n + 1) == i { (i + 1) % (n + 1) } else { k % (n + 1) };
                let mut exp = vec![0; n + 1];
                exp[i] -= e;
                exp[k] += e;
                LaurentPoly::from_terms(&ring, &vars, [(vec![0; n + 1], ring.one()), (exp, ring.from_i64(2))])
            })
            .collect();
        let twisted = c.twist_by(&r).unwrap();
        prop_assert!(check_cocycle(&twisted).ok);
        let mut bundle = LineBundle::new(twisted);
        let (deg, _) = classify_line_bundle(&mut bundle).unwrap();
        prop_assert_eq!(deg, d);
        prop_assert!(bundle.classification.unwrap().verify(&bundle.cocycle));
    }

    #[test]
    fn maps_ignore_the_representative(coords in [0i64..4, 0i64..4, 0i64..4], u in prop::sample::select(vec![1i64, 3])) {
        let ring = Ring::zmod(4).unwrap();
        let v: Vec<Elem> = coords.iter().map(|&c| ring.from_i64(c)).collect();
        prop_assume!(v.iter().any(|x| ring.is_unit(x)));
        let x = normalize_point(&ring, &v).unwrap();
        let scaled: Vec<Elem> = v.iter().map(|c| ring.mul(c, &ring.from_i64(u))).collect();
        prop_assert_eq!(normalize_point(&ring, &scaled).unwrap(), x.clone());

        let names = var_names(2);
        let vars: Vec<&str> = names.iter().map(String::as_str).collect();
        let mono = |e: [i64; 3]| LaurentPoly::from_terms(&ring, &vars, [(e.to_vec(), ring.one())]);
        let p = [mono([2, 0, 0]), &mono([1, 1, 0]) + &mono([0, 0, 2]), mono([0, 2, 0]), mono([0, 0, 2])];
        let cert = find_nonvanishing_certificate(&p, 4).unwrap();
        let a = apply_homogeneous_map(&p, &cert, &x).unwrap();
        let b = apply_homogeneous_map(&p, &cert, &normalize_point(&ring, &scaled).unwrap()).unwrap();
        prop_assert_eq!(a, b);

        let z = veronese_map(2, &x).unwrap();
        prop_assert!(quadric_violation(2, 2, z.coords(), &ring).is_none());
    }

    #[test]
    fn membership_certificates_replay(a in [-30i64..30, -30i64..30], b in [-30i64..30, -30i64..30], t in [-30i64..30, -30i64..30]) {
        let ring = parse_ring("Z[x]/(x^2+5)").unwrap();
        let (a, b, t) = (elem(&ring, &a), elem(&ring, &b), elem(&ring, &t));
        let gens = [a.clone(), b.clone()];
        let target = ring.add(&ring.mul(&a, &t), &ring.mul(&b, &ring.add(&t, &ring.one())));
        let c = ideal_membership(&ring, &gens, &target).expect("member by construction");
        prop_assert_eq!(ring.add(&ring.mul(&c[0], &a), &ring.mul(&c[1], &b)), target);
        if !ring.is_zero(&b) {
            prop_assert_eq!(exact_divide(&ring, &ring.mul(&a, &b), &b).unwrap(), a);
        }
    }
}

#[test]
fn scalar_matrices_act_trivially() {
    for n in [4u64, 9] {
        let ring = Ring::zmod(n).unwrap();
        let points = enumerate_points(2, &ring).unwrap();
        for u in ring.elements().unwrap().into_iter().filter(|u| ring.is_unit(u)) {
            let zero = ring.zero();
            let rows = (0..3).map(|i| (0..3).map(|j| if i == j { u.clone() } else { zero.clone() }).collect()).collect();
            let m = RingMatrix::from_elems(&ring, rows).unwrap();
            assert!(points.iter().all(|p| pgl_act(&m, p).unwrap() == *p));
        }
    }
}

/// Every rank-one idempotent over Z/4 and Z/6 splits exactly when a brute-force `x, y` exists.
#[test]
fn splits_agree_with_exhaustive_search() {
    for n in [4u64, 6] {
        let ring = Ring::zmod(n).unwrap();
        let elems = ring.elements().unwrap();
        for e in all_matrices(&ring, 2, DEFAULT_CAP).unwrap() {
            if !e.is_idempotent() || !minor_ideal_rank_one_check(&e).unwrap().ok {
                continue;
            }
            let brute = elems.iter().flat_map(|a| elems.iter().map(move |b| (a, b))).any(|(a, b)| {
                elems.iter().flat_map(|c| elems.iter().map(move |d| (c, d))).any(|(c, d)| {
                    verify_split(&e, &[a.clone(), b.clone()], &[c.clone(), d.clone()])
                })
            });
            match rank_one_split(&e, DEFAULT_CAP as u128).unwrap() {
                FreenessResult::Split { x, y } => {
                    assert!(brute && verify_split(&e, &x, &y), "{:?}", e.elems());
                }
                FreenessResult::NonFree(_) => assert!(!brute, "{:?}", e.elems()),
            }
        }
    }
}
