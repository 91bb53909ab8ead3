mod oracle;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pvkit_core::algebra::{ConstantsField, Poly, RatFunc};
use pvkit_core::module::{fixed_vectors, scalar_rational_solutions, DifferenceModule};
use pvkit_core::ring::{constants_of, simplicity_certificate, DifferenceRing, RingElement};

fn q() -> ConstantsField {
    ConstantsField::rationals()
}

fn rings() -> Vec<DifferenceRing> {
    let k = q();
    vec![
        DifferenceRing::shift_field(&k),
        DifferenceRing::q_dilation(&k, k.from_int(3)).unwrap(),
        DifferenceRing::cyclic_product(&k, 3).unwrap(),
        DifferenceRing::permutation_product(&k, vec![1, 0, 2]).unwrap(),
        DifferenceRing::shift_field(&ConstantsField::gaussian()),
    ]
}

fn ratfunc(k: &ConstantsField, num: &[i64], den: &[i64]) -> RatFunc {
    RatFunc::new(Poly::from_ints(k, num), Poly::from_ints(k, den)).unwrap()
}

fn elem(f: RatFunc) -> RingElement {
    RingElement::Fn(f)
}

fn tau(ring: &DifferenceRing, f: &RatFunc) -> RatFunc {
    ring.tau_ratfunc(f, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tau_is_an_automorphism(seed in any::<u64>(), which in 0usize..5) {
        let ring = &rings()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ring.random_element(&mut rng);
        let b = ring.random_element(&mut rng);
        let t = |e: &RingElement| ring.tau_apply(e, 1).unwrap();
        prop_assert_eq!(t(&ring.mul(&a, &b).unwrap()), ring.mul(&t(&a), &t(&b)).unwrap());
        prop_assert_eq!(t(&ring.add(&a, &b).unwrap()), ring.add(&t(&a), &t(&b)).unwrap());
        prop_assert_eq!(ring.tau_apply(&t(&a), -1).unwrap(), a);
    }

    #[test]
    fn affine_solutions_are_sound(
        num in prop::collection::vec(-3i64..=3, 1..3),
        shift in -3i64..=3,
        c in prop::sample::select(vec![1i64, -1, 2]),
    ) {
        let k = q();
        let ring = DifferenceRing::shift_field(&k);
        let a = ratfunc(&k, &[shift, 1], &[0, 1]).scale(&k.from_int(c));
        prop_assume!(!Poly::from_ints(&k, &num).is_zero());
        // y = num / (x + 7) is a solution of tau(y) = a y + b by construction
        let y = ratfunc(&k, &num, &[7, 1]);
        let b = tau(&ring, &y).sub_ref(&a.mul_ref(&y));
        let sol = scalar_rational_solutions(&ring, &elem(a.clone()), &elem(b.clone())).unwrap();
        let p = sol.particular.expect("a solution exists");
        prop_assert_eq!(tau(&ring, &p), a.mul_ref(&p).add_ref(&b));
        for h in &sol.homogeneous {
            prop_assert_eq!(tau(&ring, h), a.mul_ref(h));
        }
        prop_assert!(oracle::in_span(&k, &y.sub_ref(&p), &sol.homogeneous));
    }
}

#[test]
fn constants_of_base_rings() {
    let copies: Vec<usize> = rings().iter().map(|r| constants_of(r).copies).collect();
    assert_eq!(copies, vec![1, 1, 1, 2, 1]);
    for r in rings() {
        let c = constants_of(&r);
        for e in &c.basis {
            assert_eq!(&r.tau_apply(e, 1).unwrap(), e);
        }
    }
}

#[test]
fn constants_agree_with_brute_force() {
    let k = q();
    for r in [DifferenceRing::shift_field(&k), DifferenceRing::q_dilation(&k, k.from_int(2)).unwrap()] {
        assert_eq!(oracle::function_constants_ansatz(&r, 6), 1);
    }
    for (r, dim) in [
        (DifferenceRing::cyclic_product(&k, 4).unwrap(), 1),
        (DifferenceRing::permutation_product(&k, vec![1, 0, 3, 2]).unwrap(), 2),
    ] {
        assert_eq!(oracle::product_constants_dimension(&r), dim);
        assert_eq!(constants_of(&r).copies, dim);
    }
}

#[test]
fn simplicity_of_fields_and_products() {
    let k = q();
    assert!(simplicity_certificate(&DifferenceRing::shift_field(&k)).is_simple());
    assert!(simplicity_certificate(&DifferenceRing::cyclic_product(&k, 3).unwrap()).is_simple());
    assert!(!simplicity_certificate(&DifferenceRing::permutation_product(&k, vec![0, 1]).unwrap()).is_simple());
}

#[test]
fn homogeneous_solutions_match_interpolation() {
    let k = q();
    let ring = DifferenceRing::shift_field(&k);
    let cases = [
        ratfunc(&k, &[1, 1], &[0, 1]),
        ratfunc(&k, &[2, 1], &[-5, 1]),
        ratfunc(&k, &[0, 1], &[1]),
        ratfunc(&k, &[-1], &[1]),
        ratfunc(&k, &[1, 0, 1], &[2, 2, 1]),
    ];
    for a in cases {
        let sol = scalar_rational_solutions(&ring, &elem(a.clone()), &ring.zero()).unwrap();
        let brute = oracle::coboundary_by_interpolation(&ring, &a, 10);
        assert_eq!(sol.homogeneous.len(), usize::from(brute.is_some()), "a = {a}");
        if let Some(h) = brute {
            assert!(oracle::in_span(&k, &h, &sol.homogeneous));
        }
    }
}

#[test]
fn inconsistent_equation_still_reports_kernel() {
    let k = q();
    let ring = DifferenceRing::shift_field(&k);
    // tau(y) = (x+1)/x y + 1: y = x h with h(x+1) - h(x) = 1/(x+1), no rational h
    let a = ratfunc(&k, &[1, 1], &[0, 1]);
    let sol = scalar_rational_solutions(&ring, &elem(a.clone()), &ring.one()).unwrap();
    assert!(sol.particular.is_none());
    assert_eq!(sol.homogeneous.len(), 1);
    assert_eq!(tau(&ring, &sol.homogeneous[0]), a.mul_ref(&sol.homogeneous[0]));
}

#[test]
fn module_constructions() {
    let k = q();
    let ring = DifferenceRing::shift_field(&k);
    let a = elem(ratfunc(&k, &[0, 1], &[1]));
    let b = elem(ratfunc(&k, &[3], &[1]));
    let ma = DifferenceModule::rank_one(&ring, a.clone()).unwrap();
    let mb = DifferenceModule::rank_one(&ring, b.clone()).unwrap();
    let t = ma.tensor(&mb).unwrap();
    assert_eq!(t.diagonal_entries().unwrap(), vec![ring.mul(&a, &b).unwrap()]);
    assert_eq!(ma.dual().diagonal_entries().unwrap(), vec![ring.inv(&a).unwrap()]);
    assert_eq!(ma.dsum(&mb).unwrap().rank(), 2);
    // the pairing of M with its dual is tau-equivariant
    let d = DifferenceModule::diagonal(&ring, &[a.clone(), b.clone()]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v: Vec<RingElement> = (0..2).map(|_| ring.random_element(&mut rng)).collect();
    let w: Vec<RingElement> = (0..2).map(|_| ring.random_element(&mut rng)).collect();
    let lhs = d.pairing(&d.apply_tau(&v).unwrap(), &d.dual().apply_tau(&w).unwrap()).unwrap();
    assert_eq!(lhs, ring.tau_apply(&d.pairing(&v, &w).unwrap(), 1).unwrap());
    assert_eq!(d.apply_tau_inverse(&d.apply_tau(&v).unwrap()).unwrap(), v);
}

#[test]
fn fixed_vectors_of_diagonal_modules() {
    let k = q();
    let ring = DifferenceRing::shift_field(&k);
    // basis scalar x/(x+1): fixed vectors solve x/(x+1) v(x+1) = v, so v = c x
    let m = DifferenceModule::diagonal(
        &ring,
        &[elem(ratfunc(&k, &[0, 1], &[1, 1])), elem(ratfunc(&k, &[2], &[1]))],
    )
    .unwrap();
    let f = fixed_vectors(&m).unwrap();
    assert_eq!(f.dim(), 1);
    for v in &f.vectors {
        assert_eq!(&m.apply_tau(v).unwrap(), v);
    }
}
