use proptest::prelude::*;

use pvkit_core::algebra::{
    integer_kernel, multiplicative_relations, poly_factor, smith_normal_form, ConstantsField, IntegerLattice, Poly,
    RatFunc,
};

fn q() -> ConstantsField {
    ConstantsField::rationals()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 1..6)
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter().map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_evaluates_pointwise(a in coeffs(), b in coeffs(), x in -20i64..20) {
        let k = q();
        let (pa, pb) = (Poly::from_ints(&k, &a), Poly::from_ints(&k, &b));
        let x = k.from_int(x);
        prop_assert_eq!(pa.mul_ref(&pb).eval(&x), pa.eval(&x).mul_ref(&pb.eval(&x)));
        prop_assert_eq!(pa.add_ref(&pb).eval(&x), pa.eval(&x).add_ref(&pb.eval(&x)));
    }

    #[test]
    fn division_with_remainder(a in coeffs(), b in coeffs()) {
        let k = q();
        let (pa, pb) = (Poly::from_ints(&k, &a), Poly::from_ints(&k, &b));
        prop_assume!(!pb.is_zero());
        let (quo, rem) = pa.divrem(&pb);
        prop_assert_eq!(quo.mul_ref(&pb).add_ref(&rem), pa);
        prop_assert!(rem.is_zero() || rem.deg() < pb.deg());
    }

    #[test]
    fn gcd_divides_both(a in coeffs(), b in coeffs(), c in coeffs()) {
        let k = q();
        let pc = Poly::from_ints(&k, &c);
        prop_assume!(!pc.is_zero());
        let pa = Poly::from_ints(&k, &a).mul_ref(&pc);
        let pb = Poly::from_ints(&k, &b).mul_ref(&pc);
        prop_assume!(!pa.is_zero() && !pb.is_zero());
        let g = pa.gcd(&pb);
        prop_assert!(g.divides(&pa) && g.divides(&pb));
        prop_assert!(pc.divides(&g));
    }

    #[test]
    fn factorization_reconstructs(a in coeffs(), b in coeffs()) {
        let k = q();
        let p = Poly::from_ints(&k, &a).mul_ref(&Poly::from_ints(&k, &b));
        prop_assume!(!p.is_zero() && !p.is_constant());
        let f = poly_factor(&p).unwrap();
        prop_assert_eq!(f.expand(), p);
        for (g, _) in &f.factors {
            prop_assert!(g.is_monic());
            prop_assert!(poly_factor(g).unwrap().is_irreducible());
        }
    }

    #[test]
    fn shift_is_translation(a in coeffs(), s in -5i64..5, x in -10i64..10) {
        let k = q();
        let p = Poly::from_ints(&k, &a);
        prop_assert_eq!(p.shift(s).eval(&k.from_int(x)), p.eval(&k.from_int(x + s)));
    }

    #[test]
    fn snf_witnesses(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 3), 1..4)) {
        let s = smith_normal_form(&rows, 3);
        let d = mat_mul(&mat_mul(&s.u, &rows), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                prop_assert_eq!(*v, if i == j { s.d[i] } else { 0 });
            }
        }
        let id = mat_mul(&s.v, &s.v_inv);
        for (i, row) in id.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                prop_assert_eq!(*v, i64::from(i == j));
            }
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 4), 1..4)) {
        let ker = integer_kernel(&rows, 4);
        for v in &ker {
            for r in &rows {
                prop_assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
        }
    }
}

#[test]
fn rational_function_normal_form() {
    let k = q();
    let num = Poly::from_ints(&k, &[-1, 0, 1]);
    let den = Poly::from_ints(&k, &[2, 2]);
    let f = RatFunc::new(num, den).unwrap();
    // (x^2 - 1) / (2x + 2) = (x - 1) / 2
    assert!(f.is_polynomial());
    assert_eq!(f.num(), &Poly::from_ints(&k, &[-1, 1]).scale(&k.from_int(2).inv().unwrap()));
    assert!(RatFunc::new(Poly::one(&k), Poly::zero(&k)).is_err());
}

#[test]
fn lattice_operations() {
    let a = IntegerLattice::new(2, &[vec![2, 0], vec![0, 3]]);
    let b = IntegerLattice::new(2, &[vec![1, 1]]);
    assert_eq!(a.index(), Some(6));
    assert!(a.contains(&[4, -3]));
    assert!(!a.contains(&[1, 0]));
    let s = a.sum(&b);
    assert!(s.contains(&[1, 1]) && s.contains_lattice(&a));
    // (1,1)Z meets 2Z x 3Z in (6,6)Z
    let i = a.intersect(&b);
    assert_eq!(i.rank(), 1);
    assert!(i.contains(&[6, 6]) && !i.contains(&[2, 2]));
}

#[test]
fn multiplicative_relations_of_rationals() {
    let k = q();
    // 2, 3, 12 = 2^2 * 3 and -1
    let cs = [k.from_int(2), k.from_int(3), k.from_int(12), k.from_int(-1)];
    let l = multiplicative_relations(&cs).unwrap();
    assert!(l.contains(&[2, 1, -1, 0]));
    assert!(l.contains(&[0, 0, 0, 2]));
    assert!(!l.contains(&[0, 0, 0, 1]));
    assert_eq!(l.rank(), 2);
}

#[test]
fn gaussian_units() {
    let k = ConstantsField::gaussian();
    let i = k.generator();
    assert!(i.pow(4).unwrap().is_one());
    assert!(!i.pow(2).unwrap().is_one());
    let l = multiplicative_relations(&[i]).unwrap();
    assert!(l.contains(&[4]) && !l.contains(&[2]));
}
