//! Acceptance suite: one pass/fail line per criterion, all checks exact.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pvkit_core::algebra::{poly_factor, smith_normal_form, ConstantsField, FieldElement, Poly, RatFunc, Q};
use pvkit_core::basechange::{extend_constants, galois_commutation_check, split_and_analyze};
use pvkit_core::galois::{
    automorphism_count_check, descend, fibre_functor, fixed_subring_check, galois_group, DiagonalizableGroup,
};
use pvkit_core::module::{scalar_rational_solutions, DifferenceModule};
use pvkit_core::pv::{construct_pv, pv_isomorphism, tau_coboundary, universal_pv, verify_pv, PvPresentation};
use pvkit_core::ring::{constants_of, total_fractions_check, DifferenceRing, RingElement};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn qfield() -> ConstantsField {
    ConstantsField::rationals()
}

fn poly(k: &ConstantsField, c: &[i64]) -> Poly {
    Poly::from_ints(k, c)
}

fn func(e: &RingElement) -> RatFunc {
    e.as_ratfunc().unwrap().clone()
}

fn fe(e: RatFunc) -> RingElement {
    RingElement::Fn(e)
}

/// Irreducible factors used to build random instances.
fn pool(k: &ConstantsField) -> Vec<Poly> {
    vec![poly(k, &[0, 1]), poly(k, &[2, 1]), poly(k, &[1, 0, 1]), poly(k, &[-3, 1])]
}

/// A random product of shifted pool factors with exponents in `-1..=1`.
fn random_small(k: &ConstantsField, rng: &mut ChaCha8Rng, factors: usize) -> RatFunc {
    let p = pool(k);
    let mut f = RatFunc::one(k);
    for _ in 0..factors {
        let g = p[rng.gen_range(0..p.len())].shift(rng.gen_range(-2..=2));
        match rng.gen_range(0..3) {
            0 => f = f.mul_ref(&RatFunc::from_poly(g)),
            1 => f = f.div_ref(&RatFunc::from_poly(g)).unwrap(),
            _ => {}
        }
    }
    f
}

fn tau_of(ring: &DifferenceRing, f: &RatFunc) -> RatFunc {
    func(&ring.tau_apply(&fe(f.clone()), 1).unwrap())
}

// ---------------------------------------------------------------- 1

fn criterion_1() -> Check {
    let q = qfield();
    let gi = ConstantsField::gaussian();
    let rings = vec![
        DifferenceRing::shift_field(&q),
        DifferenceRing::shift_field(&gi),
        ok(DifferenceRing::q_dilation(&q, q.from_int(2)))?,
        ok(DifferenceRing::cyclic_product(&q, 3))?,
    ];
    for ring in &rings {
        let c = constants_of(ring);
        let oracle_dim = if ring.product_len().is_some() {
            oracle::product_constants_dimension(ring)
        } else {
            oracle::function_constants_ansatz(ring, 8)
        };
        ensure!(c.field == *ring.field(), "{}: constants over {} not {}", ring.describe(), c.field, ring.field());
        ensure!(
            c.basis.len() == oracle_dim,
            "{}: library dimension {} but ansatz dimension {}",
            ring.describe(),
            c.basis.len(),
            oracle_dim
        );
        for b in &c.basis {
            ensure!(ok(ring.tau_apply(b, 1))? == *b, "{}: basis element {b} not fixed", ring.describe());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Check {
    let q = qfield();
    let poly_ring = DifferenceRing::shift_poly(&q);
    let (s, rep) = ok(total_fractions_check(&poly_ring))?;
    ensure!(rep.c_r_is_field && rep.c_s_equals_c_r, "Q[x]: {rep:?}");
    // tau(p) = p in degree <= 8 is only the constants, on R and on S = Q(x)
    ensure!(oracle::function_constants_ansatz(&poly_ring, 8) == 1, "oracle finds new constants in Q[x]");
    ensure!(oracle::function_constants_ansatz(&s, 8) == 1, "oracle finds new constants in Q(x)");
    ensure!(s == DifferenceRing::shift_field(&q), "fractions of Q[x] is {}", s.describe());

    let cyc = ok(DifferenceRing::cyclic_product(&ConstantsField::gaussian(), 3))?;
    let (s, rep) = ok(total_fractions_check(&cyc))?;
    ensure!(rep.c_r_is_field && rep.c_s_equals_c_r, "Q(i)^3: {rep:?}");
    ensure!(oracle::product_constants_dimension(&cyc) == 1, "oracle: R constants not one dimensional");
    ensure!(oracle::product_constants_dimension(&s) == 1, "oracle: S constants not one dimensional");
    ensure!(constants_of(&s).label() == rep.constants_s, "constants of S disagree");
    Ok(())
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Check {
    let q = qfield();
    let shift = DifferenceRing::shift_field(&q);
    let qdil = ok(DifferenceRing::q_dilation(&q, q.from_int(2)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..200 {
        let (ring, is_q) = if i % 2 == 0 { (&shift, false) } else { (&qdil, true) };
        let r = random_small(&q, &mut rng, 2).scale(&q.from_int(rng.gen_range(1..=5)));
        // the constant factor must itself be a coboundary: 1 for the shift,
        // a power of q for the dilation (q^m = tau(x^m)/x^m)
        let m = if is_q { rng.gen_range(-2..=2) } else { 0 };
        let c = q.from_int(2).pow(m).unwrap();
        let a = tau_of(ring, &r).div_ref(&r).unwrap().scale(&c);
        let lib = ok(tau_coboundary(ring, &fe(a.clone())))?;
        let Some(w) = lib else { return Err(format!("no witness for {a} over {}", ring.describe())) };
        let w = func(&w);
        ensure!(tau_of(ring, &w) == a.mul_ref(&w), "witness {w} fails for {a}");
        ensure!(oracle::coboundary_by_interpolation(ring, &a, 6).is_some(), "oracle misses {a}");
    }
    for i in 0..200 {
        let ring = if i % 2 == 0 { &shift } else { &qdil };
        let r = random_small(&q, &mut rng, 2);
        let p = &pool(&q)[rng.gen_range(0..4)];
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        // one extra factor gives a nonzero exponent sum on its orbit
        let a = tau_of(ring, &r).div_ref(&r).unwrap().mul_ref(&RatFunc::from_poly(p.clone()).pow(e).unwrap());
        ensure!(ok(tau_coboundary(ring, &fe(a.clone())))?.is_none(), "spurious witness for {a}");
        ensure!(oracle::coboundary_by_interpolation(ring, &a, 6).is_none(), "oracle finds a witness for {a}");
    }
    Ok(())
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Check {
    let q = qfield();
    let ring = DifferenceRing::shift_field(&q);
    let x = func(&ok(ring.x())?);
    let one = RatFunc::one(&q);
    let table: Vec<(RatFunc, &str)> = vec![
        (one.clone(), "trivial"),
        (x.add_ref(&one).div_ref(&x).unwrap(), "trivial"),
        (RatFunc::from_int(&q, -1), "mu_2"),
        (RatFunc::from_int(&q, 2), "G_m"),
        (x.clone(), "G_m"),
    ];
    for (a, want) in &table {
        let g = ok(galois_group(&ok(DifferenceModule::rank_one(&ring, fe(a.clone())))?))?;
        ensure!(g.to_string() == *want, "a = {a}: group {g}, expected {want}");
        // oracle: the smallest k in 1..=4 with a^k a coboundary
        let order = (1..=4).find(|&k| oracle::coboundary_by_interpolation(&ring, &a.pow(k).unwrap(), 6).is_some());
        let expect = match order {
            Some(1) => "trivial".to_string(),
            Some(k) => format!("mu_{k}"),
            None => "G_m".to_string(),
        };
        ensure!(expect == *want, "oracle disagrees for a = {a}: {expect}");
    }

    let b = ok(DifferenceModule::from_recurrence(
        &ring,
        pvkit_core::algebra::Matrix::from_rows(vec![
            vec![ring.zero(), ring.from_int(-1)],
            vec![ring.one(), ring.zero()],
        ]),
    ))?;
    let sp = ok(split_and_analyze(&b))?;
    let gi = ConstantsField::gaussian();
    ensure!(sp.field().label() == "Q(i)", "split field {}", sp.field());
    ensure!(sp.group.to_string() == "mu_4", "rotation group {}", sp.group);
    ensure!(sp.group.field().label() == "Q(i)", "group over {}", sp.group.field());
    // oracle: eigenvalues are roots of y^2 + 1 and generate a cyclic group of order 4
    let mut values = BTreeSet::new();
    for l in &sp.eigenvalues {
        ensure!(l.mul_ref(l).add_ref(&sp.field().one()).is_zero(), "{l} is not a root of y^2 + 1");
    }
    for k1 in 0..4 {
        for k2 in 0..4 {
            let v = sp.eigenvalues[0].pow(k1).unwrap().mul_ref(&sp.eigenvalues[1].pow(k2).unwrap());
            values.insert(v.to_string());
        }
    }
    ensure!(values.len() == 4, "eigenvalue group has {} elements", values.len());
    ensure!(values.contains(&gi.generator().to_string()), "no element of order 4");
    ensure!(sp.group.order() == Some(4), "order {:?}", sp.group.order());
    Ok(())
}

// ---------------------------------------------------------------- 5

/// Modules whose presentations are checked throughout.
fn corpus() -> Vec<DifferenceModule> {
    let q = qfield();
    let gi = ConstantsField::gaussian();
    let r = DifferenceRing::shift_field(&q);
    let x = func(&r.x().unwrap());
    let one = RatFunc::one(&q);
    let c = |n: i64| r.from_int(n);
    let h = fe(x.add_ref(&one).div_ref(&x).unwrap());
    let h2 = fe(x.add_ref(&RatFunc::from_int(&q, 2)).div_ref(&x).unwrap());
    let mut out = vec![
        DifferenceModule::rank_one(&r, c(1)).unwrap(),
        DifferenceModule::rank_one(&r, c(-1)).unwrap(),
        DifferenceModule::rank_one(&r, h.clone()).unwrap(),
        DifferenceModule::rank_one(&r, h2).unwrap(),
        DifferenceModule::rank_one(&r, c(2)).unwrap(),
        DifferenceModule::rank_one(&r, fe(x.clone())).unwrap(),
        DifferenceModule::diagonal(&r, &[c(-1), c(2)]).unwrap(),
        DifferenceModule::diagonal(&r, &[c(-1), h]).unwrap(),
        DifferenceModule::diagonal(&r, &[c(2), c(4)]).unwrap(),
        DifferenceModule::diagonal(&r, &[c(-1), c(2), fe(x.clone())]).unwrap(),
    ];
    let ri = DifferenceRing::shift_field(&gi);
    let i = ri.constant(&gi.generator());
    out.push(DifferenceModule::diagonal(&ri, &[i.clone(), ri.neg(&i).unwrap()]).unwrap());
    out.push(DifferenceModule::rank_one(&ri, i).unwrap());
    let rq = DifferenceRing::q_dilation(&q, q.from_int(2)).unwrap();
    out.push(DifferenceModule::rank_one(&rq, rq.from_int(2)).unwrap());
    out.push(DifferenceModule::rank_one(&rq, rq.from_int(-1)).unwrap());
    out.push(DifferenceModule::rank_one(&rq, rq.from_int(3)).unwrap());
    out
}

fn criterion_5() -> Check {
    for m in corpus() {
        let s = ok(construct_pv(&m))?;
        let rep = ok(verify_pv(&s, &m))?;
        ensure!(rep.all_passed(), "{} failed: {rep}", m.render());
    }
    let q = qfield();
    let r = DifferenceRing::shift_field(&q);
    let x = func(&ok(r.x())?);
    let h = fe(x.add_ref(&RatFunc::one(&q)).div_ref(&x).unwrap());
    let mods = vec![ok(DifferenceModule::rank_one(&r, r.from_int(-1)))?, ok(DifferenceModule::rank_one(&r, h))?];
    let s = ok(universal_pv(&mods))?;
    let rep = ok(verify_pv(&s, &ok(mods[0].dsum(&mods[1]))?))?;
    ensure!(rep.all_passed(), "universal presentation failed: {rep}");

    // t^4 = 1 for a = -1: t^2 - 1 spans a proper stable ideal and t^2 is a new constant
    let m = ok(DifferenceModule::rank_one(&r, r.from_int(-1)))?;
    let bad = ok(PvPresentation::new(&r, vec![r.from_int(-1)], vec![(vec![4], r.one())]))?;
    let rep = ok(verify_pv(&bad, &m))?;
    ensure!(rep.failed_labels() == vec!['b', 'c'], "failed {:?}", rep.failed_labels());
    let wb = rep.condition('b').unwrap().witness.clone();
    let wc = rep.condition('c').unwrap().witness.clone();
    ensure!(wb.as_deref() == Some("t^2 - 1"), "(b) witness {wb:?}");
    ensure!(wc.as_deref() == Some("t^2"), "(c) witness {wc:?}");
    // check the witnesses directly in the mutated ring
    let t2 = ok(bad.monomial(&r.one(), &[2]))?;
    ensure!(ok(bad.tau(&t2))? == t2, "t^2 is not fixed");
    ensure!(bad.as_base(&t2).is_none(), "t^2 lies in R");
    let g = ok(bad.sub(&t2, &bad.one()))?;
    // tau(g) = g, so (g) is stable; g (t^2 + 1) = t^4 - 1 = 0 makes it proper
    ensure!(ok(bad.tau(&g))? == g, "t^2 - 1 is not fixed");
    ensure!(ok(bad.mul(&g, &ok(bad.add(&t2, &bad.one()))?))?.is_zero(), "t^2 - 1 is not a zero divisor");
    Ok(())
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mods = corpus();
    ensure!(mods.len() >= 10, "corpus too small");
    for m in mods.iter().take(10) {
        let s1 = ok(construct_pv(m))?;
        let ring = s1.ring().clone();
        let k = ring.field().clone();
        // rescale the generators by random constants u_i: t^lambda = r u^lambda
        let u: Vec<FieldElement> = (0..s1.generator_count()).map(|_| k.from_int(rng.gen_range(1..=4))).collect();
        let relations: Vec<(Vec<i64>, RingElement)> = s1
            .relations()
            .into_iter()
            .map(|(l, r)| {
                let c = l.iter().zip(&u).fold(k.one(), |acc, (e, ui)| acc.mul_ref(&ui.pow(*e).unwrap()));
                (l, ring.mul(&r, &ring.constant(&c)).unwrap())
            })
            .collect();
        let s2 = ok(PvPresentation::new(&ring, s1.scalars().to_vec(), relations))?;
        let iso = ok(pv_isomorphism(&s1, &s2))?;
        for i in 0..s1.generator_count() {
            let t = s1.generator(i);
            let lhs = ok(iso.apply(&ok(s1.tau(&t))?))?;
            let rhs = ok(s2.tau(&ok(iso.apply(&t))?))?;
            ensure!(lhs == rhs, "{}: map does not commute with tau on t{}", m.render(), i + 1);
        }
        for (l, r) in s1.relations() {
            let lhs = ok(iso.apply(&ok(s1.monomial(&ring.one(), &l))?))?;
            let mono = ok(s2.monomial(&ring.one(), &l))?;
            ensure!(lhs == ok(s2.mul(&mono, &ok(s2.lift(&r))?))?
                || lhs == ok(s2.lift(&r))?, "{}: relation {l:?} not preserved", m.render());
        }
        for _ in 0..5 {
            let f = ring.random_element(&mut rng);
            ensure!(ok(iso.apply(&ok(s1.lift(&f))?))? == ok(s2.lift(&f))?, "{}: {f} moved", m.render());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 7

/// `prod a_i^{k_i} * tau(r)/r`: a scalar in the category with character `k`.
fn in_category(s: &PvPresentation, k: &[i64], rng: &mut ChaCha8Rng) -> RingElement {
    let ring = s.ring();
    let mut b = ring.one();
    for (a, e) in s.scalars().iter().zip(k) {
        b = ring.mul(&b, &ring.pow(a, *e).unwrap()).unwrap();
    }
    let r = fe(random_small(ring.field(), rng, 2));
    let cob = ring.mul(&ring.tau_apply(&r, 1).unwrap(), &ring.inv(&r).unwrap()).unwrap();
    ring.mul(&b, &cob).unwrap()
}

fn same_class(s: &PvPresentation, a: &[i64], b: &[i64]) -> bool {
    let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    s.lattice().contains(&d)
}

fn criterion_7() -> Check {
    let q = qfield();
    let r = DifferenceRing::shift_field(&q);
    let x = ok(r.x())?;
    let m0 = ok(DifferenceModule::diagonal(&r, &[r.from_int(-1), r.from_int(2), x]))?;
    let s = ok(construct_pv(&m0))?;
    let n = s.generator_count();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let (r1, r2) = (1 + rng.gen_range(0..2), 1 + rng.gen_range(0..2));
        let mut build = |rank: usize| -> (DifferenceModule, Vec<Vec<i64>>) {
            let ks: Vec<Vec<i64>> = (0..rank).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let entries: Vec<RingElement> = ks.iter().map(|k| in_category(&s, k, &mut rng)).collect();
            (DifferenceModule::diagonal(&r, &entries).unwrap(), ks)
        };
        let (n1, k1) = build(r1);
        let (n2, k2) = build(r2);
        let w1 = ok(fibre_functor(&n1, &s))?;
        ensure!(w1.dimension == r1, "dimension {} for rank {r1}", w1.dimension);
        for (c, k) in w1.characters.iter().zip(&k1) {
            ensure!(same_class(&s, c, k), "character {c:?} for {k:?}");
        }
        let w12 = ok(fibre_functor(&ok(n1.tensor(&n2))?, &s))?;
        ensure!(w12.dimension == r1 * r2, "tensor dimension {}", w12.dimension);
        let mut expected: Vec<Vec<i64>> = Vec::new();
        for a in &k1 {
            for b in &k2 {
                expected.push(s.lattice().reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>()));
            }
        }
        let mut got: Vec<Vec<i64>> = w12.characters.iter().map(|c| s.lattice().reduce(c)).collect();
        expected.sort();
        got.sort();
        ensure!(got == expected, "tensor characters {got:?} vs {expected:?}");
        let wd = ok(fibre_functor(&n1.dual(), &s))?;
        for (c, k) in wd.characters.iter().zip(&k1) {
            let neg: Vec<i64> = k.iter().map(|v| -v).collect();
            ensure!(same_class(&s, c, &neg), "dual character {c:?} for {k:?}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 8

fn round_trip(s: &PvPresentation, chi: &[i64]) -> Check {
    let d = ok(descend(chi, s))?;
    let w = ok(fibre_functor(&d.module, s))?;
    ensure!(w.characters.len() == 1 && same_class(s, &w.characters[0], chi), "chi {chi:?} came back as {:?}", w.characters);
    // t^{-k} is a unit of S fixed by b tau(.)
    let b = d.module.diagonal_entries().unwrap()[0].clone();
    let neg: Vec<i64> = d.representative.iter().map(|v| -v).collect();
    let v = ok(s.monomial(&s.ring().one(), &neg))?;
    let bv = ok(s.scale(&b, &ok(s.tau(&v))?))?;
    ensure!(!v.is_zero() && bv == v, "descended module for {chi:?} is not trivial over S");
    Ok(())
}

fn criterion_8() -> Check {
    let q = qfield();
    let gi = ConstantsField::gaussian();
    let r = DifferenceRing::shift_field(&q);
    let ri = DifferenceRing::shift_field(&gi);
    let i = ri.constant(&gi.generator());
    let finite = vec![
        ok(construct_pv(&ok(DifferenceModule::rank_one(&r, r.from_int(-1)))?))?,
        ok(construct_pv(&ok(DifferenceModule::diagonal(&ri, &[i.clone(), ok(ri.neg(&i))?]))?))?,
        ok(construct_pv(&ok(DifferenceModule::rank_one(&r, r.one()))?))?,
    ];
    for s in &finite {
        let g = DiagonalizableGroup::of_presentation(s);
        let n = s.generator_count();
        // all characters: exponent vectors in a box, up to the lattice
        let mut classes: Vec<Vec<i64>> = Vec::new();
        let mut k = vec![0i64; n];
        loop {
            if !classes.iter().any(|c| same_class(s, c, &k)) {
                classes.push(k.clone());
            }
            let mut j = 0;
            while j < n {
                k[j] += 1;
                if k[j] < 4 {
                    break;
                }
                k[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
        ensure!(Some(classes.len() as u64) == g.order(), "{} classes for a group of order {:?}", classes.len(), g.order());
        for chi in &classes {
            round_trip(s, chi)?;
        }
    }
    let torus = vec![
        ok(construct_pv(&ok(DifferenceModule::rank_one(&r, r.from_int(2)))?))?,
        ok(construct_pv(&ok(DifferenceModule::diagonal(&r, &[r.from_int(-1), r.from_int(2)]))?))?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for t in 0..20 {
        let s = &torus[t % 2];
        let chi: Vec<i64> = (0..s.generator_count()).map(|_| rng.gen_range(-5..=5)).collect();
        round_trip(s, &chi)?;
    }
    let d = ok(descend(&[3], &torus[0]))?;
    ensure!(d.module.diagonal_entries().unwrap()[0] == r.from_int(8), "chi = 3 does not give M_8");
    Ok(())
}

// ---------------------------------------------------------------- 9

/// Count `t_i -> c_i t_i` with `c_i` among the given roots of unity that
/// respect every relation.
fn brute_force_automorphisms(s: &PvPresentation, roots: &[FieldElement]) -> usize {
    let n = s.generator_count();
    let rels = s.relations();
    let total = roots.len().pow(n as u32);
    (0..total)
        .filter(|idx| {
            let mut rest = *idx;
            let c: Vec<&FieldElement> = (0..n)
                .map(|_| {
                    let v = &roots[rest % roots.len()];
                    rest /= roots.len();
                    v
                })
                .collect();
            rels.iter().all(|(l, _)| {
                l.iter().zip(&c).fold(s.ring().field().one(), |acc, (e, ci)| acc.mul_ref(&ci.pow(*e).unwrap())).is_one()
            })
        })
        .count()
}

fn criterion_9() -> Check {
    let q = qfield();
    let gi = ConstantsField::gaussian();
    let r = DifferenceRing::shift_field(&q);
    let ri = DifferenceRing::shift_field(&gi);
    let i = ri.constant(&gi.generator());
    let mu2 = ok(construct_pv(&ok(DifferenceModule::rank_one(&r, r.from_int(-1)))?))?;
    let mu4 = ok(construct_pv(&ok(DifferenceModule::diagonal(&ri, &[i.clone(), ok(ri.neg(&i))?]))?))?;
    let roots_q = vec![q.one(), q.from_int(-1)];
    let ig = gi.generator();
    let roots_i = vec![gi.one(), gi.from_int(-1), ig.clone(), ig.neg_ref()];
    for (s, roots, order) in [(&mu2, &roots_q, 2u64), (&mu4, &roots_i, 4)] {
        let c = ok(automorphism_count_check(s))?;
        ensure!(c.enumerated == Some(order), "enumerated {:?}, expected {order}", c.enumerated);
        ensure!(c.matches_group_order(), "count differs from the group order");
        ensure!(brute_force_automorphisms(s, roots) as u64 == order, "brute force count differs");
    }
    for m in corpus() {
        let s = ok(construct_pv(&m))?;
        let rep = ok(fixed_subring_check(&s, 9))?;
        ensure!(rep.holds, "{}: fixed subring check failed: {:?}", m.render(), rep.trace);
        if let Some(basis) = s.monomial_basis() {
            let moved = rep.trace.iter().filter(|t| t.starts_with("monomial ")).count();
            ensure!(moved + 1 == basis.len(), "{}: trace covers {moved} of {} monomials", m.render(), basis.len() - 1);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 10

/// Conjugation on the coefficients: `coords -> sigma(coords)`.
fn conjugate(k: &ConstantsField, e: &RingElement, sigma: &dyn Fn(&[Q]) -> Vec<Q>) -> RingElement {
    let map = |c: &FieldElement| k.element(&sigma(c.coords()));
    match e {
        RingElement::Fn(f) => RingElement::Fn(f.map_coeffs(k, map)),
        RingElement::Tuple(v) => RingElement::Tuple(v.iter().map(map).collect()),
    }
}

fn criterion_10() -> Check {
    let q = qfield();
    let gi = ConstantsField::gaussian();
    let z3 = ConstantsField::cyclotomic(3);
    let cases = vec![
        (DifferenceRing::shift_field(&q), gi.clone()),
        (DifferenceRing::shift_field(&q), z3.clone()),
        (ok(DifferenceRing::q_dilation(&q, q.from_int(2)))?, z3.clone()),
        (ok(DifferenceRing::cyclic_product(&q, 2))?, gi.clone()),
        (DifferenceRing::shift_field(&q), q.clone()),
    ];
    // i -> -i, and zeta -> zeta^2 = -1 - zeta
    let conj_i = |c: &[Q]| vec![c[0].clone(), -c[1].clone()];
    let conj_z = |c: &[Q]| vec![c[0].clone() - c[1].clone(), -c[1].clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (base, target) in &cases {
        let ext = ok(extend_constants(base, target))?;
        let c = constants_of(&ext.ring);
        ensure!(c.field == *target && c.is_field(), "{}: constants {}", ext.ring.describe(), c.label());
        let dim = if ext.ring.product_len().is_some() {
            oracle::product_constants_dimension(&ext.ring)
        } else {
            oracle::function_constants_ansatz(&ext.ring, 8)
        };
        ensure!(dim == 1, "{}: ansatz dimension {dim}", ext.ring.describe());
        let rep = ok(galois_commutation_check(&ext, 10, &[]))?;
        ensure!(rep.holds, "{}: commutation fails", ext.ring.describe());
        if target.degree() == 1 {
            continue;
        }
        ensure!(rep.elements_checked >= 100, "only {} elements checked", rep.elements_checked);
        let sigma: &dyn Fn(&[Q]) -> Vec<Q> = if target.label() == "Q(i)" { &conj_i } else { &conj_z };
        for _ in 0..100 {
            let e = ext.ring.random_element(&mut rng);
            let lhs = conjugate(target, &ok(ext.ring.tau_apply(&e, 1))?, sigma);
            let rhs = ok(ext.ring.tau_apply(&conjugate(target, &e, sigma), 1))?;
            ensure!(lhs == rhs, "{}: sigma tau != tau sigma on {e}", ext.ring.describe());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 11

fn criterion_11() -> Check {
    let q = qfield();
    let ring = DifferenceRing::shift_field(&q);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..100 {
        let c = [1, -1, 2][rng.gen_range(0..3)];
        let a = random_small(&q, &mut rng, 2).scale(&q.from_int(c));
        let b = if i % 2 == 0 {
            let y = random_small(&q, &mut rng, 1).mul_ref(&RatFunc::from_poly(poly(&q, &[rng.gen_range(-2..=2), 1])));
            tau_of(&ring, &y).sub_ref(&a.mul_ref(&y))
        } else {
            random_small(&q, &mut rng, 1).scale(&q.from_int(rng.gen_range(1..=3)))
        };
        let lib = ok(scalar_rational_solutions(&ring, &fe(a.clone()), &fe(b.clone())))?;
        let (part, hom) = oracle::affine_by_interpolation(&ring, &a, &b, 6, 12);
        ensure!(lib.homogeneous.len() == hom.len(), "a = {a}: homogeneous {} vs {}", lib.homogeneous.len(), hom.len());
        for h in &lib.homogeneous {
            ensure!(tau_of(&ring, h) == a.mul_ref(h), "homogeneous {h} fails for a = {a}");
            ensure!(oracle::in_span(&q, h, &hom), "homogeneous {h} outside the oracle span");
        }
        match (&lib.particular, &part) {
            (None, None) => {}
            (Some(y), Some(z)) => {
                ensure!(tau_of(&ring, y) == a.mul_ref(y).add_ref(&b), "particular {y} fails");
                ensure!(oracle::in_span(&q, &y.sub_ref(z), &lib.homogeneous), "particular solutions differ");
            }
            (l, o) => return Err(format!("a = {a}, b = {b}: library {l:?}, oracle {o:?}")),
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- 12

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter().map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()).collect()
}

fn det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn criterion_12() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let s = smith_normal_form(&a, cols);
        let uav = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for (i, row) in uav.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { s.d[i] } else { 0 };
                ensure!(*v == want, "U A V != D for {a:?}");
            }
        }
        ensure!(det(&s.u).abs() == 1 && det(&s.v).abs() == 1, "non-unimodular witness for {a:?}");
        for w in s.d.windows(2) {
            ensure!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0), "divisibility fails: {:?}", s.d);
        }
    }
    let fields = [qfield(), ConstantsField::gaussian()];
    for n in 0..500 {
        let k = &fields[usize::from(n % 5 == 4)];
        // products of small factors so that factorizations are nontrivial
        let mut p = Poly::constant(k.from_int(rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 }));
        for _ in 0..rng.gen_range(1..=3) {
            let deg = rng.gen_range(1..=3);
            let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-5..=5)).collect();
            c.push(rng.gen_range(1..=3));
            p = p.mul_ref(&poly(k, &c));
        }
        let f = ok(poly_factor(&p))?;
        let mut prod = Poly::constant(f.unit.clone());
        for (g, e) in &f.factors {
            ensure!(g.is_monic() && g.deg() >= 1, "factor {} of {} is not monic", g.render("x"), p.render("x"));
            prod = prod.mul_ref(&g.pow(*e as u32));
        }
        ensure!(prod == p, "factorization of {} does not reconstruct it", p.render("x"));
    }
    Ok(())
}

// ---------------------------------------------------------------- 13

fn criterion_13() -> Check {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
    let script = format!("{dir}/worked_example.pv");
    let golden = ok(std::fs::read(format!("{dir}/worked_example.json")))?;
    for _ in 0..2 {
        let out = ok(Command::new(env!("CARGO_BIN_EXE_pvkit")).args(["run", &script, "--json"]).output())?;
        ensure!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
        ensure!(out.stdout == golden, "output differs from the golden file");
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(u32, &str, fn() -> Check); 13] = [
        (1, "constants suite", criterion_1),
        (2, "total ring of fractions", criterion_2),
        (3, "coboundary suite", criterion_3),
        (4, "rank one Galois table", criterion_4),
        (5, "PV verification gate", criterion_5),
        (6, "uniqueness", criterion_6),
        (7, "Tannakian suite", criterion_7),
        (8, "descent round trip", criterion_8),
        (9, "automorphism count", criterion_9),
        (10, "base change suite", criterion_10),
        (11, "solver oracle", criterion_11),
        (12, "kernel algebra", criterion_12),
        (13, "CLI golden files", criterion_13),
    ];
    let mut failed = Vec::new();
    // the raw handle bypasses the test harness capture, so the lines always show
    let mut out = std::io::stdout();
    let only: Option<u32> = std::env::var("PVKIT_CRITERION").ok().and_then(|v| v.parse().ok());
    for (n, name, f) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = std::time::Instant::now();
        match f() {
            Ok(()) => writeln!(out, "criterion {n:>2} ({name}): pass [{:.2?}]", start.elapsed()).unwrap(),
            Err(e) => {
                writeln!(out, "criterion {n:>2} ({name}): FAIL: {e}").unwrap();
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
