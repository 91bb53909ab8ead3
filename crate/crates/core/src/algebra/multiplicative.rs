//! Roots of unity and multiplicative relations among constants.
//!
//! Supported constants are those with a power in the rationals, i.e.
//! (rational radical) times (root of unity). Relations are found from a
//! coprime factor basis of the rational parts, a sign parity and discrete
//! logarithms in the roots of unity of the field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::factor::roots_in_field;
use super::field::{ConstantsField, FieldElement};
use super::lattice::{integer_kernel, vec_mat, IntMatrix, IntegerLattice};
use super::poly::Poly;
use super::qpoly::{self, Q};
use super::zfactor::{cyclotomic_poly, euler_phi, recognize_cyclotomic};
use crate::error::{PvError, Result};

/// Least `k >= 1` with `c^k = 1`, or `None` if `c` is not a root of unity.
pub fn root_of_unity_order(c: &FieldElement) -> Result<Option<u64>> {
    if c.is_zero() {
        return Err(PvError::ZeroInput);
    }
    let mp = c.minimal_polynomial();
    Ok(recognize_cyclotomic(&qpoly::primitive_integer(&mp)))
}

/// Order `w` of the group of roots of unity of `K`, with a generator.
pub fn roots_of_unity(k: &ConstantsField) -> (u64, FieldElement) {
    if let Some(n) = k.cyclotomic_order() {
        if n == 1 {
            return (2, k.from_int(-1));
        }
        let z = k.generator();
        return if n % 2 == 0 { (n, z) } else { (2 * n, z.neg_ref()) };
    }
    let d = k.degree() as u64;
    let mut best = (2u64, k.from_int(-1));
    for n in 3..=(2 * d * d).max(6) {
        let phi = euler_phi(n);
        if phi == 1 || d % phi != 0 || n % 4 == 2 {
            continue;
        }
        let p = Poly::from_rationals(k, &qpoly::from_integers(&cyclotomic_poly(n)));
        if let Some(r) = roots_in_field(&p).into_iter().next() {
            let m = if n % 2 == 0 { n } else { 2 * n };
            if m > best.0 {
                let g = if n % 2 == 0 { r } else { r.neg_ref() };
                best = (m, g);
            }
        }
    }
    best
}

/// Discrete logarithm of a root of unity to the base `omega` of order `w`.
pub fn unity_log(z: &FieldElement, omega: &FieldElement, w: u64) -> Option<u64> {
    let mut acc = z.field().one();
    for j in 0..w {
        if &acc == z {
            return Some(j);
        }
        acc = acc.mul_ref(omega);
    }
    None
}

/// Least `e >= 1` with `c^e` rational, together with `c^e`. The search
/// bound is `deg(c) * w(K)`, which suffices whenever any such power exists.
pub fn rational_power(c: &FieldElement) -> Result<(u64, Q)> {
    if c.is_zero() {
        return Err(PvError::ZeroInput);
    }
    if let Some(r) = c.as_rational() {
        return Ok((1, r));
    }
    let m = qpoly::degree(&c.minimal_polynomial()).unwrap_or(1) as u64;
    let (w, _) = roots_of_unity(c.field());
    let bound = m * w;
    let mut acc = c.clone();
    for e in 1..=bound {
        if let Some(r) = acc.as_rational() {
            return Ok((e, r));
        }
        acc = acc.mul_ref(c);
    }
    Err(PvError::UnsupportedConstantClass(c.render()))
}

fn bit_size(c: &FieldElement) -> u64 {
    c.coords().iter().map(|x| x.numer().bits() + x.denom().bits()).sum()
}

/// The integer `h` with `base^h = target`, for `base` not a root of unity.
///
/// Powers of a non-root of unity grow in height linearly in `|h|`, so the
/// search stops once both `base^h` and `base^-h` are far larger than the
/// target.
pub fn discrete_log(base: &FieldElement, target: &FieldElement) -> Result<Option<i64>> {
    if base.is_zero() || target.is_zero() {
        return Err(PvError::ZeroInput);
    }
    if root_of_unity_order(base)?.is_some() {
        return Err(PvError::InvalidInput("discrete log base is a root of unity".into()));
    }
    if target.is_one() {
        return Ok(Some(0));
    }
    let limit = 2 * bit_size(target) + 64;
    let inv = base.inv()?;
    let (mut up, mut down) = (base.clone(), inv.clone());
    for h in 1i64.. {
        if &up == target {
            return Ok(Some(h));
        }
        if &down == target {
            return Ok(Some(-h));
        }
        if bit_size(&up) > limit && bit_size(&down) > limit {
            return Ok(None);
        }
        up = up.mul_ref(base);
        down = down.mul_ref(&inv);
    }
    unreachable!()
}

/// Pairwise coprime basis `B` of integers `> 1` such that every input is a
/// product of powers of elements of `B`.
pub fn coprime_basis(values: &[BigInt]) -> Vec<BigInt> {
    let mut set: Vec<BigInt> = values.iter().filter(|v| **v > BigInt::one()).cloned().collect();
    set.sort();
    set.dedup();
    'outer: loop {
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let g = set[i].gcd(&set[j]);
                if !g.is_one() {
                    let a = &set[i] / &g;
                    let b = &set[j] / &g;
                    set.remove(j);
                    set.remove(i);
                    set.extend([a, b, g].into_iter().filter(|v| *v > BigInt::one()));
                    set.sort();
                    set.dedup();
                    continue 'outer;
                }
            }
        }
        return set;
    }
}

fn valuation(mut n: BigInt, p: &BigInt) -> i64 {
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// Exponent vector of a nonzero rational over a coprime basis.
fn exponent_vector(r: &Q, basis: &[BigInt]) -> Vec<i64> {
    basis
        .iter()
        .map(|p| valuation(r.numer().abs(), p) - valuation(r.denom().abs(), p))
        .collect()
}

/// Lattice `{k : k_1 x_1 + ... + k_n x_n = 0 (mod m)}` inside the lattice
/// spanned by `gens` (rows of length `dim`), where `x_j` are the images of
/// the generators. A zero modulus means exact equality.
fn kernel_mod(gens: &IntMatrix, images: &[Vec<i64>], moduli: &[i64], dim: usize) -> IntegerLattice {
    let s = gens.len();
    if s == 0 {
        return IntegerLattice::zero(dim);
    }
    let rows = moduli.len();
    // one slack column per nonzero modulus
    let slack: Vec<usize> = (0..rows).filter(|&r| moduli[r] != 0).collect();
    let cols = s + slack.len();
    let m: IntMatrix = (0..rows)
        .map(|r| {
            let mut row: Vec<i64> = images.iter().map(|x| x[r]).collect();
            row.extend(slack.iter().map(|&sr| if sr == r { -moduli[r] } else { 0 }));
            row
        })
        .collect();
    let ker = if rows == 0 { integer_kernel(&[], cols) } else { integer_kernel(&m, cols) };
    let out: IntMatrix = ker.iter().map(|k| vec_mat(&k[..s], gens, dim)).collect();
    IntegerLattice::new(dim, &out)
}

/// Lattice of `k` with `prod c_i^{k_i} = 1`.
pub fn multiplicative_relations(cs: &[FieldElement]) -> Result<IntegerLattice> {
    let n = cs.len();
    if n == 0 {
        return Ok(IntegerLattice::zero(0));
    }
    let k = cs[0].field().clone();
    let mut es = Vec::with_capacity(n);
    let mut rs = Vec::with_capacity(n);
    for c in cs {
        let (e, r) = rational_power(c)?;
        es.push(e as i64);
        rs.push(r);
    }
    let big_e = es.iter().fold(1i64, |a, &e| a.lcm(&e));
    let scale: Vec<i64> = es.iter().map(|&e| big_e / e).collect();

    // stage one: prod r_i^{k_i E/e_i} = 1 in Q
    let mut ints: Vec<BigInt> = Vec::new();
    for r in &rs {
        ints.push(r.numer().abs());
        ints.push(r.denom().abs());
    }
    let basis = coprime_basis(&ints);
    let vecs: Vec<Vec<i64>> = rs.iter().map(|r| exponent_vector(r, &basis)).collect();
    let mut images: Vec<Vec<i64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<i64> = vecs[i].iter().map(|v| v * scale[i]).collect();
        row.push(if rs[i].is_negative() { scale[i] } else { 0 });
        images.push(row);
    }
    let mut moduli = vec![0i64; basis.len()];
    moduli.push(2);
    let unit_gens: IntMatrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let stage_one = kernel_mod(&unit_gens, &images, &moduli, n);

    // stage two: the remaining root of unity must be trivial
    let (w, omega) = roots_of_unity(&k);
    let mut logs = Vec::new();
    for b in stage_one.basis() {
        let mut z = k.one();
        for (c, &e) in cs.iter().zip(b) {
            if e != 0 {
                z = z.mul_ref(&c.pow(e)?);
            }
        }
        let j = unity_log(&z, &omega, w).ok_or_else(|| {
            PvError::UnsupportedConstantClass(format!("{} is not a root of unity", z.render()))
        })?;
        logs.push(vec![j as i64]);
    }
    Ok(kernel_mod(stage_one.basis(), &logs, &[w as i64], n))
}
