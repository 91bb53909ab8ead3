//! Dense univariate polynomials over the rationals, as bare coefficient
//! vectors (lowest degree first). Used internally for field arithmetic,
//! norms and minimal polynomials; the public polynomial type is
//! [`Poly`](super::Poly).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn trim(v: &mut Vec<Q>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub fn trimmed(mut v: Vec<Q>) -> Vec<Q> {
    trim(&mut v);
    v
}

pub fn degree(v: &[Q]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => Q::zero(),
        })
        .collect();
    trimmed(out)
}

pub fn neg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    add(a, &neg(b))
}

pub fn scale(a: &[Q], c: &Q) -> Vec<Q> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

pub fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trimmed(out)
}

/// Euclidean division. Panics if `b` is zero.
pub fn divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let db = degree(b).expect("division by zero polynomial");
    let lb = b[db].clone();
    let mut r = trimmed(a.to_vec());
    let mut quo = vec![Q::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lb;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] -= &c * bc;
        }
        quo[shift] = c;
        trim(&mut r);
    }
    (trimmed(quo), r)
}

pub fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    divrem(a, b).1
}

pub fn monic(a: &[Q]) -> Vec<Q> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = a[d].recip();
            a[..=d].iter().map(|c| c * &inv).collect()
        }
    }
}

pub fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = trimmed(a.to_vec());
    let mut y = trimmed(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>, Vec<Q>) {
    let (mut r0, mut r1) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    let (mut s0, mut s1) = (vec![Q::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let (quo, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&quo, &s1));
        let t = sub(&t0, &mul(&quo, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match degree(&r0) {
        None => (Vec::new(), s0, t0),
        Some(d) => {
            let inv = r0[d].recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
        }
    }
}

pub fn derivative(a: &[Q]) -> Vec<Q> {
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * q(i as i64))
            .collect(),
    )
}

pub fn eval(a: &[Q], x: &Q) -> Q {
    a.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

pub fn is_squarefree(a: &[Q]) -> bool {
    degree(&gcd(a, &derivative(a))) == Some(0)
}

/// Lagrange interpolation through `(xs[i], ys[i])` (Newton form).
pub fn interpolate(xs: &[Q], ys: &[Q]) -> Vec<Q> {
    let n = xs.len();
    let mut coef: Vec<Q> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out: Vec<Q> = Vec::new();
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + coef[i]
        out = mul(&out, &[-xs[i].clone(), Q::one()]);
        out = add(&out, &[coef[i].clone()]);
    }
    trimmed(out)
}

/// Clears denominators and content: returns the primitive integer polynomial
/// with positive leading coefficient that is a rational multiple of `a`.
pub fn primitive_integer(a: &[Q]) -> Vec<BigInt> {
    let a = trimmed(a.to_vec());
    if a.is_empty() {
        return Vec::new();
    }
    let l = a
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = a.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

pub fn from_integers(a: &[BigInt]) -> Vec<Q> {
    trimmed(a.iter().map(|c| Q::from_integer(c.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Vec<Q> {
        trimmed(v.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = mul(&p(&[-1, 1]), &p(&[2, 1]));
        let b = mul(&p(&[-1, 1]), &p(&[5, 0, 1]));
        assert_eq!(gcd(&a, &b), p(&[-1, 1]));
        let (quo, r) = divrem(&b, &p(&[-1, 1]));
        assert!(r.is_empty());
        assert_eq!(quo, p(&[5, 0, 1]));
    }

    #[test]
    fn ext_gcd_identity() {
        let a = p(&[1, 0, 1]);
        let b = p(&[0, 1, 3]);
        let (g, s, t) = ext_gcd(&a, &b);
        assert_eq!(add(&mul(&s, &a), &mul(&t, &b)), g);
        assert_eq!(g, p(&[1]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, -2, 0, 5]);
        let xs: Vec<Q> = (0..4).map(q).collect();
        let ys: Vec<Q> = xs.iter().map(|x| eval(&f, x)).collect();
        assert_eq!(interpolate(&xs, &ys), f);
    }
}
