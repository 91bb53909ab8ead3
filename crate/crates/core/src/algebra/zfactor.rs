//! Factorization of squarefree primitive integer polynomials: modular
//! factorization (distinct degree + Cantor-Zassenhaus), multifactor Hensel
//! lifting and recombination. Also home of the integer cyclotomic
//! polynomials.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type ZPoly = Vec<BigInt>;
type FpPoly = Vec<u64>;

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307,
    311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397, 401, 409, 419, 421,
    431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503, 509, 521, 523, 541,
];

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn ztrim(v: &mut ZPoly) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(&mut out);
    out
}

/// Exact division of integer polynomials by a monic divisor.
fn zdiv_monic(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = b.len() - 1;
    let mut r: ZPoly = a.to_vec();
    let mut quo = vec![BigInt::zero(); a.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = r[dr].clone();
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        quo[shift] = c;
        ztrim(&mut r);
    }
    ztrim(&mut quo);
    quo
}

/// The n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> ZPoly {
    // x^n - 1 divided by Phi_d for proper divisors d
    let mut p: ZPoly = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = zdiv_monic(&p, &cyclotomic_poly(d));
        }
    }
    p
}

/// If `p` (primitive, positive leading coefficient) is a cyclotomic
/// polynomial, return its index.
pub fn recognize_cyclotomic(p: &[BigInt]) -> Option<u64> {
    let d = p.len().checked_sub(1)? as u64;
    if d == 0 {
        return None;
    }
    let bound = (2 * d * d).max(6);
    (1..=bound).find(|&n| euler_phi(n) == d && cyclotomic_poly(n) == p)
}

// ---------------------------------------------------------------- F_p[x]

fn fp_trim(v: &mut FpPoly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow(a, p - 2, p)
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    fp_trim(&mut out);
    out
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = b.len() - 1;
    let inv = fp_inv(b[db], p);
    let mut r: FpPoly = a.to_vec();
    fp_trim(&mut r);
    let mut quo = vec![0u64; r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = r[dr] * inv % p;
        let shift = dr - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bc % p) % p;
        }
        quo[shift] = c;
        fp_trim(&mut r);
    }
    fp_trim(&mut quo);
    (quo, r)
}

fn fp_monic(a: &[u64], p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

/// `(g, s, t)` with `s*a + t*b = g` monic.
fn fp_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], vec![]);
    let (mut t0, mut t1): (FpPoly, FpPoly) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (quo, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&quo, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&quo, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = fp_inv(*r0.last().unwrap(), p);
    let sc = |v: &FpPoly| -> FpPoly {
        let mut o: FpPoly = v.iter().map(|c| c * inv % p).collect();
        fp_trim(&mut o);
        o
    };
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_powmod(base: &[u64], exp: &BigUint, modulus: &[u64], p: u64) -> FpPoly {
    let mut acc: FpPoly = vec![1];
    let b = fp_divrem(base, modulus, p).1;
    for i in (0..exp.bits()).rev() {
        acc = fp_divrem(&fp_mul(&acc, &acc, p), modulus, p).1;
        if exp.bit(i) {
            acc = fp_divrem(&fp_mul(&acc, &b, p), modulus, p).1;
        }
    }
    acc
}

fn fp_derivative(a: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect();
    fp_trim(&mut out);
    out
}

fn reduce_mod(f: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut out: FpPoly = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    fp_trim(&mut out);
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x: FpPoly = vec![0, 1];
    let mut h = x.clone();
    let mut i = 1;
    while rest.len() > 2 * i {
        h = fp_powmod(&h, &BigUint::from(p), &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
            out.push((g, i));
        }
        i += 1;
    }
    if rest.len() > 1 {
        let d = rest.len() - 1;
        out.push((rest, d));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus, odd p).
fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let mut a: FpPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        fp_trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let mut g = fp_gcd(&a, f, p);
        if g.len() == 1 {
            let b = fp_powmod(&a, &exp, f, p);
            g = fp_gcd(&fp_sub(&b, &[1], p), f, p);
        }
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&fp_monic(&h, p), d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let f = fp_monic(f, p);
    distinct_degree(&f, p)
        .into_iter()
        .flat_map(|(g, d)| equal_degree(&g, d, p, rng))
        .collect()
}

// ---------------------------------------------------------------- lifting

fn zmod(f: &[BigInt], m: &BigInt) -> ZPoly {
    let mut out: ZPoly = f.iter().map(|c| c.mod_floor(m)).collect();
    ztrim(&mut out);
    out
}

fn to_z(f: &[u64]) -> ZPoly {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f = g*h mod p` (g monic) to `f = g*h mod p^k`.
fn hensel_pair(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, _, t) = fp_ext_gcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let e = zmod(&sub_z(f, &zmul(&gz, &hz)), &next);
        let e: ZPoly = e.iter().map(|c| c / &pj).collect();
        let e = reduce_mod(&e, p);
        let dg = fp_divrem(&fp_mul(&e, &t, p), g, p).1;
        let (dh, r) = fp_divrem(&fp_sub(&e, &fp_mul(&dg, h, p), p), g, p);
        debug_assert!(r.is_empty());
        gz = zmod(&add_z(&gz, &scale_z(&to_z(&dg), &pj)), &next);
        hz = zmod(&add_z(&hz, &scale_z(&to_z(&dh), &pj)), &next);
        pj = next;
    }
    (gz, hz)
}

fn add_z(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    ztrim(&mut out);
    out
}

fn sub_z(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let nb: ZPoly = b.iter().map(|c| -c).collect();
    add_z(a, &nb)
}

fn scale_z(a: &[BigInt], c: &BigInt) -> ZPoly {
    let mut out: ZPoly = a.iter().map(|x| x * c).collect();
    ztrim(&mut out);
    out
}

/// Lift the monic modular factorization `f = lc * prod(gs) mod p` to
/// `mod p^k`, returning monic lifted factors.
fn hensel_multi(f: &[BigInt], gs: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let m = BigInt::from(p).pow(k);
    let lc = f.last().unwrap().clone();
    if gs.len() == 1 {
        let inv = lc.modinv(&m).expect("leading coefficient invertible mod p");
        return vec![zmod(&scale_z(f, &inv), &m)];
    }
    let g = &gs[0];
    let lcp = reduce_mod(&[lc.clone()], p);
    let mut h: FpPoly = lcp;
    for gi in &gs[1..] {
        h = fp_mul(&h, gi, p);
    }
    let (gl, hl) = hensel_pair(f, g, &h, p, k);
    let mut out = vec![gl];
    out.extend(hensel_multi(&hl, &gs[1..], p, k));
    out
}

fn symmetric(f: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    let mut out: ZPoly = f
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    ztrim(&mut out);
    out
}

fn primitive(f: &[BigInt]) -> ZPoly {
    let g = f.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if f.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    f.iter().map(|c| c / &g * &sign).collect()
}

/// Exact division over Z; `None` if `b` does not divide `a`.
fn zdivides(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r: ZPoly = a.to_vec();
    let mut quo = vec![BigInt::zero(); a.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let (c, rem) = r[dr].div_rem(&lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        quo[shift] = c;
        ztrim(&mut r);
    }
    if r.is_empty() {
        ztrim(&mut quo);
        Some(quo)
    } else {
        None
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Factor a squarefree primitive integer polynomial with positive leading
/// coefficient into irreducibles over Z (primitive, positive leading
/// coefficients).
pub fn factor_squarefree(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f4c7);
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for &p in PRIMES {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod(f, p);
        if fp.len() != f.len() {
            continue;
        }
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fp, p, &mut rng);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, facs) = best.expect("no suitable prime for factorization");

    // coefficient bound for factors (Mignotte-style, generous)
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1) * lc.abs();
    let target = bound * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= target {
        m *= &pb;
        k += 1;
    }
    let mut lifted = hensel_multi(f, &facs, p, k);

    let mut result = Vec::new();
    let mut rest = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let lcr = rest.last().unwrap().clone();
            let mut cand: ZPoly = vec![lcr];
            for &i in &subset {
                cand = zmod(&zmul(&cand, &lifted[i]), &m);
            }
            let cand = primitive(&symmetric(&cand, &m));
            if let Some(q) = zdivides(&rest, &cand) {
                result.push(cand);
                rest = primitive(&q);
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.len() > 1 {
        result.push(rest);
    }
    result
}
