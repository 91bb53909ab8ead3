//! Brute-force reference computations used to cross-check the library.
//!
//! Everything here is deliberately naive: dense Gaussian elimination over
//! the constants field and degree-bounded ansatz spaces. Only the field and
//! polynomial arithmetic of the library is reused.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use pvkit_core::algebra::{ConstantsField, FieldElement, Poly, RatFunc, Q};
use pvkit_core::ring::{DifferenceRing, RingElement, RingKind};

/// Row reduce in place; returns pivot columns.
fn eliminate(rows: &mut [Vec<FieldElement>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        for x in rows[r].iter_mut() {
            *x = x.mul_ref(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub_ref(&f.mul_ref(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Kernel over `Q` by fraction-free (Bareiss) elimination on integer rows,
/// followed by back substitution for each free column.
fn rational_nullspace(k: &ConstantsField, rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let zero = BigInt::from(0);
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let qs: Vec<Q> = r.iter().map(|x| x.as_rational().unwrap()).collect();
            let den = qs.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
            qs.iter().map(|q| q.numer() * (&den / q.denom())).collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != zero) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in (c + 1)..ncols {
                let (v, rem) = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]).div_rem(&prev);
                assert!(rem == zero, "inexact Bareiss step");
                m[i][j] = v;
            }
            m[i][c] = zero.clone();
        }
        // columns left of c in rows below are already zero
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::from_integer(zero.clone()); ncols];
            v[f] = Q::from_integer(BigInt::from(1));
            for (i, &p) in pivots.iter().enumerate().rev() {
                let mut acc = Q::from_integer(zero.clone());
                for j in p + 1..ncols {
                    if m[i][j] != zero {
                        acc = acc + Q::from_integer(m[i][j].clone()) * &v[j];
                    }
                }
                v[p] = -acc / Q::from_integer(m[i][p].clone());
            }
            v.into_iter().map(|q| k.from_rational(q)).collect()
        })
        .collect()
}

/// Basis of `{v : M v = 0}`.
pub fn nullspace(k: &ConstantsField, mut rows: Vec<Vec<FieldElement>>, ncols: usize) -> Vec<Vec<FieldElement>> {
    if k.is_rationals() {
        return rational_nullspace(k, &rows, ncols);
    }
    let pivots = eliminate(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); ncols];
            v[f] = k.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = rows[i][f].neg_ref();
            }
            v
        })
        .collect()
}

/// One solution of `M v = rhs` (free variables zero) and the kernel basis,
/// or `None` when inconsistent.
pub fn solve(
    k: &ConstantsField,
    rows: Vec<Vec<FieldElement>>,
    rhs: Vec<FieldElement>,
    ncols: usize,
) -> Option<(Vec<FieldElement>, Vec<Vec<FieldElement>>)> {
    let mut aug: Vec<Vec<FieldElement>> = rows
        .iter()
        .zip(&rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = eliminate(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![k.zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][ncols].clone();
    }
    Some((x, nullspace(k, rows, ncols)))
}

fn tau_poly(ring: &DifferenceRing, p: &Poly) -> Poly {
    match ring.kind() {
        RingKind::QDilation { q } => p.dilate(q),
        _ => p.shift(1),
    }
}

/// Dimension of `{p : deg p <= d, tau(p) = lambda p}`.
fn eigen_dimension(ring: &DifferenceRing, d: usize, lambda: &FieldElement) -> usize {
    let k = ring.field();
    // column j holds the coefficients of tau(x^j) - lambda x^j
    let cols: Vec<Poly> = (0..=d)
        .map(|j| {
            let m = Poly::monomial(k.one(), j);
            tau_poly(ring, &m).sub_ref(&m.scale(lambda))
        })
        .collect();
    let rows: Vec<Vec<FieldElement>> = (0..=d).map(|i| cols.iter().map(|c| c.coeff(i)).collect()).collect();
    nullspace(k, rows, d + 1).len()
}

/// Constants of a function ring by ansatz: a fixed `p/s` in lowest terms
/// has `tau(p) = lambda p` and `tau(s) = lambda s` for one scalar lambda
/// (the ratio of leading terms), so the constants of degree at most `d`
/// are exactly `K` iff every such eigenspace is at most one dimensional.
/// Returns the largest eigenspace dimension found.
pub fn function_constants_ansatz(ring: &DifferenceRing, d: usize) -> usize {
    let k = ring.field();
    let lambdas: Vec<FieldElement> = match ring.kind() {
        RingKind::QDilation { q } => (0..=d).map(|j| q.pow(j as i64).unwrap()).collect(),
        _ => vec![k.one()],
    };
    lambdas.iter().map(|l| eigen_dimension(ring, d, l)).max().unwrap()
}

/// Dimension over `K` of the fixed tuples of a product ring.
pub fn product_constants_dimension(ring: &DifferenceRing) -> usize {
    let k = ring.field();
    let n = ring.product_len().unwrap();
    // tau(e_j) - e_j for each unit vector gives the columns
    let cols: Vec<Vec<FieldElement>> = (0..n)
        .map(|j| {
            let mut e = vec![k.zero(); n];
            e[j] = k.one();
            let t = ring.tau_apply(&RingElement::Tuple(e.clone()), 1).unwrap();
            t.as_tuple().unwrap().iter().zip(&e).map(|(a, b)| a.sub_ref(b)).collect()
        })
        .collect();
    let rows: Vec<Vec<FieldElement>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    nullspace(k, rows, n).len()
}

fn orbit_point(ring: &DifferenceRing, x0: &FieldElement, j: usize) -> FieldElement {
    match ring.kind() {
        RingKind::QDilation { q } => x0.mul_ref(&q.pow(j as i64).unwrap()),
        _ => x0.add_ref(&ring.field().from_int(j as i64)),
    }
}

fn powers(k: &ConstantsField, x: &FieldElement, d: usize) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(d + 1);
    let mut pw = k.one();
    for _ in 0..=d {
        out.push(pw.clone());
        pw = pw.mul_ref(x);
    }
    out
}

/// Kernel of `p(x_j) - sum_i w_ji s_i(x_j) = 0` in the coefficients of
/// `p, s_1, .., s_m`, all of degree at most `d`.
fn interpolation_kernel(
    k: &ConstantsField,
    xs: &[FieldElement],
    weights: &[Vec<FieldElement>],
    d: usize,
) -> Vec<Vec<FieldElement>> {
    let m = weights[0].len();
    let rows: Vec<Vec<FieldElement>> = xs
        .iter()
        .zip(weights)
        .map(|(x, w)| {
            // scale by the common denominator of the weights to keep entries integral
            let den = w
                .iter()
                .flat_map(|v| v.coords().iter().map(|c| c.denom().clone()))
                .fold(BigInt::from(1), |acc, c| acc.lcm(&c));
            let scale = k.from_rational(Q::from_integer(den));
            let pw = powers(k, x, d);
            let mut row: Vec<FieldElement> = pw.iter().map(|p| p.mul_ref(&scale)).collect();
            for wi in w {
                let sw = wi.mul_ref(&scale);
                row.extend(pw.iter().map(|p| p.mul_ref(&sw).neg_ref()));
            }
            row
        })
        .collect();
    nullspace(k, rows, (m + 1) * (d + 1))
}

fn tau_fn(ring: &DifferenceRing, r: &RatFunc) -> RatFunc {
    match ring.tau_apply(&RingElement::Fn(r.clone()), 1).unwrap() {
        RingElement::Fn(f) => f,
        _ => unreachable!(),
    }
}

/// The orbit `x_j = tau^j x0` together with `alpha_j, beta_j` such that
/// every solution of `tau(y) = a y + b` has `y(x_j) = alpha_j y(x0) + beta_j`.
/// `None` if `a` or `b` misbehaves somewhere on the orbit.
fn orbit_values(
    ring: &DifferenceRing,
    a: &RatFunc,
    b: &RatFunc,
    x0: &FieldElement,
    npts: usize,
) -> Option<(Vec<FieldElement>, Vec<FieldElement>, Vec<FieldElement>)> {
    let k = ring.field();
    let (mut xs, mut al, mut be) = (Vec::new(), Vec::new(), Vec::new());
    let (mut u, mut v) = (k.one(), k.zero());
    for j in 0..npts {
        let x = orbit_point(ring, x0, j);
        xs.push(x.clone());
        al.push(u.clone());
        be.push(v.clone());
        let ax = a.eval(&x).ok().filter(|t| !t.is_zero())?;
        let bx = b.eval(&x).ok()?;
        u = u.mul_ref(&ax);
        v = v.mul_ref(&ax).add_ref(&bx);
    }
    Some((xs, al, be))
}

const STARTS: [i64; 5] = [101, 211, 307, 401, 503];

/// Some `r` with `tau(r) = a r` and numerator and denominator of degree at
/// most `d`, by rational interpolation of the values `r(tau^j x0)`, which
/// the recurrence determines up to the factor `r(x0)`.
///
/// Any nonzero interpolant agrees with a genuine solution at more than
/// `2d` points, so it is that solution; if the interpolant fails the exact
/// check, no solution of this degree exists.
pub fn coboundary_by_interpolation(ring: &DifferenceRing, a: &RatFunc, d: usize) -> Option<RatFunc> {
    let k = ring.field();
    let zero = RatFunc::zero(k);
    for start in STARTS {
        let Some((xs, al, _)) = orbit_values(ring, a, &zero, &k.from_int(start), 2 * d + 3) else { continue };
        let w: Vec<Vec<FieldElement>> = al.into_iter().map(|v| vec![v]).collect();
        let null = interpolation_kernel(k, &xs, &w, d);
        let r = split_candidate(k, null.first()?, d)?;
        return (tau_fn(ring, &r) == a.mul_ref(&r)).then_some(r);
    }
    panic!("no usable base point for {a}")
}

fn split_candidate(k: &ConstantsField, v: &[FieldElement], d: usize) -> Option<RatFunc> {
    let p = Poly::new(k, v[..=d].to_vec());
    let s = Poly::new(k, v[d + 1..2 * d + 2].to_vec());
    if s.is_zero() {
        return None;
    }
    RatFunc::new(p, s).ok().filter(|r| !r.is_zero())
}

fn max_degree(r: &RatFunc) -> usize {
    r.num().degree().unwrap_or(0).max(r.den().degree().unwrap_or(0))
}

/// Solutions of `tau(y) = a y + b` whose numerator and denominator have
/// degree at most `d` (homogeneous ones up to `dh`), by interpolation along
/// an orbit. Returns a particular solution (if any) and the homogeneous
/// basis, which has at most one element.
///
/// With a homogeneous solution `h` the particular one is normalised to
/// vanish at `x0`, which fixes its values. Without one the unknown `y(x0)`
/// enters linearly: interpolate `p = beta s + alpha w` with `w` standing
/// for `y(x0) s`. A spurious kernel vector would make `alpha` agree with a
/// rational function of degree at most `2d` on the whole orbit, and that
/// function would then be a homogeneous solution; the point count below
/// rules this out.
pub fn affine_by_interpolation(
    ring: &DifferenceRing,
    a: &RatFunc,
    b: &RatFunc,
    d: usize,
    dh: usize,
) -> (Option<RatFunc>, Vec<RatFunc>) {
    let k = ring.field();
    let check = |y: &RatFunc| tau_fn(ring, y) == a.mul_ref(y).add_ref(b);
    let hom = coboundary_by_interpolation(ring, a, dh);
    let (dp, npts) = match &hom {
        Some(h) => {
            let dp = d + max_degree(h);
            (dp, 2 * dp + 3)
        }
        None => (d, 4 * d + 2 * max_degree(a) + 8),
    };
    for start in STARTS {
        let Some((xs, al, be)) = orbit_values(ring, a, b, &k.from_int(start), npts) else { continue };
        let w: Vec<Vec<FieldElement>> = match &hom {
            Some(_) => be.into_iter().map(|v| vec![v]).collect(),
            None => be.into_iter().zip(al).map(|(u, v)| vec![u, v]).collect(),
        };
        let null = interpolation_kernel(k, &xs, &w, dp);
        let part = match null.first() {
            // y = 0 is allowed in the normalised case
            Some(v) if hom.is_some() && Poly::new(k, v[..=dp].to_vec()).is_zero() => Some(RatFunc::zero(k)),
            Some(v) => split_candidate(k, v, dp),
            None => None,
        };
        let part = part.filter(|y| check(y));
        return (part, hom.into_iter().collect());
    }
    panic!("no usable base point for {a}, {b}")
}

/// Whether `v` lies in the `K`-span of `basis` (all rational functions).
pub fn in_span(k: &ConstantsField, v: &RatFunc, basis: &[RatFunc]) -> bool {
    // compare over a common denominator
    let mut den = v.den().clone();
    for b in basis {
        den = den.lcm(b.den());
    }
    let numer = |f: &RatFunc| f.num().mul_ref(&den.div_exact(f.den()).unwrap());
    let target = numer(v);
    let cols: Vec<Poly> = basis.iter().map(numer).collect();
    let height = cols.iter().chain(std::iter::once(&target)).map(|c| c.degree().unwrap_or(0)).max().unwrap() + 1;
    let rows: Vec<Vec<FieldElement>> = (0..height).map(|i| cols.iter().map(|c| c.coeff(i)).collect()).collect();
    let rhs: Vec<FieldElement> = (0..height).map(|i| target.coeff(i)).collect();
    solve(k, rows, rhs, basis.len()).is_some()
}
