//! Rational solutions of first-order scalar equations and fixed vectors of
//! difference modules.
//!
//! Denominators come from the orbit structure of the coefficients (integer
//! shifts or `q`-power scalings of irreducible factors); numerators from a
//! bounded ansatz solved by exact linear algebra over `K`.

use super::{invert, DifferenceModule};
use crate::algebra::factor::roots_in_field;
use crate::algebra::linalg::solve_affine;
use crate::algebra::multiplicative::discrete_log;
use crate::algebra::{poly_factor, FieldElement, Matrix, Poly, RatFunc};
use crate::error::{PvError, Result};
use crate::ring::orbit::{q_distance, q_step, shift_distance};
use crate::ring::{cycles, DifferenceRing, RingElement, RingKind};

/// Tuning knobs for the solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Largest degree (or Laurent exponent) tried when no certified bound
    /// below it is available.
    pub degree_cap: usize,
    pub rank_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { degree_cap: 24, rank_cap: 8 }
    }
}

/// Solution set of `tau(y) = a y + b` in `K(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolutions {
    /// `None` when the inhomogeneous equation has no rational solution.
    pub particular: Option<RatFunc>,
    /// Basis of the rational solutions of `tau(y) = a y`, reported either way.
    pub homogeneous: Vec<RatFunc>,
    /// False when a bound had to be clipped to the degree cap.
    pub certified: bool,
    pub warnings: Vec<String>,
}

/// A `K`-basis of `{v : A tau(v) = v}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedVectorSpace {
    pub ring: DifferenceRing,
    pub vectors: Vec<Vec<RingElement>>,
    pub certified: bool,
    pub method: &'static str,
    pub warnings: Vec<String>,
}

impl FixedVectorSpace {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

enum Tau<'a> {
    Shift,
    Dilate(&'a FieldElement),
}

impl<'a> Tau<'a> {
    fn of(ring: &'a DifferenceRing) -> Result<Self> {
        match ring.kind() {
            RingKind::ShiftField => Ok(Tau::Shift),
            RingKind::QDilation { q } => Ok(Tau::Dilate(q)),
            _ => Err(PvError::UnsupportedBase(ring.describe())),
        }
    }

    fn poly(&self, p: &Poly, power: i64) -> Poly {
        match self {
            Tau::Shift => p.shift(power),
            Tau::Dilate(q) => p.dilate(&q.pow(power).expect("q nonzero")),
        }
    }
}

pub fn scalar_rational_solutions(ring: &DifferenceRing, a: &RingElement, b: &RingElement) -> Result<AffineSolutions> {
    scalar_rational_solutions_with(ring, a, b, &SolverOptions::default())
}

/// All rational solutions of `tau(y) = a y + b` over a shift or
/// `q`-dilation field.
pub fn scalar_rational_solutions_with(
    ring: &DifferenceRing,
    a: &RingElement,
    b: &RingElement,
    opts: &SolverOptions,
) -> Result<AffineSolutions> {
    let tau = Tau::of(ring)?;
    let get = |e: &RingElement| {
        e.as_ratfunc()
            .filter(|f| f.field() == ring.field())
            .cloned()
            .ok_or_else(|| PvError::Mismatch(format!("{e} is not an element of {}", ring.describe())))
    };
    let (a, b) = (get(a)?, get(b)?);
    if a.is_zero() {
        return Err(PvError::ZeroInput);
    }
    // beta H tau(y) - alpha H y = beta G
    let c1 = a.den().mul_ref(b.den());
    let c0 = a.num().mul_ref(b.den()).neg_ref();
    let r = a.den().mul_ref(b.num());
    let u = universal_denominator(&tau, &c1, &c0)?;
    let tu = tau.poly(&u, 1);
    let l = u.lcm(&tu);
    let p1 = c1.mul_ref(&l.div_exact(&tu).expect("lcm"));
    let p0 = c0.mul_ref(&l.div_exact(&u).expect("lcm"));
    let rhs = r.mul_ref(&l);
    let mut warnings = Vec::new();
    let (lo, hi) = numerator_range(&tau, &p1, &p0, &rhs, opts, &mut warnings)?;
    let certified = warnings.is_empty();
    let k = ring.field();
    let Some((lo, hi)) = lo.zip(hi).filter(|(lo, hi)| lo <= hi) else {
        let particular = rhs.is_zero().then(|| RatFunc::zero(k));
        return Ok(AffineSolutions { particular, homogeneous: Vec::new(), certified, warnings });
    };
    // unknowns u_k for x^k, k in lo..=hi; both sides multiplied by x^-s
    let s = lo.min(0);
    let mut images = Vec::new();
    for e in lo..=hi {
        let img = match &tau {
            Tau::Shift => {
                let xe = Poly::monomial(k.one(), e as usize);
                p1.mul_ref(&xe.shift(1)).add_ref(&p0.mul_ref(&xe))
            }
            Tau::Dilate(q) => {
                let xe = Poly::monomial(k.one(), (e - s) as usize);
                p1.scale(&q.pow(e)?).add_ref(&p0).mul_ref(&xe)
            }
        };
        images.push(img);
    }
    let target = rhs.mul_ref(&Poly::monomial(k.one(), (-s) as usize));
    let rows = images.iter().chain([&target]).map(|p| p.deg() + 1).max().unwrap_or(1);
    let m = Matrix::from_fn(rows, images.len(), |i, j| images[j].coeff(i));
    let rhs_vec: Vec<FieldElement> = (0..rows).map(|i| target.coeff(i)).collect();
    let den = u.mul_ref(&Poly::monomial(k.one(), (-s) as usize));
    let to_ratfunc = |coef: &[FieldElement]| -> Result<RatFunc> {
        let mut c = vec![k.zero(); (hi - s + 1) as usize];
        for (j, e) in (lo..=hi).enumerate() {
            c[(e - s) as usize] = coef[j].clone();
        }
        RatFunc::new(Poly::new(k, c), den.clone())
    };
    let solved = solve_affine(&m, &rhs_vec, &k.zero());
    let null = match &solved {
        Some((_, null)) => null.clone(),
        None => m.nullspace(&k.zero()),
    };
    let homogeneous: Vec<Vec<RatFunc>> =
        null.iter().map(|v| to_ratfunc(v).map(|f| vec![f])).collect::<Result<_>>()?;
    let homogeneous = canonical_basis(&homogeneous)?;
    let particular = match solved {
        Some((part, _)) => Some(reduce_against(&[vec![to_ratfunc(&part)?]], &homogeneous)?.remove(0).remove(0)),
        None => None,
    };
    Ok(AffineSolutions {
        particular,
        homogeneous: homogeneous.into_iter().map(|mut v| v.remove(0)).collect(),
        certified,
        warnings,
    })
}

/// Polynomial multiple of every denominator of a solution of
/// `c1 tau(y) + c0 y = r` with polynomial `r`.
fn universal_denominator(tau: &Tau, c1: &Poly, c0: &Poly) -> Result<Poly> {
    let k = c1.field();
    let strip_x = |p: &Poly| -> Poly {
        let v = p.valuation().unwrap_or(0);
        Poly::new(k, p.coeffs()[v..].to_vec())
    };
    // a pole orbit ends where c1(tau^-1 x) vanishes and starts where c0 does
    let (top, bottom) = match tau {
        Tau::Shift => (c1.shift(-1), c0.clone()),
        Tau::Dilate(_) => (strip_x(&tau.poly(c1, -1)), strip_x(c0)),
    };
    let irreducibles = |p: &Poly| -> Result<Vec<Poly>> {
        if p.is_constant() {
            Ok(Vec::new())
        } else {
            Ok(poly_factor(p)?.factors.into_iter().map(|(f, _)| f).collect())
        }
    };
    let (ft, fb) = (irreducibles(&top)?, irreducibles(&bottom)?);
    let mut dispersion: Option<i64> = None;
    for f in &ft {
        for g in &fb {
            let h = match tau {
                Tau::Shift => shift_distance(g, f),
                Tau::Dilate(q) => q_distance(g, f, q),
            };
            if let Some(h) = h.filter(|h| *h >= 0) {
                dispersion = Some(dispersion.map_or(h, |d| d.max(h)));
            }
        }
    }
    let Some(n) = dispersion else {
        return Ok(Poly::one(k));
    };
    let (mut pt, mut pb) = (Poly::one(k), Poly::one(k));
    for j in 0..=n {
        pt = pt.mul_ref(&tau.poly(&top, -j).monic());
        pb = pb.mul_ref(&tau.poly(&bottom, j).monic());
    }
    Ok(pt.gcd(&pb))
}

/// Exponent range `lo..=hi` for the numerator of `p1 tau(P) + p0 P = rhs`.
/// `None` on either side means no nonzero numerator is possible.
fn numerator_range(
    tau: &Tau,
    p1: &Poly,
    p0: &Poly,
    rhs: &Poly,
    opts: &SolverOptions,
    warnings: &mut Vec<String>,
) -> Result<(Option<i64>, Option<i64>)> {
    let cap = opts.degree_cap as i64;
    let clip = |k: i64, what: &str, warnings: &mut Vec<String>| -> i64 {
        if k.abs() > cap {
            warnings.push(format!("{what} {k} exceeds the degree cap {cap}; search clipped"));
            k.signum() * cap
        } else {
            k
        }
    };
    let deg_r = rhs.degree().map(|d| d as i64);
    match tau {
        Tau::Shift => {
            let q0 = p1.add_ref(p0);
            let s = p1.deg() as i64 - 1;
            let m = match q0.degree() {
                Some(d) => (d as i64).min(s),
                None => s,
            };
            let mut hi = deg_r.map(|d| d - m);
            if q0.is_zero() || q0.degree().map(|d| d as i64) == Some(s) {
                // leading coefficient of the image of x^d is lc(P)(lc(Q0) + d lc(p1))
                let lc = if q0.is_zero() { q0.field().zero() } else { q0.leading() };
                let n0 = lc.neg_ref().div_ref(&p1.leading())?;
                if let Some(n0) = n0.as_integer().filter(|n| *n >= 0) {
                    let n0 = clip(n0, "indicial root", warnings);
                    hi = Some(hi.map_or(n0, |h| h.max(n0)));
                }
            }
            Ok((hi.map(|_| 0), hi.filter(|h| *h >= 0)))
        }
        Tau::Dilate(q) => {
            let t = p1.deg().max(p0.deg());
            let b = p1.valuation().unwrap_or(usize::MAX).min(p0.valuation().unwrap_or(usize::MAX));
            let special = |c1: FieldElement, c0: FieldElement| -> Result<Option<i64>> {
                if c1.is_zero() || c0.is_zero() {
                    return Ok(None);
                }
                discrete_log(q, &c0.neg_ref().div_ref(&c1)?)
            };
            let mut hi = deg_r.map(|d| d - t as i64);
            if let Some(k) = special(p1.coeff(t), p0.coeff(t))? {
                let k = clip(k, "exponent", warnings);
                hi = Some(hi.map_or(k, |h| h.max(k)));
            }
            let val_r = rhs.valuation().map(|v| v as i64);
            let mut lo = val_r.map(|v| v - b as i64);
            if let Some(k) = special(p1.coeff(b), p0.coeff(b))? {
                let k = clip(k, "exponent", warnings);
                lo = Some(lo.map_or(k, |l| l.min(k)));
            }
            Ok((lo, hi))
        }
    }
}

/// Canonical `K`-basis of the span of rational-function vectors: reduced
/// echelon form of the numerator coefficients over the common denominator,
/// leading coefficients first.
pub(crate) fn canonical_basis(vectors: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let (n, k) = (first.len(), first[0].field().clone());
    let den = vectors.iter().flatten().fold(Poly::one(&k), |acc, f| acc.lcm(f.den()));
    let nums: Vec<Vec<Poly>> = vectors
        .iter()
        .map(|v| v.iter().map(|f| f.num().mul_ref(&den.div_exact(f.den()).expect("lcm"))).collect())
        .collect();
    let width = nums.iter().flatten().map(|p| p.deg() + 1).max().unwrap_or(1);
    let mut m = Matrix::from_fn(vectors.len(), n * width, |r, c| nums[r][c / width].coeff(width - 1 - c % width));
    let rank = m.rref().len();
    (0..rank)
        .map(|r| {
            (0..n)
                .map(|i| {
                    let coeffs = (0..width).map(|d| m.get(r, i * width + width - 1 - d).clone()).collect();
                    RatFunc::new(Poly::new(&k, coeffs), den.clone())
                })
                .collect()
        })
        .collect()
}

/// Reduce each vector of `vs` against a canonical basis so the result does
/// not depend on how the vector was found.
fn reduce_against(vs: &[Vec<RatFunc>], basis: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>> {
    let mut out = Vec::with_capacity(vs.len());
    for v in vs {
        let mut v = v.clone();
        for b in basis {
            // pivot: leading coefficient of the first nonzero component of b
            let (i, bi) = b.iter().enumerate().find(|(_, f)| !f.is_zero()).expect("nonzero basis vector");
            let den = v[i].den().lcm(bi.den());
            let vn = v[i].num().mul_ref(&den.div_exact(v[i].den()).expect("lcm"));
            let bn = bi.num().mul_ref(&den.div_exact(bi.den()).expect("lcm"));
            let c = vn.coeff(bn.deg()).div_ref(&bn.leading())?;
            if !c.is_zero() {
                v = v.iter().zip(b).map(|(x, y)| x.sub_ref(&y.scale(&c))).collect();
            }
        }
        out.push(v);
    }
    Ok(out)
}

pub fn fixed_vectors(m: &DifferenceModule) -> Result<FixedVectorSpace> {
    fixed_vectors_with(m, &SolverOptions::default())
}

/// A `K`-basis of the fixed vectors `{v : A tau(v) = v}`.
pub fn fixed_vectors_with(m: &DifferenceModule, opts: &SolverOptions) -> Result<FixedVectorSpace> {
    if m.rank() > opts.rank_cap {
        return Err(PvError::InvalidInput(format!("rank {} exceeds the rank cap {}", m.rank(), opts.rank_cap)));
    }
    match m.ring().kind() {
        RingKind::Product { perm } => Ok(product_fixed(m, perm)),
        RingKind::ShiftField | RingKind::QDilation { .. } => function_fixed(m, opts),
        _ => Err(PvError::UnsupportedBase(m.ring().describe())),
    }
}

fn product_fixed(m: &DifferenceModule, perm: &[usize]) -> FixedVectorSpace {
    let ring = m.ring();
    let k = ring.field();
    let (n, len) = (m.rank(), perm.len());
    let mut pre = vec![0; len];
    for (i, &p) in perm.iter().enumerate() {
        pre[p] = i;
    }
    let coord = |e: &RingElement, c: usize| e.as_tuple().expect("tuple")[c].clone();
    let mut vectors = Vec::new();
    for cyc in cycles(perm) {
        // unknown (l, c) for c in the cycle; equation (j, c):
        // sum_l A_jl[c] v_l[pre c] - v_j[c] = 0
        let idx = |l: usize, c: usize| l * cyc.len() + cyc.iter().position(|&x| x == c).expect("in cycle");
        let mut sys = Matrix::from_fn(n * cyc.len(), n * cyc.len(), |_, _| k.zero());
        for j in 0..n {
            for &c in &cyc {
                let row = idx(j, c);
                for l in 0..n {
                    let col = idx(l, pre[c]);
                    let v = sys.get(row, col).add_ref(&coord(m.matrix().get(j, l), c));
                    sys.set(row, col, v);
                }
                let v = sys.get(row, row).sub_ref(&k.one());
                sys.set(row, row, v);
            }
        }
        let mut null = Matrix::from_rows(sys.nullspace(&k.zero()));
        if null.rows() == 0 {
            continue;
        }
        let rank = null.rref().len();
        for r in 0..rank {
            vectors.push(
                (0..n)
                    .map(|l| {
                        RingElement::Tuple(
                            (0..len)
                                .map(|c| if cyc.contains(&c) { null.get(r, idx(l, c)).clone() } else { k.zero() })
                                .collect(),
                        )
                    })
                    .collect(),
            );
        }
    }
    FixedVectorSpace { ring: ring.clone(), vectors, certified: true, method: "product", warnings: Vec::new() }
}

fn function_fixed(m: &DifferenceModule, opts: &SolverOptions) -> Result<FixedVectorSpace> {
    let ring = m.ring();
    let tau = Tau::of(ring)?;
    let k = ring.field();
    let n = m.rank();
    let a: Matrix<RatFunc> = m.matrix().map(|e| e.as_ratfunc().expect("function ring").clone());
    let mut warnings = Vec::new();
    let (found, method, mut certified) = if a.is_diagonal() {
        let mut found = Vec::new();
        let mut certified = true;
        for j in 0..n {
            let inv = RingElement::Fn(a.get(j, j).inv()?);
            let sol = scalar_rational_solutions_with(ring, &inv, &ring.zero(), opts)?;
            certified &= sol.certified;
            warnings.extend(sol.warnings);
            for h in sol.homogeneous {
                let mut v = vec![RatFunc::zero(k); n];
                v[j] = h;
                found.push(v);
            }
        }
        (found, "diagonal", certified)
    } else if a.entries().all(|f| f.as_constant().is_some()) {
        (constant_fixed(&tau, &a)?, "constant", true)
    } else {
        let d = denominator_bound(&tau, ring, m)?;
        let cap = opts.degree_cap as i64;
        let top = d.deg() as i64 + cap;
        let lo = match tau {
            Tau::Shift => 0,
            Tau::Dilate(_) => -cap,
        };
        warnings.push(format!("numerator degree searched up to the cap {cap}"));
        (ansatz(&tau, &a, &d, lo, top)?, "bounded-ansatz", false)
    };
    let found = canonical_basis(&found)?;
    if found.len() == n {
        // the fixed space never exceeds the rank
        certified = true;
        warnings.clear();
    }
    let vectors = found.into_iter().map(|v| v.into_iter().map(RingElement::Fn).collect()).collect();
    Ok(FixedVectorSpace { ring: ring.clone(), vectors, certified, method, warnings })
}

/// Fixed vectors of a constant matrix. In the shift case the solution
/// space is stable under differencing, so solutions are polynomials of
/// degree below the rank; in the `q` case they are sums of `x^k c` with
/// `A c = q^-k c`.
fn constant_fixed(tau: &Tau, a: &Matrix<RatFunc>) -> Result<Vec<Vec<RatFunc>>> {
    let n = a.rows();
    let k = a.get(0, 0).field().clone();
    match tau {
        Tau::Shift => {
            let one = Poly::one(&k);
            ansatz(tau, a, &one, 0, n as i64 - 1)
        }
        Tau::Dilate(q) => {
            let x = RatFunc::x(&k);
            let char_m = Matrix::from_fn(n, n, |i, j| {
                let d = if i == j { x.clone() } else { RatFunc::zero(&k) };
                d.sub_ref(a.get(i, j))
            });
            let charpoly = char_m.det().num().clone();
            let ac = a.map(|f| f.as_constant().expect("constant"));
            let mut out = Vec::new();
            let mut ks: Vec<i64> = Vec::new();
            for lambda in roots_in_field(&charpoly) {
                if lambda.is_zero() {
                    continue;
                }
                if let Some(e) = discrete_log(q, &lambda.inv()?)? {
                    ks.push(e);
                }
            }
            ks.sort();
            ks.dedup();
            for e in ks {
                let qe = q.pow(e)?;
                let sys = Matrix::from_fn(n, n, |i, j| {
                    let v = ac.get(i, j).mul_ref(&qe);
                    if i == j {
                        v.sub_ref(&k.one())
                    } else {
                        v
                    }
                });
                for c in sys.nullspace(&k.zero()) {
                    out.push(
                        c.iter()
                            .map(|ci| {
                                let xe = x.pow(e).expect("x nonzero");
                                xe.scale(ci)
                            })
                            .collect(),
                    );
                }
            }
            Ok(out)
        }
    }
}

fn multiplicity(f: &Poly, p: &Poly) -> usize {
    let mut f = f.clone();
    let mut e = 0;
    while !f.is_zero() && f.deg() >= p.deg() {
        match f.div_exact(p) {
            Some(g) => {
                f = g;
                e += 1;
            }
            None => break,
        }
    }
    e
}

/// Certified multiple of every denominator of a fixed vector.
///
/// Along an orbit `p_h` the pole orders `P_h` of a fixed vector obey
/// `P_h <= P_{h-1} + alpha_h` and `P_{h-1} <= P_h + beta_h`, where `alpha_h`
/// and `beta_h` are the pole orders of `A` and `A^-1` at `p_h`.
fn denominator_bound(tau: &Tau, ring: &DifferenceRing, m: &DifferenceModule) -> Result<Poly> {
    let k = ring.field();
    let a = m.matrix();
    let b = invert(ring, a)?;
    let dens = |mat: &Matrix<RingElement>| -> Vec<Poly> {
        mat.entries().map(|e| e.as_ratfunc().expect("function ring").den().clone()).collect()
    };
    let (da, db) = (dens(a), dens(&b));
    let mut factors: Vec<Poly> = Vec::new();
    for d in da.iter().chain(&db) {
        if d.is_constant() {
            continue;
        }
        for (f, _) in poly_factor(d)?.factors {
            let is_x = f.deg() == 1 && f.coeff(0).is_zero();
            if !(is_x && matches!(tau, Tau::Dilate(_))) && !factors.contains(&f) {
                factors.push(f);
            }
        }
    }
    // orbits: representative plus (offset, alpha, beta) per member
    let mut orbits: Vec<(Poly, Vec<(i64, usize, usize)>)> = Vec::new();
    for f in factors {
        let alpha = da.iter().map(|d| multiplicity(d, &f)).max().unwrap_or(0);
        let beta = db.iter().map(|d| multiplicity(d, &f)).max().unwrap_or(0);
        let hit = orbits.iter_mut().find_map(|(rep, members)| {
            let h = match tau {
                Tau::Shift => shift_distance(rep, &f),
                Tau::Dilate(q) => q_distance(rep, &f, q),
            };
            h.map(|h| (h, members))
        });
        match hit {
            Some((h, members)) => members.push((h, alpha, beta)),
            None => orbits.push((f, vec![(0, alpha, beta)])),
        }
    }
    let mut den = Poly::one(k);
    for (rep, members) in orbits {
        let lo = members.iter().map(|m| m.0).min().expect("nonempty");
        let hi = members.iter().map(|m| m.0).max().expect("nonempty");
        let at = |h: i64| members.iter().find(|m| m.0 == h).map_or((0, 0), |m| (m.1, m.2));
        for h in lo..=hi {
            let up: usize = (lo..=h).map(|j| at(j).0).sum();
            let down: usize = (h + 1..=hi).map(|j| at(j).1).sum();
            let e = up.min(down);
            if e > 0 {
                let p = match tau {
                    Tau::Shift => rep.shift(h),
                    Tau::Dilate(q) => q_step(&rep, q, h),
                };
                den = den.mul_ref(&p.pow(e as u32));
            }
        }
    }
    Ok(den)
}

/// All fixed vectors of the form `N / d` with `N` having exponents in
/// `lo..=hi`, via `Ahat tau(N) d = E tau(d) N` where `A = Ahat / E`.
fn ansatz(tau: &Tau, a: &Matrix<RatFunc>, d: &Poly, lo: i64, hi: i64) -> Result<Vec<Vec<RatFunc>>> {
    let n = a.rows();
    let k = d.field().clone();
    if hi < lo {
        return Ok(Vec::new());
    }
    let e = a.entries().fold(Poly::one(&k), |acc, f| acc.lcm(f.den()));
    let ahat: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).num().mul_ref(&e.div_exact(a.get(i, j).den()).expect("lcm"))).collect())
        .collect();
    let td = tau.poly(d, 1);
    let etd = e.mul_ref(&td);
    let s = lo.min(0);
    let span = (hi - lo + 1) as usize;
    // column (i, exponent) -> image polynomial in each component j
    let mut cols: Vec<Vec<Poly>> = Vec::with_capacity(n * span);
    for i in 0..n {
        for ex in lo..=hi {
            let xe = Poly::monomial(k.one(), (ex - s) as usize);
            let txe = match tau {
                Tau::Shift => xe.shift(1),
                Tau::Dilate(q) => xe.scale(&q.pow(ex)?),
            };
            let col = (0..n)
                .map(|j| {
                    let lhs = ahat[j][i].mul_ref(&txe).mul_ref(d);
                    if i == j {
                        lhs.sub_ref(&etd.mul_ref(&xe))
                    } else {
                        lhs
                    }
                })
                .collect();
            cols.push(col);
        }
    }
    let width = cols.iter().flatten().map(|p| p.deg() + 1).max().unwrap_or(1);
    let sys = Matrix::from_fn(n * width, cols.len(), |r, c| cols[c][r / width].coeff(r % width));
    let den = d.mul_ref(&Poly::monomial(k.one(), (-s) as usize));
    sys.nullspace(&k.zero())
        .into_iter()
        .map(|u| {
            (0..n)
                .map(|i| {
                    let mut c = vec![k.zero(); (hi - s + 1) as usize];
                    for (t, ex) in (lo..=hi).enumerate() {
                        c[(ex - s) as usize] = u[i * span + t].clone();
                    }
                    RatFunc::new(Poly::new(&k, c), den.clone())
                })
                .collect()
        })
        .collect()
}

pub fn is_trivial(m: &DifferenceModule) -> Result<Option<Matrix<RingElement>>> {
    is_trivial_with(m, &SolverOptions::default())
}

/// A fundamental matrix (invertible, columns fixed) when `M` is trivial.
pub fn is_trivial_with(m: &DifferenceModule, opts: &SolverOptions) -> Result<Option<Matrix<RingElement>>> {
    let fs = fixed_vectors_with(m, opts)?;
    let ring = m.ring();
    let n = m.rank();
    let columns: Vec<Vec<RingElement>> = match ring.kind() {
        RingKind::Product { perm } => {
            // fixed vectors come grouped by cycle; each cycle needs n of them
            let cs = cycles(perm);
            let support = |v: &[RingElement]| -> Option<usize> {
                let c = v.iter().flat_map(|e| e.as_tuple().expect("tuple").iter().enumerate()).find(|(_, x)| !x.is_zero())?.0;
                cs.iter().position(|cyc| cyc.contains(&c))
            };
            let mut per: Vec<Vec<&Vec<RingElement>>> = vec![Vec::new(); cs.len()];
            for v in &fs.vectors {
                per[support(v).expect("nonzero vector")].push(v);
            }
            if per.iter().any(|p| p.len() != n) {
                return Ok(None);
            }
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| per.iter().fold(ring.zero(), |acc, p| ring.add(&acc, &p[j][i]).expect("same ring")))
                        .collect()
                })
                .collect()
        }
        _ => {
            if fs.dim() != n {
                return Ok(None);
            }
            fs.vectors.clone()
        }
    };
    let f = Matrix::from_fn(n, n, |i, j| columns[j][i].clone());
    if invert(ring, &f).is_err() {
        return Ok(None);
    }
    Ok(Some(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ConstantsField;

    fn rf(k: &ConstantsField, num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(k, num), Poly::from_ints(k, den)).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::shift_field(&k);
        let s = scalar_rational_solutions(&r, &r.one(), &r.one()).unwrap();
        assert_eq!(s.particular, Some(RatFunc::x(&k)));
        assert_eq!(s.homogeneous, vec![RatFunc::one(&k)]);
        let s = scalar_rational_solutions(&r, &RingElement::Fn(rf(&k, &[2, 1], &[0, 1])), &r.zero()).unwrap();
        assert_eq!(s.homogeneous, vec![rf(&k, &[0, 1, 1], &[1])]);
        let q = DifferenceRing::q_dilation(&k, k.from_int(2)).unwrap();
        let s = scalar_rational_solutions(&q, &q.from_int(2), &q.zero()).unwrap();
        assert_eq!(s.homogeneous, vec![RatFunc::x(&k)]);
        let s = scalar_rational_solutions(&q, &RingElement::Fn(rf(&k, &[1], &[0, 0, 1])), &q.zero()).unwrap();
        // y(2x) = y / x^2 has no rational solution
        assert!(s.homogeneous.is_empty());
        let s = scalar_rational_solutions(&q, &q.from_int(4).clone(), &q.zero()).unwrap();
        assert_eq!(s.homogeneous, vec![rf(&k, &[0, 0, 1], &[1])]);
        let quarter = RingElement::Fn(RatFunc::constant(k.from_rational(crate::algebra::qpoly::q(1) / crate::algebra::qpoly::q(4))));
        let s = scalar_rational_solutions(&q, &quarter, &q.zero()).unwrap();
        assert_eq!(s.homogeneous, vec![rf(&k, &[1], &[0, 0, 1])]);
    }

    #[test]
    fn fixed_vector_examples() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::shift_field(&k);
        let m = DifferenceModule::rank_one(&r, RingElement::Fn(rf(&k, &[0, 1], &[1, 1]))).unwrap();
        let fs = fixed_vectors(&m).unwrap();
        assert_eq!(fs.vectors, vec![vec![RingElement::Fn(RatFunc::x(&k))]]);
        let m = DifferenceModule::rank_one(&r, RingElement::Fn(rf(&k, &[1, 1], &[0, 1]))).unwrap();
        let f = is_trivial(&m).unwrap().unwrap();
        assert_eq!(f.get(0, 0), &RingElement::Fn(rf(&k, &[1], &[0, 1])));
        let m = DifferenceModule::rank_one(&r, r.from_int(-1)).unwrap();
        assert!(is_trivial(&m).unwrap().is_none());
        assert_eq!(fixed_vectors(&DifferenceModule::rank_one(&r, r.from_int(2)).unwrap()).unwrap().dim(), 0);
    }

    #[test]
    fn constant_and_general_matrices() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::shift_field(&k);
        // unipotent: v = (x, 1) up to constants
        let b = Matrix::from_rows(vec![vec![r.one(), r.one()], vec![r.zero(), r.one()]]);
        let m = DifferenceModule::from_recurrence(&r, b).unwrap();
        let fs = fixed_vectors(&m).unwrap();
        assert_eq!(fs.dim(), 2);
        assert!(fs.certified);
        for v in &fs.vectors {
            assert_eq!(&m.apply_tau(v).unwrap(), v);
        }
        // a gauge transform of the trivial module by [[1, 1/x], [0, 1]]
        let t = Matrix::from_rows(vec![
            vec![r.one(), RingElement::Fn(rf(&k, &[1], &[0, 1]))],
            vec![r.zero(), r.one()],
        ]);
        let tau_t = t.map(|e| r.tau_apply(e, 1).unwrap());
        let a = t.mul(&invert(&r, &tau_t).unwrap());
        let m = DifferenceModule::from_basis_matrix(&r, a).unwrap();
        let fs = fixed_vectors(&m).unwrap();
        assert_eq!(fs.dim(), 2);
        assert_eq!(fs.method, "bounded-ansatz");
        assert!(is_trivial(&m).unwrap().is_some());
    }

    #[test]
    fn product_ring_fixed_vectors() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::cyclic_product(&k, 3).unwrap();
        let one = DifferenceModule::rank_one(&r, r.one()).unwrap();
        assert_eq!(fixed_vectors(&one).unwrap().vectors, vec![vec![r.one()]]);
        let id = DifferenceRing::permutation_product(&k, vec![0, 1]).unwrap();
        let m = DifferenceModule::rank_one(&id, id.one()).unwrap();
        assert_eq!(fixed_vectors(&m).unwrap().dim(), 2);
        assert_eq!(is_trivial(&m).unwrap(), Some(Matrix::from_rows(vec![vec![id.one()]])));
    }
}
