//! Orbit decompositions, coboundary tests and relation lattices.

use crate::algebra::multiplicative::discrete_log;
use crate::algebra::{integer_kernel, multiplicative_relations, poly_factor, FieldElement, IntegerLattice, Poly, RatFunc};
use crate::error::{PvError, Result};
use crate::ring::orbit::{q_distance, q_step, shift_distance};
use crate::ring::{cycles, DifferenceRing, RingElement, RingKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMember {
    /// `factor = tau-step^offset(representative)`.
    pub offset: i64,
    pub factor: Poly,
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Poly,
    pub members: Vec<OrbitMember>,
    pub exponent_sum: i64,
}

/// `a = constant * x^x_valuation * prod factor^exponent`, factors grouped by
/// `tau`-orbit. `x_valuation` is only used for `q`-dilation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub constant: FieldElement,
    pub orbits: Vec<Orbit>,
    pub x_valuation: i64,
}

impl OrbitDecomposition {
    /// Multiply everything back together.
    pub fn reassemble(&self) -> RatFunc {
        let k = self.constant.field();
        let mut f = RatFunc::constant(self.constant.clone());
        for o in &self.orbits {
            for m in &o.members {
                let p = RatFunc::from_poly(m.factor.clone()).pow(m.exponent).expect("nonzero factor");
                f = f.mul_ref(&p);
            }
        }
        f.mul_ref(&RatFunc::x(k).pow(self.x_valuation).expect("x nonzero"))
    }
}

fn function_field_q(ring: &DifferenceRing) -> Result<Option<&FieldElement>> {
    match ring.kind() {
        RingKind::ShiftField => Ok(None),
        RingKind::QDilation { q } => Ok(Some(q)),
        _ => Err(PvError::UnsupportedBase(ring.describe())),
    }
}

fn as_function<'a>(ring: &DifferenceRing, a: &'a RingElement) -> Result<&'a RatFunc> {
    match a.as_ratfunc() {
        Some(f) if ring.contains(a) => Ok(f),
        _ => Err(PvError::Mismatch(format!("{a} is not an element of {}", ring.describe()))),
    }
}

/// Constant, monic irreducible factors with signed exponents, and the
/// `x`-valuation when `split_x` is set.
fn factored(f: &RatFunc, split_x: bool) -> Result<(FieldElement, Vec<(Poly, i64)>, i64)> {
    let mut out = Vec::new();
    let mut xv = 0i64;
    for (p, sign) in [(f.num(), 1i64), (f.den(), -1i64)] {
        if p.is_constant() {
            continue;
        }
        for (g, e) in poly_factor(p)?.factors {
            if split_x && g.deg() == 1 && g.coeff(0).is_zero() {
                xv += sign * e as i64;
            } else {
                out.push((g, sign * e as i64));
            }
        }
    }
    Ok((f.num().leading(), out, xv))
}

/// Group monic irreducible polynomials into orbits; returns the
/// representative and `(offset, poly)` members, offsets starting at 0.
fn group_orbits(polys: &[Poly], q: Option<&FieldElement>) -> Vec<(Poly, Vec<(i64, Poly)>)> {
    let mut groups: Vec<(Poly, Vec<(i64, Poly)>)> = Vec::new();
    for p in polys {
        let hit = groups.iter_mut().find_map(|(rep, ms)| {
            let h = match q {
                None => shift_distance(rep, p),
                Some(q) => q_distance(rep, p, q),
            };
            h.map(|h| (h, ms))
        });
        match hit {
            Some((h, ms)) => {
                if !ms.iter().any(|(_, m)| m == p) {
                    ms.push((h, p.clone()));
                }
            }
            None => groups.push((p.clone(), vec![(0, p.clone())])),
        }
    }
    for (rep, ms) in groups.iter_mut() {
        let lo = ms.iter().map(|m| m.0).min().expect("nonempty");
        for m in ms.iter_mut() {
            m.0 -= lo;
        }
        ms.sort_by_key(|m| m.0);
        *rep = ms[0].1.clone();
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    groups
}

/// Factor `a` and group its irreducible factors into `tau`-orbits.
pub fn orbit_decompose(ring: &DifferenceRing, a: &RingElement) -> Result<OrbitDecomposition> {
    let q = function_field_q(ring)?;
    let f = as_function(ring, a)?;
    if f.is_zero() {
        return Err(PvError::ZeroInput);
    }
    let (constant, factors, x_valuation) = factored(f, q.is_some())?;
    let polys: Vec<Poly> = factors.iter().map(|(p, _)| p.clone()).collect();
    let orbits = group_orbits(&polys, q)
        .into_iter()
        .map(|(rep, ms)| {
            let members: Vec<OrbitMember> = ms
                .into_iter()
                .map(|(offset, factor)| {
                    let exponent = factors.iter().find(|(p, _)| *p == factor).expect("own factor").1;
                    OrbitMember { offset, factor, exponent }
                })
                .collect();
            let exponent_sum = members.iter().map(|m| m.exponent).sum();
            Orbit { representative: rep, members, exponent_sum }
        })
        .collect();
    Ok(OrbitDecomposition { constant, orbits, x_valuation })
}

/// `r` with `tau(r)/r = prod_h p_h^{e_h}` for an orbit with zero exponent
/// sum, by telescoping: `r = prod_j p_j^{sum_{h > j} e_h}`. In the `q` case
/// the result carries an extra constant `q^{d sum h e_h}` which the caller
/// absorbs.
fn telescope(orbit: &Orbit, q: Option<&FieldElement>) -> RatFunc {
    let k = orbit.representative.field();
    let top = orbit.members.iter().map(|m| m.offset).max().unwrap_or(0);
    let mut r = RatFunc::one(k);
    for j in 0..top {
        let e: i64 = orbit.members.iter().filter(|m| m.offset > j).map(|m| m.exponent).sum();
        if e != 0 {
            let p = match q {
                None => orbit.representative.shift(j),
                Some(q) => q_step(&orbit.representative, q, j),
            };
            r = r.mul_ref(&RatFunc::from_poly(p).pow(e).expect("nonzero"));
        }
    }
    r
}

/// `d * sum_h h e_h` for an orbit, the power of `q` produced by telescoping.
fn q_twist(orbit: &Orbit) -> i64 {
    let d = orbit.representative.deg() as i64;
    orbit.members.iter().map(|m| d * m.offset * m.exponent).sum()
}

fn transitive_perm(ring: &DifferenceRing) -> Result<&[usize]> {
    match ring.kind() {
        RingKind::Product { perm } if cycles(perm).len() == 1 => Ok(perm),
        _ => Err(PvError::UnsupportedBase(ring.describe())),
    }
}

fn norm_of(a: &RingElement) -> FieldElement {
    let v = a.as_tuple().expect("tuple");
    v.iter().skip(1).fold(v[0].clone(), |acc, c| acc.mul_ref(c))
}

/// Some `r` with `a = tau(r)/r`, or `None` if `a` is not a coboundary.
pub fn tau_coboundary(ring: &DifferenceRing, a: &RingElement) -> Result<Option<RingElement>> {
    if a.is_zero() {
        return Err(PvError::ZeroInput);
    }
    let r = match ring.kind() {
        RingKind::Product { .. } => {
            let perm = transitive_perm(ring)?;
            if !ring.contains(a) {
                return Err(PvError::Mismatch(format!("{a} is not an element of {}", ring.describe())));
            }
            if !ring.is_unit(a) || !norm_of(a).is_one() {
                return Ok(None);
            }
            // tau(r)_{perm i} = r_i, so r_{perm i} = r_i / a_{perm i}
            let v = a.as_tuple().expect("tuple");
            let k = ring.field();
            let mut r = vec![k.zero(); v.len()];
            r[0] = k.one();
            let mut i = 0;
            for _ in 1..v.len() {
                let j = perm[i];
                r[j] = r[i].div_ref(&v[j])?;
                i = j;
            }
            RingElement::Tuple(r)
        }
        _ => {
            let q = function_field_q(ring)?;
            let dec = orbit_decompose(ring, a)?;
            if dec.x_valuation != 0 || dec.orbits.iter().any(|o| o.exponent_sum != 0) {
                return Ok(None);
            }
            let k = ring.field();
            let mut r = RatFunc::one(k);
            for o in &dec.orbits {
                r = r.mul_ref(&telescope(o, q));
            }
            match q {
                None => {
                    if !dec.constant.is_one() {
                        return Ok(None);
                    }
                }
                Some(q) => {
                    let twist: i64 = dec.orbits.iter().map(q_twist).sum();
                    let residual = dec.constant.div_ref(&q.pow(twist)?)?;
                    let Some(m) = discrete_log(q, &residual)? else {
                        return Ok(None);
                    };
                    r = r.mul_ref(&RatFunc::x(k).pow(m)?);
                }
            }
            RingElement::Fn(r)
        }
    };
    let check = ring.mul(&ring.tau_apply(&r, 1)?, &ring.inv(&r)?)?;
    if &check != a {
        return Err(PvError::InconsistentPresentation(format!("telescoped witness {r} failed for {a}")));
    }
    Ok(Some(r))
}

/// `prod a_i^{k_i}` in the ring.
pub fn monomial_value(ring: &DifferenceRing, a: &[RingElement], k: &[i64]) -> Result<RingElement> {
    let mut acc = ring.one();
    for (ai, &e) in a.iter().zip(k) {
        if e != 0 {
            acc = ring.mul(&acc, &ring.pow(ai, e)?)?;
        }
    }
    Ok(acc)
}

/// `L = {k : prod a_i^{k_i} is a coboundary}` with a verified witness `r`
/// for each Hermite basis vector.
pub fn relation_lattice(ring: &DifferenceRing, a: &[RingElement]) -> Result<(IntegerLattice, Vec<(Vec<i64>, RingElement)>)> {
    let n = a.len();
    if n == 0 {
        return Err(PvError::InvalidInput("relation lattice of an empty list".into()));
    }
    for ai in a {
        if ai.is_zero() {
            return Err(PvError::ZeroInput);
        }
        if !ring.contains(ai) || !ring.is_unit(ai) {
            return Err(PvError::Mismatch(format!("{ai} is not a unit of {}", ring.describe())));
        }
    }
    let lattice = match ring.kind() {
        RingKind::Product { .. } => {
            transitive_perm(ring)?;
            let norms: Vec<FieldElement> = a.iter().map(norm_of).collect();
            multiplicative_relations(&norms)?
        }
        _ => {
            let q = function_field_q(ring)?;
            let mut decs = Vec::with_capacity(n);
            let mut polys = Vec::new();
            for ai in a {
                let f = as_function(ring, ai)?;
                let d = factored(f, q.is_some())?;
                polys.extend(d.1.iter().map(|(p, _)| p.clone()));
                decs.push(d);
            }
            let groups = group_orbits(&polys, q);
            // orbit-sum rows, plus the x-valuation row in the q case
            let mut rows: Vec<Vec<i64>> = groups
                .iter()
                .map(|(_, ms)| {
                    decs.iter()
                        .map(|d| d.1.iter().filter(|(p, _)| ms.iter().any(|(_, m)| m == p)).map(|(_, e)| e).sum())
                        .collect()
                })
                .collect();
            if q.is_some() {
                rows.push(decs.iter().map(|d| d.2).collect());
            }
            let rows: Vec<Vec<i64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
            let k1 = IntegerLattice::new(n, &integer_kernel(&rows, n));
            // residual constants
            let mut gammas = Vec::with_capacity(n);
            for d in &decs {
                let mut g = d.0.clone();
                if let Some(q) = q {
                    let mut twist = 0i64;
                    for (rep, ms) in &groups {
                        let deg = rep.deg() as i64;
                        for (h, m) in ms {
                            if let Some((_, e)) = d.1.iter().find(|(p, _)| p == m) {
                                twist += deg * h * e;
                            }
                        }
                    }
                    g = g.div_ref(&q.pow(twist)?)?;
                }
                gammas.push(g);
            }
            let k2 = match q {
                None => multiplicative_relations(&gammas)?,
                Some(q) => {
                    gammas.push(q.clone());
                    let full = multiplicative_relations(&gammas)?;
                    let proj: Vec<Vec<i64>> = full.basis().iter().map(|b| b[..n].to_vec()).collect();
                    IntegerLattice::new(n, &proj)
                }
            };
            k1.intersect(&k2)
        }
    };
    let mut witnesses = Vec::with_capacity(lattice.rank());
    for lambda in lattice.basis() {
        let b = monomial_value(ring, a, lambda)?;
        let r = tau_coboundary(ring, &b)?.ok_or_else(|| {
            PvError::InconsistentPresentation(format!("lattice vector {lambda:?} has no coboundary witness"))
        })?;
        witnesses.push((lambda.clone(), r));
    }
    Ok((lattice, witnesses))
}
