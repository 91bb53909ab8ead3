//! Factorization of univariate polynomials over the rationals and over
//! simple number fields (norm method).

use num_traits::{One, Zero};

use super::field::{ConstantsField, FieldElement};
use super::poly::Poly;
use super::qpoly::{self, q, Q};
use super::zfactor;
use crate::error::{PvError, Result};

/// `p = unit * prod f_i^{e_i}` with monic irreducible `f_i`, sorted by
/// degree and then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (f, e) in &self.factors {
            acc = acc.mul_ref(&f.pow(*e as u32));
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Monic irreducible factors over Q of a squarefree rational polynomial.
fn factor_squarefree_q(p: &[Q]) -> Vec<Vec<Q>> {
    let z = qpoly::primitive_integer(p);
    let mut out: Vec<Vec<Q>> = Vec::new();
    // strip the factor x first; the modular method needs nonzero constant terms
    let (z, has_x) = if z.len() > 1 && z[0].is_zero() {
        (z[1..].to_vec(), true)
    } else {
        (z, false)
    };
    if has_x {
        out.push(vec![Q::zero(), Q::one()]);
    }
    if z.len() > 1 {
        for f in zfactor::factor_squarefree(&z) {
            out.push(qpoly::monic(&qpoly::from_integers(&f)));
        }
    }
    out
}

/// Irreducibility over Q of a rational polynomial of positive degree.
pub fn is_irreducible_over_q(p: &[Q]) -> bool {
    match qpoly::degree(p) {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => qpoly::is_squarefree(p) && factor_squarefree_q(p).len() == 1,
    }
}

/// Monic irreducible factors with multiplicities over Q.
pub fn factor_over_q(p: &[Q]) -> Vec<(Vec<Q>, usize)> {
    let k = ConstantsField::rationals();
    let poly = Poly::from_rationals(&k, p);
    let mut out = Vec::new();
    for (part, e) in poly.squarefree_decomposition() {
        let coeffs = part.as_rational_coeffs().expect("rational polynomial");
        for f in factor_squarefree_q(&coeffs) {
            out.push((f, e));
        }
    }
    out
}

/// Norm of `g(x)` from `K[x]` down to `Q[x]`, by evaluation and
/// interpolation.
fn norm_poly(g: &Poly) -> Vec<Q> {
    let k = g.field();
    let n = k.degree() * g.deg();
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    for i in 0..=n as i64 {
        let x0 = q(i);
        ys.push(g.eval(&k.from_rational(x0.clone())).norm());
        xs.push(x0);
    }
    qpoly::interpolate(&xs, &ys)
}

fn embed(k: &ConstantsField, p: &[Q]) -> Poly {
    Poly::from_rationals(k, p)
}

/// Monic irreducible factors over `K` of a monic squarefree polynomial.
fn factor_squarefree_k(f: &Poly) -> Vec<Poly> {
    let k = f.field();
    if f.deg() <= 1 {
        return vec![f.clone()];
    }
    if k.is_rationals() {
        let coeffs = f.as_rational_coeffs().expect("rational polynomial");
        return factor_squarefree_q(&coeffs).iter().map(|c| embed(k, c)).collect();
    }
    let alpha = k.generator();
    for s in 0i64.. {
        // g(x) = f(x - s alpha)
        let shift = alpha.scale(&q(-s));
        let g = f.compose_affine(&k.one(), &shift);
        let norm = norm_poly(&g);
        if !qpoly::is_squarefree(&norm) {
            continue;
        }
        let parts = factor_squarefree_q(&norm);
        if parts.len() == 1 {
            return vec![f.clone()];
        }
        let back = alpha.scale(&q(s));
        let mut out = Vec::new();
        for np in parts {
            let h = g.gcd(&embed(k, &np));
            if h.deg() >= 1 {
                out.push(h.compose_affine(&k.one(), &back).monic());
            }
        }
        return out;
    }
    unreachable!()
}

/// Complete factorization over the coefficient field.
pub fn poly_factor(p: &Poly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(PvError::ZeroInput);
    }
    let unit = p.leading();
    let mut factors = Vec::new();
    for (part, e) in p.monic().squarefree_decomposition() {
        if part.deg() == 0 {
            continue;
        }
        for f in factor_squarefree_k(&part) {
            factors.push((f, e));
        }
    }
    factors.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    Ok(Factorization { unit, factors })
}

/// Distinct roots in the coefficient field, sorted.
pub fn roots_in_field(p: &Poly) -> Vec<FieldElement> {
    if p.is_zero() {
        return Vec::new();
    }
    let mut roots: Vec<FieldElement> = poly_factor(p)
        .map(|fz| {
            fz.factors
                .iter()
                .filter(|(f, _)| f.deg() == 1)
                .map(|(f, _)| f.coeff(0).neg_ref())
                .collect()
        })
        .unwrap_or_default();
    roots.sort();
    roots
}

/// Roots of `y^d - c` in the field of `c`.
pub fn nth_roots(c: &FieldElement, d: u32) -> Vec<FieldElement> {
    let k = c.field();
    if d == 0 {
        return Vec::new();
    }
    let p = Poly::monomial(k.one(), d as usize).sub_ref(&Poly::constant(c.clone()));
    roots_in_field(&p)
}
