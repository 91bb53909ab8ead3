//! Embeddings between constant fields, composita and field automorphisms.

use num_traits::Zero;

use super::factor::{poly_factor, roots_in_field};
use super::field::{ConstantsField, FieldElement};
use super::linalg::Matrix;
use super::poly::Poly;
use super::qpoly::{q, Q};
use crate::error::{PvError, Result};

/// Largest compositum degree attempted.
pub const MAX_JOIN_DEGREE: usize = 32;

/// A field homomorphism determined by the image of the source generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldEmbedding {
    pub source: ConstantsField,
    pub target: ConstantsField,
    pub generator_image: FieldElement,
}

impl FieldEmbedding {
    pub fn identity(k: &ConstantsField) -> Self {
        FieldEmbedding { source: k.clone(), target: k.clone(), generator_image: k.generator() }
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        assert_eq!(x.field(), &self.source, "embedding applied to foreign element");
        if self.source.is_rationals() {
            return self.target.from_rational(x.coords()[0].clone());
        }
        // Horner in the generator image
        let mut acc = self.target.zero();
        for c in x.coords().iter().rev() {
            acc = acc.mul_ref(&self.generator_image).add_ref(&self.target.from_rational(c.clone()));
        }
        acc
    }

    pub fn apply_poly(&self, p: &Poly) -> Poly {
        p.map_coeffs(&self.target, |c| self.apply(c))
    }

    pub fn compose(&self, then: &FieldEmbedding) -> FieldEmbedding {
        assert_eq!(self.target, then.source);
        FieldEmbedding {
            source: self.source.clone(),
            target: then.target.clone(),
            generator_image: then.apply(&self.generator_image),
        }
    }

    /// The defining relation of the source holds at the generator image.
    pub fn is_homomorphism(&self) -> bool {
        if self.source.is_rationals() {
            return true;
        }
        let m = Poly::from_rationals(&self.target, self.source.modulus());
        m.eval(&self.generator_image).is_zero()
    }
}

/// Compositum of two fields with both embeddings.
#[derive(Clone, Debug)]
pub struct FieldJoin {
    pub field: ConstantsField,
    pub left: FieldEmbedding,
    pub right: FieldEmbedding,
}

/// An embedding of `from` into `into`, if one exists. The first root (in
/// canonical order) of the defining polynomial is used.
pub fn find_embedding(from: &ConstantsField, into: &ConstantsField) -> Option<FieldEmbedding> {
    if from.is_rationals() {
        return Some(FieldEmbedding { source: from.clone(), target: into.clone(), generator_image: into.zero() });
    }
    if from == into {
        return Some(FieldEmbedding::identity(from));
    }
    if into.degree() % from.degree() != 0 {
        return None;
    }
    if let (Some(a), Some(b)) = (from.cyclotomic_order(), into.cyclotomic_order()) {
        if b % a == 0 {
            let img = into.generator().pow((b / a) as i64).ok()?;
            return Some(FieldEmbedding { source: from.clone(), target: into.clone(), generator_image: img });
        }
        // normalized orders: Q(zeta_a) lies in Q(zeta_b) iff a | b
        return None;
    }
    let m = Poly::from_rationals(into, from.modulus());
    let root = roots_in_field(&m).into_iter().next()?;
    Some(FieldEmbedding { source: from.clone(), target: into.clone(), generator_image: root })
}

/// Automorphisms of `k` (embeddings of `k` into itself), identity first.
pub fn automorphisms(k: &ConstantsField) -> Vec<FieldEmbedding> {
    if k.is_rationals() {
        return vec![FieldEmbedding::identity(k)];
    }
    let m = Poly::from_rationals(k, k.modulus());
    let mut out = vec![FieldEmbedding::identity(k)];
    for r in roots_in_field(&m) {
        if r != k.generator() {
            out.push(FieldEmbedding { source: k.clone(), target: k.clone(), generator_image: r });
        }
    }
    out
}

pub fn is_normal(k: &ConstantsField) -> bool {
    automorphisms(k).len() == k.degree()
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A field containing both inputs, with embeddings.
pub fn field_join(f1: &ConstantsField, f2: &ConstantsField) -> Result<FieldJoin> {
    if let Some(e) = find_embedding(f1, f2) {
        return Ok(FieldJoin { field: f2.clone(), left: e, right: FieldEmbedding::identity(f2) });
    }
    if let Some(e) = find_embedding(f2, f1) {
        return Ok(FieldJoin { field: f1.clone(), left: FieldEmbedding::identity(f1), right: e });
    }
    if let (Some(a), Some(b)) = (f1.cyclotomic_order(), f2.cyclotomic_order()) {
        let n = lcm(a, b);
        let f = ConstantsField::cyclotomic(n);
        let n = f.cyclotomic_order().unwrap();
        let emb = |src: &ConstantsField, k: u64| -> Result<FieldEmbedding> {
            let img = f.generator().pow((n / k) as i64)?;
            Ok(FieldEmbedding { source: src.clone(), target: f.clone(), generator_image: img })
        };
        let left = emb(f1, a)?;
        let right = emb(f2, b)?;
        if left.is_homomorphism() && right.is_homomorphism() {
            return Ok(FieldJoin { field: f, left, right });
        }
    }
    general_join(f1, f2)
}

/// Compositum through `f1[y]/(g)` with `g` an irreducible factor of the
/// defining polynomial of `f2` over `f1`, and a primitive element
/// `y + s * alpha`.
fn general_join(f1: &ConstantsField, f2: &ConstantsField) -> Result<FieldJoin> {
    let m2 = Poly::from_rationals(f1, f2.modulus());
    let fz = poly_factor(&m2)?;
    let g = fz
        .factors
        .iter()
        .map(|(p, _)| p.clone())
        .max_by_key(|p| p.deg())
        .expect("nonconstant modulus");
    let d1 = f1.degree();
    let e = g.deg();
    let dd = d1 * e;
    if dd > MAX_JOIN_DEGREE {
        return Err(PvError::UnsupportedExtension(format!(
            "compositum of {} and {} has degree {dd}",
            f1.label(),
            f2.label()
        )));
    }
    let coords = |p: &Poly| -> Vec<Q> {
        let mut v = vec![Q::zero(); dd];
        for (j, c) in p.coeffs().iter().enumerate() {
            for (i, x) in c.coords().iter().enumerate() {
                v[j * d1 + i] = x.clone();
            }
        }
        v
    };
    let alpha = Poly::constant(f1.generator());
    let y = Poly::x(f1);
    for s in 0..=dd as i64 {
        let gamma = y.add_ref(&alpha.scale(&f1.from_int(s)));
        let mut powers = vec![Poly::one(f1)];
        for _ in 0..dd {
            let next = powers.last().unwrap().mul_ref(&gamma).rem(&g);
            powers.push(next);
        }
        let cols: Vec<Vec<Q>> = powers[..dd].iter().map(|p| coords(p)).collect();
        let pm = Matrix::from_fn(dd, dd, |i, j| cols[j][i].clone());
        let Some(inv) = pm.inverse() else { continue };
        let solve = |v: &[Q]| inv.mul_vec(v);
        let top = solve(&coords(&powers[dd]));
        let mut modulus: Vec<Q> = top.iter().map(|c| -c.clone()).collect();
        modulus.push(q(1));
        let field = ConstantsField::number_field(&modulus, "theta")?;
        // the field may have been recognized as cyclotomic; its generator
        // still satisfies the same defining polynomial
        let to_elem = |v: Vec<Q>| field.element(&v);
        let left_img = if f1.is_rationals() { field.zero() } else { to_elem(solve(&coords(&alpha))) };
        let right_img = to_elem(solve(&coords(&y)));
        let left = FieldEmbedding { source: f1.clone(), target: field.clone(), generator_image: left_img };
        let right = FieldEmbedding { source: f2.clone(), target: field.clone(), generator_image: right_img };
        debug_assert!(left.is_homomorphism() && right.is_homomorphism());
        return Ok(FieldJoin { field, left, right });
    }
    Err(PvError::UnsupportedExtension("no primitive element found".into()))
}
