//! Extension of the constants field, compatibility of field automorphisms
//! with `tau`, and splitting constant systems by adjoining eigenvalues.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::tower::{automorphisms, field_join, find_embedding, FieldEmbedding};
use crate::algebra::{poly_factor, ConstantsField, FieldElement, Matrix, Poly};
use crate::error::{PvError, Result};
use crate::galois::{galois_group, DiagonalizableGroup};
use crate::module::{diag, DifferenceModule};
use crate::ring::{constants_of, ConstantsOf, DifferenceRing, RingElement, RingKind};

/// `R (x)_K K'` together with the embedding `K -> K'`.
#[derive(Clone, Debug)]
pub struct ConstantExtension {
    pub base: DifferenceRing,
    pub ring: DifferenceRing,
    pub embedding: FieldEmbedding,
    pub constants: ConstantsOf,
}

fn map_field_element(emb: &FieldEmbedding, e: &RingElement) -> RingElement {
    match e {
        RingElement::Fn(f) => RingElement::Fn(f.map_coeffs(&emb.target, |c| emb.apply(c))),
        RingElement::Tuple(v) => RingElement::Tuple(v.iter().map(|c| emb.apply(c)).collect()),
    }
}

impl ConstantExtension {
    pub fn map_element(&self, e: &RingElement) -> Result<RingElement> {
        if !self.base.contains(e) {
            return Err(PvError::Mismatch(format!("{e} is not an element of {}", self.base.describe())));
        }
        Ok(map_field_element(&self.embedding, e))
    }

    pub fn map_module(&self, m: &DifferenceModule) -> Result<DifferenceModule> {
        m.map_entries(&self.ring, |e| self.map_element(e))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.describe(),
            "extended": self.ring.describe(),
            "field": self.ring.field().label(),
            "minimal_polynomial": self.ring.field().minimal_polynomial_string(),
            "constants": self.constants.label(),
        })
    }
}

/// Extend the constants of `r` to `target`, which must contain them.
pub fn extend_constants(r: &DifferenceRing, target: &ConstantsField) -> Result<ConstantExtension> {
    let emb = find_embedding(r.field(), target).ok_or_else(|| {
        PvError::UnsupportedExtension(format!("{} does not embed into {}", r.field().label(), target.label()))
    })?;
    let ring = match r.kind() {
        RingKind::ShiftField => DifferenceRing::shift_field(target),
        RingKind::ShiftPoly => DifferenceRing::shift_poly(target),
        RingKind::QDilation { q } => DifferenceRing::q_dilation(target, emb.apply(q))?,
        RingKind::Product { perm } => DifferenceRing::permutation_product(target, perm.clone())?,
        RingKind::Localized { gens } => {
            let poly = DifferenceRing::shift_poly(target);
            let mapped: Vec<RingElement> = gens
                .iter()
                .map(|g| poly.element(crate::algebra::RatFunc::from_poly(emb.apply_poly(g))))
                .collect::<Result<_>>()?;
            poly.localize(&mapped)?
        }
    };
    let constants = constants_of(&ring);
    let before = constants_of(r);
    if constants.field != *target || constants.copies != before.copies {
        return Err(PvError::UnsupportedExtension(format!(
            "constants of the extension are {}, expected {}",
            constants.label(),
            target.label()
        )));
    }
    Ok(ConstantExtension { base: r.clone(), ring, embedding: emb, constants })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationReport {
    pub holds: bool,
    /// Number of nontrivial automorphisms of `K'/K` tested.
    pub automorphisms: usize,
    pub elements_checked: usize,
    pub trace: Vec<String>,
}

/// Apply a field automorphism coefficientwise.
pub fn apply_automorphism(sigma: &FieldEmbedding, e: &RingElement) -> RingElement {
    map_field_element(sigma, e)
}

/// Check `sigma tau = tau sigma` for every automorphism of `K'` over `K`
/// on seeded random elements and on `extra`.
pub fn galois_commutation_check(ext: &ConstantExtension, seed: u64, extra: &[RingElement]) -> Result<CommutationReport> {
    let big = ext.ring.field();
    let small = ext.base.field();
    let base_gen = ext.embedding.apply(&small.generator());
    let sigmas: Vec<FieldEmbedding> = automorphisms(big)
        .into_iter()
        .filter(|s| small.is_rationals() || s.apply(&base_gen) == base_gen)
        .collect();
    let degree = big.degree() / small.degree();
    if sigmas.len() != degree {
        return Err(PvError::NonNormal(format!("{} over {}", big.label(), small.label())));
    }
    let mut trace = vec![format!("{} automorphisms of {} over {}", sigmas.len(), big.label(), small.label())];
    // the identity comes first
    let nontrivial: Vec<&FieldEmbedding> = sigmas.iter().skip(1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements: Vec<RingElement> = (0..100).map(|_| ext.ring.random_element(&mut rng)).collect();
    elements.extend(extra.iter().cloned());
    let mut holds = true;
    for sigma in &nontrivial {
        let mut bad = 0;
        for e in &elements {
            let lhs = apply_automorphism(sigma, &ext.ring.tau_apply(e, 1)?);
            let rhs = ext.ring.tau_apply(&apply_automorphism(sigma, e), 1)?;
            if lhs != rhs {
                bad += 1;
            }
        }
        holds &= bad == 0;
        trace.push(format!(
            "sigma: {} -> {}: {} of {} elements commute",
            big.generator_name(),
            sigma.generator_image,
            elements.len() - bad,
            elements.len()
        ));
    }
    if nontrivial.is_empty() {
        trace.push("trivial extension".into());
    }
    Ok(CommutationReport { holds, automorphisms: nontrivial.len(), elements_checked: elements.len(), trace })
}

/// Result of diagonalizing a constant recurrence matrix after extending
/// the constants.
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub extension: ConstantExtension,
    pub eigenvalues: Vec<FieldElement>,
    /// `P` with `P^-1 B P = diag(eigenvalues)` for the recurrence matrix `B`.
    pub conjugation: Matrix<RingElement>,
    pub module: DifferenceModule,
    pub group: DiagonalizableGroup,
}

impl SplitResult {
    pub fn field(&self) -> &ConstantsField {
        self.extension.ring.field()
    }
}

/// Characteristic polynomial by Faddeev-LeVerrier.
fn charpoly(b: &Matrix<FieldElement>, k: &ConstantsField) -> Result<Poly> {
    let n = b.rows();
    let mut coeffs = vec![k.zero(); n + 1];
    coeffs[n] = k.one();
    let ident = Matrix::identity(n, &k.one());
    let mut mk = Matrix::from_fn(n, n, |_, _| k.zero());
    for j in 1..=n {
        let c = coeffs[n - j + 1].clone();
        mk = b.mul(&mk);
        for i in 0..n {
            let v = mk.get(i, i).add_ref(&c.mul_ref(ident.get(i, i)));
            mk.set(i, i, v);
        }
        let bm = b.mul(&mk);
        let mut tr = k.zero();
        for i in 0..n {
            tr = tr.add_ref(bm.get(i, i));
        }
        coeffs[n - j] = tr.neg_ref().div_ref(&k.from_int(j as i64))?;
    }
    Ok(Poly::new(k, coeffs))
}

/// A field containing all roots of `p` (coefficients in `k`).
fn splitting_field(p: &Poly, k: &ConstantsField) -> Result<ConstantsField> {
    let fz = poly_factor(p)?;
    let nonlinear: Vec<&Poly> = fz.factors.iter().map(|(g, _)| g).filter(|g| g.deg() > 1).collect();
    let mut field = k.clone();
    for (j, g) in nonlinear.iter().enumerate() {
        let rational = g.as_rational_coeffs().ok_or_else(|| {
            PvError::UnsupportedExtension(format!("adjoining roots of {g} over {}", k.label()))
        })?;
        let name = if nonlinear.len() == 1 { "a".to_string() } else { format!("a{}", j + 1) };
        let e = ConstantsField::number_field(&rational, &name)?;
        field = field_join(&field, &e)?.field;
    }
    let emb = find_embedding(k, &field).expect("joined field contains the base");
    let mapped = emb.apply_poly(p);
    if poly_factor(&mapped)?.factors.iter().any(|(g, _)| g.deg() > 1) {
        return Err(PvError::UnsupportedExtension(format!(
            "{p} does not split over {}; a non-normal tower would be needed",
            field.label()
        )));
    }
    Ok(field)
}

/// Diagonalize a module with constant recurrence matrix by adjoining its
/// eigenvalues, then compute the Galois group of the diagonal module.
pub fn split_and_analyze(m: &DifferenceModule) -> Result<SplitResult> {
    let ring = m.ring();
    let k = ring.field();
    let b = m.recurrence_matrix();
    let n = b.rows();
    if b.is_diagonal() {
        let extension = extend_constants(ring, k)?;
        let eigen: Vec<FieldElement> = (0..n).filter_map(|i| b.get(i, i).as_constant()).collect();
        let group = galois_group(m)?;
        return Ok(SplitResult {
            extension,
            eigenvalues: if eigen.len() == n { eigen } else { Vec::new() },
            conjugation: Matrix::identity(n, &ring.one()),
            module: m.clone(),
            group,
        });
    }
    let bk: Matrix<FieldElement> = b.try_map(|e| {
        e.as_constant()
            .ok_or_else(|| PvError::OutsideDiagonalizableScope(format!("entry {e} is not constant")))
    })?;
    let p = charpoly(&bk, k)?;
    if !p.is_squarefree() {
        return Err(PvError::OutsideDiagonalizableScope(format!("characteristic polynomial {p} has repeated roots")));
    }
    let field = splitting_field(&p, k)?;
    let extension = extend_constants(ring, &field)?;
    let emb = &extension.embedding;
    let bf = bk.map(|c| emb.apply(c));
    let mut eigen = crate::algebra::factor::roots_in_field(&emb.apply_poly(&p));
    eigen.sort();
    let mut cols = Vec::with_capacity(n);
    for lam in &eigen {
        let shifted = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                bf.get(i, j).sub_ref(lam)
            } else {
                bf.get(i, j).clone()
            }
        });
        let mut ns = shifted.nullspace(&field.zero());
        if ns.len() != 1 {
            return Err(PvError::OutsideDiagonalizableScope(format!("eigenspace of {lam} has dimension {}", ns.len())));
        }
        cols.push(ns.remove(0));
    }
    let pm = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let pinv = pm.inverse().expect("eigenvectors of distinct eigenvalues are independent");
    if pinv.mul(&bf).mul(&pm) != Matrix::diagonal(&eigen) {
        return Err(PvError::InconsistentPresentation("conjugation does not diagonalize".into()));
    }
    let er = &extension.ring;
    let entries: Vec<RingElement> = eigen.iter().map(|l| er.constant(l)).collect();
    let module = DifferenceModule::from_recurrence(er, diag(er, &entries))?;
    let group = galois_group(&module)?;
    Ok(SplitResult { conjugation: pm.map(|c| er.constant(c)), extension, eigenvalues: eigen, module, group })
}
