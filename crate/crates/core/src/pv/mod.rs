//! Picard-Vessiot rings of diagonal modules as monomial extensions
//! `S = R[t_1^{+-1}, ..., t_m^{+-1}] / (t^lambda - r_lambda : lambda in L)`
//! with `tau(t_i) = a_i t_i`.

mod coboundary;
mod verify;

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::algebra::lattice::smith_normal_form;
use crate::algebra::IntegerLattice;
use crate::error::{PvError, Result};
use crate::module::DifferenceModule;
use crate::ring::{DifferenceRing, RingElement};

pub use coboundary::{
    monomial_value, orbit_decompose, relation_lattice, tau_coboundary, Orbit, OrbitDecomposition, OrbitMember,
};
pub(crate) use verify::order_mod;
pub use verify::{
    pv_isomorphism, trivialize, verify_pv, PvCondition, PvIsomorphism, PvReport, Trivialization, TrivializationData,
};

/// An element of a presentation: coefficients indexed by canonical
/// exponent vectors (representatives of `Z^m / L`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PvElement {
    terms: BTreeMap<Vec<i64>, RingElement>,
}

impl PvElement {
    pub fn terms(&self) -> &BTreeMap<Vec<i64>, RingElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A monomial presentation of a Picard-Vessiot ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PvPresentation {
    ring: DifferenceRing,
    scalars: Vec<RingElement>,
    lattice: IntegerLattice,
    /// Witness `r` with `t^b = r` for each Hermite basis vector `b` of `L`.
    witnesses: Vec<RingElement>,
}

/// Integer `c` with `c G = target` for generator rows `G`, if any.
pub(crate) fn integer_combination(gens: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let dim = target.len();
    if gens.is_empty() {
        return target.iter().all(|&x| x == 0).then(Vec::new);
    }
    let snf = smith_normal_form(gens, dim);
    // c U^-1 D V^-1 = target, so with y = target V: z_k = y_k / d_k, c = z U
    let y = crate::algebra::lattice::vec_mat(target, &snf.v, dim);
    let r = gens.len();
    let mut z = vec![0i64; r];
    for (k, &yk) in y.iter().enumerate() {
        let d = snf.d.get(k).copied().unwrap_or(0);
        if d == 0 {
            if yk != 0 {
                return None;
            }
        } else {
            if yk % d != 0 {
                return None;
            }
            z[k] = yk / d;
        }
    }
    Some(crate::algebra::lattice::vec_mat(&z, &snf.u, r))
}

impl PvPresentation {
    /// A presentation from scalars and relations `t^lambda = r_lambda` on
    /// linearly independent `lambda`; consistency is checked exactly.
    pub fn new(ring: &DifferenceRing, scalars: Vec<RingElement>, relations: Vec<(Vec<i64>, RingElement)>) -> Result<Self> {
        let m = scalars.len();
        if m == 0 {
            return Err(PvError::InvalidInput("a presentation needs at least one generator".into()));
        }
        for a in &scalars {
            if !ring.contains(a) || !ring.is_unit(a) {
                return Err(PvError::InvalidInput(format!("tau scalar {a} is not a unit of {}", ring.describe())));
            }
        }
        for (lambda, r) in &relations {
            if lambda.len() != m {
                return Err(PvError::InvalidInput(format!("relation {lambda:?} has the wrong length")));
            }
            if !ring.contains(r) || !ring.is_unit(r) {
                return Err(PvError::InvalidInput(format!("witness {r} is not a unit of {}", ring.describe())));
            }
            let lhs = monomial_value(ring, &scalars, lambda)?;
            let rhs = ring.mul(&ring.tau_apply(r, 1)?, &ring.inv(r)?)?;
            if lhs != rhs {
                return Err(PvError::InconsistentPresentation(format!(
                    "prod a^{lambda:?} = {lhs} but tau(r)/r = {rhs} for r = {r}"
                )));
            }
        }
        let gens: Vec<Vec<i64>> = relations.iter().map(|(l, _)| l.clone()).collect();
        let lattice = IntegerLattice::new(m, &gens);
        if lattice.rank() != gens.len() {
            return Err(PvError::InvalidInput("relation vectors must be linearly independent".into()));
        }
        let mut witnesses = Vec::with_capacity(lattice.rank());
        for b in lattice.basis() {
            let c = integer_combination(&gens, b).expect("basis vector lies in the lattice");
            let mut w = ring.one();
            for (ci, (_, r)) in c.iter().zip(&relations) {
                if *ci != 0 {
                    w = ring.mul(&w, &ring.pow(r, *ci)?)?;
                }
            }
            witnesses.push(w);
        }
        Ok(PvPresentation { ring: ring.clone(), scalars, lattice, witnesses })
    }

    pub fn ring(&self) -> &DifferenceRing {
        &self.ring
    }

    pub fn scalars(&self) -> &[RingElement] {
        &self.scalars
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn generator_count(&self) -> usize {
        self.scalars.len()
    }

    /// Hermite basis vectors of `L` with their witnesses.
    pub fn relations(&self) -> Vec<(Vec<i64>, RingElement)> {
        self.lattice.basis().iter().cloned().zip(self.witnesses.iter().cloned()).collect()
    }

    pub fn generator_names(&self) -> Vec<String> {
        let m = self.generator_count();
        if m == 1 {
            vec!["t".into()]
        } else {
            (1..=m).map(|i| format!("t{i}")).collect()
        }
    }

    /// `t^k = factor * t^rep` with `rep` the canonical representative.
    fn normalize(&self, k: &[i64]) -> Result<(Vec<i64>, RingElement)> {
        let rep = self.lattice.reduce(k);
        let lambda: Vec<i64> = k.iter().zip(&rep).map(|(a, b)| a - b).collect();
        let c = integer_combination(self.lattice.basis(), &lambda).expect("difference lies in L");
        let mut f = self.ring.one();
        for (ci, w) in c.iter().zip(&self.witnesses) {
            if *ci != 0 {
                f = self.ring.mul(&f, &self.ring.pow(w, *ci)?)?;
            }
        }
        Ok((rep, f))
    }

    pub fn zero(&self) -> PvElement {
        PvElement { terms: BTreeMap::new() }
    }

    pub fn lift(&self, f: &RingElement) -> Result<PvElement> {
        self.monomial(f, &vec![0; self.generator_count()])
    }

    pub fn one(&self) -> PvElement {
        self.lift(&self.ring.one()).expect("one lies in R")
    }

    /// `c * t^k`.
    pub fn monomial(&self, c: &RingElement, k: &[i64]) -> Result<PvElement> {
        if k.len() != self.generator_count() {
            return Err(PvError::Mismatch(format!("exponent {k:?} for {} generators", self.generator_count())));
        }
        if !self.ring.contains(c) {
            return Err(PvError::Mismatch(format!("{c} is not an element of {}", self.ring.describe())));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            let (rep, f) = self.normalize(k)?;
            terms.insert(rep, self.ring.mul(c, &f)?);
        }
        Ok(PvElement { terms })
    }

    pub fn generator(&self, i: usize) -> PvElement {
        let mut k = vec![0; self.generator_count()];
        k[i] = 1;
        self.monomial(&self.ring.one(), &k).expect("valid exponent")
    }

    fn insert(&self, terms: &mut BTreeMap<Vec<i64>, RingElement>, k: Vec<i64>, c: RingElement) -> Result<()> {
        let entry = terms.remove(&k).unwrap_or_else(|| self.ring.zero());
        let v = self.ring.add(&entry, &c)?;
        if !v.is_zero() {
            terms.insert(k, v);
        }
        Ok(())
    }

    pub fn add(&self, a: &PvElement, b: &PvElement) -> Result<PvElement> {
        let mut terms = a.terms.clone();
        for (k, c) in &b.terms {
            self.insert(&mut terms, k.clone(), c.clone())?;
        }
        Ok(PvElement { terms })
    }

    pub fn neg(&self, a: &PvElement) -> Result<PvElement> {
        let terms = a.terms.iter().map(|(k, c)| Ok((k.clone(), self.ring.neg(c)?))).collect::<Result<_>>()?;
        Ok(PvElement { terms })
    }

    pub fn sub(&self, a: &PvElement, b: &PvElement) -> Result<PvElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &PvElement, b: &PvElement) -> Result<PvElement> {
        let mut terms = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let k: Vec<i64> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                let (rep, f) = self.normalize(&k)?;
                let c = self.ring.mul(&self.ring.mul(ca, cb)?, &f)?;
                self.insert(&mut terms, rep, c)?;
            }
        }
        Ok(PvElement { terms })
    }

    pub fn scale(&self, c: &RingElement, a: &PvElement) -> Result<PvElement> {
        self.mul(&self.lift(c)?, a)
    }

    pub fn pow(&self, a: &PvElement, e: u32) -> Result<PvElement> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// `tau(sum f_k t^k) = sum tau(f_k) a^k t^k`.
    pub fn tau(&self, a: &PvElement) -> Result<PvElement> {
        let mut terms = BTreeMap::new();
        for (k, c) in &a.terms {
            let v = self.ring.mul(&self.ring.tau_apply(c, 1)?, &monomial_value(&self.ring, &self.scalars, k)?)?;
            terms.insert(k.clone(), v);
        }
        Ok(PvElement { terms })
    }

    /// The element as a member of `R`, if it lies there.
    pub fn as_base(&self, a: &PvElement) -> Option<RingElement> {
        let zero = vec![0; self.generator_count()];
        match a.terms.len() {
            0 => Some(self.ring.zero()),
            1 => a.terms.get(&zero).cloned(),
            _ => None,
        }
    }

    /// `t1^2*t3`-style name of a monomial; empty for `t^0`.
    pub fn render_monomial(&self, k: &[i64]) -> String {
        let names = self.generator_names();
        let parts: Vec<String> = k
            .iter()
            .zip(&names)
            .filter(|(e, _)| **e != 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        parts.join("*")
    }

    /// Text form, highest monomials first, e.g. `t^2 - 1`.
    pub fn render(&self, a: &PvElement) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, c)) in a.terms.iter().rev().enumerate() {
            let mon = self.render_monomial(k);
            let mut cs = c.to_string();
            let neg = cs.starts_with('-') && !cs[1..].contains([' ', '+', '-']);
            if neg {
                cs.remove(0);
            }
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let compound = cs.contains([' ', '/', '+', '-']) && !(cs.starts_with('(') && cs.ends_with(')'));
            let body = match (mon.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mon,
                (false, _) if compound => format!("({cs})*{mon}"),
                (false, _) => format!("{cs}*{mon}"),
            };
            out.push_str(&body);
        }
        out
    }

    /// Canonical monomial basis when `Z^m / L` is finite.
    pub fn monomial_basis(&self) -> Option<Vec<Vec<i64>>> {
        let idx = self.lattice.index()?;
        let m = self.generator_count();
        let snf = self.lattice.snf();
        let d: Vec<i64> = (0..m).map(|i| snf.d.get(i).copied().unwrap_or(0)).collect();
        let mut out = Vec::with_capacity(idx as usize);
        let mut y = vec![0i64; m];
        loop {
            out.push(crate::algebra::lattice::vec_mat(&y, &snf.v_inv, m));
            let mut i = 0;
            while i < m {
                y[i] += 1;
                if y[i] < d[i] {
                    break;
                }
                y[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        let mut reps: Vec<Vec<i64>> = out.iter().map(|k| self.lattice.reduce(k)).collect();
        reps.sort();
        reps.dedup();
        Some(reps)
    }

    /// Fixed basis columns `t_i^-1 e_i` for the module `diag(a_i)`.
    pub fn fundamental_matrix(&self) -> Vec<Vec<PvElement>> {
        let m = self.generator_count();
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            let mut k = vec![0; m];
                            k[i] = -1;
                            self.monomial(&self.ring.one(), &k).expect("valid exponent")
                        } else {
                            self.zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let fm: Vec<Vec<String>> = self
            .fundamental_matrix()
            .iter()
            .map(|row| row.iter().map(|e| self.render(e)).collect())
            .collect();
        let torsion: Vec<Value> = self
            .relations()
            .iter()
            .map(|(l, r)| json!({"lambda": l, "witness": r.to_string()}))
            .collect();
        json!({
            "base": self.ring.describe(),
            "generators": self.generator_names(),
            "tau_scalars": self.scalars.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "torsion": torsion,
            "fundamental_matrix": fm,
        })
    }
}

/// The Picard-Vessiot presentation of a diagonal module.
pub fn construct_pv(m: &DifferenceModule) -> Result<PvPresentation> {
    let entries = m.diagonal_entries().ok_or_else(|| {
        PvError::OutsideDiagonalizableScope(format!("matrix {} is not diagonal", m.render()))
    })?;
    let (_, relations) = relation_lattice(m.ring(), &entries)?;
    PvPresentation::new(m.ring(), entries, relations)
}

/// A presentation trivializing every module of the list at once.
pub fn universal_pv(modules: &[DifferenceModule]) -> Result<PvPresentation> {
    let first = modules.first().ok_or_else(|| PvError::InvalidInput("no modules given".into()))?;
    let mut entries = Vec::new();
    for m in modules {
        if m.ring() != first.ring() {
            return Err(PvError::Mismatch("modules over different base rings".into()));
        }
        entries.extend(m.diagonal_entries().ok_or_else(|| {
            PvError::OutsideDiagonalizableScope(format!("matrix {} is not diagonal", m.render()))
        })?);
    }
    let (_, relations) = relation_lattice(first.ring(), &entries)?;
    let s = PvPresentation::new(first.ring(), entries, relations)?;
    for m in modules {
        for b in m.diagonal_entries().expect("checked") {
            if trivialize(&s, &b)?.is_none() {
                return Err(PvError::NotInCategory(format!("{b} is not trivialized")));
            }
        }
    }
    Ok(s)
}
