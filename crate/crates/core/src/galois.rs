//! Galois groups of diagonal modules as diagonalizable groups with
//! character group `Z^n / L`, their action on presentations, the fibre
//! functor and descent of characters.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::factor::roots_in_field;
use crate::algebra::{roots_of_unity, ConstantsField, FieldElement, IntegerLattice, Poly};
use crate::error::{PvError, Result};
use crate::module::DifferenceModule;
use crate::pv::{construct_pv, monomial_value, order_mod, tau_coboundary, trivialize, PvElement, PvPresentation};
use crate::ring::RingElement;

/// Largest number of candidate automorphisms enumerated.
const ENUMERATION_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalizableGroup {
    lattice: IntegerLattice,
    field: ConstantsField,
}

impl DiagonalizableGroup {
    pub fn from_lattice(lattice: IntegerLattice, field: &ConstantsField) -> Self {
        DiagonalizableGroup { lattice, field: field.clone() }
    }

    pub fn of_presentation(s: &PvPresentation) -> Self {
        Self::from_lattice(s.lattice().clone(), s.ring().field())
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn field(&self) -> &ConstantsField {
        &self.field
    }

    /// Torsion invariant factors `d_i > 1` of `Z^n / L`.
    pub fn invariant_factors(&self) -> Vec<i64> {
        self.lattice.quotient_invariants().into_iter().filter(|&d| d > 1).collect()
    }

    pub fn torus_rank(&self) -> usize {
        self.lattice.dim() - self.lattice.rank()
    }

    pub fn is_finite(&self) -> bool {
        self.torus_rank() == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.lattice.index()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Some(1)
    }

    /// Number of points over the constants: `prod gcd(d_i, w)` where `w`
    /// counts the roots of unity of the field.
    pub fn rational_point_count(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        let (w, _) = roots_of_unity(&self.field);
        Some(self.invariant_factors().iter().map(|&d| num_integer::gcd(d as u64, w)).product())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "invariant_factors": self.invariant_factors(),
            "torus_rank": self.torus_rank(),
            "field": self.field.label(),
        })
    }

    /// The element with the given `generator` scalars `t_i -> g_i t_i`,
    /// checked to respect `L`.
    pub fn element(&self, scalars: Vec<FieldElement>) -> Result<GroupElement> {
        if scalars.len() != self.lattice.dim() {
            return Err(PvError::InconsistentGroupElement(format!(
                "{} coordinates for {} generators",
                scalars.len(),
                self.lattice.dim()
            )));
        }
        if scalars.iter().any(|g| g.is_zero() || g.field() != &self.field) {
            return Err(PvError::InconsistentGroupElement("coordinates must be nonzero constants".into()));
        }
        let g = GroupElement { scalars };
        for b in self.lattice.basis() {
            if !g.character_value(b)?.is_one() {
                return Err(PvError::InconsistentGroupElement(format!("does not fix the relation {b:?}")));
            }
        }
        Ok(g)
    }

    /// The element with Smith coordinates `z_k`; `g_i = prod_k z_k^V_ik`.
    pub fn element_from_coordinates(&self, z: &[FieldElement]) -> Result<GroupElement> {
        let n = self.lattice.dim();
        let snf = self.lattice.snf();
        if z.len() != n {
            return Err(PvError::InconsistentGroupElement(format!("{} coordinates for rank {n}", z.len())));
        }
        for (k, zk) in z.iter().enumerate() {
            let d = snf.d.get(k).copied().unwrap_or(0);
            if d != 0 && !zk.pow(d)?.is_one() {
                return Err(PvError::InconsistentGroupElement(format!("coordinate {zk} is not a {d}-th root of unity")));
            }
        }
        let mut scalars = vec![self.field.one(); n];
        for (i, g) in scalars.iter_mut().enumerate() {
            for (k, zk) in z.iter().enumerate() {
                if snf.v[i][k] != 0 {
                    *g = g.mul_ref(&zk.pow(snf.v[i][k])?);
                }
            }
        }
        self.element(scalars)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { scalars: vec![self.field.one(); self.lattice.dim()] }
    }

    /// Elements separating every nonzero class of `Z^n / L`, as far as the
    /// constants allow: a primitive `d`-th root on each torsion coordinate
    /// and `2` on each torus coordinate. `None` if some root is missing.
    fn separating_elements(&self) -> Result<Option<Vec<GroupElement>>> {
        let n = self.lattice.dim();
        let snf = self.lattice.snf();
        let (w, omega) = roots_of_unity(&self.field);
        let mut out = Vec::new();
        for k in 0..n {
            let d = snf.d.get(k).copied().unwrap_or(0);
            if d == 1 {
                continue;
            }
            let zk = if d == 0 {
                self.field.from_int(2)
            } else if w % d as u64 == 0 {
                omega.pow((w / d as u64) as i64)?
            } else {
                return Ok(None);
            };
            let mut z = vec![self.field.one(); n];
            z[k] = zk;
            out.push(self.element_from_coordinates(&z)?);
        }
        Ok(Some(out))
    }
}

impl fmt::Display for DiagonalizableGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors().iter().map(|d| format!("mu_{d}")).collect();
        match self.torus_rank() {
            0 => {}
            1 => parts.push("G_m".into()),
            r => parts.push(format!("G_m^{r}")),
        }
        if parts.is_empty() {
            write!(f, "trivial")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// A point of the group: `t_i -> g_i t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    scalars: Vec<FieldElement>,
}

impl GroupElement {
    pub fn scalars(&self) -> &[FieldElement] {
        &self.scalars
    }

    /// `g(rho) = prod g_i^rho_i`.
    pub fn character_value(&self, rho: &[i64]) -> Result<FieldElement> {
        let mut acc = self.scalars[0].field().one();
        for (g, &e) in self.scalars.iter().zip(rho) {
            if e != 0 {
                acc = acc.mul_ref(&g.pow(e)?);
            }
        }
        Ok(acc)
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement { scalars: self.scalars.iter().zip(&other.scalars).map(|(a, b)| a.mul_ref(b)).collect() }
    }
}

/// The automorphism of `S` over `R` defined by `g`.
pub fn act(s: &PvPresentation, g: &GroupElement, f: &PvElement) -> Result<PvElement> {
    if g.scalars.len() != s.generator_count() {
        return Err(PvError::InconsistentGroupElement("wrong number of coordinates".into()));
    }
    for (lambda, r) in s.relations() {
        if !g.character_value(&lambda)?.is_one() {
            return Err(PvError::InconsistentGroupElement(format!("moves the relation t^{lambda:?} = {r}")));
        }
    }
    let ring = s.ring();
    let mut out = s.zero();
    for (k, c) in f.terms() {
        let v = ring.mul(c, &ring.constant(&g.character_value(k)?))?;
        out = s.add(&out, &s.monomial(&v, k)?)?;
    }
    Ok(out)
}

/// The Galois group of a diagonal module.
pub fn galois_group(m: &DifferenceModule) -> Result<DiagonalizableGroup> {
    let s = construct_pv(m)?;
    Ok(DiagonalizableGroup::of_presentation(&s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismCount {
    /// `None` when the group is infinite and the search was skipped.
    pub enumerated: Option<u64>,
    pub group_order: Option<u64>,
    /// Expected count of constant points, `prod gcd(d_i, w)`.
    pub rational_points: Option<u64>,
    pub automorphisms: Vec<GroupElement>,
    pub trace: Vec<String>,
}

impl AutomorphismCount {
    pub fn matches_group_order(&self) -> bool {
        self.enumerated.is_some() && self.enumerated == self.group_order
    }
}

/// Enumerate the monomial automorphisms `t_i -> c_i t_i` of `S` over `R`
/// commuting with `tau`.
pub fn automorphism_count_check(s: &PvPresentation) -> Result<AutomorphismCount> {
    let g = DiagonalizableGroup::of_presentation(s);
    let mut trace = Vec::new();
    if !g.is_finite() {
        trace.push("skipped (infinite)".into());
        return Ok(AutomorphismCount {
            enumerated: None,
            group_order: None,
            rational_points: None,
            automorphisms: Vec::new(),
            trace,
        });
    }
    let m = s.generator_count();
    let k = s.ring().field();
    // t_i -> c_i t_i commutes with tau for any constant c_i; respecting the
    // relations forces c_i^e_i = 1 with e_i the order of t_i
    let mut candidates = Vec::with_capacity(m);
    for i in 0..m {
        let mut ei = vec![0; m];
        ei[i] = 1;
        let e = order_mod(s.lattice(), &ei).expect("finite group");
        let p = Poly::monomial(k.one(), e as usize).sub_ref(&Poly::one(k));
        let roots = roots_in_field(&p);
        trace.push(format!("t{}: order {e}, {} roots of y^{e} - 1 in {}", i + 1, roots.len(), k.label()));
        candidates.push(roots);
    }
    let total: usize = candidates.iter().map(|c| c.len()).product();
    if total > ENUMERATION_CAP {
        return Err(PvError::InvalidInput(format!("{total} candidate automorphisms exceed the search cap")));
    }
    let mut found = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let scalars: Vec<FieldElement> = candidates
            .iter()
            .map(|c| {
                let v = c[rest % c.len()].clone();
                rest /= c.len();
                v
            })
            .collect();
        let Ok(el) = g.element(scalars) else { continue };
        let mut commutes = true;
        for i in 0..m {
            let t = s.generator(i);
            commutes &= act(s, &el, &s.tau(&t)?)? == s.tau(&act(s, &el, &t)?)?;
        }
        if commutes {
            found.push(el);
        }
    }
    trace.push(format!("{} of {total} candidates respect every relation", found.len()));
    Ok(AutomorphismCount {
        enumerated: Some(found.len() as u64),
        group_order: g.order(),
        rational_points: g.rational_point_count(),
        automorphisms: found,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSubringReport {
    pub holds: bool,
    pub trace: Vec<String>,
    pub spot_checks: usize,
    pub spot_failures: usize,
}

/// The invariants of `S` under the group are exactly `R`: symbolic
/// argument plus seeded spot checks on random elements outside `R`.
pub fn fixed_subring_check(s: &PvPresentation, seed: u64) -> Result<FixedSubringReport> {
    let g = DiagonalizableGroup::of_presentation(s);
    let mut trace = vec![
        "an element of S is a finite sum of c_k t^k over representatives k of Z^n/L".into(),
        "g acts on c_k t^k by the character value g(k)".into(),
        "an invariant needs g(k) = 1 for all g, so k lies in L and t^k lies in R".into(),
    ];
    let reps = s.monomial_basis();
    if let Some(reps) = &reps {
        for k in reps.iter().filter(|k| k.iter().any(|&x| x != 0)) {
            trace.push(format!("monomial {} is moved by the group", s.render(&s.monomial(&s.ring().one(), k)?)));
        }
    }
    let Some(gens) = g.separating_elements()? else {
        trace.push(format!("{} lacks the roots of unity needed for spot checks", g.field().label()));
        return Ok(FixedSubringReport { holds: false, trace, spot_checks: 0, spot_failures: 0 });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = s.ring();
    let m = s.generator_count();
    let (mut checks, mut failures) = (0, 0);
    while checks < 100 {
        if s.lattice().rank() == m && s.lattice().index() == Some(1) {
            break;
        }
        let mut f = s.lift(&ring.random_element(&mut rng))?;
        for _ in 0..2 {
            let k: Vec<i64> = (0..m).map(|_| rand::Rng::gen_range(&mut rng, -3..=3)).collect();
            f = s.add(&f, &s.monomial(&ring.random_element(&mut rng), &k)?)?;
        }
        if s.as_base(&f).is_some() {
            continue;
        }
        checks += 1;
        let mut moved = false;
        for el in &gens {
            if act(s, el, &f)? != f {
                moved = true;
                break;
            }
        }
        if !moved {
            failures += 1;
        }
    }
    trace.push(format!("{checks} random elements outside R, {failures} invariant"));
    Ok(FixedSubringReport { holds: failures == 0, trace, spot_checks: checks, spot_failures: failures })
}

/// `(N (x) S)^tau` as a representation: one character per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationData {
    pub dimension: usize,
    pub characters: Vec<Vec<i64>>,
    pub basis: Vec<String>,
}

impl RepresentationData {
    pub fn to_json(&self) -> Value {
        json!({"dimension": self.dimension, "characters": self.characters, "basis": self.basis})
    }
}

/// The fibre functor on a diagonal module of the category generated by `S`.
pub fn fibre_functor(n: &DifferenceModule, s: &PvPresentation) -> Result<RepresentationData> {
    if n.ring() != s.ring() {
        return Err(PvError::Mismatch("module and presentation over different rings".into()));
    }
    let entries = n
        .diagonal_entries()
        .ok_or_else(|| PvError::OutsideDiagonalizableScope(format!("matrix {} is not diagonal", n.render())))?;
    let mut characters = Vec::with_capacity(entries.len());
    let mut basis = Vec::with_capacity(entries.len());
    for (j, b) in entries.iter().enumerate() {
        let t = trivialize(s, b)?
            .ok_or_else(|| PvError::NotInCategory(format!("{b} is not trivialized by the presentation")))?;
        basis.push(format!("({}) e{}", s.render(&t.fixed_coordinate(s)?), j + 1));
        characters.push(s.lattice().reduce(&t.chi));
    }
    Ok(RepresentationData { dimension: entries.len(), characters, basis })
}

#[derive(Clone, Debug)]
pub struct Descent {
    pub module: DifferenceModule,
    pub representative: Vec<i64>,
    /// Another representative with the unit `w` giving `M_chi ~ M_chi'`.
    pub alternative: Option<(Vec<i64>, RingElement)>,
    pub trace: Vec<String>,
}

/// The rank one module realizing the character class of `chi`.
pub fn descend(chi: &[i64], s: &PvPresentation) -> Result<Descent> {
    let m = s.generator_count();
    if chi.len() != m {
        return Err(PvError::InvalidInput(format!("character of length {} for {m} generators", chi.len())));
    }
    let ring = s.ring();
    let k = s.lattice().reduce(chi);
    let scalar = monomial_value(ring, s.scalars(), &k)?;
    let module = DifferenceModule::rank_one(ring, scalar.clone())?;
    let mut trace = vec![format!("representative {k:?}, scalar {scalar}")];
    let rep = fibre_functor(&module, s)?;
    if rep.characters != vec![k.clone()] {
        return Err(PvError::InconsistentPresentation(format!("descended module has character {:?}", rep.characters)));
    }
    trace.push(format!("base change to S trivial with fixed vector {}", rep.basis[0]));
    let alternative = match s.lattice().basis().first() {
        None => None,
        Some(lambda) => {
            let k2: Vec<i64> = k.iter().zip(lambda).map(|(a, b)| a + b).collect();
            let other = monomial_value(ring, s.scalars(), &k2)?;
            let w = tau_coboundary(ring, &ring.mul(&other, &ring.inv(&scalar)?)?)?.ok_or_else(|| {
                PvError::InconsistentPresentation("representatives give non-isomorphic modules".into())
            })?;
            trace.push(format!("representative {k2:?} gives {other}, isomorphic via {w}"));
            Some((k2, w))
        }
    };
    Ok(Descent { module, representative: k, alternative, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DifferenceRing;

    #[test]
    fn rank_one_groups() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::shift_field(&k);
        let g = |a: RingElement| galois_group(&DifferenceModule::rank_one(&r, a).unwrap()).unwrap().to_string();
        assert_eq!(g(r.one()), "trivial");
        assert_eq!(g(r.from_int(-1)), "mu_2");
        assert_eq!(g(r.from_int(2)), "G_m");
        assert_eq!(g(r.x().unwrap()), "G_m");
    }

    #[test]
    fn gaussian_mu4() {
        let k = ConstantsField::gaussian();
        let r = DifferenceRing::shift_field(&k);
        let i = r.constant(&k.generator());
        let mi = r.neg(&i).unwrap();
        let m = DifferenceModule::diagonal(&r, &[i, mi]).unwrap();
        let s = construct_pv(&m).unwrap();
        let g = DiagonalizableGroup::of_presentation(&s);
        assert_eq!(g.to_json(), json!({"invariant_factors": [4], "torus_rank": 0, "field": "Q(i)"}));
        let c = automorphism_count_check(&s).unwrap();
        assert_eq!(c.enumerated, Some(4));
        assert!(c.matches_group_order());
        assert!(fixed_subring_check(&s, 1).unwrap().holds);
    }

    #[test]
    fn sign_group_acts_and_descends() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::shift_field(&k);
        let s = construct_pv(&DifferenceModule::rank_one(&r, r.from_int(-1)).unwrap()).unwrap();
        let g = DiagonalizableGroup::of_presentation(&s);
        let el = g.element(vec![k.from_int(-1)]).unwrap();
        assert_eq!(s.render(&act(&s, &el, &s.generator(0)).unwrap()), "-t");
        assert!(g.element(vec![k.from_int(2)]).is_err());
        assert_eq!(automorphism_count_check(&s).unwrap().enumerated, Some(2));
        let d = descend(&[1], &s).unwrap();
        assert_eq!(d.module.diagonal_entries(), Some(vec![r.from_int(-1)]));
        let sq = DifferenceModule::rank_one(&r, r.from_int(-1)).unwrap();
        let sq = sq.tensor(&sq).unwrap();
        assert_eq!(fibre_functor(&sq, &s).unwrap().characters, vec![vec![0]]);
    }

    #[test]
    fn torus_descent() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::shift_field(&k);
        let s = construct_pv(&DifferenceModule::rank_one(&r, r.from_int(2)).unwrap()).unwrap();
        let d = descend(&[3], &s).unwrap();
        assert_eq!(d.module.diagonal_entries(), Some(vec![r.from_int(8)]));
        let g = DiagonalizableGroup::of_presentation(&s);
        let five = g.element(vec![k.from_int(5)]).unwrap();
        let t = s.generator(0);
        assert_eq!(act(&s, &five, &s.tau(&t).unwrap()).unwrap(), s.tau(&act(&s, &five, &t).unwrap()).unwrap());
        assert_eq!(automorphism_count_check(&s).unwrap().enumerated, None);
        assert!(fixed_subring_check(&s, 7).unwrap().holds);
        let three = DifferenceModule::rank_one(&r, r.from_int(3)).unwrap();
        assert!(matches!(fibre_functor(&three, &s), Err(PvError::NotInCategory(_))));
    }
}
