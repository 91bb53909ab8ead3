//! Difference rings `(R, tau)` of the supported kinds and their elements.

mod constants;
mod ideal;
pub mod orbit;
mod simplicity;

use std::fmt;

use rand::Rng;

use crate::algebra::{poly_factor, root_of_unity_order, ConstantsField, FieldElement, Poly, RatFunc, Scalar};
use crate::error::{PvError, Result};

pub use constants::{constants_of, ConstantsOf};
pub use ideal::{is_tau_stable, DifferenceIdeal};
pub use simplicity::{
    reducedness_probe, simplicity_certificate, total_fractions_check, FractionsReport, Reducedness,
    SimplicityCertificate, Verdict,
};

/// The supported kinds of base difference ring over a constants field `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// `K(x)` with `x -> x + 1`.
    ShiftField,
    /// `K(x)` with `x -> q x`, `q` not a root of unity.
    QDilation { q: FieldElement },
    /// `K[x]` with `x -> x + 1`.
    ShiftPoly,
    /// `K[x]` localized at the shift-closure of the given monic irreducible
    /// polynomials (one representative per shift orbit).
    Localized { gens: Vec<Poly> },
    /// `K^n` with `tau(a)_{perm[i]} = a_i`.
    Product { perm: Vec<usize> },
}

/// A base difference ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceRing {
    kind: RingKind,
    field: ConstantsField,
}

/// An element of a [`DifferenceRing`]: a rational function for the
/// function-ring kinds, a coordinate tuple for products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingElement {
    Fn(RatFunc),
    Tuple(Vec<FieldElement>),
}

impl DifferenceRing {
    pub fn shift_field(k: &ConstantsField) -> Self {
        DifferenceRing { kind: RingKind::ShiftField, field: k.clone() }
    }

    pub fn q_dilation(k: &ConstantsField, q: FieldElement) -> Result<Self> {
        if q.field() != k {
            return Err(PvError::Mismatch(format!("q = {} is not in {}", q.render(), k)));
        }
        if q.is_zero() {
            return Err(PvError::ZeroInput);
        }
        if root_of_unity_order(&q)?.is_some() {
            return Err(PvError::QRootOfUnity);
        }
        Ok(DifferenceRing { kind: RingKind::QDilation { q }, field: k.clone() })
    }

    pub fn shift_poly(k: &ConstantsField) -> Self {
        DifferenceRing { kind: RingKind::ShiftPoly, field: k.clone() }
    }

    /// `K^n` with the cyclic shift `(a_0, ..., a_{n-1}) -> (a_{n-1}, a_0, ...)`.
    pub fn cyclic_product(k: &ConstantsField, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(PvError::InvalidInput("product of zero factors".into()));
        }
        Self::permutation_product(k, (0..n).map(|i| (i + 1) % n).collect())
    }

    /// `K^n` with `tau(a)_{perm[i]} = a_i`.
    pub fn permutation_product(k: &ConstantsField, perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(PvError::InvalidInput(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if n == 0 {
            return Err(PvError::InvalidInput("product of zero factors".into()));
        }
        Ok(DifferenceRing { kind: RingKind::Product { perm }, field: k.clone() })
    }

    pub(crate) fn with_kind(kind: RingKind, field: &ConstantsField) -> Self {
        DifferenceRing { kind, field: field.clone() }
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn field(&self) -> &ConstantsField {
        &self.field
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, RingKind::ShiftField | RingKind::QDilation { .. })
            || matches!(&self.kind, RingKind::Product { perm } if perm.len() == 1)
    }

    pub fn is_shift(&self) -> bool {
        matches!(self.kind, RingKind::ShiftField | RingKind::ShiftPoly | RingKind::Localized { .. })
    }

    pub fn q(&self) -> Option<&FieldElement> {
        match &self.kind {
            RingKind::QDilation { q } => Some(q),
            _ => None,
        }
    }

    /// Number of factors of a product ring.
    pub fn product_len(&self) -> Option<usize> {
        match &self.kind {
            RingKind::Product { perm } => Some(perm.len()),
            _ => None,
        }
    }

    /// Short human-readable description such as `Q(i)(x), x -> x+1`.
    pub fn describe(&self) -> String {
        let k = self.field.label();
        match &self.kind {
            RingKind::ShiftField => format!("{k}(x), x -> x+1"),
            RingKind::QDilation { q } => format!("{k}(x), x -> {}*x", q.render()),
            RingKind::ShiftPoly => format!("{k}[x], x -> x+1"),
            RingKind::Localized { gens } => {
                let g: Vec<String> = gens.iter().map(|p| p.to_string()).collect();
                format!("{k}[x][1/tau^n({})], x -> x+1", g.join(", "))
            }
            RingKind::Product { perm } => {
                let cyc = (0..perm.len()).all(|i| perm[i] == (i + 1) % perm.len());
                if cyc {
                    format!("{k}^{}, cyclic", perm.len())
                } else {
                    format!("{k}^{}, permutation {:?}", perm.len(), perm)
                }
            }
        }
    }

    /// Short tag of the ring kind.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            RingKind::ShiftField => "shift-field",
            RingKind::QDilation { .. } => "q-dilation-field",
            RingKind::ShiftPoly => "shift-poly-ring",
            RingKind::Localized { .. } => "localized-shift-poly-ring",
            RingKind::Product { .. } => "cyclic-product",
        }
    }

    // ------------------------------------------------------------ elements

    pub fn constant(&self, c: &FieldElement) -> RingElement {
        assert_eq!(c.field(), &self.field, "constant from a foreign field");
        match &self.kind {
            RingKind::Product { perm } => RingElement::Tuple(vec![c.clone(); perm.len()]),
            _ => RingElement::Fn(RatFunc::constant(c.clone())),
        }
    }

    pub fn zero(&self) -> RingElement {
        self.constant(&self.field.zero())
    }

    pub fn one(&self) -> RingElement {
        self.constant(&self.field.one())
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.constant(&self.field.from_int(n))
    }

    /// The variable `x` of a function ring.
    pub fn x(&self) -> Result<RingElement> {
        match self.kind {
            RingKind::Product { .. } => Err(PvError::Mismatch("product rings have no variable".into())),
            _ => Ok(RingElement::Fn(RatFunc::x(&self.field))),
        }
    }

    /// Wrap a rational function, checking membership.
    pub fn element(&self, f: RatFunc) -> Result<RingElement> {
        let e = RingElement::Fn(f);
        if self.contains(&e) {
            Ok(e)
        } else {
            Err(PvError::Mismatch(format!("{} is not an element of {}", e, self.describe())))
        }
    }

    pub fn tuple(&self, coords: Vec<FieldElement>) -> Result<RingElement> {
        let e = RingElement::Tuple(coords);
        if self.contains(&e) {
            Ok(e)
        } else {
            Err(PvError::Mismatch(format!("{} is not an element of {}", e, self.describe())))
        }
    }

    pub fn contains(&self, e: &RingElement) -> bool {
        match (&self.kind, e) {
            (RingKind::Product { perm }, RingElement::Tuple(v)) => {
                v.len() == perm.len() && v.iter().all(|c| c.field() == &self.field)
            }
            (RingKind::Product { .. }, _) | (_, RingElement::Tuple(_)) => false,
            (_, RingElement::Fn(f)) if f.field() != &self.field => false,
            (RingKind::ShiftField | RingKind::QDilation { .. }, RingElement::Fn(_)) => true,
            (RingKind::ShiftPoly, RingElement::Fn(f)) => f.is_polynomial(),
            (RingKind::Localized { gens }, RingElement::Fn(f)) => in_closure(f.den(), gens),
        }
    }

    fn check(&self, e: &RingElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(PvError::Mismatch(format!("{} is not an element of {}", e, self.describe())))
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (RingElement::Fn(f), RingElement::Fn(g)) => RingElement::Fn(f.add_ref(g)),
            (RingElement::Tuple(u), RingElement::Tuple(v)) => {
                RingElement::Tuple(u.iter().zip(v).map(|(x, y)| x.add_ref(y)).collect())
            }
            _ => unreachable!(),
        })
    }

    pub fn neg(&self, a: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        Ok(match a {
            RingElement::Fn(f) => RingElement::Fn(f.neg_ref()),
            RingElement::Tuple(u) => RingElement::Tuple(u.iter().map(|x| x.neg_ref()).collect()),
        })
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (RingElement::Fn(f), RingElement::Fn(g)) => RingElement::Fn(f.mul_ref(g)),
            (RingElement::Tuple(u), RingElement::Tuple(v)) => {
                RingElement::Tuple(u.iter().zip(v).map(|(x, y)| x.mul_ref(y)).collect())
            }
            _ => unreachable!(),
        })
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        match a {
            RingElement::Tuple(u) => u.iter().all(|x| !x.is_zero()),
            RingElement::Fn(f) => {
                if f.is_zero() {
                    return false;
                }
                match &self.kind {
                    RingKind::ShiftPoly => f.num().is_constant(),
                    RingKind::Localized { gens } => in_closure(f.num(), gens),
                    _ => true,
                }
            }
        }
    }

    /// A zero divisor is a nonzero element with a nonzero annihilator.
    pub fn is_zero_divisor(&self, a: &RingElement) -> bool {
        match a {
            RingElement::Tuple(u) => u.iter().any(|x| x.is_zero()) && u.iter().any(|x| !x.is_zero()),
            RingElement::Fn(_) => false,
        }
    }

    pub fn inv(&self, a: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        if !self.is_unit(a) {
            return Err(PvError::InvalidInput(format!("{a} is not a unit of {}", self.describe())));
        }
        Ok(match a {
            RingElement::Fn(f) => RingElement::Fn(f.inv()?),
            RingElement::Tuple(u) => RingElement::Tuple(u.iter().map(|x| x.inv()).collect::<Result<_>>()?),
        })
    }

    pub fn pow(&self, a: &RingElement, e: i64) -> Result<RingElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    /// `tau^power(e)`.
    pub fn tau_apply(&self, e: &RingElement, power: i64) -> Result<RingElement> {
        self.check(e)?;
        Ok(match (&self.kind, e) {
            (RingKind::Product { perm }, RingElement::Tuple(v)) => {
                let n = perm.len();
                let mut cur = v.clone();
                let steps = power.rem_euclid(order_of(perm) as i64) as usize;
                for _ in 0..steps {
                    let mut next = vec![self.field.zero(); n];
                    for i in 0..n {
                        next[perm[i]] = cur[i].clone();
                    }
                    cur = next;
                }
                RingElement::Tuple(cur)
            }
            (RingKind::QDilation { q }, RingElement::Fn(f)) => RingElement::Fn(f.dilate(&q.pow(power)?)),
            (_, RingElement::Fn(f)) => RingElement::Fn(f.shift(power)),
            _ => unreachable!(),
        })
    }

    /// `tau` applied to a rational function of a function ring.
    pub fn tau_ratfunc(&self, f: &RatFunc, power: i64) -> Result<RatFunc> {
        match &self.kind {
            RingKind::QDilation { q } => Ok(f.dilate(&q.pow(power)?)),
            RingKind::Product { .. } => Err(PvError::Mismatch("product ring has no rational functions".into())),
            _ => Ok(f.shift(power)),
        }
    }

    /// Canonical text form of an element.
    pub fn render(&self, e: &RingElement) -> String {
        e.to_string()
    }

    /// A pseudo-random element with small coefficients.
    pub fn random_element<G: Rng>(&self, rng: &mut G) -> RingElement {
        let k = &self.field;
        let coef = |rng: &mut G| -> FieldElement {
            let coords: Vec<_> = (0..k.degree())
                .map(|_| crate::algebra::qpoly::q(rng.gen_range(-4..=4)))
                .collect();
            k.element(&coords)
        };
        match &self.kind {
            RingKind::Product { perm } => RingElement::Tuple((0..perm.len()).map(|_| coef(rng)).collect()),
            kind => {
                let nd = rng.gen_range(0..=3);
                let num = Poly::new(k, (0..=nd).map(|_| coef(rng)).collect());
                let den = match kind {
                    RingKind::ShiftPoly => Poly::one(k),
                    RingKind::Localized { gens } => {
                        let g = &gens[rng.gen_range(0..gens.len())];
                        g.shift(rng.gen_range(-2..=2))
                    }
                    _ => {
                        let dd = rng.gen_range(0..=2);
                        let mut c: Vec<FieldElement> = (0..dd).map(|_| coef(rng)).collect();
                        c.push(k.one());
                        Poly::new(k, c)
                    }
                };
                RingElement::Fn(RatFunc::new(num, den).expect("monic denominator"))
            }
        }
    }
}

fn order_of(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut order = 1usize;
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

/// Cycles of a permutation, each listed from its smallest index.
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i);
            i = perm[i];
        }
        out.push(cyc);
    }
    out
}

/// Every irreducible factor of `p` is a shift of one of `gens`.
fn in_closure(p: &Poly, gens: &[Poly]) -> bool {
    if p.is_constant() {
        return !p.is_zero();
    }
    let Ok(fz) = poly_factor(p) else { return false };
    fz.factors
        .iter()
        .all(|(f, _)| gens.iter().any(|g| orbit::shift_distance(g, f).is_some()))
}

impl RingElement {
    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match self {
            RingElement::Fn(f) => Some(f),
            RingElement::Tuple(_) => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[FieldElement]> {
        match self {
            RingElement::Tuple(v) => Some(v),
            RingElement::Fn(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Fn(f) => f.is_zero(),
            RingElement::Tuple(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RingElement::Fn(f) => f.is_one(),
            RingElement::Tuple(v) => v.iter().all(|x| x.is_one()),
        }
    }

    /// The constant this element equals, if it lies in the diagonal copy
    /// of the constants field.
    pub fn as_constant(&self) -> Option<FieldElement> {
        match self {
            RingElement::Fn(f) => f.as_constant(),
            RingElement::Tuple(v) => v.iter().all(|x| x == &v[0]).then(|| v[0].clone()),
        }
    }
}

impl Scalar for RingElement {
    fn zero_like(&self) -> Self {
        match self {
            RingElement::Fn(f) => RingElement::Fn(RatFunc::zero(f.field())),
            RingElement::Tuple(v) => RingElement::Tuple(v.iter().map(|c| c.field().zero()).collect()),
        }
    }
    fn one_like(&self) -> Self {
        match self {
            RingElement::Fn(f) => RingElement::Fn(RatFunc::one(f.field())),
            RingElement::Tuple(v) => RingElement::Tuple(v.iter().map(|c| c.field().one()).collect()),
        }
    }
    fn is_zero(&self) -> bool {
        RingElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (RingElement::Fn(f), RingElement::Fn(g)) => RingElement::Fn(f.add_ref(g)),
            (RingElement::Tuple(u), RingElement::Tuple(v)) => {
                RingElement::Tuple(u.iter().zip(v).map(|(x, y)| x.add_ref(y)).collect())
            }
            _ => panic!("mixed ring elements"),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::add(self, &Scalar::neg(o))
    }
    fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (RingElement::Fn(f), RingElement::Fn(g)) => RingElement::Fn(f.mul_ref(g)),
            (RingElement::Tuple(u), RingElement::Tuple(v)) => {
                RingElement::Tuple(u.iter().zip(v).map(|(x, y)| x.mul_ref(y)).collect())
            }
            _ => panic!("mixed ring elements"),
        }
    }
    fn neg(&self) -> Self {
        match self {
            RingElement::Fn(f) => RingElement::Fn(f.neg_ref()),
            RingElement::Tuple(v) => RingElement::Tuple(v.iter().map(|x| x.neg_ref()).collect()),
        }
    }
    fn try_inv(&self) -> Option<Self> {
        match self {
            RingElement::Fn(f) => f.inv().ok().map(RingElement::Fn),
            RingElement::Tuple(v) => v.iter().map(|x| x.inv().ok()).collect::<Option<Vec<_>>>().map(RingElement::Tuple),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Fn(r) => write!(f, "{r}"),
            RingElement::Tuple(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.render()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}
