use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::qpoly::{self, q, Q};
use super::zfactor;
use crate::error::{PvError, Result};

/// An exact field of constants: the rationals or a simple number field
/// `Q[y]/(f)` with `f` monic irreducible.
///
/// Cheap to clone; equality is structural on the defining polynomial.
#[derive(Clone)]
pub struct ConstantsField(Arc<FieldData>);

struct FieldData {
    /// Monic defining polynomial, lowest degree first. `y` for the rationals.
    modulus: Vec<Q>,
    generator_name: String,
    cyclotomic: Option<u64>,
    label: String,
}

impl ConstantsField {
    pub fn rationals() -> Self {
        ConstantsField(Arc::new(FieldData {
            modulus: vec![Q::zero(), Q::one()],
            generator_name: String::new(),
            cyclotomic: Some(1),
            label: "Q".into(),
        }))
    }

    /// `Q(zeta_n)`. Orders are normalized (`n = 2 mod 4` becomes `n/2`), so
    /// `cyclotomic(2)` is the rationals and `cyclotomic(4)` is `Q(i)`.
    pub fn cyclotomic(n: u64) -> Self {
        assert!(n >= 1, "cyclotomic order must be positive");
        let n = if n % 4 == 2 { n / 2 } else { n };
        if n == 1 {
            return Self::rationals();
        }
        let modulus = qpoly::from_integers(&zfactor::cyclotomic_poly(n));
        let (name, label) = if n == 4 {
            ("i".to_string(), "Q(i)".to_string())
        } else {
            (format!("zeta{n}"), format!("Q(zeta{n})"))
        };
        ConstantsField(Arc::new(FieldData {
            modulus,
            generator_name: name,
            cyclotomic: Some(n),
            label,
        }))
    }

    pub fn gaussian() -> Self {
        Self::cyclotomic(4)
    }

    /// A number field defined by an irreducible polynomial over the
    /// rationals (coefficients lowest degree first). Irreducibility is
    /// checked by the factorizer. Cyclotomic polynomials are recognized and
    /// mapped onto the cyclotomic tower.
    pub fn number_field(min_poly: &[Q], name: &str) -> Result<Self> {
        let m = qpoly::monic(min_poly);
        let d = qpoly::degree(&m).ok_or(PvError::ZeroInput)?;
        if d == 0 {
            return Err(PvError::InvalidInput("defining polynomial is constant".into()));
        }
        if d == 1 {
            return Ok(Self::rationals());
        }
        if !super::factor::is_irreducible_over_q(&m) {
            return Err(PvError::InvalidInput(format!(
                "defining polynomial {} is reducible",
                qpoly_to_string(&m, name)
            )));
        }
        if let Some(n) = zfactor::recognize_cyclotomic(&qpoly::primitive_integer(&m)) {
            return Ok(Self::cyclotomic(n));
        }
        Ok(ConstantsField(Arc::new(FieldData {
            modulus: m,
            generator_name: name.to_string(),
            cyclotomic: None,
            label: format!("Q({name})"),
        })))
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn cyclotomic_order(&self) -> Option<u64> {
        self.0.cyclotomic
    }

    pub fn generator_name(&self) -> &str {
        &self.0.generator_name
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Monic defining polynomial, lowest degree first.
    pub fn modulus(&self) -> &[Q] {
        &self.0.modulus
    }

    /// The defining polynomial rendered in the generator's name.
    pub fn minimal_polynomial_string(&self) -> String {
        let var = if self.is_rationals() { "y" } else { self.generator_name() };
        qpoly_to_string(&self.0.modulus, var)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coords: vec![Q::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Q::one())
    }

    pub fn from_rational(&self, c: Q) -> FieldElement {
        let mut coords = vec![Q::zero(); self.degree()];
        coords[0] = c;
        FieldElement { field: self.clone(), coords }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(q(n))
    }

    /// The primitive element. For the rationals this is zero.
    pub fn generator(&self) -> FieldElement {
        if self.is_rationals() {
            return self.zero();
        }
        let mut coords = vec![Q::zero(); self.degree()];
        coords[1] = Q::one();
        FieldElement { field: self.clone(), coords }
    }

    /// Element from an arbitrary rational polynomial in the generator.
    pub fn element(&self, poly: &[Q]) -> FieldElement {
        let r = qpoly::rem(poly, &self.0.modulus);
        let mut coords = vec![Q::zero(); self.degree()];
        for (i, c) in r.into_iter().enumerate() {
            coords[i] = c;
        }
        FieldElement { field: self.clone(), coords }
    }
}

impl PartialEq for ConstantsField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}

impl Eq for ConstantsField {}

impl fmt::Debug for ConstantsField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for ConstantsField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// An element of a [`ConstantsField`], stored by its coordinates in the
/// power basis. The representation is always fully reduced, so equality is
/// coordinate-wise.
#[derive(Clone)]
pub struct FieldElement {
    field: ConstantsField,
    coords: Vec<Q>,
}

impl FieldElement {
    pub fn field(&self) -> &ConstantsField {
        &self.field
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// `Some(n)` when the element is a rational integer fitting in `i64`.
    pub fn as_integer(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        let r = self.as_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    fn poly(&self) -> Vec<Q> {
        qpoly::trimmed(self.coords.clone())
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check_same(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.check_same(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check_same(other);
        if self.field.is_rationals() {
            return self.field.from_rational(&self.coords[0] * &other.coords[0]);
        }
        self.field.element(&qpoly::mul(&self.poly(), &other.poly()))
    }

    pub fn neg_ref(&self) -> Self {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(PvError::DivisionByZero);
        }
        if self.field.is_rationals() {
            return Ok(self.field.from_rational(self.coords[0].recip()));
        }
        let (g, s, _) = qpoly::ext_gcd(&self.poly(), self.field.modulus());
        debug_assert_eq!(qpoly::degree(&g), Some(0));
        Ok(self.field.element(&s))
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let (mut base, mut n) = if e < 0 { (self.inv()?, e.unsigned_abs()) } else { (self.clone(), e as u64) };
        let mut acc = self.field.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `self` on the power basis (columns are
    /// images of basis vectors).
    pub fn multiplication_matrix(&self) -> Vec<Vec<Q>> {
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut basis = vec![Q::zero(); d];
        for j in 0..d {
            basis.iter_mut().for_each(|c| *c = Q::zero());
            basis[j] = Q::one();
            let e = FieldElement { field: self.field.clone(), coords: basis.clone() };
            cols.push(self.mul_ref(&e).coords);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Field norm down to the rationals.
    pub fn norm(&self) -> Q {
        if self.field.is_rationals() {
            return self.coords[0].clone();
        }
        super::linalg::det_rational(self.multiplication_matrix())
    }

    /// Characteristic polynomial of multiplication by `self` over Q.
    pub fn characteristic_polynomial(&self) -> Vec<Q> {
        let d = self.field.degree();
        let m = self.multiplication_matrix();
        let xs: Vec<Q> = (0..=d as i64).map(q).collect();
        let ys: Vec<Q> = xs
            .iter()
            .map(|x| {
                let shifted: Vec<Vec<Q>> = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| if i == j { x - &m[i][j] } else { -m[i][j].clone() })
                            .collect()
                    })
                    .collect();
                super::linalg::det_rational(shifted)
            })
            .collect();
        qpoly::interpolate(&xs, &ys)
    }

    /// Minimal polynomial over Q (monic).
    pub fn minimal_polynomial(&self) -> Vec<Q> {
        let mut p = self.characteristic_polynomial();
        // charpoly = minpoly^(d/deg); strip repeated factors
        loop {
            let g = qpoly::gcd(&p, &qpoly::derivative(&p));
            if qpoly::degree(&g) == Some(0) {
                return qpoly::monic(&p);
            }
            p = qpoly::divrem(&p, &g).0;
        }
    }

    /// Render with an explicit generator name (used when printing inside
    /// other structures).
    pub fn render(&self) -> String {
        let name = self.field.generator_name();
        let terms: Vec<(usize, &Q)> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (i, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mon = match i {
                0 => String::new(),
                1 => name.to_string(),
                _ => format!("{name}^{i}"),
            };
            if mon.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mon);
            } else {
                out.push_str(&format!("{abs}*{mon}"));
            }
        }
        out
    }

    /// True when the rendering is a single signed term (no parentheses
    /// needed as a coefficient).
    pub fn is_monomial(&self) -> bool {
        self.coords.iter().filter(|c| !c.is_zero()).count() <= 1
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

super::forward_ops!(FieldElement);

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

/// Renders a rational polynomial in `var`, highest degree first.
pub fn qpoly_to_string(p: &[Q], var: &str) -> String {
    let p = qpoly::trimmed(p.to_vec());
    if p.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, i) in (0..p.len()).rev().filter(|&i| !p[i].is_zero()).enumerate() {
        let c = &p[i];
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mon = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mon.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mon);
        } else {
            out.push_str(&format!("{abs}*{mon}"));
        }
    }
    out
}

/// `BigInt` convenience used by several modules.
pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}
