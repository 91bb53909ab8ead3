use std::fmt;

use super::field::{ConstantsField, FieldElement};
use super::poly::Poly;
use crate::error::{PvError, Result};

/// Rational function `num/den` in normal form: `den` monic and coprime to
/// `num`; zero is `0/1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(PvError::DivisionByZero);
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one(&field) });
        }
        let g = num.gcd(&den);
        let mut n = num.divrem(&g).0;
        let mut d = den.divrem(&g).0;
        let lc = d.leading().inv()?;
        n = n.scale(&lc);
        d = d.scale(&lc);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let f = p.field().clone();
        RatFunc { num: p, den: Poly::one(&f) }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero(field: &ConstantsField) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &ConstantsField) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn x(field: &ConstantsField) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn from_int(field: &ConstantsField, n: i64) -> Self {
        Self::constant(field.from_int(n))
    }

    pub fn field(&self) -> &ConstantsField {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num.add_ref(&o.num), self.den.clone()).unwrap();
        }
        RatFunc::new(
            self.num.mul_ref(&o.den).add_ref(&o.num.mul_ref(&self.den)),
            self.den.mul_ref(&o.den),
        )
        .unwrap()
    }

    pub fn neg_ref(&self) -> Self {
        RatFunc { num: self.num.neg_ref(), den: self.den.clone() }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.field());
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n = self.num.divrem(&g1).0.mul_ref(&o.num.divrem(&g2).0);
        let d = self.den.divrem(&g2).0.mul_ref(&o.den.divrem(&g1).0);
        let lc = d.leading().inv().unwrap();
        RatFunc { num: n.scale(&lc), den: d.scale(&lc) }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(PvError::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div_ref(&self, o: &Self) -> Result<Self> {
        Ok(self.mul_ref(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs() as u32;
        // numerator and denominator stay coprime under powering
        Ok(RatFunc { num: base.num.pow(n), den: base.den.pow(n) })
    }

    /// `f(x + k)`
    pub fn shift(&self, k: i64) -> Self {
        RatFunc::new(self.num.shift(k), self.den.shift(k)).unwrap()
    }

    /// `f(c * x)`, `c` nonzero.
    pub fn dilate(&self, c: &FieldElement) -> Self {
        RatFunc::new(self.num.dilate(c), self.den.dilate(c)).unwrap()
    }

    pub fn map_coeffs(&self, target: &ConstantsField, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        RatFunc::new(self.num.map_coeffs(target, &f), self.den.map_coeffs(target, &f)).unwrap()
    }

    /// Evaluation at a point outside the poles.
    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(PvError::DivisionByZero);
        }
        self.num.eval(x).div_ref(&d)
    }

    pub fn render(&self, var: &str) -> String {
        let n = self.num.render(var);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.render(var);
        let wrap = |s: String, p: &Poly| {
            let single = p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
                && p.coeffs().iter().all(|c| c.is_monomial());
            if single && !s.starts_with('-') {
                s
            } else {
                format!("({s})")
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

super::forward_ops!(RatFunc);
