use std::cmp::Ordering;
use std::fmt;

use super::field::{ConstantsField, FieldElement};
use super::qpoly::Q;

/// Dense univariate polynomial in `x` over a [`ConstantsField`]; lowest
/// degree first, never with a zero leading coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: ConstantsField,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero(field: &ConstantsField) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &ConstantsField) -> Self {
        Self::constant(field.one())
    }

    pub fn x(field: &ConstantsField) -> Self {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field().clone();
        Poly::new(&field, vec![c])
    }

    pub fn new(field: &ConstantsField, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_rationals(field: &ConstantsField, coeffs: &[Q]) -> Self {
        Poly::new(field, coeffs.iter().map(|c| field.from_rational(c.clone())).collect())
    }

    pub fn from_ints(field: &ConstantsField, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// `(x - root)`
    pub fn linear(root: &FieldElement) -> Self {
        let f = root.field().clone();
        Poly::new(&f, vec![root.neg_ref(), f.one()])
    }

    pub fn monomial(c: FieldElement, k: usize) -> Self {
        let f = c.field().clone();
        let mut coeffs = vec![f.zero(); k + 1];
        coeffs[k] = c;
        Poly::new(&f, coeffs)
    }

    pub fn field(&self) -> &ConstantsField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1` convention collapsed to 0 for bounds.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Lowest nonzero coefficient index (x-adic valuation); `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn trailing(&self) -> FieldElement {
        self.valuation().map(|v| self.coeffs[v].clone()).unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn neg_ref(&self) -> Self {
        Poly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Poly::new(&self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one(&self.field);
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, b: &Self) -> (Self, Self) {
        let db = b.degree().expect("division by zero polynomial");
        let inv = b.leading().inv().unwrap();
        let mut r = self.coeffs.clone();
        let mut quo = vec![self.field.zero(); r.len().saturating_sub(db).max(1)];
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let c = &r[dr] * &inv;
            let shift = dr - db;
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &(&c * bc);
            }
            quo[shift] = c;
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(&self.field, quo), Poly::new(&self.field, r))
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.divrem(b).1
    }

    /// Quotient when `b` divides `self`, otherwise `None`.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        let (quo, r) = self.divrem(b);
        r.is_zero().then_some(quo)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv().unwrap())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        self.mul_ref(o).divrem(&self.gcd(o)).0.monic()
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            &self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&super::qpoly::q(i as i64))).collect(),
        )
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// `p(a*x + b)`
    pub fn compose_affine(&self, a: &FieldElement, b: &FieldElement) -> Self {
        let lin = Poly::new(&self.field, vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(&self.field), |acc, c| acc.mul_ref(&lin).add_ref(&Poly::constant(c.clone())))
    }

    /// `p(x + k)`
    pub fn shift(&self, k: i64) -> Self {
        self.compose_affine(&self.field.one(), &self.field.from_int(k))
    }

    /// `p(c * x)`
    pub fn dilate(&self, c: &FieldElement) -> Self {
        let mut pw = self.field.one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw = &pw * c;
        }
        Poly::new(&self.field, out)
    }

    /// Squarefree decomposition (Yun): monic `(factor, multiplicity)` pairs
    /// with pairwise coprime squarefree factors. Constant input gives an
    /// empty list.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let f = self.monic();
        if f.deg() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).0;
        let mut c = df.divrem(&a0).0;
        let mut d = c.sub_ref(&b.derivative());
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub_ref(&b.derivative());
            if a.deg() > 0 {
                out.push((a.monic(), i));
            }
            i += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Map coefficients through a field homomorphism.
    pub fn map_coeffs(&self, target: &ConstantsField, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        Poly::new(target, self.coeffs.iter().map(f).collect())
    }

    /// Coefficients as rationals, when all lie in the prime field.
    pub fn as_rational_coeffs(&self) -> Option<Vec<Q>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let s = c.render();
            let (neg, body) = if c.is_monomial() && s.starts_with('-') {
                (true, s[1..].to_string())
            } else {
                (false, s)
            };
            let was_first = first;
            if first {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            first = false;
            let simple = c.is_monomial();
            if mon.is_empty() {
                if simple || was_first {
                    out.push_str(&body);
                } else {
                    out.push_str(&format!("({body})"));
                }
            } else if body == "1" {
                out.push_str(&mon);
            } else if simple {
                out.push_str(&format!("{body}*{mon}"));
            } else {
                out.push_str(&format!("({body})*{mon}"));
            }
        }
        out
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree, then lexicographically on the coefficient
/// vector (lowest degree first).
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

super::forward_ops!(Poly);
