//! Orbit relations between monic irreducible polynomials under the shift
//! `x -> x + 1` and the dilation `x -> q x`.

use crate::algebra::multiplicative::discrete_log;
use crate::algebra::{FieldElement, Poly};

/// The integer `h` with `g(x) = f(x + h)`, if any.
pub fn shift_distance(f: &Poly, g: &Poly) -> Option<i64> {
    if f.field() != g.field() || f.deg() != g.deg() || f.deg() == 0 {
        return None;
    }
    let d = f.deg();
    let (f, g) = (f.monic(), g.monic());
    // f(x+h) has x^{d-1} coefficient f_{d-1} + d h
    let diff = g.coeff(d - 1).sub_ref(&f.coeff(d - 1));
    let h = diff.as_rational()? / crate::algebra::qpoly::q(d as i64);
    if !h.is_integer() {
        return None;
    }
    let h = i64::try_from(h.to_integer()).ok()?;
    (f.shift(h) == g).then_some(h)
}

/// `p(q^h x) / q^{h deg p}`, the monic image of `p` under `h` dilation steps.
pub fn q_step(p: &Poly, q: &FieldElement, h: i64) -> Poly {
    p.dilate(&q.pow(h).expect("q nonzero")).monic()
}

/// The integer `h` with `g = q_step(f, q, h)`, for monic `f`, `g` with
/// nonzero constant terms and `q` not a root of unity.
pub fn q_distance(f: &Poly, g: &Poly, q: &FieldElement) -> Option<i64> {
    if f.field() != g.field() || f.deg() != g.deg() || f.deg() == 0 {
        return None;
    }
    let (f, g) = (f.monic(), g.monic());
    let (f0, g0) = (f.coeff(0), g.coeff(0));
    if f0.is_zero() || g0.is_zero() {
        return (f == g).then_some(0);
    }
    // constant term of q_step(f, h) is f0 / q^{h d}
    let qd = q.pow(f.deg() as i64).ok()?;
    let ratio = f0.div_ref(&g0).ok()?;
    let h = discrete_log(&qd, &ratio).ok()??;
    (q_step(&f, q, h) == g).then_some(h)
}
