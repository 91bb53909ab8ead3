use super::{cycles, in_closure, DifferenceRing, RingElement, RingKind};
use crate::algebra::{poly_factor, Poly};
use crate::error::{PvError, Result};

/// An ideal of a base ring given by finitely many generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceIdeal {
    pub ring: DifferenceRing,
    pub generators: Vec<RingElement>,
}

impl DifferenceIdeal {
    pub fn new(ring: &DifferenceRing, generators: Vec<RingElement>) -> Result<Self> {
        for g in &generators {
            if !ring.contains(g) {
                return Err(PvError::Mismatch(format!("{g} is not an element of {}", ring.describe())));
            }
        }
        Ok(DifferenceIdeal { ring: ring.clone(), generators })
    }

    pub fn is_zero(&self) -> bool {
        self.generators.iter().all(|g| g.is_zero())
    }

    /// Support of the ideal in a product ring: the coordinates where some
    /// generator is nonzero.
    fn support(&self) -> Vec<bool> {
        let n = self.ring.product_len().unwrap_or(0);
        let mut s = vec![false; n];
        for g in &self.generators {
            if let Some(v) = g.as_tuple() {
                for (i, c) in v.iter().enumerate() {
                    s[i] |= !c.is_zero();
                }
            }
        }
        s
    }

    /// Generator of a principal ideal in a polynomial ring: the gcd of the
    /// numerators with unit factors removed, monic.
    fn principal(&self) -> Poly {
        let k = self.ring.field();
        let mut g = Poly::zero(k);
        for e in &self.generators {
            if let Some(f) = e.as_ratfunc() {
                g = g.gcd(f.num());
            }
        }
        if g.is_zero() {
            return g;
        }
        if let RingKind::Localized { gens } = self.ring.kind() {
            let fz = poly_factor(&g).expect("nonzero");
            let mut kept = Poly::one(k);
            for (f, e) in fz.factors {
                if !in_closure(&f, gens) {
                    kept = kept.mul_ref(&f.pow(e as u32));
                }
            }
            return kept;
        }
        g
    }

    /// Membership of an element.
    pub fn contains(&self, e: &RingElement) -> Result<bool> {
        match self.ring.kind() {
            RingKind::Product { .. } => {
                let s = self.support();
                let v = e.as_tuple().ok_or_else(|| PvError::Mismatch(e.to_string()))?;
                Ok(v.iter().zip(&s).all(|(c, &inside)| inside || c.is_zero()))
            }
            RingKind::ShiftField | RingKind::QDilation { .. } => Ok(e.is_zero() || !self.is_zero()),
            RingKind::ShiftPoly | RingKind::Localized { .. } => {
                let g = self.principal();
                let f = e.as_ratfunc().ok_or_else(|| PvError::Mismatch(e.to_string()))?;
                if g.is_zero() {
                    return Ok(f.is_zero());
                }
                Ok(g.divides(f.num()))
            }
        }
    }

    /// The ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.contains(&self.ring.one()).unwrap_or(false)
    }

    pub fn is_proper_nonzero(&self) -> bool {
        !self.is_zero() && !self.is_unit_ideal()
    }

    pub fn render(&self) -> String {
        let g: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("({})", g.join(", "))
    }
}

/// Whether `tau` and `tau^-1` map every generator back into the ideal.
pub fn is_tau_stable(ideal: &DifferenceIdeal) -> Result<bool> {
    let ring = &ideal.ring;
    if let RingKind::Product { perm } = ring.kind() {
        // an ideal of K^n is determined by its support
        let s = ideal.support();
        return Ok(cycles(perm).iter().all(|c| c.iter().all(|&i| s[i] == s[c[0]])));
    }
    for g in &ideal.generators {
        for p in [1, -1] {
            if !ideal.contains(&ring.tau_apply(g, p)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
