use super::{cycles, DifferenceRing, RingElement, RingKind};
use crate::algebra::{ConstantsField, FieldElement};

/// The ring of constants `C_R` of a base ring.
///
/// `C_R` is `copies` copies of `field`; it is a field exactly when
/// `copies == 1`, in which case it embeds diagonally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsOf {
    pub field: ConstantsField,
    pub copies: usize,
    /// Idempotents spanning `C_R` over `field` (just `1` when a field).
    pub basis: Vec<RingElement>,
    pub trace: Vec<String>,
}

impl ConstantsOf {
    pub fn is_field(&self) -> bool {
        self.copies == 1
    }

    /// Image of a constant under the diagonal embedding into `R`.
    pub fn embed(&self, ring: &DifferenceRing, c: &FieldElement) -> RingElement {
        ring.constant(c)
    }

    pub fn label(&self) -> String {
        if self.copies == 1 {
            self.field.label().to_string()
        } else {
            format!("{}^{}", self.field.label(), self.copies)
        }
    }
}

/// `C_R` with a short certificate for each supported kind.
pub fn constants_of(ring: &DifferenceRing) -> ConstantsOf {
    let k = ring.field().clone();
    let one = ring.one();
    let mut trace = Vec::new();
    match ring.kind() {
        RingKind::ShiftField | RingKind::ShiftPoly | RingKind::Localized { .. } => {
            trace.push("write a fixed f = p/s in lowest terms with s monic".into());
            trace.push("tau(f) = f forces s(x+1) = s(x) and p(x+1) = p(x)".into());
            trace.push("a nonconstant polynomial p has p(x+1) - p(x) of degree deg p - 1, so p is constant".into());
            trace.push(format!("hence C_R = {}", k.label()));
            ConstantsOf { field: k, copies: 1, basis: vec![one], trace }
        }
        RingKind::QDilation { q } => {
            trace.push("write a fixed f = p/s in lowest terms with s monic".into());
            trace.push(format!(
                "the coefficient of x^j in p(q x) is q^j p_j, and q = {} is not a root of unity",
                q.render()
            ));
            trace.push("tau(f) = f forces p(qx) = q^{deg s} p(x) and s(qx) = q^{deg s} s(x), so p and s are monomials of equal degree".into());
            trace.push(format!("hence C_R = {}", k.label()));
            ConstantsOf { field: k, copies: 1, basis: vec![one], trace }
        }
        RingKind::Product { perm } => {
            let cs = cycles(perm);
            trace.push("a tuple is fixed iff it is constant along each cycle of the permutation".into());
            trace.push(format!("cycles: {cs:?}"));
            let basis = if cs.len() == 1 {
                vec![one]
            } else {
                cs.iter()
                    .map(|c| {
                        RingElement::Tuple(
                            (0..perm.len())
                                .map(|i| if c.contains(&i) { k.one() } else { k.zero() })
                                .collect(),
                        )
                    })
                    .collect()
            };
            if cs.len() == 1 {
                trace.push(format!("one cycle: C_R is the diagonal copy of {}", k.label()));
            } else {
                trace.push(format!("{} cycles: C_R = {}^{} is not a field", cs.len(), k.label(), cs.len()));
            }
            ConstantsOf { field: k, copies: cs.len(), basis, trace }
        }
    }
}
