use super::orbit::shift_distance;
use super::{constants_of, cycles, is_tau_stable, DifferenceIdeal, DifferenceRing, RingElement, RingKind};
use crate::algebra::poly_factor;
use crate::error::{PvError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Simple,
    NotSimple,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Simple => "simple",
            Verdict::NotSimple => "not-simple",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Outcome of a simplicity analysis: a proof trace for `Simple`, a proper
/// nonzero stable ideal for `NotSimple`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityCertificate {
    pub verdict: Verdict,
    pub trace: Vec<String>,
    pub witness: Option<String>,
}

impl SimplicityCertificate {
    pub fn simple(trace: Vec<String>) -> Self {
        SimplicityCertificate { verdict: Verdict::Simple, trace, witness: None }
    }

    pub fn not_simple(trace: Vec<String>, witness: String) -> Self {
        SimplicityCertificate { verdict: Verdict::NotSimple, trace, witness: Some(witness) }
    }

    pub fn unknown(trace: Vec<String>) -> Self {
        SimplicityCertificate { verdict: Verdict::Unknown, trace, witness: None }
    }

    pub fn is_simple(&self) -> bool {
        self.verdict == Verdict::Simple
    }
}

pub fn simplicity_certificate(ring: &DifferenceRing) -> SimplicityCertificate {
    match ring.kind() {
        RingKind::ShiftField | RingKind::QDilation { .. } => {
            SimplicityCertificate::simple(vec!["R is a field: every nonzero ideal contains a unit".into()])
        }
        RingKind::ShiftPoly => SimplicityCertificate::simple(vec![
            "let I be a nonzero tau-stable ideal of K[x] and p in I nonzero of minimal degree".into(),
            "tau(p) - lc(p)/lc(tau(p)) p = p(x+1) - p(x) lies in I and has degree < deg p".into(),
            "minimality forces p(x+1) = p(x), so p is a nonzero constant and I = R".into(),
        ]),
        RingKind::Localized { .. } => SimplicityCertificate::simple(vec![
            "K[x] with x -> x+1 is simple (degree descent)".into(),
            "the multiplicative set is generated by tau^n-shifts of the generators, hence tau^{+-1}-stable".into(),
            "a localization of a simple difference ring at a tau^{+-1}-stable multiplicative set is simple".into(),
        ]),
        RingKind::Product { perm } => {
            let cs = cycles(perm);
            let trace = vec![
                "ideals of K^n are determined by their supports".into(),
                "an ideal is tau-stable iff its support is a union of cycles of the permutation".into(),
                format!("cycles: {cs:?}"),
            ];
            if cs.len() == 1 {
                let mut t = trace;
                t.push("the permutation is transitive: the only stable supports are empty and full".into());
                return SimplicityCertificate::simple(t);
            }
            let k = ring.field();
            let gen = RingElement::Tuple(
                (0..perm.len())
                    .map(|i| if cs[0].contains(&i) { k.one() } else { k.zero() })
                    .collect(),
            );
            let ideal = DifferenceIdeal::new(ring, vec![gen]).expect("tuple of the right shape");
            // re-check the witness before emitting it
            let ok = is_tau_stable(&ideal).unwrap_or(false) && ideal.is_proper_nonzero();
            if !ok {
                return SimplicityCertificate::unknown(trace);
            }
            let mut t = trace;
            t.push("the support of the first cycle gives a proper nonzero stable ideal".into());
            SimplicityCertificate::not_simple(t, ideal.render())
        }
    }
}

/// Result of the structural nilpotent search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reducedness {
    pub reduced: bool,
    pub trace: Vec<String>,
}

pub fn reducedness_probe(ring: &DifferenceRing) -> Reducedness {
    let trace = match ring.kind() {
        RingKind::Product { .. } => vec!["a product of fields is reduced".to_string()],
        RingKind::ShiftField | RingKind::QDilation { .. } => vec!["a field is reduced".to_string()],
        _ => vec!["a localization of the domain K[x] is a domain".to_string()],
    };
    Reducedness { reduced: true, trace }
}

impl DifferenceRing {
    /// Localization at the multiplicative set generated by the
    /// `tau^{+-1}`-orbits of `gens`.
    pub fn localize(&self, gens: &[RingElement]) -> Result<DifferenceRing> {
        for g in gens {
            if !self.contains(g) {
                return Err(PvError::Mismatch(format!("{g} is not an element of {}", self.describe())));
            }
            if g.is_zero() {
                return Err(PvError::ZeroDivisor("cannot localize at zero".into()));
            }
            if self.is_zero_divisor(g) {
                return Err(PvError::ZeroDivisor(format!("{g} is a zero divisor")));
            }
        }
        match self.kind() {
            RingKind::ShiftPoly | RingKind::Localized { .. } => {
                let mut reps = match self.kind() {
                    RingKind::Localized { gens } => gens.clone(),
                    _ => Vec::new(),
                };
                for g in gens {
                    let num = g.as_ratfunc().expect("function ring").num().clone();
                    if num.is_constant() {
                        continue;
                    }
                    for (f, _) in poly_factor(&num)?.factors {
                        if !reps.iter().any(|r| shift_distance(r, &f).is_some()) {
                            reps.push(f);
                        }
                    }
                }
                if reps.is_empty() {
                    return Ok(self.clone());
                }
                reps.sort();
                Ok(DifferenceRing::with_kind(RingKind::Localized { gens: reps }, self.field()))
            }
            // every non-zero-divisor is already a unit
            RingKind::Product { .. } | RingKind::ShiftField | RingKind::QDilation { .. } => Ok(self.clone()),
        }
    }
}

/// Report for the total ring of fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionsReport {
    pub constants_r: String,
    pub constants_s: String,
    pub c_r_is_field: bool,
    pub c_s_equals_c_r: bool,
    pub trace: Vec<String>,
}

/// The total ring of fractions `S` of a simple ring `R`, with the
/// verified equalities "C_R is a field" and "C_S = C_R".
pub fn total_fractions_check(ring: &DifferenceRing) -> Result<(DifferenceRing, FractionsReport)> {
    let cert = simplicity_certificate(ring);
    if !cert.is_simple() {
        return Err(PvError::NotCertifiedSimple(format!(
            "{} (verdict {})",
            ring.describe(),
            cert.verdict.as_str()
        )));
    }
    let mut trace = Vec::new();
    let s = match ring.kind() {
        RingKind::ShiftPoly | RingKind::Localized { .. } => {
            trace.push("R is a domain; its total ring of fractions is K(x) with the extended shift".into());
            DifferenceRing::shift_field(ring.field())
        }
        RingKind::Product { .. } => {
            trace.push("every non-zero-divisor of K^n is a unit, so S = R".into());
            ring.clone()
        }
        _ => {
            trace.push("R is a field, so S = R".into());
            ring.clone()
        }
    };
    let cr = constants_of(ring);
    let cs = constants_of(&s);
    // every nonzero constant has a constant inverse
    let field_ok = cr.is_field()
        && cr.basis.iter().all(|b| {
            ring.inv(b)
                .ok()
                .and_then(|inv| ring.tau_apply(&inv, 1).ok().map(|t| t == inv))
                .unwrap_or(false)
        });
    let equal = cr.is_field() && cs.is_field() && cr.field == cs.field && cr.copies == cs.copies;
    trace.push(format!("C_R = {}; C_S = {}", cr.label(), cs.label()));
    trace.push("x in C_R nonzero: xR is a nonzero difference ideal, hence R, so x is invertible".into());
    trace.push("x in C_S: {y : xy in R} is a nonzero difference ideal, hence R, so x lies in R".into());
    Ok((
        s,
        FractionsReport {
            constants_r: cr.label(),
            constants_s: cs.label(),
            c_r_is_field: field_ok,
            c_s_equals_c_r: equal,
            trace,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ConstantsField;

    #[test]
    fn certificates() {
        let k = ConstantsField::rationals();
        assert!(simplicity_certificate(&DifferenceRing::shift_poly(&k)).is_simple());
        let id = DifferenceRing::permutation_product(&k, vec![0, 1]).unwrap();
        let c = simplicity_certificate(&id);
        assert_eq!(c.verdict, Verdict::NotSimple);
        assert_eq!(c.witness.as_deref(), Some("((1, 0))"));
        assert!(total_fractions_check(&id).is_err());
        let (s, rep) = total_fractions_check(&DifferenceRing::shift_poly(&k)).unwrap();
        assert_eq!(s, DifferenceRing::shift_field(&k));
        assert!(rep.c_r_is_field && rep.c_s_equals_c_r);
    }
}
