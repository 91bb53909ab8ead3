//! Finite free difference modules over the supported base rings.

mod solver;

use std::fmt;

use crate::algebra::{FieldElement, Matrix, RatFunc};
use crate::error::{PvError, Result};
use crate::ring::{DifferenceRing, RingElement, RingKind};

pub use solver::{
    fixed_vectors, fixed_vectors_with, is_trivial, is_trivial_with, scalar_rational_solutions,
    scalar_rational_solutions_with, AffineSolutions, FixedVectorSpace, SolverOptions,
};

/// A free module `R^n` with `tau(e_j) = sum_i A_ij e_i`.
///
/// Coordinates transform as `c -> A tau(c)`, so fixed vectors solve
/// `A tau(v) = v`.
#[derive(Clone, PartialEq, Eq)]
pub struct DifferenceModule {
    ring: DifferenceRing,
    a: Matrix<RingElement>,
}

impl DifferenceModule {
    /// Module from its basis-form matrix `A`.
    pub fn from_basis_matrix(ring: &DifferenceRing, a: Matrix<RingElement>) -> Result<Self> {
        if a.rows() != a.cols() || a.rows() == 0 {
            return Err(PvError::InvalidInput(format!("matrix must be square of size >= 1, got {}x{}", a.rows(), a.cols())));
        }
        for e in a.entries() {
            if !ring.contains(e) {
                return Err(PvError::Mismatch(format!("{e} is not an element of {}", ring.describe())));
            }
        }
        invert(ring, &a)?;
        Ok(DifferenceModule { ring: ring.clone(), a })
    }

    /// Module of the system `y(tau x) = B y(x)`; stores `A = B^-1`.
    pub fn from_recurrence(ring: &DifferenceRing, b: Matrix<RingElement>) -> Result<Self> {
        if b.rows() != b.cols() || b.rows() == 0 {
            return Err(PvError::InvalidInput(format!("matrix must be square of size >= 1, got {}x{}", b.rows(), b.cols())));
        }
        for e in b.entries() {
            if !ring.contains(e) {
                return Err(PvError::Mismatch(format!("{e} is not an element of {}", ring.describe())));
            }
        }
        let a = invert(ring, &b)?;
        Ok(DifferenceModule { ring: ring.clone(), a })
    }

    /// `M_a`: rank one with `A = (a)`.
    pub fn rank_one(ring: &DifferenceRing, a: RingElement) -> Result<Self> {
        Self::from_basis_matrix(ring, Matrix::from_rows(vec![vec![a]]))
    }

    /// The direct sum of the `M_{a_i}`.
    pub fn diagonal(ring: &DifferenceRing, entries: &[RingElement]) -> Result<Self> {
        if entries.is_empty() {
            return Err(PvError::InvalidInput("diagonal module needs at least one entry".into()));
        }
        Self::from_basis_matrix(ring, diag(ring, entries))
    }

    pub fn ring(&self) -> &DifferenceRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    /// The basis-form matrix `A`.
    pub fn matrix(&self) -> &Matrix<RingElement> {
        &self.a
    }

    /// The recurrence-form matrix `B = A^-1`.
    pub fn recurrence_matrix(&self) -> Matrix<RingElement> {
        invert(&self.ring, &self.a).expect("A is invertible by construction")
    }

    pub fn inverse_matrix(&self) -> Matrix<RingElement> {
        self.recurrence_matrix()
    }

    /// Diagonal entries when `A` is diagonal.
    pub fn diagonal_entries(&self) -> Option<Vec<RingElement>> {
        self.a.is_diagonal().then(|| (0..self.rank()).map(|i| self.a.get(i, i).clone()).collect())
    }

    /// The semilinear action on coordinates: `c -> A tau(c)`.
    pub fn apply_tau(&self, v: &[RingElement]) -> Result<Vec<RingElement>> {
        if v.len() != self.rank() {
            return Err(PvError::Mismatch(format!("vector of length {} in a rank {} module", v.len(), self.rank())));
        }
        let tv = v.iter().map(|c| self.ring.tau_apply(c, 1)).collect::<Result<Vec<_>>>()?;
        Ok(self.a.mul_vec(&tv))
    }

    /// The inverse action `c -> tau^-1(A^-1 c)`.
    pub fn apply_tau_inverse(&self, v: &[RingElement]) -> Result<Vec<RingElement>> {
        if v.len() != self.rank() {
            return Err(PvError::Mismatch(format!("vector of length {} in a rank {} module", v.len(), self.rank())));
        }
        let w = self.recurrence_matrix().mul_vec(v);
        w.iter().map(|c| self.ring.tau_apply(c, -1)).collect()
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(PvError::Mismatch(format!(
                "base rings differ: {} vs {}",
                self.ring.describe(),
                other.ring.describe()
            )));
        }
        Ok(())
    }

    /// `M^v` with matrix `(A^T)^-1`.
    pub fn dual(&self) -> Self {
        let a = invert(&self.ring, &self.a.transpose()).expect("transpose of an invertible matrix");
        DifferenceModule { ring: self.ring.clone(), a }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Ok(DifferenceModule { ring: self.ring.clone(), a: self.a.kron(&other.a) })
    }

    pub fn dsum(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Ok(DifferenceModule { ring: self.ring.clone(), a: self.a.block_diagonal(&other.a) })
    }

    /// Internal hom `M^v (x) N`.
    pub fn hom(&self, other: &Self) -> Result<Self> {
        self.dual().tensor(other)
    }

    /// The natural pairing of `M` with `M^v`: `sum_i v_i w_i`.
    pub fn pairing(&self, v: &[RingElement], w: &[RingElement]) -> Result<RingElement> {
        if v.len() != self.rank() || w.len() != self.rank() {
            return Err(PvError::Mismatch("pairing vectors must have the module rank".into()));
        }
        let mut acc = self.ring.zero();
        for (x, y) in v.iter().zip(w) {
            acc = self.ring.add(&acc, &self.ring.mul(x, y)?)?;
        }
        Ok(acc)
    }

    /// Same module over another ring, entries mapped by `f`.
    pub fn map_entries(
        &self,
        ring: &DifferenceRing,
        f: impl Fn(&RingElement) -> Result<RingElement>,
    ) -> Result<Self> {
        let a = self.a.try_map(f)?;
        Self::from_basis_matrix(ring, a)
    }

    /// Text form of the basis matrix, e.g. `[[x, 0], [0, 1]]`.
    pub fn render(&self) -> String {
        render_matrix(&self.a)
    }
}

impl fmt::Debug for DifferenceModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DifferenceModule({}, {})", self.ring.describe(), self.render())
    }
}

pub fn render_matrix(m: &Matrix<RingElement>) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Diagonal matrix over a ring.
pub fn diag(ring: &DifferenceRing, entries: &[RingElement]) -> Matrix<RingElement> {
    let n = entries.len();
    Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { ring.zero() })
}

/// Inverse of a square matrix over the base ring, or an error if it is not
/// invertible there. Product rings are handled coordinatewise since
/// elimination over `K^m` would trip over zero divisors.
pub fn invert(ring: &DifferenceRing, m: &Matrix<RingElement>) -> Result<Matrix<RingElement>> {
    let n = m.rows();
    let singular = || PvError::InvalidInput(format!("matrix {} is not invertible over {}", render_matrix(m), ring.describe()));
    match ring.kind() {
        RingKind::Product { perm } => {
            let len = perm.len();
            let mut blocks = Vec::with_capacity(len);
            for c in 0..len {
                let mc: Matrix<FieldElement> = Matrix::from_fn(n, n, |i, j| m.get(i, j).as_tuple().expect("tuple")[c].clone());
                blocks.push(mc.inverse().ok_or_else(singular)?);
            }
            Ok(Matrix::from_fn(n, n, |i, j| RingElement::Tuple(blocks.iter().map(|b| b.get(i, j).clone()).collect())))
        }
        _ => {
            let mf: Matrix<RatFunc> = Matrix::from_fn(n, n, |i, j| m.get(i, j).as_ratfunc().expect("function").clone());
            let inv = mf.inverse().ok_or_else(singular)?;
            let out = inv.map(|f| RingElement::Fn(f.clone()));
            if out.entries().all(|e| ring.contains(e)) {
                Ok(out)
            } else {
                Err(singular())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ConstantsField, Poly};

    fn rf(k: &ConstantsField, num: &[i64], den: &[i64]) -> RingElement {
        RingElement::Fn(RatFunc::new(Poly::from_ints(k, num), Poly::from_ints(k, den)).unwrap())
    }

    #[test]
    fn constructions() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::shift_field(&k);
        let a = rf(&k, &[1, 1], &[0, 1]);
        let b = rf(&k, &[2], &[1]);
        let ma = DifferenceModule::rank_one(&r, a.clone()).unwrap();
        let mb = DifferenceModule::rank_one(&r, b.clone()).unwrap();
        assert_eq!(ma.dual(), DifferenceModule::rank_one(&r, r.inv(&a).unwrap()).unwrap());
        assert_eq!(ma.tensor(&mb).unwrap(), DifferenceModule::rank_one(&r, r.mul(&a, &b).unwrap()).unwrap());
        assert_eq!(ma.dual().dual(), ma);
        assert_eq!(ma.dsum(&mb).unwrap().diagonal_entries(), Some(vec![a, b]));
    }

    #[test]
    fn polynomial_ring_rejects_nonunit_determinant() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::shift_poly(&k);
        assert!(DifferenceModule::rank_one(&r, r.x().unwrap()).is_err());
        assert!(DifferenceModule::rank_one(&r, r.from_int(3)).is_ok());
    }

    #[test]
    fn product_inverse_is_coordinatewise() {
        let k = ConstantsField::rationals();
        let r = DifferenceRing::cyclic_product(&k, 2).unwrap();
        let t = |a: i64, b: i64| r.tuple(vec![k.from_int(a), k.from_int(b)]).unwrap();
        let m = Matrix::from_rows(vec![vec![t(1, 0), t(0, 1)], vec![t(0, 1), t(1, 0)]]);
        let inv = invert(&r, &m).unwrap();
        assert_eq!(inv.mul(&m), Matrix::identity(2, &r.one()));
    }
}
