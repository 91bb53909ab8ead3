//! Exact arithmetic substrate: number fields, polynomials, rational
//! functions, factorization and integer lattices.

/// Forwards `Add`/`Sub`/`Mul` for owned and borrowed operands to the
/// `add_ref`/`sub_ref`/`mul_ref` inherent methods.
macro_rules! forward_ops {
    ($t:ty) => {
        $crate::algebra::forward_ops!(@one $t, Add, add, add_ref);
        $crate::algebra::forward_ops!(@one $t, Sub, sub, sub_ref);
        $crate::algebra::forward_ops!(@one $t, Mul, mul, mul_ref);
    };
    (@one $t:ty, $tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                self.$f(rhs)
            }
        }
        impl std::ops::$tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$f(&rhs)
            }
        }
        impl std::ops::$tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$f(rhs)
            }
        }
        impl std::ops::$tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$f(&rhs)
            }
        }
    };
}
pub(crate) use forward_ops;

pub mod factor;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod multiplicative;
pub mod poly;
pub mod qpoly;
pub mod ratfunc;
pub mod tower;
pub mod zfactor;

pub use factor::{poly_factor, Factorization};
pub use field::{ConstantsField, FieldElement};
pub use lattice::{integer_kernel, smith_normal_form, IntMatrix, IntegerLattice, Snf};
pub use linalg::{Matrix, Scalar};
pub use multiplicative::{multiplicative_relations, root_of_unity_order, roots_of_unity};
pub use poly::Poly;
pub use qpoly::Q;
pub use ratfunc::RatFunc;
pub use tower::{field_join, find_embedding, FieldEmbedding, FieldJoin};
