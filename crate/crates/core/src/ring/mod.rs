//! Exact scalar arithmetic: rationals, the quadratic extension Q(sqrt 3),
//! sparse multivariate polynomials over a shared variable registry, and
//! matrices over any of these with fraction-free determinants and exact
//! linear solving.

mod linalg;
mod mat;
mod poly;
mod quad;
mod rat;
mod scalar;
mod vars;

pub use linalg::{
    char_poly, char_poly_coeffs, invert, kernel_basis, reduce_against, row_reduced_basis, rref,
    solve_affine, solve_field, solve_with_rhs, LinSolution, LinearSystem, RrefInfo,
};
pub use mat::Matrix;
pub use poly::{Monomial, Poly};
pub use quad::Quad;
pub use rat::{rat, rat_int, Rat};
pub use scalar::{Scalar, ScalarField};
pub use vars::VarSet;
