//! Dense complex linear algebra used by the bipartite routines.

pub mod charpoly;
pub mod eig;
pub mod matrix;
pub mod svd;
pub mod vecf;

pub use charpoly::{char_poly, char_poly_exact, char_poly_float, CharPoly, CharPolynomial, IntMatrix};
pub use eig::{hermitian_eig, hermitian_pinv, is_psd, min_eigenvalue, psd_sqrt, HermitianEigenSystem};
pub use matrix::{kron_vec, vdot, vnorm, ComplexMatrix};
pub use svd::{svd, Svd};
pub use vecf::{is_hermitian_vector, unvec_f, vec_f};
