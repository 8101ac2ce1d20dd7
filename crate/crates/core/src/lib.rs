//! Dense linear algebra over GF(2).
//!
//! Bit-packed matrices ([`BitMatrix`]) with in-place reduced row echelon
//! forms and PLS decompositions: textbook Gaussian elimination, the Method of
//! Four Russians (M4RI), the Four Russians PLS kernel (MMPF), a cache-blocked
//! recursive PLS, and a density-driven hybrid of M4RI and PLS.
//!
//! ```
//! use f2dense::{BitMatrix, EliminationConfig};
//!
//! let mut a = BitMatrix::random(100, 120, 0.5, 7);
//! let rank = f2dense::rref(&mut a, &EliminationConfig::default()).unwrap();
//! assert!(rank <= 100);
//! assert!(f2dense::gauss::is_rref(&a));
//! ```

mod error;
mod row;

pub mod bitmat;
pub mod gauss;
pub mod io;
pub mod instrument;
pub mod m4ri;
pub mod mmpf;
pub mod mul;
pub mod par;
pub mod perm;
pub mod pls;
pub mod selftest;

pub use bitmat::{BitMatrix, MatrixWindow, MatrixWindowMut, Rect};
pub use error::{Error, Result};
pub use gauss::{gauss_pls, gauss_rref, PlsResult};
pub use m4ri::m4ri_rref;
pub use mmpf::mmpf_pls;
pub use mul::{addmul, addmul_within, mul_m4rm, mul_naive, trsm_lower_left_unit};
pub use perm::Permutation;
pub use pls::{hybrid_rref, pls_decompose, pls_recursive, rank, rref, rref_from_pls, Algorithm, EliminationConfig};
