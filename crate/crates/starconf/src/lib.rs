//! Exact computation with star configurations on generic hypersurfaces.
//!
//! A star configuration X(l, r) in P^n is cut out by the products L_sigma of
//! r forms drawn from l general linear forms. This crate decides, certifies,
//! and constructs containments of such configurations in generic degree-d
//! hypersurfaces, entirely in exact arithmetic:
//!
//! - [`field`]: a word-sized prime field (default modulus 2^31 - 1) and
//!   arbitrary-precision rationals;
//! - [`poly`]: sparse homogeneous polynomials and the text grammar used by
//!   file inputs and certificates;
//! - [`linalg`]: exact rank / determinant / solve kernels;
//! - [`star`]: general linear forms, star generators, points, and Hilbert
//!   functions;
//! - [`membership`]: degree slices of ideals as coefficient matrices,
//!   membership tests, and explicit decompositions F = sum L_sigma M_sigma;
//! - [`certify`]: tangent-space full-rank certificates for the (n, n+2, 3, d)
//!   family, by Macaulay rank or by the structured evaluation matrix;
//! - [`classify`]: the complete containment classification over (n, l, r, d).
//!
//! Rank certificates over F_p are sound for characteristic zero: maximal rank
//! of an integer matrix survives specialization, so a full-rank witness mod p
//! proves the generic statement, while a rank shortfall proves nothing and is
//! retried with fresh randomness.
//!
//! ```
//! use starconf::certify::{certify_tuple, Strategy};
//! use starconf::classify::{classify, Verdict};
//! use starconf::field::FieldConfig;
//!
//! // Generic quintic curves contain a four-line star configuration...
//! let c = classify(2, 4, 3, 5);
//! assert_eq!(c.verdict, Verdict::GenericYes);
//!
//! // ...and here is a machine-checkable witness of that fact.
//! let cert = certify_tuple(&FieldConfig::default(), 2, 5, Strategy::MacaulayRank, 1, 3).unwrap();
//! assert!(cert.certified());
//! assert_eq!(cert.achieved_rank, 21); // dim of the degree-5 slice in 3 variables
//! assert!(cert.recheck().unwrap());
//! ```

pub mod certify;
pub mod classify;
pub mod error;
pub mod field;
pub mod linalg;
pub mod membership;
pub mod poly;
pub mod selftest;
pub mod star;

pub use error::{Error, Result};
pub use field::{Field, FieldConfig, FieldKind, Fp, Rationals, DEFAULT_PRIME};
