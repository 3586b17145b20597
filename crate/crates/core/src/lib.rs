//! Exact-arithmetic homological calculator for classifying stacks of finite
//! group schemes in characteristic `p`.
//!
//! Everything is computed over prime fields `F_p` with dense matrices and
//! deterministic pivoting, so identical inputs produce identical outputs
//! bit-for-bit. The layers are:
//!
//! - [`fp`]: exact linear algebra over `F_p`;
//! - [`graded`]: trigraded spaces, cochain complexes, bicomplexes, Künneth;
//! - [`algebra`]: finite commutative (Hopf) algebras, Cartier duality,
//!   cotangent complexes, dlog, Frobenius;
//! - [`ext`]: Ext algebras over augmented algebras via explicit resolutions;
//! - [`hochschild`]: Hochschild homology, the Connes operator, windowed
//!   cyclic theories;
//! - [`spectral`]: weight-graded multiplicative spectral sequences and the
//!   forced-differential search;
//! - [`stack`]: Hodge / de Rham / crystalline cohomology of `BG`;
//! - [`scenario`]: scenario files, reports and the regression harness.

pub mod algebra;
pub mod error;
pub mod ext;
pub mod fp;
pub mod graded;
pub mod hochschild;
pub mod scenario;
pub mod spectral;
pub mod stack;

pub use error::Error;
