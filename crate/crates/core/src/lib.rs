//! Exact symbolic Fedosov quantization of truncated Whitney function algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`], [`element`], [`policy`], [`parse`]: exact Gaussian-rational
//!   coefficients and the sparse multigraded algebra of Weyl-bundle forms.
//! * [`weyl`]: the fiberwise Moyal–Weyl product and the `δ`/`δ⁻¹` homotopy.
//! * [`fedosov`]: abelian connection, quantization and symbol maps, star product.
//! * [`whitney`]: subset models, flat ideals, the quotient star product.
//! * [`derham`]: Whitney–de Rham forms, symplectic Hodge star, Brylinski `δ`.
//! * [`homology`]: Hochschild/cyclic chain operators on finite truncated algebras.
//! * [`verify`], [`config`]: seeded verification suites and run configuration.

pub mod config;
pub mod derham;
pub mod element;
pub mod error;
pub mod fedosov;
pub mod homology;
pub mod linalg;
pub mod parse;
pub mod policy;
pub mod random;
pub mod scalar;
pub mod verify;
pub mod weyl;
pub mod whitney;

pub use element::{Key, MixedElement, MultiIndex, VarKind};
pub use error::{Error, Result};
pub use policy::TruncationPolicy;
pub use scalar::Scalar;

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
