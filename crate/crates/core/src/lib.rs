//! Positive maps between matrix algebras, their witnesses, zeros and
//! two-dimensional sections of the state space.

pub mod bipartite;
pub mod builtins;
pub mod error;
pub mod exec;
pub mod hermitian;
pub mod normalizer;
pub mod random;
pub mod sections;
pub mod zeros;

pub use bipartite::{MapMatrix, Witness};
pub use error::{Error, Result};
pub use exec::Execution;
pub use hermitian::{CMatrix, CVector, HermitianMatrix, Spectrum, Tolerances};
pub use normalizer::{normalize, NormalizationResult, NormalizeOptions};
pub use sections::{BoundaryCurve, NormFrame, SectionPlane, Transform};
pub use zeros::{find_zeros, ProductZero, ZeroKind, ZeroReport, ZeroSearchOptions};
