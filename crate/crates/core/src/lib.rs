//! Norms of idempotents `chi_S` on finite groups: Fourier-Stieltjes norms on
//! abelian groups, cb-multiplier norms through Schur multiplier (gamma_2)
//! bounds, and exhaustive classification sweeps.

pub mod coset;
pub mod error;
pub mod fourier;
pub mod group;
pub mod linalg;
pub mod multiplier;
pub mod report;
pub mod saeki;
pub mod schur;
pub mod subset;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use group::Group;
pub use subset::Subset;
