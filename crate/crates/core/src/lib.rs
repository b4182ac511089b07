//! Complex conjugate pair sums (CCPS) and the signal tools built on them.
//!
//! * [`number_theory`]: gcd, totient, divisors and the half residue sets
//!   that index every CCPS.
//! * [`sequences`]: CCPS, Ramanujan sums, circular shift and periodic
//!   extension.
//! * [`derivative`]: first and second derivative filters from CCPS kernels.
//! * [`subspace`]: circulant bases, fast and dense projection onto the
//!   conjugate subspaces, the periodic transform and its multiplication
//!   count.
//! * [`correlation`]: DFT and circular correlation identities.
//! * [`imageio`] and [`edge`]: PGM images and the edge detection pipeline.

pub mod correlation;
pub mod derivative;
pub mod edge;
mod error;
pub mod imageio;
pub mod linalg;
pub mod number_theory;
pub mod sequences;
pub mod subspace;

pub use error::{Error, Result};
pub use number_theory::CcpsId;
pub use sequences::Sequence;
