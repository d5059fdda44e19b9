//! Exact jumping numbers of multiplier ideals, log canonical thresholds, and
//! contribution verdicts for exceptional divisors, computed from the numerical
//! data of a log resolution.

pub mod candidates;
pub mod cone;
pub mod contribution;
pub mod error;
pub mod fixture;
pub mod lattice;
pub mod model;
pub mod rational;
pub mod report;
pub mod surface;
pub mod verdict;

pub use error::{Error, Result};
pub use lattice::{ExcDivLattice, PicClass};
pub use model::{PrimeDivisor, ResolutionData};
pub use rational::Rational;
pub use verdict::{ContributionVerdict, Method, Verdict};
