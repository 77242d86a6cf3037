//! Enumeration and classification of tripods on flat tori.
//!
//! A tripod on `C/Λ` is a Steiner tree whose three endpoints are lattice
//! points. Lifting to the plane with one endpoint at the origin turns each
//! tripod into a pair of lattice vectors `(z, w)`, so counting tripods of
//! length at most `R` becomes a lattice point count in `C²`.
//!
//! * [`exact`]: arithmetic in Q(√3) with exact sign decisions.
//! * [`lattice`]: lattices `Z + Zτ`, coordinates and segment queries.
//! * [`geometry`]: Fermat and Toricelli points, lengths, classification.
//! * [`topology`]: self-intersections and complementary regions on the torus.
//! * [`census`]: the parallel enumeration engine.
//! * [`analytics`]: reference constants and Monte Carlo volume checks.
//!
//! With the default `parallel` feature, data-parallel loops run on rayon;
//! without it every loop runs sequentially with identical results.

pub mod analytics;
pub mod census;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod lattice;
pub mod par;
pub mod scalar;
pub mod topology;

pub use census::{census, CensusConfig, CensusMode, CensusReport};
pub use error::{OverflowError, Result, TripodError};
pub use exact::{QuadraticNumber, RootThreeInt};
pub use geometry::{Tripod, TripodCoords, TripodFlags};
pub use lattice::{LatticeKind, LatticeSpec, LatticeVector};
pub use scalar::{Point2, Scalar};
