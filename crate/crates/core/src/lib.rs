//! Statevector simulation of Grover search and of quantum period finding,
//! with the information geometry of the paths they trace.
//!
//! * [`state`]: dense statevectors, oracle phase flips, inversion about the
//!   average, the Fourier transform and seeded projective measurement.
//! * [`grover`]: Grover search by recursion, by its analytic path and by
//!   simulation, and the embedding `φ_j = (2j+1)θ` of the discrete steps.
//! * [`geometry`]: Fisher information along paths, the Fubini-Study
//!   distance, the Fisher action and the geodesic equations.
//! * [`period`]: order finding by Fourier projection and by an
//!   amplification loop, factoring, and the comparison report.
//! * [`experiments`] and [`output`]: the file-oriented runs behind the CLI.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod grover;
pub mod number;
pub mod output;
pub mod path;
pub mod period;
pub mod state;

pub use error::{Error, Result};
pub use geometry::{FisherSample, GeodesicState};
pub use grover::{run_grover, GroverInstance, RecursionState};
pub use path::{PathSample, ProbabilityPath};
pub use period::{Method, PeriodInstance, PeriodResult};
pub use state::{ProbabilityDistribution, Register, RegisterShape, StateVector};
