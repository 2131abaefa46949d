//! Random-graph laboratory for the non-concentration of the chromatic number
//! of G(n, 1/2): asymptotic formulas, Poisson tools, exact graph solvers, the
//! conditioned coupling and reproducible experiments.

pub mod asymptotics;
pub mod coupling;
pub mod error;
pub mod graphcore;
pub mod lab;
pub mod poisson;
pub mod real;
pub mod util;

pub use asymptotics::{AsymptoticProfile, LedgerReport, YBoundReport};
pub use error::{Error, Result, Violation};
pub use real::Real;
