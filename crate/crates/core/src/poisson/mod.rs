//! Poisson laws: stable log-pmf, total-variation distances and the
//! shifted-set check.

mod pmf;
mod set;
mod shift;
mod tv;

pub use pmf::PoissonSpec;
pub use set::IntervalSet;
pub use shift::{delta_exponent, shifted_mass_check, ShiftedMassCheck};
pub use tv::{tv_empirical, tv_poisson, Tv};
