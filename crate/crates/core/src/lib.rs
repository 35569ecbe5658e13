//! Kinematics of a single-motor, composite-linkage fish tail.
//!
//! The library models carangiform swimming at three levels:
//!
//! * [`bodywave`] — the traveling-wave midline `y(x,t) = A(x) sin(kx + wt)`
//!   with quadratic amplitude envelope, and the ideal sinusoidal tail
//!   targets (peduncle translation, fin rotation) it implies;
//! * [`linkage`] — forward kinematics of the mechanism that realizes the
//!   coupled motion from one motor shaft: phased cranks, chuted linkages,
//!   sliders and two swing arms sharing a pivot, with general, symmetric
//!   and closed-form solver routes plus path tracing;
//! * [`synthesis`] — inverse design of the linkage dimensions from target
//!   motion limits, and least-squares fitting that quantifies how
//!   sinusoidal the mechanism output is;
//! * [`gait`] — batch trajectory generation over frequency/amplitude
//!   grids, measured reference speeds, and Strouhal-number arithmetic.
//!
//! Everything is SI internally (meters, radians, seconds); [`units`] has
//! the conversions front ends use at the boundary. All operations are
//! pure functions over immutable values and safe to call concurrently.

pub mod bodywave;
pub mod gait;
pub mod linkage;
pub mod synthesis;
pub mod units;

mod error;

pub use error::{Error, Result};
