//! Exact partition-function machinery for bounded-degree graphs.
//!
//! Coefficients of the matching polynomial, the independence polynomial and
//! the Potts partition function are computed as exact integers; every
//! observable, probability and LP quantity is an exact rational. The only
//! place a transcendental function appears is the Gaussian density in
//! [`llt`], which is evaluated in high-precision fixed point.

pub mod distance;
pub mod error;
pub mod exact;
pub mod graph;
pub mod hierarchy;
pub mod hp;
pub mod llt;
pub mod localview;
pub mod lp;
pub mod observables;
pub mod polys;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{BigRat, RatPoly};
pub use graph::{CanonicalForm, Graph, RootedBall};
pub use polys::{CoefVector, Kind};
