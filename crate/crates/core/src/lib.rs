//! Computational core of the p-adic and mod-p local Langlands toolkit for
//! `GL2(Q_p)`.

pub mod arith;
pub mod error;
pub mod filtered;
pub mod modp;
pub mod padic;
pub mod phigamma;
pub mod series;
pub mod slopes;
pub mod smooth;
pub mod trianguline;

pub use error::{Error, Result};
pub use padic::{quadratic_newton_slopes, PadicScalar, Valuation, Q};
pub use series::{GaussValuation, LaurentSeries, RingKind};
