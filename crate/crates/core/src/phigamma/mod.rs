//! Fontaine operators, (φ,Γ)-module data, and ψ-compatible sequences.

mod boxseq;
mod module;
mod ops;

pub use ops::{ceil_log, frobenius, gamma_act, psi, psi_precision, required_unit_precision, GammaUnit};
pub use module::{EtaleVerdict, PhiGammaModule, SeriesMatrix, MODULE_SCHEMA};
pub use boxseq::{B2Elem, BoxSeq, BOX_SCHEMA};
