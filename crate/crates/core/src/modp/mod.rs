//! Semisimple mod-p representations on both sides, the correspondence
//! between them, and the known reductions of crystalline representations.

mod correspond;
mod field;
mod galois;
mod reduction;

pub use correspond::{correspond, pi_normal_form, pi_semisimplify, Atom, CentralCharacter, Gl2SS};
pub use field::{least_non_residue, Fp2};
pub use galois::{ind_decompose, rho_normal_form, GaloisSS};
pub use reduction::{buzzard_monitor, reduce_crystalline, BuzzardReport, Reduction};

use serde::{Deserialize, Serialize};
use std::fmt;

/// `ω^t · μ_λ`: a character of `Q_p^×` (equivalently of the Galois group)
/// with values in `F_{p²}^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharModP {
    pub t: u64,
    pub lambda: Fp2,
}

impl CharModP {
    pub fn new(lambda: Fp2, t: i64) -> Self {
        assert!(!lambda.is_zero(), "unramified part must be nonzero");
        CharModP { t: t.rem_euclid(lambda.p as i64 - 1) as u64, lambda }
    }

    pub fn p(&self) -> u64 {
        self.lambda.p
    }

    pub fn trivial(p: u64) -> Self {
        Self::new(Fp2::one(p), 0)
    }

    pub fn omega(p: u64) -> Self {
        Self::new(Fp2::one(p), 1)
    }

    pub fn omega_pow(p: u64, t: i64) -> Self {
        Self::new(Fp2::one(p), t)
    }

    pub fn mu(lambda: Fp2) -> Self {
        Self::new(lambda, 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        CharModP { t: (self.t + o.t) % (self.p() - 1), lambda: self.lambda.mul(&o.lambda) }
    }

    pub fn inv(&self) -> Self {
        let p = self.p();
        CharModP { t: (p - 1 - self.t) % (p - 1), lambda: self.lambda.inv().unwrap() }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { *self };
        let k = k.unsigned_abs();
        CharModP { t: (base.t * (k % (self.p() - 1))) % (self.p() - 1), lambda: base.lambda.pow(k) }
    }
}

impl fmt::Display for CharModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.t {
            0 => String::new(),
            1 => "ω".into(),
            t => format!("ω^{t}"),
        };
        let m = match self.lambda {
            l if l == Fp2::one(self.p()) => String::new(),
            l if l.in_prime_field() => format!("μ_{l}"),
            l => format!("μ_({l})"),
        };
        match (w.is_empty(), m.is_empty()) {
            (true, true) => write!(f, "1"),
            (false, false) => write!(f, "{w}·{m}"),
            _ => write!(f, "{w}{m}"),
        }
    }
}
