use super::{CharModP, Fp2};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A two-dimensional semisimple mod-p Galois representation in normal form.
///
/// `Irred { r, chi }` is `ind(ω₂^{r+1}) ⊗ χ` with `0 ≤ r ≤ p-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaloisSS {
    Irred { r: u64, chi: CharModP },
    Split { chars: [CharModP; 2] },
}

impl GaloisSS {
    pub fn irred(r: u64, chi: CharModP) -> Result<Self> {
        let p = chi.p();
        if r > p - 1 {
            return Err(Error::Precondition(format!("r = {r} outside 0..={}", p - 1)));
        }
        let mu = CharModP::mu(Fp2::from_int(p, -1));
        let wr = CharModP::omega_pow(p, r as i64);
        let orbit = [
            (r, chi),
            (r, chi.mul(&mu)),
            (p - 1 - r, chi.mul(&wr)),
            (p - 1 - r, chi.mul(&wr).mul(&mu)),
        ];
        let (r, chi) = *orbit.iter().min().unwrap();
        Ok(GaloisSS::Irred { r, chi })
    }

    pub fn split(a: CharModP, b: CharModP) -> Self {
        GaloisSS::Split { chars: if a <= b { [a, b] } else { [b, a] } }
    }

    pub fn p(&self) -> u64 {
        match self {
            GaloisSS::Irred { chi, .. } => chi.p(),
            GaloisSS::Split { chars } => chars[0].p(),
        }
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self, GaloisSS::Irred { .. })
    }

    pub fn det(&self) -> CharModP {
        match self {
            GaloisSS::Irred { r, chi } => CharModP::omega_pow(chi.p(), *r as i64 + 1).mul(&chi.pow(2)),
            GaloisSS::Split { chars } => chars[0].mul(&chars[1]),
        }
    }

    pub fn twist(&self, eta: &CharModP) -> Self {
        match self {
            GaloisSS::Irred { r, chi } => GaloisSS::irred(*r, chi.mul(eta)).unwrap(),
            GaloisSS::Split { chars } => GaloisSS::split(chars[0].mul(eta), chars[1].mul(eta)),
        }
    }
}

/// `ρ(r, χ)` reduced to its orbit representative.
pub fn rho_normal_form(r: u64, chi: CharModP) -> Result<GaloisSS> {
    GaloisSS::irred(r, chi)
}

/// `ind(ω₂^h)` (with trivial value at `p`), in normal form.
pub fn ind_decompose(p: u64, h: i64) -> GaloisSS {
    let q = p as i64 + 1;
    let hm = h.rem_euclid(q);
    if hm == 0 {
        let m = h.div_euclid(q);
        let i = Fp2::from_int(p, -1).sqrt().expect("-1 is a square in F_p^2");
        let w = CharModP::omega_pow(p, m);
        return GaloisSS::split(w.mul(&CharModP::mu(i)), w.mul(&CharModP::mu(i.neg())));
    }
    let r = (hm - 1) as u64;
    let m = (h - hm).div_euclid(q);
    GaloisSS::irred(r, CharModP::omega_pow(p, m)).unwrap()
}

impl fmt::Display for GaloisSS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisSS::Irred { r, chi } => {
                write!(f, "ind(ω₂^{})", r + 1)?;
                if *chi != CharModP::trivial(chi.p()) {
                    write!(f, "⊗{chi}")?;
                }
                Ok(())
            }
            GaloisSS::Split { chars } => write!(f, "{} ⊕ {}", chars[0], chars[1]),
        }
    }
}
