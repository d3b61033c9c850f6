//! Continuous characters of `Q_p^×` and the trianguline parameter space.
//!
//! A character is stored as `(c_p, j, s)`: its value at `p`, the exponent of
//! the Teichmüller character on `F_p^×`, and the wild weight, so that
//! `δ(p^k · ζ · ⟨u⟩) = c_p^k · ζ^j · exp(s · log⟨u⟩)`.

use crate::arith;
use crate::error::{Error, Result};
use crate::padic::{PadicScalar, Valuation, Q};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterP {
    pub c_p: PadicScalar,
    pub j: u64,
    pub s: PadicScalar,
}

/// Whether a scalar is a rational integer, decided by rational reconstruction
/// at the stored precision.
pub fn integer_value(x: &PadicScalar) -> Result<Option<i64>> {
    if x.is_exact_zero() {
        return Ok(Some(0));
    }
    match x.valuation() {
        Valuation::Finite(v) if !v.is_integer() || v < Q::from_integer(0) => return Ok(None),
        _ => {}
    }
    match x.rational_reconstruction()? {
        Some((n, 1)) => Ok(Some(n as i64)),
        Some(_) => Ok(None),
        None => Err(Error::precision("cannot decide whether the weight is an integer")),
    }
}

fn exact(p: u64, n: i128) -> PadicScalar {
    PadicScalar::from_int(p, n, arith::max_precision(p))
}

impl CharacterP {
    pub fn new(c_p: PadicScalar, j: i64, s: PadicScalar) -> Result<Self> {
        let p = c_p.p();
        if p == 2 {
            return Err(Error::Precondition("characters are modelled for odd p".into()));
        }
        if s.p() != p {
            return Err(Error::PrimeMismatch(p, s.p()));
        }
        if c_p.is_zero_within_precision() {
            return Err(Error::Precondition("value at p must be nonzero".into()));
        }
        let bound = Q::new(1, p as i64 - 1) - 1;
        if let Some(v) = s.valuation().lower() {
            if v <= bound {
                return Err(Error::Precondition(format!("weight valuation must exceed {bound}")));
            }
        }
        Ok(CharacterP { c_p, j: j.rem_euclid(p as i64 - 1) as u64, s })
    }

    pub fn p(&self) -> u64 {
        self.c_p.p()
    }

    pub fn trivial(p: u64) -> Self {
        Self::x_power(p, 0)
    }

    /// `x ↦ x^k`.
    pub fn x_power(p: u64, k: i64) -> Self {
        Self::new(exact(p, 1).shift(k), k, exact(p, k as i128)).unwrap()
    }

    /// `x ↦ |x|`.
    pub fn norm(p: u64) -> Self {
        Self::new(exact(p, 1).shift(-1), 0, PadicScalar::zero(p)).unwrap()
    }

    /// `x ↦ x|x|`.
    pub fn x_norm(p: u64) -> Self {
        Self::x_power(p, 1).mul(&Self::norm(p)).unwrap()
    }

    /// Unramified character sending `p` to `c`.
    pub fn unramified(c: PadicScalar) -> Result<Self> {
        Self::new(c, 0, PadicScalar::zero(c.p()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p() != other.p() {
            return Err(Error::PrimeMismatch(self.p(), other.p()));
        }
        let p = self.p();
        Ok(CharacterP {
            c_p: self.c_p.mul(&other.c_p)?,
            j: (self.j + other.j) % (p - 1),
            s: self.s.add(&other.s)?,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        let p = self.p();
        Ok(CharacterP { c_p: self.c_p.inv()?, j: (p - 1 - self.j) % (p - 1), s: self.s.neg() })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let p = self.p();
        Ok(CharacterP {
            c_p: self.c_p.pow(k)?,
            j: (self.j as i64 * k).rem_euclid(p as i64 - 1) as u64,
            s: self.s.mul(&exact(p, k as i128))?,
        })
    }

    /// Weight: the logarithmic derivative on units.
    pub fn weight(&self) -> PadicScalar {
        self.s
    }

    /// Slope: the valuation of the value at `p`.
    pub fn slope(&self) -> Result<Q> {
        self.c_p.val()
    }

    pub fn agrees(&self, other: &Self) -> bool {
        self.j == other.j && self.c_p.agrees(&other.c_p) && self.s.agrees(&other.s)
    }

    /// Value on a nonzero unramified scalar.
    pub fn eval(&self, a: &PadicScalar) -> Result<PadicScalar> {
        let p = self.p();
        if a.e() != 1 {
            return Err(Error::UnsupportedRamification("characters are evaluated on Q_p^×".into()));
        }
        let k = a.val()?.to_integer();
        let u = a.shift(-k);
        let prec = u.rel_prec().unwrap_or(arith::max_precision(p));
        let zeta = arith::teichmuller(u.residue()?, p, prec);
        let zeta = PadicScalar::from_int(p, zeta as i128, prec);
        let tame = zeta.pow(self.j as i64)?;
        let principal = u.div(&zeta)?;
        let wild = match integer_value(&self.s) {
            Ok(Some(n)) if self.s.e() == 1 => principal.pow(n)?,
            _ => self.s.mul(&principal.log()?)?.exp()?,
        };
        self.c_p.pow(k)?.mul(&tame)?.mul(&wild)
    }
}

impl fmt::Display for CharacterP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c_p = {}, j = {}, s = {})", self.c_p, self.j, self.s)
    }
}

/// Shapes of `δ₁δ₂⁻¹` for which the extension space is 2-dimensional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "i", rename_all = "snake_case")]
pub enum SpecialPair {
    /// `x^{-i}`, `i >= 0`.
    MinusI(u32),
    /// `|x| x^i`, `i >= 1`.
    AbsI(u32),
    No,
}

pub fn is_special_pair(eta: &CharacterP) -> Result<SpecialPair> {
    let p = eta.p();
    let n = match integer_value(&eta.s)? {
        Some(n) => n,
        None => return Ok(SpecialPair::No),
    };
    let tame_ok = eta.j as i64 == n.rem_euclid(p as i64 - 1);
    if !tame_ok {
        return Ok(SpecialPair::No);
    }
    let (target, shape) = if n <= 0 {
        (n, SpecialPair::MinusI((-n) as u32))
    } else {
        (n - 1, SpecialPair::AbsI(n as u32))
    };
    let expected = exact(p, 1).shift(target);
    if eta.c_p.agrees(&expected) {
        Ok(shape)
    } else {
        Ok(SpecialPair::No)
    }
}

/// Dimension of `Ext¹(R(δ₂), R(δ₁))`.
pub fn ext_dim(d1: &CharacterP, d2: &CharacterP) -> Result<u32> {
    Ok(match is_special_pair(&d1.div(d2)?)? {
        SpecialPair::No => 1,
        _ => 2,
    })
}

/// A point `(δ₁, δ₂, ℒ)`; `l = None` stands for `ℒ = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriParam {
    pub d1: CharacterP,
    pub d2: CharacterP,
    pub l: Option<PadicScalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParamClass {
    NotSStar,
    Cris,
    St,
    Ng,
    NotIrrListed,
}

impl ParamClass {
    pub fn is_irreducible(self) -> bool {
        matches!(self, ParamClass::Cris | ParamClass::St | ParamClass::Ng)
    }
}

impl TriParam {
    pub fn new(d1: CharacterP, d2: CharacterP, l: Option<PadicScalar>) -> Result<Self> {
        if d1.p() != d2.p() {
            return Err(Error::PrimeMismatch(d1.p(), d2.p()));
        }
        if l.is_some() && is_special_pair(&d1.div(&d2)?)? == SpecialPair::No {
            return Err(Error::Precondition("a finite invariant needs a special pair".into()));
        }
        Ok(TriParam { d1, d2, l })
    }

    pub fn p(&self) -> u64 {
        self.d1.p()
    }

    pub fn weight(&self) -> Result<PadicScalar> {
        self.d1.s.sub(&self.d2.s)
    }

    pub fn classify(&self) -> Result<ParamClass> {
        let u1 = self.d1.slope()?;
        let u2 = self.d2.slope()?;
        let zero = Q::from_integer(0);
        if u1 + u2 != zero || u1 <= zero {
            return Ok(ParamClass::NotSStar);
        }
        match integer_value(&self.weight()?)? {
            Some(w) if w >= 1 => {
                if u1 < Q::from_integer(w) {
                    Ok(if self.l.is_none() { ParamClass::Cris } else { ParamClass::St })
                } else {
                    Ok(ParamClass::NotIrrListed)
                }
            }
            _ => Ok(ParamClass::Ng),
        }
    }

    /// `(x^w δ₂, x^{-w} δ₁, ∞)` for crystalline parameters.
    pub fn involution(&self) -> Result<Self> {
        if self.classify()? != ParamClass::Cris {
            return Err(Error::NotCrystallineParameter);
        }
        let p = self.p();
        let w = integer_value(&self.weight()?)?.ok_or(Error::NotCrystallineParameter)?;
        Ok(TriParam {
            d1: CharacterP::x_power(p, w).mul(&self.d2)?,
            d2: CharacterP::x_power(p, -w).mul(&self.d1)?,
            l: None,
        })
    }

    /// `(x|x|)⁻¹ δ₁ δ₂⁻¹`.
    pub fn delta_s(&self) -> Result<CharacterP> {
        CharacterP::x_norm(self.p()).inv()?.mul(&self.d1.div(&self.d2)?)
    }

    /// `(x|x|)⁻¹ δ₁ δ₂`.
    pub fn delta_central(&self) -> Result<CharacterP> {
        CharacterP::x_norm(self.p()).inv()?.mul(&self.d1.mul(&self.d2)?)
    }

    pub fn agrees(&self, other: &Self) -> bool {
        let l_ok = match (&self.l, &other.l) {
            (None, None) => true,
            (Some(a), Some(b)) => a.agrees(b),
            _ => false,
        };
        l_ok && self.d1.agrees(&other.d1) && self.d2.agrees(&other.d2)
    }
}

/// Unramified character with value `u · p^v` at `p` (`v` rational).
pub fn unramified_with_slope(p: u64, v: Q, unit: i128, prec: u32) -> Result<CharacterP> {
    let base = PadicScalar::p_power(p, v, prec);
    let u = PadicScalar::from_int(p, unit, prec).with_ramification(base.e())?;
    CharacterP::unramified(base.mul(&u)?)
}
