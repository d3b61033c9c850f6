//! Slopes and Harder–Narasimhan verdicts for triangular φ-modules of rank at
//! most 2 with scalar Frobenius on the diagonal.

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, Q};
use crate::series::LaurentSeries;
use crate::trianguline::TriParam;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularPhiModule {
    pub lambda1: PadicScalar,
    pub lambda2: Option<PadicScalar>,
    pub off_diagonal: Option<LaurentSeries>,
    pub param: Option<TriParam>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FiltrationKind {
    Explicit,
    ExchangeNeeded,
    Isocline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Etale {
    True,
    False,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnVerdict {
    /// Reported slopes in ascending order; `None` when not determined.
    pub slopes: Option<Vec<Q>>,
    pub filtration: FiltrationKind,
    pub etale: Etale,
}

fn nonzero_slope(x: &PadicScalar) -> Result<Q> {
    if x.is_zero_within_precision() {
        return Err(Error::Precondition("diagonal Frobenius scalars must be nonzero".into()));
    }
    x.val()
}

impl TriangularPhiModule {
    pub fn rank_one(lambda: PadicScalar) -> Result<Self> {
        nonzero_slope(&lambda)?;
        Ok(TriangularPhiModule { lambda1: lambda, lambda2: None, off_diagonal: None, param: None })
    }

    pub fn rank_two(l1: PadicScalar, l2: PadicScalar, off_diagonal: LaurentSeries, param: Option<TriParam>) -> Result<Self> {
        nonzero_slope(&l1)?;
        nonzero_slope(&l2)?;
        Ok(TriangularPhiModule { lambda1: l1, lambda2: Some(l2), off_diagonal: Some(off_diagonal), param })
    }

    /// The rank-2 extension attached to a parameter, with `λ_i = δ_i(p)`.
    pub fn from_param(s: TriParam, off_diagonal: LaurentSeries) -> Result<Self> {
        Self::rank_two(s.d1.c_p, s.d2.c_p, off_diagonal, Some(s))
    }

    pub fn rank(&self) -> usize {
        if self.lambda2.is_some() {
            2
        } else {
            1
        }
    }

    pub fn slope_rank1(&self) -> Result<Q> {
        if self.rank() != 1 {
            return Err(Error::RankMismatch("slope_rank1 needs rank 1".into()));
        }
        nonzero_slope(&self.lambda1)
    }

    pub fn hn_verdict(&self) -> Result<HnVerdict> {
        let u1 = nonzero_slope(&self.lambda1)?;
        let zero = Q::from_integer(0);
        let etale_if = |b: bool| if b { Etale::True } else { Etale::False };
        let u2 = match &self.lambda2 {
            None => {
                return Ok(HnVerdict { slopes: Some(vec![u1]), filtration: FiltrationKind::Isocline, etale: etale_if(u1 == zero) })
            }
            Some(l2) => nonzero_slope(l2)?,
        };
        if u1 < u2 {
            return Ok(HnVerdict { slopes: Some(vec![u1, u2]), filtration: FiltrationKind::Explicit, etale: Etale::False });
        }
        if u1 == u2 {
            return Ok(HnVerdict { slopes: Some(vec![u1, u2]), filtration: FiltrationKind::Isocline, etale: etale_if(u1 == zero) });
        }
        let irreducible = match &self.param {
            Some(s) => s.classify().map(|c| c.is_irreducible()).unwrap_or(false),
            None => false,
        };
        if irreducible {
            let mid = (u1 + u2) / 2;
            Ok(HnVerdict { slopes: Some(vec![mid, mid]), filtration: FiltrationKind::Isocline, etale: etale_if(u1 + u2 == zero) })
        } else {
            Ok(HnVerdict { slopes: None, filtration: FiltrationKind::ExchangeNeeded, etale: Etale::Undetermined })
        }
    }
}

/// Necessary conditions for the extension attached to `s` to be étale.
pub fn etale_constraints(s: &TriParam) -> Result<bool> {
    let u1 = s.d1.slope()?;
    let u2 = s.d2.slope()?;
    Ok(u1 + u2 == Q::from_integer(0) && u1 >= Q::from_integer(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trianguline::{unramified_with_slope, CharacterP};

    const P: u64 = 7;

    fn lam(v: Q) -> PadicScalar {
        let s = PadicScalar::p_power(P, v, 10);
        s.mul(&PadicScalar::from_int(P, 3, 10).with_ramification(s.e()).unwrap()).unwrap()
    }

    fn off() -> LaurentSeries {
        LaurentSeries::parse("1 + X", P, 4, 10).unwrap()
    }

    #[test]
    fn rank_one_slopes() {
        let m = TriangularPhiModule::rank_one(PadicScalar::from_int(P, 1, 10)).unwrap();
        assert_eq!(m.slope_rank1().unwrap(), Q::from_integer(0));
        let m = TriangularPhiModule::rank_one(PadicScalar::from_int(P, 7, 10)).unwrap();
        assert_eq!(m.slope_rank1().unwrap(), Q::from_integer(1));
        let m = TriangularPhiModule::rank_one(PadicScalar::from_ratio(P, 49, 3, 10).unwrap()).unwrap();
        assert_eq!(m.slope_rank1().unwrap(), Q::from_integer(2));
    }

    #[test]
    fn rank_two_verdicts() {
        let z = Q::from_integer(0);
        let flat = TriangularPhiModule::rank_two(lam(z), lam(z), off(), None).unwrap();
        let v = flat.hn_verdict().unwrap();
        assert_eq!((v.filtration, v.etale), (FiltrationKind::Isocline, Etale::True));
        let up = TriangularPhiModule::rank_two(lam(Q::from_integer(-1)), lam(Q::from_integer(1)), off(), None).unwrap();
        let v = up.hn_verdict().unwrap();
        assert_eq!(v.slopes, Some(vec![Q::from_integer(-1), Q::from_integer(1)]));
        assert_eq!((v.filtration, v.etale), (FiltrationKind::Explicit, Etale::False));
        let down = TriangularPhiModule::rank_two(lam(Q::from_integer(1)), lam(Q::from_integer(-1)), off(), None).unwrap();
        assert_eq!(down.hn_verdict().unwrap().filtration, FiltrationKind::ExchangeNeeded);
    }

    #[test]
    fn irreducible_parameter_gives_etale() {
        let d1 = unramified_with_slope(P, Q::from_integer(1), 1, 10).unwrap();
        let d2 = CharacterP::x_power(P, -3).mul(&unramified_with_slope(P, Q::from_integer(2), 1, 10).unwrap()).unwrap();
        let s = TriParam::new(d1, d2, None).unwrap();
        assert!(etale_constraints(&s).unwrap());
        let m = TriangularPhiModule::from_param(s, off()).unwrap();
        let v = m.hn_verdict().unwrap();
        assert_eq!(v.slopes, Some(vec![Q::from_integer(0); 2]));
        assert_eq!((v.filtration, v.etale), (FiltrationKind::Isocline, Etale::True));
    }
}
