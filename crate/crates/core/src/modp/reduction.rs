use super::{ind_decompose, CharModP, Fp2, GaloisSS};
use crate::arith;
use crate::error::{Error, Result};
use crate::padic::{PadicScalar, Valuation, Q};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Outcome of the reduction evaluator for `V_{k,a_p} ⊗ χ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reduction {
    Decided { rep: GaloisSS, case: String },
    /// Either `ind` or `η·μ_λ ⊕ η·μ_{1/λ}` for some unknown `λ`.
    Ambiguous { ind: GaloisSS, split_twist: CharModP, case: String },
    Unknown { reason: String },
}

impl Reduction {
    pub fn is_decided(&self) -> bool {
        matches!(self, Reduction::Decided { .. })
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, Reduction::Decided { rep: GaloisSS::Split { .. }, .. })
    }

    pub fn twist(&self, eta: &CharModP) -> Self {
        match self {
            Reduction::Decided { rep, case } => Reduction::Decided { rep: rep.twist(eta), case: case.clone() },
            Reduction::Ambiguous { ind, split_twist, case } => Reduction::Ambiguous {
                ind: ind.twist(eta),
                split_twist: family_twist(&split_twist.mul(eta)),
                case: case.clone(),
            },
            Reduction::Unknown { reason } => Reduction::Unknown { reason: reason.clone() },
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::Decided { rep, case } => write!(f, "{rep}  [case {case}]"),
            Reduction::Ambiguous { ind, split_twist, case } => {
                write!(f, "{ind} or {split_twist}·μ_λ ⊕ {split_twist}·μ_1/λ (λ UNKNOWN)  [case {case}]")
            }
            Reduction::Unknown { reason } => write!(f, "unknown: {reason}"),
        }
    }
}

/// `η·μ_λ ⊕ η·μ_{1/λ}` over all `λ` only sees `η` up to `μ_{-1}`.
fn family_twist(eta: &CharModP) -> CharModP {
    let other = eta.mul(&CharModP::mu(Fp2::from_int(eta.p(), -1)));
    (*eta).min(other)
}

fn cmp_val(v: &Valuation, q: Q, what: &str) -> Result<Ordering> {
    v.compare(q).ok_or_else(|| Error::precision(format!("cannot compare {what} = {v} with {q}")))
}

fn split_reciprocal(p: u64, c: u64, w: i64) -> Result<GaloisSS> {
    let (l1, l2) = Fp2::reciprocal_pair(&Fp2::from_int(p, c as i128))?;
    let om = CharModP::omega_pow(p, w);
    Ok(GaloisSS::split(om.mul(&CharModP::mu(l1)), om.mul(&CharModP::mu(l2))))
}

fn decided(rep: GaloisSS, case: &str) -> Reduction {
    Reduction::Decided { rep, case: case.into() }
}

/// Reduction mod p of the crystalline representation with weight `k` and
/// trace of Frobenius `a_p`, twisted by `chi` when given.
pub fn reduce_crystalline(p: u64, k: i64, a_p: &PadicScalar, chi: Option<&CharModP>) -> Result<Reduction> {
    if a_p.p() != p {
        return Err(Error::PrimeMismatch(a_p.p(), p));
    }
    if p == 2 {
        return Err(Error::Precondition("p must be odd".into()));
    }
    if k < 2 {
        return Err(Error::BadWeight(k));
    }
    let v = a_p.valuation();
    if cmp_val(&v, Q::from_integer(0), "val(a_p)")? != Ordering::Greater {
        return Err(Error::Precondition("val(a_p) must be positive".into()));
    }
    let pi = p as i64;
    let one = Q::from_integer(1);
    let out = if k <= pi + 1 {
        decided(ind_decompose(p, k - 1), "1")
    } else if k == pi + 2 {
        if cmp_val(&v, one, "val(a_p)")? == Ordering::Less {
            decided(ind_decompose(p, 2), "2a")
        } else {
            let c = a_p.shift(-1).residue()?;
            decided(split_reciprocal(p, c, 1)?, "2b")
        }
    } else if k <= 2 * pi {
        match cmp_val(&v, one, "val(a_p)")? {
            Ordering::Less => decided(ind_decompose(p, k - pi), "3a"),
            Ordering::Equal => {
                let c = a_p.shift(-1).residue()?;
                let lambda = Fp2::from_int(p, c as i128 * (k as i128 - 1));
                let a = CharModP::omega_pow(p, k - 2).mul(&CharModP::mu(lambda));
                let b = CharModP::omega(p).mul(&CharModP::mu(lambda.inv()?));
                decided(GaloisSS::split(a, b), "3b")
            }
            Ordering::Greater => decided(ind_decompose(p, k - 1), "3c"),
        }
    } else if k == 2 * pi + 1 {
        let sq = a_p.mul(a_p)?;
        let pp = PadicScalar::from_int(p, p as i128, arith::max_precision(p));
        let w = sq.val_of_sum(&pp)?;
        if cmp_val(&w, Q::new(3, 2), "val(a_p² + p)")? == Ordering::Less {
            decided(ind_decompose(p, 2), "4a")
        } else {
            let num = sq.add(&pp)?;
            let den = a_p.mul(&PadicScalar::from_int(p, 2 * p as i128, arith::max_precision(p)))?;
            let c = num.div(&den)?.residue()?;
            decided(split_reciprocal(p, c, 1)?, "4b")
        }
    } else {
        let bound = Q::from_integer((k - 2).div_euclid(pi - 1));
        if cmp_val(&v, bound, "val(a_p)")? == Ordering::Greater {
            decided(ind_decompose(p, k - 1), "5a")
        } else if cmp_val(&v, one, "val(a_p)")? == Ordering::Less {
            let t = (k - 1 - 1).rem_euclid(pi - 1) + 1;
            if (k - 3) % (pi - 1) != 0 {
                decided(ind_decompose(p, t), "5b-i")
            } else {
                Reduction::Ambiguous {
                    ind: ind_decompose(p, t),
                    split_twist: family_twist(&CharModP::omega(p)),
                    case: "5b-ii".into(),
                }
            }
        } else {
            Reduction::Unknown { reason: format!("k = {k} with val(a_p) = {v} is outside the known cases") }
        }
    };
    Ok(match chi {
        Some(c) => out.twist(c),
        None => out,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BuzzardReport {
    NotApplicable,
    Consistent,
    Violation,
}

/// For even `k` and a reducible reduction, check that `val(a_p)` is integral.
pub fn buzzard_monitor(k: i64, a_p: &PadicScalar, verdict: &Reduction) -> BuzzardReport {
    if k % 2 != 0 || !verdict.is_reducible() {
        return BuzzardReport::NotApplicable;
    }
    match a_p.valuation() {
        Valuation::Finite(v) if v.is_integer() => BuzzardReport::Consistent,
        Valuation::Finite(_) => BuzzardReport::Violation,
        Valuation::Infinite => BuzzardReport::Consistent,
        Valuation::AtLeast(_) => BuzzardReport::NotApplicable,
    }
}
