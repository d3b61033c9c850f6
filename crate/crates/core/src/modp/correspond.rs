use super::{CharModP, Fp2, GaloisSS};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An irreducible constituent of a mod-p smooth representation of `GL₂(Q_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Atom {
    /// `π(r, λ, χ)`, irreducible.
    Pi { r: u64, lambda: Fp2, chi: CharModP },
    /// `Sp ⊗ η∘det`.
    Special { eta: CharModP },
    /// `η∘det`.
    OneDim { eta: CharModP },
}

/// A semisimple representation: a sorted multiset of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gl2SS {
    pub atoms: Vec<Atom>,
}

impl Gl2SS {
    pub fn new(mut atoms: Vec<Atom>) -> Self {
        atoms.sort();
        Gl2SS { atoms }
    }

    /// The common central character, `None` if the atoms disagree.
    pub fn central_character(&self) -> Option<CharModP> {
        let mut it = self.atoms.iter().map(|a| a.central_character());
        let first = it.next()?;
        it.all(|c| c == first).then_some(first)
    }
}

pub trait CentralCharacter {
    fn central_character(&self) -> CharModP;
}

impl CentralCharacter for Atom {
    fn central_character(&self) -> CharModP {
        match self {
            Atom::Pi { r, chi, .. } => CharModP::omega_pow(chi.p(), *r as i64).mul(&chi.pow(2)),
            Atom::Special { eta } | Atom::OneDim { eta } => eta.pow(2),
        }
    }
}

impl Atom {
    pub fn central_character(&self) -> CharModP {
        CentralCharacter::central_character(self)
    }
}

fn check_pi(r: u64, lambda: &Fp2, chi: &CharModP) -> Result<()> {
    let p = chi.p();
    if lambda.p != p {
        return Err(Error::PrimeMismatch(lambda.p, p));
    }
    if r > p - 1 {
        return Err(Error::Precondition(format!("r = {r} outside 0..={}", p - 1)));
    }
    Ok(())
}

fn reducible(p: u64, r: u64, lambda: &Fp2) -> bool {
    (r == 0 || r == p - 1) && (*lambda == Fp2::one(p) || *lambda == Fp2::from_int(p, -1))
}

/// Canonical representative of an irreducible `π(r, λ, χ)`.
pub fn pi_normal_form(r: u64, lambda: Fp2, chi: CharModP) -> Result<Atom> {
    check_pi(r, &lambda, &chi)?;
    let p = chi.p();
    if reducible(p, r, &lambda) {
        return Err(Error::Precondition(format!("π({r}, {lambda}, {chi}) is reducible")));
    }
    let mu = CharModP::mu(Fp2::from_int(p, -1));
    let mut orbit = vec![(r, lambda, chi), (r, lambda.neg(), chi.mul(&mu))];
    if lambda.is_zero() {
        let wr = CharModP::omega_pow(p, r as i64);
        orbit.push((p - 1 - r, lambda, chi.mul(&wr)));
        orbit.push((p - 1 - r, lambda, chi.mul(&wr).mul(&mu)));
    } else if r == 0 || r == p - 1 {
        let r2 = p - 1 - r;
        orbit.push((r2, lambda, chi));
        orbit.push((r2, lambda.neg(), chi.mul(&mu)));
    }
    let (r, lambda, chi) = orbit.into_iter().min_by_key(|(r, l, c)| (*r, *l, *c)).unwrap();
    Ok(Atom::Pi { r, lambda, chi })
}

/// Constituents of `π(r, λ, χ)^ss`.
pub fn pi_semisimplify(r: u64, lambda: Fp2, chi: CharModP) -> Result<Vec<Atom>> {
    check_pi(r, &lambda, &chi)?;
    if reducible(chi.p(), r, &lambda) {
        let eta = chi.mul(&CharModP::mu(lambda));
        return Ok(vec![Atom::OneDim { eta }, Atom::Special { eta }]);
    }
    Ok(vec![pi_normal_form(r, lambda, chi)?])
}

/// The semisimple mod-p correspondence on the Galois side.
pub fn correspond(w: &GaloisSS) -> Result<Gl2SS> {
    match *w {
        GaloisSS::Irred { r, chi } => Ok(Gl2SS::new(vec![pi_normal_form(r, Fp2::zero(chi.p()), chi)?])),
        GaloisSS::Split { chars: [a, b] } => {
            let p = a.p();
            let r = (a.t as i64 - b.t as i64 - 1).rem_euclid(p as i64 - 1) as u64;
            let lambda = a.lambda.div(&b.lambda)?.sqrt()?;
            let chi = b.mul(&CharModP::mu(lambda));
            let r2 = (p as i64 - 3 - r as i64).rem_euclid(p as i64 - 1) as u64;
            let chi2 = CharModP::omega_pow(p, r as i64 + 1).mul(&chi);
            let mut atoms = pi_semisimplify(r, lambda, chi)?;
            atoms.extend(pi_semisimplify(r2, lambda.inv()?, chi2)?);
            Ok(Gl2SS::new(atoms))
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Pi { r, lambda, chi } => write!(f, "π({r}, {lambda}, {chi})"),
            Atom::Special { eta } => write!(f, "Sp⊗{eta}"),
            Atom::OneDim { eta } => write!(f, "{eta}∘det"),
        }
    }
}

impl fmt::Display for Gl2SS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}
