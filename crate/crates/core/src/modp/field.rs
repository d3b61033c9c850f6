use crate::arith::{self, add_mod, mul_mod, sub_mod};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Element `re + im·s` of `F_{p²} = F_p[s]/(s² - n)`, `n` the least
/// quadratic non-residue mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp2 {
    pub p: u64,
    pub re: u64,
    pub im: u64,
}

pub fn least_non_residue(p: u64) -> u64 {
    (2..p).find(|&n| arith::pow_mod(n, (p - 1) / 2, p) == p - 1).unwrap_or(1)
}

impl Fp2 {
    pub fn new(p: u64, re: i128, im: i128) -> Self {
        Fp2 { p, re: arith::reduce_i128(re, p), im: arith::reduce_i128(im, p) }
    }

    pub fn from_int(p: u64, x: i128) -> Self {
        Self::new(p, x, 0)
    }

    pub fn zero(p: u64) -> Self {
        Self::from_int(p, 0)
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn in_prime_field(&self) -> bool {
        self.im == 0
    }

    pub fn add(&self, o: &Self) -> Self {
        Fp2 { p: self.p, re: add_mod(self.re, o.re, self.p), im: add_mod(self.im, o.im, self.p) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Fp2 { p: self.p, re: sub_mod(self.re, o.re, self.p), im: sub_mod(self.im, o.im, self.p) }
    }

    pub fn neg(&self) -> Self {
        Self::zero(self.p).sub(self)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p;
        let n = if self.im == 0 || o.im == 0 { 0 } else { least_non_residue(p) };
        let re = add_mod(mul_mod(self.re, o.re, p), mul_mod(n, mul_mod(self.im, o.im, p), p), p);
        let im = add_mod(mul_mod(self.re, o.im, p), mul_mod(self.im, o.re, p), p);
        Fp2 { p, re, im }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        let n = least_non_residue(p);
        let norm = sub_mod(mul_mod(self.re, self.re, p), mul_mod(n, mul_mod(self.im, self.im, p), p), p);
        let ni = arith::inv_mod(norm, p).expect("norm of a nonzero element is nonzero");
        Ok(Fp2 { p, re: mul_mod(self.re, ni, p), im: mul_mod(p - self.im % p, ni, p) % p })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// A square root in `F_{p²}`, the one with the smaller `(re, im)`.
    pub fn sqrt(&self) -> Result<Self> {
        let p = self.p;
        if self.is_zero() {
            return Ok(*self);
        }
        // Every element of F_p is a square in F_{p²}.
        if self.in_prime_field() {
            if let Some(r) = (1..p).find(|r| mul_mod(*r, *r, p) == self.re) {
                let a = Fp2::from_int(p, r as i128);
                return Ok(a.min(a.neg()));
            }
            let n = least_non_residue(p);
            let target = mul_mod(self.re, arith::inv_mod(n, p).unwrap(), p);
            let r = (1..p).find(|r| mul_mod(*r, *r, p) == target).unwrap();
            let a = Fp2 { p, re: 0, im: r };
            return Ok(a.min(a.neg()));
        }
        if self.pow((p * p - 1) / 2) != Fp2::one(p) {
            return Err(Error::ResidueFieldTooSmall(format!("{self} has no square root in F_{p}^2")));
        }
        for re in 0..p {
            for im in 0..p {
                let c = Fp2 { p, re, im };
                if c.mul(&c) == *self {
                    return Ok(c);
                }
            }
        }
        unreachable!("Euler criterion guarantees a root")
    }

    /// Roots of `x² - c·x + 1`.
    pub fn reciprocal_pair(c: &Fp2) -> Result<(Fp2, Fp2)> {
        let p = c.p;
        let disc = c.mul(c).sub(&Fp2::from_int(p, 4));
        let root = disc.sqrt()?;
        let half = Fp2::from_int(p, arith::inv_mod(2, p).unwrap() as i128);
        Ok((c.add(&root).mul(&half), c.sub(&root).mul(&half)))
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, 1) => write!(f, "s"),
            (0, i) => write!(f, "{i}s"),
            (r, 1) => write!(f, "{r}+s"),
            (r, i) => write!(f, "{r}+{i}s"),
        }
    }
}
