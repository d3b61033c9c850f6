use super::PadicScalar;
use crate::arith;
use crate::error::{Error, Result};
use crate::Q;

fn exact_int(p: u64, n: i128) -> PadicScalar {
    PadicScalar::from_int(p, n, arith::max_precision(p))
}

fn abs_bound(x: &PadicScalar) -> i64 {
    match x.abs_prec() {
        Some(a) => a.floor().to_integer(),
        None => arith::max_precision(x.p()) as i64,
    }
}

impl PadicScalar {
    /// `log(x)` for `x ≡ 1 mod p`, unramified, `p` odd.
    pub fn log(&self) -> Result<PadicScalar> {
        let p = self.p();
        if self.e() != 1 || p == 2 {
            return Err(Error::Precondition("logarithm needs an unramified scalar and odd p".into()));
        }
        let y = self.sub(&exact_int(p, 1))?;
        let v = match y.valuation().lower() {
            None => return Ok(PadicScalar::zero(p)),
            Some(v) => v,
        };
        if v < Q::from_integer(1) {
            return Err(Error::Precondition("logarithm argument is not 1 mod p".into()));
        }
        let target = abs_bound(&y);
        let v = v.floor().to_integer();
        let mut acc = PadicScalar::zero(p);
        let mut power = y;
        let mut k: i64 = 1;
        while k * v - (arith::val_u64(k as u64, p) as i64) < target {
            let term = power.div(&exact_int(p, k as i128))?;
            acc = if k % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
            power = power.mul(&y)?;
            k += 1;
        }
        Ok(acc)
    }

    /// `exp(z)` for `val(z) >= 1`, unramified, `p` odd.
    pub fn exp(&self) -> Result<PadicScalar> {
        let p = self.p();
        if self.e() != 1 || p == 2 {
            return Err(Error::Precondition("exponential needs an unramified scalar and odd p".into()));
        }
        let one = exact_int(p, 1);
        let v = match self.valuation().lower() {
            None => return Ok(one),
            Some(v) => v,
        };
        if v < Q::from_integer(1) {
            return Err(Error::Precondition("exponential argument is not divisible by p".into()));
        }
        let target = abs_bound(self);
        let mut acc = one;
        let mut term = one;
        let mut k: i64 = 1;
        // val(z^k/k!) >= k(v - 1/(p-1)).
        let rate = v - Q::new(1, p as i64 - 1);
        while Q::from_integer(k - 1) * rate < Q::from_integer(target) {
            term = term.mul(self)?.div(&exact_int(p, k as i128))?;
            acc = acc.add(&term)?;
            k += 1;
        }
        Ok(acc)
    }
}
