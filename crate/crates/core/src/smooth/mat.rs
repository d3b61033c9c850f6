use crate::arith;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rat = Ratio<i128>;

/// A 2×2 matrix over `Q`, rows first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[Rat; 2]; 2]);

impl Mat2 {
    pub fn from_ints(a: i128, b: i128, c: i128, d: i128) -> Self {
        Mat2([[Rat::from_integer(a), Rat::from_integer(b)], [Rat::from_integer(c), Rat::from_integer(d)]])
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> Rat {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn inv(&self) -> Option<Self> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let m = &self.0;
        Some(Mat2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]))
    }

    pub fn scale(&self, s: Rat) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Reduction mod `p` of a `p`-integral matrix.
    pub fn mod_p(&self, p: u64) -> Option<[[u64; 2]; 2]> {
        let r = |x: Rat| reduce_rat(x, p);
        let m = &self.0;
        Some([[r(m[0][0])?, r(m[0][1])?], [r(m[1][0])?, r(m[1][1])?]])
    }
}

/// `v_p` of a rational, `None` for zero.
pub fn val_rat(x: Rat, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(arith::val_i128(*x.numer(), p) as i64 - arith::val_i128(*x.denom(), p) as i64)
}

pub fn p_pow(p: u64, k: i64) -> Rat {
    let base = Rat::from_integer(p as i128);
    if k >= 0 {
        base.pow(k as i32)
    } else {
        Rat::one() / base.pow((-k) as i32)
    }
}

fn reduce_rat(x: Rat, p: u64) -> Option<u64> {
    if val_rat(x, p).is_some_and(|v| v < 0) {
        return None;
    }
    let n = arith::reduce_i128(*x.numer(), p);
    let d = arith::reduce_i128(*x.denom(), p);
    Some(arith::mul_mod(n, arith::inv_mod(d, p)?, p))
}

/// Split `x` into `z + c/p^s` with `z` `p`-integral, `0 ≤ c < p^s`, `p ∤ c`
/// unless `c = 0`.
pub fn frac_part(x: Rat, p: u64) -> (u64, u32) {
    let s = arith::val_i128(*x.denom(), p);
    if s == 0 {
        return (0, 0);
    }
    let ps = arith::ipow(p, s);
    let d0 = *x.denom() / ps as i128;
    let c = arith::mul_mod(
        arith::reduce_i128(*x.numer(), ps),
        arith::inv_mod(arith::reduce_i128(d0, ps), ps).expect("cofactor is prime to p"),
        ps,
    );
    (c, s)
}
