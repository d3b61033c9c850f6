//! Frobenius, its left inverse ψ, and the action of `Γ ≅ Z_p^×` on series.

use crate::arith::{self, add_mod, ipow, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::series::{binomial_power, mul_trunc, power_series_inverse, LaurentSeries};
use serde::{Deserialize, Serialize};

/// An element of `Z_p^×` known modulo `p^prec`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaUnit {
    pub rep: u64,
    pub prec: u32,
}

impl GammaUnit {
    pub fn new(p: u64, rep: i128, prec: u32) -> Result<Self> {
        if prec == 0 || prec > arith::max_precision(p) {
            return Err(Error::Precondition(format!("unit precision {prec} out of range")));
        }
        let rep = arith::reduce_i128(rep, ipow(p, prec));
        if rep % p == 0 {
            return Err(Error::Precondition("not a p-adic unit".into()));
        }
        Ok(GammaUnit { rep, prec })
    }

    pub fn mul(&self, other: &Self, p: u64) -> Self {
        let prec = self.prec.min(other.prec);
        let m = ipow(p, prec);
        GammaUnit { rep: mul_mod(self.rep % m, other.rep % m, m), prec }
    }

    pub fn inv(&self, p: u64) -> Self {
        let m = ipow(p, self.prec);
        GammaUnit { rep: arith::inv_mod(self.rep, m).unwrap(), prec: self.prec }
    }

    pub fn pow(&self, n: u64, p: u64) -> Self {
        GammaUnit { rep: arith::pow_mod(self.rep, n, ipow(p, self.prec)), prec: self.prec }
    }

    /// Teichmüller lift of the least primitive root mod `p`.
    pub fn tame_generator(p: u64, prec: u32) -> Self {
        GammaUnit { rep: arith::teichmuller(arith::primitive_root(p), p, prec), prec }
    }

    pub fn wild_generator(p: u64, prec: u32) -> Self {
        GammaUnit { rep: (1 + p) % ipow(p, prec), prec }
    }

    /// Write `self = ζ^i · (1+p)^n` with `ζ` the tame generator; `n` is
    /// determined modulo `p^(prec-1)`.
    pub fn decompose(&self, p: u64) -> (u64, u64) {
        let m = ipow(p, self.prec);
        let zeta = Self::tame_generator(p, self.prec).rep;
        let g = zeta % p;
        let i = (0..p - 1).find(|&i| arith::pow_mod(g, i, p) == self.rep % p).unwrap();
        let w = mul_mod(self.rep, arith::inv_mod(arith::pow_mod(zeta, i, m), m).unwrap(), m);
        let mut n = 0u64;
        for k in 0..self.prec.saturating_sub(1) {
            let mk = ipow(p, k + 2).min(m);
            let step = ipow(p, k);
            let d = (0..p)
                .find(|d| arith::pow_mod(1 + p, n + d * step, mk) == w % mk)
                .expect("1+p generates 1+pZ_p for odd p");
            n += d * step;
        }
        (i, n)
    }
}

/// Smallest `t` with `p^t >= k`.
pub fn ceil_log(p: u64, k: i64) -> u32 {
    let mut t = 0;
    let mut acc: i128 = 1;
    while acc < k as i128 {
        acc *= p as i128;
        t += 1;
    }
    t
}

/// `(1+X)^p - 1` as a polynomial.
fn phi_of_x(p: u64, m: u64) -> Vec<u64> {
    let mut v = binomial_power(p as u128, p as usize + 1, m);
    v[0] = 0;
    v
}

/// Multiply a dense polynomial by a short one, no truncation.
fn poly_mul(f: &[u64], g: &[u64], m: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &x) in f.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in g.iter().enumerate() {
            if y != 0 {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, m), m);
            }
        }
    }
    out
}

/// Negative-part coefficients `c_{-j}` for `j >= 1`, indexed by `j`.
fn negative_part(f: &LaurentSeries) -> Vec<u64> {
    let top = f.prec().min(0);
    let lo = f.dmin();
    if lo >= top {
        return Vec::new();
    }
    let mut v = vec![0u64; (-lo + 1) as usize];
    for d in lo..top {
        v[(-d) as usize] = f.coeff(d).unwrap();
    }
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.len() <= 1 {
        Vec::new()
    } else {
        v
    }
}

/// `φ(f)(X) = f((1+X)^p - 1)`.
pub fn frobenius(f: &LaurentSeries) -> LaurentSeries {
    let (p, a, m) = (f.p(), f.a(), f.modulus());
    let n = f.prec();
    let phix = phi_of_x(p, m);
    let out_prec = if n >= 0 {
        if a == 1 {
            p as i64 * n
        } else {
            n
        }
    } else {
        p as i64 * n - (a as i64 - 1) * (p as i64 - 1)
    };

    let mut pos = Vec::new();
    if n > 0 && out_prec > 0 {
        let len = out_prec as usize;
        let mut acc = vec![0u64; len];
        for d in (0..n).rev() {
            let c = f.coeff(d).unwrap();
            if acc.iter().any(|&x| x != 0) {
                acc = mul_trunc(&acc, &phix, len, m);
            }
            acc[0] = add_mod(acc[0], c, m);
        }
        pos = acc;
    }

    // φ(X)^{-1} = Y^p · u(Y)^{-1} with Y = X^{-1} and u exact of Y-degree <= (a-1)(p-1).
    let neg = negative_part(f);
    let mut neg_y: Vec<u64> = Vec::new();
    if !neg.is_empty() {
        let pu = p as usize;
        let mut u = vec![0u64; pu];
        for (j, c) in u.iter_mut().enumerate() {
            *c = phix[pu - j];
        }
        let deg = (a as usize - 1) * (pu - 1) + 1;
        let uinv = power_series_inverse(&u, deg, m).expect("u has constant term 1");
        let mut w = vec![0u64; pu];
        w.extend_from_slice(&uinv);
        for j in (1..neg.len()).rev() {
            if neg_y.is_empty() {
                neg_y = vec![0u64];
            }
            neg_y[0] = add_mod(neg_y[0], neg[j], m);
            neg_y = poly_mul(&neg_y, &w, m);
        }
    }

    let lo = -(neg_y.len() as i64 - 1).max(0);
    let lo = lo.min(out_prec).min(0);
    let mut coeffs = vec![0u64; (out_prec - lo).max(0) as usize];
    for (j, &c) in neg_y.iter().enumerate() {
        let d = -(j as i64);
        if d < out_prec && c != 0 {
            let k = (d - lo) as usize;
            coeffs[k] = add_mod(coeffs[k], c, m);
        }
    }
    for (d, &c) in pos.iter().enumerate() {
        let k = (d as i64 - lo) as usize;
        if k < coeffs.len() {
            coeffs[k] = add_mod(coeffs[k], c, m);
        }
    }
    LaurentSeries::from_raw(p, a, lo, out_prec, coeffs, f.kind()).normalized()
}

/// In-place Taylor shift `P(X) -> P(X + s)` for `s = ±1`.
fn taylor_shift(c: &mut [u64], plus: bool, m: u64) {
    let n = c.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            c[j] = if plus { add_mod(c[j], c[j + 1], m) } else { sub_mod(c[j], c[j + 1], m) };
        }
    }
}

/// ψ of an exact polynomial, via the basis `Y = 1+X` where `ψ(Y^j) = Y^{j/p}`
/// for `p | j` and `0` otherwise.
fn psi_polynomial(poly: &[u64], p: u64, m: u64) -> Vec<u64> {
    let mut c = poly.to_vec();
    taylor_shift(&mut c, false, m);
    let mut out: Vec<u64> = c.iter().step_by(p as usize).copied().collect();
    taylor_shift(&mut out, true, m);
    out
}

/// X-precision of ψ applied to an unknown tail `X^n · O[[X]]` over `Z/p^a`.
pub fn psi_precision(p: u64, a: u32, n: i64) -> i64 {
    if n < 0 {
        return n;
    }
    let (p, a, n) = (p as usize, a as usize, n as usize);
    const INF: i64 = i64::MAX / 4;
    let mut b = vec![vec![0i64; n + 1]; a + 1];
    for mm in 0..=n {
        b[a][mm] = INF;
    }
    for mm in 0..=n {
        for j in 0..a {
            b[j][mm] = if mm < p { 0 } else { (1 + b[j][mm - p]).min(b[j + 1][mm - p + 1]) };
        }
    }
    b[0][n]
}

/// ψ, the left inverse of φ extracting the `i = 0` component of
/// `f = Σ_{i<p} φ(f_i)(1+X)^i`.
pub fn psi(f: &LaurentSeries) -> LaurentSeries {
    let (p, a, m) = (f.p(), f.a(), f.modulus());
    let n = f.prec();
    let out_prec = psi_precision(p, a, n);

    let mut pos = Vec::new();
    if n > 0 {
        let poly: Vec<u64> = (0..n).map(|d| f.coeff(d).unwrap()).collect();
        pos = psi_polynomial(&poly, p, m);
    }

    // ψ(f_neg) = X^{-k} ψ(φ(X)^k f_neg) with φ(X)^k f_neg a polynomial.
    let neg = negative_part(f);
    let mut neg_out: Vec<(i64, u64)> = Vec::new();
    if !neg.is_empty() {
        let k = neg.len() - 1;
        // f_neg · X^k as a polynomial of degree < k.
        let mut g: Vec<u64> = (0..k).map(|i| neg[k - i]).collect();
        let phix_over_x: Vec<u64> = phi_of_x(p, m)[1..].to_vec();
        for _ in 0..k {
            g = poly_mul(&g, &phix_over_x, m);
        }
        let h = psi_polynomial(&g, p, m);
        for (i, &c) in h.iter().enumerate() {
            if c != 0 {
                neg_out.push((i as i64 - k as i64, c));
            }
        }
    }

    let lo = neg_out.first().map_or(0, |t| t.0).min(0).min(out_prec);
    let mut coeffs = vec![0u64; (out_prec - lo).max(0) as usize];
    for (d, c) in neg_out {
        if d < out_prec {
            let k = (d - lo) as usize;
            coeffs[k] = add_mod(coeffs[k], c, m);
        }
    }
    for (d, &c) in pos.iter().enumerate() {
        let d = d as i64;
        if d < out_prec {
            let k = (d - lo) as usize;
            coeffs[k] = add_mod(coeffs[k], c, m);
        }
    }
    LaurentSeries::from_raw(p, a, lo, out_prec, coeffs, f.kind()).normalized()
}

/// `([u]f)(X) = f((1+X)^u - 1)`.
pub fn gamma_act(u: GammaUnit, f: &LaurentSeries) -> Result<LaurentSeries> {
    let (p, a, m) = (f.p(), f.a(), f.modulus());
    if u.rep % p == 0 {
        return Err(Error::Precondition("not a p-adic unit".into()));
    }
    let n = f.prec();
    let depth = (-f.order()).max(0);
    let work = if depth > 0 { n + depth + 1 } else { n };
    let needed = a + ceil_log(p, work.max(1));
    if u.prec < needed {
        return Err(Error::precision(format!(
            "unit known mod p^{} but X-precision {n} needs p^{needed}",
            u.prec
        )));
    }
    let work = work.max(2) as usize;
    let mut s = binomial_power(u.rep as u128, work, m);
    s[0] = 0;

    let mut pos = Vec::new();
    if n > 0 {
        let len = n as usize;
        let s_trunc = &s[..len.min(work)];
        let mut acc = vec![0u64; len];
        for d in (0..n).rev() {
            if acc.iter().any(|&x| x != 0) {
                acc = mul_trunc(&acc, s_trunc, len, m);
            }
            acc[0] = add_mod(acc[0], f.coeff(d).unwrap(), m);
        }
        pos = acc;
    }

    let lo = (-depth).min(n).min(0);
    let mut coeffs = vec![0u64; (n - lo).max(0) as usize];
    if depth > 0 {
        // [u]X^{-j} = X^{-j} w^j with w = (S/X)^{-1}.
        let w_len = work - 1;
        let w = power_series_inverse(&s[1..], w_len, m)?;
        let mut wp = vec![0u64; w_len];
        wp[0] = 1 % m;
        for j in 1..=depth {
            wp = mul_trunc(&wp, &w, w_len, m);
            let c = f.coeff(-j).unwrap_or(0);
            if c == 0 {
                continue;
            }
            for (i, &x) in wp.iter().enumerate() {
                let d = i as i64 - j;
                if d >= n {
                    break;
                }
                let k = (d - lo) as usize;
                coeffs[k] = add_mod(coeffs[k], mul_mod(c, x, m), m);
            }
        }
    }
    for (d, &c) in pos.iter().enumerate() {
        let k = (d as i64 - lo) as usize;
        coeffs[k] = add_mod(coeffs[k], c, m);
    }
    Ok(LaurentSeries::from_raw(p, a, lo, n, coeffs, f.kind()).normalized())
}

/// Default unit precision for a series: `a + ceil(log_p K)` with room for the
/// negative part.
pub fn required_unit_precision(f: &LaurentSeries) -> u32 {
    let depth = (-f.order()).max(0);
    let work = if depth > 0 { f.prec() + depth + 1 } else { f.prec() };
    f.a() + ceil_log(f.p(), work.max(1))
}
