//! Truncated Laurent series over `Z/p^a` with dual precision.
//!
//! Coefficients are stored densely on the known window `[dmin, N)`; everything
//! below `dmin` is zero and everything from `N` on is unknown.

use crate::arith::{self, add_mod, ipow, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which completion the series is meant to live in. Carried, not verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RingKind {
    #[default]
    Bounded,
    Overconvergent,
    Robba,
}

impl RingKind {
    fn join(self, other: RingKind) -> Result<RingKind> {
        use RingKind::*;
        match (self, other) {
            (a, b) if a == b => Ok(a),
            (Overconvergent, b) | (b, Overconvergent) => Ok(b),
            (a, b) => Err(Error::RingMismatch(format!("{a:?} with {b:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussValuation {
    Known(u32),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    p: u64,
    a: u32,
    modulus: u64,
    lo: i64,
    prec: i64,
    coeffs: Vec<u64>,
    kind: RingKind,
}

impl LaurentSeries {
    fn check_base(p: u64, a: u32) -> Result<u64> {
        if !arith::is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        if a == 0 || a > arith::max_precision(p) {
            return Err(Error::Precondition(format!("precision a={a} out of range for p={p}")));
        }
        Ok(ipow(p, a))
    }

    /// Build from raw residues on the window `[lo, prec)`.
    pub(crate) fn from_raw(p: u64, a: u32, lo: i64, prec: i64, mut coeffs: Vec<u64>, kind: RingKind) -> Self {
        let modulus = ipow(p, a);
        let lo = lo.min(prec);
        coeffs.resize((prec - lo) as usize, 0);
        for c in coeffs.iter_mut() {
            *c %= modulus;
        }
        LaurentSeries { p, a, modulus, lo, prec, coeffs, kind }
    }

    pub fn zero(p: u64, a: u32, prec: i64) -> Result<Self> {
        Self::check_base(p, a)?;
        Ok(Self::from_raw(p, a, prec, prec, Vec::new(), RingKind::Bounded))
    }

    /// From `(degree, integer coefficient)` pairs; the window starts at the
    /// smallest listed degree.
    pub fn from_terms(p: u64, a: u32, terms: &[(i64, i128)], prec: i64) -> Result<Self> {
        let dmin = terms.iter().map(|t| t.0).min().unwrap_or(prec);
        Self::from_terms_with_dmin(p, a, terms, prec, dmin)
    }

    pub fn from_terms_with_dmin(p: u64, a: u32, terms: &[(i64, i128)], prec: i64, dmin: i64) -> Result<Self> {
        let m = Self::check_base(p, a)?;
        let lo = dmin.min(prec);
        let mut coeffs = vec![0u64; (prec - lo) as usize];
        for &(d, c) in terms {
            if d >= prec {
                return Err(Error::Precondition(format!("degree {d} is not below N = {prec}")));
            }
            if d < lo {
                return Err(Error::Precondition(format!("degree {d} is below dmin = {dmin}")));
            }
            let i = (d - lo) as usize;
            coeffs[i] = add_mod(coeffs[i], arith::reduce_i128(c, m), m);
        }
        Ok(Self::from_raw(p, a, lo, prec, coeffs, RingKind::Bounded))
    }

    pub fn monomial(p: u64, a: u32, deg: i64, c: i128, prec: i64) -> Result<Self> {
        Self::from_terms(p, a, &[(deg, c)], prec)
    }

    pub fn one(p: u64, a: u32, prec: i64) -> Result<Self> {
        Self::monomial(p, a, 0, 1, prec)
    }

    pub fn x(p: u64, a: u32, prec: i64) -> Result<Self> {
        Self::monomial(p, a, 1, 1, prec)
    }

    /// `(1+X)^k` for any integer `k`, to X-precision `prec >= 0`.
    pub fn one_plus_x_pow(p: u64, a: u32, k: i64, prec: i64) -> Result<Self> {
        let m = Self::check_base(p, a)?;
        let n = prec.max(0) as usize;
        let coeffs = if k >= 0 {
            binomial_power(k as u128, n, m)
        } else {
            // (1+X)^{-1} = Σ (-X)^i, then raise to |k|.
            let mut inv = vec![0u64; n];
            for (i, c) in inv.iter_mut().enumerate() {
                *c = if i % 2 == 0 { 1 % m } else { m - 1 };
            }
            series_pow(&inv, k.unsigned_abs() as u128, n, m)
        };
        Ok(Self::from_raw(p, a, 0, prec, coeffs, RingKind::Bounded).normalized())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// X-precision `N`.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Lower support bound.
    pub fn dmin(&self) -> i64 {
        self.lo
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: RingKind) -> Self {
        self.kind = kind;
        self
    }

    /// Coefficient of `X^d`, `None` when `d >= N`.
    pub fn coeff(&self, d: i64) -> Option<u64> {
        if d >= self.prec {
            None
        } else if d < self.lo {
            Some(0)
        } else {
            Some(self.coeffs[(d - self.lo) as usize])
        }
    }

    /// Nonzero `(degree, residue)` pairs in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }

    pub fn lowest_nonzero(&self) -> Option<i64> {
        self.coeffs.iter().position(|&c| c != 0).map(|i| self.lo + i as i64)
    }

    /// The X-adic valuation as far as it is known: lowest nonzero degree or `N`.
    pub fn order(&self) -> i64 {
        self.lowest_nonzero().unwrap_or(self.prec)
    }

    pub fn is_zero_within_precision(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Raise `dmin` to the lowest nonzero degree.
    pub fn normalized(mut self) -> Self {
        let skip = self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.coeffs.len());
        if skip > 0 {
            self.coeffs.drain(..skip);
            self.lo += skip as i64;
        }
        self
    }

    /// Forget coefficients of degree `>= n`.
    pub fn truncate(&self, n: i64) -> Self {
        if n >= self.prec {
            return self.clone();
        }
        let lo = self.lo.min(n);
        let keep = (n - lo) as usize;
        let coeffs = self.coeffs.iter().take(keep).copied().collect();
        Self::from_raw(self.p, self.a, lo, n, coeffs, self.kind)
    }

    /// Reduce coefficients modulo `p^a2` for `a2 <= a`.
    pub fn reduce_mod(&self, a2: u32) -> Self {
        if a2 >= self.a {
            return self.clone();
        }
        Self::from_raw(self.p, a2, self.lo, self.prec, self.coeffs.clone(), self.kind)
    }

    fn context(&self, other: &Self) -> Result<(u32, RingKind)> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok((self.a.min(other.a), self.kind.join(other.kind)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_signed(other, true)
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Result<Self> {
        let (a, kind) = self.context(other)?;
        let m = ipow(self.p, a);
        let prec = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo).min(prec);
        let mut coeffs = vec![0u64; (prec - lo) as usize];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let d = lo + i as i64;
            let x = self.coeff(d).unwrap() % m;
            let y = other.coeff(d).unwrap() % m;
            *c = if negate { sub_mod(x, y, m) } else { add_mod(x, y, m) };
        }
        Ok(Self::from_raw(self.p, a, lo, prec, coeffs, kind).normalized())
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        let coeffs = self.coeffs.iter().map(|&c| arith::neg_mod(c, m)).collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, kind) = self.context(other)?;
        let m = ipow(self.p, a);
        let vf = self.order();
        let vg = other.order();
        let prec = (self.prec + vg).min(other.prec + vf);
        let lo = (vf + vg).min(prec);
        let len = (prec - lo) as usize;
        let mut coeffs = vec![0u64; len];
        let fs: Vec<(i64, u64)> = self.terms().collect();
        let gs: Vec<(i64, u64)> = other.terms().collect();
        for &(i, x) in &fs {
            for &(j, y) in &gs {
                let d = i + j;
                if d >= prec {
                    break;
                }
                let k = (d - lo) as usize;
                coeffs[k] = add_mod(coeffs[k], mul_mod(x % m, y % m, m), m);
            }
        }
        Ok(Self::from_raw(self.p, a, lo, prec, coeffs, kind).normalized())
    }

    /// Multiply by a residue `c mod p^a`.
    pub fn scale(&self, c: i128) -> Self {
        let m = self.modulus;
        let c = arith::reduce_i128(c, m);
        let coeffs = self.coeffs.iter().map(|&x| mul_mod(x, c, m)).collect();
        Self::from_raw(self.p, self.a, self.lo, self.prec, coeffs, self.kind).normalized()
    }

    /// Multiply by an integral scalar of `Z_p`; the coefficient precision drops
    /// to the scalar's absolute precision when that is smaller than `a`.
    pub fn scale_scalar(&self, s: &PadicScalar) -> Result<Self> {
        if s.p() != self.p {
            return Err(Error::PrimeMismatch(self.p, s.p()));
        }
        if s.is_exact_zero() {
            return Ok(Self::zero(self.p, self.a, self.prec)?.with_kind(self.kind));
        }
        let (n, k) = s.integer_approximation()?;
        let a = self.a.min(k.max(1));
        if k == 0 {
            return Err(Error::precision("scalar known only modulo p^0"));
        }
        Ok(self.reduce_mod(a).scale(n))
    }

    /// Multiply by `X^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { lo: self.lo + k, prec: self.prec + k, ..self.clone() }
    }

    /// Coefficientwise agreement on the common known range and common `a`.
    pub fn agrees(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        let m = ipow(self.p, self.a.min(other.a));
        let hi = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo);
        (lo..hi).all(|d| self.coeff(d).unwrap() % m == other.coeff(d).unwrap() % m)
    }

    pub fn gauss_valuation(&self) -> Result<GaussValuation> {
        if self.coeffs.is_empty() {
            return Err(Error::ZeroWithinPrecision);
        }
        Ok(self
            .coeffs
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| arith::val_u64(c, self.p))
            .min()
            .map_or(GaussValuation::Unknown, GaussValuation::Known))
    }

    /// Multiplicative inverse when the series is a unit of `O_E / p^a`,
    /// i.e. some coefficient is prime to `p`.
    pub fn inverse(&self) -> Result<Self> {
        let m = self.modulus;
        let p = self.p;
        let k = match self.terms().find(|&(_, c)| c % p != 0) {
            Some((d, _)) => d,
            None => return Err(Error::Precondition("series is not a unit of O_E/p^a".into())),
        };
        // f = A + B with A = X^k·(unit power series), B the p-divisible part below k.
        let n = (self.prec - k) as usize;
        let a_part: Vec<u64> = (0..n).map(|i| self.coeff(k + i as i64).unwrap()).collect();
        let a_inv = power_series_inverse(&a_part, n, m)?;
        let a_inv = Self::from_raw(p, self.a, -k, self.prec - 2 * k, a_inv, self.kind);
        let b: Vec<(i64, i128)> = self.terms().filter(|&(d, _)| d < k).map(|(d, c)| (d, c as i128)).collect();
        if b.is_empty() {
            return Ok(a_inv.truncate(self.prec - 2 * k).normalized());
        }
        let b = Self::from_terms(p, self.a, &b, k)?.with_kind(self.kind).exact_extension(self.prec);
        let t = a_inv.mul(&b)?;
        let mut acc = Self::one(p, self.a, t.prec)?.with_kind(self.kind);
        let mut term = acc.clone();
        for _ in 1..self.a {
            term = term.mul(&t)?.neg();
            acc = acc.add(&term)?;
        }
        a_inv.mul(&acc)
    }

    /// Treat the stored polynomial as exact and extend its precision to `n`.
    pub(crate) fn exact_extension(&self, n: i64) -> Self {
        if n <= self.prec {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize((n - self.lo) as usize, 0);
        LaurentSeries { prec: n, coeffs, ..self.clone() }
    }

    /// Parse `1 + 3*X^2 - p*X^-1 + O(X^10)`; without an `O(X^n)` term the
    /// precision is `default_prec`.
    pub fn parse(text: &str, p: u64, a: u32, default_prec: i64) -> Result<Self> {
        let mut terms = Vec::new();
        let mut prec = None;
        let cleaned = text.replace('−', "-").replace(' ', "");
        if cleaned.is_empty() {
            return Err(Error::Parse("empty series".into()));
        }
        let mut pieces = Vec::new();
        let mut cur = String::new();
        for ch in cleaned.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        pieces.push(cur);
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(b) => (-1i128, b),
                None => (1, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            if let Some(inner) = body.strip_prefix("O(").and_then(|b| b.strip_suffix(')')) {
                let n = inner
                    .strip_prefix("X^")
                    .map(|s| s.parse::<i64>())
                    .unwrap_or_else(|| if inner == "X" { Ok(1) } else { inner.parse::<i64>().map(|_| 0) })
                    .map_err(|_| Error::Parse(format!("bad O-term {body}")))?;
                prec = Some(prec.map_or(n, |q: i64| q.min(n)));
                continue;
            }
            let mut coeff: i128 = sign;
            let mut deg = 0i64;
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {body}")));
                }
                if let Some(rest) = factor.strip_prefix('X') {
                    deg += match rest.strip_prefix('^') {
                        Some(e) => e.trim_matches(|c| c == '(' || c == ')').parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent {factor}")))?,
                        None if rest.is_empty() => 1,
                        None => return Err(Error::Parse(format!("bad factor {factor}"))),
                    };
                } else if let Some(rest) = factor.strip_prefix('p') {
                    let k: u32 = match rest.strip_prefix('^') {
                        Some(e) => e.parse().map_err(|_| Error::Parse(format!("bad exponent {factor}")))?,
                        None if rest.is_empty() => 1,
                        None => return Err(Error::Parse(format!("bad factor {factor}"))),
                    };
                    coeff = coeff.checked_mul((p as i128).checked_pow(k).ok_or_else(|| Error::Parse("coefficient overflow".into()))?).ok_or_else(|| Error::Parse("coefficient overflow".into()))?;
                } else {
                    let n: i128 = factor.parse().map_err(|_| Error::Parse(format!("bad factor {factor}")))?;
                    coeff = coeff.checked_mul(n).ok_or_else(|| Error::Parse("coefficient overflow".into()))?;
                }
            }
            terms.push((deg, coeff));
        }
        let prec = prec.unwrap_or(default_prec);
        Self::from_terms(p, a, &terms, prec)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.terms() {
            let c = arith::symmetric(c, self.modulus);
            let (neg, mag) = (c < 0, c.unsigned_abs());
            let mono = match d {
                0 => String::new(),
                1 => "X".into(),
                d => format!("X^{d}"),
            };
            let body = match (mag, mono.is_empty()) {
                (m, true) => m.to_string(),
                (1, false) => mono,
                (m, false) => format!("{m}*{mono}"),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        let tail = match self.prec {
            0 => "O(1)".to_string(),
            1 => "O(X)".to_string(),
            n => format!("O(X^{n})"),
        };
        if first {
            write!(f, "{tail}")
        } else {
            write!(f, " + {tail}")
        }
    }
}

pub const SERIES_SCHEMA: &str = "pgk.series/1";

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    schema: String,
    p: u64,
    a: u32,
    e: u32,
    ring: RingKind,
    dmin: i64,
    terms: Vec<(i64, u64)>,
    #[serde(rename = "N")]
    n: i64,
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            schema: SERIES_SCHEMA.into(),
            p: self.p,
            a: self.a,
            e: 1,
            ring: self.kind,
            dmin: self.lo,
            terms: self.terms().collect(),
            n: self.prec,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SeriesJson::deserialize(d)?;
        if j.e != 1 {
            return Err(D::Error::custom("series coefficients must be unramified (e = 1)"));
        }
        let m = Self::check_base(j.p, j.a).map_err(D::Error::custom)?;
        if j.terms.iter().any(|&(_, c)| c == 0 || c >= m) {
            return Err(D::Error::custom("residues must lie in [1, p^a)"));
        }
        let terms: Vec<(i64, i128)> = j.terms.iter().map(|&(d, c)| (d, c as i128)).collect();
        let s = Self::from_terms_with_dmin(j.p, j.a, &terms, j.n, j.dmin).map_err(D::Error::custom)?;
        Ok(s.with_kind(j.ring))
    }
}

/// Truncated product of power series mod `X^n`.
pub(crate) fn mul_trunc(f: &[u64], g: &[u64], n: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (i, &x) in f.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in g.iter().enumerate().take(n - i) {
            if y != 0 {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, m), m);
            }
        }
    }
    out
}

pub(crate) fn series_pow(f: &[u64], mut e: u128, n: usize, m: u64) -> Vec<u64> {
    let mut acc = vec![0u64; n];
    if n > 0 {
        acc[0] = 1 % m;
    }
    let mut base = f.to_vec();
    base.resize(n, 0);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_trunc(&acc, &base, n, m);
        }
        e >>= 1;
        if e > 0 {
            base = mul_trunc(&base, &base, n, m);
        }
    }
    acc
}

/// `(1+X)^e mod (m, X^n)` by binary powering.
pub(crate) fn binomial_power(e: u128, n: usize, m: u64) -> Vec<u64> {
    let mut base = vec![0u64; n];
    if n > 0 {
        base[0] = 1 % m;
    }
    if n > 1 {
        base[1] = 1 % m;
    }
    series_pow(&base, e, n, m)
}

/// Inverse of a power series with unit constant term, mod `X^n`.
pub(crate) fn power_series_inverse(f: &[u64], n: usize, m: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let c0 = arith::inv_mod(f[0] % m, m).ok_or_else(|| Error::Precondition("constant term is not a unit".into()))?;
    let mut g = vec![0u64; n];
    g[0] = c0;
    for k in 1..n {
        let mut s = 0u64;
        for j in 1..=k.min(f.len() - 1) {
            s = add_mod(s, mul_mod(f[j], g[k - j], m), m);
        }
        g[k] = mul_mod(arith::neg_mod(s, m), c0, m);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str, p: u64, a: u32, n: i64) -> LaurentSeries {
        LaurentSeries::parse(text, p, a, n).unwrap()
    }

    #[test]
    fn additive_examples() {
        let x = s("X", 5, 4, 10);
        assert!(x.add(&x.neg()).unwrap().is_zero_within_precision());
        let two = s("1 + X", 5, 4, 10).add(&s("1 - X", 5, 4, 10)).unwrap();
        assert!(two.agrees(&s("2", 5, 4, 10)));
        let inv = s("X^-1", 2, 1, 10);
        assert!(inv.add(&inv).unwrap().is_zero_within_precision());
    }

    #[test]
    fn multiplicative_examples() {
        let f = s("1 + X", 7, 3, 20).mul(&s("1 - X", 7, 3, 20)).unwrap();
        assert!(f.agrees(&s("1 - X^2", 7, 3, 20)));
        let u = s("X^-1", 7, 3, 20).mul(&s("X", 7, 3, 20)).unwrap();
        assert!(u.agrees(&s("1", 7, 3, 20)));
        assert_eq!(u.prec(), 19);
        for p in [2u64, 3, 5, 7] {
            let f = LaurentSeries::one_plus_x_pow(p, 1, p as i64, 30).unwrap();
            let expect = LaurentSeries::from_terms(p, 1, &[(0, 1), (p as i64, 1)], 30).unwrap();
            assert!(f.agrees(&expect), "p = {p}");
        }
    }

    #[test]
    fn multiplication_precision_rule() {
        let f = LaurentSeries::from_terms(5, 3, &[(-2, 1), (0, 3)], 6).unwrap();
        let g = LaurentSeries::from_terms(5, 3, &[(1, 1)], 4).unwrap();
        let h = f.mul(&g).unwrap();
        assert_eq!(h.prec(), (6 + 1).min(4 - 2));
    }

    #[test]
    fn gauss_valuation_examples() {
        let p = 5;
        let f = LaurentSeries::from_terms(p, 3, &[(1, 5), (2, 1)], 10).unwrap();
        assert_eq!(f.gauss_valuation().unwrap(), GaussValuation::Known(0));
        let f = LaurentSeries::from_terms(p, 3, &[(1, 5)], 10).unwrap();
        assert_eq!(f.gauss_valuation().unwrap(), GaussValuation::Known(1));
        let f = LaurentSeries::from_terms(p, 3, &[(1, 125)], 10).unwrap();
        assert_eq!(f.gauss_valuation().unwrap(), GaussValuation::Unknown);
        assert_eq!(LaurentSeries::zero(p, 3, 4).unwrap().gauss_valuation(), Err(Error::ZeroWithinPrecision));
    }

    #[test]
    fn inverse_of_units() {
        let p = 3;
        let f = LaurentSeries::from_terms(p, 4, &[(-1, 3), (1, 2), (2, 1)], 20).unwrap();
        let g = f.inverse().unwrap();
        let one = f.mul(&g).unwrap();
        assert!(one.agrees(&LaurentSeries::one(p, 4, 40).unwrap()));
        assert!(one.prec() > 5);
        let h = LaurentSeries::from_terms(p, 4, &[(0, 3)], 20).unwrap();
        assert!(h.inverse().is_err());
    }

    #[test]
    fn negative_binomial_power() {
        let f = LaurentSeries::one_plus_x_pow(5, 6, -3, 15).unwrap();
        let g = LaurentSeries::one_plus_x_pow(5, 6, 3, 15).unwrap();
        assert!(f.mul(&g).unwrap().agrees(&LaurentSeries::one(5, 6, 15).unwrap()));
    }

    #[test]
    fn text_and_json_round_trip() {
        let f = s("3 - X^-2 + 5*X^4 + O(X^9)", 7, 5, 64);
        assert_eq!(f.prec(), 9);
        assert_eq!(f.to_string(), "-X^-2 + 3 + 5*X^4 + O(X^9)");
        let text = serde_json::to_string(&f).unwrap();
        let back: LaurentSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        let g = s("p*X", 5, 3, 10);
        assert_eq!(g.coeff(1), Some(5));
    }
}
