//! p-adic scalars in unit-times-uniformizer normal form.
//!
//! A nonzero scalar is stored as `π^ord · u` with `π^e = p`, `u` a p-adic
//! unit known modulo `p^prec`. Ramified scalars only ever carry a valuation
//! and a unit residue; sums of scalars whose orders differ modulo `e` are
//! rejected rather than approximated.

mod analytic;
mod parse;

use crate::arith::{self, ipow, mul_mod};
use crate::error::{Error, Result};
use num_integer::Integer;
use num_rational::Ratio;
use std::cmp::Ordering;
use std::fmt;

pub type Q = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    Zero,
    /// An unknown element of `π^abs · O_E`.
    Small { abs: i64 },
    Unit { ord: i64, unit: u64, prec: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    p: u64,
    e: u32,
    repr: Repr,
}

/// What is known about a valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Q),
    AtLeast(Q),
    Infinite,
}

impl Valuation {
    /// Decide `self` against `q`; `None` when the stored data cannot.
    pub fn compare(&self, q: Q) -> Option<Ordering> {
        match *self {
            Valuation::Finite(v) => Some(v.cmp(&q)),
            Valuation::Infinite => Some(Ordering::Greater),
            Valuation::AtLeast(lo) if lo > q => Some(Ordering::Greater),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn finite(&self) -> Option<Q> {
        match *self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Lower bound, `None` meaning `+∞`.
    pub fn lower(&self) -> Option<Q> {
        match *self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

fn make_unit(p: u64, e: u32, ord: i64, u: u64, prec: u32) -> Repr {
    if prec == 0 {
        return Repr::Small { abs: ord };
    }
    let m = ipow(p, prec);
    let u = u % m;
    if u == 0 {
        return Repr::Small {
            abs: ord + e as i64 * prec as i64,
        };
    }
    let k = arith::val_u64(u, p);
    Repr::Unit {
        ord: ord + e as i64 * k as i64,
        unit: u / ipow(p, k),
        prec: prec - k,
    }
}

impl PadicScalar {
    fn check(p: u64) {
        assert!(arith::is_prime(p), "{p} is not prime");
    }

    pub fn zero(p: u64) -> Self {
        Self::check(p);
        PadicScalar { p, e: 1, repr: Repr::Zero }
    }

    /// An unknown element of valuation at least `abs`.
    pub fn small(p: u64, e: u32, abs: Q) -> Result<Self> {
        Self::check(p);
        let scaled = abs * e as i64;
        if !scaled.is_integer() {
            return Err(Error::UnsupportedRamification(format!(
                "valuation {abs} needs ramification index {}",
                abs.denom()
            )));
        }
        Ok(PadicScalar { p, e, repr: Repr::Small { abs: scaled.to_integer() } })
    }

    /// `π^ord · u` with `u` an integer (p-factors are absorbed into `ord`).
    pub fn monomial(p: u64, e: u32, ord: i64, u: i128, prec: u32) -> Self {
        Self::check(p);
        assert!(e >= 1);
        if u == 0 {
            return PadicScalar { p, e, repr: Repr::Zero };
        }
        let prec = prec.min(arith::max_precision(p));
        let k = arith::val_i128(u, p);
        let rest = u / (p as i128).pow(k);
        let m = ipow(p, prec);
        PadicScalar {
            p,
            e,
            repr: make_unit(p, e, ord + (e as i64) * k as i64, arith::reduce_i128(rest, m), prec),
        }
    }

    pub fn from_int(p: u64, n: i128, prec: u32) -> Self {
        Self::monomial(p, 1, 0, n, prec)
    }

    /// `num / den` to relative precision `prec`.
    pub fn from_ratio(p: u64, num: i128, den: i128, prec: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Self::from_int(p, num, prec).div(&Self::from_int(p, den, prec))
    }

    /// `p^v` for a rational `v`, with ramification index `denominator(v)`.
    pub fn p_power(p: u64, v: Q, prec: u32) -> Self {
        let e = *v.denom() as u32;
        Self::monomial(p, e, *v.numer(), 1, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn is_exact_zero(&self) -> bool {
        self.repr == Repr::Zero
    }

    /// Zero, or indistinguishable from zero at the stored precision.
    pub fn is_zero_within_precision(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    pub fn valuation(&self) -> Valuation {
        let e = self.e as i64;
        match self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::Small { abs } => Valuation::AtLeast(Q::new(abs, e)),
            Repr::Unit { ord, .. } => Valuation::Finite(Q::new(ord, e)),
        }
    }

    /// The valuation when it is known exactly.
    pub fn val(&self) -> Result<Q> {
        match self.repr {
            Repr::Unit { ord, .. } => Ok(Q::new(ord, self.e as i64)),
            Repr::Zero => Err(Error::Precondition("valuation of exact zero".into())),
            Repr::Small { .. } => Err(Error::ZeroWithinPrecision),
        }
    }

    /// Absolute precision, `None` for exact zero.
    pub fn abs_prec(&self) -> Option<Q> {
        let e = self.e as i64;
        match self.repr {
            Repr::Zero => None,
            Repr::Small { abs } => Some(Q::new(abs, e)),
            Repr::Unit { ord, prec, .. } => Some(Q::new(ord + e * prec as i64, e)),
        }
    }

    /// Relative precision of a nonzero value.
    pub fn rel_prec(&self) -> Option<u32> {
        match self.repr {
            Repr::Unit { prec, .. } => Some(prec),
            _ => None,
        }
    }

    /// The unit part modulo `p^prec`.
    pub fn unit_part(&self) -> Option<u64> {
        match self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// Re-express over a ramification index that is a multiple of `e`.
    pub fn with_ramification(&self, e2: u32) -> Result<Self> {
        if e2 % self.e != 0 {
            return Err(Error::UnsupportedRamification(format!(
                "cannot move from e={} to e={e2}",
                self.e
            )));
        }
        let f = (e2 / self.e) as i64;
        let repr = match self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Small { abs } => Repr::Small { abs: abs * f },
            Repr::Unit { ord, unit, prec } => Repr::Unit { ord: ord * f, unit, prec },
        };
        Ok(PadicScalar { p: self.p, e: e2, repr })
    }

    fn align(&self, other: &Self) -> Result<(Self, Self)> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.e == other.e {
            return Ok((*self, *other));
        }
        let e = self.e.lcm(&other.e);
        Ok((self.with_ramification(e)?, other.with_ramification(e)?))
    }

    pub fn neg(&self) -> Self {
        let repr = match self.repr {
            Repr::Unit { ord, unit, prec } => {
                Repr::Unit { ord, unit: arith::neg_mod(unit, ipow(self.p, prec)), prec }
            }
            r => r,
        };
        PadicScalar { repr, ..*self }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.align(other)?;
        let (p, e) = (x.p, x.e);
        let repr = match (x.repr, y.repr) {
            (Repr::Zero, r) | (r, Repr::Zero) => r,
            (Repr::Small { abs: a }, Repr::Small { abs: b }) => Repr::Small { abs: a.min(b) },
            (Repr::Small { abs }, Repr::Unit { ord, unit, prec })
            | (Repr::Unit { ord, unit, prec }, Repr::Small { abs }) => {
                if abs <= ord {
                    Repr::Small { abs }
                } else {
                    let room = ((abs - ord) / e as i64).min(prec as i64) as u32;
                    make_unit(p, e, ord, unit, room)
                }
            }
            (
                Repr::Unit { ord: o1, unit: u1, prec: p1 },
                Repr::Unit { ord: o2, unit: u2, prec: p2 },
            ) => {
                if (o1 - o2).rem_euclid(e as i64) != 0 {
                    return Err(Error::UnsupportedRamification(
                        "sum of scalars with valuations incongruent modulo 1/e".into(),
                    ));
                }
                let ((lo_ord, lo_u, lo_p), (hi_ord, hi_u, hi_p)) = if o1 <= o2 {
                    ((o1, u1, p1), (o2, u2, p2))
                } else {
                    ((o2, u2, p2), (o1, u1, p1))
                };
                let d = (hi_ord - lo_ord) / e as i64;
                let prec = (lo_p as i64).min(d + hi_p as i64) as u32;
                let m = ipow(p, prec);
                let shifted = if d >= prec as i64 {
                    0
                } else {
                    mul_mod(ipow(p, d as u32), hi_u % m, m)
                };
                make_unit(p, e, lo_ord, arith::add_mod(lo_u % m, shifted, m), prec)
            }
        };
        Ok(PadicScalar { p, e, repr })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.align(other)?;
        let repr = match (x.repr, y.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Repr::Zero,
            (Repr::Small { abs: a }, Repr::Small { abs: b }) => Repr::Small { abs: a + b },
            (Repr::Small { abs }, Repr::Unit { ord, .. })
            | (Repr::Unit { ord, .. }, Repr::Small { abs }) => Repr::Small { abs: abs + ord },
            (
                Repr::Unit { ord: o1, unit: u1, prec: p1 },
                Repr::Unit { ord: o2, unit: u2, prec: p2 },
            ) => {
                let prec = p1.min(p2);
                let m = ipow(x.p, prec);
                Repr::Unit { ord: o1 + o2, unit: mul_mod(u1 % m, u2 % m, m), prec }
            }
        };
        Ok(PadicScalar { p: x.p, e: x.e, repr })
    }

    pub fn inv(&self) -> Result<Self> {
        match self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Small { .. } => Err(Error::precision("inverse of a value that is zero within precision")),
            Repr::Unit { ord, unit, prec } => {
                let m = ipow(self.p, prec);
                let inv = arith::inv_mod(unit, m).expect("unit part is invertible");
                Ok(PadicScalar { repr: Repr::Unit { ord: -ord, unit: inv, prec }, ..*self })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = PadicScalar::from_int(self.p, 1, arith::max_precision(self.p))
            .with_ramification(self.e)?;
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        let e = self.e as i64;
        let repr = match self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Small { abs } => Repr::Small { abs: abs + k * e },
            Repr::Unit { ord, unit, prec } => Repr::Unit { ord: ord + k * e, unit, prec },
        };
        PadicScalar { repr, ..*self }
    }

    /// Image in the residue field `F_p` of an integral scalar.
    pub fn residue(&self) -> Result<u64> {
        match self.repr {
            Repr::Zero => Ok(0),
            Repr::Small { abs } if abs > 0 => Ok(0),
            Repr::Small { .. } => Err(Error::precision("residue of a value known only modulo O_E")),
            Repr::Unit { ord, .. } if ord > 0 => Ok(0),
            Repr::Unit { ord: 0, unit, .. } => Ok(unit % self.p),
            Repr::Unit { .. } => Err(Error::Precondition("residue of a non-integral scalar".into())),
        }
    }

    /// Whether the difference is zero within precision.
    pub fn agrees(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero_within_precision(),
            Err(_) => false,
        }
    }

    /// Valuation of `self + other` even when the sum is not representable.
    pub fn val_of_sum(&self, other: &Self) -> Result<Valuation> {
        match self.add(other) {
            Ok(s) => Ok(s.valuation()),
            Err(Error::UnsupportedRamification(_)) => {
                let a = self.val()?;
                let b = other.val()?;
                Ok(Valuation::Finite(a.min(b)))
            }
            Err(err) => Err(err),
        }
    }

    /// Square root in `E` for odd `p`: `Ok(None)` when none exists.
    pub fn sqrt(&self) -> Result<Option<Self>> {
        if self.p == 2 {
            return Err(Error::Precondition("square roots need odd p".into()));
        }
        match self.repr {
            Repr::Zero => Ok(Some(*self)),
            Repr::Small { .. } => Err(Error::precision("square root of a value that is zero within precision")),
            Repr::Unit { ord, unit, prec } => {
                if ord % 2 != 0 {
                    return Ok(None);
                }
                let p = self.p;
                let r0 = match (1..p).find(|r| r * r % p == unit % p) {
                    Some(r) => r,
                    None => return Ok(None),
                };
                let m = ipow(p, prec);
                let half = arith::inv_mod(2, m).unwrap();
                let mut r = r0 % m;
                for _ in 0..64 {
                    let inv = arith::inv_mod(r, m).unwrap();
                    let next = mul_mod(arith::add_mod(r, mul_mod(unit, inv, m), m), half, m);
                    if next == r {
                        break;
                    }
                    r = next;
                }
                Ok(Some(PadicScalar { repr: Repr::Unit { ord: ord / 2, unit: r, prec }, ..*self }))
            }
        }
    }

    /// Symmetric integer representative of an integral scalar `x` with
    /// `x ≡ n mod p^k` where `p^k` is the absolute precision.
    pub fn integer_approximation(&self) -> Result<(i128, u32)> {
        if self.e != 1 {
            let v = self.valuation().lower();
            if let Some(v) = v {
                if !v.is_integer() {
                    return Err(Error::UnsupportedRamification("non-integral valuation".into()));
                }
            }
            return PadicScalar { e: 1, repr: self.with_e1_repr()?, p: self.p }.integer_approximation();
        }
        match self.repr {
            Repr::Zero => Ok((0, u32::MAX)),
            Repr::Small { abs } if abs >= 0 => Ok((0, abs as u32)),
            Repr::Unit { ord, unit, prec } if ord >= 0 => {
                let k = ord as u32 + prec;
                let k = k.min(arith::max_precision(self.p));
                let m = ipow(self.p, k);
                let ordk = (ord as u32).min(k);
                let v = mul_mod(ipow(self.p, ordk), unit, m);
                Ok((arith::symmetric(v, m), k))
            }
            _ => Err(Error::Precondition("scalar is not integral".into())),
        }
    }

    fn with_e1_repr(&self) -> Result<Repr> {
        let e = self.e as i64;
        Ok(match self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Small { abs } => Repr::Small { abs: abs.div_euclid(e) },
            Repr::Unit { ord, unit, prec } => {
                if ord % e != 0 {
                    return Err(Error::UnsupportedRamification("non-integral valuation".into()));
                }
                Repr::Unit { ord: ord / e, unit, prec }
            }
        })
    }

    /// Rational reconstruction: the unique `n/d` with `|n|, |d| <= sqrt(p^k/2)`
    /// congruent to the scalar, if any.
    pub fn rational_reconstruction(&self) -> Result<Option<(i128, i128)>> {
        let (x, k) = self.integer_approximation()?;
        if k == u32::MAX {
            return Ok(Some((0, 1)));
        }
        let m = ipow(self.p, k) as i128;
        let bound = ((m / 2) as f64).sqrt().floor() as i128;
        let (mut r0, mut r1) = (m, x.rem_euclid(m));
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 > bound {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if t1 == 0 || t1.abs() > bound || t1.rem_euclid(self.p as i128) == 0 {
            return Ok(None);
        }
        let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
        let g = n.gcd(&d);
        Ok(Some((n / g, d / g)))
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.e as i64;
        let pw = |k: i64| -> String {
            let q = Q::new(k, e);
            if q.is_integer() {
                match q.to_integer() {
                    0 => String::new(),
                    1 => "p".into(),
                    n => format!("p^{n}"),
                }
            } else {
                format!("p^({q})")
            }
        };
        match self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Small { abs } => write!(f, "O({})", if abs == 0 { "1".into() } else { pw(abs) }),
            Repr::Unit { ord, unit, prec } => {
                let u = arith::symmetric(unit, ipow(self.p, prec));
                let head = match (u, pw(ord).as_str()) {
                    (u, "") => format!("{u}"),
                    (1, s) => s.to_string(),
                    (-1, s) => format!("-{s}"),
                    (u, s) => format!("{u}*{s}"),
                };
                let tail = ord + e * prec as i64;
                write!(f, "{head} + O({})", if tail == 0 { "1".into() } else { pw(tail) })
            }
        }
    }
}

pub(crate) mod json {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    pub struct ScalarJson {
        pub schema: String,
        pub p: u64,
        pub e: u32,
        pub kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub ord: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub unit: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub prec: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub abs: Option<i64>,
    }

    pub const SCHEMA: &str = "pgk.scalar/1";

    impl From<&PadicScalar> for ScalarJson {
        fn from(s: &PadicScalar) -> Self {
            let mut j = ScalarJson {
                schema: SCHEMA.into(),
                p: s.p,
                e: s.e,
                kind: String::new(),
                ord: None,
                unit: None,
                prec: None,
                abs: None,
            };
            match s.repr {
                Repr::Zero => j.kind = "zero".into(),
                Repr::Small { abs } => {
                    j.kind = "small".into();
                    j.abs = Some(abs);
                }
                Repr::Unit { ord, unit, prec } => {
                    j.kind = "unit".into();
                    j.ord = Some(ord);
                    j.unit = Some(unit);
                    j.prec = Some(prec);
                }
            }
            j
        }
    }

    impl TryFrom<ScalarJson> for PadicScalar {
        type Error = Error;
        fn try_from(j: ScalarJson) -> Result<Self> {
            if !arith::is_prime(j.p) || j.e == 0 {
                return Err(Error::Parse("bad prime or ramification index".into()));
            }
            let missing = || Error::Parse("missing scalar field".into());
            let repr = match j.kind.as_str() {
                "zero" => Repr::Zero,
                "small" => Repr::Small { abs: j.abs.ok_or_else(missing)? },
                "unit" => {
                    let (ord, unit, prec) = (
                        j.ord.ok_or_else(missing)?,
                        j.unit.ok_or_else(missing)?,
                        j.prec.ok_or_else(missing)?,
                    );
                    if prec == 0 || prec > arith::max_precision(j.p) || unit % j.p == 0 || unit >= ipow(j.p, prec) {
                        return Err(Error::Parse("unit part out of range".into()));
                    }
                    Repr::Unit { ord, unit, prec }
                }
                other => return Err(Error::Parse(format!("unknown scalar kind {other}"))),
            };
            Ok(PadicScalar { p: j.p, e: j.e, repr })
        }
    }
}

impl serde::Serialize for PadicScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::ScalarJson::from(self).serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for PadicScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = json::ScalarJson::deserialize(d)?;
        PadicScalar::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Root valuations of `X² + c1·X + c0`, ascending.
pub fn quadratic_newton_slopes(c1: &PadicScalar, c0: &PadicScalar) -> Result<(Q, Q)> {
    let v0 = match c0.valuation() {
        Valuation::Finite(v) => v,
        _ => return Err(Error::Precondition("constant term must be nonzero".into())),
    };
    let half = v0 / 2;
    match c1.valuation().compare(half) {
        Some(Ordering::Less) => {
            let v1 = c1.val()?;
            Ok((v1, v0 - v1))
        }
        Some(_) => Ok((half, half)),
        None => Err(Error::precision("cannot compare val(c1) with val(c0)/2")),
    }
}
