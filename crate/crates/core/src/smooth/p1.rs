use crate::arith;
use crate::error::{Error, Result};
use crate::modp::Fp2;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A point of `P¹(Z/p^n)`: `[1 : y]` or `[x : 1]` with `p | x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "chart", content = "coord", rename_all = "snake_case")]
pub enum P1Point {
    Affine(u64),
    Infinity(u64),
}

pub fn p1_dim(p: u64, n: u32) -> u64 {
    arith::ipow(p, n) + arith::ipow(p, n - 1)
}

pub fn sp_dim(p: u64, n: u32) -> u64 {
    p1_dim(p, n) - 1
}

pub fn p1_points(p: u64, n: u32) -> Vec<P1Point> {
    let q = arith::ipow(p, n);
    (0..q)
        .map(P1Point::Affine)
        .chain((0..q).step_by(p as usize).map(P1Point::Infinity))
        .collect()
}

impl P1Point {
    /// Normalize the row vector `(u : v)` over `Z/p^n`.
    pub fn from_row(u: u64, v: u64, p: u64, n: u32) -> Result<Self> {
        let q = arith::ipow(p, n);
        if u % p != 0 {
            Ok(P1Point::Affine(arith::mul_mod(v, arith::inv_mod(u, q).unwrap(), q)))
        } else if v % p != 0 {
            Ok(P1Point::Infinity(arith::mul_mod(u, arith::inv_mod(v, q).unwrap(), q)))
        } else {
            Err(Error::Precondition("not a primitive vector".into()))
        }
    }

    fn row(&self) -> (u64, u64) {
        match *self {
            P1Point::Affine(y) => (1, y),
            P1Point::Infinity(x) => (x, 1),
        }
    }

    /// `x · g` for row vectors.
    pub fn times(&self, g: &[[i128; 2]; 2], p: u64, n: u32) -> Result<Self> {
        let q = arith::ipow(p, n);
        let (u, v) = self.row();
        let gm = g.map(|row| row.map(|x| arith::reduce_i128(x, q)));
        let nu = arith::add_mod(arith::mul_mod(u, gm[0][0], q), arith::mul_mod(v, gm[1][0], q), q);
        let nv = arith::add_mod(arith::mul_mod(u, gm[0][1], q), arith::mul_mod(v, gm[1][1], q), q);
        Self::from_row(nu, nv, p, n)
    }
}

/// A function `P¹(Z/p^n) → F_{p²}`, i.e. a locally constant function on
/// `P¹(Q_p)` of level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P1Function {
    pub p: u64,
    pub n: u32,
    pub values: BTreeMap<P1Point, Fp2>,
}

impl P1Function {
    pub fn constant(p: u64, n: u32, c: Fp2) -> Self {
        P1Function { p, n, values: p1_points(p, n).into_iter().map(|x| (x, c)).collect() }
    }

    pub fn indicator(p: u64, n: u32, x: P1Point) -> Self {
        let mut f = Self::constant(p, n, Fp2::zero(p));
        f.values.insert(x, Fp2::one(p));
        f
    }

    pub fn get(&self, x: &P1Point) -> Fp2 {
        self.values.get(x).copied().unwrap_or(Fp2::zero(self.p))
    }

    /// `(g·f)(x) = f(x·g)` for `g ∈ GL₂(Z_p)` given by integer entries.
    pub fn act(&self, g: &[[i128; 2]; 2]) -> Result<Self> {
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if arith::reduce_i128(det, self.p) == 0 {
            return Err(Error::Precondition("matrix is not in GL2(Z_p)".into()));
        }
        let values = p1_points(self.p, self.n)
            .into_iter()
            .map(|x| Ok((x, self.get(&x.times(g, self.p, self.n)?))))
            .collect::<Result<_>>()?;
        Ok(P1Function { p: self.p, n: self.n, values })
    }

    pub fn is_constant(&self) -> bool {
        let first = self.get(&P1Point::Affine(0));
        p1_points(self.p, self.n).iter().all(|x| self.get(x) == first)
    }
}

pub const P1_SCHEMA: &str = "pgk.p1_function/1";

#[derive(Serialize, Deserialize)]
struct P1Json {
    schema: String,
    p: u64,
    n: u32,
    values: Vec<(P1Point, [u64; 2])>,
}

impl Serialize for P1Function {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        P1Json {
            schema: P1_SCHEMA.into(),
            p: self.p,
            n: self.n,
            values: self.values.iter().map(|(x, v)| (*x, [v.re, v.im])).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for P1Function {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = P1Json::deserialize(d)?;
        if j.schema != P1_SCHEMA || !arith::is_prime(j.p) || j.n == 0 {
            return Err(D::Error::custom("not a valid P1 function document"));
        }
        let q = arith::ipow(j.p, j.n);
        let mut values = BTreeMap::new();
        for (x, [a, b]) in j.values {
            let ok = match x {
                P1Point::Affine(y) => y < q,
                P1Point::Infinity(x) => x < q && x % j.p == 0,
            };
            if !ok {
                return Err(D::Error::custom("point outside P1(Z/p^n)"));
            }
            values.insert(x, Fp2::new(j.p, a as i128, b as i128));
        }
        Ok(P1Function { p: j.p, n: j.n, values })
    }
}
