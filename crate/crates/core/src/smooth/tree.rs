use super::mat::{frac_part, p_pow, val_rat, Mat2, Rat};
use crate::arith;
use crate::error::{Error, Result};
use crate::modp::Fp2;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A vertex of the tree, the class of the row lattice of
/// `[[p^m, c/p^s], [0, 1]]` with `0 ≤ c < p^s` and `p ∤ c` when `s > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub m: i64,
    pub s: u32,
    pub c: u64,
}

impl Vertex {
    pub const ROOT: Vertex = Vertex { m: 0, s: 0, c: 0 };

    pub fn matrix(&self, p: u64) -> Mat2 {
        let b = Rat::new(self.c as i128, arith::ipow(p, self.s) as i128);
        Mat2([[p_pow(p, self.m), b], [Rat::from_integer(0), Rat::from_integer(1)]])
    }

    pub fn distance(&self) -> u64 {
        let vb = if self.s == 0 { 0 } else { -(self.s as i64) };
        (self.m - 2 * self.m.min(vb).min(0)) as u64
    }

    /// The vertex of `KZ·h` together with `k̄ ∈ GL₂(F_p)` such that
    /// `h ∈ p^j · k · matrix(vertex)`.
    pub fn reduce(h: &Mat2, p: u64) -> (Vertex, [[u64; 2]; 2]) {
        let mut m = h.0;
        let (va, vc) = (val_rat(m[0][0], p), val_rat(m[1][0], p));
        let swap = match (va, vc) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(a), Some(c)) => c < a,
        };
        if swap {
            m.swap(0, 1);
        }
        if !m[1][0].is_zero() {
            let t = m[1][0] / m[0][0];
            m[1] = [Rat::from_integer(0), m[1][1] - t * m[0][1]];
        }
        let alpha = m[0][0] / m[1][1];
        let beta = m[0][1] / m[1][1];
        let mv = val_rat(alpha, p).expect("invertible");
        let w = alpha / p_pow(p, mv);
        let (c, s) = frac_part(beta / w, p);
        let v = Vertex { m: mv, s, c };
        let q = h.mul(&v.matrix(p).inv().unwrap());
        let dv = val_rat(q.det(), p).unwrap();
        debug_assert!(dv % 2 == 0);
        let k = q.scale(p_pow(p, -dv / 2));
        (v, k.mod_p(p).expect("cocycle is integral"))
    }

    /// All vertices at distance at most `radius`, sorted.
    pub fn ball(p: u64, radius: u32) -> Vec<Vertex> {
        let r = radius as i64;
        let mut out = Vec::new();
        for m in -r..=r {
            for s in 0..=radius {
                let cs: Box<dyn Iterator<Item = u64>> = if s == 0 {
                    Box::new(std::iter::once(0))
                } else {
                    Box::new((1..arith::ipow(p, s)).filter(move |c| c % p != 0))
                };
                for c in cs {
                    let v = Vertex { m, s, c };
                    if v.distance() <= radius as u64 {
                        out.push(v);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// `(r+1)·|ball(R)|`.
pub fn tree_dim(p: u64, r: u32, radius: u32) -> u64 {
    let n = 1 + (p + 1) * (arith::ipow(p, radius) - 1) / (p - 1);
    (r as u64 + 1) * n
}

/// `Sym^r(ḡ)` on the basis `X^{r-i}Y^i`, for `(g·P)(X,Y) = P(aX+cY, bX+dY)`.
pub fn sym_matrix(g: &[[u64; 2]; 2], r: u32, p: u64) -> Vec<Vec<u64>> {
    let [[a, b], [c, d]] = *g;
    let lin_pow = |x: u64, y: u64, e: u32| -> Vec<u64> {
        let mut poly = vec![1u64];
        for _ in 0..e {
            let mut next = vec![0u64; poly.len() + 1];
            for (i, &co) in poly.iter().enumerate() {
                next[i] = arith::add_mod(next[i], arith::mul_mod(co, x, p), p);
                next[i + 1] = arith::add_mod(next[i + 1], arith::mul_mod(co, y, p), p);
            }
            poly = next;
        }
        poly
    };
    let n = r as usize + 1;
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        let u = lin_pow(a, c, r - i as u32);
        let v = lin_pow(b, d, i as u32);
        for (x, &cu) in u.iter().enumerate() {
            for (y, &cv) in v.iter().enumerate() {
                out[x + y][i] = arith::add_mod(out[x + y][i], arith::mul_mod(cu, cv, p), p);
            }
        }
    }
    out
}

fn apply(m: &[Vec<u64>], v: &[Fp2]) -> Vec<Fp2> {
    let p = v[0].p;
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Fp2::zero(p), |acc, (&a, x)| acc.add(&Fp2::from_int(p, a as i128).mul(x)))
        })
        .collect()
}

/// A finitely supported function on the tree with values in `Sym^r`,
/// i.e. an element of the compact induction of `Sym^r` with `p` acting trivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeFunction {
    pub p: u64,
    pub r: u32,
    pub radius: u32,
    pub values: BTreeMap<Vertex, Vec<Fp2>>,
}

impl TreeFunction {
    pub fn zero(p: u64, r: u32, radius: u32) -> Self {
        TreeFunction { p, r, radius, values: BTreeMap::new() }
    }

    /// `e_i` at the vertex `v`.
    pub fn delta(p: u64, r: u32, radius: u32, v: Vertex, i: usize) -> Result<Self> {
        let mut f = Self::zero(p, r, radius);
        let mut val = vec![Fp2::zero(p); r as usize + 1];
        val[i] = Fp2::one(p);
        f.add_at(v, &val)?;
        Ok(f)
    }

    pub fn get(&self, v: &Vertex) -> Vec<Fp2> {
        self.values.get(v).cloned().unwrap_or_else(|| vec![Fp2::zero(self.p); self.r as usize + 1])
    }

    fn add_at(&mut self, v: Vertex, x: &[Fp2]) -> Result<()> {
        if v.distance() > self.radius as u64 {
            return Err(Error::RadiusOverflow(self.radius));
        }
        let cur = self.get(&v);
        let sum: Vec<Fp2> = cur.iter().zip(x).map(|(a, b)| a.add(b)).collect();
        if sum.iter().all(|z| z.is_zero()) {
            self.values.remove(&v);
        } else {
            self.values.insert(v, sum);
        }
        Ok(())
    }

    pub fn with_radius(&self, radius: u32) -> Result<Self> {
        if self.values.keys().any(|v| v.distance() > radius as u64) {
            return Err(Error::RadiusOverflow(radius));
        }
        Ok(TreeFunction { radius, ..self.clone() })
    }

    pub fn support_radius(&self) -> u64 {
        self.values.keys().map(|v| v.distance()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.radius = self.radius.max(o.radius);
        for (v, x) in &o.values {
            out.add_at(*v, x)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.radius = self.radius.max(o.radius);
        for (v, x) in &o.values {
            let neg: Vec<Fp2> = x.iter().map(|z| z.neg()).collect();
            out.add_at(*v, &neg)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Fp2) -> Self {
        let mut out = Self::zero(self.p, self.r, self.radius);
        for (v, x) in &self.values {
            out.add_at(*v, &x.iter().map(|z| z.mul(c)).collect::<Vec<_>>()).unwrap();
        }
        out
    }

    /// `(g·f)(h) = f(h·g)`; the result must fit in the radius bound.
    pub fn act(&self, g: &Mat2) -> Result<Self> {
        let p = self.p;
        let ginv = g.inv().ok_or_else(|| Error::Precondition("singular matrix".into()))?;
        let mut out = Self::zero(p, self.r, self.radius);
        for (h1, x) in &self.values {
            let (h2, _) = Vertex::reduce(&h1.matrix(p).mul(&ginv), p);
            let (back, k) = Vertex::reduce(&h2.matrix(p).mul(g), p);
            debug_assert_eq!(back, *h1);
            out.add_at(h2, &apply(&sym_matrix(&k, self.r, p), x))?;
        }
        Ok(out)
    }

    /// The Hecke operator for the double coset of `diag(p, 1)`; the radius
    /// bound grows by one.
    pub fn hecke_t(&self) -> Self {
        let p = self.p;
        let mut out = Self::zero(p, self.r, self.radius + 1);
        let mut left = vec![Mat2::from_ints(1, 0, 0, p as i128)];
        left.extend((0..p).map(|l| Mat2::from_ints(p as i128, 0, l as i128, 1)));
        for (h, x) in &self.values {
            let hinv = h.matrix(p).inv().unwrap();
            for a in &left {
                let (g, _) = Vertex::reduce(&a.mul(&h.matrix(p)), p);
                let y = g.matrix(p).mul(&hinv);
                let dv = val_rat(y.det(), p).unwrap();
                let y = y.scale(p_pow(p, -(dv - 1) / 2));
                let ybar = y.mod_p(p).expect("Hecke kernel is integral");
                out.add_at(g, &apply(&sym_matrix(&ybar, self.r, p), x)).unwrap();
            }
        }
        out
    }

    /// Dense coordinates on `ball(radius)`.
    pub fn coordinates(&self, ball: &[Vertex]) -> Vec<Fp2> {
        ball.iter().flat_map(|v| self.get(v)).collect()
    }
}

/// Images under `T` of the basis `e_i·[v]`, `v` in `ball(radius)` (sorted),
/// `i = 0..=r`.
pub fn hecke_matrix(p: u64, r: u32, radius: u32) -> Vec<TreeFunction> {
    Vertex::ball(p, radius)
        .into_iter()
        .flat_map(|v| (0..=r as usize).map(move |i| TreeFunction::delta(p, r, radius, v, i).unwrap().hecke_t()))
        .collect()
}

/// `(dim ker, dim coker)` of `T - λ` from radius-`R` functions to
/// radius-`(R+1)` functions, given the columns of [`hecke_matrix`].
pub fn kernel_cokernel_from(p: u64, r: u32, radius: u32, columns: &[TreeFunction], lambda: &Fp2) -> (u64, u64) {
    let src = Vertex::ball(p, radius);
    let dst = Vertex::ball(p, radius + 1);
    let mut cols = Vec::with_capacity(columns.len());
    let mut k = 0;
    for v in &src {
        for i in 0..=r as usize {
            let f = TreeFunction::delta(p, r, radius + 1, *v, i).unwrap();
            let g = columns[k].sub(&f.scale(lambda)).unwrap();
            cols.push(g.coordinates(&dst));
            k += 1;
        }
    }
    let rank = rank_fp2(cols) as u64;
    let n = src.len() as u64 * (r as u64 + 1);
    let m = dst.len() as u64 * (r as u64 + 1);
    (n - rank, m - rank)
}

pub fn hecke_kernel_cokernel(p: u64, r: u32, radius: u32, lambda: &Fp2) -> (u64, u64) {
    kernel_cokernel_from(p, r, radius, &hecke_matrix(p, r, radius), lambda)
}

pub const TREE_SCHEMA: &str = "pgk.tree_function/1";

#[derive(Serialize, Deserialize)]
struct TreeEntry {
    m: i64,
    s: u32,
    c: u64,
    value: Vec<[u64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    schema: String,
    p: u64,
    r: u32,
    radius: u32,
    support: Vec<TreeEntry>,
}

impl Serialize for TreeFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeJson {
            schema: TREE_SCHEMA.into(),
            p: self.p,
            r: self.r,
            radius: self.radius,
            support: self
                .values
                .iter()
                .map(|(v, x)| TreeEntry { m: v.m, s: v.s, c: v.c, value: x.iter().map(|z| [z.re, z.im]).collect() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TreeFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = TreeJson::deserialize(d)?;
        if j.schema != TREE_SCHEMA {
            return Err(D::Error::custom(format!("expected schema {TREE_SCHEMA}")));
        }
        if !arith::is_prime(j.p) {
            return Err(D::Error::custom("p is not prime"));
        }
        let mut f = TreeFunction::zero(j.p, j.r, j.radius);
        for e in j.support {
            if e.value.len() != j.r as usize + 1 {
                return Err(D::Error::custom("value has the wrong dimension"));
            }
            let valid = if e.s == 0 { e.c == 0 } else { e.c % j.p != 0 && e.c < arith::ipow(j.p, e.s) };
            if !valid {
                return Err(D::Error::custom("vertex is not in canonical form"));
            }
            let x: Vec<Fp2> = e.value.iter().map(|[a, b]| Fp2::new(j.p, *a as i128, *b as i128)).collect();
            f.add_at(Vertex { m: e.m, s: e.s, c: e.c }, &x).map_err(D::Error::custom)?;
        }
        Ok(f)
    }
}

fn rank_fp2(mut rows: Vec<Vec<Fp2>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv().unwrap();
        let pivot: Vec<Fp2> = rows[rank].iter().map(|x| x.mul(&inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}
