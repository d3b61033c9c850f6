use super::module::PhiGammaModule;
use super::ops::{ceil_log, GammaUnit};
use crate::arith::{self, ipow};
use crate::error::{Error, Result};
use crate::padic::{PadicScalar, Valuation, Q};
use crate::series::{binomial_power, LaurentSeries};
use crate::trianguline::CharacterP;
use serde::{Deserialize, Serialize};

/// Upper-triangular `[[a, b], [0, d]]` over `Q_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct B2Elem {
    pub a: PadicScalar,
    pub b: PadicScalar,
    pub d: PadicScalar,
}

fn exact(p: u64, n: i128) -> PadicScalar {
    PadicScalar::from_int(p, n, arith::max_precision(p))
}

impl B2Elem {
    pub fn new(a: PadicScalar, b: PadicScalar, d: PadicScalar) -> Result<Self> {
        if a.is_zero_within_precision() || d.is_zero_within_precision() {
            return Err(Error::Precondition("diagonal entries must be invertible".into()));
        }
        Ok(B2Elem { a, b, d })
    }

    pub fn identity(p: u64) -> Self {
        B2Elem { a: exact(p, 1), b: PadicScalar::zero(p), d: exact(p, 1) }
    }

    pub fn center(d: PadicScalar) -> Self {
        B2Elem { a: d, b: PadicScalar::zero(d.p()), d }
    }

    pub fn unit_diagonal(u: PadicScalar) -> Self {
        B2Elem { a: u, b: PadicScalar::zero(u.p()), d: exact(u.p(), 1) }
    }

    pub fn p_diagonal(p: u64, k: i64) -> Self {
        B2Elem { a: exact(p, 1).shift(k), b: PadicScalar::zero(p), d: exact(p, 1) }
    }

    pub fn unipotent(c: PadicScalar) -> Self {
        let p = c.p();
        B2Elem { a: exact(p, 1), b: c, d: exact(p, 1) }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(B2Elem {
            a: self.a.mul(&o.a)?,
            b: self.a.mul(&o.b)?.add(&self.b.mul(&o.d)?)?,
            d: self.d.mul(&o.d)?,
        })
    }
}

/// A finite window `[n0, n1]` of a ψ-compatible sequence `x^{(n)}` in `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSeq {
    window: (i64, i64),
    entries: Vec<Vec<LaurentSeries>>,
    delta: CharacterP,
    module: PhiGammaModule,
}

impl BoxSeq {
    pub fn new(module: PhiGammaModule, delta: CharacterP, n0: i64, entries: Vec<Vec<LaurentSeries>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if delta.p() != module.p() {
            return Err(Error::PrimeMismatch(module.p(), delta.p()));
        }
        if let Some(bad) = entries.iter().find(|e| e.len() != module.rank()) {
            return Err(Error::RankMismatch(format!("entry of length {} in rank {}", bad.len(), module.rank())));
        }
        for (i, pair) in entries.windows(2).enumerate() {
            let down = module.psi(&pair[1])?;
            if !down.iter().zip(&pair[0]).all(|(x, y)| x.agrees(y)) {
                return Err(Error::InvalidSequence(format!("ψ(x^({})) differs from x^({})", n0 + i as i64 + 1, n0 + i as i64)));
            }
        }
        let n1 = n0 + entries.len() as i64 - 1;
        Ok(BoxSeq { window: (n0, n1), entries, delta, module })
    }

    /// The constant sequence `y` on `[n0, n1]`, for `ψ_D(y) = y`.
    pub fn constant(module: PhiGammaModule, delta: CharacterP, n0: i64, n1: i64, y: Vec<LaurentSeries>) -> Result<Self> {
        if n1 < n0 {
            return Err(Error::EmptyWindow);
        }
        Self::new(module, delta, n0, vec![y; (n1 - n0 + 1) as usize])
    }

    /// Sequence generated downward from its top entry by ψ_D.
    pub fn from_top(module: PhiGammaModule, delta: CharacterP, n0: i64, n1: i64, top: Vec<LaurentSeries>) -> Result<Self> {
        if n1 < n0 {
            return Err(Error::EmptyWindow);
        }
        let mut entries = vec![top];
        for _ in n0..n1 {
            let next = module.psi(entries.last().unwrap())?;
            entries.push(next);
        }
        entries.reverse();
        Self::new(module, delta, n0, entries)
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn entry(&self, n: i64) -> Option<&[LaurentSeries]> {
        if n < self.window.0 || n > self.window.1 {
            return None;
        }
        Some(&self.entries[(n - self.window.0) as usize])
    }

    pub fn entries(&self) -> &[Vec<LaurentSeries>] {
        &self.entries
    }

    pub fn delta(&self) -> &CharacterP {
        &self.delta
    }

    pub fn module(&self) -> &PhiGammaModule {
        &self.module
    }

    fn with_entries(&self, n0: i64, entries: Vec<Vec<LaurentSeries>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let n1 = n0 + entries.len() as i64 - 1;
        Ok(BoxSeq { window: (n0, n1), entries, delta: self.delta, module: self.module.clone() })
    }

    fn act_center(&self, d: &PadicScalar) -> Result<Self> {
        let c = self.delta.eval(d)?;
        let entries = self
            .entries
            .iter()
            .map(|v| v.iter().map(|s| s.scale_scalar(&c)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        self.with_entries(self.window.0, entries)
    }

    fn act_unit(&self, u: &PadicScalar) -> Result<Self> {
        let p = self.module.p();
        let (rep, k) = u.integer_approximation()?;
        let k = k.min(arith::max_precision(p));
        let unit = GammaUnit::new(p, rep, k)?;
        let needed = self.entries.iter().map(|v| self.module.unit_precision_for(v)).max().unwrap_or(1);
        if unit.rep == 1 && k >= needed {
            return Ok(self.clone());
        }
        let entries = self.entries.iter().map(|v| self.module.gamma(unit, v)).collect::<Result<_>>()?;
        self.with_entries(self.window.0, entries)
    }

    fn act_shift(&self, k: i64) -> Result<Self> {
        Ok(BoxSeq { window: (self.window.0 - k, self.window.1 - k), ..self.clone() })
    }

    fn act_unipotent(&self, c: &PadicScalar) -> Result<Self> {
        if c.is_exact_zero() {
            return Ok(self.clone());
        }
        let p = self.module.p();
        let mut first = None;
        let mut entries = Vec::new();
        for (i, v) in self.entries.iter().enumerate() {
            let n = self.window.0 + i as i64;
            let z = c.shift(n);
            match z.valuation() {
                Valuation::Finite(q) if q < Q::from_integer(0) => continue,
                Valuation::AtLeast(q) if q < Q::from_integer(0) => {
                    return Err(Error::precision("cannot decide whether c·p^n is integral"))
                }
                _ => {}
            }
            let (zi, k) = z.integer_approximation()?;
            let mut row = Vec::with_capacity(v.len());
            for s in v {
                let depth = (-s.order()).max(0);
                let work = s.prec() + depth;
                if work <= 0 {
                    row.push(s.clone());
                    continue;
                }
                let needed = s.a() + ceil_log(p, work);
                if k < needed {
                    return Err(Error::precision(format!("c·p^{n} known mod p^{k}, need p^{needed}")));
                }
                let m = ipow(p, needed.min(arith::max_precision(p)));
                let e = arith::reduce_i128(zi, m) as u128;
                let coeffs = binomial_power(e, work as usize, s.modulus());
                let factor = LaurentSeries::from_raw(p, s.a(), 0, work, coeffs, s.kind());
                row.push(factor.mul(s)?);
            }
            first.get_or_insert(n);
            entries.push(row);
        }
        match first {
            None => Err(Error::EmptyWindow),
            Some(n0) => self.with_entries(n0, entries),
        }
    }

    /// Action of an upper-triangular matrix, factored as
    /// `center(d) · diag(p^k, 1) · diag(u, 1) · [[1, c], [0, 1]]`.
    pub fn act(&self, g: &B2Elem) -> Result<Self> {
        let p = self.module.p();
        if g.a.p() != p {
            return Err(Error::PrimeMismatch(p, g.a.p()));
        }
        let alpha = g.a.div(&g.d)?;
        let c = g.b.div(&g.d)?.div(&alpha)?;
        let k = alpha.val()?;
        if !k.is_integer() {
            return Err(Error::UnsupportedRamification("matrix entries must lie in Q_p".into()));
        }
        let k = k.to_integer();
        let u = alpha.shift(-k);
        self.act_unipotent(&c)?.act_unit(&u)?.act_shift(k)?.act_center(&g.d)
    }

    /// Restriction to `Z_p`: the entry `x^{(0)}`.
    pub fn res_zp(&self) -> Result<Vec<LaurentSeries>> {
        self.entry(0).map(|v| v.to_vec()).ok_or(Error::WindowMiss(0))
    }

    /// Whether every entry lies in `X^{-1} O_E[[X]][1/p]`; only for `D = E`.
    pub fn is_bounded_sharp(&self) -> Result<bool> {
        if !self.module.is_trivial_rank_one() {
            return Err(Error::UnsupportedModule("the small lattice is only known for the trivial rank-1 module".into()));
        }
        Ok(self.entries.iter().flatten().all(|s| s.order() >= -1))
    }

    /// Agreement with `other` on the overlap of the two windows.
    pub fn agrees_on_overlap(&self, other: &Self) -> bool {
        let lo = self.window.0.max(other.window.0);
        let hi = self.window.1.min(other.window.1);
        (lo..=hi).all(|n| {
            let (a, b) = (self.entry(n).unwrap(), other.entry(n).unwrap());
            a.iter().zip(b).all(|(x, y)| x.agrees(y))
        })
    }
}

#[derive(Serialize, Deserialize)]
struct BoxJson {
    schema: String,
    window: [i64; 2],
    entries: Vec<Vec<LaurentSeries>>,
    delta: CharacterP,
    module: PhiGammaModule,
}

pub const BOX_SCHEMA: &str = "pgk.box_seq/1";

impl Serialize for BoxSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoxJson {
            schema: BOX_SCHEMA.into(),
            window: [self.window.0, self.window.1],
            entries: self.entries.clone(),
            delta: self.delta,
            module: self.module.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoxSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = BoxJson::deserialize(d)?;
        if j.schema != BOX_SCHEMA {
            return Err(D::Error::custom(format!("unexpected schema {}", j.schema)));
        }
        if j.window[1] - j.window[0] + 1 != j.entries.len() as i64 {
            return Err(D::Error::custom("window length differs from entry count"));
        }
        BoxSeq::new(j.module, j.delta, j.window[0], j.entries).map_err(D::Error::custom)
    }
}
