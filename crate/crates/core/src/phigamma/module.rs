use super::ops::{frobenius, gamma_act, psi, required_unit_precision, GammaUnit};
use crate::error::{Error, Result};
use crate::series::{GaussValuation, LaurentSeries};
use serde::{Deserialize, Serialize};

/// Square matrix of series, row-major storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    n: usize,
    data: Vec<LaurentSeries>,
}

impl SeriesMatrix {
    pub fn from_rows(rows: Vec<Vec<LaurentSeries>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::RankMismatch("matrix must be square and nonempty".into()));
        }
        let p = rows[0][0].p();
        let data: Vec<LaurentSeries> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|s| s.p() != p) {
            return Err(Error::PrimeMismatch(p, bad.p()));
        }
        Ok(SeriesMatrix { n, data })
    }

    pub fn identity(p: u64, a: u32, prec: i64, n: usize) -> Result<Self> {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(if i == j { LaurentSeries::one(p, a, prec)? } else { LaurentSeries::zero(p, a, prec)? });
            }
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<LaurentSeries>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map<F: Fn(&LaurentSeries) -> Result<LaurentSeries>>(&self, f: F) -> Result<Self> {
        Ok(SeriesMatrix { n: self.n, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch(format!("{} vs {}", self.n, other.n)));
        }
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.get(i, 0).mul(other.get(0, j))?;
                for k in 1..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                data.push(acc);
            }
        }
        Ok(SeriesMatrix { n, data })
    }

    pub fn apply(&self, v: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        if v.len() != self.n {
            return Err(Error::RankMismatch(format!("vector of length {} for rank {}", v.len(), self.n)));
        }
        (0..self.n)
            .map(|i| {
                let mut acc = self.get(i, 0).mul(&v[0])?;
                for k in 1..self.n {
                    acc = acc.add(&self.get(i, k).mul(&v[k])?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn det(&self) -> Result<LaurentSeries> {
        fn minor(m: &[Vec<LaurentSeries>]) -> Result<LaurentSeries> {
            if m.len() == 1 {
                return Ok(m[0][0].clone());
            }
            let mut acc: Option<LaurentSeries> = None;
            for j in 0..m.len() {
                let sub: Vec<Vec<LaurentSeries>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, s)| s.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&minor(&sub)?)?;
                let term = if j % 2 == 1 { term.neg() } else { term };
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term)?,
                });
            }
            Ok(acc.unwrap())
        }
        minor(&self.rows())
    }

    /// Gauss-Jordan inverse with unit pivots.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let s = self.get(0, 0);
        let mut left = self.rows();
        let mut right = Self::identity(s.p(), s.a(), s.prec(), n)?.rows();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| matches!(left[r][col].gauss_valuation(), Ok(GaussValuation::Known(0))))
                .ok_or(Error::SingularFrobenius)?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            let inv = left[col][col].inverse().map_err(|_| Error::SingularFrobenius)?;
            for k in 0..n {
                left[col][k] = left[col][k].mul(&inv)?;
                right[col][k] = right[col][k].mul(&inv)?;
            }
            for r in 0..n {
                if r == col || left[r][col].is_zero_within_precision() {
                    continue;
                }
                let factor = left[r][col].clone();
                for k in 0..n {
                    left[r][k] = left[r][k].sub(&factor.mul(&left[col][k])?)?;
                    right[r][k] = right[r][k].sub(&factor.mul(&right[col][k])?)?;
                }
            }
        }
        Self::from_rows(right)
    }

    pub fn agrees(&self, other: &Self) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(x, y)| x.agrees(y))
    }

    fn is_constant(&self) -> bool {
        self.data.iter().all(|s| s.terms().all(|(d, _)| d == 0))
    }

    fn is_identity(&self) -> bool {
        self.is_constant()
            && (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j).coeff(0) == Some(u64::from(i == j))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EtaleVerdict {
    CertifiedTrue,
    NotInThisBasis,
}

/// A (φ,Γ)-module given by matrices in a fixed basis, with the column
/// convention `φ(e_j) = Σ_i Mat(φ)[i][j] e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiGammaModule {
    mat_phi: SeriesMatrix,
    mat_gamma_tame: SeriesMatrix,
    mat_gamma_wild: SeriesMatrix,
    labels: Vec<String>,
}

fn act_entries(u: GammaUnit, m: &SeriesMatrix) -> Result<SeriesMatrix> {
    if m.is_constant() {
        return Ok(m.clone());
    }
    m.map(|s| gamma_act(u, s))
}

impl PhiGammaModule {
    pub fn new(mat_phi: SeriesMatrix, mat_gamma_tame: SeriesMatrix, mat_gamma_wild: SeriesMatrix) -> Result<Self> {
        let n = mat_phi.dim();
        if mat_gamma_tame.dim() != n || mat_gamma_wild.dim() != n {
            return Err(Error::RankMismatch("Frobenius and Γ matrices differ in size".into()));
        }
        let p = mat_phi.get(0, 0).p();
        if p == 2 {
            return Err(Error::Precondition("p must be odd".into()));
        }
        for m in [&mat_gamma_tame, &mat_gamma_wild] {
            if m.get(0, 0).p() != p {
                return Err(Error::PrimeMismatch(p, m.get(0, 0).p()));
            }
        }
        let labels = (1..=n).map(|i| format!("e{i}")).collect();
        Ok(PhiGammaModule { mat_phi, mat_gamma_tame, mat_gamma_wild, labels })
    }

    /// Module with a constant Frobenius matrix and trivial Γ-action on the basis.
    pub fn with_constant_frobenius(mat_phi: SeriesMatrix) -> Result<Self> {
        if !mat_phi.is_constant() {
            return Err(Error::InvalidModule("Γ matrices must be supplied for a non-constant Frobenius".into()));
        }
        let s = mat_phi.get(0, 0);
        let id = SeriesMatrix::identity(s.p(), s.a(), s.prec(), mat_phi.dim())?;
        Self::new(mat_phi, id.clone(), id)
    }

    /// The rank-1 module `E` itself.
    pub fn trivial(p: u64, a: u32, prec: i64) -> Result<Self> {
        Self::with_constant_frobenius(SeriesMatrix::identity(p, a, prec, 1)?)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::RankMismatch("one label per basis vector".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.mat_phi.dim()
    }

    pub fn p(&self) -> u64 {
        self.mat_phi.get(0, 0).p()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mat_phi(&self) -> &SeriesMatrix {
        &self.mat_phi
    }

    pub fn mat_gamma_tame(&self) -> &SeriesMatrix {
        &self.mat_gamma_tame
    }

    pub fn mat_gamma_wild(&self) -> &SeriesMatrix {
        &self.mat_gamma_wild
    }

    pub fn is_trivial_rank_one(&self) -> bool {
        self.rank() == 1 && self.mat_phi.is_identity() && self.mat_gamma_tame.is_identity() && self.mat_gamma_wild.is_identity()
    }

    /// `φ_D(z) = Mat(φ) · φ(z)`.
    pub fn phi(&self, z: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let fz: Vec<LaurentSeries> = z.iter().map(frobenius).collect();
        self.mat_phi.apply(&fz)
    }

    /// `ψ_D(y)`: write `y = Σ y_i φ(e_i)` and apply ψ to the coordinates.
    pub fn psi(&self, y: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let inv = self.mat_phi.inverse()?;
        Ok(inv.apply(y)?.iter().map(psi).collect())
    }

    /// `y - φ_D(ψ_D(y))`.
    pub fn res_zpx(&self, y: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let back = self.phi(&self.psi(y)?)?;
        y.iter().zip(&back).map(|(a, b)| a.sub(b)).collect()
    }

    /// Matrix of `[u]` in the basis, built from the two generators.
    pub fn gamma_matrix(&self, u: GammaUnit) -> Result<SeriesMatrix> {
        let p = self.p();
        let s = self.mat_phi.get(0, 0);
        let id = SeriesMatrix::identity(p, s.a(), s.prec(), self.rank())?;
        if self.mat_gamma_tame.is_identity() && self.mat_gamma_wild.is_identity() {
            return Ok(id);
        }
        let (i, n) = u.decompose(p);
        let tame = GammaUnit::tame_generator(p, u.prec);
        let wild = GammaUnit::wild_generator(p, u.prec);
        let pow = |m: &SeriesMatrix, g: GammaUnit, mut k: u64| -> Result<SeriesMatrix> {
            let (mut acc, mut acc_u) = (id.clone(), GammaUnit { rep: 1, prec: u.prec });
            let (mut base, mut base_u) = (m.clone(), g);
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc.mul(&act_entries(acc_u, &base)?)?;
                    acc_u = acc_u.mul(&base_u, p);
                }
                k >>= 1;
                if k > 0 {
                    base = base.mul(&act_entries(base_u, &base)?)?;
                    base_u = base_u.mul(&base_u, p);
                }
            }
            Ok(acc)
        };
        let m_tame = pow(&self.mat_gamma_tame, tame, i)?;
        let m_wild = pow(&self.mat_gamma_wild, wild, n)?;
        m_tame.mul(&act_entries(tame.pow(i, p), &m_wild)?)
    }

    /// `[u]` on a coordinate vector: `Mat([u]) · [u](z)`.
    pub fn gamma(&self, u: GammaUnit, z: &[LaurentSeries]) -> Result<Vec<LaurentSeries>> {
        let moved: Vec<LaurentSeries> = z.iter().map(|s| gamma_act(u, s)).collect::<Result<_>>()?;
        self.gamma_matrix(u)?.apply(&moved)
    }

    /// Unit precision that suffices for acting on every entry of `z` and of
    /// the stored matrices.
    pub fn unit_precision_for(&self, z: &[LaurentSeries]) -> u32 {
        z.iter()
            .chain(self.mat_gamma_tame.data.iter())
            .chain(self.mat_gamma_wild.data.iter())
            .chain(self.mat_phi.data.iter())
            .map(required_unit_precision)
            .max()
            .unwrap_or(1)
    }

    /// `Mat(φ)·φ(Mat(γ)) - Mat(γ)·γ(Mat(φ))` vanishes for the generator γ.
    pub fn commutes_with(&self, u: GammaUnit) -> Result<bool> {
        let g = self.gamma_matrix(u)?;
        let lhs = self.mat_phi.mul(&g.map(|s| Ok(frobenius(s)))?)?;
        let rhs = g.mul(&act_entries(u, &self.mat_phi)?)?;
        Ok(lhs.agrees(&rhs))
    }

    pub fn is_etale_in_basis(&self) -> EtaleVerdict {
        let entries_ok = self
            .mat_phi
            .data
            .iter()
            .all(|s| !matches!(s.gauss_valuation(), Ok(GaussValuation::Known(v)) if (v as i64) < 0));
        let det_ok = matches!(self.mat_phi.det().map(|d| d.gauss_valuation()), Ok(Ok(GaussValuation::Known(0))));
        if entries_ok && det_ok {
            EtaleVerdict::CertifiedTrue
        } else {
            EtaleVerdict::NotInThisBasis
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    schema: String,
    rank: usize,
    mat_phi: Vec<Vec<LaurentSeries>>,
    mat_gamma_tame: Vec<Vec<LaurentSeries>>,
    mat_gamma_wild: Vec<Vec<LaurentSeries>>,
    labels: Vec<String>,
}

pub const MODULE_SCHEMA: &str = "pgk.phi_gamma_module/1";

impl Serialize for PhiGammaModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleJson {
            schema: MODULE_SCHEMA.into(),
            rank: self.rank(),
            mat_phi: self.mat_phi.rows(),
            mat_gamma_tame: self.mat_gamma_tame.rows(),
            mat_gamma_wild: self.mat_gamma_wild.rows(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhiGammaModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ModuleJson::deserialize(d)?;
        if j.schema != MODULE_SCHEMA {
            return Err(D::Error::custom(format!("unexpected schema {}", j.schema)));
        }
        let build = || -> Result<PhiGammaModule> {
            let m = PhiGammaModule::new(
                SeriesMatrix::from_rows(j.mat_phi)?,
                SeriesMatrix::from_rows(j.mat_gamma_tame)?,
                SeriesMatrix::from_rows(j.mat_gamma_wild)?,
            )?;
            if m.rank() != j.rank {
                return Err(Error::RankMismatch("declared rank differs from matrix size".into()));
            }
            m.with_labels(j.labels)
        };
        build().map_err(D::Error::custom)
    }
}
