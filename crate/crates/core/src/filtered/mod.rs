//! Filtered (φ,N)-modules of dimension at most 2 and their admissibility.
//!
//! Matrices use the column convention. A filtration is a list of
//! `(h_j, V_j)` with strictly increasing `h_j`: `Fil^i = V_j` for
//! `h_{j-1} < i <= h_j`, `Fil^i = V_1 = D` for `i <= h_1`, and `Fil^i = 0`
//! for `i > h_last`.

use crate::arith;
use crate::error::{Error, Result};
use crate::padic::{quadratic_newton_slopes, PadicScalar, Q};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Vector = Vec<PadicScalar>;
pub type Matrix = Vec<Vec<PadicScalar>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredPhiNModule {
    dim: usize,
    mat_phi: Matrix,
    mat_n: Matrix,
    filtration: Vec<(i64, Vec<Vector>)>,
}

fn exact(p: u64, n: i128) -> PadicScalar {
    PadicScalar::from_int(p, n, arith::max_precision(p))
}

fn is_zero(x: &PadicScalar) -> bool {
    x.is_zero_within_precision()
}

fn cross(x: &PadicScalar, w: &PadicScalar, y: &PadicScalar, z: &PadicScalar) -> Result<PadicScalar> {
    x.mul(w)?.sub(&y.mul(z)?)
}

fn det2(u: &[PadicScalar], v: &[PadicScalar]) -> Result<PadicScalar> {
    cross(&u[0], &v[1], &v[0], &u[1])
}

fn apply(m: &Matrix, v: &[PadicScalar]) -> Result<Vector> {
    m.iter()
        .map(|row| {
            let mut acc = row[0].mul(&v[0])?;
            for k in 1..v.len() {
                acc = acc.add(&row[k].mul(&v[k])?)?;
            }
            Ok(acc)
        })
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = a[i][0].mul(&b[0][j])?;
                    for k in 1..n {
                        acc = acc.add(&a[i][k].mul(&b[k][j])?)?;
                    }
                    Ok(acc)
                })
                .collect()
        })
        .collect()
}

/// Dimension of a span, and a spanning vector when it is a line.
fn span(vectors: &[Vector], dim: usize) -> Result<(usize, Option<Vector>)> {
    let nonzero: Vec<&Vector> = vectors.iter().filter(|v| v.iter().any(|x| !is_zero(x))).collect();
    let first = match nonzero.first() {
        None => return Ok((0, None)),
        Some(v) => (*v).clone(),
    };
    if dim == 1 {
        return Ok((1, Some(first)));
    }
    for v in &nonzero[1..] {
        if !is_zero(&det2(&first, v)?) {
            return Ok((2, None));
        }
    }
    Ok((1, Some(first)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Admissibility {
    Admissible,
    NotAdmissible,
    Undecided,
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Admissibility::Admissible => "ADMISSIBLE",
            Admissibility::NotAdmissible => "NOT ADMISSIBLE",
            Admissibility::Undecided => "UNDECIDED",
        })
    }
}

/// A φ- and N-stable line `E·w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableLine {
    pub vector: Vector,
    pub eigenvalue: PadicScalar,
    pub t_h: i64,
    pub t_n: Q,
    /// Some containment test was decided by vanishing within precision.
    pub within_precision: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Subobjects {
    /// No proper nonzero subobject (dimension 1).
    None,
    Lines { lines: Vec<StableLine> },
    /// Scalar Frobenius: every line is stable.
    EveryLine { eigenvalue: PadicScalar, t_n: Q, max_t_h: i64 },
    /// Eigenvalues outside `E`: no stable line over `E`.
    NoRationalLine { slopes: (Q, Q) },
    /// Stable lines exist but could not be computed; only slope bounds.
    Unresolved { slopes: (Q, Q), reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub verdict: Admissibility,
    pub t_h: i64,
    pub t_n: Q,
    pub certificate: Vec<String>,
    pub subobjects: Subobjects,
}

impl FilteredPhiNModule {
    pub fn new(mat_phi: Matrix, mat_n: Matrix, filtration: Vec<(i64, Vec<Vector>)>) -> Result<Self> {
        let dim = mat_phi.len();
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidModule("dimension must be 1 or 2".into()));
        }
        let square = |m: &Matrix| m.len() == dim && m.iter().all(|r| r.len() == dim);
        if !square(&mat_phi) || !square(&mat_n) {
            return Err(Error::InvalidModule("matrices must be square of the module dimension".into()));
        }
        let p = mat_phi[0][0].p();
        if mat_phi.iter().chain(&mat_n).flatten().any(|x| x.p() != p) {
            return Err(Error::InvalidModule("entries over different primes".into()));
        }
        let m = FilteredPhiNModule { dim, mat_phi, mat_n, filtration };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let p = self.p();
        if is_zero(&self.det_phi()?) {
            return Err(Error::InvalidModule("Frobenius must be invertible".into()));
        }
        let n2 = mat_mul(&self.mat_n, &self.mat_n)?;
        if n2.iter().flatten().any(|x| !is_zero(x)) {
            return Err(Error::InvalidModule("N must be nilpotent".into()));
        }
        let lhs = mat_mul(&self.mat_n, &self.mat_phi)?;
        let rhs = mat_mul(&self.mat_phi, &self.mat_n)?;
        let pp = exact(p, p as i128);
        for (a, b) in lhs.iter().flatten().zip(rhs.iter().flatten()) {
            if !is_zero(&a.sub(&b.mul(&pp)?)?) {
                return Err(Error::InvalidModule("N∘φ = p·φ∘N fails".into()));
            }
        }
        if self.filtration.is_empty() {
            return Err(Error::InvalidModule("filtration must list at least one step".into()));
        }
        let mut last_h = i64::MIN;
        let mut last_dim = self.dim;
        for (j, (h, vs)) in self.filtration.iter().enumerate() {
            if *h <= last_h {
                return Err(Error::InvalidModule("filtration indices must increase".into()));
            }
            if vs.iter().any(|v| v.len() != self.dim || v.iter().any(|x| x.p() != p)) {
                return Err(Error::InvalidModule("filtration vector of the wrong shape".into()));
            }
            let (d, _) = span(vs, self.dim)?;
            if j == 0 && d != self.dim {
                return Err(Error::InvalidModule("the first filtration step must be the whole space".into()));
            }
            if d > last_dim {
                return Err(Error::InvalidModule("filtration must decrease".into()));
            }
            last_h = *h;
            last_dim = d;
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.mat_phi[0][0].p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat_phi(&self) -> &Matrix {
        &self.mat_phi
    }

    pub fn mat_n(&self) -> &Matrix {
        &self.mat_n
    }

    pub fn filtration(&self) -> &[(i64, Vec<Vector>)] {
        &self.filtration
    }

    fn det_phi(&self) -> Result<PadicScalar> {
        let m = &self.mat_phi;
        if self.dim == 1 {
            return Ok(m[0][0]);
        }
        let ad = m[0][0].mul(&m[1][1])?;
        let bc = m[0][1].mul(&m[1][0])?;
        ad.sub(&bc)
    }

    pub fn t_n(&self) -> Result<Q> {
        let m = &self.mat_phi;
        if self.dim == 1 {
            return m[0][0].val();
        }
        let ad = m[0][0].mul(&m[1][1])?;
        let bc = m[0][1].mul(&m[1][0])?.neg();
        ad.val_of_sum(&bc)?.finite().ok_or_else(|| Error::precision("valuation of det(φ) not determined"))
    }

    pub fn t_h(&self) -> Result<i64> {
        let dims: Vec<usize> = self.filtration.iter().map(|(_, vs)| span(vs, self.dim).map(|s| s.0)).collect::<Result<_>>()?;
        let mut total = 0i64;
        for (j, (h, _)) in self.filtration.iter().enumerate() {
            let next = dims.get(j + 1).copied().unwrap_or(0);
            total += (dims[j] - next) as i64 * h;
        }
        Ok(total)
    }

    /// `(max h with w ∈ Fil^h, decided within precision)`.
    fn line_t_h(&self, w: &[PadicScalar]) -> Result<(i64, bool)> {
        let mut best = self.filtration[0].0;
        let mut loose = false;
        for (h, vs) in &self.filtration {
            let (d, line) = span(vs, self.dim)?;
            let inside = match d {
                0 => false,
                2 => true,
                _ => {
                    let det = det2(line.as_ref().unwrap(), w)?;
                    if is_zero(&det) && !det.is_exact_zero() {
                        loose = true;
                    }
                    is_zero(&det)
                }
            };
            if !inside {
                break;
            }
            best = *h;
        }
        Ok((best, loose))
    }

    fn max_jump(&self) -> Result<i64> {
        let mut best = self.filtration[0].0;
        for (h, vs) in &self.filtration {
            if span(vs, self.dim)?.0 > 0 {
                best = *h;
            }
        }
        Ok(best)
    }

    fn newton(&self) -> Result<(Q, Q)> {
        let m = &self.mat_phi;
        let tr = m[0][0].add(&m[1][1])?;
        quadratic_newton_slopes(&tr.neg(), &self.det_phi()?)
    }

    fn eigenvector(&self, lambda: &PadicScalar) -> Result<Option<Vector>> {
        let m = &self.mat_phi;
        let first = vec![m[0][1], lambda.sub(&m[0][0])?];
        if first.iter().any(|x| !is_zero(x)) {
            return Ok(Some(first));
        }
        let second = vec![lambda.sub(&m[1][1])?, m[1][0]];
        if second.iter().any(|x| !is_zero(x)) {
            return Ok(Some(second));
        }
        Ok(None)
    }

    fn n_stable(&self, w: &[PadicScalar]) -> Result<bool> {
        let nw = apply(&self.mat_n, w)?;
        Ok(is_zero(&det2(w, &nw)?))
    }

    fn lines(&self) -> Result<Subobjects> {
        let m = &self.mat_phi;
        if is_zero(&m[0][1]) && is_zero(&m[1][0]) && is_zero(&m[0][0].sub(&m[1][1])?) {
            let eigenvalue = m[0][0];
            return Ok(Subobjects::EveryLine { eigenvalue, t_n: eigenvalue.val()?, max_t_h: self.max_jump()? });
        }
        let tr = m[0][0].add(&m[1][1])?;
        let det = self.det_phi()?;
        let disc = tr.mul(&tr)?.sub(&det.mul(&exact(self.p(), 4))?)?;
        let root = if is_zero(&disc) { Some(PadicScalar::zero(self.p())) } else { disc.sqrt()? };
        let root = match root {
            None => return Ok(Subobjects::NoRationalLine { slopes: self.newton()? }),
            Some(r) => r,
        };
        let half = PadicScalar::from_ratio(self.p(), 1, 2, arith::max_precision(self.p()))?;
        let mut roots = vec![tr.add(&root)?.mul(&half)?];
        if !is_zero(&root) {
            roots.push(tr.sub(&root)?.mul(&half)?);
        }
        let mut lines = Vec::new();
        for lambda in roots {
            let w = self.eigenvector(&lambda)?.ok_or_else(|| Error::precision("eigenvector lost to cancellation"))?;
            if !self.n_stable(&w)? {
                continue;
            }
            let (t_h, within_precision) = self.line_t_h(&w)?;
            lines.push(StableLine { vector: w, eigenvalue: lambda, t_h, t_n: lambda.val()?, within_precision });
        }
        Ok(Subobjects::Lines { lines })
    }

    pub fn subobjects(&self) -> Result<Subobjects> {
        if self.dim == 1 {
            return Ok(Subobjects::None);
        }
        match self.lines() {
            Ok(s) => Ok(s),
            Err(err @ (Error::UnsupportedRamification(_) | Error::InsufficientPrecision(_))) => {
                Ok(Subobjects::Unresolved { slopes: self.newton()?, reason: err.to_string() })
            }
            Err(err) => Err(err),
        }
    }

    pub fn is_admissible(&self) -> Result<AdmissibilityReport> {
        let t_h = self.t_h()?;
        let t_n = self.t_n()?;
        let subobjects = self.subobjects()?;
        let mut cert = vec![format!("D: t_H = {t_h}, t_N = {t_n}")];
        let mut verdict = Admissibility::Admissible;
        if Q::from_integer(t_h) != t_n {
            cert.push(format!("D fails: t_H = {t_h} != t_N = {t_n}"));
            verdict = Admissibility::NotAdmissible;
        }
        let mut check = |label: String, th: i64, tn: Q, cert: &mut Vec<String>| {
            if Q::from_integer(th) > tn {
                cert.push(format!("{label} fails: t_H = {th} > t_N = {tn}"));
                verdict = Admissibility::NotAdmissible;
            } else {
                cert.push(format!("{label}: t_H = {th} <= t_N = {tn}"));
            }
        };
        match &subobjects {
            Subobjects::None => {}
            Subobjects::Lines { lines } => {
                if lines.is_empty() {
                    cert.push("no φ- and N-stable line".into());
                }
                for l in lines {
                    let label = format!("line E·({}, {})", l.vector[0], l.vector[1]);
                    check(label, l.t_h, l.t_n, &mut cert);
                    if l.within_precision {
                        cert.push("  containment in the filtration decided within precision".into());
                    }
                }
            }
            Subobjects::EveryLine { t_n, max_t_h, .. } => {
                check("every line (scalar Frobenius), worst case".into(), *max_t_h, *t_n, &mut cert);
            }
            Subobjects::NoRationalLine { slopes } => {
                cert.push(format!("eigenvalues outside E (slopes {}, {}): no stable line over E", slopes.0, slopes.1));
            }
            Subobjects::Unresolved { slopes, reason } => {
                cert.push(format!("stable lines not computed ({reason}); slopes {}, {}", slopes.0, slopes.1));
                let worst = self.max_jump()?;
                if Q::from_integer(worst) <= slopes.0 {
                    cert.push(format!("every line: t_H <= {worst} <= {} <= t_N", slopes.0));
                } else if verdict == Admissibility::Admissible {
                    verdict = Admissibility::Undecided;
                }
            }
        }
        Ok(AdmissibilityReport { verdict, t_h, t_n, certificate: cert, subobjects })
    }

    /// Conjugate all data by an invertible change of basis `P` (new basis = columns of `P`).
    pub fn change_basis(&self, basis: &Matrix) -> Result<Self> {
        let inv = inverse2(basis)?;
        let phi = mat_mul(&inv, &mat_mul(&self.mat_phi, basis)?)?;
        let n = mat_mul(&inv, &mat_mul(&self.mat_n, basis)?)?;
        let filtration = self
            .filtration
            .iter()
            .map(|(h, vs)| Ok((*h, vs.iter().map(|v| apply(&inv, v)).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<_>>()?;
        Self::new(phi, n, filtration)
    }
}

fn inverse2(m: &Matrix) -> Result<Matrix> {
    if m.len() == 1 {
        return Ok(vec![vec![m[0][0].inv()?]]);
    }
    let det = cross(&m[0][0], &m[1][1], &m[0][1], &m[1][0])?;
    let di = det.inv()?;
    Ok(vec![
        vec![m[1][1].mul(&di)?, m[0][1].neg().mul(&di)?],
        vec![m[1][0].neg().mul(&di)?, m[0][0].mul(&di)?],
    ])
}

/// The crystalline module with `Mat(φ) = [[0, -1], [p^{k-1}, a_p]]`, `N = 0`,
/// and filtration jumping from `D` to `E·e1` at `1` and to `0` at `k`.
pub fn build_dkap(p: u64, k: i64, a_p: PadicScalar) -> Result<FilteredPhiNModule> {
    if k < 2 {
        return Err(Error::BadWeight(k));
    }
    if !a_p.is_exact_zero() {
        match a_p.valuation().compare(Q::from_integer(0)) {
            Some(std::cmp::Ordering::Greater) => {}
            _ => return Err(Error::Precondition("val(a_p) must be positive".into())),
        }
    }
    let z = PadicScalar::zero(p);
    let phi = vec![vec![z, exact(p, -1)], vec![exact(p, 1).shift(k - 1), a_p]];
    let n = vec![vec![z, z], vec![z, z]];
    let full = vec![vec![exact(p, 1), z], vec![z, exact(p, 1)]];
    let line = vec![vec![exact(p, 1), z]];
    FilteredPhiNModule::new(phi, n, vec![(0, full), (k - 1, line)])
}

/// The semistable module with `Mat(φ) = diag(p^{k/2}, p^{k/2-1})`, `N e1 = e2`,
/// and filtration line `E(e1 + ℒ e2)` for `1 <= i <= k-1`.
pub fn build_dkl(p: u64, k: i64, l: PadicScalar) -> Result<FilteredPhiNModule> {
    if k <= 2 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let z = PadicScalar::zero(p);
    let one = exact(p, 1);
    let phi = vec![vec![one.shift(k / 2), z], vec![z, one.shift(k / 2 - 1)]];
    let n = vec![vec![z, z], vec![one, z]];
    let full = vec![vec![one, z], vec![z, one]];
    FilteredPhiNModule::new(phi, n, vec![(0, full), (k - 1, vec![vec![one, l]])])
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    schema: String,
    dim: usize,
    mat_phi: Matrix,
    #[serde(rename = "mat_N")]
    mat_n: Matrix,
    filtration: Vec<(i64, Vec<Vector>)>,
}

pub const FILTERED_SCHEMA: &str = "pgk.filtered_module/1";

impl Serialize for FilteredPhiNModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleJson {
            schema: FILTERED_SCHEMA.into(),
            dim: self.dim,
            mat_phi: self.mat_phi.clone(),
            mat_n: self.mat_n.clone(),
            filtration: self.filtration.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FilteredPhiNModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ModuleJson::deserialize(d)?;
        if j.schema != FILTERED_SCHEMA {
            return Err(D::Error::custom(format!("unexpected schema {}", j.schema)));
        }
        if j.mat_phi.len() != j.dim {
            return Err(D::Error::custom("declared dimension differs from matrix size"));
        }
        FilteredPhiNModule::new(j.mat_phi, j.mat_n, j.filtration).map_err(D::Error::custom)
    }
}
