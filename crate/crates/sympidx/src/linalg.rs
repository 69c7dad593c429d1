//! Symplectic linear algebra: the standard structure `J`, validated matrices,
//! Darboux direct sums, unit-circle spectra, nullities and the cnu/vnu split.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::linalg::{Schur, SVD};
use nalgebra::DMatrix;
use num_complex::Complex;
#[allow(unused_imports)] // float math is inherent in `core` on recent toolchains
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::{Error, Result, Tolerances};

pub type CMatrix = DMatrix<Complex<f64>>;

/// `J = [[0, −I], [I, 0]]` in Darboux coordinates `(p, q)`.
pub fn j_matrix(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

pub(crate) fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn require_even_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(alloc::format!(
            "expected a square matrix, got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || m.nrows() % 2 != 0 {
        return Err(Error::Dimension(alloc::format!(
            "symplectic matrices have positive even dimension, got {}",
            m.nrows()
        )));
    }
    Ok(m.nrows() / 2)
}

/// `‖MᵀJM − J‖∞ / max(1, ‖M‖∞²)`: the symplectic defect relative to the
/// rounding scale of the product.
pub fn symplectic_defect(m: &DMatrix<f64>) -> Result<f64> {
    let n = require_even_square(m)?;
    let j = j_matrix(n);
    let defect = norm_inf(&(m.transpose() * &j * m - &j));
    let scale = norm_inf(m).powi(2).max(1.0);
    Ok(defect / scale)
}

/// Whether `MᵀJM = J` within `tol.tol_sym` (relative to the entry scale).
pub fn check_symplectic(m: &DMatrix<f64>, tol: &Tolerances) -> Result<bool> {
    Ok(symplectic_defect(m)? <= tol.tol_sym)
}

/// A real `2n×2n` matrix validated to satisfy `MᵀJM = J`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    entries: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(entries: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        let n = require_even_square(&entries)?;
        let defect = symplectic_defect(&entries)?;
        if !(defect <= tol.tol_sym) {
            return Err(Error::Validation(alloc::format!(
                "matrix is not symplectic: relative defect {defect:e} exceeds {:e}",
                tol.tol_sym
            )));
        }
        Ok(SymplecticMatrix { n, entries })
    }

    /// Wrap a matrix known to be symplectic by construction.
    pub(crate) fn trusted(entries: DMatrix<f64>) -> Self {
        SymplecticMatrix { n: entries.nrows() / 2, entries }
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix { n, entries: DMatrix::identity(2 * n, 2 * n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension("product of symplectic matrices of different size".into()));
        }
        Ok(SymplecticMatrix::trusted(&self.entries * &other.entries))
    }

    /// `M^m` by repeated squaring.
    pub fn pow(&self, mut m: u64) -> SymplecticMatrix {
        let mut base = self.entries.clone();
        let mut acc = DMatrix::identity(2 * self.n, 2 * self.n);
        while m > 0 {
            if m & 1 == 1 {
                acc = &acc * &base;
            }
            m >>= 1;
            if m > 0 {
                base = &base * &base;
            }
        }
        SymplecticMatrix::trusted(acc)
    }
}

/// Darboux direct sum of raw `2nᵢ×2nᵢ` blocks: the `p` coordinates of all
/// blocks come first, then the `q` coordinates, each in block order.
pub fn direct_sum_raw(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows() / 2).sum();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    let mut offset = 0;
    for b in blocks {
        let k = b.nrows() / 2;
        let map = |i: usize| if i < k { offset + i } else { n + offset + (i - k) };
        for r in 0..2 * k {
            for c in 0..2 * k {
                out[(map(r), map(c))] = b[(r, c)];
            }
        }
        offset += k;
    }
    out
}

/// `A ⋄ B`: the symplectic direct sum in Darboux coordinates.
pub fn direct_sum(a: &SymplecticMatrix, b: &SymplecticMatrix) -> SymplecticMatrix {
    SymplecticMatrix::trusted(direct_sum_raw(&[&a.entries, &b.entries]))
}

/// A unit-circle eigenvalue with its multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitEigenvalue {
    pub angle: Angle,
    pub alg_mult: u32,
    pub geo_mult: u32,
}

/// Unit-circle part of a spectrum plus a summary of the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub unit: Vec<UnitEigenvalue>,
    pub has_hyperbolic_part: bool,
}

fn singular_values_real(m: DMatrix<f64>) -> Result<Vec<f64>> {
    let svd = SVD::try_new(m, false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::numerical("singular value decomposition did not converge"))?;
    Ok(svd.singular_values.iter().copied().collect())
}

fn singular_values_complex(m: CMatrix) -> Result<Vec<f64>> {
    let svd = SVD::try_new(m, false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::numerical("singular value decomposition did not converge"))?;
    Ok(svd.singular_values.iter().copied().collect())
}

/// Singular values below `tol_rank · √s` count as zero, where `s` is the
/// larger of the scale of `M` and `σ_max(M − ωI)`, floored at 1.
///
/// The floor keeps the threshold meaningful when `M − ωI` is itself tiny
/// (`M^m ≈ I`). The square root keeps it below the genuine small singular
/// values of strongly hyperbolic iterates, whose `σ_max` grows like `λ^m`
/// while their smallest singular value stays near `1 − λ^{−m}`.
fn count_null(sv: &[f64], scale: f64, tol: &Tolerances) -> u32 {
    let max = sv.iter().copied().fold(scale.max(1.0), f64::max);
    let threshold = tol.tol_rank * max.sqrt();
    sv.iter().filter(|&&s| s <= threshold).count() as u32
}

/// 2-norm condition number `σ_max/σ_min`.
pub fn condition_estimate(m: &DMatrix<f64>) -> f64 {
    match singular_values_real(m.clone()) {
        Ok(sv) => {
            let max = sv.iter().copied().fold(0.0, f64::max);
            let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
            if min > 0.0 { max / min } else { f64::INFINITY }
        }
        Err(_) => f64::INFINITY,
    }
}

/// `dim_C ker(M − ωI)` for an arbitrary complex point `ω`.
pub fn nullity_at(m: &DMatrix<f64>, omega: Complex<f64>, tol: &Tolerances) -> Result<u32> {
    require_even_square(m)?;
    let k = m.nrows();
    let sv = if omega.im == 0.0 {
        singular_values_real(m - DMatrix::identity(k, k) * omega.re)?
    } else {
        let mc: CMatrix = m.map(|x| Complex::new(x, 0.0));
        singular_values_complex(mc - CMatrix::identity(k, k) * omega)?
    };
    Ok(count_null(&sv, norm_inf(m) / (k as f64).sqrt(), tol))
}

/// `ν_ω(M) = dim_C ker_C(M − e^{iθ}I)`.
pub fn nullity(m: &SymplecticMatrix, omega: &Angle, tol: &Tolerances) -> Result<u32> {
    nullity_at(&m.entries, omega.unit(), tol)
}

/// `Σ_{ω^m = 1} ν_ω(M)`, evaluated directly at every `m`-th root of unity.
pub fn root_of_unity_nullity(m: &SymplecticMatrix, order: u64, tol: &Tolerances) -> Result<u32> {
    if order == 0 {
        return Err(Error::Validation("root-of-unity order must be ≥ 1".into()));
    }
    let order = i64::try_from(order).map_err(|_| Error::Validation("root-of-unity order too large".into()))?;
    let mut total = 0;
    for j in 0..order {
        total += nullity(m, &Angle::pi_fraction(2 * j, order)?, tol)?;
    }
    Ok(total)
}

/// All eigenvalues of a real matrix, with a trace-residual sanity check.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    require_even_square(m)?;
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::numerical("matrix has non-finite entries"));
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 100_000).ok_or_else(|| {
        Error::Numerical {
            message: "eigen-decomposition did not converge".into(),
            condition: condition_estimate(m),
        }
    })?;
    let ev: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    let sum: Complex<f64> = ev.iter().copied().sum();
    let scale = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    if (sum.re - m.trace()).abs() > 1e-8 * scale * m.nrows() as f64 || sum.im.abs() > 1e-8 * scale {
        return Err(Error::Numerical {
            message: "eigen-decomposition residual above threshold".into(),
            condition: condition_estimate(m),
        });
    }
    Ok(ev)
}

fn single_linkage(points: &[Complex<f64>], members: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let next = p[i];
            p[i] = r;
            i = next;
        }
        r
    }
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if (points[members[a]] - points[members[b]]).norm() <= radius {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for a in 0..members.len() {
        let r = find(&mut parent, a);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(members[a]),
            None => groups.push((r, vec![members[a]])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Group numerically split eigenvalues of the same Jordan block. A group is
/// kept only if `M − cI` is numerically singular at its centroid `c`;
/// otherwise it is re-grouped with a smaller radius.
fn resolve_clusters(
    m: &DMatrix<f64>,
    points: &[Complex<f64>],
    members: &[usize],
    radius: f64,
    tol: &Tolerances,
    out: &mut Vec<(Complex<f64>, Vec<usize>)>,
) -> Result<()> {
    for group in single_linkage(points, members, radius) {
        if group.len() == 1 {
            out.push((points[group[0]], group));
            continue;
        }
        let c = group.iter().map(|&i| points[i]).sum::<Complex<f64>>() / group.len() as f64;
        if nullity_at(m, c, tol)? >= 1 || radius < 1e-7 {
            out.push((c, group));
        } else {
            resolve_clusters(m, points, &group, radius / 10.0, tol, out)?;
        }
    }
    Ok(())
}

/// Distance from `ω` to the nearest eigenvalue of `m` outside the eigenvalue
/// cluster at `ω` (2 when there is none), so that numerically split Jordan
/// blocks at `ω` do not count as neighbours.
pub fn cluster_gap(m: &DMatrix<f64>, omega: Complex<f64>, tol: &Tolerances) -> Result<f64> {
    let ev = eigenvalues(m)?;
    let members: Vec<usize> = (0..ev.len()).collect();
    let mut clusters = Vec::new();
    resolve_clusters(m, &ev, &members, tol.cluster_radius, tol, &mut clusters)?;
    let own = clusters
        .iter()
        .filter(|(c, _)| (c - omega).norm() <= tol.cluster_radius)
        .min_by(|a, b| (a.0 - omega).norm().total_cmp(&(b.0 - omega).norm()))
        .map(|(_, g)| g.clone())
        .unwrap_or_default();
    Ok(ev
        .iter()
        .enumerate()
        .filter(|(i, _)| !own.contains(i))
        .map(|(_, z)| (z - omega).norm())
        .fold(2.0, f64::min))
}

/// Spectrum on the unit circle, with exact snapping of rational angles and
/// conjugate-pair symmetrization, plus a flag for eigenvalues off the circle.
pub fn spectrum(m: &SymplecticMatrix, tol: &Tolerances) -> Result<Spectrum> {
    let ev = eigenvalues(&m.entries)?;
    let members: Vec<usize> = (0..ev.len()).collect();
    let mut clusters = Vec::new();
    resolve_clusters(&m.entries, &ev, &members, tol.cluster_radius, tol, &mut clusters)?;
    let mut has_hyperbolic_part = false;
    let mut raw: Vec<UnitEigenvalue> = Vec::new();
    for (c, group) in clusters {
        let size = group.len() as u32;
        if (c.norm() - 1.0).abs() > tol.tol_unit {
            has_hyperbolic_part = true;
            continue;
        }
        let angle = Angle::detect(c.im.atan2(c.re), tol);
        let mut geo = nullity(m, &angle, tol)?;
        if geo == 0 {
            geo = nullity_at(&m.entries, c / c.norm(), tol)?;
        }
        let geo = geo.clamp(1, size);
        raw.push(UnitEigenvalue { angle, alg_mult: size, geo_mult: geo });
    }
    Ok(Spectrum { unit: symmetrize(raw, tol), has_hyperbolic_part })
}

fn symmetrize(raw: Vec<UnitEigenvalue>, tol: &Tolerances) -> Vec<UnitEigenvalue> {
    let radius = tol.cluster_radius;
    let mut out: Vec<UnitEigenvalue> = Vec::new();
    let mut lower: Vec<Option<UnitEigenvalue>> = Vec::new();
    for e in raw {
        let r = e.angle.radians();
        let self_conjugate = e.angle.is_zero() || e.angle.is_pi();
        if self_conjugate {
            match out.iter_mut().find(|o| o.angle == e.angle) {
                Some(o) => {
                    o.alg_mult += e.alg_mult;
                    o.geo_mult += e.geo_mult;
                }
                None => out.push(e),
            }
        } else if r < PI {
            out.push(e);
        } else {
            lower.push(Some(e));
        }
    }
    let upper: Vec<UnitEigenvalue> =
        out.iter().copied().filter(|e| !(e.angle.is_zero() || e.angle.is_pi())).collect();
    for u in upper {
        let target = u.angle.conjugate();
        let nearest = lower
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.as_ref().map(|l| (l.angle.distance(&target), i)))
            .filter(|(d, _)| *d <= radius)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, i)| i);
        let partner = nearest.and_then(|i| lower[i].take());
        let (alg, geo) = match partner {
            Some(l) => (u.alg_mult.max(l.alg_mult), u.geo_mult.max(l.geo_mult)),
            None => (u.alg_mult, u.geo_mult),
        };
        if let Some(o) = out.iter_mut().find(|o| o.angle == u.angle) {
            o.alg_mult = alg;
            o.geo_mult = geo;
        }
        out.push(UnitEigenvalue { angle: target, alg_mult: alg, geo_mult: geo });
    }
    for l in lower.into_iter().flatten() {
        out.push(UnitEigenvalue { angle: l.angle.conjugate(), ..l });
        out.push(l);
    }
    out.sort_by(|a, b| a.angle.cmp_position(&b.angle));
    out
}

/// Unit-circle eigenvalues of `M` sorted by angle.
pub fn unit_spectrum(m: &SymplecticMatrix, tol: &Tolerances) -> Result<Vec<UnitEigenvalue>> {
    Ok(spectrum(m, tol)?.unit)
}

/// Whether the iterate nullities `ν(M^m)` are constant in `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum Classification {
    /// No unit eigenvalue with rational angle in `(0, 2π)`. Numeric angles
    /// suspiciously close to a small-denominator fraction are listed.
    Cnu { undecided: Vec<Angle> },
    /// A unit eigenvalue with rational angle in `(0, 2π)`.
    Vnu { witness: UnitEigenvalue },
}

pub fn classify_cnu(m: &SymplecticMatrix, tol: &Tolerances) -> Result<Classification> {
    let unit = unit_spectrum(m, tol)?;
    if let Some(w) = unit.iter().find(|e| e.angle.is_exact() && !e.angle.is_zero()) {
        return Ok(Classification::Vnu { witness: *w });
    }
    let undecided = unit
        .iter()
        .filter_map(|e| match e.angle {
            Angle::Numeric { record, .. } if record.residual <= tol.tol_undecided => Some(e.angle),
            _ => None,
        })
        .collect();
    Ok(Classification::Cnu { undecided })
}
