//! The ω-index engine: winding of the unitary part of a path plus an endpoint
//! correction, perturbation ladders for `μ±`, and per-spec index records.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex;
#[allow(unused_imports)] // float math is inherent in `core` on recent toolchains
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::generators::{Block, PathSpec};
use crate::linalg::{self, CMatrix};
use crate::paths::{self, BlockPath};
use crate::{Error, Result, Tolerances};

/// Largest sampling grid tried before the winding is declared unresolvable.
const MAX_STEPS: usize = 1 << 23;
/// Maximal argument increment between grid points.
const MAX_INCREMENT: f64 = PI / 4.0;
/// Raw index values must lie this close to an integer.
const INTEGRALITY_TOL: f64 = 1e-6;
/// Endpoint eigenvalues of the unitary comparison closer than this to 1 mean
/// the endpoint is degenerate for the chosen ω.
const DEGENERACY_TOL: f64 = 1e-9;
/// Number of rungs on a perturbation ladder.
const LADDER_RUNGS: i32 = 7;

/// Result of one unperturbed or perturbed index evaluation.
#[derive(Clone, Copy, Debug)]
struct RawIndex {
    value: f64,
    endpoint_gap: f64,
}

impl RawIndex {
    fn integer(&self) -> Option<i64> {
        let r = self.value.round();
        if (self.value - r).abs() <= INTEGRALITY_TOL && self.endpoint_gap > DEGENERACY_TOL {
            Some(r as i64)
        } else {
            None
        }
    }
}

/// `M(t)·exp(σtJ)`, with `exp(φJ) = cos φ·I + sin φ·J`.
fn perturbed(path: &BlockPath, t: f64, sigma: f64) -> Result<DMatrix<f64>> {
    let m = path.at(t)?;
    if sigma == 0.0 {
        return Ok(m);
    }
    let n = path.half_dim();
    let (c, s) = ((sigma * t).cos(), (sigma * t).sin());
    let mut r = DMatrix::identity(2 * n, 2 * n) * c;
    for i in 0..n {
        r[(i, n + i)] = -s;
        r[(n + i, i)] = s;
    }
    Ok(m * r)
}

/// `arg det((b − c) + i(a + d))` for `M = [[a, b], [c, d]]`; up to a constant
/// this is `−½ arg det` of the unitary `U(M)` below.
fn arg_det_frame(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows() / 2;
    if n == 1 {
        return (m[(0, 0)] + m[(1, 1)]).atan2(m[(0, 1)] - m[(1, 0)]);
    }
    let z = CMatrix::from_fn(n, n, |i, j| {
        Complex::new(m[(i, n + j)] - m[(n + i, j)], m[(i, j)] + m[(n + i, n + j)])
    });
    z.lu().determinant().arg()
}

fn wrap_pi(x: f64) -> f64 {
    let mut y = (x + PI) % (2.0 * PI);
    if y < 0.0 {
        y += 2.0 * PI;
    }
    y - PI
}

/// Total change of `arg det` of the frame along the path, sampled on a grid
/// refined until every increment is below π/4.
fn frame_winding(path: &BlockPath, sigma: f64) -> Result<f64> {
    if let Some(total) = path.rotation_total() {
        // For a planar rotation by φ(t) the frame determinant is 2i·e^{iφ(t)}.
        return Ok(total + sigma);
    }
    let n = path.half_dim() as f64;
    let rate = (path.speed() + sigma.abs()) * n;
    let mut steps = ((8.0 * rate / PI).ceil() as usize).max(16);
    loop {
        if steps > MAX_STEPS {
            return Err(Error::numerical(format!(
                "winding grid refinement exceeded {MAX_STEPS} steps"
            )));
        }
        let mut prev = arg_det_frame(&perturbed(path, 0.0, sigma)?);
        let mut total = 0.0;
        let mut resolved = true;
        for j in 1..=steps {
            let a = arg_det_frame(&perturbed(path, j as f64 / steps as f64, sigma)?);
            let d = wrap_pi(a - prev);
            if d.abs() >= MAX_INCREMENT {
                resolved = false;
                break;
            }
            total += d;
            prev = a;
        }
        if resolved {
            return Ok(total);
        }
        steps *= 2;
    }
}

/// The unitary `U = G F⁻¹` attached to the graph of `M` (complex entries
/// allowed so that `ωI` can be used as reference), where
/// `F = [V₊*; V₋*M]`, `G = [V₋*; V₊*M]` and `V± = [I; ±iI]/√2` span the
/// eigenspaces of `iJ`.
fn graph_unitary(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows() / 2;
    let h = Complex::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex::new(0.0, 1.0);
    // rows of V₊* are (e_k, −i e_k)/√2, rows of V₋* are (e_k, i e_k)/√2
    let v_plus_adj = CMatrix::from_fn(n, 2 * n, |r, c| {
        if c == r {
            h
        } else if c == n + r {
            -i * h
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let v_minus_adj = v_plus_adj.map(|z| z.conj());
    let mut f = CMatrix::zeros(2 * n, 2 * n);
    let mut g = CMatrix::zeros(2 * n, 2 * n);
    f.view_mut((0, 0), (n, 2 * n)).copy_from(&v_plus_adj);
    f.view_mut((n, 0), (n, 2 * n)).copy_from(&(&v_minus_adj * m));
    g.view_mut((0, 0), (n, 2 * n)).copy_from(&v_minus_adj);
    g.view_mut((n, 0), (n, 2 * n)).copy_from(&(&v_plus_adj * m));
    let f_inv = f
        .try_inverse()
        .ok_or_else(|| Error::numerical("graph frame is singular"))?;
    Ok(g * f_inv)
}

/// Eigen-angles in `[0, 2π)` of `U(ωI)⁻¹U(M)`; angles of eigenvalues within
/// the degeneracy tolerance of 1 are set to 0. Also returns the distance of
/// the nearest eigenvalue to 1.
fn comparison_angles(u_ref: &CMatrix, m: &CMatrix) -> Result<(Vec<f64>, f64)> {
    let w = u_ref.adjoint() * graph_unitary(m)?;
    let ev = nalgebra::linalg::Schur::try_new(w, f64::EPSILON, 100_000)
        .and_then(|s| s.eigenvalues())
        .ok_or_else(|| Error::numerical("unitary eigen-decomposition did not converge"))?;
    let mut gap = f64::INFINITY;
    let angles = ev
        .iter()
        .map(|z| {
            let d = (z - Complex::new(1.0, 0.0)).norm();
            gap = gap.min(d);
            if d < DEGENERACY_TOL {
                0.0
            } else {
                let a = z.im.atan2(z.re);
                if a < 0.0 { a + 2.0 * PI } else { a }
            }
        })
        .collect();
    Ok((angles, gap))
}

fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex::new(x, 0.0))
}

/// ω-index of the (possibly perturbed) path. The sign is fixed so that
/// positive rotations have positive index.
fn raw_index(path: &BlockPath, omega: Complex<f64>, sigma: f64) -> Result<RawIndex> {
    let n = path.half_dim();
    let delta_frame = frame_winding(path, sigma)?;
    let u_ref = graph_unitary(&(CMatrix::identity(2 * n, 2 * n) * omega))?;
    let (start, _) = comparison_angles(&u_ref, &CMatrix::identity(2 * n, 2 * n))?;
    let (end, gap) = comparison_angles(&u_ref, &to_complex(&perturbed(path, 1.0, sigma)?))?;
    let nonzero = |a: &[f64]| a.iter().filter(|&&x| x != 0.0).count() as f64;
    let sum = |a: &[f64]| a.iter().sum::<f64>();
    let delta_unitary = -2.0 * delta_frame;
    let rs = delta_unitary / (2.0 * PI) - sum(&end) / (2.0 * PI) + sum(&start) / (2.0 * PI)
        + 0.5 * (nonzero(&end) - nonzero(&start));
    Ok(RawIndex { value: -rs, endpoint_gap: gap })
}

/// Walks the perturbation ladder `s₀, s₀/10, …` and returns the first value
/// reproduced on two consecutive rungs.
fn ladder<F>(s0: f64, what: &str, mut eval: F) -> Result<(i64, i64)>
where
    F: FnMut(f64) -> Result<Option<(i64, i64)>>,
{
    let mut prev: Option<(i64, i64)> = None;
    let mut seen = Vec::new();
    for j in 0..LADDER_RUNGS {
        let s = s0 * 10f64.powi(-j);
        let cur = eval(s)?;
        seen.push(cur);
        if let (Some(p), Some(c)) = (prev, cur) {
            if p == c {
                return Ok(c);
            }
        }
        prev = cur;
    }
    Err(Error::numerical(format!(
        "{what}: perturbation ladder did not stabilize (rungs: {seen:?})"
    )))
}

fn start_size(gap: f64, n: usize) -> f64 {
    1e-3f64.min((gap / 4.0).powi(2)) / n as f64
}

/// Index data of one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockIndex {
    pub nu: u32,
    pub mu_minus: i64,
    pub mu_plus: i64,
}

/// `(μ₋, μ₊)` and `ν` of one block, from its capped homotopy representative.
pub fn block_index(block: &Block, tol: &Tolerances) -> Result<BlockIndex> {
    path_index(&BlockPath::representative(block, tol)?, tol).map_err(|e| match e {
        Error::Consistency(msg) => Error::Consistency(format!("{} block: {msg}", block.spec.kind_name())),
        other => other,
    })
}

/// `(μ₋, μ₊)` and `ν` of an explicit block path.
pub fn path_index(path: &BlockPath, tol: &Tolerances) -> Result<BlockIndex> {
    let end = path.end()?;
    let one = Complex::new(1.0, 0.0);
    let nu = linalg::nullity_at(&end, one, tol)?;
    if nu == 0 {
        let raw = raw_index(path, one, 0.0)?;
        if let Some(i) = raw.integer() {
            return Ok(BlockIndex { nu, mu_minus: i, mu_plus: i });
        }
    }
    let gap = linalg::cluster_gap(&end, one, tol)?;
    let (lo, hi) = ladder(start_size(gap, path.half_dim()), "index", |s| {
        let lo = raw_index(path, one, -s)?.integer();
        let hi = raw_index(path, one, s)?.integer();
        Ok(lo.zip(hi))
    })?;
    let (mu_minus, mu_plus) = (lo.min(hi), lo.max(hi));
    if (mu_plus - mu_minus) as u32 != nu || mu_plus < mu_minus {
        return Err(Error::Consistency(format!("μ₊ − μ₋ = {} but ν = {nu}", mu_plus - mu_minus)));
    }
    Ok(BlockIndex { nu, mu_minus, mu_plus })
}

/// ω-index `i_ω` of one block (the lower limit at degenerate endpoints).
pub fn block_omega_index(block: &Block, omega: &Angle, tol: &Tolerances) -> Result<i64> {
    let path = BlockPath::representative(block, tol)?;
    omega_index_on(&path, omega.unit(), tol)
}

fn omega_index_on(path: &BlockPath, omega: Complex<f64>, tol: &Tolerances) -> Result<i64> {
    let end = path.end()?;
    if linalg::nullity_at(&end, omega, tol)? == 0 {
        if let Some(i) = raw_index(path, omega, 0.0)?.integer() {
            return Ok(i);
        }
    }
    let gap = linalg::cluster_gap(&end, omega, tol)?;
    let (i, _) = ladder(start_size(gap, path.half_dim()), "ω-index", |s| {
        Ok(raw_index(path, omega, -s)?.integer().map(|i| (i, i)))
    })?;
    Ok(i)
}

/// Splitting numbers `(S⁺, S⁻)` of one block at `ω`, as the jumps of the
/// ω-index when `ω` is rotated slightly counter-clockwise / clockwise.
pub fn block_splitting_jump(block: &Block, omega: &Angle, tol: &Tolerances) -> Result<(u32, u32)> {
    let path = BlockPath::representative(block, tol)?;
    let end = path.end()?;
    let w = omega.unit();
    let nu = linalg::nullity_at(&end, w, tol)?;
    if nu == 0 {
        return Ok((0, 0));
    }
    let base = omega_index_on(&path, w, tol)?;
    let gap = linalg::cluster_gap(&end, w, tol)?;
    let mut eps = (gap / 2.0).min(0.4);
    for _ in 0..6 {
        let side = |sign: f64| -> Result<Option<i64>> {
            let r = Complex::new(0.0, sign * eps).exp();
            Ok(raw_index(&path, w * r, 0.0)?.integer())
        };
        if let (Some(plus), Some(minus)) = (side(1.0)?, side(-1.0)?) {
            let (sp, sm) = (plus - base, minus - base);
            if sp < 0 || sm < 0 || sp > i64::from(nu) || sm > i64::from(nu) {
                return Err(Error::Consistency(format!(
                    "{} block at ω = {omega}: splitting numbers ({sp}, {sm}) outside [0, ν_ω = {nu}]",
                    block.spec.kind_name()
                )));
            }
            return Ok((sp as u32, sm as u32));
        }
        eps /= 2.0;
    }
    Err(Error::numerical(format!(
        "{} block at ω = {omega}: neighbouring ω-indices stayed degenerate",
        block.spec.kind_name()
    )))
}

/// Index data of a whole spec: `i = μ₋`, `ν`, `μ±` and the mean index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexRecord {
    pub i: i64,
    pub nu: u32,
    pub mu_minus: i64,
    pub mu_plus: i64,
    pub mean: f64,
}

/// `(μ₋, μ₊)` of a spec, summed over blocks.
pub fn mu_pm(spec: &PathSpec, tol: &Tolerances) -> Result<(i64, i64)> {
    let r = index_record(spec, tol)?;
    Ok((r.mu_minus, r.mu_plus))
}

/// Index record of the spec itself.
pub fn index_record(spec: &PathSpec, tol: &Tolerances) -> Result<IndexRecord> {
    spec.validate()?;
    let mut rec = IndexRecord { i: 0, nu: 0, mu_minus: 0, mu_plus: 0, mean: 0.0 };
    for b in &spec.blocks {
        let bi = block_index(b, tol)?;
        rec.nu += bi.nu;
        rec.mu_minus += bi.mu_minus;
        rec.mu_plus += bi.mu_plus;
    }
    rec.i = rec.mu_minus;
    rec.mean = paths::mean_index(spec, tol)?.value;
    Ok(rec)
}

/// Index record of the iterate `γ^m`.
pub fn index_at_iterate(spec: &PathSpec, m: u64, tol: &Tolerances) -> Result<IndexRecord> {
    index_record(&paths::iterate(spec, m)?, tol)
}
