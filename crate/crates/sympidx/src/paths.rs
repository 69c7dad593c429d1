//! Closed-form evaluation of generator paths, iteration, and mean indices.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, Zero};
#[allow(unused_imports)] // float math is inherent in `core` on recent toolchains
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::angle::{ratio_to_f64, Angle};
use crate::expm::expm;
use crate::generators::{assemble_quadratic_form, Block, BlockSpec, PathSpec};
use crate::linalg::{self, direct_sum_raw, j_matrix, CMatrix, SymplecticMatrix};
use crate::{Error, Result, Tolerances};

/// Unipotent blocks iterated more than this many times are represented by
/// the path at this scale: `exp(t·c·JQ)` has the same Jordan structure for
/// every `c > 0`, so index and nullity do not depend on `c`.
pub const UNIPOTENT_SCALE_CAP: u64 = 8;
/// Hyperbolic blocks are represented with `|a|·m` capped at this value.
pub const HYPERBOLIC_RATE_CAP: f64 = 4.0;

#[derive(Clone, Debug)]
enum Kernel {
    Identity,
    /// `diag(B*(ct), B(ct))` for the chain form of size `d`.
    Chain { d: usize, scale: f64 },
    /// Rotation by `total·t`; `end` is the exact end point when known.
    Rotation { total: f64, end: Option<Angle> },
    Hyperbolic { total: f64 },
    /// `exp(tA)` for a traceless 2×2 generator, in closed form.
    Planar { a: [f64; 4] },
    /// `exp(tA)` by scaling and squaring.
    Exp { a: DMatrix<f64> },
}

/// The path `t ↦ γ(t)` of one block on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct BlockPath {
    half_dim: usize,
    kernel: Kernel,
}

/// Upper-triangular Toeplitz matrix with `s^k/k!` on the k-th superdiagonal.
fn chain_b(d: usize, s: f64) -> DMatrix<f64> {
    let mut coeff = alloc::vec![1.0; d];
    for k in 1..d {
        coeff[k] = coeff[k - 1] * s / k as f64;
    }
    DMatrix::from_fn(d, d, |i, j| if j >= i { coeff[j - i] } else { 0.0 })
}

impl BlockPath {
    /// The literal path of the block, including its iterate count.
    pub fn literal(block: &Block, tol: &Tolerances) -> Result<BlockPath> {
        Self::build(block, false, tol)
    }

    /// A homotopy representative with the same index, nullity and splitting
    /// numbers, with unipotent and hyperbolic growth capped.
    pub fn representative(block: &Block, tol: &Tolerances) -> Result<BlockPath> {
        Self::build(block, true, tol)
    }

    fn build(block: &Block, capped: bool, tol: &Tolerances) -> Result<BlockPath> {
        block.spec.validate()?;
        let m = block.iterate;
        let unipotent_scale = if capped { m.min(UNIPOTENT_SCALE_CAP) } else { m } as f64;
        let half_dim = block.spec.half_dim();
        let kernel = match &block.spec {
            BlockSpec::Zero { .. } | BlockSpec::Q0 { d: 1 } => Kernel::Identity,
            BlockSpec::Q0 { d } => Kernel::Chain { d: *d as usize, scale: unipotent_scale },
            BlockSpec::QSign { d: 1, sign } => {
                Kernel::Planar { a: [0.0, 0.0, f64::from(*sign) * unipotent_scale, 0.0] }
            }
            BlockSpec::QSign { .. } => {
                let q = assemble_quadratic_form(&block.spec)?;
                Kernel::Exp { a: j_matrix(half_dim) * q * unipotent_scale }
            }
            BlockSpec::Rotation { theta } => {
                let scaled = theta.scaled(m)?;
                Kernel::Rotation { total: scaled.radians(), end: Some(scaled.end_angle(tol)) }
            }
            BlockSpec::Hyperbolic { a } => {
                let mut total = a * m as f64;
                if capped {
                    total = total.clamp(-HYPERBOLIC_RATE_CAP, HYPERBOLIC_RATE_CAP);
                }
                Kernel::Hyperbolic { total }
            }
            BlockSpec::Generic { .. } => {
                let q = assemble_quadratic_form(&block.spec)?;
                let a = j_matrix(half_dim) * q * m as f64;
                if half_dim == 1 {
                    Kernel::Planar { a: [a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]] }
                } else {
                    Kernel::Exp { a }
                }
            }
        };
        Ok(BlockPath { half_dim, kernel })
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    /// Whether this is a planar rotation path, whose winding is known in
    /// closed form.
    pub(crate) fn rotation_total(&self) -> Option<f64> {
        match self.kernel {
            Kernel::Rotation { total, .. } => Some(total),
            _ => None,
        }
    }

    /// Upper bound on the rate at which the path moves, used to seed the
    /// sampling grid.
    pub(crate) fn speed(&self) -> f64 {
        match &self.kernel {
            Kernel::Identity => 0.0,
            Kernel::Chain { d, scale } => scale * (*d as f64),
            Kernel::Rotation { total, .. } => total.abs(),
            Kernel::Hyperbolic { total } => total.abs(),
            Kernel::Planar { a } => a.iter().map(|x| x.abs()).sum(),
            Kernel::Exp { a } => linalg::norm_inf(a),
        }
    }

    /// `γ(t)`.
    pub fn at(&self, t: f64) -> Result<DMatrix<f64>> {
        let k = self.half_dim;
        Ok(match &self.kernel {
            Kernel::Identity => DMatrix::identity(2 * k, 2 * k),
            Kernel::Chain { d, scale } => {
                let b = chain_b(*d, scale * t);
                let b_star = chain_b(*d, -scale * t).transpose();
                direct_sum_blocks(&b_star, &b)
            }
            Kernel::Rotation { total, end } => {
                let (c, s) = match end {
                    Some(angle) if t == 1.0 => {
                        let u = angle.unit();
                        (u.re, u.im)
                    }
                    _ => {
                        let x = total * t;
                        (x.cos(), x.sin())
                    }
                };
                DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
            }
            Kernel::Hyperbolic { total } => {
                let e = (total * t).exp();
                DMatrix::from_row_slice(2, 2, &[e, 0.0, 0.0, 1.0 / e])
            }
            Kernel::Planar { a } => planar_exp(a, t),
            Kernel::Exp { a } => expm(&(a * t))?,
        })
    }

    pub fn end(&self) -> Result<DMatrix<f64>> {
        self.at(1.0)
    }
}

/// `diag(P, Q)` for a block acting on `p` by `P` and on `q` by `Q`.
fn direct_sum_blocks(p: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    let d = p.nrows();
    let mut out = DMatrix::zeros(2 * d, 2 * d);
    out.view_mut((0, 0), (d, d)).copy_from(p);
    out.view_mut((d, d), (d, d)).copy_from(q);
    out
}

/// `exp(tA)` for traceless 2×2 `A`, using `A² = −det(A)·I`.
fn planar_exp(a: &[f64; 4], t: f64) -> DMatrix<f64> {
    let det = a[0] * a[3] - a[1] * a[2];
    let x = det * t * t;
    let (c, s) = if x.abs() < 1e-6 {
        (1.0 - x / 2.0 + x * x / 24.0, t * (1.0 - x / 6.0 + x * x / 120.0))
    } else if x > 0.0 {
        let w = det.sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    } else {
        let w = (-det).sqrt();
        ((w * t).cosh(), (w * t).sinh() / w)
    };
    DMatrix::from_row_slice(
        2,
        2,
        &[c + s * a[0], s * a[1], s * a[2], c + s * a[3]],
    )
}

/// End matrix `γ(1)` of a single block (literal, including its iterate).
pub fn block_end(block: &Block, tol: &Tolerances) -> Result<SymplecticMatrix> {
    let m = BlockPath::literal(block, tol)?.end()?;
    SymplecticMatrix::new(m, tol)
}

/// `γ(t)` for the whole spec, assembled as a Darboux direct sum of the
/// per-block closed forms and validated symplectic.
pub fn evaluate(spec: &PathSpec, t: f64, tol: &Tolerances) -> Result<SymplecticMatrix> {
    spec.validate()?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Validation(alloc::format!("evaluation time must lie in [0,1], got {t}")));
    }
    let parts = spec
        .blocks
        .iter()
        .map(|b| BlockPath::literal(b, tol)?.at(t))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&DMatrix<f64>> = parts.iter().collect();
    let m = direct_sum_raw(&refs);
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::numerical("path evaluation overflowed"));
    }
    SymplecticMatrix::new(m, tol)
}

/// Characteristic polynomial coefficients, constant term first, by the
/// Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut coeffs = alloc::vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut mk = DMatrix::<f64>::zeros(n, n);
    let id = DMatrix::<f64>::identity(n, n);
    for k in 1..=n {
        mk = m * &mk + &id * coeffs[n - k + 1];
        coeffs[n - k] = -(m * &mk).trace() / k as f64;
    }
    coeffs
}

/// Whether `det(λI − γ(t)) = (λ − 1)^{2n}` coefficient-wise within 1e−8
/// (relative to the size of each binomial coefficient).
pub fn char_poly_check(spec: &PathSpec, t: f64, tol: &Tolerances) -> Result<bool> {
    let m = evaluate(spec, t, tol)?;
    let coeffs = characteristic_polynomial(m.entries());
    let n = coeffs.len() - 1;
    let mut binom = 1.0f64;
    for (j, c) in coeffs.iter().enumerate() {
        // coefficient of λ^j in (λ − 1)^n is C(n, j)(−1)^{n−j}
        if j > 0 {
            binom = binom * (n - j + 1) as f64 / j as f64;
        }
        let expected = if (n - j) % 2 == 0 { binom } else { -binom };
        if (c - expected).abs() > 1e-8 * expected.abs().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The m-th iterate `γ^m`, as the spec with every generator scaled by `m`.
pub fn iterate(spec: &PathSpec, m: u64) -> Result<PathSpec> {
    if m == 0 {
        return Err(Error::Validation("iterate count must be ≥ 1".into()));
    }
    let blocks = spec
        .blocks
        .iter()
        .map(|b| {
            let iterate = b
                .iterate
                .checked_mul(m)
                .ok_or_else(|| Error::Validation("iterate count overflows u64".into()))?;
            Ok(Block { spec: b.spec.clone(), iterate })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PathSpec { blocks })
}

/// Mean index `î`, with an exact rational value `î` when every contribution
/// is a known rational.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanIndex {
    pub value: f64,
    pub exact: Option<Ratio<i64>>,
}

impl MeanIndex {
    pub fn zero() -> MeanIndex {
        MeanIndex { value: 0.0, exact: Some(Ratio::zero()) }
    }

    pub fn exact(r: Ratio<i64>) -> MeanIndex {
        MeanIndex { value: ratio_to_f64(r), exact: Some(r) }
    }

    pub fn numeric(value: f64) -> MeanIndex {
        MeanIndex { value, exact: None }
    }

    pub fn add(&self, other: &MeanIndex) -> MeanIndex {
        let exact = match (self.exact, other.exact) {
            (Some(a), Some(b)) => a.checked_add(&b),
            _ => None,
        };
        match exact {
            Some(r) => MeanIndex::exact(r),
            None => MeanIndex::numeric(self.value + other.value),
        }
    }

    pub fn scaled(&self, m: u64) -> MeanIndex {
        let exact = self
            .exact
            .and_then(|r| i64::try_from(m).ok().and_then(|m| r.checked_mul(&Ratio::from_integer(m))));
        match exact {
            Some(r) => MeanIndex::exact(r),
            None => MeanIndex::numeric(self.value * m as f64),
        }
    }
}

/// Mean index of one block (per unit iterate it is homogeneous, so the
/// block's iterate count multiplies the result).
pub fn block_mean_index(block: &Block, tol: &Tolerances) -> Result<MeanIndex> {
    block.spec.validate()?;
    let base = match &block.spec {
        BlockSpec::Rotation { theta } => match theta.pi_ratio() {
            Some(r) => MeanIndex::exact(r),
            None => MeanIndex::numeric(theta.radians() / core::f64::consts::PI),
        },
        BlockSpec::Generic { .. } => {
            let q = assemble_quadratic_form(&block.spec)?;
            MeanIndex::numeric(krein_rotation_rate(&q, tol)?)
        }
        _ => MeanIndex::zero(),
    };
    Ok(base.scaled(block.iterate))
}

/// Mean index `î(γ)`, additive over blocks.
pub fn mean_index(spec: &PathSpec, tol: &Tolerances) -> Result<MeanIndex> {
    spec.validate()?;
    spec.blocks
        .iter()
        .try_fold(MeanIndex::zero(), |acc, b| Ok(acc.add(&block_mean_index(b, tol)?)))
}

/// Relative radius within which eigenvalues of `JQ` are grouped.
const KREIN_GROUP_RADIUS: f64 = 1e-2;

/// Asymptotic rotation rate of `exp(tJQ)` divided by π: every eigenvalue
/// `iω` (ω > 0) of `JQ` contributes `ω/π` times the signature of the Krein
/// form `−iJ` on its generalized eigenspace; eigenvalues off the imaginary
/// axis contribute nothing.
pub fn krein_rotation_rate(q: &DMatrix<f64>, tol: &Tolerances) -> Result<f64> {
    let k = q.nrows() / 2;
    let a = j_matrix(k) * q;
    let scale = linalg::norm_inf(&a).max(1e-300);
    let ev = nalgebra::linalg::Schur::try_new(a.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::numerical("eigen-decomposition of generator did not converge"))?
        .complex_eigenvalues();
    // group eigenvalues in the open upper half plane lying on the imaginary axis
    let mut groups: Vec<(Complex<f64>, usize)> = Vec::new();
    let radius = KREIN_GROUP_RADIUS * scale.max(1.0);
    for lambda in ev.iter() {
        if lambda.im <= 1e-9 * scale || lambda.re.abs() > 1e-6 * scale.max(1.0) {
            continue;
        }
        match groups.iter_mut().find(|(c, _)| (c - lambda).norm() <= radius) {
            Some((c, n)) => {
                *c = (*c * *n as f64 + lambda) / (*n as f64 + 1.0);
                *n += 1;
            }
            None => groups.push((*lambda, 1)),
        }
    }
    let ac: CMatrix = a.map(|x| Complex::new(x, 0.0));
    let jc: CMatrix = j_matrix(k).map(|x| Complex::new(0.0, -x));
    let mut rate = 0.0;
    for (lambda, size) in groups {
        let omega = lambda.im;
        let shifted = &ac - CMatrix::identity(2 * k, 2 * k) * Complex::new(0.0, omega);
        let mut power = shifted.clone();
        for _ in 1..size {
            power = &power * &shifted;
        }
        let svd = nalgebra::linalg::SVD::try_new(power, false, true, f64::EPSILON, 0)
            .ok_or_else(|| Error::numerical("generalized eigenspace computation failed"))?;
        let v_t = svd.v_t.ok_or_else(|| Error::numerical("missing right singular vectors"))?;
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
        let basis = CMatrix::from_fn(2 * k, size, |r, c| v_t[(order[c], r)].conj());
        let form = basis.adjoint() * &jc * &basis;
        let herm = (&form + form.adjoint()) * Complex::new(0.5, 0.0);
        let eig = nalgebra::linalg::SymmetricEigen::try_new(herm, f64::EPSILON, 100_000)
            .ok_or_else(|| Error::numerical("Krein form diagonalization failed"))?;
        let signature: i64 = eig
            .eigenvalues
            .iter()
            .map(|&x| if x > tol.tol_rank { 1 } else if x < -tol.tol_rank { -1 } else { 0 })
            .sum();
        rate += signature as f64 * omega / core::f64::consts::PI;
    }
    Ok(rate)
}
