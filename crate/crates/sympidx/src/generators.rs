//! Arnold–Givental generator blocks, their quadratic forms, and the
//! combinatorial invariants read off a block specification.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::angle::Phase;
use crate::linalg::{self, SymplecticMatrix};
use crate::{paths, Error, Result, Tolerances};

/// One generator block of a path `γ(t) = exp(tJQ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BlockSpec {
    /// Identically zero form on `R^{2ν₀}`: the constant identity path.
    Zero { nu0: u32 },
    /// The chain form `Q₀ = p₁q₂ + … + p_{d−1}q_d` on `R^{2d}`, `d` odd.
    Q0 { d: u32 },
    /// `±(Q₀ + p_d²/2)` on `R^{2d}`.
    QSign { d: u32, sign: i8 },
    /// Planar rotation `exp(tθJ)`.
    Rotation { theta: Phase },
    /// `diag(e^{at}, e^{−at})`.
    Hyperbolic { a: f64 },
    /// An arbitrary symmetric `2k×2k` form.
    Generic {
        #[serde(rename = "Q")]
        q: Vec<Vec<f64>>,
    },
}

fn one() -> u64 {
    1
}

fn is_one(m: &u64) -> bool {
    *m == 1
}

/// A generator block together with the iterate count applied to it; the
/// block's path is `t ↦ exp(iterate·t·JQ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    #[serde(flatten)]
    pub spec: BlockSpec,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub iterate: u64,
}

impl From<BlockSpec> for Block {
    fn from(spec: BlockSpec) -> Block {
        Block { spec, iterate: 1 }
    }
}

/// Direct sum of generator blocks describing a path `γ: [0,1] → Sp(2n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub blocks: Vec<Block>,
}

impl BlockSpec {
    pub fn half_dim(&self) -> usize {
        match self {
            BlockSpec::Zero { nu0 } => *nu0 as usize,
            BlockSpec::Q0 { d } | BlockSpec::QSign { d, .. } => *d as usize,
            BlockSpec::Rotation { .. } | BlockSpec::Hyperbolic { .. } => 1,
            BlockSpec::Generic { q } => q.len() / 2,
        }
    }

    /// Whether the block is one of the totally degenerate normal-form kinds.
    pub fn is_degenerate_kind(&self) -> bool {
        matches!(self, BlockSpec::Zero { .. } | BlockSpec::Q0 { .. } | BlockSpec::QSign { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BlockSpec::Zero { .. } => "zero",
            BlockSpec::Q0 { .. } => "q0",
            BlockSpec::QSign { .. } => "qsign",
            BlockSpec::Rotation { .. } => "rotation",
            BlockSpec::Hyperbolic { .. } => "hyperbolic",
            BlockSpec::Generic { .. } => "generic",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BlockSpec::Zero { nu0 } if *nu0 == 0 => {
                Err(Error::Validation("zero form needs nu0 ≥ 1".into()))
            }
            BlockSpec::Q0 { d } if *d == 0 || d % 2 == 0 => Err(Error::Validation(format!(
                "chain form needs odd d ≥ 1, got d = {d}"
            ))),
            BlockSpec::QSign { d, .. } if *d == 0 => {
                Err(Error::Validation("signed chain form needs d ≥ 1".into()))
            }
            BlockSpec::QSign { sign, .. } if *sign != 1 && *sign != -1 => Err(Error::Validation(
                format!("signed chain form needs sign ±1, got {sign}"),
            )),
            BlockSpec::Rotation { theta } => theta.validate(),
            BlockSpec::Hyperbolic { a } if !a.is_finite() || *a == 0.0 => Err(Error::Validation(
                format!("hyperbolic rate must be finite and nonzero, got {a}"),
            )),
            BlockSpec::Generic { q } => {
                let k = q.len();
                if k == 0 || k % 2 != 0 {
                    return Err(Error::Validation(format!(
                        "generic form must be 2k×2k with k ≥ 1, got {k} rows"
                    )));
                }
                for (i, row) in q.iter().enumerate() {
                    if row.len() != k {
                        return Err(Error::Validation(format!(
                            "generic form row {i} has {} entries, expected {k}",
                            row.len()
                        )));
                    }
                    for (j, x) in row.iter().enumerate() {
                        if !x.is_finite() {
                            return Err(Error::Validation(format!(
                                "generic form entry ({i},{j}) is not finite"
                            )));
                        }
                        let y = q[j][i];
                        if (x - y).abs() > 1e-12 * (1.0 + x.abs().max(y.abs())) {
                            return Err(Error::Validation(format!(
                                "generic form is not symmetric at ({i},{j})"
                            )));
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl PathSpec {
    pub fn new(blocks: impl IntoIterator<Item = BlockSpec>) -> PathSpec {
        PathSpec { blocks: blocks.into_iter().map(Block::from).collect() }
    }

    /// Total half-dimension `n`.
    pub fn half_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.spec.half_dim()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::Validation("a path spec needs at least one block".into()));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            b.spec
                .validate()
                .map_err(|e| Error::Validation(format!("block {i}: {e}")))?;
            if b.iterate == 0 {
                return Err(Error::Validation(format!("block {i}: iterate must be ≥ 1")));
            }
        }
        Ok(())
    }

    /// The direct sum `self ⋄ other`.
    pub fn concat(&self, other: &PathSpec) -> PathSpec {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        PathSpec { blocks }
    }
}

/// Quadratic-form matrix of the chain form: off-diagonal blocks `A`, `Aᵀ` with
/// ones on the superdiagonal of `A`, so that `½zᵀQz = Σ pⱼqⱼ₊₁`.
fn chain_form(d: usize) -> DMatrix<f64> {
    let mut q = DMatrix::zeros(2 * d, 2 * d);
    for j in 0..d.saturating_sub(1) {
        q[(j, d + j + 1)] = 1.0;
        q[(d + j + 1, j)] = 1.0;
    }
    q
}

/// Symmetric matrix `Q` of the block's generator, so that the block's path is
/// `exp(tJQ)`.
pub fn assemble_quadratic_form(b: &BlockSpec) -> Result<DMatrix<f64>> {
    b.validate()?;
    Ok(match b {
        BlockSpec::Zero { nu0 } => DMatrix::zeros(2 * *nu0 as usize, 2 * *nu0 as usize),
        BlockSpec::Q0 { d } => chain_form(*d as usize),
        BlockSpec::QSign { d, sign } => {
            let d = *d as usize;
            let mut q = chain_form(d);
            q[(d - 1, d - 1)] += 1.0;
            q * f64::from(*sign)
        }
        BlockSpec::Rotation { theta } => DMatrix::identity(2, 2) * theta.radians(),
        BlockSpec::Hyperbolic { a } => DMatrix::from_row_slice(2, 2, &[0.0, -a, -a, 0.0]),
        BlockSpec::Generic { q } => {
            let k = q.len();
            DMatrix::from_fn(k, k, |i, j| 0.5 * (q[i][j] + q[j][i]))
        }
    })
}

/// Combinatorial invariants of the totally degenerate part of a spec.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AGInvariants {
    pub nu0: u32,
    pub b0: u32,
    pub b_plus: u32,
    pub b_minus: u32,
    pub beta_plus: u32,
    pub beta_minus: u32,
}

impl AGInvariants {
    fn finish(mut self) -> AGInvariants {
        self.beta_plus = self.nu0 + self.b0 + self.b_plus;
        self.beta_minus = self.nu0 + self.b0 + self.b_minus;
        self
    }

    /// Nullity of the degenerate part predicted by the normal-form count.
    pub fn predicted_nullity(&self) -> u32 {
        2 * (self.b0 + self.nu0) + self.b_plus + self.b_minus
    }
}

/// Read `ν₀, b₀, b±` and `β± = ν₀ + b₀ + b±` off the degenerate blocks.
/// Rotation, hyperbolic and generic blocks belong to the non-degenerate part
/// and contribute nothing; a generic block whose end matrix has eigenvalue 1
/// cannot be classified this way.
pub fn invariants_of(spec: &PathSpec, tol: &Tolerances) -> Result<AGInvariants> {
    spec.validate()?;
    let mut inv = AGInvariants::default();
    for (i, b) in spec.blocks.iter().enumerate() {
        match &b.spec {
            BlockSpec::Zero { nu0 } => inv.nu0 += nu0,
            BlockSpec::Q0 { .. } => inv.b0 += 1,
            BlockSpec::QSign { sign, .. } => {
                if *sign > 0 {
                    inv.b_plus += 1
                } else {
                    inv.b_minus += 1
                }
            }
            BlockSpec::Generic { .. } => {
                let end = paths::block_end(b, tol)?;
                if linalg::nullity_at(end.entries(), num_complex::Complex::new(1.0, 0.0), tol)? > 0
                {
                    return Err(Error::Unclassifiable(format!(
                        "block {i}: generic form whose end matrix has eigenvalue 1"
                    )));
                }
            }
            BlockSpec::Rotation { .. } | BlockSpec::Hyperbolic { .. } => {}
        }
    }
    Ok(inv.finish())
}

/// Split a spec into its totally degenerate part `Φ₀` and its remainder `Ψ`.
pub fn degenerate_split(spec: &PathSpec, tol: &Tolerances) -> Result<(PathSpec, PathSpec)> {
    spec.validate()?;
    let mut degenerate = Vec::new();
    let mut rest = Vec::new();
    for (i, b) in spec.blocks.iter().enumerate() {
        match &b.spec {
            s if s.is_degenerate_kind() => degenerate.push(b.clone()),
            BlockSpec::Rotation { theta } => {
                let end = theta.scaled(b.iterate)?.end_angle(tol);
                if end.is_zero() {
                    return Err(Error::Validation(format!(
                        "block {i}: rotation with end angle 0 is neither degenerate nor \
                         non-degenerate in the normal-form sense"
                    )));
                }
                rest.push(b.clone());
            }
            BlockSpec::Hyperbolic { .. } => rest.push(b.clone()),
            BlockSpec::Generic { .. } => {
                let end: SymplecticMatrix = paths::block_end(b, tol)?;
                let k = end.entries().nrows() as u32;
                let at_one = linalg::unit_spectrum(&end, tol)?
                    .iter()
                    .filter(|e| e.angle.is_zero())
                    .map(|e| e.alg_mult)
                    .sum::<u32>();
                if at_one == 0 {
                    rest.push(b.clone());
                } else if at_one == k {
                    degenerate.push(b.clone());
                } else {
                    return Err(Error::Unsplittable(format!(
                        "block {i}: generic form mixes eigenvalue 1 with other eigenvalues"
                    )));
                }
            }
            _ => unreachable!("degenerate kinds handled above"),
        }
    }
    Ok((PathSpec { blocks: degenerate }, PathSpec { blocks: rest }))
}
