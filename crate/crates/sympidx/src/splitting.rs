//! Splitting numbers `S±_M(ω)`: table values per block kind, an independent
//! numeric engine based on ω-index jumps, profiles over the unit spectrum,
//! and the Bott-type resonance sums.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::generators::{invariants_of, AGInvariants, Block, BlockSpec, PathSpec};
use crate::index::block_splitting_jump;
use crate::linalg;
use crate::paths::{self, BlockPath};
use crate::{Error, Result, SymplecticMatrix, Tolerances};

/// Angles closer than this are the same eigenvalue when merging profiles.
pub const MERGE_TOL: f64 = 1e-9;

/// Which engine produces splitting numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Normal-form table lookup; generic blocks fall back to the numeric engine.
    Table,
    /// ω-index jumps for every block.
    Numeric,
}

/// Splitting numbers at one unit eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitEntry {
    pub angle: Angle,
    pub s_plus: u32,
    pub s_minus: u32,
    /// `ν_ω` of the end matrix.
    pub nullity: u32,
}

/// Splitting numbers over the unit spectrum of an end matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingProfile {
    pub entries: Vec<SplitEntry>,
    pub source: Route,
}

impl SplittingProfile {
    pub fn empty(source: Route) -> SplittingProfile {
        SplittingProfile { entries: Vec::new(), source }
    }

    /// Add entries, summing those at the same eigenvalue.
    pub fn merge(&mut self, entries: impl IntoIterator<Item = SplitEntry>) {
        for e in entries {
            match self.entries.iter_mut().find(|x| x.angle.same_point(&e.angle, MERGE_TOL)) {
                Some(x) => {
                    x.s_plus += e.s_plus;
                    x.s_minus += e.s_minus;
                    x.nullity += e.nullity;
                }
                None => self.entries.push(e),
            }
        }
        self.entries.sort_by(|a, b| a.angle.cmp_position(&b.angle));
    }

    /// `(S⁺, S⁻)` at `ω`, zero when `ω` is not an eigenvalue.
    pub fn at(&self, omega: &Angle) -> (u32, u32) {
        self.entries
            .iter()
            .find(|e| e.angle.same_point(omega, MERGE_TOL))
            .map_or((0, 0), |e| (e.s_plus, e.s_minus))
    }

    pub fn s_plus_at_one(&self) -> u32 {
        self.at(&Angle::zero()).0
    }

    pub fn s_minus_at_one(&self) -> u32 {
        self.at(&Angle::zero()).1
    }
}

/// Table entries of one block, or `None` for generic blocks, which have no
/// normal-form table.
pub fn block_table(block: &Block, tol: &Tolerances) -> Result<Option<Vec<SplitEntry>>> {
    block.spec.validate()?;
    let at_one = |s_plus, s_minus, nullity| SplitEntry { angle: Angle::zero(), s_plus, s_minus, nullity };
    Ok(Some(match &block.spec {
        // identity end I_{2ν₀}: ν₀ copies of I₂, each with S± = 1
        BlockSpec::Zero { nu0 } => alloc::vec![at_one(*nu0, *nu0, 2 * nu0)],
        // chain end: I₂ ⋄ H₀ with H₀ hyperbolic-homotopic, so S± = 1 and ν = 2
        BlockSpec::Q0 { .. } => alloc::vec![at_one(1, 1, 2)],
        // signed chain end: one N₁(1, ∓1)-type Jordan block at 1 with ν = 1
        BlockSpec::QSign { sign, .. } => {
            let s = u32::from(*sign < 0);
            alloc::vec![at_one(s, s, 1)]
        }
        BlockSpec::Rotation { theta } => {
            let end = theta.scaled(block.iterate)?.end_angle(tol);
            if end.is_zero() || end.is_pi() {
                alloc::vec![SplitEntry { angle: end, s_plus: 1, s_minus: 1, nullity: 2 }]
            } else {
                alloc::vec![
                    SplitEntry { angle: end, s_plus: 0, s_minus: 1, nullity: 1 },
                    SplitEntry { angle: end.conjugate(), s_plus: 1, s_minus: 0, nullity: 1 },
                ]
            }
        }
        BlockSpec::Hyperbolic { .. } => Vec::new(),
        BlockSpec::Generic { .. } => return Ok(None),
    }))
}

/// Numeric splitting numbers of one block over its whole unit spectrum.
pub fn block_numeric_entries(block: &Block, tol: &Tolerances) -> Result<Vec<SplitEntry>> {
    let end = SymplecticMatrix::new(BlockPath::representative(block, tol)?.end()?, tol)?;
    linalg::unit_spectrum(&end, tol)?
        .into_iter()
        .map(|e| {
            let (s_plus, s_minus) = block_splitting_jump(block, &e.angle, tol)?;
            Ok(SplitEntry { angle: e.angle, s_plus, s_minus, nullity: e.geo_mult })
        })
        .collect()
}

/// Memo of per-block profiles, keyed by the block's description.
#[derive(Clone, Debug, Default)]
pub struct SplitCache {
    entries: BTreeMap<(String, bool), Vec<SplitEntry>>,
}

impl SplitCache {
    pub fn new() -> SplitCache {
        SplitCache::default()
    }

    /// Profile entries of one block along the chosen route.
    pub fn block_entries(&mut self, block: &Block, route: Route, tol: &Tolerances) -> Result<Vec<SplitEntry>> {
        let key = (format!("{block:?}"), route == Route::Numeric);
        if let Some(e) = self.entries.get(&key) {
            return Ok(e.clone());
        }
        let entries = match route {
            Route::Table => match block_table(block, tol)? {
                Some(e) => e,
                None => block_numeric_entries(block, tol)?,
            },
            Route::Numeric => block_numeric_entries(block, tol)?,
        };
        self.entries.insert(key, entries.clone());
        Ok(entries)
    }

    pub fn profile(&mut self, spec: &PathSpec, route: Route, tol: &Tolerances) -> Result<SplittingProfile> {
        spec.validate()?;
        let mut profile = SplittingProfile::empty(route);
        for b in &spec.blocks {
            let e = self.block_entries(b, route, tol)?;
            profile.merge(e);
        }
        Ok(profile)
    }
}

/// `(S⁺_M(ω), S⁻_M(ω))` for the end matrix of `spec`, summed over blocks.
pub fn splitting_numbers(spec: &PathSpec, omega: &Angle, route: Route, tol: &Tolerances) -> Result<(u32, u32)> {
    spec.validate()?;
    let mut total = (0, 0);
    for b in &spec.blocks {
        let table = match route {
            Route::Table => block_table(b, tol)?,
            Route::Numeric => None,
        };
        let (p, m) = match table {
            Some(entries) => entries
                .iter()
                .find(|e| e.angle.same_point(omega, MERGE_TOL))
                .map_or((0, 0), |e| (e.s_plus, e.s_minus)),
            None => block_splitting_jump(b, omega, tol)?,
        };
        total.0 += p;
        total.1 += m;
    }
    Ok(total)
}

/// Splitting numbers at every unit eigenvalue of `γ(1)`.
pub fn splitting_profile(spec: &PathSpec, route: Route, tol: &Tolerances) -> Result<SplittingProfile> {
    SplitCache::new().profile(spec, route, tol)
}

/// `Σ_{ω^m = 1} S⁻_M(ω)`; only exact angles can satisfy `mθ ∈ 2πZ`.
pub fn bott_splitting(profile: &SplittingProfile, m: u64) -> u32 {
    profile
        .entries
        .iter()
        .filter(|e| e.angle.resonates(m))
        .map(|e| e.s_minus)
        .sum()
}

/// Comparison of the combinatorial `β₋` with the splitting number `S⁻(1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaMinusReport {
    pub invariants: AGInvariants,
    pub s_minus_table: u32,
    pub s_minus_numeric: u32,
    pub s_plus_numeric: u32,
    /// `ν(γ(1))` of the assembled end matrix.
    pub nullity: u32,
    pub pass: bool,
}

/// Check `β₋(γ) = S⁻_{γ(1)}(1)` and `β₊ + β₋ = ν(γ(1))` for a spec whose
/// degenerate part is built from normal-form blocks.
pub fn beta_minus_check(spec: &PathSpec, tol: &Tolerances) -> Result<BetaMinusReport> {
    beta_minus_check_cached(spec, tol, &mut SplitCache::new())
}

pub fn beta_minus_check_cached(spec: &PathSpec, tol: &Tolerances, cache: &mut SplitCache) -> Result<BetaMinusReport> {
    let invariants = invariants_of(spec, tol)?;
    for (i, b) in spec.blocks.iter().enumerate() {
        if let BlockSpec::Rotation { theta } = &b.spec {
            if theta.scaled(b.iterate)?.end_angle(tol).is_zero() {
                return Err(Error::Precondition(format!(
                    "block {i}: rotation ending at the identity is degenerate but not a \
                     normal-form block"
                )));
            }
        }
    }
    let table = cache.profile(spec, Route::Table, tol)?;
    let numeric = cache.profile(spec, Route::Numeric, tol)?;
    let end = paths::evaluate(spec, 1.0, tol)?;
    let nullity = linalg::nullity(&end, &Angle::zero(), tol)?;
    let s_minus_numeric = numeric.s_minus_at_one();
    let pass = invariants.beta_minus == s_minus_numeric
        && invariants.beta_minus == table.s_minus_at_one()
        && invariants.beta_plus + invariants.beta_minus == nullity;
    Ok(BetaMinusReport {
        invariants,
        s_minus_table: table.s_minus_at_one(),
        s_minus_numeric,
        s_plus_numeric: numeric.s_plus_at_one(),
        nullity,
        pass,
    })
}
