//! Drivers for the randomized and exhaustive identity trials shared by the
//! CLI and the acceptance suite.

use serde::{Deserialize, Serialize};
use sympidx::cijt::{self, JumpCertificate, SearchOutcome, SearchParams};
use sympidx::generators::PathSpec;
use sympidx::linalg::{nullity, root_of_unity_nullity};
use sympidx::paths::{evaluate, iterate, mean_index};
use sympidx::splitting::{bott_splitting, splitting_profile, Route, SplittingProfile};
use sympidx::verify::{verify_ecijt, verify_ir, VerificationReport};
use sympidx::{Angle, Result, Tolerances};

/// Both sides of the two iteration identities at one iterate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRow {
    pub m: u64,
    /// `ν₁(M^m)` from the matrix power.
    pub nullity_of_power: u32,
    /// `Σ_{ω^m=1} ν_ω(M)` over the roots of unity.
    pub nullity_over_roots: u32,
    /// `S⁻_{M^m}(1)` from the numeric jump engine on the iterated path.
    pub splitting_of_iterate: u32,
    /// `Σ_{ω^m=1} S⁻_M(ω)` from the splitting profile of `M`.
    pub splitting_over_roots: u32,
}

impl IterationRow {
    pub fn holds(&self) -> bool {
        self.nullity_of_power == self.nullity_over_roots && self.splitting_of_iterate == self.splitting_over_roots
    }
}

/// Evaluate the iteration identities for `1 ≤ m ≤ m_max`.
pub fn iteration_identities(spec: &PathSpec, m_max: u64, tol: &Tolerances) -> Result<Vec<IterationRow>> {
    let end = evaluate(spec, 1.0, tol)?;
    let profile = splitting_profile(spec, Route::Table, tol)?;
    (1..=m_max)
        .map(|m| {
            let iterated = iterate(spec, m)?;
            Ok(IterationRow {
                m,
                nullity_of_power: nullity(&end.pow(m), &Angle::zero(), tol)?,
                nullity_over_roots: root_of_unity_nullity(&end, m, tol)?,
                splitting_of_iterate: splitting_profile(&iterated, Route::Numeric, tol)?.s_minus_at_one(),
                splitting_over_roots: bott_splitting(&profile, m),
            })
        })
        .collect()
}

/// Whether two splitting profiles list the same eigenvalues with the same
/// splitting numbers.
pub fn profiles_agree(a: &SplittingProfile, b: &SplittingProfile) -> bool {
    let nonzero = |p: &SplittingProfile| {
        p.entries.iter().filter(|e| e.s_plus != 0 || e.s_minus != 0).cloned().collect::<Vec<_>>()
    };
    let (a, b) = (nonzero(a), nonzero(b));
    a.len() == b.len()
        && a.iter().zip(&b).all(|(x, y)| {
            x.angle.same_point(&y.angle, 1e-6) && x.s_plus == y.s_plus && x.s_minus == y.s_minus
        })
}

/// Search parameters for a jump trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpTrialParams {
    pub epsilon: f64,
    pub n_max: u64,
    pub want: usize,
    pub delta: f64,
    pub m_bar_override: Option<u64>,
    /// Iterate range of the jump identities.
    pub m_range: u64,
    pub ell0: u64,
    pub eta: f64,
}

/// A collection together with its found tuples and both verification
/// reports per tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpTrial {
    pub m_bar: u64,
    pub m_check: Option<u64>,
    pub means: Vec<f64>,
    pub search: SearchOutcome,
    pub jump_reports: Vec<VerificationReport>,
    pub recurrence_reports: Vec<VerificationReport>,
}

impl JumpTrial {
    pub fn certificates(&self) -> &[JumpCertificate] {
        &self.search.certificates
    }
}

/// `M̄`, `m̌`, the means, and the tuple scan of a collection.
pub fn search_collection(specs: &[PathSpec], params: &JumpTrialParams, tol: &Tolerances) -> Result<(u64, Option<u64>, Vec<sympidx::MeanIndex>, SearchOutcome)> {
    let profiles = specs
        .iter()
        .map(|s| splitting_profile(s, Route::Table, tol))
        .collect::<Result<Vec<_>>>()?;
    let means = specs.iter().map(|s| mean_index(s, tol)).collect::<Result<Vec<_>>>()?;
    let m_bar = params.m_bar_override.unwrap_or_else(|| cijt::m_bar(&profiles));
    let m_check = cijt::m_check(&profiles);
    let reach = params.m_range.max(params.ell0);
    let search = SearchParams {
        epsilon: params.epsilon,
        want: params.want,
        n_max: params.n_max,
        min_m: (reach + 2) / 2,
    };
    let outcome = cijt::find_jump_tuples(&means, m_bar, &search)?;
    Ok((m_bar, m_check, means, outcome))
}

/// Search tuples and verify both the jump identities and the index
/// recurrence at each of them.
pub fn jump_trial(specs: &[PathSpec], params: &JumpTrialParams, tol: &Tolerances) -> Result<JumpTrial> {
    let (m_bar, m_check, means, search) = search_collection(specs, params, tol)?;
    let mut jump_reports = Vec::new();
    let mut recurrence_reports = Vec::new();
    for cert in &search.certificates {
        jump_reports.push(verify_ecijt(specs, cert, params.m_range, params.delta, tol)?);
        recurrence_reports.push(verify_ir(specs, cert, params.ell0, params.eta, tol)?);
    }
    Ok(JumpTrial {
        m_bar,
        m_check,
        means: means.iter().map(|m| m.value).collect(),
        search,
        jump_reports,
        recurrence_reports,
    })
}
