//! Common index jump machinery: the resonance bounds `m̌` and `M̄`, the scan
//! for jump tuples `(N, m₁, …, m_q)`, and the resonance sums `Q_k(m)`, `Δ_k`
//! and `C(M)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_integer::Integer;
#[allow(unused_imports)] // float math is inherent in `core` on recent toolchains
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::angle::{Angle, FracPart};
use crate::paths::MeanIndex;
use crate::splitting::SplittingProfile;
use crate::{Error, Result};

/// Width of the band around the `δ` boundary in which numeric fractional
/// parts are flagged.
pub const GUARD_BAND: f64 = 1e-9;

fn nonzero_exact(profile: &SplittingProfile) -> impl Iterator<Item = &Angle> {
    profile.entries.iter().map(|e| &e.angle).filter(|a| a.is_exact() && !a.is_zero())
}

/// `m̌`: the least `k` with `kθ ∈ 2πZ` over exact angles `θ ∈ (0, 2π)` of all
/// end matrices; `None` stands for `+∞` (every end matrix is cnu).
pub fn m_check(profiles: &[SplittingProfile]) -> Option<u64> {
    profiles.iter().flat_map(nonzero_exact).filter_map(Angle::period).min()
}

/// `M̄`: the least positive integer with `M̄θ/π ∈ Z` for every exact angle;
/// 1 when there is none.
pub fn m_bar(profiles: &[SplittingProfile]) -> u64 {
    profiles
        .iter()
        .flat_map(nonzero_exact)
        .filter_map(|a| a.pi_ratio())
        .fold(1u64, |acc, r| acc.lcm(&(*r.denom() as u64)))
}

/// Scan parameters for [`find_jump_tuples`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub epsilon: f64,
    pub want: usize,
    pub n_max: u64,
    /// Tuples with some `m_k` below this are skipped, so that iterates
    /// `2m_k − m` used later stay positive.
    pub min_m: u64,
}

/// One common index jump tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpCertificate {
    #[serde(rename = "N")]
    pub n: u64,
    pub m: Vec<u64>,
    pub chi: Vec<u8>,
    pub epsilon: f64,
    pub m_bar: u64,
    /// `|{N/(M̄ î_k)} − χ_k|`.
    pub residuals: Vec<f64>,
}

/// Certificates found by a scan, with a warning when fewer than requested.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub certificates: Vec<JumpCertificate>,
    pub scanned_up_to: u64,
    pub warning: Option<String>,
}

/// `x = N/(M̄ î)` split as `(⌊x⌋, {x})`, exactly when `î` is rational.
fn quotient(n: u64, m_bar: u64, mean: &MeanIndex) -> (u64, FracPart) {
    if let Some(r) = mean.exact {
        let num = n as i128 * *r.denom() as i128;
        let den = m_bar as i128 * *r.numer() as i128;
        let (q, rem) = num.div_mod_floor(&den);
        let g = rem.gcd(&den).max(1);
        let frac = num_rational::Ratio::new((rem / g) as i64, (den / g) as i64);
        (q as u64, FracPart::Exact(frac))
    } else {
        let x = n as f64 / (m_bar as f64 * mean.value);
        (x.floor() as u64, FracPart::Numeric(x - x.floor()))
    }
}

fn check_means(means: &[MeanIndex]) -> Result<()> {
    for (k, m) in means.iter().enumerate() {
        if !(m.value > 0.0) || m.exact.is_some_and(|r| *r.numer() <= 0) {
            return Err(Error::Precondition(format!(
                "mean index of path {k} must be positive, got {}",
                m.value
            )));
        }
    }
    Ok(())
}

/// Scan `N = 1, 2, …` for tuples where every `N/(M̄ î_k)` is within `ε` of an
/// integer, and emit `m_k = (⌊N/(M̄ î_k)⌋ + χ_k)·M̄`.
pub fn find_jump_tuples(means: &[MeanIndex], m_bar: u64, params: &SearchParams) -> Result<SearchOutcome> {
    check_means(means)?;
    if means.is_empty() {
        return Err(Error::Precondition("at least one mean index is required".into()));
    }
    if !(params.epsilon > 0.0 && params.epsilon < 0.5) {
        return Err(Error::Precondition(format!("ε must lie in (0, 1/2), got {}", params.epsilon)));
    }
    if m_bar == 0 {
        return Err(Error::Precondition("M̄ must be positive".into()));
    }
    let eps = params.epsilon;
    let mut certificates = Vec::new();
    let mut n = 0u64;
    let mut m = Vec::with_capacity(means.len());
    let mut chi = Vec::with_capacity(means.len());
    let mut residuals = Vec::with_capacity(means.len());
    'scan: while n < params.n_max && certificates.len() < params.want {
        n += 1;
        m.clear();
        chi.clear();
        residuals.clear();
        for mean in means {
            let (floor, frac) = quotient(n, m_bar, mean);
            let f = frac.value();
            let (c, r) = if f < eps {
                (0u8, f)
            } else if f > 1.0 - eps {
                (1u8, 1.0 - f)
            } else {
                continue 'scan;
            };
            let mk = (floor + u64::from(c)) * m_bar;
            if mk < params.min_m.max(1) {
                continue 'scan;
            }
            m.push(mk);
            chi.push(c);
            residuals.push(r);
        }
        certificates.push(JumpCertificate {
            n,
            m: m.clone(),
            chi: chi.clone(),
            epsilon: eps,
            m_bar,
            residuals: residuals.clone(),
        });
    }
    let warning = (certificates.len() < params.want).then(|| {
        format!(
            "found {} of {} requested tuples with N ≤ {}",
            certificates.len(),
            params.want,
            params.n_max
        )
    });
    Ok(SearchOutcome { certificates, scanned_up_to: n, warning })
}

/// Re-check a certificate's defining properties independently of the scan:
/// `m_k` is a multiple of `M̄`, and `|N/(M̄ î_k) − m_k/M̄| < ε`.
pub fn validate_certificate(cert: &JumpCertificate, means: &[MeanIndex]) -> Result<()> {
    if cert.m.len() != means.len() || cert.chi.len() != means.len() {
        return Err(Error::Consistency("certificate length does not match path count".into()));
    }
    for (k, mean) in means.iter().enumerate() {
        let mk = cert.m[k];
        if mk % cert.m_bar != 0 {
            return Err(Error::Consistency(format!("m_{k} = {mk} is not a multiple of M̄")));
        }
        let residual = match mean.exact {
            Some(r) => {
                // |N·b − (m_k/M̄)·M̄·a| / (M̄·a) with î = a/b
                let a = *r.numer() as i128;
                let b = *r.denom() as i128;
                let diff = (cert.n as i128 * b - mk as i128 * a).abs();
                diff as f64 / (cert.m_bar as i128 * a) as f64
            }
            None => (cert.n as f64 - mk as f64 * mean.value).abs() / (cert.m_bar as f64 * mean.value),
        };
        if !(residual < cert.epsilon) {
            return Err(Error::Consistency(format!(
                "path {k}: residual {residual:e} is not below ε = {:e}",
                cert.epsilon
            )));
        }
        let (floor, _) = quotient(cert.n, cert.m_bar, mean);
        if mk != (floor + u64::from(cert.chi[k])) * cert.m_bar {
            return Err(Error::Consistency(format!("m_{k} does not match (⌊N/(M̄î)⌋ + χ)·M̄")));
        }
    }
    Ok(())
}

/// `Q_k(m)`: sum of `S⁻` over exact angles `θ ∈ (0, 2π)` with `m_k θ/π ∈ Z`
/// and `mθ/2π ∈ Z`.
pub fn q_k(profile: &SplittingProfile, m_k: u64, m: u64) -> u32 {
    profile
        .entries
        .iter()
        .filter(|e| e.angle.is_exact() && !e.angle.is_zero())
        .filter(|e| e.angle.frac_over_pi(m_k).is_zero() && e.angle.resonates(m))
        .map(|e| e.s_minus)
        .sum()
}

/// `Δ_k` with the fractional parts it was computed from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub value: u32,
    pub fractional_parts: Vec<(Angle, FracPart)>,
    /// Numeric angles whose fractional part lies within the guard band of a
    /// boundary of `(0, δ)`.
    pub guard_warnings: Vec<Angle>,
}

/// `Δ_k = Σ S⁻(e^{iθ})` over unit eigenvalues with `0 < {m_kθ/π} < δ`.
pub fn delta_k(profile: &SplittingProfile, m_k: u64, delta: f64) -> Result<DeltaReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Precondition(format!("δ must lie in (0, 1), got {delta}")));
    }
    let mut report = DeltaReport { value: 0, fractional_parts: Vec::new(), guard_warnings: Vec::new() };
    for e in &profile.entries {
        let f = e.angle.frac_over_pi(m_k);
        let v = f.value();
        let inside = match f {
            FracPart::Exact(r) => *r.numer() != 0 && v < delta,
            FracPart::Numeric(x) => {
                if x.abs() < GUARD_BAND || (x - delta).abs() < GUARD_BAND || x > 1.0 - GUARD_BAND {
                    report.guard_warnings.push(e.angle);
                }
                x > 0.0 && x < delta
            }
        };
        if inside {
            report.value += e.s_minus;
        }
        report.fractional_parts.push((e.angle, f));
    }
    Ok(report)
}

/// `C(M) = Σ_{θ ∈ (0, 2π)} S⁻_M(e^{iθ})`.
pub fn c_total(profile: &SplittingProfile) -> u32 {
    profile.entries.iter().filter(|e| !e.angle.is_zero()).map(|e| e.s_minus).sum()
}
