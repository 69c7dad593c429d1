//! Machine verification of the identities that hold at common index jump
//! tuples: the nullity and index jump identities, the index recurrence
//! properties with their translation identities, and the coincidence of the
//! combinatorial `β₋` with the splitting number `S⁻(1)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cijt::{self, JumpCertificate};
use crate::generators::{invariants_of, BlockSpec, PathSpec};
use crate::index::{index_record, IndexRecord};
use crate::paths::{self, MeanIndex};
use crate::splitting::{self, Route, SplitCache, SplittingProfile};
use crate::{Angle, Error, Result, Tolerances};

/// A number on one side of a check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Real(f64),
}

impl Value {
    fn as_f64(&self) -> f64 {
        match *self {
            Value::Int(i) => i as f64,
            Value::Real(x) => x,
        }
    }
}

/// How the two sides of a check are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

/// Report section a check belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Section {
    /// Identities fully defined by the theory being verified.
    Core,
    /// Identities that use the adopted definitions of `C(M)` and `δ`.
    ExternalDefinition,
    /// The translation identities between the two recurrence formulations.
    Translation,
    /// Combinatorial `β₋` against the splitting number `S⁻(1)`.
    BetaMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// An engine failed; never counted as a pass.
    EngineError,
}

/// One evaluated identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub section: Section,
    /// Index of the path in the collection, or of the case in a suite.
    pub path: Option<usize>,
    /// Iterate parameter `m` (or `ℓ`).
    pub m: Option<u64>,
    pub lhs: Option<Value>,
    pub rhs: Option<Value>,
    pub relation: Relation,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub engine_errors: usize,
}

/// Where a report came from; filled in by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec_hashes: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub config_hash: Option<String>,
}

/// Ordered list of checks with a summary. A report passes iff every check
/// passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: String,
    pub tuple: Option<JumpCertificate>,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub notes: Vec<String>,
    pub provenance: Option<Provenance>,
}

impl VerificationReport {
    pub fn new(kind: &str, tuple: Option<JumpCertificate>) -> VerificationReport {
        VerificationReport {
            kind: kind.to_string(),
            tuple,
            checks: Vec::new(),
            summary: Summary::default(),
            notes: Vec::new(),
            provenance: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn section_passed(&self, section: Section) -> bool {
        self.checks.iter().filter(|c| c.section == section).all(|c| c.status == Status::Pass)
    }

    pub fn has_engine_errors(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::EngineError)
    }

    /// Failed or errored checks.
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status != Status::Pass)
    }

    fn finish(mut self) -> VerificationReport {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::EngineError => s.engine_errors += 1,
            }
        }
        self.summary = s;
        self
    }

    /// Append every check of `other`, keeping notes.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
        let s = core::mem::take(self);
        *self = s.finish();
    }
}

impl Default for VerificationReport {
    fn default() -> Self {
        VerificationReport::new("", None)
    }
}

/// Builder for one check from two independently computed sides.
struct Recorder<'r> {
    report: &'r mut VerificationReport,
    section: Section,
    path: Option<usize>,
}

impl Recorder<'_> {
    fn record(&mut self, name: &str, m: Option<u64>, relation: Relation, tolerance: f64, sides: Result<(Value, Value)>) {
        let (lhs, rhs, status, detail) = match sides {
            Ok((l, r)) => {
                let (a, b) = (l.as_f64(), r.as_f64());
                let ok = match relation {
                    Relation::Eq => (a - b).abs() <= tolerance,
                    Relation::Le => a <= b + tolerance,
                    Relation::Lt => a < b,
                };
                (Some(l), Some(r), if ok { Status::Pass } else { Status::Fail }, None)
            }
            Err(e) => (None, None, Status::EngineError, Some(e.to_string())),
        };
        self.report.checks.push(Check {
            name: name.to_string(),
            section: self.section,
            path: self.path,
            m,
            lhs,
            rhs,
            relation,
            tolerance,
            status,
            detail,
        });
    }

    fn int(&mut self, name: &str, m: Option<u64>, sides: Result<(i64, i64)>) {
        self.record(name, m, Relation::Eq, 0.0, sides.map(|(a, b)| (Value::Int(a), Value::Int(b))));
    }

    fn int_le(&mut self, name: &str, m: Option<u64>, sides: Result<(i64, i64)>) {
        self.record(name, m, Relation::Le, 0.0, sides.map(|(a, b)| (Value::Int(a), Value::Int(b))));
    }
}

/// Memoized engine queries for one collection of paths.
struct Oracle<'a> {
    specs: &'a [PathSpec],
    tol: &'a Tolerances,
    records: BTreeMap<(usize, u64), IndexRecord>,
    iterate_split: BTreeMap<(usize, u64), u32>,
    cache: SplitCache,
}

impl<'a> Oracle<'a> {
    fn new(specs: &'a [PathSpec], tol: &'a Tolerances) -> Self {
        Oracle { specs, tol, records: BTreeMap::new(), iterate_split: BTreeMap::new(), cache: SplitCache::new() }
    }

    fn record(&mut self, k: usize, m: u64) -> Result<IndexRecord> {
        if let Some(r) = self.records.get(&(k, m)) {
            return Ok(*r);
        }
        let r = index_record(&paths::iterate(&self.specs[k], m)?, self.tol)?;
        self.records.insert((k, m), r);
        Ok(r)
    }

    /// `S⁻_{M^m}(1)` from the numeric jump engine on the iterate.
    fn iterate_s_minus(&mut self, k: usize, m: u64) -> Result<u32> {
        if let Some(v) = self.iterate_split.get(&(k, m)) {
            return Ok(*v);
        }
        let spec = paths::iterate(&self.specs[k], m)?;
        let v = self.cache.profile(&spec, Route::Numeric, self.tol)?.s_minus_at_one();
        self.iterate_split.insert((k, m), v);
        Ok(v)
    }

    fn profile(&mut self, k: usize, route: Route) -> Result<SplittingProfile> {
        self.cache.profile(&self.specs[k], route, self.tol)
    }

    fn mean(&self, k: usize) -> Result<MeanIndex> {
        paths::mean_index(&self.specs[k], self.tol)
    }
}

fn check_collection(specs: &[PathSpec], cert: &JumpCertificate, tol: &Tolerances) -> Result<Vec<MeanIndex>> {
    if specs.is_empty() || cert.m.len() != specs.len() {
        return Err(Error::Precondition(format!(
            "certificate has {} entries for {} paths",
            cert.m.len(),
            specs.len()
        )));
    }
    let means = specs.iter().map(|s| paths::mean_index(s, tol)).collect::<Result<Vec<_>>>()?;
    cijt::validate_certificate(cert, &means)
        .map_err(|e| Error::Precondition(format!("certificate does not fit these paths: {e}")))?;
    Ok(means)
}

/// Evaluate, at one jump tuple, the nullity identities before the first
/// resonance, the nullity symmetry, both index jump identities for
/// `1 ≤ m ≤ m̄`, and the index at the jump (with the adopted `C(M)` and `δ`)
/// in the external-definition section.
pub fn verify_ecijt(
    specs: &[PathSpec],
    cert: &JumpCertificate,
    m_bar_range: u64,
    delta: f64,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    check_collection(specs, cert, tol)?;
    if m_bar_range == 0 {
        return Err(Error::Precondition("the iterate range m̄ must be ≥ 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Precondition(format!("δ must lie in (0, 1), got {delta}")));
    }
    if let Some((k, mk)) = cert.m.iter().enumerate().find(|(_, &mk)| 2 * mk <= m_bar_range) {
        return Err(Error::Precondition(format!(
            "2m_{k} = {} does not exceed m̄ = {m_bar_range}",
            2 * mk
        )));
    }
    let mut oracle = Oracle::new(specs, tol);
    let mut report = VerificationReport::new("jump-identities", Some(cert.clone()));
    let two_n = 2 * cert.n as i64;
    let profiles = (0..specs.len()).map(|k| oracle.profile(k, Route::Table)).collect::<Result<Vec<_>>>()?;
    let m_check = cijt::m_check(&profiles);
    let resonance_cap = m_check.map_or(m_bar_range, |mc| (mc - 1).min(m_bar_range));
    report.notes.push(match m_check {
        Some(mc) => format!("first nullity resonance m̌ = {mc}; nullity-before-resonance checked for m ≤ {resonance_cap}"),
        None => format!("all end matrices are cnu (m̌ = ∞); nullity-before-resonance checked for m ≤ {resonance_cap}"),
    });
    report.notes.push(
        "index-at-jump uses C(M) = Σ_{θ∈(0,2π)} S⁻(e^{iθ}) and Δ_k over 0 < {m_kθ/π} < δ (adopted definitions)"
            .to_string(),
    );
    for (k, &mk) in cert.m.iter().enumerate() {
        let profile = &profiles[k];
        let s_plus_one = i64::from(profile.s_plus_at_one());
        let mut rec = Recorder { report: &mut report, section: Section::Core, path: Some(k) };
        for m in 1..=resonance_cap {
            let base = oracle.record(k, 1).map(|r| i64::from(r.nu));
            let left = oracle.record(k, 2 * mk - m).map(|r| i64::from(r.nu));
            rec.int("nullity-before-resonance-left", Some(m), left.and_then(|l| base.clone().map(|b| (l, b))));
            let right = oracle.record(k, 2 * mk + m).map(|r| i64::from(r.nu));
            rec.int("nullity-before-resonance-right", Some(m), right.and_then(|r| base.map(|b| (r, b))));
        }
        for m in 1..=m_bar_range {
            let at_m = oracle.record(k, m);
            let left = oracle.record(k, 2 * mk - m);
            let right = oracle.record(k, 2 * mk + m);
            let pair = |a: &Result<IndexRecord>, b: &Result<IndexRecord>| -> Result<(IndexRecord, IndexRecord)> {
                Ok((a.clone()?, b.clone()?))
            };
            rec.int(
                "nullity-symmetry-left",
                Some(m),
                pair(&left, &at_m).map(|(l, r)| (i64::from(l.nu), i64::from(r.nu))),
            );
            rec.int(
                "nullity-symmetry-right",
                Some(m),
                pair(&right, &at_m).map(|(l, r)| (i64::from(l.nu), i64::from(r.nu))),
            );
            rec.int("index-jump-right", Some(m), pair(&right, &at_m).map(|(l, r)| (l.i, two_n + r.i)));
            let q = i64::from(cijt::q_k(profile, mk, m));
            rec.int(
                "index-jump-left",
                Some(m),
                pair(&left, &at_m).map(|(l, r)| (l.i, two_n - r.i - 2 * (s_plus_one + q))),
            );
        }
        let mut ext = Recorder { report: &mut report, section: Section::ExternalDefinition, path: Some(k) };
        let at_jump = oracle.record(k, 2 * mk);
        let delta_report = cijt::delta_k(profile, mk, delta);
        let c = i64::from(cijt::c_total(profile));
        let sides = at_jump.and_then(|r| {
            let d = delta_report.clone()?;
            Ok((r.i, two_n - (s_plus_one + c - 2 * i64::from(d.value))))
        });
        ext.int("index-at-jump", None, sides);
        if let Ok(d) = delta_report {
            for (angle, f) in &d.fractional_parts {
                if !angle.is_exact() {
                    report.notes.push(format!(
                        "path {k}: numeric angle {angle} has {{m_kθ/π}} = {:.6e}",
                        f.value()
                    ));
                }
            }
            for angle in &d.guard_warnings {
                report.notes.push(format!(
                    "path {k}: fractional part at numeric angle {angle} lies within {:e} of a δ-window boundary",
                    cijt::GUARD_BAND
                ));
            }
        }
    }
    Ok(report.finish())
}

/// Whether the iterate's degenerate part consists of normal-form blocks only,
/// so that the combinatorial `β±` are defined for it.
fn normal_form_built(spec: &PathSpec, tol: &Tolerances) -> bool {
    spec.blocks.iter().all(|b| match &b.spec {
        BlockSpec::Rotation { theta } => theta
            .scaled(b.iterate)
            .map(|p| !p.end_angle(tol).is_zero())
            .unwrap_or(false),
        BlockSpec::Generic { .. } => false,
        _ => true,
    }) && invariants_of(spec, tol).is_ok()
}

/// Evaluate the index recurrence properties at a jump tuple with `d = 2N`
/// and jump iterate `2m_k`, together with the translation identities that
/// connect them to the jump identities.
pub fn verify_ir(
    specs: &[PathSpec],
    cert: &JumpCertificate,
    ell0: u64,
    eta: f64,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let means = check_collection(specs, cert, tol)?;
    if !(eta > 0.0) {
        return Err(Error::Precondition(format!("η must be positive, got {eta}")));
    }
    for (k, mean) in means.iter().enumerate() {
        let bound = 2.0 * cert.m_bar as f64 * mean.value * cert.epsilon;
        if !(bound < eta) {
            return Err(Error::Precondition(format!(
                "path {k}: 2M̄î_kε = {bound:.6} is not below η = {eta}; rerun the tuple search with a smaller ε"
            )));
        }
        if 2 * cert.m[k] <= ell0 {
            return Err(Error::Precondition(format!(
                "ℓ₀ = {ell0} must be below the jump iterate 2m_{k} = {}",
                2 * cert.m[k]
            )));
        }
    }
    let mut oracle = Oracle::new(specs, tol);
    let mut report = VerificationReport::new("index-recurrence", Some(cert.clone()));
    report.notes.push("β₋(γ^ℓ) := S⁻_{M^ℓ}(1) from the numeric engine and β₊(γ^ℓ) := ν(γ^ℓ) − β₋(γ^ℓ)".to_string());
    let two_n = 2 * cert.n as i64;
    for (k, &mk) in cert.m.iter().enumerate() {
        let n_half = specs[k].half_dim() as i64;
        let jump = 2 * mk;
        let base_numeric = oracle.profile(k, Route::Numeric);
        let base_table = oracle.profile(k, Route::Table);
        let mut rec = Recorder { report: &mut report, section: Section::Core, path: Some(k) };

        let mean_at_jump = oracle.mean(k).map(|mean| mean.scaled(jump));
        rec.record(
            "mean-index-near-jump",
            None,
            Relation::Lt,
            0.0,
            mean_at_jump.map(|mu| (Value::Real((mu.value - two_n as f64).abs()), Value::Real(eta))),
        );
        let mean = means[k];
        let residual_gap = match mean.exact {
            Some(r) => {
                let num = (2 * mk as i128 * *r.numer() as i128 - two_n as i128 * *r.denom() as i128).abs();
                num as f64 / *r.denom() as f64
            }
            None => (2.0 * mk as f64 * mean.value - two_n as f64).abs(),
        };
        rec.record(
            "mean-index-residual-bound",
            None,
            Relation::Lt,
            0.0,
            Ok((
                Value::Real(residual_gap),
                Value::Real(2.0 * cert.m_bar as f64 * mean.value * cert.epsilon),
            )),
        );
        let at_jump = oracle.record(k, jump);
        rec.int_le("index-window-lower", None, at_jump.clone().map(|r| (two_n - n_half, r.mu_minus)));
        rec.int_le("index-window-order", None, at_jump.clone().map(|r| (r.mu_minus, r.mu_plus)));
        rec.int_le("index-window-upper", None, at_jump.map(|r| (r.mu_plus, two_n + n_half)));

        for ell in 1..=ell0 {
            let at_ell = oracle.record(k, ell);
            let right = oracle.record(k, jump + ell);
            let left = oracle.record(k, jump - ell);
            let beta_minus = oracle.iterate_s_minus(k, ell).map(i64::from);
            let betas = |at: &Result<IndexRecord>, bm: &Result<i64>| -> Result<(i64, i64)> {
                let nu = i64::from(at.clone()?.nu);
                let bm = bm.clone()?;
                Ok((nu - bm, bm))
            };
            let mut rec = Recorder { report: &mut report, section: Section::Core, path: Some(k) };
            rec.int(
                "recurrence-right-lower",
                Some(ell),
                right.clone().and_then(|r| Ok((r.mu_minus, two_n + at_ell.clone()?.mu_minus))),
            );
            rec.int(
                "recurrence-right-upper",
                Some(ell),
                right.and_then(|r| Ok((r.mu_plus, two_n + at_ell.clone()?.mu_plus))),
            );
            rec.int(
                "recurrence-left",
                Some(ell),
                left.clone().and_then(|l| {
                    let (bp, bm) = betas(&at_ell, &beta_minus)?;
                    Ok((l.mu_plus, two_n - at_ell.clone()?.mu_minus + (bp - bm)))
                }),
            );

            let mut tr = Recorder { report: &mut report, section: Section::Translation, path: Some(k) };
            let table = base_table.clone();
            let q = table.as_ref().map(|p| i64::from(cijt::q_k(p, mk, ell))).map_err(Clone::clone);
            let s_plus_one = table.as_ref().map(|p| i64::from(p.s_plus_at_one())).map_err(Clone::clone);
            tr.int(
                "beta-difference",
                Some(ell),
                (|| {
                    let (bp, bm) = betas(&at_ell, &beta_minus)?;
                    let nu_left = i64::from(left.clone()?.nu);
                    Ok((bp - bm, nu_left - 2 * (s_plus_one.clone()? + q.clone()?)))
                })(),
            );
            tr.int(
                "nullity-reflection",
                Some(ell),
                (|| Ok((i64::from(at_ell.clone()?.nu), i64::from(left.clone()?.nu))))(),
            );
            let iterate = paths::iterate(&specs[k], ell)?;
            if normal_form_built(&iterate, tol) {
                tr.int(
                    "beta-sum-normal-form",
                    Some(ell),
                    (|| {
                        let inv = invariants_of(&iterate, tol)?;
                        Ok((i64::from(inv.beta_plus + inv.beta_minus), i64::from(at_ell.clone()?.nu)))
                    })(),
                );
            }
            tr.int(
                "beta-minus-resonance",
                Some(ell),
                (|| Ok((beta_minus.clone()?, s_plus_one.clone()? + q.clone()?)))(),
            );
            let numeric = base_numeric.clone();
            tr.int(
                "splitting-symmetry-at-one",
                Some(ell),
                numeric.map(|p| (i64::from(p.s_plus_at_one()), i64::from(p.s_minus_at_one()))),
            );
            tr.int(
                "bott-splitting-resonance",
                Some(ell),
                table.as_ref().map_err(Clone::clone).map(|p| {
                    (
                        i64::from(p.s_minus_at_one()) + i64::from(cijt::q_k(p, mk, ell)),
                        i64::from(splitting::bott_splitting(p, ell)),
                    )
                }),
            );
            tr.int(
                "bott-splitting-iterate",
                Some(ell),
                (|| {
                    let p = table.clone()?;
                    Ok((i64::from(splitting::bott_splitting(&p, ell)), beta_minus.clone()?))
                })(),
            );
        }
    }
    Ok(report.finish())
}

/// Blocks from which the `β₋ = S⁻(1)` suite builds its specs.
pub fn beta_minus_catalog() -> Vec<BlockSpec> {
    let mut out = alloc::vec![BlockSpec::Zero { nu0: 1 }, BlockSpec::Zero { nu0: 2 }];
    for d in [1, 3, 5] {
        out.push(BlockSpec::Q0 { d });
    }
    for d in [1, 2, 3] {
        for sign in [1, -1] {
            out.push(BlockSpec::QSign { d, sign });
        }
    }
    out
}

/// All multisets of catalog blocks with total dimension `2n ≤ dim_bound`,
/// each listed once in catalog order.
pub fn enumerate_normal_form_specs(dim_bound: usize) -> Vec<PathSpec> {
    let catalog = beta_minus_catalog();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn walk(catalog: &[BlockSpec], start: usize, budget: usize, stack: &mut Vec<usize>, out: &mut Vec<PathSpec>) {
        for i in start..catalog.len() {
            let dim = 2 * catalog[i].half_dim();
            if dim > budget {
                continue;
            }
            stack.push(i);
            out.push(PathSpec::new(stack.iter().map(|&j| catalog[j].clone())));
            walk(catalog, i, budget - dim, stack, out);
            stack.pop();
        }
    }
    walk(&catalog, 0, dim_bound, &mut stack, &mut out);
    out
}

/// Run the `β₋ = S⁻(1)` and `β₊ + β₋ = ν` checks on every normal-form spec of
/// dimension at most `dim_bound`.
pub fn verify_beta_minus_suite(dim_bound: usize, tol: &Tolerances) -> Result<VerificationReport> {
    if dim_bound < 2 {
        return Err(Error::Precondition(format!("dimension bound must be ≥ 2, got {dim_bound}")));
    }
    let specs = enumerate_normal_form_specs(dim_bound);
    let mut report = VerificationReport::new("beta-minus-suite", None);
    report.notes.push(format!("{} normal-form specs with dimension ≤ {dim_bound}", specs.len()));
    let mut cache = SplitCache::new();
    for (case, spec) in specs.iter().enumerate() {
        let outcome = splitting::beta_minus_check_cached(spec, tol, &mut cache);
        let mut rec = Recorder { report: &mut report, section: Section::BetaMinus, path: Some(case) };
        let side = |f: fn(&splitting::BetaMinusReport) -> (u32, u32)| {
            outcome.clone().map(|r| {
                let (a, b) = f(&r);
                (i64::from(a), i64::from(b))
            })
        };
        rec.int("beta-minus-equals-splitting", None, side(|r| (r.invariants.beta_minus, r.s_minus_numeric)));
        rec.int("beta-minus-equals-table", None, side(|r| (r.invariants.beta_minus, r.s_minus_table)));
        rec.int("beta-sum-equals-nullity", None, side(|r| (r.invariants.beta_plus + r.invariants.beta_minus, r.nullity)));
        rec.int("splitting-symmetry-at-one", None, side(|r| (r.s_plus_numeric, r.s_minus_numeric)));
    }
    Ok(report.finish())
}

/// Short human-readable label of a spec, e.g. `q0(3) ⋄ qsign(1,+)`.
pub fn spec_label(spec: &PathSpec) -> String {
    let mut parts = Vec::new();
    for b in &spec.blocks {
        let s = match &b.spec {
            BlockSpec::Zero { nu0 } => format!("zero({nu0})"),
            BlockSpec::Q0 { d } => format!("q0({d})"),
            BlockSpec::QSign { d, sign } => format!("qsign({d},{})", if *sign > 0 { '+' } else { '-' }),
            BlockSpec::Rotation { theta } => match theta.pi_ratio() {
                Some(r) => format!("rotation({})", Angle::Exact(r)),
                None => format!("rotation({:.6})", theta.radians()),
            },
            BlockSpec::Hyperbolic { a } => format!("hyperbolic({a})"),
            BlockSpec::Generic { q } => format!("generic({}×{})", q.len(), q.len()),
        };
        parts.push(if b.iterate == 1 { s } else { format!("{s}^{}", b.iterate) });
    }
    parts.join(" ⋄ ")
}
