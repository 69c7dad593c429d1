mod common;

use common::*;
use num_rational::Ratio;
use proptest::prelude::*;
use sympidx::cijt::*;
use sympidx::generators::{BlockSpec, PathSpec};
use sympidx::paths::{iterate, mean_index, MeanIndex};
use sympidx::splitting::{splitting_numbers, splitting_profile, Route, SplittingProfile};
use sympidx::{Angle, Error, FracPart, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn profile(s: &PathSpec) -> SplittingProfile {
    splitting_profile(s, Route::Table, &tol()).unwrap()
}

fn profiles(specs: &[PathSpec]) -> Vec<SplittingProfile> {
    specs.iter().map(profile).collect()
}

fn params(epsilon: f64, want: usize, n_max: u64) -> SearchParams {
    SearchParams { epsilon, want, n_max, min_m: 1 }
}

/// First `want` values `N ≤ n_max` at which every `N/(M̄ î_k)` lies within
/// `ε` of an integer, with the resulting `m_k`, by a plain f64 scan.
fn brute_force_tuples(means: &[f64], m_bar: u64, eps: f64, want: usize, n_max: u64) -> Vec<(u64, Vec<u64>)> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let mut ms = Vec::new();
        for &mean in means {
            let x = n as f64 / (m_bar as f64 * mean);
            let nearest = x.round();
            if (x - nearest).abs() >= eps {
                break;
            }
            ms.push(nearest as u64 * m_bar);
        }
        if ms.len() == means.len() && ms.iter().all(|&m| m >= 1) {
            out.push((n, ms));
            if out.len() == want {
                break;
            }
        }
    }
    out
}

#[test]
fn resonance_period_examples() {
    assert_eq!(m_check(&profiles(&[one(rotation(1, 2))])), Some(4));
    assert_eq!(m_check(&profiles(&[one(BlockSpec::Hyperbolic { a: 1.0 })])), None);
    assert_eq!(m_check(&profiles(&[one(rotation(2, 3)), one(rotation(1, 1))])), Some(2));
    assert_eq!(m_check(&profiles(&[one(rotation_rad(1.0))])), None);
    // eigenvalue 1 alone is not a resonance
    assert_eq!(m_check(&profiles(&[one(BlockSpec::Zero { nu0: 1 })])), None);
}

#[test]
fn common_denominator_examples() {
    assert_eq!(m_bar(&profiles(&[one(rotation(2, 3))])), 3);
    assert_eq!(m_bar(&profiles(&[one(BlockSpec::Hyperbolic { a: 1.0 })])), 1);
    assert_eq!(m_bar(&profiles(&[one(rotation_rad(1.0)), one(BlockSpec::Q0 { d: 3 })])), 1);
    assert_eq!(m_bar(&profiles(&[one(rotation(1, 2)), one(rotation(2, 3))])), 6);
    assert_eq!(m_bar(&profiles(&[spec([rotation(1, 2), rotation(2, 3)])])), 6);
}

#[test]
fn common_denominator_clears_every_exact_angle() {
    let specs = [one(rotation(5, 4)), spec([rotation(2, 5), rotation(1, 1)]), one(rotation(7, 6))];
    let ps = profiles(&specs);
    let mb = m_bar(&ps);
    for e in ps.iter().flat_map(|p| &p.entries) {
        let r = e.angle.pi_ratio().unwrap() * Ratio::from_integer(mb as i64);
        assert!(r.is_integer(), "{} at M̄ = {mb}", e.angle);
    }
}

#[test]
fn rational_mean_hits_exactly() {
    let out = find_jump_tuples(&[MeanIndex::exact(Ratio::from_integer(2))], 1, &params(1e-6, 1, 100)).unwrap();
    let c = &out.certificates[0];
    assert_eq!((c.n, c.m.clone(), c.chi.clone()), (2, vec![1], vec![0]));
    assert_eq!(c.residuals, vec![0.0]);
    assert!(out.warning.is_none());
}

#[test]
fn irrational_pair_has_a_tuple_and_matches_brute_force() {
    let means = [MeanIndex::numeric(1.0), MeanIndex::numeric(2f64.sqrt())];
    let out = find_jump_tuples(&means, 1, &params(0.01, 3, 1_000_000)).unwrap();
    assert_eq!(out.certificates.len(), 3);
    let oracle = brute_force_tuples(&[1.0, 2f64.sqrt()], 1, 0.01, 3, 1_000_000);
    let found: Vec<(u64, Vec<u64>)> = out.certificates.iter().map(|c| (c.n, c.m.clone())).collect();
    assert_eq!(found, oracle);
    for c in &out.certificates {
        validate_certificate(c, &means).unwrap();
    }
}

#[test]
fn scan_matches_brute_force_with_a_common_denominator() {
    let t = tol();
    let specs = [spec([rotation(2, 3), rotation_rad(1.0)]), spec([rotation(1, 2), rotation_rad(2.0), BlockSpec::Zero { nu0: 1 }])];
    let means: Vec<MeanIndex> = specs.iter().map(|s| mean_index(s, &t).unwrap()).collect();
    let mb = m_bar(&profiles(&specs));
    assert_eq!(mb, 6);
    let out = find_jump_tuples(&means, mb, &params(0.02, 4, 200_000)).unwrap();
    let values: Vec<f64> = means.iter().map(|m| m.value).collect();
    let oracle = brute_force_tuples(&values, mb, 0.02, 4, 200_000);
    let found: Vec<(u64, Vec<u64>)> = out.certificates.iter().map(|c| (c.n, c.m.clone())).collect();
    assert_eq!(found, oracle);
}

#[test]
fn short_scans_warn() {
    let means = [MeanIndex::numeric(1.0), MeanIndex::numeric(2f64.sqrt())];
    let out = find_jump_tuples(&means, 1, &params(1e-4, 5, 100)).unwrap();
    assert!(out.certificates.len() < 5);
    assert!(out.warning.unwrap().contains("N ≤ 100"));
}

#[test]
fn scan_preconditions() {
    let p = params(0.01, 1, 10);
    assert!(matches!(find_jump_tuples(&[MeanIndex::zero()], 1, &p), Err(Error::Precondition(_))));
    assert!(matches!(find_jump_tuples(&[MeanIndex::numeric(-1.0)], 1, &p), Err(Error::Precondition(_))));
    assert!(matches!(find_jump_tuples(&[], 1, &p), Err(Error::Precondition(_))));
    assert!(matches!(find_jump_tuples(&[MeanIndex::numeric(1.0)], 1, &params(0.5, 1, 10)), Err(Error::Precondition(_))));
    assert!(matches!(find_jump_tuples(&[MeanIndex::numeric(1.0)], 0, &p), Err(Error::Precondition(_))));
}

#[test]
fn minimum_iterate_is_honoured() {
    let means = [MeanIndex::exact(Ratio::from_integer(2))];
    let p = SearchParams { epsilon: 1e-6, want: 2, n_max: 100, min_m: 4 };
    let out = find_jump_tuples(&means, 1, &p).unwrap();
    assert!(out.certificates.iter().all(|c| c.m[0] >= 4));
    assert_eq!(out.certificates[0].n, 8);
}

#[test]
fn certificate_validation_catches_tampering() {
    let means = [MeanIndex::numeric(1.0), MeanIndex::numeric(2f64.sqrt())];
    let c = find_jump_tuples(&means, 1, &params(0.01, 1, 1_000_000)).unwrap().certificates.remove(0);
    validate_certificate(&c, &means).unwrap();
    let mut bad = c.clone();
    bad.m[1] += 1;
    assert!(validate_certificate(&bad, &means).is_err());
    let mut bad = c.clone();
    bad.n += 1;
    assert!(validate_certificate(&bad, &means).is_err());
    let mut bad = c.clone();
    bad.chi[0] ^= 1;
    assert!(validate_certificate(&bad, &means).is_err());
    assert!(validate_certificate(&c, &means[..1]).is_err());
}

#[test]
fn residual_bound_on_the_doubled_means() {
    let means = [MeanIndex::numeric(0.7), MeanIndex::numeric(2f64.sqrt()), MeanIndex::exact(Ratio::new(5, 3))];
    let mb = 3;
    let out = find_jump_tuples(&means, mb, &params(0.02, 5, 2_000_000)).unwrap();
    assert!(!out.certificates.is_empty());
    for c in &out.certificates {
        for (k, mean) in means.iter().enumerate() {
            let lhs = (2.0 * c.m[k] as f64 * mean.value - 2.0 * c.n as f64).abs();
            let rhs = 2.0 * mb as f64 * mean.value * c.epsilon;
            assert!(lhs < rhs, "k = {k}: {lhs} vs {rhs}");
            assert!((lhs - 2.0 * mb as f64 * mean.value * c.residuals[k]).abs() < 1e-6);
        }
    }
}

#[test]
fn resonance_sum_examples() {
    let ident = profile(&one(BlockSpec::Zero { nu0: 1 }));
    for m in 1..=8 {
        assert_eq!(q_k(&ident, 2, m), 0);
    }
    let half = one(rotation(1, 1));
    let p = profile(&half);
    let (_, at_minus_one) = splitting_numbers(&half, &Angle::pi(), Route::Numeric, &tol()).unwrap();
    for m in 1..=8 {
        let want = if m % 2 == 0 { at_minus_one } else { 0 };
        assert_eq!(q_k(&p, 4, m), want, "m = {m}");
    }
    let irr = profile(&one(rotation_rad(1.0)));
    assert!((1..=20).all(|m| q_k(&irr, 6, m) == 0));
}

#[test]
fn resonance_sum_bridges_the_iterate_splitting() {
    let t = tol();
    let specs = [
        spec([rotation(1, 2), BlockSpec::QSign { d: 1, sign: -1 }]),
        spec([rotation(2, 3), rotation(1, 1), BlockSpec::Q0 { d: 3 }]),
        spec([rotation(5, 6), BlockSpec::Hyperbolic { a: 0.5 }, BlockSpec::Zero { nu0: 1 }]),
    ];
    for s in &specs {
        let p = profile(s);
        let mk = m_bar(std::slice::from_ref(&p)) * 2;
        for m in 1..=12 {
            let (_, direct) = splitting_numbers(&iterate(s, m).unwrap(), &Angle::zero(), Route::Numeric, &t).unwrap();
            assert_eq!(q_k(&p, mk, m) + p.s_minus_at_one(), direct, "{s:?} at m = {m}");
        }
    }
}

#[test]
fn small_fraction_sum_examples() {
    let hyp = profile(&one(BlockSpec::Hyperbolic { a: 1.0 }));
    assert_eq!(delta_k(&hyp, 7, 0.1).unwrap().value, 0);
    // m_k θ/π ∈ Z: fractional part 0 is excluded
    let p = profile(&one(rotation(2, 3)));
    assert_eq!(delta_k(&p, 3, 0.1).unwrap().value, 0);
    let p = profile(&one(rotation(1, 30)));
    let r = delta_k(&p, 1, 0.1).unwrap();
    // θ = π/30 has {θ/π} = 1/30 with S⁻ = 1; its conjugate has 59/30 → 29/30
    assert_eq!(r.value, 1);
    assert_eq!(r.fractional_parts.len(), 2);
    assert!(delta_k(&p, 1, 0.0).is_err() && delta_k(&p, 1, 1.0).is_err());
}

#[test]
fn small_fraction_sum_reports_numeric_parts() {
    let theta = 0.05;
    let p = profile(&one(rotation_rad(theta)));
    for mk in [1u64, 2, 5] {
        let r = delta_k(&p, mk, 0.1).unwrap();
        let f = (mk as f64 * theta / std::f64::consts::PI).fract();
        let expected = u32::from(f > 0.0 && f < 0.1);
        assert_eq!(r.value, expected, "m_k = {mk}");
        assert!(r.fractional_parts.iter().any(|(_, fp)| matches!(fp, FracPart::Numeric(x) if (x - f).abs() < 1e-12)));
    }
}

#[test]
fn total_sum_examples() {
    assert_eq!(c_total(&profile(&one(BlockSpec::Zero { nu0: 1 }))), 0);
    let half = one(rotation(1, 1));
    let (_, at_minus_one) = splitting_numbers(&half, &Angle::pi(), Route::Numeric, &tol()).unwrap();
    assert_eq!(c_total(&profile(&half)), at_minus_one);
    let parts = [one(rotation(1, 2)), one(rotation(1, 1)), one(BlockSpec::QSign { d: 1, sign: -1 }), one(rotation_rad(2.0))];
    let sum: u32 = parts.iter().map(|s| c_total(&profile(s))).sum();
    let whole = parts.iter().skip(1).fold(parts[0].clone(), |acc, s| acc.concat(s));
    assert_eq!(c_total(&profile(&whole)), sum);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_satisfy_their_definition(a in 0.3f64..3.0, b in 0.3f64..3.0, mb in 1u64..7) {
        let means = [MeanIndex::numeric(a), MeanIndex::numeric(b)];
        let out = find_jump_tuples(&means, mb, &params(0.05, 3, 100_000)).unwrap();
        for c in &out.certificates {
            prop_assert!(validate_certificate(c, &means).is_ok());
            for (k, mean) in means.iter().enumerate() {
                let x = c.n as f64 / (mb as f64 * mean.value);
                prop_assert_eq!(c.m[k], (x.floor() as u64 + u64::from(c.chi[k])) * mb);
                prop_assert!(c.residuals[k] < 0.05);
            }
        }
    }
}
