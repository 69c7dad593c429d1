mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use sympidx::cijt::{find_jump_tuples, m_bar, JumpCertificate, SearchParams};
use sympidx::generators::{BlockSpec, PathSpec};
use sympidx::paths::mean_index;
use sympidx::splitting::{splitting_profile, Route};
use sympidx::verify::*;
use sympidx::{Error, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

/// First tuples for a collection, with every `2m_k` beyond `min_iterate`.
fn tuples(specs: &[PathSpec], epsilon: f64, want: usize, min_iterate: u64) -> Vec<JumpCertificate> {
    let t = tol();
    let means: Vec<_> = specs.iter().map(|s| mean_index(s, &t).unwrap()).collect();
    let profiles: Vec<_> = specs.iter().map(|s| splitting_profile(s, Route::Table, &t).unwrap()).collect();
    let p = SearchParams { epsilon, want, n_max: 10_000_000, min_m: min_iterate / 2 + 1 };
    let out = find_jump_tuples(&means, m_bar(&profiles), &p).unwrap();
    assert_eq!(out.certificates.len(), want, "{:?}", out.warning);
    out.certificates
}

fn find<'a>(r: &'a VerificationReport, name: &str, path: usize, m: Option<u64>) -> &'a Check {
    r.checks
        .iter()
        .find(|c| c.name == name && c.path == Some(path) && c.m == m)
        .unwrap_or_else(|| panic!("no check {name} for path {path} at {m:?}"))
}

fn int(v: Option<Value>) -> i64 {
    match v {
        Some(Value::Int(i)) => i,
        other => panic!("expected an integer side, got {other:?}"),
    }
}

#[test]
fn full_turn_rotation_jumps_like_the_crossing_count() {
    let specs = [spec([rotation(2, 1), BlockSpec::Zero { nu0: 1 }])];
    for cert in tuples(&specs, 1e-3, 2, 6) {
        let r = verify_ecijt(&specs, &cert, 5, 0.1, &tol()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        for m in 1..=5u64 {
            // i of the rotation part from the crossing oracle, plus −1 from the identity block
            let i_at = |k: u64| rotation_index_oracle(2.0 * PI * k as f64).0 - 1;
            let c = find(&r, "index-jump-right", 0, Some(m));
            assert_eq!(int(c.lhs), i_at(2 * cert.m[0] + m));
            assert_eq!(int(c.rhs), 2 * cert.n as i64 + i_at(m));
        }
    }
}

#[test]
fn resonant_nullity_checks_stop_before_the_first_resonance() {
    let specs = [one(rotation(1, 2)), one(rotation_rad(1.0))];
    let cert = &tuples(&specs, 1e-3, 1, 12)[0];
    let r = verify_ecijt(&specs, cert, 6, 0.1, &tol()).unwrap();
    assert!(r.passed());
    let ms: Vec<u64> = r.checks.iter().filter(|c| c.name == "nullity-before-resonance-left" && c.path == Some(0)).filter_map(|c| c.m).collect();
    assert_eq!(ms, vec![1, 2, 3]);
    let ms: Vec<u64> = r.checks.iter().filter(|c| c.name == "nullity-before-resonance-left" && c.path == Some(1)).filter_map(|c| c.m).collect();
    assert_eq!(ms.len(), 3);
}

#[test]
fn external_definitions_live_in_their_own_section() {
    let specs = [spec([rotation(2, 3), BlockSpec::QSign { d: 1, sign: -1 }])];
    let cert = &tuples(&specs, 1e-3, 1, 10)[0];
    let r = verify_ecijt(&specs, cert, 4, 0.1, &tol()).unwrap();
    let ext: Vec<&Check> = r.checks.iter().filter(|c| c.section == Section::ExternalDefinition).collect();
    assert_eq!(ext.len(), 1);
    assert_eq!(ext[0].name, "index-at-jump");
    assert!(r.section_passed(Section::Core));
    assert!(r.notes.iter().any(|n| n.contains("C(M)")));
}

#[test]
fn hyperbolic_part_leaves_the_resonance_sums_empty() {
    let specs = [spec([rotation_rad(1.0), BlockSpec::Hyperbolic { a: 0.8 }])];
    let cert = &tuples(&specs, 1e-3, 1, 10)[0];
    let r = verify_ecijt(&specs, cert, 4, 0.1, &tol()).unwrap();
    assert!(r.passed());
    for m in 1..=4 {
        // i(γ, 2m_k − m) = 2N − i(γ, m) − 2S⁺(1) with S⁺(1) = 0
        let c = find(&r, "index-jump-left", 0, Some(m));
        let right = find(&r, "index-jump-right", 0, Some(m));
        let i_m = int(right.rhs) - 2 * cert.n as i64;
        assert_eq!(int(c.rhs), 2 * cert.n as i64 - i_m);
    }
}

#[test]
fn collections_without_rotation_are_rejected() {
    let specs = [one(BlockSpec::Hyperbolic { a: 1.0 })];
    let cert = JumpCertificate { n: 1, m: vec![1], chi: vec![0], epsilon: 0.1, m_bar: 1, residuals: vec![0.0] };
    assert!(matches!(verify_ecijt(&specs, &cert, 1, 0.1, &tol()), Err(Error::Precondition(_))));
}

#[test]
fn jump_identity_preconditions() {
    let specs = [one(rotation(1, 2))];
    let cert = tuples(&specs, 1e-3, 1, 2).remove(0);
    assert!(matches!(verify_ecijt(&specs, &cert, 0, 0.1, &tol()), Err(Error::Precondition(_))));
    assert!(matches!(verify_ecijt(&specs, &cert, 1, 1.5, &tol()), Err(Error::Precondition(_))));
    assert!(matches!(verify_ecijt(&specs, &cert, 2 * cert.m[0], 0.1, &tol()), Err(Error::Precondition(_))));
    let mut bad = cert.clone();
    bad.m[0] += bad.m_bar;
    assert!(matches!(verify_ecijt(&specs, &bad, 1, 0.1, &tol()), Err(Error::Precondition(_))));
    assert!(matches!(verify_ecijt(&[one(rotation(1, 2)), one(rotation(1, 3))], &cert, 1, 0.1, &tol()), Err(Error::Precondition(_))));
}

#[test]
fn recurrence_properties_hold_on_a_mixed_collection() {
    let specs = [
        spec([rotation(2, 3), BlockSpec::QSign { d: 1, sign: -1 }]),
        spec([rotation_rad(1.3), BlockSpec::Q0 { d: 3 }]),
        spec([rotation(1, 1), BlockSpec::Zero { nu0: 1 }, BlockSpec::Hyperbolic { a: 0.4 }]),
    ];
    for cert in tuples(&specs, 1e-3, 2, 12) {
        let r = verify_ir(&specs, &cert, 5, 0.5, &tol()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.checks.iter().any(|c| c.section == Section::Translation));
        assert!(r.checks.iter().any(|c| c.name == "recurrence-left"));
    }
}

#[test]
fn non_degenerate_iterates_reduce_the_left_recurrence() {
    // R(π/3)^ℓ is degenerate only for 6 | ℓ; for ℓ ≤ 5 the β-difference is 0
    let specs = [one(rotation(1, 3))];
    let cert = &tuples(&specs, 1e-3, 1, 12)[0];
    let r = verify_ir(&specs, cert, 5, 0.5, &tol()).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    for c in r.checks.iter().filter(|c| c.name == "beta-difference") {
        assert_eq!(int(c.lhs), 0, "{c:?}");
    }
}

#[test]
fn recurrence_refuses_coarse_tuples() {
    let specs = [one(rotation(3, 2))];
    let cert = tuples(&specs, 0.2, 1, 6).remove(0);
    assert!(matches!(verify_ir(&specs, &cert, 5, 0.5, &tol()), Err(Error::Precondition(_))));
    assert!(matches!(verify_ir(&specs, &cert, 5, 0.0, &tol()), Err(Error::Precondition(_))));
}

#[test]
fn smallest_suite_has_the_identity_and_both_shears() {
    let specs = enumerate_normal_form_specs(2);
    let labels: Vec<String> = specs.iter().map(spec_label).collect();
    assert_eq!(labels, vec!["zero(1)", "q0(1)", "qsign(1,+)", "qsign(1,-)"]);
    let r = verify_beta_minus_suite(2, &tol()).unwrap();
    assert!(r.passed());
    assert_eq!(r.summary.passed, 4 * 4);
}

#[test]
fn identity_like_blocks_agree() {
    let r = verify_beta_minus_suite(2, &tol()).unwrap();
    for case in [0, 1] {
        let c = find(&r, "beta-minus-equals-splitting", case, None);
        assert_eq!((int(c.lhs), int(c.rhs)), (1, 1));
    }
}

#[test]
fn six_dimensional_suite_includes_the_chain_form() {
    let specs = enumerate_normal_form_specs(6);
    let r = verify_beta_minus_suite(6, &tol()).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    let case = specs.iter().position(|s| *s == one(BlockSpec::Q0 { d: 3 })).unwrap();
    let c = find(&r, "beta-minus-equals-splitting", case, None);
    assert_eq!((int(c.lhs), int(c.rhs)), (1, 1));
}

#[test]
fn suite_rejects_tiny_bounds() {
    assert!(matches!(verify_beta_minus_suite(1, &tol()), Err(Error::Precondition(_))));
}

/// Number of multisets of catalog blocks with total half-dimension in
/// `1..=budget`, by the generating function `∏ 1/(1 − x^{h})`.
fn multiset_count(half_dims: &[usize], budget: usize) -> usize {
    let mut ways = vec![0usize; budget + 1];
    ways[0] = 1;
    for &h in half_dims {
        for total in h..=budget {
            ways[total] += ways[total - h];
        }
    }
    ways[1..].iter().sum()
}

#[test]
fn enumeration_counts_every_multiset_once() {
    let half_dims: Vec<usize> = beta_minus_catalog().iter().map(|b| b.half_dim()).collect();
    for bound in [2usize, 3, 4, 6, 8, 12] {
        let specs = enumerate_normal_form_specs(bound);
        assert_eq!(specs.len(), multiset_count(&half_dims, bound / 2), "bound {bound}");
        assert!(specs.iter().all(|s| 2 * s.half_dim() <= bound));
        let mut labels: Vec<String> = specs.iter().map(spec_label).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), specs.len());
    }
}

#[test]
fn labels_are_readable() {
    let s = spec([BlockSpec::Q0 { d: 3 }, BlockSpec::QSign { d: 1, sign: 1 }, rotation(1, 2), BlockSpec::Hyperbolic { a: 0.5 }]);
    assert_eq!(spec_label(&s), "q0(3) ⋄ qsign(1,+) ⋄ rotation(π/2) ⋄ hyperbolic(0.5)");
}

#[test]
fn reports_serialise_deterministically() {
    let specs = [spec([rotation(2, 3), BlockSpec::Q0 { d: 1 }])];
    let cert = &tuples(&specs, 1e-3, 1, 10)[0];
    let a = serde_json::to_string(&verify_ecijt(&specs, cert, 4, 0.1, &tol()).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_ecijt(&specs, cert, 4, 0.1, &tol()).unwrap()).unwrap();
    assert_eq!(a, b);
    let back: VerificationReport = serde_json::from_str(&a).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), a);
}

fn trial_block() -> impl Strategy<Value = BlockSpec> {
    prop_oneof![
        3 => (1i64..12, 1i64..7).prop_filter("no full turns", |(p, q)| p % (2 * q) != 0).prop_map(|(p, q)| rotation(p, q)),
        1 => (0.3f64..6.0).prop_map(rotation_rad),
        1 => Just(BlockSpec::Zero { nu0: 1 }),
        1 => Just(BlockSpec::Q0 { d: 1 }),
        1 => prop_oneof![Just(1i8), Just(-1i8)].prop_map(|sign| BlockSpec::QSign { d: 1, sign }),
        1 => (0.2f64..1.5).prop_map(|a| BlockSpec::Hyperbolic { a }),
    ]
}

fn trial_spec() -> impl Strategy<Value = PathSpec> {
    (
        (1i64..12, 1i64..5).prop_filter("no full turns", |(p, q)| p % (2 * q) != 0),
        proptest::collection::vec(trial_block(), 0..2),
    )
        .prop_map(|((p, q), rest)| {
            let mut blocks = vec![rotation(p, q)];
            blocks.extend(rest);
            spec(blocks)
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn jump_identities_and_translations_imply_the_recurrence(
        specs in proptest::collection::vec(trial_spec(), 1..3),
    ) {
        let t = tol();
        let means: Vec<_> = specs.iter().map(|s| mean_index(s, &t).unwrap()).collect();
        let profiles: Vec<_> = specs.iter().map(|s| splitting_profile(s, Route::Table, &t).unwrap()).collect();
        let mb = m_bar(&profiles);
        prop_assume!(means.iter().map(|m| m.value).fold(0.0, f64::max) * mb as f64 <= 20.0);
        let p = SearchParams { epsilon: 1e-3, want: 1, n_max: 10_000_000, min_m: 4 };
        let out = find_jump_tuples(&means, mb, &p).unwrap();
        prop_assume!(!out.certificates.is_empty());
        let cert = &out.certificates[0];
        let jumps = verify_ecijt(&specs, cert, 5, 0.1, &t).unwrap();
        let ir = verify_ir(&specs, cert, 5, 0.5, &t).unwrap();
        if jumps.section_passed(Section::Core) && ir.section_passed(Section::Translation) {
            prop_assert!(ir.section_passed(Section::Core), "{:?}", ir.failures().collect::<Vec<_>>());
        }
        prop_assert!(!jumps.has_engine_errors() && !ir.has_engine_errors());
    }
}
