//! Spec builders and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use sympidx::generators::{BlockSpec, PathSpec};
use sympidx::Phase;

pub fn rotation(num: i64, den: i64) -> BlockSpec {
    BlockSpec::Rotation { theta: Phase::pi(num, den) }
}

pub fn rotation_rad(radians: f64) -> BlockSpec {
    BlockSpec::Rotation { theta: Phase::radians_value(radians) }
}

pub fn spec(blocks: impl IntoIterator<Item = BlockSpec>) -> PathSpec {
    PathSpec::new(blocks)
}

pub fn one(block: BlockSpec) -> PathSpec {
    PathSpec::new([block])
}

/// `(μ₋, μ₊)` of the planar rotation path `t ↦ R(tθ)`, `θ > 0`, by counting
/// crossings of the eigenvalue 1: each full turn contributes 2, and an
/// endpoint on a full turn contributes the half-open jump ±1.
pub fn rotation_index_oracle(theta: f64) -> (i64, i64) {
    let turns = theta / (2.0 * PI);
    let k = turns.round();
    if (turns - k).abs() < 1e-12 {
        let k = k as i64;
        (2 * k - 1, 2 * k + 1)
    } else {
        let i = 2 * turns.floor() as i64 + 1;
        (i, i)
    }
}

/// A 2×2 positive definite form whose flow `exp(tJQ)` is symplectically
/// conjugate to the rotation by `w·t`.
pub fn elliptic_form(w: f64, a: f64, b: f64) -> BlockSpec {
    let c = (w * w + b * b) / a;
    BlockSpec::Generic { q: vec![vec![a, b], vec![b, c]] }
}

/// A 2×2 indefinite form with real eigenvalues `±h` of `JQ`.
pub fn hyperbolic_form(h: f64, a: f64, b: f64) -> BlockSpec {
    let c = (b * b - h * h) / a;
    BlockSpec::Generic { q: vec![vec![a, b], vec![b, c]] }
}

/// The degenerate catalog plus one representative of each other kind.
pub fn every_kind() -> Vec<BlockSpec> {
    vec![
        BlockSpec::Zero { nu0: 1 },
        BlockSpec::Zero { nu0: 2 },
        BlockSpec::Q0 { d: 1 },
        BlockSpec::Q0 { d: 3 },
        BlockSpec::Q0 { d: 5 },
        BlockSpec::QSign { d: 1, sign: 1 },
        BlockSpec::QSign { d: 1, sign: -1 },
        BlockSpec::QSign { d: 2, sign: 1 },
        BlockSpec::QSign { d: 2, sign: -1 },
        BlockSpec::QSign { d: 3, sign: 1 },
        BlockSpec::QSign { d: 3, sign: -1 },
        rotation(1, 2),
        rotation(1, 1),
        rotation(2, 1),
        rotation(2, 3),
        rotation(7, 3),
        rotation(4, 1),
        rotation_rad(1.0),
        rotation_rad(5.3),
        BlockSpec::Hyperbolic { a: 0.7 },
        BlockSpec::Hyperbolic { a: -1.3 },
        elliptic_form(1.3, 1.0, 0.2),
        elliptic_form(2.9, 0.7, -0.4),
        hyperbolic_form(0.6, 1.2, 0.3),
    ]
}

/// `i_ω` of the planar rotation path `t ↦ R(tθ)` at `ω = e^{iα}` off its
/// spectrum: the number of times `e^{±isθ}`, `s ∈ (0, 1)`, passes `ω`.
pub fn rotation_omega_index_oracle(theta: f64, alpha: f64) -> i64 {
    let two_pi = 2.0 * PI;
    let mut count = 0;
    for start in [alpha.rem_euclid(two_pi), (-alpha).rem_euclid(two_pi)] {
        let mut s = start;
        while s < theta {
            if s > 0.0 {
                count += 1;
            }
            s += two_pi;
        }
    }
    count
}

/// `S⁺ − S⁻` of the rotation end `R(θ)` at `e^{iβ}`, as the difference of
/// the oracle ω-indices just after and just before `β`.
pub fn rotation_splitting_difference(theta: f64, beta: f64) -> i64 {
    let eps = 1e-6;
    rotation_omega_index_oracle(theta, beta + eps) - rotation_omega_index_oracle(theta, beta - eps)
}
