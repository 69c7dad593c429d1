//! Seeded generators of path specs and spec collections for the randomized
//! trials. Irrational angles keep a margin from every low-order resonance so
//! that rational detection and nullity decisions stay unambiguous.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sympidx::cijt;
use sympidx::generators::{BlockSpec, PathSpec};
use sympidx::paths::mean_index;
use sympidx::splitting::{splitting_profile, Route};
use sympidx::{Phase, Tolerances};

/// Shape of the generated specs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorOptions {
    pub max_blocks: usize,
    pub max_half_dim: usize,
    /// Rational rotation angles are `pπ/q` with `q` up to this bound.
    pub max_denominator: i64,
    /// Rotation angles lie in `(0, 2π·max_turns]`.
    pub max_turns: i64,
    pub allow_generic: bool,
    pub allow_irrational: bool,
    /// Irrational angles `θ` keep `{mθ/2π}` at least `margin` away from
    /// 0 and 1 for every `m ≤ margin_orders`.
    pub margin_orders: u64,
    pub margin: f64,
    /// Collections are redrawn while `M̄ · max_k î_k` exceeds this.
    pub max_scaled_mean: f64,
    /// At most this many specs of a collection carry an irrational angle.
    pub max_irrational_specs: usize,
}

impl GeneratorOptions {
    /// Single specs for the iteration identities, checked up to `m = 12`.
    pub fn single() -> Self {
        GeneratorOptions {
            max_blocks: 3,
            max_half_dim: 6,
            max_denominator: 6,
            max_turns: 2,
            allow_generic: true,
            allow_irrational: true,
            margin_orders: 24,
            margin: 0.01,
            max_scaled_mean: f64::INFINITY,
            max_irrational_specs: usize::MAX,
        }
    }

    /// Collections for the common index jump trials.
    pub fn collection() -> Self {
        GeneratorOptions {
            max_blocks: 3,
            max_half_dim: 5,
            max_denominator: 4,
            max_turns: 2,
            allow_generic: false,
            allow_irrational: true,
            margin_orders: 5,
            margin: 0.05,
            max_scaled_mean: 20.0,
            max_irrational_specs: 2,
        }
    }
}

pub struct SpecGenerator {
    rng: ChaCha8Rng,
    opts: GeneratorOptions,
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

impl SpecGenerator {
    pub fn new(seed: u64, opts: GeneratorOptions) -> Self {
        SpecGenerator { rng: ChaCha8Rng::seed_from_u64(seed), opts }
    }

    pub fn options(&self) -> &GeneratorOptions {
        &self.opts
    }

    /// Whether `x` radians stays clear of all resonances and of every
    /// small-denominator multiple of π.
    fn well_separated(&self, x: f64) -> bool {
        let clear = (1..=self.opts.margin_orders).all(|m| {
            let f = frac(m as f64 * x / (2.0 * PI));
            f > self.opts.margin && f < 1.0 - self.opts.margin
        });
        let irrational = (1..=12i64).all(|q| {
            let y = x / PI * q as f64;
            (y - y.round()).abs() > 1e-4
        });
        clear && irrational
    }

    fn irrational_radians(&mut self, lo: f64, hi: f64) -> f64 {
        loop {
            let x = self.rng.gen_range(lo..hi);
            if self.well_separated(x) {
                return x;
            }
        }
    }

    fn rotation(&mut self, irrational: bool) -> BlockSpec {
        let turns = self.opts.max_turns;
        let theta = if irrational {
            Phase::radians_value(self.irrational_radians(0.2, 2.0 * PI * turns as f64))
        } else {
            let q = self.rng.gen_range(1..=self.opts.max_denominator);
            let p = self.rng.gen_range(1..=2 * q * turns);
            Phase::pi(p, q)
        };
        BlockSpec::Rotation { theta }
    }

    fn degenerate(&mut self) -> BlockSpec {
        match self.rng.gen_range(0..4) {
            0 => BlockSpec::Zero { nu0: self.rng.gen_range(1..=2) },
            1 => BlockSpec::Q0 { d: [1, 3][self.rng.gen_range(0..2)] },
            _ => BlockSpec::QSign {
                d: self.rng.gen_range(1..=3),
                sign: if self.rng.gen_bool(0.5) { 1 } else { -1 },
            },
        }
    }

    fn hyperbolic(&mut self) -> BlockSpec {
        let a = self.rng.gen_range(0.2..1.0);
        BlockSpec::Hyperbolic { a: if self.rng.gen_bool(0.5) { a } else { -a } }
    }

    /// A 2×2 generic form: positive definite with rotation rate `w` (an
    /// irrational angle), or indefinite (hyperbolic).
    fn generic(&mut self, elliptic: bool) -> BlockSpec {
        let a = self.rng.gen_range(0.5..2.0);
        let b = self.rng.gen_range(-0.5..0.5);
        let det = if elliptic {
            let w = self.irrational_radians(0.2, 2.0 * PI - 0.2);
            w * w
        } else {
            let h = self.rng.gen_range(0.2..0.8);
            -h * h
        };
        let c = (det + b * b) / a;
        BlockSpec::Generic { q: vec![vec![a, b], vec![b, c]] }
    }

    /// One spec. With `force_rotation` the first block is a rotation, so the
    /// mean index is positive.
    pub fn spec(&mut self, force_rotation: bool, allow_irrational: bool) -> PathSpec {
        let count = self.rng.gen_range(1..=self.opts.max_blocks);
        let mut irrational_left = usize::from(allow_irrational && self.opts.allow_irrational);
        let mut blocks = Vec::new();
        let mut half_dim = 0;
        for i in 0..count {
            let block = loop {
                let kind = if i == 0 && force_rotation { 0 } else { self.rng.gen_range(0..10) };
                let block = match kind {
                    0..=3 => {
                        let irrational = irrational_left > 0 && self.rng.gen_bool(0.4);
                        if irrational {
                            irrational_left -= 1;
                        }
                        self.rotation(irrational)
                    }
                    4..=6 => self.degenerate(),
                    7 => self.hyperbolic(),
                    _ if self.opts.allow_generic => {
                        let elliptic = irrational_left > 0 && self.rng.gen_bool(0.5);
                        if elliptic {
                            irrational_left -= 1;
                        }
                        self.generic(elliptic)
                    }
                    _ => self.hyperbolic(),
                };
                if half_dim + block.half_dim() <= self.opts.max_half_dim {
                    break block;
                }
            };
            half_dim += block.half_dim();
            blocks.push(block);
        }
        PathSpec::new(blocks)
    }

    /// Whether a spec contains an angle that is not an exact multiple of π.
    fn has_irrational(spec: &PathSpec) -> bool {
        spec.blocks.iter().any(|b| match &b.spec {
            BlockSpec::Rotation { theta } => theta.pi_ratio().is_none(),
            BlockSpec::Generic { q } => q[0][0] * q[1][1] - q[0][1] * q[1][0] > 0.0,
            _ => false,
        })
    }

    /// `q` specs, each with a rotation block, satisfying the collection
    /// constraints of the options.
    pub fn collection(&mut self, q: usize, tol: &Tolerances) -> Vec<PathSpec> {
        loop {
            let mut specs = Vec::with_capacity(q);
            let mut irrational_specs = 0;
            for _ in 0..q {
                let allow = irrational_specs < self.opts.max_irrational_specs;
                let spec = self.spec(true, allow);
                if Self::has_irrational(&spec) {
                    irrational_specs += 1;
                }
                specs.push(spec);
            }
            if self.acceptable(&specs, tol) {
                return specs;
            }
        }
    }

    fn acceptable(&self, specs: &[PathSpec], tol: &Tolerances) -> bool {
        let Ok(profiles) =
            specs.iter().map(|s| splitting_profile(s, Route::Table, tol)).collect::<Result<Vec<_>, _>>()
        else {
            return false;
        };
        let Ok(means) = specs.iter().map(|s| mean_index(s, tol)).collect::<Result<Vec<_>, _>>() else {
            return false;
        };
        let m_bar = cijt::m_bar(&profiles) as f64;
        means.iter().all(|m| m.value > 0.0 && m_bar * m.value <= self.opts.max_scaled_mean)
    }
}
