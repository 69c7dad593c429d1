//! Points on the unit circle, kept exact whenever the angle is a rational
//! multiple of π, plus unnormalized rotation amounts used by generator blocks.

use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
#[allow(unused_imports)] // float math is inherent in `core` on recent toolchains
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Tolerances};

/// Outcome of continued-fraction rationality detection for a numeric angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalityRecord {
    /// Best approximation `num/den` of `θ/π` with `den ≤ q_max`.
    pub best_num: i64,
    pub best_den: i64,
    pub q_max: u32,
    /// `|θ − π·num/den|` in radians.
    pub residual: f64,
}

/// A point `e^{iθ}` on the unit circle with `θ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AngleRepr", into = "AngleRepr")]
pub enum Angle {
    /// `θ = r·π` with `r` reduced and `0 ≤ r < 2`.
    Exact(Ratio<i64>),
    /// A floating-point angle whose rationality was not confirmed.
    Numeric { radians: f64, record: RationalityRecord },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Exact { pi_num: i64, pi_den: i64 },
    Numeric { radians: f64, rationality: Option<RationalityRecord> },
}

impl TryFrom<AngleRepr> for Angle {
    type Error = Error;
    fn try_from(r: AngleRepr) -> Result<Angle> {
        match r {
            AngleRepr::Exact { pi_num, pi_den } => Angle::pi_fraction(pi_num, pi_den),
            AngleRepr::Numeric { radians, rationality } => {
                if !radians.is_finite() {
                    return Err(Error::Validation("angle must be finite".into()));
                }
                let radians = wrap_radians(radians);
                let record = rationality.unwrap_or_else(|| rationality_record(radians, 64));
                Ok(Angle::Numeric { radians, record })
            }
        }
    }
}

impl From<Angle> for AngleRepr {
    fn from(a: Angle) -> AngleRepr {
        match a {
            Angle::Exact(r) => AngleRepr::Exact { pi_num: *r.numer(), pi_den: *r.denom() },
            Angle::Numeric { radians, record } => {
                AngleRepr::Numeric { radians, rationality: Some(record) }
            }
        }
    }
}

/// Fractional part `{x}` of a multiple of an angle, exact when the angle is.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FracPart {
    Exact(Ratio<i64>),
    Numeric(f64),
}

impl FracPart {
    pub fn value(&self) -> f64 {
        match self {
            FracPart::Exact(r) => ratio_to_f64(*r),
            FracPart::Numeric(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FracPart::Exact(r) => r.is_zero(),
            FracPart::Numeric(x) => *x == 0.0,
        }
    }
}

pub(crate) fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Wrap a real angle into `[0, 2π)`.
pub fn wrap_radians(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x % two_pi;
    if y < 0.0 {
        y += two_pi;
    }
    if y >= two_pi {
        y -= two_pi;
    }
    y
}

/// Best continued-fraction convergent of `θ/π` with denominator at most `q_max`.
pub fn rationality_record(radians: f64, q_max: u32) -> RationalityRecord {
    let x = radians / PI;
    let q_max = i64::from(q_max.max(1));
    let (mut h_prev, mut h) = (0i64, 1i64);
    let (mut k_prev, mut k) = (1i64, 0i64);
    let mut best = (x.round() as i64, 1i64);
    let mut best_err = (x - x.round()).abs();
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e12 {
            break;
        }
        let ai = a as i64;
        let h_next = ai * h + h_prev;
        let k_next = ai * k + k_prev;
        if k_next > q_max || k_next <= 0 {
            break;
        }
        let err = (x - h_next as f64 / k_next as f64).abs();
        if err < best_err {
            best = (h_next, k_next);
            best_err = err;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    RationalityRecord {
        best_num: best.0,
        best_den: best.1,
        q_max: q_max as u32,
        residual: best_err * PI,
    }
}

fn reduce_mod_two(r: Ratio<i64>) -> Ratio<i64> {
    let two_den = 2 * *r.denom();
    let num = r.numer().mod_floor(&two_den);
    Ratio::new(num, *r.denom())
}

impl Angle {
    pub fn zero() -> Angle {
        Angle::Exact(Ratio::zero())
    }

    pub fn pi() -> Angle {
        Angle::Exact(Ratio::from_integer(1))
    }

    /// The exact angle `(num/den)·π`, reduced modulo 2π.
    pub fn pi_fraction(num: i64, den: i64) -> Result<Angle> {
        if den <= 0 {
            return Err(Error::Validation(alloc::format!(
                "angle denominator must be positive, got {den}"
            )));
        }
        Ok(Angle::Exact(reduce_mod_two(Ratio::new(num, den))))
    }

    /// Classify a floating-point angle, snapping to an exact fraction when the
    /// continued-fraction residual is within `tol_rat`.
    pub fn detect(radians: f64, tol: &Tolerances) -> Angle {
        let radians = wrap_radians(radians);
        let record = rationality_record(radians, tol.q_max);
        if record.residual <= tol.tol_rat {
            Angle::Exact(reduce_mod_two(Ratio::new(record.best_num, record.best_den)))
        } else {
            Angle::Numeric { radians, record }
        }
    }

    pub fn radians(&self) -> f64 {
        match self {
            Angle::Exact(r) => ratio_to_f64(*r) * PI,
            Angle::Numeric { radians, .. } => *radians,
        }
    }

    /// `e^{iθ}` with exact values at multiples of π/2.
    pub fn unit(&self) -> num_complex::Complex<f64> {
        if let Angle::Exact(r) = self {
            if *r.denom() <= 2 {
                let quarter = (*r.numer() * (2 / *r.denom())).rem_euclid(4);
                return match quarter {
                    0 => num_complex::Complex::new(1.0, 0.0),
                    1 => num_complex::Complex::new(0.0, 1.0),
                    2 => num_complex::Complex::new(-1.0, 0.0),
                    _ => num_complex::Complex::new(0.0, -1.0),
                };
            }
        }
        let t = self.radians();
        num_complex::Complex::new(t.cos(), t.sin())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Exact(_))
    }

    /// `θ/π` as a reduced fraction, for exact angles.
    pub fn pi_ratio(&self) -> Option<Ratio<i64>> {
        match self {
            Angle::Exact(r) => Some(*r),
            Angle::Numeric { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Angle::Exact(r) if r.is_zero())
    }

    pub fn is_pi(&self) -> bool {
        matches!(self, Angle::Exact(r) if *r == Ratio::from_integer(1))
    }

    /// The complex-conjugate point `2π − θ`.
    pub fn conjugate(&self) -> Angle {
        match self {
            Angle::Exact(r) => Angle::Exact(reduce_mod_two(-*r)),
            Angle::Numeric { radians, record } => {
                let radians = wrap_radians(2.0 * PI - radians);
                Angle::Numeric {
                    radians,
                    record: RationalityRecord {
                        best_num: 2 * record.best_den - record.best_num,
                        ..*record
                    },
                }
            }
        }
    }

    /// `mθ mod 2π`; exact angles stay exact, numeric ones stay numeric.
    pub fn scaled(&self, m: u64) -> Angle {
        match self {
            Angle::Exact(r) => {
                let den = *r.denom() as i128;
                let num = (*r.numer() as i128 * m as i128).rem_euclid(2 * den);
                Angle::Exact(Ratio::new(num as i64, den as i64))
            }
            Angle::Numeric { radians, record } => {
                let radians = wrap_radians(radians * m as f64);
                Angle::Numeric { radians, record: rationality_record(radians, record.q_max) }
            }
        }
    }

    /// Least `k ≥ 1` with `kθ ∈ 2πZ`; `None` for numeric angles.
    pub fn period(&self) -> Option<u64> {
        let r = self.pi_ratio()?;
        let two_den = 2 * *r.denom();
        Some((two_den / r.numer().gcd(&two_den)) as u64)
    }

    /// Whether `mθ ∈ 2πZ`, decided in integer arithmetic; never true for
    /// numeric angles.
    pub fn resonates(&self, m: u64) -> bool {
        match self.pi_ratio() {
            Some(r) => (*r.numer() as i128 * m as i128) % (2 * *r.denom() as i128) == 0,
            None => false,
        }
    }

    /// `{mθ/π}`.
    pub fn frac_over_pi(&self, m: u64) -> FracPart {
        self.frac_scaled(m, 1)
    }

    /// `{mθ/2π}`.
    pub fn frac_over_two_pi(&self, m: u64) -> FracPart {
        self.frac_scaled(m, 2)
    }

    fn frac_scaled(&self, m: u64, div: i64) -> FracPart {
        match self {
            Angle::Exact(r) => {
                let den = *r.denom() as i128 * div as i128;
                let num = (*r.numer() as i128 * m as i128).rem_euclid(den);
                let g = num.gcd(&den);
                let (num, den) = if g == 0 { (0, 1) } else { (num / g, den / g) };
                FracPart::Exact(Ratio::new(num as i64, den as i64))
            }
            Angle::Numeric { radians, .. } => {
                let x = radians / (PI * div as f64) * m as f64;
                FracPart::Numeric(x - x.floor())
            }
        }
    }

    /// Circular distance in radians.
    pub fn distance(&self, other: &Angle) -> f64 {
        let d = wrap_radians(self.radians() - other.radians());
        d.min(2.0 * PI - d)
    }

    /// Same point: exact equality for two exact angles, otherwise within `tol`.
    pub fn same_point(&self, other: &Angle, tol: f64) -> bool {
        match (self, other) {
            (Angle::Exact(a), Angle::Exact(b)) => a == b,
            _ => self.distance(other) <= tol,
        }
    }

    /// Total order by position in `[0, 2π)`.
    pub fn cmp_position(&self, other: &Angle) -> Ordering {
        match (self, other) {
            (Angle::Exact(a), Angle::Exact(b)) => a.cmp(b),
            _ => self.radians().total_cmp(&other.radians()),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Exact(r) if r.is_zero() => write!(f, "0"),
            Angle::Exact(r) if *r.numer() == 1 && *r.denom() == 1 => write!(f, "π"),
            Angle::Exact(r) if *r.numer() == 1 => write!(f, "π/{}", r.denom()),
            Angle::Exact(r) if *r.denom() == 1 => write!(f, "{}π", r.numer()),
            Angle::Exact(r) => write!(f, "{}π/{}", r.numer(), r.denom()),
            Angle::Numeric { radians, .. } => write!(f, "{radians:.12} rad"),
        }
    }
}

/// An unnormalized rotation amount `θ` for a rotation block, either a rational
/// multiple of π or a real number of radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Phase {
    Pi { pi_num: i64, pi_den: i64 },
    Radians { radians: f64 },
}

impl Phase {
    pub fn pi(num: i64, den: i64) -> Phase {
        Phase::Pi { pi_num: num, pi_den: den }
    }

    pub fn radians_value(radians: f64) -> Phase {
        Phase::Radians { radians }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Phase::Pi { pi_num, pi_den } => {
                if pi_den <= 0 {
                    return Err(Error::Validation(alloc::format!(
                        "rotation pi_den must be positive, got {pi_den}"
                    )));
                }
                if pi_num == 0 {
                    return Err(Error::Validation("rotation angle must be nonzero".into()));
                }
            }
            Phase::Radians { radians } => {
                if !radians.is_finite() || radians == 0.0 {
                    return Err(Error::Validation(alloc::format!(
                        "rotation angle must be finite and nonzero, got {radians}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `θ/π` as an exact fraction when the phase is given as one.
    pub fn pi_ratio(&self) -> Option<Ratio<i64>> {
        match *self {
            Phase::Pi { pi_num, pi_den } => Some(Ratio::new(pi_num, pi_den)),
            Phase::Radians { .. } => None,
        }
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Phase::Pi { pi_num, pi_den } => pi_num as f64 / pi_den as f64 * PI,
            Phase::Radians { radians } => radians,
        }
    }

    /// The end point `e^{iθ}` classified as an [`Angle`].
    pub fn end_angle(&self, tol: &Tolerances) -> Angle {
        match *self {
            Phase::Pi { pi_num, pi_den } => Angle::Exact(reduce_mod_two(Ratio::new(pi_num, pi_den))),
            Phase::Radians { radians } => Angle::detect(radians, tol),
        }
    }

    /// `θ·m`, failing on integer overflow of the exact numerator.
    pub fn scaled(&self, m: u64) -> Result<Phase> {
        match *self {
            Phase::Pi { pi_num, pi_den } => {
                let r = Ratio::new(pi_num, pi_den);
                let num = i64::try_from(m)
                    .ok()
                    .and_then(|m| r.numer().checked_mul(m))
                    .ok_or_else(|| Error::Validation("rotation iterate overflows i64".into()))?;
                Ok(Phase::Pi { pi_num: num, pi_den: *r.denom() })
            }
            Phase::Radians { radians } => Ok(Phase::Radians { radians: radians * m as f64 }),
        }
    }
}
