use num_rational::Rational64;
use num_traits::{CheckedAdd, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Absolute/relative tolerance used when either operand is a float.
pub const POWER_TOL: f64 = 1e-12;

const MAX_DETECT_DENOM: i64 = 64;

/// Exponent of `rho^z`. Exact when built from rational input.
#[derive(Clone, Copy, Debug)]
pub enum Power {
    Exact(Rational64),
    Float(f64),
}

impl Power {
    pub fn int(n: i64) -> Self {
        Power::Exact(Rational64::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Power::Exact(Rational64::new(num, den))
    }

    /// Recovers an exact rational when `x` is one with a small denominator.
    pub fn from_f64(x: f64) -> Self {
        if !x.is_finite() {
            return Power::Float(x);
        }
        for den in 1..=MAX_DETECT_DENOM {
            let num = (x * den as f64).round();
            if num.abs() < 1e15 && (num / den as f64 - x).abs() <= 1e-13 * x.abs().max(1.0) {
                return Power::Exact(Rational64::new(num as i64, den));
            }
        }
        Power::Float(x)
    }

    pub fn value(&self) -> f64 {
        match self {
            Power::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Power::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Power::Exact(_))
    }

    pub fn is_finite(&self) -> bool {
        self.value().is_finite()
    }

    pub fn approx_eq(&self, other: &Power) -> bool {
        match (self, other) {
            (Power::Exact(a), Power::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.value(), other.value());
                (a - b).abs() <= POWER_TOL * a.abs().max(b.abs()).max(1.0)
            }
        }
    }

    pub fn cmp_tol(&self, other: &Power) -> Ordering {
        match (self, other) {
            (Power::Exact(a), Power::Exact(b)) => a.cmp(b),
            _ if self.approx_eq(other) => Ordering::Equal,
            _ => self.value().partial_cmp(&other.value()).unwrap_or(Ordering::Equal),
        }
    }

    /// `Some(n)` when `self - other` is the natural number `n`.
    pub fn nat_offset(&self, other: &Power) -> Option<u64> {
        let d = *self - *other;
        match d {
            Power::Exact(q) => {
                if q.is_integer() && q >= Rational64::zero() {
                    q.to_integer().to_u64()
                } else {
                    None
                }
            }
            Power::Float(x) => {
                let n = x.round();
                if n >= 0.0 && (x - n).abs() <= POWER_TOL * x.abs().max(1.0) {
                    Some(n as u64)
                } else {
                    None
                }
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Power::Exact(q) => q.is_integer(),
            Power::Float(x) => (x - x.round()).abs() <= POWER_TOL * x.abs().max(1.0),
        }
    }

    pub fn min(self, other: Power) -> Power {
        if self.cmp_tol(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Power) -> Power {
        if self.cmp_tol(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

impl From<i64> for Power {
    fn from(n: i64) -> Self {
        Power::int(n)
    }
}

impl From<Rational64> for Power {
    fn from(q: Rational64) -> Self {
        Power::Exact(q)
    }
}

impl PartialEq for Power {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl Eq for Power {}

impl PartialOrd for Power {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Power {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_tol(other)
    }
}

impl Add for Power {
    type Output = Power;
    fn add(self, rhs: Power) -> Power {
        match (self, rhs) {
            (Power::Exact(a), Power::Exact(b)) => a
                .checked_add(&b)
                .map(Power::Exact)
                .unwrap_or_else(|| Power::Float(self.value() + rhs.value())),
            _ => Power::Float(self.value() + rhs.value()),
        }
    }
}

impl Add<i64> for Power {
    type Output = Power;
    fn add(self, rhs: i64) -> Power {
        self + Power::int(rhs)
    }
}

impl Neg for Power {
    type Output = Power;
    fn neg(self) -> Power {
        match self {
            Power::Exact(q) => Power::Exact(-q),
            Power::Float(x) => Power::Float(-x),
        }
    }
}

impl Sub for Power {
    type Output = Power;
    fn sub(self, rhs: Power) -> Power {
        self + (-rhs)
    }
}

impl Sub<i64> for Power {
    type Output = Power;
    fn sub(self, rhs: i64) -> Power {
        self + Power::int(-rhs)
    }
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Power::Exact(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Power::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Power::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Power {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Power {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        Ok(Power::from_f64(x))
    }
}
