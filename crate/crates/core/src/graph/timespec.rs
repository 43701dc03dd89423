use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Propagation time of an edge.
///
/// Times are kept in the form they were given so that exact forms
/// `q * sqrt(k)` can be checked for linear independence over the rationals.
/// Decimal literals are exact rationals as well; their reduced form is
/// retained when it fits in 64 bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TimeSpec {
    Decimal {
        value: f64,
        #[serde(skip)]
        exact: Option<Ratio<i64>>,
    },
    SqrtOfInteger {
        radicand: u64,
    },
    RationalMultipleOfSqrt {
        numer: i64,
        denom: i64,
        radicand: u64,
    },
}

impl TimeSpec {
    pub fn decimal(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveTime(value.to_string()));
        }
        Ok(TimeSpec::Decimal {
            value,
            exact: Ratio::approximate_float(value).filter(|r| {
                // keep only representations that reproduce the float bit-for-bit
                (*r.numer() as f64 / *r.denom() as f64) == value
            }),
        })
    }

    pub fn sqrt(radicand: u64) -> Result<Self> {
        if radicand == 0 {
            return Err(Error::NonPositiveTime("sqrt(0)".into()));
        }
        Ok(TimeSpec::SqrtOfInteger { radicand })
    }

    pub fn scaled_sqrt(numer: i64, denom: i64, radicand: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::NonPositiveTime(format!("{numer}/0*sqrt({radicand})")));
        }
        let r = Ratio::new(numer, denom);
        if *r.numer() <= 0 || radicand == 0 {
            return Err(Error::NonPositiveTime(format!("{numer}/{denom}*sqrt({radicand})")));
        }
        Ok(TimeSpec::RationalMultipleOfSqrt { numer: *r.numer(), denom: *r.denom(), radicand })
    }

    pub fn value(&self) -> f64 {
        match *self {
            TimeSpec::Decimal { value, .. } => value,
            TimeSpec::SqrtOfInteger { radicand } => (radicand as f64).sqrt(),
            TimeSpec::RationalMultipleOfSqrt { numer, denom, radicand } => {
                numer as f64 / denom as f64 * (radicand as f64).sqrt()
            }
        }
    }

    /// The time as `q * sqrt(f)` with `f` square-free, when known exactly.
    pub fn exact_form(&self) -> Option<(Ratio<i64>, u64)> {
        let (q, k) = match self {
            TimeSpec::Decimal { exact, .. } => ((*exact)?, 1),
            TimeSpec::SqrtOfInteger { radicand } => (Ratio::from_integer(1), *radicand),
            TimeSpec::RationalMultipleOfSqrt { numer, denom, radicand } => (Ratio::new(*numer, *denom), *radicand),
        };
        let (square, free) = split_square(k);
        let square = i64::try_from(square).ok()?;
        q.numer().checked_mul(square).map(|n| (Ratio::new(n, *q.denom()), free))
    }
}

/// Writes `k = s^2 * f` with `f` square-free and returns `(s, f)`.
fn split_square(mut k: u64) -> (u64, u64) {
    let mut s = 1;
    let mut f = 1;
    let mut p = 2;
    while p * p <= k {
        while k % (p * p) == 0 {
            k /= p * p;
            s *= p;
        }
        if k % p == 0 {
            k /= p;
            f *= p;
        }
        p += 1;
    }
    (s, f * k)
}

/// Outcome of the exact linear-independence check on a set of times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// Times at these two indices are rational multiples of each other.
    Dependent(usize, usize),
    /// Some time has no exact form (e.g. an unrepresentable decimal).
    Unknown,
}

/// Square roots of distinct square-free integers are linearly independent
/// over the rationals, and two times sharing a square-free part are not.
pub fn rational_independence(times: &[TimeSpec]) -> Independence {
    let mut forms = Vec::with_capacity(times.len());
    for t in times {
        match t.exact_form() {
            Some((_, free)) => forms.push(free),
            None => return Independence::Unknown,
        }
    }
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            if forms[i] == forms[j] {
                return Independence::Dependent(i, j);
            }
        }
    }
    Independence::Independent
}

impl fmt::Display for TimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeSpec::Decimal { value, .. } => write!(f, "{value}"),
            TimeSpec::SqrtOfInteger { radicand } => write!(f, "sqrt({radicand})"),
            TimeSpec::RationalMultipleOfSqrt { numer, denom, radicand } => {
                write!(f, "{numer}/{denom}*sqrt({radicand})")
            }
        }
    }
}

fn parse_err(message: impl Into<String>) -> Error {
    Error::Parse { line: 0, message: message.into() }
}

fn parse_radicand(s: &str) -> Result<u64> {
    let inner = s
        .strip_prefix("sqrt(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(format!("expected sqrt(<int>), got `{s}`")))?;
    inner.trim().parse::<u64>().map_err(|_| parse_err(format!("bad radicand `{inner}`")))
}

fn parse_decimal_exact(s: &str) -> Option<Ratio<i64>> {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let all: String = format!("{int}{frac}");
    let mut numer: i64 = if all.is_empty() { 0 } else { all.parse().ok()? };
    if neg {
        numer = -numer;
    }
    let g = numer.gcd(&denom);
    Some(Ratio::new_raw(numer / g, denom / g))
}

impl FromStr for TimeSpec {
    type Err = Error;

    /// Accepts `sqrt(k)`, `q*sqrt(k)`, `n/d*sqrt(k)` and decimal literals.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with("sqrt(") {
            return TimeSpec::sqrt(parse_radicand(s)?);
        }
        if let Some((scale, root)) = s.split_once('*') {
            let radicand = parse_radicand(root.trim())?;
            let scale = scale.trim();
            let (n, d) = scale.split_once('/').unwrap_or((scale, "1"));
            let n = n.trim().parse::<i64>().map_err(|_| parse_err(format!("bad numerator in `{s}`")))?;
            let d = d.trim().parse::<i64>().map_err(|_| parse_err(format!("bad denominator in `{s}`")))?;
            return TimeSpec::scaled_sqrt(n, d, radicand);
        }
        let value: f64 = s.parse().map_err(|_| parse_err(format!("bad time `{s}`")))?;
        let mut spec = TimeSpec::decimal(value)?;
        if let TimeSpec::Decimal { exact, .. } = &mut spec {
            *exact = parse_decimal_exact(s);
        }
        Ok(spec)
    }
}
