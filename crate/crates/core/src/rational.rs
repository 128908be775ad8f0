//! Exact rational arithmetic for objective values.
//!
//! Delay, congestion and utilisation terms are ratios of small integers, and
//! optimality proofs compare candidate objectives exactly. Floating point
//! would make those comparisons depend on evaluation order, so objective
//! values are carried as `i64/i64` rationals in lowest terms. Intermediate
//! products are widened to `i128`; a result that does not fit back into
//! 64-bit components is reported as an overflow instead of silently wrapping.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Arithmetic produced a numerator or denominator outside the `i64` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rational arithmetic overflowed 64-bit components")]
pub struct RationalOverflow;

/// An exact rational number: numerator over positive denominator, lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    /// Builds `num/den` in canonical form. The denominator must be non-zero;
    /// its sign is folded into the numerator.
    pub fn new(num: i64, den: i64) -> Result<Rational, RationalOverflow> {
        if den == 0 {
            return Err(RationalOverflow);
        }
        canonical(num as i128, den as i128)
    }

    /// The integer `n` as a rational.
    pub fn from_int(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn zero() -> Rational {
        Rational::from_int(0)
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    /// Always positive.
    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn checked_add(&self, other: &Rational) -> Result<Rational, RationalOverflow> {
        let num = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        canonical(num, self.den as i128 * other.den as i128)
    }

    pub fn checked_sub(&self, other: &Rational) -> Result<Rational, RationalOverflow> {
        let num = self.num as i128 * other.den as i128 - other.num as i128 * self.den as i128;
        canonical(num, self.den as i128 * other.den as i128)
    }

    pub fn checked_mul(&self, other: &Rational) -> Result<Rational, RationalOverflow> {
        canonical(self.num as i128 * other.num as i128, self.den as i128 * other.den as i128)
    }

    /// Division; `other` must be non-zero.
    pub fn checked_div(&self, other: &Rational) -> Result<Rational, RationalOverflow> {
        if other.num == 0 {
            return Err(RationalOverflow);
        }
        canonical(self.num as i128 * other.den as i128, self.den as i128 * other.num as i128)
    }

    /// Decimal rendering with `sig` significant digits, truncated. Advisory
    /// only — equality checks go through the exact form. Produced by integer
    /// long division, so the output is identical across platforms.
    pub fn decimal_string(&self, sig: usize) -> String {
        debug_assert!(sig > 0);
        if self.num == 0 {
            return "0".to_string();
        }
        let negative = self.num < 0;
        let mut n = (self.num as i128).unsigned_abs();
        let d = self.den as u128;

        let int_part = n / d;
        let mut digits = String::new();
        let mut exponent: i64 = 0; // position of the decimal point within `digits`
        if int_part > 0 {
            digits = int_part.to_string();
            exponent = digits.len() as i64;
            n %= d;
        } else {
            // Skip leading zeros after the point, tracking their count.
            n %= d;
            while n > 0 && n * 10 / d == 0 {
                n *= 10;
                exponent -= 1;
            }
        }
        while digits.len() < sig && n > 0 {
            n *= 10;
            digits.push(char::from(b'0' + (n / d) as u8));
            n %= d;
        }
        digits.truncate(sig);

        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if exponent <= 0 {
            out.push_str("0.");
            for _ in 0..-exponent {
                out.push('0');
            }
            out.push_str(&digits);
        } else if (exponent as usize) >= digits.len() {
            out.push_str(&digits);
            for _ in 0..(exponent as usize - digits.len()) {
                out.push('0');
            }
        } else {
            out.push_str(&digits[..exponent as usize]);
            out.push('.');
            out.push_str(&digits[exponent as usize..]);
        }
        out
    }
}

/// Reduce `num/den` (i128 intermediates) and fit into i64 components.
fn canonical(mut num: i128, mut den: i128) -> Result<Rational, RationalOverflow> {
    debug_assert!(den != 0);
    if den < 0 {
        num = -num;
        den = -den;
    }
    let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1);
    num /= g as i128;
    den /= g as i128;
    let num = i64::try_from(num).map_err(|_| RationalOverflow)?;
    let den = i64::try_from(den).map_err(|_| RationalOverflow)?;
    Ok(Rational { num, den })
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        // Cross-multiplication in i128 cannot overflow for i64 components.
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Rational {
    /// Canonical form: `p/q`, or just `p` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
