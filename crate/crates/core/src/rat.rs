//! Exact rational scalars and the few numeric helpers shared across the
//! crate: parsing/printing in `p/q` form, decimal rendering, integer
//! square-root bounds and binomial coefficients.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Shorthand for a small integer rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` from small integers; panics if `q == 0`.
pub fn rat_pq(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// 10^-k as a rational.
pub fn pow10(k: i64) -> Rat {
    let ten = BigInt::from(10);
    if k >= 0 {
        Rat::from_integer(ten.pow(k as u32))
    } else {
        Rat::new(BigInt::one(), ten.pow((-k) as u32))
    }
}

/// Parses a rational written as `p`, `p/q`, with optional sign.
///
/// Decimal notation is rejected: inputs are meant to be exact.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = |s: &str| Error::Input(format!("cannot parse rational from {s:?}"));
    if s.is_empty() {
        return Err(bad(s));
    }
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad(s))?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad(s))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad(s))?;
            if q.is_zero() {
                return Err(Error::Input(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Canonical `p/q` rendering (lowest terms, no `/1` suffix).
pub fn rat_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rounds `x` to `digits` significant digits and renders it in scientific
/// notation, e.g. `3.41e-52`. Intended for human-readable reports; the
/// rational form stays authoritative.
pub fn decimal_string(x: &Rat, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // Decimal exponent e with 10^e <= a < 10^(e+1).
    let mut e = ilog10_floor(&a);
    // mantissa = round(a * 10^(digits-1-e)), an integer with `digits` digits.
    let mut mant = round_to_int(&(a.clone() * pow10(digits as i64 - 1 - e)));
    // Rounding can carry over, e.g. 9.99 -> 10.0.
    if mant.to_string().len() > digits {
        mant = round_to_int(&(a * pow10(digits as i64 - 2 - e)));
        e += 1;
    }
    let m = mant.to_string();
    let sign = if neg { "-" } else { "" };
    if digits == 1 {
        format!("{sign}{m}e{e}")
    } else {
        format!("{sign}{}.{}e{e}", &m[..1], &m[1..])
    }
}

/// Largest `e` with `10^e <= a`, for `a > 0`.
fn ilog10_floor(a: &Rat) -> i64 {
    debug_assert!(a.is_positive());
    // Start from a digit-count estimate and fix up exactly.
    let nd = a.numer().abs().to_string().len() as i64;
    let dd = a.denom().to_string().len() as i64;
    let mut e = nd - dd;
    while pow10(e) > *a {
        e -= 1;
    }
    while pow10(e + 1) <= *a {
        e += 1;
    }
    e
}

/// Nearest integer to `x` (ties away from zero).
pub fn round_to_int(x: &Rat) -> BigInt {
    let two = BigInt::from(2);
    let (n, d) = (x.numer(), x.denom());
    if n.sign() != Sign::Minus {
        (n * &two + d) / (d * &two)
    } else {
        -((-n * &two + d) / (d * &two))
    }
}

/// Rounds `x` to the nearest multiple of 2^-bits. The result differs from
/// `x` by at most 2^-(bits+1); used to keep certified midpoints small.
pub fn round_dyadic(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = x * Rat::from_integer(scale.clone());
    Rat::new(round_to_int(&scaled), scale)
}

/// `(lo, hi)` with `lo <= sqrt(x) <= hi` and `hi - lo <= 2^-bits`, for `x >= 0`.
pub fn sqrt_bounds(x: &Rat, bits: u32) -> (Rat, Rat) {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    // floor(sqrt(n * 4^m / d)) / 2^m is a lower bound with error < 2^-m.
    let m = bits + 1;
    let scaled: BigInt = (x.numer() << (2 * m as usize)) / x.denom();
    let root = scaled.sqrt();
    let denom = BigInt::one() << m;
    let lo = Rat::new(root.clone(), denom.clone());
    let hi = Rat::new(root + BigInt::one(), denom);
    debug_assert!(&lo * &lo <= *x && *x <= &hi * &hi);
    (lo, hi)
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u64, k: u64) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rat::new(num, den)
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= BigInt::from(i);
    }
    f
}

/// x^k for possibly negative k (errors only via panic on x = 0, k < 0).
pub fn rat_powi(x: &Rat, k: i64) -> Rat {
    if k >= 0 {
        num_traits::pow::pow(x.clone(), k as usize)
    } else {
        num_traits::pow::pow(x.clone(), (-k) as usize).recip()
    }
}

/// Least common multiple of two positive big integers.
pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / a.gcd(b)) * b
}

/// f64 value of a rational, for heuristics only.
pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading digits when out of f64 range.
        let s = decimal_string(x, 15);
        s.parse().unwrap_or(f64::NAN)
    })
}
