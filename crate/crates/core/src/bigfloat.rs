//! Fixed-point big-decimal arithmetic for high-precision *non-certified*
//! evaluation: reference values in tests, sample exports, decimal output.
//! Values are `mantissa / 10^prec` with truncating rounding, so each
//! operation is accurate to about one unit in the last place. Nothing in
//! any certificate path depends on this module.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::chebpoly::ChebPoly;
use crate::rat::Rat;

/// Fixed-point decimal context; all numbers carry `prec` fractional digits.
#[derive(Clone, Copy, Debug)]
pub struct FixedCtx {
    pub prec: u32,
}

/// Fixed-point number: value = mantissa * 10^-prec (prec from the context).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Fx(pub BigInt);

impl FixedCtx {
    pub fn new(prec: u32) -> Self {
        FixedCtx { prec }
    }

    fn unit(&self) -> BigInt {
        BigInt::from(10).pow(self.prec)
    }

    pub fn zero(&self) -> Fx {
        Fx(BigInt::zero())
    }

    pub fn from_i64(&self, n: i64) -> Fx {
        Fx(BigInt::from(n) * self.unit())
    }

    pub fn from_rat(&self, x: &Rat) -> Fx {
        Fx((x.numer() * self.unit()) / x.denom())
    }

    /// Exact rational value of the stored approximation.
    pub fn to_rat(&self, x: &Fx) -> Rat {
        Rat::new(x.0.clone(), self.unit())
    }

    pub fn to_f64(&self, x: &Fx) -> f64 {
        crate::rat::rat_to_f64(&self.to_rat(x))
    }

    pub fn add(&self, a: &Fx, b: &Fx) -> Fx {
        Fx(&a.0 + &b.0)
    }

    pub fn sub(&self, a: &Fx, b: &Fx) -> Fx {
        Fx(&a.0 - &b.0)
    }

    pub fn neg(&self, a: &Fx) -> Fx {
        Fx(-a.0.clone())
    }

    pub fn abs(&self, a: &Fx) -> Fx {
        Fx(a.0.abs())
    }

    pub fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        Fx(div_round(&(&a.0 * &b.0), &self.unit()))
    }

    pub fn div(&self, a: &Fx, b: &Fx) -> Fx {
        assert!(!b.0.is_zero(), "fixed-point division by zero");
        Fx(div_round(&(&a.0 * self.unit()), &b.0))
    }

    pub fn div_u32(&self, a: &Fx, k: u32) -> Fx {
        Fx(div_round(&a.0, &BigInt::from(k)))
    }

    pub fn sqrt(&self, a: &Fx) -> Fx {
        assert!(!a.0.is_negative(), "fixed-point sqrt of negative value");
        Fx((&a.0 * self.unit()).sqrt())
    }

    /// exp(x) by plain series; intended for |x| up to a few units.
    pub fn exp(&self, x: &Fx) -> Fx {
        let mut term = self.from_i64(1);
        let mut sum = term.clone();
        for k in 1..100_000u32 {
            term = self.div_u32(&self.mul(&term, x), k);
            if term.0.is_zero() {
                break;
            }
            sum = self.add(&sum, &term);
        }
        sum
    }

    /// cos(x) by the alternating series.
    pub fn cos(&self, x: &Fx) -> Fx {
        let x2 = self.mul(x, x);
        let mut term = self.from_i64(1);
        let mut sum = term.clone();
        for k in 1..100_000u32 {
            term = self.div_u32(&self.mul(&term, &x2), (2 * k - 1) * (2 * k));
            if term.0.is_zero() {
                break;
            }
            if k % 2 == 1 {
                sum = self.sub(&sum, &term);
            } else {
                sum = self.add(&sum, &term);
            }
        }
        sum
    }

    /// sin(x) by the alternating series.
    pub fn sin(&self, x: &Fx) -> Fx {
        let x2 = self.mul(x, x);
        let mut term = x.clone();
        let mut sum = term.clone();
        for k in 1..100_000u32 {
            term = self.div_u32(&self.mul(&term, &x2), (2 * k) * (2 * k + 1));
            if term.0.is_zero() {
                break;
            }
            if k % 2 == 1 {
                sum = self.sub(&sum, &term);
            } else {
                sum = self.add(&sum, &term);
            }
        }
        sum
    }

    /// pi by Machin's formula.
    pub fn pi(&self) -> Fx {
        let a = self.atan_inv(5);
        let b = self.atan_inv(239);
        self.sub(&self.mul(&self.from_i64(16), &a), &self.mul(&self.from_i64(4), &b))
    }

    /// atan(1/n) for integer n >= 2, tracking the power x^{2k+1} exactly.
    fn atan_inv(&self, n: i64) -> Fx {
        let n2 = BigInt::from(n) * BigInt::from(n);
        let mut power = self.div(&self.from_i64(1), &self.from_i64(n));
        let mut sum = power.clone();
        let mut k = 1u64;
        loop {
            power = Fx(div_round(&power.0, &n2));
            if power.0.is_zero() {
                break;
            }
            let t = Fx(div_round(&power.0, &BigInt::from(2 * k + 1)));
            if k % 2 == 1 {
                sum = self.sub(&sum, &t);
            } else {
                sum = self.add(&sum, &t);
            }
            k += 1;
        }
        sum
    }

    /// Clenshaw evaluation of a Chebyshev polynomial at a fixed-point x.
    pub fn eval_cheb(&self, p: &ChebPoly, x: &Fx) -> Fx {
        if p.is_zero() {
            return self.zero();
        }
        let coeffs: Vec<Fx> = p.coeffs().iter().map(|c| self.from_rat(c)).collect();
        let two_x = self.add(x, x);
        let mut b1 = self.zero();
        let mut b2 = self.zero();
        for c in coeffs.iter().skip(1).rev() {
            let b0 = self.sub(&self.add(c, &self.mul(&two_x, &b1)), &b2);
            b2 = std::mem::replace(&mut b1, b0);
        }
        self.sub(&self.add(&coeffs[0], &self.mul(x, &b1)), &b2)
    }

    /// Decimal string with all stored digits.
    pub fn to_string(&self, x: &Fx) -> String {
        let neg = x.0.is_negative();
        let a = x.0.abs();
        let unit = self.unit();
        let int = &a / &unit;
        let frac = &a % &unit;
        let mut fs = frac.to_string();
        while (fs.len() as u32) < self.prec {
            fs.insert(0, '0');
        }
        format!("{}{}.{}", if neg { "-" } else { "" }, int, fs)
    }

    /// Decimal string rounded to `digits` fractional digits.
    pub fn to_string_digits(&self, x: &Fx, digits: u32) -> String {
        let digits = digits.min(self.prec);
        let scale = BigInt::from(10).pow(self.prec - digits);
        let r = div_round(&x.0, &scale);
        let ctx = FixedCtx::new(digits);
        ctx.to_string(&Fx(r))
    }
}

/// Rounded integer division (ties away from zero).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if (&r * &two).abs() >= b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
