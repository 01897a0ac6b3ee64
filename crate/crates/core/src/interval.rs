//! Rational interval arithmetic: real intervals with rational endpoints
//! and complex rectangles, plus the interval Newton refinement used to
//! certify polynomial root enclosures. Every operation rounds outward in
//! the sense that the result set contains the exact image set.

use num_traits::{One, Signed, Zero};

use crate::qpoly::QPoly;
use crate::rat::{rat_i, round_dyadic, sqrt_bounds, Rat};
use crate::Error;

/// Closed real interval `[lo, hi]` with rational endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RInt {
    pub lo: Rat,
    pub hi: Rat,
}

impl RInt {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RInt { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        RInt {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        RInt::point(Rat::zero())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Inclusion in the interior of `other`.
    pub fn inside(&self, other: &RInt) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / rat_i(2)
    }

    pub fn radius(&self) -> Rat {
        (&self.hi - &self.lo) / rat_i(2)
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// Upper bound on |x| over the interval.
    pub fn abs_upper(&self) -> Rat {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on |x| over the interval (0 if it straddles 0).
    pub fn abs_lower(&self) -> Rat {
        if self.contains_zero() {
            Rat::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RInt {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        RInt {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }

    pub fn neg(&self) -> Self {
        RInt {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let cands = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        RInt { lo, hi }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_negative() {
            RInt {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            RInt {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    pub fn square(&self) -> Self {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let hi = a.clone().max(b.clone());
        let lo = if self.contains_zero() {
            Rat::zero()
        } else {
            a.min(b)
        };
        RInt { lo, hi }
    }

    /// Reciprocal; fails when the interval contains zero.
    pub fn recip(&self) -> Result<Self, Error> {
        if self.contains_zero() {
            return Err(Error::Refinement(
                "interval reciprocal across zero".to_string(),
            ));
        }
        Ok(RInt {
            lo: self.hi.clone().recip(),
            hi: self.lo.clone().recip(),
        })
    }

    /// Interval enclosing sqrt of the (nonnegative part of the) interval.
    pub fn sqrt(&self, bits: u32) -> Self {
        let lo = if self.lo.is_negative() {
            Rat::zero()
        } else {
            sqrt_bounds(&self.lo, bits).0
        };
        let hi = sqrt_bounds(&self.hi.clone().max(Rat::zero()), bits).1;
        RInt { lo, hi }
    }

    pub fn hull(&self, rhs: &Self) -> Self {
        RInt {
            lo: self.lo.clone().min(rhs.lo.clone()),
            hi: self.hi.clone().max(rhs.hi.clone()),
        }
    }

    /// Outward dyadic rounding, at most a `1 + 2^-60` radius inflation;
    /// identity on point intervals.
    pub fn rounded_out(&self) -> Self {
        let r = self.radius();
        if !r.is_positive() {
            return self.clone();
        }
        let bits = dyadic_bits_for(&r) + 62;
        RInt {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }
}

/// Complex rectangle `re x im` with rational endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CBox {
    pub re: RInt,
    pub im: RInt,
}

impl CBox {
    pub fn new(re: RInt, im: RInt) -> Self {
        CBox { re, im }
    }

    pub fn point(re: Rat, im: Rat) -> Self {
        CBox {
            re: RInt::point(re),
            im: RInt::point(im),
        }
    }

    /// Square box of half-width `r` around a rational center.
    pub fn around(re: Rat, im: Rat, r: &Rat) -> Self {
        CBox {
            re: RInt::new(&re - r, &re + r),
            im: RInt::new(&im - r, &im + r),
        }
    }

    pub fn center(&self) -> (Rat, Rat) {
        (self.re.mid(), self.im.mid())
    }

    /// Half-width measured in the maximum norm.
    pub fn radius(&self) -> Rat {
        self.re.radius().max(self.im.radius())
    }

    pub fn conj(&self) -> Self {
        CBox {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        CBox {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        CBox {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        CBox {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    /// |z|^2 as a real interval.
    pub fn abs_sq(&self) -> RInt {
        self.re.square().add(&self.im.square())
    }

    /// Division via multiplication by the conjugate; fails when the
    /// denominator box may contain zero.
    pub fn div(&self, rhs: &Self) -> Result<Self, Error> {
        let d = rhs.abs_sq();
        let dinv = d.recip()?;
        let num = self.mul(&rhs.conj());
        Ok(CBox {
            re: num.re.mul(&dinv),
            im: num.im.mul(&dinv),
        })
    }

    /// Certified lower bound on |z| over the box.
    pub fn abs_lower(&self, bits: u32) -> Rat {
        let dx = self.re.abs_lower();
        let dy = self.im.abs_lower();
        let sq = &dx * &dx + &dy * &dy;
        sqrt_bounds(&sq, bits).0
    }

    /// Certified upper bound on |z| over the box.
    pub fn abs_upper(&self, bits: u32) -> Rat {
        let dx = self.re.abs_upper();
        let dy = self.im.abs_upper();
        let sq = &dx * &dx + &dy * &dy;
        sqrt_bounds(&sq, bits).1
    }

    pub fn contains(&self, re: &Rat, im: &Rat) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn inside(&self, other: &CBox) -> bool {
        self.re.inside(&other.re) && self.im.inside(&other.im)
    }

    /// z^k by binary powering, k >= 0, with outward dyadic rounding after
    /// each product so endpoint sizes track the carried precision instead
    /// of compounding.
    pub fn powi(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CBox::point(Rat::one(), Rat::zero());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).rounded_out();
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).rounded_out();
            }
        }
        acc
    }

    /// Outward dyadic rounding inflating each radius by at most a factor
    /// `1 + 2^-60`; identity on point boxes.
    pub fn rounded_out(&self) -> Self {
        let r = self.radius();
        if !r.is_positive() {
            return self.clone();
        }
        let bits = dyadic_bits_for(&r) + 62;
        CBox {
            re: RInt::new(round_down(&self.re.lo, bits), round_up(&self.re.hi, bits)),
            im: RInt::new(round_down(&self.im.lo, bits), round_up(&self.im.hi, bits)),
        }
    }
}

/// Horner evaluation of a rational-coefficient polynomial over a box,
/// with outward rounding per step to keep entry sizes bounded.
pub fn eval_poly_box(p: &QPoly, z: &CBox) -> CBox {
    let mut acc = CBox::point(Rat::zero(), Rat::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re = acc.re.add(&RInt::point(c.clone()));
        acc = acc.rounded_out();
    }
    acc
}

/// Horner evaluation over a real interval.
pub fn eval_poly_rint(p: &QPoly, x: &RInt) -> RInt {
    let mut acc = RInt::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&RInt::point(c.clone()));
        acc = acc.rounded_out();
    }
    acc
}

/// One interval Newton step for a root of `p` inside `x`:
/// `N(x) = m - p(m) / p'(x)`.
///
/// If the returned box lies strictly inside `x`, then `x` contains exactly
/// one (simple) root of `p` and the returned box contains it too.
pub fn newton_step_box(p: &QPoly, dp: &QPoly, x: &CBox) -> Result<CBox, Error> {
    let (mre, mim) = x.center();
    let m = CBox::point(mre, mim);
    let fm = eval_poly_box(p, &m);
    let d = eval_poly_box(dp, x);
    let q = fm.div(&d)?;
    Ok(m.sub(&q))
}

/// Refines a certified enclosure of a simple root until `radius < target`.
///
/// `x` must already satisfy the Newton contraction test. Midpoints are
/// rounded dyadically after each step to keep coefficient sizes linear in
/// the requested accuracy.
pub fn refine_root_box(
    p: &QPoly,
    dp: &QPoly,
    mut x: CBox,
    target: &Rat,
    max_steps: u32,
) -> Result<CBox, Error> {
    for _ in 0..max_steps {
        x = x.rounded_out();
        if &x.radius() < target {
            return Ok(x);
        }
        let n = newton_step_box(p, dp, &x)?;
        let mut next = if n.inside(&x) {
            n
        } else {
            // Keep the invariant: intersect with the previous enclosure.
            let re = RInt::new(
                n.re.lo.clone().max(x.re.lo.clone()),
                n.re.hi.clone().min(x.re.hi.clone()),
            );
            let im = RInt::new(
                n.im.lo.clone().max(x.im.lo.clone()),
                n.im.hi.clone().min(x.im.hi.clone()),
            );
            CBox { re, im }
        };
        // Dyadic rounding of the endpoints, outward, bounded by the radius
        // scale so it cannot undo the contraction.
        let r = next.radius();
        if r.is_positive() {
            let bits = dyadic_bits_for(&r) + 8;
            next = CBox {
                re: RInt::new(round_down(&next.re.lo, bits), round_up(&next.re.hi, bits)),
                im: RInt::new(round_down(&next.im.lo, bits), round_up(&next.im.hi, bits)),
            };
        }
        x = next;
    }
    x = x.rounded_out();
    if &x.radius() < target {
        Ok(x)
    } else {
        Err(Error::Refinement(format!(
            "root enclosure stalled at radius ~{}",
            crate::rat::decimal_string(&x.radius(), 3)
        )))
    }
}

/// Number of fractional bits with 2^-bits <= r, from bit lengths (r > 0).
pub(crate) fn dyadic_bits_for(r: &Rat) -> u32 {
    debug_assert!(r.is_positive());
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    (db - nb + 1).max(1) as u32
}

pub(crate) fn round_down(x: &Rat, bits: u32) -> Rat {
    let r = round_dyadic(x, bits);
    if &r > x {
        r - Rat::new(num_bigint::BigInt::one(), num_bigint::BigInt::one() << bits)
    } else {
        r
    }
}

pub(crate) fn round_up(x: &Rat, bits: u32) -> Rat {
    let r = round_dyadic(x, bits);
    if &r < x {
        r + Rat::new(num_bigint::BigInt::one(), num_bigint::BigInt::one() << bits)
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_pq;

    #[test]
    fn real_interval_ops() {
        let a = RInt::new(rat_i(-1), rat_i(2));
        let b = RInt::new(rat_i(3), rat_i(4));
        assert_eq!(a.add(&b), RInt::new(rat_i(2), rat_i(6)));
        assert_eq!(a.mul(&b), RInt::new(rat_i(-4), rat_i(8)));
        assert_eq!(a.square(), RInt::new(rat_i(0), rat_i(4)));
        assert!(a.contains_zero());
        assert!(a.recip().is_err());
        assert_eq!(b.recip().unwrap(), RInt::new(rat_pq(1, 4), rat_pq(1, 3)));
        assert_eq!(a.abs_upper(), rat_i(2));
        assert_eq!(b.abs_lower(), rat_i(3));
    }

    #[test]
    fn box_ops_contain_exact_values() {
        // (1 + 2i) * (3 - i) = 5 + 5i, inside the product of point boxes.
        let a = CBox::point(rat_i(1), rat_i(2));
        let b = CBox::point(rat_i(3), rat_i(-1));
        let p = a.mul(&b);
        assert!(p.contains(&rat_i(5), &rat_i(5)));
        let q = p.div(&b).unwrap();
        assert!(q.contains(&rat_i(1), &rat_i(2)));
    }

    #[test]
    fn newton_refines_sqrt2() {
        // p = x^2 - 2, enclosure of sqrt(2) in [1.3, 1.5].
        let p = QPoly::from_i64(&[-2, 0, 1]);
        let dp = p.derivative();
        let x0 = CBox::new(
            RInt::new(rat_pq(13, 10), rat_pq(3, 2)),
            RInt::new(rat_pq(-1, 10), rat_pq(1, 10)),
        );
        let step = newton_step_box(&p, &dp, &x0).unwrap();
        assert!(step.inside(&x0));
        let target = rat_pq(1, 1_000_000_000);
        let refined = refine_root_box(&p, &dp, x0, &target, 64).unwrap();
        assert!(refined.radius() < target);
        // Contains the true root: check via the defining polynomial.
        let v = eval_poly_box(&p, &refined);
        assert!(v.re.contains_zero());
        let (lo, hi) = (refined.abs_lower(40), refined.abs_upper(40));
        let two = rat_i(2);
        assert!(&lo * &lo <= two && two <= &hi * &hi);
    }
}
