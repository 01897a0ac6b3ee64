//! Dense monomial-basis polynomials with exact rational coefficients,
//! plus the exact-algebra toolkit built on them: Euclidean division,
//! gcd, squarefree factorization, Sturm sequences, integer/real root
//! location, and reduced rational functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{lcm_big, Rat};
use crate::Error;

/// Polynomial in one variable, coefficients low-to-high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        QPoly { coeffs: vec![c] }.normalized()
    }

    /// `x` as a polynomial.
    pub fn var() -> Self {
        QPoly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    /// c * x^k.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        QPoly { coeffs }.normalized()
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        QPoly { coeffs }.normalized()
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(coeffs.iter().map(|&c| crate::rat::rat_i(c)).collect())
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial (check `is_zero` separately).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_coeff(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn neg(&self) -> Self {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        QPoly { coeffs: out }.normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly { coeffs: out }.normalized()
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = QPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), Error> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lc = d.leading_coeff();
        if r.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        while r.len() > dd && !(r.len() == 1 && r[0].is_zero()) {
            let k = r.len() - 1;
            let c = &r[k] / &lc;
            if !c.is_zero() {
                q[k - dd] = c.clone();
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    let t = dc * &c;
                    r[idx] -= t;
                }
            }
            r.pop();
        }
        Ok((
            QPoly { coeffs: q }.normalized(),
            QPoly { coeffs: r }.normalized(),
        ))
    }

    /// Exact quotient; error if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self, Error> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal(
                "expected exact polynomial division".to_string(),
            ));
        }
        Ok(q)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
            .collect();
        QPoly { coeffs }.normalized()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> Rat {
        self.eval(&crate::rat::rat_i(x))
    }

    /// Composition with the affine map `x -> a*x + b`.
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Self {
        let mut acc = QPoly::zero();
        let lin = QPoly::from_coeffs(vec![b.clone(), a.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// `p(x + k)` for integer `k`; shift used by recurrence-operator algebra.
    pub fn shift_arg(&self, k: i64) -> Self {
        self.compose_affine(&Rat::one(), &crate::rat::rat_i(k))
    }

    /// Monic multiple of gcd(self, rhs).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Extended gcd: returns `(g, u, v)` with `u*self + v*rhs = g`, g monic.
    pub fn extended_gcd(&self, rhs: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut u0, mut u1) = (QPoly::one(), QPoly::zero());
        let (mut v0, mut v1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let u = u0.sub(&q.mul(&u1));
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if r0.is_zero() {
            return (QPoly::zero(), QPoly::zero(), QPoly::zero());
        }
        let c = r0.leading_coeff().recip();
        (r0.scale(&c), u0.scale(&c), v0.scale(&c))
    }

    /// Squarefree part `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.make_monic();
        }
        self.div_exact(&g).expect("gcd divides").make_monic()
    }

    /// Yun squarefree factorization: `self = lc * f1 * f2^2 * ... * fk^k`
    /// with monic pairwise-coprime squarefree `fi`. Returns `(lc, [f1..fk])`.
    pub fn squarefree_factorization(&self) -> (Rat, Vec<QPoly>) {
        assert!(!self.is_zero(), "squarefree factorization of zero");
        let lc = self.leading_coeff();
        let p = self.make_monic();
        if p.degree() == 0 {
            return (lc, Vec::new());
        }
        let dp = p.derivative();
        let a = p.gcd(&dp);
        let mut b = p.div_exact(&a).expect("gcd divides");
        let c = dp.div_exact(&a).expect("gcd divides");
        let mut d = c.sub(&b.derivative());
        let mut factors = Vec::new();
        loop {
            let f = b.gcd(&d);
            factors.push(f.clone());
            b = b.div_exact(&f).expect("gcd divides");
            if b.degree() == 0 {
                break;
            }
            let c = d.div_exact(&f).expect("gcd divides");
            d = c.sub(&b.derivative());
        }
        // Trim trailing constant factors.
        while factors.last().map_or(false, |f| f.degree() == 0) {
            factors.pop();
        }
        (lc, factors)
    }

    /// Positive content times primitive integer part: returns `(c, p)` with
    /// `self = c * p`, `p` having coprime integer coefficients and positive
    /// leading coefficient.
    pub fn integer_normalized(&self) -> (Rat, QPoly) {
        if self.is_zero() {
            return (Rat::one(), QPoly::zero());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = lcm_big(&den, c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        if ints.last().map_or(false, |v| v.is_negative()) {
            g = -g;
        }
        let prim = QPoly::from_coeffs(
            ints.iter()
                .map(|v| Rat::from_integer(v / &g))
                .collect::<Vec<_>>(),
        );
        (Rat::new(g, den), prim)
    }

    /// Number of distinct real roots in `[lo, hi]` (endpoints included).
    pub fn count_real_roots_in(&self, lo: &Rat, hi: &Rat) -> usize {
        assert!(lo <= hi);
        if self.is_zero() {
            panic!("root counting needs a nonzero polynomial");
        }
        let p = self.squarefree_part();
        let mut count = sturm_count(&p, lo, hi);
        if p.eval(lo).is_zero() {
            count += 1; // Sturm counts roots in (lo, hi].
        }
        count
    }

    /// Exact integer roots, ascending.
    pub fn integer_roots(&self) -> Vec<BigInt> {
        if self.is_zero() {
            panic!("integer roots of zero polynomial");
        }
        let mut p = self.clone();
        let mut roots = Vec::new();
        // Strip powers of x.
        while p.coeff(0).is_zero() && !p.is_zero() {
            let shifted = QPoly::from_coeffs(p.coeffs[1..].to_vec());
            if !roots.contains(&BigInt::zero()) {
                roots.push(BigInt::zero());
            }
            p = shifted;
            if p.is_zero() {
                break;
            }
        }
        if !p.is_zero() && p.degree() >= 1 {
            for iv in isolate_real_roots(&p.squarefree_part()) {
                // Candidate integers inside the isolating interval.
                let lo = iv.0.ceil().to_integer();
                let hi = iv.1.floor().to_integer();
                let mut k = lo;
                while k <= hi {
                    if p.eval(&Rat::from_integer(k.clone())).is_zero()
                        && !roots.contains(&k)
                    {
                        roots.push(k.clone());
                    }
                    k += 1;
                }
            }
        }
        roots.sort();
        roots
    }

    /// Cauchy bound: all real roots lie in `[-m, m]`.
    pub fn root_bound(&self) -> Rat {
        assert!(!self.is_zero());
        let lc = self.leading_coeff().abs();
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let q = c.abs() / &lc;
            if q > m {
                m = q;
            }
        }
        m + Rat::one()
    }

    /// Human-readable form in the given variable, integer-friendly.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = crate::rat::rat_string(&c.abs());
            let body = if k == 0 {
                cs
            } else {
                let xs = if k == 1 {
                    var.to_string()
                } else {
                    format!("{var}^{k}")
                };
                if c.abs().is_one() {
                    xs
                } else {
                    format!("{cs}{xs}")
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{body}")
                } else {
                    body
                });
            } else {
                parts.push(format!(
                    "{}{body}",
                    if c.is_negative() { " - " } else { " + " }
                ));
            }
        }
        parts.concat()
    }
}

/// Sturm count of roots in `(lo, hi]` of a squarefree polynomial.
fn sturm_count(p: &QPoly, lo: &Rat, hi: &Rat) -> usize {
    if p.degree() == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    let v_lo = sign_variations(&chain, lo);
    let v_hi = sign_variations(&chain, hi);
    v_lo.saturating_sub(v_hi)
}

fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    // Remainders are rescaled to primitive integer form (a positive factor,
    // so sign variations are unchanged); without this the coefficients of
    // the chain blow up exponentially.
    let prim = |q: QPoly| -> QPoly {
        if q.is_zero() {
            return q;
        }
        let (c, mut p) = q.integer_normalized();
        if c.is_negative() {
            p = p.neg();
        }
        p
    };
    let mut chain = vec![prim(p.clone()), prim(p.derivative())];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]).expect("nonzero");
        chain.push(prim(r.neg()));
    }
    chain.pop();
    chain
}

fn sign_variations(chain: &[QPoly], x: &Rat) -> usize {
    let mut prev: Option<bool> = None;
    let mut count = 0;
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(ps) = prev {
            if ps != s {
                count += 1;
            }
        }
        prev = Some(s);
    }
    count
}

/// Isolating intervals `(lo, hi]`-style for the real roots of a squarefree
/// polynomial, each of width <= 1/2 and containing exactly one root.
pub fn isolate_real_roots(p: &QPoly) -> Vec<(Rat, Rat)> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let b = p.root_bound();
    let mut stack = vec![(-b.clone(), b)];
    let mut out = Vec::new();
    let half = crate::rat::rat_pq(1, 2);
    while let Some((lo, hi)) = stack.pop() {
        let n = {
            let mut n = sturm_count(p, &lo, &hi);
            if p.eval(&lo).is_zero() {
                n += 1;
            }
            n
        };
        if n == 0 {
            continue;
        }
        if n == 1 && (&hi - &lo) <= half {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / crate::rat::rat_i(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Reduced rational function `num/den` with monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    num: QPoly,
    den: QPoly,
}

impl RatFn {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RatFn { num, den }.reduced()
    }

    pub fn zero() -> Self {
        RatFn {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFn::from_poly(QPoly::one())
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFn {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFn::from_poly(QPoly::constant(c))
    }

    fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return self;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() > 0 {
            self.num = self.num.div_exact(&g).expect("gcd divides");
            self.den = self.den.div_exact(&g).expect("gcd divides");
        }
        let lc = self.den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    /// The polynomial it represents; error if the denominator is not constant.
    pub fn to_poly(&self) -> Result<QPoly, Error> {
        if !self.is_polynomial() {
            return Err(Error::Internal(format!(
                "expected polynomial, got denominator {}",
                self.den.to_string_var("n")
            )));
        }
        Ok(self.num.scale(&self.den.coeff(0).recip()))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RatFn::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RatFn::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero rational function");
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .reduced()
    }

    /// Argument shift `n -> n + k`.
    pub fn shift_arg(&self, k: i64) -> Self {
        RatFn {
            num: self.num.shift_arg(k),
            den: self.den.shift_arg(k),
        }
    }

    pub fn derivative(&self) -> Self {
        RatFn::new(
            self.num
                .derivative()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }
}
