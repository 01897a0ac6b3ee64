//! Recurrence operators on Chebyshev coefficient sequences.
//!
//! A differential operator `L` with polynomial coefficients induces a
//! recurrence `P` with polynomial coefficients in the index `n` acting on
//! the symmetric coefficient sequence of a function, together with a
//! right-hand-side operator `Q` so that `L u = v` iff `P (u_n) = Q (v_n)`.
//! `P` is assembled inside the skew Laurent ring `Q(n)<S, S^{-1}>`
//! (commutation `S f(n) = f(n+1) S`) from the left normal form of `L` via
//! the ring elements `X = (S + S^{-1})/2` and `I = (1/2n)(S^{-1} - S)`,
//! then scaled by `delta_r(n)` so that every denominator cancels.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::oreops::{left_normal_form, DiffOp};
use crate::qpoly::{QPoly, RatFn};
use crate::rat::{rat_i, rat_pq, Rat};
use crate::Error;

/// Element of the skew Laurent ring `Q(n)<S, S^{-1}>`, stored as a sparse
/// shift -> coefficient map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkewLaurent {
    terms: BTreeMap<i64, RatFn>,
}

impl SkewLaurent {
    pub fn zero() -> Self {
        SkewLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        SkewLaurent::single(0, RatFn::one())
    }

    pub fn single(shift: i64, coeff: RatFn) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(shift, coeff);
        }
        SkewLaurent { terms }
    }

    /// Multiplication-by-x operator `X = (S + S^{-1})/2`.
    pub fn x_op() -> Self {
        let half = RatFn::constant(rat_pq(1, 2));
        let mut terms = BTreeMap::new();
        terms.insert(1, half.clone());
        terms.insert(-1, half);
        SkewLaurent { terms }
    }

    /// Integration operator `I = (1/2n)(S^{-1} - S)`.
    pub fn int_op() -> Self {
        let inv2n = RatFn::new(QPoly::one(), QPoly::from_i64(&[0, 2]));
        let mut terms = BTreeMap::new();
        terms.insert(-1, inv2n.clone());
        terms.insert(1, inv2n.neg());
        SkewLaurent { terms }
    }

    pub fn terms(&self) -> &BTreeMap<i64, RatFn> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            let entry = terms.entry(*k).or_insert_with(RatFn::zero);
            *entry = entry.add(c);
        }
        terms.retain(|_, c| !c.is_zero());
        SkewLaurent { terms }
    }

    /// Product, using `S^a f(n) = f(n + a) S^a`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut terms: BTreeMap<i64, RatFn> = BTreeMap::new();
        for (a, f) in &self.terms {
            for (b, g) in &rhs.terms {
                let coeff = f.mul(&g.shift_arg(*a));
                if coeff.is_zero() {
                    continue;
                }
                let entry = terms.entry(a + b).or_insert_with(RatFn::zero);
                *entry = entry.add(&coeff);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        SkewLaurent { terms }
    }

    /// Left multiplication by a polynomial in `n` (no commutation needed).
    pub fn scale_left(&self, p: &QPoly) -> Self {
        let f = RatFn::from_poly(p.clone());
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let nc = f.mul(c);
            if !nc.is_zero() {
                terms.insert(*k, nc);
            }
        }
        SkewLaurent { terms }
    }

    /// Evaluation of a polynomial at `X`; `p(X)` has constant coefficients.
    pub fn eval_poly_at_x(p: &QPoly) -> Self {
        let x = SkewLaurent::x_op();
        let mut acc = SkewLaurent::zero();
        for c in p.coeffs().iter().rev() {
            acc = x.mul(&acc);
            if !c.is_zero() {
                acc = acc.add(&SkewLaurent::single(0, RatFn::constant(c.clone())));
            }
        }
        acc
    }
}

/// Recurrence operator `P = sum_{k=-s}^{s} b_k(n) S^k` with polynomial
/// coefficients, acting on symmetric sequences.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RecOp {
    half_order: i64,
    /// `b_{-s}..b_s`, indexed by `k + s`.
    coeffs: Vec<QPoly>,
}

impl RecOp {
    /// Converts a skew element whose coefficients have all cancelled to
    /// polynomials; a surviving denominator indicates a construction bug.
    pub fn from_skew(op: &SkewLaurent) -> Result<Self, Error> {
        if op.is_zero() {
            return Err(Error::Internal("zero recurrence operator".to_string()));
        }
        let s = op
            .terms()
            .keys()
            .map(|k| k.abs())
            .max()
            .expect("nonempty");
        let mut coeffs = vec![QPoly::zero(); (2 * s + 1) as usize];
        for (k, c) in op.terms() {
            let p = c.to_poly().map_err(|_| {
                Error::Internal(format!(
                    "recurrence coefficient at shift {k} is not polynomial: {}/{}",
                    c.num().to_string_var("n"),
                    c.den().to_string_var("n")
                ))
            })?;
            coeffs[(k + s) as usize] = p;
        }
        Ok(RecOp {
            half_order: s,
            coeffs,
        })
    }

    pub fn half_order(&self) -> i64 {
        self.half_order
    }

    /// Coefficient `b_k`; zero outside `[-s, s]`.
    pub fn coeff(&self, k: i64) -> QPoly {
        if k.abs() > self.half_order {
            return QPoly::zero();
        }
        self.coeffs[(k + self.half_order) as usize].clone()
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    /// Divides out the integer content and fixes the sign so that the
    /// leading coefficient of `b_s` is positive.
    pub fn normalized(&self) -> Self {
        use num_bigint::BigInt;
        use num_integer::Integer;
        let mut den = BigInt::one();
        for p in &self.coeffs {
            for c in p.coeffs() {
                den = crate::rat::lcm_big(&den, c.denom());
            }
        }
        let mut gcd = BigInt::zero();
        for p in &self.coeffs {
            for c in p.coeffs() {
                gcd = gcd.gcd(&(c.numer() * (&den / c.denom())));
            }
        }
        if gcd.is_zero() {
            return self.clone();
        }
        let mut scale = Rat::new(den, gcd);
        let lead = self.coeffs.last().expect("nonempty");
        if (lead.leading_coeff() * &scale).is_negative() {
            scale = -scale;
        }
        RecOp {
            half_order: self.half_order,
            coeffs: self.coeffs.iter().map(|p| p.scale(&scale)).collect(),
        }
    }

    /// `(P u)_n` for a symmetric sequence given by its one-sided values
    /// (`u[m]` is the coefficient at index `+-m`, zero beyond the slice).
    pub fn apply_symmetric(&self, u: &[Rat], n: i64) -> Rat {
        let mut acc = Rat::zero();
        for k in -self.half_order..=self.half_order {
            let b = &self.coeffs[(k + self.half_order) as usize];
            if b.is_zero() {
                continue;
            }
            let idx = (n + k).unsigned_abs() as usize;
            if idx >= u.len() {
                continue;
            }
            if u[idx].is_zero() {
                continue;
            }
            acc += b.eval_i64(n) * &u[idx];
        }
        acc
    }

    /// Text rendering `b_{k}(n)` per shift, smallest shift first.
    pub fn describe(&self) -> Vec<(i64, String)> {
        (-self.half_order..=self.half_order)
            .filter_map(|k| {
                let b = self.coeff(k);
                if b.is_zero() {
                    None
                } else {
                    Some((k, b.to_string_var("n")))
                }
            })
            .collect()
    }
}

/// `delta_r(n) = 2^r prod_{i=-r+1}^{r-1} (n - i)`.
pub fn delta(r: usize) -> QPoly {
    let mut p = QPoly::constant(crate::rat::rat_powi(&rat_i(2), r as i64));
    if r == 0 {
        return p;
    }
    for i in -(r as i64 - 1)..=(r as i64 - 1) {
        p = p.mul(&QPoly::from_coeffs(vec![rat_i(-i), Rat::one()]));
    }
    p
}

/// Right-hand-side operator `Q_r = delta_r(n) I^r` in skew form.
pub fn build_q_skew(r: usize) -> SkewLaurent {
    let i_op = SkewLaurent::int_op();
    let mut acc = SkewLaurent::one();
    for _ in 0..r {
        acc = i_op.mul(&acc);
    }
    acc.scale_left(&delta(r))
}

/// `Q_r` with polynomial coefficients.
pub fn build_q(r: usize) -> Result<RecOp, Error> {
    RecOp::from_skew(&build_q_skew(r))
}

/// The pair `(P, Q)` with `L u = v` iff `P (u_n) = Q (v_n)`, both with
/// polynomial coefficients and unnormalized so that the equivalence holds
/// on the nose: `P = delta_r(n) sum_i I^{r-i} q_i(X)`, `Q = delta_r(n) I^r`.
pub fn recurrence_pair(op: &DiffOp) -> Result<(RecOp, RecOp), Error> {
    let r = op.order();
    let q = left_normal_form(op);
    let i_op = SkewLaurent::int_op();
    // Horner form of sum_i I^{r-i} q_i(X), accumulating from q_0 upward.
    let mut acc = SkewLaurent::eval_poly_at_x(&q[0]);
    for qi in q.iter().skip(1) {
        acc = i_op.mul(&acc);
        if !qi.is_zero() {
            acc = acc.add(&SkewLaurent::eval_poly_at_x(qi));
        }
    }
    let p = RecOp::from_skew(&acc.scale_left(&delta(r)))?;
    let qop = build_q(r)?;
    Ok((p, qop))
}

/// The Chebyshev recurrence operator of `L`, content- and sign-normalized.
pub fn chebyshev_recurrence(op: &DiffOp) -> Result<RecOp, Error> {
    Ok(recurrence_pair(op)?.0.normalized())
}

/// Trailing singularity set `S = {n >= s : b_{-s}(n) = 0}`, exact.
pub fn singularities(p: &RecOp) -> std::collections::BTreeSet<i64> {
    use num_traits::ToPrimitive;
    let s = p.half_order();
    let trailing = p.coeff(-s);
    assert!(!trailing.is_zero(), "trailing coefficient vanished");
    trailing
        .integer_roots()
        .into_iter()
        .filter_map(|n| n.to_i64())
        .filter(|n| *n >= s)
        .collect()
}
