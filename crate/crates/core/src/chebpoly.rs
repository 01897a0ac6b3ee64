//! Polynomials on the Chebyshev basis with exact rational coefficients.
//!
//! Storage uses the one-sided "standard" convention: `f = sum u_n T_n`,
//! `n >= 0`. The symmetric convention `sum c_n T_n` over all integers with
//! `c_{-n} = c_n` relates to it by `u_0 = c_0`, `u_n = 2 c_n` for `n >= 1`;
//! recurrence algebra works on symmetric coefficients, everything else on
//! standard ones, with explicit conversion at the boundary.

use num_traits::{One, Signed, Zero};

use crate::qpoly::QPoly;
use crate::rat::{parse_rat, rat_i, rat_string, Rat};
use crate::Error;

/// Dense Chebyshev-basis polynomial, standard one-sided coefficients,
/// trailing zeros trimmed after every operation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChebPoly {
    coeffs: Vec<Rat>,
}

impl ChebPoly {
    pub fn zero() -> Self {
        ChebPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ChebPoly::basis(0)
    }

    /// The basis polynomial `T_n`.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        ChebPoly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        ChebPoly { coeffs: vec![c] }.compressed()
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        ChebPoly { coeffs }.compressed()
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ChebPoly::from_coeffs(coeffs.iter().map(|&c| rat_i(c)).collect())
    }

    /// Builds from symmetric coefficients `c_0, c_1, ..` (`c_{-n} = c_n`).
    pub fn from_symmetric(sym: &[Rat]) -> Self {
        let coeffs = sym
            .iter()
            .enumerate()
            .map(|(n, c)| if n == 0 { c.clone() } else { c * rat_i(2) })
            .collect();
        ChebPoly { coeffs }.compressed()
    }

    /// Symmetric coefficients `c_0, c_1, ..` of this polynomial.
    pub fn to_symmetric(&self) -> Vec<Rat> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, u)| if n == 0 { u.clone() } else { u / rat_i(2) })
            .collect()
    }

    fn compressed(mut self) -> Self {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last stored coefficient; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    /// Exact evaluation by the three-term backward scheme.
    pub fn eval(&self, x: &Rat) -> Rat {
        if self.coeffs.is_empty() {
            return Rat::zero();
        }
        let two_x = x * rat_i(2);
        let mut b1 = Rat::zero();
        let mut b2 = Rat::zero();
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + &two_x * &b1 - &b2;
            b2 = std::mem::replace(&mut b1, b0);
        }
        self.coeff(0) + x * &b1 - b2
    }

    pub fn neg(&self) -> Self {
        ChebPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        ChebPoly { coeffs: out }.compressed()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        ChebPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
        .compressed()
    }

    /// Product via `2 T_i T_j = T_{i+j} + T_{|i-j|}`.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return ChebPoly::zero();
        }
        let half = Rat::new(1.into(), 2.into());
        let mut out = vec![Rat::zero(); self.degree() + rhs.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b * &half;
                out[i + j] += &t;
                out[i.abs_diff(j)] += t;
            }
        }
        ChebPoly { coeffs: out }.compressed()
    }

    /// Euclidean division in the Chebyshev basis:
    /// `self = b * q + r` with `deg r < deg b`.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self), Error> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = b.degree();
        if m == 0 {
            // Constant divisor: everything goes to the quotient.
            let inv = b.coeff(0).recip();
            return Ok((self.scale(&inv), ChebPoly::zero()));
        }
        let mut r = self.clone();
        let mut q = ChebPoly::zero();
        while !r.is_zero() && r.degree() >= m {
            let n = r.degree();
            // Leading coefficient of T_{n-m} * b on T_n is b_m/2 for n > m
            // and b_m for n == m (since T_0 T_m = T_m); computing the full
            // product keeps the update uniform.
            let t = ChebPoly::basis(n - m).mul(b);
            let c = r.coeff(n) / t.coeff(n);
            q = q.add(&ChebPoly::basis(n - m).scale(&c));
            r = r.sub(&t.scale(&c));
            if !r.is_zero() && r.degree() >= n {
                return Err(Error::Internal(
                    "chebyshev division failed to reduce the degree".to_string(),
                ));
            }
        }
        Ok((q, r))
    }

    /// Antiderivative `F` with `F' = self` and `F(0) = 0`.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return ChebPoly::zero();
        }
        let d = self.degree();
        let mut out = vec![Rat::zero(); d + 2];
        for n in 1..=(d + 1) {
            // In symmetric form 2n C_n = c_{n-1} - c_{n+1}; back in standard
            // coefficients this is U_1 = u_0 - u_2/2 and
            // U_n = (u_{n-1} - u_{n+1}) / (2n) for n >= 2.
            out[n] = if n == 1 {
                self.coeff(0) - self.coeff(2) / rat_i(2)
            } else {
                (self.coeff(n - 1) - self.coeff(n + 1)) / rat_i(2 * n as i64)
            };
        }
        let mut f = ChebPoly { coeffs: out }.compressed();
        let at0 = f.eval(&Rat::zero());
        f = f.sub(&ChebPoly::constant(at0));
        debug_assert!(f.eval(&Rat::zero()).is_zero());
        f
    }

    /// Exact derivative, solved backward from the top index.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ChebPoly::zero();
        }
        let d = self.degree();
        let mut out = vec![Rat::zero(); d];
        // u'_{k-1} = u'_{k+1} + 2k u_k, then halve u'_0.
        for k in (1..=d).rev() {
            let upper = if k + 1 < d { out[k + 1].clone() } else { Rat::zero() };
            out[k - 1] = upper + self.coeff(k) * rat_i(2 * k as i64);
        }
        out[0] = std::mem::take(&mut out[0]) / rat_i(2);
        ChebPoly { coeffs: out }.compressed()
    }

    /// Coefficient-sum bound `M` with `max |f| <= M <= sqrt(d+1) * max |f|`.
    pub fn norm_upper(&self) -> Rat {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Drops coefficients of index greater than `d`.
    pub fn truncate(&self, d: usize) -> Self {
        ChebPoly {
            coeffs: self.coeffs.iter().take(d + 1).cloned().collect(),
        }
        .compressed()
    }

    /// Conversion to the monomial basis via `T_{n+1} = 2x T_n - T_{n-1}`.
    pub fn to_monomial(&self) -> QPoly {
        let mut acc = QPoly::zero();
        let mut t_prev = QPoly::one();
        let mut t_cur = QPoly::var();
        for (n, c) in self.coeffs.iter().enumerate() {
            let t_n = match n {
                0 => t_prev.clone(),
                1 => t_cur.clone(),
                _ => {
                    let t_next = QPoly::var().scale(&rat_i(2)).mul(&t_cur).sub(&t_prev);
                    t_prev = std::mem::replace(&mut t_cur, t_next);
                    t_cur.clone()
                }
            };
            if !c.is_zero() {
                acc = acc.add(&t_n.scale(c));
            }
        }
        acc
    }

    /// Inverse conversion; exact round-trip with `to_monomial`.
    pub fn from_monomial(p: &QPoly) -> Self {
        // x^k in the Chebyshev basis by repeated multiplication with x.
        let mut acc = ChebPoly::zero();
        let x = ChebPoly::basis(1);
        let mut xk = ChebPoly::one();
        for (k, c) in p.coeffs().iter().enumerate() {
            if k > 0 {
                xk = xk.mul(&x);
            }
            if !c.is_zero() {
                acc = acc.add(&xk.scale(c));
            }
        }
        acc
    }

    /// Serializes as a JSON array of rational strings, index 0 first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(rat_string(c)))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Input("coefficient JSON must be an array".into()))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for item in arr {
            let s = item.as_str().ok_or_else(|| {
                Error::Input("coefficients must be rational strings".into())
            })?;
            coeffs.push(parse_rat(s)?);
        }
        Ok(ChebPoly::from_coeffs(coeffs))
    }

    /// Decimal rendering of the coefficients, `digits` significant digits.
    pub fn to_decimal_strings(&self, digits: usize) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| crate::rat::decimal_string(c, digits))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_pq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Monomial-basis table of T_0..T_max built independently from the
    /// three-term recurrence; ground truth for conversions and products.
    fn monomial_t_table(max: usize) -> Vec<QPoly> {
        let mut t = vec![QPoly::one(), QPoly::var()];
        for n in 2..=max {
            let next = QPoly::var()
                .scale(&rat_i(2))
                .mul(&t[n - 1])
                .sub(&t[n - 2]);
            t.push(next);
        }
        t.truncate(max + 1);
        t
    }

    fn to_monomial_oracle(p: &ChebPoly) -> QPoly {
        let table = monomial_t_table(p.degree().max(1));
        let mut acc = QPoly::zero();
        for (n, c) in p.coeffs().iter().enumerate() {
            acc = acc.add(&table[n].scale(c));
        }
        acc
    }

    fn random_poly(rng: &mut StdRng, max_deg: usize) -> ChebPoly {
        let d = rng.gen_range(0..=max_deg);
        let coeffs = (0..=d)
            .map(|_| rat_pq(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
            .collect();
        ChebPoly::from_coeffs(coeffs)
    }

    #[test]
    fn eval_examples() {
        // T_2(0) = -1
        assert_eq!(ChebPoly::basis(2).eval(&Rat::zero()), rat_i(-1));
        // (T_0 + T_1)(1) = 2
        assert_eq!(ChebPoly::from_i64(&[1, 1]).eval(&rat_i(1)), rat_i(2));
        // T_3(1/2) = 4/8 - 3/2 = -1, from the monomial form 4x^3 - 3x.
        assert_eq!(ChebPoly::basis(3).eval(&rat_pq(1, 2)), rat_i(-1));
    }

    #[test]
    fn mul_examples() {
        // T_1 * T_1 = (T_0 + T_2) / 2
        let sq = ChebPoly::basis(1).mul(&ChebPoly::basis(1));
        assert_eq!(
            sq,
            ChebPoly::from_coeffs(vec![rat_pq(1, 2), Rat::zero(), rat_pq(1, 2)])
        );
        // T_0 is the unit.
        let p = ChebPoly::from_i64(&[3, 0, -2, 5]);
        assert_eq!(ChebPoly::one().mul(&p), p);
        // T_2 * T_3 = (T_1 + T_5) / 2
        let p23 = ChebPoly::basis(2).mul(&ChebPoly::basis(3));
        let mut expect = vec![Rat::zero(); 6];
        expect[1] = rat_pq(1, 2);
        expect[5] = rat_pq(1, 2);
        assert_eq!(p23, ChebPoly::from_coeffs(expect));
    }

    #[test]
    fn mul_matches_monomial_oracle() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..100 {
            let a = random_poly(&mut rng, 12);
            let b = random_poly(&mut rng, 12);
            let lhs = a.mul(&b).to_monomial();
            let rhs = to_monomial_oracle(&a).mul(&to_monomial_oracle(&b));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn divrem_examples() {
        // T_2 = 2x * x - 1: q = 2 T_1, r = -T_0.
        let (q, r) = ChebPoly::basis(2).divrem(&ChebPoly::basis(1)).unwrap();
        assert_eq!(q, ChebPoly::from_i64(&[0, 2]));
        assert_eq!(r, ChebPoly::from_i64(&[-1]));
        // a = b gives q = T_0, r = 0.
        let b = ChebPoly::from_i64(&[1, -3, 2]);
        let (q, r) = b.divrem(&b).unwrap();
        assert_eq!(q, ChebPoly::one());
        assert!(r.is_zero());
        // a = T_3 + T_1, b = T_2: frozen from the monomial oracle
        // (4x^3 - 2x) = (2x^2 - 1)(2x) + 0.
        let a = ChebPoly::from_i64(&[0, 1, 0, 1]);
        let (q, r) = a.divrem(&ChebPoly::basis(2)).unwrap();
        assert_eq!(q, ChebPoly::from_i64(&[0, 2]));
        assert!(r.is_zero());
        assert!(ChebPoly::one().divrem(&ChebPoly::zero()).is_err());
    }

    #[test]
    fn divrem_random_reconstructs() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_poly(&mut rng, 12);
            let mut b = random_poly(&mut rng, 6);
            if b.is_zero() {
                b = ChebPoly::basis(1);
            }
            let (q, r) = a.divrem(&b).unwrap();
            assert_eq!(b.mul(&q).add(&r).to_monomial(), to_monomial_oracle(&a));
            assert!(r.is_zero() || r.degree() < b.degree());
        }
    }

    #[test]
    fn antiderivative_examples() {
        // int x dx = x^2/2 = (T_2 + T_0)/4, minus value at 0.
        let f = ChebPoly::basis(1).antiderivative();
        assert_eq!(
            f,
            ChebPoly::from_coeffs(vec![rat_pq(1, 4), Rat::zero(), rat_pq(1, 4)])
        );
        // int 1 dx = x.
        assert_eq!(ChebPoly::one().antiderivative(), ChebPoly::basis(1));
        // int T_2 = T_3/6 - T_1/2 (monomial oracle: 2x^3/3 - x).
        let f2 = ChebPoly::basis(2).antiderivative();
        assert_eq!(
            f2,
            ChebPoly::from_coeffs(vec![
                Rat::zero(),
                rat_pq(-1, 2),
                Rat::zero(),
                rat_pq(1, 6)
            ])
        );
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(ChebPoly::basis(1).derivative(), ChebPoly::one());
        assert!(ChebPoly::one().derivative().is_zero());
        // T_3' = 12x^2 - 3 = 3 T_0 + 6 T_2 (monomial oracle).
        assert_eq!(ChebPoly::basis(3).derivative(), ChebPoly::from_i64(&[3, 0, 6]));
    }

    #[test]
    fn derivative_inverts_antiderivative() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let f = random_poly(&mut rng, 15);
            let g = f.antiderivative();
            assert_eq!(g.derivative(), f);
            assert!(g.eval(&Rat::zero()).is_zero());
        }
    }

    #[test]
    fn norm_upper_examples() {
        assert_eq!(ChebPoly::from_i64(&[1, 1]).norm_upper(), rat_i(2));
        assert_eq!(ChebPoly::zero().norm_upper(), Rat::zero());
        let f = ChebPoly::from_i64(&[1, 0, -1]);
        assert_eq!(f.norm_upper(), rat_i(2));
        assert_eq!(f.eval(&Rat::zero()), rat_i(2));
    }

    #[test]
    fn norm_upper_sandwich_on_samples() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..12 {
            let f = random_poly(&mut rng, 20);
            let m = f.norm_upper();
            let mut max_abs = Rat::zero();
            for k in 0..=400 {
                let x = rat_pq(k - 200, 200);
                let v = f.eval(&x).abs();
                if v > max_abs {
                    max_abs = v;
                }
            }
            // The bound must dominate every sample exactly.
            assert!(max_abs <= m);
            // And it is within sqrt(d+1) of the sampled sup, up to slack for
            // the finite grid.
            let d = f.degree() as i64;
            let slack = rat_pq(11, 10);
            assert!(m <= (max_abs + rat_pq(1, 100)) * (rat_i(d + 1)) * slack);
        }
    }

    #[test]
    fn truncate_examples() {
        let p = ChebPoly::from_i64(&[1, 0, 0, 0, 0, 1]);
        assert_eq!(p.truncate(3), ChebPoly::one());
        let q = ChebPoly::from_i64(&[0, 1, 1, 1]);
        assert_eq!(q.truncate(q.degree()), q);
        assert_eq!(q.truncate(2), ChebPoly::from_i64(&[0, 1, 1]));
    }

    #[test]
    fn monomial_conversion_examples() {
        assert_eq!(ChebPoly::basis(2).to_monomial(), QPoly::from_i64(&[-1, 0, 2]));
        assert_eq!(ChebPoly::one().to_monomial(), QPoly::from_i64(&[1]));
        // T_4 = 8x^4 - 8x^2 + 1 from the recurrence oracle.
        assert_eq!(
            ChebPoly::basis(4).to_monomial(),
            QPoly::from_i64(&[1, 0, -8, 0, 8])
        );
        let table = monomial_t_table(25);
        for (n, t) in table.iter().enumerate() {
            assert_eq!(ChebPoly::basis(n).to_monomial(), *t);
            assert_eq!(ChebPoly::from_monomial(t), ChebPoly::basis(n));
        }
    }

    #[test]
    fn monomial_round_trip() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let f = random_poly(&mut rng, 16);
            assert_eq!(ChebPoly::from_monomial(&f.to_monomial()), f);
        }
    }

    #[test]
    fn symmetric_conversion_is_involution() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..50 {
            let f = random_poly(&mut rng, 10);
            assert_eq!(ChebPoly::from_symmetric(&f.to_symmetric()), f);
        }
        // Evaluation consistency at the endpoints: T_n(1) = 1, T_n(-1) = (-1)^n.
        let f = ChebPoly::from_i64(&[2, -3, 5, 7]);
        let sum: Rat = f.coeffs().iter().cloned().sum();
        assert_eq!(f.eval(&rat_i(1)), sum);
        let alt: Rat = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 2 == 0 { c.clone() } else { -c.clone() })
            .sum();
        assert_eq!(f.eval(&rat_i(-1)), alt);
    }

    #[test]
    fn json_round_trip() {
        let p = ChebPoly::from_coeffs(vec![rat_pq(-3, 7), Rat::zero(), rat_i(4)]);
        let j = p.to_json();
        assert_eq!(j, serde_json::json!(["-3/7", "0", "4"]));
        assert_eq!(ChebPoly::from_json(&j).unwrap(), p);
        assert!(ChebPoly::from_json(&serde_json::json!("x")).is_err());
        assert!(ChebPoly::from_json(&serde_json::json!(["1.5"])).is_err());
    }
}
