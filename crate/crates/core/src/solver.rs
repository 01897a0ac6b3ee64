//! Degree-`d` Chebyshev approximation of the solution of an initial/
//! boundary value problem by backward recurrence.
//!
//! Test sequences are unrolled backward from a start index `N`, one per
//! trailing singularity and one per index of the top block
//! `[N, N+s-1]`; the boundary conditions together with the recurrence
//! relations at the indices skipped during unrolling form a square linear
//! system selecting the convergent symmetric combination. All arithmetic
//! is exact; a singular selection system triggers a retry with a larger
//! start index.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chebpoly::ChebPoly;
use crate::chebrec::{chebyshev_recurrence, singularities, RecOp};
use crate::oreops::{BoundaryCondition, IvpProblem};
use crate::rat::{lcm_big, Rat};
use crate::Error;

/// Default cap on start-index retries after singular selection systems.
pub const DEFAULT_MAX_RETRIES: u32 = 5;

/// Result of one approximation run.
#[derive(Clone, Debug)]
pub struct SolveOutput {
    /// The degree-`<= d` approximation, standard coefficients.
    pub poly: ChebPoly,
    /// Start index actually used (after retries).
    pub n_used: i64,
    /// Number of singular-system retries performed.
    pub retries: u32,
    /// Solved combination weights, keyed by test-sequence index.
    pub eta: BTreeMap<i64, Rat>,
    /// Untruncated symmetric coefficients of the computed sequence,
    /// indices `0..=N+s-1` (zero beyond `N`).
    pub symmetric_coeffs: Vec<Rat>,
}

/// Exact value of a boundary condition applied to a polynomial.
pub fn eval_condition(cond: &BoundaryCondition, p: &ChebPoly) -> Rat {
    let max_order = cond.terms.iter().map(|t| t.order).max().unwrap_or(0);
    let mut derivs = Vec::with_capacity(max_order + 1);
    derivs.push(p.clone());
    for _ in 0..max_order {
        let next = derivs.last().unwrap().derivative();
        derivs.push(next);
    }
    let mut acc = Rat::zero();
    for t in &cond.terms {
        acc += &t.weight * derivs[t.order].eval(&t.point);
    }
    acc
}

/// Computes the degree-`d` approximation of the solution of `ivp`.
///
/// `n_start` overrides the automatic start index (which is
/// `max(d, max S) + s`); it must be at least `max(d, max S)`.
pub fn approximate(
    ivp: &IvpProblem,
    d: usize,
    n_start: Option<i64>,
    max_retries: u32,
) -> Result<SolveOutput, Error> {
    ivp.op.check()?;
    let p = chebyshev_recurrence(&ivp.op)?;
    approximate_with_recurrence(ivp, &p, d, n_start, max_retries)
}

/// Same as [`approximate`] with a precomputed recurrence operator.
pub fn approximate_with_recurrence(
    ivp: &IvpProblem,
    rec: &RecOp,
    d: usize,
    n_start: Option<i64>,
    max_retries: u32,
) -> Result<SolveOutput, Error> {
    let s = rec.half_order();
    if (d as i64) <= s {
        return Err(Error::Input(format!(
            "target degree {d} must exceed the recurrence half order {s}"
        )));
    }
    let sing = singularities(rec);
    let max_sing = sing.iter().max().copied().unwrap_or(0);
    let floor = (d as i64).max(max_sing);
    let mut n = match n_start {
        Some(n) => {
            if n < floor {
                return Err(Error::Input(format!(
                    "start index {n} below max(degree, largest singularity) = {floor}"
                )));
            }
            n
        }
        None => floor + s,
    };

    let mut tried = Vec::new();
    let mut retries = 0u32;
    loop {
        match attempt(ivp, rec, &sing, d, n)? {
            Some(out) => {
                return Ok(SolveOutput {
                    retries,
                    ..out
                });
            }
            None => {
                tried.push(n);
                if retries >= max_retries {
                    return Err(Error::SingularSystem { tried });
                }
                retries += 1;
                n += s.max(1);
            }
        }
    }
}

/// One attempt at a fixed start index; `Ok(None)` flags a singular system.
fn attempt(
    ivp: &IvpProblem,
    rec: &RecOp,
    sing: &BTreeSet<i64>,
    d: usize,
    n_big: i64,
) -> Result<Option<SolveOutput>, Error> {
    let s = rec.half_order();
    let r = ivp.op.order() as i64;

    // Test-sequence indices.
    let mut index_set: BTreeSet<i64> = sing.clone();
    for i in n_big..(n_big + s) {
        index_set.insert(i);
    }
    let indices: Vec<i64> = index_set.iter().copied().collect();
    if indices.is_empty() {
        return Err(Error::Internal("empty test-sequence index set".to_string()));
    }

    // Storage covers sequence indices 0..=top.
    let top = (n_big + s - 1).max(sing.iter().max().copied().unwrap_or(0));
    let len = (top + 1) as usize;
    let mut seqs: Vec<Vec<Rat>> = vec![vec![Rat::zero(); len]; indices.len()];

    // Backward unrolling; the relation at index n determines the value at
    // n - s. Values at indices in the set (and in the zero tail) are
    // pinned instead; relations at singular indices are therefore not used
    // here and reappear as selection equations below.
    let trailing = rec.coeff(-s);
    for m in (0..len).rev() {
        let rel = m as i64 + s;
        for (pos, &i) in indices.iter().enumerate() {
            if rel == i {
                seqs[pos][m] = Rat::one();
            } else if index_set.contains(&rel) || rel >= n_big + s {
                // already zero
            } else {
                let denom = trailing.eval_i64(rel);
                if denom.is_zero() {
                    return Err(Error::Internal(format!(
                        "trailing coefficient vanished at unexpected index {rel}"
                    )));
                }
                let mut acc = Rat::zero();
                for k in (-s + 1)..=s {
                    let b = rec.coeff(k);

                    if b.is_zero() {
                        continue;
                    }
                    let idx = (rel + k).unsigned_abs() as usize;
                    if idx >= len {
                        continue;
                    }
                    let v = &seqs[pos][idx];
                    if v.is_zero() {
                        continue;
                    }
                    acc += b.eval_i64(rel) * v;
                }
                seqs[pos][m] = -acc / denom;
            }
        }
    }

    // Selection system: boundary conditions, then recurrence relations at
    // indices r..s-1 and at singularities >= r (relations below r vanish
    // identically on symmetric sequences).
    let polys: Vec<ChebPoly> = seqs.iter().map(|f| ChebPoly::from_symmetric(f)).collect();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for cond in &ivp.conditions {
        rows.push(polys.iter().map(|p| eval_condition(cond, p)).collect());
        rhs.push(cond.target.clone());
    }
    let mut relation_rows: Vec<i64> = (r..s).collect();
    for &sigma in sing.iter() {
        if sigma >= r && !relation_rows.contains(&sigma) {
            relation_rows.push(sigma);
        }
    }
    for rel in relation_rows {
        rows.push(
            seqs.iter()
                .map(|f| rec.apply_symmetric(f, rel))
                .collect(),
        );
        rhs.push(Rat::zero());
    }

    if rows.len() != indices.len() {
        return Ok(None);
    }
    let eta = match solve_exact(rows, rhs) {
        Some(eta) => eta,
        None => return Ok(None),
    };

    // Assemble the symmetric output sequence.
    let mut sym = vec![Rat::zero(); len];
    for (pos, coeff) in eta.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        for (m, v) in seqs[pos].iter().enumerate() {
            if !v.is_zero() {
                sym[m] += coeff * v;
            }
        }
    }
    let poly = ChebPoly::from_symmetric(&sym).truncate(d);
    let eta_map = indices.iter().cloned().zip(eta).collect();
    Ok(Some(SolveOutput {
        poly,
        n_used: n_big,
        retries: 0,
        eta: eta_map,
        symmetric_coeffs: sym,
    }))
}

/// Exact solve of a square rational system by fraction-free (Bareiss)
/// elimination; `None` when singular.
fn solve_exact(rows: Vec<Vec<Rat>>, rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = rows.len();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    // Clear denominators row by row.
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (row, b) in rows.iter().zip(&rhs) {
        let mut den = BigInt::one();
        for x in row.iter().chain(std::iter::once(b)) {
            den = lcm_big(&den, x.denom());
        }
        let ints: Vec<BigInt> = row
            .iter()
            .chain(std::iter::once(b))
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        m.push(ints);
    }

    let mut prev = BigInt::one();
    for k in 0..n {
        // Pivot search.
        let pivot = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot);
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }

    // Back substitution in rationals.
    let mut x = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rat::from_integer(m[i][n].clone());
        for j in (i + 1)..n {
            acc -= Rat::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rat::from_integer(m[i][i].clone());
    }
    Some(x)
}
