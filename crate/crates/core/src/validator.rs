//! Rigorous two-sided enclosure of the uniform approximation error.
//!
//! The initial value problem is rewritten as a Volterra equation of the
//! second kind, `y = T(y)` with
//! `T(f)(x) = alpha_r(x)^-1 (g(x) + int_0^x K(x,t) f(t) dt)`. Because a
//! power `V^i` of the integral part is a contraction, the distance from a
//! candidate `p` to the fixed point is bounded by the computable quantity
//! `gamma_i ||T^i(p) - p||`. The iterates are polynomials except for the
//! division by `alpha_r`, which is expanded with a certified tolerance;
//! every quantity on the bound path is an exact rational, rounded outward.

use num_traits::{One, Signed, Zero};

use crate::chebpoly::ChebPoly;
use crate::oreops::{volterra_system, IvpProblem, VolterraSystem};
use crate::qpoly::QPoly;
use crate::rat::{rat_i, rat_pq, Rat};
use crate::ratcheb::expand_product;
use crate::Error;

/// Certified enclosure `[lower, upper]` of `||y - p||_inf` plus the
/// parameters that produced it.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    /// Rigorous upper bound `B`.
    pub upper: Rat,
    /// Rigorous lower bound `b`, clamped at zero.
    pub lower: Rat,
    /// Kernel bound `A >= sup |alpha_r^-1 K|`.
    pub kernel: Rat,
    /// Contraction power `i`.
    pub iterations: u32,
    /// Upper bound for `gamma_i = sum_j A^(ij)/(ij)!`.
    pub gamma: Rat,
    /// Coefficient-sum bound for `||p - p_i||`.
    pub delta: Rat,
    /// `D = deg(p - p_i) + 1`.
    pub diff_degree: usize,
    /// Expansion tolerance used for the iterates.
    pub epsilon: Rat,
}

/// Rigorous `A >= sup |alpha_r(x)^-1 K(x, t)|` over the integration
/// region: the sup of `|alpha_r^-1|` (from a certified low-accuracy
/// Chebyshev expansion) times the coefficient-sum bounds of the kernel's
/// `x`-coefficients.
pub fn kernel_bound(vs: &VolterraSystem) -> Result<Rat, Error> {
    let r = vs.order();
    let tol = rat_pq(1, 1000);
    let inv = expand_product(&QPoly::one(), &vs.alphas[r], &ChebPoly::one(), &tol)?;
    let u = inv.norm_upper() + &tol;
    let mut kernel_sum = Rat::zero();
    for beta in &vs.betas {
        if !beta.is_zero() {
            kernel_sum += ChebPoly::from_monomial(beta).norm_upper();
        }
    }
    Ok(u * kernel_sum)
}

/// Smallest `i >= 1` with `A^i / i! <= 1/2`, in exact arithmetic.
pub fn min_contraction_index(a: &Rat) -> u32 {
    assert!(!a.is_negative(), "kernel bound must be nonnegative");
    let half = rat_pq(1, 2);
    let mut i = 1u32;
    let mut term = a.clone(); // A^i / i!
    while term > half {
        i += 1;
        term = term * a / rat_i(i as i64);
    }
    i
}

/// Upper bound for `gamma_i = sum_j A^(ij) / (ij)!`: four exact terms plus
/// a geometric tail majorant, capped by `1/(1 - A^i/i!)`.
///
/// Fails when `A^i / i! >= 1` (no contraction at this power).
pub fn gamma_bound(a: &Rat, i: u32) -> Result<Rat, Error> {
    assert!(i >= 1);
    if a.is_zero() {
        return Ok(Rat::one());
    }
    let contraction = crate::rat::rat_powi(a, i as i64)
        / Rat::from_integer(crate::rat::factorial(i as u64));
    if contraction >= Rat::one() {
        return Err(Error::Inconclusive(format!(
            "A^i/i! = {} >= 1 at i = {i}",
            crate::rat::decimal_string(&contraction, 3)
        )));
    }
    let cap = (Rat::one() - &contraction).recip();

    // Terms t_j = A^(ij)/(ij)! for j = 0..4, then a geometric majorant
    // with ratio t_{j+1}/t_j evaluated at j = 4 (the ratio decreases).
    let mut terms = Vec::with_capacity(5);
    for j in 0..=4u64 {
        let t = crate::rat::rat_powi(a, (i as i64) * j as i64)
            / Rat::from_integer(crate::rat::factorial(i as u64 * j));
        terms.push(t);
    }
    let ratio = crate::rat::rat_powi(a, i as i64)
        * Rat::from_integer(crate::rat::factorial(4 * i as u64))
        / Rat::from_integer(crate::rat::factorial(5 * i as u64));
    let series = if ratio < Rat::one() {
        let tail = &terms[4] / (Rat::one() - &ratio);
        terms[..4].iter().cloned().sum::<Rat>() + tail
    } else {
        cap.clone()
    };
    Ok(series.min(cap))
}

/// Rational upper bound for `e^A`: `2 ceil(A) + 10` series terms plus a
/// geometric tail majorant.
pub fn exp_upper(a: &Rat) -> Rat {
    assert!(!a.is_negative());
    if a.is_zero() {
        return Rat::one();
    }
    let m = 2 * (a.ceil().to_integer().try_into().unwrap_or(1u64).max(1)) + 10;
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    for k in 0..m {
        sum += &term;
        term = term * a / rat_i(k as i64 + 1);
    }
    // term = A^m/m!; the remaining ratio is at most A/(m+1) < 1/2.
    let ratio = a / rat_i(m as i64 + 1);
    debug_assert!(ratio < rat_pq(1, 2));
    sum + term / (Rat::one() - ratio)
}

/// Exact ceiling of sqrt(n) for n >= 1.
fn ceil_sqrt(n: usize) -> Rat {
    let mut r = 1usize;
    while r * r < n {
        r += 1;
    }
    rat_i(r as i64)
}

/// Certifies `lower <= ||y - p||_inf <= upper` for the solution `y` of the
/// initial value problem, by `i` certified Picard iterations.
pub fn validate(ivp: &IvpProblem, p: &ChebPoly, eps: &Rat) -> Result<ValidationReport, Error> {
    if !eps.is_positive() {
        return Err(Error::Input("tolerance must be positive".to_string()));
    }
    ivp.op.check()?;
    let vs = volterra_system(ivp)?;
    let a_bound = kernel_bound(&vs)?;

    let mut i = min_contraction_index(&a_bound);
    let mut gamma = gamma_bound(&a_bound, i);
    let mut raises = 0;
    while gamma.is_err() && raises < 2 {
        i += 1;
        raises += 1;
        gamma = gamma_bound(&a_bound, i);
    }
    let gamma = gamma.map_err(|_| {
        Error::Inconclusive(format!(
            "no contraction established up to power {i} (kernel bound {})",
            crate::rat::decimal_string(&a_bound, 3)
        ))
    })?;

    // Picard iterates: q_{k+1} = g + sum_j x^j int_0^x beta_j p_k, then a
    // certified expansion of alpha_r^-1 q_{k+1}.
    let r = vs.order();
    let g_cheb = ChebPoly::from_monomial(&vs.g);
    let betas_cheb: Vec<ChebPoly> = vs.betas.iter().map(ChebPoly::from_monomial).collect();
    let xpow: Vec<ChebPoly> = (0..r)
        .map(|j| ChebPoly::from_monomial(&QPoly::monomial(Rat::one(), j)))
        .collect();
    let alpha_r = vs.alphas[r].clone();

    let mut pk = p.clone();
    for _ in 0..i {
        let mut q = g_cheb.clone();
        for j in 0..r {
            if betas_cheb[j].is_zero() {
                continue;
            }
            let integral = betas_cheb[j].mul(&pk).antiderivative();
            q = q.add(&xpow[j].mul(&integral));
        }
        pk = expand_product(&QPoly::one(), &alpha_r, &q, eps)?;
    }

    let diff = p.sub(&pk);
    let delta = diff.norm_upper();
    let diff_degree = diff.degree() + 1;
    let ea = exp_upper(&a_bound);
    let upper = &gamma * (&delta + &ea * eps);
    // Lower bound (2/3)(delta / sqrt(D) - e^A eps), with sqrt(D) replaced
    // by its integer ceiling (conservative direction) and clamped at 0.
    let lower_raw = (&delta / ceil_sqrt(diff_degree) - &ea * eps) * rat_pq(2, 3);
    let lower = if lower_raw.is_negative() {
        Rat::zero()
    } else {
        lower_raw
    };
    debug_assert!(lower <= upper);

    Ok(ValidationReport {
        upper,
        lower,
        kernel: a_bound,
        iterations: i,
        gamma,
        delta,
        diff_degree,
        epsilon: eps.clone(),
    })
}
