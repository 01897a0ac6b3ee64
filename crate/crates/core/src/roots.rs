//! Polynomial root location: fast floating-point approximation by the
//! Durand-Kerner iteration, exact Sturm isolation for real roots, and
//! certified rational enclosures through interval Newton contraction.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::interval::{eval_poly_rint, newton_step_box, refine_root_box, CBox, RInt};
use crate::qpoly::{isolate_real_roots, QPoly};
use crate::rat::{rat_i, rat_pq, rat_to_f64, Rat};
use crate::Error;

/// All roots of a polynomial as f64 approximations, without certification.
/// Multiple roots are found through the squarefree factorization, with the
/// factor's multiplicity attached.
pub fn approx_roots(p: &QPoly) -> Vec<(Complex64, usize)> {
    let (_, factors) = p.squarefree_factorization();
    let mut out = Vec::new();
    for (idx, f) in factors.iter().enumerate() {
        if f.degree() == 0 {
            continue;
        }
        let approx = durand_kerner(f).unwrap_or_default();
        for z in approx {
            out.push((z, idx + 1));
        }
    }
    out
}

/// Durand-Kerner iteration with Newton polish on a squarefree polynomial.
pub fn durand_kerner(p: &QPoly) -> Option<Vec<Complex64>> {
    let d = p.degree();
    if d == 0 {
        return Some(Vec::new());
    }
    let lc = rat_to_f64(&p.leading_coeff());
    let c: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|q| Complex64::new(rat_to_f64(q) / lc, 0.0))
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::zero();
        for k in (0..c.len()).rev() {
            acc = acc * z + c[k];
        }
        acc
    };
    let dcoef: Vec<Complex64> = (1..c.len())
        .map(|k| c[k] * Complex64::new(k as f64, 0.0))
        .collect();
    let deval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::zero();
        for k in (0..dcoef.len()).rev() {
            acc = acc * z + dcoef[k];
        }
        acc
    };
    // Initial guesses on a circle of the root-magnitude scale.
    let scale = 1.0
        + c[..d]
            .iter()
            .map(|x| x.norm())
            .fold(0.0f64, |a, b| a.max(b));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| seed.powu(k as u32 + 1) * scale / seed.norm().powi(k as i32))
        .collect();
    let mut converged = false;
    for _ in 0..600 {
        let mut delta_max = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.is_zero() {
                denom = Complex64::new(1e-30, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta_max = delta_max.max(step.norm());
        }
        if delta_max < 1e-13 * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    // A few Newton steps sharpen each root to full f64 accuracy.
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let dv = deval(*zi);
            if dv.norm() > 0.0 {
                *zi -= eval(*zi) / dv;
            }
        }
    }
    Some(z)
}

/// Certified enclosures for every root of a squarefree polynomial, refined
/// to `radius < target`. Real roots get exact real boxes; non-real roots
/// are certified in the upper half plane and mirrored, so the returned set
/// is exactly closed under conjugation.
pub fn certify_roots(p: &QPoly, target: &Rat) -> Result<Vec<CBox>, Error> {
    let d = p.degree();
    if d == 0 {
        return Ok(Vec::new());
    }
    debug_assert!(
        p.gcd(&p.derivative()).degree() == 0,
        "input must be squarefree"
    );
    let dp = p.derivative();

    let mut boxes: Vec<CBox> = Vec::new();
    // Real roots by exact isolation plus bisection/Newton refinement.
    for (lo, hi) in isolate_real_roots(p) {
        let b = refine_real_root(p, &dp, lo, hi, target)?;
        boxes.push(b);
    }
    let real_count = boxes.len();
    let complex_count = d - real_count;
    if complex_count % 2 != 0 {
        return Err(Error::Internal(
            "non-real roots of a real polynomial must come in pairs".to_string(),
        ));
    }

    if complex_count > 0 {
        let approx = durand_kerner(p).ok_or_else(|| {
            Error::Refinement("floating-point root iteration did not converge".to_string())
        })?;
        let mut upper: Vec<Complex64> = approx.into_iter().filter(|z| z.im > 1e-9).collect();
        upper.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        if upper.len() != complex_count / 2 {
            return Err(Error::Refinement(format!(
                "expected {} upper-half roots, located {}",
                complex_count / 2,
                upper.len()
            )));
        }
        for z in upper {
            let b = certify_complex_root(p, &dp, z, target)?;
            boxes.push(b.conj());
            boxes.push(b);
        }
    }

    // Distinct enclosures must be pairwise disjoint.
    for i in 0..boxes.len() {
        for j in (i + 1)..boxes.len() {
            let a = &boxes[i];
            let b = &boxes[j];
            let sep_re = a.re.hi < b.re.lo || b.re.hi < a.re.lo;
            let sep_im = a.im.hi < b.im.lo || b.im.hi < a.im.lo;
            if !(sep_re || sep_im) {
                return Err(Error::Refinement(
                    "root enclosures overlap; approximations were too coarse".to_string(),
                ));
            }
        }
    }
    Ok(boxes)
}

/// Bisection refinement of an isolated real root; exact rational roots
/// collapse to point boxes.
fn refine_real_root(
    p: &QPoly,
    dp: &QPoly,
    mut lo: Rat,
    mut hi: Rat,
    target: &Rat,
) -> Result<CBox, Error> {
    let zero_im = RInt::zero();
    if p.eval(&lo).is_zero() {
        return Ok(CBox::new(RInt::point(lo), zero_im));
    }
    if p.eval(&hi).is_zero() {
        return Ok(CBox::new(RInt::point(hi), zero_im));
    }
    let mut flo_pos = p.eval(&lo).is_positive();
    let mut steps = 0usize;
    while &(&hi - &lo) / rat_i(2) >= *target {
        steps += 1;
        if steps > 100_000 {
            return Err(Error::Refinement("real root bisection stalled".to_string()));
        }
        // Interval Newton accelerates once the derivative is sign-definite.
        if steps % 8 == 0 {
            let iv = RInt::new(lo.clone(), hi.clone());
            let div = eval_poly_rint(dp, &iv);
            if !div.contains_zero() {
                let m = iv.mid();
                let fm = p.eval(&m);
                if fm.is_zero() {
                    return Ok(CBox::new(RInt::point(m), zero_im));
                }
                let n = RInt::point(m).sub(&RInt::point(fm).mul(&div.recip()?));
                let nlo = n.lo.max(lo.clone());
                let nhi = n.hi.min(hi.clone());
                if nlo <= nhi {
                    // Round outward dyadically so endpoint sizes stay
                    // proportional to the accuracy instead of compounding
                    // through the Newton algebra.
                    let w = (&nhi - &nlo).max(target.clone());
                    let bits = crate::interval::dyadic_bits_for(&w) + 16;
                    let nlo = crate::interval::round_down(&nlo, bits).max(lo.clone());
                    let nhi = crate::interval::round_up(&nhi, bits).min(hi.clone());
                    if p.eval(&nlo).is_zero() {
                        return Ok(CBox::new(RInt::point(nlo), zero_im));
                    }
                    if p.eval(&nhi).is_zero() {
                        return Ok(CBox::new(RInt::point(nhi), zero_im));
                    }
                    // The Newton image still brackets the root.
                    if nlo <= nhi && p.eval(&nlo).is_positive() != p.eval(&nhi).is_positive() {
                        lo = nlo;
                        hi = nhi;
                        flo_pos = p.eval(&lo).is_positive();
                        continue;
                    }
                }
            }
        }
        let m = (&lo + &hi) / rat_i(2);
        let fm = p.eval(&m);
        if fm.is_zero() {
            return Ok(CBox::new(RInt::point(m), zero_im));
        }
        if fm.is_positive() == flo_pos {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(CBox::new(RInt::new(lo, hi), zero_im))
}

/// Certification of a non-real root from its f64 approximation: grow a box
/// until interval Newton contracts, then refine.
fn certify_complex_root(
    p: &QPoly,
    dp: &QPoly,
    z: Complex64,
    target: &Rat,
) -> Result<CBox, Error> {
    let re = f64_to_rat(z.re);
    let im = f64_to_rat(z.im);
    let mut r = rat_pq(1, 1_000_000_000);
    for _ in 0..24 {
        let guess = CBox::around(re.clone(), im.clone(), &r);
        if let Ok(n) = newton_step_box(p, dp, &guess) {
            if n.inside(&guess) {
                return refine_root_box(p, dp, n, target, 256);
            }
        }
        r *= rat_i(4);
    }
    Err(Error::Refinement(format!(
        "no contracting enclosure around {z:?}"
    )))
}

/// Dyadic rational from an f64 (exact).
pub fn f64_to_rat(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}
