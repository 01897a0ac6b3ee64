//! Chebyshev expansion of products `f(x) * a(x)/b(x)` with a certified
//! uniform error budget.
//!
//! Under the substitution `x = (z + 1/z)/2`, the proper part of the
//! rational function becomes a quotient by `beta(z) = z^D b((z+1/z)/2)`,
//! whose roots split into reciprocal pairs off the unit circle. The
//! symmetric Chebyshev coefficients have the closed form
//! `y_n = q_n + sum binom(n+j-1, j-1) h_ij(zeta) zeta^(-n-j)` over the
//! roots with `|zeta| > 1`; certified root enclosures plus exact rational
//! evaluation of the `h_ij` turn that formula into an approximation with
//! a fully rigorous error bound.

use num_traits::{One, Signed, Zero};

use crate::chebpoly::ChebPoly;
use crate::interval::{eval_poly_box, CBox, RInt};
use crate::oreops::check_nonvanishing;
use crate::qpoly::{QPoly, RatFn};
use crate::rat::{rat_i, rat_pq, round_dyadic, Rat};
use crate::roots::certify_roots;
use crate::Error;

/// Exact complex rational scalar.
#[derive(Clone, PartialEq, Eq, Debug)]
struct QComplex {
    re: Rat,
    im: Rat,
}

impl QComplex {
    fn new(re: Rat, im: Rat) -> Self {
        QComplex { re, im }
    }

    fn zero() -> Self {
        QComplex::new(Rat::zero(), Rat::zero())
    }

    fn mul(&self, rhs: &Self) -> Self {
        QComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    fn scale(&self, c: &Rat) -> Self {
        QComplex::new(&self.re * c, &self.im * c)
    }

    fn recip(&self) -> Self {
        let d = &self.re * &self.re + &self.im * &self.im;
        QComplex::new(&self.re / &d, -(&self.im / &d))
    }

    fn eval_poly(p: &QPoly, z: &QComplex) -> QComplex {
        let mut acc = QComplex::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(z);
            acc.re += c;
        }
        acc
    }

    fn eval_ratfn(f: &RatFn, z: &QComplex) -> QComplex {
        QComplex::eval_poly(f.num(), z).mul(&QComplex::eval_poly(f.den(), z).recip())
    }
}

/// Certified enclosure of one root of `beta` with `|zeta| > 1`, tagged by
/// its squarefree factor index (1-based; also the multiplicity).
#[derive(Clone, Debug)]
pub struct OuterRoot {
    pub factor: usize,
    pub enclosure: CBox,
}

/// Partial fraction data of a rational function with no pole on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct PartialFractionForm {
    /// Polynomial part, Chebyshev basis.
    pub poly_part: ChebPoly,
    /// Monic squarefree factors `beta_1..beta_k` (`beta_i` has multiplicity
    /// `i` in `beta`); `beta = content * prod beta_i^i`.
    pub factors: Vec<QPoly>,
    pub content: Rat,
    /// `fractions[i-1][j-1] = h_{i,j}` for `1 <= j <= i`.
    pub fractions: Vec<Vec<RatFn>>,
    /// Certified enclosures of the roots with `|zeta| > 1`.
    pub roots: Vec<OuterRoot>,
    /// Denominator `b` (monomial basis) and its Joukowski form `beta`.
    pub denominator: QPoly,
    pub beta: QPoly,
}

/// `z^(deg p) p((z + 1/z)/2)` as a polynomial in `z`.
pub fn joukowski_numerator(p: &QPoly) -> QPoly {
    if p.is_zero() {
        return QPoly::zero();
    }
    let d = p.degree();
    // sum_k c_k 2^-k z^(d-k) (z^2 + 1)^k
    let z2p1 = QPoly::from_i64(&[1, 0, 1]);
    let mut acc = QPoly::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = z2p1.pow(k).mul(&QPoly::monomial(
            c / crate::rat::rat_powi(&rat_i(2), k as i64),
            d - k,
        ));
        acc = acc.add(&term);
    }
    acc
}

/// Decomposes the proper fraction `r/b` (`deg r < deg b`) after the
/// Joukowski substitution: returns monic squarefree factors of `beta`,
/// its content, the `h_{i,j}`, and `beta` itself.
fn proper_fraction_parts(
    r: &QPoly,
    b: &QPoly,
) -> Result<(Vec<QPoly>, Rat, Vec<Vec<RatFn>>, QPoly), Error> {
    let d = b.degree();
    let beta = joukowski_numerator(b);
    let (content, factors) = beta.squarefree_factorization();
    if r.is_zero() {
        return Ok((factors, content, Vec::new(), beta));
    }
    // w(x) = r(x)/b(x) becomes A(z)/beta(z) with A = rho(z) z^(D - deg r).
    let rho = joukowski_numerator(r);
    let a_num = rho.mul(&QPoly::monomial(Rat::one(), d - r.degree()));

    // Split A/content over the pairwise coprime monic factors beta_i^i.
    let scaled = a_num.scale(&content.recip());
    let monic_product = factors
        .iter()
        .enumerate()
        .fold(QPoly::one(), |acc, (idx, f)| acc.mul(&f.pow(idx + 1)));
    let mut numerators: Vec<QPoly> = Vec::with_capacity(factors.len());
    for (idx, f) in factors.iter().enumerate() {
        if f.degree() == 0 {
            numerators.push(QPoly::zero());
            continue;
        }
        let m_i = f.pow(idx + 1);
        let cofactor = monic_product.div_exact(&m_i)?;
        let (g, u, _) = cofactor.extended_gcd(&m_i);
        if g.degree() != 0 {
            return Err(Error::Internal(
                "squarefree factors are not coprime".to_string(),
            ));
        }
        // u * cofactor = 1 (mod m_i); N_i = A u mod m_i.
        let (_, n_i) = scaled.mul(&u).divrem(&m_i)?;
        numerators.push(n_i);
    }
    // Exact reconstruction check of the splitting.
    let mut recon = QPoly::zero();
    for (idx, f) in factors.iter().enumerate() {
        if f.degree() == 0 {
            continue;
        }
        let cofactor = monic_product.div_exact(&f.pow(idx + 1))?;
        recon = recon.add(&numerators[idx].mul(&cofactor));
    }
    if recon != scaled {
        return Err(Error::Internal(
            "partial fraction split failed to reconstruct".to_string(),
        ));
    }

    // Per-factor expansion into h_{i,j} through truncated series over Q(z):
    // with beta_i(z + w) = w v(w), the pole part at a root of beta_i is
    // read off the w-expansion of sum_j c_{i,j}(z + w) w^-j v(w)^-j.
    let mut fractions = Vec::with_capacity(factors.len());
    for (idx, f) in factors.iter().enumerate() {
        let mult = idx + 1;
        if f.degree() == 0 {
            fractions.push(Vec::new());
            continue;
        }
        // beta_i-adic digits: N_i = sum_t s_t beta_i^t, c_{i,j} = s_{i-j}.
        let mut digits = Vec::with_capacity(mult);
        let mut rem = numerators[idx].clone();
        for _ in 0..mult {
            let (q2, s) = rem.divrem(f)?;
            digits.push(s);
            rem = q2;
        }
        let c_ij: Vec<QPoly> = (1..=mult).map(|j| digits[mult - j].clone()).collect();

        // v_m = beta_i^(m+1)(z)/(m+1)!.
        let mut v: Vec<RatFn> = Vec::with_capacity(mult);
        let mut deriv = f.derivative();
        let mut fact = Rat::one();
        for m in 0..mult {
            if m > 0 {
                deriv = deriv.derivative();
                fact *= rat_i((m + 1) as i64);
            }
            v.push(RatFn::from_poly(deriv.scale(&fact.recip())));
        }
        // Series inverse of v; valid at every root since v_0 = beta_i' and
        // beta_i is squarefree.
        let v0_inv = v[0].recip();
        let mut inv: Vec<RatFn> = vec![v0_inv.clone()];
        for m in 1..mult {
            let mut acc = RatFn::zero();
            for t in 1..=m {
                acc = acc.add(&v[t].mul(&inv[m - t]));
            }
            inv.push(acc.mul(&v0_inv).neg());
        }
        // Powers v^-j truncated at order mult.
        let mut vpow: Vec<Vec<RatFn>> = vec![inv.clone()];
        for _ in 1..mult {
            let prev = vpow.last().unwrap();
            let mut next = vec![RatFn::zero(); mult];
            for a2 in 0..mult {
                if prev[a2].is_zero() {
                    continue;
                }
                for b2 in 0..(mult - a2) {
                    next[a2 + b2] = next[a2 + b2].add(&prev[a2].mul(&inv[b2]));
                }
            }
            vpow.push(next);
        }
        // h_{i,t} = (-1)^t [w^{-t}] sum_j c_{i,j}(z + w) w^-j v(w)^-j.
        let mut h_list = Vec::with_capacity(mult);
        for t in 1..=mult {
            let mut lt = RatFn::zero();
            for j in t..=mult {
                let c = &c_ij[j - 1];
                if c.is_zero() {
                    continue;
                }
                let need = j - t;
                let mut acc = RatFn::zero();
                let mut taylor = c.clone();
                let mut mfact = Rat::one();
                for m in 0..=need {
                    if m > 0 {
                        taylor = taylor.derivative();
                        mfact *= rat_i(m as i64);
                    }
                    if taylor.is_zero() {
                        break;
                    }
                    let cm = RatFn::from_poly(taylor.scale(&mfact.recip()));
                    acc = acc.add(&cm.mul(&vpow[j - 1][need - m]));
                }
                lt = lt.add(&acc);
            }
            if t % 2 == 1 {
                lt = lt.neg();
            }
            h_list.push(lt);
        }
        fractions.push(h_list);
    }
    Ok((factors, content, fractions, beta))
}

fn default_root_target() -> Rat {
    crate::rat::pow10(-12)
}

/// Fresh certified enclosures of the outer roots (`|zeta| > 1`), radius
/// below `target`, each separated from the unit circle, and with all the
/// `h_{i,j}` evaluable on the boxes (denominators bounded away from zero).
fn certify_outer_roots(
    factors: &[QPoly],
    fractions: &[Vec<RatFn>],
    expected_outer: usize,
    target: &Rat,
) -> Result<Vec<OuterRoot>, Error> {
    let mut out = Vec::new();
    for (idx, f) in factors.iter().enumerate() {
        if f.degree() == 0 {
            continue;
        }
        let mut tgt = target.clone();
        let mut settled = false;
        'refine: for _ in 0..8 {
            let boxes = certify_roots(f, &tgt)?;
            let mut kept = Vec::new();
            for enc in boxes {
                let lo = enc.abs_lower(64);
                let hi = enc.abs_upper(64);
                if lo > Rat::one() {
                    // Outer root: the h_{i,j} must be evaluable on the box
                    // (denominators bounded away from zero).
                    let ok = fractions
                        .get(idx)
                        .map(|hs| {
                            hs.iter()
                                .all(|h| h.is_zero() || ratfn_abs_upper(h, &enc).is_some())
                        })
                        .unwrap_or(true);
                    if !ok {
                        tgt = &tgt * rat_pq(1, 1_000_000);
                        continue 'refine;
                    }
                    kept.push(enc);
                } else if hi < Rat::one() {
                    // Inner root, ignored.
                } else {
                    // Straddles the unit circle: refine further.
                    tgt = &tgt * rat_pq(1, 1_000_000);
                    continue 'refine;
                }
            }
            for enc in kept {
                out.push(OuterRoot {
                    factor: idx + 1,
                    enclosure: enc,
                });
            }
            settled = true;
            break;
        }
        if !settled {
            return Err(Error::Refinement(format!(
                "cannot separate the roots of {} from the unit circle",
                f.to_string_var("z")
            )));
        }
    }
    let weighted: usize = out.iter().map(|r| r.factor).sum();
    if weighted != expected_outer {
        return Err(Error::Refinement(format!(
            "expected {expected_outer} outer roots with multiplicity, certified {weighted}"
        )));
    }
    Ok(out)
}

/// Tightens existing enclosures to `radius < target`, intersecting with
/// the old boxes so that refined enclosures stay nested.
fn refine_outer_roots(
    old: &[OuterRoot],
    factors: &[QPoly],
    fractions: &[Vec<RatFn>],
    expected_outer: usize,
    target: &Rat,
) -> Result<Vec<OuterRoot>, Error> {
    let fresh = certify_outer_roots(factors, fractions, expected_outer, target)?;
    let mut out = Vec::with_capacity(old.len());
    for prev in old {
        let matched = fresh
            .iter()
            .find(|n| {
                n.factor == prev.factor
                    && n.enclosure.re.lo <= prev.enclosure.re.hi
                    && prev.enclosure.re.lo <= n.enclosure.re.hi
                    && n.enclosure.im.lo <= prev.enclosure.im.hi
                    && prev.enclosure.im.lo <= n.enclosure.im.hi
            })
            .ok_or_else(|| {
                Error::Refinement("lost track of a root while refining".to_string())
            })?;
        let re = RInt::new(
            matched.enclosure.re.lo.clone().max(prev.enclosure.re.lo.clone()),
            matched.enclosure.re.hi.clone().min(prev.enclosure.re.hi.clone()),
        );
        let im = RInt::new(
            matched.enclosure.im.lo.clone().max(prev.enclosure.im.lo.clone()),
            matched.enclosure.im.hi.clone().min(prev.enclosure.im.hi.clone()),
        );
        out.push(OuterRoot {
            factor: prev.factor,
            enclosure: CBox::new(re, im),
        });
    }
    Ok(out)
}

/// Partial fraction decomposition of `a/b` over certified root enclosures.
pub fn partial_fractions(a: &QPoly, b: &QPoly) -> Result<PartialFractionForm, Error> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !check_nonvanishing(b) {
        return Err(Error::PoleInDomain(format!(
            "denominator {}",
            b.to_string_var("x")
        )));
    }
    let g = a.gcd(b);
    let (a, b) = if g.degree() > 0 {
        (a.div_exact(&g)?, b.div_exact(&g)?)
    } else {
        (a.clone(), b.clone())
    };
    let (qpart, r) = a.divrem(&b)?;
    let (factors, content, fractions, beta) = proper_fraction_parts(&r, &b)?;
    let roots = if fractions.is_empty() {
        Vec::new()
    } else {
        certify_outer_roots(&factors, &fractions, b.degree(), &default_root_target())?
    };
    Ok(PartialFractionForm {
        poly_part: ChebPoly::from_monomial(&qpart),
        factors,
        content,
        fractions,
        roots,
        denominator: b,
        beta,
    })
}

impl PartialFractionForm {
    /// Symmetric Chebyshev coefficient `y_n` as `(midpoint, radius)`.
    pub fn cheb_coeff(&self, n: usize) -> (Rat, Rat) {
        let qsym = self.poly_part.to_symmetric();
        let mut acc = CBox::point(
            qsym.get(n).cloned().unwrap_or_else(Rat::zero),
            Rat::zero(),
        );
        for root in &self.roots {
            let i = root.factor;
            let inv = CBox::point(Rat::one(), Rat::zero())
                .div(&root.enclosure)
                .expect("outer root enclosure excludes zero");
            for j in 1..=i {
                let h = &self.fractions[i - 1][j - 1];
                if h.is_zero() {
                    continue;
                }
                let hval = eval_ratfn_box_checked(h, &root.enclosure);
                let c = crate::rat::binomial((n + j - 1) as u64, (j - 1) as u64);
                let zpow = inv.powi((n + j) as u64);
                let term = hval.mul(&zpow);
                acc = acc.add(&CBox {
                    re: term.re.scale(&c),
                    im: term.im.scale(&c),
                });
            }
        }
        (acc.re.mid(), acc.re.radius())
    }

    /// Rigorous bound on the sup norm of the full (two-sided) tail
    /// `sum_{|n| > d} y_n T_n`; requires `d >= deg poly_part`.
    pub fn tail_bound(&self, d: usize) -> Result<Rat, Error> {
        if !self.poly_part.is_zero() && d < self.poly_part.degree() {
            return Err(Error::Input(format!(
                "tail bound needs d >= {} (degree of the polynomial part)",
                self.poly_part.degree()
            )));
        }
        let mut total = Rat::zero();
        for root in &self.roots {
            let i = root.factor;
            let zlo = root.enclosure.abs_lower(64);
            if zlo <= Rat::one() {
                return Err(Error::Internal(
                    "outer root enclosure touches the unit circle".to_string(),
                ));
            }
            let zlo_m1 = &zlo - Rat::one();
            for j in 1..=i {
                let h = &self.fractions[i - 1][j - 1];
                if h.is_zero() {
                    continue;
                }
                let habs = eval_ratfn_box_checked(h, &root.enclosure).abs_upper(64);
                // |h| (d+2)^(j-1) |zeta|^(-d-1) / (|zeta| - 1)^j
                let mut term = habs;
                term *= crate::rat::rat_powi(&rat_i((d + 2) as i64), (j - 1) as i64);
                term *= crate::rat::rat_powi(&zlo, -(d as i64) - 1);
                term /= crate::rat::rat_powi(&zlo_m1, j as i64);
                total += term;
            }
        }
        Ok(total * rat_i(2))
    }
}

/// Box evaluation of a rational function whose evaluability on root boxes
/// was established during certification.
fn eval_ratfn_box_checked(f: &RatFn, z: &CBox) -> CBox {
    let num = eval_poly_box(f.num(), z);
    let den = eval_poly_box(f.den(), z);
    num.div(&den)
        .expect("fraction denominators verified during root certification")
}

fn ratfn_abs_upper(f: &RatFn, cell: &CBox) -> Option<Rat> {
    let num = eval_poly_box(f.num(), cell);
    let den = eval_poly_box(f.den(), cell);
    let den_lo = den.abs_lower(32);
    if !den_lo.is_positive() {
        return None;
    }
    Some(num.abs_upper(32) / den_lo)
}

/// Certified parameters of one expansion run.
#[derive(Clone, Debug)]
pub struct ExpandReport {
    pub output_degree: usize,
    pub rho_minus: Rat,
    pub rho_plus: Rat,
    pub derivative_bound: Rat,
    pub root_accuracy: Rat,
}

/// Chebyshev expansion of `f * a/b` with `sup |result - f a/b| <= eps`
/// on `[-1, 1]`.
pub fn expand_product(
    a: &QPoly,
    b: &QPoly,
    f: &ChebPoly,
    eps: &Rat,
) -> Result<ChebPoly, Error> {
    Ok(expand_product_with_report(a, b, f, eps)?.0)
}

/// [`expand_product`] plus the certified parameters of the run.
///
/// Error budget: coefficient evaluation at rational root approximations of
/// accuracy `eps'` contributes at most `eps/2` (through the derivative
/// bound `M`), the discarded tail at most `eps/4`, and dyadic rounding of
/// the output coefficients at most `eps/4`.
pub fn expand_product_with_report(
    a: &QPoly,
    b: &QPoly,
    f: &ChebPoly,
    eps: &Rat,
) -> Result<(ChebPoly, ExpandReport), Error> {
    if !eps.is_positive() {
        return Err(Error::Input("tolerance must be positive".to_string()));
    }
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !check_nonvanishing(b) {
        return Err(Error::PoleInDomain(format!(
            "denominator {}",
            b.to_string_var("x")
        )));
    }
    let g = a.gcd(b);
    let (a, b) = if g.degree() > 0 {
        (a.div_exact(&g)?, b.div_exact(&g)?)
    } else {
        (a.clone(), b.clone())
    };
    // Chebyshev-basis product and Euclidean division.
    let a_cheb = ChebPoly::from_monomial(&a);
    let b_cheb = ChebPoly::from_monomial(&b);
    let gprod = a_cheb.mul(f);
    let (qpart, rem_cheb) = gprod.divrem(&b_cheb)?;
    let rem = rem_cheb.to_monomial();

    if rem.is_zero() {
        // Pure polynomial: exact output.
        let report = ExpandReport {
            output_degree: qpart.degree(),
            rho_minus: Rat::zero(),
            rho_plus: Rat::zero(),
            derivative_bound: Rat::zero(),
            root_accuracy: Rat::zero(),
        };
        return Ok((qpart, report));
    }

    let (factors, content, fractions, beta) = proper_fraction_parts(&rem, &b)?;
    let roots =
        certify_outer_roots(&factors, &fractions, b.degree(), &default_root_target())?;

    let mut pf = PartialFractionForm {
        poly_part: qpart.clone(),
        factors,
        content,
        fractions,
        roots,
        denominator: b.clone(),
        beta,
    };

    // Output degree: two-sided tail at most eps/4.
    let tail_target = eps / rat_i(4);
    let mut d_out = if pf.poly_part.is_zero() {
        0
    } else {
        pf.poly_part.degree()
    };
    let mut guard = 0;
    while pf.tail_bound(d_out)? > tail_target {
        d_out += 1;
        guard += 1;
        if guard > 2_000_000 {
            return Err(Error::Internal("tail bound does not decay".to_string()));
        }
    }

    // Certified annulus containing the outer roots.
    let rho_minus = pf
        .roots
        .iter()
        .map(|r| r.enclosure.abs_lower(64))
        .min()
        .expect("outer roots exist");
    let rho_plus = pf
        .roots
        .iter()
        .map(|r| r.enclosure.abs_upper(64))
        .max()
        .expect("outer roots exist");
    if rho_minus <= Rat::one() {
        return Err(Error::Internal("annulus not separated from 1".to_string()));
    }

    // M >= sum over roots of j deg(beta_i) sup(|h'| + |h/z|) rho_minus^-j.
    let m_bound = derivative_sup_bound(&pf, &rho_minus, &rho_plus)?;

    // Root accuracy: eps' = min(rho- - 1, M^-1 (1 - rho-^-1)^(D+1) eps/4).
    let d_den = b.degree();
    let one_minus = Rat::one() - rho_minus.clone().recip();
    let eps_prime_raw =
        crate::rat::rat_powi(&one_minus, (d_den + 1) as i64) * eps / (rat_i(4) * &m_bound);
    let eps_prime = eps_prime_raw.min(&rho_minus - Rat::one());
    if !eps_prime.is_positive() {
        return Err(Error::Internal("degenerate root accuracy".to_string()));
    }

    // Refine enclosures to radius < eps', nested in the coarse boxes that
    // the derivative bound was certified over.
    if pf.roots.iter().any(|r| r.enclosure.radius() >= eps_prime) {
        pf.roots = refine_outer_roots(
            &pf.roots,
            &pf.factors,
            &pf.fractions,
            b.degree(),
            &eps_prime,
        )?;
    }

    // Exact evaluation at the rational centers. Real roots have exactly
    // real centers and complex enclosures come in exact conjugate pairs,
    // so the imaginary parts cancel identically; the real part is kept.
    let qsym = pf.poly_part.to_symmetric();
    let round_budget = eps / (rat_i(4) * rat_i(2 * d_out as i64 + 2));
    let round_bits = bits_for(&round_budget) + 2;
    let centers: Vec<(usize, QComplex)> = pf
        .roots
        .iter()
        .map(|r| {
            let (re, im) = r.enclosure.center();
            (r.factor, QComplex::new(re, im))
        })
        .collect();
    let h_at_centers: Vec<Vec<QComplex>> = centers
        .iter()
        .map(|(i, z)| {
            (1..=*i)
                .map(|j| {
                    let h = &pf.fractions[i - 1][j - 1];
                    if h.is_zero() {
                        QComplex::zero()
                    } else {
                        QComplex::eval_ratfn(h, z)
                    }
                })
                .collect()
        })
        .collect();
    let inv_centers: Vec<QComplex> = centers.iter().map(|(_, z)| z.recip()).collect();
    let mut running: Vec<QComplex> = inv_centers.clone(); // zeta^-(n+1) at n = 0
    let mut sym = Vec::with_capacity(d_out + 1);
    for n in 0..=d_out {
        let mut val = qsym.get(n).cloned().unwrap_or_else(Rat::zero);
        for (pos, (factor, _)) in centers.iter().enumerate() {
            let i = *factor;
            let mut zp = running[pos].clone(); // zeta^-(n+1)
            for j in 1..=i {
                let hval = &h_at_centers[pos][j - 1];
                let c = crate::rat::binomial((n + j - 1) as u64, (j - 1) as u64);
                val += hval.mul(&zp).scale(&c).re;
                if j < i {
                    zp = zp.mul(&inv_centers[pos]);
                }
            }
            running[pos] = running[pos].mul(&inv_centers[pos]);
        }
        sym.push(round_dyadic(&val, round_bits));
    }

    let out = ChebPoly::from_symmetric(&sym);
    let report = ExpandReport {
        output_degree: d_out,
        rho_minus,
        rho_plus,
        derivative_bound: m_bound,
        root_accuracy: eps_prime,
    };
    Ok((out, report))
}

/// Power-of-two exponent with `2^-bits <= x`.
fn bits_for(x: &Rat) -> u32 {
    crate::interval::dyadic_bits_for(x)
}

/// Upper bound for `sum j deg(beta_i) sup(|h'_ij| + |z^-1 h_ij|)
/// rho_minus^-j` over the outer roots.
///
/// The sup is attempted over the whole annulus by grid subdivision; when a
/// denominator zero inside the annulus prevents that (possible, since the
/// `h` denominators vanish at critical points of the factors), the sup
/// domain falls back to the certified root boxes themselves, which contain
/// every evaluation segment used by the error argument.
fn derivative_sup_bound(
    pf: &PartialFractionForm,
    rho_minus: &Rat,
    rho_plus: &Rat,
) -> Result<Rat, Error> {
    let mut total = Rat::zero();
    for (idx, hs) in pf.fractions.iter().enumerate() {
        let i = idx + 1;
        let roots: Vec<&OuterRoot> = pf.roots.iter().filter(|r| r.factor == i).collect();
        if roots.is_empty() {
            continue;
        }
        let deg_f = pf.factors[idx].degree() as i64;
        for (jm1, h) in hs.iter().enumerate() {
            let j = jm1 + 1;
            if h.is_zero() {
                continue;
            }
            let dh = h.derivative();
            // The error argument consumes the sup over the segments
            // between each root and its rational approximation, and those
            // lie inside the certified enclosures; bounding over the boxes
            // is both rigorous and much cheaper than the full annulus.
            let boxes_sup = || -> Option<Rat> {
                let mut m = Rat::zero();
                for r in &roots {
                    m = m.max(sup_by_subdivision(h, &dh, &r.enclosure)?);
                }
                Some(m)
            };
            let sup = boxes_sup()
                .or_else(|| annulus_sup(h, &dh, rho_minus, rho_plus))
                .ok_or_else(|| {
                    Error::Refinement(
                        "cannot bound the fraction derivatives near a root".to_string(),
                    )
                })?;
            // One contribution per outer root of the factor.
            total += sup
                * rat_i(roots.len() as i64)
                * rat_i(j as i64)
                * rat_i(deg_f)
                * crate::rat::rat_powi(rho_minus, -(j as i64));
        }
    }
    // M only enters through 1/M; any positive value is safe.
    if total.is_zero() {
        total = Rat::one();
    }
    Ok(total)
}

/// Sup of `|h'| + |z^-1 h|` over the annulus by subdivision of the
/// enclosing square; `None` when the work cap is exceeded (e.g. when the
/// denominator vanishes inside the annulus).
fn annulus_sup(h: &RatFn, dh: &RatFn, rho_minus: &Rat, rho_plus: &Rat) -> Option<Rat> {
    let r = rho_plus.clone();
    let mut cells = vec![CBox::new(
        RInt::new(-r.clone(), r.clone()),
        RInt::new(-r.clone(), r.clone()),
    )];
    let min_radius = (rho_plus - rho_minus).max(Rat::one()) * rat_pq(1, 1024);
    let mut sup = Rat::zero();
    let mut work = 0usize;
    while let Some(cell) = cells.pop() {
        work += 1;
        if work > 4_000 {
            return None;
        }
        // Discard cells that cannot meet the annulus.
        if &cell.abs_upper(32) < rho_minus || &cell.abs_lower(32) > rho_plus {
            continue;
        }
        match cell_value_bound(h, dh, &cell) {
            Some(v) => {
                if v > sup {
                    sup = v;
                }
            }
            None => {
                if cell.radius() < min_radius {
                    return None;
                }
                subdivide(&cell, &mut cells);
            }
        }
    }
    Some(sup)
}

fn sup_by_subdivision(h: &RatFn, dh: &RatFn, cell: &CBox) -> Option<Rat> {
    let mut cells = vec![cell.clone()];
    let mut sup = Rat::zero();
    let mut work = 0usize;
    while let Some(c) = cells.pop() {
        work += 1;
        if work > 4_000 {
            return None;
        }
        match cell_value_bound(h, dh, &c) {
            Some(v) => {
                if v > sup {
                    sup = v;
                }
            }
            None => subdivide(&c, &mut cells),
        }
    }
    Some(sup)
}

fn subdivide(cell: &CBox, out: &mut Vec<CBox>) {
    let rm = cell.re.mid();
    let im = cell.im.mid();
    for (rlo, rhi) in [
        (cell.re.lo.clone(), rm.clone()),
        (rm.clone(), cell.re.hi.clone()),
    ] {
        for (ilo, ihi) in [
            (cell.im.lo.clone(), im.clone()),
            (im.clone(), cell.im.hi.clone()),
        ] {
            out.push(CBox::new(
                RInt::new(rlo.clone(), rhi.clone()),
                RInt::new(ilo, ihi),
            ));
        }
    }
}

/// Upper bound of `|h'| + |z^-1 h|` over one cell; `None` when a
/// denominator interval contains zero.
fn cell_value_bound(h: &RatFn, dh: &RatFn, cell: &CBox) -> Option<Rat> {
    let habs = ratfn_abs_upper(h, cell)?;
    let dabs = ratfn_abs_upper(dh, cell)?;
    let zlo = cell.abs_lower(32);
    if zlo.is_zero() {
        return None;
    }
    Some(dabs + habs / zlo)
}
