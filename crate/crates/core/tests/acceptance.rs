//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities (run with `--nocapture` to see them).

use std::time::Instant;

use dfcheb::bigfloat::{FixedCtx, Fx};
use dfcheb::chebpoly::ChebPoly;
use dfcheb::chebrec::{chebyshev_recurrence, recurrence_pair, singularities};
use dfcheb::asymptotics::newton_polygon;
use dfcheb::oreops::{DiffOp, IvpProblem};
use dfcheb::qpoly::QPoly;
use dfcheb::rat::{pow10, rat_i, rat_pq, rat_to_f64, Rat};
use dfcheb::ratcheb::{expand_product, partial_fractions};
use dfcheb::solver::approximate;
use dfcheb::validator::validate;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn op(coeffs: &[&[i64]]) -> DiffOp {
    DiffOp::new(coeffs.iter().map(|c| QPoly::from_i64(c)).collect()).unwrap()
}

/// Clenshaw evaluation at many fixed-point nodes, converting once.
fn eval_many(ctx: &FixedCtx, p: &ChebPoly, xs: &[Fx]) -> Vec<Fx> {
    let coeffs: Vec<Fx> = p.coeffs().iter().map(|c| ctx.from_rat(c)).collect();
    xs.iter()
        .map(|x| {
            if coeffs.is_empty() {
                return ctx.zero();
            }
            let two_x = ctx.add(x, x);
            let mut b1 = ctx.zero();
            let mut b2 = ctx.zero();
            for c in coeffs.iter().skip(1).rev() {
                let b0 = ctx.sub(&ctx.add(c, &ctx.mul(&two_x, &b1)), &b2);
                b2 = std::mem::replace(&mut b1, b0);
            }
            ctx.sub(&ctx.add(&coeffs[0], &ctx.mul(x, &b1)), &b2)
        })
        .collect()
}

fn uniform_nodes(count: usize) -> Vec<Rat> {
    (0..count)
        .map(|k| Rat::new((2 * k as i64 - (count as i64 - 1)).into(), (count as i64 - 1).into()))
        .collect()
}

/// The three reference problems: operator, initial values, closed form.
struct TableProblem {
    ivp: IvpProblem,
    name: &'static str,
    table_error_d30: f64,
    table_eps: i64,
    reference: fn(&FixedCtx, &Rat) -> Fx,
}

fn table_problems() -> Vec<TableProblem> {
    vec![
        TableProblem {
            ivp: IvpProblem::with_initial_values(
                op(&[&[-15, -1], &[32, 2]]),
                vec![rat_pq(1, 4)],
            )
            .unwrap(),
            name: "2(x+16)y' - (x+15)y",
            table_error_d30: 3.4e-52,
            table_eps: -104,
            reference: |ctx, x| {
                let num = ctx.exp(&ctx.from_rat(&(x / rat_i(2))));
                let den = ctx.sqrt(&ctx.from_rat(&(x + rat_i(16))));
                ctx.div(&num, &den)
            },
        },
        TableProblem {
            ivp: IvpProblem::with_initial_values(
                op(&[&[-1], &[], &[], &[], &[1]]),
                vec![rat_pq(3, 2), rat_pq(-1, 2), rat_pq(-3, 2), rat_pq(1, 2)],
            )
            .unwrap(),
            name: "y'''' - y",
            table_error_d30: 5.9e-44,
            table_eps: -88,
            reference: |ctx, x| {
                let xf = ctx.from_rat(x);
                let c = ctx.cos(&xf);
                let s = ctx.sin(&xf);
                let three_c = ctx.mul(&ctx.from_i64(3), &c);
                ctx.div_u32(&ctx.sub(&three_c, &s), 2)
            },
        },
        TableProblem {
            ivp: IvpProblem::with_initial_values(
                op(&[&[5, 0, 2], &[0, 8], &[1, 0, 2]]),
                vec![rat_i(1), rat_i(0)],
            )
            .unwrap(),
            name: "(2x^2+1)y'' + 8xy' + (2x^2+5)y",
            table_error_d30: 1.6e-9,
            table_eps: -18,
            reference: |ctx, x| {
                let xf = ctx.from_rat(x);
                let c = ctx.cos(&xf);
                let den = ctx.from_rat(&(rat_i(2) * x * x + rat_i(1)));
                ctx.div(&c, &den)
            },
        },
    ]
}

fn sampled_sup_error(ctx: &FixedCtx, p: &ChebPoly, reference: fn(&FixedCtx, &Rat) -> Fx, nodes: &[Rat]) -> f64 {
    let xs: Vec<Fx> = nodes.iter().map(|x| ctx.from_rat(x)).collect();
    let values = eval_many(ctx, p, &xs);
    let mut sup = 0.0f64;
    for (x, v) in nodes.iter().zip(&values) {
        let r = reference(ctx, x);
        let err = ctx.to_f64(&ctx.abs(&ctx.sub(v, &r)));
        if err > sup {
            sup = err;
        }
    }
    sup
}

// Criterion 1: the recurrences of y' = y and y' = xy match the reference
// relations exactly after normalization.
#[test]
fn criterion_1_recurrence_regression() {
    let t0 = Instant::now();
    let p1 = chebyshev_recurrence(&op(&[&[-1], &[1]])).unwrap();
    assert_eq!(p1.half_order(), 1);
    assert_eq!(p1.coeff(-1), QPoly::from_i64(&[-1]));
    assert_eq!(p1.coeff(0), QPoly::from_i64(&[0, 2]));
    assert_eq!(p1.coeff(1), QPoly::one());

    let p2 = chebyshev_recurrence(&op(&[&[0, -1], &[1]])).unwrap();
    assert_eq!(p2.half_order(), 2);
    // Proportional (here: equal) to -c_{n-2} + 4n c_n + c_{n+2}.
    assert_eq!(p2.coeff(-2), QPoly::from_i64(&[-1]));
    assert!(p2.coeff(-1).is_zero());
    assert_eq!(p2.coeff(0), QPoly::from_i64(&[0, 4]));
    assert!(p2.coeff(1).is_zero());
    assert_eq!(p2.coeff(2), QPoly::one());
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0);
    println!("acceptance criterion 1: PASS (recurrence regression, {elapsed:?})");
}

fn random_operator(rng: &mut StdRng, max_r: usize, max_deg: usize) -> DiffOp {
    let r = rng.gen_range(1..=max_r);
    let coeffs: Vec<QPoly> = (0..=r)
        .map(|i| {
            let d = rng.gen_range(0..=max_deg);
            let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-6..=6)).collect();
            if i == r && c.iter().all(|&x| x == 0) {
                c[0] = 1;
            }
            QPoly::from_i64(&c)
        })
        .collect();
    DiffOp::new(coeffs).unwrap()
}

// Criterion 2: P (y_n) = Q (v_n) with v = L y, exactly, for 100 random
// pairs, at all |n| <= 15.
#[test]
fn criterion_2_recurrence_oracle_equivalence() {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(20260809);
    for case in 0..100 {
        let l = random_operator(&mut rng, 3, 6);
        let (p, q) = recurrence_pair(&l).unwrap();
        let deg_y = rng.gen_range(0..=6usize);
        let y = QPoly::from_coeffs(
            (0..=deg_y)
                .map(|_| rat_pq(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                .collect(),
        );
        let v = l.apply(&y);
        let y_sym = ChebPoly::from_monomial(&y).to_symmetric();
        let v_sym = ChebPoly::from_monomial(&v).to_symmetric();
        for n in -15..=15i64 {
            assert_eq!(
                p.apply_symmetric(&y_sym, n),
                q.apply_symmetric(&v_sym, n),
                "case {case}, n = {n}"
            );
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("acceptance criterion 2: PASS (100 exact operator identities, {elapsed:?})");
}

// Criterion 3: antisymmetry, vanishing of b_s on [1, r-1], vanishing of
// the symmetric image below the order, and polygon symmetry, on the same
// corpus.
#[test]
fn criterion_3_structure_invariants() {
    let mut rng = StdRng::seed_from_u64(20260809);
    for case in 0..100 {
        let l = random_operator(&mut rng, 3, 6);
        let rec = chebyshev_recurrence(&l).unwrap();
        let s = rec.half_order();
        let r = l.order() as i64;

        for k in 0..=s {
            let flipped = rec.coeff(-k).compose_affine(&rat_i(-1), &Rat::zero());
            assert_eq!(flipped, rec.coeff(k).neg(), "antisymmetry, case {case}");
        }
        let bs = rec.coeff(s);
        for n in 1..r {
            assert!(bs.eval_i64(n).is_zero(), "b_s({n}) != 0, case {case}");
        }
        let u: Vec<Rat> = (0..40).map(|_| rat_i(rng.gen_range(-9..=9))).collect();
        for n in (-r + 1)..r {
            assert_eq!(rec.apply_symmetric(&u, n), Rat::zero(), "case {case}");
        }

        let polygon = newton_polygon(&rec);
        assert_eq!(polygon.total_span(), 2 * s, "span, case {case}");
        let mut slopes: Vec<Rat> = polygon.edges.iter().map(|e| e.slope.clone()).collect();
        let mut negated: Vec<Rat> = slopes.iter().map(|x| -x.clone()).collect();
        slopes.sort();
        negated.sort();
        assert_eq!(slopes, negated, "slope symmetry, case {case}");
        let mods: Vec<f64> = polygon
            .growth_classes()
            .iter()
            .map(|g| g.alpha_abs)
            .collect();
        for m in &mods {
            if *m <= 0.0 {
                continue;
            }
            let inv = 1.0 / m;
            assert!(
                mods.iter()
                    .any(|w| (w - inv).abs() <= 1e-9 * inv.max(1.0)),
                "moduli not inversion-closed, case {case}: {mods:?}"
            );
        }
    }
    println!("acceptance criterion 3: PASS (structure invariants on 100 operators)");
}

// Criterion 4: degree-30 approximations of the three reference problems
// reproduce the published sup errors within a factor of 10, sampled at
// 2001 nodes against 220-digit reference values.
#[test]
fn criterion_4_reference_error_levels() {
    let t0 = Instant::now();
    let ctx = FixedCtx::new(220);
    let nodes = uniform_nodes(2001);
    for prob in table_problems() {
        let rec = chebyshev_recurrence(&prob.ivp.op).unwrap();
        let n_start = 30 + rec.half_order();
        let sol = approximate(&prob.ivp, 30, Some(n_start), 5).unwrap();
        let sup = sampled_sup_error(&ctx, &sol.poly, prob.reference, &nodes);
        assert!(
            sup <= prob.table_error_d30 * 10.0 && sup >= prob.table_error_d30 / 10.0,
            "{}: sampled {sup:e} vs reference {:e}",
            prob.name,
            prob.table_error_d30
        );
        println!(
            "  {}: sampled sup error {sup:.2e} (reference {:.1e})",
            prob.name, prob.table_error_d30
        );
    }
    println!(
        "acceptance criterion 4: PASS (degree-30 error levels, {:?})",
        t0.elapsed()
    );
}

// Criterion 5: validated enclosures at degree 30 with the reference
// tolerances: b <= sampled error <= B and B within 10^3 of the truth,
// each within the two-minute budget.
#[test]
fn criterion_5_validated_enclosures() {
    let ctx = FixedCtx::new(220);
    let nodes = uniform_nodes(2001);
    for prob in table_problems() {
        let t0 = Instant::now();
        let rec = chebyshev_recurrence(&prob.ivp.op).unwrap();
        let n_start = 30 + rec.half_order();
        let sol = approximate(&prob.ivp, 30, Some(n_start), 5).unwrap();
        let report = validate(&prob.ivp, &sol.poly, &pow10(prob.table_eps)).unwrap();
        let elapsed = t0.elapsed();
        let sup = sampled_sup_error(&ctx, &sol.poly, prob.reference, &nodes);
        let lower = rat_to_f64(&report.lower);
        let upper = rat_to_f64(&report.upper);
        assert!(
            lower <= sup && sup <= upper,
            "{}: enclosure [{lower:e}, {upper:e}] misses {sup:e}",
            prob.name
        );
        assert!(
            upper / sup <= 1e3,
            "{}: looseness {}",
            prob.name,
            upper / sup
        );
        assert!(
            elapsed.as_secs_f64() <= 120.0,
            "{}: took {elapsed:?}",
            prob.name
        );
        println!(
            "  {}: [{lower:.2e}, {upper:.2e}] contains {sup:.2e}, i = {}, {elapsed:?}",
            prob.name, report.iterations
        );
    }
    println!("acceptance criterion 5: PASS (validated enclosures at reference tolerances)");
}

// Criterion 6: polynomial solutions come out bit-exact.
#[test]
fn criterion_6_exact_polynomial_solutions() {
    let ivp = IvpProblem::with_initial_values(
        op(&[&[], &[], &[1]]),
        vec![rat_i(0), rat_i(1)],
    )
    .unwrap();
    let out = approximate(&ivp, 5, None, 5).unwrap();
    assert_eq!(out.poly, ChebPoly::basis(1));

    let ivp = IvpProblem::with_initial_values(
        op(&[&[], &[], &[], &[1]]),
        vec![rat_i(-1), rat_i(0), rat_i(4)],
    )
    .unwrap();
    let out = approximate(&ivp, 6, None, 5).unwrap();
    assert_eq!(out.poly, ChebPoly::basis(2));
    println!("acceptance criterion 6: PASS (T_1 and T_2 recovered exactly)");
}

/// I_n(1) to accuracy far below 1e-30 (exact rational partial sum).
fn bessel_i_one(n: usize) -> Rat {
    let mut sum = Rat::zero();
    let half = rat_pq(1, 2);
    for k in 0..25u64 {
        let p = dfcheb::rat::rat_powi(&half, n as i64 + 2 * k as i64);
        let den = Rat::from_integer(
            dfcheb::rat::factorial(k) * dfcheb::rat::factorial(n as u64 + k),
        );
        sum += p / den;
    }
    sum
}

// Criterion 7: the exponential's coefficients match the Bessel values.
#[test]
fn criterion_7_exponential_coefficients() {
    let ivp = IvpProblem::with_initial_values(op(&[&[-1], &[1]]), vec![rat_i(1)]).unwrap();
    let out = approximate(&ivp, 15, Some(30), 5).unwrap();
    let tol = pow10(-12);
    assert!((out.poly.coeff(0) - bessel_i_one(0)).abs() < tol);
    for n in 1..=12 {
        let expect = bessel_i_one(n) * rat_i(2);
        assert!((out.poly.coeff(n) - expect).abs() < tol, "n = {n}");
    }
    println!("acceptance criterion 7: PASS (exp coefficients match the Bessel oracle)");
}

fn random_rational_no_poles(rng: &mut StdRng) -> (QPoly, QPoly) {
    let da = rng.gen_range(0..=4usize);
    let a = QPoly::from_coeffs((0..=da).map(|_| rat_i(rng.gen_range(-6..=6))).collect());
    let a = if a.is_zero() { QPoly::one() } else { a };
    let mut b = QPoly::constant(rat_i(rng.gen_range(1..=3)));
    for _ in 0..rng.gen_range(1..=2usize) {
        if rng.gen_bool(0.5) {
            let c = rat_pq(
                rng.gen_range(5..=12) * if rng.gen_bool(0.5) { 1 } else { -1 },
                4,
            );
            b = b.mul(&QPoly::from_coeffs(vec![-c, Rat::one()]));
        } else {
            let p = rat_i(rng.gen_range(-1..=1));
            let q = rat_i(rng.gen_range(1..=4)) + &p * &p;
            b = b.mul(&QPoly::from_coeffs(vec![q, p, Rat::one()]));
        }
    }
    (a, b)
}

// Criterion 8: certified rational expansions never exceed the requested
// tolerance on a 2001-node sample, and the tail bound dominates sampled
// tails, over 50 random functions and three tolerances.
#[test]
fn criterion_8_rational_expansion_soundness() {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(88);
    let ctx = FixedCtx::new(50);
    let nodes = uniform_nodes(2001);
    let xs: Vec<Fx> = nodes.iter().map(|x| ctx.from_rat(x)).collect();
    let eps_list = [pow10(-5), pow10(-10), pow10(-20)];
    let mut worst_margin = f64::INFINITY;
    for case in 0..50 {
        let (a, b) = random_rational_no_poles(&mut rng);
        let df = rng.gen_range(0..=6usize);
        let f = ChebPoly::from_coeffs((0..=df).map(|_| rat_i(rng.gen_range(-4..=4))).collect());
        // Reference values of f * a / b at all nodes.
        let fvals = eval_many(&ctx, &f, &xs);
        let reference: Vec<Fx> = nodes
            .iter()
            .zip(&fvals)
            .map(|(x, fv)| {
                let av = ctx.from_rat(&a.eval(x));
                let bv = ctx.from_rat(&b.eval(x));
                ctx.div(&ctx.mul(fv, &av), &bv)
            })
            .collect();
        for eps in &eps_list {
            let out = expand_product(&a, &b, &f, eps).unwrap();
            let vals = eval_many(&ctx, &out, &xs);
            let mut sup = 0.0f64;
            for (v, r) in vals.iter().zip(&reference) {
                let err = ctx.to_f64(&ctx.abs(&ctx.sub(v, r)));
                if err > sup {
                    sup = err;
                }
            }
            let eps_f = rat_to_f64(eps);
            assert!(
                sup <= eps_f * 1.000001,
                "case {case}: sampled {sup:e} > eps {eps_f:e}"
            );
            worst_margin = worst_margin.min(eps_f / sup.max(1e-300));
        }
        // Tail bound domination: sampled tail of the partial fraction
        // expansion (reference minus truncation of a tight expansion).
        let pf = partial_fractions(&a, &b).unwrap();
        let tight = expand_product(&a, &b, &ChebPoly::one(), &pow10(-35)).unwrap();
        let d = if pf.poly_part.is_zero() {
            rng.gen_range(2..=12usize)
        } else {
            pf.poly_part.degree() + rng.gen_range(0..=8usize)
        };
        let bound = rat_to_f64(&pf.tail_bound(d).unwrap());
        let truncated = tight.truncate(d);
        let tvals = eval_many(&ctx, &truncated, &xs);
        let mut tail_sup = 0.0f64;
        for ((x, tv), _fv) in nodes.iter().zip(&tvals).zip(&fvals) {
            let av = ctx.from_rat(&a.eval(x));
            let bv = ctx.from_rat(&b.eval(x));
            let yv = ctx.div(&av, &bv);
            let err = ctx.to_f64(&ctx.abs(&ctx.sub(tv, &yv)));
            if err > tail_sup {
                tail_sup = err;
            }
        }
        assert!(
            tail_sup <= bound + 1e-34,
            "case {case}: tail {tail_sup:e} exceeds bound {bound:e} at degree {d}"
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 8: PASS (150 sound expansions, worst margin {worst_margin:.2}, {elapsed:?})"
    );
}

/// A random problem whose solution has a closed form evaluable to high
/// precision: exponential, trigonometric, or rational-times-exponential.
struct KnownProblem {
    ivp: IvpProblem,
    eval: Box<dyn Fn(&FixedCtx, &Rat) -> Fx>,
}

fn random_known_problem(rng: &mut StdRng) -> KnownProblem {
    match rng.gen_range(0..4) {
        0 => {
            // y' = lambda y, y(0) = c: y = c e^(lambda x).
            let lam = rat_pq(rng.gen_range(-4..=4).max(1), 2);
            let c = rat_pq(rng.gen_range(1..=4), 2);
            let ivp = IvpProblem::with_initial_values(
                DiffOp::new(vec![QPoly::constant(-lam.clone()), QPoly::one()]).unwrap(),
                vec![c.clone()],
            )
            .unwrap();
            KnownProblem {
                ivp,
                eval: Box::new(move |ctx, x| {
                    ctx.mul(&ctx.from_rat(&c), &ctx.exp(&ctx.from_rat(&(&lam * x))))
                }),
            }
        }
        1 => {
            // y'' + w^2 y = 0, y(0) = c0, y'(0) = c1 w: c0 cos + c1 sin.
            let w = rat_i(rng.gen_range(1..=2));
            let c0 = rat_i(rng.gen_range(-3..=3));
            let c1 = rat_i(rng.gen_range(-3..=3));
            let ivp = IvpProblem::with_initial_values(
                DiffOp::new(vec![
                    QPoly::constant(&w * &w),
                    QPoly::zero(),
                    QPoly::one(),
                ])
                .unwrap(),
                vec![c0.clone(), &c1 * &w],
            )
            .unwrap();
            KnownProblem {
                ivp,
                eval: Box::new(move |ctx, x| {
                    let wx = ctx.from_rat(&(&w * x));
                    let c = ctx.mul(&ctx.from_rat(&c0), &ctx.cos(&wx));
                    let s = ctx.mul(&ctx.from_rat(&c1), &ctx.sin(&wx));
                    ctx.add(&c, &s)
                }),
            }
        }
        2 => {
            // (x+c) y' = (lambda (x+c) - 1) y, y(0) = v:
            // y = v c e^(lambda x) / (x + c), c > 1.
            let c = rat_pq(rng.gen_range(5..=10), 3);
            let lam = rat_pq(rng.gen_range(-2..=2), 2);
            let v = rat_i(rng.gen_range(1..=3));
            // a_1 = x + c, a_0 = -(lambda(x+c) - 1) = -lambda x - lambda c + 1.
            let a0 = QPoly::from_coeffs(vec![Rat::one() - &lam * &c, -lam.clone()]);
            let a1 = QPoly::from_coeffs(vec![c.clone(), Rat::one()]);
            let ivp = IvpProblem::with_initial_values(
                DiffOp::new(vec![a0, a1]).unwrap(),
                vec![v.clone()],
            )
            .unwrap();
            KnownProblem {
                ivp,
                eval: Box::new(move |ctx, x| {
                    let e = ctx.exp(&ctx.from_rat(&(&lam * x)));
                    let num = ctx.mul(&ctx.from_rat(&(&v * &c)), &e);
                    ctx.div(&num, &ctx.from_rat(&(x + &c)))
                }),
            }
        }
        _ => {
            // y'' = lambda^2 y with exponential data: y = v e^(lambda x).
            let lam = rat_pq(rng.gen_range(1..=3), 2);
            let v = rat_pq(rng.gen_range(1..=3), 2);
            let ivp = IvpProblem::with_initial_values(
                DiffOp::new(vec![
                    QPoly::constant(-(&lam * &lam)),
                    QPoly::zero(),
                    QPoly::one(),
                ])
                .unwrap(),
                vec![v.clone(), &v * &lam],
            )
            .unwrap();
            KnownProblem {
                ivp,
                eval: Box::new(move |ctx, x| {
                    ctx.mul(&ctx.from_rat(&v), &ctx.exp(&ctx.from_rat(&(&lam * x))))
                }),
            }
        }
    }
}

// Criterion 9: for 20 random problems with known solutions, the certified
// enclosure contains the dense-sampled true error.
#[test]
fn criterion_9_validator_soundness() {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(99);
    let ctx = FixedCtx::new(120);
    let nodes = uniform_nodes(501);
    for case in 0..20 {
        let prob = random_known_problem(&mut rng);
        let d = rng.gen_range(10..=40usize);
        let sol = approximate(&prob.ivp, d, None, 5).unwrap();
        let report = validate(&prob.ivp, &sol.poly, &pow10(-50)).unwrap();
        let xs: Vec<Fx> = nodes.iter().map(|x| ctx.from_rat(x)).collect();
        let vals = eval_many(&ctx, &sol.poly, &xs);
        let mut sup = 0.0f64;
        for (x, v) in nodes.iter().zip(&vals) {
            let r = (prob.eval)(&ctx, x);
            let err = ctx.to_f64(&ctx.abs(&ctx.sub(v, &r)));
            if err > sup {
                sup = err;
            }
        }
        let lower = rat_to_f64(&report.lower);
        let upper = rat_to_f64(&report.upper);
        assert!(
            lower <= sup * 1.0000001 && sup <= upper * 1.0000001,
            "case {case} (d = {d}): [{lower:e}, {upper:e}] misses {sup:e}"
        );
    }
    println!(
        "acceptance criterion 9: PASS (20 enclosures contain the sampled truth, {:?})",
        t0.elapsed()
    );
}

// Criterion 10: the backward recurrence scales subquadratically at desk
// sizes: successive doublings of N at most triple the wall time.
#[test]
fn criterion_10_complexity_smoke() {
    let ivp = IvpProblem::with_initial_values(
        op(&[&[-1], &[], &[], &[], &[1]]),
        vec![rat_pq(3, 2), rat_pq(-1, 2), rat_pq(-3, 2), rat_pq(1, 2)],
    )
    .unwrap();
    let time_at = |n: i64| {
        let mut best = f64::INFINITY;
        for _ in 0..2 {
            let t0 = Instant::now();
            let out = approximate(&ivp, 30, Some(n), 5).unwrap();
            assert_eq!(out.n_used, n);
            best = best.min(t0.elapsed().as_secs_f64());
        }
        best
    };
    // Warm up allocators and caches.
    let _ = time_at(100);
    let t200 = time_at(200);
    let t400 = time_at(400);
    let t800 = time_at(800);
    let r1 = t400 / t200;
    let r2 = t800 / t400;
    assert!(
        r1 <= 3.0 && r2 <= 3.0,
        "growth ratios {r1:.2}, {r2:.2} (times {t200:.4}s, {t400:.4}s, {t800:.4}s)"
    );
    println!(
        "acceptance criterion 10: PASS (times {t200:.3}s / {t400:.3}s / {t800:.3}s, ratios {r1:.2}, {r2:.2})"
    );
}
