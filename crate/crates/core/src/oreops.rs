//! Differential operators with polynomial coefficients, boundary and
//! initial conditions, left-normal-form rewriting through the commutation
//! rule `x d = d x - 1`, and the Volterra integral form of an initial
//! value problem.

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::qpoly::QPoly;
use crate::rat::{binomial, parse_rat, rat_i, Rat};
use crate::Error;

/// Linear differential operator `L = a_r d^r + ... + a_1 d + a_0` with
/// polynomial coefficients, stored low order first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp {
    coeffs: Vec<QPoly>,
}

impl DiffOp {
    /// Builds from `a_0..a_r`; trailing zero operators are trimmed so that
    /// the leading coefficient is not identically zero.
    pub fn new(mut coeffs: Vec<QPoly>) -> Result<Self, Error> {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Input(
                "differential operator must be nonzero".to_string(),
            ));
        }
        Ok(DiffOp { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> QPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(QPoly::zero)
    }

    pub fn leading(&self) -> &QPoly {
        self.coeffs.last().expect("nonzero operator")
    }

    /// Checks the nonsingularity requirement `a_r(x) != 0` on `[-1, 1]`.
    pub fn check(&self) -> Result<(), Error> {
        if !check_nonvanishing(self.leading()) {
            return Err(Error::PoleInDomain(format!(
                "leading coefficient {}",
                self.leading().to_string_var("x")
            )));
        }
        Ok(())
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, y: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        let mut dy = y.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                dy = dy.derivative();
            }
            if !a.is_zero() {
                acc = acc.add(&a.mul(&dy));
            }
        }
        acc
    }

    /// Maximum coefficient degree.
    pub fn max_coeff_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }
}

/// One term `weight * y^(order)(point)` of a boundary condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConditionTerm {
    pub weight: Rat,
    pub order: usize,
    pub point: Rat,
}

/// Linear boundary condition `sum_j weight_j y^(order_j)(point_j) = target`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryCondition {
    pub terms: Vec<ConditionTerm>,
    pub target: Rat,
}

impl BoundaryCondition {
    /// Pure initial condition `y^(order)(0) = value`.
    pub fn initial(order: usize, value: Rat) -> Self {
        BoundaryCondition {
            terms: vec![ConditionTerm {
                weight: Rat::one(),
                order,
                point: Rat::zero(),
            }],
            target: value,
        }
    }

    pub fn validate(&self, max_order: usize) -> Result<(), Error> {
        if self.terms.is_empty() {
            return Err(Error::Input("boundary condition without terms".to_string()));
        }
        for t in &self.terms {
            if t.order > max_order {
                return Err(Error::Input(format!(
                    "derivative order {} exceeds operator order {max_order}",
                    t.order
                )));
            }
            if t.point.abs() > Rat::one() {
                return Err(Error::Input(format!(
                    "condition point {} outside [-1, 1]",
                    crate::rat::rat_string(&t.point)
                )));
            }
        }
        Ok(())
    }
}

/// A differential operator together with `order` many conditions pinning
/// down one solution of `L y = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IvpProblem {
    pub op: DiffOp,
    pub conditions: Vec<BoundaryCondition>,
}

impl IvpProblem {
    pub fn new(op: DiffOp, conditions: Vec<BoundaryCondition>) -> Result<Self, Error> {
        if conditions.len() != op.order() {
            return Err(Error::Input(format!(
                "operator of order {} needs exactly {} conditions, got {}",
                op.order(),
                op.order(),
                conditions.len()
            )));
        }
        for c in &conditions {
            c.validate(op.order())?;
        }
        Ok(IvpProblem { op, conditions })
    }

    /// Convenience constructor for `y^(i)(0) = values[i]`.
    pub fn with_initial_values(op: DiffOp, values: Vec<Rat>) -> Result<Self, Error> {
        let conditions = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| BoundaryCondition::initial(i, v))
            .collect();
        IvpProblem::new(op, conditions)
    }

    /// Initial values `l_0..l_{r-1}` when every condition is a single-term
    /// derivative condition at 0 and the orders cover `0..r` exactly.
    pub fn initial_values(&self) -> Result<Vec<Rat>, Error> {
        let r = self.op.order();
        let mut vals: Vec<Option<Rat>> = vec![None; r];
        for c in &self.conditions {
            if c.terms.len() != 1 {
                return Err(Error::UnsupportedCondition(
                    "multi-term boundary condition; initial values at 0 required".to_string(),
                ));
            }
            let t = &c.terms[0];
            if !t.point.is_zero() || t.weight.is_zero() {
                return Err(Error::UnsupportedCondition(
                    "conditions must be derivative values at 0".to_string(),
                ));
            }
            if t.order >= r || vals[t.order].is_some() {
                return Err(Error::UnsupportedCondition(
                    "initial conditions must cover derivative orders 0..r once each".to_string(),
                ));
            }
            vals[t.order] = Some(&c.target / &t.weight);
        }
        Ok(vals.into_iter().map(|v| v.expect("covered")).collect())
    }
}

/// Left normal form `L = d^r q_r + ... + d q_1 + q_0`.
///
/// Solving top-down with `d^i q = sum_j C(i,j) q^(j) d^(i-j)` gives
/// `q_m = a_m - sum_{i>m} C(i, i-m) q_i^(i-m)`, and `q_r = a_r`.
pub fn left_normal_form(op: &DiffOp) -> Vec<QPoly> {
    let r = op.order();
    let mut q = vec![QPoly::zero(); r + 1];
    for m in (0..=r).rev() {
        let mut acc = op.coeff(m);
        for i in (m + 1)..=r {
            let c = binomial(i as u64, (i - m) as u64);
            let mut deriv = q[i].clone();
            for _ in 0..(i - m) {
                deriv = deriv.derivative();
            }
            acc = acc.sub(&deriv.scale(&c));
        }
        q[m] = acc;
    }
    q
}

/// The polynomials `alpha_i` with `L = d^r a_r + ... + d a_1 + a_0`;
/// definitionally the left normal form (`alpha_r = a_r`).
pub fn adjoint_alphas(op: &DiffOp) -> Vec<QPoly> {
    left_normal_form(op)
}

/// Expands `sum_p d^p b_{k+p}` applied to `y` as `sum_m c_m(x) y^(m)`;
/// returns the `c_m`.
fn expand_tail_operator(alphas: &[QPoly], k: usize) -> Vec<QPoly> {
    let r = alphas.len() - 1;
    let mut c = vec![QPoly::zero(); r - k + 1];
    for p in 0..=(r - k) {
        let a = &alphas[k + p];
        if a.is_zero() {
            continue;
        }
        let mut da = a.clone();
        for j in 0..=p {
            // term C(p, j) a^(j) d^(p-j)
            if j > 0 {
                da = da.derivative();
            }
            let cj = binomial(p as u64, j as u64);
            c[p - j] = c[p - j].add(&da.scale(&cj));
        }
    }
    c
}

/// True iff `a` has no real root in `[-1, 1]`, decided exactly by Sturm
/// root counting.
pub fn check_nonvanishing(a: &QPoly) -> bool {
    assert!(!a.is_zero(), "nonvanishing test on the zero polynomial");
    a.count_real_roots_in(&rat_i(-1), &rat_i(1)) == 0
}

/// Volterra second-kind form of an initial value problem:
/// `alpha_r(x) y(x) = g(x) + int_0^x K(x,t) y(t) dt` with the polynomial
/// kernel `K(x,t) = sum_j beta_j(t) x^j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VolterraSystem {
    /// `alpha_0..alpha_r` from the left normal form.
    pub alphas: Vec<QPoly>,
    /// `beta_0..beta_{r-1}`, polynomials in `t`.
    pub betas: Vec<QPoly>,
    /// Right-hand side polynomial in `x`.
    pub g: QPoly,
}

impl VolterraSystem {
    pub fn order(&self) -> usize {
        self.alphas.len() - 1
    }

    /// Kernel as coefficients of powers of `x`: entry `j` is `beta_j(t)`.
    pub fn kernel_x_coeffs(&self) -> &[QPoly] {
        &self.betas
    }

    /// The same kernel expanded from `-sum_k (x-t)^k / k! alpha_{r-1-k}(t)`,
    /// for cross-checking: entry `j` is the coefficient of `x^j` in `t`.
    pub fn kernel_from_definition(&self) -> Vec<QPoly> {
        let r = self.order();
        let mut out = vec![QPoly::zero(); r.max(1)];
        let t = QPoly::var();
        for k in 0..r {
            // -(x - t)^k / k! * alpha_{r-1-k}(t) contributes to x^j, j <= k.
            let a = &self.alphas[r - 1 - k];
            if a.is_zero() {
                continue;
            }
            let kfact = Rat::from_integer(crate::rat::factorial(k as u64));
            for j in 0..=k {
                // coefficient of x^j in (x - t)^k is C(k, j) (-t)^(k-j)
                let c = binomial(k as u64, j as u64) / &kfact;
                let tpow = t.pow(k - j).scale(&c);
                let signed = if (k - j) % 2 == 1 { tpow.neg() } else { tpow };
                out[j] = out[j].sub(&signed.mul(a));
            }
        }
        out
    }
}

/// Builds the Volterra form of a pure initial value problem at 0.
pub fn volterra_system(ivp: &IvpProblem) -> Result<VolterraSystem, Error> {
    let ell = ivp.initial_values()?;
    let r = ivp.op.order();
    if r == 0 {
        return Err(Error::Input(
            "order-zero operator has no initial value problem".to_string(),
        ));
    }
    let alphas = adjoint_alphas(&ivp.op);

    // beta_j(t) = sum_{i=0}^{r-1-j} (-1)^(i+1) / (i! j!) t^i alpha_{r-1-j-i}(t)
    let t = QPoly::var();
    let mut betas = Vec::with_capacity(r);
    for j in 0..r {
        let jfact = Rat::from_integer(crate::rat::factorial(j as u64));
        let mut b = QPoly::zero();
        for i in 0..=(r - 1 - j) {
            let a = &alphas[r - 1 - j - i];
            if a.is_zero() {
                continue;
            }
            let ifact = Rat::from_integer(crate::rat::factorial(i as u64));
            let mut coef = (&jfact * &ifact).recip();
            if i % 2 == 0 {
                coef = -coef;
            }
            b = b.add(&t.pow(i).mul(a).scale(&coef));
        }
        betas.push(b);
    }

    // g(x) = sum_{k=0}^{r-1} (L_{r-k} y)(0) x^k / k!  where
    // L_m = d^{r-m} alpha_r + ... + alpha_m.
    let mut g = QPoly::zero();
    for k in 0..r {
        let cs = expand_tail_operator(&alphas, r - k);
        let mut val = Rat::zero();
        for (m, c) in cs.iter().enumerate() {
            if m < ell.len() {
                val += c.eval(&Rat::zero()) * &ell[m];
            }
        }
        let kfact = Rat::from_integer(crate::rat::factorial(k as u64));
        g = g.add(&QPoly::monomial(val / kfact, k));
    }

    Ok(VolterraSystem { alphas, betas, g })
}

/// Affine rescaling of a problem from `[a, b]` to `[-1, 1]`.
///
/// With `x = s*u + m`, `s = (b-a)/2`, `m = (a+b)/2`, the function
/// `z(u) = y(s u + m)` solves the returned operator, whose coefficients are
/// `s^(r-i) a_i(s u + m)`. Condition points map through the inverse
/// `u = (x - m)/s` and weights pick up `s^-order`.
pub fn rescale_to_unit(op: &DiffOp, a: &Rat, b: &Rat) -> Result<DiffOp, Error> {
    if a >= b {
        return Err(Error::Input("interval must satisfy a < b".to_string()));
    }
    let s = (b - a) / rat_i(2);
    let m = (a + b) / rat_i(2);
    let r = op.order();
    let mut coeffs = Vec::with_capacity(r + 1);
    for (i, c) in op.coeffs().iter().enumerate() {
        let scaled = c.compose_affine(&s, &m).scale(&crate::rat::rat_powi(&s, (r - i) as i64));
        coeffs.push(scaled);
    }
    DiffOp::new(coeffs)
}

/// Rescales a whole problem (operator and conditions) to `[-1, 1]`.
pub fn rescale_problem_to_unit(
    ivp: &IvpProblem,
    a: &Rat,
    b: &Rat,
) -> Result<IvpProblem, Error> {
    let op = rescale_to_unit(&ivp.op, a, b)?;
    let s = (b - a) / rat_i(2);
    let m = (a + b) / rat_i(2);
    let mut conditions = Vec::with_capacity(ivp.conditions.len());
    for c in &ivp.conditions {
        let terms = c
            .terms
            .iter()
            .map(|t| ConditionTerm {
                weight: &t.weight * crate::rat::rat_powi(&s, -(t.order as i64)),
                order: t.order,
                point: (&t.point - &m) / &s,
            })
            .collect();
        conditions.push(BoundaryCondition {
            terms,
            target: c.target.clone(),
        });
    }
    IvpProblem::new(op, conditions)
}

/// A parsed problem file: the problem plus its stated interval.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub ivp: IvpProblem,
    pub interval: (Rat, Rat),
}

impl ProblemSpec {
    /// The problem mapped onto `[-1, 1]` (identity when already there).
    pub fn to_unit_interval(&self) -> Result<IvpProblem, Error> {
        let (a, b) = &self.interval;
        if *a == rat_i(-1) && *b == rat_i(1) {
            Ok(self.ivp.clone())
        } else {
            rescale_problem_to_unit(&self.ivp, a, b)
        }
    }
}

/// Parses the problem JSON schema:
///
/// ```json
/// {
///   "operator": [["0"], ["-1"], ...],
///   "initial_values": ["1"],
///   "conditions": [{"terms": [{"weight": "1", "order": 0, "point": "0"}],
///                   "target": "1"}],
///   "interval": ["-1", "1"]
/// }
/// ```
///
/// `operator[i]` lists the monomial coefficients of `a_i`, low to high;
/// exactly one of `initial_values` / `conditions` must be present and
/// `interval` is optional (default `[-1, 1]`). All rationals are strings.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, Error> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("problem JSON: {e}")))?;
    parse_problem_value(&v)
}

pub fn parse_problem_value(v: &Value) -> Result<ProblemSpec, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Input("problem JSON must be an object".to_string()))?;
    let op_val = obj
        .get("operator")
        .ok_or_else(|| Error::Input("missing \"operator\"".to_string()))?;
    let op_arr = op_val
        .as_array()
        .ok_or_else(|| Error::Input("\"operator\" must be an array of arrays".to_string()))?;
    let mut coeffs = Vec::with_capacity(op_arr.len());
    for c in op_arr {
        coeffs.push(parse_poly_value(c)?);
    }
    let op = DiffOp::new(coeffs)?;

    let conditions = match (obj.get("initial_values"), obj.get("conditions")) {
        (Some(_), Some(_)) => {
            return Err(Error::Input(
                "give either \"initial_values\" or \"conditions\", not both".to_string(),
            ))
        }
        (Some(iv), None) => {
            let arr = iv.as_array().ok_or_else(|| {
                Error::Input("\"initial_values\" must be an array".to_string())
            })?;
            arr.iter()
                .enumerate()
                .map(|(i, x)| Ok(BoundaryCondition::initial(i, parse_rat_value(x)?)))
                .collect::<Result<Vec<_>, Error>>()?
        }
        (None, Some(cs)) => {
            let arr = cs
                .as_array()
                .ok_or_else(|| Error::Input("\"conditions\" must be an array".to_string()))?;
            arr.iter().map(parse_condition_value).collect::<Result<Vec<_>, _>>()?
        }
        (None, None) => {
            return Err(Error::Input(
                "missing \"initial_values\" or \"conditions\"".to_string(),
            ))
        }
    };

    let interval = match obj.get("interval") {
        None => (rat_i(-1), rat_i(1)),
        Some(Value::Array(ab)) if ab.len() == 2 => {
            let a = parse_rat_value(&ab[0])?;
            let b = parse_rat_value(&ab[1])?;
            if a >= b {
                return Err(Error::Input("interval must satisfy a < b".to_string()));
            }
            (a, b)
        }
        Some(_) => {
            return Err(Error::Input(
                "\"interval\" must be a two-element array".to_string(),
            ))
        }
    };

    Ok(ProblemSpec {
        ivp: IvpProblem::new(op, conditions)?,
        interval,
    })
}

fn parse_condition_value(v: &Value) -> Result<BoundaryCondition, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Input("condition must be an object".to_string()))?;
    let terms_val = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("condition needs a \"terms\" array".to_string()))?;
    let mut terms = Vec::with_capacity(terms_val.len());
    for t in terms_val {
        let to = t
            .as_object()
            .ok_or_else(|| Error::Input("condition term must be an object".to_string()))?;
        let weight = parse_rat_value(
            to.get("weight")
                .ok_or_else(|| Error::Input("term needs \"weight\"".to_string()))?,
        )?;
        let order = to
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Input("term needs integer \"order\"".to_string()))?
            as usize;
        let point = parse_rat_value(
            to.get("point")
                .ok_or_else(|| Error::Input("term needs \"point\"".to_string()))?,
        )?;
        terms.push(ConditionTerm {
            weight,
            order,
            point,
        });
    }
    let target = parse_rat_value(
        obj.get("target")
            .ok_or_else(|| Error::Input("condition needs \"target\"".to_string()))?,
    )?;
    Ok(BoundaryCondition { terms, target })
}

fn parse_poly_value(v: &Value) -> Result<QPoly, Error> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Input("polynomial must be an array of rationals".to_string()))?;
    let coeffs = arr
        .iter()
        .map(parse_rat_value)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QPoly::from_coeffs(coeffs))
}

fn parse_rat_value(v: &Value) -> Result<Rat, Error> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => n
            .as_i64()
            .map(rat_i)
            .ok_or_else(|| Error::Input(format!("non-integer numeric literal {n}"))),
        _ => Err(Error::Input(format!("expected rational string, got {v}"))),
    }
}
