//! Newton polygon of a recurrence operator and the growth heuristics built
//! on it: classification of solution growth `n!^kappa alpha^n` and the
//! choice of the backward-recurrence start index. Everything here feeds
//! heuristics only; rigor lives in the validation step.

use num_traits::Zero;

use crate::chebrec::{singularities, RecOp};
use crate::qpoly::QPoly;
use crate::rat::{rat_to_f64, Rat};
use crate::Error;

/// One edge of the lower convex hull of `(k, -deg b_k)`.
#[derive(Clone, Debug)]
pub struct PolygonEdge {
    /// Exact slope `kappa`.
    pub slope: Rat,
    /// Characteristic polynomial `chi(alpha) = sum lc(b_k) alpha^(k-i)`
    /// over the lattice points on the edge, `i` the left endpoint.
    pub chi: QPoly,
    /// Horizontal length (also `deg chi`).
    pub span: i64,
    /// Shift index of the left endpoint.
    pub left_shift: i64,
}

/// Lower convex hull of the support points of a recurrence operator.
#[derive(Clone, Debug)]
pub struct NewtonPolygon {
    pub edges: Vec<PolygonEdge>,
}

/// Growth parameters `n!^kappa |alpha|^n` of one solution class.
#[derive(Clone, Debug, PartialEq)]
pub struct Growth {
    pub kappa: Rat,
    pub alpha_abs: f64,
}

pub fn newton_polygon(p: &RecOp) -> NewtonPolygon {
    let s = p.half_order();
    // Support points (k, -deg b_k), sorted by k.
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for k in -s..=s {
        let b = p.coeff(k);
        if !b.is_zero() {
            pts.push((k, -(b.degree() as i64)));
        }
    }
    assert!(!pts.is_empty(), "polygon of the zero operator");

    // Lower convex hull, monotone chain.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &q in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Keep b only when a -> b -> q turns left (b strictly below
            // the chord a-q); pop on right turns and collinear points.
            let cross = (b.0 - a.0) * (q.1 - a.1) - (q.0 - a.0) * (b.1 - a.1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }

    let mut edges = Vec::new();
    for w in hull.windows(2) {
        let (k0, y0) = w[0];
        let (k1, y1) = w[1];
        let slope = Rat::new((y1 - y0).into(), (k1 - k0).into());
        // Points of the support lying exactly on the edge.
        let mut chi_coeffs = vec![Rat::zero(); (k1 - k0 + 1) as usize];
        for &(k, y) in &pts {
            if k < k0 || k > k1 {
                continue;
            }
            let on_edge =
                (y - y0) * (k1 - k0) == (y1 - y0) * (k - k0);
            if on_edge {
                chi_coeffs[(k - k0) as usize] = p.coeff(k).leading_coeff();
            }
        }
        edges.push(PolygonEdge {
            slope,
            chi: QPoly::from_coeffs(chi_coeffs),
            span: k1 - k0,
            left_shift: k0,
        });
    }
    NewtonPolygon { edges }
}

impl NewtonPolygon {
    /// Total horizontal span; equals `2s` for a full recurrence operator.
    pub fn total_span(&self) -> i64 {
        self.edges.iter().map(|e| e.span).sum()
    }

    /// All `(kappa, |alpha|)` pairs, one per characteristic root counted
    /// with multiplicity, ordered by increasing growth: edges left to
    /// right, root moduli increasing inside each edge.
    pub fn growth_classes(&self) -> Vec<Growth> {
        let mut out = Vec::new();
        for e in &self.edges {
            let mut mods: Vec<f64> = crate::roots::approx_roots(&e.chi)
                .into_iter()
                .flat_map(|(z, m)| std::iter::repeat(z.norm()).take(m))
                .collect();
            mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // chi may have fewer roots than the span when alpha = 0 is a
            // root (zero constant coefficient); pad with zeros in front.
            while (mods.len() as i64) < e.span {
                mods.insert(0, 0.0);
            }
            for m in mods {
                out.push(Growth {
                    kappa: e.slope.clone(),
                    alpha_abs: m,
                });
            }
        }
        out
    }
}

/// Growth parameters of the slowest-decreasing convergent solution class:
/// the `s`-th smallest growth, where `s` is the half order.
///
/// Fails with an ambiguity error when the class sits on a horizontal edge
/// whose root modulus cannot be separated from 1 numerically.
pub fn convergent_growth(p: &RecOp) -> Result<Growth, Error> {
    let polygon = newton_polygon(p);
    let classes = polygon.growth_classes();
    let s = p.half_order();
    if s == 0 || classes.len() < s as usize {
        return Err(Error::Internal(
            "recurrence operator has no convergent class".to_string(),
        ));
    }
    let g = classes[(s - 1) as usize].clone();
    if g.kappa.is_zero() && (g.alpha_abs - 1.0).abs() < 1e-9 {
        return Err(Error::Inconclusive(
            "characteristic root too close to the unit circle".to_string(),
        ));
    }
    Ok(g)
}

/// Start index for the backward recurrence: at least
/// `max(d, max S) + s`, raised until the decay heuristic
/// `N!^kappa_1 |alpha_1|^N <= eps` (when growth data is available).
pub fn choose_n(p: &RecOp, d: usize, eps: &Rat) -> i64 {
    let s = p.half_order();
    let max_sing = singularities(p).into_iter().max().unwrap_or(0);
    let floor = (d as i64).max(max_sing) + s;
    if eps >= &Rat::from_integer(1.into()) {
        return floor;
    }
    let growth = match convergent_growth(p) {
        Ok(g) => g,
        Err(_) => return floor,
    };
    let kappa = rat_to_f64(&growth.kappa);
    let alpha = growth.alpha_abs;
    if kappa > 0.0 || (kappa == 0.0 && alpha >= 1.0) || alpha <= 0.0 {
        return floor;
    }
    let ln_eps = rat_to_f64(eps).ln();
    let ln_alpha = alpha.ln();
    let mut ln_fact: f64 = (2..=floor.max(1)).map(|k| (k as f64).ln()).sum();
    let mut n = floor.max(1);
    // ln(N!^kappa alpha^N) = kappa ln N! + N ln alpha, decreasing in N here.
    while kappa * ln_fact + (n as f64) * ln_alpha > ln_eps {
        n += 1;
        ln_fact += (n as f64).ln();
        if n > floor + 1_000_000 {
            return floor;
        }
    }
    n.max(floor)
}
