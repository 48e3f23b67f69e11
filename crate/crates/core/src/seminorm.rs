//! Evaluable seminorms: weighted sup, weighted l1, Minkowski functionals of
//! symmetric polytopes, and pointwise maxima of finitely many seminorms.

use serde::{Deserialize, Serialize};

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::linalg::solve_square;
use crate::rng::Rng;
use crate::scalar::Real;
use crate::simplex::{feasible_nonneg, minimize, LpError};
use crate::vector::Vector;

/// An evaluable seminorm on `R^n`.
///
/// `MaxOf` is the closure needed by compact-cover certification (a pointwise
/// maximum of seminorms is again a seminorm and dominates each part).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum SeminormSpec<F> {
    WeightedSup { weights: Vector<F> },
    WeightedL1 { weights: Vector<F> },
    #[serde(rename = "minkowski-of-polytope")]
    MinkowskiPolytope { vertices: Vec<Vector<F>> },
    MaxOf { parts: Vec<SeminormSpec<F>> },
}

impl<F: Real> SeminormSpec<F> {
    /// The sup-norm on `R^dim`.
    pub fn sup_norm(dim: usize) -> Self {
        SeminormSpec::WeightedSup {
            weights: Vector::new(vec![F::one(); dim]),
        }
    }

    /// Absolute value on `R^1`.
    pub fn abs() -> Self {
        Self::sup_norm(1)
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            SeminormSpec::WeightedSup { weights } | SeminormSpec::WeightedL1 { weights } => {
                weights.check_dim(dim)?;
                if weights.iter().any(|&w| w < F::zero() || !w.is_finite()) {
                    return Err(Error::Input("seminorm weights must be nonnegative".into()));
                }
                Ok(())
            }
            SeminormSpec::MinkowskiPolytope { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::Input("polytope needs vertices".into()));
                }
                for v in vertices {
                    v.check_dim(dim)?;
                }
                // Symmetry: the vertex list must be closed under negation.
                let scale = vertices
                    .iter()
                    .map(|v| v.sup_norm())
                    .fold(F::zero(), |a, b| if b > a { b } else { a });
                let tol = F::ORDER_TOL * (F::one() + scale);
                for v in vertices {
                    let neg = -v;
                    if !vertices.iter().any(|w| (w - &neg).sup_norm() <= tol) {
                        return Err(Error::Input(
                            "polytope is not symmetric: vertex list not closed under negation"
                                .into(),
                        ));
                    }
                }
                // 0 interior: the vertices must positively span R^dim.
                let columns = polytope_columns(vertices, dim);
                for i in 0..dim {
                    for sign in [F::one(), -F::one()] {
                        let mut rhs = vec![F::zero(); dim];
                        rhs[i] = sign;
                        let feas = feasible_nonneg(&columns, &rhs).map_err(lp_internal)?;
                        if !feas.feasible(rhs.len()) {
                            return Err(Error::Input(
                                "polytope does not contain 0 in its interior".into(),
                            ));
                        }
                    }
                }
                Ok(())
            }
            SeminormSpec::MaxOf { parts } => {
                if parts.is_empty() {
                    return Err(Error::Input("max-of seminorm needs parts".into()));
                }
                for p in parts {
                    p.validate(dim)?;
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, x: &Vector<F>) -> Result<F> {
        match self {
            SeminormSpec::WeightedSup { weights } => {
                x.check_dim(weights.dim())?;
                Ok((0..x.dim()).fold(F::zero(), |acc, i| {
                    let v = weights[i] * x[i].abs();
                    if v > acc {
                        v
                    } else {
                        acc
                    }
                }))
            }
            SeminormSpec::WeightedL1 { weights } => {
                x.check_dim(weights.dim())?;
                Ok((0..x.dim()).map(|i| weights[i] * x[i].abs()).sum())
            }
            SeminormSpec::MinkowskiPolytope { vertices } => gauge(vertices, x),
            SeminormSpec::MaxOf { parts } => {
                let mut best = F::zero();
                for p in parts {
                    let v = p.eval(x)?;
                    if v > best {
                        best = v;
                    }
                }
                Ok(best)
            }
        }
    }

    /// Half-widths `h_i` of the smallest axis-aligned box containing the ball
    /// `{x : p(x) ≤ radius}`; infinite along kernel directions.
    pub fn ball_halfwidths(&self, dim: usize, radius: F) -> Result<Vec<F>> {
        match self {
            SeminormSpec::WeightedSup { weights } | SeminormSpec::WeightedL1 { weights } => {
                weights.check_dim(dim)?;
                Ok((0..dim)
                    .map(|i| {
                        if weights[i] > F::zero() {
                            radius / weights[i]
                        } else {
                            F::infinity()
                        }
                    })
                    .collect())
            }
            SeminormSpec::MinkowskiPolytope { vertices } => Ok((0..dim)
                .map(|i| {
                    radius
                        * vertices
                            .iter()
                            .map(|v| v[i].abs())
                            .fold(F::zero(), |a, b| if b > a { b } else { a })
                })
                .collect()),
            SeminormSpec::MaxOf { parts } => {
                let mut h = vec![F::infinity(); dim];
                for p in parts {
                    let ph = p.ball_halfwidths(dim, radius)?;
                    for i in 0..dim {
                        if ph[i] < h[i] {
                            h[i] = ph[i];
                        }
                    }
                }
                Ok(h)
            }
        }
    }

    /// Coordinate directions annihilated by the seminorm.
    pub fn kernel_axes(&self, dim: usize) -> Result<Vec<usize>> {
        let mut axes = Vec::new();
        for i in 0..dim {
            if self.eval(&Vector::basis(dim, i))? <= F::TIGHT_TOL {
                axes.push(i);
            }
        }
        Ok(axes)
    }

    /// Linear functionals whose pointwise maximum equals the seminorm, for
    /// 2-d polyhedral seminorms. Used by the exact normality computation.
    pub fn dual_directions_2d(&self) -> Result<Vec<Vector<F>>> {
        match self {
            SeminormSpec::WeightedSup { weights } => {
                weights.check_dim(2)?;
                Ok(vec![
                    Vector::new(vec![weights[0], F::zero()]),
                    Vector::new(vec![-weights[0], F::zero()]),
                    Vector::new(vec![F::zero(), weights[1]]),
                    Vector::new(vec![F::zero(), -weights[1]]),
                ])
            }
            SeminormSpec::WeightedL1 { weights } => {
                weights.check_dim(2)?;
                let mut dirs = Vec::new();
                for s0 in [F::one(), -F::one()] {
                    for s1 in [F::one(), -F::one()] {
                        dirs.push(Vector::new(vec![s0 * weights[0], s1 * weights[1]]));
                    }
                }
                Ok(dirs)
            }
            SeminormSpec::MinkowskiPolytope { vertices } => {
                for v in vertices {
                    v.check_dim(2)?;
                }
                polar_vertices_2d(vertices)
            }
            SeminormSpec::MaxOf { parts } => {
                let mut dirs = Vec::new();
                for p in parts {
                    dirs.extend(p.dual_directions_2d()?);
                }
                Ok(dirs)
            }
        }
    }
}

fn polytope_columns<F: Real>(vertices: &[Vector<F>], dim: usize) -> Vec<Vec<F>> {
    vertices
        .iter()
        .map(|v| {
            let s = v.sup_norm();
            let s = if s > F::zero() { s } else { F::one() };
            (0..dim).map(|i| v[i] / s).collect()
        })
        .collect()
}

/// Minkowski gauge of `conv(vertices)` at `y`:
/// `inf { t > 0 : y ∈ t·conv(vertices) } = min { Σν : Σ ν_j w_j = y, ν ≥ 0 }`.
fn gauge<F: Real>(vertices: &[Vector<F>], y: &Vector<F>) -> Result<F> {
    let dim = y.dim();
    for v in vertices {
        v.check_dim(dim)?;
    }
    let scale = y.sup_norm();
    if scale == F::zero() {
        return Ok(F::zero());
    }
    let columns = polytope_columns(vertices, dim);
    // Column j was divided by its norm s_j, so its multiplier contributes
    // 1/s_j to Σν per unit.
    let cost: Vec<F> = vertices
        .iter()
        .map(|v| {
            let s = v.sup_norm();
            if s > F::zero() {
                F::one() / s
            } else {
                F::one()
            }
        })
        .collect();
    let rhs: Vec<F> = (0..dim).map(|i| y[i] / scale).collect();
    match minimize(&cost, &columns, &rhs, F::ORDER_TOL) {
        Ok(sol) => Ok(sol.objective * scale),
        Err(LpError::Infeasible) => Err(Error::Input(
            "gauge undefined: point outside the span of the polytope".into(),
        )),
        Err(e) => Err(lp_internal(e)),
    }
}

/// The Minkowski functional of a symmetric polytope with 0 interior.
/// Validates the polytope before evaluating.
pub fn minkowski_functional<F: Real>(spec: &SeminormSpec<F>, y: &Vector<F>) -> Result<F> {
    match spec {
        SeminormSpec::MinkowskiPolytope { .. } => {
            spec.validate(y.dim())?;
            spec.eval(y)
        }
        _ => Err(Error::Input(
            "minkowski_functional expects a minkowski-of-polytope seminorm".into(),
        )),
    }
}

/// Polar polygon vertices of a symmetric 2-d polytope: one linear functional
/// per hull edge, `⟨u, ·⟩ = 1` on the edge. The gauge is their pointwise max.
fn polar_vertices_2d<F: Real>(vertices: &[Vector<F>]) -> Result<Vec<Vector<F>>> {
    let hull = convex_hull_2d(vertices);
    if hull.len() < 2 {
        return Err(Error::Input("polytope is degenerate in R^2".into()));
    }
    let mut dirs = Vec::new();
    let n = hull.len();
    for k in 0..n {
        let a = &hull[k];
        let b = &hull[(k + 1) % n];
        let det = a[0] * b[1] - a[1] * b[0];
        if det.abs() <= F::PIVOT_TOL * (F::one() + a.sup_norm() * b.sup_norm()) {
            continue;
        }
        // Solve ⟨u,a⟩ = 1, ⟨u,b⟩ = 1.
        let sys = vec![vec![a[0], a[1]], vec![b[0], b[1]]];
        if let Some(u) = solve_square(&sys, &[F::one(), F::one()]) {
            dirs.push(Vector::new(u));
        }
    }
    if dirs.is_empty() {
        return Err(Error::Input("no polar directions: degenerate polytope".into()));
    }
    Ok(dirs)
}

/// Andrew monotone-chain hull, counterclockwise, for tiny 2-d point sets.
fn convex_hull_2d<F: Real>(points: &[Vector<F>]) -> Vec<Vector<F>> {
    let mut pts: Vec<(F, F)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    if pts.len() < 3 {
        return pts.into_iter().map(|(x, y)| Vector::new(vec![x, y])).collect();
    }
    let cross = |o: (F, F), a: (F, F), b: (F, F)| -> F {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(F, F)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= F::zero()
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(F, F)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= F::zero()
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower
        .into_iter()
        .chain(upper)
        .map(|(x, y)| Vector::new(vec![x, y]))
        .collect()
}

fn lp_internal(e: LpError) -> Error {
    Error::Input(format!("internal LP failed: {e:?}"))
}

/// A violating chain x ≤ y ≤ z.
pub type ChainWitness<F> = (Vector<F>, Vector<F>, Vector<F>);

/// Sampled check of the full-set gauge inequality `q(y) ≤ max{q(x), q(z)}`
/// on chains `x ≤_C y ≤_C z`. Returns the first violating chain, if any.
pub fn c_full_violation<F: Real>(
    q: &SeminormSpec<F>,
    cone: &PolyCone<F>,
    rng: &mut Rng,
    samples: usize,
) -> Result<Option<ChainWitness<F>>> {
    let dim = cone.dim;
    for _ in 0..samples {
        let x = Vector::new((0..dim).map(|_| F::of(rng.range_f64(-1.0, 1.0))).collect());
        let step = |rng: &mut Rng| -> Vector<F> {
            let mut s = Vector::zeros(dim);
            for g in &cone.generators {
                let lambda = F::of(rng.unit_f64());
                let gn = g.sup_norm();
                s = s.add_scaled(lambda / gn, g);
            }
            s
        };
        let y = &x + &step(rng);
        let z = &y + &step(rng);
        let qx = q.eval(&x)?;
        let qy = q.eval(&y)?;
        let qz = q.eval(&z)?;
        let bound = if qx > qz { qx } else { qz };
        if qy > bound + F::CHECK_TOL * (F::one() + bound) {
            return Ok(Some((x, y, z)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup_ball_square() -> SeminormSpec<f64> {
        SeminormSpec::MinkowskiPolytope {
            vertices: vec![
                Vector::from_f64s(&[1.0, 1.0]),
                Vector::from_f64s(&[1.0, -1.0]),
                Vector::from_f64s(&[-1.0, 1.0]),
                Vector::from_f64s(&[-1.0, -1.0]),
            ],
        }
    }

    #[test]
    fn gauge_of_sup_ball_is_sup_norm() {
        let q = sup_ball_square();
        let y = Vector::from_f64s(&[2.0, 1.0]);
        assert!((minkowski_functional(&q, &y).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(
            minkowski_functional(&q, &Vector::from_f64s(&[0.0, 0.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn gauge_chain_inequality_example() {
        // 0 ≤ (1,1) ≤ (2,2) under R²₊, q = sup-norm gauge: q(y)=1 ≤ max{0,2}.
        let q = sup_ball_square();
        let qy = minkowski_functional(&q, &Vector::from_f64s(&[1.0, 1.0])).unwrap();
        let qz = minkowski_functional(&q, &Vector::from_f64s(&[2.0, 2.0])).unwrap();
        assert!((qy - 1.0).abs() < 1e-9);
        assert!(qy <= qz + 1e-9);
    }

    #[test]
    fn asymmetric_polytope_rejected() {
        let w: SeminormSpec<f64> = SeminormSpec::MinkowskiPolytope {
            vertices: vec![
                Vector::from_f64s(&[1.0, 0.0]),
                Vector::from_f64s(&[0.0, 1.0]),
                Vector::from_f64s(&[-1.0, -1.0]),
            ],
        };
        assert!(matches!(w.validate(2), Err(Error::Input(_))));
    }

    #[test]
    fn flat_polytope_rejected() {
        // Segment on the x1-axis: symmetric but 0 is not interior.
        let w: SeminormSpec<f64> = SeminormSpec::MinkowskiPolytope {
            vertices: vec![
                Vector::from_f64s(&[1.0, 0.0]),
                Vector::from_f64s(&[-1.0, 0.0]),
            ],
        };
        assert!(matches!(w.validate(2), Err(Error::Input(_))));
    }

    #[test]
    fn weighted_kinds() {
        let p: SeminormSpec<f64> = SeminormSpec::WeightedSup {
            weights: Vector::from_f64s(&[2.0, 0.0]),
        };
        assert_eq!(p.eval(&Vector::from_f64s(&[3.0, 100.0])).unwrap(), 6.0);
        assert_eq!(p.kernel_axes(2).unwrap(), vec![1]);
        let l1: SeminormSpec<f64> = SeminormSpec::WeightedL1 {
            weights: Vector::from_f64s(&[1.0, 2.0]),
        };
        assert_eq!(l1.eval(&Vector::from_f64s(&[-1.0, 1.5])).unwrap(), 4.0);
    }

    #[test]
    fn max_of_dominates_parts() {
        let p: SeminormSpec<f64> = SeminormSpec::MaxOf {
            parts: vec![
                SeminormSpec::WeightedSup {
                    weights: Vector::from_f64s(&[1.0, 0.0]),
                },
                SeminormSpec::WeightedSup {
                    weights: Vector::from_f64s(&[0.0, 3.0]),
                },
            ],
        };
        assert_eq!(p.eval(&Vector::from_f64s(&[2.0, 1.0])).unwrap(), 3.0);
        assert!(p.kernel_axes(2).unwrap().is_empty());
    }

    #[test]
    fn dual_directions_reproduce_gauge() {
        let q = sup_ball_square();
        let dirs = q.dual_directions_2d().unwrap();
        let mut rng = Rng::new(11);
        for _ in 0..200 {
            let y = Vector::from_f64s(&[rng.range_f64(-2.0, 2.0), rng.range_f64(-2.0, 2.0)]);
            let via_lp = q.eval(&y).unwrap();
            let via_dual = dirs
                .iter()
                .map(|d| d.dot(&y))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                (via_lp - via_dual).abs() < 1e-8,
                "gauge mismatch at {y:?}: lp={via_lp} dual={via_dual}"
            );
        }
    }

    #[test]
    fn sup_ball_is_full_for_quadrant() {
        let q = sup_ball_square();
        let cone: PolyCone<f64> = PolyCone::coordinate(2);
        let mut rng = Rng::new(5);
        assert!(c_full_violation(&q, &cone, &mut rng, 500)
            .unwrap()
            .is_none());
    }

    #[test]
    fn l1_ball_is_not_full_for_quadrant() {
        // (-1,0) ≤ (-1,1) ≤ (0,1): q_l1 of the middle is 2 > 1.
        let q: SeminormSpec<f64> = SeminormSpec::WeightedL1 {
            weights: Vector::from_f64s(&[1.0, 1.0]),
        };
        let cone: PolyCone<f64> = PolyCone::coordinate(2);
        let mut rng = Rng::new(5);
        assert!(c_full_violation(&q, &cone, &mut rng, 2000)
            .unwrap()
            .is_some());
    }

    #[test]
    fn serde_kind_tags() {
        let p: SeminormSpec<f64> = SeminormSpec::sup_norm(2);
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"kind\":\"weighted-sup\""));
        let q = sup_ball_square();
        let json = serde_json::to_string(&q).unwrap();
        assert!(json.contains("\"kind\":\"minkowski-of-polytope\""));
        let back: SeminormSpec<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q);
    }
}
