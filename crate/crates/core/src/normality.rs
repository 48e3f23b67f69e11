//! Normality measurements: the least γ with `0 ≤ x ≤ y ⟹ q(x) ≤ γ q(y)`,
//! and suprema of seminorms over order intervals.
//!
//! For a planar sector cone the order interval `[0, su+tv]_o` is the
//! parallelogram spanned by `su` and `tv`, so the worst ratio is found
//! exactly by sweeping `y(s) = s·u + (1−s)·v` over the generator simplex and
//! evaluating at the kinks of the piecewise-linear numerator/denominator.
//! Thin sectors make γ blow up; the coordinate cone with the sup-norm has
//! γ = 1.

use serde::{Deserialize, Serialize};

use crate::cone::{OrderInterval, PolyCone};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Real;
use crate::seminorm::SeminormSpec;
use crate::vector::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaMode {
    Exact2d,
    Sampled,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormalityGamma<F> {
    /// Certified lower bound: the largest ratio q(x)/q(y) actually exhibited
    /// on a chain 0 ≤ x ≤ y.
    pub gamma_lower: F,
    /// Exact value, present in 2-d sector mode.
    pub gamma_exact: Option<F>,
}

pub fn normality_gamma<F: Real>(
    cone: &PolyCone<F>,
    q: &SeminormSpec<F>,
    mode: GammaMode,
    seed: u64,
    samples: usize,
) -> Result<NormalityGamma<F>> {
    cone.validate()?;
    q.validate(cone.dim)?;
    if !cone.is_pointed()? {
        return Err(Error::Input(
            "cone is not pointed: the normality ratio is trivially unbounded".into(),
        ));
    }
    match mode {
        GammaMode::Exact2d => gamma_exact_2d(cone, q),
        GammaMode::Sampled => gamma_sampled(cone, q, seed, samples),
    }
}

fn gamma_exact_2d<F: Real>(
    cone: &PolyCone<F>,
    q: &SeminormSpec<F>,
) -> Result<NormalityGamma<F>> {
    if cone.dim != 2 || cone.generators.len() != 2 {
        return Err(Error::Input(
            "exact-2d mode needs a sector cone in R^2 with two generators".into(),
        ));
    }
    let u = &cone.generators[0];
    let v = &cone.generators[1];
    let det = u[0] * v[1] - u[1] * v[0];
    if det.abs() <= F::PIVOT_TOL * (F::one() + u.sup_norm() * v.sup_norm()) {
        return Err(Error::Input("sector generators are linearly dependent".into()));
    }

    let qu = q.eval(u)?;
    let qv = q.eval(v)?;
    // Linear family in s over [0,1]: numerator pieces s·q(u), (1−s)·q(v) and
    // the dual pieces of s ↦ q(su + (1−s)v). Kinks of the ratio are pairwise
    // crossings.
    let mut lines: Vec<(F, F)> = vec![(qu, F::zero()), (-qv, qv)]; // value = a·s + b
    for d in q.dual_directions_2d()? {
        let at_u = d.dot(u);
        let at_v = d.dot(v);
        lines.push((at_u - at_v, at_v));
    }
    let mut candidates: Vec<F> = vec![F::zero(), F::one()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1) = lines[i];
            let (a2, b2) = lines[j];
            let da = a1 - a2;
            if da.abs() > F::PIVOT_TOL {
                let s = (b2 - b1) / da;
                if s > F::zero() && s < F::one() {
                    candidates.push(s);
                }
            }
        }
    }

    let mut gamma = F::one();
    for &s in &candidates {
        let su = u.scale(s);
        let tv = v.scale(F::one() - s);
        let y = &su + &tv;
        let denom = q.eval(&y)?;
        let numer = [q.eval(&su)?, q.eval(&tv)?, denom]
            .into_iter()
            .fold(F::zero(), |a, b| if b > a { b } else { a });
        if denom <= F::TIGHT_TOL * (F::one() + numer) {
            if numer > F::TIGHT_TOL {
                return Ok(NormalityGamma {
                    gamma_lower: F::infinity(),
                    gamma_exact: Some(F::infinity()),
                });
            }
            continue;
        }
        let ratio = numer / denom;
        if ratio > gamma {
            gamma = ratio;
        }
    }
    Ok(NormalityGamma {
        gamma_lower: gamma,
        gamma_exact: Some(gamma),
    })
}

fn gamma_sampled<F: Real>(
    cone: &PolyCone<F>,
    q: &SeminormSpec<F>,
    seed: u64,
    samples: usize,
) -> Result<NormalityGamma<F>> {
    let m = cone.generators.len();
    let normalized: Vec<Vector<F>> = cone
        .generators
        .iter()
        .map(|g| g.scale(F::one() / g.sup_norm()))
        .collect();
    let mut rng = Rng::new(seed);
    let mut gamma = F::zero();
    for round in 0..samples {
        let coeffs: Vec<F> = (0..m).map(|_| F::of(rng.unit_f64())).collect();
        let mut y = Vector::zeros(cone.dim);
        for (a, g) in coeffs.iter().zip(normalized.iter()) {
            y = y.add_scaled(*a, g);
        }
        let qy = q.eval(&y)?;
        // Chain samples inside [0, y]_o: x = Σ μ_i a_i g_i with μ ∈ [0,1]^m.
        // μ = 1 (x = y, exact ratio 1) is always included; small generator
        // counts also get the subset corners.
        let mut mus: Vec<Vec<F>> = vec![vec![F::one(); m]];
        if m <= 12 && round == 0 {
            for mask in 0..(1usize << m) {
                mus.push(
                    (0..m)
                        .map(|i| if mask >> i & 1 == 1 { F::one() } else { F::zero() })
                        .collect(),
                );
            }
        }
        for _ in 0..4 {
            mus.push((0..m).map(|_| F::of(rng.unit_f64())).collect());
        }
        for mu in mus {
            let mut x = Vector::zeros(cone.dim);
            for ((&mu_i, &a_i), g) in mu.iter().zip(coeffs.iter()).zip(normalized.iter()) {
                x = x.add_scaled(mu_i * a_i, g);
            }
            let qx = q.eval(&x)?;
            if qy <= F::TIGHT_TOL * (F::one() + qx) {
                if qx > F::TIGHT_TOL {
                    return Ok(NormalityGamma {
                        gamma_lower: F::infinity(),
                        gamma_exact: None,
                    });
                }
                continue;
            }
            let ratio = qx / qy;
            if ratio > gamma {
                gamma = ratio;
            }
        }
    }
    Ok(NormalityGamma {
        gamma_lower: gamma,
        gamma_exact: None,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntervalSup<F> {
    pub sup: F,
    /// True when obtained by vertex enumeration of the interval (simplicial
    /// cone); false for the Monte-Carlo fallback.
    pub certified: bool,
    pub samples_used: usize,
}

/// Supremum of a seminorm over an order interval.
///
/// Exact by vertex enumeration when the cone is simplicial (the interval is
/// a parallelepiped in generator coordinates and a convex function attains
/// its max at the vertices); otherwise sampled with a reported sample count.
pub fn o_bounded_sup<F: Real>(
    interval: &OrderInterval<F>,
    q: &SeminormSpec<F>,
    samples: usize,
    seed: u64,
) -> Result<IntervalSup<F>> {
    q.validate(interval.cone.dim)?;
    if interval.is_empty()? {
        return Err(Error::IncomparableEndpoints);
    }
    let cone = &interval.cone;
    let diff = &interval.hi - &interval.lo;
    let tol = F::ORDER_TOL * (F::one() + diff.sup_norm());

    if cone.generators.len() == cone.dim && cone.dim <= 20 {
        if let Some(coords) = cone.simplicial_coordinates(&diff) {
            if coords.iter().all(|&c| c >= -tol) {
                let mut sup = F::neg_infinity();
                for mask in 0..(1usize << cone.dim) {
                    let mut z = interval.lo.clone();
                    for (i, (&c, g)) in coords.iter().zip(cone.generators.iter()).enumerate()
                    {
                        if mask >> i & 1 == 1 {
                            z = z.add_scaled(c.max(F::zero()), g);
                        }
                    }
                    let v = q.eval(&z)?;
                    if v > sup {
                        sup = v;
                    }
                }
                return Ok(IntervalSup {
                    sup,
                    certified: true,
                    samples_used: 1 << cone.dim,
                });
            }
        }
    }

    // Monte Carlo over the coefficient box, with rejection against the upper
    // endpoint; lo and hi are always included.
    let normalized: Vec<Vector<F>> = cone
        .generators
        .iter()
        .map(|g| g.scale(F::one() / g.sup_norm()))
        .collect();
    let max_step: Vec<F> = normalized
        .iter()
        .map(|g| largest_step(cone, &interval.lo, &interval.hi, g))
        .collect::<Result<_>>()?;
    let mut sup = q.eval(&interval.lo)?.max(q.eval(&interval.hi)?);
    let mut used = 2;
    let mut rng = Rng::new(seed);
    for _ in 0..samples {
        let mut z = interval.lo.clone();
        for (g, &m) in normalized.iter().zip(max_step.iter()) {
            z = z.add_scaled(F::of(rng.unit_f64()) * m, g);
        }
        if cone.contains(&(&interval.hi - &z))? {
            used += 1;
            let v = q.eval(&z)?;
            if v > sup {
                sup = v;
            }
        }
    }
    Ok(IntervalSup {
        sup,
        certified: false,
        samples_used: used,
    })
}

/// Largest t with lo + t·g ≤_C hi, by doubling then bisection.
fn largest_step<F: Real>(
    cone: &PolyCone<F>,
    lo: &Vector<F>,
    hi: &Vector<F>,
    g: &Vector<F>,
) -> Result<F> {
    let fits = |t: F| -> Result<bool> {
        let z = lo.add_scaled(t, g);
        cone.contains(&(hi - &z))
    };
    if !fits(F::zero())? {
        return Ok(F::zero());
    }
    let mut hi_t = F::one();
    let cap = F::of(1e12) * (F::one() + (hi - lo).sup_norm());
    while fits(hi_t)? {
        hi_t = hi_t * F::of(2.0);
        if hi_t > cap {
            return Ok(cap);
        }
    }
    let mut lo_t = hi_t * F::of(0.5);
    for _ in 0..60 {
        let mid = (lo_t + hi_t) * F::of(0.5);
        if fits(mid)? {
            lo_t = mid;
        } else {
            hi_t = mid;
        }
    }
    Ok(lo_t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sector(eps: f64) -> PolyCone<f64> {
        PolyCone::new(
            2,
            vec![
                Vector::from_f64s(&[1.0, eps]),
                Vector::from_f64s(&[-1.0, eps]),
            ],
        )
        .unwrap()
    }

    /// Independent oracle for the 2-d γ: dense sweep of the generator
    /// simplex, taking the worst parallelogram-vertex ratio.
    fn gamma_grid_oracle(cone: &PolyCone<f64>, q: &SeminormSpec<f64>, steps: usize) -> f64 {
        let u = &cone.generators[0];
        let v = &cone.generators[1];
        let mut best: f64 = 1.0;
        for k in 0..=steps {
            let s = k as f64 / steps as f64;
            let su = u.scale(s);
            let tv = v.scale(1.0 - s);
            let y = &su + &tv;
            let qy = q.eval(&y).unwrap();
            if qy <= 1e-15 {
                continue;
            }
            let num = q
                .eval(&su)
                .unwrap()
                .max(q.eval(&tv).unwrap())
                .max(qy);
            best = best.max(num / qy);
        }
        best
    }

    #[test]
    fn coordinate_cone_sup_norm_gamma_is_one() {
        let cone: PolyCone<f64> = PolyCone::coordinate(4);
        let q = SeminormSpec::sup_norm(4);
        let g = normality_gamma(&cone, &q, GammaMode::Sampled, 42, 2000).unwrap();
        assert!((g.gamma_lower - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn thin_sector_gamma_blowup() {
        // γ(C_ε, sup) = (1+ε)/(2ε) for ε ≤ 1; ε = 0.005 gives 100.5.
        let eps = 0.005;
        let cone = sector(eps);
        let q = SeminormSpec::sup_norm(2);
        let g = normality_gamma(&cone, &q, GammaMode::Exact2d, 0, 0).unwrap();
        let exact = g.gamma_exact.unwrap();
        assert!(exact >= 1.0 / (2.0 * eps), "γ = {exact}");
        assert!((exact - 100.5).abs() < 1e-9);
        // Cross-check against the dense-grid oracle.
        let oracle = gamma_grid_oracle(&cone, &q, 200_000);
        assert!(oracle <= exact + 1e-9);
        assert!(exact - oracle < 1e-2);
    }

    #[test]
    fn unit_sector_gamma() {
        // ε = 1: the square sector is sup-norm normal with γ = 1.
        let cone = sector(1.0);
        let q = SeminormSpec::sup_norm(2);
        let g = normality_gamma(&cone, &q, GammaMode::Exact2d, 0, 0).unwrap();
        let exact = g.gamma_exact.unwrap();
        let oracle = gamma_grid_oracle(&cone, &q, 100_000);
        assert!((exact - 1.0).abs() < 1e-12, "γ = {exact}");
        assert!(oracle <= exact + 1e-9);
    }

    #[test]
    fn non_pointed_rejected() {
        let cone: PolyCone<f64> = PolyCone::new(
            1,
            vec![Vector::from_f64s(&[1.0]), Vector::from_f64s(&[-1.0])],
        )
        .unwrap();
        let q = SeminormSpec::sup_norm(1);
        assert!(normality_gamma(&cone, &q, GammaMode::Sampled, 0, 10).is_err());
    }

    #[test]
    fn interval_sup_unit_square() {
        let cone: PolyCone<f64> = PolyCone::coordinate(2);
        let interval = OrderInterval::new(
            cone,
            Vector::from_f64s(&[0.0, 0.0]),
            Vector::from_f64s(&[1.0, 1.0]),
        )
        .unwrap();
        let q = SeminormSpec::sup_norm(2);
        let r = o_bounded_sup(&interval, &q, 0, 1).unwrap();
        assert!(r.certified);
        assert!((r.sup - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interval_sup_thin_sector() {
        // [0, (0, 2ε)]_o under C_ε contains u = (1, ε): sup-norm sup is 1
        // while the endpoint norm is only 2ε.
        let eps = 0.005;
        let interval = OrderInterval::new(
            sector(eps),
            Vector::from_f64s(&[0.0, 0.0]),
            Vector::from_f64s(&[0.0, 2.0 * eps]),
        )
        .unwrap();
        let q = SeminormSpec::sup_norm(2);
        let r = o_bounded_sup(&interval, &q, 0, 1).unwrap();
        assert!(r.certified);
        assert!((r.sup - 1.0).abs() < 1e-12);
        assert!((q.eval(&interval.hi).unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn interval_sup_singleton() {
        let cone: PolyCone<f64> = PolyCone::coordinate(2);
        let x = Vector::from_f64s(&[0.25, -0.5]);
        let interval = OrderInterval::new(cone, x.clone(), x.clone()).unwrap();
        let q = SeminormSpec::sup_norm(2);
        let r = o_bounded_sup(&interval, &q, 0, 1).unwrap();
        assert!((r.sup - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_interval_signalled() {
        let cone: PolyCone<f64> = PolyCone::coordinate(2);
        let interval = OrderInterval::new(
            cone,
            Vector::from_f64s(&[1.0, 0.0]),
            Vector::from_f64s(&[0.0, 1.0]),
        )
        .unwrap();
        let q = SeminormSpec::sup_norm(2);
        assert_eq!(
            o_bounded_sup(&interval, &q, 10, 1).unwrap_err(),
            Error::IncomparableEndpoints
        );
    }

    #[test]
    fn sampled_fallback_for_non_simplicial() {
        // Three generators in R²: not simplicial, falls back to sampling.
        let cone: PolyCone<f64> = PolyCone::new(
            2,
            vec![
                Vector::from_f64s(&[1.0, 0.0]),
                Vector::from_f64s(&[0.0, 1.0]),
                Vector::from_f64s(&[1.0, 1.0]),
            ],
        )
        .unwrap();
        let interval = OrderInterval::new(
            cone,
            Vector::from_f64s(&[0.0, 0.0]),
            Vector::from_f64s(&[1.0, 1.0]),
        )
        .unwrap();
        let q = SeminormSpec::sup_norm(2);
        let r = o_bounded_sup(&interval, &q, 500, 9).unwrap();
        assert!(!r.certified);
        assert!(r.sup <= 1.0 + 1e-9);
        assert!(r.sup > 0.8, "sampling should get near the sup, got {}", r.sup);
    }
}
