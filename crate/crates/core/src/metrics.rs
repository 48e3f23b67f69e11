//! Lipschitz behavior under non-norm metrics: the ℓ^p quasinorm metric for
//! 0 < p < 1 on truncated sequence space, the graduated metric built from a
//! countable seminorm family, and the cube metric on the line (the standard
//! failure case for translation invariance).

use serde::{Deserialize, Serialize};

use crate::certify::{
    output_abs_bounds, BoundStatus, CertConstant, CertInputs, Formula, LipschitzCertificate,
    Region, RegionGauge, TargetGauge,
};
use crate::convex::ConvexMap;
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Real;
use crate::seminorm::SeminormSpec;
use crate::vector::Vector;

/// Translation-invariant metrics (and one deliberately non-invariant one).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Metric<F> {
    /// `d(x,y) = Σ_k |y_k − x_k|^p` on the first `dim` coordinates,
    /// 0 < p < 1.
    LpQuasi { p: F, dim: usize },
    /// `d(x,y) = Σ_n 2^{-n} p_n(x−y) / (1 + p_n(x−y))`, n starting at 1.
    Graduated { seminorms: Vec<SeminormSpec<F>> },
    /// `d(x,y) = |x³ − y³|` on the reals. Not translation invariant.
    Cube,
}

impl<F: Real> Metric<F> {
    pub fn dim(&self) -> Result<usize> {
        match self {
            Metric::LpQuasi { dim, .. } => Ok(*dim),
            Metric::Graduated { seminorms } => match seminorms.first() {
                Some(SeminormSpec::WeightedSup { weights })
                | Some(SeminormSpec::WeightedL1 { weights }) => Ok(weights.dim()),
                Some(SeminormSpec::MinkowskiPolytope { vertices }) => {
                    Ok(vertices.first().map_or(0, Vector::dim))
                }
                Some(SeminormSpec::MaxOf { .. }) | None => Err(Error::Input(
                    "graduated metric needs at least one seminorm with an explicit dimension"
                        .into(),
                )),
            },
            Metric::Cube => Ok(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Metric::LpQuasi { p, dim } => {
                if *p <= F::zero() || *p >= F::one() {
                    return Err(Error::Input("ℓ^p metric needs 0 < p < 1".into()));
                }
                if *dim == 0 {
                    return Err(Error::Input("ℓ^p truncation length must be positive".into()));
                }
                Ok(())
            }
            Metric::Graduated { seminorms } => {
                if seminorms.is_empty() {
                    return Err(Error::Input("graduated metric needs seminorms".into()));
                }
                let dim = self.dim()?;
                for s in seminorms {
                    s.validate(dim)?;
                }
                Ok(())
            }
            Metric::Cube => Ok(()),
        }
    }

    pub fn eval(&self, x: &Vector<F>, y: &Vector<F>) -> Result<F> {
        let dim = self.dim()?;
        x.check_dim(dim)?;
        y.check_dim(dim)?;
        match self {
            Metric::LpQuasi { p, .. } => Ok((0..dim)
                .map(|k| (y[k] - x[k]).abs().powf(*p))
                .sum()),
            Metric::Graduated { seminorms } => {
                let diff = y - x;
                let mut d = F::zero();
                let mut weight = F::one();
                for s in seminorms {
                    weight = weight * F::of(0.5);
                    let v = s.eval(&diff)?;
                    d = d + weight * v / (F::one() + v);
                }
                Ok(d)
            }
            Metric::Cube => {
                let cube = |t: F| t * t * t;
                Ok((cube(x[0]) - cube(y[0])).abs())
            }
        }
    }

    /// Sample a point of the closed metric ball around `center`.
    ///
    /// For the ℓ^p metric the per-coordinate p-th powers are drawn uniformly
    /// from the simplex `{s ≥ 0 : Σ s_k ≤ radius}` (covers the ball, not
    /// volume-uniform); the other metrics use rejection.
    pub fn sample_ball(&self, center: &Vector<F>, radius: F, rng: &mut Rng) -> Result<Vector<F>> {
        let dim = self.dim()?;
        center.check_dim(dim)?;
        match self {
            Metric::LpQuasi { p, .. } => {
                let mut exps: Vec<f64> = (0..=dim)
                    .map(|_| -(1.0 - rng.unit_f64()).ln())
                    .collect();
                let total: f64 = exps.iter().sum();
                exps.truncate(dim);
                let inv_p = F::one() / *p;
                Ok(Vector::new(
                    (0..dim)
                        .map(|k| {
                            let share = radius * F::of(exps[k] / total);
                            center[k] + F::of(rng.sign_f64()) * share.powf(inv_p)
                        })
                        .collect(),
                ))
            }
            Metric::Graduated { .. } => {
                // d < 1 always; rejection from a heuristic box.
                let half = F::of(4.0);
                for _ in 0..2000 {
                    let x = Vector::new(
                        (0..dim)
                            .map(|k| center[k] + F::of(rng.range_f64(-1.0, 1.0)) * half)
                            .collect(),
                    );
                    if self.eval(center, &x)? <= radius {
                        return Ok(x);
                    }
                }
                Ok(center.clone())
            }
            Metric::Cube => {
                let c3 = center[0] * center[0] * center[0];
                let lo = (c3 - radius).cbrt();
                let hi = (c3 + radius).cbrt();
                Ok(Vector::new(vec![
                    lo + F::of(rng.unit_f64()) * (hi - lo),
                ]))
            }
        }
    }

    /// Axis-aligned half-widths of a box containing the ball, when one is
    /// cheaply available.
    pub fn ball_halfwidths(&self, radius: F) -> Result<Option<Vec<F>>> {
        match self {
            Metric::LpQuasi { p, dim } => {
                // |Δ_k|^p ≤ d ≤ radius pointwise.
                Ok(Some(vec![radius.powf(F::one() / *p); *dim]))
            }
            Metric::Graduated { .. } => Ok(None),
            Metric::Cube => Ok(None),
        }
    }
}

/// Certify `|f(x) − f(y)| ≤ (4a/r)·d(x,y)` on the quarter ball
/// `V = {d(x0,·) ≤ r/4}` from the bound `|f| ≤ a` on `U = {d(x0,·) ≤ r}`.
pub fn lp_certify<F: Real>(
    f: &ConvexMap<F>,
    metric: &Metric<F>,
    x0: &Vector<F>,
    r: F,
    a: Option<F>,
    samples: usize,
    seed: u64,
) -> Result<LipschitzCertificate<F>> {
    metric.validate()?;
    let (p_exp, dim) = match metric {
        Metric::LpQuasi { p, dim } => (*p, *dim),
        _ => {
            return Err(Error::Input(
                "lp_certify needs the ℓ^p quasinorm metric".into(),
            ))
        }
    };
    let _ = p_exp;
    if f.target_dim() != 1 {
        return Err(Error::Input("lp_certify needs a scalar map".into()));
    }
    x0.check_dim(dim)?;
    if r <= F::zero() {
        return Err(Error::Input("lp_certify needs r > 0".into()));
    }

    let outer = Region {
        center: x0.clone(),
        radius: r,
        gauge: RegionGauge::metric(metric.clone()),
        points: None,
    };
    let mut rng = Rng::new(seed);
    let (a_bound, status) = match a {
        Some(a) => {
            if a < F::zero() {
                return Err(Error::Input("bound a must be nonnegative".into()));
            }
            // Sampled precondition |f| ≤ a on U.
            for _ in 0..samples {
                let x = outer.sample(&mut rng)?;
                if !f.domain.contains(&x)? {
                    continue;
                }
                let v = f.evaluate(&x)?[0].abs();
                if v > a * (F::one() + F::CHECK_TOL) + F::CHECK_TOL {
                    return Err(Error::Refused {
                        detail: format!("|f| ≤ a violated: |f| = {v} > a = {a}"),
                        witness: x.0.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(),
                    });
                }
            }
            (a, BoundStatus::Sampled)
        }
        None => {
            let (bounds, status) = output_abs_bounds(f, &outer, samples, seed)?;
            (bounds[0], status)
        }
    };

    let four = F::of(4.0);
    Ok(LipschitzCertificate {
        formula: Formula::LpQuasinorm,
        constant: CertConstant::Scalar(four * a_bound / r),
        region: Region {
            center: x0.clone(),
            radius: r / four,
            gauge: RegionGauge::metric(metric.clone()),
            points: None,
        },
        target: TargetGauge::seminorm(SeminormSpec::abs()),
        inputs: CertInputs {
            big_r: Some(r),
            r: Some(r / four),
            a_bound: Some(a_bound),
            truncation: Some(dim),
            ..CertInputs::none()
        },
        beta_status: Some(status),
        oracle: None,
    })
}

/// Certify `|f(x) − f(y)| ≤ (3·L_m·2^m)·d(x,y)` on a `p_m`-ball of radius
/// at most 1, given a prior seminorm certificate `|f(x)−f(y)| ≤ L_m·p_m`.
pub fn lcs_certify<F: Real>(
    f: &ConvexMap<F>,
    metric: &Metric<F>,
    prior: Option<&LipschitzCertificate<F>>,
    x0: &Vector<F>,
    rho: F,
    m_index: usize,
) -> Result<LipschitzCertificate<F>> {
    metric.validate()?;
    let seminorms = match metric {
        Metric::Graduated { seminorms } => seminorms,
        _ => {
            return Err(Error::Input(
                "lcs_certify needs the graduated metric".into(),
            ))
        }
    };
    if f.target_dim() != 1 {
        return Err(Error::Input("lcs_certify needs a scalar map".into()));
    }
    if m_index == 0 || m_index > seminorms.len() {
        return Err(Error::Input(format!(
            "seminorm index m must be in 1..={}",
            seminorms.len()
        )));
    }
    let p_m = &seminorms[m_index - 1];
    let prior = prior.ok_or_else(|| {
        Error::Input("prior seminorm certificate missing (run certify_ball first)".into())
    })?;
    let l_m = match prior.constant {
        CertConstant::Scalar(l) => l,
        CertConstant::Lattice(_) => {
            return Err(Error::Input("prior certificate must carry a scalar constant".into()))
        }
    };
    match &prior.region.gauge {
        RegionGauge::Seminorm { seminorm } if seminorm == p_m => {}
        _ => {
            return Err(Error::Input(
                "prior certificate must be a ball certificate in the m-th seminorm".into(),
            ))
        }
    }
    if (&prior.region.center - x0).sup_norm() > F::TIGHT_TOL * (F::one() + x0.sup_norm()) {
        return Err(Error::Input(
            "prior certificate must be centered at the same point".into(),
        ));
    }
    if rho <= F::zero() || rho > F::one() || rho > prior.region.radius * (F::one() + F::TIGHT_TOL) {
        return Err(Error::Input(
            "inner ball must satisfy p_m(x−x0) ≤ 1 and fit inside the prior region".into(),
        ));
    }

    let two_pow_m = F::of_usize(1usize << m_index);
    let constant = F::of(3.0) * l_m * two_pow_m;
    Ok(LipschitzCertificate {
        formula: Formula::LcsGraduated,
        constant: CertConstant::Scalar(constant),
        region: Region {
            center: x0.clone(),
            radius: rho,
            gauge: RegionGauge::seminorm(p_m.clone()),
            points: None,
        },
        target: TargetGauge::seminorm(SeminormSpec::abs()),
        inputs: CertInputs {
            r: Some(rho),
            l_m: Some(l_m),
            m_index: Some(m_index),
            ..CertInputs::none()
        },
        beta_status: prior.beta_status,
        oracle: None,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonLipschitzWitness<F> {
    pub x: F,
    pub y: F,
    pub ratio: F,
}

/// Witness that the identity map is not Lipschitz at 0 for the cube metric:
/// points x, y near 0 with `|x − y| / |x³ − y³| > M`. With y = 0 the ratio is
/// `1/(x² + xy + y²) = 1/x²`; x starts at `min(1, 1/√(2M))` and is halved
/// until the ratio strictly exceeds M.
pub fn nonlipschitz_witness<F: Real>(m: F) -> Result<NonLipschitzWitness<F>> {
    if m <= F::zero() {
        return Err(Error::Input("witness threshold M must be positive".into()));
    }
    let mut x = (F::one() / (F::of(2.0) * m).sqrt()).min(F::one());
    let y = F::zero();
    let ratio_at = |x: F| F::one() / (x * x + x * y + y * y);
    let mut ratio = ratio_at(x);
    while ratio <= m {
        x = x * F::of(0.5);
        ratio = ratio_at(x);
    }
    Ok(NonLipschitzWitness { x, y, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_metric_values() {
        let d: Metric<f64> = Metric::LpQuasi { p: 0.5, dim: 2 };
        let x = Vector::from_f64s(&[1.0, 0.0]);
        let y = Vector::from_f64s(&[0.0, 0.0]);
        assert_eq!(d.eval(&x, &y).unwrap(), 1.0);
        // Scaling law d(λx, λy) = |λ|^p d(x, y).
        let lam = 3.0f64;
        let dl = d.eval(&x.scale(lam), &y.scale(lam)).unwrap();
        assert!((dl - lam.powf(0.5) * 1.0).abs() < 1e-12);
    }

    #[test]
    fn graduated_metric_value() {
        // p_n(x) = |x_n|: d((1,1), 0) = ½·½ + ¼·½ = 0.375.
        let d: Metric<f64> = Metric::Graduated {
            seminorms: vec![
                SeminormSpec::WeightedSup {
                    weights: Vector::from_f64s(&[1.0, 0.0]),
                },
                SeminormSpec::WeightedSup {
                    weights: Vector::from_f64s(&[0.0, 1.0]),
                },
            ],
        };
        let x = Vector::from_f64s(&[1.0, 1.0]);
        let y = Vector::from_f64s(&[0.0, 0.0]);
        assert_eq!(d.eval(&x, &y).unwrap(), 0.375);
        // Bounded below 1 and zero only at zero difference.
        assert!(d.eval(&x, &y).unwrap() < 1.0);
        assert_eq!(d.eval(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn cube_metric_value() {
        let d: Metric<f64> = Metric::Cube;
        assert_eq!(
            d.eval(&Vector::from_f64s(&[2.0]), &Vector::from_f64s(&[1.0]))
                .unwrap(),
            7.0
        );
        // Not translation invariant: shift by 1.
        let x = Vector::from_f64s(&[0.0]);
        let y = Vector::from_f64s(&[1.0]);
        let z = Vector::from_f64s(&[1.0]);
        let base = d.eval(&x, &y).unwrap();
        let shifted = d.eval(&(&x + &z), &(&y + &z)).unwrap();
        assert_ne!(base, shifted);
    }

    #[test]
    fn lp_ball_sampler_stays_inside() {
        let d: Metric<f64> = Metric::LpQuasi { p: 0.5, dim: 4 };
        let c = Vector::from_f64s(&[0.1, -0.2, 0.0, 0.3]);
        let mut rng = Rng::new(17);
        for _ in 0..500 {
            let x = d.sample_ball(&c, 0.8, &mut rng).unwrap();
            assert!(d.eval(&c, &x).unwrap() <= 0.8 + 1e-9);
        }
    }

    #[test]
    fn witness_beats_threshold() {
        for m in [1.0, 100.0, 1e6] {
            let w: NonLipschitzWitness<f64> = nonlipschitz_witness(m).unwrap();
            assert!(w.ratio > m, "ratio {} must exceed {m}", w.ratio);
            // Contract: the ratio really is |x−y| / d_cube(x,y).
            let d: Metric<f64> = Metric::Cube;
            let dv = d
                .eval(&Vector::from_f64s(&[w.x]), &Vector::from_f64s(&[w.y]))
                .unwrap();
            assert!(((w.x - w.y).abs() / dv - w.ratio).abs() < 1e-6 * w.ratio);
        }
        // M = 1: x = 1/√2, ratio = 2.
        let w: NonLipschitzWitness<f64> = nonlipschitz_witness(1.0).unwrap();
        assert!((w.x - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((w.ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_p_rejected() {
        let d: Metric<f64> = Metric::LpQuasi { p: 1.5, dim: 2 };
        assert!(d.validate().is_err());
    }

    #[test]
    fn lp_certificate_cases() {
        use crate::certify::empirical_lipschitz;
        use crate::cone::PolyCone;
        use crate::convex::{AffinePiece, ConvexMap, Domain};

        let metric: Metric<f64> = Metric::LpQuasi { p: 0.5, dim: 2 };
        // f ≡ 0 → L = 0.
        let zero: ConvexMap<f64> = ConvexMap::max_affine(
            vec![vec![AffinePiece {
                weights: Vector::from_f64s(&[0.0, 0.0]),
                offset: 0.0,
            }]],
            Domain::wide_box(2, 100.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        let cert = lp_certify(&zero, &metric, &Vector::zeros(2), 1.0, None, 200, 3).unwrap();
        assert_eq!(cert.constant.sup_value(), 0.0);
        assert_eq!(cert.inputs.truncation, Some(2));

        // f(x) = x₁ + x₂ with a computed by the bound machinery.
        let sum: ConvexMap<f64> = ConvexMap::max_affine(
            vec![vec![AffinePiece {
                weights: Vector::from_f64s(&[1.0, 1.0]),
                offset: 0.0,
            }]],
            Domain::wide_box(2, 100.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        let cert = lp_certify(&sum, &metric, &Vector::zeros(2), 1.0, None, 500, 3).unwrap();
        let oracle = empirical_lipschitz(
            &sum,
            &cert.region,
            &SeminormSpec::abs(),
            &crate::certify::RegionGauge::metric(metric),
            5000,
            9,
        )
        .unwrap();
        assert!(cert.dominates(oracle.max_ratio));
    }

    #[test]
    fn lcs_certificate_constants() {
        use crate::certify::{certify_ball, CheckConfig};
        use crate::cone::PolyCone;
        use crate::convex::{AffinePiece, ConvexMap, Domain};

        // f = ¼‖x‖∞ keeps the prior bounds exact.
        let quarter_sup = |scale: f64| -> ConvexMap<f64> {
            ConvexMap::max_affine(
                vec![vec![
                    AffinePiece {
                        weights: Vector::from_f64s(&[scale, 0.0]),
                        offset: 0.0,
                    },
                    AffinePiece {
                        weights: Vector::from_f64s(&[-scale, 0.0]),
                        offset: 0.0,
                    },
                    AffinePiece {
                        weights: Vector::from_f64s(&[0.0, scale]),
                        offset: 0.0,
                    },
                    AffinePiece {
                        weights: Vector::from_f64s(&[0.0, -scale]),
                        offset: 0.0,
                    },
                ]],
                Domain::wide_box(2, 100.0),
                PolyCone::coordinate(1),
            )
            .unwrap()
        };
        let seminorms = vec![
            SeminormSpec::sup_norm(2),
            SeminormSpec::WeightedSup {
                weights: Vector::from_f64s(&[2.0, 2.0]),
            },
            SeminormSpec::WeightedSup {
                weights: Vector::from_f64s(&[1.0, 2.0]),
            },
        ];
        let metric = Metric::Graduated {
            seminorms: seminorms.clone(),
        };
        let cfg = CheckConfig {
            samples: 300,
            seed: 5,
        };

        // m = 1: f = ¼‖x‖∞ with β = 1 on the sup ball R = 4, r = 3 gives
        // L₁ = 2β/(R−r) = 2, so L = 3·2·2¹ = 12.
        let f = quarter_sup(0.25);
        let prior = certify_ball(
            &f,
            &SeminormSpec::abs(),
            &seminorms[0],
            &Vector::zeros(2),
            4.0,
            3.0,
            Some(1.0),
            &cfg,
        )
        .unwrap();
        assert_eq!(prior.constant.sup_value(), 2.0);
        let cert = lcs_certify(&f, &metric, Some(&prior), &Vector::zeros(2), 0.9, 1).unwrap();
        assert_eq!(cert.constant.sup_value(), 12.0);

        // m = 3: the p₃-ball of radius 4 caps ¼‖x‖∞ at 1, so R = 4, r = 2
        // gives L₃ = 2·1/2 = 1 and L = 3·1·2³ = 24.
        let prior3 = certify_ball(
            &f,
            &SeminormSpec::abs(),
            &seminorms[2],
            &Vector::zeros(2),
            4.0,
            2.0,
            Some(1.0),
            &cfg,
        )
        .unwrap();
        assert_eq!(prior3.constant.sup_value(), 1.0);
        let cert3 = lcs_certify(&f, &metric, Some(&prior3), &Vector::zeros(2), 0.9, 3).unwrap();
        assert_eq!(cert3.constant.sup_value(), 24.0);

        // Zero map: L_m = 0 and L = 0.
        let zero = quarter_sup(0.0);
        let prior0 = certify_ball(
            &zero,
            &SeminormSpec::abs(),
            &seminorms[0],
            &Vector::zeros(2),
            4.0,
            3.0,
            None,
            &cfg,
        )
        .unwrap();
        assert_eq!(prior0.constant.sup_value(), 0.0);
        let cert0 = lcs_certify(&zero, &metric, Some(&prior0), &Vector::zeros(2), 0.9, 1).unwrap();
        assert_eq!(cert0.constant.sup_value(), 0.0);
        // Missing prior is an input error.
        assert!(lcs_certify(&zero, &metric, None, &Vector::zeros(2), 0.9, 1).is_err());
    }
}
