//! Runnable invariant suites: lattice identities, cone axioms, seminorm
//! axioms, convexity, fullness and metric laws, each reported as a
//! pass/fail row with the worst observed residual.

use serde::{Deserialize, Serialize};

use crate::cone::PolyCone;
use crate::convex::ConvexMap;
use crate::error::Result;
use crate::lattice::{chain_abs_bound_violation, identity_residuals};
use crate::metrics::Metric;
use crate::rng::Rng;
use crate::scalar::Real;
use crate::seminorm::{c_full_violation, SeminormSpec};
use crate::slope::epigraph_midpoint_violation;
use crate::vector::Vector;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRow<F> {
    pub suite: String,
    pub check: String,
    pub cases: usize,
    pub failures: usize,
    pub worst_residual: F,
    pub pass: bool,
}

impl<F: Real> CheckRow<F> {
    fn new(suite: &str, check: &str, cases: usize, failures: usize, worst: F, pass: bool) -> Self {
        CheckRow {
            suite: suite.into(),
            check: check.into(),
            cases,
            failures,
            worst_residual: worst,
            pass,
        }
    }
}

fn dyadic_vector<F: Real>(dim: usize, rng: &mut Rng) -> Vector<F> {
    Vector::new((0..dim).map(|_| F::of(rng.dyadic_f64())).collect())
}

/// Lattice identity rows. Samples are dyadic rationals so that sums,
/// differences and halving are exact in floating point and the identities
/// (i) and (iv) can be asserted with zero tolerance.
pub fn lattice_identity_rows<F: Real>(
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckRow<F>>> {
    let mut rng = Rng::new(seed);
    let mut worst_i = F::zero();
    let mut worst_ii = F::zero();
    let mut fail_iii = 0;
    let mut worst_iv = F::zero();
    let mut worst_v = F::zero();
    for _ in 0..samples {
        let x = dyadic_vector::<F>(dim, &mut rng);
        let y = dyadic_vector::<F>(dim, &mut rng);
        let r = identity_residuals(&x, &y)?;
        for v in [r.decomposition, r.disjointness, r.abs_sum, r.abs_symmetry] {
            if v > worst_i {
                worst_i = v;
            }
        }
        for v in [r.triangle_lower, r.triangle_upper] {
            if v > worst_ii {
                worst_ii = v;
            }
        }
        if !r.abs_bound_equiv {
            fail_iii += 1;
        }
        for v in [r.sup_formula, r.inf_formula] {
            if v > worst_iv {
                worst_iv = v;
            }
        }
        // Chain x ≤ y ≤ z built with nonnegative dyadic steps.
        let base = dyadic_vector::<F>(dim, &mut rng);
        let step1 = dyadic_vector::<F>(dim, &mut rng).abs();
        let step2 = dyadic_vector::<F>(dim, &mut rng).abs();
        let mid = &base + &step1;
        let top = &mid + &step2;
        let v = chain_abs_bound_violation(&base, &mid, &top)?;
        if v > worst_v {
            worst_v = v;
        }
    }
    let tight = F::TIGHT_TOL;
    Ok(vec![
        CheckRow::new(
            "lattice",
            "decomposition x = x+ − x−, |x| = x+ + x−",
            samples,
            0,
            worst_i,
            worst_i == F::zero(),
        ),
        CheckRow::new(
            "lattice",
            "triangle ||x|−|y|| ≤ |x+y| ≤ |x|+|y|",
            samples,
            0,
            worst_ii,
            worst_ii == F::zero(),
        ),
        CheckRow::new(
            "lattice",
            "|x| ≤ a ⟺ (x ≤ a and −x ≤ a)",
            samples,
            fail_iii,
            F::zero(),
            fail_iii == 0,
        ),
        CheckRow::new(
            "lattice",
            "|x|∨|y| = ½[|x+y|+|x−y|] and ∧ mirror",
            samples,
            0,
            worst_iv,
            worst_iv == F::zero(),
        ),
        CheckRow::new(
            "lattice",
            "x ≤ y ≤ z ⟹ |y| ≤ |x|∨|z|",
            samples,
            0,
            worst_v,
            worst_v <= tight,
        ),
    ])
}

/// Cone axiom rows: conic-combination closure, preorder laws, and the
/// antisymmetry ⟺ pointedness equivalence.
pub fn cone_rows<F: Real>(
    cone: &PolyCone<F>,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckRow<F>>> {
    cone.validate()?;
    let mut rng = Rng::new(seed);
    let dim = cone.dim;
    let combo = |rng: &mut Rng| -> Vector<F> {
        let mut v = Vector::zeros(dim);
        for g in &cone.generators {
            v = v.add_scaled(F::of(rng.unit_f64()) / g.sup_norm(), g);
        }
        v
    };
    let mut closure_fail = 0;
    let mut transitive_fail = 0;
    let mut reflexive_fail = 0;
    for _ in 0..samples {
        let v = combo(&mut rng);
        let w = combo(&mut rng);
        let a = F::of(rng.range_f64(0.0, 3.0));
        let b = F::of(rng.range_f64(0.0, 3.0));
        if !cone.contains(&v.scale(a).add_scaled(b, &w))? {
            closure_fail += 1;
        }
        let x = dyadic_vector::<F>(dim, &mut rng);
        if !cone.order_le(&x, &x)? {
            reflexive_fail += 1;
        }
        let y = &x + &combo(&mut rng);
        let z = &y + &combo(&mut rng);
        if !(cone.order_le(&x, &y)? && cone.order_le(&y, &z)? && cone.order_le(&x, &z)?) {
            transitive_fail += 1;
        }
    }
    let pointed = cone.is_pointed()?;
    // Constructive antisymmetry witness: a generator with −g ∈ C breaks it.
    let mut antisym_witness = false;
    for g in &cone.generators {
        if cone.contains(&(-g))? {
            antisym_witness = true;
            break;
        }
    }
    Ok(vec![
        CheckRow::new(
            "cone",
            "αv + βw stays in C",
            samples,
            closure_fail,
            F::zero(),
            closure_fail == 0,
        ),
        CheckRow::new(
            "cone",
            "order is reflexive",
            samples,
            reflexive_fail,
            F::zero(),
            reflexive_fail == 0,
        ),
        CheckRow::new(
            "cone",
            "order is transitive on sampled chains",
            samples,
            transitive_fail,
            F::zero(),
            transitive_fail == 0,
        ),
        CheckRow::new(
            "cone",
            "antisymmetric iff pointed",
            1,
            usize::from(pointed == antisym_witness),
            F::zero(),
            pointed != antisym_witness,
        ),
    ])
}

/// Seminorm axiom rows: nonnegativity, absolute homogeneity (relative
/// tolerance), subadditivity (one-sided).
pub fn seminorm_rows<F: Real>(
    p: &SeminormSpec<F>,
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckRow<F>>> {
    p.validate(dim)?;
    let mut rng = Rng::new(seed);
    let mut neg_fail = 0;
    let mut worst_hom = F::zero();
    let mut worst_sub = F::zero();
    for _ in 0..samples {
        let x = Vector::new(
            (0..dim)
                .map(|_| F::of(rng.range_f64(-2.0, 2.0)))
                .collect::<Vec<F>>(),
        );
        let y = Vector::new(
            (0..dim)
                .map(|_| F::of(rng.range_f64(-2.0, 2.0)))
                .collect::<Vec<F>>(),
        );
        let lam = F::of(rng.range_f64(-3.0, 3.0));
        let px = p.eval(&x)?;
        if px < F::zero() {
            neg_fail += 1;
        }
        let hom = (p.eval(&x.scale(lam))? - lam.abs() * px).abs() / (F::one() + px);
        if hom > worst_hom {
            worst_hom = hom;
        }
        let sub = (p.eval(&(&x + &y))? - px - p.eval(&y)?) / (F::one() + px);
        if sub > worst_sub {
            worst_sub = sub;
        }
    }
    Ok(vec![
        CheckRow::new("seminorm", "nonnegative", samples, neg_fail, F::zero(), neg_fail == 0),
        CheckRow::new(
            "seminorm",
            "absolutely homogeneous",
            samples,
            0,
            worst_hom,
            worst_hom <= F::CHECK_TOL,
        ),
        CheckRow::new(
            "seminorm",
            "subadditive",
            samples,
            0,
            worst_sub,
            worst_sub <= F::CHECK_TOL,
        ),
    ])
}

/// Fullness row: the gauge inequality q(y) ≤ max{q(x), q(z)} on sampled
/// chains of the given cone.
pub fn fullness_row<F: Real>(
    q: &SeminormSpec<F>,
    cone: &PolyCone<F>,
    samples: usize,
    seed: u64,
) -> Result<CheckRow<F>> {
    let mut rng = Rng::new(seed);
    let violation = c_full_violation(q, cone, &mut rng, samples)?;
    Ok(CheckRow::new(
        "minkowski",
        "full-set gauge inequality on chains",
        samples,
        usize::from(violation.is_some()),
        F::zero(),
        violation.is_none(),
    ))
}

/// Convexity row ((e1) on random triples) and the epigraph equivalence row.
pub fn convexity_rows<F: Real>(
    f: &ConvexMap<F>,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckRow<F>>> {
    let report = f.check_convexity(samples, seed)?;
    let mut rows = vec![CheckRow::new(
        "convex-map",
        "f((1−α)x₁+αx₂) ≤_C (1−α)f(x₁)+αf(x₂)",
        samples,
        usize::from(!report.holds),
        (-report.min_margin).max(F::zero()),
        report.holds,
    )];
    if f.target_dim() == 1 {
        let epi_violation = epigraph_midpoint_violation(f, samples, seed ^ 0xe19)?;
        let epi_convex = epi_violation.is_none();
        rows.push(CheckRow::new(
            "convex-map",
            "epigraph midpoint-convexity matches (e1)",
            samples,
            usize::from(epi_convex != report.holds),
            F::zero(),
            epi_convex == report.holds,
        ));
    }
    Ok(rows)
}

/// Metric law rows: translation invariance on a dyadic grid (exact for the
/// ℓ^p and graduated metrics, expected to fail for the cube metric), the
/// ℓ^p scaling law, and the graduated-metric bounds.
pub fn metric_rows<F: Real>(
    metric: &Metric<F>,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckRow<F>>> {
    metric.validate()?;
    let dim = metric.dim()?;
    let mut rng = Rng::new(seed);
    let mut worst_translation = F::zero();
    let mut translation_failures = 0;
    for _ in 0..samples {
        let x = dyadic_vector::<F>(dim, &mut rng);
        let y = dyadic_vector::<F>(dim, &mut rng);
        let z = dyadic_vector::<F>(dim, &mut rng);
        let base = metric.eval(&x, &y)?;
        let shifted = metric.eval(&(&x + &z), &(&y + &z))?;
        let diff = (base - shifted).abs();
        if diff > worst_translation {
            worst_translation = diff;
        }
        if diff != F::zero() {
            translation_failures += 1;
        }
    }
    let mut rows = Vec::new();
    match metric {
        Metric::Cube => rows.push(CheckRow::new(
            "metric",
            "cube metric fails translation invariance (witness expected)",
            samples,
            usize::from(translation_failures == 0),
            worst_translation,
            translation_failures > 0,
        )),
        _ => rows.push(CheckRow::new(
            "metric",
            "translation invariance d(x+z, y+z) = d(x,y)",
            samples,
            translation_failures,
            worst_translation,
            translation_failures == 0,
        )),
    }
    if let Metric::LpQuasi { p, .. } = metric {
        let mut worst = F::zero();
        for _ in 0..samples.min(2000) {
            let x = dyadic_vector::<F>(dim, &mut rng);
            let y = dyadic_vector::<F>(dim, &mut rng);
            let lam = F::of(rng.range_f64(-2.0, 2.0));
            let lhs = metric.eval(&x.scale(lam), &y.scale(lam))?;
            let rhs = lam.abs().powf(*p) * metric.eval(&x, &y)?;
            let rel = (lhs - rhs).abs() / (F::one() + rhs);
            if rel > worst {
                worst = rel;
            }
        }
        rows.push(CheckRow::new(
            "metric",
            "ℓ^p scaling d(λx, λy) = |λ|^p d(x,y)",
            samples.min(2000),
            0,
            worst,
            worst <= F::CHECK_TOL,
        ));
    }
    if let Metric::Graduated { .. } = metric {
        let mut bound_fail = 0;
        let mut zero_fail = 0;
        for _ in 0..samples.min(2000) {
            let x = dyadic_vector::<F>(dim, &mut rng);
            let y = dyadic_vector::<F>(dim, &mut rng);
            let d = metric.eval(&x, &y)?;
            if !(F::zero()..F::one()).contains(&d) {
                bound_fail += 1;
            }
            if metric.eval(&x, &x)? != F::zero() {
                zero_fail += 1;
            }
        }
        rows.push(CheckRow::new(
            "metric",
            "graduated bounds 0 ≤ d < 1 and d(x,x) = 0",
            samples.min(2000),
            bound_fail + zero_fail,
            F::zero(),
            bound_fail + zero_fail == 0,
        ));
    }
    Ok(rows)
}
