//! Chord and slope diagnostics for convex maps: the four equivalent chord
//! inequalities, p-slopes with their monotonicity contracts, affinity and
//! tail-behavior detection, superadditivity, hypercube upper bounds and
//! epigraph predicates.

use serde::{Deserialize, Serialize};

use crate::convex::{ConvexMap, Section};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Real;
use crate::seminorm::SeminormSpec;
use crate::vector::Vector;

/// Result of checking the four equivalent chord inequalities on t1 < t2 < t3:
///
/// (a) φ(t2) ≤ λφ(t1) + μφ(t3) with λ = (t3−t2)/(t3−t1), μ = (t2−t1)/(t3−t1)
/// (b) slope(t1,t2) ≤ slope(t1,t3)
/// (c) slope(t1,t3) ≤ slope(t2,t3)
/// (d) slope(t1,t2) ≤ slope(t2,t3)
///
/// `margins` are signed order margins (negative beyond tolerance = violation)
/// and `identity_residual` is the defect of the convex-combination identity
/// t2 = λ·t1 + μ·t3.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChordReport<F> {
    pub identity_residual: F,
    pub margins: [F; 4],
    pub holds: [bool; 4],
    pub all_hold: bool,
}

pub fn chord_slope_check<F: Real>(
    section: &Section<F>,
    t1: F,
    t2: F,
    t3: F,
) -> Result<ChordReport<F>> {
    if !(t1 < t2 && t2 < t3) {
        return Err(Error::Input("chord check needs t1 < t2 < t3".into()));
    }
    let v1 = section.value(t1)?;
    let v2 = section.value(t2)?;
    let v3 = section.value(t3)?;

    let lambda = (t3 - t2) / (t3 - t1);
    let mu = (t2 - t1) / (t3 - t1);
    let identity_residual = (lambda * t1 + mu * t3 - t2).abs();

    let s12 = (&v2 - &v1).scale(F::one() / (t2 - t1));
    let s13 = (&v3 - &v1).scale(F::one() / (t3 - t1));
    let s23 = (&v3 - &v2).scale(F::one() / (t3 - t2));
    let chord = v1.scale(lambda).add_scaled(mu, &v3);

    let diffs = [&chord - &v2, &s13 - &s12, &s23 - &s13, &s23 - &s12];
    let scales = [
        chord.sup_norm().max(v2.sup_norm()),
        s13.sup_norm().max(s12.sup_norm()),
        s23.sup_norm().max(s13.sup_norm()),
        s23.sup_norm().max(s12.sup_norm()),
    ];
    let mut margins = [F::zero(); 4];
    let mut holds = [false; 4];
    for (i, diff) in diffs.iter().enumerate() {
        let m = section.order_margin(diff)?;
        margins[i] = m;
        holds[i] = m >= -F::CHECK_TOL * (F::one() + scales[i]);
    }
    Ok(ChordReport {
        identity_residual,
        margins,
        holds,
        all_hold: holds.iter().all(|&h| h),
    })
}

/// The p-slope of `f` along the line through x, y at base parameter t0:
/// `(f(z_t) − f(x0)) / p(z_t − x0)` with `z_t = x + t(y−x)`.
///
/// Monotone in t on either side of t0, and `−Δ(t) ≤_C Δ(t')` across t0;
/// callers check those contracts with the returned values.
pub fn p_slope<F: Real>(
    f: &ConvexMap<F>,
    p: &SeminormSpec<F>,
    x: &Vector<F>,
    y: &Vector<F>,
    t0: F,
    t: F,
) -> Result<Vector<F>> {
    p.validate(f.domain_dim())?;
    x.check_dim(f.domain_dim())?;
    y.check_dim(f.domain_dim())?;
    let dir = y - x;
    if p.eval(&dir)? <= F::TIGHT_TOL {
        return Err(Error::DegenerateDirection);
    }
    if t == t0 {
        return Err(Error::Input("p-slope needs t ≠ t0".into()));
    }
    let x0 = x.add_scaled(t0, &dir);
    let zt = x.add_scaled(t, &dir);
    let denom = p.eval(&(&zt - &x0))?;
    let num = &f.evaluate(&zt)? - &f.evaluate(&x0)?;
    Ok(num.scale(F::one() / denom))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineReport<F> {
    pub affine: bool,
    pub midpoint_residual: F,
    /// Max chord defect over the verification grid, present when affine.
    pub grid_max_residual: Option<F>,
}

/// One interior agreement with the chord forces agreement on all of [a, b];
/// when the test point agrees, the conclusion is verified on a grid.
pub fn affine_detect<F: Real>(
    section: &Section<F>,
    a: F,
    b: F,
    t0: F,
    grid: usize,
) -> Result<AffineReport<F>> {
    if a >= b {
        return Err(Error::Input("affine_detect needs a < b".into()));
    }
    if t0 <= F::zero() || t0 >= F::one() {
        return Err(Error::Input("affine_detect needs t0 in (0,1)".into()));
    }
    let fa = section.scalar(a)?;
    let fb = section.scalar(b)?;
    let probe = (F::one() - t0) * a + t0 * b;
    let chord_at = |t: F| fa + (t - a) / (b - a) * (fb - fa);
    let scale = F::one() + fa.abs().max(fb.abs());
    let midpoint_residual = (section.scalar(probe)? - chord_at(probe)).abs();
    if midpoint_residual > F::CHECK_TOL * scale {
        return Ok(AffineReport {
            affine: false,
            midpoint_residual,
            grid_max_residual: None,
        });
    }
    let mut worst = F::zero();
    for k in 0..=grid {
        let t = a + (b - a) * F::of_usize(k) / F::of_usize(grid.max(1));
        let r = (section.scalar(t)? - chord_at(t)).abs();
        if r > worst {
            worst = r;
        }
    }
    Ok(AffineReport {
        affine: true,
        midpoint_residual,
        grid_max_residual: Some(worst),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailDirection {
    /// Strictly increasing on [b, ∞) ∩ domain.
    IncreasingRight,
    /// Strictly decreasing on (−∞, a] ∩ domain.
    DecreasingLeft,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailReport<F> {
    pub direction: TailDirection,
    pub witness_t: F,
    pub witness_value: F,
    /// φ(witness) ≥ M held after the slope extrapolation.
    pub witness_ok: bool,
    /// Strict monotonicity held on the verification grid.
    pub grid_monotone: bool,
}

/// Tail behavior of a scalar section: one strict increase φ(a) < φ(b) forces
/// strict increase past b and unboundedness; the witness parameter comes
/// from the slope extrapolation `φ(a + t(b−a)) ≥ φ(a) + t(φ(b) − φ(a))`.
pub fn tail_behavior<F: Real>(
    section: &Section<F>,
    a: F,
    b: F,
    target: F,
    grid: usize,
) -> Result<TailReport<F>> {
    if a >= b {
        return Err(Error::Input("tail_behavior needs a < b".into()));
    }
    let fa = section.scalar(a)?;
    let fb = section.scalar(b)?;
    let scale = F::one() + fa.abs().max(fb.abs());
    if (fb - fa).abs() <= F::TIGHT_TOL * scale {
        return Err(Error::Input(
            "φ(a) = φ(b): monotone tail hypotheses unmet".into(),
        ));
    }
    let (t_lo, t_hi) = section.t_range()?;
    let increasing = fb > fa;
    let t_witness = (target - fa) / (fb - fa);
    let witness_param = a + t_witness * (b - a);
    if witness_param < t_lo || witness_param > t_hi {
        return Err(Error::Input(format!(
            "witness parameter {witness_param} falls outside the section domain"
        )));
    }
    let witness_value = section.scalar(witness_param)?;
    let witness_ok = witness_value >= target - F::CHECK_TOL * (F::one() + target.abs());

    // Grid-verify strict monotonicity on the relevant tail, clipped to the
    // domain and to a few spans of [a, b].
    let span = (b - a) * F::of(10.0);
    let (g_lo, g_hi) = if increasing {
        (b, (b + span).min(t_hi).max(b))
    } else {
        ((a - span).max(t_lo).min(a), a)
    };
    let mut grid_monotone = true;
    let mut prev: Option<F> = None;
    for k in 0..=grid {
        let t = g_lo + (g_hi - g_lo) * F::of_usize(k) / F::of_usize(grid.max(1));
        let v = section.scalar(t)?;
        if let Some(pv) = prev {
            let ok = if increasing { v > pv } else { v < pv };
            if !ok {
                grid_monotone = false;
            }
        }
        prev = Some(v);
    }
    Ok(TailReport {
        direction: if increasing {
            TailDirection::IncreasingRight
        } else {
            TailDirection::DecreasingLeft
        },
        witness_t: t_witness,
        witness_value,
        witness_ok,
        grid_monotone,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureMode {
    Convex,
    Concave,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuperadditiveReport<F> {
    /// φ(α+β) − φ(α) − φ(β) in convex mode; the negation in concave mode.
    pub additivity_margin: F,
    /// αφ(β) − βφ(α) for α < β, convex mode only.
    pub intermediate_margin: Option<F>,
    pub holds: bool,
}

/// Superadditivity (convex mode) or subadditivity (concave mode) on [0, ∞)
/// for φ with φ(0) = 0, φ > 0 away from 0.
pub fn superadditive_check<F: Real>(
    phi: impl Fn(F) -> Result<F>,
    alpha: F,
    beta: F,
    mode: CurvatureMode,
) -> Result<SuperadditiveReport<F>> {
    if alpha <= F::zero() || beta <= F::zero() {
        return Err(Error::Input("superadditive check needs α, β > 0".into()));
    }
    let zero_val = phi(F::zero())?;
    if zero_val.abs() > F::CHECK_TOL {
        return Err(Error::Input("precondition φ(0) = 0 violated".into()));
    }
    // Positivity away from zero, sampled on a few points of (0, α+β].
    for k in 1..=8 {
        let t = (alpha + beta) * F::of_usize(k) / F::of(8.0);
        if phi(t)? <= F::zero() {
            return Err(Error::Input(format!(
                "precondition φ(t) > 0 violated at t = {t}"
            )));
        }
    }
    let sum = phi(alpha + beta)?;
    let parts = phi(alpha)? + phi(beta)?;
    let scale = F::one() + sum.abs().max(parts.abs());
    let (additivity_margin, intermediate_margin) = match mode {
        CurvatureMode::Convex => {
            let (lo, hi) = if alpha < beta { (alpha, beta) } else { (beta, alpha) };
            let inter = lo * phi(hi)? - hi * phi(lo)?;
            (sum - parts, Some(inter))
        }
        CurvatureMode::Concave => (parts - sum, None),
    };
    let holds = additivity_margin >= -F::CHECK_TOL * scale
        && intermediate_margin.is_none_or(|m| m >= -F::CHECK_TOL * scale);
    Ok(SuperadditiveReport {
        additivity_margin,
        intermediate_margin,
        holds,
    })
}

/// Upper bound of a scalar convex map over the hypercube
/// `K = center ± half_width`: the max over the 2^n vertices dominates all of
/// K by Jensen's inequality.
pub fn hypercube_bound<F: Real>(
    f: &ConvexMap<F>,
    center: &Vector<F>,
    half_width: F,
) -> Result<F> {
    if f.target_dim() != 1 {
        return Err(Error::Input(
            "hypercube_bound needs a scalar-valued map; use hypercube_bound_vector".into(),
        ));
    }
    Ok(hypercube_bound_vector(f, center, half_width)?[0])
}

/// Per-output variant of [`hypercube_bound`].
pub fn hypercube_bound_vector<F: Real>(
    f: &ConvexMap<F>,
    center: &Vector<F>,
    half_width: F,
) -> Result<Vector<F>> {
    center.check_dim(f.domain_dim())?;
    let n = f.domain_dim();
    if n > 20 {
        return Err(Error::Resource(format!(
            "hypercube vertex enumeration capped at dimension 20, got {n}"
        )));
    }
    let mut best = Vector::new(vec![F::neg_infinity(); f.target_dim()]);
    for mask in 0..(1usize << n) {
        let v = Vector::new(
            (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        center[i] + half_width
                    } else {
                        center[i] - half_width
                    }
                })
                .collect(),
        );
        let val = f.evaluate(&v)?;
        best = best.sup(&val);
    }
    Ok(best)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpigraphPoint {
    pub in_epi: bool,
    pub in_strict_epi: bool,
}

/// Membership of `(x, α)` in the epigraph and strict epigraph of a scalar
/// map.
pub fn epigraph_predicates<F: Real>(
    f: &ConvexMap<F>,
    x: &Vector<F>,
    alpha: F,
) -> Result<EpigraphPoint> {
    if f.target_dim() != 1 {
        return Err(Error::Input("epigraph predicates need a scalar map".into()));
    }
    let v = f.evaluate(x)?[0];
    Ok(EpigraphPoint {
        in_epi: v <= alpha,
        in_strict_epi: v < alpha,
    })
}

/// An epigraph point and its level.
pub type EpigraphWitness<F> = (Vector<F>, F, Vector<F>, F);

/// Sampled midpoint-convexity of the epigraph: for random epigraph points
/// (including boundary ones, α = f(x)), the midpoint must stay in the
/// epigraph. Returns the first violation.
pub fn epigraph_midpoint_violation<F: Real>(
    f: &ConvexMap<F>,
    samples: usize,
    seed: u64,
) -> Result<Option<EpigraphWitness<F>>> {
    if f.target_dim() != 1 {
        return Err(Error::Input("epigraph predicates need a scalar map".into()));
    }
    let mut rng = Rng::new(seed);
    let half = F::of(0.5);
    for round in 0..samples {
        let x = f.domain.sample(&mut rng)?;
        let y = f.domain.sample(&mut rng)?;
        let mid = (&x + &y).scale(half);
        if !f.domain.contains(&mid)? {
            continue;
        }
        let fx = f.evaluate(&x)?[0];
        let fy = f.evaluate(&y)?[0];
        // Alternate boundary points (α = f) with interior ones.
        let bump = if round % 2 == 0 {
            F::zero()
        } else {
            F::of(rng.unit_f64())
        };
        let ax = fx + bump;
        let ay = fy + bump;
        let a_mid = (ax + ay) * half;
        let f_mid = f.evaluate(&mid)?[0];
        let scale = F::one() + f_mid.abs().max(a_mid.abs());
        if f_mid > a_mid + F::CHECK_TOL * scale {
            return Ok(Some((x, ax, y, ay)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::PolyCone;
    use crate::convex::fixtures::*;
    use crate::convex::{AffinePiece, Domain, MapBody, QuadraticForm};

    fn square_section() -> Section<f64> {
        Section::of_scalar_map(square_1d(1e6)).unwrap()
    }

    #[test]
    fn chord_on_square() {
        // φ(t) = t² at (0,1,2): (a) compares 1 against 2.
        let s = square_section();
        let r = chord_slope_check(&s, 0.0, 1.0, 2.0).unwrap();
        assert!(r.all_hold);
        assert!((r.margins[0] - 1.0).abs() < 1e-12);
        assert!(r.identity_residual == 0.0);
    }

    #[test]
    fn chord_on_affine_is_tight() {
        let f: ConvexMap<f64> = ConvexMap::max_affine(
            vec![vec![AffinePiece {
                weights: Vector::from_f64s(&[3.0]),
                offset: 1.0,
            }]],
            Domain::wide_box(1, 100.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        let s = Section::of_scalar_map(f).unwrap();
        let r = chord_slope_check(&s, -1.0, 0.5, 2.0).unwrap();
        assert!(r.all_hold);
        for m in r.margins {
            assert!(m.abs() < 1e-9, "affine chords are equalities, got {m}");
        }
    }

    #[test]
    fn chord_vector_section() {
        // φ(t) = (t², |t|) with the coordinate cone at (0,1,2):
        // inequality (d) compares slopes (1,1) ≤ (3,1).
        let square = square_1d(1e6);
        let abs = abs_1d(1e6);
        let f = ConvexMap::composite(vec![square, abs], Domain::wide_box(1, 1e6)).unwrap();
        let s = Section::new(f, Vector::from_f64s(&[0.0]), Vector::from_f64s(&[1.0])).unwrap();
        let v1 = s.value(1.0).unwrap();
        assert_eq!(v1.0, vec![1.0, 1.0]);
        let r = chord_slope_check(&s, 0.0, 1.0, 2.0).unwrap();
        assert!(r.all_hold);
        // (d): s23 − s12 = (3,1) − (1,1) = (2,0); coordinatewise margin 0.
        assert!((r.margins[3] - 0.0).abs() < 1e-12);
    }

    #[test]
    fn chord_rejects_unsorted() {
        let s = square_section();
        assert!(chord_slope_check(&s, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn p_slope_monotone_on_square() {
        // f(t) = t², p = |·|, x = 0, y = 1, t0 = 0: Δ(t) = t.
        let f = square_1d(1e6);
        let p = SeminormSpec::abs();
        let x = Vector::from_f64s(&[0.0]);
        let y = Vector::from_f64s(&[1.0]);
        for t in [0.5, 1.0, 2.0, 7.0] {
            let d = p_slope(&f, &p, &x, &y, 0.0, t).unwrap();
            assert!((d[0] - t).abs() < 1e-12);
        }
        // Across t0: −Δ(−1) = 1 ≤ Δ(1) = 1.
        let left = p_slope(&f, &p, &x, &y, 0.0, -1.0).unwrap();
        let right = p_slope(&f, &p, &x, &y, 0.0, 1.0).unwrap();
        assert!(-left[0] <= right[0] + 1e-12);
    }

    #[test]
    fn p_slope_sup_norm_plateau() {
        // f = ‖·‖∞ from (0,0) towards (1,0): slopes 1 at t = 1 and t' = 2.
        let f = sup_norm_2d(1e6);
        let p = SeminormSpec::sup_norm(2);
        let x = Vector::from_f64s(&[0.0, 0.0]);
        let y = Vector::from_f64s(&[1.0, 0.0]);
        let d1 = p_slope(&f, &p, &x, &y, 0.0, 1.0).unwrap();
        let d2 = p_slope(&f, &p, &x, &y, 0.0, 2.0).unwrap();
        assert!((d1[0] - 1.0).abs() < 1e-12);
        assert!(d1[0] <= d2[0] + 1e-12);
    }

    #[test]
    fn p_slope_degenerate_direction() {
        let f = sup_norm_2d(1e6);
        let p = SeminormSpec::WeightedSup {
            weights: Vector::from_f64s(&[1.0, 0.0]),
        };
        let x = Vector::from_f64s(&[0.0, 0.0]);
        let y = Vector::from_f64s(&[0.0, 1.0]);
        assert_eq!(
            p_slope(&f, &p, &x, &y, 0.0, 1.0).unwrap_err(),
            Error::DegenerateDirection
        );
    }

    #[test]
    fn affine_detect_on_abs_restricted() {
        // |t| on [0,1] agrees with its chord at 0.5, hence everywhere there.
        let s = Section::of_scalar_map(abs_1d(1e6)).unwrap();
        let r = affine_detect(&s, 0.0, 1.0, 0.5, 100).unwrap();
        assert!(r.affine);
        assert!(r.grid_max_residual.unwrap() <= 1e-9);
        // t² does not.
        let s = square_section();
        let r = affine_detect(&s, 0.0, 1.0, 0.5, 100).unwrap();
        assert!(!r.affine);
        assert!((r.midpoint_residual - 0.25).abs() < 1e-12);
    }

    #[test]
    fn affine_detect_constant() {
        let f: ConvexMap<f64> = ConvexMap::max_affine(
            vec![vec![AffinePiece {
                weights: Vector::from_f64s(&[0.0]),
                offset: 4.0,
            }]],
            Domain::wide_box(1, 10.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        let s = Section::of_scalar_map(f).unwrap();
        let r = affine_detect(&s, -1.0, 1.0, 0.25, 50).unwrap();
        assert!(r.affine);
    }

    #[test]
    fn tail_of_square() {
        // φ = t², a = 0, b = 1, M = 100: witness t = 100, φ(100) = 10⁴.
        let s = square_section();
        let r = tail_behavior(&s, 0.0, 1.0, 100.0, 100).unwrap();
        assert_eq!(r.direction, TailDirection::IncreasingRight);
        assert!((r.witness_t - 100.0).abs() < 1e-9);
        assert!((r.witness_value - 1e4).abs() < 1e-6);
        assert!(r.witness_ok);
        // a = 1, b = 2: strictly increasing past 2.
        let r = tail_behavior(&s, 1.0, 2.0, 50.0, 100).unwrap();
        assert!(r.grid_monotone);
    }

    #[test]
    fn tail_of_decreasing_affine() {
        // φ(t) = −t: φ(a) > φ(b) → strictly decreasing on the left tail.
        let f: ConvexMap<f64> = ConvexMap::max_affine(
            vec![vec![AffinePiece {
                weights: Vector::from_f64s(&[-1.0]),
                offset: 0.0,
            }]],
            Domain::wide_box(1, 1e6),
            PolyCone::coordinate(1),
        )
        .unwrap();
        let s = Section::of_scalar_map(f).unwrap();
        let r = tail_behavior(&s, 0.0, 1.0, 100.0, 100).unwrap();
        assert_eq!(r.direction, TailDirection::DecreasingLeft);
        assert!(r.grid_monotone);
        assert!(r.witness_ok);
    }

    #[test]
    fn tail_rejects_flat() {
        let s = Section::of_scalar_map(abs_1d(1e6)).unwrap();
        assert!(tail_behavior(&s, -1.0, 1.0, 10.0, 10).is_err());
    }

    #[test]
    fn superadditivity_of_square() {
        let phi = |t: f64| -> crate::error::Result<f64> { Ok(t * t) };
        let r = superadditive_check(phi, 1.0, 2.0, CurvatureMode::Convex).unwrap();
        assert!(r.holds);
        assert!((r.additivity_margin - 4.0).abs() < 1e-12); // 9 − 5
    }

    #[test]
    fn subadditivity_of_sqrt() {
        let phi = |t: f64| -> crate::error::Result<f64> { Ok(t.sqrt()) };
        let r = superadditive_check(phi, 1.0, 4.0, CurvatureMode::Concave).unwrap();
        assert!(r.holds);
        assert!((r.additivity_margin - (3.0 - 5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn additivity_of_identity() {
        let phi = |t: f64| -> crate::error::Result<f64> { Ok(t) };
        let c = superadditive_check(phi, 0.5, 1.5, CurvatureMode::Convex).unwrap();
        assert!(c.holds && c.additivity_margin.abs() < 1e-12);
        let k = superadditive_check(phi, 0.5, 1.5, CurvatureMode::Concave).unwrap();
        assert!(k.holds && k.additivity_margin.abs() < 1e-12);
    }

    #[test]
    fn superadditive_precondition() {
        let phi = |t: f64| -> crate::error::Result<f64> { Ok(t - 1.0) };
        assert!(superadditive_check(phi, 1.0, 2.0, CurvatureMode::Convex).is_err());
    }

    #[test]
    fn hypercube_bounds() {
        // Linear f = x₁ + x₂ on [−1,1]²: max 2 at a vertex.
        let f: ConvexMap<f64> = ConvexMap::max_affine(
            vec![vec![AffinePiece {
                weights: Vector::from_f64s(&[1.0, 1.0]),
                offset: 0.0,
            }]],
            Domain::wide_box(2, 10.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        let b = hypercube_bound(&f, &Vector::from_f64s(&[0.0, 0.0]), 1.0).unwrap();
        assert_eq!(b, 2.0);

        // ‖x‖₁ on [0,1]²: max 2 at (1,1).
        let l1: ConvexMap<f64> = ConvexMap::max_affine(
            vec![vec![
                AffinePiece {
                    weights: Vector::from_f64s(&[1.0, 1.0]),
                    offset: 0.0,
                },
                AffinePiece {
                    weights: Vector::from_f64s(&[1.0, -1.0]),
                    offset: 0.0,
                },
                AffinePiece {
                    weights: Vector::from_f64s(&[-1.0, 1.0]),
                    offset: 0.0,
                },
                AffinePiece {
                    weights: Vector::from_f64s(&[-1.0, -1.0]),
                    offset: 0.0,
                },
            ]],
            Domain::wide_box(2, 10.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        let b = hypercube_bound(&l1, &Vector::from_f64s(&[0.5, 0.5]), 0.5).unwrap();
        assert_eq!(b, 2.0);

        // Constant map.
        let c: ConvexMap<f64> = ConvexMap::max_affine(
            vec![vec![AffinePiece {
                weights: Vector::from_f64s(&[0.0, 0.0]),
                offset: -3.5,
            }]],
            Domain::wide_box(2, 10.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        assert_eq!(
            hypercube_bound(&c, &Vector::from_f64s(&[0.0, 0.0]), 1.0).unwrap(),
            -3.5
        );
    }

    #[test]
    fn hypercube_dominates_interior() {
        let f = coordinate_squares_2d(10.0);
        // Per-output bound over [−1,1]².
        let center = Vector::from_f64s(&[0.0, 0.0]);
        let b = hypercube_bound_vector(&f, &center, 1.0).unwrap();
        let mut rng = Rng::new(3);
        for _ in 0..1000 {
            let x = Vector::from_f64s(&[rng.range_f64(-1.0, 1.0), rng.range_f64(-1.0, 1.0)]);
            let v = f.evaluate(&x).unwrap();
            assert!(v.le_coordinatewise(&b));
        }
    }

    #[test]
    fn hypercube_cap() {
        let body = MapBody::MaxAffine {
            outputs: vec![vec![AffinePiece {
                weights: Vector::new(vec![0.0; 21]),
                offset: 0.0,
            }]],
        };
        let f: ConvexMap<f64> = ConvexMap::new_unchecked(
            body,
            Domain::wide_box(21, 1.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        assert!(matches!(
            hypercube_bound(&f, &Vector::zeros(21), 0.5),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn epigraph_boundary() {
        let f = sup_norm_2d(10.0);
        let x = Vector::from_f64s(&[1.0, 0.0]);
        let p2 = epigraph_predicates(&f, &x, 2.0).unwrap();
        assert!(p2.in_epi && p2.in_strict_epi);
        let p1 = epigraph_predicates(&f, &x, 1.0).unwrap();
        assert!(p1.in_epi && !p1.in_strict_epi);
    }

    #[test]
    fn epigraph_midpoint_example() {
        // Midpoint of ((0,0),1) and ((2,0),3) for f(x) = x₁²: ((1,0),2).
        let f: ConvexMap<f64> = ConvexMap::psd_quadratic(
            vec![QuadraticForm {
                matrix: vec![
                    Vector::from_f64s(&[1.0, 0.0]),
                    Vector::from_f64s(&[0.0, 0.0]),
                ],
                linear: Vector::from_f64s(&[0.0, 0.0]),
                constant: 0.0,
            }],
            Domain::wide_box(2, 10.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        let mid = Vector::from_f64s(&[1.0, 0.0]);
        let p = epigraph_predicates(&f, &mid, 2.0).unwrap();
        assert!(p.in_epi);
    }

    #[test]
    fn epigraph_equivalence_both_directions() {
        let convex = coordinate_squares_2d(2.0);
        // Scalar projection of the convex fixture.
        let scalar = square_1d(2.0);
        assert!(epigraph_midpoint_violation(&scalar, 2000, 11)
            .unwrap()
            .is_none());
        let control = negated_quadratic_2d(2.0);
        assert!(epigraph_midpoint_violation(&control, 2000, 11)
            .unwrap()
            .is_some());
        let _ = convex;
    }
}
