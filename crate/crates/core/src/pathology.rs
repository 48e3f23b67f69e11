//! Numeric counterexample constructions.
//!
//! The block construction realizes a non-normal order on `R^{2N}`: block k
//! carries the thin sector cone `C_k = cone{(1, ε_k), (−1, ε_k)}` with
//! `ε_k = 3^{-k}/2`, so the canonical pairs `x_k = (3^k, ½)`, `y_k = (0, 1)`
//! satisfy `0 ≤ x_k ≤ y_k` with `‖y_k‖ = 1` and `‖x_k‖ = 3^k` under the
//! block-sup norm. Downstream: a norm-unbounded order interval `[0, w]_o`, a
//! convex path that is order-bounded yet norm-unbounded near 0, and its
//! composition with a linear functional on `R^d`.
//!
//! Separately, the polynomials `P_n = xⁿ/√n` exhibit a linear functional
//! (derivative at 1) that is unbounded on arbitrarily small balls of the
//! sup-norm on `[−1, 1]`.

use serde::{Deserialize, Serialize};

use crate::cone::PolyCone;
use crate::convex::{ConvexMap, Domain, MapBody};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vector::Vector;

/// The product space of planar thin-sector blocks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockConeSpace<F> {
    pub block_count: usize,
    /// ε_k = 3^{-k}/2 per block, k = 1..=N.
    pub epsilons: Vec<F>,
    /// Product cone on R^{2N}.
    pub cone: PolyCone<F>,
}

impl<F: Real> BlockConeSpace<F> {
    pub fn dim(&self) -> usize {
        2 * self.block_count
    }

    /// Embed a planar vector into block k (1-based).
    pub fn embed(&self, k: usize, planar: (F, F)) -> Vector<F> {
        let mut v = Vector::zeros(self.dim());
        v[2 * (k - 1)] = planar.0;
        v[2 * (k - 1) + 1] = planar.1;
        v
    }

    /// Block-sup norm = sup-norm on the concatenated coordinates.
    pub fn norm(&self, v: &Vector<F>) -> F {
        v.sup_norm()
    }
}

/// Canonical non-normality witnesses: per block k, `x_k = (3^k, ½)` and
/// `y_k = (0, 1)` embedded in the product space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockPairs<F> {
    pub space: BlockConeSpace<F>,
    pub pairs: Vec<(Vector<F>, Vector<F>)>,
}

pub fn build_block_pairs<F: Real>(block_count: usize) -> Result<BlockPairs<F>> {
    if block_count == 0 || block_count > 30 {
        return Err(Error::Input(
            "block count must lie in 1..=30 (norms reach 3^N)".into(),
        ));
    }
    let mut cones = Vec::with_capacity(block_count);
    let mut epsilons = Vec::with_capacity(block_count);
    for k in 1..=block_count {
        let eps = F::of(0.5) * F::of(3.0).powi(-(k as i32));
        epsilons.push(eps);
        cones.push(PolyCone::new(
            2,
            vec![
                Vector::new(vec![F::one(), eps]),
                Vector::new(vec![-F::one(), eps]),
            ],
        )?);
    }
    let cone = PolyCone::product(&cones)?;
    let space = BlockConeSpace {
        block_count,
        epsilons,
        cone,
    };
    let mut pairs = Vec::with_capacity(block_count);
    for k in 1..=block_count {
        let three_k = F::of(3.0).powi(k as i32);
        let x = space.embed(k, (three_k, F::of(0.5)));
        let y = space.embed(k, (F::zero(), F::one()));
        // Construction identities, verified exactly.
        if space.norm(&x) != three_k || space.norm(&y) != F::one() {
            return Err(Error::Input("block pair norms are off".into()));
        }
        if !space.cone.contains(&x)? || !space.cone.contains(&(&y - &x))? {
            return Err(Error::Input("block pair order checks failed".into()));
        }
        pairs.push((x, y));
    }
    Ok(BlockPairs { space, pairs })
}

/// One step of the norm-unbounded order interval: with
/// `w = Σ 2^{-k} y_k` and `z_n = w − Σ_{k<n} 2^{-k} y_k − 2^{-n} x_n`,
/// `0 ≤ z_n ≤ w` while `‖z_n‖ ≥ (3/2)^n − ‖w − Σ_{k<n} 2^{-k} y_k‖`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Step1Report<F> {
    pub n: usize,
    pub w: Vector<F>,
    pub z_n: Vector<F>,
    pub norm_z_n: F,
    pub lower_bound: F,
    /// 0 ≤_C z_n ≤_C w verified through the membership program.
    pub order_ok: bool,
}

pub fn vesely_step1<F: Real>(pairs: &BlockPairs<F>, n: usize) -> Result<Step1Report<F>> {
    let count = pairs.space.block_count;
    if n == 0 || n > count {
        return Err(Error::Input(format!("step 1 needs 1 ≤ n ≤ {count}")));
    }
    let dim = pairs.space.dim();
    let mut w = Vector::zeros(dim);
    for (k, (_, y)) in pairs.pairs.iter().enumerate() {
        w = w.add_scaled(F::of(0.5).powi(k as i32 + 1), y);
    }
    let mut z = w.clone();
    for (k, (_, y)) in pairs.pairs.iter().enumerate().take(n - 1) {
        z = z.add_scaled(-F::of(0.5).powi(k as i32 + 1), y);
    }
    z = z.add_scaled(-F::of(0.5).powi(n as i32), &pairs.pairs[n - 1].0);

    let mut tail = w.clone();
    for (k, (_, y)) in pairs.pairs.iter().enumerate().take(n - 1) {
        tail = tail.add_scaled(-F::of(0.5).powi(k as i32 + 1), y);
    }
    let lower_bound = F::of(1.5).powi(n as i32) - pairs.space.norm(&tail);
    let order_ok =
        pairs.space.cone.contains(&z)? && pairs.space.cone.contains(&(&w - &z))?;
    Ok(Step1Report {
        n,
        norm_z_n: pairs.space.norm(&z),
        lower_bound,
        w,
        z_n: z,
        order_ok,
    })
}

/// The order-bounded, norm-unbounded convex path of the construction's
/// second step, with its verification checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Step2Report<F> {
    pub lambda: F,
    pub alpha: F,
    pub n_max: usize,
    /// αλ² (must be < 1 for the intervals Δ_n to be pairwise disjoint).
    pub alpha_lambda_sq: F,
    pub disjointness_ok: bool,
    /// Signed order margins of μ_n − μ_{n+1} over consecutive segments
    /// (nonnegative = monotone, i.e. the path is convex).
    pub mu_margins: Vec<F>,
    pub mu_monotone_ok: bool,
    /// ‖φ(λⁿ)‖ for n = 0..=n_max.
    pub norms: Vec<F>,
    /// ‖φ(λⁿ)‖ > n for n = 1..=n_max.
    pub norm_exceeds_index: bool,
    /// Block index used by the selection rule per n.
    pub selected_blocks: Vec<usize>,
    pub phi: ConvexMap<F>,
}

pub fn vesely_step2<F: Real>(
    lambda: F,
    alpha: F,
    pairs: &BlockPairs<F>,
    n_max: usize,
) -> Result<Step2Report<F>> {
    if lambda <= F::zero() || lambda >= F::one() {
        return Err(Error::Input("λ must lie in (0, 1)".into()));
    }
    let alpha_cap = (F::one() - lambda + lambda * lambda) / lambda;
    if !(alpha > F::one() && alpha < alpha_cap) {
        return Err(Error::Input(format!(
            "α must lie in (1, λ⁻¹(1−λ+λ²)) = (1, {alpha_cap}), got {alpha}"
        )));
    }
    let count = pairs.space.block_count;
    if n_max > count {
        return Err(Error::Input(format!("n_max must be at most {count}")));
    }
    let dim = pairs.space.dim();

    let mut w = Vector::zeros(dim);
    for (k, (_, y)) in pairs.pairs.iter().enumerate() {
        w = w.add_scaled(F::of(0.5).powi(k as i32 + 1), y);
    }

    // Select w_n ∈ Δ_n = [λ^{2n}w, αλ^{2n}w]_o with ‖w_n‖ > n, pushing mass
    // into the shallowest block whose thin direction makes the norm exceed n:
    // w_n = λ^{2n}w + (α−1)λ^{2n}2^{-k} x_k gives first-coordinate magnitude
    // (α−1)λ^{2n}(3/2)^k in block k.
    let mut values = Vec::with_capacity(n_max + 1);
    let mut selected_blocks = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let scale = lambda.powi(2 * n as i32);
        let need = F::of_usize(n);
        let mut chosen = None;
        for k in 1..=count {
            let reach = (alpha - F::one()) * scale * F::of(1.5).powi(k as i32);
            if reach > need {
                chosen = Some(k);
                break;
            }
        }
        let k = chosen.ok_or_else(|| {
            Error::Input(format!(
                "block count {count} too small: no block reaches norm > {n} at λ^{}",
                2 * n
            ))
        })?;
        selected_blocks.push(k);
        let bump = (alpha - F::one()) * scale * F::of(0.5).powi(k as i32);
        let w_n = w.scale(scale).add_scaled(bump, &pairs.pairs[k - 1].0);
        values.push(w_n);
    }

    // Breakpoints in increasing t: φ = 0 on (−∞, 0], φ(λⁿ) = w_n, affine
    // between, affine extension past t = 1.
    let mut breakpoints = vec![-F::one(), F::zero()];
    let mut path_values = vec![Vector::zeros(dim), Vector::zeros(dim)];
    for n in (0..=n_max).rev() {
        breakpoints.push(lambda.powi(n as i32));
        path_values.push(values[n].clone());
    }
    let phi = ConvexMap::new_unchecked(
        MapBody::PwPath {
            functional: Vector::new(vec![F::one()]),
            breakpoints,
            values: path_values,
        },
        Domain::wide_box(1, F::of(1e9)),
        pairs.space.cone.clone(),
    )?;

    // Checks.
    let alpha_lambda_sq = alpha * lambda * lambda;
    let disjointness_ok = alpha_lambda_sq < F::one();
    let slopes = phi.path_slopes()?;
    let mut mu_margins = Vec::with_capacity(slopes.len() - 1);
    let mut mu_monotone_ok = true;
    for pair in slopes.windows(2) {
        // Slopes increase with t; μ_n indexes decreasing t, so monotonicity
        // μ_{n+1} ≤ μ_n is slope[i] ≤ slope[i+1] here.
        let diff = &pair[1] - &pair[0];
        let margin = pairs.space.cone.signed_margin(&diff)?;
        let ok = pairs.space.cone.contains(&diff)?;
        if !ok {
            mu_monotone_ok = false;
        }
        mu_margins.push(margin);
    }
    let mut norms = Vec::with_capacity(n_max + 1);
    let mut norm_exceeds_index = true;
    for n in 0..=n_max {
        let t = Vector::new(vec![lambda.powi(n as i32)]);
        let norm = pairs.space.norm(&phi.evaluate(&t)?);
        if norm <= F::of_usize(n) && n >= 1 {
            norm_exceeds_index = false;
        }
        norms.push(norm);
    }
    Ok(Step2Report {
        lambda,
        alpha,
        n_max,
        alpha_lambda_sq,
        disjointness_ok,
        mu_margins,
        mu_monotone_ok,
        norms,
        norm_exceeds_index,
        selected_blocks,
        phi,
    })
}

/// The path composed with a linear functional: `f(x) = φ(⟨x*, x⟩)` on R^d.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Step3Report<F> {
    pub f: ConvexMap<F>,
    /// ‖f(λⁿ v)‖ for n = 0..=n_max (matches the step-2 norms).
    pub ray_norms: Vec<F>,
    /// f vanishes on { ⟨x*, x⟩ ≤ 0 } (sampled).
    pub vanishes_left: bool,
    /// Sampled slab values stay in the order interval [0, αw]_o.
    pub slab_bounded: bool,
    pub slab_upper: Vector<F>,
}

pub fn vesely_step3<F: Real>(
    step2: &Step2Report<F>,
    pairs: &BlockPairs<F>,
    x_star: &Vector<F>,
    v: &Vector<F>,
    slab_eps: F,
) -> Result<Step3Report<F>> {
    let d = x_star.dim();
    v.check_dim(d)?;
    let pairing = x_star.dot(v);
    if (pairing - F::one()).abs() > F::TIGHT_TOL {
        return Err(Error::Input(format!(
            "functional must satisfy ⟨x*, v⟩ = 1, got {pairing}"
        )));
    }
    let (breakpoints, values) = match &step2.phi.body {
        MapBody::PwPath {
            breakpoints,
            values,
            ..
        } => (breakpoints.clone(), values.clone()),
        _ => return Err(Error::Input("step 2 report does not carry a path".into())),
    };
    let f = ConvexMap::new_unchecked(
        MapBody::PwPath {
            functional: x_star.clone(),
            breakpoints,
            values,
        },
        Domain::wide_box(d, F::of(1e9)),
        pairs.space.cone.clone(),
    )?;

    let mut ray_norms = Vec::with_capacity(step2.n_max + 1);
    for n in 0..=step2.n_max {
        let x = v.scale(step2.lambda.powi(n as i32));
        ray_norms.push(pairs.space.norm(&f.evaluate(&x)?));
    }

    // w and the interval bound αw for the slab check.
    let dim = pairs.space.dim();
    let mut w = Vector::zeros(dim);
    for (k, (_, y)) in pairs.pairs.iter().enumerate() {
        w = w.add_scaled(F::of(0.5).powi(k as i32 + 1), y);
    }
    let slab_upper = w.scale(step2.alpha);

    let mut rng = crate::rng::Rng::new(0x51ab);
    let mut vanishes_left = true;
    let mut slab_bounded = true;
    for _ in 0..200 {
        // Random point of the slab |⟨x*, x⟩| < ε along v plus a kernel move.
        let t = F::of(rng.range_f64(-1.0, 1.0)) * slab_eps;
        let mut x = v.scale(t);
        // Perturb orthogonally to x* when the space allows it.
        if d > 1 {
            let mut probe = Vector::zeros(d);
            let i = rng.below(d);
            probe[i] = F::of(rng.range_f64(-1.0, 1.0));
            let corr = x_star.dot(&probe);
            let x_star_norm2 = x_star.dot(x_star);
            let adjusted = probe.add_scaled(-corr / x_star_norm2, x_star);
            x = &x + &adjusted;
        }
        let fx = f.evaluate(&x)?;
        let inner = x_star.dot(&x);
        if inner <= F::zero() && pairs.space.norm(&fx) > F::TIGHT_TOL {
            vanishes_left = false;
        }
        let inside = pairs.space.cone.contains(&fx)?
            && pairs.space.cone.contains(&(&slab_upper - &fx))?;
        if !inside {
            slab_bounded = false;
        }
    }
    Ok(Step3Report {
        f,
        ray_norms,
        vanishes_left,
        slab_bounded,
        slab_upper,
    })
}

/// The monomials `P_n = xⁿ/√n`: tiny sup-norm on [−1, 1], derivative √n at 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialReport<F> {
    pub n: usize,
    /// Closed-form sup-norm on [−1, 1]: 1/√n (monomials peak at ±1).
    pub norm_pn: F,
    /// Sampled sup over an endpoint-inclusive grid.
    pub sampled_sup: F,
    /// P_n'(1) = √n.
    pub f_pn: F,
    /// f(P_n) / ‖P_n‖ = n.
    pub ratio: F,
}

pub fn polynomial_example<F: Real>(n: usize, sample_count: usize) -> Result<PolynomialReport<F>> {
    if n == 0 {
        return Err(Error::Input("polynomial degree must be at least 1".into()));
    }
    let sqrt_n = F::of_usize(n).sqrt();
    let norm_pn = F::one() / sqrt_n;
    let f_pn = sqrt_n;
    let grid = sample_count.max(2);
    let mut sampled_sup = F::zero();
    for k in 0..grid {
        let x = -F::one() + F::of(2.0) * F::of_usize(k) / F::of_usize(grid - 1);
        let v = (x.abs().powi(n as i32) / sqrt_n).abs();
        if v > sampled_sup {
            sampled_sup = v;
        }
    }
    Ok(PolynomialReport {
        n,
        norm_pn,
        sampled_sup,
        f_pn,
        ratio: f_pn / norm_pn,
    })
}

/// Derivative-at-1 functional and sampled sup-norm for an arbitrary
/// coefficient list `P(x) = Σ coeffs[k] x^k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneralPolynomialReport<F> {
    pub coeffs: Vec<F>,
    pub sampled_norm: F,
    pub derivative_at_one: F,
}

pub fn polynomial_general<F: Real>(
    coeffs: &[F],
    sample_count: usize,
) -> Result<GeneralPolynomialReport<F>> {
    if coeffs.is_empty() {
        return Err(Error::Input("empty coefficient list".into()));
    }
    let eval = |x: F| -> F {
        coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, &c| acc * x + c)
    };
    let grid = sample_count.max(2);
    let mut sampled_norm = F::zero();
    for k in 0..grid {
        let x = -F::one() + F::of(2.0) * F::of_usize(k) / F::of_usize(grid - 1);
        let v = eval(x).abs();
        if v > sampled_norm {
            sampled_norm = v;
        }
    }
    let derivative_at_one = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| F::of_usize(k) * c)
        .sum();
    Ok(GeneralPolynomialReport {
        coeffs: coeffs.to_vec(),
        sampled_norm,
        derivative_at_one,
    })
}
