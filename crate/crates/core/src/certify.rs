//! Lipschitz certificates from explicit constants, plus the brute-force
//! sampling oracle every certificate must dominate.
//!
//! Every `certify_*` operation validates its preconditions before issuing a
//! constant; a violated precondition yields [`Error::Refused`] with a witness
//! point, never a silently wrong certificate. Bounds used for the constant β
//! are certified (vertex/interval arithmetic) where the body permits and
//! sampled otherwise, with the status declared on the certificate.

use serde::{Deserialize, Serialize};

use crate::convex::{ConvexMap, MapBody, Section};
use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::rng::Rng;
use crate::scalar::Real;
use crate::seminorm::{c_full_violation, SeminormSpec};
use crate::vector::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    #[serde(rename = "scalar-1d")]
    Scalar1d,
    #[serde(rename = "ball-2beta")]
    Ball2Beta,
    CompactCover,
    OLipschitz,
    EquiFamily,
    LpQuasinorm,
    LcsGraduated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    /// The bound holds by vertex/interval arithmetic over the region.
    Certified,
    /// The bound was only checked at sampled points.
    Sampled,
}

/// How distances are measured on a certified region. Serialized untagged,
/// so a region carries either a "seminorm" or a "metric" key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionGauge<F> {
    Seminorm { seminorm: SeminormSpec<F> },
    Metric { metric: Metric<F> },
}

impl<F: Real> RegionGauge<F> {
    pub fn seminorm(p: SeminormSpec<F>) -> Self {
        RegionGauge::Seminorm { seminorm: p }
    }

    pub fn metric(m: Metric<F>) -> Self {
        RegionGauge::Metric { metric: m }
    }

    pub fn distance(&self, x: &Vector<F>, y: &Vector<F>) -> Result<F> {
        match self {
            RegionGauge::Seminorm { seminorm } => seminorm.eval(&(x - y)),
            RegionGauge::Metric { metric } => metric.eval(x, y),
        }
    }
}

/// A certified region: a ball in a seminorm or metric, optionally carrying
/// the explicit point cloud for compact-cover certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region<F> {
    pub center: Vector<F>,
    pub radius: F,
    #[serde(flatten)]
    pub gauge: RegionGauge<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vector<F>>>,
}

impl<F: Real> Region<F> {
    pub fn seminorm_ball(center: Vector<F>, radius: F, p: SeminormSpec<F>) -> Self {
        Region {
            center,
            radius,
            gauge: RegionGauge::seminorm(p),
            points: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains(&self, x: &Vector<F>) -> Result<bool> {
        let d = self.gauge.distance(&self.center, x)?;
        Ok(d <= self.radius * (F::one() + F::ORDER_TOL) + F::ORDER_TOL)
    }

    /// Sample a point of the region. Seminorm balls are sampled by rejection
    /// from the enclosing box, with kernel directions truncated at the
    /// radius (the certified slab is unbounded there; the oracle samples its
    /// truncation).
    pub fn sample(&self, rng: &mut Rng) -> Result<Vector<F>> {
        match &self.gauge {
            RegionGauge::Seminorm { seminorm: p } => {
                let dim = self.dim();
                let h: Vec<F> = p
                    .ball_halfwidths(dim, self.radius)?
                    .into_iter()
                    .map(|w| if w.is_finite() { w } else { self.radius })
                    .collect();
                for _ in 0..1000 {
                    let x = Vector::new(
                        (0..dim)
                            .map(|i| self.center[i] + F::of(rng.range_f64(-1.0, 1.0)) * h[i])
                            .collect(),
                    );
                    if p.eval(&(&x - &self.center))? <= self.radius {
                        return Ok(x);
                    }
                }
                Ok(self.center.clone())
            }
            RegionGauge::Metric { metric } => metric.sample_ball(&self.center, self.radius, rng),
        }
    }
}

/// Scalar constant, or a lattice element for coordinatewise certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertConstant<F> {
    Scalar(F),
    Lattice(Vector<F>),
}

impl<F: Real> CertConstant<F> {
    pub fn scalar(&self) -> Option<F> {
        match self {
            CertConstant::Scalar(l) => Some(*l),
            CertConstant::Lattice(_) => None,
        }
    }

    /// Scalar comparison value: the constant itself, or the sup-norm of a
    /// lattice constant (an o-Lipschitz map is Lipschitz with that norm).
    pub fn sup_value(&self) -> F {
        match self {
            CertConstant::Scalar(l) => *l,
            CertConstant::Lattice(v) => v.sup_norm(),
        }
    }
}

/// Gauge measuring the target-side difference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TargetGauge<F> {
    Seminorm { seminorm: SeminormSpec<F> },
    /// Coordinatewise absolute value against a lattice constant.
    LatticeAbs,
}

impl<F: Real> TargetGauge<F> {
    pub fn seminorm(q: SeminormSpec<F>) -> Self {
        TargetGauge::Seminorm { seminorm: q }
    }
}

/// Formula inputs recorded on a certificate for reproduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertInputs<F> {
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub big_r: Option<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vector<F>>,
    /// 1-d formula stations a < α < β < b.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<[F; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_left: Option<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_right: Option<F>,
    /// Per-piece constants of a compact cover.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece_constants: Option<Vec<F>>,
    /// Sequence-space truncation length for metric certificates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_m: Option<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_bound: Option<F>,
}

impl<F: Real> CertInputs<F> {
    pub fn none() -> Self {
        CertInputs {
            big_r: None,
            r: None,
            beta: None,
            z: None,
            endpoints: None,
            slope_left: None,
            slope_right: None,
            piece_constants: None,
            truncation: None,
            l_m: None,
            m_index: None,
            a_bound: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary<F> {
    pub pairs: usize,
    pub used: usize,
    pub skipped_degenerate: usize,
    pub max_ratio: F,
    pub seed: u64,
}

/// A certified Lipschitz constant: region, target gauge, constant, formula
/// provenance and the sampling-oracle summary once cross-checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzCertificate<F> {
    pub formula: Formula,
    pub constant: CertConstant<F>,
    pub region: Region<F>,
    pub target: TargetGauge<F>,
    pub inputs: CertInputs<F>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_status: Option<BoundStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary<F>>,
}

impl<F: Real> LipschitzCertificate<F> {
    /// Soundness against an oracle run: the certificate constant dominates
    /// the observed ratio up to relative tolerance.
    pub fn dominates(&self, oracle_max: F) -> bool {
        oracle_max <= self.constant.sup_value() * (F::one() + F::CHECK_TOL)
    }
}

/// Sample counts and seed for the sampled precondition checks.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CheckConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            samples: 2000,
            seed: 42,
        }
    }
}

fn to_f64s<F: Real>(v: &Vector<F>) -> Vec<f64> {
    v.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

// ---------------------------------------------------------------------------
// Certified output bounds
// ---------------------------------------------------------------------------

/// Range of an affine form over the box `center ± widths`; None when an
/// infinite width meets a nonzero weight.
fn affine_range<F: Real>(
    weights: &Vector<F>,
    offset: F,
    center: &Vector<F>,
    widths: &[F],
) -> Option<(F, F)> {
    let mut mid = offset;
    let mut spread = F::zero();
    for i in 0..weights.dim() {
        let w = weights[i];
        if w == F::zero() {
            continue;
        }
        if !widths[i].is_finite() {
            return None;
        }
        mid = mid + w * center[i];
        spread = spread + w.abs() * widths[i];
    }
    Some((mid - spread, mid + spread))
}

fn box_of_region<F: Real>(region: &Region<F>) -> Result<Option<(Vector<F>, Vec<F>)>> {
    match &region.gauge {
        RegionGauge::Seminorm { seminorm } => {
            let h = seminorm.ball_halfwidths(region.dim(), region.radius)?;
            Ok(Some((region.center.clone(), h)))
        }
        RegionGauge::Metric { metric } => Ok(metric
            .ball_halfwidths(region.radius)?
            .map(|h| (region.center.clone(), h))),
    }
}

fn certified_abs_bounds<F: Real>(
    body: &MapBody<F>,
    center: &Vector<F>,
    widths: &[F],
) -> Option<Vector<F>> {
    match body {
        MapBody::MaxAffine { outputs } => {
            let mut m = Vec::with_capacity(outputs.len());
            for pieces in outputs {
                let mut sup = F::neg_infinity();
                let mut low = F::neg_infinity();
                for p in pieces {
                    let (lo, hi) = affine_range(&p.weights, p.offset, center, widths)?;
                    if hi > sup {
                        sup = hi;
                    }
                    // f ≥ every piece, so inf f ≥ max of piece minima.
                    if lo > low {
                        low = lo;
                    }
                }
                m.push(sup.max(-low).max(F::zero()));
            }
            Some(Vector::new(m))
        }
        MapBody::PsdQuadratic { outputs } => {
            let n = center.dim();
            if n > 20 || widths.iter().any(|w| !w.is_finite()) {
                return None;
            }
            let mut m = Vec::with_capacity(outputs.len());
            for q in outputs {
                let mut sup = F::neg_infinity();
                for mask in 0..(1usize << n) {
                    let v = Vector::new(
                        (0..n)
                            .map(|i| {
                                if mask >> i & 1 == 1 {
                                    center[i] + widths[i]
                                } else {
                                    center[i] - widths[i]
                                }
                            })
                            .collect(),
                    );
                    let val = q.eval(&v);
                    if val > sup {
                        sup = val;
                    }
                }
                // xᵀAx ≥ 0, so f ≥ its affine part.
                let (lo, _) = affine_range(&q.linear, q.constant, center, widths)?;
                m.push(sup.max(-lo).max(F::zero()));
            }
            Some(Vector::new(m))
        }
        MapBody::PwPath {
            functional,
            breakpoints,
            values,
        } => {
            let (t_lo, t_hi) = affine_range(functional, F::zero(), center, widths)?;
            let td = values.first()?.dim();
            let mut candidates = vec![t_lo, t_hi];
            candidates.extend(
                breakpoints
                    .iter()
                    .copied()
                    .filter(|&t| t > t_lo && t < t_hi),
            );
            let mut m = vec![F::zero(); td];
            for &t in &candidates {
                let v = crate::convex::path_value(breakpoints, values, t);
                for i in 0..td {
                    if v[i].abs() > m[i] {
                        m[i] = v[i].abs();
                    }
                }
            }
            Some(Vector::new(m))
        }
        MapBody::Composite { components } => {
            let mut out = Vec::new();
            for c in components {
                out.extend(certified_abs_bounds(&c.body, center, widths)?.0);
            }
            Some(Vector::new(out))
        }
    }
}

/// Per-coordinate bound of `|f_i|` over the region: certified where the body
/// and region permit, else the sampled maximum with `Sampled` status.
pub fn output_abs_bounds<F: Real>(
    f: &ConvexMap<F>,
    region: &Region<F>,
    samples: usize,
    seed: u64,
) -> Result<(Vector<F>, BoundStatus)> {
    if let Some((center, widths)) = box_of_region(region)? {
        if let Some(bounds) = certified_abs_bounds(&f.body, &center, &widths) {
            return Ok((bounds, BoundStatus::Certified));
        }
    }
    let mut rng = Rng::new(seed);
    let mut m = Vector::zeros(f.target_dim());
    for _ in 0..samples.max(1) {
        let x = region.sample(&mut rng)?;
        if !f.domain.contains(&x)? {
            continue;
        }
        m = m.sup(&f.evaluate(&x)?.abs());
    }
    Ok((m, BoundStatus::Sampled))
}

/// Upper bound of `q(y)` over `{ |y| ≤ m coordinatewise }`.
fn seminorm_upper_bound<F: Real>(q: &SeminormSpec<F>, m: &Vector<F>) -> Result<F> {
    match q {
        SeminormSpec::WeightedSup { weights } => {
            let mut best = F::zero();
            for i in 0..m.dim() {
                if weights[i] > F::zero() {
                    let v = weights[i] * m[i];
                    if v > best {
                        best = v;
                    }
                }
            }
            Ok(best)
        }
        SeminormSpec::WeightedL1 { weights } => {
            let mut total = F::zero();
            for i in 0..m.dim() {
                if weights[i] > F::zero() {
                    total = total + weights[i] * m[i];
                }
            }
            Ok(total)
        }
        SeminormSpec::MinkowskiPolytope { .. } => {
            // Subadditivity: q(y) ≤ Σ |y_i| q(e_i).
            let mut total = F::zero();
            for i in 0..m.dim() {
                let qe = q.eval(&Vector::basis(m.dim(), i))?;
                if qe > F::zero() {
                    total = total + m[i] * qe;
                }
            }
            Ok(total)
        }
        SeminormSpec::MaxOf { parts } => {
            let mut best = F::zero();
            for p in parts {
                let v = seminorm_upper_bound(p, m)?;
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        }
    }
}

/// Upper bound β of `q(f(x))` over the region, with its status.
pub fn beta_bound<F: Real>(
    f: &ConvexMap<F>,
    region: &Region<F>,
    q: &SeminormSpec<F>,
    samples: usize,
    seed: u64,
) -> Result<(F, BoundStatus)> {
    let (m, status) = output_abs_bounds(f, region, samples, seed)?;
    let beta = seminorm_upper_bound(q, &m)?;
    if !beta.is_finite() {
        return Err(Error::Refused {
            detail: "no finite bound for q∘f over the region".into(),
            witness: to_f64s(&region.center),
        });
    }
    Ok((beta, status))
}

// ---------------------------------------------------------------------------
// Sampled precondition checks shared by the certifiers
// ---------------------------------------------------------------------------

/// Refuse unless q is (sampled-)full for the target cone.
fn require_c_full<F: Real>(
    q: &SeminormSpec<F>,
    cone: &crate::cone::PolyCone<F>,
    cfg: &CheckConfig,
) -> Result<()> {
    let mut rng = Rng::new(cfg.seed ^ 0x5eed);
    if let Some((_, y, _)) = c_full_violation(q, cone, &mut rng, cfg.samples)? {
        return Err(Error::Refused {
            detail: "target seminorm is not full for the target cone (gauge inequality fails)"
                .into(),
            witness: to_f64s(&y),
        });
    }
    Ok(())
}

/// Refuse if f visibly varies along a kernel direction of p (the degenerate
/// -direction hypothesis behind the ball formula).
fn require_kernel_invariance<F: Real>(
    f: &ConvexMap<F>,
    q: &SeminormSpec<F>,
    p: &SeminormSpec<F>,
    region: &Region<F>,
    cfg: &CheckConfig,
) -> Result<()> {
    let axes = p.kernel_axes(f.domain_dim())?;
    if axes.is_empty() {
        return Ok(());
    }
    let mut rng = Rng::new(cfg.seed ^ 0xdead);
    let reach = F::of(4.0) * (F::one() + region.radius);
    for _ in 0..cfg.samples.min(500) {
        let x = region.sample(&mut rng)?;
        if !f.domain.contains(&x)? {
            continue;
        }
        for &axis in &axes {
            let t = F::of(rng.range_f64(-1.0, 1.0)) * reach;
            let shifted = x.add_scaled(t, &Vector::basis(f.domain_dim(), axis));
            if !f.domain.contains(&shifted)? {
                continue;
            }
            let dq = q.eval(&(&f.evaluate(&shifted)? - &f.evaluate(&x)?))?;
            if dq > F::CHECK_TOL * (F::one() + dq) {
                return Err(Error::Refused {
                    detail: format!(
                        "map varies along the p-degenerate axis {axis}: q-difference {dq}"
                    ),
                    witness: to_f64s(&shifted),
                });
            }
        }
    }
    Ok(())
}

fn check_radii<F: Real>(big_r: F, r: F) -> Result<()> {
    if !(F::zero() < r && r < big_r) {
        return Err(Error::Input(format!(
            "radii must satisfy 0 < r < R, got r = {r}, R = {big_r}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Certifiers
// ---------------------------------------------------------------------------

/// One-dimensional constant from outer slopes: with a < α < β < b,
/// `A = (φ(α)−φ(a))/(α−a)`, `B = (φ(b)−φ(β))/(b−β)`, the constant
/// `L = max{|A|, |B|}` is Lipschitz for φ on [α, β].
pub fn certify_1d<F: Real>(
    section: &Section<F>,
    a: F,
    alpha: F,
    beta: F,
    b: F,
) -> Result<LipschitzCertificate<F>> {
    if !(a < alpha && alpha < beta && beta < b) {
        return Err(Error::Input("stations must satisfy a < α < β < b".into()));
    }
    if !section.is_scalar() {
        return Err(Error::Input("certify_1d needs a scalar section".into()));
    }
    let (t_lo, t_hi) = section.t_range()?;
    if a < t_lo || b > t_hi {
        return Err(Error::Input(
            "stations fall outside the section's domain interval".into(),
        ));
    }
    let slope_left = (section.scalar(alpha)? - section.scalar(a)?) / (alpha - a);
    let slope_right = (section.scalar(b)? - section.scalar(beta)?) / (b - beta);
    let constant = slope_left.abs().max(slope_right.abs());
    let half = F::of(0.5);
    Ok(LipschitzCertificate {
        formula: Formula::Scalar1d,
        constant: CertConstant::Scalar(constant),
        region: Region::seminorm_ball(
            Vector::new(vec![(alpha + beta) * half]),
            (beta - alpha) * half,
            SeminormSpec::abs(),
        ),
        target: TargetGauge::seminorm(SeminormSpec::abs()),
        inputs: CertInputs {
            endpoints: Some([a, alpha, beta, b]),
            slope_left: Some(slope_left),
            slope_right: Some(slope_right),
            ..CertInputs::none()
        },
        beta_status: Some(BoundStatus::Certified),
        oracle: None,
    })
}

/// Ball certificate `L = 2β/(R−r)`: from `q(f) ≤ β` on `B_p[x0, R]`, f is
/// q-p-Lipschitz on `B_p[x0, r]`, including q-constancy along p-degenerate
/// directions. For seminorms p with kernel, the certified set is the slab
/// intersected with the map's domain.
#[allow(clippy::too_many_arguments)]
pub fn certify_ball<F: Real>(
    f: &ConvexMap<F>,
    q: &SeminormSpec<F>,
    p: &SeminormSpec<F>,
    x0: &Vector<F>,
    big_r: F,
    r: F,
    beta: Option<F>,
    cfg: &CheckConfig,
) -> Result<LipschitzCertificate<F>> {
    check_radii(big_r, r)?;
    q.validate(f.target_dim())?;
    p.validate(f.domain_dim())?;
    x0.check_dim(f.domain_dim())?;
    require_c_full(q, &f.target_cone, cfg)?;

    let outer = Region::seminorm_ball(x0.clone(), big_r, p.clone());
    require_kernel_invariance(f, q, p, &outer, cfg)?;

    let (beta_val, beta_status) = match beta {
        Some(b) => {
            if b < F::zero() {
                return Err(Error::Input("β must be nonnegative".into()));
            }
            let mut rng = Rng::new(cfg.seed);
            for _ in 0..cfg.samples {
                let x = outer.sample(&mut rng)?;
                if !f.domain.contains(&x)? {
                    continue;
                }
                let v = q.eval(&f.evaluate(&x)?)?;
                if v > b * (F::one() + F::CHECK_TOL) + F::CHECK_TOL {
                    return Err(Error::Refused {
                        detail: format!("q(f(x)) ≤ β violated: q(f(x)) = {v} > β = {b}"),
                        witness: to_f64s(&x),
                    });
                }
            }
            (b, BoundStatus::Sampled)
        }
        None => beta_bound(f, &outer, q, cfg.samples, cfg.seed)?,
    };

    let constant = F::of(2.0) * beta_val / (big_r - r);
    Ok(LipschitzCertificate {
        formula: Formula::Ball2Beta,
        constant: CertConstant::Scalar(constant),
        region: Region::seminorm_ball(x0.clone(), r, p.clone()),
        target: TargetGauge::seminorm(q.clone()),
        inputs: CertInputs {
            big_r: Some(big_r),
            r: Some(r),
            beta: Some(beta_val),
            ..CertInputs::none()
        },
        beta_status: Some(beta_status),
        oracle: None,
    })
}

/// Compact-cover certificate: local ball certificates whose open regions
/// cover the cloud combine into `L = max L_i` against the dominating
/// seminorm `p = max_i p_i`.
pub fn certify_compact<F: Real>(
    f: &ConvexMap<F>,
    cloud: &[Vector<F>],
    locals: &[LipschitzCertificate<F>],
) -> Result<LipschitzCertificate<F>> {
    if cloud.is_empty() {
        return Err(Error::Input("empty point cloud".into()));
    }
    if locals.is_empty() {
        return Err(Error::Input("no local certificates supplied".into()));
    }
    let target = locals[0].target.clone();
    let mut constants = Vec::with_capacity(locals.len());
    let mut parts: Vec<SeminormSpec<F>> = Vec::new();
    for (i, cert) in locals.iter().enumerate() {
        if cert.target != target {
            return Err(Error::Input(format!(
                "local certificate {i} certifies a different target gauge"
            )));
        }
        let l = cert.constant.scalar().ok_or_else(|| {
            Error::Input(format!("local certificate {i} carries a non-scalar constant"))
        })?;
        constants.push(l);
        match &cert.region.gauge {
            RegionGauge::Seminorm { seminorm } => {
                if !parts.contains(seminorm) {
                    parts.push(seminorm.clone());
                }
            }
            RegionGauge::Metric { .. } => {
                return Err(Error::Input(format!(
                    "local certificate {i} lives on a metric ball"
                )))
            }
        }
    }

    // Cover verification: every cloud point strictly inside some local ball.
    let mut uncovered = Vec::new();
    for (j, x) in cloud.iter().enumerate() {
        x.check_dim(f.domain_dim())?;
        let mut inside = false;
        for cert in locals {
            let d = cert.region.gauge.distance(&cert.region.center, x)?;
            if d < cert.region.radius {
                inside = true;
                break;
            }
        }
        if !inside {
            uncovered.push(j);
        }
    }
    if !uncovered.is_empty() {
        return Err(Error::Input(format!(
            "cover verification failed: cloud points {uncovered:?} lie in no local ball"
        )));
    }

    let p_common = if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        SeminormSpec::MaxOf { parts }
    };
    let constant = constants
        .iter()
        .copied()
        .fold(F::zero(), |a, b| if b > a { b } else { a });

    // Enclosing ball of the cloud in the common seminorm, for the record.
    let inv = F::one() / F::of_usize(cloud.len());
    let mut centroid = Vector::zeros(f.domain_dim());
    for x in cloud {
        centroid = centroid.add_scaled(inv, x);
    }
    let mut radius = F::zero();
    for x in cloud {
        let d = p_common.eval(&(x - &centroid))?;
        if d > radius {
            radius = d;
        }
    }
    Ok(LipschitzCertificate {
        formula: Formula::CompactCover,
        constant: CertConstant::Scalar(constant),
        region: Region {
            center: centroid,
            radius,
            gauge: RegionGauge::seminorm(p_common),
            points: Some(cloud.to_vec()),
        },
        target,
        inputs: CertInputs {
            piece_constants: Some(constants),
            ..CertInputs::none()
        },
        beta_status: locals
            .iter()
            .map(|c| c.beta_status)
            .try_fold(BoundStatus::Certified, |acc, s| {
                s.map(|s| {
                    if acc == BoundStatus::Sampled || s == BoundStatus::Sampled {
                        BoundStatus::Sampled
                    } else {
                        BoundStatus::Certified
                    }
                })
            }),
        oracle: None,
    })
}

/// Lattice-constant certificate `y = 2z/(R−r)`: from `|f| ≤ z` coordinatewise
/// on the sup-norm ball of radius R, `|f(u)−f(v)| ≤ y·‖u−v‖∞` on the inner
/// ball. The target must carry the coordinate lattice order.
pub fn certify_o_lipschitz<F: Real>(
    f: &ConvexMap<F>,
    x0: &Vector<F>,
    big_r: F,
    r: F,
    z: &Vector<F>,
    cfg: &CheckConfig,
) -> Result<LipschitzCertificate<F>> {
    check_radii(big_r, r)?;
    x0.check_dim(f.domain_dim())?;
    z.check_dim(f.target_dim())?;
    if z.iter().any(|&c| c < F::zero()) {
        return Err(Error::Input("lattice bound z must be nonnegative".into()));
    }
    if !f.target_cone.is_coordinate_like() {
        return Err(Error::Input(
            "o-certificates need the coordinate lattice order on the target".into(),
        ));
    }
    let sup = SeminormSpec::sup_norm(f.domain_dim());
    let outer = Region::seminorm_ball(x0.clone(), big_r, sup.clone());

    // Precondition |f| ≤ z on the outer ball: certified bound when possible,
    // sampled witness search always.
    let (bounds, mut status) = output_abs_bounds(f, &outer, cfg.samples, cfg.seed)?;
    if !bounds.le_coordinatewise(z) {
        status = BoundStatus::Sampled;
    }
    let mut rng = Rng::new(cfg.seed ^ 0x0b0b);
    for _ in 0..cfg.samples {
        let x = outer.sample(&mut rng)?;
        if !f.domain.contains(&x)? {
            continue;
        }
        let v = f.evaluate(&x)?.abs();
        for i in 0..v.dim() {
            if v[i] > z[i] * (F::one() + F::CHECK_TOL) + F::CHECK_TOL {
                return Err(Error::Refused {
                    detail: format!(
                        "|f(x)| ≤ z violated in coordinate {i}: {} > {}",
                        v[i], z[i]
                    ),
                    witness: to_f64s(&x),
                });
            }
        }
    }

    let lattice = z.scale(F::of(2.0) / (big_r - r));
    Ok(LipschitzCertificate {
        formula: Formula::OLipschitz,
        constant: CertConstant::Lattice(lattice),
        region: Region::seminorm_ball(x0.clone(), r, sup),
        target: TargetGauge::LatticeAbs,
        inputs: CertInputs {
            big_r: Some(big_r),
            r: Some(r),
            z: Some(z.clone()),
            ..CertInputs::none()
        },
        beta_status: Some(status),
        oracle: None,
    })
}

/// Equi-family certificate: one constant `L = 2β/(R−r)` valid for every
/// member, with `β` the family-wide bound of `q∘f` on the outer ball.
pub fn certify_equi<F: Real>(
    family: &[ConvexMap<F>],
    q: &SeminormSpec<F>,
    p: &SeminormSpec<F>,
    x0: &Vector<F>,
    big_r: F,
    r: F,
    cfg: &CheckConfig,
) -> Result<LipschitzCertificate<F>> {
    if family.is_empty() {
        return Err(Error::Input("empty family".into()));
    }
    check_radii(big_r, r)?;
    let first = &family[0];
    q.validate(first.target_dim())?;
    p.validate(first.domain_dim())?;
    x0.check_dim(first.domain_dim())?;
    for (i, f) in family.iter().enumerate() {
        if f.domain_dim() != first.domain_dim()
            || f.target_dim() != first.target_dim()
            || f.target_cone != first.target_cone
        {
            return Err(Error::Input(format!(
                "family member {i} disagrees on dimensions or target cone"
            )));
        }
    }
    require_c_full(q, &first.target_cone, cfg)?;

    let outer = Region::seminorm_ball(x0.clone(), big_r, p.clone());
    let mut beta = F::zero();
    let mut status = BoundStatus::Certified;
    for (i, f) in family.iter().enumerate() {
        require_kernel_invariance(f, q, p, &outer, cfg).map_err(|e| match e {
            Error::Refused { detail, witness } => Error::Refused {
                detail: format!("member {i}: {detail}"),
                witness,
            },
            other => other,
        })?;
        let (b, s) =
            beta_bound(f, &outer, q, cfg.samples, cfg.seed).map_err(|e| match e {
                Error::Refused { detail, witness } => Error::Refused {
                    detail: format!("member {i}: {detail}"),
                    witness,
                },
                other => other,
            })?;
        if b > beta {
            beta = b;
        }
        if s == BoundStatus::Sampled {
            status = BoundStatus::Sampled;
        }
    }

    let constant = F::of(2.0) * beta / (big_r - r);
    Ok(LipschitzCertificate {
        formula: Formula::EquiFamily,
        constant: CertConstant::Scalar(constant),
        region: Region::seminorm_ball(x0.clone(), r, p.clone()),
        target: TargetGauge::seminorm(q.clone()),
        inputs: CertInputs {
            big_r: Some(big_r),
            r: Some(r),
            beta: Some(beta),
            ..CertInputs::none()
        },
        beta_status: Some(status),
        oracle: None,
    })
}

// ---------------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------------

/// Max of `q(f(x)−f(y)) / p(x−y)` over sampled pairs in the region; pairs
/// with vanishing denominator are skipped and counted.
pub fn empirical_lipschitz<F: Real>(
    f: &ConvexMap<F>,
    region: &Region<F>,
    q: &SeminormSpec<F>,
    denom: &RegionGauge<F>,
    pairs: usize,
    seed: u64,
) -> Result<OracleSummary<F>> {
    let mut rng = Rng::new(seed);
    let mut max_ratio = F::zero();
    let mut used = 0;
    let mut skipped = 0;
    for _ in 0..pairs {
        let x = region.sample(&mut rng)?;
        let y = region.sample(&mut rng)?;
        if !(f.domain.contains(&x)? && f.domain.contains(&y)?) {
            continue;
        }
        let den = denom.distance(&x, &y)?;
        if den <= F::TIGHT_TOL * (F::one() + x.sup_norm().max(y.sup_norm())) {
            skipped += 1;
            continue;
        }
        let num = q.eval(&(&f.evaluate(&x)? - &f.evaluate(&y)?))?;
        let ratio = num / den;
        if ratio > max_ratio {
            max_ratio = ratio;
        }
        used += 1;
    }
    Ok(OracleSummary {
        pairs,
        used,
        skipped_degenerate: skipped,
        max_ratio,
        seed,
    })
}

/// Coordinatewise oracle for o-certificates: per-coordinate max of
/// `|f(x)−f(y)|_i / ‖x−y‖∞`, plus the sup-norm summary.
pub fn empirical_o_lipschitz<F: Real>(
    f: &ConvexMap<F>,
    region: &Region<F>,
    pairs: usize,
    seed: u64,
) -> Result<(Vector<F>, OracleSummary<F>)> {
    let mut rng = Rng::new(seed);
    let mut per_coord = Vector::zeros(f.target_dim());
    let mut max_ratio = F::zero();
    let mut used = 0;
    let mut skipped = 0;
    for _ in 0..pairs {
        let x = region.sample(&mut rng)?;
        let y = region.sample(&mut rng)?;
        if !(f.domain.contains(&x)? && f.domain.contains(&y)?) {
            continue;
        }
        let den = (&x - &y).sup_norm();
        if den <= F::TIGHT_TOL * (F::one() + x.sup_norm().max(y.sup_norm())) {
            skipped += 1;
            continue;
        }
        let diff = (&f.evaluate(&x)? - &f.evaluate(&y)?).abs();
        per_coord = per_coord.sup(&diff.scale(F::one() / den));
        let r = diff.sup_norm() / den;
        if r > max_ratio {
            max_ratio = r;
        }
        used += 1;
    }
    Ok((
        per_coord,
        OracleSummary {
            pairs,
            used,
            skipped_degenerate: skipped,
            max_ratio,
            seed,
        },
    ))
}

/// All-pairs oracle over an explicit point set (compact covers).
pub fn empirical_lipschitz_pairs<F: Real>(
    f: &ConvexMap<F>,
    q: &SeminormSpec<F>,
    denom: &RegionGauge<F>,
    points: &[Vector<F>],
) -> Result<OracleSummary<F>> {
    let mut max_ratio = F::zero();
    let mut used = 0;
    let mut skipped = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let den = denom.distance(&points[i], &points[j])?;
            if den <= F::TIGHT_TOL {
                skipped += 1;
                continue;
            }
            let num = q.eval(&(&f.evaluate(&points[i])? - &f.evaluate(&points[j])?))?;
            let ratio = num / den;
            if ratio > max_ratio {
                max_ratio = ratio;
            }
            used += 1;
        }
    }
    Ok(OracleSummary {
        pairs: points.len() * points.len().saturating_sub(1) / 2,
        used,
        skipped_degenerate: skipped,
        max_ratio,
        seed: 0,
    })
}

/// Pair-sampling oracle along a scalar section.
pub fn empirical_lipschitz_section<F: Real>(
    section: &Section<F>,
    t_lo: F,
    t_hi: F,
    pairs: usize,
    seed: u64,
) -> Result<OracleSummary<F>> {
    let mut rng = Rng::new(seed);
    let mut max_ratio = F::zero();
    let mut used = 0;
    let mut skipped = 0;
    for _ in 0..pairs {
        let t = F::of(rng.unit_f64()) * (t_hi - t_lo) + t_lo;
        let s = F::of(rng.unit_f64()) * (t_hi - t_lo) + t_lo;
        let den = (t - s).abs();
        if den <= F::TIGHT_TOL * (F::one() + t.abs().max(s.abs())) {
            skipped += 1;
            continue;
        }
        let ratio = (section.scalar(t)? - section.scalar(s)?).abs() / den;
        if ratio > max_ratio {
            max_ratio = ratio;
        }
        used += 1;
    }
    Ok(OracleSummary {
        pairs,
        used,
        skipped_degenerate: skipped,
        max_ratio,
        seed,
    })
}
