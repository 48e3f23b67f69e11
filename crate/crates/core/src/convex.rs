//! Evaluable convex maps into cone-ordered targets, their domains, and
//! scalar/vector sections along lines.
//!
//! Bodies are closed under the constructions the rest of the crate needs:
//! maxima of affine pieces, positive-semidefinite quadratics, piecewise
//! affine paths precomposed with a linear functional, and coordinatewise
//! composites. Constructors validate convexity (PSD check, slope
//! monotonicity); `new_unchecked` exists so tests can build deliberately
//! non-convex control maps.

use serde::{Deserialize, Serialize};

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::linalg::min_eigenvalue;
use crate::rng::Rng;
use crate::scalar::Real;
use crate::seminorm::SeminormSpec;
use crate::vector::Vector;

/// Evaluation domain attached to every map; evaluating outside is an error,
/// not an extension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain<F> {
    Box { lo: Vector<F>, hi: Vector<F> },
    Ball {
        center: Vector<F>,
        radius: F,
        seminorm: SeminormSpec<F>,
    },
}

impl<F: Real> Domain<F> {
    pub fn wide_box(dim: usize, half: F) -> Self {
        Domain::Box {
            lo: Vector::new(vec![-half; dim]),
            hi: Vector::new(vec![half; dim]),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Box { lo, .. } => lo.dim(),
            Domain::Ball { center, .. } => center.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::Box { lo, hi } => {
                hi.check_dim(lo.dim())?;
                if (0..lo.dim()).any(|i| lo[i] > hi[i]) {
                    return Err(Error::Input("domain box has lo > hi".into()));
                }
                Ok(())
            }
            Domain::Ball {
                center,
                radius,
                seminorm,
            } => {
                seminorm.validate(center.dim())?;
                if *radius <= F::zero() {
                    return Err(Error::Input("domain ball radius must be positive".into()));
                }
                Ok(())
            }
        }
    }

    pub fn contains(&self, x: &Vector<F>) -> Result<bool> {
        x.check_dim(self.dim())?;
        let tol = F::ORDER_TOL * (F::one() + x.sup_norm());
        match self {
            Domain::Box { lo, hi } => {
                Ok((0..x.dim()).all(|i| x[i] >= lo[i] - tol && x[i] <= hi[i] + tol))
            }
            Domain::Ball {
                center,
                radius,
                seminorm,
            } => Ok(seminorm.eval(&(x - center))? <= *radius + tol),
        }
    }

    /// Axis-aligned box containing the domain (half-widths may be infinite
    /// along seminorm kernel directions).
    pub fn enclosing_box(&self) -> Result<(Vector<F>, Vec<F>)> {
        match self {
            Domain::Box { lo, hi } => {
                let half = F::of(0.5);
                let center = (lo + hi).scale(half);
                let widths = (0..lo.dim()).map(|i| (hi[i] - lo[i]) * half).collect();
                Ok((center, widths))
            }
            Domain::Ball {
                center,
                radius,
                seminorm,
            } => Ok((center.clone(), seminorm.ball_halfwidths(center.dim(), *radius)?)),
        }
    }

    /// Uniform-ish sample; ball domains use rejection from the enclosing box
    /// with kernel directions truncated at the radius.
    pub fn sample(&self, rng: &mut Rng) -> Result<Vector<F>> {
        match self {
            Domain::Box { lo, hi } => Ok(Vector::new(
                (0..lo.dim())
                    .map(|i| {
                        F::of(rng.unit_f64()) * (hi[i] - lo[i]) + lo[i]
                    })
                    .collect(),
            )),
            Domain::Ball {
                center,
                radius,
                seminorm,
            } => {
                let h = seminorm.ball_halfwidths(center.dim(), *radius)?;
                let h: Vec<F> = h
                    .into_iter()
                    .map(|w| if w.is_finite() { w } else { *radius })
                    .collect();
                for _ in 0..1000 {
                    let x = Vector::new(
                        (0..center.dim())
                            .map(|i| center[i] + F::of(rng.range_f64(-1.0, 1.0)) * h[i])
                            .collect(),
                    );
                    if seminorm.eval(&(&x - center))? <= *radius {
                        return Ok(x);
                    }
                }
                Ok(center.clone())
            }
        }
    }
}

/// One affine piece `x ↦ ⟨weights, x⟩ + offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece<F> {
    pub weights: Vector<F>,
    pub offset: F,
}

impl<F: Real> AffinePiece<F> {
    pub fn eval(&self, x: &Vector<F>) -> F {
        self.weights.dot(x) + self.offset
    }
}

/// One scalar output `x ↦ ½·0 + xᵀAx + ⟨b,x⟩ + c` with A symmetric PSD.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm<F> {
    pub matrix: Vec<Vector<F>>,
    pub linear: Vector<F>,
    pub constant: F,
}

impl<F: Real> QuadraticForm<F> {
    pub fn eval(&self, x: &Vector<F>) -> F {
        let mut quad = F::zero();
        for (row, &xi) in self.matrix.iter().zip(x.iter()) {
            quad = quad + xi * row.dot(x);
        }
        quad + self.linear.dot(x) + self.constant
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapBody<F> {
    /// Per output coordinate, the max of finitely many affine pieces.
    MaxAffine { outputs: Vec<Vec<AffinePiece<F>>> },
    /// Per output coordinate, a PSD quadratic.
    PsdQuadratic { outputs: Vec<QuadraticForm<F>> },
    /// `x ↦ path(⟨functional, x⟩)`: breakpoint interpolation in the target,
    /// extended affinely beyond the first/last breakpoint.
    PwPath {
        functional: Vector<F>,
        breakpoints: Vec<F>,
        values: Vec<Vector<F>>,
    },
    /// Coordinatewise stacking of component maps; the target cone is the
    /// product of component cones.
    Composite { components: Vec<ConvexMap<F>> },
}

/// An evaluable map, convex with respect to the order induced by
/// `target_cone` on the target space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexMap<F> {
    pub body: MapBody<F>,
    pub domain: Domain<F>,
    pub target_cone: PolyCone<F>,
}

impl<F: Real> ConvexMap<F> {
    pub fn max_affine(
        outputs: Vec<Vec<AffinePiece<F>>>,
        domain: Domain<F>,
        target_cone: PolyCone<F>,
    ) -> Result<Self> {
        let map = ConvexMap {
            body: MapBody::MaxAffine { outputs },
            domain,
            target_cone,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn psd_quadratic(
        outputs: Vec<QuadraticForm<F>>,
        domain: Domain<F>,
        target_cone: PolyCone<F>,
    ) -> Result<Self> {
        let map = ConvexMap {
            body: MapBody::PsdQuadratic { outputs },
            domain,
            target_cone,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn pw_path(
        functional: Vector<F>,
        breakpoints: Vec<F>,
        values: Vec<Vector<F>>,
        domain: Domain<F>,
        target_cone: PolyCone<F>,
    ) -> Result<Self> {
        let map = ConvexMap {
            body: MapBody::PwPath {
                functional,
                breakpoints,
                values,
            },
            domain,
            target_cone,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn composite(components: Vec<ConvexMap<F>>, domain: Domain<F>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Input("composite needs components".into()));
        }
        let cones: Vec<PolyCone<F>> =
            components.iter().map(|c| c.target_cone.clone()).collect();
        let target_cone = PolyCone::product(&cones)?;
        let map = ConvexMap {
            body: MapBody::Composite { components },
            domain,
            target_cone,
        };
        map.validate()?;
        Ok(map)
    }

    /// Build without the convexity validation (dims are still checked).
    /// Exists for deliberately non-convex control maps in equivalence tests
    /// and for constructions whose convexity is verified explicitly.
    pub fn new_unchecked(
        body: MapBody<F>,
        domain: Domain<F>,
        target_cone: PolyCone<F>,
    ) -> Result<Self> {
        let map = ConvexMap {
            body,
            domain,
            target_cone,
        };
        map.validate_shapes()?;
        Ok(map)
    }

    pub fn domain_dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn target_dim(&self) -> usize {
        match &self.body {
            MapBody::MaxAffine { outputs } => outputs.len(),
            MapBody::PsdQuadratic { outputs } => outputs.len(),
            MapBody::PwPath { values, .. } => values.first().map_or(0, Vector::dim),
            MapBody::Composite { components } => {
                components.iter().map(ConvexMap::target_dim).sum()
            }
        }
    }

    fn validate_shapes(&self) -> Result<()> {
        self.domain.validate()?;
        self.target_cone.validate()?;
        let dd = self.domain_dim();
        let td = self.target_dim();
        if td == 0 {
            return Err(Error::Input("map has no outputs".into()));
        }
        if self.target_cone.dim != td {
            return Err(Error::DimMismatch {
                expected: td,
                got: self.target_cone.dim,
            });
        }
        match &self.body {
            MapBody::MaxAffine { outputs } => {
                for pieces in outputs {
                    if pieces.is_empty() {
                        return Err(Error::Input("max-affine output with no pieces".into()));
                    }
                    for p in pieces {
                        p.weights.check_dim(dd)?;
                    }
                }
            }
            MapBody::PsdQuadratic { outputs } => {
                for q in outputs {
                    if q.matrix.len() != dd {
                        return Err(Error::DimMismatch {
                            expected: dd,
                            got: q.matrix.len(),
                        });
                    }
                    for row in &q.matrix {
                        row.check_dim(dd)?;
                    }
                    q.linear.check_dim(dd)?;
                }
            }
            MapBody::PwPath {
                functional,
                breakpoints,
                values,
            } => {
                functional.check_dim(dd)?;
                if breakpoints.len() < 2 || breakpoints.len() != values.len() {
                    return Err(Error::Input(
                        "pw-path needs matching breakpoints and values, at least two".into(),
                    ));
                }
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Input("pw-path breakpoints must increase".into()));
                }
                for v in values {
                    v.check_dim(td)?;
                }
            }
            MapBody::Composite { components } => {
                for c in components {
                    if c.domain_dim() != dd {
                        return Err(Error::DimMismatch {
                            expected: dd,
                            got: c.domain_dim(),
                        });
                    }
                    c.validate_shapes()?;
                }
            }
        }
        Ok(())
    }

    /// Shape checks plus convexity witnesses: PSD matrices, monotone path
    /// slopes.
    pub fn validate(&self) -> Result<()> {
        self.validate_shapes()?;
        match &self.body {
            MapBody::MaxAffine { .. } => Ok(()),
            MapBody::PsdQuadratic { outputs } => {
                for q in outputs {
                    let rows: Vec<Vec<F>> =
                        q.matrix.iter().map(|r| r.0.to_vec()).collect();
                    let scale = rows
                        .iter()
                        .flatten()
                        .fold(F::zero(), |a, &b| if b.abs() > a { b.abs() } else { a });
                    // Symmetry.
                    for (i, row) in rows.iter().enumerate() {
                        for (j, &v) in row.iter().enumerate() {
                            if (v - rows[j][i]).abs() > F::CHECK_TOL * (F::one() + scale) {
                                return Err(Error::Input(
                                    "quadratic matrix is not symmetric".into(),
                                ));
                            }
                        }
                    }
                    if min_eigenvalue(&rows) < -F::CHECK_TOL * (F::one() + scale) {
                        return Err(Error::Input(
                            "quadratic matrix is not positive semidefinite".into(),
                        ));
                    }
                }
                Ok(())
            }
            MapBody::PwPath { .. } => {
                let slopes = self.path_slopes()?;
                for pair in slopes.windows(2) {
                    if !self.target_cone.contains(&(&pair[1] - &pair[0]))? {
                        return Err(Error::Input(
                            "pw-path slopes are not monotone in the target order".into(),
                        ));
                    }
                }
                Ok(())
            }
            MapBody::Composite { components } => {
                for c in components {
                    c.validate()?;
                }
                Ok(())
            }
        }
    }

    /// Segment slopes of a pw-path body.
    pub fn path_slopes(&self) -> Result<Vec<Vector<F>>> {
        match &self.body {
            MapBody::PwPath {
                breakpoints,
                values,
                ..
            } => Ok((0..breakpoints.len() - 1)
                .map(|k| {
                    (&values[k + 1] - &values[k])
                        .scale(F::one() / (breakpoints[k + 1] - breakpoints[k]))
                })
                .collect()),
            _ => Err(Error::Input("not a pw-path map".into())),
        }
    }

    pub fn evaluate(&self, x: &Vector<F>) -> Result<Vector<F>> {
        x.check_dim(self.domain_dim())?;
        if !self.domain.contains(x)? {
            return Err(Error::Input(format!(
                "evaluation outside the declared domain at {:?}",
                x.0.iter().map(|c| c.to_f64()).collect::<Vec<_>>()
            )));
        }
        self.eval_body(x)
    }

    fn eval_body(&self, x: &Vector<F>) -> Result<Vector<F>> {
        match &self.body {
            MapBody::MaxAffine { outputs } => Ok(Vector::new(
                outputs
                    .iter()
                    .map(|pieces| {
                        pieces
                            .iter()
                            .map(|p| p.eval(x))
                            .fold(F::neg_infinity(), |a, b| if b > a { b } else { a })
                    })
                    .collect(),
            )),
            MapBody::PsdQuadratic { outputs } => {
                Ok(Vector::new(outputs.iter().map(|q| q.eval(x)).collect()))
            }
            MapBody::PwPath {
                functional,
                breakpoints,
                values,
            } => {
                let t = functional.dot(x);
                Ok(path_value(breakpoints, values, t))
            }
            MapBody::Composite { components } => {
                let mut out = Vec::new();
                for c in components {
                    out.extend(c.eval_body(x)?.0);
                }
                Ok(Vector::new(out))
            }
        }
    }

    /// Sampled check of the defining convexity inequality
    /// `f((1−α)x₁ + αx₂) ≤_C (1−α)f(x₁) + αf(x₂)`.
    pub fn check_convexity(&self, samples: usize, seed: u64) -> Result<ConvexityReport<F>> {
        let mut rng = Rng::new(seed);
        let mut min_margin = F::infinity();
        let mut witness = None;
        for _ in 0..samples {
            let x1 = self.domain.sample(&mut rng)?;
            let x2 = self.domain.sample(&mut rng)?;
            let alpha = F::of(rng.unit_f64());
            let mid = x1.scale(F::one() - alpha).add_scaled(alpha, &x2);
            if !self.domain.contains(&mid)? {
                continue;
            }
            let fx1 = self.evaluate(&x1)?;
            let fx2 = self.evaluate(&x2)?;
            let fmid = self.evaluate(&mid)?;
            let rhs = fx1.scale(F::one() - alpha).add_scaled(alpha, &fx2);
            let diff = &rhs - &fmid;
            let scale = F::one() + rhs.sup_norm().max(fmid.sup_norm());
            let margin = self.target_cone.signed_margin(&diff)? / scale;
            if margin < min_margin {
                min_margin = margin;
                if margin < -F::CHECK_TOL {
                    witness = Some((x1.clone(), x2.clone(), alpha));
                }
            }
        }
        Ok(ConvexityReport {
            min_margin,
            holds: min_margin >= -F::CHECK_TOL,
            witness,
        })
    }
}

/// Interpolate breakpoint values at parameter `t`, extending affinely with
/// the first/last segment slope outside the breakpoint range.
pub(crate) fn path_value<F: Real>(breakpoints: &[F], values: &[Vector<F>], t: F) -> Vector<F> {
    let n = breakpoints.len();
    let segment = |k: usize, t: F| -> Vector<F> {
        let dt = breakpoints[k + 1] - breakpoints[k];
        let lambda = (t - breakpoints[k]) / dt;
        values[k].scale(F::one() - lambda).add_scaled(lambda, &values[k + 1])
    };
    if t <= breakpoints[0] {
        return segment(0, t);
    }
    if t >= breakpoints[n - 1] {
        return segment(n - 2, t);
    }
    let k = match breakpoints
        .binary_search_by(|b| b.partial_cmp(&t).expect("finite breakpoints"))
    {
        Ok(i) => return values[i].clone(),
        Err(i) => i - 1,
    };
    segment(k, t)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexityReport<F> {
    /// Worst relative order margin seen (negative = violation).
    pub min_margin: F,
    pub holds: bool,
    #[serde(skip)]
    pub witness: Option<(Vector<F>, Vector<F>, F)>,
}

/// Restriction of a map to a line `t ↦ f(base + t·dir)`, optionally
/// projected to one output coordinate. Component sections presume the
/// coordinate order on the target.
#[derive(Clone, Debug)]
pub struct Section<F> {
    pub map: ConvexMap<F>,
    pub base: Vector<F>,
    pub dir: Vector<F>,
    pub output: Option<usize>,
}

impl<F: Real> Section<F> {
    pub fn new(map: ConvexMap<F>, base: Vector<F>, dir: Vector<F>) -> Result<Self> {
        base.check_dim(map.domain_dim())?;
        dir.check_dim(map.domain_dim())?;
        Ok(Section {
            map,
            base,
            dir,
            output: None,
        })
    }

    pub fn with_output(mut self, index: usize) -> Result<Self> {
        if index >= self.map.target_dim() {
            return Err(Error::Input(format!(
                "output index {index} out of range for target dim {}",
                self.map.target_dim()
            )));
        }
        self.output = Some(index);
        Ok(self)
    }

    /// A 1-d map viewed as the section along its own axis.
    pub fn of_scalar_map(map: ConvexMap<F>) -> Result<Self> {
        if map.domain_dim() != 1 {
            return Err(Error::Input("of_scalar_map needs a 1-d domain".into()));
        }
        let base = Vector::zeros(1);
        let dir = Vector::new(vec![F::one()]);
        Section::new(map, base, dir)
    }

    pub fn point_at(&self, t: F) -> Vector<F> {
        self.base.add_scaled(t, &self.dir)
    }

    pub fn value(&self, t: F) -> Result<Vector<F>> {
        let v = self.map.evaluate(&self.point_at(t))?;
        Ok(match self.output {
            Some(i) => Vector::new(vec![v[i]]),
            None => v,
        })
    }

    pub fn scalar(&self, t: F) -> Result<F> {
        match self.output {
            Some(i) => Ok(self.map.evaluate(&self.point_at(t))?[i]),
            None => {
                if self.map.target_dim() == 1 {
                    Ok(self.map.evaluate(&self.point_at(t))?[0])
                } else {
                    Err(Error::Input(
                        "scalar() on a vector section: select an output index".into(),
                    ))
                }
            }
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.output.is_some() || self.map.target_dim() == 1
    }

    /// Order margin of `diff ≥ 0` in the section's target order.
    pub fn order_margin(&self, diff: &Vector<F>) -> Result<F> {
        match self.output {
            Some(_) => Ok(diff[0]),
            None => self.map.target_cone.signed_margin(diff),
        }
    }

    /// Admissible parameter interval (closed, possibly huge for wide
    /// domains).
    pub fn t_range(&self) -> Result<(F, F)> {
        match &self.map.domain {
            Domain::Box { lo, hi } => {
                let mut t_lo = F::neg_infinity();
                let mut t_hi = F::infinity();
                for i in 0..lo.dim() {
                    let d = self.dir[i];
                    if d == F::zero() {
                        if self.base[i] < lo[i] || self.base[i] > hi[i] {
                            return Err(Error::Input(
                                "section line misses the domain box".into(),
                            ));
                        }
                        continue;
                    }
                    let a = (lo[i] - self.base[i]) / d;
                    let b = (hi[i] - self.base[i]) / d;
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    if a > t_lo {
                        t_lo = a;
                    }
                    if b < t_hi {
                        t_hi = b;
                    }
                }
                if t_lo > t_hi {
                    return Err(Error::Input("section line misses the domain box".into()));
                }
                Ok((t_lo, t_hi))
            }
            Domain::Ball {
                center,
                radius,
                seminorm,
            } => {
                let psi = |t: F| -> Result<F> {
                    seminorm.eval(&(&self.point_at(t) - center))
                };
                if psi(F::zero())? > *radius {
                    return Err(Error::Input(
                        "section base lies outside the ball domain".into(),
                    ));
                }
                let p_dir = seminorm.eval(&self.dir)?;
                if p_dir <= F::TIGHT_TOL {
                    // Line in a kernel direction: the whole line is inside.
                    return Ok((F::neg_infinity(), F::infinity()));
                }
                let reach = (*radius + psi(F::zero())?) / p_dir + F::one();
                let hi = bisect_boundary(&psi, F::zero(), reach, *radius)?;
                let lo = bisect_boundary(&psi, F::zero(), -reach, *radius)?;
                Ok((lo, hi))
            }
        }
    }

    /// The section as a scalar closure (for generic diagnostics).
    pub fn as_scalar_fn(&self) -> impl Fn(F) -> Result<F> + '_ {
        move |t| self.scalar(t)
    }
}

/// Largest |t| in the direction of `far` with psi(t) ≤ level, assuming psi
/// convex with psi(near) ≤ level.
fn bisect_boundary<F: Real>(
    psi: &impl Fn(F) -> Result<F>,
    near: F,
    far: F,
    level: F,
) -> Result<F> {
    if psi(far)? <= level {
        return Ok(far);
    }
    let mut inside = near;
    let mut outside = far;
    for _ in 0..80 {
        let mid = (inside + outside) * F::of(0.5);
        if psi(mid)? <= level {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(inside)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// f(t) = t² on [-bound, bound].
    pub fn square_1d(bound: f64) -> ConvexMap<f64> {
        ConvexMap::psd_quadratic(
            vec![QuadraticForm {
                matrix: vec![Vector::from_f64s(&[1.0])],
                linear: Vector::from_f64s(&[0.0]),
                constant: 0.0,
            }],
            Domain::wide_box(1, bound),
            PolyCone::coordinate(1),
        )
        .unwrap()
    }

    /// f(t) = |t| = max(t, −t) on [-bound, bound].
    pub fn abs_1d(bound: f64) -> ConvexMap<f64> {
        ConvexMap::max_affine(
            vec![vec![
                AffinePiece {
                    weights: Vector::from_f64s(&[1.0]),
                    offset: 0.0,
                },
                AffinePiece {
                    weights: Vector::from_f64s(&[-1.0]),
                    offset: 0.0,
                },
            ]],
            Domain::wide_box(1, bound),
            PolyCone::coordinate(1),
        )
        .unwrap()
    }

    /// f(x) = ‖x‖∞ on the sup-ball of the given radius in R².
    pub fn sup_norm_2d(bound: f64) -> ConvexMap<f64> {
        let e = |w: &[f64]| AffinePiece {
            weights: Vector::from_f64s(w),
            offset: 0.0,
        };
        ConvexMap::max_affine(
            vec![vec![
                e(&[1.0, 0.0]),
                e(&[-1.0, 0.0]),
                e(&[0.0, 1.0]),
                e(&[0.0, -1.0]),
            ]],
            Domain::wide_box(2, bound),
            PolyCone::coordinate(1),
        )
        .unwrap()
    }

    /// f(x) = (x₁², x₂²) into the coordinate cone.
    pub fn coordinate_squares_2d(bound: f64) -> ConvexMap<f64> {
        let q = |row: &[f64]| QuadraticForm {
            matrix: vec![
                Vector::from_f64s(&[row[0], 0.0]),
                Vector::from_f64s(&[0.0, row[1]]),
            ],
            linear: Vector::from_f64s(&[0.0, 0.0]),
            constant: 0.0,
        };
        ConvexMap::psd_quadratic(
            vec![q(&[1.0, 0.0]), q(&[0.0, 1.0])],
            Domain::wide_box(2, bound),
            PolyCone::coordinate(2),
        )
        .unwrap()
    }

    /// Deliberately non-convex control: f(x) = −(x₁² + x₂²).
    pub fn negated_quadratic_2d(bound: f64) -> ConvexMap<f64> {
        ConvexMap::new_unchecked(
            MapBody::PsdQuadratic {
                outputs: vec![QuadraticForm {
                    matrix: vec![
                        Vector::from_f64s(&[-1.0, 0.0]),
                        Vector::from_f64s(&[0.0, -1.0]),
                    ],
                    linear: Vector::from_f64s(&[0.0, 0.0]),
                    constant: 0.0,
                }],
            },
            Domain::wide_box(2, bound),
            PolyCone::coordinate(1),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn max_affine_abs() {
        let f = abs_1d(10.0);
        assert_eq!(f.evaluate(&Vector::from_f64s(&[-2.0])).unwrap()[0], 2.0);
    }

    #[test]
    fn quadratic_eval() {
        let f = coordinate_squares_2d(10.0);
        let v = f.evaluate(&Vector::from_f64s(&[1.0, 1.0])).unwrap();
        assert_eq!(v.0, vec![1.0, 1.0]);
        let g = square_1d(10.0);
        assert_eq!(g.evaluate(&Vector::from_f64s(&[3.0])).unwrap()[0], 9.0);
    }

    #[test]
    fn path_interpolation() {
        let f: ConvexMap<f64> = ConvexMap::pw_path(
            Vector::from_f64s(&[1.0]),
            vec![0.0, 1.0],
            vec![Vector::from_f64s(&[0.0]), Vector::from_f64s(&[1.0])],
            Domain::wide_box(1, 10.0),
            PolyCone::coordinate(1),
        )
        .unwrap();
        assert_eq!(f.evaluate(&Vector::from_f64s(&[0.5])).unwrap()[0], 0.5);
        // Affine extension beyond the last breakpoint.
        assert_eq!(f.evaluate(&Vector::from_f64s(&[2.0])).unwrap()[0], 2.0);
    }

    #[test]
    fn domain_enforced() {
        let f = square_1d(1.0);
        assert!(f.evaluate(&Vector::from_f64s(&[5.0])).is_err());
    }

    #[test]
    fn non_monotone_path_rejected() {
        let r: Result<ConvexMap<f64>> = ConvexMap::pw_path(
            Vector::from_f64s(&[1.0]),
            vec![0.0, 1.0, 2.0],
            vec![
                Vector::from_f64s(&[0.0]),
                Vector::from_f64s(&[2.0]),
                Vector::from_f64s(&[3.0]),
            ],
            Domain::wide_box(1, 10.0),
            PolyCone::coordinate(1),
        );
        assert!(r.is_err());
    }

    #[test]
    fn non_psd_rejected() {
        let r: Result<ConvexMap<f64>> = ConvexMap::psd_quadratic(
            vec![QuadraticForm {
                matrix: vec![Vector::from_f64s(&[-1.0])],
                linear: Vector::from_f64s(&[0.0]),
                constant: 0.0,
            }],
            Domain::wide_box(1, 1.0),
            PolyCone::coordinate(1),
        );
        assert!(r.is_err());
    }

    #[test]
    fn convexity_check_detects_control_map() {
        let good = coordinate_squares_2d(2.0);
        assert!(good.check_convexity(2000, 7).unwrap().holds);
        let bad = negated_quadratic_2d(2.0);
        assert!(!bad.check_convexity(2000, 7).unwrap().holds);
    }

    #[test]
    fn composite_stacks_outputs() {
        let f = ConvexMap::composite(
            vec![sup_norm_2d(5.0), coordinate_squares_2d(5.0)],
            Domain::wide_box(2, 5.0),
        )
        .unwrap();
        assert_eq!(f.target_dim(), 3);
        let v = f.evaluate(&Vector::from_f64s(&[2.0, -1.0])).unwrap();
        assert_eq!(v.0, vec![2.0, 4.0, 1.0]);
    }

    #[test]
    fn section_range_box() {
        let f = coordinate_squares_2d(2.0);
        let s = Section::new(f, Vector::from_f64s(&[0.0, 0.0]), Vector::from_f64s(&[1.0, 0.0]))
            .unwrap();
        let (lo, hi) = s.t_range().unwrap();
        assert!((lo + 2.0).abs() < 1e-12);
        assert!((hi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn section_range_ball_kernel_direction() {
        let p: SeminormSpec<f64> = SeminormSpec::WeightedSup {
            weights: Vector::from_f64s(&[1.0, 0.0]),
        };
        let f = ConvexMap::max_affine(
            vec![vec![AffinePiece {
                weights: Vector::from_f64s(&[1.0, 0.0]),
                offset: 0.0,
            }]],
            Domain::Ball {
                center: Vector::from_f64s(&[0.0, 0.0]),
                radius: 1.0,
                seminorm: p,
            },
            PolyCone::coordinate(1),
        )
        .unwrap();
        let s = Section::new(f, Vector::from_f64s(&[0.0, 0.0]), Vector::from_f64s(&[0.0, 1.0]))
            .unwrap();
        let (lo, hi) = s.t_range().unwrap();
        assert!(lo.is_infinite() && hi.is_infinite());
    }

    #[test]
    fn serde_roundtrip() {
        let f = sup_norm_2d(3.0);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"kind\":\"max-affine\""));
        let back: ConvexMap<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
