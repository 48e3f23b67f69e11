//! Finitely generated closed convex cones, the vector order they induce,
//! order intervals and full hulls.
//!
//! A cone is kept in generator (V-) form only: `C = { Σ λ_i g_i : λ_i ≥ 0 }`.
//! Closure under addition and nonnegative scaling holds by construction, and
//! membership is one uniform primitive: a linear feasibility program with a
//! scale-aware residual tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_square;
use crate::scalar::Real;
use crate::simplex::{feasible_nonneg, LpError};
use crate::vector::Vector;

/// Finitely generated closed convex cone in `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyCone<F> {
    pub dim: usize,
    pub generators: Vec<Vector<F>>,
}

impl<F: Real> PolyCone<F> {
    pub fn new(dim: usize, generators: Vec<Vector<F>>) -> Result<Self> {
        let cone = PolyCone { dim, generators };
        cone.validate()?;
        Ok(cone)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Input("cone dimension must be positive".into()));
        }
        if self.generators.is_empty() {
            return Err(Error::Input("cone needs at least one generator".into()));
        }
        for g in &self.generators {
            g.check_dim(self.dim)?;
            if !g.is_finite() {
                return Err(Error::Input("generator has non-finite entries".into()));
            }
            if g.sup_norm() == F::zero() {
                return Err(Error::Input("cone generators must be nonzero".into()));
            }
        }
        Ok(())
    }

    /// The coordinate cone `R^n_+` (standard basis generators).
    pub fn coordinate(dim: usize) -> Self {
        PolyCone {
            dim,
            generators: (0..dim).map(|i| Vector::basis(dim, i)).collect(),
        }
    }

    /// Block-diagonal product cone: each factor acts on its own coordinate
    /// slice of the concatenated space.
    pub fn product(blocks: &[PolyCone<F>]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Input("product of zero cones".into()));
        }
        let dim = blocks.iter().map(|c| c.dim).sum();
        let mut generators = Vec::new();
        let mut offset = 0;
        for block in blocks {
            block.validate()?;
            for g in &block.generators {
                let mut v = Vector::zeros(dim);
                for (i, &c) in g.iter().enumerate() {
                    v[offset + i] = c;
                }
                generators.push(v);
            }
            offset += block.dim;
        }
        Ok(PolyCone { dim, generators })
    }

    fn lp_columns(&self) -> Vec<Vec<F>> {
        self.generators
            .iter()
            .map(|g| {
                let s = g.sup_norm();
                (0..self.dim).map(|i| g[i] / s).collect()
            })
            .collect()
    }

    /// Partition of the coordinates (and generators) into connected
    /// components of the generator supports. Product cones decompose into
    /// their blocks; a dense cone is a single component.
    fn support_components(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut coord_comp: Vec<Option<usize>> = vec![None; self.dim];
        let mut comps: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut gen_supports: Vec<Vec<usize>> = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            gen_supports.push(
                (0..self.dim)
                    .filter(|&i| g[i] != F::zero())
                    .collect::<Vec<_>>(),
            );
        }
        let mut gen_assigned = vec![false; self.generators.len()];
        while let Some(seed) = gen_assigned.iter().position(|&a| !a) {
            let comp_id = comps.len();
            comps.push((Vec::new(), Vec::new()));
            let mut queue = vec![seed];
            gen_assigned[seed] = true;
            while let Some(gi) = queue.pop() {
                comps[comp_id].1.push(gi);
                for &ci in &gen_supports[gi] {
                    if coord_comp[ci].is_none() {
                        coord_comp[ci] = Some(comp_id);
                        comps[comp_id].0.push(ci);
                        for (gj, support) in gen_supports.iter().enumerate() {
                            if !gen_assigned[gj] && support.contains(&ci) {
                                gen_assigned[gj] = true;
                                queue.push(gj);
                            }
                        }
                    }
                }
            }
        }
        comps
    }

    /// Infeasibility of `v ∈ C` as the L1 defect of the best recovered
    /// conic combination, in the units of `v`. Zero (up to rounding) means
    /// membership.
    ///
    /// Membership decomposes over the connected components of the generator
    /// supports, and each component's system is row-equilibrated before the
    /// feasibility program runs, so thin sectors and product cones with
    /// blocks of wildly different magnitudes stay well conditioned.
    pub fn member_residual(&self, v: &Vector<F>) -> Result<F> {
        v.check_dim(self.dim)?;
        if v.sup_norm() == F::zero() {
            return Ok(F::zero());
        }
        let comps = self.support_components();
        let mut covered = vec![false; self.dim];
        let mut total = F::zero();
        for (coords, gens) in &comps {
            for &c in coords {
                covered[c] = true;
            }
            if coords.iter().all(|&c| v[c] == F::zero()) {
                continue;
            }
            let columns: Vec<Vec<F>> = gens
                .iter()
                .map(|&gi| {
                    let g = &self.generators[gi];
                    let gn = g.sup_norm();
                    coords.iter().map(|&c| g[c] / gn).collect()
                })
                .collect();
            let rhs: Vec<F> = coords.iter().map(|&c| v[c]).collect();
            total = total + equilibrated_defect(&columns, &rhs)?;
        }
        // Coordinates no generator touches must vanish.
        for i in 0..self.dim {
            if !covered[i] {
                total = total + v[i].abs();
            }
        }
        Ok(total)
    }

    /// Membership with the crate tolerance policy: `v ∈ C` is accepted when
    /// the feasibility residual is below `ORDER_TOL · (1 + sup_norm(v))`.
    pub fn contains(&self, v: &Vector<F>) -> Result<bool> {
        self.contains_with_tol(v, F::ORDER_TOL)
    }

    pub fn contains_with_tol(&self, v: &Vector<F>, tol: F) -> Result<bool> {
        let residual = self.member_residual(v)?;
        Ok(residual <= tol * (F::one() + v.sup_norm()))
    }

    /// The induced vector preorder: `x ≤_C y ⟺ y − x ∈ C`.
    pub fn order_le(&self, x: &Vector<F>, y: &Vector<F>) -> Result<bool> {
        x.check_dim(self.dim)?;
        y.check_dim(self.dim)?;
        self.contains(&(y - x))
    }

    /// Signed order margin for reports: coordinatewise minimum of `diff` for
    /// coordinate-like cones, otherwise 0 for members and minus the
    /// feasibility residual for non-members.
    pub fn signed_margin(&self, diff: &Vector<F>) -> Result<F> {
        diff.check_dim(self.dim)?;
        if self.is_coordinate_like() {
            return Ok(diff
                .iter()
                .fold(F::infinity(), |acc, &c| if c < acc { c } else { acc }));
        }
        let residual = self.member_residual(diff)?;
        if residual <= F::ORDER_TOL * (F::one() + diff.sup_norm()) {
            Ok(F::zero())
        } else {
            Ok(-residual)
        }
    }

    /// Pointedness: `C ∩ (−C) = {0}`.
    ///
    /// Checked two ways that must agree: (a) no generator g has −g ∈ C, and
    /// (b) the normalized kernel program `{Gν = 0, Σν = 1, ν ≥ 0}` is
    /// infeasible. For generator-form cones (a) alone is complete: any
    /// cancellation Gν = 0 with ν ≠ 0 exhibits a generator whose negative
    /// lies in C.
    pub fn is_pointed(&self) -> Result<bool> {
        for g in &self.generators {
            if self.contains(&(-g))? {
                return Ok(false);
            }
        }
        let mut columns = self.lp_columns();
        for col in columns.iter_mut() {
            col.push(F::one());
        }
        let mut rhs = vec![F::zero(); self.dim];
        rhs.push(F::one());
        let feas = feasible_nonneg(&columns, &rhs).map_err(lp_internal)?;
        Ok(feas.residual > F::ORDER_TOL)
    }

    /// True when the generators are exactly the coordinate directions: each
    /// has one strictly positive entry, and every axis is covered.
    pub fn is_coordinate_like(&self) -> bool {
        let mut covered = vec![false; self.dim];
        for g in &self.generators {
            let mut axis = None;
            for (i, &c) in g.iter().enumerate() {
                if c != F::zero() {
                    if axis.is_some() || c < F::zero() {
                        return false;
                    }
                    axis = Some(i);
                }
            }
            match axis {
                Some(i) => covered[i] = true,
                None => return false,
            }
        }
        covered.into_iter().all(|c| c)
    }

    /// Coordinates of `v` in the generator basis when the cone is simplicial
    /// (square, independent generator matrix); None otherwise.
    pub fn simplicial_coordinates(&self, v: &Vector<F>) -> Option<Vec<F>> {
        if self.generators.len() != self.dim {
            return None;
        }
        let scale = self
            .generators
            .iter()
            .map(|g| g.sup_norm())
            .fold(F::zero(), |a, b| if b > a { b } else { a });
        if scale == F::zero() {
            return None;
        }
        // Row i of the system is coordinate i of Σ λ_j g_j = v.
        let a: Vec<Vec<F>> = (0..self.dim)
            .map(|i| self.generators.iter().map(|g| g[i] / scale).collect())
            .collect();
        let b: Vec<F> = (0..self.dim).map(|i| v[i] / scale).collect();
        solve_square(&a, &b)
    }
}

fn lp_internal(e: LpError) -> Error {
    Error::Input(format!("internal LP failed: {e:?}"))
}

/// L1 defect of the best nonnegative combination `Σ x_j col_j ≈ rhs`, in the
/// units of `rhs`. Rows are equilibrated and the right-hand side normalized
/// before the phase-1 program runs; the defect is then re-measured in the
/// original units from the recovered solution, so the answer does not depend
/// on the conditioning of the scaled system.
fn equilibrated_defect<F: Real>(columns: &[Vec<F>], rhs: &[F]) -> Result<F> {
    let rows = rhs.len();
    let mut defect = F::zero();
    let mut row_scale = vec![F::zero(); rows];
    let mut live_rows = Vec::with_capacity(rows);
    for i in 0..rows {
        let m = columns
            .iter()
            .map(|c| c[i].abs())
            .fold(F::zero(), |a, b| if b > a { b } else { a });
        if m == F::zero() {
            // No generator touches this row: it must vanish.
            defect = defect + rhs[i].abs();
        } else {
            row_scale[i] = m;
            live_rows.push(i);
        }
    }
    if live_rows.is_empty() {
        return Ok(defect);
    }
    let scaled_rhs_raw: Vec<F> = live_rows
        .iter()
        .map(|&i| rhs[i] / row_scale[i])
        .collect();
    let s = scaled_rhs_raw
        .iter()
        .fold(F::zero(), |a, &b| if b.abs() > a { b.abs() } else { a });
    if s == F::zero() {
        return Ok(defect);
    }
    let scaled_columns: Vec<Vec<F>> = columns
        .iter()
        .map(|c| live_rows.iter().map(|&i| c[i] / row_scale[i]).collect())
        .collect();
    let scaled_rhs: Vec<F> = scaled_rhs_raw.iter().map(|&b| b / s).collect();
    let feas = feasible_nonneg(&scaled_columns, &scaled_rhs).map_err(lp_internal)?;
    // Re-measure the defect of the recovered combination in original units.
    let x = feas.x;
    for &i in &live_rows {
        let mut reached = F::zero();
        for (j, c) in columns.iter().enumerate() {
            reached = reached + x[j].max(F::zero()) * s * c[i];
        }
        defect = defect + (rhs[i] - reached).abs();
    }
    Ok(defect)
}

/// Membership of `z` in the full (order-convex) hull of a finite point set:
/// `z ∈ (A + C) ∩ (A − C)`, i.e. some point of A sits below z and some above.
pub fn full_hull_member<F: Real>(
    cone: &PolyCone<F>,
    points: &[Vector<F>],
    z: &Vector<F>,
) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::Input("full hull of an empty set".into()));
    }
    z.check_dim(cone.dim)?;
    let mut below = false;
    let mut above = false;
    for a in points {
        a.check_dim(cone.dim)?;
        if !below && cone.contains(&(z - a))? {
            below = true;
        }
        if !above && cone.contains(&(a - z))? {
            above = true;
        }
        if below && above {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Order interval `[lo, hi]_o = (lo + C) ∩ (hi − C)`; empty when the
/// endpoints are incomparable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderInterval<F> {
    pub cone: PolyCone<F>,
    pub lo: Vector<F>,
    pub hi: Vector<F>,
}

impl<F: Real> OrderInterval<F> {
    pub fn new(cone: PolyCone<F>, lo: Vector<F>, hi: Vector<F>) -> Result<Self> {
        lo.check_dim(cone.dim)?;
        hi.check_dim(cone.dim)?;
        Ok(OrderInterval { cone, lo, hi })
    }

    /// Nonempty iff lo ≤_C hi.
    pub fn is_empty(&self) -> Result<bool> {
        Ok(!self.cone.order_le(&self.lo, &self.hi)?)
    }

    pub fn contains(&self, z: &Vector<F>) -> Result<bool> {
        z.check_dim(self.cone.dim)?;
        Ok(self.cone.contains(&(z - &self.lo))? && self.cone.contains(&(&self.hi - z))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrant() -> PolyCone<f64> {
        PolyCone::coordinate(2)
    }

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

    #[test]
    fn member_positive_quadrant() {
        let c = quadrant();
        assert!(c.contains(&Vector::from_f64s(&[1.0, 1.0])).unwrap());
        assert!(!c.contains(&Vector::from_f64s(&[1.0, -1.0])).unwrap());
    }

    #[test]
    fn interval_membership_square() {
        // [0,(1,1)]_o under the coordinate order is the full unit square.
        let c = quadrant();
        let interval = OrderInterval::new(
            c,
            Vector::from_f64s(&[0.0, 0.0]),
            Vector::from_f64s(&[1.0, 1.0]),
        )
        .unwrap();
        assert!(interval.contains(&Vector::from_f64s(&[0.0, 1.0])).unwrap());
        assert!(!interval.contains(&Vector::from_f64s(&[1.5, 0.5])).unwrap());
        assert!(!interval.is_empty().unwrap());
    }

    #[test]
    fn incomparable_interval_is_empty() {
        let c = quadrant();
        let interval = OrderInterval::new(
            c,
            Vector::from_f64s(&[0.0, 1.0]),
            Vector::from_f64s(&[1.0, 0.0]),
        )
        .unwrap();
        assert!(interval.is_empty().unwrap());
    }

    #[test]
    fn pointedness() {
        assert!(quadrant().is_pointed().unwrap());
        // Contains the x2-axis in both directions: not pointed.
        let half_plane: PolyCone<f64> = PolyCone::new(
            2,
            vec![
                Vector::from_f64s(&[1.0, 0.0]),
                Vector::from_f64s(&[0.0, 1.0]),
                Vector::from_f64s(&[0.0, -1.0]),
            ],
        )
        .unwrap();
        assert!(!half_plane.is_pointed().unwrap());
        // Upward sector: pointed (decided by the feasibility program).
        assert!(sector(1.0).is_pointed().unwrap());
    }

    #[test]
    fn full_hull_of_square_diagonal() {
        // A = {0, (1,1)} under R²₊: hull is the unit square.
        let c = quadrant();
        let a = vec![
            Vector::from_f64s(&[0.0, 0.0]),
            Vector::from_f64s(&[1.0, 1.0]),
        ];
        assert!(full_hull_member(&c, &a, &Vector::from_f64s(&[0.5, 0.9])).unwrap());
        assert!(!full_hull_member(&c, &a, &Vector::from_f64s(&[2.0, 2.0])).unwrap());
        // A = {z}: z ∈ [z,z]_o.
        let z = Vector::from_f64s(&[0.3, -0.7]);
        assert!(full_hull_member(&c, &[z.clone()], &z).unwrap());
        assert!(full_hull_member(&c, &[], &z).is_err());
    }

    #[test]
    fn order_le_via_membership() {
        let c = quadrant();
        let x = Vector::from_f64s(&[0.0, 0.0]);
        let y = Vector::from_f64s(&[1.0, 1.0]);
        assert!(c.order_le(&x, &y).unwrap());
        assert!(!c.order_le(&y, &x).unwrap());
    }

    #[test]
    fn thin_sector_membership() {
        let c = sector(0.005);
        // u + v = (0, 2ε) ∈ C.
        assert!(c.contains(&Vector::from_f64s(&[0.0, 0.01])).unwrap());
        assert!(!c.contains(&Vector::from_f64s(&[0.0, -0.01])).unwrap());
        // (1, ε) on the boundary.
        assert!(c.contains(&Vector::from_f64s(&[1.0, 0.005])).unwrap());
    }

    #[test]
    fn coordinate_like_detection() {
        assert!(quadrant().is_coordinate_like());
        assert!(PolyCone::<f64>::coordinate(5).is_coordinate_like());
        assert!(!sector(0.5).is_coordinate_like());
        let scaled: PolyCone<f64> = PolyCone::new(
            2,
            vec![
                Vector::from_f64s(&[2.0, 0.0]),
                Vector::from_f64s(&[0.0, 0.5]),
            ],
        )
        .unwrap();
        // Scaled axes still generate the coordinate order.
        assert!(scaled.is_coordinate_like());
    }

    #[test]
    fn simplicial_coordinates_roundtrip() {
        let c = sector(1.0);
        let v = Vector::from_f64s(&[0.5, 2.5]);
        let coords = c.simplicial_coordinates(&v).unwrap();
        let rebuilt = c.generators[0]
            .scale(coords[0])
            .add_scaled(coords[1], &c.generators[1]);
        assert!((&rebuilt - &v).sup_norm() < 1e-12);
        assert!(quadrant().simplicial_coordinates(&v).is_some());
    }

    #[test]
    fn large_scale_tolerance_policy() {
        // Membership at magnitude 3^29 must still decide cleanly.
        let c = sector(0.5 * 3f64.powi(-29));
        let big = 3f64.powi(29);
        let x = Vector::from_f64s(&[big, 0.5]);
        assert!(c.contains(&x).unwrap());
    }

    #[test]
    fn product_cone_blocks() {
        let p: PolyCone<f64> = PolyCone::product(&[sector(1.0), quadrant()]).unwrap();
        assert_eq!(p.dim, 4);
        assert_eq!(p.generators.len(), 4);
        assert!(p
            .contains(&Vector::from_f64s(&[0.0, 2.0, 1.0, 1.0]))
            .unwrap());
        assert!(!p
            .contains(&Vector::from_f64s(&[0.0, 2.0, -1.0, 1.0]))
            .unwrap());
    }
}
