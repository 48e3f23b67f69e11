//! Coordinatewise vector-lattice operations.
//!
//! The lattice order is fixed to the coordinate cone `R^n_+`; identities that
//! hold for real numbers then hold coordinatewise, which is what the identity
//! suite checks.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Real;
use crate::vector::Vector;

/// Record returned by [`lattice_ops`]: supremum, infimum, and the positive
/// part / negative part / absolute value of `x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeOps<F> {
    pub sup: Vector<F>,
    pub inf: Vector<F>,
    pub pos_part_x: Vector<F>,
    pub neg_part_x: Vector<F>,
    pub abs_x: Vector<F>,
}

pub fn lattice_ops<F: Real>(x: &Vector<F>, y: &Vector<F>) -> Result<LatticeOps<F>> {
    y.check_dim(x.dim())?;
    let zero = Vector::zeros(x.dim());
    Ok(LatticeOps {
        sup: x.sup(y),
        inf: x.inf(y),
        pos_part_x: x.sup(&zero),
        neg_part_x: (-x).sup(&zero),
        abs_x: x.abs(),
    })
}

/// Residuals of the lattice identities on one pair, all of which are zero in
/// exact arithmetic:
///
/// (i)   x = x⁺ − x⁻,  x⁺ ∧ x⁻ = 0,  |x| = x⁺ + x⁻,  |−x| = |x|
/// (ii)  ||x|−|y|| ≤ |x+y| ≤ |x|+|y|
/// (iii) |x| ≤ a ⟺ (x ≤ a and −x ≤ a),  a ≥ 0
/// (iv)  |x|∨|y| = ½[|x+y| + |x−y|],  |x|∧|y| = ½||x+y| − |x−y||
/// (v)   x ≤ y ≤ z ⟹ |y| ≤ |x|∨|z|
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityResiduals<F> {
    pub decomposition: F,
    pub disjointness: F,
    pub abs_sum: F,
    pub abs_symmetry: F,
    pub triangle_lower: F,
    pub triangle_upper: F,
    pub abs_bound_equiv: bool,
    pub sup_formula: F,
    pub inf_formula: F,
}

pub fn identity_residuals<F: Real>(x: &Vector<F>, y: &Vector<F>) -> Result<IdentityResiduals<F>> {
    y.check_dim(x.dim())?;
    let ops = lattice_ops(x, y)?;

    let decomposition = (&(&ops.pos_part_x - &ops.neg_part_x) - x).sup_norm();
    let disjointness = ops.pos_part_x.inf(&ops.neg_part_x).sup_norm();
    let abs_sum = (&(&ops.pos_part_x + &ops.neg_part_x) - &ops.abs_x).sup_norm();
    let abs_symmetry = (&(-x).abs() - &ops.abs_x).sup_norm();

    let sum_abs = (x + y).abs();
    let diff_abs = (x - y).abs();
    // One-sided margins: negative would mean a violated inequality.
    let triangle_lower = violation(&(&x.abs() - &y.abs()).abs(), &sum_abs);
    let triangle_upper = violation(&sum_abs, &(&x.abs() + &y.abs()));

    // (iii) with a = |x| ∨ |y| (a ≥ 0 by construction).
    let a = x.abs().sup(&y.abs());
    let abs_le = x.abs().le_coordinatewise(&a);
    let both_le = x.le_coordinatewise(&a) && (-x).le_coordinatewise(&a);
    let abs_bound_equiv = abs_le == both_le;

    let half = F::of(0.5);
    let sup_formula = (&(&sum_abs + &diff_abs).scale(half) - &x.abs().sup(&y.abs())).sup_norm();
    let inf_formula = (&(&sum_abs - &diff_abs).abs().scale(half) - &x.abs().inf(&y.abs())).sup_norm();

    Ok(IdentityResiduals {
        decomposition,
        disjointness,
        abs_sum,
        abs_symmetry,
        triangle_lower,
        triangle_upper,
        abs_bound_equiv,
        sup_formula,
        inf_formula,
    })
}

/// Worst violation of `lhs ≤ rhs` coordinatewise (0 when it holds).
fn violation<F: Real>(lhs: &Vector<F>, rhs: &Vector<F>) -> F {
    (0..lhs.dim()).fold(F::zero(), |acc, i| {
        let v = lhs[i] - rhs[i];
        if v > acc {
            v
        } else {
            acc
        }
    })
}

/// Residual of identity (v) on a chain x ≤ y ≤ z: violation of
/// |y| ≤ |x| ∨ |z| (0 when it holds).
pub fn chain_abs_bound_violation<F: Real>(
    x: &Vector<F>,
    y: &Vector<F>,
    z: &Vector<F>,
) -> Result<F> {
    y.check_dim(x.dim())?;
    z.check_dim(x.dim())?;
    Ok(violation(&y.abs(), &x.abs().sup(&z.abs())))
}
