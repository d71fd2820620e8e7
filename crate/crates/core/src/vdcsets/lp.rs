//! Certified upper bound on delta(H) = inf { a0 : T in T(H) }.
//!
//! The infimum is relaxed to a linear program over a uniform grid
//! (minimize a0 subject to T >= 0 on the grid, T(0) = 1, and an l1 budget
//! on the cosine coefficients). The LP optimum alone is only a lower
//! relaxation, so the solved polynomial is then certified: a second-order
//! bound on a finer grid proves T >= -eps globally, and the exact repair
//! T -> (T + eps)/(1 + eps) yields a genuine member of T(H) whose constant
//! term is the returned upper bound.

use minilp::{ComparisonOp, OptimizationDirection, Problem, Variable};

use super::{CosinePolynomial, ShiftSet, VdcError};

/// Budget for sum |a_h|: ample for Fejer-type optima (which have l1 mass
/// below 1) while keeping the grid relaxation bounded.
const COEFF_BUDGET: f64 = 4.0;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Upper bound on delta(H) with the certified witness polynomial.
///
/// `grid_density` is the number of grid points per unit interval used for
/// the LP constraints (the certificate runs on a 10x finer grid, plus a
/// 10x-finer-again verification pass for the returned polynomial).
pub fn delta_upper(set: &ShiftSet, grid_density: usize) -> Result<(f64, CosinePolynomial), VdcError> {
    if set.dim() > 2 {
        return Err(VdcError::BadInput("delta LP handles k <= 2".into()));
    }
    if set.len() > 200 {
        return Err(VdcError::BadInput("delta LP handles |H| <= 200".into()));
    }
    let solved = match set.dim() {
        1 => solve_1d(set, grid_density.max(64))?,
        _ => solve_2d(set, grid_density.max(16))?,
    };
    let (a0, coeffs) = solved;

    // Second-order certificate on a 10x finer grid: inside a cell of
    // half-width hs around a checked point, T >= T(x) - |T'(x)| hs - L2 hs^2/2.
    let fine = 10 * grid_density.max(64);
    let eps = match set.dim() {
        1 => certificate_1d(set, a0, &coeffs, fine),
        _ => certificate_2d(set, a0, &coeffs, fine.min(40_960)),
    };
    let eps = eps.max(0.0);

    // Exact repair: (T + eps)/(1 + eps) is nonnegative with value 1 at 0.
    let scale = 1.0 / (1.0 + eps);
    let a0_fixed = (a0 + eps) * scale;
    let terms: Vec<(Vec<i64>, f64)> = set
        .elements()
        .iter()
        .cloned()
        .zip(coeffs.iter().map(|a| a * scale))
        .collect();
    let mut poly =
        CosinePolynomial { dim: set.dim(), a0: a0_fixed, terms, nonneg_margin: Some(eps) };

    // Renormalize T(0) to 1 exactly in f64 terms (guards accumulated
    // rounding in the LP solution).
    let t0 = poly.at_zero();
    if (t0 - 1.0).abs() > 1e-12 {
        let corr = 1.0 / t0;
        poly.a0 *= corr;
        for (_, a) in poly.terms.iter_mut() {
            *a *= corr;
        }
    }
    Ok((poly.a0, poly))
}

fn solve_1d(set: &ShiftSet, grid: usize) -> Result<(f64, Vec<f64>), VdcError> {
    let hs: Vec<i64> = set.elements().iter().map(|h| h[0]).collect();
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let a0 = p.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    let pos: Vec<Variable> = hs.iter().map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let neg: Vec<Variable> = hs.iter().map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();

    // T is even, so the grid only needs [0, 1/2].
    for i in 0..=grid / 2 {
        let x = i as f64 / grid as f64;
        let mut expr = Vec::with_capacity(1 + 2 * hs.len());
        expr.push((a0, 1.0));
        for (j, &h) in hs.iter().enumerate() {
            let c = (TAU * h as f64 * x).cos();
            expr.push((pos[j], c));
            expr.push((neg[j], -c));
        }
        p.add_constraint(expr, ComparisonOp::Ge, 0.0);
    }
    // T(0) = 1
    let mut norm = vec![(a0, 1.0)];
    for j in 0..hs.len() {
        norm.push((pos[j], 1.0));
        norm.push((neg[j], -1.0));
    }
    p.add_constraint(norm, ComparisonOp::Eq, 1.0);
    // l1 budget
    let mut budget = Vec::with_capacity(2 * hs.len());
    for j in 0..hs.len() {
        budget.push((pos[j], 1.0));
        budget.push((neg[j], 1.0));
    }
    p.add_constraint(budget, ComparisonOp::Le, COEFF_BUDGET);

    let sol = p.solve().map_err(|e| VdcError::Infeasible(e.to_string()))?;
    let coeffs: Vec<f64> = (0..hs.len()).map(|j| sol[pos[j]] - sol[neg[j]]).collect();
    Ok((sol[a0], coeffs))
}

fn solve_2d(set: &ShiftSet, grid: usize) -> Result<(f64, Vec<f64>), VdcError> {
    let elems = set.elements();
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let a0 = p.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    let pos: Vec<Variable> = elems.iter().map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let neg: Vec<Variable> = elems.iter().map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();

    for i in 0..=grid / 2 {
        for j in 0..grid {
            let x = [i as f64 / grid as f64, j as f64 / grid as f64];
            let mut expr = Vec::with_capacity(1 + 2 * elems.len());
            expr.push((a0, 1.0));
            for (t, h) in elems.iter().enumerate() {
                let c = (TAU * (h[0] as f64 * x[0] + h[1] as f64 * x[1])).cos();
                expr.push((pos[t], c));
                expr.push((neg[t], -c));
            }
            p.add_constraint(expr, ComparisonOp::Ge, 0.0);
        }
    }
    let mut norm = vec![(a0, 1.0)];
    for t in 0..elems.len() {
        norm.push((pos[t], 1.0));
        norm.push((neg[t], -1.0));
    }
    p.add_constraint(norm, ComparisonOp::Eq, 1.0);
    let mut budget = Vec::with_capacity(2 * elems.len());
    for t in 0..elems.len() {
        budget.push((pos[t], 1.0));
        budget.push((neg[t], 1.0));
    }
    p.add_constraint(budget, ComparisonOp::Le, COEFF_BUDGET);

    let sol = p.solve().map_err(|e| VdcError::Infeasible(e.to_string()))?;
    let coeffs: Vec<f64> = (0..elems.len()).map(|t| sol[pos[t]] - sol[neg[t]]).collect();
    Ok((sol[a0], coeffs))
}

/// Largest violation eps such that T >= -eps is certified globally.
fn certificate_1d(set: &ShiftSet, a0: f64, coeffs: &[f64], fine: usize) -> f64 {
    let hs: Vec<f64> = set.elements().iter().map(|h| h[0] as f64).collect();
    let l2: f64 = TAU * TAU * hs.iter().zip(coeffs).map(|(h, a)| h * h * a.abs()).sum::<f64>();
    let half_step = 0.5 / fine as f64;
    let mut worst = f64::INFINITY;
    for i in 0..=fine / 2 {
        let x = i as f64 / fine as f64;
        let mut t = a0;
        let mut dt = 0.0;
        for (h, a) in hs.iter().zip(coeffs) {
            let (s, c) = (TAU * h * x).sin_cos();
            t += a * c;
            dt -= a * TAU * h * s;
        }
        worst = worst.min(t - dt.abs() * half_step - 0.5 * l2 * half_step * half_step);
    }
    (-worst).max(0.0)
}

fn certificate_2d(set: &ShiftSet, a0: f64, coeffs: &[f64], fine: usize) -> f64 {
    let elems = set.elements();
    // Hessian bound |u^T H u| <= (2 pi)^2 sum |a_h| (|h1| + |h2|)^2 ||u||_inf^2.
    let l2: f64 = TAU
        * TAU
        * elems
            .iter()
            .zip(coeffs)
            .map(|(h, a)| {
                let s = h[0].abs() as f64 + h[1].abs() as f64;
                s * s * a.abs()
            })
            .sum::<f64>();
    let half_step = 0.5 / fine as f64;
    let mut worst = f64::INFINITY;
    for i in 0..=fine / 2 {
        for j in 0..fine {
            let x = [i as f64 / fine as f64, j as f64 / fine as f64];
            let mut t = a0;
            let mut gx = 0.0;
            let mut gy = 0.0;
            for (h, a) in elems.iter().zip(coeffs) {
                let dot = h[0] as f64 * x[0] + h[1] as f64 * x[1];
                let (s, c) = (TAU * dot).sin_cos();
                t += a * c;
                gx -= a * TAU * h[0] as f64 * s;
                gy -= a * TAU * h[1] as f64 * s;
            }
            let lin = (gx.abs() + gy.abs()) * half_step;
            worst = worst.min(t - lin - 0.5 * l2 * 2.0 * half_step * half_step);
        }
    }
    (-worst).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_single_shift_is_half() {
        let h = ShiftSet::one_dim([1]).unwrap();
        let (d, t) = delta_upper(&h, 8192).unwrap();
        assert!((d - 0.5).abs() < 1e-6, "d={d}");
        assert!((t.at_zero() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn delta_dilation_invariance() {
        // H = {2} dilates to the H = {1} problem.
        let h = ShiftSet::one_dim([2]).unwrap();
        let (d, _) = delta_upper(&h, 8192).unwrap();
        assert!((d - 0.5).abs() < 1e-5, "d={d}");
    }

    #[test]
    fn delta_first_eight_near_fejer() {
        let h = ShiftSet::one_dim(1..=8).unwrap();
        let (d, t) = delta_upper(&h, 16384).unwrap();
        assert!(d <= 1.0 / 9.0 + 1e-3, "d={d}");
        // returned polynomial is certified nonnegative on a finer grid
        let fine = 163_840;
        let mut min = f64::INFINITY;
        for i in 0..=fine / 2 {
            min = min.min(t.eval(&[i as f64 / fine as f64]));
        }
        assert!(min >= -1e-8, "min={min}");
    }

    #[test]
    fn delta_2d_axes() {
        // H = {(1,0), (0,1)}: delta = 1/2 (same argument as H = {1} per axis).
        let h = ShiftSet::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let (d, _) = delta_upper(&h, 128).unwrap();
        assert!(d <= 0.5 + 1e-2, "d={d}");
        assert!(d >= 0.5 - 1e-6, "d={d}");
    }

    #[test]
    fn delta_monotone_under_inclusion() {
        let small = ShiftSet::one_dim([1, 2, 3]).unwrap();
        let large = ShiftSet::one_dim(1..=6).unwrap();
        let (ds, _) = delta_upper(&small, 8192).unwrap();
        let (dl, _) = delta_upper(&large, 8192).unwrap();
        assert!(dl <= ds + 1e-6, "ds={ds} dl={dl}");
    }
}
