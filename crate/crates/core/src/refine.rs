//! Support selection and least-squares refinement.
//!
//! The decoders nominate a support; the final coefficient values come from
//! solving the least squares problem restricted to those frame columns. The
//! solver is LSQR (Golub-Kahan bidiagonalization with Givens rotations),
//! which only ever touches the frame through sparse column sums, so a
//! refinement costs `O(|support| d_v)` per iteration. The genie baseline is
//! the same refinement run on the true support.

use crate::error::{Error, Result};
use crate::frame::LowDensityFrame;
use crate::select::{top_l_indices, Selection};

/// Default relative tolerance of the refinement solves.
pub const LSQR_TOL: f64 = 1e-10;
/// Default iteration cap of the refinement solves.
pub const LSQR_MAX_ITERS: usize = 500;

/// A sorted set of column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    indices: Vec<usize>,
}

impl Support {
    /// Builds a support from arbitrary indices: sorts, removes duplicates,
    /// and rejects anything outside `[0, m)`.
    pub fn new(mut indices: Vec<usize>, m: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&last) = indices.last() {
            if last >= m {
                return Err(Error::InvalidConfig(format!(
                    "support index {last} out of range (M = {m})"
                )));
            }
        }
        Ok(Support { indices })
    }

    /// The support of a signal: indices of its nonzero entries.
    pub fn of_signal(x: &[f64]) -> Self {
        Support {
            indices: x
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }
}

/// Indices of the `l` largest-magnitude entries, ties to the lower index.
pub fn threshold_top_l(x: &[f64], l: usize) -> Result<Support> {
    if l > x.len() {
        return Err(Error::LExceedsM { l, m: x.len() });
    }
    let mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    Ok(Support {
        indices: top_l_indices(&mags, l, Selection::Quickselect),
    })
}

/// Least-squares solution restricted to a column subset.
#[derive(Debug, Clone)]
pub struct LsqrSolution {
    /// Coefficients in support order.
    pub coeffs: Vec<f64>,
    /// Exact `||r - F_S z||_2` of the returned point.
    pub residual_norm: f64,
    /// Exact `||F_S^T (r - F_S z)||_2` of the returned point.
    pub normal_residual: f64,
    pub iterations: usize,
    /// Set when the iteration stalled above tolerance, which typically
    /// means a rank-deficient column subset. The returned point is the best
    /// one reached; sweeps keep going instead of aborting.
    pub rank_warning: bool,
}

/// `y = F_S z` (overwrites `y`).
fn apply(frame: &LowDensityFrame, support: &[usize], z: &[f64], y: &mut [f64]) {
    y.fill(0.0);
    for (t, &j) in support.iter().enumerate() {
        let zt = z[t];
        for &i in frame.var_checks(j) {
            y[i as usize] += zt;
        }
    }
}

/// `out = F_S^T u` (overwrites `out`).
fn apply_transpose(frame: &LowDensityFrame, support: &[usize], u: &[f64], out: &mut [f64]) {
    for (t, &j) in support.iter().enumerate() {
        let mut acc = 0.0;
        for &i in frame.var_checks(j) {
            acc += u[i as usize];
        }
        out[t] = acc;
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Minimize `||F_S z - r||_2` over `z` by LSQR.
///
/// Converges when either the residual is consistent to `tol` relative to
/// `||r||`, or the normal-equations residual estimate drops below `tol`
/// relative to `||F_S||_F ||residual||`. If the residual norm instead stops
/// changing (relative change below `tol` three iterations in a row) or the
/// iteration cap is hit while neither test holds, the best point so far is
/// returned with `rank_warning` set.
pub fn lsqr_solve(
    frame: &LowDensityFrame,
    support: &Support,
    r: &[f64],
    tol: f64,
    max_iters: usize,
) -> Result<LsqrSolution> {
    if r.len() != frame.n_checks() {
        return Err(Error::DimensionMismatch {
            expected: frame.n_checks(),
            got: r.len(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tol must be positive, got {tol}")));
    }
    let cols = support.indices();
    let k = cols.len();
    let n = frame.n_checks();
    if k == 0 {
        return Ok(LsqrSolution {
            coeffs: Vec::new(),
            residual_norm: norm2(r),
            normal_residual: 0.0,
            iterations: 0,
            rank_warning: false,
        });
    }

    // Every column holds exactly d_v ones.
    let frob_norm = ((k * frame.d_v()) as f64).sqrt();
    let bnorm = norm2(r);

    let mut x = vec![0.0; k];
    let mut u: Vec<f64> = r.to_vec();
    let mut v = vec![0.0; k];
    let mut scratch_n = vec![0.0; n];
    let mut scratch_k = vec![0.0; k];

    let mut beta = norm2(&u);
    let mut alpha = 0.0;
    if beta > 0.0 {
        for e in u.iter_mut() {
            *e /= beta;
        }
        apply_transpose(frame, cols, &u, &mut v);
        alpha = norm2(&v);
        if alpha > 0.0 {
            for e in v.iter_mut() {
                *e /= alpha;
            }
        }
    }
    let mut w = v.clone();
    let mut phibar = beta;
    let mut rhobar = alpha;
    let mut iterations = 0;
    let mut converged = alpha * beta == 0.0; // zero rhs or orthogonal rhs
    let mut prev_rnorm = phibar;
    let mut stall_count = 0;

    while !converged && iterations < max_iters {
        iterations += 1;

        // Bidiagonalization step: beta u = A v - alpha u, alpha v = A^T u - beta v.
        apply(frame, cols, &v, &mut scratch_n);
        for (ue, &av) in u.iter_mut().zip(&scratch_n) {
            *ue = av - alpha * *ue;
        }
        beta = norm2(&u);
        if beta > 0.0 {
            for e in u.iter_mut() {
                *e /= beta;
            }
            apply_transpose(frame, cols, &u, &mut scratch_k);
            for (ve, &atu) in v.iter_mut().zip(&scratch_k) {
                *ve = atu - beta * *ve;
            }
            alpha = norm2(&v);
            if alpha > 0.0 {
                for e in v.iter_mut() {
                    *e /= alpha;
                }
            }
        }

        // Givens rotation eliminating the subdiagonal.
        let rho = rhobar.hypot(beta);
        let c = rhobar / rho;
        let s = beta / rho;
        let theta = s * alpha;
        rhobar = -c * alpha;
        let phi = c * phibar;
        phibar *= s;

        for t in 0..k {
            x[t] += (phi / rho) * w[t];
            w[t] = v[t] - (theta / rho) * w[t];
        }

        let rnorm = phibar.abs();
        let arnorm = alpha * (c * phibar).abs();

        // breakdown: Krylov space exhausted, the point is exact
        if beta == 0.0 || alpha == 0.0 {
            converged = true;
            break;
        }
        if rnorm <= tol * bnorm {
            converged = true;
            break;
        }
        if arnorm <= tol * frob_norm * rnorm {
            converged = true;
            break;
        }
        if (prev_rnorm - rnorm).abs() <= tol * rnorm.max(f64::MIN_POSITIVE) {
            stall_count += 1;
            if stall_count >= 3 {
                break;
            }
        } else {
            stall_count = 0;
        }
        prev_rnorm = rnorm;
    }

    // Exact diagnostics at the returned point.
    apply(frame, cols, &x, &mut scratch_n);
    for (res, &obs) in scratch_n.iter_mut().zip(r) {
        *res = obs - *res;
    }
    let residual_norm = norm2(&scratch_n);
    apply_transpose(frame, cols, &scratch_n, &mut scratch_k);
    let normal_residual = norm2(&scratch_k);

    let optimal = residual_norm <= tol * bnorm
        || normal_residual <= tol * frob_norm * residual_norm.max(f64::MIN_POSITIVE);
    Ok(LsqrSolution {
        coeffs: x,
        residual_norm,
        normal_residual,
        iterations,
        rank_warning: !converged && !optimal,
    })
}

/// Least-squares refinement on a support, embedded into a length-`M`
/// vector with zeros elsewhere.
pub fn refine_estimate(
    frame: &LowDensityFrame,
    r: &[f64],
    support: &Support,
) -> Result<Vec<f64>> {
    let sol = lsqr_solve(frame, support, r, LSQR_TOL, LSQR_MAX_ITERS)?;
    let mut x = vec![0.0; frame.n_vars()];
    for (&j, &c) in support.indices().iter().zip(&sol.coeffs) {
        x[j] = c;
    }
    Ok(x)
}

/// The genie baseline: least squares on the true support. Identical code
/// path to [`refine_estimate`].
pub fn genie_decode(
    frame: &LowDensityFrame,
    r: &[f64],
    true_support: &Support,
) -> Result<Vec<f64>> {
    refine_estimate(frame, r, true_support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{build_peg_frame, FrameParams};
    use nalgebra::{DMatrix, DVector};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn frame(n: usize, m: usize, dv: usize, dc: usize, seed: u64) -> LowDensityFrame {
        build_peg_frame(FrameParams::new(n, m, dv, dc, seed).unwrap()).unwrap()
    }

    fn dense_submatrix(f: &LowDensityFrame, support: &Support) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(f.n_checks(), support.len());
        for (t, &j) in support.indices().iter().enumerate() {
            for &i in f.var_checks(j) {
                a[(i as usize, t)] = 1.0;
            }
        }
        a
    }

    #[test]
    fn support_construction() {
        let s = Support::new(vec![5, 1, 3, 1], 10).unwrap();
        assert_eq!(s.indices(), &[1, 3, 5]);
        assert!(s.contains(3));
        assert!(!s.contains(2));
        assert!(Support::new(vec![10], 10).is_err());

        let x = [0.0, 1.5, 0.0, -2.0];
        assert_eq!(Support::of_signal(&x).indices(), &[1, 3]);
    }

    #[test]
    fn threshold_examples() {
        let x = [0.1, -5.0, 3.0, 0.2];
        assert_eq!(threshold_top_l(&x, 2).unwrap().indices(), &[1, 2]);
        let zeros = [0.0; 4];
        assert_eq!(threshold_top_l(&zeros, 2).unwrap().indices(), &[0, 1]);
        assert!(matches!(
            threshold_top_l(&x, 5),
            Err(Error::LExceedsM { .. })
        ));
    }

    #[test]
    fn threshold_matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(1..100);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let l = rng.gen_range(0..=n);
            let got = threshold_top_l(&x, l).unwrap();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
            let mut want = order[..l].to_vec();
            want.sort_unstable();
            assert_eq!(got.indices(), &want[..]);
        }
    }

    #[test]
    fn single_column_solves_exactly() {
        let f = frame(10, 20, 3, 6, 2);
        let j = 7;
        let mut e = vec![0.0; 20];
        e[j] = 1.0;
        let r = f.matvec(&e).unwrap();
        let s = Support::new(vec![j], 20).unwrap();
        let sol = lsqr_solve(&f, &s, &r, LSQR_TOL, LSQR_MAX_ITERS).unwrap();
        assert_eq!(sol.coeffs, vec![1.0]);
        assert!(sol.residual_norm < 1e-12);
        assert!(!sol.rank_warning);
    }

    #[test]
    fn empty_support_returns_observation_norm() {
        let f = frame(10, 20, 3, 6, 2);
        let r: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let s = Support::new(vec![], 20).unwrap();
        let sol = lsqr_solve(&f, &s, &r, LSQR_TOL, LSQR_MAX_ITERS).unwrap();
        assert!(sol.coeffs.is_empty());
        let want = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert_eq!(sol.residual_norm, want);
    }

    #[test]
    fn matches_dense_least_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..30 {
            let n = rng.gen_range(20..=60);
            let m = 2 * n;
            let f = frame(n, m, 3, 6, 1000 + trial);
            let k = rng.gen_range(1..=n / 2);
            let mut cols: Vec<usize> = (0..m).collect();
            for i in 0..k {
                let j = rng.gen_range(i..m);
                cols.swap(i, j);
            }
            let s = Support::new(cols[..k].to_vec(), m).unwrap();
            let r: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();

            let sol = lsqr_solve(&f, &s, &r, LSQR_TOL, LSQR_MAX_ITERS).unwrap();
            let a = dense_submatrix(&f, &s);
            let rhs = DVector::from_column_slice(&r);
            let svd = a.clone().svd(true, true);
            let want = svd.solve(&rhs, 1e-12).unwrap();

            let got = DVector::from_column_slice(&sol.coeffs);
            let rel = (&got - &want).norm() / want.norm().max(1e-300);
            assert!(rel < 1e-6, "trial {trial}: rel err {rel}");
        }
    }

    #[test]
    fn refinement_recovers_exact_signal() {
        let f = frame(25, 50, 3, 6, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut x = vec![0.0; 50];
        for j in [3usize, 19, 31, 44] {
            x[j] = rng.gen_range(-2.0..2.0);
        }
        let r = f.matvec(&x).unwrap();
        let supp = Support::of_signal(&x);
        let got = refine_estimate(&f, &r, &supp).unwrap();
        for (a, b) in got.iter().zip(&x) {
            assert!((a - b).abs() < 1e-8);
        }

        // A strict superset of the true support still reproduces the signal.
        let sup = Support::new(vec![3, 7, 19, 31, 44, 48], 50).unwrap();
        let got = refine_estimate(&f, &r, &sup).unwrap();
        for (a, b) in got.iter().zip(&x) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn genie_is_refine_on_true_support() {
        let f = frame(25, 50, 3, 6, 4);
        let mut x = vec![0.0; 50];
        x[11] = 1.0;
        x[30] = -0.5;
        let mut r = f.matvec(&x).unwrap();
        for (i, v) in r.iter_mut().enumerate() {
            *v += 0.01 * ((i * 7) as f64).sin();
        }
        let supp = Support::of_signal(&x);
        let a = genie_decode(&f, &r, &supp).unwrap();
        let b = refine_estimate(&f, &r, &supp).unwrap();
        assert_eq!(a, b);

        // empty true support: the estimate is identically zero
        let empty = Support::new(vec![], 50).unwrap();
        let z = genie_decode(&f, &r, &empty).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn disjoint_support_residual_matches_projector() {
        let f = frame(20, 40, 3, 6, 6);
        let mut x = vec![0.0; 40];
        x[0] = 1.0;
        x[1] = -1.0;
        let r = f.matvec(&x).unwrap();
        let s = Support::new(vec![20, 25, 30], 40).unwrap();
        let sol = lsqr_solve(&f, &s, &r, LSQR_TOL, LSQR_MAX_ITERS).unwrap();

        let a = dense_submatrix(&f, &s);
        let rhs = DVector::from_column_slice(&r);
        let gram = a.transpose() * &a;
        let proj = &a * gram.try_inverse().unwrap() * a.transpose() * &rhs;
        let want = (&rhs - proj).norm();
        assert!((sol.residual_norm - want).abs() <= 1e-8 * want);
    }

    #[test]
    fn normal_equations_hold_at_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let f = frame(40, 80, 3, 6, 12);
        for _ in 0..20 {
            let k = rng.gen_range(1..=20);
            let mut cols: Vec<usize> = (0..80).collect();
            for i in 0..k {
                let j = rng.gen_range(i..80);
                cols.swap(i, j);
            }
            let s = Support::new(cols[..k].to_vec(), 80).unwrap();
            let r: Vec<f64> = (0..40).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let sol = lsqr_solve(&f, &s, &r, LSQR_TOL, LSQR_MAX_ITERS).unwrap();
            let scale = ((k * 3) as f64).sqrt() * sol.residual_norm.max(1e-300);
            assert!(
                sol.normal_residual <= 1e-8 * scale.max(1e-10),
                "normal residual {} vs scale {scale}",
                sol.normal_residual
            );
        }
    }
}
