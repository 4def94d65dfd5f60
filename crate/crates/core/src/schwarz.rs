//! The generalized Schwarz inequality
//! `‖Σ Aⱼxⱼ‖² ≤ ‖Σ Aⱼ‖ · Σ ⟨Aⱼxⱼ, xⱼ⟩` for positive `Aⱼ`, and a numerical
//! certificate that `‖Σ Aⱼ‖` is the smallest admissible constant.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_part, is_psd, psd_sqrt, vec_norm, CMatrix, CVector, ToleranceConfig,
};
use crate::random::{random_vector, Rng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `‖Σ Aⱼ‖`.
    pub constant: f64,
}

impl GapReport {
    /// Whether `lhs ≤ rhs` up to `cmp_tol` relative to the larger side.
    pub fn holds(&self, cfg: &ToleranceConfig) -> bool {
        self.lhs <= self.rhs + cfg.cmp_tol * (1.0 + self.lhs.max(self.rhs))
    }
}

fn check_family(ops: &[CMatrix], cfg: &ToleranceConfig) -> Result<usize> {
    let first = ops
        .first()
        .ok_or_else(|| Error::ShapeMismatch("at least one operator is required".into()))?;
    let n = crate::linalg::ensure_square(first)?;
    for a in ops {
        if a.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "operators must all be {n}x{n}, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if !is_psd(a, cfg)? {
            let min_eigenvalue = hermitian_eigen(&hermitian_part(a), cfg)
                .map(|e| e.min())
                .unwrap_or(f64::NAN);
            return Err(Error::NotPsd { min_eigenvalue });
        }
    }
    Ok(n)
}

fn sum(ops: &[CMatrix], n: usize) -> CMatrix {
    let total = ops.iter().fold(CMatrix::zeros(n, n), |acc, a| acc + a);
    hermitian_part(&total)
}

pub fn schwarz_gap(ops: &[CMatrix], xs: &[CVector], cfg: &ToleranceConfig) -> Result<GapReport> {
    let n = check_family(ops, cfg)?;
    if xs.len() != ops.len() || xs.iter().any(|x| x.len() != n) {
        return Err(Error::ShapeMismatch(format!(
            "need {} vectors of length {n}",
            ops.len()
        )));
    }
    let mut image = CVector::zeros(n);
    let mut form = 0.0;
    for (a, x) in ops.iter().zip(xs) {
        let ax = a * x;
        form += (x.adjoint() * &ax)[(0, 0)].re;
        image += ax;
    }
    let lhs = vec_norm(&image).powi(2);
    let constant = hermitian_eigen(&sum(ops, n), cfg)?.max().max(0.0);
    Ok(GapReport {
        lhs,
        rhs: constant * form,
        constant,
    })
}

/// Power iteration for `sup ‖Σ Aⱼxⱼ‖² / Σ⟨Aⱼxⱼ, xⱼ⟩`.
///
/// Substituting `yⱼ = Aⱼ^{1/2}xⱼ` turns the ratio into `‖R·y‖² / ‖y‖²` with
/// the block row `R = [A₁^{1/2} ⋯ A_k^{1/2}]`, so the supremum is the top
/// eigenvalue of `R†R` and `RR† = Σ Aⱼ`. The returned value is the Rayleigh
/// quotient after `iterations` steps from a seeded start.
pub fn minimal_constant_estimate(
    ops: &[CMatrix],
    iterations: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let n = check_family(ops, cfg)?;
    let k = ops.len();
    let mut row = CMatrix::zeros(n, k * n);
    for (j, a) in ops.iter().enumerate() {
        row.view_mut((0, j * n), (n, n)).copy_from(&psd_sqrt(a, cfg)?);
    }
    let mut rng = Rng::seeded(seed);
    let mut y = random_vector(&mut rng, k * n);
    let mut estimate = 0.0;
    for _ in 0..=iterations {
        let norm = vec_norm(&y);
        if norm == 0.0 {
            return Ok(0.0);
        }
        y.unscale_mut(norm);
        let image = &row * &y;
        estimate = vec_norm(&image).powi(2);
        y = row.adjoint() * image;
    }
    Ok(estimate)
}
