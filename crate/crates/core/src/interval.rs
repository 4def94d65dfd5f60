//! Positive extensions dominated by a bound `B`.
//!
//! For `A_N ≤ B` the maximal extension below `B` is `B − (B − A)_N`, where
//! `B − A` is the partial operator `x ↦ Bx − Ax` on `dom A`. A positive
//! `Ã ≤ B` extends `A` exactly when `A_N ≤ Ã ≤ A_max`.

use crate::error::{Error, Result};
use crate::krein::krein_von_neumann;
use crate::linalg::{
    ensure_square, frobenius, hermitian_eigen, hermitian_part, hermitian_residual, identity,
    is_psd, loewner_leq, loewner_violation, psd_sqrt, range_included, relative_bound, CMatrix,
    ToleranceConfig,
};
use crate::partial::{is_extendible, PartialOperator, Witness};
use crate::random::{random_contraction, Rng};

#[derive(Debug, Clone)]
pub struct IntervalResult {
    pub a_n: CMatrix,
    pub a_max: CMatrix,
    /// `A_N` and `A_max` coincide within tolerance: the bound pins down a
    /// unique extension.
    pub degenerate: bool,
}

impl IntervalResult {
    /// `A_N + S^{1/2}·W·S^{1/2}` with `S = A_max − A_N`. Any Hermitian
    /// `0 ≤ W ≤ I` lands in the interval; `W = 0` and `W = I` give the
    /// endpoints.
    pub fn point(&self, w: &CMatrix, cfg: &ToleranceConfig) -> Result<CMatrix> {
        let n = self.a_n.nrows();
        if w.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "contraction must be {n}x{n}, got {}x{}",
                w.nrows(),
                w.ncols()
            )));
        }
        let gap = hermitian_part(&(&self.a_max - &self.a_n));
        let root = psd_sqrt(&gap, cfg)?;
        Ok(hermitian_part(&(&self.a_n + &root * w * &root)))
    }
}

fn check_bound(p: &PartialOperator, b: &CMatrix, cfg: &ToleranceConfig) -> Result<()> {
    let n = ensure_square(b)?;
    if n != p.n() {
        return Err(Error::ShapeMismatch(format!(
            "bound is {n}x{n} for an operator on C^{}",
            p.n()
        )));
    }
    crate::linalg::ensure_finite(b)?;
    let residual = hermitian_residual(b);
    if residual > cfg.cmp_tol * (1.0 + frobenius(b)) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Largest positive extension of `p` below `b`, together with `A_N`.
pub fn a_max(p: &PartialOperator, b: &CMatrix, cfg: &ToleranceConfig) -> Result<IntervalResult> {
    check_bound(p, b, cfg)?;
    let b = hermitian_part(b);
    let a_n = krein_von_neumann(p, cfg)?.a_n;
    if !loewner_leq(&a_n, &b, cfg)? {
        let (eigenvalue, direction) = loewner_violation(&a_n, &b, cfg)?;
        return Err(Error::BoundTooSmall {
            direction,
            eigenvalue,
        });
    }

    let shifted_action = &b * p.domain() - p.action();
    let scale = frobenius(&b) * frobenius(p.domain()) + frobenius(p.action());
    // B agrees with A on dom A: the shifted operator vanishes and (B − A)_N = 0
    let shifted_n = if frobenius(&shifted_action) <= cfg.cmp_tol * scale {
        CMatrix::zeros(p.n(), p.n())
    } else {
        let shifted = PartialOperator::new(p.domain().clone(), shifted_action)?;
        krein_von_neumann(&shifted, cfg)?.a_n
    };
    let a_max = hermitian_part(&(&b - shifted_n));
    let degenerate = frobenius(&(&a_max - &a_n)) <= cfg.cmp_tol * (1.0 + frobenius(&b));
    Ok(IntervalResult {
        a_n,
        a_max,
        degenerate,
    })
}

/// `A_N ≤ candidate ≤ A_max`.
pub fn in_interval(
    p: &PartialOperator,
    b: &CMatrix,
    candidate: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    let n = ensure_square(candidate)?;
    if n != p.n() {
        return Err(Error::ShapeMismatch(format!(
            "candidate is {n}x{n} for an operator on C^{}",
            p.n()
        )));
    }
    let interval = a_max(p, b, cfg)?;
    Ok(loewner_leq(&interval.a_n, candidate, cfg)? && loewner_leq(candidate, &interval.a_max, cfg)?)
}

/// `count` pseudorandom members of `[A_N, A_max]`, reproducible from `seed`.
pub fn sample_extensions(
    p: &PartialOperator,
    b: &CMatrix,
    count: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<Vec<CMatrix>> {
    let interval = a_max(p, b, cfg)?;
    if interval.degenerate {
        return Ok(vec![interval.a_n; count]);
    }
    let mut rng = Rng::seeded(seed);
    (0..count)
        .map(|_| interval.point(&random_contraction(&mut rng, p.n()), cfg))
        .collect()
}

/// Outcome of completing `[[A11, A21†], [A21, ?]]` to a PSD matrix.
#[derive(Debug, Clone)]
pub struct CompletionReport {
    /// (i) some `A22` makes the block matrix PSD.
    pub completable: bool,
    /// (ii) `A21†A21 ≤ M·A11` for some finite `M`.
    pub dominated: bool,
    /// Sharp `M` for (ii); `+∞` when none exists.
    pub constant: f64,
    /// (iii) `ran A21† ⊆ ran A11^{1/2}`.
    pub range_condition: bool,
    /// `A21·A11⁺·A21†`, the smallest admissible corner.
    pub a22_min: Option<CMatrix>,
    /// The assembled minimal completion.
    pub completion: Option<CMatrix>,
    /// When (i) fails: a vector of the first block with `⟨Ax, x⟩ = 0`,
    /// `Ax ≠ 0`.
    pub witness: Option<Witness>,
}

impl CompletionReport {
    pub fn conditions_agree(&self) -> bool {
        self.completable == self.dominated && self.dominated == self.range_condition
    }
}

pub fn halmos_complete(a11: &CMatrix, a21: &CMatrix, cfg: &ToleranceConfig) -> Result<CompletionReport> {
    let k = ensure_square(a11)?;
    if a21.ncols() != k {
        return Err(Error::ShapeMismatch(format!(
            "A21 has {} columns, A11 is {k}x{k}",
            a21.ncols()
        )));
    }
    crate::linalg::ensure_finite(a21)?;
    if !is_psd(a11, cfg)? {
        let min_eigenvalue = hermitian_eigen(&hermitian_part(a11), cfg)
            .map(|e| e.min())
            .unwrap_or(f64::NAN);
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let a11 = hermitian_part(a11);
    let n = k + a21.nrows();

    // (i) through the partial operator with dom = first k coordinates
    let mut domain = CMatrix::zeros(n, k);
    domain.view_mut((0, 0), (k, k)).copy_from(&identity(k));
    let mut action = CMatrix::zeros(n, k);
    action.view_mut((0, 0), (k, k)).copy_from(&a11);
    action.view_mut((k, 0), (n - k, k)).copy_from(a21);
    let op = PartialOperator::new(domain, action)?;
    let check = is_extendible(&op, cfg)?;
    let completable = check.extendible;

    // (ii) sharp constant on ran A11, then the Löwner inequality itself
    let eig = hermitian_eigen(&a11, cfg)?;
    let split = eig.split(cfg);
    let leak = split
        .kernel
        .column_iter()
        .map(|v| crate::linalg::vec_norm(&(a21 * v)))
        .fold(0.0, f64::max);
    let ata = hermitian_part(&(a21.adjoint() * a21));
    let (dominated, constant) = if leak <= cfg.cmp_tol * (frobenius(&a11) + frobenius(a21)) {
        let m = relative_bound(&split, &ata, cfg)?;
        (loewner_leq(&ata, &a11.scale(m), cfg)?, m)
    } else {
        (false, f64::INFINITY)
    };

    // (iii) Douglas range inclusion
    let root = psd_sqrt(&a11, cfg)?;
    let range_condition = range_included(&a21.adjoint(), &root, cfg)?;

    let (a22_min, completion) = if completable {
        let pinv = crate::linalg::pinv_from_eigen(&eig, cfg);
        let a22 = hermitian_part(&(a21 * pinv * a21.adjoint()));
        let mut full = CMatrix::zeros(n, n);
        full.view_mut((0, 0), (k, k)).copy_from(&a11);
        full.view_mut((k, 0), (n - k, k)).copy_from(a21);
        full.view_mut((0, k), (k, n - k)).copy_from(&a21.adjoint());
        full.view_mut((k, k), (n - k, n - k)).copy_from(&a22);
        (Some(a22), Some(full))
    } else {
        (None, None)
    };

    Ok(CompletionReport {
        completable,
        dominated,
        constant,
        range_condition,
        a22_min,
        completion,
        witness: check.witness,
    })
}
