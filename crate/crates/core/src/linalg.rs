//! Dense complex linear algebra with an explicit tolerance policy.
//!
//! Vectors of `ℂⁿ` are paired by the canonical anti-duality
//! `⟨f, x⟩ = Σᵢ fᵢ·conj(xᵢ) = x†f`, so an operator `ℂⁿ → ℂⁿ` is positive
//! exactly when its matrix is Hermitian positive semidefinite.
//!
//! Numerical rank is always relative: an eigenvalue counts as nonzero when
//! it exceeds `rank_rel_eps` times the largest eigenvalue magnitude.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerances shared by every routine in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative eigenvalue cutoff for numerical rank.
    pub rank_rel_eps: f64,
    /// Allowed negative eigenvalue, relative to `1 + max|λ|`.
    pub psd_tol: f64,
    /// Entrywise / Frobenius comparison tolerance.
    pub cmp_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_rel_eps: 1e-10,
            psd_tol: 1e-9,
            cmp_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_eps: f64, psd_tol: f64, cmp_tol: f64) -> Result<Self> {
        let cfg = ToleranceConfig {
            rank_rel_eps,
            psd_tol,
            cmp_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Two orders of magnitude tighter than the default on every axis.
    pub fn strict() -> Self {
        ToleranceConfig {
            rank_rel_eps: 1e-12,
            psd_tol: 1e-11,
            cmp_tol: 1e-10,
        }
    }

    /// Named presets: `"default"` or `"strict"`.
    pub fn from_profile(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(Self::default()),
            "strict" => Ok(Self::strict()),
            other => Err(Error::InvalidTolerance(format!(
                "unknown tolerance profile `{other}`"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel_eps", self.rank_rel_eps),
            ("psd_tol", self.psd_tol),
            ("cmp_tol", self.cmp_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Spectral decomposition `M = V·diag(λ)·V†` of a Hermitian matrix.
///
/// Eigenvalues are ascending. Each eigenvector is rotated so that its first
/// largest-magnitude component is real and positive, which makes the output
/// independent of the solver's phase choices.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

/// The part of a Hermitian PSD spectrum above the rank cutoff, in
/// descending eigenvalue order.
#[derive(Debug, Clone)]
pub struct RangeSplit {
    pub values: Vec<f64>,
    pub basis: CMatrix,
    pub kernel: CMatrix,
}

impl RangeSplit {
    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// Orthogonal projector onto the retained range.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn rank_cutoff(&self, cfg: &ToleranceConfig) -> f64 {
        cfg.rank_rel_eps * self.max_abs()
    }

    pub fn rank(&self, cfg: &ToleranceConfig) -> usize {
        let cut = self.rank_cutoff(cfg);
        self.eigenvalues.iter().filter(|&&v| v > cut).count()
    }

    /// Splits the eigenvectors into the numerical range (eigenvalues above
    /// the cutoff, descending) and the numerical kernel (the rest).
    pub fn split(&self, cfg: &ToleranceConfig) -> RangeSplit {
        self.split_scaled(cfg, 0.0)
    }

    /// As [`split`](Self::split), with the cutoff measured against
    /// `max(max|λ|, scale)`. A matrix formed as a product `X†Y` should pass
    /// `‖X‖·‖Y‖` so that pure cancellation noise is not read as range.
    pub fn split_scaled(&self, cfg: &ToleranceConfig, scale: f64) -> RangeSplit {
        let n = self.dim();
        let cut = cfg.rank_rel_eps * self.max_abs().max(scale);
        let mut range_idx: Vec<usize> = (0..n).filter(|&i| self.eigenvalues[i] > cut).collect();
        range_idx.reverse();
        let kernel_idx: Vec<usize> = (0..n).filter(|&i| self.eigenvalues[i] <= cut).collect();
        RangeSplit {
            values: range_idx.iter().map(|&i| self.eigenvalues[i]).collect(),
            basis: self.eigenvectors.select_columns(range_idx.iter()),
            kernel: self.eigenvectors.select_columns(kernel_idx.iter()),
        }
    }

    /// Rebuilds `V·diag(φ(λ))·V†`.
    pub fn map_spectrum(&self, phi: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let s = phi(self.eigenvalues[j]);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= s;
            }
        }
        hermitian_part(&(scaled * self.eigenvectors.adjoint()))
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// `‖M − M†‖_F`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn hermitian_within(m: &CMatrix, cfg: &ToleranceConfig) -> std::result::Result<(), f64> {
    let res = hermitian_residual(m);
    if res <= cfg.cmp_tol * (1.0 + frobenius(m)) {
        Ok(())
    } else {
        Err(res)
    }
}

pub fn hermitian_eigen(m: &CMatrix, cfg: &ToleranceConfig) -> Result<HermitianEigen> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    hermitian_within(m, cfg).map_err(|residual| Error::NotHermitian { residual })?;
    if n == 0 {
        return Ok(HermitianEigen {
            eigenvalues: DVector::zeros(0),
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = eig.eigenvectors.select_columns(order.iter());
    for j in 0..n {
        let mut col = eigenvectors.column_mut(j);
        let mut best = 0;
        let mut best_abs = -1.0;
        for i in 0..n {
            let a = col[i].norm();
            // strict comparison keeps the first of equal-magnitude entries
            if a > best_abs * (1.0 + 1e-12) {
                best = i;
                best_abs = a;
            }
        }
        if best_abs > 0.0 {
            let phase = col[best].conj() / best_abs;
            for z in col.iter_mut() {
                *z *= phase;
            }
        }
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn psd_floor(eig: &HermitianEigen, cfg: &ToleranceConfig) -> f64 {
    -cfg.psd_tol * (1.0 + eig.max_abs())
}

fn psd_eigen(m: &CMatrix, cfg: &ToleranceConfig) -> Result<HermitianEigen> {
    let eig = hermitian_eigen(m, cfg)?;
    if eig.dim() > 0 && eig.min() < psd_floor(&eig, cfg) {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig)
}

pub fn is_psd(m: &CMatrix, cfg: &ToleranceConfig) -> Result<bool> {
    ensure_square(m)?;
    match hermitian_eigen(m, cfg) {
        Ok(eig) => Ok(eig.dim() == 0 || eig.min() >= psd_floor(&eig, cfg)),
        Err(Error::NotHermitian { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Moore–Penrose inverse of a Hermitian PSD matrix, with eigenvalues below
/// the rank cutoff treated as zero.
pub fn pseudo_inverse(m: &CMatrix, cfg: &ToleranceConfig) -> Result<CMatrix> {
    let eig = psd_eigen(m, cfg)?;
    Ok(pinv_from_eigen(&eig, cfg))
}

pub(crate) fn pinv_from_eigen(eig: &HermitianEigen, cfg: &ToleranceConfig) -> CMatrix {
    let cut = eig.rank_cutoff(cfg);
    eig.map_spectrum(|v| if v > cut { 1.0 / v } else { 0.0 })
}

pub fn psd_sqrt(m: &CMatrix, cfg: &ToleranceConfig) -> Result<CMatrix> {
    let eig = psd_eigen(m, cfg)?;
    // eigenvalues at noise level would otherwise grow to their square roots
    let cut = eig.rank_cutoff(cfg);
    Ok(eig.map_spectrum(|v| if v > cut { v.sqrt() } else { 0.0 }))
}

/// `A ≤ B` in the Löwner order.
pub fn loewner_leq(a: &CMatrix, b: &CMatrix, cfg: &ToleranceConfig) -> Result<bool> {
    let n = ensure_square(a)?;
    ensure_square(b)?;
    if b.nrows() != n {
        return Err(Error::ShapeMismatch(format!(
            "Löwner comparison of {n}x{n} and {}x{} matrices",
            b.nrows(),
            b.ncols()
        )));
    }
    for m in [a, b] {
        hermitian_within(m, cfg).map_err(|residual| Error::NotHermitian { residual })?;
    }
    is_psd(&(b - a), cfg)
}

/// Smallest eigenvalue of `B − A` with its eigenvector; used as a
/// certificate when `A ≤ B` fails.
pub(crate) fn loewner_violation(
    a: &CMatrix,
    b: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<(f64, CVector)> {
    let eig = hermitian_eigen(&(b - a), cfg)?;
    Ok((eig.eigenvalues[0], eig.eigenvectors.column(0).into_owned()))
}

/// Orthogonal projector onto `ran Y`, from the eigendecomposition of `YY†`.
pub fn range_projector(y: &CMatrix, cfg: &ToleranceConfig) -> Result<CMatrix> {
    let gram = hermitian_part(&(y * y.adjoint()));
    let eig = hermitian_eigen(&gram, cfg)?;
    Ok(eig.split(cfg).projector())
}

/// Whether every column of `X` lies in the column space of `Y`.
pub fn range_included(x: &CMatrix, y: &CMatrix, cfg: &ToleranceConfig) -> Result<bool> {
    if x.nrows() != y.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "range inclusion needs equal row counts, got {} and {}",
            x.nrows(),
            y.nrows()
        )));
    }
    ensure_finite(x)?;
    ensure_finite(y)?;
    let p = range_projector(y, cfg)?;
    let residual = frobenius(&(x - &p * x));
    Ok(residual <= cfg.cmp_tol * (1.0 + frobenius(x)))
}

/// `sup { c†Hc / c†Gc : c ∈ ran G }` for PSD `G` and Hermitian `H`, i.e. the
/// largest eigenvalue of `Λ^{-1/2}·U†HU·Λ^{-1/2}` on the numerical range of
/// `G`. Returns 0 when `G` has rank zero.
pub(crate) fn relative_bound(split: &RangeSplit, h: &CMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    if split.rank() == 0 {
        return Ok(0.0);
    }
    let w = whitening(split);
    let compressed = hermitian_part(&(w.adjoint() * h * &w));
    let eig = hermitian_eigen(&compressed, cfg)?;
    Ok(eig.max().max(0.0))
}

/// `U_r·Λ_r^{-1/2}`: maps H_A-style coordinates back to coefficient space.
pub(crate) fn whitening(split: &RangeSplit) -> CMatrix {
    let mut w = split.basis.clone();
    for (j, &v) in split.values.iter().enumerate() {
        let s = 1.0 / v.sqrt();
        for z in w.column_mut(j).iter_mut() {
            *z *= s;
        }
    }
    w
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    CMatrix::from_fn(r, cols, |i, j| c(rows[i][j], 0.0))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c(v, 0.0)),
    ))
}

pub fn real_vector(values: &[f64]) -> CVector {
    CVector::from_iterator(values.len(), values.iter().map(|&v| c(v, 0.0)))
}

pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}

/// Largest eigenvalue magnitude of a Hermitian matrix (its operator norm).
pub fn hermitian_norm(m: &CMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    Ok(hermitian_eigen(m, cfg)?.max_abs())
}
