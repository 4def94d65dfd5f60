//! Partially defined operators `A: dom A → ℂⁿ` and their positive
//! extendibility.
//!
//! An operator is given by a basis `D` of its domain (columns) and the
//! images `Ad = A·D`. Everything about positivity is read off the Gram
//! matrix `G = D†·Ad`, whose entry `(i, j)` is `⟨A dⱼ, dᵢ⟩`, so that
//! `⟨A(Dc), Dc′⟩ = c′†·G·c`.

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, hermitian_eigen, hermitian_part, hermitian_residual, identity,
    relative_bound, vec_norm, CMatrix, CVector, HermitianEigen, RangeSplit, ToleranceConfig, C64,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PartialOperator {
    domain: CMatrix,
    action: CMatrix,
}

impl PartialOperator {
    /// Builds an operator from a domain basis (`n×d`) and its images (`n×d`).
    /// Only shapes and finiteness are checked here; see [`validate`].
    pub fn new(domain: CMatrix, action: CMatrix) -> Result<Self> {
        if domain.shape() != action.shape() {
            return Err(Error::ShapeMismatch(format!(
                "domain basis is {}x{} but action is {}x{}",
                domain.nrows(),
                domain.ncols(),
                action.nrows(),
                action.ncols()
            )));
        }
        crate::linalg::ensure_finite(&domain)?;
        crate::linalg::ensure_finite(&action)?;
        Ok(PartialOperator { domain, action })
    }

    /// The operator defined on all of `ℂⁿ` by the matrix `a`.
    pub fn everywhere_defined(a: CMatrix) -> Result<Self> {
        crate::linalg::ensure_square(&a)?;
        Self::new(identity(a.nrows()), a)
    }

    /// The operator with domain `{0}` in `ℂⁿ`.
    pub fn empty(n: usize) -> Self {
        PartialOperator {
            domain: CMatrix::zeros(n, 0),
            action: CMatrix::zeros(n, 0),
        }
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.domain.nrows()
    }

    /// Domain dimension.
    pub fn d(&self) -> usize {
        self.domain.ncols()
    }

    pub fn domain(&self) -> &CMatrix {
        &self.domain
    }

    pub fn action(&self) -> &CMatrix {
        &self.action
    }

    pub fn gram(&self) -> CMatrix {
        self.domain.adjoint() * &self.action
    }

    /// `⟨A(Dc), y⟩` for a coefficient vector `c`.
    pub fn pairing(&self, coeffs: &CVector, y: &CVector) -> C64 {
        (y.adjoint() * (&self.action * coeffs))[(0, 0)]
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub gram: CMatrix,
    pub domain_rank: usize,
    pub gram_eigen: HermitianEigen,
    /// `‖D‖_F·‖Ad‖_F`, the size of the factors of `G`.
    pub gram_scale: f64,
}

impl ValidationReport {
    pub(crate) fn split(&self, cfg: &ToleranceConfig) -> RangeSplit {
        self.gram_eigen.split_scaled(cfg, self.gram_scale)
    }
}

/// Checks the standing assumptions: full-rank domain basis, symmetric and
/// positive action on the domain.
pub fn validate(p: &PartialOperator, cfg: &ToleranceConfig) -> Result<ValidationReport> {
    cfg.validate()?;
    let d = p.d();
    let basis_gram = hermitian_part(&(p.domain.adjoint() * &p.domain));
    let domain_rank = hermitian_eigen(&basis_gram, cfg)?.rank(cfg);
    if domain_rank != d {
        return Err(Error::RankDeficientDomain {
            rank: domain_rank,
            expected: d,
        });
    }
    let gram = p.gram();
    let residual = hermitian_residual(&gram);
    if residual > cfg.cmp_tol * (1.0 + frobenius(&gram)) {
        return Err(Error::NonHermitianGram { residual });
    }
    let gram_eigen = hermitian_eigen(&gram, cfg)?;
    if d > 0 && gram_eigen.min() < -cfg.psd_tol * (1.0 + gram_eigen.max_abs()) {
        return Err(Error::NonPsdGram {
            min_eigenvalue: gram_eigen.min(),
        });
    }
    Ok(ValidationReport {
        gram,
        domain_rank,
        gram_eigen,
        gram_scale: frobenius(&p.domain) * frobenius(&p.action),
    })
}

/// Certificate that no positive extension exists: a domain vector `x = Dv`
/// with `⟨Ax, x⟩ = 0` but `⟨Ax, y⟩ ≠ 0`.
#[derive(Debug, Clone)]
pub struct Witness {
    /// Unit vector `y` with `M_y = +∞`.
    pub y: CVector,
    /// Domain coefficients `v` of the offending direction.
    pub coeffs: CVector,
    /// `⟨A(Dv), y⟩`.
    pub pairing: C64,
    /// `⟨A(Dv), Dv⟩`, zero up to rounding.
    pub form: f64,
}

#[derive(Debug, Clone)]
pub struct ExtendibilityReport {
    pub extendible: bool,
    pub gram: CMatrix,
    /// Sharp constant `M` in `‖Ax‖² ≤ M⟨Ax, x⟩`; `+∞` when not extendible.
    /// In finite dimensions its finiteness is also what boundedness of
    /// `{Ax : ⟨Ax, x⟩ ≤ 1}` in any of the usual topologies amounts to.
    pub hilbert_bound: f64,
    pub witness: Option<Witness>,
}

/// Largest `‖Ad·v‖` over the numerical kernel of `G`, with its direction.
pub(crate) fn worst_kernel_direction(p: &PartialOperator, split: &RangeSplit) -> Option<(f64, CVector)> {
    let mut worst: Option<(f64, CVector)> = None;
    for v in split.kernel.column_iter() {
        let v = v.into_owned();
        let img = vec_norm(&(&p.action * &v));
        if worst.as_ref().is_none_or(|(w, _)| img > *w) {
            worst = Some((img, v));
        }
    }
    worst
}

pub(crate) fn kernel_tolerance(p: &PartialOperator, cfg: &ToleranceConfig) -> f64 {
    cfg.cmp_tol * frobenius(&p.action)
}

/// Decides whether `ker G ⊆ ker Ad`, i.e. whether `⟨Ax, x⟩ = 0` forces
/// `Ax = 0` on the domain.
pub fn is_extendible(p: &PartialOperator, cfg: &ToleranceConfig) -> Result<ExtendibilityReport> {
    let report = validate(p, cfg)?;
    let split = report.split(cfg);
    let tol = kernel_tolerance(p, cfg);
    let violation = worst_kernel_direction(p, &split).filter(|(img, _)| *img > tol);

    match violation {
        Some((img, v)) => {
            let image = &p.action * &v;
            let y = image.unscale(img);
            let form = (v.adjoint() * &report.gram * &v)[(0, 0)].re;
            Ok(ExtendibilityReport {
                extendible: false,
                gram: report.gram,
                hilbert_bound: f64::INFINITY,
                witness: Some(Witness {
                    pairing: p.pairing(&v, &y),
                    y,
                    coeffs: v,
                    form,
                }),
            })
        }
        None => {
            let ata = hermitian_part(&(p.action.adjoint() * &p.action));
            let bound = relative_bound(&split, &ata, cfg)?;
            Ok(ExtendibilityReport {
                extendible: true,
                gram: report.gram,
                hilbert_bound: bound,
                witness: None,
            })
        }
    }
}

/// `inf { M ≥ 0 : ‖Ax‖² ≤ M·⟨Ax, x⟩ on dom A }`, or `+∞` when no such `M`
/// exists.
///
/// Finiteness is decided by `ran Ad† ⊆ ran G`, a projector test that does not
/// go through the kernel eigenvectors used by [`is_extendible`].
pub fn hilbert_bound(p: &PartialOperator, cfg: &ToleranceConfig) -> Result<f64> {
    let report = validate(p, cfg)?;
    let split = report.split(cfg);
    let adj = p.action.adjoint();
    let residual = frobenius(&(&adj - split.projector() * &adj));
    if residual > kernel_tolerance(p, cfg) {
        return Ok(f64::INFINITY);
    }
    let ata = hermitian_part(&(p.action.adjoint() * &p.action));
    relative_bound(&split, &ata, cfg)
}

/// Best constant `M_y` with `|⟨Ax, y⟩|² ≤ M_y·⟨Ax, x⟩` on the domain.
pub fn my_constant(p: &PartialOperator, y: &CVector, cfg: &ToleranceConfig) -> Result<f64> {
    if y.len() != p.n() {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} for operator on C^{}",
            y.len(),
            p.n()
        )));
    }
    let report = validate(p, cfg)?;
    let split = report.split(cfg);
    let v = p.action.adjoint() * y;
    let off_range = vec_norm(&(split.kernel.adjoint() * &v));
    if off_range > kernel_tolerance(p, cfg) * vec_norm(y) {
        return Ok(f64::INFINITY);
    }
    Ok(quadratic_on_range(&split, &v))
}

/// `v†G⁺v` summed over the retained spectrum.
pub(crate) fn quadratic_on_range(split: &RangeSplit, v: &CVector) -> f64 {
    let coords = split.basis.adjoint() * v;
    coords
        .iter()
        .zip(&split.values)
        .map(|(z, &lambda)| z.norm_sqr() / lambda)
        .sum()
}
