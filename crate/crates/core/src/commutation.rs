//! Intertwining relations that pass from `A` to its minimal extension.
//!
//! If `B` and `C` leave `dom A` invariant and satisfy `C†A ⊆ AB` and
//! `B†A ⊆ AC`, then `C†A_N = A_N B` and `B†A_N = A_N C`. In finite
//! dimensions the extra hypothesis that `BC` has bounded spectrum on
//! `dom A` always holds.

use crate::error::{Error, Result};
use crate::krein::krein_von_neumann;
use crate::linalg::{frobenius, hermitian_part, pseudo_inverse, CMatrix, ToleranceConfig};
use crate::partial::{validate, PartialOperator};

#[derive(Debug, Clone, PartialEq)]
pub enum IntertwiningFailure {
    /// `op` maps some domain vector outside `dom A`.
    DomainNotInvariant { op: char, residual: f64 },
    /// One of `C†A ⊆ AB`, `B†A ⊆ AC` fails on the domain.
    RelationViolated { relation: &'static str, residual: f64 },
}

impl std::fmt::Display for IntertwiningFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntertwiningFailure::DomainNotInvariant { op, residual } => {
                write!(f, "{op} does not leave dom A invariant (residual {residual:.3e})")
            }
            IntertwiningFailure::RelationViolated { relation, residual } => {
                write!(f, "{relation} fails on dom A (residual {residual:.3e})")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntertwiningReport {
    pub holds: bool,
    pub failure: Option<IntertwiningFailure>,
    /// Spectrum of `BC` on `dom A` is bounded; always true here.
    pub spectrum_bounded: bool,
}

#[derive(Debug, Clone)]
pub struct CommutationReport {
    pub hypotheses_hold: bool,
    /// `‖C†A_N − A_N B‖_F`
    pub residual_cb: f64,
    /// `‖B†A_N − A_N C‖_F`
    pub residual_bc: f64,
    pub conclusion_holds: bool,
}

fn check_shapes(p: &PartialOperator, b: &CMatrix, c: &CMatrix) -> Result<()> {
    let n = p.n();
    for (name, m) in [("B", b), ("C", c)] {
        if m.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "{name} is {}x{}, expected {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
        crate::linalg::ensure_finite(m)?;
    }
    Ok(())
}

pub fn check_intertwining(
    p: &PartialOperator,
    b: &CMatrix,
    c: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<IntertwiningReport> {
    check_shapes(p, b, c)?;
    validate(p, cfg)?;
    let d = p.domain();
    let ad = p.action();
    // least-squares coordinates in the domain basis: z = (D†D)⁻¹D†·(image)
    let solver = pseudo_inverse(&hermitian_part(&(d.adjoint() * d)), cfg)? * d.adjoint();

    let mut coords = Vec::with_capacity(2);
    for (name, op) in [('B', b), ('C', c)] {
        let image = op * d;
        let z = &solver * &image;
        let residual = frobenius(&(&image - d * &z));
        if residual > cfg.cmp_tol * (1.0 + frobenius(&image)) {
            return Ok(IntertwiningReport {
                holds: false,
                failure: Some(IntertwiningFailure::DomainNotInvariant { op: name, residual }),
                spectrum_bounded: true,
            });
        }
        coords.push(z);
    }

    let tol = cfg.cmp_tol * (1.0 + frobenius(ad) * frobenius(b).max(frobenius(c)));
    let relations = [
        ("C†A ⊆ AB", c.adjoint() * ad - ad * &coords[0]),
        ("B†A ⊆ AC", b.adjoint() * ad - ad * &coords[1]),
    ];
    for (relation, diff) in relations {
        let residual = frobenius(&diff);
        if residual > tol {
            return Ok(IntertwiningReport {
                holds: false,
                failure: Some(IntertwiningFailure::RelationViolated { relation, residual }),
                spectrum_bounded: true,
            });
        }
    }
    Ok(IntertwiningReport {
        holds: true,
        failure: None,
        spectrum_bounded: true,
    })
}

/// Computes `A_N` and the residuals of both intertwining relations.
pub fn verify_commutation(
    p: &PartialOperator,
    b: &CMatrix,
    c: &CMatrix,
    cfg: &ToleranceConfig,
) -> Result<CommutationReport> {
    let hyp = check_intertwining(p, b, c, cfg)?;
    let a_n = krein_von_neumann(p, cfg)?.a_n;
    if let Some(failure) = hyp.failure {
        return Err(Error::HypothesesFail(failure.to_string()));
    }
    let residual_cb = frobenius(&(c.adjoint() * &a_n - &a_n * b));
    let residual_bc = frobenius(&(b.adjoint() * &a_n - &a_n * c));
    let tol = cfg.cmp_tol * (1.0 + frobenius(&a_n) * frobenius(b).max(frobenius(c)));
    Ok(CommutationReport {
        hypotheses_hold: true,
        residual_cb,
        residual_bc,
        conclusion_holds: residual_cb <= tol && residual_bc <= tol,
    })
}
