//! Positive functionals on left ideals of finite-dimensional *-algebras.
//!
//! Elements are coefficient vectors over a fixed basis `b_0, …, b_{m−1}`.
//! A functional on a left ideal `I` with basis `a_1, …, a_p` is given by its
//! values `f(a_j)` (a vector of length `p`); a functional on the whole
//! algebra by its values `f(b_k)` (length `m`).
//!
//! The functional induces a partial operator on `ℂᵐ`: the domain is spanned
//! by the ideal basis and `A a_j` is the vector `(f(b_k*·a_j))_k`, so that
//! `⟨Aa, x⟩ = f(x*·a)` under the canonical pairing. Its Gram matrix is
//! `G_ij = f(a_i*·a_j)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::krein::krein_von_neumann;
use crate::linalg::{
    frobenius, hermitian_eigen, hermitian_part, identity, pseudo_inverse, range_included,
    relative_bound, vec_norm, whitening, CMatrix, CVector, RangeSplit, ToleranceConfig, C64,
};
use crate::partial::{quadratic_on_range, validate, PartialOperator};

/// A functional, stored as its values on a basis.
pub type Functional = CVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraDefect {
    Associativity,
    Involution,
    AntiMultiplicative,
    Unit,
    IdealRank,
    IdealClosure,
}

impl fmt::Display for AlgebraDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraDefect::Associativity => "multiplication is not associative",
            AlgebraDefect::Involution => "involution is not involutive",
            AlgebraDefect::AntiMultiplicative => "involution does not reverse products",
            AlgebraDefect::Unit => "unit does not act as identity",
            AlgebraDefect::IdealRank => "ideal basis is rank deficient",
            AlgebraDefect::IdealClosure => "ideal is not closed under left multiplication",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarAlgebra {
    m: usize,
    /// `left[i]` is left multiplication by `b_i`: column `j` holds `b_i·b_j`.
    left: Vec<CMatrix>,
    /// Row `i` holds the coefficients of `b_i*`.
    invol: CMatrix,
    unit: Option<CVector>,
}

impl StarAlgebra {
    /// `table[i][j]` is the coefficient vector of `b_i·b_j`; row `i` of
    /// `invol` is the coefficient vector of `b_i*`.
    pub fn new(table: Vec<Vec<CVector>>, invol: CMatrix, unit: Option<CVector>) -> Result<Self> {
        let m = table.len();
        if invol.shape() != (m, m) {
            return Err(Error::ShapeMismatch(format!(
                "involution is {}x{}, expected {m}x{m}",
                invol.nrows(),
                invol.ncols()
            )));
        }
        crate::linalg::ensure_finite(&invol)?;
        let mut left = vec![CMatrix::zeros(m, m); m];
        for (i, row) in table.iter().enumerate() {
            if row.len() != m || row.iter().any(|v| v.len() != m) {
                return Err(Error::ShapeMismatch(format!(
                    "multiplication table row {i} must hold {m} vectors of length {m}"
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
                left[i].set_column(j, v);
            }
        }
        if let Some(u) = &unit {
            if u.len() != m {
                return Err(Error::ShapeMismatch(format!(
                    "unit has length {}, expected {m}",
                    u.len()
                )));
            }
        }
        Ok(StarAlgebra {
            m,
            left,
            invol,
            unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn unit(&self) -> Option<&CVector> {
        self.unit.as_ref()
    }

    pub fn involution(&self) -> &CMatrix {
        &self.invol
    }

    /// Coefficients of `b_i·b_j`.
    pub fn structure(&self, i: usize, j: usize) -> CVector {
        self.left[i].column(j).into_owned()
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mult(&self, x: &CVector) -> CMatrix {
        let mut l = CMatrix::zeros(self.m, self.m);
        for (i, &xi) in x.iter().enumerate() {
            if xi != C64::new(0.0, 0.0) {
                l += &self.left[i] * xi;
            }
        }
        l
    }

    pub fn product(&self, x: &CVector, y: &CVector) -> CVector {
        self.left_mult(x) * y
    }

    pub fn star(&self, x: &CVector) -> CVector {
        self.invol.transpose() * x.conjugate()
    }

    /// `x*·x`.
    pub fn square(&self, x: &CVector) -> CVector {
        self.product(&self.star(x), x)
    }

    /// `f(x)` for a functional given on the algebra basis.
    pub fn evaluate(&self, f: &Functional, x: &CVector) -> C64 {
        f.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
    }

    fn scale(&self) -> f64 {
        self.left.iter().map(frobenius).fold(0.0, f64::max)
    }

    /// Associativity, involution and unit laws.
    pub fn validate(&self, cfg: &ToleranceConfig) -> Result<()> {
        let m = self.m;
        let scale = self.scale();
        let fail = |defect, residual| Err(Error::InvalidAlgebra { defect, residual });

        // (b_i b_j) y = b_i (b_j y) for all y
        for i in 0..m {
            for j in 0..m {
                let lhs = self.left_mult(&self.structure(i, j));
                let residual = frobenius(&(lhs - &self.left[i] * &self.left[j]));
                if residual > cfg.cmp_tol * (1.0 + scale * scale) {
                    return fail(AlgebraDefect::Associativity, residual);
                }
            }
        }

        let twice = self.invol.conjugate() * &self.invol;
        let residual = frobenius(&(twice - identity(m)));
        if residual > cfg.cmp_tol * (1.0 + frobenius(&self.invol).powi(2)) {
            return fail(AlgebraDefect::Involution, residual);
        }

        let star_rows: Vec<CVector> = (0..m)
            .map(|i| self.invol.row(i).transpose().into_owned())
            .collect();
        let tol = cfg.cmp_tol * (1.0 + scale * frobenius(&self.invol).powi(2));
        for i in 0..m {
            for j in 0..m {
                let lhs = self.star(&self.structure(i, j));
                let rhs = self.product(&star_rows[j], &star_rows[i]);
                let residual = vec_norm(&(lhs - rhs));
                if residual > tol {
                    return fail(AlgebraDefect::AntiMultiplicative, residual);
                }
            }
        }

        if let Some(u) = &self.unit {
            let lu = self.left_mult(u);
            let mut residual = frobenius(&(&lu - identity(m)));
            for i in 0..m {
                let mut e = CVector::zeros(m);
                e[i] = C64::new(1.0, 0.0);
                residual = residual.max(vec_norm(&(&self.left[i] * u - e)));
            }
            if residual > cfg.cmp_tol * (1.0 + scale * vec_norm(u)) {
                return fail(AlgebraDefect::Unit, residual);
            }
        }
        Ok(())
    }
}

/// A left ideal, given by a basis of coefficient columns.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftIdeal {
    basis: CMatrix,
}

impl LeftIdeal {
    pub fn new(basis: CMatrix) -> Result<Self> {
        crate::linalg::ensure_finite(&basis)?;
        Ok(LeftIdeal { basis })
    }

    /// The algebra itself, with its own basis.
    pub fn whole(m: usize) -> Self {
        LeftIdeal { basis: identity(m) }
    }

    /// Span of the chosen algebra basis elements.
    pub fn spanned_by(m: usize, indices: &[usize]) -> Self {
        LeftIdeal {
            basis: identity(m).select_columns(indices.iter()),
        }
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Element `Σ c_j a_j` as algebra coefficients.
    pub fn element(&self, coeffs: &CVector) -> CVector {
        &self.basis * coeffs
    }

    fn solver(&self, cfg: &ToleranceConfig) -> Result<CMatrix> {
        let gram = hermitian_part(&(self.basis.adjoint() * &self.basis));
        Ok(pseudo_inverse(&gram, cfg)? * self.basis.adjoint())
    }

    pub fn validate(&self, alg: &StarAlgebra, cfg: &ToleranceConfig) -> Result<()> {
        if self.basis.nrows() != alg.dim() {
            return Err(Error::ShapeMismatch(format!(
                "ideal basis has {} rows, algebra has dimension {}",
                self.basis.nrows(),
                alg.dim()
            )));
        }
        let p = self.dim();
        let gram = hermitian_part(&(self.basis.adjoint() * &self.basis));
        let eig = hermitian_eigen(&gram, cfg)?;
        if eig.rank(cfg) != p {
            return Err(Error::InvalidAlgebra {
                defect: AlgebraDefect::IdealRank,
                residual: if p == 0 { 0.0 } else { eig.min() },
            });
        }
        for i in 0..alg.dim() {
            let image = &alg.left[i] * &self.basis;
            if !range_included(&image, &self.basis, cfg)? {
                let solver = self.solver(cfg)?;
                let residual = frobenius(&(&image - &self.basis * (&solver * &image)));
                return Err(Error::InvalidAlgebra {
                    defect: AlgebraDefect::IdealClosure,
                    residual,
                });
            }
        }
        Ok(())
    }
}

pub fn validate_algebra(alg: &StarAlgebra, ideal: &LeftIdeal, cfg: &ToleranceConfig) -> Result<()> {
    cfg.validate()?;
    alg.validate(cfg)?;
    ideal.validate(alg, cfg)
}

/// Everything derived from `(A, I, f)` once the standing assumptions hold.
struct Setup {
    op: PartialOperator,
    gram: CMatrix,
    split: RangeSplit,
    /// `p×m`: ideal coordinates of an ideal element.
    solver: CMatrix,
    /// `conj(f(a_j))`, the vector representing `a ↦ f(a)` against `G`.
    dual: CVector,
}

impl Setup {
    /// Ideal coordinates of `x·a_j`, column by column.
    fn left_action(&self, alg: &StarAlgebra, ideal: &LeftIdeal, i: usize) -> CMatrix {
        &self.solver * &alg.left[i] * ideal.basis()
    }
}

fn check_functional(f: &Functional, len: usize, what: &str) -> Result<()> {
    if f.len() != len {
        return Err(Error::ShapeMismatch(format!(
            "functional has {} values, {what} has dimension {len}",
            f.len()
        )));
    }
    if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn induced(alg: &StarAlgebra, ideal: &LeftIdeal, f: &Functional, solver: &CMatrix) -> Result<PartialOperator> {
    let m = alg.dim();
    let p = ideal.dim();
    // row k: a_j ↦ f(b_k*·a_j)
    let weights = f.transpose() * solver;
    let mut action = CMatrix::zeros(m, p);
    for k in 0..m {
        let bk_star = alg.invol.row(k).transpose().into_owned();
        let row = &weights * alg.left_mult(&bk_star) * ideal.basis();
        action.set_row(k, &row);
    }
    PartialOperator::new(ideal.basis().clone(), action)
}

fn setup(alg: &StarAlgebra, ideal: &LeftIdeal, f: &Functional, cfg: &ToleranceConfig) -> Result<Setup> {
    validate_algebra(alg, ideal, cfg)?;
    check_functional(f, ideal.dim(), "the ideal")?;
    let solver = ideal.solver(cfg)?;
    let op = induced(alg, ideal, f, &solver)?;
    let report = validate(&op, cfg)?;
    let split = report.split(cfg);
    Ok(Setup {
        op,
        gram: report.gram,
        split,
        solver,
        dual: f.conjugate(),
    })
}

/// The partial operator `a ↦ (f(b_k*·a))_k` on the ideal.
pub fn induced_operator(
    alg: &StarAlgebra,
    ideal: &LeftIdeal,
    f: &Functional,
    cfg: &ToleranceConfig,
) -> Result<PartialOperator> {
    Ok(setup(alg, ideal, f, cfg)?.op)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertReport {
    pub bounded: bool,
    /// `inf { M : |f(a)|² ≤ M·f(a*a) on I }`, `+∞` when unbounded.
    pub bound: f64,
}

fn hilbert(s: &Setup, cfg: &ToleranceConfig) -> HilbertReport {
    let off_range = vec_norm(&(s.split.kernel.adjoint() * &s.dual));
    let tol = cfg.cmp_tol * (vec_norm(&s.dual) + frobenius(&s.gram));
    if off_range > tol {
        HilbertReport {
            bounded: false,
            bound: f64::INFINITY,
        }
    } else {
        HilbertReport {
            bounded: true,
            bound: quadratic_on_range(&s.split, &s.dual),
        }
    }
}

pub fn is_hilbert_bounded(
    alg: &StarAlgebra,
    ideal: &LeftIdeal,
    f: &Functional,
    cfg: &ToleranceConfig,
) -> Result<HilbertReport> {
    Ok(hilbert(&setup(alg, ideal, f, cfg)?, cfg))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Sharp `λ_x` in `f(a*x*xa) ≤ λ_x·f(a*a)` for each basis element `x`.
    pub lambdas: Vec<f64>,
}

/// Checks the basis elements only. If `λ_x` and `λ_y` are finite then so
/// is `λ_{x+y} ≤ 2(λ_x + λ_y)`, and `λ_{cx} = |c|²λ_x`, so this covers
/// every element.
fn admissibility(alg: &StarAlgebra, ideal: &LeftIdeal, s: &Setup, cfg: &ToleranceConfig) -> Result<AdmissibilityReport> {
    let gram_norm = frobenius(&s.gram);
    let mut lambdas = Vec::with_capacity(alg.dim());
    let mut admissible = true;
    for i in 0..alg.dim() {
        let x = s.left_action(alg, ideal, i);
        let gx = hermitian_part(&(x.adjoint() * &s.gram * &x));
        let tol = cfg.cmp_tol * (frobenius(&gx) + gram_norm);
        let leaks = s
            .split
            .kernel
            .column_iter()
            .any(|v| (v.adjoint() * &gx * v)[(0, 0)].re.abs() > tol);
        if leaks {
            admissible = false;
            lambdas.push(f64::INFINITY);
        } else {
            lambdas.push(relative_bound(&s.split, &gx, cfg)?);
        }
    }
    Ok(AdmissibilityReport {
        admissible,
        lambdas,
    })
}

pub fn is_admissible(
    alg: &StarAlgebra,
    ideal: &LeftIdeal,
    f: &Functional,
    cfg: &ToleranceConfig,
) -> Result<AdmissibilityReport> {
    let s = setup(alg, ideal, f, cfg)?;
    admissibility(alg, ideal, &s, cfg)
}

/// The representation `π_f` on `H_A`, with `ζ_f` and `J*`.
#[derive(Debug, Clone)]
pub struct GnsData {
    /// `dim H_A`.
    pub r: usize,
    /// `G_ij = f(a_i*·a_j)`.
    pub gram: CMatrix,
    /// `π(b_i)` in orthonormal coordinates of `H_A`.
    pub pi: Vec<CMatrix>,
    pub zeta: CVector,
    /// `J*` on the whole algebra (`r×m`).
    pub j_star_full: CMatrix,
    /// `r×p`: ideal coordinates to `H_A` coordinates.
    pub coords: CMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnsResiduals {
    /// `π(b_i)π(b_j) − π(b_i·b_j)`.
    pub multiplicative: f64,
    /// `π(b_i)† − π(b_i*)`.
    pub adjoint: f64,
    /// `π(b_i)ζ − J*b_i`.
    pub cyclic: f64,
}

impl GnsResiduals {
    pub fn max(&self) -> f64 {
        self.multiplicative.max(self.adjoint).max(self.cyclic)
    }
}

impl GnsData {
    /// `π(x)` for an arbitrary element.
    pub fn represent(&self, x: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.r, self.r);
        for (pi, &xi) in self.pi.iter().zip(x.iter()) {
            out += pi * xi;
        }
        out
    }

    /// `⟨π(x)ζ, ζ⟩`.
    pub fn state(&self, x: &CVector) -> C64 {
        (self.zeta.adjoint() * self.represent(x) * &self.zeta)[(0, 0)]
    }

    /// Largest residuals of the homomorphism and cyclicity identities over
    /// basis elements.
    pub fn residuals(&self, alg: &StarAlgebra) -> GnsResiduals {
        let m = alg.dim();
        let mut out = GnsResiduals {
            multiplicative: 0.0,
            adjoint: 0.0,
            cyclic: 0.0,
        };
        for i in 0..m {
            for j in 0..m {
                let lhs = &self.pi[i] * &self.pi[j];
                let rhs = self.represent(&alg.structure(i, j));
                out.multiplicative = out.multiplicative.max(frobenius(&(lhs - rhs)));
            }
            let star = self.represent(&alg.invol.row(i).transpose().into_owned());
            out.adjoint = out.adjoint.max(frobenius(&(self.pi[i].adjoint() - star)));
            let cyc = &self.pi[i] * &self.zeta - self.j_star_full.column(i);
            out.cyclic = out.cyclic.max(vec_norm(&cyc));
        }
        out
    }
}

fn build_gns(alg: &StarAlgebra, ideal: &LeftIdeal, s: &Setup, cfg: &ToleranceConfig) -> Result<GnsData> {
    if !admissibility(alg, ideal, s, cfg)?.admissible {
        return Err(Error::NotAdmissible);
    }
    if !hilbert(s, cfg).bounded {
        return Err(Error::NotHilbertBounded);
    }
    let w = whitening(&s.split);
    let mut coords = s.split.basis.adjoint();
    for (i, &v) in s.split.values.iter().enumerate() {
        let root = v.sqrt();
        for z in coords.row_mut(i).iter_mut() {
            *z *= root;
        }
    }
    let pi = (0..alg.dim())
        .map(|i| &coords * s.left_action(alg, ideal, i) * &w)
        .collect();
    Ok(GnsData {
        r: s.split.rank(),
        gram: s.gram.clone(),
        pi,
        zeta: w.adjoint() * &s.dual,
        j_star_full: w.adjoint() * s.op.action().adjoint(),
        coords,
    })
}

pub fn gns(alg: &StarAlgebra, ideal: &LeftIdeal, f: &Functional, cfg: &ToleranceConfig) -> Result<GnsData> {
    let s = setup(alg, ideal, f, cfg)?;
    build_gns(alg, ideal, &s, cfg)
}

/// `f_N(b_k) = ⟨π(b_k)ζ, ζ⟩`, the smallest representable extension of `f`.
pub fn extend_functional(
    alg: &StarAlgebra,
    ideal: &LeftIdeal,
    f: &Functional,
    cfg: &ToleranceConfig,
) -> Result<Functional> {
    let data = gns(alg, ideal, f, cfg)?;
    Ok(CVector::from_iterator(
        alg.dim(),
        data.pi.iter().map(|pi| (data.zeta.adjoint() * pi * &data.zeta)[(0, 0)]),
    ))
}

/// `f_N(x*·x) = ‖J*x‖²`.
pub fn fn_on_positive(
    alg: &StarAlgebra,
    ideal: &LeftIdeal,
    f: &Functional,
    x: &CVector,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_functional(x, alg.dim(), "the algebra")?;
    let data = gns(alg, ideal, f, cfg)?;
    Ok(vec_norm(&(&data.j_star_full * x)).powi(2))
}

/// `f_N(x) = conj(⟨A_N·1, x⟩)`, through the minimal operator extension.
///
/// Positivity alone does not make `f` Hilbert bounded when the algebra is
/// not a C*-algebra (take `ℂ[ε]/(ε²)` with `I = ℂε`, `f(ε) = 1`), so an
/// operator without positive extension is reported as `NotHilbertBounded`.
pub fn extend_functional_unital(
    alg: &StarAlgebra,
    ideal: &LeftIdeal,
    f: &Functional,
    cfg: &ToleranceConfig,
) -> Result<Functional> {
    let unit = alg.unit().ok_or(Error::NoUnit)?.clone();
    let s = setup(alg, ideal, f, cfg)?;
    if !admissibility(alg, ideal, &s, cfg)?.admissible {
        return Err(Error::NotAdmissible);
    }
    let a_n = match krein_von_neumann(&s.op, cfg) {
        Ok(r) => r.a_n,
        Err(Error::NotExtendible { .. }) => return Err(Error::NotHilbertBounded),
        Err(e) => return Err(e),
    };
    Ok((a_n * unit).conjugate())
}

/// `H_ij = h(b_i*·b_j)`, so that `h(x*x) = x†Hx`.
pub fn functional_gram(alg: &StarAlgebra, h: &Functional) -> Result<CMatrix> {
    check_functional(h, alg.dim(), "the algebra")?;
    let m = alg.dim();
    let mut out = CMatrix::zeros(m, m);
    for i in 0..m {
        let bi_star = alg.invol.row(i).transpose().into_owned();
        let row = h.transpose() * alg.left_mult(&bi_star);
        out.set_row(i, &row);
    }
    Ok(out)
}

/// Most negative value of `(g − f)(x*x)` over unit `x`, with its `x`.
fn order_violation(alg: &StarAlgebra, f: &Functional, g: &Functional, cfg: &ToleranceConfig) -> Result<Option<(CVector, f64)>> {
    let h = functional_gram(alg, &(g - f))?;
    let eig = hermitian_eigen(&hermitian_part(&h), cfg)?;
    if eig.dim() == 0 {
        return Ok(None);
    }
    let scale = frobenius(&functional_gram(alg, g)?) + frobenius(&functional_gram(alg, f)?);
    let min = eig.min();
    if min < -cfg.psd_tol * (1.0 + scale) {
        Ok(Some((eig.eigenvectors.column(0).into_owned(), min)))
    } else {
        Ok(None)
    }
}

/// `f ≤ g`: `(g − f)(x*x) ≥ 0` for every `x`.
pub fn functional_leq(alg: &StarAlgebra, f: &Functional, g: &Functional, cfg: &ToleranceConfig) -> Result<bool> {
    check_functional(f, alg.dim(), "the algebra")?;
    Ok(order_violation(alg, f, g, cfg)?.is_none())
}

/// Decided by running the GNS construction for `g` on the whole algebra.
pub fn is_representable(alg: &StarAlgebra, g: &Functional, cfg: &ToleranceConfig) -> Result<bool> {
    check_functional(g, alg.dim(), "the algebra")?;
    match gns(alg, &LeftIdeal::whole(alg.dim()), g, cfg) {
        Ok(_) => Ok(true),
        Err(
            Error::NonHermitianGram { .. }
            | Error::NonPsdGram { .. }
            | Error::NotAdmissible
            | Error::NotHilbertBounded,
        ) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `f_max^g = g − (g − f)_N`, the largest representable extension of `f`
/// below `g`.
pub fn f_max(
    alg: &StarAlgebra,
    ideal: &LeftIdeal,
    f: &Functional,
    g: &Functional,
    cfg: &ToleranceConfig,
) -> Result<Functional> {
    check_functional(g, alg.dim(), "the algebra")?;
    if !is_representable(alg, g, cfg)? {
        return Err(Error::NotRepresentable);
    }
    let f_n = extend_functional(alg, ideal, f, cfg)?;
    if let Some((certificate, value)) = order_violation(alg, &f_n, g, cfg)? {
        return Err(Error::BoundNotDominating { certificate, value });
    }
    let g_on_ideal = ideal.basis().transpose() * g;
    let h = &g_on_ideal - f;
    // when g already agrees with f on I the difference is pure rounding
    let solver = ideal.solver(cfg)?;
    let g_gram = induced(alg, ideal, &g_on_ideal, &solver)?.gram();
    let h_gram = induced(alg, ideal, &h, &solver)?.gram();
    let result = if frobenius(&h_gram) <= cfg.cmp_tol * (1.0 + frobenius(&g_gram)) {
        g.clone()
    } else {
        g - extend_functional(alg, ideal, &h, cfg)?
    };
    if !is_representable(alg, &result, cfg)? {
        return Err(Error::NotRepresentable);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{m2_algebra, m2_column_ideal, m2_vector_state, nilpotent_algebra, z2_algebra};
    use crate::linalg::{basis_vector, c, real_vector};
    use crate::random::{random_commutative_algebra, random_psd, random_vector, Rng};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn close(a: &CVector, b: &CVector, tol: f64) -> bool {
        vec_norm(&(a - b)) <= tol
    }

    #[test]
    fn fixtures_are_valid() {
        validate_algebra(&m2_algebra(), &m2_column_ideal(), &cfg()).unwrap();
        validate_algebra(&z2_algebra(), &LeftIdeal::whole(2), &cfg()).unwrap();
        let (alg, ideal) = nilpotent_algebra();
        validate_algebra(&alg, &ideal, &cfg()).unwrap();
    }

    #[test]
    fn broken_structure_is_reported() {
        let alg = m2_algebra();
        let mut table: Vec<Vec<CVector>> = (0..4)
            .map(|i| (0..4).map(|j| alg.structure(i, j)).collect())
            .collect();
        table[0][0] = basis_vector(4, 1);
        let bad = StarAlgebra::new(table, alg.involution().clone(), alg.unit().cloned()).unwrap();
        assert!(matches!(
            bad.validate(&cfg()),
            Err(Error::InvalidAlgebra { defect: AlgebraDefect::Associativity, .. })
        ));

        // first-row matrices form a right ideal, not a left one
        let rows = LeftIdeal::spanned_by(4, &[0, 1]);
        assert!(matches!(
            rows.validate(&alg, &cfg()),
            Err(Error::InvalidAlgebra { defect: AlgebraDefect::IdealClosure, .. })
        ));
        let dup = LeftIdeal::new(CMatrix::from_columns(&[basis_vector(4, 0), basis_vector(4, 0)])).unwrap();
        assert!(matches!(
            dup.validate(&alg, &cfg()),
            Err(Error::InvalidAlgebra { defect: AlgebraDefect::IdealRank, .. })
        ));

        let z2 = z2_algebra();
        let table = (0..2)
            .map(|i| (0..2).map(|j| z2.structure(i, j)).collect())
            .collect();
        let wrong_unit = StarAlgebra::new(table, z2.involution().clone(), Some(basis_vector(2, 1))).unwrap();
        assert!(matches!(
            wrong_unit.validate(&cfg()),
            Err(Error::InvalidAlgebra { defect: AlgebraDefect::Unit, .. })
        ));
    }

    #[test]
    fn zero_functional() {
        let (alg, ideal) = (m2_algebra(), m2_column_ideal());
        let f = CVector::zeros(2);
        let op = induced_operator(&alg, &ideal, &f, &cfg()).unwrap();
        assert_eq!(op.gram(), CMatrix::zeros(2, 2));
        let h = is_hilbert_bounded(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(h.bounded && h.bound == 0.0);
        let a = is_admissible(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(a.admissible && a.lambdas.iter().all(|&l| l == 0.0));
        let data = gns(&alg, &ideal, &f, &cfg()).unwrap();
        assert_eq!(data.r, 0);
        assert_eq!(extend_functional(&alg, &ideal, &f, &cfg()).unwrap(), CVector::zeros(4));
        assert_eq!(extend_functional_unital(&alg, &ideal, &f, &cfg()).unwrap(), CVector::zeros(4));
        assert!(is_representable(&alg, &CVector::zeros(4), &cfg()).unwrap());
    }

    #[test]
    fn matrix_vector_state() {
        let (alg, ideal, f) = (m2_algebra(), m2_column_ideal(), m2_vector_state());
        let op = induced_operator(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(frobenius(&(op.gram() - identity(2))) < 1e-14);

        let h = is_hilbert_bounded(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(h.bounded && (h.bound - 1.0).abs() < 1e-14);
        let a = is_admissible(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(a.admissible);
        for l in a.lambdas {
            assert!((l - 1.0).abs() < 1e-12);
        }

        let data = gns(&alg, &ideal, &f, &cfg()).unwrap();
        assert_eq!(data.r, 2);
        assert!(data.residuals(&alg).max() < 1e-12);
        assert!((vec_norm(&data.zeta).powi(2) - 1.0).abs() < 1e-14);

        let x11 = basis_vector(4, 0);
        let f_n = extend_functional(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(close(&f_n, &x11, 1e-14));
        let unital = extend_functional_unital(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(close(&unital, &x11, 1e-14));
        assert!((fn_on_positive(&alg, &ideal, &f, &x11, &cfg()).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(fn_on_positive(&alg, &ideal, &f, &CVector::zeros(4), &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn non_positive_functional() {
        let (alg, ideal) = (m2_algebra(), m2_column_ideal());
        let f = real_vector(&[-1.0, 0.0]);
        assert!(matches!(
            induced_operator(&alg, &ideal, &f, &cfg()),
            Err(Error::NonPsdGram { .. })
        ));
    }

    #[test]
    fn representability_on_matrices() {
        let alg = m2_algebra();
        let trace = real_vector(&[1.0, 0.0, 0.0, 1.0]);
        assert!(is_representable(&alg, &trace, &cfg()).unwrap());
        let data = gns(&alg, &LeftIdeal::whole(4), &trace, &cfg()).unwrap();
        assert_eq!(data.r, 4);
        assert!(frobenius(&(data.gram.clone() - identity(4))) < 1e-14);
        assert!(!is_representable(&alg, &basis_vector(4, 1), &cfg()).unwrap());
    }

    #[test]
    fn maximal_extension_on_matrices() {
        let (alg, ideal, f) = (m2_algebra(), m2_column_ideal(), m2_vector_state());
        let f_n = extend_functional(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(close(&f_max(&alg, &ideal, &f, &f_n, &cfg()).unwrap(), &f_n, 1e-12));

        let trace = real_vector(&[1.0, 0.0, 0.0, 1.0]);
        let top = f_max(&alg, &ideal, &f, &trace, &cfg()).unwrap();
        // every extension is tr(ρ·) with ρ = [[1, 0], [0, t]]; below the trace t ≤ 1
        assert!(close(&top, &trace, 1e-12));
        assert!(functional_leq(&alg, &f_n, &top, &cfg()).unwrap());
        assert!(functional_leq(&alg, &top, &trace, &cfg()).unwrap());
        assert!(close(&(ideal.basis().transpose() * &top), &f, 1e-12));

        let small = real_vector(&[0.5, 0.0, 0.0, 0.5]);
        assert!(matches!(
            f_max(&alg, &ideal, &f, &small, &cfg()),
            Err(Error::BoundNotDominating { .. })
        ));
        assert!(matches!(
            f_max(&alg, &ideal, &f, &basis_vector(4, 1), &cfg()),
            Err(Error::NotRepresentable)
        ));
    }

    #[test]
    fn group_algebra() {
        let alg = z2_algebra();
        // f(a·e + b·g) = a + b/2 is positive: f((a+bg)*(a+bg)) = |a|²+|b|²+Re(a b̄)
        let f = real_vector(&[1.0, 0.5]);
        let ideal = LeftIdeal::whole(2);
        assert!(is_representable(&alg, &f, &cfg()).unwrap());
        let f_n = extend_functional(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(close(&f_n, &f, 1e-12));
        assert!(!is_representable(&alg, &real_vector(&[1.0, 2.0]), &cfg()).unwrap());
    }

    #[test]
    fn nilpotent_functional_is_not_hilbert_bounded() {
        let (alg, ideal) = nilpotent_algebra();
        let f = real_vector(&[1.0]);
        let h = is_hilbert_bounded(&alg, &ideal, &f, &cfg()).unwrap();
        assert!(!h.bounded && h.bound.is_infinite());
        assert!(is_admissible(&alg, &ideal, &f, &cfg()).unwrap().admissible);
        assert!(matches!(gns(&alg, &ideal, &f, &cfg()), Err(Error::NotHilbertBounded)));
        assert!(matches!(
            extend_functional_unital(&alg, &ideal, &f, &cfg()),
            Err(Error::NotHilbertBounded)
        ));
    }

    #[test]
    fn no_unit() {
        let (alg, ideal) = nilpotent_algebra();
        let table = (0..2)
            .map(|i| (0..2).map(|j| alg.structure(i, j)).collect())
            .collect();
        let bare = StarAlgebra::new(table, alg.involution().clone(), None).unwrap();
        assert!(matches!(
            extend_functional_unital(&bare, &ideal, &real_vector(&[0.0]), &cfg()),
            Err(Error::NoUnit)
        ));
    }

    #[test]
    fn positive_functionals_are_admissible() {
        // left ideals {u·v†} of M₂ with f = tr(ρ·), ρ ≥ 0 of any rank
        let alg = m2_algebra();
        let mut rng = Rng::seeded(41);
        for _ in 0..50 {
            let v = random_vector(&mut rng, 2);
            let basis = CMatrix::from_fn(4, 2, |k, j| if k / 2 == j { v[k % 2].conj() } else { c(0.0, 0.0) });
            let ideal = LeftIdeal::new(basis.clone()).unwrap();
            ideal.validate(&alg, &cfg()).unwrap();
            let rank = rng.range(0, 2);
            let rho = random_psd(&mut rng, 2, rank);
            let f = CVector::from_iterator(2, (0..2).map(|j| {
                (0..4).map(|k| rho[(k % 2, k / 2)] * basis[(k, j)]).sum::<crate::C64>()
            }));
            let a = is_admissible(&alg, &ideal, &f, &cfg()).unwrap();
            assert!(a.admissible, "λ = {:?}", a.lambdas);
        }
    }

    #[test]
    fn random_commutative_instances() {
        let mut rng = Rng::seeded(31);
        for _ in 0..20 {
            let m = rng.range(2, 4);
            let (alg, t) = random_commutative_algebra(&mut rng, m);
            alg.validate(&cfg()).unwrap();
            let support: Vec<usize> = (0..m).filter(|_| rng.coin(0.6)).collect();
            let t_inv = t.clone().try_inverse().unwrap();
            let basis = t_inv.select_columns(support.iter());
            let ideal = LeftIdeal::new(basis).unwrap();
            ideal.validate(&alg, &cfg()).unwrap();
            let mu: Vec<f64> = support.iter().map(|_| rng.uniform()).collect();
            // a_j = δ_{support[j]}, f(δ_p) = μ_p
            let f = real_vector(&mu);
            let data = gns(&alg, &ideal, &f, &cfg()).unwrap();
            assert!(data.residuals(&alg).max() < 1e-10);
            let f_n = extend_functional(&alg, &ideal, &f, &cfg()).unwrap();
            let unital = extend_functional_unital(&alg, &ideal, &f, &cfg()).unwrap();
            assert!(close(&f_n, &unital, 1e-9));
            assert!(close(&(ideal.basis().transpose() * &f_n), &f, 1e-10));
            // f_N vanishes off the support: f_N(b_k) = Σ_{p∈S} μ_p T_pk
            let mut expected = CVector::zeros(m);
            for (&p, &w) in support.iter().zip(&mu) {
                expected += t.row(p).transpose() * c(w, 0.0);
            }
            assert!(close(&f_n, &expected, 1e-9 * (1.0 + vec_norm(&expected))));
            let x = random_vector(&mut rng, m);
            let lhs = fn_on_positive(&alg, &ideal, &f, &x, &cfg()).unwrap();
            let rhs = alg.evaluate(&f_n, &alg.square(&x));
            assert!((lhs - rhs.re).abs() <= 1e-9 * (1.0 + lhs) && rhs.im.abs() <= 1e-9 * (1.0 + lhs));
        }
    }
}
