//! Positive-definite operator kernels on a finite set `Z = {0, …, m−1}`.
//!
//! A function `u: Z → ℂⁿ` is stored s-major as a vector of `ℂ^{m·n}`, with
//! `u(s)` occupying entries `s·n .. (s+1)·n`. The operator of a kernel `K`
//! is the block matrix whose block in block-row `t`, block-column `s` is
//! `K(s, t)`, so that `⟨A_K u, v⟩ = Σ_{s,t} ⟨K(s,t)u(s), v(t)⟩`.

use crate::error::{Error, Result};
use crate::krein::krein_von_neumann;
use crate::linalg::{
    frobenius, hermitian_eigen, hermitian_part, is_psd, loewner_leq, CMatrix, CVector,
    ToleranceConfig,
};
use crate::partial::PartialOperator;

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    m: usize,
    n: usize,
    /// `blocks[s·m + t] = K(s, t)`.
    blocks: Vec<CMatrix>,
}

impl Kernel {
    /// `blocks` in s-major order: `blocks[s·m + t] = K(s, t)`, each `n×n`.
    pub fn new(m: usize, n: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != m * m {
            return Err(Error::ShapeMismatch(format!(
                "expected {} blocks for |Z| = {m}, got {}",
                m * m,
                blocks.len()
            )));
        }
        if let Some(b) = blocks.iter().find(|b| b.shape() != (n, n)) {
            return Err(Error::ShapeMismatch(format!(
                "kernel blocks must be {n}x{n}, got {}x{}",
                b.nrows(),
                b.ncols()
            )));
        }
        for b in &blocks {
            crate::linalg::ensure_finite(b)?;
        }
        Ok(Kernel { m, n, blocks })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Kernel {
            m,
            n,
            blocks: vec![CMatrix::zeros(n, n); m * m],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block(&self, s: usize, t: usize) -> &CMatrix {
        &self.blocks[s * self.m + t]
    }

    /// Checks `K(s,t)† = K(t,s)` and positivity of the assembled operator.
    pub fn validate(&self, cfg: &ToleranceConfig) -> Result<()> {
        for s in 0..self.m {
            for t in 0..self.m {
                let residual = frobenius(&(self.block(s, t).adjoint() - self.block(t, s)));
                let scale = frobenius(self.block(s, t)) + frobenius(self.block(t, s));
                if residual > cfg.cmp_tol * (1.0 + scale) {
                    return Err(Error::NotHermitian { residual });
                }
            }
        }
        let op = operator_from_kernel(self);
        if !is_psd(&op, cfg)? {
            return Err(Error::NotPsd {
                min_eigenvalue: hermitian_eigen(&hermitian_part(&op), cfg)?.min(),
            });
        }
        Ok(())
    }
}

/// `u_{s,x}`: the function equal to `x` at `s` and zero elsewhere.
pub fn point_mass(m: usize, s: usize, x: &CVector) -> CVector {
    let n = x.len();
    let mut u = CVector::zeros(m * n);
    u.rows_mut(s * n, n).copy_from(x);
    u
}

/// A partially specified kernel: a positive operator on a subspace `F₀` of
/// functions `Z → ℂⁿ`, both written in s-major coordinates of `ℂ^{m·n}`.
#[derive(Debug, Clone)]
pub struct KernelProblem {
    pub m: usize,
    pub n: usize,
    pub sub: PartialOperator,
}

impl KernelProblem {
    pub fn new(m: usize, n: usize, sub: PartialOperator) -> Result<Self> {
        if sub.n() != m * n {
            return Err(Error::ShapeMismatch(format!(
                "operator acts on C^{} but |Z|·n = {}",
                sub.n(),
                m * n
            )));
        }
        Ok(KernelProblem { m, n, sub })
    }
}

pub fn operator_from_kernel(k: &Kernel) -> CMatrix {
    let (m, n) = (k.m, k.n);
    let mut op = CMatrix::zeros(m * n, m * n);
    for s in 0..m {
        for t in 0..m {
            op.view_mut((t * n, s * n), (n, n)).copy_from(k.block(s, t));
        }
    }
    op
}

/// Reads `K(s,t)` off `⟨M u_{s,x}, u_{t,y}⟩`, i.e. block `(t, s)` of `M`.
pub fn kernel_from_operator(mat: &CMatrix, m: usize, n: usize, cfg: &ToleranceConfig) -> Result<Kernel> {
    if mat.shape() != (m * n, m * n) {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, expected {}x{}",
            mat.nrows(),
            mat.ncols(),
            m * n,
            m * n
        )));
    }
    if !is_psd(mat, cfg)? {
        let min_eigenvalue = hermitian_eigen(&hermitian_part(mat), cfg)
            .map(|e| e.min())
            .unwrap_or(f64::NAN);
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let mut blocks = Vec::with_capacity(m * m);
    for s in 0..m {
        for t in 0..m {
            blocks.push(mat.view((t * n, s * n), (n, n)).into_owned());
        }
    }
    Kernel::new(m, n, blocks)
}

pub fn is_positive_definite_kernel(k: &Kernel, cfg: &ToleranceConfig) -> Result<bool> {
    is_psd(&operator_from_kernel(k), cfg)
}

/// Smallest kernel whose operator extends the problem's partial operator.
pub fn extend_kernel(problem: &KernelProblem, cfg: &ToleranceConfig) -> Result<Kernel> {
    let a_n = krein_von_neumann(&problem.sub, cfg)?.a_n;
    kernel_from_operator(&a_n, problem.m, problem.n, cfg)
}

/// `K ⪯ L`: `A_K ≤ A_L` in the Löwner order.
pub fn kernel_preceq(k: &Kernel, l: &Kernel, cfg: &ToleranceConfig) -> Result<bool> {
    if (k.m, k.n) != (l.m, l.n) {
        return Err(Error::ShapeMismatch(format!(
            "kernels on |Z| = {}, n = {} and |Z| = {}, n = {}",
            k.m, k.n, l.m, l.n
        )));
    }
    loewner_leq(&operator_from_kernel(k), &operator_from_kernel(l), cfg)
}
