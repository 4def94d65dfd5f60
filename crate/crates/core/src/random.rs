//! Seeded generators for matrices and instances.
//!
//! Everything draws from ChaCha8 so that a seed produces the same stream on
//! every platform.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::StarAlgebra;
use crate::linalg::{c, hermitian_part, CMatrix, CVector, C64};

#[derive(Debug, Clone)]
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn seeded(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.gen::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.0.gen_range(lo..=hi_inclusive)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard complex Gaussian (unit expected modulus squared).
    pub fn complex_normal(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        c(s * self.normal(), s * self.normal())
    }
}

pub fn random_matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| rng.complex_normal())
}

pub fn random_vector(rng: &mut Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| rng.complex_normal())
}

pub fn random_hermitian(rng: &mut Rng, n: usize) -> CMatrix {
    hermitian_part(&random_matrix(rng, n, n))
}

/// `LL†` with `L` an `n×rank` Gaussian matrix.
pub fn random_psd(rng: &mut Rng, n: usize, rank: usize) -> CMatrix {
    let l = random_matrix(rng, n, rank);
    hermitian_part(&(&l * l.adjoint()))
}

/// Haar-distributed unitary via QR of a Gaussian matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn random_unitary(rng: &mut Rng, n: usize) -> CMatrix {
    let qr = random_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for z in q.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    q
}

/// Hermitian `W` with `0 ≤ W ≤ I`: a random unitary conjugating uniform
/// eigenvalues in `[0, 1]`.
pub fn random_contraction(rng: &mut Rng, n: usize) -> CMatrix {
    let u = random_unitary(rng, n);
    let mut scaled = u.clone();
    for j in 0..n {
        let s = rng.uniform();
        for z in scaled.column_mut(j).iter_mut() {
            *z *= s;
        }
    }
    hermitian_part(&(scaled * u.adjoint()))
}

/// `ℂᵐ` with pointwise operations, written in the basis given by the
/// columns of a random invertible `T` (so `b_i = Σ_p T_pi δ_p`). Returns the
/// algebra and `T`.
pub fn random_commutative_algebra(rng: &mut Rng, m: usize) -> (StarAlgebra, CMatrix) {
    let t = loop {
        let t = random_matrix(rng, m, m);
        let s = t.clone().svd(false, false).singular_values;
        if s.min() > 0.2 * s.max() {
            break t;
        }
    };
    let t_inv = t.clone().try_inverse().expect("well conditioned");
    let table = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| &t_inv * t.column(i).component_mul(&t.column(j)))
                .collect()
        })
        .collect();
    let invol = (&t_inv * t.conjugate()).transpose();
    let unit = &t_inv * CVector::from_element(m, c(1.0, 0.0));
    let alg = StarAlgebra::new(table, invol, Some(unit)).expect("consistent shapes");
    (alg, t)
}
