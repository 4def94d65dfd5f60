//! Small named instances used throughout the docs, examples and tests.

use crate::algebra::{Functional, LeftIdeal, StarAlgebra};
use crate::linalg::{basis_vector, from_real_rows, real_vector, CMatrix, CVector};
use crate::partial::PartialOperator;

/// `dom A = span{e₁}` in `ℂ²` with `A e₁ = (1, 1)`. Its minimal extension is
/// the all-ones matrix.
pub fn running_example() -> PartialOperator {
    PartialOperator::new(
        from_real_rows(&[&[1.0], &[0.0]]),
        from_real_rows(&[&[1.0], &[1.0]]),
    )
    .expect("fixed shapes")
}

/// The incomplete matrix `[[0, ?], [1, ?]]`: positive on its domain, yet no
/// choice of the second column makes it positive.
pub fn halmos_counterexample() -> PartialOperator {
    PartialOperator::new(
        from_real_rows(&[&[1.0], &[0.0]]),
        from_real_rows(&[&[0.0], &[1.0]]),
    )
    .expect("fixed shapes")
}

fn algebra_from_table(
    m: usize,
    product: impl Fn(usize, usize) -> CVector,
    star: impl Fn(usize) -> CVector,
    unit: Option<CVector>,
) -> StarAlgebra {
    let table = (0..m).map(|i| (0..m).map(|j| product(i, j)).collect()).collect();
    let mut invol = CMatrix::zeros(m, m);
    for i in 0..m {
        invol.set_row(i, &star(i).transpose());
    }
    StarAlgebra::new(table, invol, unit).expect("fixed shapes")
}

/// `M₂(ℂ)` on the matrix units `E₁₁, E₁₂, E₂₁, E₂₂` (index `2·row + col`).
pub fn m2_algebra() -> StarAlgebra {
    let unit = |r: usize, c: usize| basis_vector(4, 2 * r + c);
    algebra_from_table(
        4,
        |i, j| {
            let (a, b) = (i / 2, i % 2);
            let (c, d) = (j / 2, j % 2);
            if b == c {
                unit(a, d)
            } else {
                CVector::zeros(4)
            }
        },
        |i| unit(i % 2, i / 2),
        Some(real_vector(&[1.0, 0.0, 0.0, 1.0])),
    )
}

/// Matrices supported on the first column, with basis `E₁₁, E₂₁`.
pub fn m2_column_ideal() -> LeftIdeal {
    LeftIdeal::spanned_by(4, &[0, 2])
}

/// `aE₁₁ + cE₂₁ ↦ a` on the first-column ideal.
pub fn m2_vector_state() -> Functional {
    real_vector(&[1.0, 0.0])
}

/// The group algebra of `ℤ/2 = {e, g}` with `g* = g⁻¹ = g`.
pub fn z2_algebra() -> StarAlgebra {
    algebra_from_table(
        2,
        |i, j| basis_vector(2, (i + j) % 2),
        |i| basis_vector(2, i),
        Some(basis_vector(2, 0)),
    )
}

/// `ℂ[ε]/(ε²)` with `ε* = ε`, on the basis `1, ε`, and its ideal `ℂε`.
pub fn nilpotent_algebra() -> (StarAlgebra, LeftIdeal) {
    let alg = algebra_from_table(
        2,
        |i, j| {
            if i + j < 2 {
                basis_vector(2, i + j)
            } else {
                CVector::zeros(2)
            }
        },
        |i| basis_vector(2, i),
        Some(basis_vector(2, 0)),
    );
    (alg, LeftIdeal::spanned_by(2, &[1]))
}
