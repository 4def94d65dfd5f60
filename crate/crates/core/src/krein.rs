//! The Krein–von Neumann extension `A_N = J·J*`.
//!
//! The auxiliary Hilbert space `H_A` is `ran A` with the inner product
//! `⟨Ax, Ax′⟩_A = ⟨Ax, x′⟩`. In domain coefficients that is `ℂᵈ / ker G`
//! with the form `c′†Gc`; writing `G = UΛU†` and keeping the eigenvalues
//! above the rank cutoff (descending), the class of `c` gets the orthonormal
//! coordinates `Λ_r^{1/2}·U_r†·c`. In those coordinates the embedding
//! `J: H_A → ℂⁿ` is the matrix `Ad·U_r·Λ_r^{-1/2}` and `J*` is its adjoint.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_part, whitening, CMatrix, CVector, RangeSplit, ToleranceConfig,
};
use crate::partial::{is_extendible, quadratic_on_range, validate, PartialOperator};

#[derive(Debug, Clone)]
pub struct HAFactorization {
    /// `dim H_A`, the numerical rank of the Gram matrix.
    pub rank: usize,
    /// `J` on an orthonormal basis of `H_A` (`n×r`).
    pub j: CMatrix,
    /// `J*` (`r×n`).
    pub j_star: CMatrix,
    /// `Λ_r^{1/2}·U_r†`: sends domain coefficients to `H_A` coordinates.
    pub coords: CMatrix,
}

impl HAFactorization {
    /// `H_A` coordinates of `A(Dc)`.
    pub fn class_of(&self, coeffs: &CVector) -> CVector {
        &self.coords * coeffs
    }

    /// `J·J*`.
    pub fn product(&self) -> CMatrix {
        hermitian_part(&(&self.j * &self.j_star))
    }
}

#[derive(Debug, Clone)]
pub struct KvnResult {
    pub a_n: CMatrix,
    pub factorization: HAFactorization,
    /// Operator norm of `a_n`.
    pub norm: f64,
}

/// Validated operator together with the spectral split of its Gram matrix;
/// fails with `NotExtendible` when `ker G ⊄ ker Ad`.
pub(crate) struct Prepared<'a> {
    pub op: &'a PartialOperator,
    pub split: RangeSplit,
}

pub(crate) fn prepare<'a>(p: &'a PartialOperator, cfg: &ToleranceConfig) -> Result<Prepared<'a>> {
    let report = is_extendible(p, cfg)?;
    if let Some(w) = report.witness {
        return Err(Error::NotExtendible { witness: w.y });
    }
    let split = validate(p, cfg)?.split(cfg);
    Ok(Prepared { op: p, split })
}

impl Prepared<'_> {
    fn factorization(&self) -> HAFactorization {
        let whiten = whitening(&self.split);
        let j = self.op.action() * &whiten;
        let mut coords = self.split.basis.adjoint();
        for (i, &v) in self.split.values.iter().enumerate() {
            let s = v.sqrt();
            for z in coords.row_mut(i).iter_mut() {
                *z *= s;
            }
        }
        HAFactorization {
            rank: self.split.rank(),
            j_star: j.adjoint(),
            j,
            coords,
        }
    }

    /// `Ad·G⁺·Ad†`.
    fn closed_form(&self) -> CMatrix {
        let ad = self.op.action();
        let mut g_pinv = CMatrix::zeros(self.split.basis.nrows(), self.split.basis.nrows());
        for (j, &v) in self.split.values.iter().enumerate() {
            let u = self.split.basis.column(j);
            g_pinv += (u * u.adjoint()).unscale(v);
        }
        hermitian_part(&(ad * g_pinv * ad.adjoint()))
    }
}

pub fn ha_factorization(p: &PartialOperator, cfg: &ToleranceConfig) -> Result<HAFactorization> {
    Ok(prepare(p, cfg)?.factorization())
}

/// Minimal positive extension of `p`.
pub fn krein_von_neumann(p: &PartialOperator, cfg: &ToleranceConfig) -> Result<KvnResult> {
    let prep = prepare(p, cfg)?;
    let a_n = prep.closed_form();
    let norm = hermitian_eigen(&a_n, cfg)?.max_abs();
    Ok(KvnResult {
        a_n,
        factorization: prep.factorization(),
        norm,
    })
}

fn check_len(p: &PartialOperator, y: &CVector) -> Result<()> {
    if y.len() == p.n() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "vector of length {} for operator on C^{}",
            y.len(),
            p.n()
        )))
    }
}

/// `sup { |⟨Ax, y⟩|² : x ∈ dom A, ⟨Ax, x⟩ ≤ 1 }`, which equals `⟨A_N y, y⟩`.
pub fn qform_sup(p: &PartialOperator, y: &CVector, cfg: &ToleranceConfig) -> Result<f64> {
    check_len(p, y)?;
    let prep = prepare(p, cfg)?;
    let v = p.action().adjoint() * y;
    Ok(quadratic_on_range(&prep.split, &v))
}

/// `sup { 2·Re⟨Ax, y⟩ − ⟨Ax, x⟩ : x ∈ dom A }`, evaluated at the stationary
/// point `c = G⁺·Ad†y` of the concave objective.
pub fn qform_shift(p: &PartialOperator, y: &CVector, cfg: &ToleranceConfig) -> Result<f64> {
    check_len(p, y)?;
    let prep = prepare(p, cfg)?;
    let v = p.action().adjoint() * y;
    let coords = prep.split.basis.adjoint() * &v;
    let mut c = CVector::zeros(p.d());
    for (j, &lambda) in prep.split.values.iter().enumerate() {
        c += prep.split.basis.column(j) * (coords[j] / lambda);
    }
    let gram = p.gram();
    let pairing = (v.adjoint() * &c)[(0, 0)];
    let form = (c.adjoint() * gram * &c)[(0, 0)];
    Ok(2.0 * pairing.re - form.re)
}

/// `‖A_N‖`.
pub fn an_norm(p: &PartialOperator, cfg: &ToleranceConfig) -> Result<f64> {
    Ok(krein_von_neumann(p, cfg)?.norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{halmos_counterexample, running_example};
    use crate::linalg::{basis_vector, frobenius, from_real_rows, identity, is_psd, loewner_leq};
    use crate::partial::hilbert_bound;
    use crate::random::{random_psd, random_vector, Rng};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn empty_domain_gives_zero() {
        let p = PartialOperator::empty(3);
        let f = ha_factorization(&p, &cfg()).unwrap();
        assert_eq!(f.rank, 0);
        assert_eq!(f.j.shape(), (3, 0));
        let r = krein_von_neumann(&p, &cfg()).unwrap();
        assert_eq!(r.a_n, CMatrix::zeros(3, 3));
        assert_eq!(r.norm, 0.0);
    }

    #[test]
    fn running_example_factorization() {
        let p = running_example();
        let f = ha_factorization(&p, &cfg()).unwrap();
        assert_eq!(f.rank, 1);
        assert!(frobenius(&(&f.j - from_real_rows(&[&[1.0], &[1.0]]))) < 1e-14);
        assert_eq!(f.j_star, f.j.adjoint());

        let r = krein_von_neumann(&p, &cfg()).unwrap();
        let ones = from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(frobenius(&(&r.a_n - &ones)) < 1e-14);
        assert!((r.norm - 2.0).abs() < 1e-14);
        assert!((an_norm(&p, &cfg()).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn running_example_is_minimal_among_sampled_extensions() {
        // every positive extension of the running example is [[1,1],[1,t]] with t ≥ 1
        let a_n = krein_von_neumann(&running_example(), &cfg()).unwrap().a_n;
        for t in [1.0, 1.0 + 1e-6, 1.5, 2.0, 10.0] {
            let ext = from_real_rows(&[&[1.0, 1.0], &[1.0, t]]);
            assert!(is_psd(&ext, &cfg()).unwrap());
            assert!(loewner_leq(&a_n, &ext, &cfg()).unwrap());
        }
    }

    #[test]
    fn everywhere_defined_is_fixed() {
        let mut rng = Rng::seeded(17);
        let a = random_psd(&mut rng, 5, 3);
        let p = PartialOperator::everywhere_defined(a.clone()).unwrap();
        let r = krein_von_neumann(&p, &cfg()).unwrap();
        assert!(frobenius(&(&r.a_n - &a)) <= 1e-9);
        assert!(frobenius(&(r.factorization.product() - &a)) <= 1e-9);
        assert!((krein_von_neumann(&PartialOperator::everywhere_defined(identity(4)).unwrap(), &cfg())
            .unwrap()
            .norm
            - 1.0)
            .abs()
            < 1e-14);
    }

    #[test]
    fn halmos_counterexample_errors() {
        let err = krein_von_neumann(&halmos_counterexample(), &cfg()).unwrap_err();
        assert!(matches!(err, Error::NotExtendible { .. }));
        assert!(qform_sup(&halmos_counterexample(), &basis_vector(2, 0), &cfg()).is_err());
    }

    #[test]
    fn quadratic_forms_on_running_example() {
        let p = running_example();
        let zero = CVector::zeros(2);
        assert_eq!(qform_sup(&p, &zero, &cfg()).unwrap(), 0.0);
        assert_eq!(qform_shift(&p, &zero, &cfg()).unwrap(), 0.0);
        let e2 = basis_vector(2, 1);
        assert!((qform_sup(&p, &e2, &cfg()).unwrap() - 1.0).abs() < 1e-14);
        assert!((qform_shift(&p, &e2, &cfg()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn factorization_reproduces_domain_images() {
        let mut rng = Rng::seeded(23);
        let a = random_psd(&mut rng, 6, 3);
        let d = crate::random::random_matrix(&mut rng, 6, 4);
        let p = PartialOperator::new(d.clone(), &a * &d).unwrap();
        let f = ha_factorization(&p, &cfg()).unwrap();
        assert_eq!(f.rank, 3);
        // J*x = Ax in H_A coordinates, for x in the domain
        for j in 0..4 {
            let e = basis_vector(4, j);
            let lhs = &f.j_star * (&d * &e);
            assert!((lhs - f.class_of(&e)).norm() <= 1e-9);
        }
        let r = krein_von_neumann(&p, &cfg()).unwrap();
        assert!(frobenius(&(&r.a_n * &d - p.action())) <= 1e-8);
        assert!(frobenius(&(f.product() - &r.a_n)) <= 1e-9);
        let y = random_vector(&mut rng, 6);
        let quad = (y.adjoint() * &r.a_n * &y)[(0, 0)].re;
        assert!((qform_sup(&p, &y, &cfg()).unwrap() - quad).abs() <= 1e-8 * (1.0 + quad));
        assert!((r.norm - hilbert_bound(&p, &cfg()).unwrap()).abs() <= 1e-8 * r.norm);
    }
}
