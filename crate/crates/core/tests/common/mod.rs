//! Instance generators and reference computations for the integration
//! suites. The reference side works from nalgebra's symmetric eigensolver
//! directly, never the crate's own spectral helpers. Singular values come
//! from the Hermitian embedding `[[0, M], [M†, 0]]` (eigenvalues `±σ`):
//! nalgebra's complex SVD loses accuracy on some rank-deficient inputs.

#![allow(dead_code)]

use kvn::linalg::{c, hermitian_part};
use kvn::partial::PartialOperator;
use kvn::random::{random_matrix, random_vector, Rng};
use kvn::{CMatrix, CVector};
use nalgebra::SymmetricEigen;

/// Singular triplets `(σ, u, v)` with `σ > 0`, `M·v = σ·u`, descending.
pub struct Svd {
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(f64, CVector, CVector)>,
}

impl Svd {
    pub fn new(m: &CMatrix) -> Self {
        let (r, k) = m.shape();
        let mut triplets = Vec::new();
        if r > 0 && k > 0 {
            let mut emb = CMatrix::zeros(r + k, r + k);
            emb.view_mut((0, r), (r, k)).copy_from(m);
            emb.view_mut((r, 0), (k, r)).copy_from(&m.adjoint());
            let e = SymmetricEigen::new(emb);
            let root2 = c(2f64.sqrt(), 0.0);
            for j in 0..r + k {
                let s = e.eigenvalues[j];
                if s > 0.0 {
                    let col = e.eigenvectors.column(j);
                    triplets.push((s, col.rows(0, r) * root2, col.rows(r, k) * root2));
                }
            }
            triplets.sort_by(|a, b| b.0.total_cmp(&a.0));
            triplets.truncate(r.min(k));
        }
        Svd { rows: r, cols: k, triplets }
    }

    pub fn top(&self) -> f64 {
        self.triplets.first().map_or(0.0, |t| t.0)
    }

    fn kept(&self, cut: f64) -> impl Iterator<Item = &(f64, CVector, CVector)> {
        self.triplets.iter().filter(move |t| t.0 > cut)
    }

    pub fn rank(&self, rel: f64) -> usize {
        self.kept(rel * self.top()).count()
    }

    /// Orthonormal basis of the numerical column space.
    pub fn left(&self, rel: f64) -> CMatrix {
        let cols: Vec<CVector> = self.kept(rel * self.top()).map(|t| t.1.clone()).collect();
        stack(self.rows, &cols)
    }

    /// Orthonormal basis of the numerical row space.
    pub fn right(&self, rel: f64) -> CMatrix {
        let cols: Vec<CVector> = self.kept(rel * self.top()).map(|t| t.2.clone()).collect();
        stack(self.cols, &cols)
    }
}

fn stack(n: usize, cols: &[CVector]) -> CMatrix {
    CMatrix::from_fn(n, cols.len(), |i, j| cols[j][i])
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `q`.
fn orthogonal_complement(q: &CMatrix) -> CMatrix {
    let n = q.nrows();
    let proj = CMatrix::identity(n, n) - q * q.adjoint();
    let e = SymmetricEigen::new(hermitian_part(&proj));
    let idx: Vec<usize> = (0..n).filter(|&j| e.eigenvalues[j] > 0.5).collect();
    e.eigenvectors.select_columns(idx.iter())
}

pub fn svd_rank(m: &CMatrix, rel: f64) -> usize {
    Svd::new(m).rank(rel)
}

/// Moore–Penrose inverse, relative cutoff.
pub fn pinv(m: &CMatrix, rel: f64) -> CMatrix {
    pinv_scaled(m, rel, 0.0)
}

/// Pseudo-inverse discarding singular values below `rel·max(σ_max, scale)`.
pub fn pinv_scaled(m: &CMatrix, rel: f64, scale: f64) -> CMatrix {
    let svd = Svd::new(m);
    let cut = rel * svd.top().max(scale);
    let mut out = CMatrix::zeros(m.ncols(), m.nrows());
    for (s, u, v) in svd.kept(cut) {
        out += (v * u.adjoint()).unscale(*s);
    }
    out
}

pub fn eigenvalues(h: &CMatrix) -> Vec<f64> {
    if h.is_empty() {
        return Vec::new();
    }
    let mut v: Vec<f64> = SymmetricEigen::new(hermitian_part(h)).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eig(h: &CMatrix) -> f64 {
    eigenvalues(h).first().copied().unwrap_or(0.0)
}

pub fn op_norm(m: &CMatrix) -> f64 {
    Svd::new(m).top()
}

pub fn fro(m: &CMatrix) -> f64 {
    m.norm()
}

/// `H^{1/2}` of a PSD matrix; eigenvalues below `1e-10·max|λ|` are set to 0.
pub fn sqrt_psd(h: &CMatrix) -> CMatrix {
    let n = h.nrows();
    if n == 0 {
        return h.clone();
    }
    let e = SymmetricEigen::new(hermitian_part(h));
    let cut = 1e-10 * e.eigenvalues.amax();
    let mut v = e.eigenvectors.clone();
    for j in 0..n {
        let s = if e.eigenvalues[j] > cut { e.eigenvalues[j].sqrt() } else { 0.0 };
        for z in v.column_mut(j).iter_mut() {
            *z *= s;
        }
    }
    &v * e.eigenvectors.adjoint()
}

/// `A ≤ B` with the smallest eigenvalue of `B − A` at least
/// `−tol·max(1, ‖A‖, ‖B‖)`.
pub fn leq(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    let scale = 1f64.max(op_norm(a)).max(op_norm(b));
    min_eig(&(b - a)) >= -tol * scale
}

/// Orthonormal basis of `(ran D)⊥`.
pub fn complement(d: &CMatrix) -> CMatrix {
    orthogonal_complement(&Svd::new(d).left(1e-12))
}

/// Orthonormal basis of `ker M`.
pub fn null_space(m: &CMatrix) -> CMatrix {
    orthogonal_complement(&Svd::new(m).right(1e-12))
}

pub fn scale_factor(rng: &mut Rng) -> f64 {
    10f64.powf(4.0 * rng.uniform() - 2.0)
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub op: PartialOperator,
    /// A positive matrix the operator was cut from (extendible case) or the
    /// positive part before the obstruction was added.
    pub a_true: CMatrix,
    pub extendible: bool,
}

/// `Ad = A·D` for a random PSD `A` of random rank.
pub fn extendible_instance(rng: &mut Rng, max_n: usize) -> Instance {
    let n = rng.range(1, max_n);
    let d = rng.range(0, n);
    let rank = rng.range(0, n);
    let l = random_matrix(rng, n, rank);
    let a = hermitian_part(&(&l * l.adjoint())).scale(scale_factor(rng));
    let dom = random_matrix(rng, n, d);
    let action = &a * &dom;
    Instance {
        op: PartialOperator::new(dom, action).unwrap(),
        a_true: a,
        extendible: true,
    }
}

/// `Ad = A·D + Q·z·v†` with `Q ⊥ ran D` and `v ∈ ker(D†AD)`: the Gram matrix
/// is unchanged but `Ad·v ≠ 0`.
pub fn non_extendible_instance(rng: &mut Rng, max_n: usize) -> Instance {
    let n = rng.range(2, max_n);
    let d = rng.range(1, n - 1);
    let rank = rng.range(0, d - 1);
    let scale = scale_factor(rng);
    let l = random_matrix(rng, n, rank);
    let a = hermitian_part(&(&l * l.adjoint())).scale(scale);
    let dom = random_matrix(rng, n, d);
    let kernel = null_space(&(l.adjoint() * &dom));
    let v = &kernel * random_vector(rng, kernel.ncols());
    let v = &v / c(v.norm(), 0.0);
    let q = complement(&dom);
    let z = &q * random_vector(rng, q.ncols());
    let action = &a * &dom + (&z * v.adjoint()).scale(scale.sqrt() * (0.2 + rng.uniform()));
    Instance {
        op: PartialOperator::new(dom, action).unwrap(),
        a_true: a,
        extendible: false,
    }
}

pub fn any_instance(rng: &mut Rng, max_n: usize) -> Instance {
    if rng.coin(0.5) {
        extendible_instance(rng, max_n)
    } else {
        non_extendible_instance(rng, max_n)
    }
}

/// `Ad·G⁺·Ad†` computed with the reference pseudo-inverse.
pub fn reference_an(op: &PartialOperator) -> CMatrix {
    let g = op.domain().adjoint() * op.action();
    let scale = fro(op.domain()) * fro(op.action());
    hermitian_part(&(op.action() * pinv_scaled(&hermitian_part(&g), 1e-10, scale) * op.action().adjoint()))
}

/// Extensions of `a_true` obtained by adding a PSD matrix supported on
/// `(ran D)⊥`.
pub fn orthogonal_extension(rng: &mut Rng, inst: &Instance) -> CMatrix {
    let q = complement(inst.op.domain());
    let k = q.ncols();
    let r = if k == 0 { 0 } else { rng.range(0, k) };
    let l = random_matrix(rng, k, r);
    let s = hermitian_part(&(&l * l.adjoint())).scale(scale_factor(rng));
    hermitian_part(&(&inst.a_true + &q * s * q.adjoint()))
}

/// Largest `|⟨Ax, y⟩|² / ⟨Ax, x⟩` over `samples` random domain vectors,
/// together with the value at the reference stationary point
/// `c = G⁺·Ad†y`.
pub fn ellipsoid_oracle(rng: &mut Rng, op: &PartialOperator, y: &CVector, samples: usize) -> (f64, f64) {
    let d = op.d();
    if d == 0 {
        return (0.0, 0.0);
    }
    let g = hermitian_part(&(op.domain().adjoint() * op.action()));
    let row = y.adjoint() * op.action();
    let gnorm = op_norm(&g);
    let ratio = |cv: &CVector| {
        let form = (cv.adjoint() * &g * cv)[(0, 0)].re;
        if form <= 1e-12 * gnorm * cv.norm_squared() {
            return 0.0;
        }
        (&row * cv)[(0, 0)].norm_sqr() / form
    };
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        best = best.max(ratio(&random_vector(rng, d)));
    }
    let v = op.action().adjoint() * y;
    let stationary = pinv(&g, 1e-10) * v;
    (best, ratio(&stationary))
}

pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / scale.max(f64::MIN_POSITIVE)
    }
}
