//! The smallest positive extension of a random partial operator, checked
//! against a few other extensions.

use kvn::krein::{an_norm, krein_von_neumann, qform_shift, qform_sup};
use kvn::linalg::{hermitian_part, loewner_leq};
use kvn::partial::{hilbert_bound, PartialOperator};
use kvn::random::{random_matrix, random_psd, random_vector, Rng};
use kvn::ToleranceConfig;

fn main() -> kvn::Result<()> {
    let cfg = ToleranceConfig::default();
    let mut rng = Rng::seeded(7);
    let (n, d) = (5, 2);
    let a = random_psd(&mut rng, n, 3);
    let dom = random_matrix(&mut rng, n, d);
    let op = PartialOperator::new(dom.clone(), &a * &dom)?;

    let kvn = krein_von_neumann(&op, &cfg)?;
    println!("rank of A_N: {}", kvn.factorization.rank);
    println!("‖A_N‖ = {:.6}, Hilbert bound = {:.6}", an_norm(&op, &cfg)?, hilbert_bound(&op, &cfg)?);
    println!("A itself dominates A_N: {}", loewner_leq(&kvn.a_n, &a, &cfg)?);

    // adding anything positive on (dom A)⊥ keeps an extension; A_N stays below
    for k in 0..3 {
        let p = random_psd(&mut rng, n, 1);
        let proj = &dom * (dom.adjoint() * &dom).try_inverse().unwrap() * dom.adjoint();
        let q = kvn::linalg::identity(n) - proj;
        let other = hermitian_part(&(&a + &q * p * &q));
        println!("extension {k}: A_N ≤ Ã is {}", loewner_leq(&kvn.a_n, &other, &cfg)?);
    }

    let y = random_vector(&mut rng, n);
    let direct = (y.adjoint() * &kvn.a_n * &y)[(0, 0)].re;
    println!(
        "<A_N y, y> = {direct:.6}, sup formula = {:.6}, shift formula = {:.6}",
        qform_sup(&op, &y, &cfg)?,
        qform_shift(&op, &y, &cfg)?
    );
    Ok(())
}
