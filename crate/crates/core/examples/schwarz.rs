//! ‖Σ A_j x_j‖² ≤ ‖Σ A_j‖ · Σ <A_j x_j, x_j> for positive A_j.

use kvn::random::{random_psd, random_vector, Rng};
use kvn::schwarz::{minimal_constant_estimate, schwarz_gap};
use kvn::ToleranceConfig;

fn main() -> kvn::Result<()> {
    let cfg = ToleranceConfig::default();
    let mut rng = Rng::seeded(11);
    let ops: Vec<_> = (0..3).map(|_| random_psd(&mut rng, 4, 2)).collect();
    for _ in 0..3 {
        let xs: Vec<_> = (0..3).map(|_| random_vector(&mut rng, 4)).collect();
        let g = schwarz_gap(&ops, &xs, &cfg)?;
        println!("lhs {:10.4}  rhs {:10.4}  ratio {:.4}", g.lhs, g.rhs, g.lhs / g.rhs);
    }
    let est = minimal_constant_estimate(&ops, 500, 3, &cfg)?;
    let g = schwarz_gap(&ops, &[random_vector(&mut rng, 4), random_vector(&mut rng, 4), random_vector(&mut rng, 4)], &cfg)?;
    println!("best constant: estimated {est:.8}, exact {:.8}", g.constant);
    Ok(())
}
