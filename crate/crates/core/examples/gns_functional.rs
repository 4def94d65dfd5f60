//! Extending a positive functional from a left ideal of M₂(ℂ) to the whole
//! algebra, and the largest extension below tr.

use kvn::algebra::{extend_functional, f_max, gns, is_hilbert_bounded, LeftIdeal};
use kvn::fixtures::{m2_algebra, m2_column_ideal, m2_vector_state, nilpotent_algebra};
use kvn::linalg::real_vector;
use kvn::ToleranceConfig;

fn main() -> kvn::Result<()> {
    let cfg = ToleranceConfig::default();
    let alg = m2_algebra();
    let ideal = m2_column_ideal();
    let f = m2_vector_state();

    let data = gns(&alg, &ideal, &f, &cfg)?;
    println!("GNS space dimension {}, residual {:.1e}", data.r, data.residuals(&alg).max());
    let f_n = extend_functional(&alg, &ideal, &f, &cfg)?;
    println!("f_N on E11, E12, E21, E22: {:?}", f_n.iter().map(|z| z.re).collect::<Vec<_>>());

    let trace = real_vector(&[1.0, 0.0, 0.0, 1.0]);
    let top = f_max(&alg, &ideal, &f, &trace, &cfg)?;
    println!("f_max below tr:             {:?}", top.iter().map(|z| z.re).collect::<Vec<_>>());

    // positive and admissible, but no bound ‖f(x*a)‖² ≤ M f(a*a)
    let (nil, eps) = nilpotent_algebra();
    let h = is_hilbert_bounded(&nil, &eps, &real_vector(&[1.0]), &cfg)?;
    println!("C[ε]/(ε²), f(ε) = 1: bounded = {}", h.bounded);

    let whole = LeftIdeal::whole(alg.dim());
    let g = gns(&alg, &whole, &trace, &cfg)?;
    println!("tr on all of M₂: GNS dimension {}", g.r);
    Ok(())
}
