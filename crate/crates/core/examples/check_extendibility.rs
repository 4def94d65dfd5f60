//! Decide whether a partially defined positive operator has a positive
//! extension, and print the obstruction when it does not.

use kvn::fixtures::{halmos_counterexample, running_example};
use kvn::partial::{hilbert_bound, is_extendible};
use kvn::ToleranceConfig;

fn main() -> kvn::Result<()> {
    let cfg = ToleranceConfig::default();
    for (name, op) in [("running", running_example()), ("[[0,?],[1,?]]", halmos_counterexample())] {
        let report = is_extendible(&op, &cfg)?;
        println!("{name}: extendible = {}, M = {}", report.extendible, hilbert_bound(&op, &cfg)?);
        if let Some(w) = report.witness {
            // ⟨Ax, x⟩ = 0 but ⟨Ax, y⟩ ≠ 0
            let show = |v: &kvn::CVector| v.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(", ");
            println!("  x coeffs = [{}]", show(&w.coeffs));
            println!("  y = [{}]", show(&w.y));
            println!("  <Ax, x> = {}, <Ax, y> = {}", w.form, w.pairing);
        }
    }
    Ok(())
}
