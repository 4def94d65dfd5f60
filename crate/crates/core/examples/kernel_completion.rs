//! Smallest positive-definite kernel on a finite set extending partial data.

use kvn::fixtures::running_example;
use kvn::kernel::{extend_kernel, operator_from_kernel, KernelProblem};
use kvn::linalg::from_real_rows;
use kvn::partial::PartialOperator;
use kvn::ToleranceConfig;

fn main() -> kvn::Result<()> {
    let cfg = ToleranceConfig::default();

    // scalar kernel on Z = {0, 1}, known on the function δ₀
    let k = extend_kernel(&KernelProblem::new(2, 1, running_example())?, &cfg)?;
    for s in 0..2 {
        for t in 0..2 {
            println!("K({s},{t}) = {}", k.block(s, t)[(0, 0)].re);
        }
    }

    // ℂ²-valued kernel on Z = {0, 1}, known on u = (e1, e1)
    let u = from_real_rows(&[&[1.0], &[0.0], &[1.0], &[0.0]]);
    let au = from_real_rows(&[&[2.0], &[0.0], &[2.0], &[0.0]]);
    let k = extend_kernel(&KernelProblem::new(2, 2, PartialOperator::new(u, au)?)?, &cfg)?;
    let op = operator_from_kernel(&k);
    println!("operator of the minimal kernel:");
    for i in 0..4 {
        println!("  {:?}", (0..4).map(|j| op[(i, j)].re).collect::<Vec<_>>());
    }
    Ok(())
}
