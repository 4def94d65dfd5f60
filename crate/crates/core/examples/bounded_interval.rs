//! All positive extensions below a bound B form the interval [A_N, A_max].

use kvn::fixtures::running_example;
use kvn::interval::{a_max, in_interval, sample_extensions};
use kvn::linalg::diag_real;
use kvn::ToleranceConfig;

fn print(name: &str, m: &kvn::CMatrix) {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:8.4}", m[(i, j)].re)).collect();
        println!("{name:>6} {}", row.join(" "));
    }
}

fn main() -> kvn::Result<()> {
    let cfg = ToleranceConfig::default();
    let op = running_example();
    let b = diag_real(&[3.0, 3.0]);
    let r = a_max(&op, &b, &cfg)?;
    print("A_N", &r.a_n);
    print("A_max", &r.a_max);
    for (k, s) in sample_extensions(&op, &b, 3, 1, &cfg)?.iter().enumerate() {
        print(&format!("s{k}"), s);
        assert!(in_interval(&op, &b, s, &cfg)?);
    }
    match a_max(&op, &diag_real(&[0.5, 0.5]), &cfg) {
        Err(e) => println!("B = I/2: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
