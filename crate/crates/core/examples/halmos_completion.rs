//! Completing [[A11, A21†], [A21, ?]] to a positive matrix.

use kvn::interval::halmos_complete;
use kvn::linalg::from_real_rows;
use kvn::ToleranceConfig;

fn main() -> kvn::Result<()> {
    let cfg = ToleranceConfig::default();
    let cases = [
        ("identity corner", from_real_rows(&[&[1.0, 0.0], &[0.0, 4.0]]), from_real_rows(&[&[1.0, 3.0]])),
        ("rank-deficient", from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]), from_real_rows(&[&[2.0, 2.0]])),
        ("[[0,?],[1,?]]", from_real_rows(&[&[0.0]]), from_real_rows(&[&[1.0]])),
    ];
    for (name, a11, a21) in cases {
        let r = halmos_complete(&a11, &a21, &cfg)?;
        println!(
            "{name}: completable={} dominated={} (M={}) range={}",
            r.completable, r.dominated, r.constant, r.range_condition
        );
        if let Some(a22) = r.a22_min {
            println!("  smallest corner: {:?}", a22.iter().map(|z| z.re).collect::<Vec<_>>());
        }
    }
    Ok(())
}
