//! A_N inherits the relations C†A = AB and B†A = AC from the partial operator.

use kvn::commutation::{check_intertwining, verify_commutation};
use kvn::linalg::{diag_real, from_real_rows};
use kvn::partial::PartialOperator;
use kvn::ToleranceConfig;

fn main() -> kvn::Result<()> {
    let cfg = ToleranceConfig::default();
    // dom A = span{e1, e2}, A = diag(2, 1) there; B = C diagonal leaves it invariant
    let dom = from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
    let op = PartialOperator::new(dom.clone(), diag_real(&[2.0, 1.0, 0.0]) * &dom)?;
    let b = diag_real(&[1.0, -2.0, 5.0]);
    let report = verify_commutation(&op, &b, &b, &cfg)?;
    println!(
        "hypotheses {}, residuals {:.1e} {:.1e}, conclusion {}",
        report.hypotheses_hold, report.residual_cb, report.residual_bc, report.conclusion_holds
    );

    // a shift moves e1 out of span{e1}
    let line = PartialOperator::new(from_real_rows(&[&[1.0], &[0.0]]), from_real_rows(&[&[1.0], &[0.0]]))?;
    let shift = from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
    let hyp = check_intertwining(&line, &shift, &shift.adjoint(), &cfg)?;
    println!("shift: holds = {}, failure = {:?}", hyp.holds, hyp.failure.map(|f| f.to_string()));
    Ok(())
}
