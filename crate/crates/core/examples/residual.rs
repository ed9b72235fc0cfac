//! Wall-crossing differences reduced to the residual ring F2[eps].

use quadfloor::floor::MergeConfiguration;
use quadfloor::wallcross::residual_report;

fn main() -> quadfloor::Result<()> {
    let shifts = [
        (vec![1], vec![2]),
        (vec![1, 4], vec![1, 5]),
        (vec![2, 4, 6], vec![2, 4, 7]),
    ];
    for (a, b) in shifts {
        let from = MergeConfiguration::new(8, a)?;
        let to = MergeConfiguration::new(8, b)?;
        let r = residual_report(3, &from, &to)?;
        println!(
            "{from} -> {to}: residual {}  top {:?}  base {:?}  transfers {}  pass {}",
            r.residual_delta,
            r.top,
            r.base_case,
            r.transfers.len(),
            r.pass
        );
    }
    Ok(())
}
