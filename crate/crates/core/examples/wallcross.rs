//! Moving one merged pair by a single position leaves the count unchanged.

use quadfloor::floor::MergeConfiguration;
use quadfloor::wallcross::{delta_count, sweep_unit_shifts, wallcross_report, FieldSweep};

fn main() -> quadfloor::Result<()> {
    let from = MergeConfiguration::new(11, vec![2])?;
    let to = MergeConfiguration::new(11, vec![3])?;
    let delta = delta_count(4, &from, &to)?;
    println!("d=4 {from} -> {to}: delta = {delta}");

    let r = wallcross_report(4, &from, &to, &FieldSweep::default())?;
    println!(
        "universal coefficient {} (n1={}, n2={}, m={})",
        r.c, r.n1, r.n2, r.m
    );
    println!(
        "checks: {}",
        serde_json::to_string(&r.checks).expect("json")
    );

    for d in 2..=3 {
        for s in 0..=(3 * d as usize - 1) / 2 {
            let reports = sweep_unit_shifts(d, s, &FieldSweep::default())?;
            let ok = reports.iter().filter(|r| r.pass).count();
            println!("d={d} s={s}: {ok}/{} shifts pass", reports.len());
        }
    }
    Ok(())
}
