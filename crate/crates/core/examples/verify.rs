//! Runs the verification suites, then again with a broken constructor.

use quadfloor::gw::{TildeElement, UnivElement};
use quadfloor::local_factors::FactorTable;
use quadfloor::suite::{run_suite, SuiteOptions, SUITE_NAMES};

fn flipped_type_a(m: u64, j: usize, s: usize) -> quadfloor::Result<TildeElement> {
    let good = quadfloor::local_factors::type_a_factor(m, j, s)?;
    let mut bad = TildeElement::zero(s);
    for (vars, c) in good.terms() {
        bad.add_term(vars, if vars == 0 { c } else { UnivElement::ZERO - c });
    }
    Ok(bad)
}

fn main() -> quadfloor::Result<()> {
    let options = SuiteOptions::default();
    for name in SUITE_NAMES {
        let r = run_suite(name, &options)?;
        println!(
            "{name:<12} {:>4} checks  {}",
            r.checks_run,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }

    let broken = SuiteOptions {
        table: FactorTable {
            type_a: flipped_type_a,
            ..FactorTable::default()
        },
        ..options
    };
    let r = run_suite("all", &broken)?;
    println!(
        "broken build: pass={} first failure {:?}",
        r.pass, r.first_failure
    );
    Ok(())
}
