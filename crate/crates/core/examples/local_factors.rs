//! Closed-form local factors and the identity families behind them.

use quadfloor::check::all_pass;
use quadfloor::local_factors::{
    elevator_square, identity_checks, twin_tree_factor, type_a_factor, type_r_factor, FactorTable,
    TwinTreeDescriptor,
};

fn main() -> quadfloor::Result<()> {
    for m in 1..=5 {
        println!("type A, m={m}: {}", type_a_factor(m, 1, 1)?);
    }
    println!("beta_2 over 3 parameters: {}", type_r_factor(2, 3)?);
    for m in [2, 3, 7] {
        println!("(m^A1)^2 at m={m}: {}", elevator_square(m)?);
    }

    let tree = TwinTreeDescriptor::new(1, vec![], vec![1, 2])?;
    println!("two-point twin tree: {}", twin_tree_factor(&tree, 2)?);
    let big = TwinTreeDescriptor::new(3, vec![(2, 1)], (1..=7).collect())?;
    let f = twin_tree_factor(&big, 7)?;
    println!(
        "seven-point twin tree: rank {}, {} monomials",
        f.rank(),
        f.terms().count()
    );

    let checks = identity_checks(&FactorTable::default(), 60);
    println!(
        "{} identity checks, all pass: {}",
        checks.len(),
        all_pass(&checks)
    );
    Ok(())
}
