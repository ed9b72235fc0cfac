//! Enriched counts of degree-3 curves for every merge configuration.

use quadfloor::floor::{
    enumerate_merge_configs, enumerate_merged_diagrams, floor_count, MergeConfiguration,
};
use quadfloor::gw::{specialize_field, FieldModel};

fn main() -> quadfloor::Result<()> {
    let d = 3;
    let n = 8;
    for s in 0..=2 {
        for cfg in enumerate_merge_configs(n, s) {
            let count = floor_count(d, &cfg)?;
            let sig = specialize_field(&count, FieldModel::Real, &vec![true; s])?;
            println!("{cfg:>8}  {count}   [{sig}]");
        }
    }

    let cfg = MergeConfiguration::new(n, vec![1, 4])?;
    println!("\nmerged diagrams for {cfg}:");
    for m in enumerate_merged_diagrams(d, &cfg)? {
        println!(
            "  {}  x{}  {}",
            m.representative,
            m.orbit_size,
            m.multiplicity()?
        );
    }
    Ok(())
}
