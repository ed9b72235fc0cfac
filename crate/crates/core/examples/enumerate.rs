//! Marked floor diagrams and the complex count they recover.

use quadfloor::floor::{enumerate_diagrams, enumerate_shapes, kontsevich_nd};

fn main() -> quadfloor::Result<()> {
    let d: u32 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);

    let shapes = enumerate_shapes(d)?;
    println!("degree {d}: {} diagram shapes", shapes.len());
    for s in &shapes {
        println!("  elevators {:?} ends {:?}", s.elevators, s.ends);
    }

    let marked = enumerate_diagrams(d, 1_000_000)?;
    let total: u64 = marked.iter().map(|m| m.complex_multiplicity()).sum();
    println!(
        "{} marked diagrams, weighted total {total}, N_{d} = {}",
        marked.len(),
        kontsevich_nd(d)
    );
    for m in marked.iter().take(8) {
        println!("  {m}  mult {}", m.complex_multiplicity());
    }
    Ok(())
}
