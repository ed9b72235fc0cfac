//! Anisotropy of the concrete Pfister forms over iterated Laurent fields.

use quadfloor::springer::{is_anisotropic, pfister_concrete, springer_split, DiagonalForm};

fn main() -> quadfloor::Result<()> {
    println!("{}", pfister_concrete(1));
    let (unit, uniformizer) = springer_split(&pfister_concrete(2), 2);
    println!("residues of Pi_2: {unit} and {uniformizer}");

    for s in 1..=8 {
        let p = pfister_concrete(s);
        println!("s={s} rank {:>3}: {:?}", p.rank(), is_anisotropic(&p));
    }
    for v in [[1, -1], [1, -2], [2, -8], [-1, -2]] {
        let f = DiagonalForm::rational(&v)?;
        println!("{f}: {:?}", is_anisotropic(&f));
    }
    // entries must be ±1 or ±2 up to squares
    println!(
        "<3, -12>: {}",
        DiagonalForm::rational(&[3, -12]).unwrap_err()
    );
    Ok(())
}
