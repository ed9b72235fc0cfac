//! Arithmetic in the multi-affine coefficient ring and its field images.

use quadfloor::gw::{cascade_decompose, specialize_field, FieldModel, TildeElement, UnivElement};

fn main() -> quadfloor::Result<()> {
    // <2> + <2> x1 and <1> + <-1> x2 over two parameters
    let mut a = TildeElement::constant(2, UnivElement::TWO);
    a.add_term(0b01, UnivElement::TWO);
    let mut b = TildeElement::one(2);
    b.add_term(0b10, UnivElement::MINUS_ONE);

    let p = &a * &b;
    println!("a   = {a}");
    println!("b   = {b}");
    println!("a*b = {p}  (rank {})", p.rank());

    for model in [
        FieldModel::Real,
        FieldModel::Closed,
        FieldModel::finite(7)?,
        FieldModel::finite(17)?,
    ] {
        for assign in model.all_assignments(2) {
            println!(
                "{:>8} {:?}: {}",
                model.name(),
                assign,
                specialize_field(&p, model, &assign)?
            );
        }
    }

    let cascade = cascade_decompose(&p, &[2, 1])?;
    println!("top coefficient along (x2, x1): {}", cascade.top);
    for (q, s_q) in cascade.specialisations.iter().enumerate() {
        println!("S_{} = {s_q}", q + 1);
    }
    assert_eq!(cascade.reconstruct(2), p);
    println!("reconstruction ok");

    println!("{}", serde_json::to_string(&p).expect("json"));
    Ok(())
}
