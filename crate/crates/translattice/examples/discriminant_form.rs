//! Discriminant forms of even binary lattices.
//!
//! The discriminant group `L*/L` of an even lattice carries a quadratic form
//! with values in `Q/2Z`; two lattices of the same signature lie in the same
//! genus exactly when their discriminant forms are isomorphic.  This example
//! prints the group structure and form values for the three classes of
//! determinant 55 and shows which pairs have isomorphic discriminant forms.
//!
//! Run with: `cargo run --example discriminant_form`

use translattice::lattice::{discform_isomorphic, BinaryForm, DiscriminantForm};

fn main() {
    let forms = [
        BinaryForm::from_entries(2, 1, 28).unwrap(),
        BinaryForm::from_entries(4, 1, 14).unwrap(),
        BinaryForm::from_entries(8, 3, 8).unwrap(),
    ];
    let discs: Vec<DiscriminantForm> = forms
        .iter()
        .map(|f| DiscriminantForm::from_gram(&f.gram_matrix()).expect("nondegenerate"))
        .collect();

    for (f, d) in forms.iter().zip(&discs) {
        let orders: Vec<String> = d.orders().iter().map(|o| o.to_string()).collect();
        println!("{f}: group Z/{}, invariant factors {orders:?}", d.group_order());
        // q on the generators of each cyclic factor, as elements of Q/2Z.
        for (i, _) in d.orders().iter().enumerate() {
            let mut gen = vec![num_bigint::BigInt::from(0); d.orders().len()];
            gen[i] = num_bigint::BigInt::from(1);
            println!("  q(generator {i}) = {}", d.q_value(&gen));
        }
    }

    println!();
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            println!(
                "{} ~ {} as discriminant forms: {}",
                forms[i],
                forms[j],
                discform_isomorphic(&discs[i], &discs[j])
            );
        }
    }
}
