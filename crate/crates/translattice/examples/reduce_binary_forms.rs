//! Gauss reduction of positive-definite even binary quadratic forms.
//!
//! A rank-2 even lattice is presented by its Gram matrix `[[a, b], [b, c]]`,
//! abbreviated `[a, b, c]`.  Reduction finds the unique representative with
//! `0 <= 2b <= a <= c` in the unoriented (GL2) class, together with the
//! unimodular change of basis that realizes it.
//!
//! Run with: `cargo run --example reduce_binary_forms`

use translattice::lattice::BinaryForm;

fn main() {
    for (a, b, c) in [(40, -5, 2), (140, -55, 22), (2, 1, 28), (34, 13, 6)] {
        let form = BinaryForm::from_entries(a, b, c).expect("positive definite even form");
        let (reduced, u) = form.reduce_gl2().expect("reduction succeeds");
        let (ra, rb, rc) = reduced.gram();
        println!("[{a}, {b}, {c}]  ->  [{ra}, {rb}, {rc}]");
        let rows: Vec<Vec<String>> = (0..2)
            .map(|i| (0..2).map(|j| u.get(i, j).to_string()).collect())
            .collect();
        println!("  change of basis {rows:?}, det {}", u.det());
        // The reduction certificate: transforming by `u` gives the reduced
        // Gram back exactly.
        assert_eq!(form.transformed(&u).gram(), reduced.gram());
    }
}
