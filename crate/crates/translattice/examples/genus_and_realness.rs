//! Classification of even positive-definite binary lattices of a given
//! determinant: the full list of classes, their partition into genera, and
//! which classes are real (fixed by the Galois action, hence realizable by
//! surfaces conjugate to themselves).
//!
//! Run with: `cargo run --example genus_and_realness`

use num_bigint::BigInt;
use translattice::lattice::BinaryForm;

fn main() {
    for det in [55i64, 39, 20] {
        let det = BigInt::from(det);
        println!("determinant {det}");
        let classes = BinaryForm::enumerate_classes(&det);
        println!("  classes: {classes:?}");
        for (i, genus) in BinaryForm::genus_partition(&det).iter().enumerate() {
            println!("  genus {}: {genus:?}", i + 1);
        }
        for f in &classes {
            println!(
                "  {f} real: {}",
                f.is_real().expect("realness decision succeeds")
            );
        }
        println!();
    }
}
