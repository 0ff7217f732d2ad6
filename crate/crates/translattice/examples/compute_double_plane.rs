//! End-to-end computation of the transcendental lattice of a double plane.
//!
//! Loads the bundled problem file (a double cover of the plane branched
//! along a quintic over `Q(sqrt 5)`, with the fiber over `z = 0` removed),
//! runs the whole method for both real embeddings of the field, and prints
//! the lattice invariants of each.
//!
//! Run with: `cargo run --release --example compute_double_plane`

use std::path::Path;

use translattice::pipeline::{compute, ProblemFile};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data/double_plane_maximizing_sextic.toml");
    let problem = ProblemFile::from_path(&data).expect("bundled problem file parses");

    let t0 = std::time::Instant::now();
    let report = compute(&problem).expect("computation succeeds");
    let elapsed = t0.elapsed();

    println!("branch curve: {}", report.branch);
    println!("field: Q(sqrt {})", report.field_discriminant);
    for a in &report.assumptions {
        println!("assumption: {a}");
    }
    println!();

    for e in &report.embeddings {
        println!("embedding {}", e.embedding);
        println!("  critical values:");
        for c in &e.critical_values {
            println!("    {:+.5} {:+.5}i", c.re, c.im);
        }
        println!("  loop braid words: {:?}", e.loop_braid_words);
        println!("  loop monodromy: {:?}", e.monodromy_matrices);
        println!("  vanishing cycles: {:?}", e.vanishing_cycles);
        println!("  H2 rank: {}", e.h2_rank);
        println!("  kernel Gram: {:?}", e.gram);
        println!("  radical rank: {}", e.radical_rank);
        println!("  quotient Gram: {:?}", e.quotient_gram);
        println!("  reduced form: {:?}", e.reduced_form);
        println!("  defined over the rationals: {:?}", e.realness);
        println!("  genus: {:?}", e.genus);
        println!("  discriminant group: {:?}", e.discriminant_group);
        println!();
    }
    println!("elapsed: {elapsed:?}");
}
