//! Braid monodromy of a branch curve, step by step.
//!
//! For one real embedding of the bundled problem this example computes the
//! critical values of the projection, plans lassos around the removed fiber
//! and approach paths into each critical value, tracks the branch points to
//! extract braid words, and prints the induced action on fiber homology and
//! the vanishing cycles.  It also writes an SVG of the planned paths.
//!
//! Run with: `cargo run --release --example braid_monodromy`

use std::path::Path;

use num_complex::Complex64;
use translattice::exact::{embed_f64, Embedding};
use translattice::fiber::FiberModel;
use translattice::geometry::{critical_values, plan_paths, PathKind, Tracker};
use translattice::pipeline::{plan_svg, ProblemFile};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data/double_plane_maximizing_sextic.toml");
    let problem = ProblemFile::from_path(&data).expect("bundled problem file parses");
    let emb = Embedding::Plus;

    let cv = critical_values(
        &problem.branch,
        &problem.fiber_var,
        &problem.base_var,
        &problem.removed,
        emb,
    )
    .expect("discriminant is squarefree");
    println!("critical values:");
    for v in &cv.values {
        println!("  {:+.5} {:+.5}i", v.re, v.im);
    }

    let removed: Vec<Complex64> = problem
        .removed
        .iter()
        .map(|r| Complex64::new(embed_f64(r, emb), 0.0))
        .collect();
    let plan = plan_paths(&cv.values, &removed).expect("special points are separated");
    println!("base point: {:+.5} {:+.5}i", plan.base.re, plan.base.im);

    let svg = plan_svg(&plan, &cv.values, &removed);
    let out = std::env::temp_dir().join("braid_monodromy_paths.svg");
    std::fs::write(&out, svg).expect("svg written");
    println!("path plan drawn to {}", out.display());

    // Sort strands along a slightly rotated direction; the vertical one is
    // non-generic for this curve.
    let tracker = Tracker::with_direction(
        &problem.branch,
        &problem.fiber_var,
        &problem.base_var,
        emb,
        Complex64::from_polar(1.0, 0.3),
    )
    .expect("leading coefficient does not vanish");
    let start = tracker.roots_at(plan.base).expect("fiber is unramified at the base");
    let fiber = FiberModel::new(tracker.strands()).expect("at least two branch points");
    println!("{} branch points per fiber, homology rank {}", tracker.strands(), fiber.rank());

    for path in &plan.paths {
        let outcome = tracker
            .track_polyline(&path.polyline, &start)
            .expect("tracking certified");
        let word: Vec<String> = outcome
            .word
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("s{}^-1", l.gen + 1)
                } else {
                    format!("s{}", l.gen + 1)
                }
            })
            .collect();
        match path.kind {
            PathKind::Loop { removed_index } => {
                // Transport around a removed fiber composes the braid action
                // with the deck involution of the double cover, hence the
                // sign flip.
                let action = fiber.word_action(&outcome.word).negated();
                println!("lasso around removed fiber {removed_index}:");
                println!("  braid word: {}", word.join(" "));
                println!("  homology action: {:?}", action.matrix());
            }
            PathKind::Approach { critical_index } => {
                println!("approach to critical value {critical_index}:");
                println!("  braid word along the way: {}", word.join(" "));
                // Walk half the remaining distance toward the critical value
                // until exactly one adjacent pair certifiably collapses.
                let mut braid = outcome.word;
                let mut roots = outcome.roots;
                let mut cur = *path.polyline.last().unwrap();
                let target = cv.values[critical_index];
                let pair = loop {
                    match tracker.certify_collision(&roots, 3.0) {
                        Ok(pair) => break pair,
                        Err(_) => {
                            let next = cur + (target - cur) * 0.5;
                            let more = tracker
                                .track_polyline(&[cur, next], &roots)
                                .expect("tracking certified");
                            braid.extend(more.word);
                            roots = more.roots;
                            cur = next;
                        }
                    }
                };
                let cycle = fiber.vanishing_cycle(&braid, pair);
                println!("  colliding pair: ({}, {})", pair + 1, pair + 2);
                println!("  vanishing cycle: {cycle:?}");
            }
        }
    }
}
