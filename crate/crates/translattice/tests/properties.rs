//! Randomized property suites.
//!
//! Five families: braid-action algebra, Gauss-reduction invariance,
//! push-off independence of the flagship kernel Gram, loop cancellation,
//! and Smith-normal-form re-multiplication.

use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use translattice::chain::{ChainSystem, LoopChains, Perturbation, Thimble};
use translattice::exact::{Embedding, Int, IntMatrix};
use translattice::fiber::{BraidLetter, FiberModel};
use translattice::geometry::{critical_values, plan_paths, PathKind, Tracker};
use translattice::lattice::BinaryForm;
use translattice::pipeline::ProblemFile;

// ---------------------------------------------------------------- braids

fn letter_strategy(n: usize) -> impl Strategy<Value = BraidLetter> {
    (0..n - 1, any::<bool>()).prop_map(|(gen, inverse)| BraidLetter { gen, inverse })
}

fn word_strategy(n: usize) -> impl Strategy<Value = Vec<BraidLetter>> {
    prop::collection::vec(letter_strategy(n), 0..=30)
}

proptest! {
    /// The braid action preserves the skew intersection pairing of the
    /// fiber: it lands in the symplectic-like group of `J`.
    #[test]
    fn braid_action_preserves_fiber_pairing(
        n in 2usize..=9,
        seed in any::<u64>(),
    ) {
        let fib = FiberModel::new(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word: Vec<BraidLetter> = (0..rng.gen_range(0..=30))
            .map(|_| BraidLetter {
                gen: rng.gen_range(0..n - 1),
                inverse: rng.gen_bool(0.5),
            })
            .collect();
        let act = fib.word_action(&word);
        let j = fib.intersection_matrix();
        let r = fib.rank();
        for i in 0..r {
            for k in 0..r {
                let mut ei = vec![0i64; r];
                ei[i] = 1;
                let mut ek = vec![0i64; r];
                ek[k] = 1;
                prop_assert_eq!(fib.pair(&act.apply(&ei), &act.apply(&ek)), j[i][k]);
            }
        }
    }

    /// Adjacent generators satisfy the braid relation and distant ones
    /// commute, as actions on fiber homology.
    #[test]
    fn braid_relations_hold(n in 3usize..=9, i in 0usize..8, k in 0usize..8) {
        let fib = FiberModel::new(n).unwrap();
        let i = i % (n - 1);
        let k = k % (n - 1);
        if i + 1 < n - 1 {
            let lhs = fib.word_action(&[
                BraidLetter::new(i),
                BraidLetter::new(i + 1),
                BraidLetter::new(i),
            ]);
            let rhs = fib.word_action(&[
                BraidLetter::new(i + 1),
                BraidLetter::new(i),
                BraidLetter::new(i + 1),
            ]);
            prop_assert_eq!(lhs, rhs);
        }
        if i.abs_diff(k) >= 2 {
            let lhs = fib.word_action(&[BraidLetter::new(i), BraidLetter::new(k)]);
            let rhs = fib.word_action(&[BraidLetter::new(k), BraidLetter::new(i)]);
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// A word followed by its formal inverse acts as the identity.
    #[test]
    fn word_cancels_with_its_inverse(n in 2usize..=9, word in word_strategy(9)) {
        let fib = FiberModel::new(n).unwrap();
        let word: Vec<BraidLetter> = word
            .into_iter()
            .map(|l| BraidLetter { gen: l.gen % (n - 1), inverse: l.inverse })
            .collect();
        let mut round = word.clone();
        round.extend(word.iter().rev().map(|l| BraidLetter {
            gen: l.gen,
            inverse: !l.inverse,
        }));
        prop_assert!(fib.word_action(&round).is_identity());
    }
}

// ------------------------------------------------------------- reduction

/// A random product of elementary unimodular matrices.
fn random_unimodular(rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut u = IntMatrix::identity(2);
    for _ in 0..rng.gen_range(1..=8) {
        let s: i64 = rng.gen_range(-3..=3);
        let e = match rng.gen_range(0..3) {
            0 => IntMatrix::from_rows(vec![vec![1, s], vec![0, 1]]),
            1 => IntMatrix::from_rows(vec![vec![1, 0], vec![s, 1]]),
            _ => IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]),
        };
        u = u.mul(&e);
    }
    u
}

#[test]
fn gauss_reduction_is_a_class_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let seeds = [
        (40i64, -5i64, 2i64),
        (140, -55, 22),
        (2, 1, 28),
        (4, 1, 14),
        (8, 3, 8),
        (6, 0, 10),
    ];
    for (a, b, c) in seeds {
        let form = BinaryForm::from_entries(a, b, c).unwrap();
        let reference = form.reduce_gl2().unwrap().0.to_string();
        for _ in 0..200 {
            let u = random_unimodular(&mut rng);
            let moved = form.transformed(&u);
            assert_eq!(
                moved.reduce_gl2().unwrap().0.to_string(),
                reference,
                "[{a}, {b}, {c}] transformed by {u:?}"
            );
        }
    }
}

proptest! {
    /// The reduced form is reduced, even, equivalent to the input, and
    /// idempotent under reduction.
    #[test]
    fn reduction_postconditions(a in 1i64..40, b in -20i64..20, c in 1i64..40) {
        let (a, c) = (2 * a, 2 * c);
        prop_assume!(a * c - b * b > 0);
        let form = BinaryForm::from_gram(Int::from(a), Int::from(b), Int::from(c)).unwrap();
        let (red, u) = form.reduce_gl2().unwrap();
        let (ra, rb, rc) = red.gram();
        prop_assert!(BigInt::from(0) <= rb);
        prop_assert!(rb * BigInt::from(2) <= ra);
        prop_assert!(ra <= rc);
        prop_assert_eq!(form.transformed(&u).gram(), red.gram());
        prop_assert_eq!(red.reduce_gl2().unwrap().0.gram(), red.gram());
        prop_assert_eq!(red.det(), form.det());
    }
}

// ------------------------------------------------- flagship chain system

fn flagship_system() -> &'static ChainSystem {
    static SYSTEM: OnceLock<ChainSystem> = OnceLock::new();
    SYSTEM.get_or_init(|| {
        let data = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("data/double_plane_maximizing_sextic.toml");
        let problem = ProblemFile::from_path(&data).unwrap();
        let emb = Embedding::Plus;
        let cv = critical_values(
            &problem.branch,
            &problem.fiber_var,
            &problem.base_var,
            &problem.removed,
            emb,
        )
        .unwrap();
        let plan = plan_paths(&cv.values, &[Complex64::new(0.0, 0.0)]).unwrap();
        let tracker = Tracker::with_direction(
            &problem.branch,
            &problem.fiber_var,
            &problem.base_var,
            emb,
            Complex64::from_polar(1.0, 0.3),
        )
        .unwrap();
        let start = tracker.roots_at(plan.base).unwrap();
        let fib = FiberModel::new(tracker.strands()).unwrap();
        let mut loops = Vec::new();
        let mut thimbles = Vec::new();
        for path in &plan.paths {
            let out = tracker.track_polyline(&path.polyline, &start).unwrap();
            match path.kind {
                PathKind::Loop { .. } => loops.push(LoopChains {
                    out_germ: path.out_germ,
                    in_germ: path.in_germ.unwrap(),
                    monodromy: fib.word_action(&out.word).negated(),
                }),
                PathKind::Approach { critical_index } => {
                    let mut word = out.word;
                    let mut roots = out.roots;
                    let mut cur = *path.polyline.last().unwrap();
                    let pair = loop {
                        match tracker.certify_collision(&roots, 3.0) {
                            Ok(k) => break k,
                            Err(_) => {
                                let next = cur + (cv.values[critical_index] - cur) * 0.5;
                                let more = tracker.track_polyline(&[cur, next], &roots).unwrap();
                                word.extend(more.word);
                                roots = more.roots;
                                cur = next;
                            }
                        }
                    };
                    thimbles.push(Thimble {
                        germ: path.out_germ,
                        cycle: fib.vanishing_cycle(&word, pair),
                    });
                }
            }
        }
        ChainSystem::new(fib, loops, thimbles).unwrap()
    })
}

proptest! {
    /// The kernel Gram of the flagship chain system does not depend on the
    /// push-off direction or the connector sweep orientation.
    #[test]
    fn flagship_gram_is_push_off_independent(
        theta0 in 0.0..std::f64::consts::TAU,
        long_way in any::<bool>(),
    ) {
        let sys = flagship_system();
        let kernel = sys.homology_basis();
        let reference = sys.gram_on(&kernel, &sys.default_perturbation()).unwrap();
        match sys.gram_on(&kernel, &Perturbation { theta0, long_way }) {
            Ok(g) => prop_assert_eq!(g, reference),
            // The push-off may legitimately be refused when it coincides
            // with a path germ.
            Err(e) => prop_assert_eq!(e.exit_code(), 2),
        }
    }
}

// --------------------------------------------------------------- tracking

#[test]
fn planned_paths_cancel_with_their_reverses() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data/double_plane_maximizing_sextic.toml");
    let problem = ProblemFile::from_path(&data).unwrap();
    for emb in [Embedding::Plus, Embedding::Minus] {
        let cv = critical_values(
            &problem.branch,
            &problem.fiber_var,
            &problem.base_var,
            &problem.removed,
            emb,
        )
        .unwrap();
        let plan = plan_paths(&cv.values, &[Complex64::new(0.0, 0.0)]).unwrap();
        let tracker = Tracker::with_direction(
            &problem.branch,
            &problem.fiber_var,
            &problem.base_var,
            emb,
            Complex64::from_polar(1.0, 0.3),
        )
        .unwrap();
        let start = tracker.roots_at(plan.base).unwrap();
        let fib = FiberModel::new(tracker.strands()).unwrap();
        for path in &plan.paths {
            let mut round = path.polyline.clone();
            round.extend(path.polyline.iter().rev().skip(1));
            let out = tracker.track_polyline(&round, &start).unwrap();
            assert!(
                fib.word_action(&out.word).is_identity(),
                "word {:?} along a round trip is not trivial",
                out.word
            );
            for (a, b) in out.roots.iter().zip(&start) {
                assert!((a - b).norm() < 1e-6);
            }
        }
    }
}

// ------------------------------------------------------------------- snf

proptest! {
    /// `snf` returns unimodular `u`, `v` with `u * m * v` diagonal with
    /// divisibility down the diagonal, and the kernel re-multiplies to
    /// zero.
    #[test]
    fn snf_remultiplies(
        rows in 1usize..=5,
        cols in 1usize..=5,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, Int::from(rng.gen_range(-9i64..=9)));
            }
        }
        let (d, u, v) = m.snf();
        prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
        prop_assert_eq!(u.det().abs(), Int::from(1));
        prop_assert_eq!(v.det().abs(), Int::from(1));
        for i in 0..rows.min(cols).saturating_sub(1) {
            let a = d.get(i, i).clone();
            let b = d.get(i + 1, i + 1).clone();
            if a != Int::from(0) {
                prop_assert_eq!(b % a, Int::from(0), "divisibility down the diagonal");
            }
        }
        let kernel = m.integer_kernel();
        if kernel.cols() > 0 {
            prop_assert!(m.mul(&kernel).is_zero());
        }
    }
}
