//! Homology of the branched double cover of a fiber line and the braid
//! action on it.
//!
//! A fiber with `n` branch points has first homology of rank `n - 1`,
//! spanned by cycles `c_0 .. c_{n-2}`; `c_i` lies over the arc between the
//! `i`-th and `(i+1)`-th branch points in the sorted strand order.  The
//! intersection form is the antisymmetric tridiagonal `J` with
//! `<c_i, c_{i+1}> = 1`.  A positive braid generator (counterclockwise half
//! twist of strands `i` and `i+1`) acts by the transvection
//! `x -> x - <x, c_i> c_i`; the sign is fixed by the orientation convention
//! that makes all the neighbouring basis pairings `+1`.

use num_traits::Signed;

use crate::error::{Error, Result};

/// One crossing in a braid word: the generator index and its direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BraidLetter {
    /// Generator index in `0 .. n-1`, swapping strands `gen` and `gen + 1`.
    pub gen: usize,
    pub inverse: bool,
}

impl BraidLetter {
    pub fn new(gen: usize) -> Self {
        BraidLetter {
            gen,
            inverse: false,
        }
    }

    pub fn inv(gen: usize) -> Self {
        BraidLetter { gen, inverse: true }
    }
}

/// An integral automorphism of fiber homology, stored with its inverse so
/// composition and inversion stay exact.
#[derive(Clone, PartialEq, Eq)]
pub struct HomologyAction {
    fwd: Vec<Vec<i64>>,
    bwd: Vec<Vec<i64>>,
}

fn mat_identity(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    let mut out = vec![vec![0i64; r]; r];
    for i in 0..r {
        for k in 0..r {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..r {
                out[i][j] = out[i][j]
                    .checked_add(a[i][k].checked_mul(b[k][j]).expect("overflow"))
                    .expect("overflow in homology action");
            }
        }
    }
    out
}

fn mat_apply(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(&m, &v)| m * v).sum())
        .collect()
}

impl HomologyAction {
    pub fn identity(rank: usize) -> Self {
        HomologyAction {
            fwd: mat_identity(rank),
            bwd: mat_identity(rank),
        }
    }

    /// Build from an explicit matrix, which must be invertible over the
    /// integers.
    pub fn from_matrix(fwd: Vec<Vec<i64>>) -> Result<Self> {
        let r = fwd.len();
        for row in &fwd {
            if row.len() != r {
                return Err(Error::input("homology action matrix is not square"));
            }
        }
        let m = crate::exact::IntMatrix::from_rows(fwd.clone());
        let (d, u, v) = m.snf();
        let mut dsign = crate::exact::IntMatrix::zero(r, r);
        for i in 0..r {
            let di = d.get(i, i).clone();
            if di.abs() != crate::exact::Int::from(1) {
                return Err(Error::input(
                    "homology action matrix is not invertible over the integers",
                ));
            }
            dsign.set(i, i, di);
        }
        // m = u^{-1} d v^{-1}, so m^{-1} = v d^{-1} u = v d u for d = +-1.
        let inv = v.mul(&dsign).mul(&u);
        let mut bwd = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                bwd[i][j] = i64::try_from(inv.get(i, j)).expect("inverse entry overflow");
            }
        }
        Ok(HomologyAction { fwd, bwd })
    }

    pub fn rank(&self) -> usize {
        self.fwd.len()
    }

    pub fn matrix(&self) -> &Vec<Vec<i64>> {
        &self.fwd
    }

    /// `self` after `first`: the returned action applies `first`, then `self`.
    pub fn after(&self, first: &HomologyAction) -> HomologyAction {
        HomologyAction {
            fwd: mat_mul(&self.fwd, &first.fwd),
            bwd: mat_mul(&first.bwd, &self.bwd),
        }
    }

    pub fn inverse(&self) -> HomologyAction {
        HomologyAction {
            fwd: self.bwd.clone(),
            bwd: self.fwd.clone(),
        }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        mat_apply(&self.fwd, x)
    }

    pub fn apply_inverse(&self, x: &[i64]) -> Vec<i64> {
        mat_apply(&self.bwd, x)
    }

    pub fn is_identity(&self) -> bool {
        self.fwd == mat_identity(self.rank())
    }

    /// Composition with the covering involution, which is `-1` on the
    /// homology of a branched double cover.
    pub fn negated(&self) -> HomologyAction {
        let neg = |m: &[Vec<i64>]| m.iter().map(|r| r.iter().map(|&v| -v).collect()).collect();
        HomologyAction {
            fwd: neg(&self.fwd),
            bwd: neg(&self.bwd),
        }
    }
}

impl std::fmt::Debug for HomologyAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.fwd)
    }
}

/// The homological model of a fiber with `n` branch points.
#[derive(Clone, Copy, Debug)]
pub struct FiberModel {
    n: usize,
}

impl FiberModel {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!(
                "a fiber needs at least two branch points, got {n}"
            )));
        }
        Ok(FiberModel { n })
    }

    pub fn branch_points(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// The intersection matrix `J`: antisymmetric, `J[i][i+1] = 1`.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut j = vec![vec![0i64; r]; r];
        for i in 0..r.saturating_sub(1) {
            j[i][i + 1] = 1;
            j[i + 1][i] = -1;
        }
        j
    }

    /// `<x, y>` under the fiber intersection form.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let j = self.intersection_matrix();
        let jy = mat_apply(&j, y);
        x.iter().zip(&jy).map(|(&a, &b)| a * b).sum()
    }

    /// The basis cycle `c_i`.
    pub fn basis_cycle(&self, i: usize) -> Vec<i64> {
        assert!(i < self.rank(), "cycle index out of range");
        let mut c = vec![0i64; self.rank()];
        c[i] = 1;
        c
    }

    /// Action of one braid letter: the transvection along `c_gen`
    /// (`x -> x - <x, c_gen> c_gen` for a positive letter), or its inverse.
    pub fn letter_action(&self, letter: BraidLetter) -> HomologyAction {
        let r = self.rank();
        assert!(letter.gen < r, "braid generator out of range");
        let c = self.basis_cycle(letter.gen);
        let mut fwd = mat_identity(r);
        let mut bwd = mat_identity(r);
        for j in 0..r {
            let mut e = vec![0i64; r];
            e[j] = 1;
            let coeff = self.pair(&e, &c);
            // fwd: e_j -> e_j - coeff * c ; columns of the matrix
            fwd[letter.gen][j] -= coeff * c[letter.gen];
            bwd[letter.gen][j] += coeff * c[letter.gen];
        }
        if letter.inverse {
            HomologyAction {
                fwd: bwd,
                bwd: fwd,
            }
        } else {
            HomologyAction { fwd, bwd }
        }
    }

    /// Action of a braid word; the first letter acts first.
    pub fn word_action(&self, word: &[BraidLetter]) -> HomologyAction {
        let mut acc = HomologyAction::identity(self.rank());
        for &letter in word {
            acc = self.letter_action(letter).after(&acc);
        }
        acc
    }

    /// Vanishing cycle of a critical point reached by transporting along a
    /// path whose accumulated braid word is `word`, where the colliding
    /// branch points are adjacent strands `(pair, pair + 1)` at the end of
    /// the path: the cycle `A(word)^{-1} c_pair`, sign-normalized so its
    /// first nonzero coordinate is positive.
    pub fn vanishing_cycle(&self, word: &[BraidLetter], pair: usize) -> Vec<i64> {
        let a = self.word_action(word);
        let c = self.basis_cycle(pair);
        canonical_sign(a.apply_inverse(&c))
    }
}

/// Flip the sign so the first nonzero coordinate is positive.
pub fn canonical_sign(mut x: Vec<i64>) -> Vec<i64> {
    if let Some(first) = x.iter().find(|&&v| v != 0) {
        if *first < 0 {
            for v in &mut x {
                *v = -*v;
            }
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(i: usize) -> BraidLetter {
        BraidLetter::new(i)
    }

    #[test]
    fn transvection_matrices_for_five_points() {
        let fib = FiberModel::new(5).unwrap();
        let t1 = fib.letter_action(sigma(1));
        // c_0 -> c_0 - c_1, c_2 -> c_2 + c_1, c_1 and c_3 fixed.
        assert_eq!(t1.apply(&[1, 0, 0, 0]), vec![1, -1, 0, 0]);
        assert_eq!(t1.apply(&[0, 0, 1, 0]), vec![0, 1, 1, 0]);
        assert_eq!(t1.apply(&[0, 1, 0, 0]), vec![0, 1, 0, 0]);
        assert_eq!(t1.apply(&[0, 0, 0, 1]), vec![0, 0, 0, 1]);
    }

    #[test]
    fn braid_relations_hold() {
        for n in [3usize, 4, 5, 6, 7] {
            let fib = FiberModel::new(n).unwrap();
            for i in 0..fib.rank().saturating_sub(1) {
                let a = fib.word_action(&[sigma(i), sigma(i + 1), sigma(i)]);
                let b = fib.word_action(&[sigma(i + 1), sigma(i), sigma(i + 1)]);
                assert_eq!(a, b, "braid relation failed at n={n}, i={i}");
            }
            for i in 0..fib.rank() {
                for j in 0..fib.rank() {
                    if i.abs_diff(j) >= 2 {
                        let a = fib.word_action(&[sigma(i), sigma(j)]);
                        let b = fib.word_action(&[sigma(j), sigma(i)]);
                        assert_eq!(a, b, "distant generators must commute");
                    }
                }
            }
        }
    }

    #[test]
    fn action_preserves_intersection_form() {
        let fib = FiberModel::new(5).unwrap();
        let word = [
            sigma(0),
            sigma(2),
            BraidLetter::inv(1),
            sigma(3),
            sigma(1),
            BraidLetter::inv(0),
        ];
        let a = fib.word_action(&word);
        for i in 0..fib.rank() {
            for j in 0..fib.rank() {
                let mut ei = vec![0i64; fib.rank()];
                let mut ej = vec![0i64; fib.rank()];
                ei[i] = 1;
                ej[j] = 1;
                assert_eq!(
                    fib.pair(&a.apply(&ei), &a.apply(&ej)),
                    fib.pair(&ei, &ej)
                );
            }
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let fib = FiberModel::new(6).unwrap();
        let word = [sigma(0), sigma(3), sigma(2), BraidLetter::inv(4), sigma(1)];
        let a = fib.word_action(&word);
        assert!(a.after(&a.inverse()).is_identity());
        assert!(a.inverse().after(&a).is_identity());
        // letter followed by its inverse is trivial
        let w2 = [sigma(2), BraidLetter::inv(2)];
        assert!(fib.word_action(&w2).is_identity());
    }

    #[test]
    fn full_twist_on_five_strands_is_minus_identity() {
        // The full twist of five strands acts on the double-cover homology
        // as the hyperelliptic involution.
        let fib = FiberModel::new(5).unwrap();
        let mut word = Vec::new();
        for _ in 0..5 {
            word.extend([sigma(0), sigma(1), sigma(2), sigma(3)]);
        }
        let a = fib.word_action(&word);
        let minus_one: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { -1 } else { 0 }).collect())
            .collect();
        assert_eq!(a.matrix(), &minus_one);
    }

    #[test]
    fn one_fifth_rotation_word_has_order_ten() {
        // The rotation-by-one-position braid: its action is of order 10 with
        // fifth power the hyperelliptic involution, and has no fixed vectors.
        let fib = FiberModel::new(5).unwrap();
        let delta = fib.word_action(&[sigma(0), sigma(1), sigma(2), sigma(3)]);
        let mut p = HomologyAction::identity(4);
        for _ in 0..5 {
            p = delta.after(&p);
        }
        assert!(!p.is_identity());
        let mut sq = p.after(&p);
        assert!(sq.is_identity());
        // No eigenvalue 1: delta - 1 has full rank, so only 0 is fixed.
        for v in [[1i64, 0, 0, 0], [0, 1, 0, 0], [1, 1, 1, 1]] {
            assert_ne!(delta.apply(&v), v);
        }
        sq = delta.after(&delta);
        assert_ne!(sq.matrix(), delta.matrix());
    }

    #[test]
    fn vanishing_cycle_of_trivial_transport() {
        let fib = FiberModel::new(5).unwrap();
        assert_eq!(fib.vanishing_cycle(&[], 2), vec![0, 0, 1, 0]);
        // Sign canonicalization flips a negative leading coordinate.
        assert_eq!(canonical_sign(vec![0, -2, 1]), vec![0, 2, -1]);
    }

    #[test]
    fn vanishing_cycle_transport_matches_inverse_action() {
        let fib = FiberModel::new(5).unwrap();
        let word = [sigma(1), sigma(2), BraidLetter::inv(0)];
        let a = fib.word_action(&word);
        let vc = fib.vanishing_cycle(&word, 3);
        // Transporting the cycle forward along the word recovers +-c_3.
        let fwd = a.apply(&vc);
        let c3 = fib.basis_cycle(3);
        assert!(fwd == c3 || fwd.iter().zip(&c3).all(|(&x, &y)| x == -y));
    }

    #[test]
    fn two_point_fiber_has_rank_one_trivial_pairing() {
        let fib = FiberModel::new(2).unwrap();
        assert_eq!(fib.rank(), 1);
        assert_eq!(fib.pair(&[1], &[1]), 0);
        let a = fib.word_action(&[sigma(0)]);
        assert!(a.is_identity());
    }
}
