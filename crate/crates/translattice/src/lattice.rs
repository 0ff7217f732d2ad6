//! Even positive-definite binary lattices: Gauss reduction, realness,
//! discriminant forms, and genus classification.
//!
//! A binary form is stored by its Gram matrix `[[2a, b], [b, 2c]]` and
//! printed as the entry triple `[2a, b, 2c]`.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat, IntMatrix, Int, Rat};

/// An even binary quadratic lattice with Gram matrix `[[2a, b], [b, 2c]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    a: Int,
    b: Int,
    c: Int,
}

impl BinaryForm {
    /// Build from Gram entries `(g00, g01, g11)`; the diagonal must be even.
    pub fn from_gram(g00: Int, g01: Int, g11: Int) -> Result<Self> {
        if g00.is_odd() || g11.is_odd() {
            return Err(Error::input(format!(
                "lattice is not even: diagonal entries {g00}, {g11}"
            )));
        }
        Ok(BinaryForm {
            a: g00 / 2,
            b: g01,
            c: g11 / 2,
        })
    }

    pub fn from_entries(g00: i64, g01: i64, g11: i64) -> Result<Self> {
        BinaryForm::from_gram(Int::from(g00), Int::from(g01), Int::from(g11))
    }

    /// Gram entries `(g00, g01, g11)`.
    pub fn gram(&self) -> (Int, Int, Int) {
        (&self.a * 2, self.b.clone(), &self.c * 2)
    }

    pub fn gram_matrix(&self) -> IntMatrix {
        let (g00, g01, g11) = self.gram();
        IntMatrix::from_big_rows(vec![vec![g00, g01.clone()], vec![g01, g11]])
    }

    /// Determinant of the Gram matrix: `4ac - b^2`.
    pub fn det(&self) -> Int {
        Int::from(4) * &self.a * &self.c - &self.b * &self.b
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.det().is_positive()
    }

    /// Apply a basis change: Gram becomes `U^T G U`.
    pub fn transformed(&self, u: &IntMatrix) -> BinaryForm {
        let g = u.transpose().mul(&self.gram_matrix()).mul(u);
        BinaryForm::from_gram(
            g.get(0, 0).clone(),
            g.get(0, 1).clone(),
            g.get(1, 1).clone(),
        )
        .expect("congruence preserves evenness")
    }

    /// Gauss-reduce under `SL_2(Z)`: the result satisfies `-a < b <= a <= c`
    /// with `b >= 0` when `a = c`.  Returns the reduced form and the
    /// unimodular `U` with `U^T G U = G_reduced`.
    pub fn reduce_sl2(&self) -> Result<(BinaryForm, IntMatrix)> {
        if !self.is_positive_definite() {
            return Err(Error::input(format!(
                "form {self} is not positive definite"
            )));
        }
        let mut f = self.clone();
        let mut u = IntMatrix::identity(2);
        loop {
            if f.c < f.a {
                // (a, b, c) -> (c, -b, a) via [[0, -1], [1, 0]]
                let s = IntMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]);
                u = u.mul(&s);
                f = BinaryForm {
                    a: f.c.clone(),
                    b: -f.b.clone(),
                    c: f.a.clone(),
                };
                continue;
            }
            if f.b > f.a || f.b <= -f.a.clone() {
                // Translate b into (-a, a] with [[1, -k], [0, 1]]:
                // (a, b, c) -> (a, b - 2ka, c - kb + k^2 a)
                let two_a = &f.a * 2;
                let shifted = &f.b + &f.a - Int::one();
                let k = shifted.div_floor(&two_a);
                let t = IntMatrix::from_big_rows(vec![
                    vec![Int::one(), -k.clone()],
                    vec![Int::zero(), Int::one()],
                ]);
                u = u.mul(&t);
                f = f.transformed_half(&t);
                continue;
            }
            if f.a == f.c && f.b.is_negative() {
                let s = IntMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]);
                u = u.mul(&s);
                f = BinaryForm {
                    a: f.c.clone(),
                    b: -f.b.clone(),
                    c: f.a.clone(),
                };
                continue;
            }
            break;
        }
        debug_assert_eq!(self.transformed(&u), f);
        Ok((f, u))
    }

    /// Reduce under `GL_2(Z)`: additionally `b >= 0`.
    pub fn reduce_gl2(&self) -> Result<(BinaryForm, IntMatrix)> {
        let (f, u) = self.reduce_sl2()?;
        if f.b.is_negative() {
            let flip = IntMatrix::from_rows(vec![vec![1, 0], vec![0, -1]]);
            let g = BinaryForm {
                a: f.a,
                b: -f.b,
                c: f.c,
            };
            Ok((g, u.mul(&flip)))
        } else {
            Ok((f, u))
        }
    }

    fn transformed_half(&self, u: &IntMatrix) -> BinaryForm {
        self.transformed(u)
    }

    /// A positive-definite class is real (fixed by the nontrivial Galois
    /// action on CM points) exactly when its reduced form has `b = 0`,
    /// `b = a`, or `a = c`.
    pub fn is_real(&self) -> Result<bool> {
        let (f, _) = self.reduce_gl2()?;
        let strict = f.b.is_positive() && f.b < f.a && f.a < f.c;
        Ok(!strict)
    }

    /// Classes of even positive-definite binary forms with the given Gram
    /// determinant, one GL2-reduced representative each, sorted.
    pub fn enumerate_classes(det: &Int) -> Vec<BinaryForm> {
        let mut out = Vec::new();
        if !det.is_positive() {
            return out;
        }
        // Reduced: 0 <= b <= a <= c with 4ac - b^2 = det, so 3a^2 <= det.
        let mut a = Int::one();
        loop {
            if &(Int::from(3) * &a * &a) > det {
                break;
            }
            let mut b = Int::zero();
            while b <= a {
                let num = det + &b * &b;
                let den = Int::from(4) * &a;
                if (&num % &den).is_zero() {
                    let c = num / den;
                    if c >= a {
                        out.push(BinaryForm {
                            a: a.clone(),
                            b: b.clone(),
                            c,
                        });
                    }
                }
                b += 1;
            }
            a += 1;
        }
        out.sort_by_key(|f| (f.a.clone(), f.b.clone(), f.c.clone()));
        out
    }

    /// Partition the classes of the given determinant into genera.
    pub fn genus_partition(det: &Int) -> Vec<Vec<BinaryForm>> {
        let classes = BinaryForm::enumerate_classes(det);
        let mut groups: Vec<Vec<BinaryForm>> = Vec::new();
        'outer: for f in classes {
            for g in &mut groups {
                if same_genus(&g[0], &f).unwrap_or(false) {
                    g.push(f);
                    continue 'outer;
                }
            }
            groups.push(vec![f]);
        }
        groups
    }
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (g00, g01, g11) = self.gram();
        write!(f, "[{g00}, {g01}, {g11}]")
    }
}

impl std::fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// The discriminant form of an even nondegenerate lattice: the finite
/// quotient `L*/L` with its quadratic form `q` valued in `Q/2Z` and linking
/// form valued in `Q/Z`.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    /// Invariant factors > 1 (orders of the cyclic generators).
    orders: Vec<Int>,
    /// `q(sum x_i g_i) mod 2` is determined by these: `q[i]` on generators
    /// and `link[i][j]` between them.
    q_diag: Vec<Rat>,
    link: Vec<Vec<Rat>>,
}

fn mod_rat(x: &Rat, modulus: i64) -> Rat {
    let m = rat(modulus, 1);
    let q = (x / &m).floor();
    x - q * m
}

impl DiscriminantForm {
    /// Build from an even Gram matrix (any rank, nondegenerate).
    pub fn from_gram(gram: &IntMatrix) -> Result<Self> {
        let n = gram.rows();
        if gram.cols() != n {
            return Err(Error::input("Gram matrix must be square"));
        }
        let det = gram.det();
        if det.is_zero() {
            return Err(Error::input("discriminant form needs a nondegenerate lattice"));
        }
        for i in 0..n {
            if gram.get(i, i).is_odd() {
                return Err(Error::input("discriminant form needs an even lattice"));
            }
        }
        let (d, u, _v) = gram.snf();
        // Generators of L*/L: rational vectors A^{-1} U^{-1} e_i for the
        // indices with invariant factor > 1.
        let uinv = invert_unimodular(&u);
        let mut idx = Vec::new();
        for i in 0..n {
            if d.get(i, i) > &Int::one() {
                idx.push(i);
            }
        }
        let gens: Vec<Vec<Rat>> = idx
            .iter()
            .map(|&i| {
                let col = uinv.column(i);
                solve_rational(gram, &col)
            })
            .collect();
        let orders: Vec<Int> = idx.iter().map(|&i| d.get(i, i).clone()).collect();
        let q_diag: Vec<Rat> = gens
            .iter()
            .map(|g| mod_rat(&quad_value(gram, g, g), 2))
            .collect();
        let link: Vec<Vec<Rat>> = gens
            .iter()
            .map(|g| {
                gens.iter()
                    .map(|h| mod_rat(&quad_value(gram, g, h), 1))
                    .collect()
            })
            .collect();
        Ok(DiscriminantForm {
            orders,
            q_diag,
            link,
        })
    }

    pub fn orders(&self) -> &[Int] {
        &self.orders
    }

    pub fn group_order(&self) -> Int {
        self.orders.iter().product()
    }

    /// `q` evaluated on the element with coordinates `x` (mod the orders).
    pub fn q_value(&self, x: &[Int]) -> Rat {
        let k = self.orders.len();
        assert_eq!(x.len(), k);
        let mut acc = Rat::zero();
        for i in 0..k {
            let xi = Rat::from(x[i].clone());
            acc += &self.q_diag[i] * &xi * &xi;
            for j in i + 1..k {
                let xj = Rat::from(x[j].clone());
                acc += rat(2, 1) * &self.link[i][j] * &xi * xj;
            }
        }
        mod_rat(&acc, 2)
    }

    /// Linking form between two elements, in `Q/Z`.
    pub fn linking(&self, x: &[Int], y: &[Int]) -> Rat {
        let k = self.orders.len();
        let mut acc = Rat::zero();
        for i in 0..k {
            for j in 0..k {
                acc += &self.link[i][j] * Rat::from(x[i].clone()) * Rat::from(y[j].clone());
            }
        }
        mod_rat(&acc, 1)
    }

    fn order_of(&self, x: &[Int]) -> Int {
        // lcm over i of orders[i] / gcd(orders[i], x_i)
        let mut ord = Int::one();
        for (xi, oi) in x.iter().zip(&self.orders) {
            let g = xi.gcd(oi);
            let o = oi / g;
            ord = ord.lcm(&o);
        }
        ord
    }

    fn elements(&self) -> Vec<Vec<Int>> {
        let mut out = vec![Vec::new()];
        for o in &self.orders {
            let bound = o.to_i64().expect("group too large to enumerate");
            let mut next = Vec::new();
            for prefix in &out {
                for v in 0..bound {
                    let mut e = prefix.clone();
                    e.push(Int::from(v));
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }
}

/// Are two discriminant forms isomorphic (group isomorphism preserving `q`)?
///
/// Brute force over generator images; intended for the small groups arising
/// from rank-2 lattices.
pub fn discform_isomorphic(a: &DiscriminantForm, b: &DiscriminantForm) -> bool {
    if a.orders != b.orders {
        return false;
    }
    let k = a.orders.len();
    if k == 0 {
        return true;
    }
    let elems = b.elements();
    let gens_a: Vec<Vec<Int>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect();
    // Candidate images for generator i: elements of the right order and the
    // right q-value.
    let candidates: Vec<Vec<&Vec<Int>>> = (0..k)
        .map(|i| {
            elems
                .iter()
                .filter(|e| b.order_of(e) == a.orders[i] && b.q_value(e) == a.q_diag[i])
                .collect()
        })
        .collect();
    search_images(a, b, &gens_a, &candidates, &mut Vec::new())
}

fn search_images(
    a: &DiscriminantForm,
    b: &DiscriminantForm,
    gens_a: &[Vec<Int>],
    candidates: &[Vec<&Vec<Int>>],
    chosen: &mut Vec<Vec<Int>>,
) -> bool {
    let i = chosen.len();
    if i == candidates.len() {
        return images_generate(b, chosen);
    }
    'cand: for &img in &candidates[i] {
        for (j, prev) in chosen.iter().enumerate() {
            if b.linking(prev, img) != a.linking(&gens_a[j], &gens_a[i]) {
                continue 'cand;
            }
        }
        chosen.push(img.clone());
        if search_images(a, b, gens_a, candidates, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn images_generate(b: &DiscriminantForm, images: &[Vec<Int>]) -> bool {
    // Subgroup generated by the images, computed as the lattice spanned by
    // the image vectors together with the order relations.
    let k = b.orders.len();
    let mut cols: Vec<Vec<Int>> = Vec::new();
    for img in images {
        cols.push(img.clone());
    }
    for (i, o) in b.orders.iter().enumerate() {
        let mut e = vec![Int::zero(); k];
        e[i] = o.clone();
        cols.push(e);
    }
    let mut m = IntMatrix::zero(k, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for i in 0..k {
            m.set(i, j, col[i].clone());
        }
    }
    let (d, _, _) = m.snf();
    let mut index = Int::one();
    for i in 0..k {
        index *= d.get(i, i);
    }
    // The images generate the whole group iff the spanned lattice, together
    // with the order relations, is all of Z^k.
    index.abs() == Int::one()
}

/// Same genus test for even positive-definite binary forms: equal
/// determinant plus isomorphic discriminant forms.
pub fn same_genus(f: &BinaryForm, g: &BinaryForm) -> Result<bool> {
    if !f.is_positive_definite() || !g.is_positive_definite() {
        return Err(Error::input("genus comparison needs positive-definite forms"));
    }
    if f.det() != g.det() {
        return Ok(false);
    }
    let df = DiscriminantForm::from_gram(&f.gram_matrix())?;
    let dg = DiscriminantForm::from_gram(&g.gram_matrix())?;
    Ok(discform_isomorphic(&df, &dg))
}

/// Invert a unimodular integer matrix exactly.
pub(crate) fn invert_unimodular(u: &IntMatrix) -> IntMatrix {
    let n = u.rows();
    let (d, l, r) = u.snf();
    // d must be the identity for unimodular u: u^{-1} = r * d^{-1} * l = r * l
    for i in 0..n {
        assert!(
            d.get(i, i).abs() == Int::one(),
            "matrix is not unimodular"
        );
    }
    let mut dinv = IntMatrix::zero(n, n);
    for i in 0..n {
        dinv.set(i, i, d.get(i, i).clone());
    }
    r.mul(&dinv).mul(&l)
}

/// Solve `A x = rhs` over the rationals for nonsingular integer `A` by
/// Cramer's rule.
fn solve_rational(a: &IntMatrix, rhs: &[Int]) -> Vec<Rat> {
    let n = a.rows();
    let det = a.det();
    assert!(!det.is_zero());
    (0..n)
        .map(|j| {
            let mut m = a.clone();
            for i in 0..n {
                m.set(i, j, rhs[i].clone());
            }
            Rat::new(m.det(), det.clone())
        })
        .collect()
}

/// `x^T A y` for rational vectors.
fn quad_value(a: &IntMatrix, x: &[Rat], y: &[Rat]) -> Rat {
    let n = a.rows();
    let mut acc = Rat::zero();
    for i in 0..n {
        for j in 0..n {
            acc += &x[i] * Rat::from(a.get(i, j).clone()) * &y[j];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(g00: i64, g01: i64, g11: i64) -> BinaryForm {
        BinaryForm::from_entries(g00, g01, g11).unwrap()
    }

    #[test]
    fn rejects_odd_lattices() {
        assert!(BinaryForm::from_entries(3, 1, 4).is_err());
    }

    #[test]
    fn reduction_satisfies_conditions_and_transform() {
        let cases = vec![
            form(40, -5, 2),
            form(22, 55, 140),
            form(100, 37, 62),
            form(2, 1, 28),
            form(8, -3, 8),
        ];
        for f in cases {
            let (r, u) = f.reduce_sl2().unwrap();
            assert_eq!(f.transformed(&u), r, "transform identity for {f}");
            assert_eq!(u.det().abs(), Int::one());
            let (g00, g01, g11) = r.gram();
            let (a, b, c) = (g00 / 2, g01, g11 / 2);
            assert!(-&a < b && b <= a && a <= c, "not reduced: {r}");
            if a == c {
                assert!(!b.is_negative());
            }
            assert_eq!(r.det(), f.det());
        }
    }

    #[test]
    fn known_reductions_of_determinant_55_grams() {
        // The two quotient Gram matrices from the running five-point example.
        let plus = form(40, -5, 2);
        let (r, _) = plus.reduce_gl2().unwrap();
        assert_eq!(r, form(2, 1, 28));
        let minus = form(22, 55, 140);
        let (r, _) = minus.reduce_gl2().unwrap();
        assert_eq!(r, form(8, 3, 8));
    }

    #[test]
    fn gl2_reduction_merges_mirror_classes() {
        let f = form(4, 1, 14);
        let g = form(4, -1, 14);
        assert_eq!(f.reduce_gl2().unwrap().0, g.reduce_gl2().unwrap().0);
        // Under SL2 alone they stay distinct.
        assert_ne!(f.reduce_sl2().unwrap().0, g.reduce_sl2().unwrap().0);
    }

    #[test]
    fn realness_of_small_forms() {
        assert!(form(8, 3, 8).is_real().unwrap());
        assert!(form(2, 1, 28).is_real().unwrap());
        assert!(form(10, 0, 22).is_real().unwrap());
        assert!(form(2, 0, 110).is_real().unwrap());
        assert!(!form(4, 1, 14).is_real().unwrap());
    }

    #[test]
    fn classes_of_determinant_55() {
        let classes = BinaryForm::enumerate_classes(&Int::from(55));
        assert_eq!(
            classes,
            vec![form(2, 1, 28), form(4, 1, 14), form(8, 3, 8)]
        );
    }

    #[test]
    fn discriminant_group_invariants() {
        let df = DiscriminantForm::from_gram(&form(2, 1, 28).gram_matrix()).unwrap();
        assert_eq!(df.orders(), &[Int::from(55)]);
        assert_eq!(df.group_order(), Int::from(55));
        let dg = DiscriminantForm::from_gram(&form(2, 0, 110).gram_matrix()).unwrap();
        assert_eq!(dg.orders(), &[Int::from(2), Int::from(110)]);
    }

    #[test]
    fn genus_partition_of_determinant_55() {
        let genera = BinaryForm::genus_partition(&Int::from(55));
        assert_eq!(
            genera,
            vec![
                vec![form(2, 1, 28), form(8, 3, 8)],
                vec![form(4, 1, 14)],
            ]
        );
    }

    #[test]
    fn discriminant_forms_in_same_genus_match() {
        assert!(same_genus(&form(2, 1, 28), &form(8, 3, 8)).unwrap());
        assert!(!same_genus(&form(2, 1, 28), &form(4, 1, 14)).unwrap());
        // Different determinants are never in the same genus.
        assert!(!same_genus(&form(2, 1, 28), &form(2, 1, 30)).unwrap());
    }

    #[test]
    fn q_values_are_stable_under_multiplier_4() {
        // On Z/55 with q(g) = 2/55 * t for [2,1,28]-type generator, the unit
        // t = 4 carries its q-orbit onto that of [8,3,8]; sanity-check the
        // brute-force search agrees with a hand-picked multiplier.
        let df = DiscriminantForm::from_gram(&form(2, 1, 28).gram_matrix()).unwrap();
        let dg = DiscriminantForm::from_gram(&form(8, 3, 8).gram_matrix()).unwrap();
        let elems: Vec<Vec<Int>> = (0..55).map(|v| vec![Int::from(v)]).collect();
        // There exists a generator image with matching q.
        let hit = elems.iter().any(|e| {
            dg.q_value(e) == df.q_value(&[Int::one()]) && dg.order_of(e) == Int::from(55)
        });
        assert!(hit);
    }

    #[test]
    fn reduction_is_invariant_under_random_basis_change() {
        // A few fixed unimodular changes of basis.
        let f = form(2, 1, 28);
        let us = vec![
            IntMatrix::from_rows(vec![vec![1, 3], vec![0, 1]]),
            IntMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]),
            IntMatrix::from_rows(vec![vec![5, 2], vec![2, 1]]),
            IntMatrix::from_rows(vec![vec![0, -1], vec![1, 7]]),
        ];
        for u in us {
            let g = f.transformed(&u);
            assert_eq!(g.reduce_sl2().unwrap().0, f);
        }
    }
}
