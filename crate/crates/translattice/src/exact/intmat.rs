//! Integer matrices: Smith normal form with transforms, integer kernels,
//! Hermite column form, and exact determinants.


use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Int;

/// A dense matrix with arbitrary-precision integer entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, Int::from(v));
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &v[j])
                    .sum::<Int>()
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[a] += q * row[b]`
    fn add_row(&mut self, a: usize, b: usize, q: &Int) {
        for j in 0..self.cols {
            let add = q * self.get(b, j);
            let v = self.get(a, j) + add;
            self.set(a, j, v);
        }
    }

    /// `col[a] += q * col[b]`
    fn add_col(&mut self, a: usize, b: usize, q: &Int) {
        for i in 0..self.rows {
            let add = q * self.get(i, b);
            let v = self.get(i, a) + add;
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j).clone();
            self.set(a, j, v);
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, a).clone();
            self.set(i, a, v);
        }
    }

    /// Smith normal form: returns `(D, U, V)` with `D = U * self * V`,
    /// `U`, `V` unimodular, `D` diagonal with nonnegative entries forming a
    /// divisibility chain `d_1 | d_2 | ...`.
    pub fn snf(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        for t in 0..n {
            'pivot: loop {
                // Find the entry of smallest nonzero magnitude in the
                // trailing block; stop if the block is zero.
                let mut best: Option<(usize, usize)> = None;
                for i in t..d.rows {
                    for j in t..d.cols {
                        if d.get(i, j).is_zero() {
                            continue;
                        }
                        match &best {
                            None => best = Some((i, j)),
                            Some((bi, bj)) => {
                                if d.get(i, j).abs() < d.get(*bi, *bj).abs() {
                                    best = Some((i, j));
                                }
                            }
                        }
                    }
                }
                let (pi, pj) = match best {
                    None => return finish_snf(d, u, v),
                    Some(p) => p,
                };
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);

                // Clear the pivot column and row by nearest-integer division.
                let mut dirty = false;
                for i in t + 1..d.rows {
                    if d.get(i, t).is_zero() {
                        continue;
                    }
                    let q = rounded_div(d.get(i, t), d.get(t, t));
                    let nq = -q;
                    d.add_row(i, t, &nq);
                    u.add_row(i, t, &nq);
                    if !d.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..d.cols {
                    if d.get(t, j).is_zero() {
                        continue;
                    }
                    let q = rounded_div(d.get(t, j), d.get(t, t));
                    let nq = -q;
                    d.add_col(j, t, &nq);
                    v.add_col(j, t, &nq);
                    if !d.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    continue 'pivot;
                }
                // Divisibility: the pivot must divide the trailing block.
                let pivot = d.get(t, t).clone();
                for i in t + 1..d.rows {
                    for j in t + 1..d.cols {
                        if !d.get(i, j).mod_floor(&pivot).is_zero() {
                            let one = Int::one();
                            d.add_row(t, i, &one);
                            u.add_row(t, i, &one);
                            continue 'pivot;
                        }
                    }
                }
                if d.get(t, t).is_negative() {
                    d.negate_row(t);
                    u.negate_row(t);
                }
                break;
            }
        }
        finish_snf(d, u, v)
    }

    pub fn rank(&self) -> usize {
        let (d, _, _) = self.snf();
        let n = d.rows.min(d.cols);
        (0..n).filter(|&i| !d.get(i, i).is_zero()).count()
    }

    /// Basis of the integer kernel (columns).  The basis spans a saturated
    /// sublattice: any integer vector killed by the matrix is an integer
    /// combination of the columns.  Canonicalized by Hermite column form.
    pub fn integer_kernel(&self) -> IntMatrix {
        let (d, _, v) = self.snf();
        let n = self.rows.min(self.cols);
        let rank = (0..n).filter(|&i| !d.get(i, i).is_zero()).count();
        let kdim = self.cols - rank;
        let mut k = IntMatrix::zero(self.cols, kdim);
        for (out_j, j) in (rank..self.cols).enumerate() {
            for i in 0..self.cols {
                k.set(i, out_j, v.get(i, j).clone());
            }
        }
        k.hermite_columns()
    }

    /// Column-style Hermite form: unique representative of the column span
    /// under right multiplication by unimodular matrices.  Zero columns are
    /// dropped.
    pub fn hermite_columns(&self) -> IntMatrix {
        let mut h = self.clone();
        let mut k = 0usize;
        for row in 0..h.rows {
            if k >= h.cols {
                break;
            }
            // Gather the gcd of this row's entries in columns k.. into col k.
            for j in k + 1..h.cols {
                if h.get(row, j).is_zero() {
                    continue;
                }
                if h.get(row, k).is_zero() {
                    h.swap_cols(k, j);
                    continue;
                }
                let a = h.get(row, k).clone();
                let b = h.get(row, j).clone();
                let eg = a.extended_gcd(&b);
                let (g, s, t) = (eg.gcd, eg.x, eg.y);
                let a_g = &a / &g;
                let b_g = &b / &g;
                for i in 0..h.rows {
                    let ck = h.get(i, k).clone();
                    let cj = h.get(i, j).clone();
                    h.set(i, k, &s * &ck + &t * &cj);
                    h.set(i, j, &a_g * &cj - &b_g * &ck);
                }
            }
            if h.get(row, k).is_zero() {
                continue;
            }
            if h.get(row, k).is_negative() {
                h.negate_col(k);
            }
            let pivot = h.get(row, k).clone();
            for j in 0..k {
                let q = h.get(row, j).div_floor(&pivot);
                if !q.is_zero() {
                    let nq = -q;
                    h.add_col(j, k, &nq);
                }
            }
            k += 1;
        }
        // Drop all-zero columns.
        let keep: Vec<usize> = (0..h.cols)
            .filter(|&j| (0..h.rows).any(|i| !h.get(i, j).is_zero()))
            .collect();
        let mut out = IntMatrix::zero(h.rows, keep.len());
        for (oj, &j) in keep.iter().enumerate() {
            for i in 0..h.rows {
                out.set(i, oj, h.get(i, j).clone());
            }
        }
        out
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !m.get(i, k).is_zero());
                match swap {
                    None => return Int::zero(),
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.get(k, k) * m.get(i, j) - m.get(i, k) * m.get(k, j);
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m.set(i, j, q);
                }
                m.set(i, k, Int::zero());
            }
            prev = m.get(k, k).clone();
        }
        let d = m.get(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }
}

/// Division rounded to the nearest integer (ties toward zero), which keeps
/// remainders at most half the divisor during elimination.
fn rounded_div(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    let two_r = &r + &r;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + Int::one()
        } else {
            q - Int::one()
        }
    } else {
        q
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn finish_snf(d: IntMatrix, u: IntMatrix, v: IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    (d, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMatrix) -> IntMatrix {
        let (d, u, v) = a.snf();
        // D = U * A * V must hold exactly.
        assert_eq!(u.mul(a).mul(&v), d, "transform identity failed");
        // Unimodularity.
        assert_eq!(u.det().abs(), Int::one());
        assert_eq!(v.det().abs(), Int::one());
        // Diagonal, nonnegative, divisibility chain.
        let n = d.rows().min(d.cols());
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    assert!(d.get(i, j).is_zero(), "off-diagonal entry in SNF");
                }
            }
        }
        for i in 0..n {
            assert!(!d.get(i, i).is_negative());
            if i + 1 < n && !d.get(i, i).is_zero() {
                let next = d.get(i + 1, i + 1);
                if !next.is_zero() {
                    assert!(next.mod_floor(d.get(i, i)).is_zero(), "divisibility chain");
                }
            }
        }
        d
    }

    #[test]
    fn snf_two_by_two() {
        let a = IntMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let d = check_snf(&a);
        assert_eq!(d.get(0, 0), &Int::from(2));
        assert_eq!(d.get(1, 1), &Int::from(4));
    }

    #[test]
    fn snf_of_even_gram_matrix() {
        // Gram matrix of the form with (a, b, c) = (1, 1, 14): determinant 55.
        let a = IntMatrix::from_rows(vec![vec![2, 1], vec![1, 28]]);
        let d = check_snf(&a);
        assert_eq!(d.get(0, 0), &Int::from(1));
        assert_eq!(d.get(1, 1), &Int::from(55));
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let a = IntMatrix::from_rows(vec![vec![0, 0, 0], vec![0, 0, 0]]);
        let d = check_snf(&a);
        assert!(d.is_zero());
        let b = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let d = check_snf(&b);
        assert_eq!(d.get(0, 0), &Int::from(1));
        assert_eq!(d.get(1, 1), &Int::from(3));
    }

    #[test]
    fn kernel_of_cyclic_boundary_matrix() {
        // Boundary map for a five-point fiber with cyclic monodromy: columns
        // are the loop chains L1..L4 followed by three thimbles with cycles
        // (1,-1,1,-1), (1,-1,-1,0), (0,-1,-1,1) (negated by the boundary).
        let a = IntMatrix::from_rows(vec![
            vec![-1, 0, 0, -1, -1, -1, 0],
            vec![1, -1, 0, -1, 1, 1, 1],
            vec![0, 1, -1, -1, -1, 1, 1],
            vec![0, 0, 1, -2, 1, 0, -1],
        ]);
        let k = a.integer_kernel();
        assert_eq!(k.cols(), 3);
        // The combination -L1 - L3 + T_R is a 2-cycle.
        let v: Vec<Int> = [-1i64, 0, -1, 0, 1, 0, 0]
            .iter()
            .map(|&x| Int::from(x))
            .collect();
        let image = a.mul_vec(&v);
        assert!(image.iter().all(|x| x.is_zero()));
        // Saturation: appending v leaves the Hermite column span unchanged.
        let mut ext = IntMatrix::zero(7, 4);
        for j in 0..3 {
            for i in 0..7 {
                ext.set(i, j, k.get(i, j).clone());
            }
        }
        for i in 0..7 {
            ext.set(i, 3, v[i].clone());
        }
        assert_eq!(ext.hermite_columns(), k.hermite_columns());
    }

    #[test]
    fn hermite_columns_is_canonical() {
        let a = IntMatrix::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let h1 = a.hermite_columns();
        // Post-multiplying by a unimodular matrix leaves the form unchanged.
        let u = IntMatrix::from_rows(vec![vec![1, 1, 0], vec![0, 1, 2], vec![0, 0, 1]]);
        let h2 = a.mul(&u).hermite_columns();
        assert_eq!(h1, h2);
    }

    #[test]
    fn determinant_matches_cofactor_cases() {
        let a = IntMatrix::from_rows(vec![vec![2, 1], vec![1, 28]]);
        assert_eq!(a.det(), Int::from(55));
        let b = IntMatrix::from_rows(vec![
            vec![0, 1, 0],
            vec![1, 0, 0],
            vec![0, 0, 1],
        ]);
        assert_eq!(b.det(), Int::from(-1));
        let c = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(c.det(), Int::zero());
    }
}
