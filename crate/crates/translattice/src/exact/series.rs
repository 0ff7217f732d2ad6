//! Truncated power series in one variable over `Q(sqrt d)`.
//!
//! A series is a coefficient vector of fixed truncation order `M`: all
//! arithmetic is exact modulo `y^M`.  Used to carry Newton-lifted branch
//! parametrizations when recognizing singularities.


use super::{MPoly, QuadElem};

/// A power series truncated at order `M` (coefficients of `y^0 .. y^(M-1)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<QuadElem>,
    d: u64,
}

impl TruncSeries {
    pub fn new(coeffs: Vec<QuadElem>, d: u64) -> Self {
        assert!(!coeffs.is_empty(), "truncation order must be positive");
        TruncSeries { coeffs, d }
    }

    pub fn zero(order: usize, d: u64) -> Self {
        TruncSeries::new(vec![QuadElem::zero(d); order], d)
    }

    pub fn constant(c: QuadElem, order: usize) -> Self {
        let d = c.d;
        let mut s = TruncSeries::zero(order, d);
        s.coeffs[0] = c;
        s
    }

    /// The variable `y` itself, truncated at `order`.
    pub fn var(order: usize, d: u64) -> Self {
        let mut s = TruncSeries::zero(order, d);
        if order > 1 {
            s.coeffs[1] = QuadElem::one(d);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> QuadElem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| QuadElem::zero(self.d))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the lowest nonzero coefficient, or `None` if zero mod `y^M`.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Extend (zero-padded) or truncate to a new order.
    pub fn resize(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order, QuadElem::zero(self.d));
        TruncSeries::new(coeffs, self.d)
    }

    fn align(a: &TruncSeries, b: &TruncSeries) -> usize {
        a.order().min(b.order())
    }

    pub fn add(&self, rhs: &TruncSeries) -> TruncSeries {
        let m = TruncSeries::align(self, rhs);
        let coeffs = (0..m).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect();
        TruncSeries::new(coeffs, self.d.max(rhs.d))
    }

    pub fn sub(&self, rhs: &TruncSeries) -> TruncSeries {
        let m = TruncSeries::align(self, rhs);
        let coeffs = (0..m).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect();
        TruncSeries::new(coeffs, self.d.max(rhs.d))
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries::new(self.coeffs.iter().map(|c| -c).collect(), self.d)
    }

    pub fn mul(&self, rhs: &TruncSeries) -> TruncSeries {
        let m = TruncSeries::align(self, rhs);
        let d = self.d.max(rhs.d);
        let mut coeffs = vec![QuadElem::zero(d); m];
        for i in 0..m {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..m - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &rhs.coeffs[j];
                coeffs[i + j] = &coeffs[i + j] + &prod;
            }
        }
        TruncSeries::new(coeffs, d)
    }

    /// Multiplicative inverse; requires a unit (nonzero constant term).
    pub fn inv(&self) -> TruncSeries {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "series inverse needs a unit constant term");
        let m = self.order();
        let c0_inv = c0.inv();
        let mut coeffs = vec![QuadElem::zero(self.d); m];
        coeffs[0] = c0_inv.clone();
        for k in 1..m {
            // c0 * b_k = -(sum_{i=1..k} a_i b_{k-i})
            let mut s = QuadElem::zero(self.d);
            for i in 1..=k {
                let t = &self.coeffs[i] * &coeffs[k - i];
                s = &s + &t;
            }
            coeffs[k] = &(-&s) * &c0_inv;
        }
        TruncSeries::new(coeffs, self.d)
    }

    pub fn div(&self, rhs: &TruncSeries) -> TruncSeries {
        self.mul(&rhs.inv())
    }

    pub fn mul_scalar(&self, c: &QuadElem) -> TruncSeries {
        TruncSeries::new(self.coeffs.iter().map(|x| x * c).collect(), self.d.max(c.d))
    }

    /// Evaluate a bivariate polynomial at `xvar := self`, `yvar := y`,
    /// producing a series in `y` mod `y^M`.  Horner in `xvar`.
    pub fn eval_poly(&self, f: &MPoly, xvar: &str, yvar: &str) -> TruncSeries {
        let m = self.order();
        let d = self.d.max(f.field_d());
        let coeffs_in_x = f.as_univar(xvar);
        let mut acc = TruncSeries::zero(m, d);
        for c in coeffs_in_x.iter().rev() {
            acc = acc.mul(self).add(&poly_in_y_to_series(c, yvar, m, d));
        }
        acc
    }
}

/// A polynomial in the single variable `yvar` as a truncated series.
fn poly_in_y_to_series(f: &MPoly, yvar: &str, order: usize, d: u64) -> TruncSeries {
    let mut s = TruncSeries::zero(order, d);
    for (exps, c) in f.terms() {
        let mut pow = 0usize;
        for (k, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            assert!(
                f.vars()[k] == yvar,
                "coefficient polynomial contains extra variable {}",
                f.vars()[k]
            );
            pow = e as usize;
        }
        if pow < order {
            s.coeffs[pow] = &s.coeffs[pow] + c;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;

    fn int(n: i64) -> QuadElem {
        QuadElem::from_int(n, 0)
    }

    #[test]
    fn geometric_series_inverse() {
        // 1/(1 - y) = 1 + y + y^2 + ...
        let one = TruncSeries::constant(int(1), 8);
        let y = TruncSeries::var(8, 0);
        let inv = one.sub(&y).inv();
        for k in 0..8 {
            assert_eq!(inv.coeff(k), int(1));
        }
        // Multiplying back gives 1 mod y^8.
        assert_eq!(one.sub(&y).mul(&inv), one);
    }

    #[test]
    fn ord_detects_lowest_term() {
        let y = TruncSeries::var(6, 0);
        let s = y.mul(&y).mul_scalar(&int(3));
        assert_eq!(s.ord(), Some(2));
        assert_eq!(TruncSeries::zero(6, 0).ord(), None);
    }

    #[test]
    fn poly_evaluation_composes() {
        // f = x^2 - y; at x = y + y^2: (y + y^2)^2 - y = -y + y^2 + 2 y^3 + y^4
        let f = parse_poly("x^2 - y", 0).unwrap();
        let mut s = TruncSeries::zero(6, 0);
        s = s.add(&TruncSeries::var(6, 0));
        let y2 = TruncSeries::var(6, 0).mul(&TruncSeries::var(6, 0));
        s = s.add(&y2);
        let out = s.eval_poly(&f, "x", "y");
        assert_eq!(out.coeff(0), int(0));
        assert_eq!(out.coeff(1), int(-1));
        assert_eq!(out.coeff(2), int(1));
        assert_eq!(out.coeff(3), int(2));
        assert_eq!(out.coeff(4), int(1));
        assert_eq!(out.coeff(5), int(0));
    }

    #[test]
    fn division_roundtrip() {
        let y = TruncSeries::var(10, 0);
        let f = TruncSeries::constant(int(2), 10).add(&y.mul_scalar(&int(3)));
        let g = TruncSeries::constant(int(1), 10).sub(&y);
        let q = f.div(&g);
        assert_eq!(q.mul(&g), f);
    }
}
