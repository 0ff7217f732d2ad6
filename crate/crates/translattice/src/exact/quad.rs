//! Elements of a real quadratic field `Q(sqrt d)` and their embeddings
//! into the reals.
//!
//! An element is stored as `p + q*sqrt(d)` with exact rational `p`, `q`.
//! `d = 0` degenerates to the rational field: every element then has `q = 0`.
//! Only one irrationality is in play per problem, so mixed-`d` arithmetic is
//! a programming error and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, Rat};

/// An element `p + q*sqrt(d)` of the real quadratic field `Q(sqrt d)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub p: Rat,
    pub q: Rat,
    /// Squarefree positive integer, or 0 for the rational field.
    pub d: u64,
}

/// Selects one of the two real embeddings `sigma_pm`, sending `sqrt(d)` to
/// the positive or negative real square root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Embedding {
    Plus,
    Minus,
}

impl Embedding {
    pub fn sign(self) -> i32 {
        match self {
            Embedding::Plus => 1,
            Embedding::Minus => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Embedding::Plus => "plus",
            Embedding::Minus => "minus",
        }
    }
}

fn is_squarefree(d: u64) -> bool {
    let mut n = d;
    let mut f = 2u64;
    while f * f <= n {
        if n % (f * f) == 0 {
            return false;
        }
        while n % f == 0 {
            n /= f;
        }
        f += 1;
    }
    true
}

impl QuadElem {
    pub fn new(p: Rat, q: Rat, d: u64) -> Self {
        assert!(
            d == 0 || (d > 1 && is_squarefree(d)),
            "field discriminant must be 0 or a squarefree integer > 1, got {d}"
        );
        let mut e = QuadElem { p, q, d };
        e.normalize();
        e
    }

    /// The rational element `p` (valid in any field).
    pub fn from_rat(p: Rat, d: u64) -> Self {
        QuadElem::new(p, Rat::zero(), d)
    }

    pub fn from_int(n: i64, d: u64) -> Self {
        QuadElem::from_rat(Rat::from(Int::from(n)), d)
    }

    /// The generator `sqrt(d)` itself.
    pub fn sqrt_d(d: u64) -> Self {
        assert!(d > 1, "sqrt generator needs d > 1");
        QuadElem::new(Rat::zero(), Rat::one(), d)
    }

    pub fn zero(d: u64) -> Self {
        QuadElem::from_int(0, d)
    }

    pub fn one(d: u64) -> Self {
        QuadElem::from_int(1, d)
    }

    fn normalize(&mut self) {
        if self.q.is_zero() {
            // keep d: the field context is carried even by rational values
        }
        if self.d == 0 {
            assert!(self.q.is_zero(), "irrational part with d = 0");
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Galois conjugate `p - q*sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadElem {
            p: self.p.clone(),
            q: -self.q.clone(),
            d: self.d,
        }
    }

    /// Field norm `p^2 - d*q^2`.
    pub fn norm(&self) -> Rat {
        &self.p * &self.p - Rat::from(Int::from(self.d)) * &self.q * &self.q
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(sqrt d)");
        let n = self.norm();
        assert!(!n.is_zero(), "norm zero for nonzero element: d not squarefree?");
        QuadElem {
            p: &self.p / &n,
            q: -&self.q / &n,
            d: self.d,
        }
    }

    fn merge_d(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, x) | (x, 0) => x,
            (x, y) => {
                assert!(x == y, "mixed quadratic fields: sqrt({x}) vs sqrt({y})");
                x
            }
        }
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        QuadElem {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
            d: QuadElem::merge_d(self.d, rhs.d),
        }
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        QuadElem {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
            d: QuadElem::merge_d(self.d, rhs.d),
        }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        let d = QuadElem::merge_d(self.d, rhs.d);
        let dr = Rat::from(Int::from(d));
        QuadElem {
            p: &self.p * &rhs.p + &dr * &self.q * &rhs.q,
            q: &self.p * &rhs.q + &self.q * &rhs.p,
            d,
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            p: -self.p.clone(),
            q: -self.q.clone(),
            d: self.d,
        }
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        if self.p.is_zero() {
            return write!(f, "{}*a", self.q);
        }
        if self.q.is_negative() {
            write!(f, "{} - {}*a", self.p, -self.q.clone())
        } else {
            write!(f, "{} + {}*a", self.p, self.q)
        }
    }
}

/// Dyadic approximation of `sqrt(n)` for a nonnegative integer `n`:
/// returns `m / 2^prec` with `m = floor(sqrt(n * 4^prec))`, so the absolute
/// error is below `2^-prec`.
pub fn sqrt_dyadic(n: u64, prec: u32) -> Rat {
    let shifted: Int = Int::from(n) << (2 * prec as usize);
    let root = shifted.sqrt();
    Rat::new(root, Int::one() << prec as usize)
}

/// Embed an element of `Q(sqrt d)` into the reals as a dyadic rational with
/// relative error at most `2^(1-prec)`.
///
/// `Embedding::Plus` sends `sqrt(d)` to the positive root, `Embedding::Minus`
/// to the negative one.  Deterministic for fixed `prec`.
pub fn embed(x: &QuadElem, e: Embedding, prec: u32) -> Rat {
    assert!(prec >= 53, "precision below 53 bits is not supported");
    if x.q.is_zero() {
        return x.p.clone();
    }
    // Guard bits cover the rounding of sqrt and the final sum.
    let work = prec + 16;
    let root = sqrt_dyadic(x.d, work);
    let signed_root = if e == Embedding::Plus { root } else { -root };
    &x.p + &x.q * signed_root
}

/// Convenience double-precision embedding.
pub fn embed_f64(x: &QuadElem, e: Embedding) -> f64 {
    rat_to_f64(&embed(x, e, 64))
}

/// Convert a rational to the nearest `f64` (within a couple of ulps).
pub fn rat_to_f64(r: &Rat) -> f64 {
    let num = r.numer();
    let den = r.denom();
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the integer division keeps ~80 significant bits.
    let nbits = num.bits() as i64;
    let dbits = den.bits() as i64;
    let shift = 80 - (nbits - dbits);
    let (scaled_num, scaled_den) = if shift >= 0 {
        (num.clone() << shift as usize, den.clone())
    } else {
        (num.clone(), den.clone() << (-shift) as usize)
    };
    let q = scaled_num.div_floor(&scaled_den);
    let qf = bigint_to_f64(&q);
    qf * 2f64.powi(-shift as i32)
}

fn bigint_to_f64(n: &Int) -> f64 {
    // num-bigint's ToPrimitive saturates cleanly; values here are bounded.
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    /// Independent oracle: Newton iteration on t^2 - d over exact rationals,
    /// refined until the bracket width is below `tol`.
    fn newton_sqrt_oracle(d: u64, tol: &Rat) -> Rat {
        let dr = rat_int(d as i64);
        let two = rat_int(2);
        let mut t = rat_int(d as i64); // start above the root
        loop {
            let next = (&t + &dr / &t) / &two;
            let diff = &t - &next;
            t = next;
            if diff.abs() < *tol {
                return t;
            }
        }
    }

    #[test]
    fn embed_rational_is_exact() {
        let x = QuadElem::from_int(1, 5);
        assert_eq!(embed(&x, Embedding::Plus, 64), rat_int(1));
    }

    #[test]
    fn embed_sqrt5_matches_newton_oracle() {
        let alpha = QuadElem::sqrt_d(5);
        let tol = Rat::new(Int::one(), Int::one() << 140);
        let oracle = newton_sqrt_oracle(5, &tol);
        let got = embed(&alpha, Embedding::Plus, 128);
        let err = (&got - &oracle).abs();
        let bound = Rat::new(Int::from(4), Int::one() << 128) * &oracle;
        assert!(err < bound, "err = {err}");
        // Leading digits 2.2360679...
        let f = rat_to_f64(&got);
        assert!((f - 2.2360679).abs() < 1e-6);
    }

    #[test]
    fn embed_coefficient_minus9_plus_5a() {
        // The coefficient -9 + 5*sqrt(5) = 2.1803...
        let x = QuadElem::new(rat_int(-9), rat_int(5), 5);
        let tol = Rat::new(Int::one(), Int::one() << 140);
        let oracle = rat_int(-9) + rat_int(5) * newton_sqrt_oracle(5, &tol);
        let got = embed(&x, Embedding::Plus, 128);
        assert!((&got - &oracle).abs() < Rat::new(Int::one(), Int::one() << 120));
        assert!((rat_to_f64(&got) - 2.1803).abs() < 1e-4);
    }

    #[test]
    fn minus_embedding_negates_root() {
        let alpha = QuadElem::sqrt_d(5);
        let plus = embed(&alpha, Embedding::Plus, 80);
        let minus = embed(&alpha, Embedding::Minus, 80);
        assert_eq!(plus, -minus);
        assert!(plus > Rat::zero());
    }

    #[test]
    fn conj_is_involution_and_ring_ops_close() {
        let x = QuadElem::new(rat(3, 2), rat(-1, 7), 5);
        assert_eq!(x.conj().conj(), x);
        let y = QuadElem::new(rat(1, 3), rat(2, 5), 5);
        let prod = &x * &y;
        assert_eq!(prod.d, 5);
        // (x*y) * x^{-1} = y
        let back = &prod * &x.inv();
        assert_eq!(back, y);
    }

    #[test]
    fn embed_is_ring_hom_up_to_precision() {
        let x = QuadElem::new(rat(3, 2), rat(-1, 7), 5);
        let y = QuadElem::new(rat(1, 3), rat(2, 5), 5);
        let prod = &x * &y;
        let prec = 128u32;
        let lhs = embed(&prod, Embedding::Plus, prec);
        let rhs = embed(&x, Embedding::Plus, prec) * embed(&y, Embedding::Plus, prec);
        let bound = Rat::new(Int::from(64), Int::one() << prec as usize);
        assert!((lhs - rhs).abs() < bound);
    }
}
