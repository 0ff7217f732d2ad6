//! Multivariate polynomials over a real quadratic field.
//!
//! Terms are kept in a sorted map from dense exponent tuples to nonzero
//! coefficients, with the variable list sorted, so printing order is
//! canonical and reports are reproducible.

use std::collections::BTreeMap;
use std::fmt;


use super::QuadElem;

/// A multivariate polynomial with coefficients in `Q(sqrt d)`.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, QuadElem>,
    d: u64,
}

impl MPoly {
    pub fn zero(d: u64) -> Self {
        MPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
            d,
        }
    }

    pub fn constant(c: QuadElem) -> Self {
        let d = c.d;
        let mut p = MPoly::zero(d);
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn from_int(n: i64, d: u64) -> Self {
        MPoly::constant(QuadElem::from_int(n, d))
    }

    pub fn var(name: &str, d: u64) -> Self {
        let mut p = MPoly::zero(d);
        p.vars = vec![name.to_string()];
        p.terms.insert(vec![1], QuadElem::one(d));
        p
    }

    pub fn field_d(&self) -> u64 {
        self.d
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> QuadElem {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| QuadElem::zero(self.d))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate over `(exponents, coefficient)` pairs; exponents align with
    /// `vars()`.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &QuadElem)> {
        self.terms.iter()
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn var_index(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Remap this polynomial onto a superset variable list (sorted).
    fn remap(&self, vars: &[String]) -> MPoly {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("remap superset"))
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; vars.len()];
            for (k, &exp) in e.iter().enumerate() {
                ne[idx[k]] = exp;
            }
            terms.insert(ne, c.clone());
        }
        MPoly {
            vars: vars.to_vec(),
            terms,
            d: self.d,
        }
    }

    fn unify(a: &MPoly, b: &MPoly) -> (MPoly, MPoly) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let mut vars: Vec<String> = a.vars.iter().chain(b.vars.iter()).cloned().collect();
        vars.sort();
        vars.dedup();
        (a.remap(&vars), b.remap(&vars))
    }

    fn merge_d(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, x) | (x, 0) => x,
            (x, y) => {
                assert!(x == y, "mixed quadratic fields in polynomial arithmetic");
                x
            }
        }
    }

    /// Drop variables that no longer occur, keeping canonical form.
    fn compress(&mut self) {
        let n = self.vars.len();
        let mut used = vec![false; n];
        for e in self.terms.keys() {
            for (k, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    used[k] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return;
        }
        let keep: Vec<usize> = (0..n).filter(|&k| used[k]).collect();
        self.vars = keep.iter().map(|&k| self.vars[k].clone()).collect();
        let old = std::mem::take(&mut self.terms);
        for (e, c) in old {
            let ne: Vec<u32> = keep.iter().map(|&k| e[k]).collect();
            self.terms.insert(ne, c);
        }
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        let d = MPoly::merge_d(self.d, rhs.d);
        let (mut a, b) = MPoly::unify(self, rhs);
        a.d = d;
        for (e, c) in &b.terms {
            let entry = a
                .terms
                .entry(e.clone())
                .or_insert_with(|| QuadElem::zero(d));
            *entry = &*entry + c;
        }
        a.prune();
        a.compress();
        a
    }

    pub fn neg(&self) -> MPoly {
        let mut p = self.clone();
        for c in p.terms.values_mut() {
            *c = -&*c;
        }
        p
    }

    pub fn sub(&self, rhs: &MPoly) -> MPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        let d = MPoly::merge_d(self.d, rhs.d);
        let (a, b) = MPoly::unify(self, rhs);
        let n = a.vars.len();
        let mut out = MPoly {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
            d,
        };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let mut e = vec![0u32; n];
                for k in 0..n {
                    e[k] = ea[k] + eb[k];
                }
                let prod = ca * cb;
                let entry = out
                    .terms
                    .entry(e)
                    .or_insert_with(|| QuadElem::zero(d));
                *entry = &*entry + &prod;
            }
        }
        out.prune();
        out.compress();
        out
    }

    pub fn mul_scalar(&self, c: &QuadElem) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(MPoly::merge_d(self.d, c.d));
        }
        let mut p = self.clone();
        p.d = MPoly::merge_d(self.d, c.d);
        for v in p.terms.values_mut() {
            *v = &*v * c;
        }
        p
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::constant(QuadElem::one(self.d));
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Degree in `var`; zero polynomial and absent variables give 0 via None.
    pub fn degree(&self, var: &str) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        match self.var_index(var) {
            None => Some(0),
            Some(k) => Some(self.terms.keys().map(|e| e[k]).max().unwrap()),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        Some(
            self.terms
                .keys()
                .map(|e| e.iter().sum::<u32>())
                .max()
                .unwrap(),
        )
    }

    pub fn derivative(&self, var: &str) -> MPoly {
        let k = match self.var_index(var) {
            None => return MPoly::zero(self.d),
            Some(k) => k,
        };
        let mut out = MPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
            d: self.d,
        };
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[k] -= 1;
            let factor = QuadElem::from_int(e[k] as i64, self.d);
            out.terms.insert(ne, c * &factor);
        }
        out.prune();
        out.compress();
        out
    }

    /// View as a univariate polynomial in `var`: returns coefficients
    /// `c_0..c_n` (constant first) as polynomials in the remaining variables.
    pub fn as_univar(&self, var: &str) -> Vec<MPoly> {
        let deg = self.degree(var).unwrap_or(0) as usize;
        let mut coeffs = vec![MPoly::zero(self.d); deg + 1];
        let k = self.var_index(var);
        for (e, c) in &self.terms {
            let (pow, rest) = match k {
                None => (0usize, e.clone()),
                Some(k) => {
                    let mut rest = e.clone();
                    let pow = rest[k] as usize;
                    rest[k] = 0;
                    (pow, rest)
                }
            };
            let mono = MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::from([(rest, c.clone())]),
                d: self.d,
            };
            coeffs[pow] = coeffs[pow].add(&mono);
        }
        for c in &mut coeffs {
            c.compress();
        }
        coeffs
    }

    /// Rebuild from univariate coefficients (constant first).
    pub fn from_univar(coeffs: &[MPoly], var: &str, d: u64) -> MPoly {
        let x = MPoly::var(var, d);
        let mut acc = MPoly::zero(d);
        for c in coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    pub fn leading_coeff(&self, var: &str) -> MPoly {
        let coeffs = self.as_univar(var);
        coeffs.last().cloned().unwrap_or_else(|| MPoly::zero(self.d))
    }

    /// Substitute `var := value` (a polynomial), by Horner evaluation.
    pub fn substitute(&self, var: &str, value: &MPoly) -> MPoly {
        if self.var_index(var).is_none() {
            return self.clone();
        }
        let coeffs = self.as_univar(var);
        let mut acc = MPoly::zero(self.d);
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Evaluate at the given point; every variable must be assigned.
    pub fn eval(&self, point: &BTreeMap<String, QuadElem>) -> QuadElem {
        let mut acc = QuadElem::zero(self.d);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (k, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let v = point
                    .get(&self.vars[k])
                    .unwrap_or_else(|| panic!("missing value for variable {}", self.vars[k]));
                let mut pw = QuadElem::one(self.d);
                for _ in 0..exp {
                    pw = &pw * v;
                }
                term = &term * &pw;
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Leading term in lex order on the (sorted) variable list.
    fn lead(&self) -> Option<(Vec<u32>, QuadElem)> {
        self.terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
    }

    /// Exact division; `None` if `rhs` does not divide `self`.
    pub fn div_exact(&self, rhs: &MPoly) -> Option<MPoly> {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let d = MPoly::merge_d(self.d, rhs.d);
        let (rem0, b) = MPoly::unify(self, rhs);
        let vars = rem0.vars.clone();
        let n = vars.len();
        let mut rem = rem0;
        let (lb_e, lb_c) = b.lead().unwrap();
        let lb_inv = lb_c.inv();
        let mut quot = MPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
            d,
        };
        while !rem.is_zero() {
            // Arithmetic may have compressed the variable list; restore it so
            // exponent vectors stay aligned with the divisor's.
            if rem.vars != vars {
                rem = rem.remap(&vars);
            }
            let (le, lc) = rem.lead().unwrap();
            let mut qe = vec![0u32; n];
            for k in 0..n {
                if le[k] < lb_e[k] {
                    return None;
                }
                qe[k] = le[k] - lb_e[k];
            }
            let qc = &lc * &lb_inv;
            let qterm = MPoly {
                vars: vars.clone(),
                terms: BTreeMap::from([(qe.clone(), qc.clone())]),
                d,
            };
            quot.terms.insert(qe, qc);
            rem = rem.sub(&qterm.mul(&b));
        }
        quot.prune();
        quot.compress();
        Some(quot)
    }

    /// Normalize so the lex-leading coefficient is 1.
    pub fn monic_lex(&self) -> MPoly {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) => self.mul_scalar(&c.inv()),
        }
    }

    /// Multivariate gcd, normalized to lex-leading coefficient 1.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        if self.is_zero() {
            return other.monic_lex();
        }
        if other.is_zero() {
            return self.monic_lex();
        }
        let (a, b) = MPoly::unify(self, other);
        // Pick a main variable occurring in either.
        let var = a
            .vars
            .iter()
            .chain(b.vars.iter())
            .find(|v| {
                a.degree(v).unwrap_or(0) > 0 || b.degree(v).unwrap_or(0) > 0
            })
            .cloned();
        let var = match var {
            None => return MPoly::constant(QuadElem::one(a.d)), // both constants
            Some(v) => v,
        };
        let (ca, pa) = a.content_primitive(&var);
        let (cb, pb) = b.content_primitive(&var);
        let cg = ca.gcd(&cb);
        let pg = MPoly::prs_gcd(&pa, &pb, &var);
        cg.mul(&pg).monic_lex()
    }

    /// Content (gcd of univariate coefficients) and primitive part in `var`.
    fn content_primitive(&self, var: &str) -> (MPoly, MPoly) {
        let coeffs = self.as_univar(var);
        let mut content = MPoly::zero(self.d);
        for c in &coeffs {
            if !c.is_zero() {
                content = content.gcd(c);
            }
        }
        let pp = self.div_exact(&content).expect("content divides");
        (content, pp)
    }

    /// Subresultant PRS gcd of primitive polynomials in `var`.
    fn prs_gcd(a: &MPoly, b: &MPoly, var: &str) -> MPoly {
        let mut f = a.clone();
        let mut g = b.clone();
        if f.degree(var).unwrap_or(0) < g.degree(var).unwrap_or(0) {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            if g.is_zero() {
                let (_, pp) = f.content_primitive(var);
                return pp.monic_lex();
            }
            if g.degree(var).unwrap_or(0) == 0 {
                return MPoly::constant(QuadElem::one(f.d));
            }
            let r = MPoly::pseudo_rem(&f, &g, var);
            f = g;
            // Work with the primitive part to keep coefficients small.
            g = if r.is_zero() {
                r
            } else {
                r.content_primitive(var).1
            };
        }
    }

    /// Pseudo-remainder: `lc(g)^(deg f - deg g + 1) * f = q*g + r`.
    pub fn pseudo_rem(f: &MPoly, g: &MPoly, var: &str) -> MPoly {
        let df = f.degree(var).expect("pseudo_rem: zero dividend") as i64;
        let dg = g.degree(var).expect("pseudo_rem: zero divisor") as i64;
        assert!(dg >= 0);
        let lc_g = g.leading_coeff(var);
        let x = MPoly::var(var, f.d);
        let mut r = f.clone();
        let mut steps = df - dg + 1;
        while !r.is_zero() && r.degree(var).unwrap() as i64 >= dg {
            let dr = r.degree(var).unwrap() as i64;
            let lc_r = r.leading_coeff(var);
            let shift = x.pow((dr - dg) as u32);
            r = r.mul(&lc_g).sub(&g.mul(&lc_r).mul(&shift));
            steps -= 1;
        }
        // Pad with remaining lc(g) powers so the defining identity holds.
        while steps > 0 {
            r = r.mul(&lc_g);
            steps -= 1;
        }
        r
    }

    /// Resultant of `self` and `other` with respect to `var`, computed by the
    /// subresultant pseudo-remainder sequence.  Agrees with the Sylvester
    /// determinant, including sign.
    pub fn resultant(&self, other: &MPoly, var: &str) -> MPoly {
        let d = MPoly::merge_d(self.d, other.d);
        let (f, g) = MPoly::unify(self, other);
        let df = f.degree(var);
        let dg = g.degree(var);
        if f.is_zero() || g.is_zero() {
            panic!("resultant of zero polynomial");
        }
        let (df, dg) = (df.unwrap() as i64, dg.unwrap() as i64);
        if df == 0 && dg == 0 {
            return MPoly::constant(QuadElem::one(d));
        }
        if df == 0 {
            return f.pow(dg as u32);
        }
        if dg == 0 {
            return g.pow(df as u32);
        }
        let mut a = f;
        let mut b = g;
        let mut sign = 1i64;
        if df < dg {
            std::mem::swap(&mut a, &mut b);
            if (df * dg) % 2 == 1 {
                sign = -sign;
            }
        }
        let one = MPoly::constant(QuadElem::one(d));
        let mut gc = one.clone();
        let mut h = one.clone();
        loop {
            let da = a.degree(var).unwrap() as i64;
            let db = b.degree(var).unwrap() as i64;
            let delta = da - db;
            if da % 2 == 1 && db % 2 == 1 {
                sign = -sign;
            }
            let r = MPoly::pseudo_rem(&a, &b, var);
            a = b;
            let denom = gc.mul(&h.pow(delta as u32));
            b = if r.is_zero() {
                r
            } else {
                r.div_exact(&denom).expect("subresultant division is exact")
            };
            gc = a.leading_coeff(var);
            h = if delta == 0 {
                h
            } else {
                // h = g^delta / h^(delta-1), exact in the subresultant PRS
                gc.pow(delta as u32)
                    .div_exact(&h.pow((delta - 1) as u32))
                    .expect("subresultant h-update is exact")
            };
            if b.is_zero() {
                return MPoly::zero(d);
            }
            if b.degree(var).unwrap() == 0 {
                let da = a.degree(var).unwrap() as i64;
                // res = lc(b)^(deg a) / h^(deg a - 1)
                let num = b.pow(da as u32);
                let res = num
                    .div_exact(&h.pow((da - 1) as u32))
                    .expect("final subresultant division is exact");
                return if sign < 0 { res.neg() } else { res };
            }
        }
    }

    /// `f / gcd(f, df/dvar)` — removes repeated factors in `var`.
    pub fn squarefree_part(&self, var: &str) -> MPoly {
        assert!(!self.is_zero(), "squarefree part of zero polynomial");
        let deriv = self.derivative(var);
        if deriv.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&deriv);
        self.div_exact(&g).expect("gcd divides").monic_lex()
    }

    /// Coefficient of the monomial with the given exponents on `vars()`.
    pub fn coeff(&self, exps: &[u32]) -> QuadElem {
        self.terms
            .get(&exps.to_vec())
            .cloned()
            .unwrap_or_else(|| QuadElem::zero(self.d))
    }

    /// Coefficient of a monomial given as (var, exponent) pairs; unlisted
    /// variables get exponent 0.
    pub fn coeff_of(&self, mono: &[(&str, u32)]) -> QuadElem {
        let mut exps = vec![0u32; self.vars.len()];
        for (v, e) in mono {
            match self.var_index(v) {
                Some(k) => exps[k] = *e,
                None => {
                    if *e != 0 {
                        return QuadElem::zero(self.d);
                    }
                }
            }
        }
        self.coeff(&exps)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (k, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if exp == 1 {
                    write!(f, "*{}", self.vars[k])?;
                } else {
                    write!(f, "*{}^{}", self.vars[k], exp)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
