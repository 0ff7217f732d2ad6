//! Recognition of simple plane-curve singularities.
//!
//! A germ that is semi-quasihomogeneous for one of the standard A/D/E
//! weight systems and whose weight-one part defines an isolated
//! singularity has the corresponding simple type.  For double points the
//! type is decided automatically: after normalizing the tangent, the
//! unique power-series branch of `df/dx = 0` through the origin is
//! computed by Newton iteration on truncated series, and the order of `f`
//! restricted to that branch is the Milnor number plus one.
//!
//! The projective scan locates all singular points of a homogeneous curve
//! with coordinates in the working field by exact elimination, classifies
//! each double point, and certifies that candidate coordinates outside
//! the field carried by spurious resultant factors support no singular
//! point.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Embedding, MPoly, QuadElem, Rat, TruncSeries};
use crate::geometry::{embed_univar, find_roots};

/// A simple singularity type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    A(u32),
    D(u32),
    E(u8),
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityClass::A(m) => write!(f, "A{m}"),
            SingularityClass::D(m) => write!(f, "D{m}"),
            SingularityClass::E(m) => write!(f, "E{m}"),
        }
    }
}

/// A weight on the two germ variables, with the simple type it detects.
#[derive(Clone, Debug)]
pub struct WeightSystem {
    pub w0: Rat,
    pub w1: Rat,
    pub tag: Option<SingularityClass>,
}

impl WeightSystem {
    /// Weight `(1/2, 1/(m+1))` detecting type `A_m`.
    pub fn a(m: u32) -> WeightSystem {
        WeightSystem {
            w0: rat(1, 2),
            w1: rat(1, i64::from(m) + 1),
            tag: Some(SingularityClass::A(m)),
        }
    }

    /// Weight `(1/(m-1), (m-2)/(2(m-1)))` detecting type `D_m` (`m >= 4`).
    pub fn d(m: u32) -> WeightSystem {
        let m = i64::from(m);
        WeightSystem {
            w0: rat(1, m - 1),
            w1: rat(m - 2, 2 * (m - 1)),
            tag: Some(SingularityClass::D(m as u32)),
        }
    }

    /// Weights `(1/3, 1/4)`, `(1/3, 2/9)`, `(1/3, 1/5)` detecting the
    /// three exceptional types.
    pub fn e(m: u8) -> WeightSystem {
        let (w0, w1) = match m {
            6 => (rat(1, 3), rat(1, 4)),
            7 => (rat(1, 3), rat(2, 9)),
            8 => (rat(1, 3), rat(1, 5)),
            _ => panic!("exceptional type must be 6, 7 or 8"),
        };
        WeightSystem {
            w0,
            w1,
            tag: Some(SingularityClass::E(m)),
        }
    }

    pub fn custom(w0: Rat, w1: Rat) -> WeightSystem {
        WeightSystem { w0, w1, tag: None }
    }

    /// Weight of the monomial `x^i y^j`.
    pub fn weight(&self, i: u32, j: u32) -> Rat {
        &self.w0 * rat_int(i64::from(i)) + &self.w1 * rat_int(i64::from(j))
    }
}

/// A polynomial split by monomial weight relative to 1.
#[derive(Clone, Debug)]
pub struct WeightParts {
    pub below: MPoly,
    pub equal: MPoly,
    pub above: MPoly,
}

/// Split `f` by the weight of each monomial in `xvar`, `yvar`.
pub fn weight_parts(f: &MPoly, xvar: &str, yvar: &str, w: &WeightSystem) -> Result<WeightParts> {
    for v in f.vars() {
        if v != xvar && v != yvar {
            return Err(Error::input(format!(
                "germ polynomial has unexpected variable {v}"
            )));
        }
    }
    let d = f.field_d();
    let mut below = MPoly::zero(d);
    let mut equal = MPoly::zero(d);
    let mut above = MPoly::zero(d);
    let one = rat_int(1);
    for (exps, c) in f.terms() {
        let mut i = 0;
        let mut j = 0;
        for (k, &e) in exps.iter().enumerate() {
            if f.vars()[k] == xvar {
                i = e;
            } else if f.vars()[k] == yvar {
                j = e;
            }
        }
        let weight = w.weight(i, j);
        let mono = MPoly::var(xvar, d)
            .pow(i)
            .mul(&MPoly::var(yvar, d).pow(j))
            .mul_scalar(c);
        if weight < one {
            below = below.add(&mono);
        } else if weight == one {
            equal = equal.add(&mono);
        } else {
            above = above.add(&mono);
        }
    }
    Ok(WeightParts {
        below,
        equal,
        above,
    })
}

/// Is `f` semi-quasihomogeneous for `w`: no monomials of weight below
/// one, and a squarefree weight-one part (squarefreeness is exactly the
/// isolatedness of the quasihomogeneous germ)?
pub fn is_semi_quasihomogeneous(
    f: &MPoly,
    xvar: &str,
    yvar: &str,
    w: &WeightSystem,
) -> Result<bool> {
    let parts = weight_parts(f, xvar, yvar, w)?;
    if !parts.below.is_zero() {
        return Ok(false);
    }
    if parts.equal.is_zero() {
        return Ok(false);
    }
    let fx = parts.equal.derivative(xvar);
    let fy = parts.equal.derivative(yvar);
    let g = parts.equal.gcd(&fx).gcd(&fy);
    Ok(g.is_constant())
}

/// The outcome of classifying one singular germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularityVerdict {
    /// Certified simple type; `series_order` is the truncation order that
    /// decided it.
    Simple {
        class: SingularityClass,
        series_order: u32,
    },
    Inconclusive {
        reason: String,
    },
}

impl SingularityVerdict {
    pub fn class(&self) -> Option<SingularityClass> {
        match self {
            SingularityVerdict::Simple { class, .. } => Some(*class),
            SingularityVerdict::Inconclusive { .. } => None,
        }
    }

    fn inconclusive(reason: impl Into<String>) -> SingularityVerdict {
        SingularityVerdict::Inconclusive {
            reason: reason.into(),
        }
    }
}

impl fmt::Display for SingularityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityVerdict::Simple { class, .. } => write!(f, "{class}"),
            SingularityVerdict::Inconclusive { reason } => {
                write!(f, "inconclusive({reason})")
            }
        }
    }
}

fn coeff2(f: &MPoly, xvar: &str, yvar: &str, i: u32, j: u32) -> QuadElem {
    f.coeff_of(&[(xvar, i), (yvar, j)])
}

/// Classify the germ of `f` at the origin as `A_m` when it is a double
/// point; reports why it cannot when it is not.
pub fn recognize_a(f: &MPoly, xvar: &str, yvar: &str) -> Result<SingularityVerdict> {
    for v in f.vars() {
        if v != xvar && v != yvar {
            return Err(Error::input(format!(
                "germ polynomial has unexpected variable {v}"
            )));
        }
    }
    if !coeff2(f, xvar, yvar, 0, 0).is_zero() {
        return Ok(SingularityVerdict::inconclusive(
            "curve does not pass through the point",
        ));
    }
    if !coeff2(f, xvar, yvar, 1, 0).is_zero() || !coeff2(f, xvar, yvar, 0, 1).is_zero() {
        return Ok(SingularityVerdict::inconclusive("curve is smooth at the point"));
    }
    let c20 = coeff2(f, xvar, yvar, 2, 0);
    let c11 = coeff2(f, xvar, yvar, 1, 1);
    let c02 = coeff2(f, xvar, yvar, 0, 2);
    if c20.is_zero() && c11.is_zero() && c02.is_zero() {
        return Ok(SingularityVerdict::inconclusive(
            "multiplicity exceeds two; supply a weight system",
        ));
    }
    // Arrange a nonzero x^2 coefficient: swap the variables, or shear
    // y -> y + x when only the mixed term is present.
    let d = f.field_d();
    let mut g = f.clone();
    let mut xv = xvar.to_string();
    let mut yv = yvar.to_string();
    if c20.is_zero() {
        if !c02.is_zero() {
            std::mem::swap(&mut xv, &mut yv);
        } else {
            let shear = MPoly::var(&yv, d).add(&MPoly::var(&xv, d));
            g = g.substitute(&yv, &shear);
        }
    }
    let fx = g.derivative(&xv);
    let fxx = fx.derivative(&xv);
    let total = g.total_degree().unwrap_or(2);
    let milnor_bound = ((total.saturating_sub(1)) * (total.saturating_sub(1))).max(4) as usize;
    let mut order = 16usize;
    loop {
        order = order.min(milnor_bound + 2);
        match branch_order(&g, &fx, &fxx, &xv, &yv, order)? {
            Some(ord) => {
                // The quadratic part is nonzero, so the order is at least
                // two; order m + 1 means type A_m.
                return Ok(SingularityVerdict::Simple {
                    class: SingularityClass::A(ord as u32 - 1),
                    series_order: order as u32,
                });
            }
            None => {
                if order >= milnor_bound + 2 {
                    return Ok(SingularityVerdict::inconclusive(format!(
                        "restriction to the critical branch vanishes to order {order}: \
                         non-isolated or beyond the degree bound"
                    )));
                }
                order *= 2;
            }
        }
    }
}

/// Order in `y` of `f` restricted to the branch `x = s(y)` on which
/// `df/dx` vanishes, computed mod `y^order`; `None` if it vanishes to the
/// truncation order.
fn branch_order(
    f: &MPoly,
    fx: &MPoly,
    fxx: &MPoly,
    xvar: &str,
    yvar: &str,
    order: usize,
) -> Result<Option<usize>> {
    let d = f.field_d();
    let mut s = TruncSeries::zero(order, d);
    let steps = order.ilog2() as usize + 2;
    for _ in 0..steps {
        let num = s.eval_poly(fx, xvar, yvar);
        if num.is_zero() {
            break;
        }
        let den = s.eval_poly(fxx, xvar, yvar);
        if den.coeff(0).is_zero() {
            return Err(Error::certificate(
                "singularity",
                "second derivative is not a unit on the critical branch",
            ));
        }
        s = s.sub(&num.div(&den));
    }
    if !s.eval_poly(fx, xvar, yvar).is_zero() {
        return Err(Error::certificate(
            "singularity",
            "Newton iteration for the critical branch did not converge",
        ));
    }
    Ok(s.eval_poly(f, xvar, yvar).ord())
}

/// Classify the germ of `f` at the point `(px, py)`.
pub fn recognize_a_at(
    f: &MPoly,
    xvar: &str,
    yvar: &str,
    px: &QuadElem,
    py: &QuadElem,
) -> Result<SingularityVerdict> {
    let d = f.field_d().max(px.d).max(py.d);
    let sx = MPoly::var(xvar, d).add(&MPoly::constant(px.clone()));
    let sy = MPoly::var(yvar, d).add(&MPoly::constant(py.clone()));
    let shifted = f.substitute(xvar, &sx).substitute(yvar, &sy);
    recognize_a(&shifted, xvar, yvar)
}

/// One singular point of a projective plane curve.
#[derive(Clone, Debug)]
pub struct SingularPoint {
    /// Projective coordinates, normalized so the last nonzero one is 1.
    pub coords: [QuadElem; 3],
    pub verdict: SingularityVerdict,
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}:{}:{}] {}",
            self.coords[0], self.coords[1], self.coords[2], self.verdict
        )
    }
}

/// All singular points of the projective curve `F(x, y, z) = 0` with
/// coordinates in the working field, each classified.  Fails if a
/// residual elimination factor cannot be certified free of singular
/// points.
pub fn singular_locus(f: &MPoly, xvar: &str, yvar: &str, zvar: &str) -> Result<Vec<SingularPoint>> {
    for v in f.vars() {
        if v != xvar && v != yvar && v != zvar {
            return Err(Error::input(format!(
                "curve polynomial has unexpected variable {v}"
            )));
        }
    }
    let total = f
        .total_degree()
        .ok_or_else(|| Error::input("curve polynomial is zero"))?;
    for (exps, _) in f.terms() {
        if exps.iter().sum::<u32>() != total {
            return Err(Error::input("curve polynomial is not homogeneous"));
        }
    }
    let d = f.field_d();
    let one = MPoly::from_int(1, d);
    let mut points = Vec::new();

    // Affine chart third-coordinate = 1 covers everything off the line at
    // infinity.
    let chart = f.substitute(zvar, &one);
    for (px, py) in affine_singular_points(&chart, xvar, yvar)? {
        let verdict = recognize_a_at(&chart, xvar, yvar, &px, &py)?;
        points.push(SingularPoint {
            coords: [px, py, QuadElem::from_int(1, d)],
            verdict,
        });
    }

    // On the line at infinity with second coordinate nonzero: common
    // roots in x of the three partials restricted there.
    let zero = MPoly::zero(d);
    let fx = f.derivative(xvar).substitute(yvar, &one).substitute(zvar, &zero);
    let fy = f.derivative(yvar).substitute(yvar, &one).substitute(zvar, &zero);
    let fz = f.derivative(zvar).substitute(yvar, &one).substitute(zvar, &zero);
    let g = fx.gcd(&fy).gcd(&fz);
    if !g.is_constant() {
        let chart_y = f.substitute(yvar, &one);
        let (roots, cofactor) = field_roots(&g, xvar)?;
        if !cofactor.is_constant() {
            return Err(Error::assumption(
                "singular points at infinity with coordinates outside the working field",
            ));
        }
        for r in roots {
            let verdict = recognize_a_at(&chart_y, xvar, zvar, &r, &QuadElem::from_int(0, d))?;
            points.push(SingularPoint {
                coords: [r, QuadElem::from_int(1, d), QuadElem::from_int(0, d)],
                verdict,
            });
        }
    }

    // The single remaining point [1:0:0].
    let origin = BTreeMap::from([
        (xvar.to_string(), QuadElem::from_int(1, d)),
        (yvar.to_string(), QuadElem::from_int(0, d)),
        (zvar.to_string(), QuadElem::from_int(0, d)),
    ]);
    if f.derivative(xvar).eval(&origin).is_zero()
        && f.derivative(yvar).eval(&origin).is_zero()
        && f.derivative(zvar).eval(&origin).is_zero()
    {
        let chart_x = f.substitute(xvar, &one);
        let verdict = recognize_a(&chart_x, yvar, zvar)?;
        points.push(SingularPoint {
            coords: [
                QuadElem::from_int(1, d),
                QuadElem::from_int(0, d),
                QuadElem::from_int(0, d),
            ],
            verdict,
        });
    }
    Ok(points)
}

/// Singular points of an affine curve with coordinates in the working
/// field, by resultant elimination with exact verification.
fn affine_singular_points(
    f: &MPoly,
    xvar: &str,
    yvar: &str,
) -> Result<Vec<(QuadElem, QuadElem)>> {
    let fx = f.derivative(xvar);
    let fy = f.derivative(yvar);
    if !f.gcd(&fx).gcd(&fy).is_constant() {
        return Err(Error::assumption(
            "curve is non-reduced: singular locus is positive-dimensional",
        ));
    }
    let x_candidates = eliminate(f, &fx, &fy, xvar, yvar)?;
    let y_candidates = eliminate(f, &fx, &fy, yvar, xvar)?;
    let mut out = Vec::new();
    for px in &x_candidates {
        for py in &y_candidates {
            let point = BTreeMap::from([
                (xvar.to_string(), px.clone()),
                (yvar.to_string(), py.clone()),
            ]);
            if f.eval(&point).is_zero()
                && fx.eval(&point).is_zero()
                && fy.eval(&point).is_zero()
            {
                out.push((px.clone(), py.clone()));
            }
        }
    }
    Ok(out)
}

/// Candidate values of `keep` at common zeros of the system, as verified
/// field elements; residual factors are certified spurious by the
/// opposite elimination or rejected.
fn eliminate(
    f: &MPoly,
    fx: &MPoly,
    fy: &MPoly,
    keep: &str,
    drop: &str,
) -> Result<Vec<QuadElem>> {
    let r1 = f.resultant(fx, drop);
    let r2 = f.resultant(fy, drop);
    let g = match (r1.is_zero(), r2.is_zero()) {
        (false, false) => r1.gcd(&r2),
        (false, true) => r1,
        (true, false) => r2,
        (true, true) => {
            return Err(Error::assumption(
                "both elimination resultants vanish identically",
            ))
        }
    };
    if g.is_constant() {
        return Ok(Vec::new());
    }
    let (roots, cofactor) = field_roots(&g, keep)?;
    if !cofactor.is_constant() {
        // A residual factor only carries a singular point if the system
        // restricted to it still has a common zero in the other variable.
        let s1 = f.resultant(&cofactor, keep);
        let s2 = fx.resultant(&cofactor, keep);
        let s3 = fy.resultant(&cofactor, keep);
        let h = s1.gcd(&s2).gcd(&s3);
        if !h.is_constant() {
            return Err(Error::assumption(
                "possible singular points with coordinates outside the working field",
            ));
        }
    }
    Ok(roots)
}

/// Best rational approximation of `x` by continued fractions, with a
/// denominator bound; used only to propose candidates that are then
/// verified exactly.
fn approx_rat(x: f64, max_den: i64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if (x - p1 as f64 / q1 as f64).abs() < 1e-10 {
            break;
        }
        if frac.abs() < 1e-12 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a >= max_den as f64 {
            break;
        }
        frac = inv - a;
        let a = a as i64;
        let (p2, q2) = (a.checked_mul(p1)?.checked_add(p0)?, a.checked_mul(q1)?.checked_add(q0)?);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    if (x - p1 as f64 / q1 as f64).abs() < 1e-8 {
        Some(rat(p1, q1))
    } else {
        None
    }
}

/// All roots of a univariate polynomial that lie in the working field,
/// found numerically in both embeddings, reconstructed as candidates and
/// verified exactly; returns them with the exact cofactor left after
/// dividing the corresponding linear factors out.
fn field_roots(p: &MPoly, var: &str) -> Result<(Vec<QuadElem>, MPoly)> {
    let d = p.field_d();
    let plus = embed_univar(p, var, Embedding::Plus)?;
    let roots_plus = find_roots(&plus);
    let mut candidates: Vec<QuadElem> = Vec::new();
    let mut push_candidate = |c: QuadElem| {
        if !candidates.contains(&c) {
            candidates.push(c);
        }
    };
    if d == 0 {
        for r in &roots_plus {
            if r.im.abs() > 1e-7 * (1.0 + r.re.abs()) {
                continue;
            }
            if let Some(u) = approx_rat(r.re, 1_000_000) {
                push_candidate(QuadElem::from_rat(u, 0));
            }
        }
    } else {
        let minus = embed_univar(p, var, Embedding::Minus)?;
        let roots_minus = find_roots(&minus);
        let sqrt_d = (d as f64).sqrt();
        for rp in &roots_plus {
            if rp.im.abs() > 1e-7 * (1.0 + rp.re.abs()) {
                continue;
            }
            for rm in &roots_minus {
                if rm.im.abs() > 1e-7 * (1.0 + rm.re.abs()) {
                    continue;
                }
                let u = (rp.re + rm.re) / 2.0;
                let v = (rp.re - rm.re) / (2.0 * sqrt_d);
                let (Some(u), Some(v)) = (approx_rat(u, 1_000_000), approx_rat(v, 1_000_000))
                else {
                    continue;
                };
                push_candidate(QuadElem::new(u, v, d));
            }
        }
    }
    let x = MPoly::var(var, d);
    let mut cofactor = p.clone();
    let mut roots = Vec::new();
    for c in candidates {
        let factor = x.sub(&MPoly::constant(c.clone()));
        let mut hit = false;
        while let Some(q) = cofactor.div_exact(&factor) {
            cofactor = q;
            hit = true;
        }
        if hit {
            roots.push(c);
        }
    }
    Ok((roots, cofactor))
}
