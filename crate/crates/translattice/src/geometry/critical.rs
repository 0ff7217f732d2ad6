//! Critical values of the branch curve over the base line.
//!
//! The discriminant of `f` with respect to the fiber variable is computed
//! exactly over `Q(sqrt d)`, stripped of the removed-fiber factors, and made
//! squarefree; its complex roots are then located numerically and certified
//! simple and well separated.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{embed_f64, Embedding, MPoly, QuadElem};

/// The critical values of the projection, with the exact polynomial they
/// annihilate.
#[derive(Clone, Debug)]
pub struct CriticalValues {
    /// Exact squarefree polynomial in the base variable whose roots are the
    /// non-removed critical values.
    pub disc: MPoly,
    /// Complex roots, sorted by real part then imaginary part.
    pub values: Vec<Complex64>,
}

/// Divide as many factors `(z - r)` out of `p` as exactly possible;
/// returns the quotient and the multiplicity removed.
fn strip_root(p: &MPoly, zvar: &str, r: &QuadElem) -> (MPoly, u32) {
    let z = MPoly::var(zvar, p.field_d().max(r.d));
    let factor = z.sub(&MPoly::constant(r.clone()));
    let mut q = p.clone();
    let mut mult = 0;
    while let Some(next) = q.div_exact(&factor) {
        q = next;
        mult += 1;
    }
    (q, mult)
}

/// Compute the non-removed critical values of `f(y, z) = 0` under the
/// projection to `z`.
pub fn critical_values(
    f: &MPoly,
    yvar: &str,
    zvar: &str,
    removed: &[QuadElem],
    emb: Embedding,
) -> Result<CriticalValues> {
    for v in f.vars() {
        if v != yvar && v != zvar {
            return Err(Error::input(format!(
                "branch polynomial has unexpected variable {v}"
            )));
        }
    }
    let deg_y = f.degree(yvar).unwrap_or(0);
    if deg_y < 2 {
        return Err(Error::input(format!(
            "branch polynomial must have degree >= 2 in {yvar}, got {deg_y}"
        )));
    }
    // A base-dependent leading coefficient would make fibers degenerate at
    // its zeros, which the chain model does not handle.
    let lc = f.leading_coeff(yvar);
    if !lc.is_constant() {
        return Err(Error::assumption(format!(
            "leading coefficient in {yvar} must be constant, got {lc}"
        )));
    }
    let fy = f.derivative(yvar);
    let disc_raw = f.resultant(&fy, yvar);
    if disc_raw.is_zero() {
        return Err(Error::assumption(
            "discriminant vanishes identically: branch curve is non-reduced",
        ));
    }
    let mut disc = disc_raw;
    for r in removed {
        let (q, _mult) = strip_root(&disc, zvar, r);
        disc = q;
    }
    if disc.is_constant() {
        return Ok(CriticalValues {
            disc,
            values: Vec::new(),
        });
    }
    // Repeated non-removed roots mean a fiber with a worse-than-nodal
    // degeneration (or two nodes over one base point); refuse.
    let sf = disc.squarefree_part(zvar);
    if sf.degree(zvar) != disc.degree(zvar) {
        return Err(Error::assumption(
            "discriminant has a repeated non-removed root: \
             a critical fiber is not a simple node",
        ));
    }
    let coeffs = embed_univar(&sf, zvar, emb)?;
    let mut values = polish_all(&find_roots(&coeffs), &coeffs)?;
    certify_separation(&values, &coeffs)?;
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(CriticalValues { disc: sf, values })
}

/// Embed the coefficients of a univariate exact polynomial into `f64`.
pub fn embed_univar(p: &MPoly, var: &str, emb: Embedding) -> Result<Vec<f64>> {
    let coeffs = p.as_univar(var);
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if !c.is_constant() {
            return Err(Error::input(format!(
                "polynomial is not univariate in {var}: coefficient {c}"
            )));
        }
        out.push(embed_f64(&c.constant_value(), emb));
    }
    while out.len() > 1 && out.last() == Some(&0.0) {
        out.pop();
    }
    Ok(out)
}

pub fn eval_poly(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

pub fn eval_poly_deriv(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * k as f64;
    }
    acc
}

/// All complex roots by the Durand-Kerner iteration.
pub fn find_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs
        .iter()
        .map(|&c| Complex64::new(c / lead, 0.0))
        .collect();
    // Initial guesses on a circle of radius set by the coefficient bound,
    // at a deliberately irrational angle offset to avoid symmetric stalls.
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let num = eval_monic(&monic, roots[i]);
            let step = num / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 * radius {
            break;
        }
    }
    roots
}

fn eval_monic(monic: &[Complex64], z: Complex64) -> Complex64 {
    let n = monic.len() - 1;
    let mut acc = Complex64::new(1.0, 0.0);
    for k in (0..n).rev() {
        acc = acc * z + monic[k];
    }
    acc
}

/// Newton-polish each root; errors if any fails to converge.
fn polish_all(roots: &[Complex64], coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let scale = roots.iter().map(|r| r.norm()).fold(1.0f64, f64::max);
    let mut out = Vec::with_capacity(roots.len());
    for &r0 in roots {
        let mut r = r0;
        let mut ok = false;
        for _ in 0..50 {
            let p = eval_poly(coeffs, r);
            let dp = eval_poly_deriv(coeffs, r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            r -= step;
            if step.norm() < 1e-14 * scale.max(r.norm()) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::certificate(
                "critical-values",
                format!("Newton polishing did not converge near {r0}"),
            ));
        }
        out.push(r);
    }
    Ok(out)
}

fn certify_separation(roots: &[Complex64], coeffs: &[f64]) -> Result<()> {
    let scale = roots.iter().map(|r| r.norm()).fold(1.0f64, f64::max);
    for (i, a) in roots.iter().enumerate() {
        for b in roots.iter().skip(i + 1) {
            if (a - b).norm() < 1e-8 * scale {
                return Err(Error::certificate(
                    "critical-values",
                    format!(
                        "two critical values within {:.3e} of each other near {a}",
                        (a - b).norm()
                    ),
                ));
            }
        }
        let dp = eval_poly_deriv(coeffs, *a);
        if dp.norm() < 1e-8 {
            return Err(Error::certificate(
                "critical-values",
                format!("derivative nearly vanishes at root {a}: simplicity uncertified"),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;

    #[test]
    fn cusp_family_critical_values() {
        // f = y^3 - 3y + z: critical values where disc vanishes: z = +-2.
        let f = parse_poly("y^3 - 3*y + z", 0).unwrap();
        let cv = critical_values(&f, "y", "z", &[], Embedding::Plus).unwrap();
        assert_eq!(cv.values.len(), 2);
        assert!((cv.values[0] - Complex64::new(-2.0, 0.0)).norm() < 1e-9);
        assert!((cv.values[1] - Complex64::new(2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn removed_fiber_factors_are_stripped() {
        // f = y^5 - z: disc has only the root z = 0; removing it leaves none.
        let f = parse_poly("y^5 - z", 0).unwrap();
        let removed = [QuadElem::from_int(0, 0)];
        let cv = critical_values(&f, "y", "z", &removed, Embedding::Plus).unwrap();
        assert!(cv.values.is_empty());
        // Without removal the repeated root is refused.
        let err = critical_values(&f, "y", "z", &[], Embedding::Plus).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn nonconstant_leading_coefficient_is_refused() {
        let f = parse_poly("z*y^2 + y + 1", 0).unwrap();
        let err = critical_values(&f, "y", "z", &[], Embedding::Plus).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn quadratic_field_discriminant() {
        // f = y^2 - (z - a) over Q(sqrt 5): critical value at z = sqrt(5).
        let f = parse_poly("y^2 - z + a", 5).unwrap();
        let cv = critical_values(&f, "y", "z", &[], Embedding::Plus).unwrap();
        assert_eq!(cv.values.len(), 1);
        assert!((cv.values[0].re - 5f64.sqrt()).abs() < 1e-12);
        let cv_minus = critical_values(&f, "y", "z", &[], Embedding::Minus).unwrap();
        assert!((cv_minus.values[0].re + 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn durand_kerner_finds_known_roots() {
        // (z - 1)(z - 2)(z - 3) = z^3 - 6z^2 + 11z - 6
        let coeffs = [-6.0, 11.0, -6.0, 1.0];
        let mut roots = find_roots(&coeffs);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - Complex64::new(want, 0.0)).norm() < 1e-9);
        }
    }
}
