//! Certified tracking of branch points along paths in the base line.
//!
//! The branch points of a fiber are the roots in the fiber variable.  They
//! are kept in sorted strand order (by `Re(conj(mu) * y)`, ties by the
//! imaginary part); every accepted step may reorder at most one adjacent
//! pair, which is emitted as a braid letter.  Steps are accepted only when
//! both the Newton correction and the strand motion stay below a third of
//! the smallest strand gap, and are bisected otherwise.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{embed_f64, Embedding, MPoly};
use crate::fiber::BraidLetter;

use super::critical::find_roots;

/// Tracks the branch points of `f(y, z) = 0` over movements of `z`.
#[derive(Clone, Debug)]
pub struct Tracker {
    /// `coeffs[k][l]` is the coefficient of `y^k z^l`.
    coeffs: Vec<Vec<f64>>,
    n: usize,
    mu: Complex64,
}

/// Result of tracking one path.
#[derive(Clone, Debug)]
pub struct TrackOutcome {
    /// Accumulated braid word; the first letter happened first.
    pub word: Vec<BraidLetter>,
    /// Final strand positions, in strand (sorted) order.
    pub roots: Vec<Complex64>,
}

impl Tracker {
    pub fn new(f: &MPoly, yvar: &str, zvar: &str, emb: Embedding) -> Result<Self> {
        Tracker::with_direction(f, yvar, zvar, emb, Complex64::new(1.0, 0.0))
    }

    /// Use a rotated sorting direction `mu`; needed when the default hits a
    /// non-generic strand order along some path.
    pub fn with_direction(
        f: &MPoly,
        yvar: &str,
        zvar: &str,
        emb: Embedding,
        mu: Complex64,
    ) -> Result<Self> {
        for v in f.vars() {
            if v != yvar && v != zvar {
                return Err(Error::input(format!(
                    "branch polynomial has unexpected variable {v}"
                )));
            }
        }
        let n = f.degree(yvar).unwrap_or(0) as usize;
        if n < 2 {
            return Err(Error::input("tracking needs fiber degree >= 2"));
        }
        let by_y = f.as_univar(yvar);
        let mut coeffs = Vec::with_capacity(by_y.len());
        for cy in &by_y {
            let by_z = cy.as_univar(zvar);
            let mut row = Vec::with_capacity(by_z.len());
            for c in &by_z {
                if !c.is_constant() {
                    return Err(Error::input("coefficient is not constant"));
                }
                row.push(embed_f64(&c.constant_value(), emb));
            }
            coeffs.push(row);
        }
        Ok(Tracker {
            coeffs,
            n,
            mu: mu / mu.norm(),
        })
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    /// Coefficients in `y` (ascending) of the fiber polynomial at `z`.
    fn coeffs_at(&self, z: Complex64) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|row| {
                let mut acc = Complex64::new(0.0, 0.0);
                for &c in row.iter().rev() {
                    acc = acc * z + c;
                }
                acc
            })
            .collect()
    }

    fn eval(&self, y: Complex64, cz: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in cz.iter().rev() {
            acc = acc * y + c;
        }
        acc
    }

    fn eval_dy(&self, y: Complex64, cz: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in cz.iter().enumerate().skip(1).rev() {
            acc = acc * y + c * k as f64;
        }
        acc
    }

    fn eval_dz(&self, y: Complex64, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for row in self.coeffs.iter().rev() {
            let mut dz = Complex64::new(0.0, 0.0);
            for (l, &c) in row.iter().enumerate().skip(1).rev() {
                dz = dz * z + c * l as f64;
            }
            acc = acc * y + dz;
        }
        acc
    }

    fn key(&self, y: Complex64) -> (f64, f64) {
        let w = self.mu.conj() * y;
        (w.re, w.im)
    }

    fn sorted_ok(&self, roots: &[Complex64]) -> bool {
        roots.windows(2).all(|w| self.key(w[0]) <= self.key(w[1]))
    }

    /// Branch points at `z`, in strand order; fails if the fiber is (nearly)
    /// degenerate or the strand order is non-generic there.
    pub fn roots_at(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let cz = self.coeffs_at(z);
        if cz.last().map(|c| c.norm()).unwrap_or(0.0) < 1e-12 {
            return Err(Error::certificate(
                "tracking",
                format!("leading coefficient (nearly) vanishes at z = {z}"),
            ));
        }
        let mut roots = find_roots_complex(&cz);
        polish_roots(&mut roots, &cz, self)?;
        roots.sort_by(|a, b| {
            let ka = self.key(*a);
            let kb = self.key(*b);
            ka.partial_cmp(&kb).unwrap()
        });
        let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        for w in roots.windows(2) {
            if (w[0] - w[1]).norm() < 1e-10 * scale {
                return Err(Error::certificate(
                    "tracking",
                    format!("branch points nearly collide at z = {z}"),
                ));
            }
        }
        Ok(roots)
    }

    fn min_gap(&self, roots: &[Complex64]) -> f64 {
        let mut g = f64::INFINITY;
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                g = g.min((roots[i] - roots[j]).norm());
            }
        }
        g
    }

    /// One attempted step from `z0` to `z1`; `roots` in strand order at `z0`.
    /// On success returns the corrected roots at `z1` (same strand order as
    /// the input, not yet re-sorted).
    fn step(&self, roots: &[Complex64], z0: Complex64, z1: Complex64) -> Option<Vec<Complex64>> {
        let gap = self.min_gap(roots);
        let budget = gap / 3.0;
        let dz = z1 - z0;
        let cz0 = self.coeffs_at(z0);
        // Euler predictor: dy/dz = -f_z / f_y.
        let mut pred: Vec<Complex64> = roots
            .iter()
            .map(|&y| {
                let fy = self.eval_dy(y, &cz0);
                if fy.norm() > 1e-300 {
                    y - self.eval_dz(y, z0) / fy * dz
                } else {
                    y
                }
            })
            .collect();
        let cz1 = self.coeffs_at(z1);
        // Aberth-style simultaneous correction keeps strands apart.
        let mut worst = f64::INFINITY;
        for _ in 0..6 {
            worst = 0.0;
            for i in 0..pred.len() {
                let p = self.eval(pred[i], &cz1);
                let dp = self.eval_dy(pred[i], &cz1);
                let mut repel = Complex64::new(0.0, 0.0);
                for j in 0..pred.len() {
                    if j != i {
                        repel += 1.0 / (pred[i] - pred[j]);
                    }
                }
                let newton = if dp.norm() > 1e-300 { p / dp } else { p };
                let denom = Complex64::new(1.0, 0.0) - newton * repel;
                let step = if denom.norm() > 1e-12 {
                    newton / denom
                } else {
                    newton
                };
                pred[i] -= step;
                worst = worst.max(step.norm());
            }
            if worst < 1e-13 * (1.0 + self.min_gap(&pred)) {
                break;
            }
        }
        // Acceptance: the correction converged and no strand moved by more
        // than a third of the initial gap.
        let scale = 1.0 + pred.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if worst > 1e-11 * scale {
            return None;
        }
        for (y0, y1) in roots.iter().zip(&pred) {
            if (y0 - y1).norm() > budget {
                return None;
            }
        }
        Some(pred)
    }

    /// Track along a polyline, starting from `start` (strand order at the
    /// first vertex).  Returns the braid word and the final strand positions.
    pub fn track_polyline(
        &self,
        polyline: &[Complex64],
        start: &[Complex64],
    ) -> Result<TrackOutcome> {
        let mut roots = start.to_vec();
        if !self.sorted_ok(&roots) {
            return Err(Error::certificate(
                "tracking",
                "initial strands are not in sorted order",
            ));
        }
        let mut word = Vec::new();
        for seg in polyline.windows(2) {
            self.track_segment(seg[0], seg[1], &mut roots, &mut word)?;
        }
        Ok(TrackOutcome { word, roots })
    }

    fn track_segment(
        &self,
        z0: Complex64,
        z1: Complex64,
        roots: &mut Vec<Complex64>,
        word: &mut Vec<BraidLetter>,
    ) -> Result<()> {
        let seg_len = (z1 - z0).norm();
        if seg_len == 0.0 {
            return Ok(());
        }
        let mut t = 0.0f64;
        let mut h = 1.0f64;
        let at = |t: f64| z0 + (z1 - z0) * t;
        while t < 1.0 {
            let h_eff = h.min(1.0 - t);
            let zt = at(t);
            let zn = at(t + h_eff);
            let stepped = self.step(roots, zt, zn);
            let new_roots = match stepped {
                Some(r) => r,
                None => {
                    h *= 0.5;
                    if h < 1e-13 {
                        return Err(Error::certificate(
                            "tracking",
                            format!("step size underflow near z = {zt}"),
                        ));
                    }
                    continue;
                }
            };
            // How did the strand order change?
            match self.order_change(&new_roots) {
                OrderChange::None => {
                    *roots = new_roots;
                    t += h_eff;
                    h = (h * 1.6).min(1.0);
                }
                OrderChange::Disjoint(pairs) => {
                    // Crossings at disjoint positions commute, so a single
                    // step may legitimately contain several at once (a
                    // symmetric configuration makes them exactly
                    // simultaneous).  Positive letter when the strand from
                    // the left passes below the one from the right.
                    let mut r = new_roots;
                    let mut letters = Vec::new();
                    for i in pairs {
                        let left_im = self.key(r[i]).1;
                        let right_im = self.key(r[i + 1]).1;
                        let letter = if left_im <= right_im {
                            BraidLetter::new(i)
                        } else {
                            BraidLetter::inv(i)
                        };
                        letters.push(letter);
                        r.swap(i, i + 1);
                    }
                    if !self.sorted_ok(&r) {
                        // A strand overtook more than one neighbor in this
                        // step; resolve by halving like any entangled
                        // crossing.
                        h *= 0.5;
                        if h < 1e-13 {
                            return Err(Error::assumption(
                                "non-generic strand order: two crossings cannot be \
                                 separated; rotate the sorting direction"
                                    .to_string(),
                            ));
                        }
                        continue;
                    }
                    word.extend(letters);
                    *roots = r;
                    t += h_eff;
                    h = (h * 1.2).min(1.0);
                }
                OrderChange::Complex => {
                    h *= 0.5;
                    if h < 1e-13 {
                        return Err(Error::assumption(
                            "non-generic strand order: two crossings cannot be \
                             separated; rotate the sorting direction"
                                .to_string(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn order_change(&self, roots: &[Complex64]) -> OrderChange {
        let mut inversions = Vec::new();
        for i in 0..roots.len() - 1 {
            if self.key(roots[i]) > self.key(roots[i + 1]) {
                inversions.push(i);
            }
        }
        if inversions.is_empty() {
            return OrderChange::None;
        }
        // Inversions at consecutive positions involve a common strand: three
        // strands meeting cannot be resolved in one step.
        if inversions.windows(2).any(|w| w[1] == w[0] + 1) {
            return OrderChange::Complex;
        }
        OrderChange::Disjoint(inversions)
    }

    /// Certify that exactly one adjacent strand pair is collapsing at the
    /// end of an approach path: the closest pair must be adjacent and at
    /// least `factor` times closer than any other pair.  Returns the pair
    /// index.
    pub fn certify_collision(&self, roots: &[Complex64], factor: f64) -> Result<usize> {
        let n = roots.len();
        let mut best = (f64::INFINITY, 0usize, 0usize);
        let mut second = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                let d = (roots[i] - roots[j]).norm();
                if d < best.0 {
                    second = best.0;
                    best = (d, i, j);
                } else if d < second {
                    second = d;
                }
            }
        }
        let (d, i, j) = best;
        if j != i + 1 {
            return Err(Error::certificate(
                "collision",
                format!("closest strands {i} and {j} are not adjacent"),
            ));
        }
        if d * factor > second {
            return Err(Error::certificate(
                "collision",
                format!(
                    "collapsing pair not separated: closest {d:.3e}, next {second:.3e}"
                ),
            ));
        }
        Ok(i)
    }
}

enum OrderChange {
    None,
    Disjoint(Vec<usize>),
    Complex,
}

fn find_roots_complex(cz: &[Complex64]) -> Vec<Complex64> {
    // Reuse the real-coefficient root finder when possible, else inline
    // Durand-Kerner over complex coefficients.
    if cz.iter().all(|c| c.im == 0.0) {
        let real: Vec<f64> = cz.iter().map(|c| c.re).collect();
        return find_roots(&real);
    }
    let n = cz.len() - 1;
    let lead = cz[n];
    let monic: Vec<Complex64> = cz.iter().map(|&c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
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
            let mut p = Complex64::new(1.0, 0.0);
            for k in (0..n).rev() {
                p = p * roots[i] + monic[k];
            }
            let step = p / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 * radius {
            break;
        }
    }
    roots
}

fn polish_roots(roots: &mut [Complex64], cz: &[Complex64], tr: &Tracker) -> Result<()> {
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for r in roots.iter_mut() {
        let mut ok = false;
        for _ in 0..50 {
            let p = tr.eval(*r, cz);
            let dp = tr.eval_dy(*r, cz);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *r -= step;
            if step.norm() < 1e-14 * scale.max(r.norm()) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::certificate(
                "tracking",
                "root polishing failed at the base fiber",
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;
    use crate::fiber::FiberModel;
    use crate::geometry::plan_paths;

    fn lasso_polyline(base: f64) -> Vec<Complex64> {
        // A hand-built counterclockwise loop around the origin from `base`.
        let b = Complex64::new(base, 0.0);
        let rho = base / 2.0;
        let mut pts = vec![b];
        for k in 0..=36 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 36.0;
            pts.push(Complex64::from_polar(rho, theta));
        }
        pts.push(b);
        pts
    }

    #[test]
    fn square_root_loop_gives_one_positive_crossing() {
        let f = parse_poly("y^2 - z", 0).unwrap();
        let tr = Tracker::new(&f, "y", "z", Embedding::Plus).unwrap();
        let base = Complex64::new(1.0, 0.0);
        let start = tr.roots_at(base).unwrap();
        let out = tr.track_polyline(&lasso_polyline(1.0), &start).unwrap();
        assert_eq!(out.word, vec![BraidLetter::new(0)]);
        // The loop permutes the two branch points.
        assert!((out.roots[0] - start[0]).norm() < 1e-8);
        assert!((out.roots[1] - start[1]).norm() < 1e-8);
    }

    #[test]
    fn reversed_loop_gives_the_inverse_crossing() {
        let f = parse_poly("y^2 - z", 0).unwrap();
        let tr = Tracker::new(&f, "y", "z", Embedding::Plus).unwrap();
        let base = Complex64::new(1.0, 0.0);
        let start = tr.roots_at(base).unwrap();
        let mut rev = lasso_polyline(1.0);
        rev.reverse();
        let out = tr.track_polyline(&rev, &start).unwrap();
        assert_eq!(out.word, vec![BraidLetter::inv(0)]);
    }

    #[test]
    fn loop_then_reversed_loop_acts_trivially() {
        let f = parse_poly("y^3 - 3*y + z", 0).unwrap();
        let tr = Tracker::new(&f, "y", "z", Embedding::Plus).unwrap();
        let base = Complex64::new(0.2, 0.0);
        let start = tr.roots_at(base).unwrap();
        let mut both = lasso_polyline(0.2);
        let mut rev = lasso_polyline(0.2);
        rev.reverse();
        both.extend_from_slice(&rev[1..]);
        let out = tr.track_polyline(&both, &start).unwrap();
        let fib = FiberModel::new(3).unwrap();
        assert!(fib.word_action(&out.word).is_identity());
        for (a, b) in out.roots.iter().zip(&start) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn quintic_rotation_loop_acts_with_order_ten() {
        // y^5 = z: a loop around the removed fiber rotates the five branch
        // points by one fifth of a turn; the homology action squares the
        // cyclic structure with the deck involution, so it has order 10 and
        // its fifth power is -1.
        let f = parse_poly("y^5 - z", 0).unwrap();
        // The regular pentagon of roots is mirror-symmetric, so the default
        // sorting direction ties; rotate it slightly.
        let mu = Complex64::from_polar(1.0, 0.3);
        let tr = Tracker::with_direction(&f, "y", "z", Embedding::Plus, mu).unwrap();
        let base = Complex64::new(1.0, 0.0);
        let start = tr.roots_at(base).unwrap();
        let out = tr.track_polyline(&lasso_polyline(1.0), &start).unwrap();
        let fib = FiberModel::new(5).unwrap();
        let a = fib.word_action(&out.word);
        let mut p = a.clone();
        for _ in 0..4 {
            p = a.after(&p);
        }
        // Fifth power is minus the identity.
        let r = p.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { -1 } else { 0 };
                assert_eq!(r[i][j], want, "entry ({i},{j})");
            }
        }
        assert!(p.after(&p).is_identity());
    }

    #[test]
    fn approach_to_fold_certifies_the_colliding_pair() {
        // y^3 - 3y + z near z = 2: roots ~ (-2, 1 - d, 1 + d).
        let f = parse_poly("y^3 - 3*y + z", 0).unwrap();
        let tr = Tracker::new(&f, "y", "z", Embedding::Plus).unwrap();
        let plan = plan_paths(
            &[Complex64::new(-2.0, 0.0), Complex64::new(2.0, 0.0)],
            &[],
        )
        .unwrap();
        let start = tr.roots_at(plan.base).unwrap();
        // The path toward +2 is the second approach.
        let path = plan
            .paths
            .iter()
            .find(|p| p.kind == crate::geometry::PathKind::Approach { critical_index: 1 })
            .unwrap();
        let out = tr.track_polyline(&path.polyline, &start).unwrap();
        let pair = tr.certify_collision(&out.roots, 10.0).unwrap();
        assert_eq!(pair, 1);
        // Sanity: the collapsing strands are both near y = 1.
        assert!((out.roots[1] - Complex64::new(1.0, 0.0)).norm() < 1e-2);
        assert!((out.roots[2] - Complex64::new(1.0, 0.0)).norm() < 1e-2);
    }
}
