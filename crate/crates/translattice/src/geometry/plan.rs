//! Planning of loops and approach paths in the punctured base line.
//!
//! All paths start at a base point on the positive real axis chosen closer
//! to the origin than every special point.  A removed fiber gets a lasso:
//! an outgoing spoke, a full counterclockwise circle, and a returning spoke
//! whose germs at the base are split to either side of the target
//! direction.  A critical value gets a polyline that stops a calibrated
//! distance short of it, detouring counterclockwise around any other
//! special point that sits too close to the straight route.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// What a planned path is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    /// Encircles the removed fiber with this index once, counterclockwise.
    Loop { removed_index: usize },
    /// Runs from the base to just short of this critical value.
    Approach { critical_index: usize },
}

/// A planned path: a polyline in the base line plus its germ data at the
/// base point.
#[derive(Clone, Debug)]
pub struct PlannedPath {
    pub kind: PathKind,
    /// Vertices, starting at the base point; loops also end there.
    pub polyline: Vec<Complex64>,
    /// Angle at the base of the outgoing segment.
    pub out_germ: f64,
    /// Angle at the base of the incoming segment (loops only).
    pub in_germ: Option<f64>,
}

/// The full plan for one embedding of the problem.
#[derive(Clone, Debug)]
pub struct PathPlan {
    pub base: Complex64,
    pub paths: Vec<PlannedPath>,
    /// For each approach path (by critical index): distance short of the
    /// critical value at which tracking stops.
    pub stop_distance: Vec<f64>,
}

const ARC_STEP: f64 = std::f64::consts::PI / 18.0; // 10 degrees

/// Smallest angular clearance required between departure germs at the base.
const GERM_CLEARANCE: f64 = 0.02;

/// Push `nominal` away from every angle in `used` by alternating offsets
/// until it has clearance.
fn fan_out(nominal: f64, used: &[f64]) -> f64 {
    let conflicts = |g: f64| {
        used.iter().any(|&u| {
            let mut d = (g - u).abs() % (2.0 * std::f64::consts::PI);
            if d > std::f64::consts::PI {
                d = 2.0 * std::f64::consts::PI - d;
            }
            d < GERM_CLEARANCE
        })
    };
    if !conflicts(nominal) {
        return nominal;
    }
    for k in 1..64 {
        let step = 0.05 * k as f64;
        for cand in [nominal + step, nominal - step] {
            if !conflicts(cand) {
                return cand;
            }
        }
    }
    nominal
}

fn angle(z: Complex64) -> f64 {
    z.im.atan2(z.re)
}

/// Distance from point `p` to segment `[a, b]`.
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Minimum distance between two segments.
pub fn segment_distance(a0: Complex64, a1: Complex64, b0: Complex64, b1: Complex64) -> f64 {
    // Sampling is robust enough at the tolerances involved here.
    let mut best = f64::INFINITY;
    const N: usize = 16;
    for i in 0..=N {
        let t = i as f64 / N as f64;
        let pa = a0 + (a1 - a0) * t;
        best = best.min(point_segment_distance(pa, b0, b1));
        let pb = b0 + (b1 - b0) * t;
        best = best.min(point_segment_distance(pb, a0, a1));
    }
    best
}

fn min_distance_to_others(points: &[Complex64], i: usize, base: Complex64) -> f64 {
    let mut d = (points[i] - base).norm();
    for (j, q) in points.iter().enumerate() {
        if j != i {
            d = d.min((points[i] - q).norm());
        }
    }
    d
}

/// Counterclockwise arc around `center` from angle `a0` to `a1` (increasing;
/// add `2 pi` to `a1` as needed before calling).
fn arc_points(center: Complex64, radius: f64, a0: f64, a1: f64) -> Vec<Complex64> {
    assert!(a1 >= a0);
    let steps = ((a1 - a0) / ARC_STEP).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|k| {
            let t = a0 + (a1 - a0) * k as f64 / steps as f64;
            center + Complex64::from_polar(radius, t)
        })
        .collect()
}

/// Build the polyline from `start` to `end`, detouring counterclockwise
/// around any obstacle closer than its exclusion radius to the route.
fn route_with_detours(
    start: Complex64,
    end: Complex64,
    obstacles: &[(Complex64, f64)],
) -> Vec<Complex64> {
    // Obstacles that actually obstruct, ordered along the segment.
    let dir = end - start;
    let len = dir.norm();
    if len == 0.0 {
        return vec![start, end];
    }
    let unit = dir / len;
    let mut hits: Vec<(f64, Complex64, f64)> = Vec::new();
    for &(q, r) in obstacles {
        let t = ((q - start).re * unit.re + (q - start).im * unit.im).clamp(0.0, len);
        if t <= 1e-12 || t >= len - 1e-12 {
            continue;
        }
        let foot = start + unit * t;
        if (q - foot).norm() < r {
            hits.push((t, q, r));
        }
    }
    hits.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut pts = vec![start];
    let mut cur = start;
    let tau = 2.0 * std::f64::consts::PI;
    for (_, q, r) in hits {
        let tq = ((q - cur).re * unit.re + (q - cur).im * unit.im).max(0.0);
        let foot = cur + unit * tq;
        let h = (q - foot).norm();
        let half = (r * r - h * h).max(0.0).sqrt();
        let entry = foot - unit * half.max(r * 0.2);
        let exit = foot + unit * half.max(r * 0.2);
        let a0 = angle(entry - q);
        let a1 = angle(exit - q);
        // Bulge toward the side on which the straight route already passes
        // the obstacle, so the detour stays clear of routes through the
        // opposite side; counterclockwise when the route passes dead center.
        let mid = if h > 1e-12 * r {
            angle(foot - q)
        } else {
            a0 + 0.5 * ((a1 - a0).rem_euclid(tau))
        };
        let ccw_sweep = (a1 - a0).rem_euclid(tau);
        let mid_off_ccw = (mid - a0).rem_euclid(tau);
        let arc = if mid_off_ccw <= ccw_sweep {
            // Counterclockwise pass goes through the bulge side.
            arc_points(q, r, a0, a0 + ccw_sweep)
        } else {
            // Go clockwise instead: reverse a counterclockwise arc.
            let cw_sweep = tau - ccw_sweep;
            let mut rev = arc_points(q, r, a1, a1 + cw_sweep);
            rev.reverse();
            rev
        };
        pts.extend(arc);
        cur = *pts.last().unwrap();
    }
    pts.push(end);
    pts
}

/// Plan all loops and approach paths for the given special points.
pub fn plan_paths(critical: &[Complex64], removed: &[Complex64]) -> Result<PathPlan> {
    let mut specials: Vec<Complex64> = Vec::new();
    specials.extend_from_slice(removed);
    specials.extend_from_slice(critical);
    if specials.is_empty() {
        return Err(Error::input("no special points: nothing to encircle"));
    }
    let min_norm = specials
        .iter()
        .map(|p| p.norm())
        .filter(|&n| n > 1e-12)
        .fold(f64::INFINITY, f64::min);
    // With every special point at the origin there is no scale to respect;
    // any base point off the origin works.
    let min_norm = if min_norm.is_finite() { min_norm } else { 10.0 };
    let base = Complex64::new(min_norm / 10.0, 0.0);

    let n_removed = removed.len();
    let mut paths = Vec::new();
    let mut stop_distance = vec![0.0; critical.len()];

    // Exclusion radii, indexed like `specials`.
    let radii: Vec<f64> = (0..specials.len())
        .map(|i| 0.35 * min_distance_to_others(&specials, i, base))
        .collect();

    for (ri, &r) in removed.iter().enumerate() {
        let rho = 0.6 * radii[ri];
        let psi = angle(base - r);
        let gamma = 0.35; // radians; splits the two spokes
        let p_out = r + Complex64::from_polar(rho, psi + gamma);
        let p_in = r + Complex64::from_polar(rho, psi - gamma);
        let mut polyline = vec![base, p_out];
        let mut circle = arc_points(r, rho, psi + gamma, psi - gamma + 2.0 * std::f64::consts::PI);
        polyline.append(&mut circle);
        polyline.push(p_in);
        polyline.push(base);
        let out_germ = angle(p_out - base);
        let in_germ = angle(p_in - base);
        paths.push(PlannedPath {
            kind: PathKind::Loop { removed_index: ri },
            polyline,
            out_germ,
            in_germ: Some(in_germ),
        });
    }

    // Germ angles already claimed at the base (the loop spokes).
    let mut used_germs: Vec<f64> = paths
        .iter()
        .flat_map(|p| {
            std::iter::once(p.out_germ).chain(p.in_germ)
        })
        .collect();

    for (ci, &p) in critical.iter().enumerate() {
        let si = n_removed + ci;
        let local = min_distance_to_others(&specials, si, base);
        let stop = 1e-6 * local;
        stop_distance[ci] = stop;
        let dir = (p - base) / (p - base).norm();
        let end = p - dir * stop;
        let obstacles: Vec<(Complex64, f64)> = specials
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != si)
            .map(|(j, &q)| (q, radii[j]))
            .collect();
        // Fan the departure direction away from germs already in use, so
        // collinear targets still get disjoint routes.
        let nominal = angle(end - base);
        let germ = fan_out(nominal, &used_germs);
        let polyline = if (germ - nominal).abs() < 1e-12 {
            route_with_detours(base, end, &obstacles)
        } else {
            let reach = specials
                .iter()
                .map(|q| (q - base).norm())
                .fold(f64::INFINITY, f64::min);
            let s = (0.25 * (end - base).norm()).min(0.5 * reach);
            let waypoint = base + Complex64::from_polar(s, germ);
            let mut pts = vec![base];
            pts.extend(route_with_detours(waypoint, end, &obstacles));
            pts
        };
        let out_germ = angle(polyline[1] - base);
        used_germs.push(out_germ);
        paths.push(PlannedPath {
            kind: PathKind::Approach { critical_index: ci },
            polyline,
            out_germ,
            in_germ: None,
        });
    }

    check_germ_separation(&paths)?;
    check_disjointness(&paths, base)?;
    Ok(PathPlan {
        base,
        paths,
        stop_distance,
    })
}

/// All germ rays at the base must be separated; overlapping departures mean
/// the targets are collinear with the base and the plan is unusable.
fn check_germ_separation(paths: &[PlannedPath]) -> Result<()> {
    let mut germs: Vec<f64> = Vec::new();
    for p in paths {
        germs.push(p.out_germ);
        if let Some(g) = p.in_germ {
            germs.push(g);
        }
    }
    for i in 0..germs.len() {
        for j in i + 1..germs.len() {
            let mut diff = (germs[i] - germs[j]).abs();
            diff = diff.min(2.0 * std::f64::consts::PI - diff);
            if diff < 1e-4 {
                return Err(Error::certificate(
                    "path-planning",
                    format!(
                        "two path germs at the base coincide (angles {:.6} and {:.6})",
                        germs[i], germs[j]
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// Away from the shared base point, distinct paths must keep a positive
/// distance from each other.
fn check_disjointness(paths: &[PlannedPath], base: Complex64) -> Result<()> {
    let clear = 1e-7;
    let near_base = |z: Complex64| (z - base).norm() < 1e-9;
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let pa = &paths[i].polyline;
            let pb = &paths[j].polyline;
            for sa in pa.windows(2) {
                for sb in pb.windows(2) {
                    // Skip segment pairs that legitimately meet at the base.
                    if (near_base(sa[0]) || near_base(sa[1]))
                        && (near_base(sb[0]) || near_base(sb[1]))
                    {
                        continue;
                    }
                    let d = segment_distance(sa[0], sa[1], sb[0], sb[1]);
                    if d < clear {
                        return Err(Error::certificate(
                            "path-planning",
                            format!(
                                "paths {i} and {j} come within {d:.3e} of each other \
                                 away from the base"
                            ),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_encircles_origin_counterclockwise() {
        let removed = [Complex64::new(0.0, 0.0)];
        let critical = [
            Complex64::new(0.42, 0.0),
            Complex64::new(0.24, 0.24),
            Complex64::new(0.24, -0.24),
        ];
        let plan = plan_paths(&critical, &removed).unwrap();
        assert!(plan.base.re > 0.0 && plan.base.im == 0.0);
        // The base point is strictly closer to the origin than any special point.
        for p in &critical {
            assert!(plan.base.norm() < p.norm());
        }
        let lasso = &plan.paths[0];
        assert_eq!(lasso.kind, PathKind::Loop { removed_index: 0 });
        // Winding number of the polyline around the origin is +1.
        let mut total = 0.0;
        for w in lasso.polyline.windows(2) {
            let a0 = w[0].im.atan2(w[0].re);
            let a1 = w[1].im.atan2(w[1].re);
            let mut d = a1 - a0;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            total += d;
        }
        assert!((total - 2.0 * std::f64::consts::PI).abs() < 1e-6);
        // Out germ just under 180 degrees, in germ just over (mod 2 pi).
        let out = lasso.out_germ.to_degrees();
        let ing = lasso.in_germ.unwrap().to_degrees();
        assert!(out > 150.0 && out < 180.0, "out germ {out}");
        assert!(ing < -150.0 || ing > 180.0, "in germ {ing}");
    }

    #[test]
    fn approach_paths_stop_short_and_stay_apart() {
        let removed = [Complex64::new(0.0, 0.0)];
        let critical = [
            Complex64::new(0.42, 0.0),
            Complex64::new(0.24, 0.24),
            Complex64::new(0.24, -0.24),
        ];
        let plan = plan_paths(&critical, &removed).unwrap();
        for (ci, &p) in critical.iter().enumerate() {
            let path = plan
                .paths
                .iter()
                .find(|q| q.kind == PathKind::Approach { critical_index: ci })
                .unwrap();
            let end = *path.polyline.last().unwrap();
            let d = (end - p).norm();
            assert!(d > 0.0 && (d - plan.stop_distance[ci]).abs() < 1e-12);
        }
    }

    #[test]
    fn detour_avoids_intermediate_obstacle() {
        // Target behind an obstacle on the straight route.
        let start = Complex64::new(0.0, 0.0);
        let end = Complex64::new(10.0, 0.0);
        let obstacle = (Complex64::new(5.0, 0.1), 1.0);
        let pts = route_with_detours(start, end, &[obstacle]);
        assert!(pts.len() > 2);
        for w in pts.windows(2) {
            let d = point_segment_distance(obstacle.0, w[0], w[1]);
            assert!(d > 0.8, "detour came within {d} of the obstacle");
        }
    }

    #[test]
    fn collinear_real_targets_get_fanned_disjoint_routes() {
        // Two positive real critical values: the second departure is fanned
        // away from the first and detours around it, and the full plan still
        // passes the disjointness scan.
        let removed = [];
        let critical = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        let plan = plan_paths(&critical, &removed).unwrap();
        let germs: Vec<f64> = plan.paths.iter().map(|p| p.out_germ).collect();
        assert!((germs[0] - germs[1]).abs() > 0.01);
    }
}
