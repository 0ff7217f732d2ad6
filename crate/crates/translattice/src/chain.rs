//! Second homology of the open covering surface and its intersection form.
//!
//! The surface deformation-retracts onto a base fiber together with tube
//! chains over the loops around removed fibers and thimbles over the paths
//! to the critical values.  Second homology is the kernel of the boundary
//! map from the free module on these chains to the first homology of the
//! base fiber, where a tube over basis cycle `a` bounds `M(a) - a` (with
//! `M` the loop monodromy) and a thimble bounds minus its vanishing cycle.
//!
//! The intersection form on that kernel is computed by pairing every chain
//! against a perturbed copy of the whole system, pushed off to a nearby
//! base point.  All crossings of the underlying paths happen in a small
//! disk around the base, where each perturbed path starts with a circular
//! connector sweeping from the push-off direction to the germ of its
//! original.  A crossing contributes minus the local path sign times the
//! fiber pairing of the two transported cycle classes; a thimble meets its
//! own perturbed copy once more at the critical point, with local number
//! `-1`.  The result is independent of the push-off direction and of the
//! sweep orientation on the kernel, which is checked by tests.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix};
use crate::fiber::{FiberModel, HomologyAction};
use crate::lattice::{invert_unimodular, BinaryForm};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// The family of tube chains over one loop around a removed fiber, one
/// tube per fiber basis cycle.
#[derive(Clone, Debug)]
pub struct LoopChains {
    /// Departure angle of the loop at the base point.
    pub out_germ: f64,
    /// Return angle of the loop at the base point.
    pub in_germ: f64,
    /// Monodromy action on fiber homology along the loop.
    pub monodromy: HomologyAction,
}

/// The thimble over one path from the base to a critical value.
#[derive(Clone, Debug)]
pub struct Thimble {
    /// Departure angle of the path at the base point.
    pub germ: f64,
    /// Class of the vanishing cycle, transported to the base fiber.
    pub cycle: Vec<i64>,
}

/// The chain description of the surface: a fiber model plus the tube and
/// thimble data gathered by tracking.
pub struct ChainSystem {
    fiber: FiberModel,
    loops: Vec<LoopChains>,
    thimbles: Vec<Thimble>,
}

/// Which end of an oriented germ ray at the base a crossing hits, and
/// hence which transported cycle class the crossed chain carries there.
#[derive(Clone, Copy)]
enum GermRef {
    /// Loop departure: the tube carries the untransported basis cycle.
    LoopOut(usize),
    /// Loop return: the tube carries the monodromy image of its cycle.
    LoopIn(usize),
    Thimble(usize),
}

/// Choice of the push-off used to compute intersection numbers.  Any valid
/// choice gives the same form on the kernel of the boundary map.
#[derive(Clone, Copy, Debug)]
pub struct Perturbation {
    /// Direction from the base point to the pushed-off base point.
    pub theta0: f64,
    /// Run every connector sweep the long way around instead of the short
    /// way; the two differ by a contractible loop around the base.
    pub long_way: bool,
}

/// One circular connector of a perturbed path: traversed from `from` to
/// `to`, counterclockwise or clockwise.
struct Sweep {
    from: f64,
    to: f64,
    ccw: bool,
}

fn wrap(x: f64) -> f64 {
    let r = x % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// Counterclockwise angular distance from `from` to `to`, in `[0, tau)`.
fn ccw_dist(from: f64, to: f64) -> f64 {
    wrap(to - from)
}

impl Sweep {
    /// Short-way connector (ties broken clockwise), direction flipped when
    /// `long_way` is set.
    fn new(from: f64, to: f64, long_way: bool) -> Sweep {
        let short_ccw = ccw_dist(from, to) < std::f64::consts::PI;
        Sweep {
            from,
            to,
            ccw: short_ccw != long_way,
        }
    }

    /// Does the traversed open arc cross the ray at angle `g`?
    fn crosses(&self, g: f64) -> bool {
        let (a, b) = if self.ccw {
            (self.from, self.to)
        } else {
            (self.to, self.from)
        };
        let d = ccw_dist(a, b);
        let dg = ccw_dist(a, g);
        0.0 < dg && dg < d
    }

    /// Local intersection sign of the crossed germ ray with this sweep:
    /// determinant of (ray direction, sweep direction), where a loop
    /// return ray points inward.
    fn sign(&self, inward: bool) -> i64 {
        let s = if self.ccw { 1 } else { -1 };
        if inward {
            -s
        } else {
            s
        }
    }
}

impl ChainSystem {
    pub fn new(
        fiber: FiberModel,
        loops: Vec<LoopChains>,
        thimbles: Vec<Thimble>,
    ) -> Result<ChainSystem> {
        let r = fiber.rank();
        for l in &loops {
            if l.monodromy.rank() != r {
                return Err(Error::input(
                    "loop monodromy rank does not match the fiber model",
                ));
            }
        }
        for t in &thimbles {
            if t.cycle.len() != r {
                return Err(Error::input(
                    "vanishing cycle length does not match the fiber model",
                ));
            }
            if t.cycle.iter().all(|&v| v == 0) {
                return Err(Error::certificate(
                    "chains",
                    "a vanishing cycle is zero",
                ));
            }
        }
        let sys = ChainSystem {
            fiber,
            loops,
            thimbles,
        };
        let germs = sys.germ_angles();
        for i in 0..germs.len() {
            for j in i + 1..germs.len() {
                let d = ccw_dist(germs[i], germs[j]).min(ccw_dist(germs[j], germs[i]));
                if d < 1e-9 {
                    return Err(Error::certificate(
                        "chains",
                        "two path germs at the base coincide",
                    ));
                }
            }
        }
        Ok(sys)
    }

    pub fn fiber(&self) -> &FiberModel {
        &self.fiber
    }

    /// Rank of the free module of chains: one tube per loop and fiber
    /// basis cycle, plus one thimble per critical value.
    pub fn chain_rank(&self) -> usize {
        self.loops.len() * self.fiber.rank() + self.thimbles.len()
    }

    fn tube_index(&self, i: usize, nu: usize) -> usize {
        i * self.fiber.rank() + nu
    }

    fn thimble_index(&self, j: usize) -> usize {
        self.loops.len() * self.fiber.rank() + j
    }

    fn germ_angles(&self) -> Vec<f64> {
        let mut g = Vec::new();
        for l in &self.loops {
            g.push(wrap(l.out_germ));
            g.push(wrap(l.in_germ));
        }
        for t in &self.thimbles {
            g.push(wrap(t.germ));
        }
        g
    }

    /// Boundary map from chains to base-fiber homology, as a matrix whose
    /// columns are the boundaries of the chain basis.
    pub fn boundary_matrix(&self) -> IntMatrix {
        let r = self.fiber.rank();
        let mut m = IntMatrix::zero(r, self.chain_rank());
        for (i, l) in self.loops.iter().enumerate() {
            let mono = l.monodromy.matrix();
            for nu in 0..r {
                for row in 0..r {
                    let v = mono[row][nu] - i64::from(row == nu);
                    m.set(row, self.tube_index(i, nu), Int::from(v));
                }
            }
        }
        for (j, t) in self.thimbles.iter().enumerate() {
            for row in 0..r {
                m.set(row, self.thimble_index(j), Int::from(-t.cycle[row]));
            }
        }
        m
    }

    /// A basis of second homology: a saturated basis of the kernel of the
    /// boundary map, as matrix columns in chain coordinates.
    pub fn homology_basis(&self) -> IntMatrix {
        self.boundary_matrix().integer_kernel()
    }

    /// A push-off direction in the middle of the widest angular gap
    /// between path germs at the base.
    pub fn default_perturbation(&self) -> Perturbation {
        let mut germs = self.germ_angles();
        germs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut best = (f64::NEG_INFINITY, 0.0);
        for (k, &g) in germs.iter().enumerate() {
            let next = germs[(k + 1) % germs.len()];
            let gap = ccw_dist(g, next);
            if gap > best.0 {
                best = (gap, wrap(g + gap / 2.0));
            }
        }
        Perturbation {
            theta0: best.1,
            long_way: false,
        }
    }

    /// Pairing of every chain against every perturbed chain.  Rows index
    /// the original chain basis, columns the perturbed copy of the same
    /// basis; the matrix need not be symmetric off the kernel of the
    /// boundary map.
    pub fn pairing_matrix(&self, pert: &Perturbation) -> Result<IntMatrix> {
        let r = self.fiber.rank();
        let n = self.chain_rank();
        let theta0 = wrap(pert.theta0);
        let germs: Vec<(f64, GermRef)> = self
            .loops
            .iter()
            .enumerate()
            .flat_map(|(i, l)| {
                [
                    (wrap(l.out_germ), GermRef::LoopOut(i)),
                    (wrap(l.in_germ), GermRef::LoopIn(i)),
                ]
            })
            .chain(
                self.thimbles
                    .iter()
                    .enumerate()
                    .map(|(j, t)| (wrap(t.germ), GermRef::Thimble(j))),
            )
            .collect();
        for (g, _) in &germs {
            let d = ccw_dist(*g, theta0).min(ccw_dist(theta0, *g));
            if d < 1e-9 {
                return Err(Error::certificate(
                    "pairing",
                    "push-off direction coincides with a path germ",
                ));
            }
        }
        let mut a = IntMatrix::zero(n, n);
        // Every crossing lies on a connector sweep of a perturbed path.
        // `primed` enumerates (sweep, columns with their cycle classes).
        let crossings = |a: &mut IntMatrix, sweep: &Sweep, cols: &[(usize, Vec<i64>)]| {
            for &(g, germ_ref) in &germs {
                if !sweep.crosses(g) {
                    continue;
                }
                let (inward, rows): (bool, Vec<(usize, Vec<i64>)>) = match germ_ref {
                    GermRef::LoopOut(i) => (
                        false,
                        (0..r)
                            .map(|nu| (self.tube_index(i, nu), self.fiber.basis_cycle(nu)))
                            .collect(),
                    ),
                    GermRef::LoopIn(i) => (
                        true,
                        (0..r)
                            .map(|nu| {
                                let cls = self.loops[i]
                                    .monodromy
                                    .apply(&self.fiber.basis_cycle(nu));
                                (self.tube_index(i, nu), cls)
                            })
                            .collect(),
                    ),
                    GermRef::Thimble(j) => (
                        false,
                        vec![(self.thimble_index(j), self.thimbles[j].cycle.clone())],
                    ),
                };
                let s = sweep.sign(inward);
                for (row, cls) in &rows {
                    for (col, cls_p) in cols {
                        let contrib = -s * self.fiber.pair(cls, cls_p);
                        if contrib != 0 {
                            let cur = a.get(*row, *col).clone();
                            a.set(*row, *col, cur + Int::from(contrib));
                        }
                    }
                }
            }
        };
        for (i, l) in self.loops.iter().enumerate() {
            let start_cols: Vec<(usize, Vec<i64>)> = (0..r)
                .map(|nu| (self.tube_index(i, nu), self.fiber.basis_cycle(nu)))
                .collect();
            let end_cols: Vec<(usize, Vec<i64>)> = (0..r)
                .map(|nu| {
                    let cls = l.monodromy.apply(&self.fiber.basis_cycle(nu));
                    (self.tube_index(i, nu), cls)
                })
                .collect();
            let s1 = Sweep::new(theta0, wrap(l.out_germ), pert.long_way);
            let s2 = Sweep::new(wrap(l.in_germ), theta0, pert.long_way);
            // The perturbed loop is a parallel push-off on one fixed side,
            // so if its start connector arrives on one side of the
            // departure germ, it returns on the opposite side of the
            // return germ; when the return connector then starts by moving
            // back across the return ray, that is one more crossing of the
            // loop with its own perturbed copy.
            let arrives_ccw_side = !s1.ccw;
            let returns_ccw_side = !arrives_ccw_side;
            let crosses_own_return = returns_ccw_side != s2.ccw;
            crossings(&mut a, &s1, &start_cols);
            crossings(&mut a, &s2, &end_cols);
            if crosses_own_return {
                let s = s2.sign(true);
                for nu in 0..r {
                    let cls = l.monodromy.apply(&self.fiber.basis_cycle(nu));
                    for (col, cls_p) in &end_cols {
                        let contrib = -s * self.fiber.pair(&cls, cls_p);
                        if contrib != 0 {
                            let row = self.tube_index(i, nu);
                            let cur = a.get(row, *col).clone();
                            a.set(row, *col, cur + Int::from(contrib));
                        }
                    }
                }
            }
        }
        for (j, t) in self.thimbles.iter().enumerate() {
            let cols = vec![(self.thimble_index(j), t.cycle.clone())];
            crossings(&mut a, &Sweep::new(theta0, wrap(t.germ), pert.long_way), &cols);
        }
        // A thimble meets its own perturbed copy at the critical point.
        for j in 0..self.thimbles.len() {
            let k = self.thimble_index(j);
            let cur = a.get(k, k).clone();
            a.set(k, k, cur - Int::from(1));
        }
        Ok(a)
    }

    /// The pairing evaluated on the columns of `vectors`: the matrix
    /// `V^T A V`.
    pub fn gram_on(&self, vectors: &IntMatrix, pert: &Perturbation) -> Result<IntMatrix> {
        let a = self.pairing_matrix(pert)?;
        Ok(vectors.transpose().mul(&a).mul(vectors))
    }

    /// The intersection form on second homology, with its basis.  Fails if
    /// the computed pairing is not symmetric on the kernel, which would
    /// mean the chain data is inconsistent.
    pub fn intersection_form(&self, pert: &Perturbation) -> Result<(IntMatrix, IntMatrix)> {
        let kernel = self.homology_basis();
        let gram = self.gram_on(&kernel, pert)?;
        for i in 0..gram.rows() {
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::certificate(
                        "pairing",
                        "intersection form is not symmetric on the homology kernel",
                    ));
                }
            }
        }
        Ok((kernel, gram))
    }
}

/// The outcome of the homology computation: the rank data, the binary
/// quadratic form of the radical quotient, and its reduction.
#[derive(Clone, Debug)]
pub struct LatticeSummary {
    /// Rank of second homology.
    pub h2_rank: usize,
    /// Rank of the radical of the intersection form.
    pub radical_rank: usize,
    /// Gram matrix of the intersection form on the homology basis.
    pub gram: IntMatrix,
    /// Gram matrix of the quotient by the radical.
    pub quotient_gram: IntMatrix,
    /// The quotient as a reduced positive-definite even binary form.
    pub reduced: BinaryForm,
}

/// Quotient a symmetric integer Gram matrix by its radical; returns the
/// quotient Gram on a complement basis.
pub fn radical_quotient(gram: &IntMatrix) -> Result<(usize, IntMatrix)> {
    let k = gram.rows();
    let radical = gram.integer_kernel();
    let s = radical.cols();
    if s == 0 {
        return Ok((0, gram.clone()));
    }
    let (d, u, _v) = radical.snf();
    for i in 0..s {
        if d.get(i, i).abs() != Int::from(1) {
            return Err(Error::certificate(
                "lattice",
                "radical basis is not primitive",
            ));
        }
    }
    // d = u * radical * v, so the radical lies in the span of the first
    // `s` columns of u^{-1}; the remaining columns map to a basis of the
    // quotient.
    let uinv = invert_unimodular(&u);
    let mut comp = IntMatrix::zero(k, k - s);
    for j in 0..k - s {
        for i in 0..k {
            comp.set(i, j, uinv.get(i, s + j).clone());
        }
    }
    Ok((s, comp.transpose().mul(gram).mul(&comp)))
}

/// Full reduction of a chain system to its rank-two transcendental form.
pub fn transcendental_lattice(
    system: &ChainSystem,
    pert: &Perturbation,
) -> Result<LatticeSummary> {
    let (kernel, gram) = system.intersection_form(pert)?;
    let (radical_rank, quotient) = radical_quotient(&gram)?;
    if quotient.rows() != 2 {
        return Err(Error::certificate(
            "lattice",
            format!(
                "radical quotient has rank {}, expected 2",
                quotient.rows()
            ),
        ));
    }
    let form = BinaryForm::from_gram(
        quotient.get(0, 0).clone(),
        quotient.get(0, 1).clone(),
        quotient.get(1, 1).clone(),
    )?;
    let (reduced, _) = form.reduce_gl2()?;
    Ok(LatticeSummary {
        h2_rank: kernel.cols(),
        radical_rank,
        gram,
        quotient_gram: quotient,
        reduced,
    })
}
