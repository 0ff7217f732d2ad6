//! Problem files, the end-to-end computation, and JSON reports.
//!
//! A problem file describes a double plane: a branch curve over `Q(sqrt d)`
//! presented as a polynomial in a fiber variable and a base variable, a set
//! of removed fibers, and the real embedding(s) of the field to compute
//! with.  [`compute`] runs the whole method for each requested embedding —
//! critical values, path planning, certified root tracking, braid monodromy,
//! vanishing cycles, the chain-level intersection pairing, and the radical
//! quotient — and assembles a deterministic report.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{radical_quotient, ChainSystem, LoopChains, Thimble};
use crate::error::{Error, Result};
use crate::exact::{
    embed_f64, parse_poly_with, Embedding, IntMatrix, MPoly, PolyEnv, QuadElem,
};
use crate::fiber::{BraidLetter, FiberModel};
use crate::geometry::{critical_values, plan_paths, PathKind, PathPlan, Tracker};
use crate::lattice::{same_genus, BinaryForm, DiscriminantForm};

/// Which real embeddings of the coefficient field to compute with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingChoice {
    Plus,
    Minus,
    Both,
}

impl EmbeddingChoice {
    pub fn embeddings(self) -> Vec<Embedding> {
        match self {
            EmbeddingChoice::Plus => vec![Embedding::Plus],
            EmbeddingChoice::Minus => vec![Embedding::Minus],
            EmbeddingChoice::Both => vec![Embedding::Plus, Embedding::Minus],
        }
    }
}

impl std::str::FromStr for EmbeddingChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(EmbeddingChoice::Plus),
            "minus" => Ok(EmbeddingChoice::Minus),
            "both" => Ok(EmbeddingChoice::Both),
            other => Err(Error::input(format!(
                "embedding must be plus, minus or both, not {other}"
            ))),
        }
    }
}

/// A fully parsed and validated problem.
#[derive(Clone, Debug)]
pub struct ProblemFile {
    /// Field discriminant: 0 for the rationals, else squarefree `d > 1`.
    pub d: u64,
    /// Variable along the fibers of the projection.
    pub fiber_var: String,
    /// Variable of the base line.
    pub base_var: String,
    pub embedding: EmbeddingChoice,
    /// Base coordinates of the removed fibers.
    pub removed: Vec<QuadElem>,
    /// The branch curve, a polynomial in the two variables.
    pub branch: MPoly,
    /// Working precision in bits, recorded in reports.
    pub precision: u32,
}

#[derive(Deserialize)]
struct RawProblem {
    d: Option<u64>,
    fiber: String,
    projection: String,
    embedding: Option<String>,
    removed: Vec<String>,
    branch: String,
    precision: Option<u32>,
    polynomials: Option<BTreeMap<String, String>>,
}

fn identifiers(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() || bytes[i] == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(src[start..i].to_string());
        } else {
            i += 1;
        }
    }
    out
}

/// Resolve named polynomial definitions in dependency order; definitions
/// may reference each other but not cyclically.
fn resolve_polynomials(defs: &BTreeMap<String, String>, d: u64) -> Result<PolyEnv> {
    if defs.contains_key("a") {
        return Err(Error::input(
            "the name `a` is reserved for the square root of the field discriminant",
        ));
    }
    let mut env = PolyEnv::quadratic(d);
    let mut remaining: Vec<(&String, &String)> = defs.iter().collect();
    while !remaining.is_empty() {
        let mut next = Vec::new();
        let before = remaining.len();
        for (name, src) in remaining {
            let ready = identifiers(src)
                .iter()
                .all(|id| !defs.contains_key(id) || env.bindings.contains_key(id));
            if ready {
                let poly = parse_poly_with(src, &env)
                    .map_err(|e| Error::input(format!("in definition of {name}: {e}")))?;
                env.bind(name, poly);
            } else {
                next.push((name, src));
            }
        }
        if next.len() == before {
            let names: Vec<&str> = next.iter().map(|(n, _)| n.as_str()).collect();
            return Err(Error::input(format!(
                "cyclic polynomial definitions: {}",
                names.join(", ")
            )));
        }
        remaining = next;
    }
    Ok(env)
}

impl ProblemFile {
    pub fn from_toml_str(src: &str) -> Result<ProblemFile> {
        let raw: RawProblem = toml::from_str(src)
            .map_err(|e| Error::input(format!("problem file: {e}")))?;
        let d = raw.d.unwrap_or(0);
        let env = resolve_polynomials(&raw.polynomials.unwrap_or_default(), d)?;
        let branch = match env.bindings.get(&raw.branch) {
            Some(p) => p.clone(),
            None => parse_poly_with(&raw.branch, &env)
                .map_err(|e| Error::input(format!("branch polynomial: {e}")))?,
        };
        let mut removed = Vec::new();
        for r in &raw.removed {
            let p = parse_poly_with(r, &env)
                .map_err(|e| Error::input(format!("removed fiber {r}: {e}")))?;
            if !p.is_constant() {
                return Err(Error::input(format!(
                    "removed fiber {r} is not a field constant"
                )));
            }
            let c = p.coeff_of(&[]);
            if removed.contains(&c) {
                return Err(Error::input(format!("removed fiber {r} listed twice")));
            }
            removed.push(c);
        }
        let embedding = raw
            .embedding
            .as_deref()
            .unwrap_or("both")
            .parse::<EmbeddingChoice>()?;
        if raw.fiber == raw.projection {
            return Err(Error::input(
                "fiber and projection variables must be distinct",
            ));
        }
        Ok(ProblemFile {
            d,
            fiber_var: raw.fiber,
            base_var: raw.projection,
            embedding,
            removed,
            branch,
            precision: raw.precision.unwrap_or(53),
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<ProblemFile> {
        let src = std::fs::read_to_string(path)?;
        ProblemFile::from_toml_str(&src)
    }
}

/// A complex number in a report.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexEntry {
    fn from(z: Complex64) -> Self {
        ComplexEntry { re: z.re, im: z.im }
    }
}

/// Everything computed for one embedding.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub embedding: String,
    pub base_point: ComplexEntry,
    pub removed_fibers: Vec<ComplexEntry>,
    pub critical_values: Vec<ComplexEntry>,
    /// Rotation angle of the strand-sorting direction that succeeded.
    pub sort_direction: f64,
    pub loop_braid_words: Vec<String>,
    pub monodromy_matrices: Vec<Vec<Vec<i64>>>,
    pub approach_braid_words: Vec<String>,
    pub vanishing_cycles: Vec<Vec<i64>>,
    pub boundary_matrix: Vec<Vec<String>>,
    /// Kernel basis in Hermite-reduced column form (columns are classes).
    pub kernel_basis: Vec<Vec<String>>,
    pub h2_rank: usize,
    /// Gram matrix of the intersection form on the kernel basis.
    pub gram: Vec<Vec<String>>,
    pub radical_rank: usize,
    pub quotient_rank: usize,
    pub quotient_gram: Vec<Vec<String>>,
    /// Reduced positive-definite even binary form, when the quotient has
    /// rank two.
    pub reduced_form: Option<Vec<String>>,
    pub realness: Option<bool>,
    /// All reduced classes in the same genus as the result.
    pub genus: Option<Vec<Vec<String>>>,
    /// Invariant factors of the discriminant group of the quotient.
    pub discriminant_group: Option<Vec<String>>,
}

/// The full deterministic output of one run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub precision_bits: u32,
    /// Geometric hypotheses on the removed divisor that the method needs
    /// but cannot check from the inputs.
    pub assumptions: Vec<String>,
    pub branch: String,
    pub field_discriminant: u64,
    pub embeddings: Vec<EmbeddingReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn word_string(word: &[BraidLetter]) -> String {
    word.iter()
        .map(|l| {
            if l.inverse {
                format!("s{}^-1", l.gen + 1)
            } else {
                format!("s{}", l.gen + 1)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Tracking output for one embedding: loop words in removed-fiber order and
/// approach words with their certified collapsing pair, in critical order.
struct TrackedWords {
    loops: Vec<Vec<BraidLetter>>,
    approaches: Vec<(Vec<BraidLetter>, usize)>,
    strands: usize,
}

/// Factor by which the collapsing pair must beat the next-closest pair for
/// the collision certificate.
const COLLISION_FACTOR: f64 = 3.0;

/// Strand-sorting directions tried in order when tracking hits a
/// non-generic strand order.
const SORT_ANGLES: [f64; 5] = [0.0, 0.3, 0.7, 1.1, 1.9];

fn track_all(
    problem: &ProblemFile,
    emb: Embedding,
    critical: &[Complex64],
    plan: &PathPlan,
    angle: f64,
) -> Result<TrackedWords> {
    let mu = Complex64::from_polar(1.0, angle);
    let tracker = Tracker::with_direction(
        &problem.branch,
        &problem.fiber_var,
        &problem.base_var,
        emb,
        mu,
    )?;
    let start = tracker.roots_at(plan.base)?;
    let mut loops = vec![Vec::new(); problem.removed.len()];
    let mut approaches: Vec<Option<(Vec<BraidLetter>, usize)>> = vec![None; critical.len()];
    for path in &plan.paths {
        let outcome = tracker.track_polyline(&path.polyline, &start)?;
        match path.kind {
            PathKind::Loop { removed_index } => {
                loops[removed_index] = outcome.word;
            }
            PathKind::Approach { critical_index } => {
                // Walk half the remaining distance toward the critical
                // value until exactly one adjacent pair certifiably
                // collapses.
                let mut word = outcome.word;
                let mut roots = outcome.roots;
                let mut cur = *path.polyline.last().unwrap();
                let target = critical[critical_index];
                let mut pair = None;
                for _ in 0..12 {
                    match tracker.certify_collision(&roots, COLLISION_FACTOR) {
                        Ok(k) => {
                            pair = Some(k);
                            break;
                        }
                        Err(_) => {
                            let next = cur + (target - cur) * 0.5;
                            let more = tracker.track_polyline(&[cur, next], &roots)?;
                            word.extend(more.word);
                            roots = more.roots;
                            cur = next;
                        }
                    }
                }
                let pair = match pair {
                    Some(k) => k,
                    None => tracker.certify_collision(&roots, COLLISION_FACTOR)?,
                };
                approaches[critical_index] = Some((word, pair));
            }
        }
    }
    Ok(TrackedWords {
        loops,
        approaches: approaches.into_iter().map(Option::unwrap).collect(),
        strands: tracker.strands(),
    })
}

/// Run the whole method for one embedding.
pub fn compute_embedding(problem: &ProblemFile, emb: Embedding) -> Result<EmbeddingReport> {
    let cv = critical_values(
        &problem.branch,
        &problem.fiber_var,
        &problem.base_var,
        &problem.removed,
        emb,
    )?;
    let removed_pts: Vec<Complex64> = problem
        .removed
        .iter()
        .map(|r| Complex64::new(embed_f64(r, emb), 0.0))
        .collect();
    let plan = plan_paths(&cv.values, &removed_pts)?;

    // A non-generic strand order along some path is a property of the
    // sorting direction, not of the problem; retry with rotated ones.
    let mut tracked = None;
    let mut used_angle = 0.0;
    let mut last_err = None;
    for &angle in &SORT_ANGLES {
        match track_all(problem, emb, &cv.values, &plan, angle) {
            Ok(t) => {
                tracked = Some(t);
                used_angle = angle;
                break;
            }
            Err(e @ Error::Assumption(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    let tracked = match tracked {
        Some(t) => t,
        None => return Err(last_err.unwrap()),
    };

    let fiber = FiberModel::new(tracked.strands)?;
    let mut loop_words = Vec::new();
    let mut monodromies = Vec::new();
    let mut loop_chains = Vec::new();
    for (path, word) in plan
        .paths
        .iter()
        .filter(|p| matches!(p.kind, PathKind::Loop { .. }))
        .zip(&tracked.loops)
    {
        // The removed fiber is a vertical-line component of the branch
        // curve.  The braid letters see only the other branch points, so the
        // transport around the loop additionally picks up the covering
        // involution, which acts as -1 on fiber homology.
        let action = fiber.word_action(word).negated();
        loop_words.push(word_string(word));
        monodromies.push(action.matrix().clone());
        loop_chains.push(LoopChains {
            out_germ: path.out_germ,
            in_germ: path.in_germ.expect("loops carry an incoming germ"),
            monodromy: action,
        });
    }
    let mut approach_words = Vec::new();
    let mut cycles = Vec::new();
    let mut thimbles = Vec::new();
    for (path, (word, pair)) in plan
        .paths
        .iter()
        .filter(|p| matches!(p.kind, PathKind::Approach { .. }))
        .zip(&tracked.approaches)
    {
        let cycle = fiber.vanishing_cycle(word, *pair);
        approach_words.push(word_string(word));
        cycles.push(cycle.clone());
        thimbles.push(Thimble {
            germ: path.out_germ,
            cycle,
        });
    }

    let system = ChainSystem::new(fiber, loop_chains, thimbles)?;
    let pert = system.default_perturbation();
    // The symmetry of the pairing on the kernel is certified here.
    system.intersection_form(&pert)?;
    let kernel = system.boundary_matrix().integer_kernel().hermite_columns();
    let gram = system.gram_on(&kernel, &pert)?;
    let (radical_rank, quotient) = radical_quotient(&gram)?;

    let mut reduced_form = None;
    let mut realness = None;
    let mut genus = None;
    let mut discriminant_group = None;
    if quotient.rows() == 2 {
        let form = BinaryForm::from_gram(
            quotient.get(0, 0).clone(),
            quotient.get(0, 1).clone(),
            quotient.get(1, 1).clone(),
        )?;
        let (red, _) = form.reduce_gl2()?;
        realness = Some(red.is_real()?);
        let mut members = Vec::new();
        for cls in BinaryForm::enumerate_classes(&red.det()) {
            if same_genus(&red, &cls)? {
                let (a, b, c) = cls.gram();
                members.push(vec![a.to_string(), b.to_string(), c.to_string()]);
            }
        }
        genus = Some(members);
        let disc = DiscriminantForm::from_gram(&red.gram_matrix())?;
        discriminant_group = Some(disc.orders().iter().map(|o| o.to_string()).collect());
        let (a, b, c) = red.gram();
        reduced_form = Some(vec![a.to_string(), b.to_string(), c.to_string()]);
    }

    Ok(EmbeddingReport {
        embedding: emb.label().to_string(),
        base_point: plan.base.into(),
        removed_fibers: removed_pts.into_iter().map(Into::into).collect(),
        critical_values: cv.values.iter().copied().map(Into::into).collect(),
        sort_direction: used_angle,
        loop_braid_words: loop_words,
        monodromy_matrices: monodromies,
        approach_braid_words: approach_words,
        vanishing_cycles: cycles,
        boundary_matrix: matrix_strings(&system.boundary_matrix()),
        kernel_basis: matrix_strings(&kernel),
        h2_rank: kernel.cols(),
        gram: matrix_strings(&gram),
        radical_rank,
        quotient_rank: quotient.rows(),
        quotient_gram: matrix_strings(&quotient),
        reduced_form,
        realness,
        genus,
        discriminant_group,
    })
}

/// Run the method for every requested embedding and assemble the report.
/// The embeddings are processed concurrently but reported in fixed order.
pub fn compute(problem: &ProblemFile) -> Result<Report> {
    let embs = problem.embedding.embeddings();
    let mut sections: Vec<Result<EmbeddingReport>> = Vec::new();
    if embs.len() == 1 {
        sections.push(compute_embedding(problem, embs[0]));
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = embs
                .iter()
                .map(|&e| scope.spawn(move || compute_embedding(problem, e)))
                .collect();
            for h in handles {
                sections.push(h.join().expect("embedding worker panicked"));
            }
        });
    }
    let mut embeddings = Vec::new();
    for s in sections {
        embeddings.push(s?);
    }
    Ok(Report {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        precision_bits: problem.precision,
        assumptions: vec![
            "the removed divisor spans the rational Neron-Severi group of the covering surface"
                .to_string(),
            "the removed divisor contains the branch divisor of the covering".to_string(),
        ],
        branch: problem.branch.to_string(),
        field_discriminant: problem.d,
        embeddings,
    })
}

/// Render the planned paths of one embedding as a standalone SVG document.
pub fn plan_svg(plan: &PathPlan, critical: &[Complex64], removed: &[Complex64]) -> String {
    let mut min = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut max = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |z: Complex64| {
        min.re = min.re.min(z.re);
        min.im = min.im.min(z.im);
        max.re = max.re.max(z.re);
        max.im = max.im.max(z.im);
    };
    for p in &plan.paths {
        for &z in &p.polyline {
            grow(z);
        }
    }
    for &z in critical.iter().chain(removed) {
        grow(z);
    }
    let span = (max.re - min.re).max(max.im - min.im).max(1e-9);
    let pad = 0.05 * span;
    let scale = 800.0 / (span + 2.0 * pad);
    let tx = |z: Complex64| {
        (
            (z.re - min.re + pad) * scale,
            // Flip so the upper half plane is drawn on top.
            (max.im - z.im + pad) * scale,
        )
    };
    let mut out = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\">\n",
    );
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    for (i, p) in plan.paths.iter().enumerate() {
        let pts: Vec<String> = p
            .polyline
            .iter()
            .map(|&z| {
                let (x, y) = tx(z);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        out.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            pts.join(" "),
            colors[i % colors.len()]
        ));
    }
    for &z in critical {
        let (x, y) = tx(z);
        out.push_str(&format!(
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"black\"/>\n"
        ));
    }
    for &z in removed {
        let (x, y) = tx(z);
        out.push_str(&format!(
            "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"8\" height=\"8\" fill=\"gray\"/>\n",
            x - 4.0,
            y - 4.0
        ));
    }
    let (bx, by) = tx(plan.base);
    out.push_str(&format!(
        "  <circle cx=\"{bx:.2}\" cy=\"{by:.2}\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"
        fiber = "y"
        projection = "z"
        embedding = "plus"
        removed = ["0"]
        branch = "y^2 - z"
    "#;

    #[test]
    fn toy_double_cover_has_trivial_lattice() {
        let problem = ProblemFile::from_toml_str(TOY).unwrap();
        assert_eq!(problem.d, 0);
        assert_eq!(problem.removed.len(), 1);
        let report = compute(&problem).unwrap();
        assert_eq!(report.embeddings.len(), 1);
        let e = &report.embeddings[0];
        assert!(e.critical_values.is_empty());
        // The half twist of the two branch points is a transvection by an
        // isotropic cycle, hence trivial on the rank-one fiber homology;
        // with the covering involution from the removed line the loop
        // monodromy is -1, so no tube class closes up.
        assert_eq!(e.monodromy_matrices.len(), 1);
        assert_eq!(e.monodromy_matrices[0], vec![vec![-1]]);
        assert_eq!(e.h2_rank, 0);
        assert!(e.gram.is_empty());
        assert_eq!(e.radical_rank, 0);
        assert_eq!(e.quotient_rank, 0);
        assert!(e.reduced_form.is_none());
    }

    #[test]
    fn named_polynomials_resolve_in_any_order() {
        let src = r#"
            d = 5
            fiber = "y"
            projection = "z"
            embedding = "plus"
            removed = ["0"]
            branch = "f"

            [polynomials]
            f = "g + a*h"
            g = "y^2 - z"
            h = "y - z"
        "#;
        let problem = ProblemFile::from_toml_str(src).unwrap();
        let env = PolyEnv::quadratic(5);
        let expect = parse_poly_with("y^2 - z + a*(y - z)", &env).unwrap();
        assert_eq!(problem.branch, expect);
    }

    #[test]
    fn bad_problem_files_are_rejected() {
        let cyclic = r#"
            fiber = "y"
            projection = "z"
            removed = []
            branch = "f"

            [polynomials]
            f = "g + 1"
            g = "f + 1"
        "#;
        assert_eq!(
            ProblemFile::from_toml_str(cyclic).unwrap_err().exit_code(),
            1
        );
        let dup = r#"
            fiber = "y"
            projection = "z"
            removed = ["1", "1"]
            branch = "y^2 - z"
        "#;
        assert_eq!(ProblemFile::from_toml_str(dup).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn report_json_is_reproducible() {
        let problem = ProblemFile::from_toml_str(TOY).unwrap();
        let a = compute(&problem).unwrap().to_json();
        let b = compute(&problem).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"tool\""));
    }
}
