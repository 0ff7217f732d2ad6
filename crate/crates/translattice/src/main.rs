//! Command line front end: the full pipeline plus small lattice and
//! singularity utilities.  All substance lives in the library; this file
//! only parses arguments, dispatches, and maps errors to exit codes
//! (1 input, 2 numerical certificate, 3 assumption violation).

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_complex::Complex64;
use translattice::error::{Error, Result};
use translattice::exact::{embed_f64, parse_poly, QuadElem};
use translattice::geometry::{critical_values, plan_paths};
use translattice::lattice::{BinaryForm, DiscriminantForm};
use translattice::pipeline::{compute, plan_svg, EmbeddingChoice, ProblemFile};
use translattice::singular::recognize_a_at;

#[derive(Parser)]
#[command(name = "translattice", version, about = "Transcendental lattices of double planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full method on a problem file and write a JSON report.
    Compute {
        /// TOML problem file describing the double plane.
        file: PathBuf,
        /// Which real embedding of the field to use (overrides the file).
        #[arg(long)]
        embedding: Option<EmbeddingChoice>,
        /// Working precision in bits, recorded in the report.
        #[arg(long)]
        precision: Option<u32>,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write one SVG of the planned paths per embedding into this
        /// directory.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Gauss-reduce the even binary form with Gram matrix [[A, B], [B, C]].
    #[command(allow_negative_numbers = true)]
    Reduce { a: i64, b: i64, c: i64 },
    /// List the classes of even positive-definite binary forms of a given
    /// determinant, grouped into genera.
    Genus {
        #[arg(long)]
        det: i64,
    },
    /// Print the discriminant group and quadratic form of the even binary
    /// form with Gram matrix [[A, B], [B, C]].
    #[command(allow_negative_numbers = true)]
    Discform { a: i64, b: i64, c: i64 },
    /// Classify the singularity of a plane curve germ at a point.
    Singtype {
        /// The curve polynomial in two variables, e.g. "x^2 + y^5".
        #[arg(long)]
        poly: String,
        /// The point, two field elements (e.g. `--at 0 0` or `--at 1/2 a`).
        #[arg(long, num_args = 2, allow_negative_numbers = true)]
        at: Vec<String>,
        /// Field discriminant d of Q(sqrt d); `a` denotes sqrt d.
        #[arg(long, default_value_t = 0)]
        d: u64,
        /// The two variables of the affine chart, default "x y".
        #[arg(long, num_args = 2, default_value = "x y", value_delimiter = ' ')]
        chart: Vec<String>,
    },
}

fn field_constant(src: &str, d: u64) -> Result<QuadElem> {
    let p = parse_poly(src, d)?;
    if !p.is_constant() {
        return Err(Error::input(format!("{src} is not a field constant")));
    }
    Ok(p.constant_value())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute {
            file,
            embedding,
            precision,
            out,
            svg,
        } => {
            let mut problem = ProblemFile::from_path(&file)?;
            if let Some(choice) = embedding {
                problem.embedding = choice;
            }
            if let Some(bits) = precision {
                problem.precision = bits;
            }
            if let Some(dir) = &svg {
                std::fs::create_dir_all(dir)?;
                for emb in problem.embedding.embeddings() {
                    let cv = critical_values(
                        &problem.branch,
                        &problem.fiber_var,
                        &problem.base_var,
                        &problem.removed,
                        emb,
                    )?;
                    let removed: Vec<Complex64> = problem
                        .removed
                        .iter()
                        .map(|r| Complex64::new(embed_f64(r, emb), 0.0))
                        .collect();
                    let plan = plan_paths(&cv.values, &removed)?;
                    let doc = plan_svg(&plan, &cv.values, &removed);
                    std::fs::write(dir.join(format!("paths_{}.svg", emb.label())), doc)?;
                }
            }
            let report = compute(&problem)?;
            let json = report.to_json();
            match out {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
        }
        Command::Reduce { a, b, c } => {
            let form = BinaryForm::from_entries(a, b, c)?;
            let (reduced, _) = form.reduce_gl2()?;
            println!("{reduced}");
        }
        Command::Genus { det } => {
            let det = BigInt::from(det);
            for (i, genus) in BinaryForm::genus_partition(&det).iter().enumerate() {
                let names: Vec<String> = genus.iter().map(|f| f.to_string()).collect();
                println!("genus {}: {}", i + 1, names.join(" "));
            }
        }
        Command::Discform { a, b, c } => {
            let form = BinaryForm::from_entries(a, b, c)?;
            let disc = DiscriminantForm::from_gram(&form.gram_matrix())?;
            let orders: Vec<String> = disc.orders().iter().map(|o| o.to_string()).collect();
            println!("group: Z/{} (invariant factors {})", disc.group_order(), orders.join(", "));
            for i in 0..disc.orders().len() {
                let mut gen = vec![BigInt::from(0); disc.orders().len()];
                gen[i] = BigInt::from(1);
                println!("q(g{}) = {} (mod 2Z)", i + 1, disc.q_value(&gen));
            }
        }
        Command::Singtype { poly, at, d, chart } => {
            let f = parse_poly(&poly, d)?;
            let px = field_constant(&at[0], d)?;
            let py = field_constant(&at[1], d)?;
            let verdict = recognize_a_at(&f, &chart[0], &chart[1], &px, &py)?;
            println!("{verdict}");
        }
    }
    Ok(())
}

fn main() {
    // Usage errors are input errors (exit 1); help and version exit 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
