//! Locating and classifying the simple singularities of plane curves.
//!
//! The main input is the reducible sextic `z * (G + a*H)` over `Q(sqrt 5)`
//! (with `a = sqrt 5`): exact elimination finds its singular points and
//! iterated square completion certifies their types.  A few small germs
//! illustrate the classifier on its own.
//!
//! Run with: `cargo run --example singular_points`

use translattice::exact::parse_poly;
use translattice::singular::{recognize_a, singular_locus};

const G_STR: &str = "-9*x^4*z - 14*x^3*y*z + 58*x^3*z^2 - 48*x^2*y^2*z - 64*x^2*y*z^2 \
                     + 10*x^2*z^3 + 108*x*y^3*z - 20*x*y^2*z^2 - 44*y^5 + 10*y^4*z";
const H_STR: &str = "5*x^4*z + 10*x^3*y*z - 30*x^3*z^2 + 30*x^2*y^2*z + 20*x^2*y*z^2 \
                     - 40*x*y^3*z + 20*y^5";

fn main() {
    for sign in ["+", "-"] {
        let src = format!("z * (({G_STR}) {sign} a*({H_STR}))");
        let sextic = parse_poly(&src, 5).expect("sextic parses");
        println!("sextic with sign {sign}:");
        for p in singular_locus(&sextic, "x", "y", "z").expect("elimination succeeds") {
            println!("  {p}");
        }
    }

    println!();
    println!("germs at the origin:");
    for src in ["x^2 + y^8", "x^2 - 2*x*y^2 + y^4 - y^11", "x*y + x^3", "x^3 + y^4"] {
        let f = parse_poly(src, 0).unwrap();
        println!("  {src}: {}", recognize_a(&f, "x", "y").expect("classification runs"));
    }
}
