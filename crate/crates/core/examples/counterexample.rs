//! Ω_3: 2-fold acyclic, yet with no rank-2 interval decomposition, while a
//! rank-2 boolean tree decomposition exists.
//!
//! The tree search takes about half a minute in release mode; pass `trees`
//! to run it.
//!
//! ```text
//! cargo run --release --example counterexample -- trees
//! ```

use boolcomplex::constructions::omega;
use boolcomplex::decomp::{
    find_interval_decomposition, find_tree_decomposition, verify_certificate, Decomposition,
    Infeasible, SolverConfig, Target,
};
use boolcomplex::fpoly::FPolynomial;
use boolcomplex::homology::is_k_fold_acyclic;
use boolcomplex::FieldPrime;

fn main() {
    let omega3 = omega(3);
    let f = omega3.f_polynomial();
    println!("f(Ω_3) = {f} = (1+t)^2 ({})", f.quotient(2).unwrap());
    println!(
        "2-fold acyclic: {}",
        is_k_fold_acyclic(&omega3, 2, FieldPrime::TWO).holds
    );

    let target = Target::from_complex(&omega3);
    let config = SolverConfig::default();
    match find_interval_decomposition(&target, 2, false, &config) {
        Decomposition::Infeasible(Infeasible::Exhausted {
            weighting: Some(w), ..
        }) => {
            // every rank-2 interval weighs ≤ 0 but the whole complex weighs > 0
            println!(
                "no rank-2 interval decomposition: {} weighted faces, total weight {}",
                w.weights.len(),
                w.total()
            );
            assert!(w.rules_out(&target, 2));
        }
        other => println!("interval search: {other:?}"),
    }

    if std::env::args().any(|a| a == "trees") {
        let d = find_tree_decomposition(&target, 2, true, &config);
        let cert = d.certificate().expect("a tree decomposition exists");
        println!(
            "rank-2 trees: {} parts, minima f-vector {}, verified {}",
            cert.parts.len(),
            FPolynomial::from_faces(&cert.minima),
            verify_certificate(cert, &target)
        );
    }
}
