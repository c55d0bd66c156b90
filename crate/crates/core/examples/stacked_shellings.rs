//! Stacked complexes: shellings that add one vertex per facet, and the
//! interval decompositions they induce.

use boolcomplex::constructions::random_stacked;
use boolcomplex::decomp::SolverConfig;
use boolcomplex::stacked::{
    find_stacked_shelling, is_stacked_equiv_dfold, shelling_from_spanning_tree,
    stacked_decomposition,
};
use boolcomplex::FieldPrime;

fn main() {
    let c = random_stacked(3, 6, 42);
    println!("f = {}", c.f_polynomial());

    let shelling = shelling_from_spanning_tree(&c).expect("stacked by construction");
    for step in shelling.steps() {
        match step.new_vertex {
            Some(v) => println!("  {} adds {v}", step.facet),
            None => println!("  {}", step.facet),
        }
    }

    for k in 1..=3 {
        let d = stacked_decomposition(&shelling, k, &SolverConfig::default()).unwrap();
        println!(
            "rank {k}: {} intervals, minima closed {}",
            d.certificate.parts.len(),
            d.certificate.minima_form_subcomplex
        );
    }

    let report = is_stacked_equiv_dfold(&c, FieldPrime::TWO);
    println!(
        "d-fold acyclic {}, stacked {}, consistent {}",
        report.d_fold.holds, report.stacked, report.consistent
    );

    // the octahedron boundary is pure and connected but not stacked
    let octahedron = boolcomplex::SimplicialComplex::from_facets(
        [
            [1, 3, 5],
            [1, 3, 6],
            [1, 4, 5],
            [1, 4, 6],
            [2, 3, 5],
            [2, 3, 6],
            [2, 4, 5],
            [2, 4, 6],
        ]
        .map(boolcomplex::Face::from),
    );
    println!(
        "octahedron stacked: {}",
        find_stacked_shelling(&octahedron).is_some()
    );
}
