//! Rank-k boolean trees: the parts a k-fold acyclic complex always splits
//! into, even where intervals fail.

use boolcomplex::constructions::phi_paper;
use boolcomplex::decomp::{
    find_interval_decomposition, find_tree_decomposition, SolverConfig, Target,
};
use boolcomplex::{Face, SimplicialComplex};

fn main() {
    let config = SolverConfig::default();

    // a path of three triangles
    let c = SimplicialComplex::from_facets([[1, 2, 3], [2, 3, 4], [3, 4, 5]].map(Face::from));
    let target = Target::from_complex(&c);
    let d = find_tree_decomposition(&target, 2, true, &config);
    for tree in d.certificate().unwrap().trees() {
        println!("  root {} faces {:?}", tree.root(), tree.faces());
    }

    // Φ = Δ ∖ Γ has rank-2 trees but no rank-2 intervals
    let phi = Target::from_relative(&phi_paper());
    println!(
        "Φ: intervals {}, trees {}",
        find_interval_decomposition(&phi, 2, false, &config).is_found(),
        find_tree_decomposition(&phi, 2, false, &config).is_found()
    );
}
