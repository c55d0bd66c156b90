//! Rank-k boolean interval decompositions by exact cover.

use boolcomplex::constructions::psi;
use boolcomplex::decomp::{find_interval_decomposition, Decomposition, SolverConfig, Target};
use boolcomplex::{Face, SimplicialComplex};

fn main() {
    let config = SolverConfig::default();

    // two tetrahedra sharing a triangle: 24 faces, six rank-2 intervals
    let c = SimplicialComplex::from_facets([Face::from([1, 2, 3, 4]), Face::from([2, 3, 4, 5])]);
    let target = Target::from_complex(&c);
    match find_interval_decomposition(&target, 2, true, &config) {
        Decomposition::Found(cert) => {
            for iv in cert.intervals() {
                println!("  {iv:?}");
            }
            println!("minima form a subcomplex: {}", cert.minima_form_subcomplex);
        }
        other => println!("unexpected: {other:?}"),
    }

    // Ψ has 20 faces but cannot be cut into rank-2 intervals
    let psi = Target::from_relative(&psi());
    let d = find_interval_decomposition(&psi, 2, false, &config);
    println!("Ψ at rank 2: {:?} after {} nodes", kind(&d), d.nodes());

    // an odd face count fails before any search
    let edge_and_point = SimplicialComplex::from_facets([Face::from([1, 2]), Face::from([3])]);
    let d = find_interval_decomposition(&Target::from_complex(&edge_and_point), 1, false, &config);
    println!("edge + point at rank 1: {d:?}");
}

fn kind(d: &Decomposition) -> &'static str {
    match d {
        Decomposition::Found(_) => "found",
        Decomposition::Infeasible(_) => "infeasible",
        Decomposition::Unknown { .. } => "unknown",
    }
}
