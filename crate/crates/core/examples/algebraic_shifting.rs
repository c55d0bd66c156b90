//! Exterior algebraic shifting and iterated Betti numbers.

use boolcomplex::constructions::{delta_paper, gamma_paper};
use boolcomplex::shifting::{betti_from_shifted, cone_apex_depth, exterior_shift};
use boolcomplex::{FieldPrime, SimplicialComplex};

fn main() {
    let p = FieldPrime::MERSENNE31;

    let circle = SimplicialComplex::from_facets([[1, 2], [1, 3], [2, 3]]);
    let r = exterior_shift(&circle, p, 0, 2).unwrap();
    println!("S(∂triangle) = {:?}", r.shifted.facets());
    println!("betti from S: {:?}", betti_from_shifted(&r.shifted));

    for (name, c) in [("Γ", gamma_paper()), ("Δ", delta_paper())] {
        let r = exterior_shift(&c, p, 1, 2).unwrap();
        println!(
            "S({name}): {} facets, same f {}, cone apex depth {}",
            r.shifted.facets().len(),
            r.shifted.f_polynomial() == c.f_polynomial(),
            cone_apex_depth(&r.shifted).unwrap()
        );
        for e in r.iterated_betti.entries.iter().filter(|e| e.value > 0) {
            println!("  β^{}[{}] = {}", e.k, e.r, e.value);
        }
    }
}
