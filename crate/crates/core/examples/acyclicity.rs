//! f-polynomials, reduced Betti numbers and k-fold acyclicity.

use boolcomplex::constructions::{barycentric_subdivision, gamma_paper, sigma};
use boolcomplex::homology::{betti_numbers, is_acyclic, is_k_fold_acyclic};
use boolcomplex::{FieldPrime, SimplicialComplex};

fn main() {
    let gamma = gamma_paper();
    let f = gamma.f_polynomial();
    println!("f(Γ) = {f}");
    // a k-fold acyclic complex has (1+t)^k dividing its f-polynomial
    println!(
        "(1+t)^{} divides it, quotient {}",
        f.max_power().unwrap(),
        f.quotient(2).unwrap()
    );

    for p in [FieldPrime::TWO, FieldPrime::P32003] {
        let r = is_k_fold_acyclic(&gamma, 2, p);
        println!("Γ 2-fold acyclic over GF({}): {}", p.get(), r.holds);
    }

    let s = sigma();
    let r = is_k_fold_acyclic(&s, 3, FieldPrime::TWO);
    println!(
        "Σ 3-fold acyclic: {} (link of {} is not acyclic)",
        r.holds,
        r.witness.unwrap()
    );

    let circle = SimplicialComplex::from_facets([[1, 2], [1, 3], [2, 3]]);
    println!(
        "triangle boundary: betti {:?}, acyclic {}",
        betti_numbers(&circle, FieldPrime::TWO).values(),
        is_acyclic(&circle, FieldPrime::TWO)
    );

    let sd = barycentric_subdivision(&SimplicialComplex::simplex([1, 2, 3]));
    println!(
        "sd(2-simplex): {} faces, 1-fold {}, 2-fold {}",
        sd.len(),
        is_k_fold_acyclic(&sd, 1, FieldPrime::TWO).holds,
        is_k_fold_acyclic(&sd, 2, FieldPrime::TWO).holds
    );
}
