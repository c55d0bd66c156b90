//! Gluing copies of Δ along Γ, and the pieces Δ ∖ Γ is made of.

use boolcomplex::constructions::{
    delta_paper, face_set_isomorphism, gamma_paper, glue_copies, phi_anatomy, psi,
};
use boolcomplex::fpoly::FPolynomial;

fn main() {
    let (delta, gamma) = (delta_paper(), gamma_paper());
    for n in [1, 2, 3, 17] {
        let omega = glue_copies(&delta, &gamma, n).unwrap();
        let expected = delta
            .f_polynomial()
            .scale(n as i64)
            .sub(&gamma.f_polynomial().scale(n as i64 - 1));
        println!(
            "Ω_{n}: {} vertices, f = {} ({})",
            omega.vertices().len(),
            omega.f_polynomial(),
            if omega.f_polynomial() == expected {
                "= N f(Δ) - (N-1) f(Γ)"
            } else {
                "mismatch"
            }
        );
    }

    let anatomy = phi_anatomy();
    let psi_faces = psi().faces();
    let isomorphic = anatomy
        .psi_copies
        .iter()
        .filter(|copy| face_set_isomorphism(copy, &psi_faces).is_some())
        .count();
    println!(
        "Δ ∖ Γ: {isomorphic} copies of Ψ plus {} faces with f = {}",
        anatomy.remaining.len(),
        FPolynomial::from_faces(&anatomy.remaining)
    );
}
