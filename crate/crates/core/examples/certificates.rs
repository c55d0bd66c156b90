//! Decomposition certificates: JSON round trip and independent checking.

use boolcomplex::constructions::omega;
use boolcomplex::decomp::{
    check_certificate, find_interval_decomposition, DecompositionCertificate, SolverConfig, Target,
};

fn main() {
    let target = Target::from_complex(&omega(2)).with_source("builtin:Omega2");
    let cert = find_interval_decomposition(&target, 2, false, &SolverConfig::default())
        .into_certificate()
        .expect("Ω_2 has rank-2 intervals");
    let json = cert.to_json();
    println!("{} parts, {} bytes of JSON", cert.parts.len(), json.len());

    let back = DecompositionCertificate::from_json(&json).unwrap();
    println!("re-checked: {:?}", check_certificate(&back, &target));

    let mut tampered = back.clone();
    tampered.parts.swap_remove(0);
    println!(
        "one part removed: {:?}",
        check_certificate(&tampered, &target)
    );
}
