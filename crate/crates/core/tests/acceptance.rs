//! The acceptance suite: each criterion runs in turn, prints one
//! `PASS`/`FAIL` line with its wall-clock time, and the process exits
//! non-zero if any failed.
//!
//! ```text
//! cargo test --release --test acceptance
//! ```

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use boolcomplex::constructions::{
    barycentric_subdivision, delta_paper, face_set_isomorphism, gamma_paper, glue_copies, omega,
    phi_anatomy, phi_paper, psi, random_complex, random_cone, random_stacked, sigma, upsilon,
};
use boolcomplex::decomp::{
    find_interval_decomposition, find_tree_decomposition, rank1_acyclic_matching,
    verify_certificate, Decomposition, SolverConfig, Target,
};
use boolcomplex::homology::{betti_numbers, is_acyclic, is_k_fold_acyclic};
use boolcomplex::shifting::{betti_from_shifted, cone_apex_depth, exterior_shift, is_shifted};
use boolcomplex::stacked::{shelling_from_spanning_tree, stacked_decomposition};
use boolcomplex::{FPolynomial, Face, FieldPrime, SimplicialComplex};

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const PRIMES: [FieldPrime; 2] = [FieldPrime::TWO, FieldPrime::P32003];

fn coeffs(f: &FPolynomial) -> Vec<i64> {
    f.coeffs().to_vec()
}

fn paper_f_vectors() -> Result<(), String> {
    let g = gamma_paper().f_polynomial();
    ensure!(coeffs(&g) == [1, 8, 22, 24, 9], "f(Γ) = {g}");
    let o = omega(3).f_polynomial();
    ensure!(coeffs(&o) == [1, 20, 136, 216, 99], "f(Ω_3) = {o}");
    let q = o.quotient(2).map_err(|e| e.to_string())?;
    ensure!(coeffs(&q) == [1, 18, 99], "quotient {q}");
    ensure!(q.mul(&FPolynomial::one_plus_t_pow(2)) == o, "product");
    Ok(())
}

fn two_fold_acyclicity() -> Result<(), String> {
    let named = [
        ("Σ", sigma()),
        ("Υ", upsilon()),
        ("Γ", gamma_paper()),
        ("Δ", delta_paper()),
        ("Ω_2", omega(2)),
        ("Ω_3", omega(3)),
    ];
    for (name, c) in &named {
        for p in PRIMES {
            let r = is_k_fold_acyclic(c, 2, p);
            ensure!(
                r.holds,
                "{name} over GF({}): witness {:?}",
                p.get(),
                r.witness
            );
        }
    }
    Ok(())
}

fn interval_infeasibility() -> Result<(), String> {
    let config = SolverConfig::default();
    let cases: [(&str, Target, bool, Duration); 4] = [
        (
            "Ψ",
            Target::from_relative(&psi()),
            false,
            Duration::from_secs(1),
        ),
        (
            "Φ",
            Target::from_relative(&phi_paper()),
            false,
            Duration::from_secs(60),
        ),
        (
            "Ω_3",
            Target::from_complex(&omega(3)),
            false,
            Duration::from_secs(1800),
        ),
        (
            "Ω_3 closed minima",
            Target::from_complex(&omega(3)),
            true,
            Duration::from_secs(1800),
        ),
    ];
    for (name, target, closed, limit) in cases {
        let start = Instant::now();
        let d = find_interval_decomposition(&target, 2, closed, &config);
        let took = start.elapsed();
        ensure!(d.is_infeasible(), "{name}: {}", describe(&d));
        ensure!(took <= limit, "{name} took {took:?}");
    }
    Ok(())
}

fn describe(d: &Decomposition) -> String {
    match d {
        Decomposition::Found(c) => format!("found {} parts", c.parts.len()),
        Decomposition::Infeasible(i) => format!("infeasible {i:?}"),
        Decomposition::Unknown { nodes } => format!("unknown after {nodes} nodes"),
    }
}

fn boolean_trees() -> Result<(), String> {
    let target = Target::from_complex(&omega(3));
    let d = find_tree_decomposition(&target, 2, true, &SolverConfig::default());
    let cert = d.certificate().ok_or_else(|| describe(&d))?;
    let f = FPolynomial::from_faces(&cert.minima);
    ensure!(coeffs(&f) == [1, 18, 99], "minima f = {f}");
    ensure!(target.is_closed_within(&cert.minima), "minima not closed");
    let set: BTreeSet<&Face> = cert.minima.iter().collect();
    ensure!(
        cert.minima
            .iter()
            .all(|m| m.subsets().all(|s| set.contains(&s))),
        "minima not downward closed"
    );
    ensure!(verify_certificate(cert, &target), "certificate rejected");
    Ok(())
}

fn rank1_matching() -> Result<(), String> {
    let config = SolverConfig::default();
    let mut complexes = Vec::new();
    for seed in 0..100u64 {
        let base = random_complex(5 + (seed % 3) as u32, 2 + (seed % 4) as usize, 3, seed);
        complexes.push(random_cone(&base, seed));
    }
    for seed in 0..20u64 {
        let d = 1 + (seed % 3) as usize;
        complexes.push(random_stacked(d, 1 + (seed % 10) as usize, 1000 + seed));
    }
    for (i, c) in complexes.iter().enumerate() {
        let cert = rank1_acyclic_matching(c, &config).map_err(|e| format!("complex {i}: {e}"))?;
        ensure!(
            cert.minima_form_subcomplex,
            "complex {i}: minima not closed"
        );
        ensure!(
            verify_certificate(&cert, &Target::from_complex(c)),
            "complex {i}: rejected"
        );
    }
    Ok(())
}

fn stacked_suite() -> Result<(), String> {
    let config = SolverConfig::default();
    for seed in 0..50u64 {
        let d = 1 + (seed % 4) as usize;
        let j = 1 + (seed * 7 % 12) as usize;
        let c = random_stacked(d, j, seed);
        let expected = FPolynomial::one_plus_t_pow(d).mul(&FPolynomial::new(vec![1, j as i64]));
        ensure!(
            c.f_polynomial() == expected,
            "seed {seed}: f = {}",
            c.f_polynomial()
        );
        ensure!(
            is_k_fold_acyclic(&c, d, FieldPrime::TWO).holds,
            "seed {seed}: not {d}-fold acyclic"
        );
        let shelling = shelling_from_spanning_tree(&c).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(
            shelling.complex() == c,
            "seed {seed}: shelling covers another complex"
        );
        let target = Target::from_complex(&c);
        for k in 0..=d {
            let dec = stacked_decomposition(&shelling, k, &config)
                .map_err(|e| format!("seed {seed}, k {k}: {e}"))?;
            let cert = &dec.certificate;
            ensure!(
                cert.minima_form_subcomplex && verify_certificate(cert, &target),
                "seed {seed}, k {k}: rejected"
            );
        }
    }
    Ok(())
}

fn shifting_suite() -> Result<(), String> {
    let p = FieldPrime::MERSENNE31;
    let mut inputs: Vec<(String, SimplicialComplex)> = (0..30u64)
        .map(|s| {
            (
                format!("random {s}"),
                random_complex(6, 3 + (s % 4) as usize, 4, 500 + s),
            )
        })
        .collect();
    inputs.push(("Σ".into(), sigma()));
    inputs.push(("Υ".into(), upsilon()));
    inputs.push(("Γ".into(), gamma_paper()));
    for (name, c) in &inputs {
        let r = exterior_shift(c, p, 11, 2).map_err(|e| format!("{name}: {e}"))?;
        let again = exterior_shift(c, p, 12, 2).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.shifted == again.shifted, "{name}: seeds disagree");
        ensure!(
            r.shifted.f_polynomial() == c.f_polynomial(),
            "{name}: f changed"
        );
        ensure!(is_shifted(&r.shifted), "{name}: not shifted");
        let betti = betti_numbers(c, p);
        ensure!(
            betti_from_shifted(&r.shifted) == betti.values(),
            "{name}: betti {:?} vs {:?}",
            betti_from_shifted(&r.shifted),
            betti.values()
        );
    }
    for (name, c) in [("Γ", gamma_paper()), ("Δ", delta_paper())] {
        let r = exterior_shift(&c, p, 3, 2).map_err(|e| format!("{name}: {e}"))?;
        let depth = cone_apex_depth(&r.shifted).map_err(|e| e.to_string())?;
        ensure!(depth >= 2, "S({name}) apex depth {depth}");
        ensure!(
            r.iterated_betti
                .entries
                .iter()
                .all(|e| e.r >= 2 || e.value == 0),
            "S({name}) has β^k[r] > 0 with r < 2"
        );
        ensure!(
            is_k_fold_acyclic(&r.shifted, 2, FieldPrime::TWO).holds,
            "S({name}) not 2-fold acyclic"
        );
    }
    Ok(())
}

fn anatomy() -> Result<(), String> {
    let a = phi_anatomy();
    ensure!(a.psi_copies.len() == 6, "{} copies", a.psi_copies.len());
    let psi_faces = psi().faces();
    for (i, copy) in a.psi_copies.iter().enumerate() {
        ensure!(
            face_set_isomorphism(copy, &psi_faces).is_some(),
            "copy {i} is not Ψ"
        );
    }
    for (i, x) in a.psi_copies.iter().enumerate() {
        for y in &a.psi_copies[i + 1..] {
            ensure!(
                x.iter()
                    .all(|f| y.iter().all(|g| !f.is_subset(g) && !g.is_subset(f))),
                "copies meet or are comparable"
            );
        }
    }
    let label = |s: &str| Face::new(s.chars().map(|c| c as u32 - 'A' as u32));
    let mut expected = BTreeSet::new();
    for (lo, hi) in [("I", "ABI"), ("J", "CDJ"), ("K", "EFK"), ("L", "GHL")] {
        let (lo, hi) = (label(lo), label(hi));
        for s in hi.difference(&lo).subsets() {
            expected.insert(lo.union(&s));
        }
    }
    let remaining: BTreeSet<Face> = a.remaining.iter().cloned().collect();
    ensure!(
        remaining.len() == 16 && remaining == expected,
        "remaining faces differ"
    );
    let total = phi_paper().faces().len();
    ensure!(total == 6 * 20 + 16, "|Φ| = {total}");

    let (delta, gamma) = (delta_paper(), gamma_paper());
    for n in [1i64, 2, 3, 17] {
        let o = glue_copies(&delta, &gamma, n as usize).map_err(|e| e.to_string())?;
        let expected = delta
            .f_polynomial()
            .scale(n)
            .sub(&gamma.f_polynomial().scale(n - 1));
        ensure!(
            o.f_polynomial() == expected,
            "Ω_{n}: f = {}",
            o.f_polynomial()
        );
    }
    Ok(())
}

fn oracle_equivalence() -> Result<(), String> {
    let config = SolverConfig::default();
    let mut used = 0;
    let mut seed = 0u64;
    while used < 200 {
        seed += 1;
        let c = random_complex(5 + (seed % 3) as u32, 2 + (seed % 5) as usize, 4, seed);
        if !(8..=24).contains(&c.len()) {
            continue;
        }
        used += 1;
        let all: Vec<Face> = c.faces().iter().cloned().collect();
        // the complex, the complex minus a small subcomplex, and an
        // arbitrary subset of its faces whose size is a multiple of 4
        let facets = c.facets();
        let sub =
            SimplicialComplex::from_facets(facets.iter().flat_map(|f| f.boundary_faces()).take(2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = all.len() * 3 / 16 * 4;
        let sets: [BTreeSet<Face>; 3] = [
            c.faces().clone(),
            all.iter().filter(|f| !sub.contains(f)).cloned().collect(),
            all.choose_multiple(&mut rng, size).cloned().collect(),
        ];
        for faces in sets {
            let target = Target::from_faces(faces.iter().cloned());
            for k in [1, 2] {
                for closed in [false, true] {
                    let d = find_interval_decomposition(&target, k, closed, &config);
                    ensure!(!d.is_unknown(), "seed {seed}: unknown");
                    if let Some(cert) = d.certificate() {
                        ensure!(verify_certificate(cert, &target), "seed {seed}: rejected");
                    }
                    let truth = common::partition_exists(&faces, k, closed);
                    ensure!(
                        d.is_found() == truth,
                        "seed {seed}, k {k}, closed {closed}: solver {} vs oracle {truth}",
                        describe(&d)
                    );
                }
            }
        }
    }
    Ok(())
}

fn negative_controls() -> Result<(), String> {
    let sd = barycentric_subdivision(&SimplicialComplex::simplex([1, 2, 3]));
    ensure!(
        is_k_fold_acyclic(&sd, 1, FieldPrime::TWO).holds,
        "sd(2-simplex) not acyclic"
    );
    ensure!(
        !is_k_fold_acyclic(&sd, 2, FieldPrime::TWO).holds,
        "sd(2-simplex) 2-fold acyclic"
    );
    let circle = SimplicialComplex::from_facets([[1, 2], [1, 3], [2, 3]]);
    for p in PRIMES {
        ensure!(!is_acyclic(&circle, p), "triangle boundary acyclic");
    }
    let r = is_k_fold_acyclic(&sigma(), 3, FieldPrime::TWO);
    ensure!(!r.holds, "Σ 3-fold acyclic");
    ensure!(
        r.witness == Some(Face::from([2, 3])),
        "witness {:?}",
        r.witness
    );
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Check, Duration); 10] = [
        (
            1,
            "paper f-vectors",
            paper_f_vectors,
            Duration::from_secs(1),
        ),
        (
            2,
            "2-fold acyclicity",
            two_fold_acyclicity,
            Duration::from_secs(10),
        ),
        (
            3,
            "interval infeasibility of Ψ, Φ, Ω_3",
            interval_infeasibility,
            Duration::from_secs(1800),
        ),
        (
            4,
            "boolean trees of Ω_3",
            boolean_trees,
            Duration::from_secs(300),
        ),
        (
            5,
            "rank-1 acyclic matchings",
            rank1_matching,
            Duration::from_secs(60),
        ),
        (6, "stacked suite", stacked_suite, Duration::from_secs(120)),
        (
            7,
            "shifting suite",
            shifting_suite,
            Duration::from_secs(180),
        ),
        (
            8,
            "counterexample anatomy",
            anatomy,
            Duration::from_secs(10),
        ),
        (
            9,
            "oracle equivalence",
            oracle_equivalence,
            Duration::from_secs(300),
        ),
        (
            10,
            "negative controls",
            negative_controls,
            Duration::from_secs(1),
        ),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, name, check, limit) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let result =
            panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = result.and_then(|()| {
            if took <= limit {
                Ok(())
            } else {
                Err(format!("over the {limit:?} limit"))
            }
        });
        match result {
            Ok(()) => println!("criterion {n:2} PASS  {name} ({took:.2?})"),
            Err(e) => {
                failed += 1;
                println!("criterion {n:2} FAIL  {name} ({took:.2?}): {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
