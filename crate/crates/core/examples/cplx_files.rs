//! Reading and writing the `.cplx` text format.

use boolcomplex::constructions::psi;
use boolcomplex::cplx::{parse_cplx, write_cplx, write_relative_cplx, Cplx};

fn main() {
    let text = "\
# a square split into two triangles
#! vertices: a b c d
a b c
a c d
";
    let Cplx::Complex(c) = parse_cplx(text).unwrap() else {
        unreachable!()
    };
    println!("{} faces, f = {}", c.len(), c.f_polynomial());
    print!("{}", write_cplx(&c));

    print!("{}", write_relative_cplx(&psi()));

    let err = parse_cplx("1 2\n2 3 2\n").unwrap_err();
    println!("error: {err}");
}
