//! K-theory shadows of spherical functors: the twist and cotwist of a
//! two-block splitting, and the identity expressing the twist as a
//! composite of two mutations.
//!
//! Run with: `cargo run --example spherical_twists`

use wallcross::kmut::{qmat_det, spherical_shadow, verify_double_mutation, EulerLattice};

fn show(name: &str, m: &wallcross::kmut::QMat) {
    println!("{name}:");
    for row in m {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        println!("  [{}]", cells.join(", "));
    }
}

fn main() -> wallcross::Result<()> {
    // a 2-spherical class: chi(a,a) = 1, chi(a,s) = 2, chi(s,s) = 2
    let k3_like = EulerLattice::new(vec![vec![1, 2], vec![0, 2]])?;
    let shadow = spherical_shadow(&k3_like, &[0], &[1])?;
    show("twist of a 2-spherical class (sends the class to its negative)", &shadow.t_s);

    // a rank-4 splitting <E, G>: twist and cotwist on the two blocks
    let lat = EulerLattice::new(vec![
        vec![1, 2, 1, 4],
        vec![0, 1, -1, 2],
        vec![0, 0, 1, 3],
        vec![0, 0, 0, 1],
    ])?;
    let shadow = spherical_shadow(&lat, &[0, 1], &[2, 3])?;
    show("\ntwist on the target block", &shadow.t_s);
    show("cotwist on the source block", &shadow.f_s);
    println!(
        "determinants: twist {}, cotwist {} (equal up to the sign (-1)^rank)",
        qmat_det(&shadow.t_s),
        qmat_det(&shadow.f_s)
    );

    // the twist equals the composite of the two mutation projections
    let check = verify_double_mutation(&lat, &[0, 1], &[2, 3])?;
    println!("\ntwist equals the double mutation: {}", check.ok);
    show("twist route", &check.twist);
    show("mutation route", &check.double_mutation);
    Ok(())
}
