//! Multiplication tables with a left identity, and their Cayley graphs.
//!
//! A partial groupoid here is an n-by-d table: n elements, one column per
//! generator, subject to three axioms (row 0 is the identity's row, no cell
//! repeats its own row index, and every column is a fixed-point-free
//! permutation). Its Cayley graph is d-regular, and the construction runs
//! both ways: a one-factorization of a regular digraph reads back as a
//! table. Completing a partial table to a full n-by-n one goes through the
//! tree labels — words in the generators reaching each element from the
//! identity.
//!
//! Run with: cargo run --example groupoid_tables

use netfact::constructions::{kautz_full_table, kautz_table, right_identity_table};
use netfact::groupoid::{
    canonical_extension, cayley_graph, check_axioms, groupoid_from_factorization,
    has_left_cancellation, raw_from_partial, tree_like_labeling, word_label, write_groupoid_csv,
    FullGroupoid,
};

fn main() {
    // The 2-generator, 6-element table whose Cayley graph is the Kautz digraph.
    let pg = kautz_table();
    println!("partial table (CSV):");
    print!("{}", write_groupoid_csv(&raw_from_partial(&pg)));

    let (g, f) = cayley_graph(&pg).unwrap();
    println!(
        "Cayley graph: n = {}, d = {}, diameter = {}",
        g.n(),
        g.degree(),
        g.diameter()
    );

    // Read the table back off the factorization, rooted at the identity.
    let (back, labels) = groupoid_from_factorization(&f, 0).unwrap();
    println!("recovered table equals the original: {}", back == pg);
    println!("tree labels (word reaching each element from e):");
    for (v, w) in labels.iter().enumerate() {
        println!("  {} <- {}", v, word_label(w, pg.d()));
    }

    // Complete the partial table by walking tree labels.
    let labeling = tree_like_labeling(&pg).unwrap();
    let full = canonical_extension(&pg, &labeling.labels).unwrap();
    println!(
        "canonical extension is left-cancellative: {}",
        has_left_cancellation(&full)
    );

    // A hand-written full table can pass the permutation-column axioms yet
    // still fail left cancellation...
    let printed = kautz_full_table();
    let fg = FullGroupoid::new(printed.gen_ids.clone(), printed.rows.clone()).unwrap();
    println!(
        "printed full table is left-cancellative: {}",
        has_left_cancellation(&fg)
    );

    // ...and another can fail the left-identity axiom outright.
    let report = check_axioms(&right_identity_table());
    println!("right-identity table core axioms ok: {}", report.core_ok());
    if let Some(v) = &report.left_identity {
        println!("  left identity violated: {}", v);
    }
}
