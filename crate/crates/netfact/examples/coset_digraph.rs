//! Build a digraph on the cosets of a permutation-group subgroup.
//!
//! Given a group G, a subgroup H, and a connection multiset S with
//! S ∩ H = ∅ and H ∪ S generating G, the coset digraph joins Hx to Hsx for
//! each s in S. Distinct-coset membership of the products makes the graph
//! |S|-regular. The bundled order-20 spec yields a 10-vertex, degree-2
//! digraph; this example also shows the soft closure condition HS ⊆ SH
//! failing with a witness, the split of S into irreducible parts, and a
//! one-factor lift: rebuilding a full factorization from a single 1-factor.
//!
//! Run with: cargo run --example coset_digraph

use netfact::coset::{
    build_coset_graph, coset_spanning_factorization, decompose_s, factor_from_reps,
    factorization_from_one_factor_with_reps, is_irreducible, petersen_spec, write_coset_spec,
};
use netfact::factorize::{cycles_to_string, permutation_cycles};

fn main() {
    let spec = petersen_spec();
    print!("{}", write_coset_spec(&spec));
    println!();

    let graph = build_coset_graph(&spec).unwrap();
    let g = graph.digraph();
    println!(
        "coset digraph: n = {}, d = {}, diameter = {}",
        g.n(),
        g.degree(),
        g.diameter()
    );
    println!("chosen representatives: {:?}", graph.reps());

    // The closure condition HS ⊆ SH is optional; this spec violates it.
    match spec.condition_ii_witness() {
        Some((h, s)) => println!("HS ⊆ SH fails: h = {} times s = {} lands outside SH", h, s),
        None => println!("HS ⊆ SH holds"),
    }

    // S splits into irreducible parts (one per orbit of <H ∪ {s}>).
    let parts = decompose_s(&spec);
    println!("S decomposes into {} irreducible parts", parts.len());
    for part in &parts {
        assert!(is_irreducible(part));
        // Lift: hand the part one 1-factor of its digraph and get a full,
        // verified factorization back (here: its own s-edges).
        let k = spec.s().iter().position(|x| x == &part.s()[0]).unwrap();
        let succ = factor_from_reps(&graph, graph.reps(), k).unwrap();
        let adjusted =
            factorization_from_one_factor_with_reps(part, graph.reps(), &succ, 0).unwrap();
        println!(
            "  part with s-index {}: lifted factor is {}",
            k,
            cycles_to_string(&permutation_cycles(adjusted.factorization.factor(0)))
        );
    }

    // The digraph also carries a spanning factorization (found through an
    // arborescence word search when plain tree words fall short).
    let sf = coset_spanning_factorization(&spec).unwrap();
    println!(
        "spanning word set found: longest word has {} letters",
        sf.wordset().words().iter().map(|w| w.len()).max().unwrap()
    );
}
