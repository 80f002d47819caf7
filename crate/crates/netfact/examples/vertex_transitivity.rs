//! Decide vertex-transitivity two ways.
//!
//! A digraph is vertex-transitive when its automorphism group moves any
//! vertex to any other. The fast path goes through spanning factorizations:
//! each one yields candidate vertex maps that are checked directly, and a
//! success certifies transitivity with explicit witnesses. When the search
//! space is exhausted without a witness, the digraph is certified
//! *not* transitive. This example shows one of each.
//!
//! Run with: cargo run --example vertex_transitivity

use netfact::coset::{build_coset_graph, petersen_spec};
use netfact::digraph::automorphism_group;
use netfact::factorize::Factorization;
use netfact::spanfact::{is_vertex_transitive, VtDecision};

fn main() {
    // A circulant digraph is vertex-transitive: rotations are automorphisms.
    let n = 8;
    let jump = |j: usize| (0..n).map(|i| (i + j) % n).collect::<Vec<_>>();
    let f = Factorization::new(n, vec![jump(1), jump(3)]).unwrap();
    let g = f.to_digraph().unwrap();
    match is_vertex_transitive(&g, 10_000) {
        VtDecision::Transitive { maps } => {
            println!(
                "circulant on Z_{}: transitive, {} witness maps",
                n,
                maps.len()
            );
            let images = maps[0].images();
            println!("  first witness sends 0 -> {}", images[0]);
        }
        other => println!("circulant on Z_{}: unexpected verdict {:?}", n, other),
    }

    // The coset digraph of the order-20 group spec is a counterexample:
    // strongly regular in appearance, yet its automorphism group has only
    // five elements and two vertex orbits.
    let spec = petersen_spec();
    let graph = build_coset_graph(&spec).unwrap();
    let g = graph.digraph();
    match is_vertex_transitive(g, 10_000) {
        VtDecision::NotTransitive => println!("coset digraph on 10 vertices: not transitive"),
        other => println!("coset digraph: unexpected verdict {:?}", other),
    }
    let auts = automorphism_group(g, 1 << 22).unwrap();
    println!("  automorphism group order: {}", auts.len());
    let mut orbit0: Vec<usize> = auts.iter().map(|m| m.images()[0]).collect();
    orbit0.sort_unstable();
    orbit0.dedup();
    println!(
        "  orbit of vertex 0: {:?} (smaller than 10, so not transitive)",
        orbit0
    );
}
