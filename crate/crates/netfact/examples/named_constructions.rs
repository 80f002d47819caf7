//! Tour of the named digraph constructions.
//!
//! Three families built in closed form:
//!  - the 6-vertex Kautz digraph, as the Cayley graph of a 2-generator table;
//!  - a degree-7 graph on 2p² vertices from a signed product on
//!    Z_2 × Z_p × Z_p, which for p = 5 is the unique (7, 2)-Moore graph:
//!    50 vertices, girth 5, diameter 2;
//!  - a 25-vertex, degree-2, diameter-4 digraph whose second factor has a
//!    distinctive (5, 15, 5) cycle structure.
//!
//! Run with: cargo run --example named_constructions

use netfact::constructions::{alegre_graph, hoffman_singleton_graph, kautz_table};
use netfact::factorize::{cycles_to_string, permutation_cycles};
use netfact::groupoid::cayley_graph;

fn main() {
    let (kautz, _) = cayley_graph(&kautz_table()).unwrap();
    println!(
        "Kautz digraph: n = {}, d = {}, diameter = {}",
        kautz.n(),
        kautz.degree(),
        kautz.diameter()
    );

    let moore = hoffman_singleton_graph(5).unwrap();
    println!(
        "degree-7 Moore graph: n = {}, d = {}, symmetric = {}, diameter = {}, girth = {:?}",
        moore.n(),
        moore.degree(),
        moore.is_symmetric(),
        moore.diameter(),
        moore.undirected_girth()
    );
    // Moore property at degree 7, diameter 2: adjacent vertices share no
    // common neighbor; non-adjacent vertices share exactly one.
    let common = |a: usize, b: usize| {
        moore
            .out_neighbors(a)
            .iter()
            .filter(|&&x| moore.out_neighbors(b).contains(&x))
            .count()
    };
    let b_adj = moore.out_neighbors(0)[0];
    let b_far = (1..moore.n())
        .find(|&v| !moore.out_neighbors(0).contains(&v))
        .unwrap();
    println!(
        "  common neighbors: adjacent pair {}, non-adjacent pair {}",
        common(0, b_adj),
        common(0, b_far)
    );

    let (alegre, f) = alegre_graph();
    println!(
        "degree-2 diameter-4 digraph: n = {}, d = {}, diameter = {}",
        alegre.n(),
        alegre.degree(),
        alegre.diameter()
    );
    println!(
        "  second factor cycles: {}",
        cycles_to_string(&permutation_cycles(f.factor(1)))
    );
}
