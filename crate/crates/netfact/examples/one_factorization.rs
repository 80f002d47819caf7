//! Split a regular digraph into permutation factors.
//!
//! A loop-free digraph where every vertex has out-degree and in-degree d
//! always decomposes into d one-factors: permutations without fixed points
//! whose edge sets partition the edges of the digraph. This example builds
//! a random 3-regular digraph and prints each factor in cycle notation.
//!
//! Run with: cargo run --example one_factorization

use netfact::digraph::random_regular;
use netfact::factorize::{
    cycles_to_string, one_factorization, permutation_cycles, verify_factorization,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = random_regular(12, 3, &mut rng);
    println!(
        "random regular digraph: n = {}, d = {}, diameter = {}",
        g.n(),
        g.degree(),
        g.diameter()
    );

    let f = one_factorization(&g).expect("every regular digraph has one");
    verify_factorization(&g, &f).expect("factors partition the edge multiset");

    for k in 0..f.d() {
        let cycles = permutation_cycles(f.factor(k));
        println!("factor {}: {}", k, cycles_to_string(&cycles));
    }

    // Each factor is a permutation: following it from any vertex walks a
    // cycle and returns home after exactly that cycle's length.
    let cycles = permutation_cycles(f.factor(0));
    let home = cycles.iter().find(|c| c.contains(&0)).unwrap().len();
    let mut v = 0;
    for _ in 0..home {
        v = f.factor(0)[v];
    }
    println!("factor 0 walked {home} steps from 0: back at {v}");
}
