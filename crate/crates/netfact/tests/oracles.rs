//! Cross-module frozen facts that tie the named constructions to the
//! digraph machinery.

use netfact::constructions::hoffman_singleton_graph;
use netfact::digraph::stabilizer_automorphisms;

/// The degree-7 Moore graph on 50 vertices has automorphism group of order
/// 252 000, so the stabilizer of any vertex has order 252 000 / 50 = 5040.
/// The backtracking enumeration reaches exactly that count without
/// truncation.
#[test]
fn moore_graph_vertex_stabilizer_has_order_5040() {
    let g = hoffman_singleton_graph(5).unwrap();
    let r = stabilizer_automorphisms(&g, 0, 10_000).unwrap();
    assert!(!r.truncated);
    assert_eq!(r.maps.len(), 5040);
    // Spot-check closure: composing two stabilizer elements stays in the set.
    let composed = r.maps[1].then(&r.maps[2]);
    assert!(r.maps.contains(&composed));
    assert!(g.check_map_is_automorphism(&composed));
}
