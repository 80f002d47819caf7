//! Regular digraphs, their decompositions into successor permutations, and
//! the algebra that falls out of those decompositions.
//!
//! The crate revolves around one theme: a `d`-regular digraph can be split
//! into `d` fixed-point-free permutations ("factors"), walks can then be
//! described by words over the factor alphabet, and a well-chosen set of
//! words — one per vertex, with distinct endpoints from everywhere — certifies
//! vertex-transitivity and induces a multiplication table on the vertices.
//! The same machinery runs in reverse: from a group with a subgroup and
//! connection set we build coset digraphs, and a parameterized family of
//! degree-2 networks on `Z_n` supports an exhaustive small-diameter search.
//!
//! Module map:
//! - [`digraph`]: validated regular multigraphs, BFS metrics, automorphism
//!   searches, edge-list text format, DOT export.
//! - [`factorize`]: factors as permutations, verification, matching-based
//!   construction, bounded enumeration of all factorizations.
//! - [`spanfact`]: word sets over the factor alphabet, spanning checks,
//!   the vertex-transitivity decision, conflict-free routing schedules.
//! - [`groupoid`]: partial and full multiplication tables, axiom checks,
//!   canonical extension of a spanning factorization, Cayley graphs.
//! - [`coset`]: permutation groups, subgroup cosets, coset digraphs and the
//!   factorizations they induce.
//! - [`constructions`]: named graph families and the `Z_n` difference-set
//!   parameterization with its exhaustive search.
//! - [`cli`]: the command-line front end used by the `netfact` binary.
//!
//! The `examples/` directory is the guided tour: each file exercises one
//! capability end to end on concrete graphs.

pub mod cli;
pub mod constructions;
pub mod coset;
pub mod digraph;
pub mod factorize;
pub mod groupoid;
pub mod spanfact;

/// Error for the line-oriented text formats, carrying a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: String) -> Self {
        ParseError { line, col, msg }
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}
