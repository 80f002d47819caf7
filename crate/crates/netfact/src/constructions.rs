//! Named constructions: the 6-vertex Kautz tables, the degree-7 Moore
//! graph from a closed-form product on Z_2 x Z_p x Z_p, the 25-vertex
//! degree-2 diameter-4 digraph, and the cyclic difference-set family
//! Y(pi, (v_i)) with its cycle-structure predictions and parameter-space
//! search.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::digraph::{Digraph, DigraphError};
use crate::factorize::{permutation_cycles, Factorization, FactorizeError};
use crate::groupoid::{GroupoidError, PartialGroupoid, RawTable};
use crate::ParseError;

/// Errors raised by the named constructions and the difference-set search.
#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(usize),
    #[error("no built-in generator set for modulus {0}; supply one explicitly")]
    NoDefaultGenerators(usize),
    #[error("generator triple ({0}, {1}, {2}) is out of range for the carrier")]
    BadGenerator(usize, usize, usize),
    #[error("the offset map fixes vertex {0}, which would create a loop")]
    FixedPointProduced(usize),
    #[error("invalid difference-set parameters: {0}")]
    InvalidParams(String),
    #[error(
        "search budget exhausted ({} canonical candidates examined so far)",
        .0.examined
    )]
    SearchBudgetExceeded(Box<SearchReport>),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error(transparent)]
    Factorize(#[from] FactorizeError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

// ---------------------------------------------------------------------------
// The 6-element Kautz tables
// ---------------------------------------------------------------------------

/// Element labels for the 6-element tables: the words of Z_2 x Z_3 in
/// lexicographic order.
pub fn kautz_labels() -> Vec<String> {
    ["00", "01", "02", "10", "11", "12"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

const KAUTZ_GEN_IDS: [usize; 2] = [1, 3];

const KAUTZ_PARTIAL_ROWS: [[usize; 2]; 6] = [[1, 3], [2, 5], [3, 1], [4, 0], [5, 2], [0, 4]];

/// The 6-element, 2-generator table whose Cayley graph is the Kautz
/// digraph on 6 vertices: generators s = element 1 and t = element 3.
pub fn kautz_table() -> PartialGroupoid {
    PartialGroupoid::new(
        KAUTZ_GEN_IDS.to_vec(),
        KAUTZ_PARTIAL_ROWS.iter().map(|r| r.to_vec()).collect(),
    )
    .expect("the fixed table satisfies the axioms")
}

/// [`kautz_table`] as a labeled raw table (generator columns only).
pub fn kautz_table_raw() -> RawTable {
    RawTable {
        labels: kautz_labels(),
        gen_ids: KAUTZ_GEN_IDS.to_vec(),
        rows: KAUTZ_PARTIAL_ROWS.iter().map(|r| r.to_vec()).collect(),
    }
}

/// A complete 6x6 multiplication on the Kautz carrier. Every column is a
/// fixed-point-free permutation and the generator columns agree with
/// [`kautz_table`], but the rows are not injective, so the table has no
/// left cancellation; it also differs from the canonical extension of
/// [`kautz_table`] in two cells of the last column.
pub fn kautz_full_table() -> RawTable {
    let rows = [
        [0, 1, 2, 3, 4, 5],
        [1, 2, 3, 5, 0, 1],
        [2, 3, 4, 1, 2, 3],
        [3, 4, 5, 0, 1, 2],
        [4, 5, 0, 2, 3, 4],
        [5, 0, 1, 4, 5, 0],
    ];
    RawTable {
        labels: kautz_labels(),
        gen_ids: KAUTZ_GEN_IDS.to_vec(),
        rows: rows.iter().map(|r| r.to_vec()).collect(),
    }
}

/// A complete 6x6 table on the same carrier whose distinguished element
/// works as an identity on the right but not on the left: generator and
/// element columns are all permutations (axioms 2 and 3 hold) while row 0
/// is not the identity (axiom 1 fails). Its generator columns still draw
/// a degree-2 digraph isomorphic to the Kautz digraph, though not with
/// the identical edge set.
pub fn right_identity_table() -> RawTable {
    let rows = [
        [0, 1, 2, 4, 5, 3],
        [1, 2, 0, 3, 4, 5],
        [2, 0, 1, 5, 3, 4],
        [3, 4, 5, 1, 2, 0],
        [4, 5, 3, 0, 1, 2],
        [5, 3, 4, 2, 0, 1],
    ];
    RawTable {
        labels: kautz_labels(),
        gen_ids: KAUTZ_GEN_IDS.to_vec(),
        rows: rows.iter().map(|r| r.to_vec()).collect(),
    }
}

// ---------------------------------------------------------------------------
// The degree-7 Moore graph on Z_2 x Z_p x Z_p
// ---------------------------------------------------------------------------

fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The closed-form product on Z_2 x Z_p x Z_p:
///
/// `(a, b, c) * (x, y, z) = (a + x, b - b*x + y, c + sign * b*y + 2^a * z)`
///
/// with the first coordinate mod 2 and the rest mod p. The sign of the
/// cross term follows the LEFT operand's first coordinate (+1 when a = 0,
/// -1 when a = 1); that is the reading under which the generator edges of
/// [`hoffman_singleton_graph`] close into a symmetric degree-7
/// distance-2 graph.
pub fn hoffman_singleton_product(
    l: (usize, usize, usize),
    r: (usize, usize, usize),
    p: usize,
) -> (usize, usize, usize) {
    let (a, b, c) = l;
    let (x, y, z) = r;
    let pow2a = if a == 0 { 1 } else { 2 % p };
    let first = (a + x) % 2;
    let second = (b + y + p - (b * x) % p) % p;
    let cross = (b * y) % p;
    let third = if a == 0 {
        (c + cross + (pow2a * z) % p) % p
    } else {
        (c + (p - cross) + (pow2a * z) % p) % p
    };
    (first, second, third)
}

/// The 7-element generator set for p = 5: two "pentagon" steps fixing the
/// first two coordinates and five cross steps.
pub fn hoffman_singleton_generators() -> Vec<(usize, usize, usize)> {
    vec![
        (0, 0, 1),
        (0, 0, 4),
        (1, 0, 0),
        (1, 1, 0),
        (1, 2, 0),
        (1, 3, 0),
        (1, 4, 0),
    ]
}

/// Dense index of a triple: `a*p*p + b*p + c`.
pub fn triple_index(t: (usize, usize, usize), p: usize) -> usize {
    t.0 * p * p + t.1 * p + t.2
}

/// Inverse of [`triple_index`].
pub fn index_triple(i: usize, p: usize) -> (usize, usize, usize) {
    (i / (p * p), (i / p) % p, i % p)
}

fn triple_label(t: (usize, usize, usize), p: usize) -> String {
    if p <= 10 {
        format!("{}{}{}", t.0, t.1, t.2)
    } else {
        format!("{}-{}-{}", t.0, t.1, t.2)
    }
}

fn check_hs_args(p: usize, gens: &[(usize, usize, usize)]) -> Result<(), ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NonPrimeModulus(p));
    }
    if gens.is_empty() {
        return Err(ConstructionError::InvalidParams(
            "empty generator set".into(),
        ));
    }
    for &(a, b, c) in gens {
        if a >= 2 || b >= p || c >= p {
            return Err(ConstructionError::BadGenerator(a, b, c));
        }
    }
    Ok(())
}

/// The raw 2p^2 x d table of the product's generator columns: row u,
/// column k holds `u * gens[k]`. No axioms are checked; run the axiom
/// report to see which hold (for p = 5 with the default generators the
/// five cross columns are 5-to-1, not permutations, so right
/// cancellation fails even though the edge union is a valid digraph).
pub fn hoffman_singleton_table(
    p: usize,
    gens: &[(usize, usize, usize)],
) -> Result<RawTable, ConstructionError> {
    check_hs_args(p, gens)?;
    let n = 2 * p * p;
    let labels = (0..n)
        .map(|i| triple_label(index_triple(i, p), p))
        .collect();
    let gen_ids = gens.iter().map(|&g| triple_index(g, p)).collect();
    let rows = (0..n)
        .map(|u| {
            gens.iter()
                .map(|&g| triple_index(hoffman_singleton_product(index_triple(u, p), g, p), p))
                .collect()
        })
        .collect();
    Ok(RawTable {
        labels,
        gen_ids,
        rows,
    })
}

/// Attempt to read the generator columns of [`hoffman_singleton_table`]
/// as a validated table. For p = 5 with the default generators this
/// fails with a right-cancellation violation: the cross-generator
/// columns of the closed-form product are not permutations. The graph
/// itself is still well defined through [`hoffman_singleton_graph`].
pub fn hoffman_singleton_groupoid(p: usize) -> Result<PartialGroupoid, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NonPrimeModulus(p));
    }
    if p != 5 {
        return Err(ConstructionError::NoDefaultGenerators(p));
    }
    hoffman_singleton_groupoid_with(p, &hoffman_singleton_generators())
}

/// As [`hoffman_singleton_groupoid`] with an explicit generator set.
pub fn hoffman_singleton_groupoid_with(
    p: usize,
    gens: &[(usize, usize, usize)],
) -> Result<PartialGroupoid, ConstructionError> {
    let raw = hoffman_singleton_table(p, gens)?;
    Ok(PartialGroupoid::new(raw.gen_ids, raw.rows)?)
}

/// The digraph with an edge `(u, u * s)` for every vertex u of
/// Z_2 x Z_p x Z_p and every generator s. For p = 5 with the default
/// generator set this is the degree-7 Moore graph: 50 vertices,
/// symmetric, diameter 2, undirected girth 5.
pub fn hoffman_singleton_graph(p: usize) -> Result<Digraph, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NonPrimeModulus(p));
    }
    if p != 5 {
        return Err(ConstructionError::NoDefaultGenerators(p));
    }
    hoffman_singleton_graph_with(p, &hoffman_singleton_generators())
}

/// As [`hoffman_singleton_graph`] with an explicit generator set. The
/// edge union must still validate as a regular digraph; generator sets
/// that unbalance in-degrees or disconnect the carrier are rejected by
/// the digraph validator.
pub fn hoffman_singleton_graph_with(
    p: usize,
    gens: &[(usize, usize, usize)],
) -> Result<Digraph, ConstructionError> {
    check_hs_args(p, gens)?;
    let n = 2 * p * p;
    let mut edges = Vec::with_capacity(n * gens.len());
    for u in 0..n {
        for &g in gens {
            let h = triple_index(hoffman_singleton_product(index_triple(u, p), g, p), p);
            edges.push((u, h));
        }
    }
    Ok(Digraph::new(n, edges)?)
}

// ---------------------------------------------------------------------------
// The 25-vertex degree-2 diameter-4 digraph
// ---------------------------------------------------------------------------

/// Cycle form of the second factor: a 5-cycle at 0, a 5-cycle at 3, and
/// a 15-cycle.
const DEG2_DIAM4_T_CYCLES: [&[usize]; 3] = [
    &[0, 5, 10, 15, 20],
    &[3, 23, 18, 13, 8],
    &[1, 17, 24, 21, 12, 19, 16, 7, 14, 11, 2, 9, 6, 22, 4],
];

/// The 25-vertex degree-2 diameter-4 digraph, with its two 1-factors:
/// factor 0 is the +1 (mod 25) Hamiltonian cycle and factor 1 is the
/// permutation with cycles (0 5 10 15 20)(3 23 18 13 8)(1 17 24 21 12
/// 19 16 7 14 11 2 9 6 22 4).
pub fn alegre_graph() -> (Digraph, Factorization) {
    let n = 25;
    let s: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut t = vec![usize::MAX; n];
    for cyc in DEG2_DIAM4_T_CYCLES {
        for (k, &vtx) in cyc.iter().enumerate() {
            t[vtx] = cyc[(k + 1) % cyc.len()];
        }
    }
    let f =
        Factorization::new(n, vec![s, t]).expect("the fixed factors are loop-free permutations");
    let g = f.to_digraph().expect("the fixed digraph is regular");
    (g, f)
}

// ---------------------------------------------------------------------------
// Cycle notation
// ---------------------------------------------------------------------------

/// The cycle decomposition of a permutation. Cycles partition the points;
/// each cycle starts at its smallest member and cycles are ordered by
/// that member. Fixed points appear as singleton cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStructure {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleStructure {
    /// Decompose a permutation given as an image sequence.
    pub fn of(perm: &[usize]) -> CycleStructure {
        CycleStructure {
            cycles: permutation_cycles(perm),
        }
    }

    /// The cycles of length at least 2.
    pub fn nontrivial(&self) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .filter(|c| c.len() > 1)
            .cloned()
            .collect()
    }

    /// Rebuild the image sequence on `n` points; points not listed in any
    /// cycle are fixed.
    pub fn to_permutation(&self, n: usize) -> Result<Vec<usize>, ConstructionError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cyc in &self.cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if x >= n {
                    return Err(ConstructionError::InvalidParams(format!(
                        "cycle entry {} out of range for {} points",
                        x, n
                    )));
                }
                if seen[x] {
                    return Err(ConstructionError::InvalidParams(format!(
                        "cycle entry {} repeated",
                        x
                    )));
                }
                seen[x] = true;
                images[x] = cyc[(k + 1) % cyc.len()];
            }
        }
        Ok(images)
    }
}

impl fmt::Display for CycleStructure {
    /// Parenthesized cycle notation, fixed points omitted; the identity
    /// prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<&Vec<usize>> = self.cycles.iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "()");
        }
        for cyc in nontrivial {
            write!(f, "(")?;
            for (i, x) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Parse parenthesized cycle notation into an image sequence on `n`
/// points. Entries separate by commas or whitespace; unlisted points are
/// fixed; `()` is the identity.
pub fn parse_cycles(text: &str, n: usize) -> Result<Vec<usize>, ParseError> {
    let mut images: Vec<usize> = (0..n).collect();
    let mut seen = vec![false; n];
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let err = |col: usize, msg: String| ParseError::new(1, col + 1, msg);
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        if chars[i] != '(' {
            return Err(err(i, format!("expected '(', found {:?}", chars[i])));
        }
        let open = i;
        i += 1;
        let mut cyc: Vec<usize> = Vec::new();
        loop {
            while i < chars.len() && (chars[i].is_whitespace() || chars[i] == ',') {
                i += 1;
            }
            if i >= chars.len() {
                return Err(err(open, "unclosed cycle".into()));
            }
            if chars[i] == ')' {
                i += 1;
                break;
            }
            if !chars[i].is_ascii_digit() {
                return Err(err(i, format!("expected a point, found {:?}", chars[i])));
            }
            let start = i;
            let mut x: usize = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                x = x * 10 + (chars[i] as usize - '0' as usize);
                i += 1;
            }
            if x >= n {
                return Err(err(start, format!("point {} out of range (n = {})", x, n)));
            }
            if seen[x] {
                return Err(err(start, format!("point {} repeated", x)));
            }
            seen[x] = true;
            cyc.push(x);
        }
        for (k, &x) in cyc.iter().enumerate() {
            images[x] = cyc[(k + 1) % cyc.len()];
        }
    }
    Ok(images)
}

// ---------------------------------------------------------------------------
// The difference-set family
// ---------------------------------------------------------------------------

/// Parameters of the offset map Y on Z_n: a subgroup U = {0, a, 2a, ...}
/// of order b with n = a*b, a permutation `pi` of the coset
/// representatives 0..a-1, and one offset `v[i]` in U per representative.
/// The map sends `i + u` to `pi(i) + u + v[i]` (mod n).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiffSetParams {
    n: usize,
    a: usize,
    b: usize,
    pi: Vec<usize>,
    v: Vec<usize>,
}

impl DiffSetParams {
    pub fn new(
        n: usize,
        a: usize,
        b: usize,
        pi: Vec<usize>,
        v: Vec<usize>,
    ) -> Result<Self, ConstructionError> {
        let bad = |msg: String| Err(ConstructionError::InvalidParams(msg));
        if n < 2 {
            return bad(format!("n = {} is too small", n));
        }
        if a == 0 || b == 0 || a * b != n {
            return bad(format!("n = {} is not a * b = {} * {}", n, a, b));
        }
        if pi.len() != a {
            return bad(format!("pi has {} images for a = {}", pi.len(), a));
        }
        let mut hit = vec![false; a];
        for &x in &pi {
            if x >= a || hit[x] {
                return bad(format!("pi is not a permutation of 0..{}", a));
            }
            hit[x] = true;
        }
        if v.len() != a {
            return bad(format!("v has {} entries for a = {}", v.len(), a));
        }
        for &x in &v {
            if x >= n || x % a != 0 {
                return bad(format!("offset {} is not in the subgroup U", x));
            }
        }
        Ok(DiffSetParams { n, a, b, pi, v })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn v(&self) -> &[usize] {
        &self.v
    }
}

/// The image sequence of Y without the loop check.
fn diffset_y_raw(p: &DiffSetParams) -> Vec<usize> {
    let n = p.n;
    let mut succ = vec![0usize; n];
    for i in 0..p.a {
        for j in 0..p.b {
            let u = j * p.a;
            succ[i + u] = (p.pi[i] + u + p.v[i]) % n;
        }
    }
    succ
}

/// The offset map Y as a 1-factor: `succ[i + u] = pi(i) + u + v[i]`
/// (mod n). Always a permutation; parameters whose map fixes a vertex
/// are rejected because a 1-factor may not contain a loop.
pub fn diffset_y(p: &DiffSetParams) -> Result<Vec<usize>, ConstructionError> {
    let succ = diffset_y_raw(p);
    let mut hit = vec![false; p.n];
    for (x, &s) in succ.iter().enumerate() {
        if s == x {
            return Err(ConstructionError::FixedPointProduced(x));
        }
        assert!(!hit[s], "the offset map must be a permutation");
        hit[s] = true;
    }
    Ok(succ)
}

fn gcd(mut x: usize, mut y: usize) -> usize {
    while y != 0 {
        let r = x % y;
        x = y;
        y = r;
    }
    x
}

/// Predicted length of the Y-orbit through `start`: with c the length of
/// the pi-cycle through `start mod a` and w the sum of the offsets along
/// that cycle, the orbit length is alpha * c where alpha is the additive
/// order of w in Z_n.
pub fn predicted_cycle_length(p: &DiffSetParams, start: usize) -> usize {
    assert!(start < p.n, "start vertex out of range");
    let i0 = start % p.a;
    let mut c = 0usize;
    let mut w = 0usize;
    let mut i = i0;
    loop {
        w = (w + p.v[i]) % p.n;
        c += 1;
        i = p.pi[i];
        if i == i0 {
            break;
        }
    }
    let alpha = p.n / gcd(p.n, w);
    alpha * c
}

/// The parameters describing the same digraph after renaming vertex j to
/// j + 1: the permutation advances (`pi'(i) = pi(i-1) + 1`) and the
/// offsets rotate with two compensating corrections of size a, so the
/// vertex map j -> j+1 carries the old edge set exactly onto the new.
/// Applying this a times returns the original parameters.
pub fn shift_params(p: &DiffSetParams) -> DiffSetParams {
    let a = p.a;
    let n = p.n;
    let pi2: Vec<usize> = (0..a).map(|i| (p.pi[(i + a - 1) % a] + 1) % a).collect();
    let mut w: Vec<usize> = (0..a).map(|i| p.v[(i + a - 1) % a]).collect();
    w[0] = (w[0] + n - a) % n;
    let j =
        p.pi.iter()
            .position(|&x| x == a - 1)
            .expect("pi is a permutation");
    w[(j + 1) % a] = (w[(j + 1) % a] + a) % n;
    DiffSetParams::new(n, a, p.b, pi2, w).expect("the shifted parameters stay valid")
}

/// The parameters describing the digraph relabeled by negation of Z_n.
/// Negating every vertex reverses the +1 factor, so the member of the
/// family carrying that relabeling is the converse digraph: its offset
/// map is Y'(j) = -Y^(-1)(-j). Diameter and loop-freeness are
/// unchanged, and negating twice returns the original parameters.
pub fn negate_params(p: &DiffSetParams) -> DiffSetParams {
    let n = p.n;
    let a = p.a;
    let y = diffset_y_raw(p);
    let mut y_inv = vec![0usize; n];
    for (x, &s) in y.iter().enumerate() {
        y_inv[s] = x;
    }
    let mut pi2 = vec![0usize; a];
    let mut v2 = vec![0usize; a];
    for (i, (pe, ve)) in pi2.iter_mut().zip(v2.iter_mut()).enumerate() {
        let yy = (n - y_inv[(n - i) % n]) % n;
        *pe = yy % a;
        *ve = yy - yy % a;
    }
    DiffSetParams::new(n, a, p.b, pi2, v2).expect("the negated parameters stay valid")
}

/// The degree-2 digraph with factor 0 the +1 (mod n) Hamiltonian cycle
/// and factor 1 the offset map Y.
pub fn diffset_digraph(p: &DiffSetParams) -> Result<(Digraph, Factorization), ConstructionError> {
    let n = p.n;
    let z: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let y = diffset_y(p)?;
    let f = Factorization::new(n, vec![z, y])?;
    let g = f.to_digraph()?;
    Ok((g, f))
}

/// Diameter of the difference-set digraph computed from coset
/// representatives only: because the translations v -> v + w (w in U)
/// are automorphisms, the maximum eccentricity over sources 0..a-1
/// equals the full diameter.
pub fn diffset_diameter(p: &DiffSetParams) -> Result<usize, ConstructionError> {
    let (g, _) = diffset_digraph(p)?;
    let mut best = 0;
    for src in 0..p.a {
        let far = g
            .distances_from(src)
            .into_iter()
            .max()
            .expect("nonempty distance vector");
        best = best.max(far);
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Parameter-space search
// ---------------------------------------------------------------------------

/// Search options: `budget` caps the number of (pi, v) pairs enumerated,
/// `workers` > 1 parallelizes over permutations, and
/// `negation_symmetry` additionally quotients candidate classes by the
/// negation of Z_n.
#[derive(Debug, Clone)]
pub struct DiffSearchConfig {
    pub budget: u64,
    pub workers: usize,
    pub negation_symmetry: bool,
}

impl Default for DiffSearchConfig {
    fn default() -> Self {
        DiffSearchConfig {
            budget: 10_000_000,
            workers: 1,
            negation_symmetry: false,
        }
    }
}

/// Search outcome: `examined` counts canonical class representatives
/// considered, `skipped_fixed_point` the representatives rejected for
/// producing a loop, `argmin` every representative attaining
/// `best_diameter` (in lexicographic order), and `reduced_space` the
/// closed-form class-count estimate (a-1)! * b^(a-1) for the shift
/// quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub examined: u64,
    pub skipped_fixed_point: u64,
    pub best_diameter: Option<usize>,
    pub argmin: Vec<DiffSetParams>,
    pub reduced_space: u64,
    pub target_met: Option<bool>,
}

fn checked_reduced_space(a: usize, b: usize) -> Option<u64> {
    let mut out: u64 = 1;
    for k in 2..a {
        out = out.checked_mul(k as u64)?;
    }
    for _ in 1..a {
        out = out.checked_mul(b as u64)?;
    }
    Some(out)
}

fn permutations_lex(a: usize) -> Vec<Vec<usize>> {
    fn go(a: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == a {
            out.push(cur.clone());
            return;
        }
        for x in 0..a {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(a, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(a, &mut Vec::with_capacity(a), &mut vec![false; a], &mut out);
    out
}

/// True when `p` is the lexicographically least member of its class
/// under the shift renaming (and, optionally, negation).
fn is_canonical(p: &DiffSetParams, negation: bool) -> bool {
    let mut q = shift_params(p);
    for _ in 1..p.a {
        if q < *p {
            return false;
        }
        q = shift_params(&q);
    }
    if negation {
        let mut q = negate_params(p);
        for _ in 0..p.a {
            if q < *p {
                return false;
            }
            q = shift_params(&q);
        }
    }
    true
}

#[derive(Default)]
struct PiScan {
    examined: u64,
    skipped: u64,
    best: Option<usize>,
    argmin: Vec<DiffSetParams>,
    exceeded: bool,
}

fn scan_pi(
    n: usize,
    a: usize,
    b: usize,
    pi: &[usize],
    negation: bool,
    counter: &AtomicU64,
    budget: u64,
) -> PiScan {
    let mut out = PiScan::default();
    let mut digits = vec![0usize; a];
    loop {
        if counter.fetch_add(1, Ordering::Relaxed) >= budget {
            out.exceeded = true;
            return out;
        }
        let v: Vec<usize> = digits.iter().map(|&d| d * a).collect();
        let params =
            DiffSetParams::new(n, a, b, pi.to_vec(), v).expect("enumerated parameters are valid");
        if is_canonical(&params, negation) {
            out.examined += 1;
            let y = diffset_y_raw(&params);
            if y.iter().enumerate().any(|(x, &s)| s == x) {
                out.skipped += 1;
            } else {
                let diam = diffset_diameter(&params).expect("loop-free parameters build a digraph");
                if out.best.is_none_or(|cur| diam < cur) {
                    out.best = Some(diam);
                    out.argmin.clear();
                }
                if out.best == Some(diam) {
                    out.argmin.push(params);
                }
            }
        }
        let mut k = a;
        let carried = loop {
            if k == 0 {
                break true;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < b {
                break false;
            }
            digits[k] = 0;
        };
        if carried {
            return out;
        }
    }
}

/// Enumerate the difference-set family on n = a*b up to the shift
/// renaming (one representative per class: the lexicographically least
/// (pi, v)), measure each representative's diameter, and report the
/// minimum with every attaining representative. The enumeration is
/// exhaustive and deterministic; `target_diameter` only annotates the
/// report. A budget stop returns the partial report as an error (under
/// multiple workers the partial contents depend on scheduling).
pub fn search_diffsets(
    n: usize,
    a: usize,
    b: usize,
    target_diameter: Option<usize>,
    config: &DiffSearchConfig,
) -> Result<SearchReport, ConstructionError> {
    if a == 0 || b == 0 || a * b != n || n < 2 {
        return Err(ConstructionError::InvalidParams(format!(
            "n = {} is not a * b = {} * {}",
            n, a, b
        )));
    }
    if a > 9 {
        return Err(ConstructionError::InvalidParams(format!(
            "a = {} is past the enumerable range",
            a
        )));
    }
    let reduced_space = checked_reduced_space(a, b)
        .ok_or_else(|| ConstructionError::InvalidParams("reduced-space count overflows".into()))?;
    let pis = permutations_lex(a);
    let counter = AtomicU64::new(0);
    let negation = config.negation_symmetry;
    let budget = config.budget;
    let scans: Vec<PiScan> = if config.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| ConstructionError::InvalidParams(format!("worker pool: {}", e)))?;
        pool.install(|| {
            pis.par_iter()
                .map(|pi| scan_pi(n, a, b, pi, negation, &counter, budget))
                .collect()
        })
    } else {
        pis.iter()
            .map(|pi| scan_pi(n, a, b, pi, negation, &counter, budget))
            .collect()
    };

    let mut report = SearchReport {
        examined: 0,
        skipped_fixed_point: 0,
        best_diameter: None,
        argmin: Vec::new(),
        reduced_space,
        target_met: None,
    };
    let mut exceeded = false;
    for scan in &scans {
        report.examined += scan.examined;
        report.skipped_fixed_point += scan.skipped;
        exceeded |= scan.exceeded;
        if let Some(d) = scan.best {
            if report.best_diameter.is_none_or(|cur| d < cur) {
                report.best_diameter = Some(d);
            }
        }
    }
    for scan in scans {
        if scan.best == report.best_diameter {
            report.argmin.extend(scan.argmin);
        }
    }
    report.argmin.sort();
    report.target_met = target_diameter.map(|t| report.best_diameter.is_some_and(|best| best <= t));
    if exceeded {
        return Err(ConstructionError::SearchBudgetExceeded(Box::new(report)));
    }
    Ok(report)
}

/// Render a search report as JSON with the fields `examined`,
/// `skipped_fixed_point`, `best_diameter`, `argmin`, `reduced_space`.
pub fn search_report_json(r: &SearchReport) -> String {
    let argmin: Vec<serde_json::Value> = r
        .argmin
        .iter()
        .map(|p| {
            serde_json::json!({
                "n": p.n(),
                "a": p.a(),
                "b": p.b(),
                "pi": CycleStructure::of(p.pi()).to_string(),
                "v": p.v(),
            })
        })
        .collect();
    serde_json::json!({
        "examined": r.examined,
        "skipped_fixed_point": r.skipped_fixed_point,
        "best_diameter": r.best_diameter,
        "argmin": argmin,
        "reduced_space": r.reduced_space,
    })
    .to_string()
}

// ---------------------------------------------------------------------------
// Parameter text format: "n a b", "pi: cycles", "v: offsets"
// ---------------------------------------------------------------------------

/// Parse the parameter text format: a line `n a b`, a line
/// `pi: <cycle notation>`, and a line `v: <comma- or space-separated
/// offsets>`, with '#' comments and blank lines ignored.
pub fn parse_diffset_params(text: &str) -> Result<DiffSetParams, ConstructionError> {
    let mut head: Option<(usize, usize, usize)> = None;
    let mut pi_line: Option<(usize, String)> = None;
    let mut v_vals: Option<Vec<usize>> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("pi:") {
            pi_line = Some((lineno, rest.trim().to_string()));
            continue;
        }
        if let Some(rest) = line.strip_prefix("v:") {
            let mut vals = Vec::new();
            for tok in rest.split(|c: char| c == ',' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                let x: usize = tok
                    .parse()
                    .map_err(|_| ParseError::new(lineno, 1, format!("bad offset {:?}", tok)))?;
                vals.push(x);
            }
            v_vals = Some(vals);
            continue;
        }
        if head.is_some() {
            return Err(ParseError::new(lineno, 1, format!("unexpected line {:?}", line)).into());
        }
        let nums: Vec<&str> = line.split_whitespace().collect();
        if nums.len() != 3 {
            return Err(ParseError::new(lineno, 1, "expected \"n a b\"".into()).into());
        }
        let parse = |tok: &str| -> Result<usize, ParseError> {
            tok.parse()
                .map_err(|_| ParseError::new(lineno, 1, format!("bad number {:?}", tok)))
        };
        head = Some((parse(nums[0])?, parse(nums[1])?, parse(nums[2])?));
    }
    let (n, a, b) = head.ok_or_else(|| ParseError::new(1, 1, "missing \"n a b\" line".into()))?;
    let (pi_no, pi_text) =
        pi_line.ok_or_else(|| ParseError::new(1, 1, "missing \"pi:\" line".into()))?;
    let pi = parse_cycles(&pi_text, a).map_err(|e| ParseError::new(pi_no, e.col, e.msg))?;
    let v = v_vals.ok_or_else(|| ParseError::new(1, 1, "missing \"v:\" line".into()))?;
    DiffSetParams::new(n, a, b, pi, v)
}

/// Write the parameter text format read by [`parse_diffset_params`].
pub fn write_diffset_params(p: &DiffSetParams) -> String {
    let v_text: Vec<String> = p.v().iter().map(|x| x.to_string()).collect();
    format!(
        "{} {} {}\npi: {}\nv: {}\n",
        p.n(),
        p.a(),
        p.b(),
        CycleStructure::of(p.pi()),
        v_text.join(",")
    )
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
