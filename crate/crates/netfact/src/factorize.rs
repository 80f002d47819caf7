//! Splitting a `d`-regular digraph into `d` successor permutations.
//!
//! A *factor* of a digraph is a fixed-point-free permutation `succ` whose
//! edges `(v, succ(v))` all belong to the graph; a *factorization* is a list
//! of `d` factors whose edge multisets add up to exactly the graph's edges.
//! One factorization always exists (repeated bipartite perfect matchings);
//! enumerating all of them is a bounded backtracking search.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::digraph::{Digraph, DigraphError};
use crate::ParseError;

/// A word over the factor alphabet `0..d`.
pub type Word = Vec<usize>;

/// Errors raised while building or verifying factorizations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorizeError {
    /// Factor `factor` is not a permutation of the vertex set.
    #[error("factor {factor} is not a permutation of the vertex set")]
    NotPermutation { factor: usize },
    /// Factor `factor` maps `vertex` to itself.
    #[error("factor {factor} has a fixed point at vertex {vertex}")]
    FixedPoint { factor: usize, vertex: usize },
    /// The factors' edges do not add up to the graph's edge multiset.
    #[error("factor edges do not match the graph: edge ({0}, {1}) has the wrong multiplicity")]
    EdgeMismatch(usize, usize),
    /// Shape mismatch between a factorization and a graph.
    #[error("expected {expected} factors over {n} vertices, got {got}")]
    WrongShape {
        expected: usize,
        got: usize,
        n: usize,
    },
    /// No perfect matching was found; unreachable on a valid regular digraph.
    #[error("no perfect matching in a matching round")]
    MatchingFailed,
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

/// `d` fixed-point-free successor permutations over a common vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization {
    n: usize,
    factors: Vec<Vec<usize>>,
}

impl Factorization {
    /// Build from successor vectors, checking each is a fixed-point-free
    /// permutation of `0..n`. (Whether they partition a particular graph's
    /// edges is [`verify_factorization`]'s job.)
    pub fn new(n: usize, factors: Vec<Vec<usize>>) -> Result<Self, FactorizeError> {
        for (k, f) in factors.iter().enumerate() {
            if f.len() != n {
                return Err(FactorizeError::NotPermutation { factor: k });
            }
            let mut seen = vec![false; n];
            for (v, &s) in f.iter().enumerate() {
                if s >= n || seen[s] {
                    return Err(FactorizeError::NotPermutation { factor: k });
                }
                seen[s] = true;
                if s == v {
                    return Err(FactorizeError::FixedPoint {
                        factor: k,
                        vertex: v,
                    });
                }
            }
        }
        Ok(Factorization { n, factors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of factors.
    pub fn d(&self) -> usize {
        self.factors.len()
    }

    /// Successor vector of factor `k`.
    pub fn factor(&self, k: usize) -> &[usize] {
        &self.factors[k]
    }

    pub fn factors(&self) -> &[Vec<usize>] {
        &self.factors
    }

    /// Follow `word` from `start`, one factor per letter, left to right.
    pub fn walk(&self, start: usize, word: &[usize]) -> usize {
        let mut v = start;
        for &letter in word {
            assert!(letter < self.d(), "word letter {} out of range", letter);
            v = self.factors[letter][v];
        }
        v
    }

    /// The edge multiset of all factors combined, sorted.
    pub fn all_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .factors
            .iter()
            .flat_map(|f| f.iter().enumerate().map(|(v, &s)| (v, s)))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Reassemble the digraph the factors describe.
    pub fn to_digraph(&self) -> Result<Digraph, DigraphError> {
        Digraph::new(self.n, self.all_edges())
    }

    /// Canonical form: factors sorted lexicographically by successor vector.
    pub fn normalized(&self) -> Factorization {
        let mut fs = self.factors.clone();
        fs.sort_unstable();
        Factorization {
            n: self.n,
            factors: fs,
        }
    }
}

/// Check that `f`'s factor edges add up to exactly `g`'s edge multiset.
pub fn verify_factorization(g: &Digraph, f: &Factorization) -> Result<(), FactorizeError> {
    if f.n() != g.n() || f.d() != g.degree() {
        return Err(FactorizeError::WrongShape {
            expected: g.degree(),
            got: f.d(),
            n: g.n(),
        });
    }
    let ours = f.all_edges();
    if ours != g.edges() {
        // Find a witness edge with mismatched multiplicity.
        for &(u, v) in ours.iter().chain(g.edges()) {
            let a = ours.iter().filter(|&&e| e == (u, v)).count();
            if a != g.multiplicity(u, v) {
                return Err(FactorizeError::EdgeMismatch(u, v));
            }
        }
        unreachable!("sorted multisets differ but every multiplicity matches");
    }
    Ok(())
}

/// Construct one factorization by `d` rounds of bipartite perfect matching
/// (tails on the left, heads on the right, remaining edge multiplicities as
/// capacity). Deterministic: augmenting paths scan heads in index order.
pub fn one_factorization(g: &Digraph) -> Result<Factorization, FactorizeError> {
    let n = g.n();
    let d = g.degree();
    let mut rem = vec![vec![0usize; n]; n];
    for &(u, v) in g.edges() {
        rem[u][v] += 1;
    }
    let mut factors = Vec::with_capacity(d);
    for _ in 0..d {
        let succ = perfect_matching(&rem).ok_or(FactorizeError::MatchingFailed)?;
        for (u, &v) in succ.iter().enumerate() {
            rem[u][v] -= 1;
        }
        factors.push(succ);
    }
    let f = Factorization::new(n, factors)?;
    debug_assert!(verify_factorization(g, &f).is_ok());
    Ok(f)
}

/// One perfect matching of tails to heads over a capacity matrix
/// (`rem[u][v]` = how many parallel `u → v` edges remain available), as a
/// successor vector. Deterministic: augmenting paths scan heads ascending.
pub(crate) fn perfect_matching(rem: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = rem.len();
    let mut head_owner: Vec<Option<usize>> = vec![None; n];
    let mut tail_match: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        if tail_match[u].is_none() {
            let mut visited = vec![false; n];
            augment(u, n, rem, &mut visited, &mut head_owner, &mut tail_match);
        }
    }
    tail_match.into_iter().collect()
}

fn augment(
    u: usize,
    n: usize,
    rem: &[Vec<usize>],
    visited: &mut [bool],
    head_owner: &mut [Option<usize>],
    tail_match: &mut [Option<usize>],
) -> bool {
    for v in 0..n {
        if rem[u][v] > 0 && !visited[v] {
            visited[v] = true;
            let free = match head_owner[v] {
                None => true,
                Some(owner) => augment(owner, n, rem, visited, head_owner, tail_match),
            };
            if free {
                head_owner[v] = Some(u);
                tail_match[u] = Some(v);
                return true;
            }
        }
    }
    false
}

/// Outcome of [`enumerate_one_factorizations`].
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    /// Distinct factorizations found, each normalized, in lexicographic order.
    pub factorizations: Vec<Factorization>,
    /// True when the whole search space was explored (the list is complete).
    pub exhausted: bool,
}

/// Enumerate all factorizations of `g`, up to factor reordering, stopping
/// once `budget` distinct ones have been collected.
pub fn enumerate_one_factorizations(g: &Digraph, budget: usize) -> EnumerationResult {
    let mut out = Vec::new();
    let exhausted = visit_one_factorizations(g, budget, |f| {
        out.push(f.clone());
        true
    });
    EnumerationResult {
        factorizations: out,
        exhausted,
    }
}

/// Streaming form of the enumeration: `visit` is called once per distinct
/// factorization (normalized, in discovery order); returning `false` stops
/// the search. The return value is true exactly when the whole space was
/// explored, so the visited list is complete.
///
/// The search assigns each vertex's out-edges to factor slots in vertex
/// order, pruning any slot whose head is already taken in that factor.
/// Factor order is quotiented out by requiring vertex 0's successors to be
/// non-decreasing across slots, then normalizing and deduplicating.
pub fn visit_one_factorizations(
    g: &Digraph,
    budget: usize,
    mut visit: impl FnMut(&Factorization) -> bool,
) -> bool {
    struct Ctx<'a> {
        g: &'a Digraph,
        used: Vec<Vec<bool>>,
        succ: Vec<Vec<usize>>,
        seen: BTreeSet<Factorization>,
        budget: usize,
        stopped: bool,
    }

    impl<'a> Ctx<'a> {
        // `chosen` holds the heads this vertex has already handed to earlier
        // slots, so parallel edges are consumed the right number of times
        // while identical heads are never tried twice at the same slot.
        fn assign(
            &mut self,
            v: usize,
            slot: usize,
            chosen: &mut Vec<usize>,
            visit: &mut dyn FnMut(&Factorization) -> bool,
        ) {
            if self.stopped {
                return;
            }
            let n = self.g.n();
            let d = self.g.degree();
            if slot == d {
                if v + 1 == n {
                    let f = Factorization::new(n, self.succ.clone())
                        .expect("search invariant: factors are fixed-point-free permutations")
                        .normalized();
                    if self.seen.insert(f.clone()) && (!visit(&f) || self.seen.len() >= self.budget)
                    {
                        self.stopped = true;
                    }
                } else {
                    let mut next_chosen = Vec::new();
                    self.assign(v + 1, 0, &mut next_chosen, visit);
                }
                return;
            }
            let outs: Vec<usize> = self.g.out_neighbors(v).to_vec();
            let mut last_tried: Option<usize> = None;
            for &h in &outs {
                if self.stopped {
                    return;
                }
                // Out-neighbors are sorted: each distinct head tried once.
                if last_tried == Some(h) {
                    continue;
                }
                last_tried = Some(h);
                let spent = chosen.iter().filter(|&&c| c == h).count();
                let avail = outs.iter().filter(|&&x| x == h).count();
                if spent >= avail || self.used[slot][h] {
                    continue;
                }
                // Vertex 0 fixes factor order: successors non-decreasing.
                if v == 0 && slot > 0 && self.succ[slot - 1][0] > h {
                    continue;
                }
                chosen.push(h);
                self.used[slot][h] = true;
                self.succ[slot][v] = h;
                self.assign(v, slot + 1, chosen, visit);
                self.succ[slot][v] = usize::MAX;
                self.used[slot][h] = false;
                chosen.pop();
            }
        }
    }

    let n = g.n();
    let d = g.degree();
    let mut ctx = Ctx {
        g,
        used: vec![vec![false; n]; d],
        succ: vec![vec![usize::MAX; n]; d],
        seen: BTreeSet::new(),
        budget: budget.max(1),
        stopped: false,
    };
    let mut chosen = Vec::new();
    ctx.assign(0, 0, &mut chosen, &mut visit);
    !ctx.stopped
}

/// Cycle decomposition of a successor permutation: each cycle starts at its
/// smallest element, cycles listed by ascending start.
pub fn permutation_cycles(succ: &[usize]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut v = succ[start];
        while v != start {
            seen[v] = true;
            cyc.push(v);
            v = succ[v];
        }
        cycles.push(cyc);
    }
    cycles
}

/// Render cycles in the usual parenthesized form, e.g. `(0 5 10)(1 6 11)`.
pub fn cycles_to_string(cycles: &[Vec<usize>]) -> String {
    let mut s = String::new();
    for cyc in cycles {
        s.push('(');
        for (i, v) in cyc.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{}", v);
        }
        s.push(')');
    }
    s
}

// ---------------------------------------------------------------------------
// Factorization text format: first line "n d", then d lines of n successors.
// ---------------------------------------------------------------------------

/// Parse the factorization text format.
pub fn parse_factorization(text: &str) -> Result<Factorization, ParseError> {
    let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Result<Vec<usize>, _> = line.split_whitespace().map(|t| t.parse()).collect();
        let nums = nums.map_err(|_| {
            ParseError::new(line_no, 1, format!("expected integers, got {:?}", line))
        })?;
        match header {
            None => {
                if nums.len() != 2 {
                    return Err(ParseError::new(
                        line_no,
                        1,
                        "first line must be \"n d\"".into(),
                    ));
                }
                header = Some((nums[0], nums[1]));
            }
            Some((n, _)) => {
                if nums.len() != n {
                    return Err(ParseError::new(
                        line_no,
                        1,
                        format!("expected {} successors, got {}", n, nums.len()),
                    ));
                }
                rows.push((line_no, nums));
            }
        }
    }
    let (n, d) = header.ok_or_else(|| ParseError::new(0, 0, "empty factorization file".into()))?;
    if rows.len() != d {
        return Err(ParseError::new(
            0,
            0,
            format!("expected {} factor lines, got {}", d, rows.len()),
        ));
    }
    let factors: Vec<Vec<usize>> = rows.into_iter().map(|(_, r)| r).collect();
    Factorization::new(n, factors).map_err(|e| ParseError::new(0, 0, e.to_string()))
}

/// Emit the factorization text format.
pub fn write_factorization(f: &Factorization) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", f.n(), f.d());
    for k in 0..f.d() {
        let row: Vec<String> = f.factor(k).iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

/// DOT export with one color per factor.
pub fn dot_with_factors(f: &Factorization) -> String {
    const PALETTE: [&str; 10] = [
        "red",
        "blue",
        "forestgreen",
        "orange",
        "purple",
        "brown",
        "cadetblue",
        "magenta",
        "goldenrod",
        "black",
    ];
    let mut s = String::from("digraph G {\n");
    for v in 0..f.n() {
        let _ = writeln!(s, "  {};", v);
    }
    for k in 0..f.d() {
        let color = PALETTE[k % PALETTE.len()];
        for (v, &succ) in f.factor(k).iter().enumerate() {
            let _ = writeln!(s, "  {} -> {} [color=\"{}\"];", v, succ, color);
        }
    }
    s.push_str("}\n");
    s
}
