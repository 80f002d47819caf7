//! Finite permutation groups by closure, digraphs on the left cosets of a
//! subgroup with a connection set, irreducibility and edge-transitivity,
//! the representative-adjustment 1-factorization, and its spanning wordset.
//!
//! Throughout, products read left to right: `a · b` means "apply `a`, then
//! `b`". Cosets are left cosets `gH`, identified by their smallest member's
//! element index. The digraph's edges are `(gH, gsH)` over a single chosen
//! representative per coset; when the compatibility condition `HS ⊆ SH`
//! holds the edge set does not depend on that choice, and when it fails the
//! builder searches for representatives under which every generator still
//! induces a permutation of the cosets (the directed Petersen variant below
//! needs exactly this).

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::digraph::{Digraph, DigraphError, VertexMap};
use crate::factorize::{self, Factorization, FactorizeError};
use crate::spanfact::{self, SpanError, SpanningFactorization};
use crate::ParseError;

/// Default cap on group closure size.
pub const DEFAULT_CLOSURE_LIMIT: usize = 100_000;

/// Node cap for the representative backtracking search.
const REP_SEARCH_NODE_CAP: u64 = 20_000_000;

/// Which of the three connection-set conditions is being reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// (i) `S ∩ H = ∅` and `S ∪ H` generates the group.
    Generation,
    /// (ii) `HS ⊆ SH`.
    ProductCompatibility,
    /// (iii) the elements of `S` lie in pairwise distinct left cosets.
    DistinctCosets,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Condition::Generation => write!(f, "(i) generation"),
            Condition::ProductCompatibility => write!(f, "(ii) HS within SH"),
            Condition::DistinctCosets => write!(f, "(iii) distinct cosets"),
        }
    }
}

/// Errors from group closure, spec validation, and the coset constructions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CosetError {
    #[error("group closure exceeded the limit of {0} elements")]
    ClosureBudgetExceeded(usize),
    #[error("generator {generator} is not a permutation of the domain")]
    NotAPermutation { generator: usize },
    #[error("H is not a subgroup: {reason}")]
    NotASubgroup { reason: String },
    #[error("condition {condition} violated: {witness}")]
    ConditionViolated {
        condition: Condition,
        witness: String,
    },
    #[error(
        "no representative choice makes every generator a coset permutation ({nodes} nodes tried)"
    )]
    RepSearchFailed { nodes: u64 },
    #[error("the spec is not irreducible")]
    NotIrreducible,
    #[error("the given factor is not a 1-factor of the coset digraph at coset {coset}")]
    BadFactor { coset: usize },
    #[error("no subgroup element adjusts the representative of coset {coset} onto the factor")]
    RepAdjustmentFailed { coset: usize },
    #[error("cosets {tail_a} and {tail_b} both map to coset {head}: not a 1-factor")]
    NotOneFactor {
        tail_a: usize,
        tail_b: usize,
        head: usize,
    },
    #[error("emitted factors do not partition the coset digraph's edges")]
    FactorizationMismatch,
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error(transparent)]
    Factorize(#[from] FactorizeError),
    #[error(transparent)]
    Span(#[from] SpanError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A finite permutation group, enumerated by breadth-first closure.
///
/// Element 0 is the identity. The element order is deterministic: BFS from
/// the identity, multiplying on the right by the generators in index order.
/// Each element remembers the generator word that first reached it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Vec<usize>>,
    elements: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    words: Vec<Vec<usize>>,
}

fn compose_images(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&x| q[x]).collect()
}

impl PermGroup {
    /// Enumerate the closure of `generators` (permutations of
    /// `0..degree`) under composition, up to `limit` elements.
    pub fn closure(
        generators: Vec<Vec<usize>>,
        degree: usize,
        limit: usize,
    ) -> Result<Self, CosetError> {
        for (k, g) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if g.len() != degree
                || !g
                    .iter()
                    .all(|&x| x < degree && !std::mem::replace(&mut seen[x], true))
            {
                return Err(CosetError::NotAPermutation { generator: k });
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut index = BTreeMap::new();
        index.insert(identity, 0usize);
        let mut q = VecDeque::from([0usize]);
        while let Some(i) = q.pop_front() {
            for (k, g) in generators.iter().enumerate() {
                let product = compose_images(&elements[i], g);
                if !index.contains_key(&product) {
                    if elements.len() >= limit {
                        return Err(CosetError::ClosureBudgetExceeded(limit));
                    }
                    let id = elements.len();
                    index.insert(product.clone(), id);
                    elements.push(product);
                    let mut w = words[i].clone();
                    w.push(k);
                    words.push(w);
                    q.push_back(id);
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
            words,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// Image list of element `i`.
    pub fn element(&self, i: usize) -> &[usize] {
        &self.elements[i]
    }

    /// Element index of generator `k`.
    pub fn generator_element(&self, k: usize) -> usize {
        self.index[&self.generators[k]]
    }

    pub fn index_of(&self, images: &[usize]) -> Option<usize> {
        self.index.get(images).copied()
    }

    /// Index of `a · b` (apply `a`, then `b`).
    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.index[&compose_images(&self.elements[a], &self.elements[b])]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let mut inv = vec![0usize; self.degree];
        for (x, &y) in self.elements[a].iter().enumerate() {
            inv[y] = x;
        }
        self.index[&inv]
    }

    /// The generator word that first reached element `i` in the closure.
    pub fn word_of(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    /// Evaluate a generator word from the identity.
    pub fn eval_word(&self, word: &[usize]) -> usize {
        let mut at = 0usize;
        for &k in word {
            at = self.compose(at, self.generator_element(k));
        }
        at
    }
}

/// The left-coset partition induced by a subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    /// Members of each coset (element indices, ascending); cosets ordered
    /// by smallest member, so coset 0 contains the identity.
    pub cosets: Vec<Vec<usize>>,
    /// Element index to coset id.
    pub coset_of: Vec<usize>,
}

/// A group with a subgroup `H` and connection set `S`.
///
/// The constructor enforces conditions (i) and (iii) — without them the
/// coset digraph cannot be regular of degree `|S|` — and records a witness
/// when the softer compatibility condition (ii) `HS ⊆ SH` fails, since the
/// cautionary Petersen-style examples violate exactly that one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpec {
    group: PermGroup,
    h: Vec<usize>,
    s: Vec<usize>,
    condition_ii_witness: Option<(usize, usize)>,
}

impl CosetSpec {
    pub fn new(group: PermGroup, h: Vec<usize>, s: Vec<usize>) -> Result<Self, CosetError> {
        let spec = Self::with_generation_check(group, h, s, true)?;
        Ok(spec)
    }

    /// As [`CosetSpec::new`], but condition (ii) violations are fatal too.
    pub fn new_strict(group: PermGroup, h: Vec<usize>, s: Vec<usize>) -> Result<Self, CosetError> {
        let spec = Self::new(group, h, s)?;
        if let Some((h, s)) = spec.condition_ii_witness {
            return Err(CosetError::ConditionViolated {
                condition: Condition::ProductCompatibility,
                witness: format!("element {} * element {} lies outside SH", h, s),
            });
        }
        Ok(spec)
    }

    fn with_generation_check(
        group: PermGroup,
        mut h: Vec<usize>,
        s: Vec<usize>,
        require_generation: bool,
    ) -> Result<Self, CosetError> {
        let order = group.order();
        if let Some(&bad) = h.iter().chain(s.iter()).find(|&&x| x >= order) {
            return Err(CosetError::NotASubgroup {
                reason: format!("element index {} outside the group", bad),
            });
        }
        h.sort_unstable();
        h.dedup();
        if h.first() != Some(&0) {
            return Err(CosetError::NotASubgroup {
                reason: "identity missing".into(),
            });
        }
        let h_set: BTreeSet<usize> = h.iter().copied().collect();
        for &a in &h {
            for &b in &h {
                let ab = group.compose(a, b);
                if !h_set.contains(&ab) {
                    return Err(CosetError::NotASubgroup {
                        reason: format!("{} * {} = {} escapes H", a, b, ab),
                    });
                }
            }
        }
        // Condition (i): S avoids H and S ∪ H generates.
        if let Some(&bad) = s.iter().find(|x| h_set.contains(x)) {
            return Err(CosetError::ConditionViolated {
                condition: Condition::Generation,
                witness: format!("element {} lies in both S and H", bad),
            });
        }
        if require_generation {
            let mut reached = vec![false; order];
            reached[0] = true;
            let mut q = VecDeque::from([0usize]);
            while let Some(g) = q.pop_front() {
                for &x in h.iter().chain(s.iter()) {
                    let gx = group.compose(g, x);
                    if !reached[gx] {
                        reached[gx] = true;
                        q.push_back(gx);
                    }
                }
            }
            if let Some(missing) = reached.iter().position(|&r| !r) {
                return Err(CosetError::ConditionViolated {
                    condition: Condition::Generation,
                    witness: format!("element {} is not a product over S and H", missing),
                });
            }
        }
        // Condition (iii): distinct left cosets sH.
        let mut coset_key: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &x in &s {
            let mut members: Vec<usize> = h.iter().map(|&hh| group.compose(x, hh)).collect();
            members.sort_unstable();
            if let Some(&prev) = coset_key.get(&members) {
                return Err(CosetError::ConditionViolated {
                    condition: Condition::DistinctCosets,
                    witness: format!("elements {} and {} share a coset", prev, x),
                });
            }
            coset_key.insert(members, x);
        }
        // Condition (ii), recorded rather than fatal: HS ⊆ SH.
        let sh: BTreeSet<usize> = s
            .iter()
            .flat_map(|&x| h.iter().map(move |&hh| (x, hh)))
            .map(|(x, hh)| group.compose(x, hh))
            .collect();
        let mut condition_ii_witness = None;
        'outer: for &hh in &h {
            for &x in &s {
                if !sh.contains(&group.compose(hh, x)) {
                    condition_ii_witness = Some((hh, x));
                    break 'outer;
                }
            }
        }
        Ok(CosetSpec {
            group,
            h,
            s,
            condition_ii_witness,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    /// Subgroup element indices, ascending.
    pub fn h(&self) -> &[usize] {
        &self.h
    }

    /// Connection-set element indices, in the order given.
    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn condition_ii_holds(&self) -> bool {
        self.condition_ii_witness.is_none()
    }

    /// A pair `(h, s)` with `h·s ∉ SH`, when condition (ii) fails.
    pub fn condition_ii_witness(&self) -> Option<(usize, usize)> {
        self.condition_ii_witness
    }

    /// The left-coset partition of the whole group by `H`.
    pub fn coset_partition(&self) -> CosetPartition {
        let order = self.group.order();
        let mut coset_of = vec![usize::MAX; order];
        let mut cosets = Vec::new();
        for g in 0..order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = cosets.len();
            let mut members: Vec<usize> =
                self.h.iter().map(|&hh| self.group.compose(g, hh)).collect();
            members.sort_unstable();
            for &m in &members {
                coset_of[m] = id;
            }
            cosets.push(members);
        }
        CosetPartition { cosets, coset_of }
    }

    /// Sub-spec on a subset of S, sharing group and subgroup. Generation is
    /// deliberately not required: decomposition parts rarely generate.
    fn subspec(&self, s: Vec<usize>) -> CosetSpec {
        Self::with_generation_check(self.group.clone(), self.h.clone(), s, false)
            .expect("a subset of a valid connection set stays valid")
    }
}

/// The digraph on cosets, together with the representative choice that
/// realized it.
#[derive(Debug, Clone)]
pub struct CosetGraph {
    spec: CosetSpec,
    partition: CosetPartition,
    reps: Vec<usize>,
    digraph: Digraph,
}

impl CosetGraph {
    pub fn spec(&self) -> &CosetSpec {
        &self.spec
    }

    pub fn partition(&self) -> &CosetPartition {
        &self.partition
    }

    /// Chosen representative (element index) of each coset.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn coset_of(&self, element: usize) -> usize {
        self.partition.coset_of[element]
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// The coset map of left multiplication by `g`: `fH ↦ (g·f)H`.
    ///
    /// When condition (ii) holds this is always an automorphism of the
    /// digraph; when it fails, some translations stop being edge maps.
    pub fn left_translation(&self, g: usize) -> VertexMap {
        let images: Vec<usize> = (0..self.partition.cosets.len())
            .map(|c| {
                self.partition.coset_of[self.spec.group.compose(g, self.partition.cosets[c][0])]
            })
            .collect();
        VertexMap::new(images).expect("left multiplication permutes cosets")
    }
}

/// Backtracking choice of one representative per coset such that every
/// connection-set element induces a loop-free permutation of the cosets.
/// Candidates are tried smallest-first in coset order, so the result is the
/// lexicographically least valid assignment — with condition (ii) in force
/// that is simply the smallest member of each coset.
fn choose_representatives(
    spec: &CosetSpec,
    partition: &CosetPartition,
) -> Result<Vec<usize>, CosetError> {
    let m = partition.cosets.len();
    let d = spec.s.len();
    let mut used = vec![vec![false; m]; d];
    let mut reps = vec![usize::MAX; m];
    let mut heads = vec![vec![usize::MAX; d]; m];
    let mut nodes = 0u64;

    fn go(
        c: usize,
        spec: &CosetSpec,
        partition: &CosetPartition,
        used: &mut [Vec<bool>],
        reps: &mut [usize],
        heads: &mut [Vec<usize>],
        nodes: &mut u64,
    ) -> Result<bool, CosetError> {
        let m = partition.cosets.len();
        if c == m {
            return Ok(true);
        }
        'candidates: for &cand in &partition.cosets[c] {
            *nodes += 1;
            if *nodes > REP_SEARCH_NODE_CAP {
                return Err(CosetError::RepSearchFailed { nodes: *nodes });
            }
            for (k, &s) in spec.s.iter().enumerate() {
                let head = partition.coset_of[spec.group.compose(cand, s)];
                if head == c || used[k][head] {
                    continue 'candidates;
                }
                heads[c][k] = head;
            }
            for k in 0..spec.s.len() {
                used[k][heads[c][k]] = true;
            }
            reps[c] = cand;
            if go(c + 1, spec, partition, used, reps, heads, nodes)? {
                return Ok(true);
            }
            for k in 0..spec.s.len() {
                used[k][heads[c][k]] = false;
            }
        }
        Ok(false)
    }

    if go(
        0, spec, partition, &mut used, &mut reps, &mut heads, &mut nodes,
    )? {
        Ok(reps)
    } else {
        Err(CosetError::RepSearchFailed { nodes })
    }
}

/// Edge list `(c, coset(rep_c · s))` over the given S entries, in coset
/// order then S order.
fn edges_from_reps(
    spec: &CosetSpec,
    partition: &CosetPartition,
    reps: &[usize],
    s_entries: &[usize],
) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(partition.cosets.len() * s_entries.len());
    for (c, &rep) in reps.iter().enumerate() {
        for &s in s_entries {
            edges.push((c, partition.coset_of[spec.group.compose(rep, s)]));
        }
    }
    edges
}

/// Build the coset digraph: vertices are the left cosets of `H`, edges run
/// from each coset to its images under the connection set, using the
/// representative choice of [`choose_representatives`].
pub fn build_coset_graph(spec: &CosetSpec) -> Result<CosetGraph, CosetError> {
    let partition = spec.coset_partition();
    let reps = choose_representatives(spec, &partition)?;
    let edges = edges_from_reps(spec, &partition, &reps, &spec.s);
    let digraph = Digraph::new(partition.cosets.len(), edges)?;
    debug_assert_eq!(digraph.degree(), spec.s.len());
    Ok(CosetGraph {
        spec: spec.clone(),
        partition,
        reps,
        digraph,
    })
}

/// Does `H` act transitively on the cosets `{sH : s ∈ S}`? True iff for
/// every pair `s, t ∈ S` some `h ∈ H` has `sH = (h·t)H`.
pub fn is_irreducible(spec: &CosetSpec) -> bool {
    let partition = spec.coset_partition();
    spec.s.iter().all(|&s| {
        spec.s.iter().all(|&t| {
            spec.h
                .iter()
                .any(|&h| partition.coset_of[s] == partition.coset_of[spec.group.compose(h, t)])
        })
    })
}

/// Simultaneous vertex- and edge-transitivity of the coset digraph reduces
/// to irreducibility.
pub fn is_edge_transitive(spec: &CosetSpec) -> bool {
    is_irreducible(spec)
}

/// Partition `S` by the orbit equivalence `s ~ t iff ∃h ∈ H: (h·s)H = tH`;
/// each part becomes its own (irreducible) spec on the same group and
/// subgroup. Parts keep S order; their union is exactly `S`.
pub fn decompose_s(spec: &CosetSpec) -> Vec<CosetSpec> {
    let partition = spec.coset_partition();
    // Orbit of sH under left multiplication by H identifies the class.
    let class_of = |s: usize| -> usize {
        spec.h
            .iter()
            .map(|&h| partition.coset_of[spec.group.compose(h, s)])
            .min()
            .expect("H contains the identity")
    };
    let mut parts: Vec<(usize, Vec<usize>)> = Vec::new();
    for &s in &spec.s {
        let class = class_of(s);
        match parts.iter_mut().find(|(c, _)| *c == class) {
            Some((_, members)) => members.push(s),
            None => parts.push((class, vec![s])),
        }
    }
    parts
        .into_iter()
        .map(|(_, members)| spec.subspec(members))
        .collect()
}

/// Output of [`factorization_from_one_factor`]: the adjusted representative per coset
/// and the full 1-factorization labeled by the spec's S entries.
#[derive(Debug, Clone)]
pub struct AdjustedFactors {
    pub reps: Vec<usize>,
    pub factorization: Factorization,
}

/// Given an irreducible spec, an arbitrary 1-factor `d_factor` of its coset
/// digraph, and a distinguished index `r` into S, adjust one representative
/// per coset (multiplying by subgroup elements) so that the `r`-edges are
/// exactly `d_factor`, then emit one factor per S entry by translating the
/// `r`-factor through the subgroup. The emitted factors are verified to
/// partition the digraph's edge multiset.
pub fn factorization_from_one_factor(
    spec: &CosetSpec,
    d_factor: &[usize],
    r: usize,
) -> Result<AdjustedFactors, CosetError> {
    let partition = spec.coset_partition();
    let base_reps = choose_representatives(spec, &partition)?;
    factorization_from_one_factor_with_reps(spec, &base_reps, d_factor, r)
}

/// As [`factorization_from_one_factor`], starting from an explicit representative
/// choice (whose edges `d_factor` must be drawn from).
pub fn factorization_from_one_factor_with_reps(
    spec: &CosetSpec,
    base_reps: &[usize],
    d_factor: &[usize],
    r: usize,
) -> Result<AdjustedFactors, CosetError> {
    if !is_irreducible(spec) {
        return Err(CosetError::NotIrreducible);
    }
    assert!(r < spec.s.len(), "r must index into S");
    let partition = spec.coset_partition();
    let m = partition.cosets.len();
    assert_eq!(base_reps.len(), m, "one base representative per coset");
    let group = &spec.group;
    d_factor_shape(d_factor, m)?;

    // d_factor must use edges of the digraph drawn with base_reps.
    for (c, &head) in d_factor.iter().enumerate() {
        let ok = spec
            .s
            .iter()
            .any(|&s| partition.coset_of[group.compose(base_reps[c], s)] == head);
        if !ok {
            return Err(CosetError::BadFactor { coset: c });
        }
    }

    // Adjust: find h per coset with (rep·h·s_r)H = d_factor[coset].
    let s_r = spec.s[r];
    let mut reps = Vec::with_capacity(m);
    for c in 0..m {
        let adjusted = spec
            .h
            .iter()
            .map(|&h| group.compose(base_reps[c], h))
            .find(|&g| partition.coset_of[group.compose(g, s_r)] == d_factor[c]);
        match adjusted {
            Some(g) => reps.push(g),
            None => return Err(CosetError::RepAdjustmentFailed { coset: c }),
        }
    }

    // One factor per S entry: translate the r-factor by the subgroup
    // element carrying rH onto sH.
    let mut factors = Vec::with_capacity(spec.s.len());
    for &s in &spec.s {
        let h_s = spec
            .h
            .iter()
            .copied()
            .find(|&h| partition.coset_of[group.compose(h, s_r)] == partition.coset_of[s])
            .expect("irreducibility provides the carrier");
        let mut succ = vec![usize::MAX; m];
        for &g in &reps {
            let tail = partition.coset_of[group.compose(h_s, g)];
            succ[tail] = partition.coset_of[group.compose(group.compose(h_s, g), s_r)];
        }
        if let Some(missing) = succ.iter().position(|&h| h == usize::MAX) {
            return Err(CosetError::BadFactor { coset: missing });
        }
        let mut head_owner = vec![usize::MAX; m];
        for (tail, &head) in succ.iter().enumerate() {
            if head_owner[head] != usize::MAX {
                return Err(CosetError::NotOneFactor {
                    tail_a: head_owner[head],
                    tail_b: tail,
                    head,
                });
            }
            head_owner[head] = tail;
        }
        factors.push(succ);
    }

    // The factors must partition the edge multiset drawn with base_reps.
    let mut ours: Vec<(usize, usize)> = factors
        .iter()
        .flat_map(|f| f.iter().enumerate().map(|(u, &v)| (u, v)))
        .collect();
    ours.sort_unstable();
    let mut expected = edges_from_reps(spec, &partition, base_reps, &spec.s);
    expected.sort_unstable();
    if ours != expected {
        return Err(CosetError::FactorizationMismatch);
    }
    let factorization = Factorization::new(m, factors)?;
    Ok(AdjustedFactors {
        reps,
        factorization,
    })
}

fn d_factor_shape(d_factor: &[usize], m: usize) -> Result<(), CosetError> {
    if d_factor.len() != m {
        return Err(CosetError::BadFactor {
            coset: d_factor.len().min(m),
        });
    }
    let mut owner = vec![usize::MAX; m];
    for (tail, &head) in d_factor.iter().enumerate() {
        if head >= m || head == tail {
            return Err(CosetError::BadFactor { coset: tail });
        }
        if owner[head] != usize::MAX {
            return Err(CosetError::NotOneFactor {
                tail_a: owner[head],
                tail_b: tail,
                head,
            });
        }
        owner[head] = tail;
    }
    Ok(())
}

/// Evaluate one connection-set entry's coset map under caller-supplied
/// representatives (one element per coset, each a member of its coset).
/// Returns the successor vector, or the first head collision — this is the
/// entry point for replaying flawed representative choices.
pub fn factor_from_reps(
    graph: &CosetGraph,
    reps: &[usize],
    s_index: usize,
) -> Result<Vec<usize>, CosetError> {
    let partition = &graph.partition;
    let m = partition.cosets.len();
    assert_eq!(reps.len(), m, "one representative per coset");
    for (c, &rep) in reps.iter().enumerate() {
        assert_eq!(
            partition.coset_of[rep], c,
            "representative of coset {} must belong to it",
            c
        );
    }
    let s = graph.spec.s[s_index];
    let mut succ = Vec::with_capacity(m);
    let mut owner = vec![usize::MAX; m];
    for (c, &rep) in reps.iter().enumerate() {
        let head = partition.coset_of[graph.spec.group.compose(rep, s)];
        if owner[head] != usize::MAX {
            return Err(CosetError::NotOneFactor {
                tail_a: owner[head],
                tail_b: c,
                head,
            });
        }
        owner[head] = c;
        succ.push(head);
    }
    Ok(succ)
}

/// The coset digraph's 1-factorization labeled by S: decompose S into
/// irreducible parts, seed each part with a matching-extracted 1-factor,
/// run the representative adjustment, and reassemble in S order. The result
/// is verified against the digraph's edge multiset.
pub fn coset_factorization(spec: &CosetSpec) -> Result<Factorization, CosetError> {
    let graph = build_coset_graph(spec)?;
    let m = graph.partition.cosets.len();
    let mut factors: Vec<Option<Vec<usize>>> = vec![None; spec.s.len()];
    for part in decompose_s(spec) {
        // Seed: a perfect matching over the part's edges under the full
        // graph's representatives.
        let mut rem = vec![vec![0usize; m]; m];
        for (u, v) in edges_from_reps(spec, &graph.partition, &graph.reps, part.s()) {
            rem[u][v] += 1;
        }
        let d_factor = factorize::perfect_matching(&rem)
            .ok_or(CosetError::Factorize(FactorizeError::MatchingFailed))?;
        let adjusted = factorization_from_one_factor_with_reps(&part, &graph.reps, &d_factor, 0)?;
        for (j, &s) in part.s().iter().enumerate() {
            let k = spec
                .s
                .iter()
                .position(|&x| x == s)
                .expect("part entries come from S");
            factors[k] = Some(adjusted.factorization.factor(j).to_vec());
        }
    }
    let factors: Vec<Vec<usize>> = factors
        .into_iter()
        .map(|f| f.expect("decomposition covers S"))
        .collect();
    let f = Factorization::new(m, factors)?;
    factorize::verify_factorization(graph.digraph(), &f)?;
    Ok(f)
}

/// Cap on complete arborescence assignments tried by the spanning-tree
/// fallback search.
const TREE_SEARCH_CAP: u64 = 1 << 22;

/// A tree-like (prefix-closed) wordset rooted at `root` whose endpoints
/// are distinct from every start. The breadth-first tree is tried first —
/// under product compatibility it is guaranteed to span — and
/// when it fails, the lexicographically first spanning arborescence over
/// `(vertex, factor)` parent choices is returned instead.
fn spanning_tree_words(f: &Factorization, root: usize) -> Option<spanfact::WordSet> {
    let bfs = spanfact::tree_wordset(f, root);
    if spanfact::is_spanning(f, &bfs) {
        return Some(bfs);
    }
    let n = f.n();
    let d = f.d();
    let mut inv = vec![vec![0usize; n]; d];
    for k in 0..d {
        for u in 0..n {
            inv[k][f.factor(k)[u]] = u;
        }
    }
    let verts: Vec<usize> = (0..n).filter(|&u| u != root).collect();
    let mut choice = vec![0usize; verts.len()];
    let mut tried = 0u64;
    loop {
        tried += 1;
        if tried > TREE_SEARCH_CAP {
            return None;
        }
        if let Some(ws) = arborescence_words(f, root, &verts, &choice, &inv) {
            if spanfact::is_spanning(f, &ws) {
                return Some(ws);
            }
        }
        // Mixed-radix increment, rightmost fastest.
        let mut i = verts.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < d {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Words of the parent assignment `vertex verts[i] hangs off factor
/// choice[i]'s preimage`, if that assignment is an arborescence into
/// `root`.
fn arborescence_words(
    f: &Factorization,
    root: usize,
    verts: &[usize],
    choice: &[usize],
    inv: &[Vec<usize>],
) -> Option<spanfact::WordSet> {
    let n = f.n();
    let mut parent = vec![usize::MAX; n];
    let mut letter = vec![usize::MAX; n];
    for (i, &u) in verts.iter().enumerate() {
        parent[u] = inv[choice[i]][u];
        letter[u] = choice[i];
    }
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    for start in 0..n {
        let mut chain = Vec::new();
        let mut v = start;
        while depth[v] == usize::MAX {
            chain.push(v);
            v = parent[v];
            if chain.len() > n {
                return None;
            }
        }
        let mut d_here = depth[v];
        for &u in chain.iter().rev() {
            d_here += 1;
            depth[u] = d_here;
        }
    }
    let mut words = vec![Vec::new(); n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| depth[u]);
    for &u in &order {
        if u == root {
            continue;
        }
        let mut w = words[parent[u]].clone();
        w.push(letter[u]);
        words[u] = w;
    }
    spanfact::WordSet::new(words).ok()
}

/// The spanning tree-like factorization of the coset digraph: the
/// S-labeled factorization plus a tree wordset rooted at the subgroup's
/// own coset. Breadth-first words are used whenever they span (always,
/// under product compatibility); otherwise the arborescence search of
/// [`spanning_tree_words`] supplies the tree. The spanning property is
/// re-verified on construction, and its failure surfaces as an error.
pub fn coset_spanning_factorization(spec: &CosetSpec) -> Result<SpanningFactorization, CosetError> {
    let f = coset_factorization(spec)?;
    let ws = match spanning_tree_words(&f, 0) {
        Some(ws) => ws,
        // Surface the defect through the constructor's own validation.
        None => spanfact::tree_wordset(&f, 0),
    };
    Ok(SpanningFactorization::new(f, ws)?)
}

/// The directed Petersen variant: the order-20 affine group over the field
/// of five elements (generated by x ↦ x+1 and x ↦ 2x), with the two-element
/// subgroup fixing the doubling map's square and both generators as the
/// connection set. Violates condition (ii), which is the point.
pub fn petersen_spec() -> CosetSpec {
    let theta = vec![1, 2, 3, 4, 0];
    let alpha = vec![0, 2, 4, 1, 3];
    let group = PermGroup::closure(vec![theta, alpha], 5, DEFAULT_CLOSURE_LIMIT)
        .expect("two permutations of five points close quickly");
    let t = group.generator_element(0);
    let a = group.generator_element(1);
    let a2 = group.compose(a, a);
    CosetSpec::new(group, vec![0, a2], vec![t, a]).expect("the Petersen coset data is valid")
}

// ---------------------------------------------------------------------------
// Spec file format
// ---------------------------------------------------------------------------

/// Parse a coset spec file: the permutation degree on the first significant
/// line, then one generator permutation (image list) per line, then `H:`
/// and `S:` lines giving subgroup and connection-set members as words over
/// generator indices (`-` is the empty word). The identity is always
/// included in `H`. Blank lines and `#` comments are skipped.
///
/// The group is the closure of the listed generators; the file's `S` words
/// are the connection set (the definition's generating-set symbol is read
/// as the connection set).
pub fn parse_coset_spec(text: &str) -> Result<CosetSpec, CosetError> {
    let mut degree: Option<usize> = None;
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut h_words: Vec<Vec<usize>> = Vec::new();
    let mut s_words: Vec<Vec<usize>> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_word = |rest: &str| -> Result<Vec<usize>, CosetError> {
            let rest = rest.trim();
            if rest == "-" {
                return Ok(Vec::new());
            }
            rest.split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| {
                        CosetError::Parse(ParseError::new(
                            line_no,
                            1,
                            format!("bad generator index {:?}", t),
                        ))
                    })
                })
                .collect()
        };
        if let Some(rest) = line.strip_prefix("H:") {
            h_words.push(parse_word(rest)?);
        } else if let Some(rest) = line.strip_prefix("S:") {
            s_words.push(parse_word(rest)?);
        } else if degree.is_none() {
            degree = Some(line.parse().map_err(|_| {
                CosetError::Parse(ParseError::new(
                    line_no,
                    1,
                    format!("expected the degree, got {:?}", line),
                ))
            })?);
        } else {
            let images: Result<Vec<usize>, CosetError> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| {
                        CosetError::Parse(ParseError::new(line_no, 1, format!("bad image {:?}", t)))
                    })
                })
                .collect();
            generators.push(images?);
        }
    }
    let degree = degree
        .ok_or_else(|| CosetError::Parse(ParseError::new(0, 0, "missing degree line".into())))?;
    let group = PermGroup::closure(generators, degree, DEFAULT_CLOSURE_LIMIT)?;
    let mut h: Vec<usize> = h_words.iter().map(|w| group.eval_word(w)).collect();
    if !h.contains(&0) {
        h.push(0);
    }
    let s: Vec<usize> = s_words.iter().map(|w| group.eval_word(w)).collect();
    CosetSpec::new(group, h, s)
}

/// Emit the spec file format of [`parse_coset_spec`]. Subgroup and
/// connection-set members are written as the closure's discovery words.
pub fn write_coset_spec(spec: &CosetSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", spec.group.degree());
    for g in spec.group.generators() {
        let images: Vec<String> = g.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", images.join(" "));
    }
    let word_text = |i: usize| -> String {
        let w = spec.group.word_of(i);
        if w.is_empty() {
            "-".into()
        } else {
            w.iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        }
    };
    for &i in &spec.h {
        let _ = writeln!(out, "H: {}", word_text(i));
    }
    for &i in &spec.s {
        let _ = writeln!(out, "S: {}", word_text(i));
    }
    out
}
