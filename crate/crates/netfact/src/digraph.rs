//! Loop-free directed multigraphs that are `d`-regular (every in- and
//! out-degree equals `d`) and strongly connected.
//!
//! Vertices are dense integers `0..n`. The edge multiset is kept as a sorted
//! pair list with multiplicities expressed by repetition, so two graphs are
//! equal exactly when their edge lists are equal. All searches scan vertices
//! and candidates in index order, which keeps every operation deterministic.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::ParseError;

/// Default backtracking-node budget for automorphism searches.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Errors raised while validating or searching a digraph.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DigraphError {
    /// An edge `(u, u)` was supplied; loops are never allowed.
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    /// An endpoint is outside `0..n`.
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    /// Some vertex does not have equal in- and out-degree `d`.
    #[error("vertex {vertex} has in-degree {in_deg} and out-degree {out_deg}; expected a common degree at every vertex")]
    DegreeMismatch {
        vertex: usize,
        in_deg: usize,
        out_deg: usize,
    },
    /// The graph is not strongly connected; `from` cannot reach `to`.
    #[error("not strongly connected: no directed path from {from} to {to}")]
    NotStronglyConnected { from: usize, to: usize },
    /// Fewer than two vertices, or an empty edge list.
    #[error("need at least 2 vertices and a non-empty edge list")]
    TooSmall,
    /// A backtracking search exceeded its node budget.
    #[error("search budget exceeded after {0} nodes")]
    SearchBudgetExceeded(u64),
    /// A vertex map is not a permutation of `0..n`.
    #[error("vertex map is not a permutation of 0..{0}")]
    NotAPermutation(usize),
}

/// A bijection on the vertex set, stored as an image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexMap {
    images: Vec<usize>,
}

impl VertexMap {
    /// Build a map from an image list, checking it is a permutation.
    pub fn new(images: Vec<usize>) -> Result<Self, DigraphError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if im >= n || seen[im] {
                return Err(DigraphError::NotAPermutation(n));
            }
            seen[im] = true;
        }
        Ok(VertexMap { images })
    }

    /// The identity map on `n` vertices.
    pub fn identity(n: usize) -> Self {
        VertexMap {
            images: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of a single vertex.
    pub fn apply(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Composition: apply `self` first, then `other`.
    pub fn then(&self, other: &VertexMap) -> VertexMap {
        VertexMap {
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        }
    }

    pub fn inverse(&self) -> VertexMap {
        let mut inv = vec![0; self.images.len()];
        for (v, &im) in self.images.iter().enumerate() {
            inv[im] = v;
        }
        VertexMap { images: inv }
    }
}

/// A `d`-regular, loop-free, strongly connected directed multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    d: usize,
    /// Sorted edge multiset; parallel edges appear as repeated pairs.
    edges: Vec<(usize, usize)>,
    /// Out-neighbor lists (sorted, with repetition for parallel edges).
    out: Vec<Vec<usize>>,
    /// In-neighbor lists (sorted, with repetition).
    inn: Vec<Vec<usize>>,
}

impl Digraph {
    /// Validate an edge multiset and build the graph.
    ///
    /// Checks, in order: endpoint range, absence of loops, equal in- and
    /// out-degree `d` at every vertex, and strong connectivity (forward and
    /// reverse reachability from vertex 0).
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Self, DigraphError> {
        if n < 2 || edges.is_empty() {
            return Err(DigraphError::TooSmall);
        }
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(DigraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(DigraphError::LoopEdge(u));
            }
        }
        edges.sort_unstable();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &edges {
            out[u].push(v);
            inn[v].push(u);
        }
        for list in inn.iter_mut() {
            list.sort_unstable();
        }
        let d = out[0].len();
        for v in 0..n {
            if out[v].len() != d || inn[v].len() != d {
                return Err(DigraphError::DegreeMismatch {
                    vertex: v,
                    in_deg: inn[v].len(),
                    out_deg: out[v].len(),
                });
            }
        }
        let g = Digraph {
            n,
            d,
            edges,
            out,
            inn,
        };
        // Strong connectivity: vertex 0 must reach everything going forward,
        // and everything must reach vertex 0 (reverse reachability).
        let fwd = g.distances_from(0);
        if let Some(v) = fwd.iter().position(|&x| x == usize::MAX) {
            return Err(DigraphError::NotStronglyConnected { from: 0, to: v });
        }
        let back = g.reverse_distances_to(0);
        if let Some(v) = back.iter().position(|&x| x == usize::MAX) {
            return Err(DigraphError::NotStronglyConnected { from: v, to: 0 });
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// The sorted edge multiset.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Out-neighbors of `v`, sorted, parallel edges repeated.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// In-neighbors of `v`, sorted, parallel edges repeated.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// Multiplicity of the directed edge `(u, v)`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.out[u].iter().filter(|&&w| w == v).count()
    }

    /// BFS distances from `source`; unreachable vertices get `usize::MAX`.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        bfs(self.n, |v| &self.out[v], source)
    }

    fn reverse_distances_to(&self, sink: usize) -> Vec<usize> {
        bfs(self.n, |v| &self.inn[v], sink)
    }

    /// Largest BFS distance over all ordered vertex pairs.
    pub fn diameter(&self) -> usize {
        (0..self.n)
            .map(|s| {
                self.distances_from(s)
                    .into_iter()
                    .max()
                    .expect("non-empty distance vector")
            })
            .max()
            .expect("non-empty vertex set")
    }

    /// True when every edge `(u, v)` is matched by `(v, u)` with the same
    /// multiplicity, i.e. the digraph encodes an undirected graph.
    pub fn is_symmetric(&self) -> bool {
        let mut flipped: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        flipped.sort_unstable();
        flipped == self.edges
    }

    /// Does `m` send the edge multiset onto itself?
    pub fn check_map_is_automorphism(&self, m: &VertexMap) -> bool {
        if m.n() != self.n {
            return false;
        }
        let mut mapped: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (m.apply(u), m.apply(v)))
            .collect();
        mapped.sort_unstable();
        mapped == self.edges
    }

    /// Girth of the underlying undirected simple graph (digons collapse to a
    /// single undirected edge). Returns `None` for a forest, which cannot
    /// happen on a valid digraph but keeps the helper total.
    ///
    /// Same-direction parallel edges do produce a 2-cycle, matching the
    /// multigraph reading.
    pub fn undirected_girth(&self) -> Option<usize> {
        // Collapse to undirected adjacency; detect multi-edges first.
        let mut und = vec![Vec::new(); self.n];
        let mut best: Option<usize> = None;
        let mut seen_pairs = std::collections::HashMap::new();
        for &(u, v) in &self.edges {
            let key = (u.min(v), u.max(v));
            let entry = seen_pairs.entry(key).or_insert((0usize, 0usize));
            if u < v {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
        for &(fwd, back) in seen_pairs.values() {
            // More than one edge in the same direction is a genuine 2-cycle.
            if fwd > 1 || back > 1 {
                best = Some(2);
            }
        }
        for &(a, b) in seen_pairs.keys() {
            und[a].push(b);
            und[b].push(a);
        }
        for list in und.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            let mut q = VecDeque::new();
            dist[s] = 0;
            q.push_back(s);
            while let Some(u) = q.pop_front() {
                for &v in &und[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        q.push_back(v);
                    } else if parent[u] != v {
                        let cyc = dist[u] + dist[v] + 1;
                        if best.is_none_or(|b| cyc < b) {
                            best = Some(cyc);
                        }
                    }
                }
            }
        }
        best
    }

    /// Multiplicity matrix, used by the backtracking searches.
    fn mult_matrix(&self) -> Vec<u16> {
        let mut m = vec![0u16; self.n * self.n];
        for &(u, v) in &self.edges {
            m[u * self.n + v] += 1;
        }
        m
    }
}

fn bfs<'a, F>(n: usize, adj: F, source: usize) -> Vec<usize>
where
    F: Fn(usize) -> &'a [usize],
{
    let mut dist = vec![usize::MAX; n];
    let mut q = VecDeque::new();
    dist[source] = 0;
    q.push_back(source);
    while let Some(u) = q.pop_front() {
        for &v in adj(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

/// Result of a stabilizer enumeration.
#[derive(Debug, Clone)]
pub struct StabilizerResult {
    /// Automorphisms fixing the requested vertex, in search order.
    pub maps: Vec<VertexMap>,
    /// True when the enumeration stopped at `limit` rather than exhausting.
    pub truncated: bool,
    /// Backtracking nodes visited.
    pub nodes: u64,
}

/// Enumerate automorphisms that fix `fixed`, up to `limit` maps, with the
/// default node budget.
pub fn stabilizer_automorphisms(
    g: &Digraph,
    fixed: usize,
    limit: usize,
) -> Result<StabilizerResult, DigraphError> {
    stabilizer_automorphisms_with_budget(g, fixed, limit, DEFAULT_NODE_BUDGET)
}

/// As [`stabilizer_automorphisms`], with an explicit backtracking-node budget.
pub fn stabilizer_automorphisms_with_budget(
    g: &Digraph,
    fixed: usize,
    limit: usize,
    node_budget: u64,
) -> Result<StabilizerResult, DigraphError> {
    let mut search = MapSearch::new(g, g, node_budget);
    search.order_from(fixed);
    let mut out = Vec::new();
    let mut truncated = false;
    search.run(fixed, &mut |m: VertexMap| {
        if out.len() < limit {
            out.push(m);
        }
        if out.len() >= limit {
            truncated = true;
            false
        } else {
            true
        }
    })?;
    // If the search finished on its own the limit was not the stopping reason.
    if !search.stopped_by_caller {
        truncated = false;
    }
    Ok(StabilizerResult {
        maps: out,
        truncated,
        nodes: search.nodes,
    })
}

/// Enumerate the full automorphism group, in deterministic order. Intended
/// for desk-scale graphs; the node budget guards larger inputs.
pub fn automorphism_group(g: &Digraph, node_budget: u64) -> Result<Vec<VertexMap>, DigraphError> {
    let mut all = Vec::new();
    // Every automorphism sends vertex 0 somewhere; enumerate by image of 0.
    for target in 0..g.n() {
        let mut search = MapSearch::new(g, g, node_budget);
        search.order_from(0);
        search.run(target, &mut |m: VertexMap| {
            all.push(m);
            true
        })?;
    }
    Ok(all)
}

/// Find one isomorphism from `a` onto `b` (a vertex bijection carrying `a`'s
/// edge multiset to `b`'s), or certify there is none by exhaustion.
pub fn find_isomorphism(
    a: &Digraph,
    b: &Digraph,
    node_budget: u64,
) -> Result<Option<VertexMap>, DigraphError> {
    if a.n() != b.n() || a.degree() != b.degree() {
        return Ok(None);
    }
    for target in 0..b.n() {
        let mut search = MapSearch::new(a, b, node_budget);
        search.order_from(0);
        let mut found = None;
        search.run(target, &mut |m: VertexMap| {
            found = Some(m);
            false
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Decide vertex-transitivity by direct search: find, for every vertex `v`,
/// an automorphism sending 0 to `v`.
///
/// Returns `Some(maps)` (one witness per vertex, index `v` sending `0 ↦ v`)
/// when the graph is transitive, `None` when some image is exhaustively
/// refuted, and an error only when the node budget runs out.
pub fn transitive_witnesses(
    g: &Digraph,
    node_budget: u64,
) -> Result<Option<Vec<VertexMap>>, DigraphError> {
    let mut maps = Vec::with_capacity(g.n());
    for target in 0..g.n() {
        let mut search = MapSearch::new(g, g, node_budget);
        search.order_from(0);
        let mut found = None;
        search.run(target, &mut |m: VertexMap| {
            found = Some(m);
            false
        })?;
        match found {
            Some(m) => maps.push(m),
            None => return Ok(None),
        }
    }
    Ok(Some(maps))
}

/// Backtracking skeleton shared by the automorphism and isomorphism
/// searches: builds bijections `dom → cod` that carry edge multiplicities
/// over exactly. Domain vertices are processed in BFS order from a chosen
/// start so each new vertex is adjacent to an already-mapped one; candidates
/// are tested in ascending index order against the multiplicity matrices.
struct MapSearch<'g> {
    dom: &'g Digraph,
    mult_dom: Vec<u16>,
    mult_cod: Vec<u16>,
    order: Vec<usize>,
    nodes: u64,
    budget: u64,
    stopped_by_caller: bool,
}

impl<'g> MapSearch<'g> {
    fn new(dom: &'g Digraph, cod: &'g Digraph, budget: u64) -> Self {
        debug_assert_eq!(dom.n(), cod.n());
        MapSearch {
            dom,
            mult_dom: dom.mult_matrix(),
            mult_cod: cod.mult_matrix(),
            order: Vec::new(),
            nodes: 0,
            budget,
            stopped_by_caller: false,
        }
    }

    fn order_from(&mut self, start: usize) {
        let dist = self.dom.distances_from(start);
        let mut order: Vec<usize> = (0..self.dom.n()).collect();
        order.sort_by_key(|&v| (dist[v], v));
        self.order = order;
    }

    /// Run the search with `order[0] ↦ first_image` pinned. The callback
    /// receives each complete map; returning `false` stops the search.
    fn run(
        &mut self,
        first_image: usize,
        on_map: &mut dyn FnMut(VertexMap) -> bool,
    ) -> Result<(), DigraphError> {
        let n = self.dom.n();
        let mut img = vec![usize::MAX; n];
        let mut used = vec![false; n];
        img[self.order[0]] = first_image;
        used[first_image] = true;
        self.extend(1, &mut img, &mut used, on_map)
    }

    fn extend(
        &mut self,
        pos: usize,
        img: &mut [usize],
        used: &mut [bool],
        on_map: &mut dyn FnMut(VertexMap) -> bool,
    ) -> Result<(), DigraphError> {
        if self.stopped_by_caller {
            return Ok(());
        }
        let n = self.dom.n();
        if pos == n {
            let m = VertexMap {
                images: img.to_vec(),
            };
            if !on_map(m) {
                self.stopped_by_caller = true;
            }
            return Ok(());
        }
        let v = self.order[pos];
        for w in 0..n {
            if used[w] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(DigraphError::SearchBudgetExceeded(self.nodes));
            }
            // Consistency with every already-mapped vertex, both directions.
            let mut ok = true;
            for p in 0..pos {
                let u = self.order[p];
                let iu = img[u];
                if self.mult_dom[u * n + v] != self.mult_cod[iu * n + w]
                    || self.mult_dom[v * n + u] != self.mult_cod[w * n + iu]
                {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            img[v] = w;
            used[w] = true;
            self.extend(pos + 1, img, used, on_map)?;
            img[v] = usize::MAX;
            used[w] = false;
            if self.stopped_by_caller {
                return Ok(());
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Edge-list text format: first line "n d", one "u v" line per edge,
// '#' starts a comment line.
// ---------------------------------------------------------------------------

/// Parse the edge-list text format.
pub fn parse_edge_list(text: &str) -> Result<Digraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(ParseError::new(
                line_no,
                1,
                format!("expected two integers, got {:?}", line),
            ));
        }
        let a = parse_usize(fields[0], line_no, 1)?;
        let b = parse_usize(fields[1], line_no, fields[0].len() + 2)?;
        match header {
            None => header = Some((a, b)),
            Some(_) => edges.push((a, b)),
        }
    }
    let (n, d) = header.ok_or_else(|| ParseError::new(0, 0, "empty edge-list file".into()))?;
    let g = Digraph::new(n, edges).map_err(|e| ParseError::new(0, 0, e.to_string()))?;
    if g.degree() != d {
        return Err(ParseError::new(
            1,
            1,
            format!("declared degree {} but edges give degree {}", d, g.degree()),
        ));
    }
    Ok(g)
}

fn parse_usize(tok: &str, line: usize, col: usize) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .map_err(|_| ParseError::new(line, col, format!("not a non-negative integer: {:?}", tok)))
}

/// Emit the edge-list text format (canonical: sorted edges).
pub fn write_edge_list(g: &Digraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.n(), g.degree());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u, v);
    }
    s
}

/// DOT export. `edge_attr` may attach an attribute string (say a color) to
/// the edge at a given index into `g.edges()`.
pub fn to_dot(g: &Digraph, edge_attr: &dyn Fn(usize) -> Option<String>) -> String {
    let mut s = String::from("digraph G {\n");
    for v in 0..g.n() {
        let _ = writeln!(s, "  {};", v);
    }
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        match edge_attr(i) {
            Some(attr) => {
                let _ = writeln!(s, "  {} -> {} [{}];", u, v, attr);
            }
            None => {
                let _ = writeln!(s, "  {} -> {};", u, v);
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Build a random `d`-regular digraph as a union of `d` random fixed-point-free
/// permutations, for test corpora. Retries until the union validates (loops are
/// impossible by construction; strong connectivity can require a retry).
pub fn random_regular<R: rand::Rng>(n: usize, d: usize, rng: &mut R) -> Digraph {
    use rand::seq::SliceRandom;
    assert!(n >= 2 && d >= 1);
    loop {
        let mut edges = Vec::with_capacity(n * d);
        for _ in 0..d {
            // Random fixed-point-free permutation by shuffle-and-retry.
            let perm = loop {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(rng);
                if p.iter().enumerate().all(|(i, &x)| i != x) {
                    break p;
                }
            };
            for (u, &v) in perm.iter().enumerate() {
                edges.push((u, v));
            }
        }
        edges.shuffle(rng);
        if let Ok(g) = Digraph::new(n, edges) {
            return g;
        }
    }
}
