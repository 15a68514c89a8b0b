//! The sizeable graph Γ on four copies of ℤ/9ℤ, its special 18-cycles and
//! its cyclic link covers.
//!
//! Vertices are ordered canonically: part (`A-` < `A+` < `B-` < `B+`), then
//! residue. Every listing produced by this module follows that order, so
//! certificates and serialized graphs are byte-stable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const RESIDUES: u8 = 9;
pub const VERTEX_COUNT: usize = 36;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("self-loop at {0}")]
    SelfLoop(GammaVertex),
    #[error("edge {0} -- {1} has an endpoint outside the vertex set")]
    UnknownEndpoint(GammaVertex, GammaVertex),
    #[error("subgraph on {parts} is not 2-regular: {vertex} has degree {degree}")]
    NotTwoRegular {
        parts: String,
        vertex: GammaVertex,
        degree: usize,
    },
    #[error("subgraph on {parts} is disconnected: cycle through {first} covers {seen} of {total} vertices")]
    Disconnected {
        parts: String,
        first: GammaVertex,
        seen: usize,
        total: usize,
    },
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("designated edge {0} -- {1} is not an edge of the special cycle on {2}")]
    BadDesignatedEdge(GammaVertex, GammaVertex, String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }

    /// `+1` for `Plus`, `-1` for `Minus`.
    pub fn unit(self) -> i32 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Factor {
    A,
    B,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::A => Factor::B,
            Factor::B => Factor::A,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::A => write!(f, "A"),
            Factor::B => write!(f, "B"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Part {
    AMinus,
    APlus,
    BMinus,
    BPlus,
}

impl Part {
    pub const ALL: [Part; 4] = [Part::AMinus, Part::APlus, Part::BMinus, Part::BPlus];

    pub fn new(factor: Factor, sign: Sign) -> Part {
        match (factor, sign) {
            (Factor::A, Sign::Minus) => Part::AMinus,
            (Factor::A, Sign::Plus) => Part::APlus,
            (Factor::B, Sign::Minus) => Part::BMinus,
            (Factor::B, Sign::Plus) => Part::BPlus,
        }
    }

    pub fn factor(self) -> Factor {
        match self {
            Part::AMinus | Part::APlus => Factor::A,
            Part::BMinus | Part::BPlus => Factor::B,
        }
    }

    pub fn sign(self) -> Sign {
        match self {
            Part::AMinus | Part::BMinus => Sign::Minus,
            Part::APlus | Part::BPlus => Sign::Plus,
        }
    }

    fn ordinal(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.factor(), self.sign())
    }
}

impl FromStr for Part {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A-" => Ok(Part::AMinus),
            "A+" => Ok(Part::APlus),
            "B-" => Ok(Part::BMinus),
            "B+" => Ok(Part::BPlus),
            _ => Err(format!("unknown part `{s}`")),
        }
    }
}

/// A vertex of Γ: a part together with a residue mod 9.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GammaVertex {
    part: Part,
    residue: u8,
}

impl GammaVertex {
    pub fn new(part: Part, residue: i64) -> GammaVertex {
        GammaVertex {
            part,
            residue: residue.rem_euclid(RESIDUES as i64) as u8,
        }
    }

    pub fn part(self) -> Part {
        self.part
    }

    pub fn residue(self) -> u8 {
        self.residue
    }

    pub fn factor(self) -> Factor {
        self.part.factor()
    }

    pub fn sign(self) -> Sign {
        self.part.sign()
    }

    /// Position in the canonical order, `0..36`.
    pub fn index(self) -> usize {
        self.part.ordinal() * RESIDUES as usize + self.residue as usize
    }

    pub fn from_index(index: usize) -> GammaVertex {
        assert!(index < VERTEX_COUNT, "vertex index {index} out of range");
        GammaVertex {
            part: Part::ALL[index / RESIDUES as usize],
            residue: (index % RESIDUES as usize) as u8,
        }
    }

    pub fn all() -> impl Iterator<Item = GammaVertex> {
        (0..VERTEX_COUNT).map(GammaVertex::from_index)
    }
}

impl fmt::Display for GammaVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.part, self.residue)
    }
}

impl FromStr for GammaVertex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (part, residue) = s
            .trim()
            .split_once(',')
            .ok_or_else(|| format!("expected `part,residue`, got `{s}`"))?;
        let part: Part = part.trim().parse()?;
        let residue: u8 = residue
            .trim()
            .parse()
            .map_err(|e| format!("bad residue `{residue}`: {e}"))?;
        if residue >= RESIDUES {
            return Err(format!("residue {residue} not reduced mod {RESIDUES}"));
        }
        Ok(GammaVertex { part, residue })
    }
}

/// Adjacency rules of Γ: `a -- b` is an edge when `a - b (mod 9)` lies in
/// the two-element difference set attached to the parts of `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRules {
    /// Indexed by `[a sign][b sign]` with `Minus = 0`, `Plus = 1`.
    differences: [[[i64; 2]; 2]; 2],
}

impl EdgeRules {
    /// `A+/B+: a = b or b+1`, `A+/B-: a = b or b-2`, `A-/B+: a = b or b-2`,
    /// `A-/B-: a = b+1 or b+2`. Girth 6; every special subgraph is an 18-cycle.
    pub fn standard() -> EdgeRules {
        EdgeRules::from_differences([[1, 2], [0, -2]], [[0, -2], [0, 1]])
    }

    /// As [`EdgeRules::standard`] but with `A-/B+: a = b or b+2`. This variant
    /// has 4-cycles (e.g. `A-,0 B-,7 A+,7 B+,7`).
    pub fn plus_two_variant() -> EdgeRules {
        EdgeRules::from_differences([[1, 2], [0, 2]], [[0, -2], [0, 1]])
    }

    /// `minus[t]` / `plus[t]`: differences for `A-` / `A+` against `B` part of sign `t`.
    pub fn from_differences(minus: [[i64; 2]; 2], plus: [[i64; 2]; 2]) -> EdgeRules {
        EdgeRules {
            differences: [minus, plus],
        }
    }

    pub fn differences(&self, a: Sign, b: Sign) -> [i64; 2] {
        self.differences[a as usize][b as usize]
    }

    pub fn allows(&self, a: GammaVertex, b: GammaVertex) -> bool {
        if a.factor() != Factor::A || b.factor() != Factor::B {
            return false;
        }
        let diff = a.residue as i64 - b.residue as i64;
        self.differences(a.sign(), b.sign())
            .iter()
            .any(|d| (diff - d).rem_euclid(RESIDUES as i64) == 0)
    }
}

impl Default for EdgeRules {
    fn default() -> Self {
        EdgeRules::standard()
    }
}

/// Adjacency under the standard rules.
pub fn edge_rule(a: GammaVertex, b: GammaVertex) -> bool {
    EdgeRules::standard().allows(a, b)
}

/// Unordered edge, stored with the canonically smaller endpoint first.
pub type Edge = (GammaVertex, GammaVertex);

pub fn edge(u: GammaVertex, v: GammaVertex) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple graph on (a subset of) the 36 vertices of Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModGraph {
    vertices: BTreeSet<GammaVertex>,
    edges: BTreeSet<Edge>,
}

impl ModGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = GammaVertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<ModGraph, GammaError> {
        let vertices: BTreeSet<_> = vertices.into_iter().collect();
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GammaError::SelfLoop(u));
            }
            if !vertices.contains(&u) || !vertices.contains(&v) {
                return Err(GammaError::UnknownEndpoint(u, v));
            }
            set.insert(edge(u, v));
        }
        Ok(ModGraph {
            vertices,
            edges: set,
        })
    }

    pub fn vertices(&self) -> impl Iterator<Item = GammaVertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: GammaVertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, u: GammaVertex, v: GammaVertex) -> bool {
        self.edges.contains(&edge(u, v))
    }

    /// Neighbours of `v` in canonical order.
    pub fn neighbors(&self, v: GammaVertex) -> Vec<GammaVertex> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .filter_map(|&(x, y)| {
                if x == v {
                    Some(y)
                } else if y == v {
                    Some(x)
                } else {
                    None
                }
            })
            .collect();
        out.sort();
        out
    }

    pub fn adjacency(&self) -> BTreeMap<GammaVertex, Vec<GammaVertex>> {
        let mut adj: BTreeMap<_, Vec<_>> = self.vertices.iter().map(|&v| (v, vec![])).collect();
        for &(u, v) in &self.edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        for list in adj.values_mut() {
            list.sort();
        }
        adj
    }

    pub fn degree(&self, v: GammaVertex) -> usize {
        self.edges.iter().filter(|&&(x, y)| x == v || y == v).count()
    }

    /// Common degree of all vertices, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let adj = self.adjacency();
        let mut degrees = adj.values().map(Vec::len);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Every edge joins an `A` vertex to a `B` vertex.
    pub fn is_bipartite_ab(&self) -> bool {
        self.edges.iter().all(|(u, v)| u.factor() != v.factor())
    }

    /// Full subgraph on the vertices satisfying `keep`.
    pub fn induced(&self, keep: impl Fn(GammaVertex) -> bool) -> ModGraph {
        let vertices: BTreeSet<_> = self.vertices.iter().copied().filter(|&v| keep(v)).collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|(u, v)| vertices.contains(u) && vertices.contains(v))
            .collect();
        ModGraph { vertices, edges }
    }

    /// Full subgraph on the vertex set `A^s ⊔ B^t`.
    pub fn special_subgraph(&self, s: Sign, t: Sign) -> ModGraph {
        self.induced(|v| v.part() == Part::new(Factor::A, s) || v.part() == Part::new(Factor::B, t))
    }

    pub fn without_edge(&self, u: GammaVertex, v: GammaVertex) -> ModGraph {
        let mut g = self.clone();
        g.edges.remove(&edge(u, v));
        g
    }

    pub fn with_edges(&self, edges: impl IntoIterator<Item = Edge>) -> Result<ModGraph, GammaError> {
        ModGraph::new(self.vertices.iter().copied(), self.edges.iter().copied().chain(edges))
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.iter().next() else {
            return true;
        };
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[&u] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Versioned text serialization: header, summary, one sorted edge per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("sizeable-graph v1\n");
        let girth = match girth(self) {
            Some(g) => g.to_string(),
            None => "acyclic".to_string(),
        };
        out.push_str(&format!(
            "summary vertices={} edges={} girth={}\n",
            self.vertex_count(),
            self.edge_count(),
            girth
        ));
        for v in &self.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} -- {v}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<ModGraph, GammaError> {
        let err = |line: usize, msg: String| GammaError::Parse { line, msg };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "sizeable-graph v1")) => {}
            other => {
                return Err(err(1, format!("bad header {:?}", other.map(|(_, l)| l))));
            }
        }
        let mut vertices = vec![];
        let mut edges = vec![];
        let mut summary = None;
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("summary ") {
                summary = Some((line_no, rest.to_string()));
            } else if let Some(rest) = line.strip_prefix("vertex ") {
                vertices.push(rest.parse().map_err(|e| err(line_no, e))?);
            } else if let Some((u, v)) = line.split_once(" -- ") {
                let u = u.parse().map_err(|e| err(line_no, e))?;
                let v = v.parse().map_err(|e| err(line_no, e))?;
                edges.push((u, v));
            } else {
                return Err(err(line_no, format!("unrecognized record `{line}`")));
            }
        }
        let g = ModGraph::new(vertices, edges)?;
        if let Some((line_no, summary)) = summary {
            let expect = format!("vertices={} edges={}", g.vertex_count(), g.edge_count());
            if !summary.starts_with(&expect) {
                return Err(err(line_no, format!("summary `{summary}` disagrees with body ({expect})")));
            }
        }
        Ok(g)
    }
}

/// Γ under the standard rules.
pub fn build_gamma() -> ModGraph {
    build_gamma_with(&EdgeRules::standard())
}

/// The graph on the 36 vertices with an edge `a -- b` exactly when `rules` allow it.
pub fn build_gamma_with(rules: &EdgeRules) -> ModGraph {
    let vertices: Vec<_> = GammaVertex::all().collect();
    let edges: Vec<_> = vertices
        .iter()
        .flat_map(|&a| vertices.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| rules.allows(a, b))
        .collect();
    ModGraph::new(vertices, edges).expect("A/B rules never produce self-loops")
}

/// Length of a shortest embedded cycle, or `None` for a forest.
pub fn girth(g: &ModGraph) -> Option<usize> {
    shortest_cycle(g).map(|c| c.len())
}

/// A shortest embedded cycle, the first found in edge order.
///
/// For each edge `uv`, the shortest cycle through it is `uv` plus a shortest
/// `u`–`v` path in the graph with `uv` removed.
pub fn shortest_cycle(g: &ModGraph) -> Option<CycleCert<GammaVertex>> {
    let adj = g.adjacency();
    let mut best: Option<CycleCert<GammaVertex>> = None;
    for &(u, v) in &g.edges {
        // Only strictly shorter cycles matter: paths of at most len - 2 edges.
        let limit = best.as_ref().map(|b| b.len() - 2);
        let mut parent = BTreeMap::from([(u, u)]);
        let mut dist = BTreeMap::from([(u, 0usize)]);
        let mut queue = VecDeque::from([u]);
        'bfs: while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if limit.is_some_and(|l| d + 1 > l) {
                break;
            }
            for &y in &adj[&x] {
                if (x == u && y == v) || dist.contains_key(&y) {
                    continue;
                }
                dist.insert(y, d + 1);
                parent.insert(y, x);
                if y == v {
                    break 'bfs;
                }
                queue.push_back(y);
            }
        }
        if parent.contains_key(&v) {
            let mut cycle = vec![v];
            while let Some(&p) = parent.get(cycle.last().unwrap()).filter(|&&p| p != *cycle.last().unwrap()) {
                cycle.push(p);
            }
            cycle.reverse();
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(CycleCert { vertices: cycle });
            }
        }
    }
    best
}

/// An ordered list of distinct vertices, consecutive (cyclically) ones adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCert<T> {
    pub vertices: Vec<T>,
}

impl<T: Clone + Ord> CycleCert<T> {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Re-checks the certificate against an adjacency predicate.
    pub fn verify(&self, adjacent: impl Fn(&T, &T) -> bool) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        distinct.len() == n
            && (0..n).all(|i| adjacent(&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn reversed(&self) -> CycleCert<T> {
        let mut vertices = self.vertices.clone();
        if !vertices.is_empty() {
            vertices[1..].reverse();
        }
        CycleCert { vertices }
    }
}

/// Certifies that a graph is one embedded cycle through all its vertices.
///
/// The walk starts at the smallest vertex and leaves through its smaller
/// neighbour.
pub fn single_cycle(g: &ModGraph, name: &str) -> Result<CycleCert<GammaVertex>, GammaError> {
    let adj = g.adjacency();
    for (&v, nbrs) in &adj {
        if nbrs.len() != 2 {
            return Err(GammaError::NotTwoRegular {
                parts: name.to_string(),
                vertex: v,
                degree: nbrs.len(),
            });
        }
    }
    let Some(&first) = adj.keys().next() else {
        return Err(GammaError::Disconnected {
            parts: name.to_string(),
            first: GammaVertex::from_index(0),
            seen: 0,
            total: 0,
        });
    };
    let mut cycle = vec![first];
    let mut prev = first;
    let mut cur = adj[&first][0];
    while cur != first {
        cycle.push(cur);
        let next = adj[&cur].iter().copied().find(|&w| w != prev).unwrap();
        prev = cur;
        cur = next;
    }
    if cycle.len() != adj.len() {
        return Err(GammaError::Disconnected {
            parts: name.to_string(),
            first,
            seen: cycle.len(),
            total: adj.len(),
        });
    }
    Ok(CycleCert { vertices: cycle })
}

/// Certificate that the full subgraph on `A^s ⊔ B^t` is a single cycle.
pub fn special_cycle(g: &ModGraph, s: Sign, t: Sign) -> Result<CycleCert<GammaVertex>, GammaError> {
    let name = format!("A{s}+B{t}");
    single_cycle(&g.special_subgraph(s, t), &name)
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Default designated edges: one on Γ(A⁺⊔B⁺), one on Γ(A⁻⊔B⁻).
pub fn default_designated() -> [Edge; 2] {
    [
        edge(GammaVertex::new(Part::APlus, 0), GammaVertex::new(Part::BPlus, 0)),
        edge(GammaVertex::new(Part::AMinus, 1), GammaVertex::new(Part::BMinus, 0)),
    ]
}

/// A ℤ/p cover of a graph on Γ-vertices given by an edge weight cocycle.
///
/// Edges are oriented `A → B`; the lift of `ab` at sheet `s` joins
/// `(a, s)` to `(b, s + weight(ab))`.
#[derive(Clone, Debug)]
pub struct CoveredGraph {
    base: ModGraph,
    p: u32,
    weights: BTreeMap<Edge, u32>,
}

pub type Lift = (GammaVertex, u32);

impl CoveredGraph {
    /// Weights are reduced mod `p`; edges missing from `weights` get 0.
    pub fn from_weights(
        base: &ModGraph,
        p: u32,
        weights: impl IntoIterator<Item = (Edge, u32)>,
    ) -> Result<CoveredGraph, GammaError> {
        if !is_prime(p) {
            return Err(GammaError::NotPrime(p));
        }
        let mut map: BTreeMap<Edge, u32> = base.edges().map(|e| (e, 0)).collect();
        for ((u, v), w) in weights {
            let e = edge(u, v);
            match map.get_mut(&e) {
                Some(slot) => *slot = w % p,
                None => return Err(GammaError::UnknownEndpoint(u, v)),
            }
        }
        Ok(CoveredGraph {
            base: base.clone(),
            p,
            weights: map,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn base(&self) -> &ModGraph {
        &self.base
    }

    pub fn weight(&self, e: Edge) -> u32 {
        self.weights.get(&e).copied().unwrap_or(0)
    }

    pub fn vertices(&self) -> Vec<Lift> {
        self.base
            .vertices()
            .flat_map(|v| (0..self.p).map(move |s| (v, s)))
            .collect()
    }

    /// Lifted edges in canonical order, each as (A-end, B-end).
    pub fn edges(&self) -> Vec<(Lift, Lift)> {
        let mut out = Vec::with_capacity(self.base.edge_count() * self.p as usize);
        for (&(u, v), &w) in &self.weights {
            let (a, b) = if u.factor() == Factor::A { (u, v) } else { (v, u) };
            let w = if u.factor() == Factor::A { w } else { (self.p - w) % self.p };
            for s in 0..self.p {
                out.push(((a, s), (b, (s + w) % self.p)));
            }
        }
        out.sort();
        out
    }

    pub fn deck(&self, x: Lift) -> Lift {
        (x.0, (x.1 + 1) % self.p)
    }

    /// Deck rotation maps the lifted edge set onto itself and fixes no vertex.
    pub fn deck_is_free_automorphism(&self) -> bool {
        let edges: BTreeSet<_> = self
            .edges()
            .into_iter()
            .map(|(x, y)| if x <= y { (x, y) } else { (y, x) })
            .collect();
        let preserved = edges.iter().all(|&(x, y)| {
            let (dx, dy) = (self.deck(x), self.deck(y));
            edges.contains(&if dx <= dy { (dx, dy) } else { (dy, dx) })
        });
        let free = self.vertices().iter().all(|&x| self.deck(x) != x);
        preserved && free
    }

    /// Order of the deck rotation as a permutation of the lifted vertices.
    pub fn deck_order(&self) -> u32 {
        let verts = self.vertices();
        (1..=self.p)
            .find(|&k| {
                verts.iter().all(|&x| {
                    let mut y = x;
                    for _ in 0..k {
                        y = self.deck(y);
                    }
                    y == x
                })
            })
            .unwrap_or(self.p)
    }

    fn components_of(&self, keep: impl Fn(GammaVertex) -> bool) -> Vec<BTreeSet<Lift>> {
        let mut adj: BTreeMap<Lift, Vec<Lift>> = BTreeMap::new();
        for v in self.vertices().into_iter().filter(|v| keep(v.0)) {
            adj.insert(v, vec![]);
        }
        for (x, y) in self.edges() {
            if keep(x.0) && keep(y.0) {
                adj.get_mut(&x).unwrap().push(y);
                adj.get_mut(&y).unwrap().push(x);
            }
        }
        let mut seen = BTreeSet::new();
        let mut comps = vec![];
        for &start in adj.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[&x] {
                    if seen.insert(y) {
                        comp.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn component_count(&self) -> usize {
        self.components_of(|_| true).len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Sizes of the components of the preimage of Γ(A^s ⊔ B^t), provided each
    /// is a cycle (every lifted vertex has degree 2 there); `None` otherwise.
    pub fn special_preimage_cycles(&self, s: Sign, t: Sign) -> Option<Vec<usize>> {
        let keep = |v: GammaVertex| v.part() == Part::new(Factor::A, s) || v.part() == Part::new(Factor::B, t);
        let mut degree: BTreeMap<Lift, usize> = BTreeMap::new();
        for (x, y) in self.edges() {
            if keep(x.0) && keep(y.0) {
                *degree.entry(x).or_default() += 1;
                *degree.entry(y).or_default() += 1;
            }
        }
        if degree.values().any(|&d| d != 2) {
            return None;
        }
        let mut sizes: Vec<_> = self.components_of(keep).iter().map(BTreeSet::len).collect();
        sizes.sort();
        Some(sizes)
    }

    /// Sum of weights around a cycle, each edge taken in the direction of travel.
    pub fn cycle_weight(&self, cycle: &CycleCert<GammaVertex>) -> u32 {
        let n = cycle.vertices.len();
        let mut total = 0u32;
        for i in 0..n {
            let (x, y) = (cycle.vertices[i], cycle.vertices[(i + 1) % n]);
            let w = self.weight(edge(x, y));
            let w = if x.factor() == Factor::A { w } else { (self.p - w) % self.p };
            total = (total + w) % self.p;
        }
        total
    }
}

/// The p-fold link cover: weight 1 on each designated edge, 0 elsewhere.
///
/// `designated` must hold one edge of Γ(A⁺⊔B⁺) and one of Γ(A⁻⊔B⁻), in
/// either order.
pub fn build_link_cover(g: &ModGraph, p: u32, designated: [Edge; 2]) -> Result<CoveredGraph, GammaError> {
    if !is_prime(p) {
        return Err(GammaError::NotPrime(p));
    }
    let on = |e: Edge, s: Sign| {
        let sub = g.special_subgraph(s, s);
        sub.has_edge(e.0, e.1)
    };
    let [e1, e2] = designated.map(|(u, v)| edge(u, v));
    let (plus, minus) = if on(e1, Sign::Plus) { (e1, e2) } else { (e2, e1) };
    if !on(plus, Sign::Plus) {
        return Err(GammaError::BadDesignatedEdge(plus.0, plus.1, "A+ B+".into()));
    }
    if !on(minus, Sign::Minus) {
        return Err(GammaError::BadDesignatedEdge(minus.0, minus.1, "A- B-".into()));
    }
    CoveredGraph::from_weights(g, p, [(plus, 1), (minus, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(part: Part, r: i64) -> GammaVertex {
        GammaVertex::new(part, r)
    }

    #[test]
    fn residues_reduce() {
        assert_eq!(v(Part::APlus, -1).residue(), 8);
        assert_eq!(v(Part::APlus, 20).residue(), 2);
        assert_eq!(GammaVertex::all().count(), 36);
    }

    #[test]
    fn canonical_order_is_part_then_residue() {
        let all: Vec<_> = GammaVertex::all().collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all[0], v(Part::AMinus, 0));
        assert_eq!(all[9], v(Part::APlus, 0));
        assert_eq!(all[35], v(Part::BPlus, 8));
    }

    #[test]
    fn rule_one_reading() {
        let g = build_gamma();
        assert!(g.has_edge(v(Part::APlus, 3), v(Part::BPlus, 3)));
        assert!(!g.has_edge(v(Part::APlus, 3), v(Part::BPlus, 4)));
        assert!(g.has_edge(v(Part::APlus, 4), v(Part::BPlus, 3)));
    }

    #[test]
    fn plus_two_variant_has_a_four_cycle() {
        let g = build_gamma_with(&EdgeRules::plus_two_variant());
        assert_eq!(g.edge_count(), 72);
        assert_eq!(girth(&g), Some(4));
        let cyc = CycleCert {
            vertices: vec![v(Part::AMinus, 0), v(Part::BMinus, 7), v(Part::APlus, 7), v(Part::BPlus, 7)],
        };
        assert!(cyc.verify(|x, y| g.has_edge(*x, *y)));
        assert!(!cyc.verify(|x, y| build_gamma().has_edge(*x, *y)));
    }

    #[test]
    fn variants_differ_only_on_minus_plus_rule() {
        let (std, var) = (build_gamma(), build_gamma_with(&EdgeRules::plus_two_variant()));
        for (a, b) in std.edges().filter(|e| !var.has_edge(e.0, e.1)) {
            assert_eq!((a.part(), b.part()), (Part::AMinus, Part::BPlus));
        }
    }

    #[test]
    fn gamma_is_simple_bipartite_four_regular() {
        let g = build_gamma();
        assert_eq!(g.vertex_count(), 36);
        assert_eq!(g.edge_count(), 72);
        assert_eq!(g.regular_degree(), Some(4));
        assert!(g.is_bipartite_ab());
        assert!(g.is_connected());
    }

    #[test]
    fn girth_of_single_cycle_and_forest() {
        let g = build_gamma();
        let c = g.special_subgraph(Sign::Plus, Sign::Plus);
        assert_eq!(girth(&c), Some(18));
        let path = c.without_edge(v(Part::APlus, 0), v(Part::BPlus, 0));
        assert_eq!(girth(&path), None);
    }

    #[test]
    fn special_cycle_plus_plus_alternates() {
        let g = build_gamma();
        let cert = special_cycle(&g, Sign::Plus, Sign::Plus).unwrap();
        let expect: Vec<_> = (0..9)
            .flat_map(|r| [v(Part::APlus, r), v(Part::BPlus, r)])
            .collect();
        assert_eq!(cert.vertices, expect);
        assert!(cert.verify(|x, y| g.has_edge(*x, *y)));
    }

    #[test]
    fn all_special_cycles_have_length_18() {
        let g = build_gamma();
        for s in Sign::BOTH {
            for t in Sign::BOTH {
                let cert = special_cycle(&g, s, t).unwrap();
                assert_eq!(cert.len(), 18, "A{s} B{t}");
                assert!(cert.verify(|x, y| g.has_edge(*x, *y)));
            }
        }
    }

    #[test]
    fn special_cycle_rejects_deleted_edge() {
        let g = build_gamma().without_edge(v(Part::APlus, 0), v(Part::BPlus, 0));
        match special_cycle(&g, Sign::Plus, Sign::Plus) {
            Err(GammaError::NotTwoRegular { degree, .. }) => assert_eq!(degree, 1),
            other => panic!("expected degree failure, got {other:?}"),
        }
    }

    #[test]
    fn two_disjoint_cycles_are_not_one_cycle() {
        // two disjoint 4-cycles, 2-regular but disconnected
        let a = |r| v(Part::APlus, r);
        let b = |r| v(Part::BPlus, r);
        let g = ModGraph::new(
            [a(0), a(1), b(0), b(1), a(2), a(3), b(2), b(3)],
            [
                (a(0), b(0)),
                (b(0), a(1)),
                (a(1), b(1)),
                (b(1), a(0)),
                (a(2), b(2)),
                (b(2), a(3)),
                (a(3), b(3)),
                (b(3), a(2)),
            ],
        )
        .unwrap();
        assert!(matches!(single_cycle(&g, "x"), Err(GammaError::Disconnected { seen: 4, total: 8, .. })));
    }

    #[test]
    fn default_designated_edges_lie_on_special_cycles() {
        let g = build_gamma();
        let [plus, minus] = default_designated();
        assert!(g.special_subgraph(Sign::Plus, Sign::Plus).has_edge(plus.0, plus.1));
        assert!(g.special_subgraph(Sign::Minus, Sign::Minus).has_edge(minus.0, minus.1));
    }

    #[test]
    fn link_cover_p3() {
        let g = build_gamma();
        let cover = build_link_cover(&g, 3, default_designated()).unwrap();
        assert_eq!(cover.vertices().len(), 108);
        assert_eq!(cover.edges().len(), 216);
        assert!(cover.is_connected());
        assert!(cover.deck_is_free_automorphism());
        assert_eq!(cover.deck_order(), 3);
    }

    #[test]
    fn link_cover_special_preimages_p2() {
        let g = build_gamma();
        let cover = build_link_cover(&g, 2, default_designated()).unwrap();
        assert_eq!(cover.special_preimage_cycles(Sign::Plus, Sign::Plus), Some(vec![36]));
        assert_eq!(cover.special_preimage_cycles(Sign::Minus, Sign::Minus), Some(vec![36]));
    }

    #[test]
    fn trivial_cocycle_gives_disjoint_copies() {
        let g = build_gamma();
        for p in [2, 3, 5] {
            let cover = CoveredGraph::from_weights(&g, p, []).unwrap();
            assert_eq!(cover.component_count(), p as usize);
        }
    }

    #[test]
    fn link_cover_rejects_bad_input() {
        let g = build_gamma();
        assert_eq!(
            build_link_cover(&g, 4, default_designated()).unwrap_err(),
            GammaError::NotPrime(4)
        );
        let [plus, _] = default_designated();
        let off_cycle = edge(v(Part::APlus, 0), v(Part::BMinus, 0));
        assert!(g.has_edge(off_cycle.0, off_cycle.1));
        assert!(matches!(
            build_link_cover(&g, 3, [plus, off_cycle]),
            Err(GammaError::BadDesignatedEdge(..))
        ));
    }

    #[test]
    fn text_format_round_trips() {
        let g = build_gamma();
        let text = g.to_text();
        assert!(text.starts_with("sizeable-graph v1\nsummary vertices=36 edges=72 girth="));
        assert!(text.contains("\nA+,3 -- B+,3\n"));
        assert_eq!(ModGraph::parse_text(&text).unwrap(), g);
    }

    #[test]
    fn text_format_rejects_bad_summary() {
        let text = build_gamma().to_text().replace("edges=72", "edges=71");
        assert!(matches!(ModGraph::parse_text(&text), Err(GammaError::Parse { line: 2, .. })));
    }
}
