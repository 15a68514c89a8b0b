//! Square complexes with explicit attaching maps, and the complex X_Γ ⊂ Λ_A × Λ_B.
//!
//! A square is attached along four oriented sides; side `i` runs from corner
//! `i` to corner `i + 1`. Vertex links are read off the corners, so they are
//! multigraphs in general and the curvature checks report loops and doubled
//! edges as well as short cycles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamma::{edge, Factor, GammaVertex, ModGraph, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("edge {edge} -- {other} is not an A/B edge")]
    NotBipartite { edge: GammaVertex, other: GammaVertex },
    #[error("square {square}: side {side} does not join corners {from} and {to}")]
    BadAttachment {
        square: String,
        side: usize,
        from: usize,
        to: usize,
    },
    #[error("cell index {0} out of range")]
    OutOfRange(usize),
    #[error("link of vertex {vertex} is not labelled by Γ: {reason}")]
    NotGammaLabelled { vertex: usize, reason: String },
}

/// A vertex `(a^±, b^±)` of Λ_A × Λ_B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComplexVertex {
    pub a: Sign,
    pub b: Sign,
}

impl ComplexVertex {
    pub const fn new(a: Sign, b: Sign) -> ComplexVertex {
        ComplexVertex { a, b }
    }

    pub fn all() -> [ComplexVertex; 4] {
        [
            ComplexVertex::new(Sign::Minus, Sign::Minus),
            ComplexVertex::new(Sign::Minus, Sign::Plus),
            ComplexVertex::new(Sign::Plus, Sign::Minus),
            ComplexVertex::new(Sign::Plus, Sign::Plus),
        ]
    }

    pub fn index(self) -> usize {
        2 * self.a as usize + self.b as usize
    }

    pub fn from_index(i: usize) -> ComplexVertex {
        ComplexVertex::all()[i]
    }

    pub fn side(self, factor: Factor) -> Sign {
        match factor {
            Factor::A => self.a,
            Factor::B => self.b,
        }
    }

    pub fn with_side(self, factor: Factor, sign: Sign) -> ComplexVertex {
        match factor {
            Factor::A => ComplexVertex { a: sign, ..self },
            Factor::B => ComplexVertex { b: sign, ..self },
        }
    }

    pub fn flipped(self, factor: Factor) -> ComplexVertex {
        self.with_side(factor, self.side(factor).flip())
    }

    /// Number of `+` coordinates mod 2.
    pub fn parity(self) -> i32 {
        (self.a as i32 + self.b as i32) % 2
    }
}

impl fmt::Display for ComplexVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// An edge of Λ_A × Λ_B: the factor edge `label` crossed with the vertex
/// `co_side` of the other factor. It runs from the `-` end to the `+` end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComplexEdge {
    pub label: GammaVertex,
    pub co_side: Sign,
}

impl ComplexEdge {
    pub fn new(label: GammaVertex, co_side: Sign) -> ComplexEdge {
        ComplexEdge { label, co_side }
    }

    pub fn factor(self) -> Factor {
        self.label.factor()
    }

    pub fn index(self) -> usize {
        2 * self.label.index() + self.co_side as usize
    }

    pub fn from_index(i: usize) -> ComplexEdge {
        let co_side = if i.is_multiple_of(2) { Sign::Minus } else { Sign::Plus };
        ComplexEdge::new(GammaVertex::from_index(i / 2), co_side)
    }

    pub fn all() -> impl Iterator<Item = ComplexEdge> {
        (0..72).map(ComplexEdge::from_index)
    }

    pub fn endpoint(self, end: Sign) -> ComplexVertex {
        match self.factor() {
            Factor::A => ComplexVertex::new(end, self.co_side),
            Factor::B => ComplexVertex::new(self.co_side, end),
        }
    }

    pub fn tail(self) -> ComplexVertex {
        self.endpoint(Sign::Minus)
    }

    pub fn head(self) -> ComplexVertex {
        self.endpoint(Sign::Plus)
    }

    /// The edge with this label at `v`.
    pub fn at(label: GammaVertex, v: ComplexVertex) -> ComplexEdge {
        ComplexEdge::new(label, v.side(label.factor().other()))
    }
}

impl fmt::Display for ComplexEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.label, self.co_side)
    }
}

/// The square `(a, b)` of Λ_A × Λ_B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SquareCell {
    pub a: GammaVertex,
    pub b: GammaVertex,
}

impl SquareCell {
    pub fn new(a: GammaVertex, b: GammaVertex) -> SquareCell {
        debug_assert!(a.factor() == Factor::A && b.factor() == Factor::B);
        SquareCell { a, b }
    }

    /// Corners in attaching order `(-,-), (+,-), (+,+), (-,+)`.
    pub fn corners(self) -> [ComplexVertex; 4] {
        [
            ComplexVertex::new(Sign::Minus, Sign::Minus),
            ComplexVertex::new(Sign::Plus, Sign::Minus),
            ComplexVertex::new(Sign::Plus, Sign::Plus),
            ComplexVertex::new(Sign::Minus, Sign::Plus),
        ]
    }

    /// Sides in attaching order, each with whether it is traversed tail to head.
    pub fn sides(self) -> [(ComplexEdge, bool); 4] {
        [
            (ComplexEdge::new(self.a, Sign::Minus), true),
            (ComplexEdge::new(self.b, Sign::Plus), true),
            (ComplexEdge::new(self.a, Sign::Plus), false),
            (ComplexEdge::new(self.b, Sign::Minus), false),
        ]
    }
}

impl fmt::Display for SquareCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.a, self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCell {
    pub tail: usize,
    pub head: usize,
    pub label: String,
    /// Γ-label carried by edges of Λ_A × Λ_B; `None` for synthetic cells.
    pub gamma: Option<GammaVertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareAttach {
    pub label: String,
    pub corners: [usize; 4],
    pub sides: [(usize, bool); 4],
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SquareComplex {
    vertices: Vec<String>,
    edges: Vec<EdgeCell>,
    squares: Vec<SquareAttach>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Tail,
    Head,
}

/// A vertex of a link: one end of an edge incident to the centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkEnd {
    pub edge: usize,
    pub end: End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub center: usize,
    pub vertices: Vec<LinkEnd>,
    /// Link edges as index pairs into `vertices`, one per corner at the centre.
    pub edges: Vec<(usize, usize)>,
    /// The square contributing each link edge.
    pub edge_squares: Vec<usize>,
}

impl LinkGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn simple_adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertices.len()];
        for &(x, y) in &self.edges {
            if x != y {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        adj
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Loop,
    MultiEdge,
    Triangle,
    FourCycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkViolation {
    pub vertex: String,
    pub kind: ViolationKind,
    /// Link vertices along the offending cycle (edge labels at the centre).
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub passed: bool,
    pub links_checked: usize,
    pub violations: Vec<LinkViolation>,
}

impl SquareComplex {
    pub fn new() -> SquareComplex {
        SquareComplex::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.vertices.push(label.into());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, tail: usize, head: usize, label: impl Into<String>) -> Result<usize, ComplexError> {
        for v in [tail, head] {
            if v >= self.vertices.len() {
                return Err(ComplexError::OutOfRange(v));
            }
        }
        self.edges.push(EdgeCell {
            tail,
            head,
            label: label.into(),
            gamma: None,
        });
        Ok(self.edges.len() - 1)
    }

    /// Attaches a square; side `i` must join `corners[i]` to `corners[i+1]`
    /// in the stated direction.
    pub fn add_square(
        &mut self,
        label: impl Into<String>,
        corners: [usize; 4],
        sides: [(usize, bool); 4],
    ) -> Result<usize, ComplexError> {
        let label = label.into();
        for (i, &(e, forward)) in sides.iter().enumerate() {
            let cell = self.edges.get(e).ok_or(ComplexError::OutOfRange(e))?;
            let (from, to) = (corners[i], corners[(i + 1) % 4]);
            let (s, t) = if forward { (cell.tail, cell.head) } else { (cell.head, cell.tail) };
            if (s, t) != (from, to) {
                return Err(ComplexError::BadAttachment {
                    square: label,
                    side: i,
                    from,
                    to,
                });
            }
        }
        self.squares.push(SquareAttach { label, corners, sides });
        Ok(self.squares.len() - 1)
    }

    /// Adds the square `(a, b)` of Λ_A × Λ_B; only valid on complexes built by
    /// [`build_x_gamma`] (whose cells use the canonical indices).
    pub fn add_product_square(&mut self, cell: SquareCell) -> Result<usize, ComplexError> {
        let corners = cell.corners().map(ComplexVertex::index);
        let sides = cell.sides().map(|(e, fwd)| (e.index(), fwd));
        self.add_square(cell.to_string(), corners, sides)
    }

    pub fn duplicate_square(&mut self, i: usize) -> Result<usize, ComplexError> {
        let sq = self.squares.get(i).ok_or(ComplexError::OutOfRange(i))?.clone();
        self.squares.push(sq);
        Ok(self.squares.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn square_count(&self) -> usize {
        self.squares.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[EdgeCell] {
        &self.edges
    }

    pub fn squares(&self) -> &[SquareAttach] {
        &self.squares
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.squares.len() as i64
    }

    /// Shared corners agree: every side joins the corners it claims to.
    pub fn attaching_maps_consistent(&self) -> bool {
        self.squares.iter().all(|sq| {
            sq.sides.iter().enumerate().all(|(i, &(e, fwd))| {
                let cell = &self.edges[e];
                let (s, t) = if fwd { (cell.tail, cell.head) } else { (cell.head, cell.tail) };
                (s, t) == (sq.corners[i], sq.corners[(i + 1) % 4])
            })
        })
    }

    pub fn link_vertex_label(&self, end: LinkEnd) -> String {
        let cell = &self.edges[end.edge];
        if cell.tail == cell.head {
            let suffix = match end.end {
                End::Tail => "t",
                End::Head => "h",
            };
            format!("{}/{}", cell.label, suffix)
        } else {
            cell.label.clone()
        }
    }

    /// Link of `v`: a vertex per incident edge end, an edge per corner at `v`.
    pub fn vertex_link(&self, v: usize) -> LinkGraph {
        let mut vertices = vec![];
        for (i, cell) in self.edges.iter().enumerate() {
            if cell.tail == v {
                vertices.push(LinkEnd { edge: i, end: End::Tail });
            }
            if cell.head == v {
                vertices.push(LinkEnd { edge: i, end: End::Head });
            }
        }
        let position: BTreeMap<LinkEnd, usize> = vertices.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut edges = vec![];
        let mut edge_squares = vec![];
        for (s, sq) in self.squares.iter().enumerate() {
            for i in 0..4 {
                if sq.corners[i] != v {
                    continue;
                }
                let (e_in, fwd_in) = sq.sides[(i + 3) % 4];
                let (e_out, fwd_out) = sq.sides[i];
                let arrive = LinkEnd {
                    edge: e_in,
                    end: if fwd_in { End::Head } else { End::Tail },
                };
                let leave = LinkEnd {
                    edge: e_out,
                    end: if fwd_out { End::Tail } else { End::Head },
                };
                let (x, y) = (position[&arrive], position[&leave]);
                edges.push(if x <= y { (x, y) } else { (y, x) });
                edge_squares.push(s);
            }
        }
        LinkGraph {
            center: v,
            vertices,
            edges,
            edge_squares,
        }
    }

    /// The link relabelled by the Γ-labels of its edges.
    pub fn link_as_gamma(&self, link: &LinkGraph) -> Result<ModGraph, ComplexError> {
        let fail = |reason: String| ComplexError::NotGammaLabelled {
            vertex: link.center,
            reason,
        };
        let mut labels = Vec::with_capacity(link.vertices.len());
        for end in &link.vertices {
            let label = self.edges[end.edge]
                .gamma
                .ok_or_else(|| fail(format!("edge {} has no Γ-label", end.edge)))?;
            labels.push(label);
        }
        let distinct: BTreeSet<_> = labels.iter().copied().collect();
        if distinct.len() != labels.len() {
            return Err(fail("repeated label".into()));
        }
        let mut pairs = BTreeSet::new();
        for &(x, y) in &link.edges {
            if !pairs.insert(edge(labels[x], labels[y])) {
                return Err(fail(format!("doubled edge {} -- {}", labels[x], labels[y])));
            }
        }
        ModGraph::new(labels, pairs).map_err(|e| fail(e.to_string()))
    }

    fn npc_violations(&self, v: usize) -> Vec<LinkViolation> {
        let link = self.vertex_link(v);
        let name = |i: usize| self.link_vertex_label(link.vertices[i]);
        let violation = |kind, witness| LinkViolation {
            vertex: self.vertices[v].clone(),
            kind,
            witness,
        };
        let mut out = vec![];
        let mut seen = BTreeSet::new();
        for &(x, y) in &link.edges {
            if x == y {
                out.push(violation(ViolationKind::Loop, vec![name(x)]));
            } else if !seen.insert((x, y)) {
                out.push(violation(ViolationKind::MultiEdge, vec![name(x), name(y)]));
            }
        }
        let adj = link.simple_adjacency();
        for x in 0..adj.len() {
            for &y in adj[x].range(x + 1..) {
                for &z in adj[y].range(y + 1..) {
                    if adj[x].contains(&z) {
                        out.push(violation(ViolationKind::Triangle, vec![name(x), name(y), name(z)]));
                    }
                }
            }
        }
        out
    }

    /// Embedded 4-cycles `x y z w`, listed once each: `x` is the least vertex
    /// and `y < w` are two common neighbours of `x` and `z`.
    fn four_cycle_violations(&self, v: usize) -> Vec<LinkViolation> {
        let link = self.vertex_link(v);
        let name = |i: usize| self.link_vertex_label(link.vertices[i]);
        let adj = link.simple_adjacency();
        let n = adj.len();
        let mut out = vec![];
        for x in 0..n {
            for z in x + 1..n {
                let common: Vec<usize> = adj[x].intersection(&adj[z]).copied().filter(|&c| c > x).collect();
                for (i, &y) in common.iter().enumerate() {
                    for &w in &common[i + 1..] {
                        out.push(LinkViolation {
                            vertex: self.vertices[v].clone(),
                            kind: ViolationKind::FourCycle,
                            witness: vec![name(x), name(y), name(z), name(w)],
                        });
                    }
                }
            }
        }
        out
    }

    /// Every vertex link is simple and triangle-free.
    pub fn verify_npc(&self) -> CurvatureReport {
        let violations: Vec<_> = (0..self.vertices.len()).flat_map(|v| self.npc_violations(v)).collect();
        CurvatureReport {
            passed: violations.is_empty(),
            links_checked: self.vertices.len(),
            violations,
        }
    }

    /// No vertex link contains an embedded 4-cycle.
    pub fn verify_moussong(&self) -> CurvatureReport {
        let violations: Vec<_> = (0..self.vertices.len()).flat_map(|v| self.four_cycle_violations(v)).collect();
        CurvatureReport {
            passed: violations.is_empty(),
            links_checked: self.vertices.len(),
            violations,
        }
    }

    /// Versioned text listing: vertices, labelled edges, squares with corners
    /// and signed sides in attaching order.
    pub fn to_text(&self) -> String {
        let mut out = String::from("sizeable-complex v1\n");
        out.push_str(&format!(
            "counts vertices={} edges={} squares={}\n",
            self.vertex_count(),
            self.edge_count(),
            self.square_count()
        ));
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("vertex {i} {v}\n"));
        }
        for (i, e) in self.edges.iter().enumerate() {
            out.push_str(&format!("edge {i} {} {} {}\n", e.tail, e.head, e.label));
        }
        for (i, sq) in self.squares.iter().enumerate() {
            let sides: Vec<String> = sq
                .sides
                .iter()
                .map(|&(e, fwd)| format!("{}{}", e, if fwd { '+' } else { '-' }))
                .collect();
            let corners: Vec<String> = sq.corners.iter().map(usize::to_string).collect();
            out.push_str(&format!(
                "square {i} {} corners {} sides {}\n",
                sq.label,
                corners.join(" "),
                sides.join(" ")
            ));
        }
        out
    }
}

/// X_Γ: the 1-skeleton of Λ_A × Λ_B plus one square `(a, b)` per edge of `g`.
///
/// Vertex and edge indices agree with [`ComplexVertex::index`] and
/// [`ComplexEdge::index`]; squares follow the canonical edge order of `g`.
pub fn build_x_gamma(g: &ModGraph) -> Result<SquareComplex, ComplexError> {
    for (u, v) in g.edges() {
        if u.factor() == v.factor() {
            return Err(ComplexError::NotBipartite { edge: u, other: v });
        }
    }
    let mut x = SquareComplex::new();
    for v in ComplexVertex::all() {
        x.add_vertex(v.to_string());
    }
    for e in ComplexEdge::all() {
        let id = x.add_edge(e.tail().index(), e.head().index(), e.to_string())?;
        x.edges[id].gamma = Some(e.label);
    }
    for (u, v) in g.edges() {
        let (a, b) = if u.factor() == Factor::A { (u, v) } else { (v, u) };
        x.add_product_square(SquareCell::new(a, b))?;
    }
    Ok(x)
}

/// Canonical index of a square of X_Γ (position among Γ's sorted edges).
pub fn square_index(g: &ModGraph, cell: SquareCell) -> Option<usize> {
    g.edges().position(|e| e == edge(cell.a, cell.b))
}

/// Every square of X_Γ, in canonical order.
pub fn squares_of(g: &ModGraph) -> Vec<SquareCell> {
    g.edges()
        .map(|(u, v)| if u.factor() == Factor::A { SquareCell::new(u, v) } else { SquareCell::new(v, u) })
        .collect()
}
