//! The Morse function on X_Γ, finite pieces of its cyclic cover, the level
//! graph Z_0 and ascending/descending links.
//!
//! Every edge has f-degree ±1 and every loop of X_Γ has even degree, so the
//! connected cyclic cover is the set of pairs `(base, level)` with
//! `level ≡ parity(base) (mod 2)`. The deck generator shifts levels by 2.
//! `Z_t` is the part with levels in `[-2t, 2t]`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexEdge, ComplexVertex, SquareCell};
use crate::gamma::{single_cycle, CycleCert, Factor, GammaError, GammaVertex, ModGraph, Sign};
use crate::group::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("truncation radius must be at least 1")]
    Radius,
    #[error("{0} is not a vertex of the cover (level parity)")]
    Parity(CoverVertex),
    #[error("{vertex} {direction} link needs level {needed}, truncation reaches {bound}")]
    Margin {
        vertex: CoverVertex,
        direction: Direction,
        needed: i64,
        bound: i64,
    },
    #[error("{direction} link at {vertex}: {source}")]
    NotCycle {
        vertex: CoverVertex,
        direction: Direction,
        source: GammaError,
    },
    #[error("level graph is disconnected")]
    Disconnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Asc,
    Desc,
}

impl Direction {
    /// Level change along a link edge, away from the centre.
    pub fn delta(self) -> i64 {
        match self {
            Direction::Asc => 1,
            Direction::Desc => -1,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Asc => "asc",
            Direction::Desc => "desc",
        })
    }
}

/// f-degree of an edge traversed from its `-` end to its `+` end.
pub fn edge_degree(e: ComplexEdge) -> i64 {
    e.label.sign().unit() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoverVertex {
    pub level: i64,
    pub base: ComplexVertex,
}

impl CoverVertex {
    pub fn new(base: ComplexVertex, level: i64) -> Result<CoverVertex, MorseError> {
        let v = CoverVertex { level, base };
        if level.rem_euclid(2) != base.parity() as i64 {
            return Err(MorseError::Parity(v));
        }
        Ok(v)
    }

    pub fn basepoint() -> CoverVertex {
        CoverVertex {
            level: 0,
            base: ComplexVertex::new(Sign::Plus, Sign::Plus),
        }
    }

    /// Whether the edge labelled `label` at this vertex goes down.
    pub fn descends(self, label: GammaVertex) -> bool {
        label.sign() == self.base.side(label.factor())
    }

    /// The far end of the edge labelled `label`.
    pub fn step(self, label: GammaVertex) -> CoverVertex {
        CoverVertex {
            level: self.level + if self.descends(label) { -1 } else { 1 },
            base: self.base.flipped(label.factor()),
        }
    }

    pub fn edge(self, label: GammaVertex) -> CoverEdge {
        CoverEdge {
            edge: ComplexEdge::at(label, self.base),
            low: self.level.min(self.step(label).level),
        }
    }

    pub fn shifted(self, deck_steps: i64) -> CoverVertex {
        CoverVertex {
            level: self.level + 2 * deck_steps,
            ..self
        }
    }

    /// Labels of the edges leaving in `direction`: `A^x ⊔ B^y` down from
    /// `(x, y)`, `A^{-x} ⊔ B^{-y}` up.
    pub fn link_signs(self, direction: Direction) -> (Sign, Sign) {
        match direction {
            Direction::Desc => (self.base.a, self.base.b),
            Direction::Asc => (self.base.a.flip(), self.base.b.flip()),
        }
    }
}

impl fmt::Display for CoverVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.base, self.level)
    }
}

/// Lift of an edge with its lower end at level `low`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoverEdge {
    pub low: i64,
    pub edge: ComplexEdge,
}

impl CoverEdge {
    pub fn bottom(self) -> CoverVertex {
        CoverVertex {
            level: self.low,
            base: self.edge.endpoint(self.edge.label.sign().flip()),
        }
    }

    pub fn top(self) -> CoverVertex {
        CoverVertex {
            level: self.low + 1,
            base: self.edge.endpoint(self.edge.label.sign()),
        }
    }
}

impl fmt::Display for CoverEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.edge, self.low)
    }
}

/// Lift of the square `(a, b)`, `a ∈ A^s`, `b ∈ B^t`, with bottom corner
/// `(-s, -t)` at level `bottom` and top corner `(s, t)` two levels up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoverSquare {
    pub bottom: i64,
    pub cell: SquareCell,
}

impl CoverSquare {
    pub fn bottom_corner(self) -> CoverVertex {
        CoverVertex {
            level: self.bottom,
            base: ComplexVertex::new(self.cell.a.sign().flip(), self.cell.b.sign().flip()),
        }
    }

    pub fn top_corner(self) -> CoverVertex {
        CoverVertex {
            level: self.bottom + 2,
            base: ComplexVertex::new(self.cell.a.sign(), self.cell.b.sign()),
        }
    }

    /// Middle corner reached from the bottom along the A-edge.
    pub fn mid_a(self) -> CoverVertex {
        self.bottom_corner().step(self.cell.a)
    }

    /// Middle corner reached from the bottom along the B-edge.
    pub fn mid_b(self) -> CoverVertex {
        self.bottom_corner().step(self.cell.b)
    }

    pub fn corners(self) -> [CoverVertex; 4] {
        [self.bottom_corner(), self.mid_a(), self.top_corner(), self.mid_b()]
    }

    /// Boundary edges with signs for the loop bottom, mid_a, top, mid_b
    /// (edges oriented upward).
    pub fn boundary(self) -> [(CoverEdge, i64); 4] {
        let bot = self.bottom_corner();
        let (ma, mb) = (self.mid_a(), self.mid_b());
        [
            (bot.edge(self.cell.a), 1),
            (ma.edge(self.cell.b), 1),
            (mb.edge(self.cell.a), -1),
            (bot.edge(self.cell.b), -1),
        ]
    }

    pub fn shifted(self, deck_steps: i64) -> CoverSquare {
        CoverSquare {
            bottom: self.bottom + 2 * deck_steps,
            ..self
        }
    }
}

impl fmt::Display for CoverSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.cell, self.bottom)
    }
}

/// `Z_t`: cells of the cover with all corners in levels `[-2t, 2t]`.
#[derive(Clone, Debug)]
pub struct Truncation {
    t: u32,
    vertices: Vec<CoverVertex>,
    edges: Vec<CoverEdge>,
    squares: Vec<CoverSquare>,
    vertex_ix: HashMap<CoverVertex, usize>,
    edge_ix: HashMap<CoverEdge, usize>,
    square_ix: HashMap<CoverSquare, usize>,
}

/// Squares of X_Γ with the given top-corner signs, in canonical order.
fn cells_with_top(gamma: &ModGraph, s: Sign, t: Sign) -> Vec<SquareCell> {
    gamma
        .special_subgraph(s, t)
        .edges()
        .map(|(u, v)| if u.factor() == Factor::A { SquareCell::new(u, v) } else { SquareCell::new(v, u) })
        .collect()
}

pub fn build_truncation(gamma: &ModGraph, t: u32) -> Result<Truncation, MorseError> {
    if t == 0 {
        return Err(MorseError::Radius);
    }
    let top = 2 * t as i64;
    let mut vertices = Vec::new();
    for level in -top..=top {
        for base in ComplexVertex::all() {
            if let Ok(v) = CoverVertex::new(base, level) {
                vertices.push(v);
            }
        }
    }
    let mut edges = Vec::new();
    for v in vertices.iter().filter(|v| v.level < top) {
        let (s, t) = v.link_signs(Direction::Asc);
        let labels = GammaVertex::all().filter(|x| x.sign() == if x.factor() == Factor::A { s } else { t });
        edges.extend(labels.map(|x| v.edge(x)));
    }
    edges.sort();
    let mut squares = Vec::new();
    for v in vertices.iter().filter(|v| v.level <= top - 2) {
        let (s, t) = v.link_signs(Direction::Asc);
        squares.extend(cells_with_top(gamma, s, t).into_iter().map(|cell| CoverSquare { bottom: v.level, cell }));
    }
    squares.sort();
    Ok(Truncation::from_cells(t, vertices, edges, squares))
}

impl Truncation {
    fn from_cells(t: u32, vertices: Vec<CoverVertex>, edges: Vec<CoverEdge>, squares: Vec<CoverSquare>) -> Truncation {
        let vertex_ix = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edge_ix = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let square_ix = squares.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Truncation {
            t,
            vertices,
            edges,
            squares,
            vertex_ix,
            edge_ix,
            square_ix,
        }
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Highest level, `2t`.
    pub fn top_level(&self) -> i64 {
        2 * self.t as i64
    }

    pub fn vertices(&self) -> &[CoverVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[CoverEdge] {
        &self.edges
    }

    pub fn squares(&self) -> &[CoverSquare] {
        &self.squares
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.squares.len())
    }

    pub fn vertex_index(&self, v: CoverVertex) -> Option<usize> {
        self.vertex_ix.get(&v).copied()
    }

    pub fn edge_index(&self, e: CoverEdge) -> Option<usize> {
        self.edge_ix.get(&e).copied()
    }

    pub fn square_index(&self, s: CoverSquare) -> Option<usize> {
        self.square_ix.get(&s).copied()
    }

    pub fn contains_level(&self, level: i64) -> bool {
        level.abs() <= self.top_level()
    }

    /// `∂_2`: one row per edge, one column per square. Squares with a corner
    /// at `exclude` are left out (the complement of its open star).
    pub fn boundary_matrix(&self, exclude: Option<CoverVertex>) -> IntMatrix {
        let kept: Vec<&CoverSquare> = self
            .squares
            .iter()
            .filter(|s| exclude.is_none_or(|v| !s.corners().contains(&v)))
            .collect();
        let mut m = IntMatrix::zeros(self.edges.len(), kept.len());
        for (j, s) in kept.iter().enumerate() {
            for (e, sign) in s.boundary() {
                m.add(self.edge_ix[&e], j, sign);
            }
        }
        m
    }

    /// Deck translation by `deck_steps`, if every cell stays inside `target`.
    pub fn embeds_shifted(&self, target: &Truncation, deck_steps: i64) -> bool {
        self.vertices.iter().all(|v| target.vertex_index(v.shifted(deck_steps)).is_some())
            && self.edges.iter().all(|e| {
                let s = CoverEdge {
                    low: e.low + 2 * deck_steps,
                    ..*e
                };
                target.edge_index(s).is_some()
            })
            && self.squares.iter().all(|s| target.square_index(s.shifted(deck_steps)).is_some())
    }

    pub fn to_text(&self) -> String {
        let (v, e, f) = self.counts();
        let mut out = format!("sizeable-truncation v1\nsummary t={} vertices={v} edges={e} squares={f}\n", self.t);
        for x in &self.vertices {
            out.push_str(&format!("vertex {} {}\n", x.base, x.level));
        }
        for x in &self.edges {
            out.push_str(&format!("edge {} {}\n", x.edge, x.low));
        }
        for x in &self.squares {
            out.push_str(&format!("square {} {}\n", x.cell, x.bottom));
        }
        out
    }
}

/// Closed forms for `Z_t`: `(2(4t+1), 144t, 36(4t-1))`.
pub fn expected_counts(t: u32) -> (usize, usize, usize) {
    let t = t as usize;
    (2 * (4 * t + 1), 144 * t, 36 * (4 * t - 1))
}

/// An edge of Z_0: the middle slice of a square with bottom at level -1,
/// oriented from `mid_a` to `mid_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SliceEdge {
    pub square: CoverSquare,
}

impl SliceEdge {
    pub fn tail(self) -> CoverVertex {
        self.square.mid_a()
    }

    pub fn head(self) -> CoverVertex {
        self.square.mid_b()
    }
}

/// Z_0 with a BFS spanning tree from the basepoint.
#[derive(Clone, Debug)]
pub struct LevelGraph {
    pub vertices: Vec<CoverVertex>,
    pub edges: Vec<SliceEdge>,
    /// Indices into `edges`.
    pub tree: Vec<usize>,
    /// Generator index of each edge; `None` on tree edges.
    pub generator: Vec<Option<usize>>,
    slice_ix: HashMap<SquareCell, usize>,
}

pub fn level_graph(z: &Truncation) -> Result<LevelGraph, MorseError> {
    let vertices: Vec<CoverVertex> = z.vertices().iter().copied().filter(|v| v.level == 0).collect();
    let edges: Vec<SliceEdge> = z
        .squares()
        .iter()
        .filter(|s| s.bottom == -1)
        .map(|&square| SliceEdge { square })
        .collect();
    let mut seen: BTreeMap<CoverVertex, ()> = BTreeMap::new();
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([CoverVertex::basepoint()]);
    seen.insert(CoverVertex::basepoint(), ());
    while let Some(u) = queue.pop_front() {
        for (i, e) in edges.iter().enumerate() {
            let other = if e.tail() == u {
                e.head()
            } else if e.head() == u {
                e.tail()
            } else {
                continue;
            };
            if seen.insert(other, ()).is_none() {
                tree.push(i);
                queue.push_back(other);
            }
        }
    }
    if seen.len() != vertices.len() {
        return Err(MorseError::Disconnected);
    }
    let mut next = 0;
    let generator = (0..edges.len())
        .map(|i| {
            (!tree.contains(&i)).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    let slice_ix = edges.iter().enumerate().map(|(i, e)| (e.square.cell, i)).collect();
    Ok(LevelGraph {
        vertices,
        edges,
        tree,
        generator,
        slice_ix,
    })
}

impl LevelGraph {
    pub fn generator_count(&self) -> usize {
        self.edges.len() - self.tree.len()
    }

    /// First Betti number `E - V + 1`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Index of the slice edge cut from square `cell`, if it is one.
    pub fn slice_of(&self, cell: SquareCell) -> Option<usize> {
        self.slice_ix.get(&cell).copied()
    }

    /// Tree path from the basepoint to `v` as `(edge, forward)` steps.
    pub fn tree_path(&self, v: CoverVertex) -> Vec<(usize, bool)> {
        // Walk back from v; the tree is a BFS tree rooted at the basepoint.
        let mut path = Vec::new();
        let mut cur = v;
        while cur != CoverVertex::basepoint() {
            let (i, fwd) = self
                .tree
                .iter()
                .rev()
                .find_map(|&i| {
                    let e = self.edges[i];
                    if e.head() == cur {
                        Some((i, true))
                    } else if e.tail() == cur {
                        Some((i, false))
                    } else {
                        None
                    }
                })
                .expect("tree spans Z_0");
            path.push((i, fwd));
            let e = self.edges[i];
            cur = if fwd { e.tail() } else { e.head() };
        }
        path.reverse();
        path
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "sizeable-level-graph v1\nsummary vertices={} edges={} tree={} rank={}\n",
            self.vertices.len(),
            self.edges.len(),
            self.tree.len(),
            self.cycle_rank()
        );
        for v in &self.vertices {
            out.push_str(&format!("vertex {v}\n"));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let role = match self.generator[i] {
                Some(g) => format!("x{g}"),
                None => "tree".to_string(),
            };
            out.push_str(&format!("{} -- {} {} {role}\n", e.tail(), e.head(), e.square.cell));
        }
        out
    }
}

/// The ascending or descending link at a cover vertex, read off the squares
/// of the truncation.
#[derive(Clone, Debug)]
pub struct DirectedLink {
    pub vertex: CoverVertex,
    pub direction: Direction,
    /// One link vertex per edge leaving in `direction`.
    pub edges: Vec<CoverEdge>,
    /// One link edge per square with a corner at `vertex` on that side.
    pub squares: Vec<CoverSquare>,
    /// The link as a graph on edge labels.
    pub graph: ModGraph,
    pub cycle: CycleCert<GammaVertex>,
}

impl DirectedLink {
    /// Whether the link equals the full subgraph of Γ on its label signs.
    pub fn matches(&self, gamma: &ModGraph) -> bool {
        let (s, t) = self.vertex.link_signs(self.direction);
        gamma.special_subgraph(s, t) == self.graph
    }
}

pub fn asc_desc_link(z: &Truncation, v: CoverVertex, direction: Direction) -> Result<DirectedLink, MorseError> {
    let v = CoverVertex::new(v.base, v.level)?;
    let needed = v.level + 2 * direction.delta();
    if !z.contains_level(v.level) || !z.contains_level(needed) {
        return Err(MorseError::Margin {
            vertex: v,
            direction,
            needed,
            bound: z.top_level(),
        });
    }
    let squares: Vec<CoverSquare> = z
        .squares()
        .iter()
        .copied()
        .filter(|s| match direction {
            Direction::Desc => s.top_corner() == v,
            Direction::Asc => s.bottom_corner() == v,
        })
        .collect();
    let mut edges: Vec<CoverEdge> = z
        .edges()
        .iter()
        .copied()
        .filter(|e| match direction {
            Direction::Desc => e.top() == v,
            Direction::Asc => e.bottom() == v,
        })
        .collect();
    edges.sort();
    let labels: Vec<GammaVertex> = edges.iter().map(|e| e.edge.label).collect();
    let pairs: Vec<(GammaVertex, GammaVertex)> = squares.iter().map(|s| (s.cell.a, s.cell.b)).collect();
    let graph = ModGraph::new(labels, pairs).map_err(|source| MorseError::NotCycle {
        vertex: v,
        direction,
        source,
    })?;
    let cycle = single_cycle(&graph, &format!("{direction}@{v}")).map_err(|source| MorseError::NotCycle {
        vertex: v,
        direction,
        source,
    })?;
    Ok(DirectedLink {
        vertex: v,
        direction,
        edges,
        squares,
        graph,
        cycle,
    })
}

/// Cyclic order of each ascending/descending link, keyed by label signs.
#[derive(Clone, Debug)]
pub struct LinkTables {
    cycles: BTreeMap<(Sign, Sign), Vec<GammaVertex>>,
    position: BTreeMap<(Sign, Sign), [u8; 36]>,
}

impl LinkTables {
    pub fn new(gamma: &ModGraph) -> Result<LinkTables, MorseError> {
        let mut cycles = BTreeMap::new();
        let mut position = BTreeMap::new();
        for s in Sign::BOTH {
            for t in Sign::BOTH {
                let cert = crate::gamma::special_cycle(gamma, s, t).map_err(|source| MorseError::NotCycle {
                    vertex: CoverVertex::basepoint(),
                    direction: Direction::Desc,
                    source,
                })?;
                let mut pos = [u8::MAX; 36];
                for (i, x) in cert.vertices.iter().enumerate() {
                    pos[x.index()] = i as u8;
                }
                cycles.insert((s, t), cert.vertices);
                position.insert((s, t), pos);
            }
        }
        Ok(LinkTables { cycles, position })
    }

    pub fn cycle(&self, v: CoverVertex, direction: Direction) -> &[GammaVertex] {
        &self.cycles[&v.link_signs(direction)]
    }

    /// Position of `label` on the link cycle, if the edge leaves in `direction`.
    pub fn position(&self, v: CoverVertex, direction: Direction, label: GammaVertex) -> Option<usize> {
        let p = self.position[&v.link_signs(direction)][label.index()];
        (p != u8::MAX).then_some(p as usize)
    }
}

/// A branch vertex: the lift of `(+,+)` at level `2·index`, `index ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BranchVertex {
    pub index: u32,
}

impl BranchVertex {
    pub fn vertex(self) -> CoverVertex {
        CoverVertex::basepoint().shifted(self.index as i64)
    }

    pub fn of(v: CoverVertex) -> Option<BranchVertex> {
        (v.base == CoverVertex::basepoint().base && v.level > 0).then_some(BranchVertex {
            index: (v.level / 2) as u32,
        })
    }
}

pub fn branch_set(t: u32) -> Vec<BranchVertex> {
    (1..=t).map(|index| BranchVertex { index }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::build_gamma;

    fn pp(level: i64) -> CoverVertex {
        CoverVertex::new(ComplexVertex::new(Sign::Plus, Sign::Plus), level).unwrap()
    }

    #[test]
    fn degree_follows_label_sign() {
        for e in ComplexEdge::all() {
            let v = CoverVertex::new(e.tail(), e.tail().parity() as i64).unwrap();
            assert_eq!(v.step(e.label).level - v.level, edge_degree(e));
        }
    }

    #[test]
    fn counts_follow_closed_forms() {
        let g = build_gamma();
        for t in 1..=4 {
            let z = build_truncation(&g, t).unwrap();
            assert_eq!(z.counts(), expected_counts(t));
        }
        assert!(build_truncation(&g, 0).is_err());
    }

    #[test]
    fn cells_are_well_formed() {
        let z = build_truncation(&build_gamma(), 2).unwrap();
        for e in z.edges() {
            assert_eq!(e.top().level, e.bottom().level + 1);
            assert!(z.vertex_index(e.top()).is_some() && z.vertex_index(e.bottom()).is_some());
        }
        for s in z.squares() {
            let levels: Vec<i64> = s.corners().iter().map(|c| c.level).collect();
            assert_eq!(levels, vec![s.bottom, s.bottom + 1, s.bottom + 2, s.bottom + 1]);
            for (e, _) in s.boundary() {
                assert!(z.edge_index(e).is_some(), "{e} missing");
            }
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let z = build_truncation(&build_gamma(), 1).unwrap();
        for s in z.squares() {
            let mut at = BTreeMap::new();
            for (e, sign) in s.boundary() {
                *at.entry(e.top()).or_insert(0) += sign;
                *at.entry(e.bottom()).or_insert(0) -= sign;
            }
            assert!(at.values().all(|&x| x == 0));
        }
    }

    #[test]
    fn level_graph_is_connected() {
        let z = build_truncation(&build_gamma(), 1).unwrap();
        let lg = level_graph(&z).unwrap();
        assert_eq!((lg.vertices.len(), lg.edges.len(), lg.tree.len()), (2, 36, 1));
        assert_eq!(lg.cycle_rank(), 35);
        assert_eq!(lg.generator_count(), 35);
        for e in &lg.edges {
            assert_eq!((e.tail().level, e.head().level), (0, 0));
        }
    }

    #[test]
    fn all_parity_slice_graph_splits() {
        // Without the parity constraint the level-0 slice would carry all
        // four base vertices and fall apart into two pieces.
        let g = build_gamma();
        let mut comp: BTreeMap<ComplexVertex, ComplexVertex> = ComplexVertex::all().iter().map(|&v| (v, v)).collect();
        for cell in crate::complex::squares_of(&g) {
            let (a, b) = (cell.a.sign(), cell.b.sign());
            let x = ComplexVertex::new(a, b.flip());
            let y = ComplexVertex::new(a.flip(), b);
            let (rx, ry) = (comp[&x], comp[&y]);
            for v in comp.values_mut() {
                if *v == ry {
                    *v = rx;
                }
            }
        }
        let classes: std::collections::BTreeSet<_> = comp.values().collect();
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn links_at_plus_plus() {
        let g = build_gamma();
        let z = build_truncation(&g, 3).unwrap();
        let d = asc_desc_link(&z, pp(2), Direction::Desc).unwrap();
        assert_eq!(d.cycle.len(), 18);
        assert!(d.matches(&g));
        assert!(d.edges.iter().all(|e| e.edge.label.sign() == Sign::Plus));
        let a = asc_desc_link(&z, pp(2), Direction::Asc).unwrap();
        assert!(a.matches(&g));
        assert!(a.edges.iter().all(|e| e.edge.label.sign() == Sign::Minus));
        assert!(matches!(asc_desc_link(&z, pp(6), Direction::Asc), Err(MorseError::Margin { .. })));
        assert!(matches!(asc_desc_link(&z, pp(-6), Direction::Desc), Err(MorseError::Margin { .. })));
    }

    #[test]
    fn truncations_nest_and_shift() {
        let g = build_gamma();
        let z2 = build_truncation(&g, 2).unwrap();
        let z3 = build_truncation(&g, 3).unwrap();
        assert!(z2.embeds_shifted(&z3, 0));
        assert!(z2.embeds_shifted(&z3, 1));
        assert!(!z2.embeds_shifted(&z3, 2));
    }

    #[test]
    fn branch_vertices() {
        let b = branch_set(4);
        assert_eq!(b.iter().map(|x| x.index).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        for x in b {
            assert_eq!(x.vertex().base, ComplexVertex::new(Sign::Plus, Sign::Plus));
            assert_eq!(BranchVertex::of(x.vertex()), Some(x));
        }
        assert_eq!(branch_set(1).len(), 1);
    }

    #[test]
    fn link_tables_agree_with_truncation() {
        let g = build_gamma();
        let z = build_truncation(&g, 2).unwrap();
        let tables = LinkTables::new(&g).unwrap();
        let v = pp(0);
        let link = asc_desc_link(&z, v, Direction::Desc).unwrap();
        assert_eq!(tables.cycle(v, Direction::Desc), link.cycle.vertices.as_slice());
    }
}
