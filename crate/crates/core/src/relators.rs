//! Relators r_v: the link loop of v, pushed across corridors of squares into
//! a slab of two levels next to 0, read as a word in π_1(Z_0). Vertices above
//! level 0 use the slab {0, -1}; vertices below use {0, 1}, so no homotopy
//! crosses the star of v.
//!
//! A path is a start vertex plus edge labels: the edge with a given label at a
//! given vertex is unique, and two equal consecutive labels are a backtrack.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::SquareCell;
use crate::gamma::{Factor, GammaVertex, ModGraph};
use crate::group::word::letter;
use crate::group::{FreeWord, ImageLattice, MarkedPresentation, MarkedRelator};
use crate::morse::{
    asc_desc_link, build_truncation, level_graph, BranchVertex, CoverVertex, Direction, LevelGraph, LinkTables,
    MorseError, Truncation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelatorError {
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("path leaves the truncation at level {0}")]
    OutsideTruncation(i64),
    #[error("path is not closed")]
    NotClosed,
    #[error("path touches level {0} outside the slab")]
    OutsideSlab(i64),
    #[error("edge {label} at {vertex} is not in the {direction} link")]
    NotInLink {
        vertex: CoverVertex,
        label: GammaVertex,
        direction: Direction,
    },
    #[error("relators need a vertex off level 0")]
    LevelZero,
    #[error("branch levels {0:?} not in 1..={1}")]
    BranchOutOfRange(Vec<u32>, u32),
    #[error("push-down exceeded its move bound at level {level}: {moves} > {bound}")]
    MoveBound { level: i64, moves: u64, bound: u64 },
}

/// How to pick between the two equally short ways around a link cycle.
#[derive(Clone, Debug)]
pub struct TieBreak {
    seed: u64,
    rng: Option<ChaCha8Rng>,
}

impl TieBreak {
    /// Seed 0 takes the way whose first square is canonically smaller; other
    /// seeds flip a seeded coin.
    pub fn new(seed: u64) -> TieBreak {
        TieBreak {
            seed,
            rng: (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn forward(&mut self, first_fwd: SquareCell, first_back: SquareCell) -> bool {
        match &mut self.rng {
            None => first_fwd < first_back,
            Some(rng) => rng.gen(),
        }
    }
}

impl Default for TieBreak {
    fn default() -> Self {
        TieBreak::new(0)
    }
}

/// Two adjacent levels, one of them 0, that loops are pushed into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slab {
    /// Levels {0, -1}, read through ascending corridors at the valleys.
    Lower,
    /// Levels {0, 1}, read through descending corridors at the peaks.
    Upper,
}

impl Slab {
    /// The slab whose homotopies avoid the star of `v`.
    pub fn for_vertex(v: CoverVertex) -> Slab {
        if v.level > 0 {
            Slab::Lower
        } else {
            Slab::Upper
        }
    }

    /// The nonzero level.
    pub fn side(self) -> i64 {
        match self {
            Slab::Lower => -1,
            Slab::Upper => 1,
        }
    }

    pub fn contains(self, level: i64) -> bool {
        level == 0 || level == self.side()
    }

    fn top(self) -> i64 {
        self.side().max(0)
    }

    fn bottom(self) -> i64 {
        self.side().min(0)
    }

    /// Link read at the nonzero level.
    fn reading(self) -> Direction {
        match self {
            Slab::Lower => Direction::Asc,
            Slab::Upper => Direction::Desc,
        }
    }
}

fn cell(x: GammaVertex, y: GammaVertex) -> SquareCell {
    if x.factor() == Factor::A {
        SquareCell::new(x, y)
    } else {
        SquareCell::new(y, x)
    }
}

/// Closed or open edge path in the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePath {
    pub start: CoverVertex,
    labels: Vec<u8>,
}

impl EdgePath {
    pub fn new(start: CoverVertex, labels: impl IntoIterator<Item = GammaVertex>) -> EdgePath {
        EdgePath {
            start,
            labels: labels.into_iter().map(|x| x.index() as u8).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = GammaVertex> + '_ {
        self.labels.iter().map(|&i| GammaVertex::from_index(i as usize))
    }

    /// Vertices visited, start included, end included.
    pub fn vertices(&self) -> Vec<CoverVertex> {
        let mut out = Vec::with_capacity(self.labels.len() + 1);
        let mut v = self.start;
        out.push(v);
        for x in self.labels() {
            v = v.step(x);
            out.push(v);
        }
        out
    }

    pub fn end(&self) -> CoverVertex {
        self.labels().fold(self.start, |v, x| v.step(x))
    }

    pub fn is_closed(&self) -> bool {
        self.end() == self.start
    }

    pub fn level_range(&self) -> (i64, i64) {
        let mut v = self.start;
        let (mut lo, mut hi) = (v.level, v.level);
        for x in self.labels() {
            v = v.step(x);
            lo = lo.min(v.level);
            hi = hi.max(v.level);
        }
        (lo, hi)
    }

    pub fn level_counts(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        let mut v = self.start;
        for x in self.labels() {
            *out.entry(v.level).or_insert(0) += 1;
            v = v.step(x);
        }
        out
    }

    pub fn reversed(&self) -> EdgePath {
        EdgePath {
            start: self.end(),
            labels: self.labels.iter().rev().copied().collect(),
        }
    }

    /// Drops backtracks, then, on closed paths, cyclic backtracks (moving the start).
    pub fn reduce(&mut self) {
        let closed = self.is_closed();
        let mut out: Vec<u8> = Vec::with_capacity(self.labels.len());
        for &l in &self.labels {
            if out.last() == Some(&l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        let (mut lo, mut hi) = (0, out.len());
        let mut start = self.start;
        while closed && hi - lo >= 2 && out[lo] == out[hi - 1] {
            start = start.step(GammaVertex::from_index(out[lo] as usize));
            lo += 1;
            hi -= 1;
        }
        self.start = start;
        self.labels = out[lo..hi].to_vec();
    }

    fn rotate(&mut self, k: usize) {
        let k = k % self.labels.len().max(1);
        for x in &self.labels[..k] {
            self.start = self.start.step(GammaVertex::from_index(*x as usize));
        }
        self.labels.rotate_left(k);
    }

    /// Signed traversal counts per edge of `z` (edges oriented upward).
    pub fn chain(&self, z: &Truncation) -> Result<Vec<i64>, RelatorError> {
        let mut c = vec![0i64; z.edges().len()];
        let mut v = self.start;
        for x in self.labels() {
            let e = v.edge(x);
            let i = z.edge_index(e).ok_or(RelatorError::OutsideTruncation(e.low))?;
            c[i] += if v.descends(x) { -1 } else { 1 };
            v = v.step(x);
        }
        Ok(c)
    }
}

impl fmt::Display for EdgePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for x in self.labels() {
            write!(f, " {x}")?;
        }
        Ok(())
    }
}

/// Positions `g_0 = from, …, g_j = to` along the shorter way around a link cycle.
fn corridor<'a>(
    cycle: &'a [GammaVertex],
    a: usize,
    b: usize,
    tie: &mut TieBreak,
) -> impl Iterator<Item = GammaVertex> + 'a {
    let n = cycle.len();
    let d = (b + n - a) % n;
    let forward = if 2 * d < n {
        true
    } else if 2 * d > n {
        false
    } else {
        tie.forward(
            cell(cycle[a], cycle[(a + 1) % n]),
            cell(cycle[a], cycle[(a + n - 1) % n]),
        )
    };
    let j = if forward { d } else { n - d };
    (0..=j).map(move |s| if forward { cycle[(a + s) % n] } else { cycle[(a + n - s) % n] })
}

/// The closed 36-step loop through the feet and far corners of the link squares.
pub fn initial_link_loop(z: &Truncation, v: CoverVertex, direction: Direction) -> Result<EdgePath, RelatorError> {
    let link = asc_desc_link(z, v, direction)?;
    Ok(link_loop(v, &link.cycle.vertices))
}

fn link_loop(v: CoverVertex, cycle: &[GammaVertex]) -> EdgePath {
    let n = cycle.len();
    let labels = (0..n).flat_map(|i| [cycle[(i + 1) % n], cycle[i]]);
    EdgePath::new(v.step(cycle[0]), labels)
}

/// Move counts of a push-down, by level of the vertex moved.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushStats {
    pub slab: Option<Slab>,
    pub initial_levels: BTreeMap<i64, u64>,
    pub moves: BTreeMap<i64, u64>,
    pub passes: u64,
    /// Squares crossed.
    pub squares: u64,
}

impl PushStats {
    pub fn total_moves(&self) -> u64 {
        self.moves.values().sum()
    }

    /// Every move at level m removes one vertex at m. Vertices at m come from
    /// the input, from feet of moves one level beyond (at most 8 per move),
    /// and from far corners of moves two levels beyond (at most 9).
    pub fn bound(&self, level: i64) -> u64 {
        let top = self.slab.map_or(0, Slab::top);
        let towards_slab = if level > top { 1 } else { -1 };
        let get = |m: i64| self.moves.get(&m).copied().unwrap_or(0);
        self.initial_levels.get(&level).copied().unwrap_or(0)
            + 8 * get(level + towards_slab)
            + 9 * get(level + 2 * towards_slab)
    }

    pub fn check_bound(&self) -> Result<(), RelatorError> {
        for (&level, &moves) in &self.moves {
            let bound = self.bound(level);
            if moves > bound {
                return Err(RelatorError::MoveBound { level, moves, bound });
            }
        }
        Ok(())
    }
}

/// Pushes a closed path into `slab`.
///
/// Each pass takes the current extreme level (maxima while any vertex is
/// above the slab, then minima while any is below) and replaces every visit
/// `e_in, e_out` at that level by the corridor of squares around the shorter
/// arc from `e_in` to `e_out` in the link. Backtracks are dropped between passes.
pub fn push_to_slab(
    z: &Truncation,
    tables: &LinkTables,
    path: &EdgePath,
    slab: Slab,
    tie: &mut TieBreak,
) -> Result<(EdgePath, PushStats), RelatorError> {
    if !path.is_closed() {
        return Err(RelatorError::NotClosed);
    }
    let mut cur = path.clone();
    cur.reduce();
    let mut stats = PushStats {
        slab: Some(slab),
        initial_levels: cur.level_counts(),
        ..PushStats::default()
    };
    let mut last: Option<(i64, i64)> = None;
    loop {
        let (lo, hi) = cur.level_range();
        if !z.contains_level(lo) || !z.contains_level(hi) {
            return Err(RelatorError::OutsideTruncation(if z.contains_level(lo) { hi } else { lo }));
        }
        if let Some(prev) = last {
            // Extremes move monotonically towards the slab.
            debug_assert!(hi < prev.1 || (hi <= slab.top() && lo > prev.0));
        }
        last = Some((lo, hi));
        let (target, direction) = if hi > slab.top() {
            (hi, Direction::Desc)
        } else if lo < slab.bottom() {
            (lo, Direction::Asc)
        } else {
            break;
        };
        if !z.contains_level(target + 2 * direction.delta()) {
            return Err(RelatorError::OutsideTruncation(target + 2 * direction.delta()));
        }
        let vs = cur.vertices();
        let k = vs.iter().position(|v| v.level != target).expect("levels alternate");
        cur.rotate(k);
        let mut out: Vec<u8> = Vec::with_capacity(cur.labels.len() * 2);
        let mut v = cur.start;
        let mut moves = 0u64;
        for i in 0..cur.labels.len() {
            let e_out = GammaVertex::from_index(cur.labels[i] as usize);
            if v.level == target {
                let e_in = GammaVertex::from_index(out.pop().expect("start is off target") as usize);
                let cycle = tables.cycle(v, direction);
                let a = tables.position(v, direction, e_in).ok_or(RelatorError::NotInLink {
                    vertex: v,
                    label: e_in,
                    direction,
                })?;
                let b = tables.position(v, direction, e_out).ok_or(RelatorError::NotInLink {
                    vertex: v,
                    label: e_out,
                    direction,
                })?;
                let gs: Vec<GammaVertex> = corridor(cycle, a, b, tie).collect();
                for w in gs.windows(2) {
                    out.push(w[1].index() as u8);
                    out.push(w[0].index() as u8);
                }
                stats.squares += gs.len() as u64 - 1;
                moves += 1;
            } else {
                out.push(cur.labels[i]);
            }
            v = v.step(e_out);
        }
        *stats.moves.entry(target).or_insert(0) += moves;
        stats.passes += 1;
        cur.labels = out;
        cur.reduce();
    }
    stats.check_bound()?;
    Ok((cur, stats))
}

/// Slice edges crossed by a slab path, as `(slice edge, forward)` in order,
/// starting from the first level-0 vertex.
pub fn slab_letters(
    lg: &LevelGraph,
    tables: &LinkTables,
    path: &EdgePath,
    slab: Slab,
    tie: &mut TieBreak,
) -> Result<(CoverVertex, Vec<(usize, bool)>), RelatorError> {
    let mut path = path.clone();
    if path.is_empty() {
        return Ok((path.start, Vec::new()));
    }
    if !path.is_closed() {
        return Err(RelatorError::NotClosed);
    }
    let vs = path.vertices();
    if let Some(bad) = vs.iter().find(|v| !slab.contains(v.level)) {
        return Err(RelatorError::OutsideSlab(bad.level));
    }
    if path.start.level != 0 {
        path.rotate(1);
    }
    let direction = slab.reading();
    // Slice edges run from mid_a to mid_b: from the top of the A-edge below
    // a valley, from the foot of the B-edge below a peak.
    let forward_from = match slab {
        Slab::Lower => Factor::A,
        Slab::Upper => Factor::B,
    };
    let mut out = Vec::new();
    let mut v = path.start;
    for i in 0..path.labels.len() {
        let e_out = GammaVertex::from_index(path.labels[i] as usize);
        if v.level != 0 {
            let e_in = GammaVertex::from_index(path.labels[i - 1] as usize);
            if e_in != e_out {
                let pos = |x| {
                    tables.position(v, direction, x).ok_or(RelatorError::NotInLink {
                        vertex: v,
                        label: x,
                        direction,
                    })
                };
                let gs: Vec<GammaVertex> = corridor(tables.cycle(v, direction), pos(e_in)?, pos(e_out)?, tie).collect();
                for w in gs.windows(2) {
                    let slice = lg.slice_of(cell(w[0], w[1])).expect("squares across level 0 are slice edges");
                    out.push((slice, w[0].factor() == forward_from));
                }
            }
        }
        v = v.step(e_out);
    }
    Ok((path.start, out))
}

/// Reads a slab loop as a based word: tree edges dropped, freely reduced.
pub fn slab_to_word(
    lg: &LevelGraph,
    tables: &LinkTables,
    path: &EdgePath,
    slab: Slab,
    tie: &mut TieBreak,
) -> Result<FreeWord, RelatorError> {
    let (_, letters) = slab_letters(lg, tables, path, slab, tie)?;
    Ok(FreeWord::new(
        letters
            .into_iter()
            .filter_map(|(e, fwd)| lg.generator[e].map(|g| letter(g, !fwd))),
    ))
}

/// Chain in `z` of a word, each generator read as its fundamental cycle with
/// slice edges replaced by the halves of their squares on the `slab` side.
pub fn word_chain(z: &Truncation, lg: &LevelGraph, word: &FreeWord, slab: Slab) -> Vec<i64> {
    let half = |e: usize| -> Vec<(usize, i64)> {
        let s = lg.edges[e].square;
        let ix = |e| z.edge_index(e).expect("slice square in Z_t");
        match slab {
            // mid_a down to the bottom, up to mid_b
            Slab::Lower => vec![(ix(s.bottom_corner().edge(s.cell.a)), -1), (ix(s.bottom_corner().edge(s.cell.b)), 1)],
            // mid_a up to the top, down to mid_b
            Slab::Upper => vec![(ix(s.mid_a().edge(s.cell.b)), 1), (ix(s.mid_b().edge(s.cell.a)), -1)],
        }
    };
    let tree_chain = |v: CoverVertex| -> Vec<i64> {
        let mut c = vec![0i64; z.edges().len()];
        for (e, fwd) in lg.tree_path(v) {
            for (i, x) in half(e) {
                c[i] += if fwd { x } else { -x };
            }
        }
        c
    };
    let gen_edge: BTreeMap<usize, usize> =
        lg.generator.iter().enumerate().filter_map(|(e, g)| g.map(|g| (g, e))).collect();
    let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
    for &l in word.letters() {
        *counts.entry(crate::group::word::generator_of(l)).or_insert(0) += l.signum() as i64;
    }
    let mut c = vec![0i64; z.edges().len()];
    for (g, k) in counts {
        let e = gen_edge[&g];
        let (tail, head) = (tree_chain(lg.edges[e].tail()), tree_chain(lg.edges[e].head()));
        for (i, x) in half(e) {
            c[i] += k * x;
        }
        for i in 0..c.len() {
            c[i] += k * (tail[i] - head[i]);
        }
    }
    c
}

/// Relator of `v` with the data of its construction.
#[derive(Clone, Debug)]
pub struct RelatorRecord {
    pub vertex: CoverVertex,
    pub direction: Direction,
    pub side: Slab,
    pub initial: EdgePath,
    pub slab: EdgePath,
    pub stats: PushStats,
    pub word: FreeWord,
}

/// Shared read-only data for relator extraction in `Z_t`.
pub struct RelatorContext {
    pub gamma: ModGraph,
    pub z: Truncation,
    pub lg: LevelGraph,
    pub tables: LinkTables,
}

impl RelatorContext {
    pub fn new(gamma: &ModGraph, t: u32) -> Result<RelatorContext, RelatorError> {
        let z = build_truncation(gamma, t)?;
        let lg = level_graph(&z)?;
        let tables = LinkTables::new(gamma)?;
        Ok(RelatorContext {
            gamma: gamma.clone(),
            z,
            lg,
            tables,
        })
    }

    /// Vertices carrying relators: every vertex off level 0, by level then base.
    pub fn relator_vertices(&self) -> Vec<CoverVertex> {
        self.z.vertices().iter().copied().filter(|v| v.level != 0).collect()
    }

    pub fn relator(&self, v: CoverVertex, tie: &mut TieBreak) -> Result<RelatorRecord, RelatorError> {
        let direction = match v.level {
            0 => return Err(RelatorError::LevelZero),
            l if l > 0 => Direction::Desc,
            _ => Direction::Asc,
        };
        let side = Slab::for_vertex(v);
        let initial = initial_link_loop(&self.z, v, direction)?;
        let (slab, stats) = push_to_slab(&self.z, &self.tables, &initial, side, tie)?;
        let word = slab_to_word(&self.lg, &self.tables, &slab, side, tie)?;
        Ok(RelatorRecord {
            vertex: v,
            direction,
            side,
            initial,
            slab,
            stats,
            word,
        })
    }

    /// All relators, extracted in parallel with one tie-break stream per vertex.
    pub fn all_relators(&self, seed: u64) -> Result<Vec<RelatorRecord>, RelatorError> {
        let vs = self.relator_vertices();
        std::thread::scope(|scope| {
            let handles: Vec<_> = vs
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    scope.spawn(move || {
                        let mut tie = TieBreak::new(if seed == 0 { 0 } else { seed.wrapping_add(i as u64) });
                        self.relator(v, &mut tie)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("relator thread")).collect()
        })
    }
}

/// Checks that `a - b` bounds in `z` (minus the open star of `exclude`).
pub struct H1Oracle {
    lattice: ImageLattice,
}

impl H1Oracle {
    pub fn new(z: &Truncation, exclude: Option<CoverVertex>) -> H1Oracle {
        H1Oracle {
            lattice: ImageLattice::new(&z.boundary_matrix(exclude)),
        }
    }

    pub fn same_class(&self, a: &[i64], b: &[i64]) -> bool {
        let d: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.lattice.contains(&d)
    }

    pub fn is_boundary(&self, c: &[i64]) -> bool {
        self.lattice.contains(c)
    }
}

/// A marked presentation of the `Z_t` truncation of `H_W`.
#[derive(Clone, Debug)]
pub struct BranchedPresentation {
    pub t: u32,
    pub w: Vec<u32>,
    pub seed: u64,
    pub presentation: MarkedPresentation,
    /// Cover vertex of each relator.
    pub vertices: Vec<CoverVertex>,
}

pub fn presentation(
    ctx: &RelatorContext,
    records: &[RelatorRecord],
    p: u32,
    w: &[u32],
    seed: u64,
) -> Result<BranchedPresentation, RelatorError> {
    let t = ctx.z.t();
    let mut w: Vec<u32> = w.to_vec();
    w.sort_unstable();
    w.dedup();
    let bad: Vec<u32> = w.iter().copied().filter(|&i| i == 0 || i > t).collect();
    if !bad.is_empty() {
        return Err(RelatorError::BranchOutOfRange(bad, t));
    }
    let relators = records
        .iter()
        .map(|r| {
            let branch = BranchVertex::of(r.vertex).map(|b| b.index);
            MarkedRelator {
                word: r.word.clone(),
                power: branch.is_some_and(|b| w.binary_search(&b).is_ok()),
                branch,
            }
        })
        .collect();
    Ok(BranchedPresentation {
        t,
        w,
        seed,
        presentation: MarkedPresentation {
            generator_count: ctx.lg.generator_count(),
            p,
            relators,
        },
        vertices: records.iter().map(|r| r.vertex).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexVertex;
    use crate::gamma::{build_gamma, Sign};

    fn pp(level: i64) -> CoverVertex {
        CoverVertex::new(ComplexVertex::new(Sign::Plus, Sign::Plus), level).unwrap()
    }

    #[test]
    fn backtrack_reduces_to_empty() {
        let x = GammaVertex::from_index(10);
        let mut p = EdgePath::new(pp(2), [x, x]);
        assert!(p.is_closed());
        p.reduce();
        assert!(p.is_empty());
    }

    #[test]
    fn link_loop_shape() {
        let ctx = RelatorContext::new(&build_gamma(), 3).unwrap();
        let p = initial_link_loop(&ctx.z, pp(2), Direction::Desc).unwrap();
        assert_eq!(p.len(), 36);
        assert!(p.is_closed());
        assert_eq!(p.level_range(), (0, 1));
        let link = asc_desc_link(&ctx.z, pp(2), Direction::Desc).unwrap();
        assert_eq!(link_loop(pp(2), &link.cycle.reversed().vertices), p.reversed());
    }

    #[test]
    fn level_one_loop_already_in_slab() {
        let ctx = RelatorContext::new(&build_gamma(), 1).unwrap();
        let v = CoverVertex::new(ComplexVertex::new(Sign::Plus, Sign::Minus), 1).unwrap();
        let p = initial_link_loop(&ctx.z, v, Direction::Desc).unwrap();
        let (q, stats) = push_to_slab(&ctx.z, &ctx.tables, &p, Slab::Lower, &mut TieBreak::default()).unwrap();
        assert_eq!(stats.total_moves(), 0);
        assert_eq!(q.len(), p.len());
    }

    #[test]
    fn single_square_slab_loop() {
        let ctx = RelatorContext::new(&build_gamma(), 1).unwrap();
        let lg = &ctx.lg;
        let tree = lg.edges[lg.tree[0]].square;
        let (e, g) = lg.generator.iter().enumerate().find_map(|(e, g)| g.map(|g| (e, g))).unwrap();
        let s = lg.edges[e].square;
        // Down and up across s, back across the tree square.
        let back = if tree.mid_b() == s.mid_b() { [tree.cell.b, tree.cell.a] } else { [tree.cell.a, tree.cell.b] };
        let p = EdgePath::new(s.mid_a(), [s.cell.a, s.cell.b, back[0], back[1]]);
        assert!(p.is_closed());
        let w = slab_to_word(lg, &ctx.tables, &p, Slab::Lower, &mut TieBreak::default()).unwrap();
        assert_eq!(w, FreeWord::generator(g));
        let empty = EdgePath::new(pp(0), []);
        assert!(slab_to_word(lg, &ctx.tables, &empty, Slab::Lower, &mut TieBreak::default()).unwrap().is_empty());
        assert!(matches!(
            slab_to_word(lg, &ctx.tables, &p, Slab::Upper, &mut TieBreak::default()),
            Err(RelatorError::OutsideSlab(-1))
        ));
    }

    #[test]
    fn lower_slab_collapses_level_minus_one_loop() {
        let ctx = RelatorContext::new(&build_gamma(), 1).unwrap();
        let v = CoverVertex::new(ComplexVertex::new(Sign::Minus, Sign::Plus), -1).unwrap();
        let p = initial_link_loop(&ctx.z, v, Direction::Asc).unwrap();
        let mut tie = TieBreak::default();
        let (through_v, _) = push_to_slab(&ctx.z, &ctx.tables, &p, Slab::Lower, &mut tie).unwrap();
        assert!(through_v.is_empty());
        let r = ctx.relator(v, &mut tie).unwrap();
        assert_eq!(r.side, Slab::Upper);
        assert!(!r.word.is_empty());
    }

    #[test]
    fn relators_low_levels() {
        let g = build_gamma();
        let ctx = RelatorContext::new(&g, 2).unwrap();
        let records = ctx.all_relators(0).unwrap();
        assert_eq!(records.len(), 16);
        let oracle = H1Oracle::new(&ctx.z, None);
        for r in &records {
            let (lo, hi) = r.slab.level_range();
            assert!(r.side.contains(lo) && r.side.contains(hi), "{}", r.vertex);
            assert!(!r.word.is_empty(), "{}", r.vertex);
            let before = r.initial.chain(&ctx.z).unwrap();
            let after = r.slab.chain(&ctx.z).unwrap();
            assert!(oracle.same_class(&before, &after));
            assert_eq!(after, word_chain(&ctx.z, &ctx.lg, &r.word, r.side), "{}", r.vertex);
        }
    }

    #[test]
    fn presentation_flags() {
        let ctx = RelatorContext::new(&build_gamma(), 2).unwrap();
        let records = ctx.all_relators(0).unwrap();
        let bp = presentation(&ctx, &records, 3, &[], 0).unwrap();
        assert_eq!(bp.presentation.relators.len(), 16);
        assert!(bp.presentation.relators.iter().all(|r| !r.power));
        let bp = presentation(&ctx, &records, 3, &[1], 0).unwrap();
        assert_eq!(bp.presentation.relators.iter().filter(|r| r.power).count(), 1);
        assert!(presentation(&ctx, &records, 3, &[5], 0).is_err());
    }
}
