//! Snake graphs on the unit-square lattice: perfect-matching enumeration,
//! twist sets via integer ray casting, the distributive lattice of matchings
//! with its single-twist Hasse diagram, DOT export, and the reflection
//! involution of straight palindromic snakes.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SnakeError {
    #[error("{tiles} tiles need {} gluing steps, got {steps}", tiles - 1)]
    ShapeMismatch { tiles: usize, steps: usize },
    #[error("a snake graph needs at least one tile (or use the single-edge graph)")]
    EmptyGraph,
    #[error("shape word produces overlapping tiles")]
    Overlap,
    #[error("graph has more than {0} tiles")]
    TooLarge(usize),
    #[error("graph is not a straight palindromic snake")]
    NotReflectionSymmetric,
    #[error("no boundary matching contains edge ({tile}, {side})")]
    NoBoundaryMatchingWithEdge { tile: usize, side: Side },
    #[error("reference matching is not a perfect matching of this graph")]
    MinNotAMatching,
    #[error("matching lattice validation failed: {0}")]
    LatticeInvalid(String),
}

/// Gluing direction of each successive tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Right,
    Up,
}

/// Side of a tile; the declaration order N < E < S < W fixes edge addressing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", match self {
            Side::N => "N",
            Side::E => "E",
            Side::S => "S",
            Side::W => "W",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tile {
    pub x: i64,
    pub y: i64,
    pub weight: u8,
}

#[derive(Debug, Clone, Copy)]
pub struct EdgeInfo {
    /// canonical address: the lowest-indexed tile this edge bounds
    pub tile: usize,
    pub side: Side,
    /// leftmost (horizontal) or bottom (vertical) lattice coordinates
    pub x: i64,
    pub y: i64,
    pub horizontal: bool,
    /// true when the edge is interior (glues two consecutive tiles)
    pub shared: bool,
    pub endpoints: (usize, usize),
}

/// A perfect matching, stored as its ascending list of edge ids.
pub type Matching = Vec<usize>;

const MAX_TILES: usize = 60;

#[derive(Debug, Clone)]
pub struct SnakeGraph {
    tiles: Vec<Tile>,
    shape: Vec<Step>,
    edges: Vec<EdgeInfo>,
    tile_edges: Vec<[usize; 4]>,
    vertices: Vec<(i64, i64)>,
}

impl SnakeGraph {
    pub fn new(shape: Vec<Step>, weights: Vec<u8>) -> Result<Self, SnakeError> {
        if weights.is_empty() {
            return Err(SnakeError::EmptyGraph);
        }
        if shape.len() + 1 != weights.len() {
            return Err(SnakeError::ShapeMismatch { tiles: weights.len(), steps: shape.len() });
        }
        if weights.len() > MAX_TILES {
            return Err(SnakeError::TooLarge(MAX_TILES));
        }
        let mut tiles = Vec::with_capacity(weights.len());
        let (mut x, mut y) = (0i64, 0i64);
        tiles.push(Tile { x, y, weight: weights[0] });
        for (i, step) in shape.iter().enumerate() {
            match step {
                Step::Right => x += 1,
                Step::Up => y += 1,
            }
            tiles.push(Tile { x, y, weight: weights[i + 1] });
        }
        let mut seen = HashSet::new();
        if !tiles.iter().all(|t| seen.insert((t.x, t.y))) {
            return Err(SnakeError::Overlap);
        }

        // vertices: the four corners of every tile, sorted
        let mut vset: HashSet<(i64, i64)> = HashSet::new();
        for t in &tiles {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                vset.insert((t.x + dx, t.y + dy));
            }
        }
        let mut vertices: Vec<(i64, i64)> = vset.into_iter().collect();
        vertices.sort();
        let vidx: HashMap<(i64, i64), usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        // edges in (tile, side) order, skipping the side glued to the
        // previous tile (which is already present under its canonical address)
        let mut edges = Vec::new();
        let mut addr: BTreeMap<(usize, Side), usize> = BTreeMap::new();
        for (i, t) in tiles.iter().enumerate() {
            for side in [Side::N, Side::E, Side::S, Side::W] {
                if i > 0 {
                    match shape[i - 1] {
                        Step::Right if side == Side::W => continue,
                        Step::Up if side == Side::S => continue,
                        _ => {}
                    }
                }
                let shared = i + 1 < tiles.len()
                    && matches!(
                        (shape[i], side),
                        (Step::Right, Side::E) | (Step::Up, Side::N)
                    );
                let (a, b, ex, ey, horizontal) = match side {
                    Side::N => ((t.x, t.y + 1), (t.x + 1, t.y + 1), t.x, t.y + 1, true),
                    Side::S => ((t.x, t.y), (t.x + 1, t.y), t.x, t.y, true),
                    Side::W => ((t.x, t.y), (t.x, t.y + 1), t.x, t.y, false),
                    Side::E => ((t.x + 1, t.y), (t.x + 1, t.y + 1), t.x + 1, t.y, false),
                };
                let id = edges.len();
                addr.insert((i, side), id);
                edges.push(EdgeInfo {
                    tile: i,
                    side,
                    x: ex,
                    y: ey,
                    horizontal,
                    shared,
                    endpoints: (vidx[&a], vidx[&b]),
                });
            }
        }

        let tile_edges = (0..tiles.len())
            .map(|i| {
                let lookup = |side: Side| -> usize {
                    if let Some(&id) = addr.get(&(i, side)) {
                        return id;
                    }
                    // side glued to the previous tile: resolve its canonical address
                    match (shape[i - 1], side) {
                        (Step::Right, Side::W) => addr[&(i - 1, Side::E)],
                        (Step::Up, Side::S) => addr[&(i - 1, Side::N)],
                        _ => unreachable!("only glued sides lack their own address"),
                    }
                };
                [lookup(Side::N), lookup(Side::E), lookup(Side::S), lookup(Side::W)]
            })
            .collect();

        Ok(SnakeGraph { tiles, shape, edges, tile_edges, vertices })
    }

    /// The degenerate zero-tile graph: two vertices joined by one edge. It has
    /// exactly one perfect matching and an empty twist lattice.
    pub fn single_edge() -> Self {
        SnakeGraph {
            tiles: vec![],
            shape: vec![],
            edges: vec![EdgeInfo {
                tile: 0,
                side: Side::W,
                x: 0,
                y: 0,
                horizontal: false,
                shared: false,
                endpoints: (0, 1),
            }],
            tile_edges: vec![],
            vertices: vec![(0, 0), (0, 1)],
        }
    }

    pub fn num_tiles(&self) -> usize {
        self.tiles.len()
    }

    pub fn tile(&self, i: usize) -> &Tile {
        &self.tiles[i]
    }

    pub fn face_weight(&self, i: usize) -> u8 {
        self.tiles[i].weight
    }

    pub fn shape(&self) -> &[Step] {
        &self.shape
    }

    pub fn edges(&self) -> &[EdgeInfo] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Edge ids of tile i in side order [N, E, S, W]; glued sides resolve to
    /// their canonical shared edge.
    pub fn tile_edge_ids(&self, i: usize) -> [usize; 4] {
        self.tile_edges[i]
    }

    pub fn edge_id(&self, tile: usize, side: Side) -> usize {
        self.tile_edges[tile][side as usize]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        !self.edges[e].shared
    }

    /// All perfect matchings, each as ascending edge ids, the whole list in
    /// lexicographic order.
    pub fn enumerate_matchings(&self) -> Vec<Matching> {
        let n = self.vertices.len();
        debug_assert!(n <= 128);
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.endpoints.0].push((id, e.endpoints.1));
            adj[e.endpoints.1].push((id, e.endpoints.0));
        }
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(
            v0: usize,
            covered: u128,
            adj: &[Vec<(usize, usize)>],
            current: &mut Vec<usize>,
            out: &mut Vec<Matching>,
        ) {
            let n = adj.len();
            let mut v = v0;
            while v < n && covered & (1 << v) != 0 {
                v += 1;
            }
            if v == n {
                let mut m = current.clone();
                m.sort_unstable();
                out.push(m);
                return;
            }
            for &(e, u) in &adj[v] {
                if covered & (1 << u) == 0 {
                    current.push(e);
                    rec(v + 1, covered | (1 << v) | (1 << u), adj, current, out);
                    current.pop();
                }
            }
        }
        rec(0, 0, &adj, &mut current, &mut out);
        out.sort_unstable();
        out
    }

    /// The matchings using boundary edges only; a snake graph has exactly two.
    pub fn boundary_matchings(&self) -> Vec<Matching> {
        self.enumerate_matchings()
            .into_iter()
            .filter(|m| m.iter().all(|&e| self.is_boundary_edge(e)))
            .collect()
    }

    /// The unique boundary matching containing the given edge.
    pub fn boundary_matching_containing(
        &self,
        tile: usize,
        side: Side,
    ) -> Result<Matching, SnakeError> {
        let id = self.edge_id(tile, side);
        self.boundary_matchings()
            .into_iter()
            .find(|m| m.contains(&id))
            .ok_or(SnakeError::NoBoundaryMatchingWithEdge { tile, side })
    }

    /// Twisted tiles of `p` relative to `reference`: a tile lies inside a
    /// cycle of the symmetric difference iff a downward ray from its center
    /// crosses an odd number of difference edges; horizontal edges in the
    /// tile's own column at height ≤ the tile's floor are exactly those.
    pub fn twist_mask_rel(&self, p: &Matching, reference: &Matching) -> u64 {
        assert!(self.tiles.len() <= 64);
        let pa: HashSet<usize> = p.iter().copied().collect();
        let pb: HashSet<usize> = reference.iter().copied().collect();
        let sym: Vec<&EdgeInfo> = (0..self.edges.len())
            .filter(|e| pa.contains(e) != pb.contains(e))
            .map(|e| &self.edges[e])
            .collect();
        let mut mask = 0u64;
        for (i, t) in self.tiles.iter().enumerate() {
            let crossings = sym
                .iter()
                .filter(|e| e.horizontal && e.x == t.x && e.y <= t.y)
                .count();
            if crossings % 2 == 1 {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// Swap {N,S} ↔ {W,E} on tile `t` when `p` contains one of those pairs.
    pub fn single_twist(&self, p: &Matching, t: usize) -> Option<Matching> {
        let [n, e, s, w] = self.tile_edge_ids(t);
        let has = |id: usize| p.binary_search(&id).is_ok();
        let (remove, insert) = if has(n) && has(s) {
            ([n, s], [w, e])
        } else if has(w) && has(e) {
            ([w, e], [n, s])
        } else {
            return None;
        };
        let mut m: Vec<usize> =
            p.iter().copied().filter(|id| !remove.contains(id)).collect();
        m.extend(insert);
        m.sort_unstable();
        Some(m)
    }

    /// The reflection involution of a straight snake with palindromic face
    /// weights: tile i ↦ T−1−i, sides N↔N, S↔S, E↔W.
    pub fn reflect_matching(&self, p: &Matching) -> Result<Matching, SnakeError> {
        let t = self.tiles.len();
        if self.shape.iter().any(|s| *s != Step::Right)
            || (0..t).any(|i| self.tiles[i].weight != self.tiles[t - 1 - i].weight)
        {
            return Err(SnakeError::NotReflectionSymmetric);
        }
        let mut m: Vec<usize> = p
            .iter()
            .map(|&id| {
                let e = &self.edges[id];
                let side = match e.side {
                    Side::N => Side::N,
                    Side::S => Side::S,
                    Side::E => Side::W,
                    Side::W => Side::E,
                };
                self.edge_id(t - 1 - e.tile, side)
            })
            .collect();
        m.sort_unstable();
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HasseEdge {
    pub lower: usize,
    pub upper: usize,
    pub tile: usize,
    pub label: u8,
}

/// The distributive lattice of perfect matchings under twist-set inclusion,
/// fully validated on construction: twist masks are pairwise distinct, closed
/// under union and intersection, the Hasse covers of the inclusion order are
/// exactly the single twists, and ray-cast twist sets agree with twist
/// accumulation along mutation paths from the minimum.
#[derive(Debug, Clone)]
pub struct MatchingLattice {
    matchings: Vec<Matching>,
    masks: Vec<u64>,
    min_index: usize,
    max_index: usize,
    hasse: Vec<HasseEdge>,
    rank_sizes: Vec<usize>,
    tile_weights: Vec<u8>,
}

impl MatchingLattice {
    pub fn build(graph: &SnakeGraph, min: &Matching) -> Result<Self, SnakeError> {
        let matchings = graph.enumerate_matchings();
        let min_index =
            matchings.iter().position(|m| m == min).ok_or(SnakeError::MinNotAMatching)?;
        let n = matchings.len();
        let masks: Vec<u64> =
            matchings.iter().map(|m| graph.twist_mask_rel(m, min)).collect();
        if masks[min_index] != 0 {
            return Err(SnakeError::LatticeInvalid("reference matching has twists".into()));
        }
        let index_of: HashMap<u64, usize> =
            masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        if index_of.len() != n {
            return Err(SnakeError::LatticeInvalid("twist masks are not distinct".into()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !index_of.contains_key(&(masks[i] | masks[j]))
                    || !index_of.contains_key(&(masks[i] & masks[j]))
                {
                    return Err(SnakeError::LatticeInvalid(format!(
                        "masks not closed under union/intersection at ({i},{j})"
                    )));
                }
            }
        }
        let full = masks.iter().fold(0u64, |a, &b| a | b);
        let max_index = *index_of
            .get(&full)
            .ok_or_else(|| SnakeError::LatticeInvalid("no maximum matching".into()))?;

        // single twists must connect masks differing in exactly the twisted bit
        let mut hasse = Vec::new();
        for (i, m) in matchings.iter().enumerate() {
            for t in 0..graph.num_tiles() {
                let Some(p2) = graph.single_twist(m, t) else { continue };
                let j = matchings
                    .binary_search(&p2)
                    .map_err(|_| SnakeError::LatticeInvalid("twist left the matching set".into()))?;
                if masks[j] != masks[i] ^ (1 << t) {
                    return Err(SnakeError::LatticeInvalid(format!(
                        "single twist at tile {t} is not a one-bit mask change"
                    )));
                }
                if masks[i] & (1 << t) == 0 {
                    hasse.push(HasseEdge {
                        lower: i,
                        upper: j,
                        tile: t,
                        label: graph.face_weight(t),
                    });
                }
            }
        }
        hasse.sort_by_key(|e| (e.lower, e.upper));

        // Hasse covers of the inclusion order are exactly the single twists
        let twist_pairs: HashSet<(usize, usize)> =
            hasse.iter().map(|e| (e.lower, e.upper)).collect();
        for i in 0..n {
            for j in 0..n {
                if i == j || masks[i] & masks[j] != masks[i] {
                    continue;
                }
                let is_cover = !masks.iter().any(|&m| {
                    m != masks[i] && m != masks[j] && masks[i] & m == masks[i] && m & masks[j] == m
                });
                if is_cover != twist_pairs.contains(&(i, j)) {
                    return Err(SnakeError::LatticeInvalid(format!(
                        "cover relation and single twists disagree at ({i},{j})"
                    )));
                }
            }
        }

        // twists accumulated along any breadth-first path reproduce the masks
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[min_index] = true;
        queue.push_back(min_index);
        let mut reached = 1usize;
        while let Some(i) = queue.pop_front() {
            for t in 0..graph.num_tiles() {
                if let Some(p2) = graph.single_twist(&matchings[i], t) {
                    let j = matchings.binary_search(&p2).expect("validated above");
                    if !seen[j] {
                        seen[j] = true;
                        reached += 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        if reached != n {
            return Err(SnakeError::LatticeInvalid("twist graph is disconnected".into()));
        }

        let max_rank = full.count_ones() as usize;
        let mut rank_sizes = vec![0usize; max_rank + 1];
        for &m in &masks {
            rank_sizes[m.count_ones() as usize] += 1;
        }

        Ok(MatchingLattice {
            matchings,
            masks,
            min_index,
            max_index,
            hasse,
            rank_sizes,
            tile_weights: (0..graph.num_tiles()).map(|i| graph.face_weight(i)).collect(),
        })
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn min_index(&self) -> usize {
        self.min_index
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn hasse_edges(&self) -> &[HasseEdge] {
        &self.hasse
    }

    pub fn rank_sizes(&self) -> &[usize] {
        &self.rank_sizes
    }

    fn twist_weight_label(&self, mask: u64) -> String {
        let mut ws: Vec<u8> = (0..self.tile_weights.len())
            .filter(|&t| mask & (1 << t) != 0)
            .map(|t| self.tile_weights[t])
            .collect();
        ws.sort_unstable();
        let inner: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Deterministic DOT: nodes m0, m1, … in enumeration order labeled by the
    /// multiset of twisted face weights; edges lower → upper labeled by the
    /// twisted tile's face weight.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph matching_lattice {\n");
        for (i, &mask) in self.masks.iter().enumerate() {
            out.push_str(&format!("  m{i} [label=\"{}\"];\n", self.twist_weight_label(mask)));
        }
        for e in &self.hasse {
            out.push_str(&format!("  m{} -> m{} [label=\"{}\"];\n", e.lower, e.upper, e.label));
        }
        out.push_str("}\n");
        out
    }
}

/// The worked 5-tile example snake: weights (3,1,2,3,1), one turn.
pub fn demo_graph() -> SnakeGraph {
    SnakeGraph::new(
        vec![Step::Right, Step::Right, Step::Right, Step::Up],
        vec![3, 1, 2, 3, 1],
    )
    .expect("demo shape is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight(weights: Vec<u8>) -> SnakeGraph {
        let steps = vec![Step::Right; weights.len() - 1];
        SnakeGraph::new(steps, weights).unwrap()
    }

    fn fib(k: usize) -> u64 {
        let (mut a, mut b) = (0u64, 1u64);
        for _ in 0..k {
            let c = a + b;
            a = b;
            b = c;
        }
        a
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            SnakeGraph::new(vec![], vec![1, 2]),
            Err(SnakeError::ShapeMismatch { tiles: 2, steps: 0 })
        ));
        assert!(matches!(SnakeGraph::new(vec![], vec![]), Err(SnakeError::EmptyGraph)));
    }

    #[test]
    fn edge_addressing_on_demo() {
        let g = demo_graph();
        assert_eq!(g.num_tiles(), 5);
        assert_eq!(g.edges().len(), 16);
        assert_eq!(g.num_vertices(), 12);
        // tile 1 reuses tile 0's east edge as its west edge
        assert_eq!(g.edge_id(1, Side::W), g.edge_id(0, Side::E));
        // tile 4 sits on top of tile 3
        assert_eq!(g.edge_id(4, Side::S), g.edge_id(3, Side::N));
        let shared: Vec<usize> =
            (0..g.edges().len()).filter(|&e| !g.is_boundary_edge(e)).collect();
        assert_eq!(shared.len(), 4);
    }

    #[test]
    fn matching_counts_are_fibonacci() {
        for k in 1..=25 {
            let weights: Vec<u8> = (0..k).map(|i| 1 + (i % 2) as u8).collect();
            let g = straight(weights);
            assert_eq!(g.enumerate_matchings().len() as u64, fib(k + 2), "k = {k}");
        }
    }

    #[test]
    fn single_edge_graph() {
        let g = SnakeGraph::single_edge();
        assert_eq!(g.enumerate_matchings(), vec![vec![0]]);
        assert_eq!(g.boundary_matchings().len(), 1);
    }

    #[test]
    fn demo_lattice_matches_the_worked_example() {
        let g = demo_graph();
        let ms = g.enumerate_matchings();
        assert_eq!(ms.len(), 11);
        assert!(ms.windows(2).all(|w| w[0] < w[1]), "deterministic order");

        let boundary = g.boundary_matchings();
        assert_eq!(boundary.len(), 2);
        let p_min = g.boundary_matching_containing(0, Side::W).unwrap();
        let expect_min: Vec<usize> = {
            let mut v = vec![
                g.edge_id(0, Side::W),
                g.edge_id(1, Side::S),
                g.edge_id(1, Side::N),
                g.edge_id(3, Side::S),
                g.edge_id(4, Side::W),
                g.edge_id(4, Side::E),
            ];
            v.sort_unstable();
            v
        };
        assert_eq!(p_min, expect_min);

        let lat = MatchingLattice::build(&g, &p_min).unwrap();
        assert_eq!(lat.hasse_edges().len(), 15);
        assert_eq!(lat.rank_sizes(), &[1, 2, 3, 2, 2, 1]);
        let expect_max: Vec<usize> = {
            let mut v = vec![
                g.edge_id(0, Side::S),
                g.edge_id(0, Side::N),
                g.edge_id(2, Side::S),
                g.edge_id(2, Side::N),
                g.edge_id(3, Side::E),
                g.edge_id(4, Side::N),
            ];
            v.sort_unstable();
            v
        };
        assert_eq!(lat.matchings()[lat.max_index()], expect_max);

        let mut labels: Vec<u8> = lat.hasse_edges().iter().map(|e| e.label).collect();
        labels.sort_unstable();
        assert_eq!(labels, vec![1, 1, 1, 1, 1, 1, 2, 2, 3, 3, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn demo_dot_output_shape() {
        let g = demo_graph();
        let p_min = g.boundary_matching_containing(0, Side::W).unwrap();
        let lat = MatchingLattice::build(&g, &p_min).unwrap();
        let dot = lat.to_dot();
        assert!(dot.starts_with("digraph matching_lattice {\n"));
        assert_eq!(dot.matches(" -> ").count(), 15);
        assert_eq!(dot.matches("[label=").count(), 11 + 15);
        assert!(dot.contains(&format!("m{} [label=\"{{}}\"]", lat.min_index())));
        assert!(dot.contains(&format!("m{} [label=\"{{1,1,2,3,3}}\"]", lat.max_index())));
        assert_eq!(dot, lat.to_dot(), "byte-identical on repeat");
    }

    #[test]
    fn single_tile_lattice() {
        let g = straight(vec![1]);
        let ms = g.enumerate_matchings();
        assert_eq!(ms.len(), 2);
        let p_min = g.boundary_matching_containing(0, Side::S).unwrap();
        let lat = MatchingLattice::build(&g, &p_min).unwrap();
        assert_eq!(lat.hasse_edges().len(), 1);
        assert_eq!(lat.rank_sizes(), &[1, 1]);
    }

    #[test]
    fn straight_lattices_validate() {
        for k in 1..=9 {
            let weights: Vec<u8> = (0..k).map(|i| 1 + (i % 2) as u8).collect();
            let g = straight(weights);
            let p_min = g.boundary_matching_containing(0, Side::S).unwrap();
            let lat = MatchingLattice::build(&g, &p_min).unwrap();
            assert_eq!(lat.matchings().len() as u64, fib(k + 2));
            assert_eq!(lat.masks()[lat.min_index()], 0);
        }
    }

    #[test]
    fn reflection_is_an_involution_preserving_matchings() {
        let g = straight(vec![1, 2, 1, 2, 1]);
        let ms = g.enumerate_matchings();
        for m in &ms {
            let r = g.reflect_matching(m).unwrap();
            assert!(ms.contains(&r));
            assert_eq!(g.reflect_matching(&r).unwrap(), *m);
        }
        assert!(matches!(
            demo_graph().reflect_matching(&ms[0]),
            Err(SnakeError::NotReflectionSymmetric)
        ));
        let lopsided = straight(vec![1, 2]);
        assert!(matches!(
            lopsided.reflect_matching(&vec![0, 4]),
            Err(SnakeError::NotReflectionSymmetric)
        ));
    }

    #[test]
    fn twist_masks_respect_symmetric_difference_additivity() {
        let g = demo_graph();
        let ms = g.enumerate_matchings();
        let p_min = g.boundary_matching_containing(0, Side::W).unwrap();
        for a in &ms {
            for b in &ms {
                let direct = g.twist_mask_rel(a, b);
                let via_min =
                    g.twist_mask_rel(a, &p_min) ^ g.twist_mask_rel(b, &p_min);
                assert_eq!(direct, via_min);
            }
        }
    }
}
