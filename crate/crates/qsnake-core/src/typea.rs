//! Linearly ordered quivers: interval arcs, their successor-closed subset
//! expansions, the two-case degree formula, and the snake graphs whose twist
//! sets realize the subset family.

use crate::qarith::QLaurent;
use crate::qseed::{exchange_graph_bfs, principal_pair, IntMatrix, QuantumSeed, SeedError};
use crate::qtorus::TorusElement;
use crate::snake::{Matching, SnakeGraph, Step};
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TypeAError {
    #[error("orientation strings use only '<' and '>', found {0:?}")]
    BadOrientation(char),
    #[error("interval [{a},{b}] does not fit in 1..={n}")]
    BadInterval { a: usize, b: usize, n: usize },
    #[error("expansion of [{a},{b}] has a non-unit coefficient")]
    NonUnitCoefficient { a: usize, b: usize },
    #[error("no boundary matching aligns the twist sets of [{a},{b}] with its subset family")]
    SnakeGateFailed { a: usize, b: usize },
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Torus(#[from] crate::qtorus::TorusError),
}

/// A path on n vertices, one arrow per edge; `right[i]` means the arrow
/// between vertices i+1 and i+2 points toward the larger one.
#[derive(Debug, Clone)]
pub struct PathQuiver {
    n: usize,
    right: Vec<bool>,
}

impl PathQuiver {
    /// Parse an orientation string over {'<', '>'}, one character per edge;
    /// the empty string is the one-vertex path.
    pub fn parse(orient: &str) -> Result<Self, TypeAError> {
        let mut right = Vec::new();
        for ch in orient.chars() {
            match ch {
                '>' => right.push(true),
                '<' => right.push(false),
                other => return Err(TypeAError::BadOrientation(other)),
            }
        }
        Ok(PathQuiver { n: right.len() + 1, right })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arrow from vertex i to vertex j (1-based, |i−j| = 1).
    pub fn has_arrow(&self, i: usize, j: usize) -> bool {
        if i + 1 == j {
            self.right[i - 1]
        } else if j + 1 == i {
            !self.right[j - 1]
        } else {
            false
        }
    }

    /// Exchange matrix with b_{ji} = 1 exactly when there is an arrow i → j
    /// (the sign pairing under which mutation reproduces the subset
    /// expansions below).
    pub fn btilde(&self) -> IntMatrix {
        let mut b = IntMatrix::zeros(self.n, self.n);
        for i in 1..=self.n {
            for j in 1..=self.n {
                if self.has_arrow(i, j) {
                    b.set(i - 1, j - 1, -1);
                    b.set(j - 1, i - 1, 1);
                }
            }
        }
        b
    }

    /// All 2^(n−1) orientation strings of the path on n vertices.
    pub fn all_orientations(n: usize) -> Vec<String> {
        let edges = n - 1;
        (0..1usize << edges)
            .map(|bits| {
                (0..edges)
                    .map(|i| if bits >> i & 1 == 1 { '>' } else { '<' })
                    .collect()
            })
            .collect()
    }
}

/// Subsets S of the interval [a,b] closed under arrows that stay inside the
/// interval, as sorted vertex lists.
pub fn successor_closed_subsets(q: &PathQuiver, a: usize, b: usize) -> Vec<Vec<usize>> {
    let len = b - a + 1;
    let mut out = Vec::new();
    'subset: for bits in 0..1u32 << len {
        let s: Vec<usize> = (0..len).filter(|i| bits >> i & 1 == 1).map(|i| a + i).collect();
        for &v in &s {
            for w in [v.wrapping_sub(1), v + 1] {
                if (a..=b).contains(&w)
                    && q.has_arrow(v, w)
                    && !s.contains(&w)
                {
                    continue 'subset;
                }
            }
        }
        out.push(s);
    }
    out
}

/// Number of maximal runs of consecutive vertices.
pub fn component_count(s: &[usize]) -> usize {
    s.iter().zip(s.iter().skip(1)).filter(|(x, y)| **y != **x + 1).count()
        + usize::from(!s.is_empty())
}

fn arrows_into(q: &PathQuiver, s: &[usize], a: usize, b: usize) -> usize {
    s.iter()
        .map(|&v| {
            [v.wrapping_sub(1), v + 1]
                .into_iter()
                .filter(|&w| (a..=b).contains(&w) && q.has_arrow(v, w))
                .count()
        })
        .sum()
}

/// The degree vector of the interval arc, frozen half zero: every vertex
/// contributes its number of arrows into the interval, minus one if the
/// vertex itself lies inside.
pub fn arc_g_vector(q: &PathQuiver, a: usize, b: usize) -> Vec<i64> {
    let n = q.n();
    let mut g = vec![0i64; 2 * n];
    for s in 1..=n {
        let out = [s.wrapping_sub(1), s + 1]
            .into_iter()
            .filter(|&j| (a..=b).contains(&j) && q.has_arrow(s, j))
            .count() as i64;
        g[s - 1] = out - i64::from((a..=b).contains(&s));
    }
    g
}

/// The interval-arc machinery over the principal quantization of a path.
pub struct TypeA {
    quiver: PathQuiver,
    seed0: QuantumSeed,
}

impl TypeA {
    pub fn new(orient: &str) -> Result<Self, TypeAError> {
        let quiver = PathQuiver::parse(orient)?;
        let seed0 = QuantumSeed::initial(quiver.btilde())?;
        Ok(TypeA { quiver, seed0 })
    }

    pub fn quiver(&self) -> &PathQuiver {
        &self.quiver
    }

    pub fn initial_seed(&self) -> &QuantumSeed {
        &self.seed0
    }

    fn check_interval(&self, a: usize, b: usize) -> Result<(), TypeAError> {
        if a == 0 || b < a || b > self.quiver.n() {
            return Err(TypeAError::BadInterval { a, b, n: self.quiver.n() });
        }
        Ok(())
    }

    /// Σ_S q^{Φ(S)/2}·M[B·χ_S] over successor-closed subsets of [a,b].
    pub fn f_polynomial(&self, a: usize, b: usize) -> Result<TorusElement, TypeAError> {
        self.check_interval(a, b)?;
        let n = self.quiver.n();
        let btilde = self.quiver.btilde();
        let terms = successor_closed_subsets(&self.quiver, a, b).into_iter().map(|s| {
            let mut chi = vec![0i64; n];
            for &v in &s {
                chi[v - 1] = 1;
            }
            let mut exp = btilde.apply(&chi);
            exp.extend_from_slice(&chi);
            (exp, QLaurent::q_half(component_count(&s) as i64))
        });
        Ok(TorusElement::from_terms(Arc::clone(self.seed0.ambient()), terms)?)
    }

    /// The arc variable F_{[a,b]}·M[g]; every coefficient must collapse to 1.
    pub fn expand_arc(&self, a: usize, b: usize) -> Result<TorusElement, TypeAError> {
        let f = self.f_polynomial(a, b)?;
        let g = TorusElement::basis(
            Arc::clone(self.seed0.ambient()),
            arc_g_vector(&self.quiver, a, b),
        )?;
        let x = f.mul(&g)?;
        if x.terms().any(|(_, c)| !c.is_one()) {
            return Err(TypeAError::NonUnitCoefficient { a, b });
        }
        Ok(x)
    }

    /// The snake graph of the interval: one tile per vertex, labeled a..b;
    /// the walk turns exactly at flow-through vertices (both arrows pointing
    /// the same way) and goes straight where the arrows alternate. The
    /// returned matching is the one whose twist sets enumerate the
    /// successor-closed family, ∅ at the matching itself.
    pub fn snake_of_arc(&self, a: usize, b: usize) -> Result<(SnakeGraph, Matching), TypeAError> {
        self.check_interval(a, b)?;
        let tiles = b - a + 1;
        let mut steps: Vec<Step> = Vec::with_capacity(tiles.saturating_sub(1));
        for k in 1..tiles {
            let prev = steps.last().copied().unwrap_or(Step::Right);
            if k == 1 {
                steps.push(Step::Right);
                continue;
            }
            let w = a + k - 1; // internal vertex shared by steps k−2 and k−1
            let straight = self.quiver.right[w - 2] != self.quiver.right[w - 1];
            steps.push(if straight {
                prev
            } else if prev == Step::Right {
                Step::Up
            } else {
                Step::Right
            });
        }
        let graph = SnakeGraph::new(steps, vec![1; tiles]).expect("valid snake shape");
        let family: BTreeSet<Vec<usize>> =
            successor_closed_subsets(&self.quiver, a, b).into_iter().collect();
        let matchings = graph.enumerate_matchings();
        for min in graph.boundary_matchings() {
            let twisted: BTreeSet<Vec<usize>> = matchings
                .iter()
                .map(|m| {
                    let mask = graph.twist_mask_rel(m, &min);
                    (0..tiles).filter(|t| mask >> t & 1 == 1).map(|t| a + t).collect()
                })
                .collect();
            if twisted == family {
                return Ok((graph, min));
            }
        }
        Err(TypeAError::SnakeGateFailed { a, b })
    }
}

fn catalan(k: usize) -> usize {
    let mut c = 1u128;
    for i in 0..k as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as usize
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The counting identity |S| − #arrows(S → [a,b]) = Φ(S) for every
/// successor-closed subset of every interval, in every orientation of the
/// n-vertex path.
pub fn verify_interval_component_identity(n: usize) -> Result<(), String> {
    for orient in PathQuiver::all_orientations(n) {
        let q = PathQuiver::parse(&orient).unwrap();
        for a in 1..=n {
            for b in a..=n {
                for s in successor_closed_subsets(&q, a, b) {
                    ensure(
                        s.len() == arrows_into(&q, &s, a, b) + component_count(&s),
                        || format!("component identity fails for {orient:?} [{a},{b}] {s:?}"),
                    )?;
                }
            }
        }
    }
    Ok(())
}

/// Per orientation: every interval expands with unit coefficients, its snake
/// twist family matches the subset family, the variable set is exactly the
/// breadth-first exchange walk's (which closes with the expected Catalan
/// number of clusters), and the count is n(n+3)/2.
pub fn verify_path_expansions(n: usize) -> Result<(), String> {
    for orient in PathQuiver::all_orientations(n) {
        let ta = TypeA::new(&orient).map_err(|e| e.to_string())?;
        let mut vars: BTreeSet<String> = ta.initial_seed().cluster()[..n]
            .iter()
            .map(|v| v.to_string())
            .collect();
        for a in 1..=n {
            for b in a..=n {
                let x = ta
                    .expand_arc(a, b)
                    .map_err(|e| format!("{orient:?}: {e}"))?;
                vars.insert(x.to_string());
                ta.snake_of_arc(a, b).map_err(|e| format!("{orient:?}: {e}"))?;
            }
        }
        ensure(vars.len() == n * (n + 3) / 2, || {
            format!("{orient:?}: expected {} variables, got {}", n * (n + 3) / 2, vars.len())
        })?;
        let clusters = catalan(n + 1);
        let walk = exchange_graph_bfs(ta.quiver().btilde(), clusters + 1)
            .map_err(|e| format!("{orient:?}: {e}"))?;
        ensure(walk.complete, || format!("{orient:?}: exchange walk did not close"))?;
        ensure(walk.num_clusters == clusters, || {
            format!("{orient:?}: {} clusters, expected {clusters}", walk.num_clusters)
        })?;
        let walked: BTreeSet<String> = walk.variables.iter().map(|v| v.to_string()).collect();
        ensure(walked == vars, || format!("{orient:?}: variable sets differ"))?;
    }
    Ok(())
}

/// Compatibility of the principal pair for every orientation of the n-path.
pub fn verify_path_compatibility(n_max: usize) -> Result<(), String> {
    for n in 1..=n_max {
        for orient in PathQuiver::all_orientations(n) {
            let q = PathQuiver::parse(&orient).unwrap();
            let (b, lambda) = principal_pair(&q.btilde()).map_err(|e| e.to_string())?;
            let bt = b.transpose();
            for i in 0..n {
                for j in 0..2 * n {
                    let got: i64 = (0..2 * n).map(|k| bt.entry(i, k) * lambda.entry(k, j)).sum();
                    let want = if i == j { 1 } else { 0 };
                    ensure(got == want, || {
                        format!("compatibility fails for {orient:?} at ({i},{j})")
                    })?;
                }
            }
        }
    }
    Ok(())
}

/// Structure reports hold along every mutation word of bounded length over
/// every orientation of the 3-vertex path.
pub fn verify_path_seed_structure(max_len: usize) -> Result<(), String> {
    fn rec(seed: &QuantumSeed, depth: usize, orient: &str) -> Result<(), String> {
        let report = seed
            .quantization_checks()
            .map_err(|e| format!("{orient:?} after {:?}: {e}", seed.history()))?;
        if !report.all_hold() {
            return Err(format!("{orient:?} after {:?}: {report:?}", seed.history()));
        }
        if depth == 0 {
            return Ok(());
        }
        for k in 1..=seed.n() {
            rec(&seed.mutate(k).map_err(|e| e.to_string())?, depth - 1, orient)?;
        }
        Ok(())
    }
    for orient in PathQuiver::all_orientations(3) {
        let ta = TypeA::new(&orient).map_err(|e| e.to_string())?;
        rec(ta.initial_seed(), max_len, &orient)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quiver_parsing_and_arrows() {
        let q = PathQuiver::parse("><").unwrap();
        assert_eq!(q.n(), 3);
        assert!(q.has_arrow(1, 2));
        assert!(!q.has_arrow(2, 3));
        assert!(q.has_arrow(3, 2));
        assert_eq!(q.btilde().row(0), vec![0, -1, 0]);
        assert_eq!(q.btilde().row(1), vec![1, 0, 1]);
        assert!(matches!(PathQuiver::parse("x"), Err(TypeAError::BadOrientation('x'))));
        assert_eq!(PathQuiver::all_orientations(4).len(), 8);
    }

    #[test]
    fn subsets_and_components() {
        // 1 → 2 → 3: successor-closed subsets of [1,3] must contain all
        // arrow-successors, so they are the suffixes plus ∅.
        let q = PathQuiver::parse(">>").unwrap();
        let subs = successor_closed_subsets(&q, 1, 3);
        assert_eq!(subs, vec![vec![], vec![3], vec![2, 3], vec![1, 2, 3]]);
        assert_eq!(component_count(&[]), 0);
        assert_eq!(component_count(&[1, 2, 4, 6, 7]), 3);
        // source in the middle: 1 ← 2 → 3
        let q = PathQuiver::parse("<>").unwrap();
        let subs = successor_closed_subsets(&q, 1, 3);
        assert_eq!(subs.len(), 5);
        assert!(subs.contains(&vec![1, 3]));
    }

    #[test]
    fn degree_vectors_match_worked_examples() {
        let q = PathQuiver::parse("").unwrap();
        assert_eq!(arc_g_vector(&q, 1, 1), vec![-1, 0]);
        let q = PathQuiver::parse(">>").unwrap();
        assert_eq!(arc_g_vector(&q, 1, 3), vec![0, 0, -1, 0, 0, 0]);
        assert_eq!(arc_g_vector(&q, 2, 2), vec![1, -1, 0, 0, 0, 0]);
    }

    #[test]
    fn one_vertex_path_expansion() {
        let ta = TypeA::new("").unwrap();
        let x = ta.expand_arc(1, 1).unwrap();
        assert_eq!(x, ta.initial_seed().mutate(1).unwrap().cluster()[0]);
        assert_eq!(x.num_terms(), 2);
    }

    #[test]
    fn component_identity_holds_on_a6() {
        verify_interval_component_identity(6).unwrap();
    }

    #[test]
    fn expansions_match_exchange_walk_small() {
        verify_path_expansions(2).unwrap();
        verify_path_expansions(3).unwrap();
    }

    #[test]
    fn snake_shapes_follow_the_turn_rule() {
        // 1 → 2 → 3 → 4 is a zigzag of turns; alternating arrows go straight
        let ta = TypeA::new(">>>").unwrap();
        let (graph, _) = ta.snake_of_arc(1, 4).unwrap();
        assert_eq!(graph.shape(), &[Step::Right, Step::Up, Step::Right]);
        let ta = TypeA::new("><").unwrap();
        let (graph, _) = ta.snake_of_arc(1, 3).unwrap();
        assert_eq!(graph.shape(), &[Step::Right, Step::Right]);
    }

    #[test]
    fn compatibility_and_structure() {
        verify_path_compatibility(5).unwrap();
        verify_path_seed_structure(3).unwrap();
    }

    #[test]
    fn interval_errors() {
        let ta = TypeA::new("<<").unwrap();
        assert!(matches!(ta.expand_arc(2, 1), Err(TypeAError::BadInterval { .. })));
        assert!(matches!(ta.expand_arc(0, 1), Err(TypeAError::BadInterval { .. })));
        assert!(matches!(ta.expand_arc(1, 4), Err(TypeAError::BadInterval { .. })));
    }
}
