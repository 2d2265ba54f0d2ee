//! Deterministic shortest path trees, tree loops and the cut locus.
//!
//! Ties between equal-length paths are broken by comparing the sequences of
//! edge ids along the paths lexicographically, which makes every shortest
//! path tree unique for a given input encoding.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::curves::{reverse_path, Walk};
use crate::surface::{HalfEdge, Len, Surface};
use crate::Rational;

pub const INF: Len = Len::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPathTree {
    pub source: usize,
    /// Distance of each vertex in internal units.
    pub dist: Vec<Len>,
    /// Tree half-edge arriving at each vertex (`None` at the source).
    pub parent: Vec<Option<HalfEdge>>,
}

impl ShortestPathTree {
    /// Exact distance to `v`.
    pub fn distance(&self, s: &Surface, v: usize) -> Rational {
        s.to_rational(self.dist[v])
    }

    /// The tree path from the source to `v`.
    pub fn path_to(&self, s: &Surface, v: usize) -> Vec<HalfEdge> {
        let mut out = Vec::new();
        let mut x = v;
        while let Some(h) = self.parent[x] {
            out.push(h);
            x = s.origin(h);
        }
        out.reverse();
        out
    }

    /// The tree path from `v` back to the source.
    pub fn path_from(&self, s: &Surface, v: usize) -> Vec<HalfEdge> {
        reverse_path(&self.path_to(s, v))
    }

    pub fn is_tree_edge(&self, s: &Surface, e: usize) -> bool {
        let h = HalfEdge::of_edge(e);
        self.parent[s.head(h)] == Some(h) || self.parent[s.origin(h)] == Some(h.opp())
    }

    fn edge_ids_to(&self, s: &Surface, v: usize) -> Vec<usize> {
        self.path_to(s, v).iter().map(|h| h.edge()).collect()
    }

    /// Length of the tree loop through the half-edge `h`.
    pub fn loop_len(&self, s: &Surface, h: HalfEdge) -> Len {
        self.dist[s.origin(h)] + s.len_of(h) + self.dist[s.head(h)]
    }
}

/// Dijkstra from `source` with lexicographic tie-breaking on edge ids.
pub fn shortest_path_tree(s: &Surface, source: usize) -> ShortestPathTree {
    let n = s.n_vertices();
    let mut t = ShortestPathTree { source, dist: vec![INF; n], parent: vec![None; n] };
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    t.dist[source] = 0;
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] || d > t.dist[v] {
            continue;
        }
        done[v] = true;
        for &h in s.rotation(v) {
            let w = s.head(h);
            if done[w] {
                continue;
            }
            let nd = d + s.len_of(h);
            match nd.cmp(&t.dist[w]) {
                Ordering::Less => {
                    t.dist[w] = nd;
                    t.parent[w] = Some(h);
                    heap.push(Reverse((nd, w)));
                }
                Ordering::Equal => {
                    let old = t.parent[w].expect("reached vertex has a parent");
                    let mut a = t.edge_ids_to(s, v);
                    a.push(h.edge());
                    let mut b = t.edge_ids_to(s, s.origin(old));
                    b.push(old.edge());
                    if a < b {
                        t.parent[w] = Some(h);
                    }
                }
                Ordering::Greater => {}
            }
        }
    }
    t
}

/// Shortest path trees from every vertex.
pub fn all_trees(s: &Surface) -> Vec<ShortestPathTree> {
    crate::par::map_range(s.n_vertices(), |v| shortest_path_tree(s, v))
}

/// The closed walk `T(u)·uv·T(v)⁻¹` based at the tree source, for the
/// half-edge `h = uv`.
pub fn tree_loop(s: &Surface, t: &ShortestPathTree, h: HalfEdge) -> Walk {
    let mut hs = t.path_to(s, s.origin(h));
    hs.push(h);
    hs.extend(t.path_from(s, s.head(h)));
    Walk::closed(hs)
}

/// Tree loop with its common tree prefix removed: the cycle through `h`
/// formed with the two tree paths below their last common vertex. Returns
/// an empty walk for tree edges.
pub fn tree_cycle(s: &Surface, t: &ShortestPathTree, h: HalfEdge) -> Vec<HalfEdge> {
    let a = t.path_to(s, s.origin(h));
    let b = t.path_to(s, s.head(h));
    let common = a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count();
    if t.is_tree_edge(s, h.edge()) {
        return Vec::new();
    }
    let mut hs = a[common..].to_vec();
    hs.push(h);
    hs.extend(reverse_path(&b[common..]));
    hs
}

/// The cut locus of a tree with contractibility flags from leaf pruning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutLocus {
    /// Edges of the tree (their duals are not in the cut locus).
    pub in_tree: Vec<bool>,
    /// Dual edges removed by iterated pruning of non-perforated leaves.
    pub pruned: Vec<bool>,
}

impl CutLocus {
    /// Whether the tree loop of edge `e` is contractible: tree edges give
    /// backtracking loops, pruned dual edges give loops bounding a disk.
    pub fn contractible(&self, e: usize) -> bool {
        self.in_tree[e] || self.pruned[e]
    }
}

/// Prunes non-perforated leaves of the cut locus until none remain.
pub fn mark_contractible_tree_loops(s: &Surface, t: &ShortestPathTree) -> CutLocus {
    let n_e = s.n_edges();
    let in_tree: Vec<bool> = (0..n_e).map(|e| t.is_tree_edge(s, e)).collect();
    let mut pruned = vec![false; n_e];
    let mut deg = vec![0usize; s.n_faces()];
    for e in 0..n_e {
        if !in_tree[e] {
            let h = HalfEdge::of_edge(e);
            deg[s.face_of(h)] += 1;
            deg[s.right_face(h)] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..s.n_faces()).filter(|&f| deg[f] == 1 && !s.is_perforated(f)).collect();
    while let Some(f) = stack.pop() {
        if deg[f] != 1 {
            continue;
        }
        let Some(&h) = s.face(f).iter().find(|h| !in_tree[h.edge()] && !pruned[h.edge()]) else { continue };
        pruned[h.edge()] = true;
        deg[f] -= 1;
        let g = s.right_face(h);
        deg[g] -= 1;
        if deg[g] == 1 && !s.is_perforated(g) {
            stack.push(g);
        }
    }
    CutLocus { in_tree, pruned }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homotopy::GroupPresentation;

    #[test]
    fn grid_distances() {
        let t = fixtures::grid_torus(3, 3);
        for src in 0..9 {
            let tree = shortest_path_tree(&t, src);
            let mut counts = [0; 3];
            for &d in &tree.dist {
                counts[d as usize] += 1;
            }
            assert_eq!(counts, [1, 4, 4]);
        }
    }

    #[test]
    fn pants_distance() {
        let p = fixtures::pants();
        let t = shortest_path_tree(&p, 0);
        assert_eq!(t.dist[1], 1);
        assert_eq!(t.parent[1], Some(HalfEdge(0)));
    }

    #[test]
    fn schema_tree_loops() {
        let q = fixtures::torus_schema();
        let t = shortest_path_tree(&q, 0);
        assert_eq!(tree_loop(&q, &t, HalfEdge(0)).half_edges, vec![HalfEdge(0)]);
        let cl = mark_contractible_tree_loops(&q, &t);
        assert!(!cl.contractible(0) && !cl.contractible(1));
    }

    #[test]
    fn tree_edges_backtrack() {
        let t3 = fixtures::grid_torus(3, 3);
        let t = shortest_path_tree(&t3, 0);
        let gp = GroupPresentation::new(&t3);
        for e in 0..t3.n_edges() {
            if t.is_tree_edge(&t3, e) {
                let w = tree_loop(&t3, &t, HalfEdge::of_edge(e));
                assert!(crate::curves::reduce_cycle(&w.half_edges).is_empty());
                assert!(gp.is_contractible(&w.half_edges));
            }
        }
    }

    #[test]
    fn row_completion_loop() {
        let t3 = fixtures::grid_torus(3, 3);
        let t = shortest_path_tree(&t3, 0);
        // horizontal edges of row 0 are 0, 1, 2; exactly one is not in the tree
        let missing: Vec<usize> = (0..3).filter(|&e| !t.is_tree_edge(&t3, e)).collect();
        assert_eq!(missing.len(), 1);
        let w = tree_loop(&t3, &t, HalfEdge::of_edge(missing[0]));
        assert_eq!(w.units(&t3), 3);
    }

    #[test]
    fn cut_locus_agrees_with_homotopy() {
        for s in [fixtures::grid_torus(3, 3), fixtures::grid_torus_perforated(3, 4), fixtures::pants(), fixtures::annulus()] {
            let gp = GroupPresentation::new(&s);
            for src in 0..s.n_vertices() {
                let t = shortest_path_tree(&s, src);
                let cl = mark_contractible_tree_loops(&s, &t);
                for e in 0..s.n_edges() {
                    let w = tree_loop(&s, &t, HalfEdge::of_edge(e));
                    assert_eq!(cl.contractible(e), gp.is_contractible(&w.half_edges), "edge {e} from {src}");
                }
            }
        }
    }

    #[test]
    fn pants_has_no_prunable_leaves() {
        let p = fixtures::pants();
        let t = shortest_path_tree(&p, 0);
        let cl = mark_contractible_tree_loops(&p, &t);
        assert!(cl.pruned.iter().all(|&x| !x));
    }

    #[test]
    fn deterministic_parents() {
        let s = fixtures::grid_torus(5, 4);
        for v in 0..s.n_vertices() {
            assert_eq!(shortest_path_tree(&s, v), shortest_path_tree(&s, v));
        }
    }

    #[test]
    fn triangle_optimality() {
        let s = fixtures::grid_torus_weighted(4, 5, |e| 1 + (e as u64 * 7) % 4);
        for t in all_trees(&s) {
            for e in 0..s.n_edges() {
                let h = HalfEdge::of_edge(e);
                let (u, v) = (s.origin(h), s.head(h));
                assert!(t.dist[v] <= t.dist[u] + s.len_of(h));
                assert!(t.dist[u] <= t.dist[v] + s.len_of(h));
                if t.parent[v] == Some(h) {
                    assert_eq!(t.dist[v], t.dist[u] + s.len_of(h));
                }
            }
        }
    }
}
