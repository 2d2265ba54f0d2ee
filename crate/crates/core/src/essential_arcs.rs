//! Shortest essential arcs between boundary vertices.
//!
//! A single pair is handled by scanning the candidates `T_x(u)·T_y(u)⁻¹`
//! and `T_x(u)·uv·T_y(v)⁻¹` in increasing length. For all pairs on one
//! boundary, [`ArcTables`] precomputes per-vertex trees, contractibility
//! flags of tree loops through boundary edges, and boundary-power flags for
//! the loops `λ(x, uv)`, so that each query only scans the vertex and edge
//! candidates with constant-time essentiality tests.

use crate::curves::{crossings_of, reverse_path, smooth_unchecked, Arc, ArcEnd, Curve};
use crate::error::{Error, Result};
use crate::homotopy::{arc_is_essential, power_test, GroupPresentation};
use crate::par::map_range;
use crate::shortest_paths::{all_trees, mark_contractible_tree_loops, shortest_path_tree, ShortestPathTree, INF};
use crate::surface::{HalfEdge, Len, Surface};

fn check_end(s: &Surface, e: &ArcEnd) -> Result<()> {
    if e.vertex >= s.n_vertices() || e.corner >= s.degree(e.vertex) {
        return Err(Error::InvalidArgument(format!("arc end at vertex {} is out of range", e.vertex)));
    }
    if s.corner_face(e.vertex, e.corner) != e.face || !s.is_perforated(e.face) {
        return Err(Error::InvalidArgument(format!("vertex {} is not on perforated face {}", e.vertex, e.face)));
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Cand {
    Vertex(usize),
    Edge(HalfEdge),
}

/// A shortest essential arc from `x` to `y`, or `None` when every arc
/// between them is homotopic into the boundary.
pub fn shortest_essential_arc(s: &Surface, x: ArcEnd, y: ArcEnd) -> Result<Option<Arc>> {
    check_end(s, &x)?;
    check_end(s, &y)?;
    if x.vertex == y.vertex {
        return Err(Error::InvalidArgument("arc ends must be distinct vertices".into()));
    }
    let gp = GroupPresentation::new(s);
    let tx = shortest_path_tree(s, x.vertex);
    let ty = shortest_path_tree(s, y.vertex);
    Ok(essential_from_trees(s, &gp, &tx, &ty, x, y))
}

/// Convenience wrapper taking vertices and a perforated face.
pub fn shortest_essential_arc_on(s: &Surface, x: usize, y: usize, face: usize) -> Result<Option<Arc>> {
    shortest_essential_arc(s, ArcEnd::at(s, x, face)?, ArcEnd::at(s, y, face)?)
}

fn essential_from_trees(
    s: &Surface,
    gp: &GroupPresentation,
    tx: &ShortestPathTree,
    ty: &ShortestPathTree,
    x: ArcEnd,
    y: ArcEnd,
) -> Option<Arc> {
    let mut cands: Vec<(Len, Cand)> = Vec::with_capacity(s.n_vertices() + s.n_half_edges());
    for u in 0..s.n_vertices() {
        if tx.dist[u] != INF && ty.dist[u] != INF {
            cands.push((tx.dist[u] + ty.dist[u], Cand::Vertex(u)));
        }
    }
    for h in (0..s.n_half_edges()).map(HalfEdge) {
        let (u, v) = (s.origin(h), s.head(h));
        if tx.dist[u] != INF && ty.dist[v] != INF {
            cands.push((tx.dist[u] + s.len_of(h) + ty.dist[v], Cand::Edge(h)));
        }
    }
    cands.sort_unstable();
    for (_, c) in cands {
        let hs = match c {
            Cand::Vertex(u) => {
                let mut hs = tx.path_to(s, u);
                hs.extend(ty.path_from(s, u));
                hs
            }
            Cand::Edge(h) => {
                let mut hs = tx.path_to(s, s.origin(h));
                hs.push(h);
                hs.extend(ty.path_from(s, s.head(h)));
                hs
            }
        };
        if hs.is_empty() {
            continue;
        }
        let arc = Arc::new(hs, x, y);
        if arc_is_essential(s, gp, &arc) {
            return Some(arc);
        }
    }
    None
}

/// Repeatedly smooths self-crossings of an essential arc, keeping it
/// essential, until it has none. Length and edge multiset are preserved.
pub fn make_weakly_simple(s: &Surface, arc: &Arc) -> Result<Arc> {
    arc.validate(s)?;
    let gp = GroupPresentation::new(s);
    if !arc_is_essential(s, &gp, arc) {
        return Err(Error::InvalidArgument("arc is not essential".into()));
    }
    let n = arc.walk.len();
    let mut cur: Curve = arc.clone().into();
    for _ in 0..(n * n + 1) {
        let report = crossings_of(s, std::slice::from_ref(&cur))?;
        if report.crossings.is_empty() {
            break;
        }
        let mut next = None;
        for c in &report.crossings {
            let (p, q) = (c.first.1.min(c.second.1), c.first.1.max(c.second.1));
            let cand = smooth_unchecked(&cur, p, q);
            if let Curve::Arc(a) = &cand {
                if arc_is_essential(s, &gp, a) {
                    next = Some(cand);
                    break;
                }
            }
        }
        match next {
            Some(c) => cur = c,
            None => break,
        }
    }
    match cur {
        Curve::Arc(a) => Ok(a),
        Curve::Closed(_) => unreachable!("smoothing keeps arcs open"),
    }
}

/// Precomputed data answering shortest essential arc queries between any
/// two vertices of one boundary face.
pub struct ArcTables {
    face: usize,
    boundary: Vec<HalfEdge>,
    on_boundary: Vec<bool>,
    trees: Vec<ShortestPathTree>,
    c: Vec<Vec<bool>>,
    m: Vec<Vec<Option<i64>>>,
    lambda: Vec<Vec<bool>>,
    gp: GroupPresentation,
}

/// `m[j] = min { i : c[i+1], ..., c[j] all hold }` with cyclic indices,
/// or `None` where `c[j]` fails. Values may be negative, down to `j - d`.
pub fn interval_starts(c: &[bool]) -> Vec<Option<i64>> {
    let d = c.len();
    let Some(first_false) = c.iter().position(|&b| !b) else {
        return (0..d).map(|j| Some(j as i64 - d as i64)).collect();
    };
    let mut run = vec![0usize; d];
    for t in 1..=d {
        let j = (first_false + t) % d;
        run[j] = if c[j] { run[(j + d - 1) % d] + 1 } else { 0 };
    }
    (0..d).map(|j| c[j].then(|| j as i64 - run[j] as i64)).collect()
}

impl ArcTables {
    pub fn build(s: &Surface, face: usize) -> Result<ArcTables> {
        if face >= s.n_faces() || !s.is_perforated(face) {
            return Err(Error::InvalidArgument(format!("face {face} is not a perforated face")));
        }
        let boundary = s.face(face).to_vec();
        let d = boundary.len();
        if d < 2 {
            return Err(Error::InvalidArgument("boundary needs at least two vertices".into()));
        }
        let gp = GroupPresentation::new(s);
        let trees = all_trees(s);
        let mut on_boundary = vec![false; s.n_vertices()];
        for &h in &boundary {
            on_boundary[s.origin(h)] = true;
        }
        let c: Vec<Vec<bool>> = map_range(trees.len(), |u| {
            let cl = mark_contractible_tree_loops(s, &trees[u]);
            (0..d).map(|k| cl.contractible(boundary[(k + d - 1) % d].edge())).collect()
        });
        let m = c.iter().map(|cu| interval_starts(cu)).collect();
        let lambda = map_range(d, |k| {
            let x = s.origin(boundary[k]);
            let delta: Vec<HalfEdge> = (0..d).map(|t| boundary[(k + t) % d]).collect();
            (0..s.n_half_edges())
                .map(|h| {
                    let h = HalfEdge(h);
                    let (u, v) = (s.origin(h), s.head(h));
                    let mut lam = reverse_path(&trees[u].path_to(s, x));
                    lam.push(h);
                    lam.extend(trees[v].path_to(s, x));
                    power_test(&gp, &lam, &delta, &[])
                })
                .collect()
        });
        Ok(ArcTables { face, boundary, on_boundary, trees, c, m, lambda, gp })
    }

    pub fn face(&self) -> usize {
        self.face
    }
    /// Number of boundary vertex occurrences.
    pub fn d(&self) -> usize {
        self.boundary.len()
    }
    /// Vertex `z_k`.
    pub fn vertex(&self, s: &Surface, k: usize) -> usize {
        s.origin(self.boundary[k])
    }
    /// The arc end at the boundary occurrence `z_k`.
    pub fn end(&self, s: &Surface, k: usize) -> ArcEnd {
        ArcEnd::before(s, self.boundary[k])
    }
    /// Contractibility of the `T_u` tree loops through boundary edge
    /// `z_{k-1} z_k`, for `k = 0..d`.
    pub fn c(&self, u: usize) -> &[bool] {
        &self.c[u]
    }
    pub fn m(&self, u: usize) -> &[Option<i64>] {
        &self.m[u]
    }
    /// Whether `λ(z_k, h)` is homotopic to a power of the boundary.
    pub fn lambda(&self, k: usize, h: HalfEdge) -> bool {
        self.lambda[k][h.0]
    }

    /// Interval test: whether `γ(u)` between `z_i` and `z_j` (`i < j`) is
    /// homotopic into the boundary, for `u` off the boundary.
    pub fn interval_inessential(&self, u: usize, i: usize, j: usize) -> bool {
        let d = self.d() as i64;
        let m = &self.m[u];
        let direct = m[j].is_some_and(|mj| mj <= i as i64);
        let wrapped = m[i].is_some_and(|mi| mi <= j as i64 - d);
        direct || wrapped
    }

    fn gamma_vertex(&self, s: &Surface, u: usize, x: usize, y: usize) -> Vec<HalfEdge> {
        let t = &self.trees[u];
        let mut hs = reverse_path(&t.path_to(s, x));
        hs.extend(t.path_to(s, y));
        hs
    }

    fn gamma_edge(&self, s: &Surface, h: HalfEdge, x: usize, y: usize) -> Vec<HalfEdge> {
        let mut hs = reverse_path(&self.trees[s.origin(h)].path_to(s, x));
        hs.push(h);
        hs.extend(self.trees[s.head(h)].path_to(s, y));
        hs
    }

    /// Shortest essential arc between `z_i` and `z_j` without the final
    /// simplification step.
    pub fn query_raw(&self, s: &Surface, i: usize, j: usize) -> Result<Option<Arc>> {
        let d = self.d();
        if i >= j || j >= d {
            return Err(Error::InvalidArgument(format!("need 0 <= i < j < {d}, got ({i}, {j})")));
        }
        let (x, y) = (self.vertex(s, i), self.vertex(s, j));
        if x == y {
            return Err(Error::InvalidArgument("arc ends must be distinct vertices".into()));
        }
        let (ex, ey) = (self.end(s, i), self.end(s, j));
        let inessential_v = |u: usize| -> bool {
            if self.on_boundary[u] {
                let hs = self.gamma_vertex(s, u, x, y);
                hs.is_empty() || !arc_is_essential(s, &self.gp, &Arc::new(hs, ex, ey))
            } else {
                self.interval_inessential(u, i, j)
            }
        };
        let dist = |u: usize, v: usize| self.trees[u].dist[v];

        let mut best_v: Option<(Len, usize)> = None;
        for u in 0..s.n_vertices() {
            let (a, b) = (dist(u, x), dist(u, y));
            if a == INF || b == INF {
                continue;
            }
            let l = a + b;
            if best_v.is_some_and(|(bl, _)| bl <= l) {
                continue;
            }
            if !inessential_v(u) {
                best_v = Some((l, u));
            }
        }
        let mut best_e: Option<(Len, HalfEdge)> = None;
        let mut ok_u = vec![None; s.n_vertices()];
        for h in (0..s.n_half_edges()).map(HalfEdge) {
            let (u, v) = (s.origin(h), s.head(h));
            let (a, b) = (dist(u, x), dist(v, y));
            if a == INF || b == INF {
                continue;
            }
            let l = a + s.len_of(h) + b;
            if best_e.is_some_and(|(bl, _)| bl <= l) || best_v.is_some_and(|(bl, _)| bl <= l) {
                continue;
            }
            if self.lambda[j][h.0] {
                continue;
            }
            let inessential_u = *ok_u[u].get_or_insert_with(|| inessential_v(u));
            if inessential_u {
                best_e = Some((l, h));
            }
        }
        let arc = match (best_v, best_e) {
            (Some((lv, u)), Some((le, _))) if lv <= le => Some(self.gamma_vertex(s, u, x, y)),
            (Some((_, u)), None) => Some(self.gamma_vertex(s, u, x, y)),
            (_, Some((_, h))) => Some(self.gamma_edge(s, h, x, y)),
            (None, None) => None,
        };
        Ok(arc.map(|hs| Arc::new(hs, ex, ey)))
    }

    /// Shortest weakly simple essential arc between `z_i` and `z_j`.
    pub fn query(&self, s: &Surface, i: usize, j: usize) -> Result<Option<Arc>> {
        match self.query_raw(s, i, j)? {
            Some(a) => Ok(Some(make_weakly_simple(s, &a)?)),
            None => Ok(None),
        }
    }
}

/// Builds the all-pairs tables for a boundary face.
pub fn build_arc_tables(s: &Surface, face: usize) -> Result<ArcTables> {
    ArcTables::build(s, face)
}

/// Answers one all-pairs query.
pub fn query_arc(s: &Surface, t: &ArcTables, i: usize, j: usize) -> Result<Option<Arc>> {
    t.query(s, i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::self_crossing_count;
    use crate::fixtures;

    #[test]
    fn interval_examples() {
        assert_eq!(interval_starts(&[true, true, false, true]), vec![Some(-2), Some(-2), None, Some(2)]);
        assert_eq!(interval_starts(&[true; 3]), vec![Some(-3), Some(-2), Some(-1)]);
        assert_eq!(interval_starts(&[false; 3]), vec![None; 3]);
    }

    #[test]
    fn interval_agrees_with_direct_runs() {
        let pats: [&[bool]; 4] = [&[true, false, true, true, false], &[true, true, true, false], &[false, true], &[true, true, false, true, true, true]];
        for c in pats {
            let d = c.len();
            let m = interval_starts(c);
            for j in 0..d {
                for i in (j as i64 - d as i64)..=(j as i64) {
                    let all = ((i + 1)..=(j as i64)).all(|k| c[k.rem_euclid(d as i64) as usize]);
                    let by_m = i == j as i64 || m[j].is_some_and(|mj| mj <= i);
                    assert_eq!(all, by_m, "c={c:?} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn pants_arc_is_edge_c() {
        let p = fixtures::pants();
        let f = fixtures::PANTS_AB_FACE;
        let arc = shortest_essential_arc_on(&p, 0, 1, f).unwrap().unwrap();
        assert_eq!(arc.units(&p), 3);
        assert_eq!(arc.walk.half_edges, vec![HalfEdge(4)]);
    }

    #[test]
    fn annulus_has_none() {
        let a = fixtures::annulus();
        let f = (0..a.n_faces()).find(|&f| a.is_perforated(f) && a.face(f).len() == 2 && a.face(f).iter().any(|h| h.edge() == 0)).unwrap();
        assert!(shortest_essential_arc_on(&a, 0, 1, f).unwrap().is_none());
        let t = build_arc_tables(&a, f).unwrap();
        assert!(query_arc(&a, &t, 0, 1).unwrap().is_none());
    }

    #[test]
    fn distinct_boundaries_give_shortest_path() {
        let p = fixtures::pants();
        let x = ArcEnd::at(&p, 0, 0).unwrap();
        let y = ArcEnd::at(&p, 1, 2).unwrap();
        let arc = shortest_essential_arc(&p, x, y).unwrap().unwrap();
        assert_eq!(arc.units(&p), 1);
    }

    #[test]
    fn tables_agree_with_single_pair() {
        let s = fixtures::grid_torus_perforated(3, 4);
        for f in s.perforated_faces() {
            let t = build_arc_tables(&s, f).unwrap();
            for i in 0..t.d() {
                for j in (i + 1)..t.d() {
                    if t.vertex(&s, i) == t.vertex(&s, j) {
                        continue;
                    }
                    let a = query_arc(&s, &t, i, j).unwrap();
                    let b = shortest_essential_arc(&s, t.end(&s, i), t.end(&s, j)).unwrap();
                    assert_eq!(a.as_ref().map(|a| a.units(&s)), b.as_ref().map(|b| b.units(&s)), "pair {i} {j}");
                    if let Some(a) = a {
                        assert_eq!(self_crossing_count(&s, &a.into()).unwrap(), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn pants_tables() {
        let p = fixtures::pants();
        let t = build_arc_tables(&p, fixtures::PANTS_AB_FACE).unwrap();
        assert_eq!(t.d(), 2);
        let a = query_arc(&p, &t, 0, 1).unwrap().unwrap();
        assert_eq!(a.units(&p), 3);
    }

    #[test]
    fn weakly_simple_is_fixed_point() {
        let p = fixtures::pants();
        let arc = shortest_essential_arc_on(&p, 0, 1, fixtures::PANTS_AB_FACE).unwrap().unwrap();
        assert_eq!(make_weakly_simple(&p, &arc).unwrap(), arc);
    }
}
