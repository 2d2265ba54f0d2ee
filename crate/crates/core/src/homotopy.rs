//! Homotopy tests through a tree–cotree presentation of the fundamental group.
//!
//! A BFS spanning tree of the graph and a spanning forest of the dual (over
//! non-tree edges) leave `2g + b - 1` generator edges when the surface has
//! boundary (each forest component is rooted at a perforated face), or `2g`
//! generators and one relator when it is closed. Every remaining edge gets a
//! word in the generators, and a closed walk maps to the free reduction of
//! the concatenated words.
//!
//! Surfaces with boundary have free fundamental groups, so homotopy and
//! conjugacy are decided by free and cyclic reduction. On closed surfaces
//! the sphere is trivial, the torus is abelian, and higher genus uses Dehn's
//! algorithm on the single relator, whose pieces have length one.

use std::collections::VecDeque;

use crate::curves::{Arc, Walk};
use crate::error::{Error, Result};
use crate::surface::{HalfEdge, Surface};

/// A letter is a generator index `g >= 1` or its inverse `-g`.
pub type Letter = i32;
pub type Word = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Backend {
    Free,
    Abelian,
    Dehn { rotations: Vec<Word>, half: usize },
}

/// Tree–cotree presentation of the fundamental group of a surface.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    in_tree: Vec<bool>,
    edge_word: Vec<Word>,
    rank: usize,
    relator: Word,
    backend: Backend,
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut out = free_reduce(w);
    let mut lo = 0;
    while out.len() - lo >= 2 && out[lo] == -out[out.len() - 1] {
        lo += 1;
        out.pop();
    }
    out.drain(..lo);
    out
}

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

/// Lexicographically least cyclic rotation.
pub fn least_rotation(w: &[Letter]) -> Word {
    let n = w.len();
    let best = (0..n)
        .min_by(|&a, &b| (0..n).map(|k| w[(a + k) % n]).cmp((0..n).map(|k| w[(b + k) % n])))
        .unwrap_or(0);
    (0..n).map(|k| w[(best + k) % n]).collect()
}

/// Shortest `r` with `w = r^k`.
pub fn primitive_root(w: &[Letter]) -> Word {
    let n = w.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| w[i] == w[i - p]) {
            return w[..p].to_vec();
        }
    }
    w.to_vec()
}

impl GroupPresentation {
    pub fn new(s: &Surface) -> GroupPresentation {
        let n_e = s.n_edges();
        let mut in_tree = vec![false; n_e];
        let mut seen = vec![false; s.n_vertices()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &h in s.rotation(v) {
                let w = s.head(h);
                if !seen[w] {
                    seen[w] = true;
                    in_tree[h.edge()] = true;
                    queue.push_back(w);
                }
            }
        }
        // dual forest over non-tree edges, rooted at perforated faces
        let roots = if s.has_boundary() { s.perforated_faces() } else { vec![0] };
        let n_f = s.n_faces();
        let mut visited = vec![false; n_f];
        let mut in_forest = vec![false; n_e];
        let mut parent_half: Vec<Option<HalfEdge>> = vec![None; n_f];
        let mut order = Vec::with_capacity(n_f);
        let mut queue = VecDeque::new();
        for &r in &roots {
            visited[r] = true;
            queue.push_back(r);
        }
        while let Some(f) = queue.pop_front() {
            order.push(f);
            for &h in s.face(f) {
                let e = h.edge();
                if in_tree[e] || in_forest[e] {
                    continue;
                }
                let g = s.right_face(h);
                if !visited[g] {
                    visited[g] = true;
                    in_forest[e] = true;
                    parent_half[g] = Some(h.opp());
                    queue.push_back(g);
                }
            }
        }
        let mut edge_word: Vec<Option<Word>> = vec![None; n_e];
        let mut rank = 0;
        for e in 0..n_e {
            if in_tree[e] {
                edge_word[e] = Some(Vec::new());
            } else if !in_forest[e] {
                rank += 1;
                edge_word[e] = Some(vec![rank as Letter]);
            }
        }
        let word_of = |ew: &Vec<Option<Word>>, h: HalfEdge| -> Word {
            let w = ew[h.edge()].as_ref().expect("word computed before use");
            if h.is_forward() {
                w.clone()
            } else {
                inverse(w)
            }
        };
        for &f in order.iter().rev() {
            let Some(c) = parent_half[f] else { continue };
            let bd = s.face(f);
            let j = s.face_pos(c);
            let mut rest = Vec::new();
            for k in 1..bd.len() {
                rest.extend(word_of(&edge_word, bd[(j + k) % bd.len()]));
            }
            let wc = free_reduce(&inverse(&rest));
            edge_word[c.edge()] = Some(if c.is_forward() { wc } else { inverse(&wc) });
        }
        let edge_word: Vec<Word> = edge_word.into_iter().map(|w| w.expect("all edges resolved")).collect();
        let mut gp = GroupPresentation { in_tree, edge_word, rank, relator: Vec::new(), backend: Backend::Free };
        if !s.has_boundary() {
            gp.relator = cyclic_reduce(&gp.word(s.face(roots[0])));
            gp.backend = if s.genus() <= 1 {
                Backend::Abelian
            } else {
                let inv = inverse(&gp.relator);
                let n = gp.relator.len();
                let mut rotations = Vec::with_capacity(2 * n);
                for r in [&gp.relator, &inv] {
                    for i in 0..n {
                        rotations.push((0..n).map(|k| r[(i + k) % n]).collect());
                    }
                }
                Backend::Dehn { rotations, half: n / 2 }
            };
        }
        gp
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.rank
    }
    /// Relator of a closed surface (empty when the surface has boundary).
    pub fn relator(&self) -> &[Letter] {
        &self.relator
    }
    pub fn is_free(&self) -> bool {
        self.backend == Backend::Free
    }
    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    /// Word of a half-edge.
    pub fn half_edge_word(&self, h: HalfEdge) -> Word {
        let w = &self.edge_word[h.edge()];
        if h.is_forward() {
            w.clone()
        } else {
            inverse(w)
        }
    }

    /// Freely reduced word of a walk.
    pub fn word(&self, hs: &[HalfEdge]) -> Word {
        let mut out: Word = Vec::new();
        for &h in hs {
            let w = &self.edge_word[h.edge()];
            let it: Box<dyn Iterator<Item = Letter>> =
                if h.is_forward() { Box::new(w.iter().copied()) } else { Box::new(w.iter().rev().map(|&x| -x)) };
            for x in it {
                if out.last() == Some(&-x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Whether a word represents the identity.
    pub fn is_trivial_word(&self, w: &[Letter]) -> bool {
        match &self.backend {
            Backend::Free => free_reduce(w).is_empty(),
            Backend::Abelian => self.exponent_sums(w).iter().all(|&x| x == 0),
            Backend::Dehn { rotations, half } => dehn_trivial(free_reduce(w), rotations, *half),
        }
    }

    /// Whether a closed walk is contractible.
    pub fn is_contractible(&self, hs: &[HalfEdge]) -> bool {
        self.is_trivial_word(&self.word(hs))
    }

    /// Exponent sum of each generator in a word.
    pub fn exponent_sums(&self, w: &[Letter]) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &x in w {
            v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
        }
        v
    }

    /// Homology class of a closed walk, in the basis dual to the generators.
    pub fn homology(&self, hs: &[HalfEdge]) -> Vec<i64> {
        self.exponent_sums(&self.word(hs))
    }

    /// Homology class up to sign: the lexicographically larger of `±h`.
    pub fn unoriented_homology(&self, hs: &[HalfEdge]) -> Vec<i64> {
        let h = self.homology(hs);
        let neg: Vec<i64> = h.iter().map(|x| -x).collect();
        h.max(neg)
    }

    /// Canonical key of the free homotopy class of a closed walk. Only
    /// available when the group is free.
    pub fn free_key(&self, hs: &[HalfEdge]) -> Result<Word> {
        if !self.is_free() {
            return Err(Error::Unsupported("free homotopy keys need a surface with boundary".into()));
        }
        Ok(least_rotation(&cyclic_reduce(&self.word(hs))))
    }

    /// Key identifying a class with its inverse.
    pub fn unoriented_key(&self, hs: &[HalfEdge]) -> Result<Word> {
        let k = self.free_key(hs)?;
        let inv = least_rotation(&inverse(&k));
        Ok(k.min(inv))
    }

    /// Decides whether the commutator of two words is trivial, i.e. whether
    /// they commute. Only meaningful in a free group.
    pub fn commute(&self, u: &[Letter], d: &[Letter]) -> bool {
        let mut c = u.to_vec();
        c.extend_from_slice(d);
        c.extend(inverse(u));
        c.extend(inverse(d));
        free_reduce(&c).is_empty()
    }
}

fn dehn_trivial(mut w: Word, rotations: &[Word], half: usize) -> bool {
    'outer: loop {
        if w.is_empty() {
            return true;
        }
        for i in 0..w.len() {
            for r in rotations {
                let m = w[i..].iter().zip(r.iter()).take_while(|(a, b)| a == b).count();
                if m > half {
                    let mut next = w[..i].to_vec();
                    next.extend(inverse(&r[m..]));
                    next.extend_from_slice(&w[i + m..]);
                    w = free_reduce(&next);
                    continue 'outer;
                }
            }
        }
        return false;
    }
}

/// Whether a closed walk is null-homotopic; perforated faces are holes.
pub fn is_contractible(s: &Surface, w: &Walk) -> Result<bool> {
    if !w.closed {
        return Err(Error::InvalidWalk("contractibility needs a closed walk".into()));
    }
    w.validate(s)?;
    Ok(GroupPresentation::new(s).is_contractible(&w.half_edges))
}

/// Canonical free homotopy key of a closed walk on a surface with boundary.
pub fn free_homotopy_key(s: &Surface, w: &Walk) -> Result<Word> {
    if !w.closed {
        return Err(Error::InvalidWalk("free homotopy keys need a closed walk".into()));
    }
    w.validate(s)?;
    GroupPresentation::new(s).free_key(&w.half_edges)
}

/// Whether the arc `gamma` from `x` to `y` is homotopic to `δ_xy · δ^k`,
/// given the boundary walk `delta` based at `x` and the boundary subpath
/// `delta_yx` from `y` to `x`.
pub fn is_power_of_boundary(s: &Surface, gamma: &Walk, delta: &Walk, delta_yx: &[HalfEdge]) -> Result<bool> {
    if !s.has_boundary() {
        return Err(Error::Unsupported("boundary power tests need a surface with boundary".into()));
    }
    gamma.validate(s)?;
    delta.validate(s)?;
    let x = gamma.start(s);
    let y = s.head(*gamma.half_edges.last().unwrap());
    if delta.start(s) != x || !delta.closed {
        return Err(Error::InvalidArgument("boundary walk must be closed and based at the arc start".into()));
    }
    let (a, b) = match delta_yx.first() {
        Some(&h) => (s.origin(h), s.head(*delta_yx.last().unwrap())),
        None => (y, y),
    };
    if a != y || b != x {
        return Err(Error::InvalidArgument("boundary subpath must run from the arc end to its start".into()));
    }
    let gp = GroupPresentation::new(s);
    Ok(power_test(&gp, &gamma.half_edges, &delta.half_edges, delta_yx))
}

pub(crate) fn power_test(gp: &GroupPresentation, gamma: &[HalfEdge], delta: &[HalfEdge], delta_yx: &[HalfEdge]) -> bool {
    let mut loop_hs = gamma.to_vec();
    loop_hs.extend_from_slice(delta_yx);
    gp.commute(&gp.word(&loop_hs), &gp.word(delta))
}

/// Boundary data for an arc whose two ends lie on the same face: the face
/// walk based at the start and the subpath from the end back to the start.
pub(crate) fn boundary_pieces(s: &Surface, arc: &Arc) -> (Vec<HalfEdge>, Vec<HalfEdge>) {
    let (f, i) = s.corner_occurrence(arc.start.vertex, arc.start.corner);
    let (_, j) = s.corner_occurrence(arc.end.vertex, arc.end.corner);
    let bd = s.face(f);
    let d = bd.len();
    let delta: Vec<HalfEdge> = (0..d).map(|k| bd[(i + k) % d]).collect();
    let n = (i + d - j) % d;
    let delta_yx: Vec<HalfEdge> = (0..n).map(|k| bd[(j + k) % d]).collect();
    (delta, delta_yx)
}

/// Whether an arc is essential: its ends lie on different boundary
/// components, or it is not homotopic into the boundary.
pub fn is_essential_arc(s: &Surface, arc: &Arc) -> Result<bool> {
    arc.validate(s)?;
    if arc.start.face != arc.end.face {
        return Ok(true);
    }
    let gp = GroupPresentation::new(s);
    Ok(arc_is_essential(s, &gp, arc))
}

pub(crate) fn arc_is_essential(s: &Surface, gp: &GroupPresentation, arc: &Arc) -> bool {
    if arc.start.face != arc.end.face {
        return true;
    }
    let (delta, delta_yx) = boundary_pieces(s, arc);
    !power_test(gp, &arc.walk.half_edges, &delta, &delta_yx)
}

/// Whether a closed walk is freely homotopic to a non-zero power of a
/// boundary component. The group must be free.
pub fn is_peripheral(s: &Surface, gp: &GroupPresentation, hs: &[HalfEdge]) -> bool {
    is_peripheral_to(s, gp, hs, &s.perforated_faces())
}

/// Whether a closed walk is freely homotopic to a non-zero power of the
/// boundary of one of the given perforated faces.
pub(crate) fn is_peripheral_to(s: &Surface, gp: &GroupPresentation, hs: &[HalfEdge], faces: &[usize]) -> bool {
    let w = cyclic_reduce(&gp.word(hs));
    if w.is_empty() {
        return false;
    }
    let root = least_rotation(&primitive_root(&w));
    let root_inv = least_rotation(&inverse(&root));
    faces.iter().any(|&f| {
        let b = least_rotation(&cyclic_reduce(&gp.word(s.face(f))));
        b == root || b == root_inv
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{reverse_path, ArcEnd};
    use crate::fixtures::{self, grid_column, grid_row};

    fn hs(ids: &[usize]) -> Vec<HalfEdge> {
        ids.iter().map(|&i| HalfEdge(i)).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(GroupPresentation::new(&fixtures::torus_schema()).rank(), 2);
        assert_eq!(GroupPresentation::new(&fixtures::pants()).rank(), 2);
        assert_eq!(GroupPresentation::new(&fixtures::grid_torus_perforated(3, 3)).rank(), 2);
        assert_eq!(GroupPresentation::new(&fixtures::annulus()).rank(), 1);
        let g2 = GroupPresentation::new(&fixtures::genus_two_schema([1, 1, 1, 1]));
        assert_eq!(g2.rank(), 4);
        assert_eq!(g2.relator().len(), 8);
    }

    #[test]
    fn faces_and_generators() {
        let t = fixtures::grid_torus(3, 3);
        for f in t.faces() {
            assert!(is_contractible(&t, &Walk::closed(f.clone())).unwrap());
        }
        assert!(!is_contractible(&t, &grid_row(3, 1)).unwrap());
        let q = fixtures::torus_schema();
        assert!(!is_contractible(&q, &Walk::closed(hs(&[0]))).unwrap());
        let p = fixtures::pants();
        assert!(!is_contractible(&p, &Walk::closed(hs(&[0, 3]))).unwrap());
        for f in p.faces() {
            assert!(!is_contractible(&p, &Walk::closed(f.clone())).unwrap());
        }
    }

    #[test]
    fn genus_two_dehn() {
        let s = fixtures::genus_two_schema([1, 2, 3, 4]);
        let gp = GroupPresentation::new(&s);
        assert!(gp.is_contractible(s.face(0)));
        assert!(!gp.is_contractible(&hs(&[0])));
        // a1 b1 a1^-1 b1^-1 is not contractible in genus two
        assert!(!gp.is_contractible(&hs(&[0, 2, 1, 3])));
        let mut two = s.face(0).to_vec();
        two.extend_from_slice(s.face(0));
        assert!(gp.is_contractible(&two));
        // conjugated face boundary
        let mut conj = hs(&[4]);
        conj.extend_from_slice(s.face(0));
        conj.push(HalfEdge(5));
        assert!(gp.is_contractible(&conj));
    }

    #[test]
    fn keys() {
        let t = fixtures::grid_torus_perforated(3, 3);
        let row = grid_row(3, 1);
        let shifted = row.rotated(1);
        assert_eq!(free_homotopy_key(&t, &row).unwrap(), free_homotopy_key(&t, &shifted).unwrap());
        assert_ne!(free_homotopy_key(&t, &row).unwrap(), free_homotopy_key(&t, &grid_column(3, 3, 1)).unwrap());
        let f = Walk::closed(t.face(3).to_vec());
        assert!(free_homotopy_key(&t, &f).unwrap().is_empty());
        assert!(free_homotopy_key(&fixtures::torus_schema(), &Walk::closed(hs(&[0]))).is_err());
    }

    fn pants_arc(ids: &[usize]) -> Arc {
        let p = fixtures::pants();
        let start = ArcEnd::at(&p, 0, fixtures::PANTS_AB_FACE).unwrap();
        let end = ArcEnd::at(&p, 1, fixtures::PANTS_AB_FACE).unwrap();
        Arc::new(hs(ids), start, end)
    }

    #[test]
    fn pants_arcs() {
        let p = fixtures::pants();
        assert!(!is_essential_arc(&p, &pants_arc(&[0])).unwrap());
        assert!(!is_essential_arc(&p, &pants_arc(&[2])).unwrap());
        assert!(is_essential_arc(&p, &pants_arc(&[4])).unwrap());
        assert!(!is_essential_arc(&p, &pants_arc(&[0, 3, 0])).unwrap());
        // explicit form of the power test
        let arc = pants_arc(&[4]);
        let (delta, dyx) = boundary_pieces(&p, &arc);
        assert!(!is_power_of_boundary(&p, &arc.walk, &Walk::closed(delta.clone()), &dyx).unwrap());
        let a = pants_arc(&[0]);
        assert!(is_power_of_boundary(&p, &a.walk, &Walk::closed(delta), &dyx).unwrap());
        let other = ArcEnd::at(&p, 1, 0).unwrap();
        let across = Arc::new(hs(&[0]), pants_arc(&[0]).start, other);
        assert!(is_essential_arc(&p, &across).unwrap());
    }

    #[test]
    fn power_test_invariant_under_winding() {
        let p = fixtures::pants();
        let gp = GroupPresentation::new(&p);
        for ids in [&[0usize][..], &[2], &[4], &[0, 3, 0]] {
            let arc = pants_arc(ids);
            let (delta, dyx) = boundary_pieces(&p, &arc);
            let base = power_test(&gp, &arc.walk.half_edges, &delta, &dyx);
            // boundary walk based at y
            let (_, j) = p.corner_occurrence(arc.end.vertex, arc.end.corner);
            let bd = p.face(arc.end.face);
            let at_y: Vec<HalfEdge> = (0..bd.len()).map(|k| bd[(j + k) % bd.len()]).collect();
            for k in -2i32..=2 {
                let mut g = arc.walk.half_edges.clone();
                for _ in 0..k.unsigned_abs() {
                    if k > 0 {
                        g.extend_from_slice(&at_y);
                    } else {
                        g.extend(reverse_path(&at_y));
                    }
                }
                assert_eq!(power_test(&gp, &g, &delta, &dyx), base);
            }
        }
    }

    #[test]
    fn closed_surfaces_refuse_boundary_tests() {
        let q = fixtures::torus_schema();
        let w = Walk::open(hs(&[0]));
        assert!(is_power_of_boundary(&q, &w, &Walk::closed(hs(&[0])), &[]).is_err());
    }

    #[test]
    fn peripheral() {
        let p = fixtures::pants();
        let gp = GroupPresentation::new(&p);
        assert!(is_peripheral(&p, &gp, &hs(&[0, 3])));
        assert!(is_peripheral(&p, &gp, &hs(&[0, 3, 0, 3])));
        assert!(!is_peripheral(&p, &gp, &hs(&[0, 3, 0, 3, 4, 1])));
        let t = fixtures::grid_torus_perforated(3, 3);
        let gp = GroupPresentation::new(&t);
        assert!(!is_peripheral(&t, &gp, &grid_row(3, 1).half_edges));
        assert!(is_peripheral(&t, &gp, t.face(0)));
    }

    #[test]
    fn word_helpers() {
        assert_eq!(cyclic_reduce(&[1, 2, -1]), vec![2]);
        assert_eq!(least_rotation(&[2, 1, 3]), vec![1, 3, 2]);
        assert_eq!(primitive_root(&[1, 2, 1, 2]), vec![1, 2]);
        assert_eq!(primitive_root(&[1, 2, 1]), vec![1, 2, 1]);
    }
}
