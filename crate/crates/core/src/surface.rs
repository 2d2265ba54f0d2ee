//! Combinatorial surfaces given by rotation systems.
//!
//! Half-edges are numbered `0..2*n_edges`; half-edge `h` and `h ^ 1` are the
//! two orientations of edge `h / 2`. Each vertex lists its outgoing
//! half-edges in cyclic order. Faces are traced with
//! `next(h) = rot_succ(opp(h))`, which keeps the face on the left of every
//! half-edge. Going around a vertex in rotation order, one passes from the
//! left side of an outgoing half-edge to its right side.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Internal length unit: weights are scaled to integers by a common factor.
pub type Len = u128;

/// A half-edge identifier. The opposite half-edge is `id ^ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct HalfEdge(pub usize);

impl HalfEdge {
    #[inline]
    pub fn opp(self) -> HalfEdge {
        HalfEdge(self.0 ^ 1)
    }
    #[inline]
    pub fn edge(self) -> usize {
        self.0 >> 1
    }
    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }
    #[inline]
    pub fn idx(self) -> usize {
        self.0
    }
    /// The forward half-edge of edge `e`.
    #[inline]
    pub fn of_edge(e: usize) -> HalfEdge {
        HalfEdge(2 * e)
    }
}

#[derive(Debug, Clone)]
pub struct Surface {
    rot: Vec<Vec<HalfEdge>>,
    origin: Vec<usize>,
    pos: Vec<usize>,
    weights: Vec<Rational>,
    units: Vec<u64>,
    unit: Rational,
    faces: Vec<Vec<HalfEdge>>,
    face_of: Vec<usize>,
    face_pos: Vec<usize>,
    perforated: Vec<bool>,
    genus: usize,
}

impl PartialEq for Surface {
    fn eq(&self, other: &Self) -> bool {
        self.rot == other.rot && self.weights == other.weights && self.perforated == other.perforated
    }
}

impl Surface {
    /// Builds a surface from rotations, weights and the ids of perforated faces.
    pub fn build(rot: Vec<Vec<HalfEdge>>, weights: Vec<Rational>, perforated: &[usize]) -> Result<Surface> {
        let (units, unit) = scale_weights(&weights)?;
        Surface::build_scaled(rot, weights, units, unit)?.with_perforations(perforated)
    }

    /// Builds a surface whose weights are already expressed in integer units.
    pub(crate) fn build_scaled(
        rot: Vec<Vec<HalfEdge>>,
        weights: Vec<Rational>,
        units: Vec<u64>,
        unit: Rational,
    ) -> Result<Surface> {
        let n_e = weights.len();
        if n_e == 0 {
            return Err(Error::InvalidSurface("surface has no edges".into()));
        }
        if units.len() != n_e {
            return Err(Error::InvalidSurface("unit table size mismatch".into()));
        }
        for (e, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::InvalidSurface(format!("edge {e} has non-positive weight {w}")));
            }
        }
        let n_h = 2 * n_e;
        let mut origin = vec![usize::MAX; n_h];
        let mut pos = vec![0; n_h];
        for (v, r) in rot.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::InvalidSurface(format!("vertex {v} is isolated")));
            }
            for (i, &h) in r.iter().enumerate() {
                if h.0 >= n_h {
                    return Err(Error::InvalidSurface(format!("half-edge {} out of range at vertex {v}", h.0)));
                }
                if origin[h.0] != usize::MAX {
                    return Err(Error::InvalidSurface(format!("half-edge {} listed twice", h.0)));
                }
                origin[h.0] = v;
                pos[h.0] = i;
            }
        }
        if let Some(h) = origin.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidSurface(format!("half-edge {h} missing from rotations")));
        }
        // connectivity
        let n_v = rot.len();
        let mut seen = vec![false; n_v];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &h in &rot[v] {
                let w = origin[h.opp().0];
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSurface("graph is disconnected".into()));
        }
        let mut s = Surface {
            rot,
            origin,
            pos,
            weights,
            units,
            unit,
            faces: Vec::new(),
            face_of: vec![usize::MAX; n_h],
            face_pos: vec![0; n_h],
            perforated: Vec::new(),
            genus: 0,
        };
        for start in 0..n_h {
            if s.face_of[start] != usize::MAX {
                continue;
            }
            let f = s.faces.len();
            let mut walk = Vec::new();
            let mut h = HalfEdge(start);
            while s.face_of[h.0] == usize::MAX {
                s.face_of[h.0] = f;
                s.face_pos[h.0] = walk.len();
                walk.push(h);
                h = s.face_next(h);
            }
            s.faces.push(walk);
        }
        s.perforated = vec![false; s.faces.len()];
        let chi = n_v as i64 - n_e as i64 + s.faces.len() as i64;
        if chi > 2 || chi % 2 != 0 {
            return Err(Error::InvalidSurface(format!("Euler characteristic {chi} is not that of an orientable surface")));
        }
        s.genus = ((2 - chi) / 2) as usize;
        Ok(s)
    }

    /// Returns a copy with exactly the given faces perforated.
    pub fn with_perforations(mut self, faces: &[usize]) -> Result<Surface> {
        let mut p = vec![false; self.faces.len()];
        for &f in faces {
            if f >= p.len() {
                return Err(Error::InvalidSurface(format!("face {f} does not exist")));
            }
            p[f] = true;
        }
        self.perforated = p;
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.rot.len()
    }
    pub fn n_edges(&self) -> usize {
        self.weights.len()
    }
    pub fn n_half_edges(&self) -> usize {
        2 * self.weights.len()
    }
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }
    /// Complexity `n_V + n_E`.
    pub fn complexity(&self) -> usize {
        self.n_vertices() + self.n_edges()
    }
    pub fn rotation(&self, v: usize) -> &[HalfEdge] {
        &self.rot[v]
    }
    pub fn rotations(&self) -> &[Vec<HalfEdge>] {
        &self.rot
    }
    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }
    pub fn origin(&self, h: HalfEdge) -> usize {
        self.origin[h.0]
    }
    pub fn head(&self, h: HalfEdge) -> usize {
        self.origin[h.0 ^ 1]
    }
    /// Position of `h` in the rotation of its origin.
    pub fn rot_pos(&self, h: HalfEdge) -> usize {
        self.pos[h.0]
    }
    pub fn rot_succ(&self, h: HalfEdge) -> HalfEdge {
        let r = &self.rot[self.origin[h.0]];
        r[(self.pos[h.0] + 1) % r.len()]
    }
    pub fn rot_pred(&self, h: HalfEdge) -> HalfEdge {
        let r = &self.rot[self.origin[h.0]];
        r[(self.pos[h.0] + r.len() - 1) % r.len()]
    }
    /// Next half-edge along the face on the left of `h`.
    pub fn face_next(&self, h: HalfEdge) -> HalfEdge {
        self.rot_succ(h.opp())
    }
    /// The face on the left of `h`.
    pub fn face_of(&self, h: HalfEdge) -> usize {
        self.face_of[h.0]
    }
    /// The face on the right of `h`.
    pub fn right_face(&self, h: HalfEdge) -> usize {
        self.face_of[h.0 ^ 1]
    }
    /// Boundary walk of face `f`, starting at its lowest half-edge.
    pub fn face(&self, f: usize) -> &[HalfEdge] {
        &self.faces[f]
    }
    pub fn faces(&self) -> &[Vec<HalfEdge>] {
        &self.faces
    }
    /// Index of `h` in the boundary walk of the face on its left.
    pub fn face_pos(&self, h: HalfEdge) -> usize {
        self.face_pos[h.0]
    }
    /// The face and boundary-walk index of the corner following rotation
    /// position `corner` at `v`. The corner sits at the origin of the
    /// returned occurrence.
    pub fn corner_occurrence(&self, v: usize, corner: usize) -> (usize, usize) {
        let r = &self.rot[v];
        let h = r[(corner + 1) % r.len()];
        (self.face_of[h.0], self.face_pos[h.0])
    }
    /// The face in the corner following rotation position `i` at `v`,
    /// between `rot[v][i]` and `rot[v][i+1]`.
    pub fn corner_face(&self, v: usize, i: usize) -> usize {
        let r = &self.rot[v];
        self.face_of[r[(i + 1) % r.len()].0]
    }
    pub fn is_perforated(&self, f: usize) -> bool {
        self.perforated[f]
    }
    pub fn perforated_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.perforated[f]).collect()
    }
    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn n_boundaries(&self) -> usize {
        self.perforated.iter().filter(|&&p| p).count()
    }
    pub fn genus_and_boundaries(&self) -> (usize, usize) {
        (self.genus, self.n_boundaries())
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }
    pub fn has_boundary(&self) -> bool {
        self.perforated.iter().any(|&p| p)
    }
    pub fn weight(&self, e: usize) -> &Rational {
        &self.weights[e]
    }
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
    /// Weight of edge `e` in integer units.
    pub fn units(&self, e: usize) -> u64 {
        self.units[e]
    }
    /// Weight of half-edge `h` in integer units.
    #[inline]
    pub fn len_of(&self, h: HalfEdge) -> Len {
        self.units[h.0 >> 1] as Len
    }
    /// The rational value of one internal length unit.
    pub fn unit(&self) -> &Rational {
        &self.unit
    }
    /// Converts an internal length to an exact rational.
    pub fn to_rational(&self, len: Len) -> Rational {
        &self.unit * Rational::from_integer(BigInt::from(len))
    }
    /// Converts a rational length into internal units, if it is representable.
    pub fn from_rational(&self, r: &Rational) -> Option<Len> {
        let q = r / &self.unit;
        if !q.is_integer() || q.is_negative() {
            return None;
        }
        q.to_integer().to_u128()
    }
    /// Length of a sequence of half-edges, in internal units.
    pub fn path_len(&self, hs: &[HalfEdge]) -> Len {
        hs.iter().map(|&h| self.len_of(h)).sum()
    }

    /// Copy of `self` with the given perforated faces turned into plain faces.
    pub fn cap_boundaries(&self, faces: &[usize]) -> Result<Surface> {
        let mut s = self.clone();
        for &f in faces {
            if f >= s.perforated.len() || !s.perforated[f] {
                return Err(Error::InvalidArgument(format!("face {f} is not perforated")));
            }
            s.perforated[f] = false;
        }
        Ok(s)
    }

    /// The dual surface. Dual vertex `f` is face `f`; the dual of half-edge
    /// `h` keeps the id `h` and starts at the face on the right of `h`.
    pub fn dual(&self) -> DualSurface {
        let rot: Vec<Vec<HalfEdge>> = self.faces.iter().map(|f| f.iter().map(|h| h.opp()).collect()).collect();
        let surface = Surface::build_scaled(rot, self.weights.clone(), self.units.clone(), self.unit.clone())
            .expect("dual of a valid surface is valid");
        DualSurface { surface, perforated_vertices: self.perforated.clone() }
    }
}

/// The dual of a surface: perforations live on dual vertices.
#[derive(Debug, Clone)]
pub struct DualSurface {
    pub surface: Surface,
    pub perforated_vertices: Vec<bool>,
}

impl DualSurface {
    /// Dualizes back. Faces of the result are the vertices of the original
    /// surface, and its perforated faces are the perforated dual vertices.
    pub fn dual(&self) -> Surface {
        let d = &self.surface;
        let rot: Vec<Vec<HalfEdge>> = d.faces.iter().map(|f| f.iter().map(|h| h.opp()).collect()).collect();
        let mut s = Surface::build_scaled(rot, d.weights.clone(), d.units.clone(), d.unit.clone())
            .expect("dual of a valid surface is valid");
        // face ids of the result are vertex ids of `d`; a face is perforated
        // when its dual vertex is
        let mut p = vec![false; s.faces.len()];
        for f in 0..s.faces.len() {
            let h = s.faces[f][0];
            p[f] = self.perforated_vertices[d.origin(h)];
        }
        s.perforated = p;
        s
    }
}

/// Scales rational weights to integers by the lcm of their denominators.
pub(crate) fn scale_weights(weights: &[Rational]) -> Result<(Vec<u64>, Rational)> {
    let mut l = BigInt::one();
    for w in weights {
        if !w.is_positive() {
            return Err(Error::InvalidSurface(format!("non-positive weight {w}")));
        }
        l = l.lcm(w.denom());
    }
    let mut units = Vec::with_capacity(weights.len());
    for w in weights {
        let scaled = w.numer() * (&l / w.denom());
        let u = scaled
            .to_u64()
            .filter(|&u| u <= (u64::MAX >> 16))
            .ok_or_else(|| Error::InvalidSurface(format!("weight {w} is too large once scaled to integers")))?;
        units.push(u);
    }
    let unit = Rational::new(BigInt::one(), l);
    debug_assert!(!unit.is_zero());
    Ok((units, unit))
}

/// Reads back a surface from its parts; used by constructions that derive
/// new surfaces from old ones while keeping the same length unit.
pub(crate) fn surface_from_parts(
    base: &Surface,
    rot: Vec<Vec<HalfEdge>>,
    edge_origin: &[usize],
) -> Result<Surface> {
    let weights = edge_origin.iter().map(|&e| base.weights[e].clone()).collect();
    let units = edge_origin.iter().map(|&e| base.units[e]).collect();
    Surface::build_scaled(rot, weights, units, base.unit.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_invariants() {
        let q = fixtures::torus_schema();
        assert_eq!((q.n_vertices(), q.n_edges(), q.n_faces()), (1, 2, 1));
        assert_eq!(q.genus_and_boundaries(), (1, 0));
        let p = fixtures::pants();
        assert_eq!((p.n_vertices(), p.n_edges(), p.n_faces()), (2, 3, 3));
        assert_eq!(p.genus_and_boundaries(), (0, 3));
        let t = fixtures::grid_torus(3, 3);
        assert_eq!((t.n_vertices(), t.n_edges(), t.n_faces()), (9, 18, 9));
        assert_eq!(t.genus_and_boundaries(), (1, 0));
        assert_eq!(fixtures::grid_torus_perforated(3, 3).genus_and_boundaries(), (1, 1));
    }

    #[test]
    fn face_degrees_sum_to_twice_edges() {
        for s in [fixtures::torus_schema(), fixtures::pants(), fixtures::grid_torus(4, 3)] {
            let total: usize = s.faces().iter().map(|f| f.len()).sum();
            assert_eq!(total, 2 * s.n_edges());
        }
    }

    #[test]
    fn rejects_bad_rotations() {
        let one = || Rational::from_integer(1.into());
        let dup = Surface::build(vec![vec![HalfEdge(0), HalfEdge(0)]], vec![one()], &[]);
        assert!(matches!(dup, Err(Error::InvalidSurface(_))));
        let missing = Surface::build(vec![vec![HalfEdge(0)]], vec![one()], &[]);
        assert!(matches!(missing, Err(Error::InvalidSurface(_))));
        let zero = Surface::build(vec![vec![HalfEdge(0), HalfEdge(1)]], vec![Rational::zero()], &[]);
        assert!(zero.is_err());
        let disconnected = Surface::build(
            vec![vec![HalfEdge(0), HalfEdge(1)], vec![HalfEdge(2), HalfEdge(3)]],
            vec![one(), one()],
            &[],
        );
        assert!(disconnected.is_err());
        let isolated = Surface::build(vec![vec![HalfEdge(0), HalfEdge(1)], vec![]], vec![one()], &[]);
        assert!(isolated.is_err());
    }

    #[test]
    fn dual_exchanges_vertices_and_faces() {
        for s in [fixtures::torus_schema(), fixtures::pants(), fixtures::grid_torus(3, 3), fixtures::grid_torus(2, 5)] {
            let d = s.dual();
            assert_eq!(d.surface.n_vertices(), s.n_faces());
            assert_eq!(d.surface.n_faces(), s.n_vertices());
            assert_eq!(d.surface.weights(), s.weights());
            assert_eq!(d.surface.genus(), s.genus());
            let dd = d.dual();
            assert_eq!(dd.n_vertices(), s.n_vertices());
            // same half-edge ids, same rotations up to relabelling vertices
            let mut a: Vec<Vec<HalfEdge>> = s.rotations().iter().map(|r| canonical_cycle(r)).collect();
            let mut b: Vec<Vec<HalfEdge>> = dd.rotations().iter().map(|r| canonical_cycle(r)).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
            assert_eq!(dd.n_boundaries(), s.n_boundaries());
        }
    }

    #[test]
    fn dual_of_pants_is_a_perforated_triangle() {
        let d = fixtures::pants().dual();
        assert_eq!(d.surface.n_vertices(), 3);
        assert!(d.perforated_vertices.iter().all(|&p| p));
        for e in 0..3 {
            let h = HalfEdge::of_edge(e);
            assert_ne!(d.surface.origin(h), d.surface.head(h));
        }
    }

    fn canonical_cycle(r: &[HalfEdge]) -> Vec<HalfEdge> {
        let i = (0..r.len()).min_by_key(|&i| r[i]).unwrap();
        r[i..].iter().chain(r[..i].iter()).copied().collect()
    }

    #[test]
    fn corners_match_faces() {
        let s = fixtures::grid_torus(3, 4);
        for v in 0..s.n_vertices() {
            for (i, &h) in s.rotation(v).iter().enumerate() {
                // corner after h lies in the face right of h
                assert_eq!(s.corner_face(v, i), s.right_face(h));
            }
        }
    }

    #[test]
    fn rational_units_round_trip() {
        let w = vec![Rational::new(1.into(), 2.into()), Rational::new(2.into(), 3.into()), Rational::from_integer(5.into())];
        let s = Surface::build(
            vec![vec![HalfEdge(0), HalfEdge(2), HalfEdge(1), HalfEdge(3), HalfEdge(4), HalfEdge(5)]],
            w.clone(),
            &[],
        )
        .unwrap();
        for e in 0..3 {
            assert_eq!(s.to_rational(s.units(e) as Len), w[e]);
        }
        assert_eq!(s.from_rational(&w[1]), Some(s.units(1) as Len));
    }
}
