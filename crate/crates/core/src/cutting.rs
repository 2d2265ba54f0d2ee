//! Cutting a surface along a perturbed family of curves, and capping.
//!
//! Every edge carrying `k` strands splits into `k + 1` parallel segments.
//! Around each vertex the strands' passes are chords of a small disk, and
//! the disk falls apart into cells; two boundary segments belong to the
//! same cell exactly when no chord separates them. Each cell that touches a
//! segment becomes a vertex of the cut surface, with rotation given by its
//! segments in circular order. Gaps between consecutive segments of a cell
//! are either an original face corner or a stretch along the curves; faces
//! of the cut surface that run along the curves become new perforations.

use std::collections::HashMap;

use crate::curves::{chords_cross, Curve, Occ, Perturbation, Slot};
use crate::error::{Error, Result};
use crate::surface::{surface_from_parts, HalfEdge, Surface};

/// Where a face of a piece comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceOrigin {
    /// An unchanged face of the original surface.
    Original(usize),
    /// A new boundary running along the cut curves.
    Cut,
}

/// A connected component of the cut surface with its correspondence maps.
#[derive(Debug, Clone)]
pub struct Piece {
    pub surface: Surface,
    /// Original vertex of each piece vertex.
    pub vertex_origin: Vec<usize>,
    /// Original edge of each piece edge. Half-edge `2i` of the piece runs
    /// parallel to half-edge `2 * edge_origin[i]`.
    pub edge_origin: Vec<usize>,
    /// Index of the segment among the parallel copies of the original edge,
    /// counted from the left of its forward half-edge.
    pub edge_segment: Vec<usize>,
    pub face_origin: Vec<FaceOrigin>,
}

impl Piece {
    /// The original half-edge of a piece half-edge.
    pub fn original_half_edge(&self, h: HalfEdge) -> HalfEdge {
        HalfEdge(2 * self.edge_origin[h.edge()] + (h.0 & 1))
    }
    /// Maps a walk of the piece to the original surface.
    pub fn to_original(&self, hs: &[HalfEdge]) -> Vec<HalfEdge> {
        hs.iter().map(|&h| self.original_half_edge(h)).collect()
    }
    /// Faces created by the cut.
    pub fn cut_faces(&self) -> Vec<usize> {
        (0..self.face_origin.len()).filter(|&f| self.face_origin[f] == FaceOrigin::Cut).collect()
    }
    /// The piece with every cut face capped by a disk.
    pub fn capped(&self) -> Surface {
        self.surface.cap_boundaries(&self.cut_faces()).expect("cut faces are perforated")
    }
}

/// A corner of a piece: the gap after rotation position `gap` at `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PieceCorner {
    pub piece: usize,
    pub vertex: usize,
    pub gap: usize,
}

/// Cells on both sides of a portion of a pass between crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChordSides {
    pub left: Option<PieceCorner>,
    pub right: Option<PieceCorner>,
}

#[derive(Debug, Clone)]
pub struct CutResult {
    pub pieces: Vec<Piece>,
    order: Vec<Vec<Occ>>,
    offset: Vec<usize>,
    seg_loc: Vec<(usize, usize)>,
    /// Per curve and pass, the sides of each chord portion from the
    /// incoming end to the outgoing end.
    sides: Vec<Vec<Vec<ChordSides>>>,
}

impl CutResult {
    /// Number of strands on original edge `e`.
    pub fn n_strands(&self, e: usize) -> usize {
        self.order[e].len()
    }
    /// Strand order on edge `e` (left to right along its forward half-edge).
    pub fn order(&self, e: usize) -> &[Occ] {
        &self.order[e]
    }
    /// Piece and piece edge of segment `j` of original edge `e`.
    pub fn segment_location(&self, e: usize, j: usize) -> (usize, usize) {
        self.seg_loc[self.offset[e] + j]
    }
    /// Number of passes of a curve.
    pub fn n_passes(&self, curve: usize) -> usize {
        self.sides[curve].len()
    }
    /// Sides of every portion of a pass, from its incoming end.
    pub fn pass_sides(&self, curve: usize, pass: usize) -> &[ChordSides] {
        &self.sides[curve][pass]
    }
    /// Cut faces touched by a curve, as `(piece, face)` pairs on its left
    /// and right.
    pub fn copy_faces(&self, curve: usize) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for pass in &self.sides[curve] {
            for cs in pass {
                for (side, out) in [(cs.left, &mut l), (cs.right, &mut r)] {
                    if let Some(c) = side {
                        let f = self.corner_face(c);
                        if !out.contains(&(c.piece, f)) {
                            out.push((c.piece, f));
                        }
                    }
                }
            }
        }
        (l, r)
    }
    /// Face of a piece corner.
    pub fn corner_face(&self, c: PieceCorner) -> usize {
        self.pieces[c.piece].surface.corner_face(c.vertex, c.gap)
    }
    /// Number of components.
    pub fn n_pieces(&self) -> usize {
        self.pieces.len()
    }

    /// Maps a piece half-edge to the corresponding half-edge of a coarser
    /// cut along the curves flagged in `keep`.
    pub fn coarsen(&self, coarse: &CutResult, keep: &[bool], piece: usize, h: HalfEdge) -> (usize, HalfEdge) {
        let p = &self.pieces[piece];
        let e = p.edge_origin[h.edge()];
        let j = p.edge_segment[h.edge()];
        let j2 = self.order[e][..j].iter().filter(|o| keep[o.curve]).count();
        let (cp, ce) = coarse.segment_location(e, j2);
        (cp, HalfEdge(2 * ce + (h.0 & 1)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Seg(usize),
    Point,
    Corner(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gap {
    Corner(usize),
    Cut,
}

struct Region {
    items: Vec<usize>,
    half_edges: Vec<usize>,
    gaps: Vec<Gap>,
}

fn between(a: usize, x: usize, b: usize) -> bool {
    if a < b {
        a < x && x < b
    } else {
        x > a || x < b
    }
}

/// Cuts along all curves of a perturbation.
pub fn cut_along(s: &Surface, p: &Perturbation) -> Result<CutResult> {
    if p.curves().is_empty() {
        return Err(Error::InvalidArgument("cannot cut along an empty curve set".into()));
    }
    let n_e = s.n_edges();
    let mut offset = vec![0; n_e + 1];
    for e in 0..n_e {
        offset[e + 1] = offset[e] + p.n_strands(e) + 1;
    }
    let n_seg = offset[n_e];
    let seg_half = |h: HalfEdge, jh: usize| -> usize {
        let e = h.edge();
        let k = p.n_strands(e);
        if h.is_forward() {
            2 * (offset[e] + jh)
        } else {
            2 * (offset[e] + k - jh) + 1
        }
    };

    let mut passes_at: Vec<Vec<usize>> = vec![Vec::new(); s.n_vertices()];
    let passes = p.passes(s);
    for (i, ps) in passes.iter().enumerate() {
        passes_at[ps.vertex].push(i);
    }

    let mut regions: Vec<Region> = Vec::new();
    let mut region_vertex: Vec<usize> = Vec::new();
    let mut origin_region = vec![usize::MAX; 2 * n_seg];
    let mut sides: Vec<Vec<Vec<ChordSides>>> = p.curves().iter().map(|c| vec![Vec::new(); c.n_passes()]).collect();
    // pending side lookups: (curve, pass, portion, is_left, region, point item)
    let mut side_requests: Vec<(usize, usize, usize, bool, Option<usize>, usize)> = Vec::new();

    for v in 0..s.n_vertices() {
        let mut items = Vec::new();
        let mut block = Vec::with_capacity(s.degree(v));
        for (r, &h) in s.rotation(v).iter().enumerate() {
            block.push(items.len());
            let k = p.n_strands(h.edge());
            for jh in 0..=k {
                items.push(Item::Seg(seg_half(h, jh)));
                if jh < k {
                    items.push(Item::Point);
                }
            }
            items.push(Item::Corner(r));
        }
        let slot_idx = |slot: Slot| -> usize {
            match slot {
                Slot::Strand { half_edge, rank } => block[s.rot_pos(half_edge)] + 2 * rank + 1,
                Slot::Corner(r) => block[r] + 2 * p.n_strands(s.rotation(v)[r].edge()) + 1,
            }
        };
        let chords: Vec<(usize, usize)> =
            passes_at[v].iter().map(|&i| (slot_idx(passes[i].incoming), slot_idx(passes[i].outgoing))).collect();
        let mut corner_used = vec![false; items.len()];
        for &(a, b) in &chords {
            corner_used[a] = true;
            corner_used[b] = true;
        }
        let mut by_sig: HashMap<Vec<bool>, usize> = HashMap::new();
        let first_region = regions.len();
        for (idx, it) in items.iter().enumerate() {
            if let Item::Seg(gh) = *it {
                let sig: Vec<bool> = chords.iter().map(|&(a, b)| between(a, idx, b)).collect();
                let rid = *by_sig.entry(sig).or_insert_with(|| {
                    regions.push(Region { items: Vec::new(), half_edges: Vec::new(), gaps: Vec::new() });
                    region_vertex.push(v);
                    regions.len() - 1
                });
                origin_region[gh] = rid;
                regions[rid].items.push(idx);
                regions[rid].half_edges.push(gh);
            }
        }
        let n_items = items.len();
        for reg in &mut regions[first_region..] {
            let m = reg.items.len();
            for t in 0..m {
                let a = reg.items[t];
                let b = reg.items[(t + 1) % m];
                let stretch_len = (b + n_items - a - 1) % n_items;
                let mid = (a + 1) % n_items;
                let gap = match items[mid] {
                    Item::Corner(r) if stretch_len == 1 && !corner_used[mid] => Gap::Corner(s.corner_face(v, r)),
                    _ if m == 1 && n_items == 2 => match items[mid] {
                        Item::Corner(r) if !corner_used[mid] => Gap::Corner(s.corner_face(v, r)),
                        _ => Gap::Cut,
                    },
                    _ => Gap::Cut,
                };
                reg.gaps.push(gap);
            }
        }
        // sides of chord portions
        for (ci, &pi) in passes_at[v].iter().enumerate() {
            let (a, b) = chords[ci];
            let ps = passes[pi];
            let mut crossing: Vec<(usize, usize, usize)> = Vec::new();
            for (cj, &(c, d)) in chords.iter().enumerate() {
                if cj != ci && chords_cross((0, a), (0, b), (0, c), (0, d)) {
                    let (on_left, on_right) = if between(a, c, b) { (c, d) } else { (d, c) };
                    crossing.push(((on_left + n_items - a) % n_items, cj, on_right));
                }
            }
            crossing.sort_unstable();
            let reference = |cj: usize| -> usize {
                let (c, d) = chords[cj];
                if a != c && a != d {
                    a
                } else {
                    b
                }
            };
            for t in 0..=crossing.len() {
                for is_left in [true, false] {
                    let sig: Vec<bool> = (0..chords.len())
                        .map(|cj| {
                            let (c, d) = chords[cj];
                            if cj == ci {
                                return is_left;
                            }
                            if let Some(k) = crossing.iter().position(|x| x.1 == cj) {
                                let a_side = between(c, a, d);
                                return if k < t { !a_side } else { a_side };
                            }
                            between(c, reference(cj), d)
                        })
                        .collect();
                    let point = if t == 0 {
                        a
                    } else {
                        let (off, cj, on_right) = crossing[t - 1];
                        let _ = cj;
                        if is_left {
                            (a + off) % n_items
                        } else {
                            on_right
                        }
                    };
                    side_requests.push((ps.curve, ps.index, t, is_left, by_sig.get(&sig).copied(), point));
                }
            }
        }
    }

    // components
    let n_r = regions.len();
    let mut uf: Vec<usize> = (0..n_r).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        let mut y = x;
        while uf[y] != r {
            let n = uf[y];
            uf[y] = r;
            y = n;
        }
        r
    }
    for g in 0..n_seg {
        let (a, b) = (origin_region[2 * g], origin_region[2 * g + 1]);
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra != rb {
            uf[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut comp_of_root: HashMap<usize, usize> = HashMap::new();
    let mut comp_regions: Vec<Vec<usize>> = Vec::new();
    for r in 0..n_r {
        let root = find(&mut uf, r);
        let c = *comp_of_root.entry(root).or_insert_with(|| {
            comp_regions.push(Vec::new());
            comp_regions.len() - 1
        });
        comp_regions[c].push(r);
    }
    let mut comp_segs: Vec<Vec<usize>> = vec![Vec::new(); comp_regions.len()];
    let mut region_comp = vec![0; n_r];
    let mut region_local = vec![0; n_r];
    for (c, rs) in comp_regions.iter().enumerate() {
        for (i, &r) in rs.iter().enumerate() {
            region_comp[r] = c;
            region_local[r] = i;
        }
    }
    for g in 0..n_seg {
        comp_segs[region_comp[origin_region[2 * g]]].push(g);
    }
    let mut seg_origin = vec![(0usize, 0usize); n_seg];
    for e in 0..n_e {
        for j in 0..=p.n_strands(e) {
            seg_origin[offset[e] + j] = (e, j);
        }
    }

    let mut seg_loc = vec![(0, 0); n_seg];
    let mut pieces = Vec::with_capacity(comp_regions.len());
    for (c, rs) in comp_regions.iter().enumerate() {
        let segs = &comp_segs[c];
        let mut local_edge = HashMap::with_capacity(segs.len());
        for (i, &g) in segs.iter().enumerate() {
            local_edge.insert(g, i);
            seg_loc[g] = (c, i);
        }
        let rot: Vec<Vec<HalfEdge>> = rs
            .iter()
            .map(|&r| regions[r].half_edges.iter().map(|&gh| HalfEdge(2 * local_edge[&(gh / 2)] + (gh & 1))).collect())
            .collect();
        let edge_origin: Vec<usize> = segs.iter().map(|&g| seg_origin[g].0).collect();
        let edge_segment: Vec<usize> = segs.iter().map(|&g| seg_origin[g].1).collect();
        let surface = surface_from_parts(s, rot, &edge_origin)?;
        let mut face_origin = Vec::with_capacity(surface.n_faces());
        let mut perforated = Vec::new();
        for f in 0..surface.n_faces() {
            let mut origin = None;
            let mut cut = false;
            for &h in surface.face(f) {
                let lv = surface.origin(h);
                let reg = &regions[rs[lv]];
                let d = reg.half_edges.len();
                let gap = reg.gaps[(surface.rot_pos(h) + d - 1) % d];
                match gap {
                    Gap::Cut => cut = true,
                    Gap::Corner(of) => origin = Some(of),
                }
            }
            let fo = match (cut, origin) {
                (false, Some(of)) => FaceOrigin::Original(of),
                _ => FaceOrigin::Cut,
            };
            if match fo {
                FaceOrigin::Cut => true,
                FaceOrigin::Original(of) => s.is_perforated(of),
            } {
                perforated.push(f);
            }
            face_origin.push(fo);
        }
        let surface = surface.with_perforations(&perforated)?;
        let vertex_origin = rs.iter().map(|&r| region_vertex[r]).collect();
        pieces.push(Piece { surface, vertex_origin, edge_origin, edge_segment, face_origin });
    }

    for (curve, pass, t, is_left, region, point) in side_requests {
        let corner = region.map(|r| {
            let reg = &regions[r];
            let m = reg.items.len();
            let gap = (0..m).find(|&t| m == 1 || between(reg.items[t], point, reg.items[(t + 1) % m])).unwrap_or(0);
            PieceCorner { piece: region_comp[r], vertex: region_local[r], gap }
        });
        let list = &mut sides[curve][pass];
        if list.len() <= t {
            list.resize(t + 1, ChordSides { left: None, right: None });
        }
        if is_left {
            list[t].left = corner;
        } else {
            list[t].right = corner;
        }
    }

    let order = (0..n_e).map(|e| p.order(e).to_vec()).collect();
    Ok(CutResult { pieces, order, offset, seg_loc, sides })
}

/// Cuts along curves using their canonical perturbation.
pub fn cut_curves(s: &Surface, curves: &[Curve]) -> Result<CutResult> {
    let p = crate::curves::canonical_perturbation(s, curves)?;
    cut_along(s, &p)
}

/// Fills the given perforated faces with disks.
pub fn cap_boundaries(s: &Surface, faces: &[usize]) -> Result<Surface> {
    s.cap_boundaries(faces)
}

/// Maps a walk of the original surface that avoids the cut curves into the
/// cut surface. `curves` must be the family the cut was made along. Returns
/// `None` when the walk crosses the curves.
pub fn lift_walk(s: &Surface, cut: &CutResult, curves: &[Curve], hs: &[HalfEdge]) -> Result<Option<(usize, Vec<HalfEdge>)>> {
    let mut all = curves.to_vec();
    all.push(Curve::Closed(crate::curves::Walk::closed(hs.to_vec())));
    let p = crate::curves::canonical_perturbation(s, &all)?;
    let me = curves.len();
    let mut out = Vec::with_capacity(hs.len());
    let mut piece = None;
    for (i, &h) in hs.iter().enumerate() {
        let e = h.edge();
        let r = p.rank_along(me, i, HalfEdge::of_edge(e));
        let j = p.order(e)[..r].iter().filter(|o| o.curve != me).count();
        let (pc, pe) = cut.segment_location(e, j);
        if piece.is_some_and(|q| q != pc) {
            return Ok(None);
        }
        piece = Some(pc);
        out.push(HalfEdge(2 * pe + (h.0 & 1)));
    }
    let Some(pc) = piece else { return Ok(None) };
    let ps = &cut.pieces[pc].surface;
    let n = out.len();
    for i in 0..n {
        if ps.head(out[i]) != ps.origin(out[(i + 1) % n]) {
            return Ok(None);
        }
    }
    Ok(Some((pc, out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{Arc, ArcEnd, Walk};
    use crate::fixtures::{self, grid_column, grid_row};

    fn euler(p: &Piece) -> i64 {
        p.surface.euler_characteristic() - p.surface.n_boundaries() as i64
    }

    #[test]
    fn schema_along_a_is_an_annulus() {
        let q = fixtures::torus_schema();
        let cut = cut_curves(&q, &[Walk::closed(vec![HalfEdge(0)]).into()]).unwrap();
        assert_eq!(cut.n_pieces(), 1);
        let p = &cut.pieces[0];
        assert_eq!(p.surface.genus_and_boundaries(), (0, 2));
        assert_eq!(p.cut_faces().len(), 2);
        let (l, r) = cut.copy_faces(0);
        assert_eq!(l.len(), 1);
        assert_eq!(r.len(), 1);
        assert_ne!(l, r);
    }

    #[test]
    fn grid_row_and_column() {
        let t = fixtures::grid_torus(3, 3);
        let cut = cut_curves(&t, &[grid_row(3, 0).into()]).unwrap();
        assert_eq!(cut.n_pieces(), 1);
        assert_eq!(cut.pieces[0].surface.genus_and_boundaries(), (0, 2));
        let both = cut_curves(&t, &[grid_row(3, 0).into(), grid_column(3, 3, 0).into()]).unwrap();
        assert_eq!(both.n_pieces(), 1);
        let p = &both.pieces[0];
        assert_eq!(p.surface.genus_and_boundaries(), (0, 1));
        let f = p.cut_faces()[0];
        // the boundary consists of four copies of three segments
        assert_eq!(p.surface.face(f).len(), 12);
    }

    #[test]
    fn pants_along_essential_arc() {
        let p = fixtures::pants();
        let start = ArcEnd::at(&p, 0, fixtures::PANTS_AB_FACE).unwrap();
        let end = ArcEnd::at(&p, 1, fixtures::PANTS_AB_FACE).unwrap();
        let arc = Arc::new(vec![HalfEdge(4)], start, end);
        let cut = cut_curves(&p, &[arc.into()]).unwrap();
        // an arc from one boundary back to itself splits off two annuli
        assert_eq!(cut.n_pieces(), 2);
        for piece in &cut.pieces {
            assert_eq!(piece.surface.genus_and_boundaries(), (0, 2));
        }
    }

    #[test]
    fn separating_curve() {
        // the boundary-parallel curve a·b⁻¹ on the pants cuts off an annulus
        let p = fixtures::pants();
        let cut = cut_curves(&p, &[Walk::closed(vec![HalfEdge(0), HalfEdge(3)]).into()]).unwrap();
        assert_eq!(cut.n_pieces(), 2);
        let total: i64 = cut.pieces.iter().map(euler).sum();
        assert_eq!(total, p.euler_characteristic() - p.n_boundaries() as i64);
    }

    #[test]
    fn weights_preserved() {
        let t = fixtures::grid_torus_weighted(3, 4, |e| 1 + e as u64 % 3);
        let cut = cut_curves(&t, &[grid_row(4, 1).into(), grid_row(4, 1).into()]).unwrap();
        for p in &cut.pieces {
            for e in 0..p.surface.n_edges() {
                assert_eq!(p.surface.weight(e), t.weight(p.edge_origin[e]));
            }
        }
        // two parallel copies cut off an annulus between them
        assert_eq!(cut.n_pieces(), 2);
    }

    #[test]
    fn lifting_and_coarsening() {
        let t = fixtures::grid_torus(3, 3);
        let row0: Curve = grid_row(3, 0).into();
        let col0: Curve = grid_column(3, 3, 0).into();
        let fine = cut_curves(&t, &[row0.clone(), col0.clone()]).unwrap();
        let coarse = cut_curves(&t, &[row0.clone()]).unwrap();
        let row1 = grid_row(3, 1);
        let (pc, lifted) = lift_walk(&t, &coarse, &[row0.clone()], &row1.half_edges).unwrap().unwrap();
        assert_eq!(coarse.pieces[pc].to_original(&lifted), row1.half_edges);
        assert!(lift_walk(&t, &coarse, &[row0], &grid_column(3, 3, 1).half_edges).unwrap().is_none());
        let keep = [true, false];
        for e in 0..fine.pieces[0].surface.n_half_edges() {
            let h = HalfEdge(e);
            let (cp, ch) = fine.coarsen(&coarse, &keep, 0, h);
            assert_eq!(coarse.pieces[cp].original_half_edge(ch), fine.pieces[0].original_half_edge(h));
        }
    }

    #[test]
    fn sides_of_passes() {
        let t = fixtures::grid_torus(3, 3);
        let cut = cut_curves(&t, &[grid_row(3, 0).into()]).unwrap();
        let (l, r) = cut.copy_faces(0);
        assert_eq!((l.len(), r.len()), (1, 1));
        for pass in 0..3 {
            let cs = cut.pass_sides(0, pass);
            assert_eq!(cs.len(), 1);
            let (a, b) = (cs[0].left.unwrap(), cs[0].right.unwrap());
            assert_eq!(cut.pieces[a.piece].vertex_origin[a.vertex], pass);
            assert_eq!(cut.pieces[b.piece].vertex_origin[b.vertex], pass);
            assert_ne!(a.vertex, b.vertex);
            assert_eq!(cut.corner_face(a), l[0].1);
            assert_eq!(cut.corner_face(b), r[0].1);
        }
    }

    #[test]
    fn capping() {
        let t = fixtures::grid_torus_perforated(3, 3);
        assert_eq!(cap_boundaries(&t, &[0]).unwrap(), fixtures::grid_torus(3, 3));
        assert_eq!(cap_boundaries(&fixtures::pants(), &[2]).unwrap().genus_and_boundaries(), (0, 2));
        assert_eq!(cap_boundaries(&t, &[]).unwrap(), t);
        assert!(cap_boundaries(&t, &[1]).is_err());
    }
}
