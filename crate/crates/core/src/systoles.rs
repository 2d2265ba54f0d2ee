//! First, second and third systoles.
//!
//! Each systole is chosen from a pool of candidate closed walks produced by
//! the applicable branches of the case analysis: powers of the first
//! systole, curves disjoint from the lower systoles (found in the cut
//! surface and in its capping), shortest paths joining copies of a vertex
//! after cutting, paired paths crossing two systoles once each, and
//! concatenations of shortest essential arcs. The pool is sorted by length
//! and the first candidate whose class differs from the lower systoles is
//! returned, preferring representatives with the expected crossing pattern
//! among candidates of equal length.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::curves::{crossings_of, reduce_cycle, reverse_path, self_crossing_count, ArcEnd, Curve, Walk};
use crate::cutting::{cut_curves, CutResult, Piece, PieceCorner};
use crate::error::{Error, Result};
use crate::essential_arcs::{shortest_essential_arc, ArcTables};
use crate::homotopy::{is_peripheral_to, GroupPresentation, Word};
use crate::shortest_paths::{all_trees, mark_contractible_tree_loops, shortest_path_tree, tree_cycle, ShortestPathTree, INF};
use crate::surface::{HalfEdge, Len, Surface};
use crate::Rational;

/// Branch of the case analysis that produced a systole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    TreeLoop,
    Square,
    Cube,
    DisjointEssential,
    DisjointCapped,
    CrossingOnce,
    CrossingBoth,
    PantsArc,
    ArcPair,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::TreeLoop => "tree-loop",
            CaseTag::Square => "square",
            CaseTag::Cube => "cube",
            CaseTag::DisjointEssential => "disjoint-essential",
            CaseTag::DisjointCapped => "disjoint-capped",
            CaseTag::CrossingOnce => "crossing-once",
            CaseTag::CrossingBoth => "crossing-both",
            CaseTag::PantsArc => "pants-arc",
            CaseTag::ArcPair => "arc-pair",
        }
    }
    pub fn power(self) -> u32 {
        match self {
            CaseTag::Square => 2,
            CaseTag::Cube => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystoleReport {
    pub k: usize,
    pub walk: Walk,
    #[serde(skip)]
    pub length: Rational,
    pub units: Len,
    pub case: CaseTag,
    pub self_crossings: usize,
    /// Crossings with each lower systole, in order.
    pub crossings: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Cand {
    units: Len,
    case: CaseTag,
    hs: Vec<HalfEdge>,
}

impl Cand {
    fn new(s: &Surface, case: CaseTag, hs: Vec<HalfEdge>) -> Option<Cand> {
        let hs = if case.power() > 1 { hs } else { reduce_cycle(&hs) };
        if hs.is_empty() {
            return None;
        }
        Some(Cand { units: s.path_len(&hs), case, hs })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Free,
    Torus,
    Sphere,
    Hyperbolic,
}

/// Class comparison with exact certificates where the group allows them.
struct Classes {
    gp: GroupPresentation,
    kind: Kind,
}

#[derive(Debug, Clone)]
struct Known {
    hs: Vec<HalfEdge>,
    power: u32,
    key: Option<Word>,
    hom: Vec<i64>,
}

impl Classes {
    fn new(s: &Surface) -> Classes {
        let kind = if s.has_boundary() {
            Kind::Free
        } else {
            match s.genus() {
                0 => Kind::Sphere,
                1 => Kind::Torus,
                _ => Kind::Hyperbolic,
            }
        };
        Classes { gp: GroupPresentation::new(s), kind }
    }

    fn known(&self, hs: &[HalfEdge], power: u32) -> Known {
        let key = (self.kind == Kind::Free).then(|| self.gp.unoriented_key(hs).expect("free group"));
        Known { hs: hs.to_vec(), power, key, hom: self.gp.unoriented_homology(hs) }
    }

    fn contractible(&self, hs: &[HalfEdge]) -> bool {
        self.gp.is_contractible(hs)
    }

    /// Whether two curves are certainly freely homotopic up to orientation.
    /// On closed surfaces of genus two or more, curves that no certificate
    /// separates are treated as distinct.
    fn same(&self, a: &Known, b: &Known) -> bool {
        match self.kind {
            Kind::Free => a.key == b.key,
            Kind::Torus => a.hom == b.hom,
            Kind::Sphere => true,
            Kind::Hyperbolic => {
                if a.hom != b.hom {
                    return false;
                }
                if a.power > 1 || b.power > 1 {
                    return a.power == b.power;
                }
                same_cycle(&a.hs, &b.hs)
            }
        }
    }
}

fn same_cycle(a: &[HalfEdge], b: &[HalfEdge]) -> bool {
    let a = reduce_cycle(a);
    let b = reduce_cycle(b);
    if a.len() != b.len() {
        return false;
    }
    let rb = reverse_path(&b);
    let n = a.len();
    (0..n).any(|r| (0..n).all(|i| a[(i + r) % n] == b[i]) || (0..n).all(|i| a[(i + r) % n] == rb[i]))
}

/// Shortest non-contractible tree cycle through each source vertex that
/// has one, sorted by length.
fn tree_cycles(s: &Surface) -> Vec<(Len, Vec<HalfEdge>)> {
    if !s.has_boundary() && s.genus() == 0 {
        return Vec::new();
    }
    let mut out: Vec<(Len, usize, Vec<HalfEdge>)> = all_trees(s)
        .iter()
        .filter_map(|t| {
            let cl = mark_contractible_tree_loops(s, t);
            let best = (0..s.n_edges())
                .filter(|&e| !cl.contractible(e))
                .map(|e| HalfEdge::of_edge(e))
                .filter(|&h| t.dist[s.origin(h)] != INF && t.dist[s.head(h)] != INF)
                .min_by_key(|&h| (t.loop_len(s, h), h.edge()))?;
            let hs = tree_cycle(s, t, best);
            Some((s.path_len(&hs), t.source, hs))
        })
        .collect();
    out.sort();
    out.into_iter().map(|(l, _, hs)| (l, hs)).collect()
}

/// Whether every non-contractible curve of `x` is homotopic to one of the
/// `excluded` boundaries.
fn all_excluded(x: &Surface, excluded: &[usize]) -> bool {
    let (g, b) = x.genus_and_boundaries();
    g == 0 && (b <= 1 || (b == 2 && !excluded.is_empty()) || (b == 3 && excluded.len() == 3))
}

/// Shortest cycles of `x` that are neither contractible nor homotopic to
/// one of the `excluded` boundary faces, with all ties at the minimum
/// length (at most `max_ties`).
fn essential_cycles(x: &Surface, excluded: &[usize], max_ties: usize) -> Vec<(Len, Vec<HalfEdge>)> {
    if !x.has_boundary() {
        let mut t = tree_cycles(x);
        if let Some(&(l, _)) = t.first() {
            t.retain(|c| c.0 == l);
        }
        t.truncate(max_ties);
        return t;
    }
    if all_excluded(x, excluded) {
        return Vec::new();
    }
    let gp = GroupPresentation::new(x);
    cycles_by(x, |hs| !gp.is_contractible(hs) && !is_peripheral_to(x, &gp, hs, excluded), max_ties)
}

/// Shortest cycles of the form `e·σ` or `e·σ·e'·σ'` (σ shortest paths)
/// accepted by `accept`, with all ties at the minimum (at most `max_ties`).
fn cycles_by(x: &Surface, accept: impl Fn(&[HalfEdge]) -> bool, max_ties: usize) -> Vec<(Len, Vec<HalfEdge>)> {
    let trees = all_trees(x);
    let nh = x.n_half_edges();
    let d = |u: usize, v: usize| trees[u].dist[v];
    let mut order: Vec<(Len, usize, usize)> = Vec::new();
    for a in 0..nh {
        let ha = HalfEdge(a);
        let (ua, va) = (x.origin(ha), x.head(ha));
        if d(va, ua) != INF {
            order.push((x.len_of(ha) + d(va, ua), a, usize::MAX));
        }
        for b in 0..nh {
            let hb = HalfEdge(b);
            let (ub, vb) = (x.origin(hb), x.head(hb));
            let (p, q) = (d(va, ub), d(vb, ua));
            if p != INF && q != INF {
                order.push((x.len_of(ha) + p + x.len_of(hb) + q, a, b));
            }
        }
    }
    order.sort_unstable();
    let path = |u: usize, v: usize| trees[u].path_to(x, v);
    let mut out = Vec::new();
    let mut found: Option<Len> = None;
    for (l, a, b) in order {
        if found.is_some_and(|f| l > f) || out.len() >= max_ties {
            break;
        }
        let ha = HalfEdge(a);
        let mut hs = vec![ha];
        if b == usize::MAX {
            hs.extend(path(x.head(ha), x.origin(ha)));
        } else {
            let hb = HalfEdge(b);
            hs.extend(path(x.head(ha), x.origin(hb)));
            hs.push(hb);
            hs.extend(path(x.head(hb), x.origin(ha)));
        }
        let hs = reduce_cycle(&hs);
        if hs.is_empty() || !accept(&hs) {
            continue;
        }
        let l = x.path_len(&hs);
        if found.is_none_or(|f| l <= f) {
            found = Some(l);
            out.push((l, hs));
        }
    }
    if let Some(f) = found {
        out.retain(|c| c.0 == f);
    }
    out
}

fn disjoint_candidates(s: &Surface, cut: &CutResult, out: &mut Vec<Cand>) {
    for piece in &cut.pieces {
        for (_, hs) in essential_cycles(&piece.surface, &piece.cut_faces(), 16) {
            out.extend(Cand::new(s, CaseTag::DisjointEssential, piece.to_original(&hs)));
        }
        for (_, hs) in tree_cycles(&piece.capped()) {
            out.extend(Cand::new(s, CaseTag::DisjointCapped, piece.to_original(&hs)));
        }
    }
}

/// Shortest paths between copies of the same vertex in one piece, closed
/// up in the original surface.
fn copy_pair_candidates(s: &Surface, cut: &CutResult, case: CaseTag, out: &mut Vec<Cand>) {
    for piece in &cut.pieces {
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (v, &o) in piece.vertex_origin.iter().enumerate() {
            groups.entry(o).or_default().push(v);
        }
        let mut keys: Vec<usize> = groups.keys().copied().collect();
        keys.sort_unstable();
        let ps = &piece.surface;
        for o in keys {
            let g = &groups[&o];
            if g.len() < 2 {
                continue;
            }
            let trees: Vec<ShortestPathTree> = g.iter().map(|&a| shortest_path_tree(ps, a)).collect();
            for (i, ta) in trees.iter().enumerate() {
                for (tb, &b) in trees[i + 1..].iter().zip(&g[i + 1..]) {
                    if ta.dist[b] == INF {
                        continue;
                    }
                    out.extend(Cand::new(s, case, piece.to_original(&ta.path_to(ps, b))));
                    for h in (0..2 * ps.n_edges()).map(HalfEdge) {
                        let (x, y) = (ps.origin(h), ps.head(h));
                        if ta.dist[x] == INF || tb.dist[y] == INF {
                            continue;
                        }
                        let mut hs = ta.path_to(ps, x);
                        hs.push(h);
                        hs.extend(tb.path_from(ps, y));
                        out.extend(Cand::new(s, case, piece.to_original(&hs)));
                    }
                }
            }
        }
    }
}

fn corners_of(cut: &CutResult, curve: usize) -> Vec<(usize, usize, PieceCorner, PieceCorner)> {
    let mut out = Vec::new();
    for p in 0..cut.n_passes(curve) {
        for (t, cs) in cut.pass_sides(curve, p).iter().enumerate() {
            if let (Some(l), Some(r)) = (cs.left, cs.right) {
                out.push((p, t, l, r));
            }
        }
    }
    out
}

/// Pairs of paths joining the two sides of one curve to the two sides of
/// another, giving cycles that cross each exactly once.
fn paired_candidates(s: &Surface, cut: &CutResult, out: &mut Vec<Cand>) {
    let c1 = corners_of(cut, 0);
    let c2 = corners_of(cut, 1);
    let mut trees: HashMap<(usize, usize), ShortestPathTree> = HashMap::new();
    for &(_, _, l, r) in &c1 {
        for c in [l, r] {
            trees.entry((c.piece, c.vertex)).or_insert_with(|| shortest_path_tree(&cut.pieces[c.piece].surface, c.vertex));
        }
    }
    let dist = |a: PieceCorner, b: PieceCorner| -> Len {
        if a.piece != b.piece {
            return INF;
        }
        trees[&(a.piece, a.vertex)].dist[b.vertex]
    };
    let mut best: Vec<(Len, PieceCorner, PieceCorner, PieceCorner, PieceCorner)> = Vec::new();
    for &(_, _, l1, r1) in &c1 {
        for &(_, _, l2, r2) in &c2 {
            for (a, a2) in [(l1, r1), (r1, l1)] {
                for (b, b2) in [(l2, r2), (r2, l2)] {
                    let (x, y) = (dist(a, b), dist(a2, b2));
                    if x != INF && y != INF {
                        best.push((x + y, a, b, a2, b2));
                    }
                }
            }
        }
    }
    best.sort_by_key(|b| (b.0, b.1.piece, b.1.vertex, b.1.gap, b.2.vertex, b.2.gap));
    let Some(&(min, ..)) = best.first() else { return };
    for &(l, a, b, a2, b2) in best.iter().take_while(|b| b.0 == min).take(16) {
        let _ = l;
        let p = &cut.pieces[a.piece];
        let q = &cut.pieces[a2.piece];
        let mut hs = p.to_original(&trees[&(a.piece, a.vertex)].path_to(&p.surface, b.vertex));
        hs.extend(reverse_path(&q.to_original(&trees[&(a2.piece, a2.vertex)].path_to(&q.surface, b2.vertex))));
        out.extend(Cand::new(s, CaseTag::CrossingBoth, hs));
    }
}

fn arc_end(piece: &Piece, c: PieceCorner) -> ArcEnd {
    ArcEnd { vertex: c.vertex, face: piece.surface.corner_face(c.vertex, c.gap), corner: c.gap }
}

/// A path `p` joining the two sides of `l1` inside the piece bounded by
/// both copies, then shortest essential arcs joining the two copies of each
/// vertex of `p` after cutting along `l1` and `p`.
fn pants_arc_candidates(s: &Surface, l1: &Walk, cut12: &CutResult, out: &mut Vec<Cand>) -> Result<()> {
    let Some(&(_, _, l, r)) = corners_of(cut12, 0).first() else { return Ok(()) };
    if l.piece != r.piece {
        return Ok(());
    }
    let piece = &cut12.pieces[l.piece];
    let t = shortest_path_tree(&piece.surface, l.vertex);
    if t.dist[r.vertex] == INF {
        return Ok(());
    }
    let p = piece.to_original(&t.path_to(&piece.surface, r.vertex));
    if p.is_empty() {
        return Ok(());
    }
    let cut = cut_curves(s, &[l1.clone().into(), Walk::closed(p).into()])?;
    for (_, _, a, b) in corners_of(&cut, 1) {
        if a.piece != b.piece || a.vertex == b.vertex {
            continue;
        }
        let pc = &cut.pieces[a.piece];
        if let Some(arc) = shortest_essential_arc(&pc.surface, arc_end(pc, a), arc_end(pc, b))? {
            out.extend(Cand::new(s, CaseTag::PantsArc, pc.to_original(&arc.walk.half_edges)));
        }
    }
    Ok(())
}

/// Concatenations of essential arcs joining copies of two vertices of `l2`
/// on each of its two sides.
fn arc_pair_candidates(s: &Surface, cut12: &CutResult, out: &mut Vec<Cand>) -> Result<()> {
    let corners = corners_of(cut12, 1);
    let Some(&(_, _, l0, r0)) = corners.first() else { return Ok(()) };
    let face_of = |c: PieceCorner| cut12.corner_face(c);
    let (fl, fr) = (face_of(l0), face_of(r0));
    if (l0.piece, fl) == (r0.piece, fr) {
        return Ok(());
    }
    if cut12.pieces[l0.piece].surface.face(fl).len() < 2 || cut12.pieces[r0.piece].surface.face(fr).len() < 2 {
        return Ok(());
    }
    let tl = ArcTables::build(&cut12.pieces[l0.piece].surface, fl)?;
    let tr = ArcTables::build(&cut12.pieces[r0.piece].surface, fr)?;
    let index = |c: PieceCorner, piece: usize, face: usize| -> Option<usize> {
        let ps = &cut12.pieces[c.piece].surface;
        let (f, k) = ps.corner_occurrence(c.vertex, c.gap);
        (c.piece == piece && f == face).then_some(k)
    };
    let sides: Vec<(usize, usize)> =
        corners.iter().filter_map(|&(_, _, l, r)| Some((index(l, l0.piece, fl)?, index(r, r0.piece, fr)?))).collect();
    let query = |t: &ArcTables, piece: usize, i: usize, j: usize| -> Option<Vec<HalfEdge>> {
        let ps = &cut12.pieces[piece];
        let (a, b) = (i.min(j), i.max(j));
        let arc = t.query(&ps.surface, a, b).ok()??;
        let hs = ps.to_original(&arc.walk.half_edges);
        Some(if i <= j { hs } else { reverse_path(&hs) })
    };
    let mut best: Vec<Cand> = Vec::new();
    for (x, &(il, ir)) in sides.iter().enumerate() {
        for &(jl, jr) in &sides[x + 1..] {
            let Some(g) = query(&tl, l0.piece, il, jl) else { continue };
            let Some(g2) = query(&tr, r0.piece, ir, jr) else { continue };
            let mut hs = g2;
            hs.extend(reverse_path(&g));
            if let Some(c) = Cand::new(s, CaseTag::ArcPair, hs) {
                best.push(c);
            }
        }
    }
    best.sort_by(|a, b| (a.units, &a.hs).cmp(&(b.units, &b.hs)));
    if let Some(min) = best.first().map(|c| c.units) {
        out.extend(best.into_iter().take_while(|c| c.units == min).take(16));
    }
    Ok(())
}

fn report(s: &Surface, k: usize, c: &Cand, lower: &[Walk]) -> Result<SystoleReport> {
    let walk = Walk::closed(c.hs.clone());
    let me = Curve::from(walk.clone());
    let crossings = lower
        .iter()
        .map(|l| Ok(crossings_of(s, &[l.clone().into(), me.clone()])?.pair_crossings(0, 1)))
        .collect::<Result<Vec<usize>>>()?;
    Ok(SystoleReport {
        k,
        length: s.to_rational(c.units),
        units: c.units,
        case: c.case,
        self_crossings: self_crossing_count(s, &me)?,
        crossings,
        walk,
    })
}

fn structured(r: &SystoleReport, c: &Cand) -> bool {
    if c.case.power() > 1 {
        return true;
    }
    let limits = [1usize, 2];
    r.self_crossings == 0 && r.crossings.iter().zip(limits).all(|(&x, l)| x <= l)
}

/// Picks the shortest candidate whose class differs from all lower
/// systoles, preferring the expected crossing pattern among ties.
fn select(s: &Surface, classes: &Classes, k: usize, lower: &[(Walk, u32)], mut pool: Vec<Cand>) -> Result<SystoleReport> {
    pool.sort_by(|a, b| (a.units, a.case.power() > 1, a.case, &a.hs).cmp(&(b.units, b.case.power() > 1, b.case, &b.hs)));
    let lower_known: Vec<Known> = lower.iter().map(|(w, p)| classes.known(&w.half_edges, *p)).collect();
    let lower_walks: Vec<Walk> = lower.iter().map(|(w, _)| w.clone()).collect();
    let mut first: Option<SystoleReport> = None;
    let mut checked = 0;
    for c in &pool {
        if first.as_ref().is_some_and(|f| c.units > f.units) || checked >= 64 {
            break;
        }
        if classes.contractible(&c.hs) {
            continue;
        }
        let kn = classes.known(&c.hs, c.case.power());
        if lower_known.iter().any(|l| classes.same(l, &kn)) {
            continue;
        }
        checked += 1;
        let r = report(s, k, c, &lower_walks)?;
        if structured(&r, c) {
            return Ok(r);
        }
        first.get_or_insert(r);
    }
    first.ok_or_else(|| Error::Nonexistent(format!("the surface has fewer than {k} non-trivial classes")))
}

/// A shortest non-contractible closed walk.
pub fn first_systole(s: &Surface) -> Result<SystoleReport> {
    let classes = Classes::new(s);
    if classes.kind == Kind::Sphere {
        return Err(Error::Nonexistent("every closed curve on a sphere is contractible".into()));
    }
    let pool: Vec<Cand> = tree_cycles(s).into_iter().filter_map(|(_, hs)| Cand::new(s, CaseTag::TreeLoop, hs)).collect();
    select(s, &classes, 1, &[], pool)
}

/// A shortest cycle that is neither contractible nor homotopic to a
/// boundary component, or `None` when no such simple cycle exists.
pub fn shortest_essential_cycle(s: &Surface) -> Result<Option<SystoleReport>> {
    let Some((_, hs)) = essential_cycles(s, &s.perforated_faces(), 16).into_iter().min_by_key(|(_, hs)| crossings_of(s, &[Walk::closed(hs.clone()).into()]).map(|r| r.total()).unwrap_or(usize::MAX)) else {
        return Ok(None);
    };
    let c = Cand::new(s, CaseTag::DisjointEssential, hs).expect("essential cycles are non-empty");
    Ok(Some(report(s, 1, &c, &[])?))
}

/// A shortest cycle crossing the weakly simple non-separating curve `l`
/// exactly once.
pub fn shortest_cycle_crossing_once(s: &Surface, l: &Walk) -> Result<SystoleReport> {
    l.validate(s)?;
    let cut = cut_curves(s, &[l.clone().into()])?;
    if cut.n_pieces() != 1 {
        return Err(Error::InvalidArgument("the curve separates the surface".into()));
    }
    let mut pool = Vec::new();
    copy_pair_candidates(s, &cut, CaseTag::CrossingOnce, &mut pool);
    pool.sort_by(|a, b| (a.units, &a.hs).cmp(&(b.units, &b.hs)));
    for c in &pool {
        let r = report(s, 2, c, std::slice::from_ref(l))?;
        if r.crossings[0] == 1 && crate::curves::algebraic_intersection_number(s, &r.walk, l)?.abs() == 1 {
            return Ok(r);
        }
    }
    Err(Error::Nonexistent("no cycle crosses the curve exactly once".into()))
}

fn second_pool(s: &Surface, l1: &Walk) -> Result<(Vec<Cand>, CutResult)> {
    let mut pool = Vec::new();
    pool.extend(Cand::new(s, CaseTag::Square, l1.power(2).half_edges));
    let cut1 = cut_curves(s, &[l1.clone().into()])?;
    disjoint_candidates(s, &cut1, &mut pool);
    copy_pair_candidates(s, &cut1, CaseTag::CrossingOnce, &mut pool);
    Ok((pool, cut1))
}

/// First, second and third systoles, as far as `k`.
pub fn systoles(s: &Surface, k: usize) -> Result<Vec<SystoleReport>> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!("k must be 1, 2 or 3, got {k}")));
    }
    let classes = Classes::new(s);
    let r1 = first_systole(s)?;
    let l1 = r1.walk.clone();
    let mut out = vec![r1];
    if k == 1 {
        return Ok(out);
    }
    let (pool2, cut1) = second_pool(s, &l1)?;
    let r2 = select(s, &classes, 2, &[(l1.clone(), 1)], pool2.clone())?;
    let l2 = r2.walk.clone();
    let p2 = r2.case.power();
    out.push(r2);
    if k == 2 {
        return Ok(out);
    }
    let mut pool3 = Vec::new();
    pool3.extend(Cand::new(s, CaseTag::Square, l1.power(2).half_edges));
    pool3.extend(Cand::new(s, CaseTag::Cube, l1.power(3).half_edges));
    if p2 > 1 {
        pool3.extend(pool2.into_iter().filter(|c| c.case.power() == 1));
    } else {
        let cut2 = cut_curves(s, &[l2.clone().into()])?;
        let cut12 = cut_curves(s, &[l1.clone().into(), l2.clone().into()])?;
        disjoint_candidates(s, &cut12, &mut pool3);
        let lower = [classes.known(&l1.half_edges, 1), classes.known(&l2.half_edges, 1)];
        for piece in &cut12.pieces {
            let accept = |hs: &[HalfEdge]| {
                let o = piece.to_original(hs);
                !classes.contractible(&o) && {
                    let k = classes.known(&o, 1);
                    lower.iter().all(|l| !classes.same(l, &k))
                }
            };
            for (_, hs) in cycles_by(&piece.surface, accept, 16) {
                pool3.extend(Cand::new(s, CaseTag::DisjointEssential, piece.to_original(&hs)));
            }
        }
        copy_pair_candidates(s, &cut1, CaseTag::CrossingOnce, &mut pool3);
        copy_pair_candidates(s, &cut2, CaseTag::CrossingOnce, &mut pool3);
        copy_pair_candidates(s, &cut12, CaseTag::CrossingOnce, &mut pool3);
        let crossing = crossings_of(s, &[l1.clone().into(), l2.clone().into()])?.pair_crossings(0, 1);
        if crossing > 0 {
            paired_candidates(s, &cut12, &mut pool3);
        } else {
            let sep1 = cut1.n_pieces() > 1;
            let sep2 = cut2.n_pieces() > 1;
            if sep2 && !sep1 {
                pants_arc_candidates(s, &l1, &cut12, &mut pool3)?;
            }
            if !sep1 && !sep2 {
                arc_pair_candidates(s, &cut12, &mut pool3)?;
            }
        }
    }
    let r3 = select(s, &classes, 3, &[(l1, 1), (l2, p2)], pool3)?;
    out.push(r3);
    Ok(out)
}

pub fn second_systole(s: &Surface) -> Result<SystoleReport> {
    Ok(systoles(s, 2)?.pop().expect("two reports"))
}

pub fn third_systole(s: &Surface) -> Result<SystoleReport> {
    Ok(systoles(s, 3)?.pop().expect("three reports"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::algebraic_intersection_number;
    use crate::fixtures::{self, grid_row};

    fn lengths(s: &Surface) -> Vec<Len> {
        systoles(s, 3).unwrap().iter().map(|r| r.units).collect()
    }

    #[test]
    fn schema() {
        assert_eq!(lengths(&fixtures::torus_schema()), vec![1, 1, 2]);
    }

    #[test]
    fn grid() {
        let t = fixtures::grid_torus(3, 3);
        let rs = systoles(&t, 3).unwrap();
        assert_eq!(rs.iter().map(|r| r.units).collect::<Vec<_>>(), vec![3, 3, 6]);
        let gp = GroupPresentation::new(&t);
        let h: Vec<Vec<i64>> = rs.iter().map(|r| gp.unoriented_homology(&r.walk.half_edges)).collect();
        assert!(h[0] != h[1] && h[1] != h[2] && h[0] != h[2]);
    }

    #[test]
    fn pants() {
        let p = fixtures::pants();
        assert_eq!(first_systole(&p).unwrap().units, 3);
        assert_eq!(lengths(&p), vec![3, 4, 5]);
        assert!(shortest_essential_cycle(&p).unwrap().is_none());
    }

    #[test]
    fn annulus_powers() {
        let a = fixtures::annulus();
        let rs = systoles(&a, 3).unwrap();
        let l = rs[0].units;
        assert_eq!(rs.iter().map(|r| r.units).collect::<Vec<_>>(), vec![l, 2 * l, 3 * l]);
        assert_eq!(rs[2].case, CaseTag::Cube);
    }

    #[test]
    fn essential_cycle_on_perforated_grid() {
        let t = fixtures::grid_torus_perforated(3, 4);
        assert_eq!(shortest_essential_cycle(&t).unwrap().unwrap().units, 3);
        assert_eq!(shortest_essential_cycle(&fixtures::torus_schema()).unwrap().unwrap().units, 1);
    }

    #[test]
    fn crossing_once() {
        let q = fixtures::torus_schema();
        let r = shortest_cycle_crossing_once(&q, &Walk::closed(vec![HalfEdge(0)])).unwrap();
        assert_eq!(r.units, 1);
        let t = fixtures::grid_torus(3, 3);
        let row = grid_row(3, 0);
        let r = shortest_cycle_crossing_once(&t, &row).unwrap();
        assert_eq!(r.units, 3);
        assert_eq!(algebraic_intersection_number(&t, &r.walk, &row).unwrap().abs(), 1);
    }

    #[test]
    fn sphere_has_no_systole() {
        let t = fixtures::grid_torus(3, 3);
        let disk = t.dual().dual();
        assert!(first_systole(&disk).is_ok());
        let sphere = Surface::build(vec![vec![HalfEdge(0)], vec![HalfEdge(1)]], vec![Rational::from_integer(1.into())], &[]).unwrap();
        assert!(matches!(first_systole(&sphere), Err(Error::Nonexistent(_))));
    }

    #[test]
    fn short_handle() {
        // one handle loop of weight 1, everything else heavy
        let g = fixtures::genus_two_schema([1, 100, 100, 100]);
        let rs = systoles(&g, 2).unwrap();
        assert_eq!(rs[0].units, 1);
        assert_eq!(rs[1].units, 2);
        assert_eq!(rs[1].case, CaseTag::Square);
    }
}
